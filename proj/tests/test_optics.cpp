#include "doctest.h"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "dcqkd/optics.hpp"
#include "dcqkd/random.hpp"

using namespace dcqkd;
using optics::Amp;
using optics::DetectionEvent;
using optics::PhotonState;
using optics::RouteLabel;
using optics::Unitary2;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

bool amp_close(Amp x, Amp y, double tol = 1e-12) { return std::abs(x - y) <= tol; }

// Random present state from two angles; covers the whole Bloch sphere.
PhotonState random_state(RandomStream& rng) {
    const double theta = rng.uniform01() * 3.14159265358979323846;
    const double phi = rng.uniform01() * 2.0 * 3.14159265358979323846;
    const Amp a = std::cos(theta / 2.0);
    const Amp b = std::polar(std::sin(theta / 2.0), phi);
    return PhotonState::normalized(a, b);
}

} // namespace

TEST_CASE("route preparation puts all intensity on one route") {
    const PhotonState a = optics::prepare_route(RouteLabel::A);
    CHECK(a.amp_a() == Amp(1.0, 0.0));
    CHECK(a.amp_b() == Amp(0.0, 0.0));

    const PhotonState b = optics::prepare_route(RouteLabel::B);
    CHECK(b.amp_a() == Amp(0.0, 0.0));
    CHECK(b.amp_b() == Amp(1.0, 0.0));
}

TEST_CASE("sender splitter state is the fixed equal superposition") {
    const PhotonState s = optics::alice_splitter_state();
    CHECK(s.amp_a() == Amp(kInvSqrt2, 0.0));
    CHECK(s.amp_b() == Amp(0.0, kInvSqrt2));
}

TEST_CASE("receiver splitter undoes the sender splitter") {
    // Mode b empties exactly: its two cross terms are the same product with
    // opposite signs. Mode a only lands within an ulp of 1 (fl(1/sqrt2)^2 is
    // a hair under 0.5), but the relative-weight distribution is still exact,
    // so detector 2 stays dark deterministically.
    const PhotonState out = optics::apply_bob_splitter(optics::alice_splitter_state());
    CHECK(out.amp_b() == Amp(0.0, 0.0));
    CHECK(out.amp_a().imag() == 0.0);
    CHECK(out.amp_a().real() == doctest::Approx(1.0).epsilon(1e-15));

    const auto dist = optics::exact_distribution(out);
    CHECK(dist.p_det1 == 1.0);
    CHECK(dist.p_det2 == 0.0);
}

TEST_CASE("receiver splitter maps route a to an equal split") {
    const PhotonState out = optics::apply_bob_splitter(optics::prepare_route(RouteLabel::A));
    CHECK(out.amp_a() == Amp(kInvSqrt2, 0.0));
    CHECK(out.amp_b() == Amp(0.0, -kInvSqrt2));

    const auto dist = optics::exact_distribution(out);
    CHECK(dist.p_det1 == 0.5);
    CHECK(dist.p_det2 == 0.5);
    CHECK(dist.p_noclick == 0.0);
}

TEST_CASE("splitter composition is the identity on random states") {
    RandomStream rng(404);
    for (int i = 0; i < 200; ++i) {
        const PhotonState in = random_state(rng);
        const PhotonState out =
            optics::bob_splitter().apply(optics::alice_splitter().apply(in));
        CHECK(amp_close(out.amp_a(), in.amp_a()));
        CHECK(amp_close(out.amp_b(), in.amp_b()));
    }
}

TEST_CASE("splitters preserve norm on random states") {
    RandomStream rng(405);
    for (int i = 0; i < 200; ++i) {
        const PhotonState in = random_state(rng);
        for (const auto* u : {&optics::alice_splitter(), &optics::bob_splitter()}) {
            const PhotonState out = u->apply(in);
            const double norm = std::norm(out.amp_a()) + std::norm(out.amp_b());
            CHECK(std::abs(norm - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("global phase does not change detection statistics") {
    RandomStream rng(406);
    for (int i = 0; i < 100; ++i) {
        const PhotonState in = random_state(rng);
        const Amp phase = std::polar(1.0, rng.uniform01() * 6.283185307179586);
        const PhotonState rotated =
            PhotonState::normalized(in.amp_a() * phase, in.amp_b() * phase);

        const auto d1 = optics::exact_distribution(optics::apply_bob_splitter(in));
        const auto d2 = optics::exact_distribution(optics::apply_bob_splitter(rotated));
        CHECK(d1.p_det1 == doctest::Approx(d2.p_det1).epsilon(1e-12));
        CHECK(d1.p_det2 == doctest::Approx(d2.p_det2).epsilon(1e-12));
    }
}

TEST_CASE("unitary constructor rejects non-unitary matrices") {
    CHECK_THROWS_AS(Unitary2(1.0, 0.0, 0.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(Unitary2(1.0, 1.0, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("adjoint of the receiver splitter is the sender splitter") {
    const Unitary2 adj = optics::bob_splitter().adjoint();
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            CHECK(amp_close(adj.at(r, c), optics::alice_splitter().at(r, c)));
        }
    }
}

TEST_CASE("present state validation") {
    CHECK_THROWS_AS(PhotonState::present(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(PhotonState::present(0.1, 0.1), std::invalid_argument);
    const double nan = std::nan("");
    CHECK_THROWS_AS(PhotonState::present(nan, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(PhotonState::normalized(0.0, 0.0), std::invalid_argument);

    const PhotonState rescaled = PhotonState::normalized(3.0, 4.0);
    CHECK(amp_close(rescaled.amp_a(), Amp(0.6, 0.0)));
    CHECK(amp_close(rescaled.amp_b(), Amp(0.8, 0.0)));
}

TEST_CASE("lost states refuse amplitude access and pass through unitaries") {
    const PhotonState lost = PhotonState::lost();
    CHECK(lost.is_lost());
    CHECK_THROWS_AS((void)lost.amp_a(), std::logic_error);
    CHECK_THROWS_AS((void)lost.amp_b(), std::logic_error);
    CHECK(optics::alice_splitter().apply(lost).is_lost());
    CHECK(optics::apply_bob_splitter(lost).is_lost());
}

TEST_CASE("loss at the endpoints is deterministic") {
    RandomStream rng(31);
    const PhotonState in = optics::prepare_route(RouteLabel::A);
    for (int i = 0; i < 500; ++i) {
        CHECK_FALSE(optics::apply_loss(in, 0.0, rng).is_lost());
        CHECK(optics::apply_loss(in, 1.0, rng).is_lost());
    }
    CHECK(optics::apply_loss(PhotonState::lost(), 0.0, rng).is_lost());
}

TEST_CASE("loss rejects probabilities outside the unit interval") {
    RandomStream rng(32);
    const PhotonState in = optics::prepare_route(RouteLabel::A);
    CHECK_THROWS_AS((void)optics::apply_loss(in, -0.1, rng), std::invalid_argument);
    CHECK_THROWS_AS((void)optics::apply_loss(in, 1.1, rng), std::invalid_argument);
    CHECK_THROWS_AS((void)optics::apply_loss(in, std::nan(""), rng), std::invalid_argument);
}

TEST_CASE("loss rate within 5 sigma of p") {
    RandomStream rng(33);
    const PhotonState in = optics::alice_splitter_state();
    const int n = 100000;
    const double p = 0.3;
    int lost = 0;
    for (int i = 0; i < n; ++i) {
        if (optics::apply_loss(in, p, rng).is_lost()) ++lost;
    }
    const double sigma = std::sqrt(n * p * (1.0 - p));
    CHECK(std::abs(lost - n * p) <= 5.0 * sigma);
}

TEST_CASE("measurement on basis states is deterministic") {
    RandomStream rng(34);
    for (int i = 0; i < 500; ++i) {
        CHECK(optics::measure_detectors(optics::prepare_route(RouteLabel::A), rng) ==
              DetectionEvent::Detector1);
        CHECK(optics::measure_detectors(optics::prepare_route(RouteLabel::B), rng) ==
              DetectionEvent::Detector2);
        CHECK(optics::measure_detectors(PhotonState::lost(), rng) == DetectionEvent::NoClick);
    }
}

TEST_CASE("both splitters force detector 1 on every round") {
    RandomStream rng(35);
    for (int i = 0; i < 100000; ++i) {
        const PhotonState out = optics::apply_bob_splitter(optics::alice_splitter_state());
        CHECK(optics::measure_detectors(out, rng) == DetectionEvent::Detector1);
    }
}

TEST_CASE("one-splitter intensities give a fair detector coin") {
    RandomStream rng(36);
    const int n = 100000;
    int det1 = 0;
    for (int i = 0; i < n; ++i) {
        const PhotonState out = optics::apply_bob_splitter(optics::prepare_route(RouteLabel::A));
        if (optics::measure_detectors(out, rng) == DetectionEvent::Detector1) ++det1;
    }
    const double sigma = std::sqrt(n * 0.25);
    CHECK(std::abs(det1 - n * 0.5) <= 5.0 * sigma);
}

TEST_CASE("exact distribution sums to one") {
    RandomStream rng(37);
    for (int i = 0; i < 200; ++i) {
        const auto dist = optics::exact_distribution(random_state(rng));
        CHECK(dist.p_det1 + dist.p_det2 + dist.p_noclick == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(dist.p_noclick == 0.0);
    }
    const auto lost = optics::exact_distribution(PhotonState::lost());
    CHECK(lost.p_det1 == 0.0);
    CHECK(lost.p_det2 == 0.0);
    CHECK(lost.p_noclick == 1.0);
}
