#include "dcqkd/protocol.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

#include <boost/math/distributions/binomial.hpp>

namespace dcqkd::protocol {

using adversary::EveStrategy;
using optics::DetectionEvent;
using optics::PhotonState;
using optics::RouteLabel;

std::string SiftedKey::to_bit_string() const {
    std::string out;
    out.reserve(bits.size());
    for (const auto b : bits) out.push_back(b ? '1' : '0');
    return out;
}

void SessionConfig::validate() const {
    if (n < 1) throw std::invalid_argument("session needs at least one round");
    if (!(p_loss >= 0.0 && p_loss <= 1.0)) {
        throw std::invalid_argument("p_loss must lie in [0, 1]");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("alpha must lie in (0, 1)");
    }
    if (!(compare_key_fraction >= 0.0 && compare_key_fraction <= 1.0)) {
        throw std::invalid_argument("compare_key_fraction must lie in [0, 1]");
    }
    if (eve.intercepts() && !(eve.p_intercept >= 0.0 && eve.p_intercept <= 1.0)) {
        throw std::invalid_argument("p_intercept must lie in [0, 1]");
    }
}

std::pair<AliceChoice, BobChoice> draw_choice_pair(RandomStream& rng) {
    // marginals: splitter 1/2, route a 1/4, route b 1/4
    const double u = rng.uniform01();
    AliceChoice alice;
    if (u < 0.5) {
        alice = AliceChoice::splitter_in();
    } else if (u < 0.75) {
        alice = AliceChoice::route_send(RouteLabel::A);
    } else {
        alice = AliceChoice::route_send(RouteLabel::B);
    }
    const BobChoice bob =
        rng.uniform01() < 0.5 ? BobChoice::SplitterIn : BobChoice::SplitterOut;
    return {alice, bob};
}

std::vector<std::pair<AliceChoice, BobChoice>> draw_choices(std::uint64_t n,
                                                            RandomStream& rng) {
    if (n == 0) throw std::invalid_argument("need at least one round");
    std::vector<std::pair<AliceChoice, BobChoice>> out;
    out.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) out.push_back(draw_choice_pair(rng));
    return out;
}

Disposition disposition_from_announcements(bool alice_splitter_in, BobChoice bob,
                                           bool clicked) {
    if (!clicked) return Disposition::Discarded;
    const bool bob_in = bob == BobChoice::SplitterIn;
    if (alice_splitter_in && bob_in) return Disposition::CheckBoth;
    if (!alice_splitter_in && !bob_in) return Disposition::KeyRound;
    return Disposition::CheckOnlyOne;
}

RoundRecord run_round(const std::pair<AliceChoice, BobChoice>& choices,
                      const EveStrategy& eve, double p_loss, RandomStream& rng,
                      std::uint64_t index) {
    const auto& [alice, bob] = choices;

    PhotonState state = alice.splitter() ? optics::alice_splitter_state()
                                         : optics::prepare_route(alice.route);
    state = optics::apply_loss(state, p_loss, rng);
    auto [post_eve, eve_rec] = adversary::eve_intervene(state, eve, rng);
    if (bob == BobChoice::SplitterIn) post_eve = optics::apply_bob_splitter(post_eve);
    const DetectionEvent event = optics::measure_detectors(post_eve, rng);

    RoundRecord rec;
    rec.index = index;
    rec.alice = alice;
    rec.bob = bob;
    rec.eve = eve_rec;
    rec.event = event;
    rec.disposition = disposition_from_announcements(alice.splitter(), bob,
                                                     event != DetectionEvent::NoClick);
    if (!alice.splitter()) {
        rec.alice_bit = alice.route == RouteLabel::A ? 0 : 1;
    }
    if (rec.disposition == Disposition::KeyRound) {
        rec.bob_bit = event == DetectionEvent::Detector1 ? 0 : 1;
    }
    return rec;
}

SiftResult sift(const std::vector<RoundRecord>& records) {
    SiftResult out;
    for (const auto& rec : records) {
        switch (rec.disposition) {
        case Disposition::Discarded:
            ++out.discarded;
            break;
        case Disposition::CheckBoth:
            out.check_both.push_back(rec);
            break;
        case Disposition::CheckOnlyOne:
            out.check_one.push_back(rec);
            break;
        case Disposition::KeyRound:
            out.key_rounds.push_back(rec);
            break;
        }
    }
    return out;
}

double binomial_two_sided_p_value(std::uint64_t n, std::uint64_t k) {
    if (k > n) throw std::invalid_argument("successes exceed trials");
    if (n == 0) return 1.0;
    const boost::math::binomial_distribution<double> dist(static_cast<double>(n), 0.5);
    const double lower = boost::math::cdf(dist, static_cast<double>(k));
    const double upper =
        k == 0 ? 1.0
               : boost::math::cdf(boost::math::complement(dist, static_cast<double>(k - 1)));
    return std::min(1.0, 2.0 * std::min(lower, upper));
}

VerificationReport verify(const SiftResult& checks, const VerifyConfig& config) {
    VerificationReport report;
    report.n_both = checks.check_both.size();
    for (const auto& rec : checks.check_both) {
        if (rec.event == DetectionEvent::Detector2) ++report.n_both_det2;
    }
    report.n_one = checks.check_one.size();
    for (const auto& rec : checks.check_one) {
        if (rec.event == DetectionEvent::Detector1) ++report.n_one_det1;
    }
    report.both_clean = report.n_both_det2 == 0;
    report.p_value_uniform = binomial_two_sided_p_value(report.n_one, report.n_one_det1);
    report.accepted = report.both_clean && report.p_value_uniform >= config.alpha;
    return report;
}

std::pair<SiftedKey, SiftedKey> extract_key(const std::vector<RoundRecord>& key_rounds) {
    SiftedKey alice_key;
    SiftedKey bob_key;
    for (const auto& rec : key_rounds) {
        if (rec.disposition != Disposition::KeyRound || !rec.alice_bit || !rec.bob_bit) {
            throw std::invalid_argument("extract_key requires key rounds only");
        }
        alice_key.bits.push_back(static_cast<std::uint8_t>(*rec.alice_bit));
        alice_key.source_indices.push_back(rec.index);
        bob_key.bits.push_back(static_cast<std::uint8_t>(*rec.bob_bit));
        bob_key.source_indices.push_back(rec.index);
    }
    return {std::move(alice_key), std::move(bob_key)};
}

namespace {

RoundRecord simulate_indexed_round(const SessionConfig& config, const RandomStream& base,
                                   std::uint64_t index) {
    RandomStream rng = base.substream(index);
    const auto choices = draw_choice_pair(rng);
    return run_round(choices, config.eve, config.p_loss, rng, index);
}

// Disclose a random subset of the sifted key and drop it from both sides.
KeyComparison compare_and_discard(SiftedKey& alice_key, SiftedKey& bob_key,
                                  double fraction, RandomStream& rng) {
    KeyComparison cmp;
    SiftedKey kept_alice;
    SiftedKey kept_bob;
    for (std::size_t i = 0; i < alice_key.bits.size(); ++i) {
        if (rng.bernoulli(fraction)) {
            ++cmp.compared;
            if (alice_key.bits[i] != bob_key.bits[i]) ++cmp.mismatches;
        } else {
            kept_alice.bits.push_back(alice_key.bits[i]);
            kept_alice.source_indices.push_back(alice_key.source_indices[i]);
            kept_bob.bits.push_back(bob_key.bits[i]);
            kept_bob.source_indices.push_back(bob_key.source_indices[i]);
        }
    }
    cmp.mismatch_rate =
        cmp.compared == 0 ? 0.0
                          : static_cast<double>(cmp.mismatches) / static_cast<double>(cmp.compared);
    alice_key = std::move(kept_alice);
    bob_key = std::move(kept_bob);
    return cmp;
}

} // namespace

SessionReport run_session(const SessionConfig& config, unsigned threads) {
    config.validate();

    const RandomStream base(config.seed);
    SessionReport report;
    report.config = config;
    report.transcript.resize(config.n);

    const std::uint64_t n = config.n;
    const unsigned worker_count =
        static_cast<unsigned>(std::min<std::uint64_t>(std::max(threads, 1u), n));

    if (worker_count == 1) {
        for (std::uint64_t i = 0; i < n; ++i) {
            report.transcript[i] = simulate_indexed_round(config, base, i);
        }
    } else {
        std::vector<std::thread> workers;
        workers.reserve(worker_count);
        const std::uint64_t chunk = (n + worker_count - 1) / worker_count;
        for (unsigned w = 0; w < worker_count; ++w) {
            const std::uint64_t begin = chunk * w;
            const std::uint64_t end = std::min(n, begin + chunk);
            workers.emplace_back([&, begin, end] {
                for (std::uint64_t i = begin; i < end; ++i) {
                    report.transcript[i] = simulate_indexed_round(config, base, i);
                }
            });
        }
        for (auto& t : workers) t.join();
    }

    const SiftResult sifted = sift(report.transcript);
    report.discarded = sifted.discarded;
    report.verification = verify(sifted, VerifyConfig{config.alpha});

    if (report.verification.accepted) {
        auto [alice_key, bob_key] = extract_key(sifted.key_rounds);
        if (config.compare_key_fraction > 0.0) {
            RandomStream cmp_rng = base.substream(n);
            report.key_comparison = compare_and_discard(alice_key, bob_key,
                                                        config.compare_key_fraction, cmp_rng);
        }
        report.alice_key = std::move(alice_key);
        report.bob_key = std::move(bob_key);
    }
    return report;
}

SessionReport run_session(std::uint64_t n, const EveStrategy& eve, double p_loss,
                          std::uint64_t seed) {
    SessionConfig config;
    config.n = n;
    config.seed = seed;
    config.p_loss = p_loss;
    config.eve = eve;
    return run_session(config);
}

} // namespace dcqkd::protocol
