#include "dcqkd/optics.hpp"

#include <cmath>
#include <stdexcept>

namespace dcqkd::optics {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

bool finite(Amp a) { return std::isfinite(a.real()) && std::isfinite(a.imag()); }

} // namespace

PhotonState PhotonState::present(Amp amp_a, Amp amp_b) {
    if (!finite(amp_a) || !finite(amp_b)) {
        throw std::invalid_argument("photon amplitudes must be finite");
    }
    const double norm = std::norm(amp_a) + std::norm(amp_b);
    if (std::abs(norm - 1.0) > kNormTolerance) {
        throw std::invalid_argument("photon state must be normalized");
    }
    return PhotonState(amp_a, amp_b);
}

PhotonState PhotonState::normalized(Amp amp_a, Amp amp_b) {
    if (!finite(amp_a) || !finite(amp_b)) {
        throw std::invalid_argument("photon amplitudes must be finite");
    }
    const double norm = std::sqrt(std::norm(amp_a) + std::norm(amp_b));
    if (norm < 1e-300) {
        throw std::invalid_argument("cannot normalize the zero vector");
    }
    return PhotonState(amp_a / norm, amp_b / norm);
}

Amp PhotonState::amp_a() const {
    if (lost_) throw std::logic_error("lost photon carries no amplitudes");
    return a_;
}

Amp PhotonState::amp_b() const {
    if (lost_) throw std::logic_error("lost photon carries no amplitudes");
    return b_;
}

Unitary2::Unitary2(Amp m00, Amp m01, Amp m10, Amp m11) {
    m_[0][0] = m00;
    m_[0][1] = m01;
    m_[1][0] = m10;
    m_[1][1] = m11;
    // U†U = I within kNormTolerance
    const Amp g00 = std::conj(m00) * m00 + std::conj(m10) * m10;
    const Amp g01 = std::conj(m00) * m01 + std::conj(m10) * m11;
    const Amp g11 = std::conj(m01) * m01 + std::conj(m11) * m11;
    if (std::abs(g00 - 1.0) > kNormTolerance || std::abs(g11 - 1.0) > kNormTolerance ||
        std::abs(g01) > kNormTolerance) {
        throw std::invalid_argument("matrix is not unitary");
    }
}

PhotonState Unitary2::apply(const PhotonState& state) const {
    if (state.is_lost()) return state;
    const Amp a = state.amp_a();
    const Amp b = state.amp_b();
    return PhotonState::present(m_[0][0] * a + m_[0][1] * b,
                                m_[1][0] * a + m_[1][1] * b);
}

Unitary2 Unitary2::adjoint() const {
    return Unitary2(std::conj(m_[0][0]), std::conj(m_[1][0]),
                    std::conj(m_[0][1]), std::conj(m_[1][1]));
}

const Unitary2& alice_splitter() {
    static const Unitary2 u(Amp(kInvSqrt2, 0.0), Amp(0.0, kInvSqrt2),
                            Amp(0.0, kInvSqrt2), Amp(kInvSqrt2, 0.0));
    return u;
}

const Unitary2& bob_splitter() {
    static const Unitary2 u(Amp(kInvSqrt2, 0.0), Amp(0.0, -kInvSqrt2),
                            Amp(0.0, -kInvSqrt2), Amp(kInvSqrt2, 0.0));
    return u;
}

PhotonState prepare_route(RouteLabel route) {
    return route == RouteLabel::A ? PhotonState::present(Amp(1.0, 0.0), Amp(0.0, 0.0))
                                  : PhotonState::present(Amp(0.0, 0.0), Amp(1.0, 0.0));
}

PhotonState alice_splitter_state() {
    return alice_splitter().apply(prepare_route(RouteLabel::A));
}

PhotonState apply_bob_splitter(const PhotonState& state) {
    return bob_splitter().apply(state);
}

PhotonState apply_loss(const PhotonState& state, double p_loss, RandomStream& rng) {
    if (!(p_loss >= 0.0 && p_loss <= 1.0)) {
        throw std::invalid_argument("p_loss must lie in [0, 1]");
    }
    if (state.is_lost()) return state;
    return rng.bernoulli(p_loss) ? PhotonState::lost() : state;
}

DetectionEvent measure_detectors(const PhotonState& state, RandomStream& rng) {
    if (state.is_lost()) return DetectionEvent::NoClick;
    return rng.uniform01() < exact_distribution(state).p_det1 ? DetectionEvent::Detector1
                                                              : DetectionEvent::Detector2;
}

OutcomeDistribution exact_distribution(const PhotonState& state) {
    if (state.is_lost()) return OutcomeDistribution{0.0, 0.0, 1.0};
    // Ratio form, not raw |amp|^2: splitter products drift a few ulps off unit
    // norm, but an empty mode still gives exactly 0 or 1 and an equal split
    // exactly x/(2x) = 0.5, which keeps the no-eavesdropper rounds noiseless.
    const double weight_a = std::norm(state.amp_a());
    const double weight_b = std::norm(state.amp_b());
    const double total = weight_a + weight_b;
    return OutcomeDistribution{weight_a / total, weight_b / total, 0.0};
}

} // namespace dcqkd::optics
