// Exact single-photon optics on the two spatial routes (2a, 2b) of a
// Mach-Zehnder style interferometer.
//
// A photon is either a normalized amplitude pair over the routes or Lost.
// The two beam splitters use one fixed phase convention:
//
//   sender splitter,   port 1 -> routes:      A = (1/sqrt2) [[1,  i], [ i, 1]]
//   receiver splitter, routes -> detectors:   B = (1/sqrt2) [[1, -i], [-i, 1]]
//
// B * A = I, which forces the two behaviors the protocol relies on:
// a photon passing both splitters always exits at the detector-1 port, and
// with both splitters removed route a feeds detector 1, route b detector 2.
// After the receiver-side map, mode a is the detector-1 port and mode b the
// detector-2 port; with the splitter out the routes hit the detectors
// directly, so the same mode convention applies.

#pragma once

#include <complex>

#include "dcqkd/random.hpp"

namespace dcqkd::optics {

using Amp = std::complex<double>;

inline constexpr double kNormTolerance = 1e-12;

enum class RouteLabel { A, B };

enum class DetectionEvent { Detector1, Detector2, NoClick };

// Amplitude pair over (route a, route b), or the Lost sentinel.
// Present states are unit-norm within kNormTolerance; amplitudes are finite.
class PhotonState {
public:
    static PhotonState lost() { return PhotonState(); }

    // Requires a normalized, finite amplitude pair.
    static PhotonState present(Amp amp_a, Amp amp_b);

    // Rescales an arbitrary nonzero amplitude pair to unit norm.
    static PhotonState normalized(Amp amp_a, Amp amp_b);

    bool is_lost() const { return lost_; }

    // Amplitude access is only meaningful for present states.
    Amp amp_a() const;
    Amp amp_b() const;

private:
    PhotonState() : lost_(true), a_(0.0), b_(0.0) {}
    PhotonState(Amp a, Amp b) : lost_(false), a_(a), b_(b) {}

    bool lost_;
    Amp a_;
    Amp b_;
};

// Probabilities over {Detector1, Detector2, NoClick}; components sum to 1.
struct OutcomeDistribution {
    double p_det1 = 0.0;
    double p_det2 = 0.0;
    double p_noclick = 0.0;
};

// 2x2 unitary over the mode pair. Construction checks U†U = I.
class Unitary2 {
public:
    Unitary2(Amp m00, Amp m01, Amp m10, Amp m11);

    // Lost passes through unchanged.
    PhotonState apply(const PhotonState& state) const;

    Unitary2 adjoint() const;

    Amp at(int row, int col) const { return m_[row][col]; }

private:
    Amp m_[2][2];
};

// The two fixed splitters of the apparatus.
const Unitary2& alice_splitter();
const Unitary2& bob_splitter();

// Basis-state preparation: all amplitude on the chosen route.
PhotonState prepare_route(RouteLabel route);

// The sender splitter applied to the fixed port-1 input; equal intensity on
// both routes.
PhotonState alice_splitter_state();

// The receiver splitter applied to a present state; after this, mode a is
// the detector-1 port.
PhotonState apply_bob_splitter(const PhotonState& state);

// One Bernoulli loss event: Lost with probability p_loss, else unchanged.
// Throws std::invalid_argument unless 0 <= p_loss <= 1.
PhotonState apply_loss(const PhotonState& state, double p_loss, RandomStream& rng);

// Samples Detector1 vs Detector2 from the relative mode weights; Lost -> NoClick.
DetectionEvent measure_detectors(const PhotonState& state, RandomStream& rng);

// Mode weights |amp_a|^2 and |amp_b|^2 divided by their sum, so an empty mode
// is exactly 0 and an equal split exactly 1/2 regardless of sub-ulp norm
// drift. Lost -> (0, 0, 1).
OutcomeDistribution exact_distribution(const PhotonState& state);

} // namespace dcqkd::optics
