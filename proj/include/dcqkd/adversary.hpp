// Eavesdropper strategies acting on the in-flight photon between the loss
// event and the receiver's apparatus.
//
// The intercept-resend family measures the photon in one of two bases and
// re-emits the collapsed state:
//   Route:        project onto {route a, route b}; re-emit the route basis
//                  state. Reads the key encoding, disturbs superpositions.
//   Interference: project onto the two states the receiver's splitter maps
//                  to the detectors; re-emit the collapsed basis vector.
//                  Invisible to interference checks, reads nothing from
//                  route states.

#pragma once

#include <optional>
#include <string>
#include <utility>

#include "dcqkd/optics.hpp"

namespace dcqkd::adversary {

enum class MeasBasis { Route, Interference };

struct EveStrategy {
    enum class Kind { None, InterceptResend };

    Kind kind = Kind::None;
    MeasBasis basis = MeasBasis::Route; // meaningful only for InterceptResend
    double p_intercept = 0.0;

    static EveStrategy none() { return EveStrategy{}; }

    // Throws std::invalid_argument unless 0 <= p_intercept <= 1.
    static EveStrategy intercept_resend(MeasBasis basis, double p_intercept);

    bool intercepts() const { return kind == Kind::InterceptResend; }
};

struct EveRecord {
    bool intercepted = false;
    std::optional<MeasBasis> basis;   // present iff intercepted
    std::optional<int> outcome_bit;   // present iff intercepted
};

// One intervention point per photon. Lost photons and non-intercepted rounds
// pass through unchanged.
std::pair<optics::PhotonState, EveRecord>
eve_intervene(const optics::PhotonState& state, const EveStrategy& strategy,
              RandomStream& rng);

// CLI-facing strategy spec: "none" or "intercept:<route|interference>:<p>".
EveStrategy parse_eve_spec(const std::string& spec);
std::string eve_spec_string(const EveStrategy& strategy);

} // namespace dcqkd::adversary
