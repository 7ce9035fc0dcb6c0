#include "dcqkd/adversary.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dcqkd::adversary {

using optics::PhotonState;
using optics::RouteLabel;

EveStrategy EveStrategy::intercept_resend(MeasBasis basis, double p_intercept) {
    if (!(p_intercept >= 0.0 && p_intercept <= 1.0)) {
        throw std::invalid_argument("p_intercept must lie in [0, 1]");
    }
    EveStrategy s;
    s.kind = Kind::InterceptResend;
    s.basis = basis;
    s.p_intercept = p_intercept;
    return s;
}

std::pair<PhotonState, EveRecord>
eve_intervene(const PhotonState& state, const EveStrategy& strategy, RandomStream& rng) {
    if (state.is_lost() || !strategy.intercepts()) {
        return {state, EveRecord{}};
    }
    if (!rng.bernoulli(strategy.p_intercept)) {
        return {state, EveRecord{}};
    }

    EveRecord rec;
    rec.intercepted = true;
    rec.basis = strategy.basis;

    if (strategy.basis == MeasBasis::Route) {
        const double p_route_a = optics::exact_distribution(state).p_det1;
        const int bit = rng.uniform01() < p_route_a ? 0 : 1;
        rec.outcome_bit = bit;
        return {optics::prepare_route(bit == 0 ? RouteLabel::A : RouteLabel::B), rec};
    }

    // Interference basis: rotate into the detector basis, collapse, and
    // re-emit the adjoint rotation applied to the collapsed basis vector.
    const PhotonState rotated = optics::apply_bob_splitter(state);
    const double p_outcome0 = optics::exact_distribution(rotated).p_det1;
    const int bit = rng.uniform01() < p_outcome0 ? 0 : 1;
    rec.outcome_bit = bit;
    const PhotonState reemitted = optics::bob_splitter().adjoint().apply(
        optics::prepare_route(bit == 0 ? RouteLabel::A : RouteLabel::B));
    return {reemitted, rec};
}

EveStrategy parse_eve_spec(const std::string& spec) {
    if (spec == "none") return EveStrategy::none();

    std::istringstream in(spec);
    std::string head, basis_str, p_str;
    if (!std::getline(in, head, ':') || head != "intercept" ||
        !std::getline(in, basis_str, ':') || !std::getline(in, p_str)) {
        throw std::invalid_argument(
            "eve spec must be 'none' or 'intercept:<route|interference>:<p>', got '" + spec + "'");
    }

    MeasBasis basis;
    if (basis_str == "route") {
        basis = MeasBasis::Route;
    } else if (basis_str == "interference") {
        basis = MeasBasis::Interference;
    } else {
        throw std::invalid_argument("unknown eve basis '" + basis_str + "'");
    }

    double p = 0.0;
    std::size_t used = 0;
    try {
        p = std::stod(p_str, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad intercept probability '" + p_str + "'");
    }
    if (used != p_str.size()) {
        throw std::invalid_argument("bad intercept probability '" + p_str + "'");
    }
    return EveStrategy::intercept_resend(basis, p);
}

std::string eve_spec_string(const EveStrategy& strategy) {
    if (!strategy.intercepts()) return "none";
    // shortest round-trip formatting so echoed specs replay exactly
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), strategy.p_intercept);
    std::string p(buf, res.ptr);
    return std::string("intercept:") +
           (strategy.basis == MeasBasis::Route ? "route" : "interference") + ':' + p;
}

} // namespace dcqkd::adversary
