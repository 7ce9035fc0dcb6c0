#include "dcqkd/oracle.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace dcqkd::oracle {

using adversary::EveStrategy;
using adversary::MeasBasis;
using protocol::AliceChoice;
using protocol::BobChoice;

namespace {

// Weighted measurement branch: exact probability mass, post-measurement
// state, and the eavesdropper's row in the joint table (0 = not intercepted).
struct Branch {
    ExactReal weight;
    ExactState state;
    int eve_row;
};

ExactState exact_prepare(const AliceChoice& alice) {
    const ExactComplex one{ExactReal(1), ExactReal(0)};
    const ExactComplex zero{ExactReal(0), ExactReal(0)};
    if (alice.splitter()) {
        return exact_alice_splitter().apply(ExactState{one, zero});
    }
    return alice.route == optics::RouteLabel::A ? ExactState{one, zero}
                                                : ExactState{zero, one};
}

ExactState exact_route_state(int bit) {
    const ExactComplex one{ExactReal(1), ExactReal(0)};
    const ExactComplex zero{ExactReal(0), ExactReal(0)};
    return bit == 0 ? ExactState{one, zero} : ExactState{zero, one};
}

std::vector<Branch> eve_branches(const ExactState& psi, const EveStrategy& eve) {
    std::vector<Branch> branches;
    if (!eve.intercepts() || eve.p_intercept == 0.0) {
        branches.push_back(Branch{ExactReal(1), psi, 0});
        return branches;
    }

    const Rational p = rational_from_double(eve.p_intercept);
    if (p < 1) {
        branches.push_back(Branch{ExactReal(Rational(1) - p), psi, 0});
    }

    for (int bit = 0; bit < 2; ++bit) {
        ExactReal outcome_prob;
        ExactState reemitted;
        if (eve.basis == MeasBasis::Route) {
            outcome_prob = bit == 0 ? psi.amp_a.norm_sq() : psi.amp_b.norm_sq();
            reemitted = exact_route_state(bit);
        } else {
            const ExactState rotated = exact_bob_splitter().apply(psi);
            outcome_prob = bit == 0 ? rotated.amp_a.norm_sq() : rotated.amp_b.norm_sq();
            reemitted = exact_bob_splitter().adjoint().apply(exact_route_state(bit));
        }
        if (outcome_prob.is_zero()) continue;
        branches.push_back(Branch{ExactReal(p) * outcome_prob, reemitted, 1 + bit});
    }
    return branches;
}

} // namespace

optics::OutcomeDistribution CellDistribution::to_doubles() const {
    return optics::OutcomeDistribution{p_det1.to_double(), p_det2.to_double(),
                                       p_noclick.to_double()};
}

ExactReal CellDistribution::p_intercepted_outcome(int bit) const {
    if (bit != 0 && bit != 1) throw std::invalid_argument("outcome bit must be 0 or 1");
    return joint[1 + bit][0] + joint[1 + bit][1];
}

CellDistribution enumerate_cell(const ConfigCell& cell) {
    CellDistribution dist;

    const ExactState psi = exact_prepare(cell.alice);
    for (const Branch& branch : eve_branches(psi, cell.eve)) {
        const ExactState at_detectors = cell.bob == BobChoice::SplitterIn
                                            ? exact_bob_splitter().apply(branch.state)
                                            : branch.state;
        dist.joint[branch.eve_row][0] += branch.weight * at_detectors.amp_a.norm_sq();
        dist.joint[branch.eve_row][1] += branch.weight * at_detectors.amp_b.norm_sq();
    }

    for (const auto& row : dist.joint) {
        dist.p_det1 += row[0];
        dist.p_det2 += row[1];
    }
    return dist;
}

double detection_probability(const EveStrategy& eve, std::uint64_t n_both) {
    ConfigCell both;
    both.alice = AliceChoice::splitter_in();
    both.bob = BobChoice::SplitterIn;
    both.eve = eve;
    const double p_det2 = enumerate_cell(both).p_det2.to_double();
    return 1.0 - std::pow(1.0 - p_det2, static_cast<double>(n_both));
}

ExactReal key_error_rate(const EveStrategy& eve) {
    ConfigCell cell_a;
    cell_a.alice = AliceChoice::route_send(optics::RouteLabel::A);
    cell_a.bob = BobChoice::SplitterOut;
    cell_a.eve = eve;
    ConfigCell cell_b = cell_a;
    cell_b.alice = AliceChoice::route_send(optics::RouteLabel::B);

    // bit mismatch: Detector2 when route a was sent, Detector1 when route b was
    const ExactReal half(Rational(1, 2));
    return half * enumerate_cell(cell_a).p_det2 + half * enumerate_cell(cell_b).p_det1;
}

std::vector<ConfigCell> standard_grid() {
    const std::array<AliceChoice, 3> alices = {
        AliceChoice::splitter_in(),
        AliceChoice::route_send(optics::RouteLabel::A),
        AliceChoice::route_send(optics::RouteLabel::B),
    };
    const std::array<BobChoice, 2> bobs = {BobChoice::SplitterIn, BobChoice::SplitterOut};

    std::vector<EveStrategy> strategies = {EveStrategy::none()};
    for (const MeasBasis basis : {MeasBasis::Route, MeasBasis::Interference}) {
        for (const double p : {0.0, 0.25, 0.5, 1.0}) {
            strategies.push_back(EveStrategy::intercept_resend(basis, p));
        }
    }

    std::vector<ConfigCell> grid;
    grid.reserve(strategies.size() * alices.size() * bobs.size());
    for (const auto& eve : strategies) {
        for (const auto& alice : alices) {
            for (const auto& bob : bobs) {
                grid.push_back(ConfigCell{alice, bob, eve});
            }
        }
    }
    return grid;
}

std::string cell_label(const ConfigCell& cell) {
    std::string alice = cell.alice.splitter()
                            ? "splitter_in"
                            : (cell.alice.route == optics::RouteLabel::A ? "route_a" : "route_b");
    std::string bob = cell.bob == BobChoice::SplitterIn ? "splitter_in" : "splitter_out";
    return alice + " / " + bob + " / " + adversary::eve_spec_string(cell.eve);
}

nlohmann::json cell_table_json() {
    nlohmann::json rows = nlohmann::json::array();
    for (const ConfigCell& cell : standard_grid()) {
        const CellDistribution dist = enumerate_cell(cell);
        nlohmann::json row;
        row["alice"] = cell.alice.splitter()
                           ? "splitter_in"
                           : (cell.alice.route == optics::RouteLabel::A ? "route_a" : "route_b");
        row["bob"] = cell.bob == BobChoice::SplitterIn ? "splitter_in" : "splitter_out";
        row["eve"] = adversary::eve_spec_string(cell.eve);
        row["p_det1"] = {{"exact", dist.p_det1.str()}, {"value", dist.p_det1.to_double()}};
        row["p_det2"] = {{"exact", dist.p_det2.str()}, {"value", dist.p_det2.to_double()}};
        row["p_noclick"] = {{"exact", dist.p_noclick.str()}, {"value", dist.p_noclick.to_double()}};
        rows.push_back(std::move(row));
    }
    return nlohmann::json{{"cells", std::move(rows)}};
}

std::string cell_table_text() {
    std::ostringstream out;
    out << std::left << std::setw(12) << "alice" << std::setw(14) << "bob" << std::setw(28)
        << "eve" << std::setw(12) << "P(det1)" << std::setw(12) << "P(det2)" << "P(noclick)"
        << '\n';
    for (const ConfigCell& cell : standard_grid()) {
        const CellDistribution dist = enumerate_cell(cell);
        const std::string alice =
            cell.alice.splitter()
                ? "splitter_in"
                : (cell.alice.route == optics::RouteLabel::A ? "route_a" : "route_b");
        const std::string bob =
            cell.bob == BobChoice::SplitterIn ? "splitter_in" : "splitter_out";
        out << std::left << std::setw(12) << alice << std::setw(14) << bob << std::setw(28)
            << adversary::eve_spec_string(cell.eve) << std::setw(12) << dist.p_det1.str()
            << std::setw(12) << dist.p_det2.str() << dist.p_noclick.str() << '\n';
    }
    return out.str();
}

} // namespace dcqkd::oracle
