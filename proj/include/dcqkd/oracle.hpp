// Independent exact ground truth for every configuration cell.
//
// enumerate_cell branches on every projective-measurement outcome (the
// eavesdropper's, then the detectors') carrying exact amplitudes and exact
// branch weights, and never samples. All sampled statistics in the simulator
// are validated against these numbers.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dcqkd/adversary.hpp"
#include "dcqkd/exact.hpp"
#include "dcqkd/protocol.hpp"

#include "json.hpp"

namespace dcqkd::oracle {

// One configuration cell of the protocol's public case analysis.
struct ConfigCell {
    protocol::AliceChoice alice;
    protocol::BobChoice bob = protocol::BobChoice::SplitterIn;
    adversary::EveStrategy eve;
};

// Exact outcome probabilities for a cell, jointly with the eavesdropper's
// measurement result. joint[row][col]: row 0 = not intercepted, row 1 = Eve
// outcome 0, row 2 = Eve outcome 1; col 0 = Detector1, col 1 = Detector2.
// Cells carry no loss, so p_noclick is identically zero here.
struct CellDistribution {
    ExactReal p_det1;
    ExactReal p_det2;
    ExactReal p_noclick;
    std::array<std::array<ExactReal, 2>, 3> joint;

    optics::OutcomeDistribution to_doubles() const;
    ExactReal p_intercepted_outcome(int bit) const; // row sum, bit in {0, 1}
};

// Exhaustive branch enumeration with exact amplitude algebra.
CellDistribution enumerate_cell(const ConfigCell& cell);

// Probability that at least one of n_both both-splitters rounds clicks
// Detector2 under the given strategy: 1 - (1 - p_det2_cell)^n_both.
double detection_probability(const adversary::EveStrategy& eve, std::uint64_t n_both);

// Probability that the two key bits disagree on a key round (routes uniform).
ExactReal key_error_rate(const adversary::EveStrategy& eve);

// The six public cells crossed with the standard strategy grid:
// honest, then each basis at p_intercept in {0, 1/4, 1/2, 1}.
std::vector<ConfigCell> standard_grid();

// Cell-table artifact consumed by the test suite and printed by the CLI.
nlohmann::json cell_table_json();
std::string cell_table_text();

std::string cell_label(const ConfigCell& cell);

} // namespace dcqkd::oracle
