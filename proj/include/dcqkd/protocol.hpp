// Honest-party state machines and the classical public-discussion steps:
// per-round choices and transmission, sifting after the splitter
// announcements, the interference verification test, and key extraction.
//
// A round: the sender either inserts her splitter (probability 1/2) or sends
// a definite route (1/4 each); the receiver independently inserts his
// splitter with probability 1/2. After transmission both announce their
// splitter choices, no-click rounds are discarded, and the survivors fall
// into three public cells:
//   CheckBoth:    both splitters in; honest physics forces Detector1, so any
//                  Detector2 click is evidence of tampering (zero tolerance).
//   CheckOnlyOne: exactly one splitter in; detectors must fire 50/50, tested
//                  with an exact two-sided binomial p-value.
//   KeyRound:     route sent, splitter out; detector identity reveals the
//                  route and yields one shared bit (2a = 0, 2b = 1).

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dcqkd/adversary.hpp"
#include "dcqkd/optics.hpp"

namespace dcqkd::protocol {

struct AliceChoice {
    enum class Kind { SplitterIn, RouteSend };

    Kind kind = Kind::SplitterIn;
    optics::RouteLabel route = optics::RouteLabel::A; // meaningful iff RouteSend

    static AliceChoice splitter_in() { return AliceChoice{}; }
    static AliceChoice route_send(optics::RouteLabel r) {
        return AliceChoice{Kind::RouteSend, r};
    }

    bool splitter() const { return kind == Kind::SplitterIn; }
};

enum class BobChoice { SplitterIn, SplitterOut };

enum class Disposition { Discarded, CheckOnlyOne, CheckBoth, KeyRound };

// Full per-round transcript entry.
struct RoundRecord {
    std::uint64_t index = 0;
    AliceChoice alice;
    BobChoice bob = BobChoice::SplitterIn;
    adversary::EveRecord eve;
    optics::DetectionEvent event = optics::DetectionEvent::NoClick;
    Disposition disposition = Disposition::Discarded;
    std::optional<int> alice_bit; // present iff alice sent a route
    std::optional<int> bob_bit;   // present iff disposition == KeyRound
};

struct SiftResult {
    std::vector<RoundRecord> check_both;
    std::vector<RoundRecord> check_one;
    std::vector<RoundRecord> key_rounds;
    std::size_t discarded = 0;
};

struct VerifyConfig {
    double alpha = 1e-6; // significance level for the equal-probability test
};

struct VerificationReport {
    std::uint64_t n_both = 0;
    std::uint64_t n_both_det2 = 0;
    std::uint64_t n_one = 0;
    std::uint64_t n_one_det1 = 0;
    double p_value_uniform = 1.0;
    bool both_clean = true;
    bool accepted = false;
};

struct SiftedKey {
    std::vector<std::uint8_t> bits;
    std::vector<std::uint64_t> source_indices;

    std::string to_bit_string() const;
};

// Result of the optional post-protocol key comparison (disabled by default).
struct KeyComparison {
    std::uint64_t compared = 0;
    std::uint64_t mismatches = 0;
    double mismatch_rate = 0.0;
};

struct SessionConfig {
    std::uint64_t n = 0;
    std::uint64_t seed = 0;
    double p_loss = 0.0;
    adversary::EveStrategy eve;
    double alpha = 1e-6;
    // Fraction of key bits sacrificed for a direct comparison after
    // acceptance. Not part of the protocol proper; 0 disables it.
    double compare_key_fraction = 0.0;

    void validate() const; // throws std::invalid_argument
};

struct SessionReport {
    SessionConfig config;
    std::vector<RoundRecord> transcript;
    VerificationReport verification;
    SiftedKey alice_key; // filled only when the session is accepted
    SiftedKey bob_key;
    std::optional<KeyComparison> key_comparison;

    std::size_t discarded = 0;
};

// One choice pair with the protocol marginals, drawn from the given stream.
std::pair<AliceChoice, BobChoice> draw_choice_pair(RandomStream& rng);

// n independent pairs. Throws std::invalid_argument for n = 0.
std::vector<std::pair<AliceChoice, BobChoice>> draw_choices(std::uint64_t n,
                                                            RandomStream& rng);

// Disposition is a function of the public announcements plus click/no-click
// only; routes and detector identities never enter.
Disposition disposition_from_announcements(bool alice_splitter_in, BobChoice bob,
                                           bool clicked);

// One transmission: prepare -> loss -> eavesdropper -> optional receiver
// splitter -> detectors, with the record filled per the disposition rules.
RoundRecord run_round(const std::pair<AliceChoice, BobChoice>& choices,
                      const adversary::EveStrategy& eve, double p_loss,
                      RandomStream& rng, std::uint64_t index = 0);

// Drops no-click rounds and partitions the rest by announced choices.
SiftResult sift(const std::vector<RoundRecord>& records);

// Tamper test: zero tolerance for Detector2 in the both-splitters cell,
// exact two-sided binomial test of Detector1 against 1/2 in the one-splitter
// cell.
VerificationReport verify(const SiftResult& checks, const VerifyConfig& config);

// Exact two-sided binomial p-value of k successes in n trials against 1/2.
double binomial_two_sided_p_value(std::uint64_t n, std::uint64_t k);

// Sender bits from routes, receiver bits from detectors, same order.
// Throws std::invalid_argument if any record is not a key round.
std::pair<SiftedKey, SiftedKey> extract_key(const std::vector<RoundRecord>& key_rounds);

// Full session: transmission, sifting, verification, key extraction. Round i
// draws from substream(seed, i), so the transcript is identical for any
// thread count.
SessionReport run_session(const SessionConfig& config, unsigned threads = 1);
SessionReport run_session(std::uint64_t n, const adversary::EveStrategy& eve,
                          double p_loss, std::uint64_t seed);

} // namespace dcqkd::protocol
