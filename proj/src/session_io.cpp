#include "dcqkd/session_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dcqkd::session_io {

using protocol::AliceChoice;
using protocol::BobChoice;
using protocol::Disposition;
using protocol::RoundRecord;
using protocol::SessionReport;

std::string to_string(const AliceChoice& choice) {
    return choice.splitter() ? "splitter_in" : "route_send";
}

std::string route_string(const AliceChoice& choice) {
    if (choice.splitter()) return "";
    return choice.route == optics::RouteLabel::A ? "a" : "b";
}

std::string to_string(BobChoice choice) {
    return choice == BobChoice::SplitterIn ? "splitter_in" : "splitter_out";
}

std::string to_string(optics::DetectionEvent event) {
    switch (event) {
    case optics::DetectionEvent::Detector1: return "detector1";
    case optics::DetectionEvent::Detector2: return "detector2";
    case optics::DetectionEvent::NoClick: return "no_click";
    }
    throw std::logic_error("unreachable detection event");
}

std::string to_string(Disposition disposition) {
    switch (disposition) {
    case Disposition::Discarded: return "discarded";
    case Disposition::CheckOnlyOne: return "check_only_one";
    case Disposition::CheckBoth: return "check_both";
    case Disposition::KeyRound: return "key_round";
    }
    throw std::logic_error("unreachable disposition");
}

nlohmann::json report_to_json(const SessionReport& report) {
    nlohmann::json j;

    j["config"] = {
        {"alpha", report.config.alpha},
        {"compare_key_fraction", report.config.compare_key_fraction},
        {"eve", adversary::eve_spec_string(report.config.eve)},
        {"n", report.config.n},
        {"p_loss", report.config.p_loss},
        {"seed", report.config.seed},
    };

    std::size_t key_rounds = 0;
    for (const RoundRecord& r : report.transcript) {
        if (r.disposition == Disposition::KeyRound) ++key_rounds;
    }

    const auto& v = report.verification;
    j["counts"] = {
        {"check_both", v.n_both},
        {"check_only_one", v.n_one},
        {"discarded", report.discarded},
        {"key_rounds", key_rounds},
        {"rounds", report.config.n},
    };

    j["verification"] = {
        {"accepted", v.accepted},
        {"both_clean", v.both_clean},
        {"n_both", v.n_both},
        {"n_both_det2", v.n_both_det2},
        {"n_one", v.n_one},
        {"n_one_det1", v.n_one_det1},
        {"p_value_uniform", v.p_value_uniform},
    };

    if (v.accepted) {
        j["keys"] = {
            {"alice", report.alice_key.to_bit_string()},
            {"bob", report.bob_key.to_bit_string()},
            {"length", report.alice_key.bits.size()},
            {"match", report.alice_key.bits == report.bob_key.bits},
        };
    }

    if (report.key_comparison) {
        j["key_comparison"] = {
            {"compared", report.key_comparison->compared},
            {"mismatch_rate", report.key_comparison->mismatch_rate},
            {"mismatches", report.key_comparison->mismatches},
        };
    }

    return j;
}

std::string report_json_string(const SessionReport& report) {
    return report_to_json(report).dump(2) + "\n";
}

void write_report_json(const SessionReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open report file: " + path);
    out << report_json_string(report);
    if (!out) throw std::runtime_error("failed writing report file: " + path);
}

std::string transcript_csv_string(const std::vector<RoundRecord>& records) {
    std::ostringstream out;
    out << "index,alice_choice,alice_route,bob_choice,event,disposition,alice_bit,bob_bit\n";
    for (const RoundRecord& r : records) {
        out << r.index << ',' << to_string(r.alice) << ',' << route_string(r.alice) << ','
            << to_string(r.bob) << ',' << to_string(r.event) << ',' << to_string(r.disposition)
            << ',';
        if (r.alice_bit) out << *r.alice_bit;
        out << ',';
        if (r.bob_bit) out << *r.bob_bit;
        out << '\n';
    }
    return out.str();
}

void write_transcript_csv(const std::vector<RoundRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open transcript file: " + path);
    out << transcript_csv_string(records);
    if (!out) throw std::runtime_error("failed writing transcript file: " + path);
}

} // namespace dcqkd::session_io
