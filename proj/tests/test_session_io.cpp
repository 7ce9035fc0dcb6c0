#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "dcqkd/protocol.hpp"
#include "dcqkd/session_io.hpp"

using namespace dcqkd;
using adversary::EveStrategy;
using adversary::MeasBasis;
using protocol::SessionConfig;
using protocol::SessionReport;

namespace {

SessionReport sample_report(double compare_fraction = 0.0) {
    SessionConfig config;
    config.n = 2000;
    config.seed = 99;
    config.p_loss = 0.25;
    config.eve = EveStrategy::intercept_resend(MeasBasis::Interference, 0.5);
    config.compare_key_fraction = compare_fraction;
    return protocol::run_session(config);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream in(line);
    std::string field;
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("enum names used by the transcript") {
    CHECK(session_io::to_string(protocol::AliceChoice::splitter_in()) == "splitter_in");
    CHECK(session_io::to_string(protocol::AliceChoice::route_send(optics::RouteLabel::A)) ==
          "route_send");
    CHECK(session_io::route_string(protocol::AliceChoice::splitter_in()) == "");
    CHECK(session_io::route_string(protocol::AliceChoice::route_send(optics::RouteLabel::A)) ==
          "a");
    CHECK(session_io::route_string(protocol::AliceChoice::route_send(optics::RouteLabel::B)) ==
          "b");
    CHECK(session_io::to_string(protocol::BobChoice::SplitterIn) == "splitter_in");
    CHECK(session_io::to_string(protocol::BobChoice::SplitterOut) == "splitter_out");
    CHECK(session_io::to_string(optics::DetectionEvent::Detector1) == "detector1");
    CHECK(session_io::to_string(optics::DetectionEvent::Detector2) == "detector2");
    CHECK(session_io::to_string(optics::DetectionEvent::NoClick) == "no_click");
    CHECK(session_io::to_string(protocol::Disposition::Discarded) == "discarded");
    CHECK(session_io::to_string(protocol::Disposition::CheckOnlyOne) == "check_only_one");
    CHECK(session_io::to_string(protocol::Disposition::CheckBoth) == "check_both");
    CHECK(session_io::to_string(protocol::Disposition::KeyRound) == "key_round");
}

TEST_CASE("report JSON mirrors the session") {
    const SessionReport report = sample_report();
    const nlohmann::json j = session_io::report_to_json(report);

    CHECK(j["config"]["n"] == 2000);
    CHECK(j["config"]["seed"] == 99);
    CHECK(j["config"]["p_loss"] == 0.25);
    CHECK(j["config"]["eve"] == "intercept:interference:0.5");
    CHECK(j["config"]["alpha"] == 1e-6);
    CHECK(j["config"]["compare_key_fraction"] == 0.0);

    const auto& v = report.verification;
    CHECK(j["verification"]["accepted"] == v.accepted);
    CHECK(j["verification"]["both_clean"] == v.both_clean);
    CHECK(j["verification"]["n_both"] == v.n_both);
    CHECK(j["verification"]["n_both_det2"] == v.n_both_det2);
    CHECK(j["verification"]["n_one"] == v.n_one);
    CHECK(j["verification"]["n_one_det1"] == v.n_one_det1);
    CHECK(j["verification"]["p_value_uniform"] == v.p_value_uniform);

    CHECK(j["counts"]["rounds"] == 2000);
    CHECK(j["counts"]["discarded"] == report.discarded);
    const std::uint64_t total = j["counts"]["check_both"].get<std::uint64_t>() +
                                j["counts"]["check_only_one"].get<std::uint64_t>() +
                                j["counts"]["key_rounds"].get<std::uint64_t>() +
                                j["counts"]["discarded"].get<std::uint64_t>();
    CHECK(total == 2000);

    REQUIRE(v.accepted); // this seed's interference session passes the check
    REQUIRE(j.contains("keys"));
    CHECK(j["keys"]["alice"] == report.alice_key.to_bit_string());
    CHECK(j["keys"]["bob"] == report.bob_key.to_bit_string());
    CHECK(j["keys"]["length"] == report.alice_key.bits.size());
    CHECK(j["keys"]["match"] == (report.alice_key.bits == report.bob_key.bits));
    CHECK_FALSE(j.contains("key_comparison"));
}

TEST_CASE("rejected sessions emit no key material") {
    const auto report = protocol::run_session(
        4000, EveStrategy::intercept_resend(MeasBasis::Route, 1.0), 0.0, 17);
    REQUIRE_FALSE(report.verification.accepted);
    const nlohmann::json j = session_io::report_to_json(report);
    CHECK_FALSE(j.contains("keys"));
    CHECK(j["verification"]["accepted"] == false);
    CHECK(j["counts"]["key_rounds"].get<std::uint64_t>() > 0); // rounds existed, key withheld
}

TEST_CASE("key comparison appears when enabled") {
    const SessionReport report = sample_report(0.3);
    REQUIRE(report.verification.accepted);
    REQUIRE(report.key_comparison.has_value());
    const nlohmann::json j = session_io::report_to_json(report);
    REQUIRE(j.contains("key_comparison"));
    CHECK(j["key_comparison"]["compared"] == report.key_comparison->compared);
    CHECK(j["key_comparison"]["mismatches"] == report.key_comparison->mismatches);
    CHECK(j["key_comparison"]["mismatch_rate"] == report.key_comparison->mismatch_rate);
    CHECK(j["config"]["compare_key_fraction"] == 0.3);
}

TEST_CASE("report serialization is byte deterministic") {
    const std::string a = session_io::report_json_string(sample_report(0.2));
    const std::string b = session_io::report_json_string(sample_report(0.2));
    CHECK(a == b);
    REQUIRE_FALSE(a.empty());
    CHECK(a.back() == '\n');
}

TEST_CASE("transcript CSV layout") {
    const SessionReport report = sample_report();
    const std::string csv = session_io::transcript_csv_string(report.transcript);

    std::stringstream in(csv);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line ==
          "index,alice_choice,alice_route,bob_choice,event,disposition,alice_bit,bob_bit");

    std::size_t rows = 0;
    std::size_t no_clicks = 0;
    while (std::getline(in, line)) {
        const auto fields = split_csv_line(line);
        REQUIRE(fields.size() == 8);
        const auto& rec = report.transcript[rows];
        CHECK(fields[0] == std::to_string(rec.index));
        CHECK(fields[1] == session_io::to_string(rec.alice));
        CHECK(fields[2] == session_io::route_string(rec.alice));
        CHECK(fields[3] == session_io::to_string(rec.bob));
        CHECK(fields[4] == session_io::to_string(rec.event));
        CHECK(fields[5] == session_io::to_string(rec.disposition));
        CHECK(fields[6] == (rec.alice_bit ? std::to_string(*rec.alice_bit) : ""));
        CHECK(fields[7] == (rec.bob_bit ? std::to_string(*rec.bob_bit) : ""));
        if (rec.event == optics::DetectionEvent::NoClick) {
            ++no_clicks;
            CHECK(fields[5] == "discarded");
        }
        ++rows;
    }
    CHECK(rows == report.transcript.size());
    CHECK(no_clicks == report.discarded);
}

TEST_CASE("files round-trip the in-memory serializations") {
    const SessionReport report = sample_report(0.1);
    const auto dir = std::filesystem::temp_directory_path();
    const std::string json_path = (dir / "dcqkd_io_test_report.json").string();
    const std::string csv_path = (dir / "dcqkd_io_test_transcript.csv").string();

    session_io::write_report_json(report, json_path);
    session_io::write_transcript_csv(report.transcript, csv_path);

    CHECK(slurp(json_path) == session_io::report_json_string(report));
    CHECK(slurp(csv_path) == session_io::transcript_csv_string(report.transcript));

    std::remove(json_path.c_str());
    std::remove(csv_path.c_str());
}

TEST_CASE("report JSON parses back and key strings agree with bit vectors") {
    const SessionReport report = sample_report();
    const nlohmann::json j = nlohmann::json::parse(session_io::report_json_string(report));
    REQUIRE(j.contains("keys"));
    const std::string alice = j["keys"]["alice"];
    REQUIRE(alice.size() == report.alice_key.bits.size());
    for (std::size_t i = 0; i < alice.size(); ++i) {
        CHECK((alice[i] == '1') == (report.alice_key.bits[i] == 1));
    }
}
