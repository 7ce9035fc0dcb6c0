// Serialization of session results: the JSON summary report and the CSV
// round transcript. Output is deterministic byte for byte: keys are emitted
// in sorted order, doubles use shortest round-trip formatting, and no
// timestamps or environment data are included, so identical sessions yield
// identical files.

#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "dcqkd/protocol.hpp"

namespace dcqkd::session_io {

std::string to_string(const protocol::AliceChoice& choice);
std::string route_string(const protocol::AliceChoice& choice); // "a", "b" or ""
std::string to_string(protocol::BobChoice choice);
std::string to_string(optics::DetectionEvent event);
std::string to_string(protocol::Disposition disposition);

// Summary report: config echo, counts, verification verdict, keys when the
// session was accepted. The transcript is not embedded; it has its own file.
nlohmann::json report_to_json(const protocol::SessionReport& report);

// report_to_json rendered with 2-space indent and a trailing newline.
std::string report_json_string(const protocol::SessionReport& report);
void write_report_json(const protocol::SessionReport& report, const std::string& path);

// Columns: index,alice_choice,alice_route,bob_choice,event,disposition,
// alice_bit,bob_bit. Optional fields are empty when absent.
std::string transcript_csv_string(const std::vector<protocol::RoundRecord>& records);
void write_transcript_csv(const std::vector<protocol::RoundRecord>& records,
                          const std::string& path);

} // namespace dcqkd::session_io
