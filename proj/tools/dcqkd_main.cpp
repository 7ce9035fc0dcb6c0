// Command-line front end: seeded session runs with JSON reports and CSV
// transcripts, the exact cell-table printer, and parameter sweeps.
//
// Exit codes for `run`: 0 session accepted, 2 session rejected (tampering
// suspected), 1 usage or configuration error. `oracle` and `sweep` exit 0
// unless a tool error occurs.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dcqkd/adversary.hpp"
#include "dcqkd/oracle.hpp"
#include "dcqkd/protocol.hpp"
#include "dcqkd/session_io.hpp"

namespace {

using dcqkd::adversary::EveStrategy;
using dcqkd::adversary::MeasBasis;
using dcqkd::protocol::SessionConfig;
using dcqkd::protocol::SessionReport;

struct RunArgs {
    std::uint64_t n = 4000;
    std::uint64_t seed = 0;
    double p_loss = 0.0;
    std::string eve = "none";
    double alpha = 1e-6;
    double compare_key_fraction = 0.0;
    unsigned threads = 1;
    std::string config_path;
    std::string out_path;
    std::string transcript_path;
};

// Flat JSON config document; recognized keys mirror the report's config echo.
void apply_config_file(const std::string& path, RunArgs& args) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    nlohmann::json doc = nlohmann::json::parse(in);
    if (!doc.is_object()) throw std::runtime_error("config file must hold a JSON object");

    for (const auto& [key, value] : doc.items()) {
        if (key == "n") {
            args.n = value.get<std::uint64_t>();
        } else if (key == "seed") {
            args.seed = value.get<std::uint64_t>();
        } else if (key == "p_loss") {
            args.p_loss = value.get<double>();
        } else if (key == "eve") {
            args.eve = value.get<std::string>();
        } else if (key == "alpha") {
            args.alpha = value.get<double>();
        } else if (key == "compare_key_fraction") {
            args.compare_key_fraction = value.get<double>();
        } else {
            throw std::runtime_error("unknown config key: " + key);
        }
    }
}

int do_run(const RunArgs& args) {
    SessionConfig config;
    config.n = args.n;
    config.seed = args.seed;
    config.p_loss = args.p_loss;
    config.eve = dcqkd::adversary::parse_eve_spec(args.eve);
    config.alpha = args.alpha;
    config.compare_key_fraction = args.compare_key_fraction;
    config.validate();

    const SessionReport report = dcqkd::protocol::run_session(config, args.threads);

    if (!args.transcript_path.empty()) {
        dcqkd::session_io::write_transcript_csv(report.transcript, args.transcript_path);
    }
    if (args.out_path.empty()) {
        std::cout << dcqkd::session_io::report_json_string(report);
    } else {
        dcqkd::session_io::write_report_json(report, args.out_path);
    }

    if (!report.verification.accepted) {
        std::cerr << "session rejected: channel statistics inconsistent with an"
                     " undisturbed line\n";
        return 2;
    }
    return 0;
}

int do_oracle(bool as_json, const std::string& out_path) {
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open output file: " + out_path);
        out << dcqkd::oracle::cell_table_json().dump(2) << '\n';
    }
    if (as_json) {
        std::cout << dcqkd::oracle::cell_table_json().dump(2) << '\n';
    } else {
        std::cout << dcqkd::oracle::cell_table_text();
    }
    return 0;
}

// One JSON line per grid point. All points share the base seed so curves over
// p_intercept use common random numbers.
int do_sweep(std::uint64_t n, std::uint64_t seed, const std::string& basis_name,
             const std::vector<double>& p_intercepts, const std::vector<double>& p_losses,
             double alpha, unsigned threads, const std::string& out_path) {
    const MeasBasis basis =
        basis_name == "route" ? MeasBasis::Route : MeasBasis::Interference;

    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open output file: " + out_path);
    }
    std::ostream& out = out_path.empty() ? std::cout : file;

    for (const double p_loss : p_losses) {
        for (const double p_intercept : p_intercepts) {
            SessionConfig config;
            config.n = n;
            config.seed = seed;
            config.p_loss = p_loss;
            config.eve = EveStrategy::intercept_resend(basis, p_intercept);
            config.alpha = alpha;
            config.validate();

            const SessionReport report = dcqkd::protocol::run_session(config, threads);

            std::uint64_t key_rounds = 0;
            std::uint64_t mismatches = 0;
            for (const auto& record : report.transcript) {
                if (record.disposition != dcqkd::protocol::Disposition::KeyRound) continue;
                ++key_rounds;
                if (*record.alice_bit != *record.bob_bit) ++mismatches;
            }

            nlohmann::json line = {
                {"accepted", report.verification.accepted},
                {"key_mismatch_rate",
                 key_rounds == 0 ? nlohmann::json(nullptr)
                                 : nlohmann::json(static_cast<double>(mismatches) /
                                                  static_cast<double>(key_rounds))},
                {"key_rounds", key_rounds},
                {"n_both", report.verification.n_both},
                {"n_both_det2", report.verification.n_both_det2},
                {"p_intercept", p_intercept},
                {"p_loss", p_loss},
                {"p_value_uniform", report.verification.p_value_uniform},
            };
            out << line.dump() << '\n';
        }
    }
    if (!out) throw std::runtime_error("failed writing sweep output");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Single-photon two-route interferometric key distribution simulator"};
    app.require_subcommand(1);

    RunArgs run_args;
    CLI::App* run = app.add_subcommand("run", "Run one seeded session and report it");
    run->add_option("--config", run_args.config_path,
                    "Flat JSON config file; explicit flags override its values");
    auto* opt_n = run->add_option("--n", run_args.n, "Number of rounds");
    auto* opt_seed = run->add_option("--seed", run_args.seed, "Session seed");
    auto* opt_p_loss = run->add_option("--p-loss", run_args.p_loss, "Per-round loss probability");
    auto* opt_eve =
        run->add_option("--eve", run_args.eve, "none | intercept:<route|interference>:<p>");
    auto* opt_alpha = run->add_option("--alpha", run_args.alpha,
                                      "Significance level for the equal-probability test");
    auto* opt_fraction =
        run->add_option("--compare-key-fraction", run_args.compare_key_fraction,
                        "Fraction of key bits disclosed for a direct comparison (0 disables)");
    run->add_option("--threads", run_args.threads, "Worker threads (same output for any value)");
    run->add_option("--out", run_args.out_path, "Report file (default: report JSON on stdout)");
    run->add_option("--transcript", run_args.transcript_path, "Round transcript CSV file");

    CLI::App* oracle =
        app.add_subcommand("oracle", "Print the exact outcome table for the standard grid");
    bool oracle_json = false;
    std::string oracle_out;
    oracle->add_flag("--json", oracle_json, "Print JSON instead of the text table");
    oracle->add_option("--out", oracle_out, "Also write the JSON table to a file");

    CLI::App* sweep = app.add_subcommand(
        "sweep", "Run a session per (p_intercept, p_loss) grid point, one JSON line each");
    std::uint64_t sweep_n = 4000;
    std::uint64_t sweep_seed = 0;
    std::string sweep_basis = "route";
    std::vector<double> sweep_p_intercepts = {0.0, 0.25, 0.5, 0.75, 1.0};
    std::vector<double> sweep_p_losses = {0.0};
    double sweep_alpha = 1e-6;
    unsigned sweep_threads = 1;
    std::string sweep_out;
    sweep->add_option("--n", sweep_n, "Rounds per grid point");
    sweep->add_option("--seed", sweep_seed, "Seed shared by every grid point");
    sweep->add_option("--basis", sweep_basis, "Interception basis")
        ->check(CLI::IsMember({"route", "interference"}));
    sweep->add_option("--p-intercept", sweep_p_intercepts, "Interception probabilities")
        ->delimiter(',');
    sweep->add_option("--p-loss", sweep_p_losses, "Loss probabilities")->delimiter(',');
    sweep->add_option("--alpha", sweep_alpha, "Significance level");
    sweep->add_option("--threads", sweep_threads, "Worker threads");
    sweep->add_option("--out", sweep_out, "Output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (run->parsed()) {
            if (!run_args.config_path.empty()) {
                RunArgs merged;
                merged.config_path = run_args.config_path;
                merged.threads = run_args.threads;
                merged.out_path = run_args.out_path;
                merged.transcript_path = run_args.transcript_path;
                apply_config_file(run_args.config_path, merged);
                if (opt_n->count() == 0) run_args.n = merged.n;
                if (opt_seed->count() == 0) run_args.seed = merged.seed;
                if (opt_p_loss->count() == 0) run_args.p_loss = merged.p_loss;
                if (opt_eve->count() == 0) run_args.eve = merged.eve;
                if (opt_alpha->count() == 0) run_args.alpha = merged.alpha;
                if (opt_fraction->count() == 0) {
                    run_args.compare_key_fraction = merged.compare_key_fraction;
                }
            }
            return do_run(run_args);
        }
        if (oracle->parsed()) return do_oracle(oracle_json, oracle_out);
        return do_sweep(sweep_n, sweep_seed, sweep_basis, sweep_p_intercepts, sweep_p_losses,
                        sweep_alpha, sweep_threads, sweep_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
