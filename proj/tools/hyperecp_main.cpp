// Copyright 2026 The hyperecp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// `hyperecp` command-line front end.
//
//   hyperecp run    --protocol bell --alpha2 0.3 --gamma2 0.4
//   hyperecp table  --protocol ghz --compare-paper
//   hyperecp sweep  --step 0.05 --output sweep.csv
//   hyperecp verify
//
// Exit codes: 0 on success, 1 on a configuration/validation error,
// 2 on an internal consistency failure.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "hyperecp/analysis.hpp"
#include "hyperecp/detection.hpp"
#include "hyperecp/format.hpp"
#include "hyperecp/optics.hpp"
#include "hyperecp/protocol.hpp"
#include "hyperecp/published_signatures.hpp"
#include "hyperecp/verify.hpp"

namespace {

namespace fs = std::filesystem;
using hyperecp::fmt::g17;
using hyperecp::protocol::SourceParams;

struct RunConfig {
  std::string protocol = "bell";
  double alpha2 = 0.5;
  double gamma2 = 0.5;
  double arg_alpha = 0.0;
  double arg_gamma = 0.0;
  std::string format = "pretty";
  std::string output;
  double tolerance = hyperecp::fock::tol::probability;
  std::string circuit_file;
  bool compare_paper = false;
  double step = 0.05;
  int rounds = 2;
};

hyperecp::detection::ProtocolKind kind_of(const RunConfig& cfg) {
  return cfg.protocol == "ghz" ? hyperecp::detection::ProtocolKind::Ghz
                               : hyperecp::detection::ProtocolKind::Bell;
}

SourceParams params_of(const RunConfig& cfg) {
  if (cfg.tolerance <= 0.0)
    throw std::invalid_argument("tolerance must be positive");
  return SourceParams::from_intensities(cfg.alpha2, cfg.gamma2, cfg.arg_alpha,
                                        cfg.arg_gamma);
}

// Relative --output paths land under $HYPERECP_OUTPUT_DIR when it is set.
fs::path resolve_output(const std::string& path) {
  fs::path p{path};
  const char* dir = std::getenv("HYPERECP_OUTPUT_DIR");
  if (p.is_relative() && dir != nullptr && *dir != '\0') p = fs::path{dir} / p;
  return p;
}

// Runs `emit` against stdout or the resolved --output file.
void with_sink(const RunConfig& cfg,
               const std::function<void(std::ostream&)>& emit) {
  if (cfg.output.empty()) {
    emit(std::cout);
    return;
  }
  const fs::path p = resolve_output(cfg.output);
  std::ofstream file{p};
  if (!file) throw std::runtime_error("cannot open output file: " + p.string());
  emit(file);
  if (!file) throw std::runtime_error("write failed: " + p.string());
}

// Debugging aid: evolve the protocol source state through a circuit read
// from a text file and dump the result.
int cmd_circuit(const RunConfig& cfg) {
  const SourceParams p = params_of(cfg);
  const hyperecp::fock::State input =
      kind_of(cfg) == hyperecp::detection::ProtocolKind::Ghz
          ? hyperecp::protocol::ghz_input(p)
          : hyperecp::protocol::bell_input(p);
  const auto circuit = hyperecp::optics::parse_circuit_file(cfg.circuit_file);
  const auto evolved = hyperecp::optics::apply_circuit(input, circuit);
  with_sink(cfg, [&](std::ostream& os) {
    os << "circuit elements: " << circuit.elements.size() << "\n";
    os << "photons: " << evolved.photon_count() << "\n";
    os << "terms: " << evolved.term_count() << "\n";
    os << "squared norm: " << g17(evolved.squared_norm()) << "\n";
    os << "state:\n" << evolved.str() << "\n";
  });
  return 0;
}

int cmd_run(const RunConfig& cfg) {
  if (!cfg.circuit_file.empty()) return cmd_circuit(cfg);

  const SourceParams p = params_of(cfg);
  const auto probs = hyperecp::analysis::analytic_probs(p);
  const double p_rounds = hyperecp::analysis::multi_round_success(p, cfg.rounds);
  const auto run = hyperecp::detection::run_protocol(p, kind_of(cfg));

  std::map<std::string, long> counts;
  for (const auto& o : run.outcomes)
    ++counts[hyperecp::detection::outcome_class_name(o.cls)];

  const double dev =
      std::max({std::abs(run.success - probs.p1),
                std::abs(run.recycle - probs.recycle),
                std::abs(run.fail - (1.0 - probs.p1 - probs.recycle))});

  with_sink(cfg, [&](std::ostream& os) {
    if (cfg.format == "json") {
      nlohmann::ordered_json j;
      j["protocol"] = cfg.protocol;
      j["alpha2"] = cfg.alpha2;
      j["gamma2"] = cfg.gamma2;
      j["p1"] = probs.p1;
      j["recycle"] = probs.recycle;
      j["p2"] = probs.p2;
      j["rounds"] = cfg.rounds;
      j["p_rounds"] = p_rounds;
      j["sim_success"] = run.success;
      j["sim_recycle"] = run.recycle;
      j["sim_fail"] = run.fail;
      j["max_dev"] = dev;
      j["completeness"] = run.completeness;
      j["outcomes"] = run.outcomes.size();
      j["count_success"] = counts["Success"];
      j["count_recycle"] = counts["Recycle"];
      j["count_fail"] = counts["Fail"];
      os << j.dump(2) << "\n";
    } else if (cfg.format == "csv") {
      os << "key,value\n";
      os << "protocol," << cfg.protocol << "\n";
      os << "alpha2," << g17(cfg.alpha2) << "\n";
      os << "gamma2," << g17(cfg.gamma2) << "\n";
      os << "p1," << g17(probs.p1) << "\n";
      os << "recycle," << g17(probs.recycle) << "\n";
      os << "p2," << g17(probs.p2) << "\n";
      os << "rounds," << cfg.rounds << "\n";
      os << "p_rounds," << g17(p_rounds) << "\n";
      os << "sim_success," << g17(run.success) << "\n";
      os << "sim_recycle," << g17(run.recycle) << "\n";
      os << "sim_fail," << g17(run.fail) << "\n";
      os << "max_dev," << g17(dev) << "\n";
      os << "completeness," << g17(run.completeness) << "\n";
      os << "outcomes," << run.outcomes.size() << "\n";
      os << "count_success," << counts["Success"] << "\n";
      os << "count_recycle," << counts["Recycle"] << "\n";
      os << "count_fail," << counts["Fail"] << "\n";
    } else {
      os << "protocol: " << cfg.protocol << "  (alpha2 " << g17(cfg.alpha2)
         << ", gamma2 " << g17(cfg.gamma2) << ")\n";
      os << "closed-form success p1:        " << g17(probs.p1) << "\n";
      os << "closed-form recycle:           " << g17(probs.recycle) << "\n";
      os << "closed-form two-round p2:      " << g17(probs.p2) << "\n";
      os << "closed-form success, " << cfg.rounds
         << " round(s): " << g17(p_rounds) << "\n";
      os << "simulated success:             " << g17(run.success) << "\n";
      os << "simulated recycle:             " << g17(run.recycle) << "\n";
      os << "simulated fail:                " << g17(run.fail) << "\n";
      os << "largest closed-form deviation: " << g17(dev) << "\n";
      os << "completeness:                  " << g17(run.completeness) << "\n";
      os << "outcome records: " << run.outcomes.size() << " (success "
         << counts["Success"] << ", recycle " << counts["Recycle"] << ", fail "
         << counts["Fail"] << ")\n";
    }
  });

  if (dev > cfg.tolerance)
    throw std::runtime_error("simulated aggregates deviate from closed forms by " +
                             g17(dev));
  return 0;
}

int cmd_table(const RunConfig& cfg) {
  const SourceParams p = params_of(cfg);
  const auto run = hyperecp::detection::run_protocol(p, kind_of(cfg));
  const auto table = hyperecp::detection::derive_signature_table(run);

  with_sink(cfg, [&](std::ostream& os) {
    if (cfg.format == "json") {
      hyperecp::detection::write_table_json(table, os);
    } else if (cfg.format == "pretty") {
      const bool ghz = run.kind == hyperecp::detection::ProtocolKind::Ghz;
      for (const auto& r : table.rows) {
        if (ghz) os << r.charlie << "  ";
        os << r.pattern << "  interval " << r.interval << "  "
           << hyperecp::detection::outcome_class_name(r.cls) << "  "
           << (r.reference.empty() ? "-" : r.reference) << "  "
           << (r.feedforward.empty() ? "-" : r.feedforward) << "  "
           << g17(r.probability) << "\n";
      }
    } else {
      hyperecp::detection::write_table_csv(table, os);
    }
  });

  if (cfg.compare_paper) {
    const bool ghz = run.kind == hyperecp::detection::ProtocolKind::Ghz;
    const auto rl = ghz ? hyperecp::published::match_ghz(run.outcomes)
                        : hyperecp::published::match_bell(run.outcomes);
    std::cout << rl.str(ghz) << "\n";
    std::cout << "bijection found: derived table matches the published rows\n";
  }
  return 0;
}

int cmd_sweep(const RunConfig& cfg) {
  const auto rows = hyperecp::analysis::sweep({cfg.step});
  with_sink(cfg, [&](std::ostream& os) {
    if (cfg.format == "json")
      hyperecp::analysis::write_sweep_json(rows, os);
    else
      hyperecp::analysis::write_sweep_csv(rows, os);
  });
  return 0;
}

int cmd_verify(const char* argv0) {
  std::string exe = argv0;
  std::error_code ec;
  const fs::path self = fs::read_symlink("/proc/self/exe", ec);
  if (!ec) exe = self.string();
  const int fails = hyperecp::verify::run_acceptance(std::cout, {exe});
  return fails == 0 ? 0 : 2;
}

void add_source_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--protocol", cfg.protocol, "Protocol to run")
      ->check(CLI::IsMember({"bell", "ghz"}))
      ->capture_default_str();
  cmd->add_option("--alpha2", cfg.alpha2, "Polarization intensity |alpha|^2, in (0,1)")
      ->capture_default_str();
  cmd->add_option("--gamma2", cfg.gamma2, "Spatial intensity |gamma|^2, in (0,1)")
      ->capture_default_str();
  cmd->add_option("--arg-alpha", cfg.arg_alpha, "Phase of alpha in radians")
      ->capture_default_str();
  cmd->add_option("--arg-gamma", cfg.arg_gamma, "Phase of gamma in radians")
      ->capture_default_str();
  cmd->add_option("--output", cfg.output,
                  "Output file (relative paths join HYPERECP_OUTPUT_DIR)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact simulator of the heralded hyperentanglement concentration protocols"};
  app.require_subcommand(1);

  RunConfig cfg;

  CLI::App* run = app.add_subcommand("run", "Run one protocol and report probabilities");
  add_source_flags(run, cfg);
  run->add_option("--format", cfg.format, "pretty, csv, or json")
      ->check(CLI::IsMember({"pretty", "csv", "json"}))
      ->capture_default_str();
  run->add_option("--tolerance", cfg.tolerance,
                  "Closed-form agreement tolerance for the consistency check")
      ->capture_default_str();
  run->add_option("--rounds", cfg.rounds,
                  "Concentration rounds in the closed-form cumulative success")
      ->capture_default_str();
  run->add_option("--circuit", cfg.circuit_file,
                  "Evolve the source state through a circuit text file instead")
      ->check(CLI::ExistingFile);

  CLI::App* table = app.add_subcommand("table", "Derive the detection signature table");
  add_source_flags(table, cfg);
  table->add_option("--format", cfg.format, "csv, json, or pretty")
      ->check(CLI::IsMember({"pretty", "csv", "json"}));
  table->add_flag("--compare-paper", cfg.compare_paper,
                  "Check the table against the published rows and print the relabeling");

  CLI::App* sweep = app.add_subcommand("sweep", "Tabulate probabilities over the intensity grid");
  sweep->add_option("--step", cfg.step, "Grid step in (0, 0.5]")->capture_default_str();
  sweep->add_option("--format", cfg.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--output", cfg.output,
                    "Output file (relative paths join HYPERECP_OUTPUT_DIR)");

  app.add_subcommand("verify", "Run the full acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) return cmd_run(cfg);
    if (table->parsed()) {
      if (!table->count("--format")) cfg.format = "csv";
      return cmd_table(cfg);
    }
    if (sweep->parsed()) {
      if (!sweep->count("--format")) cfg.format = "csv";
      return cmd_sweep(cfg);
    }
    return cmd_verify(argv[0]);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
