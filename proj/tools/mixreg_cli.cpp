// mixreg command-line front end. Talks to the library only through the C API.
//
//   mixreg filter-trace --tokens 0101 --rho 0.9 --pi-init 0.5
//   mixreg sweep --kind gamma --pi0 0.9
//   mixreg montecarlo calibration --config cfg.json --output-dir out/
//   mixreg oracle-check --max-length 12
//   mixreg sample --length 100 --seed 7 --signals
//   mixreg replay out/manifest.json
//
// Exit codes: 0 success / all checks pass, 1 check failure, 2 usage, config or
// I/O error. Stdout carries the primary CSV when no output path is given;
// diagnostics go to stderr.

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mixreg/mixreg.h"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(mixreg_status status, const std::string& what) {
  if (status == MIXREG_OK) return;
  std::string msg = what + ": " + mixreg_status_string(status);
  const std::string detail = mixreg_last_error();
  if (!detail.empty()) msg += " (" + detail + ")";
  throw UsageError(msg);
}

std::string format_number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot open '" + path.string() + "' for writing");
  out << content;
  out.flush();
  if (!out) throw UsageError("failed writing '" + path.string() + "'");
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw UsageError(what + ": " + e.what());
  }
}

void write_manifest(const fs::path& path, const std::string& subcommand,
                    const std::string& resolved_config, const json& outputs,
                    const std::optional<std::string>& experiment = std::nullopt) {
  json m;
  m["tool"] = "mixreg";
  m["version"] = mixreg_version();
  m["timestamp"] = utc_timestamp();
  m["subcommand"] = subcommand;
  if (experiment) m["experiment"] = *experiment;
  m["config"] = parse_json(resolved_config, "resolved config");
  m["outputs"] = outputs;
  write_file(path, m.dump(2) + "\n");
}

// Either writes csv (plus a sibling manifest) to `output`, or prints it.
void emit_table(mixreg_table* table, const std::string& subcommand, const std::string& output) {
  const std::string csv = mixreg_table_csv(table);
  if (output.empty()) {
    std::cout << csv;
    return;
  }
  write_file(output, csv);
  write_manifest(output + ".manifest.json", subcommand, mixreg_table_config(table),
                 json{{"csv", output}});
}

// ---- subcommands --------------------------------------------------------------

struct TraceArgs {
  std::string tokens;
  double rho = 0.9;
  double pi_init = 0.5;
  std::string output;
};

int run_filter_trace(const TraceArgs& a) {
  const mixreg_params params{a.rho, a.pi_init, 0.5};
  mixreg_table* table = nullptr;
  const mixreg_status st = mixreg_filter_trace(&params, a.tokens.c_str(), &table);
  if (st == MIXREG_ERR_PARSE) {
    throw UsageError(std::string("malformed token string: ") + mixreg_last_error());
  }
  check(st, "filter-trace");
  std::unique_ptr<mixreg_table, decltype(&mixreg_table_free)> guard(table, mixreg_table_free);
  emit_table(table, "filter-trace", a.output);
  return kExitOk;
}

int run_sweep(const std::string& spec, const std::string& output) {
  mixreg_table* table = nullptr;
  check(mixreg_sweep(spec.c_str(), &table), "sweep");
  std::unique_ptr<mixreg_table, decltype(&mixreg_table_free)> guard(table, mixreg_table_free);
  emit_table(table, "sweep", output);
  return kExitOk;
}

int run_montecarlo(const std::string& experiment, const std::string& config_json,
                   const std::string& output_dir) {
  mixreg_experiment* exp = nullptr;
  check(mixreg_experiment_create(experiment.c_str(), config_json.c_str(), &exp), "montecarlo");
  std::unique_ptr<mixreg_experiment, decltype(&mixreg_experiment_free)> guard(
      exp, mixreg_experiment_free);
  check(mixreg_experiment_run(exp), "montecarlo run");

  const std::string csv = mixreg_experiment_csv(exp);
  if (output_dir.empty()) {
    std::cout << csv;
  } else {
    const fs::path dir(output_dir);
    const fs::path csv_path = dir / "records.csv";
    const fs::path jsonl_path = dir / "records.jsonl";
    write_file(csv_path, csv);
    write_file(jsonl_path, mixreg_experiment_jsonl(exp));
    write_manifest(dir / "manifest.json", "montecarlo", mixreg_experiment_config(exp),
                   json{{"csv", csv_path.string()}, {"jsonl", jsonl_path.string()}},
                   experiment);
    std::cerr << "wrote " << csv_path.string() << ", " << jsonl_path.string() << ", "
              << (dir / "manifest.json").string() << "\n";
  }

  if (mixreg_experiment_passed(exp) == 1) {
    std::cerr << experiment << ": all checks passed (" << mixreg_experiment_record_count(exp)
              << " records)\n";
    return kExitOk;
  }
  std::cerr << experiment << ": FAILED\n" << mixreg_experiment_failures(exp);
  return kExitCheckFailed;
}

int run_oracle_check(std::size_t max_length, const std::vector<double>& rhos,
                     const std::vector<double>& pi_inits) {
  if (max_length < 1 || max_length > 20) {
    throw UsageError("--max-length must be between 1 and 20");
  }
  double max_dev = 0.0;
  std::size_t compared = 0;
  check(mixreg_oracle_check(max_length, rhos.data(), rhos.size(), pi_inits.data(),
                            pi_inits.size(), &max_dev, &compared),
        "oracle-check");
  const bool pass = max_dev <= 1e-12;
  std::cout << "prefixes_compared," << compared << "\n"
            << "max_deviation," << format_number(max_dev) << "\n"
            << "tolerance,1e-12\n"
            << "result," << (pass ? "pass" : "fail") << "\n";
  return pass ? kExitOk : kExitCheckFailed;
}

struct SampleArgs {
  double rho = 0.9;
  double pi_init = 0.5;
  double gamma = 0.9;
  std::size_t length = 100;
  std::uint64_t seed = 1;
  std::size_t count = 1;
  bool signals = false;
  std::string output;
};

int run_sample(const SampleArgs& a) {
  const mixreg_params params{a.rho, a.pi_init, a.gamma};
  std::string out;
  for (std::size_t i = 0; i < a.count; ++i) {
    const std::uint64_t seed = a.count == 1 ? a.seed : mixreg_derive_seed(a.seed, i);
    mixreg_trajectory* t = nullptr;
    check(mixreg_trajectory_sample(&params, a.length, seed, a.signals ? 1 : 0, &t), "sample");
    out += mixreg_trajectory_jsonl(t);
    out += '\n';
    mixreg_trajectory_free(t);
  }
  if (a.output.empty()) {
    std::cout << out;
  } else {
    write_file(a.output, out);
    json config{{"rho", a.rho},       {"pi_init", a.pi_init}, {"gamma", a.gamma},
                {"length", a.length}, {"seed", a.seed},       {"count", a.count},
                {"signals", a.signals}};
    write_manifest(a.output + ".manifest.json", "sample", config.dump(),
                   json{{"jsonl", a.output}});
  }
  return kExitOk;
}

// Re-runs a manifest's subcommand from its resolved config.
int run_replay(const std::string& manifest_path, const std::string& output_override) {
  const json m = parse_json(read_file(manifest_path), "manifest");
  try {
    const std::string sub = m.at("subcommand").get<std::string>();
    const json& config = m.at("config");
    const json& outputs = m.at("outputs");
    auto remap = [&](const std::string& original) {
      if (output_override.empty()) return original;
      return (fs::path(output_override) / fs::path(original).filename()).string();
    };
    if (sub == "montecarlo") {
      std::string dir = fs::path(outputs.at("csv").get<std::string>()).parent_path().string();
      if (!output_override.empty()) dir = output_override;
      return run_montecarlo(m.at("experiment").get<std::string>(), config.dump(), dir);
    }
    if (sub == "sweep") return run_sweep(config.dump(), remap(outputs.at("csv").get<std::string>()));
    if (sub == "filter-trace") {
      TraceArgs a;
      a.tokens = config.at("tokens").get<std::string>();
      a.rho = config.at("rho").get<double>();
      a.pi_init = config.at("pi_init").get<double>();
      a.output = remap(outputs.at("csv").get<std::string>());
      return run_filter_trace(a);
    }
    if (sub == "sample") {
      SampleArgs a;
      a.rho = config.at("rho").get<double>();
      a.pi_init = config.at("pi_init").get<double>();
      a.gamma = config.at("gamma").get<double>();
      a.length = config.at("length").get<std::size_t>();
      a.seed = config.at("seed").get<std::uint64_t>();
      a.count = config.at("count").get<std::size_t>();
      a.signals = config.at("signals").get<bool>();
      a.output = remap(outputs.at("jsonl").get<std::string>());
      return run_sample(a);
    }
    throw UsageError("manifest names unknown subcommand '" + sub + "'");
  } catch (const json::exception& e) {
    throw UsageError(std::string("manifest: ") + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Binary mixed-regime process toolkit: filtering, sufficiency-gap analytics "
               "and Monte Carlo verification"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mixreg_version()));

  // filter-trace
  TraceArgs trace;
  auto* trace_cmd = app.add_subcommand("filter-trace", "Trace the regime posterior along a prefix");
  trace_cmd->add_option("--tokens", trace.tokens, "Binary token string, e.g. 0101")->required();
  trace_cmd->add_option("--rho", trace.rho, "Regime retention probability")->capture_default_str();
  trace_cmd->add_option("--pi-init", trace.pi_init, "Prior on the alternating regime")
      ->capture_default_str();
  trace_cmd->add_option("-o,--output", trace.output, "CSV path (default: stdout)");

  // sweep
  std::string sweep_kind;
  std::vector<double> sweep_pi0, sweep_alpha, sweep_temp, sweep_gamma;
  std::string sweep_output;
  auto* sweep_cmd = app.add_subcommand("sweep", "Closed-form tables over parameter grids");
  sweep_cmd->add_option("--kind", sweep_kind, "gap | temperature | gamma | residual-mi")
      ->required()
      ->check(CLI::IsMember({"gap", "temperature", "gamma", "residual-mi"}));
  sweep_cmd->add_option("--pi0", sweep_pi0, "Comma-separated pi0 grid")->delimiter(',');
  sweep_cmd->add_option("--alpha", sweep_alpha, "Comma-separated alpha grid")->delimiter(',');
  sweep_cmd->add_option("--temperature", sweep_temp, "Comma-separated temperature grid")
      ->delimiter(',');
  sweep_cmd->add_option("--gamma", sweep_gamma, "Comma-separated gamma grid")->delimiter(',');
  sweep_cmd->add_option("-o,--output", sweep_output, "CSV path (default: stdout)");

  // montecarlo
  std::string experiment;
  std::string config_path;
  std::string mc_output;
  json mc_flags = json::object();
  auto* mc_cmd = app.add_subcommand("montecarlo", "Run a Monte Carlo verification experiment");
  mc_cmd->add_option("experiment", experiment, "calibration | false-authority | threshold | temperature")
      ->required()
      ->check(CLI::IsMember({"calibration", "false-authority", "threshold", "temperature"}));
  mc_cmd->add_option("--config", config_path, "JSON config; flags override its keys")
      ->check(CLI::ExistingFile);
  mc_cmd->add_option("--output-dir", mc_output,
                     "Directory for records.csv, records.jsonl, manifest.json "
                     "(default: CSV to stdout only)");
  double mc_rho = 0, mc_pi = 0, mc_gamma = 0, mc_band = 0;
  std::size_t mc_ntraj = 0, mc_len = 0, mc_workers = 0, mc_bins = 0, mc_min = 0;
  std::uint64_t mc_seed = 0;
  bool mc_aware = false;
  std::vector<double> mc_sweep_t, mc_sweep_g, mc_sweep_c;
  auto* o_rho = mc_cmd->add_option("--rho", mc_rho);
  auto* o_pi = mc_cmd->add_option("--pi-init", mc_pi);
  auto* o_gamma = mc_cmd->add_option("--gamma", mc_gamma);
  auto* o_ntraj = mc_cmd->add_option("--n-trajectories", mc_ntraj);
  auto* o_len = mc_cmd->add_option("--trajectory-length", mc_len);
  auto* o_seed = mc_cmd->add_option("--master-seed", mc_seed);
  auto* o_workers = mc_cmd->add_option("--workers", mc_workers, "Worker threads; never changes results");
  auto* o_aware = mc_cmd->add_option("--aware", mc_aware, "Signal-aware predictor (true/false)");
  auto* o_bins = mc_cmd->add_option("--bins", mc_bins);
  auto* o_band = mc_cmd->add_option("--sigma-band", mc_band);
  auto* o_min = mc_cmd->add_option("--min-samples", mc_min);
  auto* o_st = mc_cmd->add_option("--sweep-temperature", mc_sweep_t)->delimiter(',');
  auto* o_sg = mc_cmd->add_option("--sweep-gamma", mc_sweep_g)->delimiter(',');
  auto* o_sc = mc_cmd->add_option("--sweep-confidence-cut", mc_sweep_c)->delimiter(',');

  // oracle-check
  std::size_t max_length = 12;
  std::vector<double> oracle_rhos = {0.6, 0.75, 0.9, 0.99};
  std::vector<double> oracle_pis = {0.1, 0.5, 0.9};
  auto* oracle_cmd =
      app.add_subcommand("oracle-check", "Compare the forward filter with path enumeration");
  oracle_cmd->add_option("--max-length", max_length, "Longest prefix (1..20)")->capture_default_str();
  oracle_cmd->add_option("--rho", oracle_rhos, "Comma-separated rho grid")->delimiter(',');
  oracle_cmd->add_option("--pi-init", oracle_pis, "Comma-separated pi_init grid")->delimiter(',');

  // sample
  SampleArgs sample;
  auto* sample_cmd = app.add_subcommand("sample", "Sample trajectories as JSON lines");
  sample_cmd->add_option("--rho", sample.rho)->capture_default_str();
  sample_cmd->add_option("--pi-init", sample.pi_init)->capture_default_str();
  sample_cmd->add_option("--gamma", sample.gamma)->capture_default_str();
  sample_cmd->add_option("--length", sample.length)->capture_default_str();
  sample_cmd->add_option("--seed", sample.seed)->capture_default_str();
  sample_cmd->add_option("--count", sample.count, "Trajectories; seeds derived from --seed")
      ->capture_default_str();
  sample_cmd->add_flag("--signals", sample.signals, "Include oracle signals");
  sample_cmd->add_option("-o,--output", sample.output, "JSONL path (default: stdout)");

  // replay
  std::string manifest_path;
  std::string replay_output;
  auto* replay_cmd = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay_cmd->add_option("manifest", manifest_path)->required()->check(CLI::ExistingFile);
  replay_cmd->add_option("--output-dir", replay_output, "Write outputs here instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*trace_cmd) return run_filter_trace(trace);
    if (*sweep_cmd) {
      json spec{{"kind", sweep_kind}};
      if (!sweep_pi0.empty()) spec["pi0"] = sweep_pi0;
      if (!sweep_alpha.empty()) spec["alpha"] = sweep_alpha;
      if (!sweep_temp.empty()) spec["temperature"] = sweep_temp;
      if (!sweep_gamma.empty()) spec["gamma"] = sweep_gamma;
      return run_sweep(spec.dump(), sweep_output);
    }
    if (*mc_cmd) {
      json config = json::object();
      if (!config_path.empty()) {
        config = parse_json(read_file(config_path), "config '" + config_path + "'");
        if (!config.is_object()) throw UsageError("config must be a JSON object");
      }
      if (*o_rho) config["rho"] = mc_rho;
      if (*o_pi) config["pi_init"] = mc_pi;
      if (*o_gamma) config["gamma"] = mc_gamma;
      if (*o_ntraj) config["n_trajectories"] = mc_ntraj;
      if (*o_len) config["trajectory_length"] = mc_len;
      if (*o_seed) config["master_seed"] = mc_seed;
      if (*o_workers) config["workers"] = mc_workers;
      if (*o_aware) config["aware"] = mc_aware;
      if (*o_bins) config["bins"] = mc_bins;
      if (*o_band) config["sigma_band"] = mc_band;
      if (*o_min) config["min_samples"] = mc_min;
      if (*o_st) config["sweep_temperature"] = mc_sweep_t;
      if (*o_sg) config["sweep_gamma"] = mc_sweep_g;
      if (*o_sc) config["sweep_confidence_cut"] = mc_sweep_c;
      return run_montecarlo(experiment, config.dump(), mc_output);
    }
    if (*oracle_cmd) return run_oracle_check(max_length, oracle_rhos, oracle_pis);
    if (*sample_cmd) return run_sample(sample);
    if (*replay_cmd) return run_replay(manifest_path, replay_output);
  } catch (const UsageError& e) {
    std::cerr << "mixreg: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
