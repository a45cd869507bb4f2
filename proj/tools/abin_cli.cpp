// Command-line front end for the AbIN simulation harness.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "abin/corpus.hpp"
#include "abin/harness.hpp"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeError = 3;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw abin::ConfigError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AbIN: information-neutrality wrapper and simulation harness"};
  app.require_subcommand(1);

  std::string config_path, out, in_path, run_dir, format = "jsonl";
  std::optional<std::string> baseline;
  std::optional<std::uint64_t> seed;
  int dim = 256;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "configuration file (JSON)");
    cmd->add_option("--seed", seed, "seed override");
    cmd->add_option("--out", out, "output path");
  };

  auto* ingest = app.add_subcommand("ingest", "ingest a corpus and serialize the message base");
  add_common(ingest);
  ingest->add_option("--in", in_path, "corpus file")->required();
  ingest->add_option("--format", format, "jsonl or csv");
  ingest->add_option("--dim", dim, "embedding dimension");

  auto* gen = app.add_subcommand("gen-corpus", "generate a deterministic synthetic corpus");
  add_common(gen);

  auto* sim = app.add_subcommand("simulate", "run a multi-round simulation");
  add_common(sim);

  auto* sweep = app.add_subcommand("sweep-clusters", "paired opa_only/abin runs over k_clusters");
  add_common(sweep);

  auto* rep = app.add_subcommand("report", "summarize a run (optionally against a baseline)");
  add_common(rep);
  rep->add_option("--run", run_dir, "run directory")->required();
  rep->add_option("--baseline", baseline, "baseline run directory");

  auto* aud = app.add_subcommand("audit", "re-derive every CSV row from the round log");
  add_common(aud);
  aud->add_option("--run", run_dir, "run directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (ingest->parsed()) {
      if (out.empty()) throw abin::ConfigError("--out directory required");
      abin::corpus::EmbeddingConfig ecfg;
      ecfg.dim = dim;
      if (!config_path.empty()) {
        const auto j = nlohmann::json::parse(slurp(config_path));
        if (j.contains("embedding")) {
          ecfg.dim = j["embedding"].value("dim", ecfg.dim);
          ecfg.seed = j["embedding"].value("seed", ecfg.seed);
        }
      }
      if (seed) ecfg.seed = *seed;
      const auto fmt = format == "csv" ? abin::corpus::Format::csv : abin::corpus::Format::jsonl;
      const auto base = abin::corpus::ingest(in_path, fmt, ecfg);
      abin::corpus::save_base(base, out);
      std::cout << "ingested " << base.messages.size() << " messages, "
                << base.topic_index.size() << " topics -> " << out << '\n';
    } else if (gen->parsed()) {
      if (config_path.empty()) throw abin::ConfigError("--config required");
      if (out.empty()) throw abin::ConfigError("--out file required");
      auto spec = abin::harness::parse_corpus_spec_file(config_path);
      if (seed) spec.seed = *seed;
      abin::harness::generate_synthetic_corpus(spec, out);
      std::cout << "wrote corpus: " << out << '\n';
    } else if (sim->parsed()) {
      if (config_path.empty()) throw abin::ConfigError("--config required");
      auto cfg = abin::harness::parse_config_file(config_path);
      if (seed) cfg.master_seed = *seed;
      if (!out.empty()) cfg.output_dir = out;
      const auto result = abin::harness::simulate(cfg);
      std::cout << "run dir: " << result.run_dir << "  rows: " << result.records.size()
                << "  best_diff mean: "
                << abin::harness::fmt_double(result.summary.best_diff_mean.mean) << '\n';
    } else if (sweep->parsed()) {
      if (config_path.empty()) throw abin::ConfigError("--config required");
      if (out.empty()) throw abin::ConfigError("--out directory required");
      auto cfg = abin::harness::parse_config_file(config_path);
      if (seed) cfg.master_seed = *seed;
      abin::harness::SweepSpec spec;
      const auto j = nlohmann::json::parse(slurp(config_path));
      if (!j.contains("sweep")) throw abin::ConfigError("config needs a sweep block");
      spec.values = j["sweep"].at("values").get<std::vector<int>>();
      spec.repetitions = j["sweep"].value("repetitions", 1);
      const auto rows = abin::harness::sweep_clusters(cfg, spec, out);
      std::cout << "cluster  baseline  abin  improve%\n";
      for (const auto& r : rows)
        std::cout << r.k_clusters << "  " << abin::harness::fmt_double(r.baseline_best_diff)
                  << "  " << abin::harness::fmt_double(r.abin_best_diff) << "  "
                  << abin::harness::fmt_double(r.improve_pct) << '\n';
    } else if (rep->parsed()) {
      if (out.empty()) throw abin::ConfigError("--out directory required");
      abin::harness::report(run_dir, baseline, out);
      std::cout << slurp(out + "/report.txt");
    } else if (aud->parsed()) {
      const auto result = abin::harness::audit(run_dir);
      if (result.ok) {
        std::cout << "audit ok: " << run_dir << '\n';
      } else {
        for (const auto& p : result.problems) std::cerr << "audit: " << p << '\n';
        return kExitRuntimeError;
      }
    }
  } catch (const abin::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntimeError;
  }
  return 0;
}
