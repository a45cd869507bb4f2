// End-to-end acceptance gate. Runs nine checks, prints one PASS/FAIL line
// each, and exits non-zero if any check fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "abin/agents.hpp"
#include "abin/harness.hpp"
#include "abin/yinyang.hpp"

namespace fs = std::filesystem;
using namespace abin;

namespace {

int g_failures = 0;

void verdict(int index, const std::string& name, bool ok, const std::string& detail) {
  std::printf("criterion %d (%s): %s%s%s\n", index, name.c_str(), ok ? "PASS" : "FAIL",
              detail.empty() ? "" : " - ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double uniform01(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

fs::path work_root() {
  static const fs::path root = [] {
    auto p = fs::temp_directory_path() / "abin_acceptance";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return root;
}

// ---- criteria 1-3: closed-form identities of the neutralization curve ----

void criterion_curve_identities() {
  bool ok = true;
  std::string detail;
  for (double o : {0.0, 0.5, 1.0})
    if (std::abs(yinyang::curve(o) - 0.5) > 1e-12) ok = false;
  std::mt19937_64 rng(101);
  for (int i = 0; i < 10000 && ok; ++i) {
    const double o = uniform01(rng);
    const double y = yinyang::curve(o);
    if (std::abs(yinyang::curve(1.0 - o) - (1.0 - y)) > 1e-12) {
      ok = false;
      detail = "symmetry breaks at o=" + std::to_string(o);
    }
    if ((o - 0.5) * (o - 0.5) + (y - 0.5) * (y - 0.5) > 0.25 + 1e-12) {
      ok = false;
      detail = "circle containment breaks at o=" + std::to_string(o);
    }
  }
  verdict(1, "curve identities", ok, detail);
}

void criterion_pairing_oracle() {
  bool ok = true;
  std::string detail;
  std::mt19937_64 rng(202);
  for (int trial = 0; trial < 1000 && ok; ++trial) {
    std::vector<double> scores(rng() % 9);
    for (auto& s : scores) s = uniform01(rng);
    const auto r = yinyang::if_balance({"t", scores});

    std::vector<double> reassembled;
    for (const auto& [a, b] : r.pairs) {
      const auto t = yinyang::tolerance_interval(a);
      if (b < t.lo || b > t.hi) {
        ok = false;
        detail = "pair outside tolerance interval";
      }
      reassembled.push_back(a);
      reassembled.push_back(b);
    }
    for (double v : r.remain) reassembled.push_back(v);
    std::sort(reassembled.begin(), reassembled.end());
    std::sort(scores.begin(), scores.end());
    if (reassembled != scores) {
      ok = false;
      detail = "multiset not conserved";
    }
  }
  verdict(2, "pairing oracle", ok, detail);
}

void criterion_perfect_pair() {
  bool ok = true;
  std::string detail;
  std::mt19937_64 rng(303);
  for (int i = 0; i < 1000 && ok; ++i) {
    const double o = 0.5 * uniform01(rng);
    const double c = yinyang::curve(o);
    if (yinyang::best_diff({"t", {o, c}}) > 1e-12) {
      ok = false;
      detail = "best_diff non-zero at o=" + std::to_string(o);
    }
    const auto r = yinyang::if_balance({"t", {o, c}});
    if (r.pairs.size() != 1 || !r.remain.empty()) {
      ok = false;
      detail = "pairing incomplete at o=" + std::to_string(o);
    }
  }
  verdict(3, "perfect-pair fixed point", ok, detail);
}

// ---- criteria 4-6 and 8-9: paired simulations on a biased corpus ----

std::string biased_corpus() {
  harness::SyntheticCorpusSpec spec;
  spec.topics = {{"economy", harness::TopicMix{0.2, 0.8, 0.0}},
                 {"sports", std::nullopt},
                 {"health", std::nullopt},
                 {"travel", std::nullopt}};
  spec.messages_per_topic = 200;
  spec.default_mix = {0.5, 0.5, 0.0};
  spec.seed = 11;
  // Polarized sentiment grids: extreme Yang scores cannot tolerance-pair with
  // each other, so the per-topic imbalance is visible to the injection step.
  spec.yin_lo = 0.02;
  spec.yin_hi = 0.24;
  spec.yang_lo = 0.76;
  spec.yang_hi = 0.98;
  const auto path = (work_root() / "corpus.jsonl").string();
  harness::generate_synthetic_corpus(spec, path);
  return path;
}

harness::SimulationConfig paired_config(const std::string& corpus, agents::Mode mode,
                                        const std::string& out_dir) {
  harness::SimulationConfig cfg;
  cfg.corpus_path = corpus;
  cfg.k_recommend = 10;
  cfg.k_clusters = 2;
  cfg.rounds = 20;
  // High rejection threshold: occasional rejections of injected messages must
  // not block the target cluster mid-experiment, or injections stop early.
  cfg.threshold_R = 1000;
  cfg.master_seed = 1;
  cfg.acceptance_seed = 42;
  const char* topics[] = {"economy", "sports", "health", "travel"};
  for (int i = 0; i < 20; ++i) {
    char id[8];
    std::snprintf(id, sizeof(id), "u%02d", i);
    cfg.users.push_back({id, std::string(topics[i % 4]), 0.8});
  }
  cfg.mode = mode;
  cfg.output_dir = (work_root() / out_dir).string();
  return cfg;
}

struct PairedRuns {
  harness::RunResult opa;
  harness::RunResult abin;
  harness::SimulationConfig opa_cfg;
  harness::SimulationConfig abin_cfg;
};

PairedRuns run_paired(const std::string& corpus) {
  PairedRuns p;
  p.opa_cfg = paired_config(corpus, agents::Mode::opa_only, "exp_opa");
  p.abin_cfg = paired_config(corpus, agents::Mode::abin, "exp_abin");
  p.opa = harness::simulate(p.opa_cfg);
  p.abin = harness::simulate(p.abin_cfg);
  return p;
}

void criterion_neutralization(const PairedRuns& p) {
  const double opa_bd = p.opa.summary.best_diff_mean.mean;
  const double abin_bd = p.abin.summary.best_diff_mean.mean;
  std::ostringstream detail;
  detail << "opa_only best_diff " << harness::fmt_double(opa_bd) << ", abin "
         << harness::fmt_double(abin_bd);
  verdict(4, "neutralization effect", opa_bd > 0.0 && abin_bd <= 0.5 * opa_bd,
          detail.str());
}

void criterion_diversity(const PairedRuns& p) {
  const auto& o = p.opa.summary;
  const auto& a = p.abin.summary;
  bool ok = true;
  std::ostringstream detail;
  if (a.coverage.mean < o.coverage.mean) {
    ok = false;
    detail << "coverage regressed; ";
  }
  if (a.rr.mean > o.rr.mean) {
    ok = false;
    detail << "repetition rate regressed; ";
  }
  const double rel =
      o.pre.mean == 0.0 ? 0.0 : std::abs(a.pre.mean - o.pre.mean) / o.pre.mean;
  if (rel > 0.15) {
    ok = false;
    detail << "precision drifted " << harness::fmt_double(rel * 100.0) << "%; ";
  }
  detail << "coverage " << harness::fmt_double(o.coverage.mean) << " -> "
         << harness::fmt_double(a.coverage.mean) << ", rr "
         << harness::fmt_double(o.rr.mean) << " -> " << harness::fmt_double(a.rr.mean)
         << ", pre " << harness::fmt_double(o.pre.mean) << " -> "
         << harness::fmt_double(a.pre.mean);
  verdict(5, "diversity direction", ok, detail.str());
}

void criterion_sweep(const std::string& corpus) {
  auto cfg = paired_config(corpus, agents::Mode::abin, "sweep_seed");
  cfg.rounds = 10;
  cfg.users.resize(10);

  const harness::SweepSpec spec{{1, 2, 3, 4, 5, 6, 7, 8}, 1};
  const auto dir1 = (work_root() / "sweep1").string();
  const auto dir2 = (work_root() / "sweep2").string();
  const auto rows = harness::sweep_clusters(cfg, spec, dir1);
  harness::sweep_clusters(cfg, spec, dir2);

  bool ok = rows.size() == 8;
  std::ostringstream detail;
  for (const auto& r : rows) {
    if (r.improve_pct <= 0.0) {
      ok = false;
      detail << "k=" << r.k_clusters << " improve " << harness::fmt_double(r.improve_pct)
             << "%; ";
    }
  }
  if (slurp(fs::path(dir1) / "sweep.csv") != slurp(fs::path(dir2) / "sweep.csv")) {
    ok = false;
    detail << "sweep.csv not deterministic; ";
  }
  if (ok) {
    double lo = rows[0].improve_pct, hi = rows[0].improve_pct;
    for (const auto& r : rows) {
      lo = std::min(lo, r.improve_pct);
      hi = std::max(hi, r.improve_pct);
    }
    detail << "improve% in [" << harness::fmt_double(lo) << ", " << harness::fmt_double(hi)
           << "] over k=1..8";
  }
  verdict(6, "cluster sweep shape", ok, detail.str());
}

void criterion_calibration() {
  bool ok = true;
  std::ostringstream detail;
  agents::UserState user;
  user.id = "mc";
  user.preference = {1.0, 0.0};
  for (double p : {0.1, 0.5, 0.9}) {
    const double c = 2.0 * p - 1.0;
    corpus::Message m;
    m.id = "probe";
    m.topic = "t";
    m.sentiment = 0.5;
    m.embedding = {float(c), float(std::sqrt(std::max(0.0, 1.0 - c * c)))};

    long accepted = 0, total = 0;
    agents::RecommendationRound round;
    round.final_list.assign(1000, m);
    for (int r = 0; r < 100; ++r) {
      round.round = r;
      for (const auto& d : agents::ua_respond(round, user, 42)) {
        ++total;
        if (d.accepted) ++accepted;
      }
    }
    const double rate = double(accepted) / double(total);
    detail << "p=" << harness::fmt_double(p) << " rate=" << harness::fmt_double(rate)
           << "  ";
    if (std::abs(rate - p) > 0.01) ok = false;
  }
  verdict(7, "acceptance-model calibration", ok, detail.str());
}

void criterion_audit(const std::vector<std::string>& run_dirs) {
  bool ok = true;
  std::ostringstream detail;
  int audited = 0;
  for (const auto& dir : run_dirs) {
    const auto r = harness::audit(dir);
    ++audited;
    if (!r.ok) {
      ok = false;
      detail << dir << ": " << r.problems.front() << "; ";
    }
  }
  if (ok) detail << audited << " run directories audited";
  verdict(8, "round-trip audit", ok, detail.str());
}

void criterion_determinism(const PairedRuns& p) {
  bool ok = true;
  std::ostringstream detail;
  int checked = 0;
  for (const auto* orig : {&p.opa_cfg, &p.abin_cfg}) {
    const auto manifest =
        nlohmann::json::parse(slurp(fs::path(orig->output_dir) / "manifest.json"));
    auto cfg = harness::parse_config_json(manifest.at("config").dump());
    cfg.output_dir = orig->output_dir + "_replay";
    harness::simulate(cfg);
    if (slurp(fs::path(orig->output_dir) / "rounds.csv") !=
        slurp(fs::path(cfg.output_dir) / "rounds.csv")) {
      ok = false;
      detail << orig->output_dir << " replay diverged; ";
    }
    ++checked;
  }
  if (ok) detail << checked << " manifests replayed byte-identically";
  verdict(9, "manifest replay determinism", ok, detail.str());
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion_curve_identities();
  criterion_pairing_oracle();
  criterion_perfect_pair();

  const auto corpus = biased_corpus();
  const auto paired = run_paired(corpus);
  criterion_neutralization(paired);
  criterion_diversity(paired);
  criterion_sweep(corpus);
  criterion_calibration();

  std::vector<std::string> run_dirs{paired.opa_cfg.output_dir, paired.abin_cfg.output_dir};
  for (const auto& entry : fs::directory_iterator(work_root() / "sweep1"))
    if (entry.is_directory()) run_dirs.push_back(entry.path().string());
  criterion_audit(run_dirs);
  criterion_determinism(paired);

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s (%d/9 passed, %.1fs)\n", g_failures == 0 ? "ACCEPTED" : "REJECTED",
              9 - g_failures, secs);
  return g_failures == 0 ? 0 : 1;
}
