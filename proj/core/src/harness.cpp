#include "abin/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "abin/vecmath.hpp"

namespace abin::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = kFnvOffset;
  for (unsigned char c : s) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw AbinError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw AbinError("cannot write file: " + path.string());
  out << content;
}

std::optional<std::uint64_t> env_seed_override() {
  const char* v = std::getenv("ABIN_SEED");
  if (!v || !*v) return std::nullopt;
  return std::strtoull(v, nullptr, 10);
}

TopicMix parse_mix(const json& j) {
  TopicMix mix;
  mix.yin = j.value("yin", 0.0);
  mix.yang = j.value("yang", 0.0);
  mix.neutral = j.value("neutral", 0.0);
  const double sum = mix.yin + mix.yang + mix.neutral;
  if (std::abs(sum - 1.0) > 1e-9) throw BadMix(sum);
  return mix;
}

json summary_to_json(const metrics::Summary& s) {
  auto stat = [](const metrics::MetricStats& m) {
    return json{{"mean", m.mean}, {"std", m.stddev}};
  };
  return json{{"rounds", s.rounds},       {"coverage", stat(s.coverage)},
              {"rr", stat(s.rr)},         {"pre", stat(s.pre)},
              {"hit", stat(s.hit)},       {"best_diff_mean", stat(s.best_diff_mean)}};
}

metrics::Summary summary_from_json(const json& j) {
  metrics::Summary s;
  auto stat = [&](const char* key) {
    metrics::MetricStats m;
    m.mean = j.at(key).at("mean").get<double>();
    m.stddev = j.at(key).at("std").get<double>();
    return m;
  };
  s.rounds = j.at("rounds").get<std::size_t>();
  s.coverage = stat("coverage");
  s.rr = stat("rr");
  s.pre = stat("pre");
  s.hit = stat("hit");
  s.best_diff_mean = stat("best_diff_mean");
  return s;
}

std::string csv_row(const RoundRecord& r) {
  std::ostringstream ss;
  if (r.skipped) {
    ss << r.user << ',' << r.round << ",skipped,,,,,,";
    return ss.str();
  }
  ss << r.user << ',' << r.round << ',' << fmt_double(r.m.coverage) << ','
     << fmt_double(r.m.rr) << ',' << fmt_double(r.m.pre) << ',' << r.m.hit << ','
     << fmt_double(r.m.best_diff_mean) << ',' << r.rec.opa_list.size() << ','
     << r.rec.injected.size();
  return ss.str();
}

constexpr const char* kCsvHeader = "user,round,coverage,rr,pre,hit,best_diff_mean,n_opa,n_injected";

std::vector<double> init_preference(const corpus::MessageBase& base, const UserSpec& spec) {
  const int dim = base.embedding_cfg.dim;
  std::vector<double> pref(dim, 0.0);
  if (spec.bias_topic) {
    const auto cands =
        corpus::find_candidates(base, *spec.bias_topic, spec.bias_sentiment, 1.0);
    if (cands.empty())
      throw ConfigError("bias_topic has no messages: " + *spec.bias_topic);
    const auto& emb = cands.front().embedding;
    pref.assign(emb.begin(), emb.end());
  } else {
    // Unbiased default: mean of all embeddings.
    for (const auto& m : base.messages)
      for (int d = 0; d < dim; ++d) pref[d] += m.embedding[d];
    if (vec::norm(pref) == 0.0 && !base.messages.empty()) {
      const auto& emb = base.messages.front().embedding;
      pref.assign(emb.begin(), emb.end());
    }
  }
  vec::normalize(pref);
  return pref;
}

struct UserRun {
  std::vector<RoundRecord> records;
  dcia::MemoryState memory;
  agents::InaCounters counters;
  long memory_resets = 0;
};

UserRun simulate_user(const SimulationConfig& cfg, const corpus::MessageBase& base,
                      const UserSpec& spec) {
  UserRun run;
  agents::UserState user;
  user.id = spec.id;
  user.memory.user = spec.id;
  user.memory.threshold_R = cfg.threshold_R;
  user.preference = init_preference(base, spec);

  agents::SimilarityRecommender recommender;
  agents::RunConfig rc;
  rc.k_recommend = cfg.k_recommend;
  rc.ina.alpha = cfg.alpha;
  rc.ina.k_clusters = cfg.k_clusters;
  rc.ina.max_iters = cfg.max_iters;
  rc.ina.tol = cfg.tol;
  rc.ina.eps_search = cfg.eps_search;
  rc.ina.counters = &run.counters;
  rc.eta = cfg.eta;
  rc.acceptance_seed = cfg.acceptance_seed;
  rc.mode = cfg.mode;

  for (int t = 1; t <= cfg.rounds; ++t) {
    RoundRecord rec;
    rec.user = spec.id;
    rec.round = t;
    auto out = agents::run_round(user, base, recommender, rc, t, cfg.master_seed);
    if (out.memory_reset) ++run.memory_resets;
    if (out.skipped) {
      rec.skipped = true;
    } else {
      rec.rec = std::move(out.round);
      rec.decisions = std::move(out.decisions);
      rec.m = metrics::compute(rec.rec, rec.decisions, base);
    }
    run.records.push_back(std::move(rec));
  }
  run.memory = user.memory;
  return run;
}

json record_to_json(const RoundRecord& r) {
  json j;
  j["user"] = r.user;
  j["round"] = r.round;
  j["skipped"] = r.skipped;
  if (r.skipped) return j;
  auto ids = [](const std::vector<corpus::Message>& ms) {
    std::vector<std::string> out;
    out.reserve(ms.size());
    for (const auto& m : ms) out.push_back(m.id);
    return out;
  };
  j["opa_ids"] = ids(r.rec.opa_list);
  j["injected_ids"] = ids(r.rec.injected);
  j["final_ids"] = ids(r.rec.final_list);
  json decisions = json::array();
  for (const auto& d : r.decisions) decisions.push_back({d.message_id, d.accepted});
  j["decisions"] = decisions;
  j["target_cluster"] = r.rec.target_cluster;
  j["queries"] = r.rec.complement_queries;
  j["misses"] = r.rec.search_misses;
  return j;
}

}  // namespace

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

SimulationConfig parse_config_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(e.what());
  }
  SimulationConfig cfg;
  try {
    cfg.corpus_path = j.at("corpus_path").get<std::string>();
    const std::string fmt = j.value("corpus_format", "jsonl");
    if (fmt == "jsonl")
      cfg.corpus_format = corpus::Format::jsonl;
    else if (fmt == "csv")
      cfg.corpus_format = corpus::Format::csv;
    else
      throw ConfigError("corpus_format must be jsonl or csv");
    if (j.contains("embedding")) {
      cfg.embedding.dim = j["embedding"].value("dim", 256);
      cfg.embedding.seed = j["embedding"].value("seed", std::uint64_t(7));
    }
    if (j.contains("opa")) cfg.k_recommend = j["opa"].value("k_recommend", 10);
    if (j.contains("ina")) {
      const auto& ina = j["ina"];
      cfg.alpha = ina.value("alpha", 0.5);
      cfg.k_clusters = ina.value("k_clusters", 2);
      cfg.max_iters = ina.value("max_iters", 100);
      cfg.tol = ina.value("tol", 0.05);
      cfg.eps_search = ina.value("eps_search", 0.02);
      cfg.threshold_R = ina.value("threshold_R", 3);
    }
    if (j.contains("ua")) {
      cfg.eta = j["ua"].value("eta", 0.3);
      cfg.acceptance_seed = j["ua"].value("acceptance_seed", std::uint64_t(42));
    }
    cfg.master_seed = j.value("master_seed", std::uint64_t(1));
    cfg.rounds = j.at("rounds").get<int>();
    for (const auto& u : j.at("users")) {
      UserSpec spec;
      spec.id = u.at("id").get<std::string>();
      if (u.contains("bias_topic")) spec.bias_topic = u["bias_topic"].get<std::string>();
      spec.bias_sentiment = u.value("bias_sentiment", 0.5);
      cfg.users.push_back(std::move(spec));
    }
    const std::string mode = j.value("mode", "abin");
    if (mode == "abin")
      cfg.mode = agents::Mode::abin;
    else if (mode == "opa_only")
      cfg.mode = agents::Mode::opa_only;
    else
      throw ConfigError("mode must be abin or opa_only");
    cfg.output_dir = j.value("output_dir", "");
    cfg.single_thread = j.value("single_thread", true);
  } catch (const json::exception& e) {
    throw ConfigError(e.what());
  }
  if (cfg.rounds < 1) throw ConfigError("rounds must be >= 1");
  if (cfg.k_clusters < 1) throw ConfigError("k_clusters must be >= 1");
  if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0)) throw ConfigError("alpha must be in [0,1]");
  if (cfg.users.empty()) throw ConfigError("users must be non-empty");
  if (const auto s = env_seed_override()) {
    cfg.master_seed = *s;
    cfg.acceptance_seed = *s;
    cfg.embedding.seed = *s;
  }
  return cfg;
}

SimulationConfig parse_config_file(const std::string& path) {
  return parse_config_json(read_file(path));
}

std::string config_to_json(const SimulationConfig& cfg) {
  json j;
  j["corpus_path"] = cfg.corpus_path;
  j["corpus_format"] = cfg.corpus_format == corpus::Format::jsonl ? "jsonl" : "csv";
  j["embedding"] = {{"dim", cfg.embedding.dim}, {"seed", cfg.embedding.seed}};
  j["opa"] = {{"k_recommend", cfg.k_recommend}};
  j["ina"] = {{"alpha", cfg.alpha},        {"k_clusters", cfg.k_clusters},
              {"max_iters", cfg.max_iters}, {"tol", cfg.tol},
              {"eps_search", cfg.eps_search}, {"threshold_R", cfg.threshold_R}};
  j["ua"] = {{"eta", cfg.eta}, {"acceptance_seed", cfg.acceptance_seed}};
  j["master_seed"] = cfg.master_seed;
  j["rounds"] = cfg.rounds;
  json users = json::array();
  for (const auto& u : cfg.users) {
    json ju{{"id", u.id}, {"bias_sentiment", u.bias_sentiment}};
    if (u.bias_topic) ju["bias_topic"] = *u.bias_topic;
    users.push_back(std::move(ju));
  }
  j["users"] = users;
  j["mode"] = cfg.mode == agents::Mode::abin ? "abin" : "opa_only";
  j["output_dir"] = cfg.output_dir;
  j["single_thread"] = cfg.single_thread;
  return j.dump(2);
}

std::string config_hash(const SimulationConfig& cfg) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(config_to_json(cfg))));
  return buf;
}

SyntheticCorpusSpec parse_corpus_spec_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(e.what());
  }
  SyntheticCorpusSpec spec;
  try {
    if (j.contains("default_mix")) spec.default_mix = parse_mix(j["default_mix"]);
    spec.messages_per_topic = j.at("messages_per_topic").get<int>();
    spec.seed = j.value("seed", std::uint64_t(0));
    if (j.contains("yin_range")) {
      spec.yin_lo = j["yin_range"].at(0).get<double>();
      spec.yin_hi = j["yin_range"].at(1).get<double>();
    }
    if (j.contains("yang_range")) {
      spec.yang_lo = j["yang_range"].at(0).get<double>();
      spec.yang_hi = j["yang_range"].at(1).get<double>();
    }
    for (const auto& t : j.at("topics")) {
      TopicSpec ts;
      if (t.is_string()) {
        ts.name = t.get<std::string>();
      } else {
        ts.name = t.at("name").get<std::string>();
        if (t.contains("mix")) ts.mix = parse_mix(t["mix"]);
      }
      spec.topics.push_back(std::move(ts));
    }
  } catch (const json::exception& e) {
    throw ConfigError(e.what());
  }
  if (spec.messages_per_topic < 2) throw ConfigError("messages_per_topic must be >= 2");
  if (spec.topics.empty()) throw ConfigError("topics must be non-empty");
  if (!(spec.yin_lo >= 0.0 && spec.yin_lo <= spec.yin_hi && spec.yin_hi < 0.5))
    throw ConfigError("yin_range must satisfy 0 <= lo <= hi < 0.5");
  if (!(spec.yang_lo > 0.5 && spec.yang_lo <= spec.yang_hi && spec.yang_hi <= 1.0))
    throw ConfigError("yang_range must satisfy 0.5 < lo <= hi <= 1");
  return spec;
}

SyntheticCorpusSpec parse_corpus_spec_file(const std::string& path) {
  return parse_corpus_spec_json(read_file(path));
}

void generate_synthetic_corpus(const SyntheticCorpusSpec& spec, const std::string& out_path) {
  std::ofstream out(out_path);
  if (!out) throw AbinError("cannot write corpus file: " + out_path);

  for (const auto& topic : spec.topics) {
    const TopicMix mix = topic.mix.value_or(spec.default_mix);
    const double sum = mix.yin + mix.yang + mix.neutral;
    if (std::abs(sum - 1.0) > 1e-9) throw BadMix(sum);
    const int n = spec.messages_per_topic;

    // Largest-remainder allocation keeps the counts exact and deterministic.
    struct Slot {
      double share;
      int count;
      double frac;
    };
    std::vector<Slot> slots{{mix.yin, 0, 0.0}, {mix.yang, 0, 0.0}, {mix.neutral, 0, 0.0}};
    int assigned = 0;
    for (auto& s : slots) {
      const double exact = s.share * n;
      s.count = int(std::floor(exact + 1e-9));
      s.frac = exact - s.count;
      assigned += s.count;
    }
    while (assigned < n) {
      auto it = std::max_element(slots.begin(), slots.end(),
                                 [](const Slot& a, const Slot& b) { return a.frac < b.frac; });
      ++it->count;
      it->frac = -1.0;
      ++assigned;
    }
    const int n_yin = slots[0].count, n_yang = slots[1].count, n_neutral = slots[2].count;

    // Distinct evenly spaced sentiment grids per polarity.
    std::vector<double> sentiments;
    for (int i = 0; i < n_yin; ++i)
      sentiments.push_back(n_yin == 1
                               ? 0.5 * (spec.yin_lo + spec.yin_hi)
                               : spec.yin_lo + i * ((spec.yin_hi - spec.yin_lo) / (n_yin - 1)));
    for (int i = 0; i < n_yang; ++i)
      sentiments.push_back(
          n_yang == 1 ? 0.5 * (spec.yang_lo + spec.yang_hi)
                      : spec.yang_lo + i * ((spec.yang_hi - spec.yang_lo) / (n_yang - 1)));
    for (int i = 0; i < n_neutral; ++i) sentiments.push_back(0.5);

    // Seeded order shuffle; allocation itself is deterministic counting.
    std::mt19937_64 rng(spec.seed ^ fnv1a(topic.name));
    for (std::size_t i = sentiments.size(); i > 1; --i)
      std::swap(sentiments[i - 1], sentiments[rng() % i]);

    for (int i = 0; i < n; ++i) {
      char idbuf[16];
      std::snprintf(idbuf, sizeof(idbuf), "%04d", i);
      json j{{"id", topic.name + "-" + idbuf},
             {"text", topic.name + " daily " + topic.name + " brief story" +
                          std::to_string(i) + " view" + std::to_string(i)},
             {"topic", topic.name},
             {"sentiment", sentiments[i]}};
      out << j.dump() << '\n';
    }
  }
}

RunResult simulate(const SimulationConfig& cfg) {
  if (cfg.output_dir.empty()) throw ConfigError("output_dir must be set");
  const auto base = corpus::ingest(cfg.corpus_path, cfg.corpus_format, cfg.embedding);

  std::vector<UserSpec> users = cfg.users;
  std::sort(users.begin(), users.end(),
            [](const UserSpec& a, const UserSpec& b) { return a.id < b.id; });

  std::vector<UserRun> runs(users.size());
  if (cfg.single_thread) {
    for (std::size_t i = 0; i < users.size(); ++i)
      runs[i] = simulate_user(cfg, base, users[i]);
  } else {
    std::vector<std::future<UserRun>> futures;
    futures.reserve(users.size());
    for (const auto& u : users)
      futures.push_back(std::async(std::launch::async,
                                   [&cfg, &base, u] { return simulate_user(cfg, base, u); }));
    for (std::size_t i = 0; i < futures.size(); ++i) runs[i] = futures[i].get();
  }

  RunResult result;
  result.run_dir = cfg.output_dir;
  fs::create_directories(cfg.output_dir);
  fs::create_directories(fs::path(cfg.output_dir) / "memory");

  std::ostringstream csv, jsonl;
  csv << kCsvHeader << '\n';
  std::vector<metrics::RoundMetrics> reports;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    auto& run = runs[i];
    result.counters.kmeans_calls += run.counters.kmeans_calls;
    result.counters.dcia_calls += run.counters.dcia_calls;
    result.counters.yync_calls += run.counters.yync_calls;
    result.memory_resets += run.memory_resets;
    write_file(fs::path(cfg.output_dir) / "memory" / (users[i].id + ".json"),
               dcia::memory_to_json(run.memory) + "\n");
    for (auto& rec : run.records) {
      csv << csv_row(rec) << '\n';
      jsonl << record_to_json(rec).dump() << '\n';
      if (!rec.skipped) reports.push_back(rec.m);
      result.records.push_back(std::move(rec));
    }
  }
  if (!reports.empty()) result.summary = metrics::aggregate(reports);

  write_file(fs::path(cfg.output_dir) / "rounds.csv", csv.str());
  write_file(fs::path(cfg.output_dir) / "rounds.jsonl", jsonl.str());
  write_file(fs::path(cfg.output_dir) / "summary.json", summary_to_json(result.summary).dump(2) + "\n");

  json manifest;
  manifest["config"] = json::parse(config_to_json(cfg));
  manifest["config_hash"] = config_hash(cfg);
  manifest["mode"] = cfg.mode == agents::Mode::abin ? "abin" : "opa_only";
  manifest["counters"] = {{"kmeans_calls", result.counters.kmeans_calls},
                          {"dcia_calls", result.counters.dcia_calls},
                          {"yync_calls", result.counters.yync_calls}};
  manifest["memory_resets"] = result.memory_resets;
  manifest["rows"] = result.records.size();
  write_file(fs::path(cfg.output_dir) / "manifest.json", manifest.dump(2) + "\n");
  return result;
}

std::vector<SweepRow> sweep_clusters(const SimulationConfig& cfg, const SweepSpec& sweep,
                                     const std::string& out_dir) {
  if (sweep.values.empty()) throw ConfigError("sweep values must be non-empty");
  {
    std::set<int> distinct(sweep.values.begin(), sweep.values.end());
    if (distinct.size() != sweep.values.size())
      throw ConfigError("sweep values must be distinct");
  }
  const int reps = std::max(1, sweep.repetitions);
  fs::create_directories(out_dir);

  std::vector<SweepRow> rows;
  for (int k : sweep.values) {
    SweepRow row;
    row.k_clusters = k;
    double baseline_sum = 0.0, abin_sum = 0.0;
    const auto t0 = std::chrono::steady_clock::now();
    for (int rep = 0; rep < reps; ++rep) {
      SimulationConfig c = cfg;
      c.k_clusters = k;
      c.master_seed = cfg.master_seed + std::uint64_t(rep);
      const std::string cell =
          (fs::path(out_dir) / ("k" + std::to_string(k) + "_rep" + std::to_string(rep)))
              .string();
      c.mode = agents::Mode::opa_only;
      c.output_dir = cell + "_opa";
      baseline_sum += simulate(c).summary.best_diff_mean.mean;
      c.mode = agents::Mode::abin;
      c.output_dir = cell + "_abin";
      abin_sum += simulate(c).summary.best_diff_mean.mean;
    }
    row.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    row.baseline_best_diff = baseline_sum / reps;
    row.abin_best_diff = abin_sum / reps;
    row.improve_pct = row.baseline_best_diff == 0.0
                          ? 0.0
                          : (row.baseline_best_diff - row.abin_best_diff) /
                                row.baseline_best_diff * 100.0;
    rows.push_back(row);
  }

  // Metric columns are seed-deterministic; wall time goes to a side file.
  std::ostringstream table, timing;
  table << "cluster,baseline_best_diff,abin_best_diff,improve_pct\n";
  timing << "cluster,time_s\n";
  for (const auto& r : rows) {
    table << r.k_clusters << ',' << fmt_double(r.baseline_best_diff) << ','
          << fmt_double(r.abin_best_diff) << ',' << fmt_double(r.improve_pct) << '\n';
    timing << r.k_clusters << ',' << fmt_double(r.wall_seconds) << '\n';
  }
  write_file(fs::path(out_dir) / "sweep.csv", table.str());
  write_file(fs::path(out_dir) / "sweep_timing.csv", timing.str());
  return rows;
}

void report(const std::string& run_dir, const std::optional<std::string>& baseline_run_dir,
            const std::string& out_dir) {
  if (!fs::exists(fs::path(run_dir) / "manifest.json")) throw MissingManifest(run_dir);
  const auto summary = summary_from_json(json::parse(read_file((fs::path(run_dir) / "summary.json").string())));
  fs::create_directories(out_dir);

  // Scatter data: one row per (user, round).
  std::ostringstream scatter;
  scatter << "user_index,round,best_diff_mean\n";
  {
    std::ifstream csv(fs::path(run_dir) / "rounds.csv");
    std::string line;
    std::getline(csv, line);  // header
    std::map<std::string, int> user_index;
    while (std::getline(csv, line)) {
      if (line.empty()) continue;
      std::vector<std::string> f;
      std::stringstream ss(line);
      std::string field;
      while (std::getline(ss, field, ',')) f.push_back(field);
      if (f.size() < 7 || f[2] == "skipped") continue;
      auto [it, fresh] = user_index.emplace(f[0], int(user_index.size()));
      scatter << it->second << ',' << f[1] << ',' << f[6] << '\n';
    }
  }
  write_file(fs::path(out_dir) / "scatter.csv", scatter.str());

  std::ostringstream txt;
  auto line = [&](const char* name, const metrics::MetricStats& s) {
    txt << "  " << name << ": mean " << fmt_double(s.mean) << "  std "
        << fmt_double(s.stddev) << '\n';
  };
  txt << "run: " << run_dir << "  (" << summary.rounds << " scored rounds)\n";
  line("coverage", summary.coverage);
  line("rr", summary.rr);
  line("pre", summary.pre);
  line("hit", summary.hit);
  line("best_diff", summary.best_diff_mean);

  if (baseline_run_dir) {
    if (!fs::exists(fs::path(*baseline_run_dir) / "manifest.json"))
      throw MissingManifest(*baseline_run_dir);
    const auto baseline = summary_from_json(
        json::parse(read_file((fs::path(*baseline_run_dir) / "summary.json").string())));
    const auto d = metrics::delta_percent(summary, baseline);
    auto delta_line = [&](const char* name, double v) {
      txt << "  " << name << ": ";
      if (std::isnan(v))
        txt << "n/a\n";
      else
        txt << (v >= 0 ? "+" : "") << fmt_double(v) << "%\n";
    };
    txt << "delta vs baseline " << *baseline_run_dir << ":\n";
    delta_line("coverage", d.coverage);
    delta_line("rr", d.rr);
    delta_line("pre", d.pre);
    delta_line("hit", d.hit);
    delta_line("best_diff", d.best_diff_mean);
  }
  write_file(fs::path(out_dir) / "report.txt", txt.str());
}

AuditResult audit(const std::string& run_dir) {
  AuditResult result;
  auto problem = [&](const std::string& msg) {
    result.ok = false;
    result.problems.push_back(msg);
  };

  if (!fs::exists(fs::path(run_dir) / "manifest.json")) throw MissingManifest(run_dir);
  const json manifest = json::parse(read_file((fs::path(run_dir) / "manifest.json").string()));
  const auto cfg = parse_config_json(manifest.at("config").dump());
  const auto base = corpus::ingest(cfg.corpus_path, cfg.corpus_format, cfg.embedding);
  const bool opa_only = manifest.at("mode").get<std::string>() == "opa_only";

  if (opa_only) {
    const auto& counters = manifest.at("counters");
    if (counters.at("kmeans_calls").get<long>() != 0 ||
        counters.at("dcia_calls").get<long>() != 0 ||
        counters.at("yync_calls").get<long>() != 0)
      problem("opa_only run has non-zero INA instrumentation counters");
  }

  std::vector<std::string> csv_lines;
  {
    std::ifstream csv(fs::path(run_dir) / "rounds.csv");
    std::string line;
    std::getline(csv, line);
    if (line != kCsvHeader) problem("unexpected rounds.csv header");
    while (std::getline(csv, line))
      if (!line.empty()) csv_lines.push_back(line);
  }

  std::ifstream jsonl(fs::path(run_dir) / "rounds.jsonl");
  std::string line;
  std::size_t row = 0;
  while (std::getline(jsonl, line)) {
    if (line.empty()) continue;
    if (row >= csv_lines.size()) {
      problem("rounds.jsonl has more records than rounds.csv");
      break;
    }
    const json j = json::parse(line);
    RoundRecord rec;
    rec.user = j.at("user").get<std::string>();
    rec.round = j.at("round").get<int>();
    rec.skipped = j.at("skipped").get<bool>();
    if (!rec.skipped) {
      const auto opa_ids = j.at("opa_ids").get<std::vector<std::string>>();
      const auto injected_ids = j.at("injected_ids").get<std::vector<std::string>>();
      const auto final_ids = j.at("final_ids").get<std::vector<std::string>>();

      // OPA-preservation: opa_list is an exact prefix of final_list.
      std::vector<std::string> expected = opa_ids;
      expected.insert(expected.end(), injected_ids.begin(), injected_ids.end());
      if (final_ids != expected)
        problem(rec.user + " round " + std::to_string(rec.round) +
                ": final_list is not opa_list ++ injected");
      std::set<std::string> distinct(final_ids.begin(), final_ids.end());
      if (distinct.size() != final_ids.size())
        problem(rec.user + " round " + std::to_string(rec.round) +
                ": duplicate ids in final_list");
      if (opa_only && !injected_ids.empty())
        problem(rec.user + " round " + std::to_string(rec.round) +
                ": opa_only run has injections");

      std::set<std::string> opa_topics;
      for (const auto& id : opa_ids) {
        rec.rec.opa_list.push_back(base.at(id));
        opa_topics.insert(base.at(id).topic);
      }
      for (const auto& id : injected_ids) {
        rec.rec.injected.push_back(base.at(id));
        if (!opa_topics.count(base.at(id).topic))
          problem(rec.user + " round " + std::to_string(rec.round) +
                  ": injected topic absent from OPA list");
      }
      for (const auto& id : final_ids) rec.rec.final_list.push_back(base.at(id));
      rec.rec.round = rec.round;
      rec.rec.target_cluster = j.at("target_cluster").get<int>();
      for (const auto& d : j.at("decisions"))
        rec.decisions.push_back({d.at(0).get<std::string>(), d.at(1).get<bool>()});
      rec.m = metrics::compute(rec.rec, rec.decisions, base);
    }
    const std::string expected_row = csv_row(rec);
    if (expected_row != csv_lines[row])
      problem("csv row " + std::to_string(row + 1) + " does not re-derive: expected '" +
              expected_row + "' got '" + csv_lines[row] + "'");
    ++row;
  }
  if (row != csv_lines.size()) problem("rounds.csv has more rows than rounds.jsonl");
  return result;
}

}  // namespace abin::harness
