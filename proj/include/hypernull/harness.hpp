#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "hypernull/errors.hpp"
#include "hypernull/hypergraph.hpp"
#include "hypernull/json_io.hpp"
#include "hypernull/metrics.hpp"
#include "hypernull/random.hpp"
#include "hypernull/sampling.hpp"

namespace hypernull {

// HYPERGRAPH: randomize the hypergraph, then evaluate (projecting if the
// statistic needs it). PROJECTED: project first, randomize the dyadic
// multigraph with the same chains restricted to 2-edges.
enum class Space { Hypergraph, Projected };

inline const char* to_string(Space s) { return s == Space::Hypergraph ? "hypergraph" : "projected"; }

inline std::optional<Space> parse_space(const std::string& s) {
  if (s == "hypergraph") return Space::Hypergraph;
  if (s == "projected") return Space::Projected;
  return std::nullopt;
}

// Unset burn_in / interval default to 20 m and m steps, m being the edge
// count of the hypergraph the chain runs on.
struct NullConfig {
  std::optional<std::uint64_t> burn_in;
  std::optional<std::uint64_t> interval;
  std::uint64_t samples = 500;
  std::uint64_t seed = 0;
  std::size_t chains = 1;
  std::size_t threads = 0;  // 0: HYPERNULL_THREADS or hardware concurrency
};

struct ResolvedConfig {
  std::uint64_t burn_in = 0;
  std::uint64_t interval = 1;
};

inline ResolvedConfig resolve(const NullConfig& config, std::size_t m) {
  ResolvedConfig out;
  out.burn_in = config.burn_in.value_or(20 * static_cast<std::uint64_t>(m));
  out.interval = config.interval.value_or(std::max<std::uint64_t>(1, m));
  return out;
}

inline std::size_t thread_cap(std::size_t requested) {
  std::size_t cap = requested;
  if (cap == 0) {
    if (const char* env = std::getenv("HYPERNULL_THREADS")) {
      cap = static_cast<std::size_t>(std::strtoull(env, nullptr, 10));
    }
  } else if (const char* env = std::getenv("HYPERNULL_THREADS")) {
    const auto limit = static_cast<std::size_t>(std::strtoull(env, nullptr, 10));
    if (limit > 0) cap = std::min(cap, limit);
  }
  if (cap == 0) cap = std::max(1u, std::thread::hardware_concurrency());
  return cap;
}

// Runs config.chains independent chains (sub-seeds derived from config.seed)
// and returns per_sample(sample, global_index) in (chain id, step) order. The
// output does not depend on the thread count.
template <class T, class PerSample>
std::vector<T> run_null_chains(const Hypergraph& h0, Model model, const NullConfig& config, PerSample&& per_sample) {
  const std::size_t chains = std::max<std::size_t>(1, config.chains);
  const auto resolved = resolve(config, h0.num_edges());
  std::vector<std::uint64_t> counts(chains), offsets(chains);
  std::uint64_t offset = 0;
  for (std::size_t c = 0; c < chains; ++c) {
    counts[c] = config.samples / chains + (c < config.samples % chains ? 1 : 0);
    offsets[c] = offset;
    offset += counts[c];
  }

  std::vector<std::vector<T>> results(chains);
  std::vector<std::exception_ptr> errors(chains);
  auto work = [&](std::size_t c) {
    try {
      if (counts[c] == 0) return;
      ChainConfig cc{model, resolved.burn_in, resolved.interval, counts[c], derive_seed(config.seed, stream::chain + c)};
      results[c].reserve(counts[c]);
      run_chain(h0, cc, [&](const Hypergraph& sample, std::size_t i) {
        results[c].push_back(per_sample(sample, static_cast<std::size_t>(offsets[c] + i)));
      });
    } catch (...) {
      errors[c] = std::current_exception();
    }
  };

  check_chain_config(h0, ChainConfig{model, resolved.burn_in, resolved.interval, config.samples, config.seed});
  const std::size_t threads = std::min(chains, thread_cap(config.threads));
  if (threads <= 1) {
    for (std::size_t c = 0; c < chains; ++c) work(c);
  } else {
    for (std::size_t first = 0; first < chains; first += threads) {
      std::vector<std::thread> pool;
      for (std::size_t c = first; c < std::min(chains, first + threads); ++c) pool.emplace_back(work, c);
      for (auto& t : pool) t.join();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::vector<T> merged;
  merged.reserve(config.samples);
  for (auto& r : results) merged.insert(merged.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
  return merged;
}

// ---------------------------------------------------------------------------
// Statistics

using StatisticFn = std::function<double(const Hypergraph&, std::uint64_t seed)>;

// on_dyadic receives the dyadic multigraph (2-edges, parallel copies kept);
// leave it empty for natively polyadic statistics.
struct Statistic {
  std::string name;
  StatisticFn on_hypergraph;
  StatisticFn on_dyadic;
};

inline Statistic clustering_statistic() {
  auto fn = [](const Hypergraph& h, std::uint64_t) { return avg_local_clustering(h); };
  return {"clustering", fn, fn};
}

inline Statistic assortativity_statistic(ChoiceKind kind, std::size_t reps = 32) {
  Statistic s;
  s.name = std::string("assortativity:") + to_string(kind);
  s.on_hypergraph = [kind, reps](const Hypergraph& h, std::uint64_t seed) {
    return spearman_assortativity(h, {kind, derive_seed(seed, stream::tie_break)}, reps, seed).rho;
  };
  s.on_dyadic = [](const Hypergraph& h, std::uint64_t) { return dyadic_spearman(project(h, ProjectionMode::Simple)); };
  return s;
}

inline Statistic edge_count_statistic() {
  auto fn = [](const Hypergraph& h, std::uint64_t) { return static_cast<double>(h.num_edges()); };
  return {"edge_count", fn, fn};
}

inline Statistic mean_intersection_statistic() {
  Statistic s;
  s.name = "mean_intersection";
  s.on_hypergraph = [](const Hypergraph& h, std::uint64_t) { return marginal_profile(h).mean(); };
  return s;
}

// The hypergraph the null chain runs on for `space`.
inline Hypergraph null_input(const Hypergraph& h, Space space) {
  if (space == Space::Hypergraph) return h;
  return to_dyadic_hypergraph(project(h, ProjectionMode::Multi));
}

// ---------------------------------------------------------------------------
// Null test

struct NullTestReport {
  std::string dataset;
  std::string statistic;
  Model model = Model::Vertex;
  Space space = Space::Hypergraph;
  double observed = 0.0;
  std::vector<double> samples;
  std::size_t skipped_samples = 0;  // null samples where the statistic was undefined
  double null_mean = 0.0;
  double null_sd = 0.0;
  std::optional<double> z;
  bool constant_statistic = false;
  double p_lower = 1.0;
  double p_upper = 1.0;
  std::uint64_t seed = 0;
  std::uint64_t burn_in = 0;
  std::uint64_t interval = 1;
  std::uint64_t requested_samples = 0;
  std::size_t chains = 1;
};

inline void summarize(NullTestReport& r) {
  const auto s = r.samples.size();
  r.null_mean = 0.0;
  r.null_sd = 0.0;
  if (s > 0) {
    for (double x : r.samples) r.null_mean += x;
    r.null_mean /= static_cast<double>(s);
  }
  if (s > 1) {
    double ss = 0.0;
    for (double x : r.samples) ss += (x - r.null_mean) * (x - r.null_mean);
    r.null_sd = std::sqrt(ss / static_cast<double>(s - 1));
  }
  r.constant_statistic = s > 0 && std::all_of(r.samples.begin(), r.samples.end(),
                                              [&](double x) { return x == r.samples.front(); });
  if (r.null_sd > 0.0 && !r.constant_statistic) {
    r.z = (r.observed - r.null_mean) / r.null_sd;
  } else {
    r.z.reset();
  }
  std::size_t above = 0;
  std::size_t below = 0;
  for (double x : r.samples) {
    if (x >= r.observed) ++above;
    if (x <= r.observed) ++below;
  }
  r.p_upper = static_cast<double>(1 + above) / static_cast<double>(s + 1);
  r.p_lower = static_cast<double>(1 + below) / static_cast<double>(s + 1);
}

inline NullTestReport null_test(const Hypergraph& h, const Statistic& statistic, Model model, Space space,
                                const NullConfig& config) {
  const StatisticFn& eval = space == Space::Hypergraph ? statistic.on_hypergraph : statistic.on_dyadic;
  if (!eval)
    throw SpaceMismatch("statistic '" + statistic.name + "' cannot be evaluated in " + to_string(space) + " space");

  const Hypergraph input = null_input(h, space);
  NullTestReport r;
  r.statistic = statistic.name;
  r.model = model;
  r.space = space;
  r.seed = config.seed;
  r.requested_samples = config.samples;
  r.chains = std::max<std::size_t>(1, config.chains);
  const auto resolved = resolve(config, input.num_edges());
  r.burn_in = resolved.burn_in;
  r.interval = resolved.interval;
  r.observed = eval(input, derive_seed(config.seed, stream::statistic));

  auto values = run_null_chains<std::optional<double>>(
      input, model, config, [&](const Hypergraph& sample, std::size_t index) -> std::optional<double> {
        try {
          return eval(sample, derive_seed(config.seed, stream::statistic + 1 + index));
        } catch (const DegenerateStatistic&) {
          return std::nullopt;
        }
      });
  for (const auto& v : values) {
    if (v) {
      r.samples.push_back(*v);
    } else {
      ++r.skipped_samples;
    }
  }
  summarize(r);
  return r;
}

// ---------------------------------------------------------------------------
// Intersection-profile null

struct ProfileNullResult {
  Model model = Model::Vertex;
  IntersectionProfile observed;
  std::vector<double> null_mean;  // r̂(j), indexed by j
  std::vector<double> null_se;    // Monte Carlo standard error of r̂(j)
  std::optional<IntersectionProfile> analytic;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t burn_in = 0;
  std::uint64_t interval = 1;

  double ratio(std::size_t j) const {
    const double expected = j < null_mean.size() ? null_mean[j] : 0.0;
    return expected > 0.0 ? observed.at(j) / expected : std::numeric_limits<double>::infinity();
  }
};

inline ProfileNullResult profile_null(const Hypergraph& h, Model model, const NullConfig& config,
                                      bool with_analytic = true) {
  ProfileNullResult out;
  out.model = model;
  out.seed = config.seed;
  const auto resolved = resolve(config, h.num_edges());
  out.burn_in = resolved.burn_in;
  out.interval = resolved.interval;
  out.observed = marginal_profile(h);
  auto profiles = run_null_chains<std::vector<double>>(
      h, model, config, [](const Hypergraph& sample, std::size_t) { return marginal_profile(sample).probability; });
  out.samples = profiles.size();
  const std::size_t width = out.observed.probability.size();
  out.null_mean.assign(width, 0.0);
  out.null_se.assign(width, 0.0);
  for (const auto& p : profiles)
    for (std::size_t j = 0; j < std::min(width, p.size()); ++j) out.null_mean[j] += p[j];
  if (!profiles.empty())
    for (auto& v : out.null_mean) v /= static_cast<double>(profiles.size());
  if (profiles.size() > 1) {
    for (std::size_t j = 0; j < width; ++j) {
      double ss = 0.0;
      for (const auto& p : profiles) {
        const double x = j < p.size() ? p[j] : 0.0;
        ss += (x - out.null_mean[j]) * (x - out.null_mean[j]);
      }
      const double sd = std::sqrt(ss / static_cast<double>(profiles.size() - 1));
      out.null_se[j] = sd / std::sqrt(static_cast<double>(profiles.size()));
    }
  }
  if (with_analytic) out.analytic = analytic_marginal_profile(h);
  return out;
}

inline RatioGrid grid_null(const Hypergraph& h, Model model, const NullConfig& config) {
  const auto resolved = resolve(config, h.num_edges());
  return null_ratio_grid(h, ChainConfig{model, resolved.burn_in, resolved.interval, config.samples, config.seed});
}

// ---------------------------------------------------------------------------
// Serialization

// Shortest round-trip decimal form; deterministic across runs.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

inline ordered_json to_json(const NullTestReport& r) {
  ordered_json j;
  j["dataset"] = r.dataset;
  j["statistic"] = r.statistic;
  j["model"] = to_string(r.model);
  j["space"] = to_string(r.space);
  j["observed"] = r.observed;
  j["null_mean"] = r.null_mean;
  j["null_sd"] = r.null_sd;
  j["z"] = r.z ? ordered_json(*r.z) : ordered_json(nullptr);
  j["constant_statistic"] = r.constant_statistic;
  j["p_lower"] = r.p_lower;
  j["p_upper"] = r.p_upper;
  j["skipped_samples"] = r.skipped_samples;
  j["provenance"] = {{"seed", r.seed},
                     {"burn_in", r.burn_in},
                     {"interval", r.interval},
                     {"samples", r.requested_samples},
                     {"chains", r.chains}};
  j["samples"] = r.samples;
  return j;
}

inline NullTestReport report_from_json(const json& j) {
  NullTestReport r;
  try {
    r.dataset = j.at("dataset").get<std::string>();
    r.statistic = j.at("statistic").get<std::string>();
    r.model = parse_model(j.at("model").get<std::string>()).value();
    r.space = parse_space(j.at("space").get<std::string>()).value();
    r.observed = j.at("observed").get<double>();
    r.samples = j.at("samples").get<std::vector<double>>();
    r.skipped_samples = j.at("skipped_samples").get<std::size_t>();
    const auto& p = j.at("provenance");
    r.seed = p.at("seed").get<std::uint64_t>();
    r.burn_in = p.at("burn_in").get<std::uint64_t>();
    r.interval = p.at("interval").get<std::uint64_t>();
    r.requested_samples = p.at("samples").get<std::uint64_t>();
    r.chains = p.at("chains").get<std::size_t>();
  } catch (const std::exception& e) {
    throw FormatError(std::string("malformed report JSON: ") + e.what());
  }
  summarize(r);
  return r;
}

inline ordered_json to_json(const ProfileNullResult& r) {
  ordered_json j;
  j["model"] = to_string(r.model);
  j["observed"] = r.observed.probability;
  j["observed_pairs"] = r.observed.pairs;
  j["null_mean"] = r.null_mean;
  j["null_se"] = r.null_se;
  std::vector<double> ratios;
  for (std::size_t i = 0; i < r.null_mean.size(); ++i) ratios.push_back(r.ratio(i));
  ordered_json ratio_json = ordered_json::array();
  for (double x : ratios) ratio_json.push_back(std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr));
  j["ratio"] = std::move(ratio_json);
  j["analytic"] = r.analytic ? ordered_json(r.analytic->probability) : ordered_json(nullptr);
  j["provenance"] = {{"seed", r.seed}, {"burn_in", r.burn_in}, {"interval", r.interval}, {"samples", r.samples}};
  return j;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out << content;
}

inline std::string profile_csv_header() { return "k,l,j,value,source,se\n"; }

// Long format; k and l are empty for marginal profiles.
inline void append_profile_rows(std::string& csv, const IntersectionProfile& p, const std::string& source,
                                const std::vector<double>* se = nullptr, const std::string& prefix = "") {
  for (std::size_t j = 0; j < p.probability.size(); ++j) {
    csv += prefix;
    if (p.kind == ProfileKind::Conditional) {
      csv += std::to_string(p.k) + "," + std::to_string(p.l) + ",";
    } else {
      csv += ",,";
    }
    csv += std::to_string(j) + "," + format_double(p.probability[j]) + "," + source + ",";
    if (se && j < se->size()) csv += format_double((*se)[j]);
    csv += "\n";
  }
}

inline std::string profile_null_csv(const std::vector<ProfileNullResult>& results) {
  std::string csv = profile_csv_header();
  if (results.empty()) return csv;
  append_profile_rows(csv, results.front().observed, to_string(ProfileSource::Empirical));
  for (const auto& r : results) {
    IntersectionProfile mc;
    mc.probability = r.null_mean;
    append_profile_rows(csv, mc, std::string(to_string(ProfileSource::NullMonteCarlo)) + ":" + to_string(r.model),
                        &r.null_se);
  }
  if (results.front().analytic)
    append_profile_rows(csv, *results.front().analytic, to_string(ProfileSource::Analytic));
  return csv;
}

inline std::string grid_csv(const std::vector<std::pair<Model, RatioGrid>>& grids) {
  std::string csv = "model,k,l,observed_mean,null_mean,ratio,null_samples\n";
  for (const auto& [model, grid] : grids) {
    for (const auto& c : grid.cells) {
      csv += std::string(to_string(model)) + "," + std::to_string(c.k) + "," + std::to_string(c.l) + ",";
      csv += format_double(c.observed) + ",";
      csv += (c.null_mean ? format_double(*c.null_mean) : "") + ",";
      csv += (c.ratio ? format_double(*c.ratio) : "") + ",";
      csv += std::to_string(c.null_samples) + "\n";
    }
  }
  return csv;
}

// Analytic marginal profiles, one block per dataset.
inline std::string analytic_profiles_csv(const std::vector<std::pair<std::string, IntersectionProfile>>& profiles) {
  std::string csv = "dataset," + profile_csv_header();
  for (const auto& [name, p] : profiles) append_profile_rows(csv, p, to_string(p.source), nullptr, name + ",");
  return csv;
}

// ---------------------------------------------------------------------------
// Batch runs

struct Dataset {
  std::string name;
  Hypergraph hypergraph;
};

struct NullSpec {
  Model model;
  Space space;
};

inline std::vector<NullSpec> all_nulls() {
  return {{Model::Vertex, Space::Hypergraph},
          {Model::Stub, Space::Hypergraph},
          {Model::Vertex, Space::Projected},
          {Model::Stub, Space::Projected}};
}

struct BatchCell {
  std::string dataset;
  std::string statistic;
  NullSpec null;
  std::optional<NullTestReport> report;
  std::string error;
  std::exception_ptr failure;  // the original exception behind `error`
  bool resumed = false;
};

struct BatchTable {
  std::vector<BatchCell> cells;
};

inline std::string cell_key(const std::string& dataset, const std::string& statistic, const NullSpec& null) {
  std::string key = dataset + "__" + statistic + "__" + to_string(null.model) + "_" + to_string(null.space);
  std::replace(key.begin(), key.end(), ':', '-');
  std::replace(key.begin(), key.end(), '/', '-');
  return key;
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string table_csv(const BatchTable& table) {
  std::string csv = "dataset,statistic,model,space,observed,null_mean,null_sd,z,p_lower,p_upper,samples,error\n";
  for (const auto& c : table.cells) {
    csv += c.dataset + "," + c.statistic + "," + to_string(c.null.model) + "," + to_string(c.null.space) + ",";
    if (c.report) {
      const auto& r = *c.report;
      csv += format_double(r.observed) + "," + format_double(r.null_mean) + "," + format_double(r.null_sd) + ",";
      csv += (r.z ? format_double(*r.z) : "") + "," + format_double(r.p_lower) + "," + format_double(r.p_upper) + ",";
      csv += std::to_string(r.samples.size()) + ",";
    } else {
      csv += ",,,,,,,";
    }
    std::string err = c.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    csv += err + "\n";
  }
  return csv;
}

inline std::string density_csv(const BatchTable& table) {
  std::string csv = "dataset,statistic,model,space,sample,value\n";
  for (const auto& c : table.cells) {
    if (!c.report) continue;
    const std::string prefix =
        c.dataset + "," + c.statistic + "," + to_string(c.null.model) + "," + to_string(c.null.space) + ",";
    for (std::size_t i = 0; i < c.report->samples.size(); ++i)
      csv += prefix + std::to_string(i) + "," + format_double(c.report->samples[i]) + "\n";
  }
  return csv;
}

// One null test per (dataset, statistic, null). With `out_dir`, each report is
// written to out_dir/reports/<key>.json and an existing file is reused, so an
// interrupted batch resumes where it stopped. Failures are recorded per cell.
inline BatchTable batch_report(const std::vector<Dataset>& datasets, const std::vector<Statistic>& statistics,
                               const std::vector<NullSpec>& nulls, const NullConfig& config,
                               const std::optional<std::filesystem::path>& out_dir = std::nullopt) {
  BatchTable table;
  for (const auto& ds : datasets) {
    for (const auto& stat : statistics) {
      for (const auto& null : nulls) {
        BatchCell cell{ds.name, stat.name, null, std::nullopt, {}, nullptr, false};
        const auto key = cell_key(ds.name, stat.name, null);
        std::optional<std::filesystem::path> report_path;
        if (out_dir) report_path = *out_dir / "reports" / (key + ".json");
        try {
          if (report_path && std::filesystem::exists(*report_path)) {
            cell.report = report_from_json(json::parse(read_text_file(report_path->string())));
            cell.resumed = true;
          } else {
            // Seeded per (dataset, null) only: all statistics see the same null draws.
            NullConfig cell_config = config;
            cell_config.seed = derive_seed(config.seed, fnv1a(cell_key(ds.name, "", null)));
            cell.report = null_test(ds.hypergraph, stat, null.model, null.space, cell_config);
            cell.report->dataset = ds.name;
            if (report_path) write_file(*report_path, to_json(*cell.report).dump(2) + "\n");
          }
        } catch (const std::exception& e) {
          cell.error = e.what();
          cell.failure = std::current_exception();
        }
        table.cells.push_back(std::move(cell));
      }
    }
  }
  if (out_dir) {
    write_file(*out_dir / "table1.csv", table_csv(table));
    write_file(*out_dir / "fig2_density.csv", density_csv(table));
  }
  return table;
}

}  // namespace hypernull
