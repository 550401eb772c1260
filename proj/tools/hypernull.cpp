// hypernull: command-line front end for ingestion, sampling, null tests,
// intersection profiles, exact checks on tiny spaces and synthetic inputs.
//
// Exit codes: 0 ok, 2 input error, 3 sampler precondition, 4 statistic/space
// mismatch, 5 internal invariant violation.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hypernull/hypernull.hpp"

namespace fs = std::filesystem;
using namespace hypernull;

namespace {

enum Exit { kOk = 0, kFailure = 1, kInput = 2, kPrecondition = 3, kMismatch = 4, kInvariant = 5 };

std::string hex_digest(const std::string& bytes) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a(bytes)));
  return buf;
}

std::string file_digest(const std::string& path) { return hex_digest(read_text_file(path)); }

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Everything needed to rerun a command: argv, inputs and their digests, and
// the artifacts it wrote (with digests, so a replay can be checked).
struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  std::uint64_t seed = 0;
  std::vector<std::string> inputs;
  std::vector<std::string> artifacts;
  std::string started;
  std::chrono::steady_clock::time_point clock = std::chrono::steady_clock::now();

  ordered_json to_json() const {
    ordered_json j;
    j["command"] = command;
    j["argv"] = argv;
    j["seed"] = seed;
    ordered_json in = ordered_json::array();
    for (const auto& p : inputs) in.push_back({{"path", p}, {"fnv1a64", file_digest(p)}});
    j["inputs"] = std::move(in);
    ordered_json out = ordered_json::array();
    for (const auto& p : artifacts) out.push_back({{"path", p}, {"fnv1a64", file_digest(p)}});
    j["artifacts"] = std::move(out);
    j["threads_env"] = std::getenv("HYPERNULL_THREADS") ? std::getenv("HYPERNULL_THREADS") : "";
    j["started_utc"] = started;
    j["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - clock).count();
    j["version"] = version;
    return j;
  }
};

struct Context {
  RunManifest manifest;
  std::string manifest_path;  // explicit --manifest
  bool quiet = false;

  void artifact(const fs::path& p) { manifest.artifacts.push_back(p.string()); }

  void write(const fs::path& p, const std::string& content) {
    write_file(p, content);
    artifact(p);
  }

  // Manifest goes next to the outputs: DIR/manifest.json for a directory,
  // FILE.manifest.json for a single file, stderr when nothing was written.
  void finish(const std::optional<fs::path>& out_dir, const std::optional<fs::path>& out_file) {
    const auto text = manifest.to_json().dump(2) + "\n";
    fs::path target;
    if (!manifest_path.empty()) {
      target = manifest_path;
    } else if (out_dir) {
      target = *out_dir / "manifest.json";
    } else if (out_file) {
      target = out_file->string() + ".manifest.json";
    }
    if (target.empty()) {
      if (!quiet) std::cerr << "manifest: " << manifest.to_json().dump() << "\n";
      return;
    }
    write_file(target, text);
  }
};

// ---------------------------------------------------------------------------
// Inputs

struct InputOptions {
  std::string benson;
  std::string edges;
  std::string json_path;
  std::string synth;
  std::optional<double> tau;
  bool inclusive_tau = false;
  bool strict = false;
  std::string name;
};

void add_input_options(CLI::App* app, InputOptions& in) {
  app->add_option("--benson", in.benson, "Benson-format prefix (PREFIX-{nverts,simplices,times}.txt) or directory");
  app->add_option("--edges", in.edges, "edge list: one edge per line, whitespace-separated labels");
  app->add_option("--json", in.json_path, "canonical hypergraph JSON");
  app->add_option("--synth", in.synth, "generator: toy:T or uniform:n=N,degree=LO-HI,size=LO-HI");
  app->add_option("--tau", in.tau, "keep only edges with time > tau (Benson input)");
  app->add_flag("--inclusive-tau", in.inclusive_tau, "keep edges with time >= tau instead");
  app->add_flag("--strict", in.strict, "reject edges that repeat a node instead of deduplicating");
  app->add_option("--name", in.name, "dataset name used in reports");
}

std::pair<std::uint64_t, std::uint64_t> parse_range(const std::string& text) {
  const auto dash = text.find('-');
  try {
    if (dash == std::string::npos) {
      const auto v = std::stoull(text);
      return {v, v};
    }
    return {std::stoull(text.substr(0, dash)), std::stoull(text.substr(dash + 1))};
  } catch (const std::exception&) {
    throw FormatError("bad range '" + text + "' (expected N or LO-HI)");
  }
}

Hypergraph run_synth(const std::string& spec, std::uint64_t seed) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "toy") {
    std::size_t copies = 1;
    if (!args.empty()) copies = parse_range(args).first;
    return toy_copies(copies);
  }
  if (kind == "uniform") {
    SynthSpec s;
    std::stringstream ss(args);
    for (std::string kv; std::getline(ss, kv, ',');) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw FormatError("synth: expected key=value, got '" + kv + "'");
      const auto key = kv.substr(0, eq);
      const auto [lo, hi] = parse_range(kv.substr(eq + 1));
      if (key == "n") {
        s.n = lo;
      } else if (key == "degree") {
        s.degree = {lo, hi};
      } else if (key == "size") {
        s.edge_size = {lo, hi};
      } else if (key == "attempts") {
        s.max_attempts = lo;
      } else {
        throw FormatError("synth: unknown key '" + key + "'");
      }
    }
    if (s.n == 0) throw FormatError("synth: n must be given and positive");
    return synth(s, seed);
  }
  throw FormatError("synth: unknown generator '" + kind + "'");
}

struct Loaded {
  Hypergraph h;
  std::string name;
};

Loaded load_input(const InputOptions& in, std::uint64_t seed, Context& ctx) {
  const int given = !in.benson.empty() + !in.edges.empty() + !in.json_path.empty() + !in.synth.empty();
  if (given != 1) throw FormatError("give exactly one of --benson, --edges, --json, --synth");
  IngestConfig config;
  config.tau = in.tau;
  config.inclusive_tau = in.inclusive_tau;
  if (in.strict) {
    config.dedupe_within_edge = false;
    config.drop_degenerate = false;
  }
  Loaded out;
  if (!in.benson.empty()) {
    const auto paths = benson_paths(in.benson);
    auto r = load_benson(in.benson, config);
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
    out.h = std::move(r.hypergraph);
    out.name = fs::path(paths.nverts).filename().string();
    out.name = out.name.substr(0, out.name.size() - std::string("-nverts.txt").size());
    ctx.manifest.inputs.push_back(paths.nverts);
    ctx.manifest.inputs.push_back(paths.simplices);
    if (fs::exists(paths.times)) ctx.manifest.inputs.push_back(paths.times);
  } else if (!in.edges.empty()) {
    auto r = load_edge_list(in.edges, config);
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
    out.h = std::move(r.hypergraph);
    out.name = fs::path(in.edges).stem().string();
    ctx.manifest.inputs.push_back(in.edges);
  } else if (!in.json_path.empty()) {
    out.h = load_json(in.json_path);
    out.name = fs::path(in.json_path).stem().string();
    ctx.manifest.inputs.push_back(in.json_path);
  } else {
    out.h = run_synth(in.synth, seed);
    out.name = in.synth;
    std::replace(out.name.begin(), out.name.end(), ':', '_');
    std::replace(out.name.begin(), out.name.end(), ',', '_');
    std::replace(out.name.begin(), out.name.end(), '=', '-');
  }
  if (!in.name.empty()) out.name = in.name;
  return out;
}

// ---------------------------------------------------------------------------
// Chain options

struct ChainOptions {
  std::optional<std::uint64_t> burn_in;
  std::optional<std::uint64_t> interval;
  std::uint64_t samples = 500;
  std::uint64_t seed = 0;
  std::size_t chains = 1;
  std::size_t threads = 0;

  NullConfig config() const {
    NullConfig c;
    c.burn_in = burn_in;
    c.interval = interval;
    c.samples = samples;
    c.seed = seed;
    c.chains = chains;
    c.threads = threads;
    return c;
  }
};

void add_chain_options(CLI::App* app, ChainOptions& c, std::uint64_t default_samples = 500) {
  c.samples = default_samples;
  app->add_option("--burn-in", c.burn_in, "burn-in steps (default 20 m)");
  app->add_option("--interval", c.interval, "steps between samples (default m)");
  app->add_option("--samples", c.samples, "number of samples")->capture_default_str();
  app->add_option("--seed", c.seed, "master seed; all randomness derives from it")->capture_default_str();
  app->add_option("--chains", c.chains, "independent chains, run concurrently")->capture_default_str();
  app->add_option("--threads", c.threads, "thread cap (default HYPERNULL_THREADS or all cores)");
}

std::vector<Model> parse_models(const std::string& s) {
  if (s == "all" || s == "both") return {Model::Vertex, Model::Stub};
  if (auto m = parse_model(s)) return {*m};
  throw FormatError("unknown model '" + s + "' (vertex, stub, all)");
}

std::vector<Space> parse_spaces(const std::string& s) {
  if (s == "all" || s == "both") return {Space::Hypergraph, Space::Projected};
  if (auto sp = parse_space(s)) return {*sp};
  throw FormatError("unknown space '" + s + "' (hypergraph, projected, all)");
}

std::string summary_line(const std::vector<Count>& values, const char* label) {
  if (values.empty()) return std::string(label) + ": none";
  Count lo = values.front(), hi = values.front();
  double sum = 0.0;
  for (Count v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    sum += static_cast<double>(v);
  }
  std::ostringstream os;
  os << label << ": min " << lo << ", mean " << format_double(sum / static_cast<double>(values.size())) << ", max "
     << hi;
  return os.str();
}

void warn_aperiodicity(const Hypergraph& h, Model model) {
  if (auto w = aperiodicity_warning(dimension_sequence(h), model)) std::cerr << "warning: " << *w << "\n";
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_convert(const InputOptions& in, const std::string& output, Context& ctx) {
  auto loaded = load_input(in, 0, ctx);
  const auto& h = loaded.h;
  std::cout << "n=" << h.num_nodes() << " m=" << h.num_edges() << "\n";
  std::cout << summary_line(degree_sequence(h).d, "degree") << "\n";
  std::cout << summary_line(dimension_sequence(h).k, "edge size") << "\n";
  std::optional<fs::path> out_file;
  if (!output.empty()) {
    out_file = output;
    if (fs::path(output).extension() == ".txt") {
      save_edge_list(h, output);
      ctx.artifact(output);
    } else {
      ctx.write(output, to_json(h).dump() + "\n");
    }
  }
  ctx.finish(std::nullopt, out_file);
  return kOk;
}

int cmd_sample(const InputOptions& in, const std::string& model_name, const ChainOptions& co,
               const std::string& out_dir, Context& ctx) {
  const auto model = parse_model(model_name);
  if (!model) throw FormatError("unknown model '" + model_name + "'");
  auto loaded = load_input(in, co.seed, ctx);
  warn_aperiodicity(loaded.h, *model);
  const auto d = degree_sequence(loaded.h);
  const auto k = dimension_sequence(loaded.h);
  auto lines = run_null_chains<std::string>(loaded.h, *model, co.config(), [&](const Hypergraph& s, std::size_t) {
    if (!is_valid(s) || degree_sequence(s) != d || dimension_sequence(s) != k)
      throw InvariantViolation("sample failed validation");
    return to_json_line(s);
  });
  std::string body;
  for (const auto& l : lines) body += l + "\n";
  const fs::path dir(out_dir);
  ctx.write(dir / "samples.ndjson", body);
  const auto r = resolve(co.config(), loaded.h.num_edges());
  std::cout << "wrote " << lines.size() << " samples (burn-in " << r.burn_in << ", interval " << r.interval
            << ") digest " << hex_digest(body) << "\n";
  ctx.finish(dir, std::nullopt);
  return kOk;
}

Statistic make_statistic(const std::string& name, std::size_t reps) {
  if (name == "clustering") return clustering_statistic();
  if (name.rfind("assortativity", 0) == 0) {
    const auto colon = name.find(':');
    const std::string kind = colon == std::string::npos ? "uniform" : name.substr(colon + 1);
    const auto choice = parse_choice(kind);
    if (!choice) throw FormatError("unknown choice function '" + kind + "'");
    return assortativity_statistic(*choice, reps);
  }
  if (name == "edge_count") return edge_count_statistic();
  if (name == "mean_intersection") return mean_intersection_statistic();
  throw FormatError("unknown statistic '" + name + "'");
}

void print_report(const NullTestReport& r) {
  std::cout << r.dataset << " " << r.statistic << " " << to_string(r.model) << "/" << to_string(r.space)
            << ": observed " << format_double(r.observed) << ", null " << format_double(r.null_mean) << " (sd "
            << format_double(r.null_sd) << ", n " << r.samples.size() << ")";
  if (r.z) std::cout << ", z " << format_double(*r.z);
  if (r.constant_statistic) std::cout << ", constant under the null";
  std::cout << ", p_lower " << format_double(r.p_lower) << ", p_upper " << format_double(r.p_upper) << "\n";
}

int run_profile_test(const Loaded& loaded, const std::vector<Model>& models, const ChainOptions& co,
                     const fs::path& dir, Context& ctx) {
  std::vector<ProfileNullResult> results;
  for (Model m : models) {
    NullConfig c = co.config();
    c.seed = derive_seed(co.seed, fnv1a(std::string("profile:") + to_string(m)));
    results.push_back(profile_null(loaded.h, m, c));
    auto j = to_json(results.back());
    j["dataset"] = loaded.name;
    ctx.write(dir / "reports" / (loaded.name + "__profile__" + to_string(m) + ".json"), j.dump(2) + "\n");
    const auto& r = results.back();
    std::cout << loaded.name << " profile " << to_string(m) << ":";
    for (std::size_t i = 0; i < r.null_mean.size(); ++i)
      std::cout << " j=" << i << " r=" << format_double(r.observed.at(i)) << "/" << format_double(r.null_mean[i]);
    std::cout << "\n";
  }
  ctx.write(dir / "fig3b_profile.csv", profile_null_csv(results));
  return kOk;
}

int run_grid_test(const Loaded& loaded, const std::vector<Model>& models, const ChainOptions& co, const fs::path& dir,
                  Context& ctx) {
  std::vector<std::pair<Model, RatioGrid>> grids;
  for (Model m : models) {
    NullConfig c = co.config();
    c.seed = derive_seed(co.seed, fnv1a(std::string("grid:") + to_string(m)));
    grids.emplace_back(m, grid_null(loaded.h, m, c));
  }
  ctx.write(dir / "fig3a_grid.csv", grid_csv(grids));
  std::cout << "grid cells: " << grids.front().second.cells.size() << "\n";
  return kOk;
}

int cmd_test(const InputOptions& in, const std::vector<std::string>& statistics, const std::string& model_name,
             const std::string& space_name, std::size_t reps, const ChainOptions& co, const std::string& out_dir,
             Context& ctx) {
  const auto models = parse_models(model_name);
  const auto spaces = parse_spaces(space_name);
  const fs::path dir(out_dir);

  std::vector<Statistic> scalar;
  std::vector<std::string> special;
  for (const auto& s : statistics) {
    if (s == "profile" || s == "grid") {
      for (Space sp : spaces)
        if (sp == Space::Projected)
          throw SpaceMismatch("statistic '" + s + "' is natively polyadic and has no projected-space test");
      special.push_back(s);
    } else {
      scalar.push_back(make_statistic(s, reps));
    }
  }

  auto loaded = load_input(in, co.seed, ctx);
  for (Model m : models) warn_aperiodicity(loaded.h, m);

  for (const auto& s : special) {
    if (s == "profile") run_profile_test(loaded, models, co, dir, ctx);
    if (s == "grid") run_grid_test(loaded, models, co, dir, ctx);
  }

  std::exception_ptr first_failure;
  if (!scalar.empty()) {
    std::vector<NullSpec> nulls;
    for (Space sp : spaces)
      for (Model m : models) nulls.push_back({m, sp});
    const auto table = batch_report({{loaded.name, loaded.h}}, scalar, nulls, co.config(), dir);
    for (const auto& cell : table.cells) {
      if (cell.report) {
        print_report(*cell.report);
        ctx.artifact(dir / "reports" / (cell_key(cell.dataset, cell.statistic, cell.null) + ".json"));
      } else {
        std::cerr << "error: " << cell.dataset << " " << cell.statistic << " " << to_string(cell.null.model) << "/"
                  << to_string(cell.null.space) << ": " << cell.error << "\n";
        if (!first_failure) first_failure = cell.failure;
      }
    }
    ctx.artifact(dir / "table1.csv");
    ctx.artifact(dir / "fig2_density.csv");
  }
  ctx.finish(dir, std::nullopt);
  if (first_failure) std::rethrow_exception(first_failure);
  return kOk;
}

int cmd_profile(const InputOptions& in, const std::string& model_name, bool analytic_only, const ChainOptions& co,
                const std::string& out_dir, Context& ctx) {
  auto loaded = load_input(in, co.seed, ctx);
  const fs::path dir(out_dir);
  const auto observed = marginal_profile(loaded.h);
  const auto analytic = analytic_marginal_profile(loaded.h);
  std::string csv = "dataset," + profile_csv_header();
  const std::string prefix = loaded.name + ",";
  append_profile_rows(csv, observed, to_string(ProfileSource::Empirical), nullptr, prefix);
  append_profile_rows(csv, analytic, to_string(ProfileSource::Analytic), nullptr, prefix);
  if (!analytic_only) {
    for (Model m : parse_models(model_name)) {
      NullConfig c = co.config();
      c.seed = derive_seed(co.seed, fnv1a(std::string("profile:") + to_string(m)));
      const auto r = profile_null(loaded.h, m, c, false);
      IntersectionProfile mc;
      mc.probability = r.null_mean;
      append_profile_rows(csv, mc, std::string(to_string(ProfileSource::NullMonteCarlo)) + ":" + to_string(m),
                          &r.null_se, prefix);
    }
  }
  ctx.write(dir / "fig4_profiles.csv", csv);
  std::cout << loaded.name << ": m=" << loaded.h.num_edges() << " pairs=" << observed.pairs << "\n";
  for (std::size_t j = 0; j < observed.probability.size(); ++j)
    std::cout << "  j=" << j << " empirical " << format_double(observed.at(j)) << " analytic "
              << format_double(analytic.at(j)) << "\n";
  ctx.finish(dir, std::nullopt);
  return kOk;
}

std::vector<double> frequencies_from_samples(const SpaceEnumeration& space, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  std::vector<double> freq(space.size(), 0.0);
  std::size_t count = 0;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.empty()) continue;
    const auto h = parse_hypergraph_json(line);
    const auto i = space.find(h);
    if (i == space.size()) throw InvariantViolation(path + ":" + std::to_string(line_no) + ": sample outside the space");
    freq[i] += 1.0;
    ++count;
  }
  if (count == 0) throw FormatError(path + ": no samples");
  for (auto& f : freq) f /= static_cast<double>(count);
  return freq;
}

int cmd_exact(std::vector<Count> degrees, std::vector<Count> dims, const std::string& from_input,
              const std::string& samples_path, const std::string& model_name, std::uint64_t steps,
              std::uint64_t seed, std::size_t limit, const std::string& output, Context& ctx) {
  std::optional<Hypergraph> start;
  if (!from_input.empty()) {
    start = load_json(from_input);
    ctx.manifest.inputs.push_back(from_input);
    degrees = degree_sequence(*start).d;
    dims = dimension_sequence(*start).k;
  } else if (!samples_path.empty()) {
    std::ifstream in(samples_path);
    std::string first;
    if (!in || !std::getline(in, first)) throw FormatError("cannot read " + samples_path);
    const auto h = parse_hypergraph_json(first);
    degrees = degree_sequence(h).d;
    dims = dimension_sequence(h).k;
  }
  if (degrees.empty() || dims.empty()) throw FormatError("exact: give --degrees and --dims, --from or --samples-file");
  const DegreeSequence d{degrees};
  const DimensionSequence k{dims};
  const auto space = enumerate_space(d, k, limit);
  if (space.size() == 0) throw PreconditionError("exact: no hypergraph has these sequences");

  ordered_json report;
  report["degrees"] = degrees;
  report["dimensions"] = dims;
  report["states"] = space.size();
  std::cout << "states: " << space.size() << "\n";
  ordered_json tv;
  if (!samples_path.empty()) {
    ctx.manifest.inputs.push_back(samples_path);
    const auto model = parse_model(model_name);
    if (!model) throw FormatError("exact --samples-file needs --model vertex or stub");
    const auto freq = frequencies_from_samples(space, samples_path);
    tv[to_string(*model)] = total_variation(freq, space.target(*model));
    std::cout << "tv(" << to_string(*model) << ", samples) = " << format_double(tv[to_string(*model)]) << "\n";
  } else {
    const Hypergraph& h0 = start ? *start : space.states.front();
    for (Model m : parse_models(model_name)) {
      const auto freq = chain_state_frequencies(space, h0, m, steps, derive_seed(seed, stream::chain + (m == Model::Stub)));
      tv[to_string(m)] = total_variation(freq, space.target(m));
      std::cout << "tv(" << to_string(m) << ") = " << format_double(tv[to_string(m)]) << "\n";
    }
    const auto swap = bipartite_state_frequencies(space, h0, steps, derive_seed(seed, stream::chain + 2));
    tv["bipartite_swap_vs_stub"] = total_variation(swap, space.target(Model::Stub));
    std::cout << "tv(bipartite swap vs stub) = " << format_double(tv["bipartite_swap_vs_stub"]) << "\n";
    report["steps"] = steps;
  }
  report["total_variation"] = tv;
  std::optional<fs::path> out_file;
  if (!output.empty()) {
    out_file = output;
    ctx.write(output, report.dump(2) + "\n");
  }
  ctx.finish(std::nullopt, out_file);
  return kOk;
}

int cmd_synth(const std::string& spec, std::uint64_t seed, const std::string& output, Context& ctx) {
  const auto h = run_synth(spec, seed);
  std::cout << "n=" << h.num_nodes() << " m=" << h.num_edges() << "\n";
  std::optional<fs::path> out_file;
  if (!output.empty()) {
    out_file = output;
    if (fs::path(output).extension() == ".txt") {
      save_edge_list(h, output);
      ctx.artifact(output);
    } else {
      ctx.write(output, to_json(h).dump() + "\n");
    }
  } else {
    std::cout << to_json_line(h) << "\n";
  }
  ctx.finish(std::nullopt, out_file);
  return kOk;
}

int run(const std::vector<std::string>& args);

// Reruns the recorded argv and compares the new artifact digests with the
// recorded ones; any difference is reported as an invariant violation.
int cmd_replay(const std::string& path) {
  const auto recorded = json::parse(read_text_file(path));
  std::vector<std::string> argv = recorded.at("argv").get<std::vector<std::string>>();
  for (const auto& in : recorded.at("inputs")) {
    const auto p = in.at("path").get<std::string>();
    if (!fs::exists(p) || file_digest(p) != in.at("fnv1a64").get<std::string>())
      throw FormatError("replay: input " + p + " is missing or changed");
  }
  const int code = run(argv);
  if (code != kOk) return code;
  std::size_t same = 0;
  std::size_t total = 0;
  for (const auto& a : recorded.at("artifacts")) {
    ++total;
    const auto p = a.at("path").get<std::string>();
    if (fs::exists(p) && file_digest(p) == a.at("fnv1a64").get<std::string>()) {
      ++same;
    } else {
      std::cerr << "replay: " << p << " differs\n";
    }
  }
  std::cout << "replay: " << same << "/" << total << " artifacts reproduced\n";
  return same == total ? kOk : kInvariant;
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"Configuration-model null tests for hypergraphs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version);

  Context ctx;
  ctx.manifest.started = utc_now();
  ctx.manifest.argv = args;
  app.add_option("--manifest", ctx.manifest_path, "write the run manifest here");
  app.add_flag("--quiet", ctx.quiet, "do not echo the manifest to stderr");

  InputOptions in;
  ChainOptions co;
  std::string output;
  std::string model = "vertex";
  std::string space = "hypergraph";

  auto* convert = app.add_subcommand("convert", "load a dataset and write canonical JSON");
  add_input_options(convert, in);
  convert->add_option("-o,--output", output, "output file (.json, or .txt for an edge list)");

  auto* sample = app.add_subcommand("sample", "draw samples from a configuration-model chain");
  add_input_options(sample, in);
  add_chain_options(sample, co, 10);
  sample->add_option("--model", model, "vertex or stub")->capture_default_str();
  sample->add_option("-o,--output", output, "output directory")->required();

  auto* test = app.add_subcommand("test", "null-hypothesis test of a statistic");
  add_input_options(test, in);
  add_chain_options(test, co);
  std::vector<std::string> statistics{"clustering"};
  std::size_t reps = 32;
  test->add_option("--statistic", statistics,
                   "clustering | assortativity:<uniform|top2|topbottom> | profile | grid (repeatable)")
      ->capture_default_str();
  test->add_option("--model", model, "vertex, stub or all")->capture_default_str();
  test->add_option("--space", space, "hypergraph, projected or all")->capture_default_str();
  test->add_option("--reps", reps, "draws averaged by the uniform choice function")->capture_default_str();
  test->add_option("-o,--output", output, "output directory")->required();

  auto* profile = app.add_subcommand("profile", "marginal intersection profile with analytic and null overlays");
  add_input_options(profile, in);
  add_chain_options(profile, co);
  bool analytic_only = false;
  profile->add_option("--model", model, "vertex, stub or all")->capture_default_str();
  profile->add_flag("--analytic-only", analytic_only, "skip the Monte Carlo null");
  profile->add_option("-o,--output", output, "output directory")->required();

  auto* exact = app.add_subcommand("exact", "compare chains with the exact target on an enumerable space");
  std::vector<Count> degrees, dims;
  std::string from, samples_file;
  std::uint64_t steps = 1'000'000, seed = 0;
  std::size_t limit = 100'000;
  std::string exact_model = "all";
  exact->add_option("--degrees", degrees, "degree sequence, comma separated")->delimiter(',');
  exact->add_option("--dims", dims, "edge sizes, comma separated")->delimiter(',');
  exact->add_option("--from", from, "starting hypergraph (JSON); its sequences define the space");
  exact->add_option("--samples-file", samples_file, "score samples.ndjson instead of running a chain");
  exact->add_option("--model", exact_model, "vertex, stub or all")->capture_default_str();
  exact->add_option("--steps", steps, "chain steps")->capture_default_str();
  exact->add_option("--seed", seed, "seed")->capture_default_str();
  exact->add_option("--state-limit", limit, "refuse spaces larger than this")->capture_default_str();
  exact->add_option("-o,--output", output, "JSON report file");

  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic hypergraph");
  std::string spec;
  synth_cmd->add_option("spec", spec, "toy:T or uniform:n=N,degree=LO-HI,size=LO-HI")->required();
  synth_cmd->add_option("--seed", seed, "seed")->capture_default_str();
  synth_cmd->add_option("-o,--output", output, "output file (.json or .txt)");

  auto* replay = app.add_subcommand("replay", "rerun a manifest and verify its artifacts");
  std::string manifest_in;
  replay->add_option("manifest", manifest_in, "manifest.json")->required();

  std::vector<const char*> argv{"hypernull"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }

  try {
    if (*convert) {
      ctx.manifest.command = "convert";
      return cmd_convert(in, output, ctx);
    }
    if (*sample) {
      ctx.manifest.command = "sample";
      ctx.manifest.seed = co.seed;
      return cmd_sample(in, model, co, output, ctx);
    }
    if (*test) {
      ctx.manifest.command = "test";
      ctx.manifest.seed = co.seed;
      return cmd_test(in, statistics, model, space, reps, co, output, ctx);
    }
    if (*profile) {
      ctx.manifest.command = "profile";
      ctx.manifest.seed = co.seed;
      return cmd_profile(in, model, analytic_only, co, output, ctx);
    }
    if (*exact) {
      ctx.manifest.command = "exact";
      ctx.manifest.seed = seed;
      return cmd_exact(degrees, dims, from, samples_file, exact_model, steps, seed, limit, output, ctx);
    }
    if (*synth_cmd) {
      ctx.manifest.command = "synth";
      ctx.manifest.seed = seed;
      return cmd_synth(spec, seed, output, ctx);
    }
    if (*replay) return cmd_replay(manifest_in);
  } catch (const FormatError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const PreconditionError& e) {
    std::cerr << "sampler precondition: " << e.what() << "\n";
    return kPrecondition;
  } catch (const AttemptsExhausted& e) {
    std::cerr << "sampler precondition: " << e.what() << "\n";
    return kPrecondition;
  } catch (const LimitExceeded& e) {
    std::cerr << "sampler precondition: " << e.what() << "\n";
    return kPrecondition;
  } catch (const SpaceMismatch& e) {
    std::cerr << "statistic/space mismatch: " << e.what() << "\n";
    return kMismatch;
  } catch (const DegenerateStatistic& e) {
    std::cerr << "statistic undefined: " << e.what() << "\n";
    return kMismatch;
  } catch (const NoPairs& e) {
    std::cerr << "statistic undefined: " << e.what() << "\n";
    return kMismatch;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args);
}
