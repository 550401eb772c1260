#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hypernull/errors.hpp"
#include "hypernull/hypergraph.hpp"
#include "hypernull/random.hpp"
#include "hypernull/sampling.hpp"

namespace hypernull {

// Raw label <-> dense NodeId, a bijection onto [0, n).
class LabelMap {
 public:
  NodeId intern(const std::string& label) {
    auto [it, inserted] = ids_.try_emplace(label, static_cast<NodeId>(labels_.size()));
    if (inserted) labels_.push_back(label);
    return it->second;
  }
  std::optional<NodeId> find(const std::string& label) const {
    auto it = ids_.find(label);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }
  const std::string& label(NodeId id) const { return labels_.at(id); }
  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> ids_;
};

struct IngestConfig {
  std::optional<double> tau;          // keep edges with time > tau
  bool inclusive_tau = false;         // keep time >= tau instead
  bool dedupe_within_edge = true;     // collapse repeated ids inside an edge
  bool drop_degenerate = true;        // otherwise drop the edge (warn); false: FormatError
};

struct IngestResult {
  Hypergraph hypergraph;
  LabelMap labels;
  std::size_t dropped_edges = 0;
  std::size_t filtered_edges = 0;
  std::vector<std::string> warnings;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(std::string_view token, const std::string& where) {
  T value{};
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw FormatError(where + ": not a number: '" + std::string(token) + "'");
  return value;
}

// One number per non-blank line.
template <class T>
std::vector<T> read_column(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  std::vector<T> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto token = trim(line);
    if (token.empty()) continue;
    out.push_back(parse_number<T>(token, path + ":" + std::to_string(line_no)));
  }
  return out;
}

// Applies the within-edge duplicate policy; returns false if the edge is dropped.
inline bool admit_edge(std::vector<std::string>& raw, const IngestConfig& config, const std::string& where,
                       IngestResult& result) {
  std::vector<std::string> sorted = raw;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end()) return true;
  if (config.dedupe_within_edge) {
    std::vector<std::string> unique;
    for (auto& s : raw)
      if (std::find(unique.begin(), unique.end(), s) == unique.end()) unique.push_back(s);
    raw = std::move(unique);
    return true;
  }
  if (config.drop_degenerate) {
    ++result.dropped_edges;
    result.warnings.push_back(where + ": edge repeats a node; dropped");
    return false;
  }
  throw FormatError(where + ": edge repeats a node");
}

inline void add_labeled_edge(const std::vector<std::string>& raw, IngestResult& result, std::vector<Edge>& edges) {
  std::vector<NodeId> ids;
  ids.reserve(raw.size());
  for (const auto& label : raw) ids.push_back(result.labels.intern(label));
  edges.push_back(Edge::from_unsorted(std::move(ids)));
}

}  // namespace detail

struct BensonPaths {
  std::string nverts;
  std::string simplices;
  std::string times;
};

// "dir/name" -> dir/name-{nverts,simplices,times}.txt; a directory "dir/name/"
// resolves to dir/name/name-*.txt.
inline BensonPaths benson_paths(const std::string& prefix) {
  namespace fs = std::filesystem;
  std::string base = prefix;
  if (fs::is_directory(prefix)) {
    fs::path dir(prefix);
    auto name = dir.filename().string();
    if (name.empty()) name = dir.parent_path().filename().string();
    base = (dir / name).string();
  }
  return {base + "-nverts.txt", base + "-simplices.txt", base + "-times.txt"};
}

// Benson-format triple: per-edge sizes, a flat node stream consumed in runs
// of those sizes, and per-edge timestamps. The times file may be absent when
// no temporal threshold is requested. Only nodes of kept edges are retained.
inline IngestResult load_benson(const std::string& prefix, const IngestConfig& config = {}) {
  const auto paths = benson_paths(prefix);
  const auto nverts = detail::read_column<std::int64_t>(paths.nverts);
  const auto simplices = detail::read_column<std::int64_t>(paths.simplices);
  std::vector<double> times;
  const bool have_times = std::filesystem::exists(paths.times);
  if (have_times) times = detail::read_column<double>(paths.times);
  if (config.tau && !have_times) throw FormatError("cannot open " + paths.times + " (needed for tau filtering)");

  std::int64_t total = 0;
  for (std::size_t i = 0; i < nverts.size(); ++i) {
    if (nverts[i] <= 0)
      throw FormatError(paths.nverts + ":" + std::to_string(i + 1) + ": edge size must be positive");
    total += nverts[i];
  }
  if (static_cast<std::size_t>(total) != simplices.size())
    throw FormatError(paths.nverts + ": sizes sum to " + std::to_string(total) + " but " + paths.simplices + " has " +
                      std::to_string(simplices.size()) + " entries");
  if (have_times && times.size() != nverts.size())
    throw FormatError(paths.times + ": has " + std::to_string(times.size()) + " entries, expected " +
                      std::to_string(nverts.size()));

  IngestResult result;
  std::vector<Edge> edges;
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < nverts.size(); ++i) {
    const auto size = static_cast<std::size_t>(nverts[i]);
    const std::size_t start = cursor;
    cursor += size;
    if (config.tau) {
      const bool keep = config.inclusive_tau ? times[i] >= *config.tau : times[i] > *config.tau;
      if (!keep) {
        ++result.filtered_edges;
        continue;
      }
    }
    std::vector<std::string> raw;
    raw.reserve(size);
    for (std::size_t p = start; p < cursor; ++p) raw.push_back(std::to_string(simplices[p]));
    if (!detail::admit_edge(raw, config, paths.simplices + " (edge " + std::to_string(i + 1) + ")", result)) continue;
    detail::add_labeled_edge(raw, result, edges);
  }
  result.hypergraph = Hypergraph(result.labels.size(), std::move(edges));
  return result;
}

// One edge per line, whitespace-separated labels; blank and '#' lines skipped.
inline IngestResult parse_edge_list(std::istream& in, const std::string& source, const IngestConfig& config = {}) {
  IngestResult result;
  std::vector<Edge> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    std::istringstream tokens{std::string(body)};
    std::vector<std::string> raw;
    for (std::string t; tokens >> t;) raw.push_back(t);
    if (!detail::admit_edge(raw, config, source + ":" + std::to_string(line_no), result)) continue;
    detail::add_labeled_edge(raw, result, edges);
  }
  result.hypergraph = Hypergraph(result.labels.size(), std::move(edges));
  return result;
}

inline IngestResult load_edge_list(const std::string& path, const IngestConfig& config = {}) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  return parse_edge_list(in, path, config);
}

inline void save_edge_list(const Hypergraph& h, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  for (const auto& e : h.edges()) {
    for (std::size_t i = 0; i < e.size(); ++i) out << (i ? " " : "") << e[i];
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Synthetic generators

// Nine nodes A..I = 0..8; one 6-edge {A..F} and the path G-H-I.
inline Hypergraph toy_hypergraph() {
  return Hypergraph(9, {Edge{0, 1, 2, 3, 4, 5}, Edge{6, 7}, Edge{7, 8}});
}

// `copies` disjoint copies of the toy hypergraph.
inline Hypergraph toy_copies(std::size_t copies) {
  Hypergraph out(9 * copies);
  const auto toy = toy_hypergraph();
  for (std::size_t c = 0; c < copies; ++c) {
    for (const auto& e : toy.edges()) {
      std::vector<NodeId> nodes;
      for (NodeId v : e) nodes.push_back(static_cast<NodeId>(v + 9 * c));
      out.add_edge(Edge(std::move(nodes)));
    }
  }
  return out;
}

struct UniformLaw {
  Count lo = 1;
  Count hi = 1;
};

// Degrees d_v ~ U{degree.lo..degree.hi}; sizes drawn from U{size.lo..size.hi}
// until they cover sum(d), the last edge trimmed to make the totals equal.
struct SynthSpec {
  std::size_t n = 0;
  UniformLaw degree;
  UniformLaw edge_size;
  std::uint64_t max_attempts = 100'000;
};

inline std::pair<DegreeSequence, DimensionSequence> synth_sequences(const SynthSpec& spec, std::uint64_t seed) {
  if (spec.degree.lo > spec.degree.hi || spec.edge_size.lo > spec.edge_size.hi || spec.edge_size.lo == 0)
    throw PreconditionError("synth: invalid law bounds");
  if (spec.edge_size.hi > spec.n) throw PreconditionError("synth: edge size exceeds node count");
  Rng rng(derive_seed(seed, stream::synth));
  DegreeSequence d;
  d.d.reserve(spec.n);
  for (std::size_t v = 0; v < spec.n; ++v)
    d.d.push_back(static_cast<Count>(rng.between(static_cast<std::int64_t>(spec.degree.lo),
                                                 static_cast<std::int64_t>(spec.degree.hi))));
  const Count total = d.total();
  DimensionSequence k;
  Count covered = 0;
  while (covered < total) {
    auto size = static_cast<Count>(rng.between(static_cast<std::int64_t>(spec.edge_size.lo),
                                               static_cast<std::int64_t>(spec.edge_size.hi)));
    size = std::min(size, total - covered);
    k.k.push_back(size);
    covered += size;
  }
  return {std::move(d), std::move(k)};
}

inline Hypergraph synth(const SynthSpec& spec, std::uint64_t seed) {
  auto [d, k] = synth_sequences(spec, seed);
  return stub_matching(d, k, spec.max_attempts, derive_seed(seed, stream::synth + 1));
}

}  // namespace hypernull
