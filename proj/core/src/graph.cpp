#include "tbcavi/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <map>
#include <queue>
#include <sstream>

#include "tbcavi/errors.hpp"

namespace tbcavi {

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges, BuildStats* stats) {
  if (n > static_cast<std::size_t>(std::numeric_limits<NodeId>::max())) {
    throw DomainError("graph too large for 32-bit node ids");
  }
  std::vector<Edge> canon;
  canon.reserve(edges.size());
  BuildStats local;
  for (const Edge& e : edges) {
    if (e.u < 0 || e.v < 0 || static_cast<std::size_t>(e.u) >= n ||
        static_cast<std::size_t>(e.v) >= n) {
      throw DomainError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                        ") outside [0, " + std::to_string(n) + ")");
    }
    if (e.u == e.v) {
      ++local.self_loops;
      continue;
    }
    canon.push_back(e.u < e.v ? e : Edge{e.v, e.u});
  }
  std::sort(canon.begin(), canon.end());
  const auto last = std::unique(canon.begin(), canon.end());
  local.duplicates = static_cast<std::size_t>(canon.end() - last);
  canon.erase(last, canon.end());

  Graph g(n);
  for (const Edge& e : canon) {
    ++g.offsets_[e.u + 1];
    ++g.offsets_[e.v + 1];
  }
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
  g.adjacency_.resize(2 * canon.size());
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const Edge& e : canon) {
    g.adjacency_[cursor[e.u]++] = e.v;
    g.adjacency_[cursor[e.v]++] = e.u;
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]),
              g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]));
  }
  if (stats) *stats = local;
  return g;
}

bool Graph::has_edge(NodeId i, NodeId j) const {
  const auto nb = neighbors(i);
  return std::binary_search(nb.begin(), nb.end(), j);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (std::size_t i = 0; i < n_; ++i) {
    for (NodeId j : neighbors(static_cast<NodeId>(i))) {
      if (static_cast<NodeId>(i) < j) out.push_back({static_cast<NodeId>(i), j});
    }
  }
  return out;
}

DegreeStats degree_stats(const Graph& g) {
  DegreeStats s;
  const std::size_t n = g.num_nodes();
  s.degrees.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.degrees[i] = g.degree(static_cast<NodeId>(i));
  if (n == 0) return s;
  s.avg = 2.0 * static_cast<double>(g.num_edges()) / static_cast<double>(n);
  const auto [lo, hi] = std::minmax_element(s.degrees.begin(), s.degrees.end());
  s.min = *lo;
  s.max = *hi;
  return s;
}

namespace {


std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::int64_t parse_int(std::string_view token, std::size_t line_no) {
  std::int64_t value = 0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError(line_no, "malformed integer '" + std::string(token) + "'");
  }
  return value;
}

// Calls fn(line_no, line) for every non-blank line, comments included.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    ++line_no;
    fn(line_no, text.substr(pos, end - pos));
    if (end == text.size()) break;
    pos = end + 1;
  }
}

}  // namespace

EdgeListResult load_edge_list(std::string_view text, IdMapping mapping) {
  std::vector<std::pair<std::int64_t, std::int64_t>> raw;
  std::int64_t max_id = -1;
  std::int64_t declared_nodes = 0;

  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    const auto tokens = split_ws(line);
    if (tokens.empty()) return;
    if (tokens.front().front() == '#') {
      // "# nodes N" directive; any other comment is ignored.
      if (tokens.size() == 3 && tokens[0] == "#" && tokens[1] == "nodes") {
        declared_nodes = std::max(declared_nodes, parse_int(tokens[2], line_no));
      }
      return;
    }
    if (tokens.size() != 2) {
      throw ParseError(line_no, "expected two node ids, found " + std::to_string(tokens.size()) +
                                    " tokens");
    }
    const std::int64_t u = parse_int(tokens[0], line_no);
    const std::int64_t v = parse_int(tokens[1], line_no);
    if (u < 0 || v < 0) throw ParseError(line_no, "negative node id");
    if (std::max(u, v) >= std::numeric_limits<NodeId>::max()) {
      throw ParseError(line_no, "node id too large");
    }
    max_id = std::max({max_id, u, v});
    raw.emplace_back(u, v);
  });

  EdgeListResult result;
  std::vector<Edge> edges;
  edges.reserve(raw.size());
  std::size_t n = 0;
  if (mapping == IdMapping::identity) {
    n = static_cast<std::size_t>(std::max<std::int64_t>(max_id + 1, declared_nodes));
    for (const auto& [u, v] : raw) edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
  } else {
    std::vector<std::int64_t> ids;
    ids.reserve(2 * raw.size());
    for (const auto& [u, v] : raw) {
      ids.push_back(u);
      ids.push_back(v);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    auto dense = [&](std::int64_t id) {
      return static_cast<NodeId>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
    };
    for (const auto& [u, v] : raw) edges.push_back({dense(u), dense(v)});
    n = ids.size();
    result.original_ids = std::move(ids);
  }

  Graph::BuildStats stats;
  result.graph = Graph::from_edges(n, edges, &stats);
  result.self_loops_dropped = stats.self_loops;
  result.duplicates_dropped = stats.duplicates;
  return result;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

EdgeListResult load_edge_list_file(const std::filesystem::path& path, IdMapping mapping) {
  return load_edge_list(read_text_file(path), mapping);
}

std::string serialize_edge_list(const Graph& g) {
  std::string out = "# nodes " + std::to_string(g.num_nodes()) + "\n";
  for (const Edge& e : g.edges()) {
    out += std::to_string(e.u);
    out += ' ';
    out += std::to_string(e.v);
    out += '\n';
  }
  return out;
}

std::vector<LabelEntry> load_labels(std::string_view text) {
  std::vector<LabelEntry> out;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    const auto tokens = split_ws(line);
    if (tokens.empty() || tokens.front().front() == '#') return;
    if (tokens.size() != 2) throw ParseError(line_no, "expected 'id label'");
    const std::int64_t id = parse_int(tokens[0], line_no);
    const std::int64_t label = parse_int(tokens[1], line_no);
    if (id < 0) throw ParseError(line_no, "negative node id");
    if (label < 0 || label > std::numeric_limits<int>::max()) {
      throw ParseError(line_no, "label out of range");
    }
    out.push_back({id, static_cast<int>(label)});
  });
  return out;
}

std::vector<LabelEntry> load_labels_file(const std::filesystem::path& path) {
  return load_labels(read_text_file(path));
}

std::pair<Graph, Graph> split_edges(const Graph& g, double tau, Rng& rng) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw DomainError("split_edges: tau must lie in [0, 1]");
  std::vector<Edge> first;
  std::vector<Edge> second;
  for (const Edge& e : g.edges()) {
    (rng.uniform() < tau ? first : second).push_back(e);
  }
  return {Graph::from_edges(g.num_nodes(), first), Graph::from_edges(g.num_nodes(), second)};
}

Subgraph largest_connected_component(const Graph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<int> comp(n, -1);
  std::vector<std::size_t> comp_size;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    const int c = static_cast<int>(comp_size.size());
    std::size_t size = 0;
    std::queue<NodeId> frontier;
    frontier.push(static_cast<NodeId>(s));
    comp[s] = c;
    while (!frontier.empty()) {
      const NodeId u = frontier.front();
      frontier.pop();
      ++size;
      for (NodeId v : g.neighbors(u)) {
        if (comp[v] < 0) {
          comp[v] = c;
          frontier.push(v);
        }
      }
    }
    comp_size.push_back(size);
  }

  Subgraph out;
  if (n == 0) return out;
  // Ties go to the component containing the smallest node id.
  const int best = static_cast<int>(std::max_element(comp_size.begin(), comp_size.end()) -
                                    comp_size.begin());
  std::vector<NodeId> new_id(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (comp[i] == best) {
      new_id[i] = static_cast<NodeId>(out.parent_ids.size());
      out.parent_ids.push_back(static_cast<NodeId>(i));
    }
  }
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    if (comp[e.u] == best) edges.push_back({new_id[e.u], new_id[e.v]});
  }
  out.graph = Graph::from_edges(out.parent_ids.size(), edges);
  return out;
}

Graph permute_nodes(const Graph& g, std::span<const NodeId> perm) {
  if (perm.size() != g.num_nodes()) throw DomainError("permute_nodes: size mismatch");
  std::vector<Edge> edges;
  edges.reserve(g.num_edges());
  for (const Edge& e : g.edges()) edges.push_back({perm[e.u], perm[e.v]});
  return Graph::from_edges(g.num_nodes(), edges);
}

}  // namespace tbcavi
