// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "robsub/graph.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace robsub {

Graph Graph::from_edges(int n, std::vector<std::pair<int, int>> edges,
                        std::vector<int> labels) {
  if (n < 0) throw InputError("graph: negative node count");
  Graph g;
  g.n_ = n;
  g.edges_.reserve(edges.size());
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n || b >= n)
      throw InputError("graph: edge endpoint out of range");
    if (a == b) throw InputError("graph: self-loop on node " + std::to_string(a));
    g.edges_.push_back({std::min(a, b), std::max(a, b)});
  }
  std::sort(g.edges_.begin(), g.edges_.end(), [](const Edge& x, const Edge& y) {
    return std::pair(x.u, x.v) < std::pair(y.u, y.v);
  });
  for (std::size_t i = 1; i < g.edges_.size(); ++i)
    if (g.edges_[i] == g.edges_[i - 1])
      throw InputError("graph: duplicate edge " + std::to_string(g.edges_[i].u) +
                       "-" + std::to_string(g.edges_[i].v));

  std::vector<std::size_t> deg(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& e : g.edges_) {
    ++deg[static_cast<std::size_t>(e.u) + 1];
    ++deg[static_cast<std::size_t>(e.v) + 1];
  }
  g.offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (int v = 0; v < n; ++v)
    g.offsets_[static_cast<std::size_t>(v) + 1] =
        g.offsets_[static_cast<std::size_t>(v)] + deg[static_cast<std::size_t>(v) + 1];
  g.adjacency_.resize(g.offsets_.back());
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (int id = 0; id < g.num_edges(); ++id) {
    const auto& e = g.edges_[static_cast<std::size_t>(id)];
    g.adjacency_[fill[static_cast<std::size_t>(e.u)]++] = {e.v, id};
    g.adjacency_[fill[static_cast<std::size_t>(e.v)]++] = {e.u, id};
  }
  for (int v = 0; v < n; ++v) {
    auto begin = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[static_cast<std::size_t>(v)]);
    auto end = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[static_cast<std::size_t>(v) + 1]);
    std::sort(begin, end, [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
  }
  if (!labels.empty()) g = attach_labels(g, std::move(labels));
  return g;
}

std::optional<int> Graph::edge_id(int u, int v) const {
  if (!valid_node(u) || !valid_node(v)) return std::nullopt;
  auto nb = neighbors(u);
  auto it = std::lower_bound(nb.begin(), nb.end(), v,
                             [](const Neighbor& a, int x) { return a.node < x; });
  if (it == nb.end() || it->node != v) return std::nullopt;
  return it->edge;
}

int Graph::num_labels() const {
  if (labels_.empty()) return 0;
  return *std::max_element(labels_.begin(), labels_.end()) + 1;
}

Graph attach_labels(const Graph& g, std::vector<int> labels) {
  if (labels.size() != static_cast<std::size_t>(g.num_nodes()))
    throw InputError("graph: labels must cover every node");
  for (int l : labels)
    if (l < 0) throw InputError("graph: negative community label");
  Graph out = g;
  out.labels_ = std::move(labels);
  return out;
}

EdgeParams EdgeParams::uniform(const Graph& g, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("edge probability outside [0,1]");
  return {VectorXd::Constant(g.num_edges(), p)};
}

void EdgeParams::validate(const Graph& g) const {
  if (prob.size() != g.num_edges())
    throw InputError("edge params: need exactly one probability per edge");
  for (Eigen::Index i = 0; i < prob.size(); ++i)
    if (!(prob[i] >= 0.0 && prob[i] <= 1.0))
      throw InputError("edge params: probability outside [0,1]");
}

int SbmParams::num_nodes() const {
  int n = 0;
  for (int s : sizes) n += s;
  return n;
}

void SbmParams::validate() const {
  if (sizes.empty()) throw ParameterError("sbm: no communities");
  for (int s : sizes)
    if (s <= 0) throw ParameterError("sbm: community sizes must be positive");
  auto in01 = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!in01(p_within) || !in01(p_between))
    throw ParameterError("sbm: probabilities must lie in [0,1]");
  if (!allow_between_above_within && p_between > p_within)
    throw ParameterError("sbm: p_between exceeds p_within");
}

Graph generate_sbm(const SbmParams& params, std::uint64_t seed) {
  params.validate();
  const int n = params.num_nodes();
  std::vector<int> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (std::size_t c = 0; c < params.sizes.size(); ++c)
    labels.insert(labels.end(), static_cast<std::size_t>(params.sizes[c]), static_cast<int>(c));

  Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  // Geometric skipping over the pair sequence of each block keeps generation
  // linear in the number of edges for sparse blocks.
  auto sample_block = [&](auto&& pair_at, long long count, double p) {
    if (p <= 0.0 || count == 0) return;
    if (p >= 1.0) {
      for (long long i = 0; i < count; ++i) edges.push_back(pair_at(i));
      return;
    }
    const double log_q = std::log1p(-p);
    long long i = -1;
    while (true) {
      const double r = 1.0 - rng.uniform();  // (0, 1]
      i += 1 + static_cast<long long>(std::floor(std::log(r) / log_q));
      if (i >= count) break;
      edges.push_back(pair_at(i));
    }
  };

  std::vector<int> start(params.sizes.size() + 1, 0);
  for (std::size_t c = 0; c < params.sizes.size(); ++c) start[c + 1] = start[c] + params.sizes[c];

  for (std::size_t a = 0; a < params.sizes.size(); ++a) {
    const long long sa = params.sizes[a];
    const int base_a = start[a];
    // Within block: pairs (i, j), i < j, enumerated row-major.
    sample_block(
        [&](long long idx) {
          // Invert idx -> (i, j) for the strictly upper triangle.
          long long i = 0;
          long long row = sa - 1;
          while (idx >= row) {
            idx -= row;
            ++i;
            --row;
          }
          return std::pair<int, int>(base_a + static_cast<int>(i),
                                     base_a + static_cast<int>(i + 1 + idx));
        },
        sa * (sa - 1) / 2, params.p_within);
    for (std::size_t b = a + 1; b < params.sizes.size(); ++b) {
      const long long sb = params.sizes[b];
      const int base_b = start[b];
      sample_block(
          [&](long long idx) {
            return std::pair<int, int>(base_a + static_cast<int>(idx / sb),
                                       base_b + static_cast<int>(idx % sb));
          },
          sa * sb, params.p_between);
    }
  }
  return Graph::from_edges(n, std::move(edges), std::move(labels));
}

EdgeList parse_edge_list(const std::string& text, int min_nodes) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::pair<int, int>> edges;
  std::vector<double> probs;
  bool all_have_p = true;
  int max_id = min_nodes - 1;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      std::istringstream header(line.substr(first + 1));
      std::string key;
      long long count = 0;
      if (header >> key >> count && key == "nodes" && count > 0 && count <= INT32_MAX)
        max_id = std::max(max_id, static_cast<int>(count) - 1);
      continue;
    }
    std::istringstream fields(line);
    long long u = -1, v = -1;
    if (!(fields >> u >> v) || u < 0 || v < 0 || u > INT32_MAX || v > INT32_MAX)
      throw InputError("edge list line " + std::to_string(line_no) + ": expected 'u v [p]'");
    double p = 0.0;
    if (fields >> p) {
      probs.push_back(p);
    } else {
      all_have_p = false;
    }
    edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
    max_id = std::max({max_id, static_cast<int>(u), static_cast<int>(v)});
  }
  EdgeList out;
  auto raw = edges;
  out.graph = Graph::from_edges(max_id + 1, std::move(edges));
  if (all_have_p && !raw.empty()) {
    EdgeParams params{VectorXd::Zero(out.graph.num_edges())};
    for (std::size_t i = 0; i < raw.size(); ++i)
      params.prob[*out.graph.edge_id(raw[i].first, raw[i].second)] = probs[i];
    params.validate(out.graph);
    out.params = std::move(params);
  }
  return out;
}

namespace {
std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}
}  // namespace

EdgeList read_edge_list(const std::string& path, int min_nodes) {
  return parse_edge_list(slurp(path), min_nodes);
}

std::vector<int> read_labels(const std::string& path, int n) {
  std::istringstream in(slurp(path));
  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    int node = -1, label = -1;
    if (!(fields >> node >> label) || node < 0 || node >= n || label < 0)
      throw InputError("labels: malformed line '" + line + "'");
    labels[static_cast<std::size_t>(node)] = label;
  }
  for (int l : labels)
    if (l < 0) throw InputError("labels: not every node is labeled");
  return labels;
}

std::string format_edge_list(const Graph& g, const EdgeParams* params) {
  std::ostringstream out;
  out << "# nodes " << g.num_nodes() << " edges " << g.num_edges() << '\n';
  out << std::setprecision(17);
  for (int id = 0; id < g.num_edges(); ++id) {
    const auto& e = g.edge(id);
    out << e.u << ' ' << e.v;
    if (params) out << ' ' << params->prob[id];
    out << '\n';
  }
  return out.str();
}

void write_edge_list(const std::string& path, const Graph& g, const EdgeParams* params) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << format_edge_list(g, params);
}

}  // namespace robsub
