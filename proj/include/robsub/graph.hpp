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

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "robsub/common.hpp"

namespace robsub {

struct Edge {
  int u = 0;  // u < v
  int v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
  int node = 0;
  int edge = 0;
};

// Immutable undirected simple graph on nodes 0..n-1. Edges are stored sorted
// (u < v, lexicographic) and the edge id is the position in that order;
// adjacency lists are sorted by neighbor id.
class Graph {
 public:
  Graph() = default;

  // Throws InputError on self-loops, duplicate edges, out-of-range ids or a
  // label vector that does not cover every node.
  static Graph from_edges(int n, std::vector<std::pair<int, int>> edges,
                          std::vector<int> labels = {});

  int num_nodes() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int id) const { return edges_.at(static_cast<std::size_t>(id)); }

  std::span<const Neighbor> neighbors(int v) const {
    return {adjacency_.data() + offsets_[static_cast<std::size_t>(v)],
            adjacency_.data() + offsets_[static_cast<std::size_t>(v) + 1]};
  }
  int degree(int v) const {
    return static_cast<int>(offsets_[static_cast<std::size_t>(v) + 1] -
                            offsets_[static_cast<std::size_t>(v)]);
  }
  std::optional<int> edge_id(int u, int v) const;

  bool has_labels() const { return !labels_.empty(); }
  const std::vector<int>& labels() const { return labels_; }
  int num_labels() const;

  bool valid_node(int v) const { return v >= 0 && v < n_; }

  friend Graph attach_labels(const Graph& g, std::vector<int> labels);

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> adjacency_;
  std::vector<int> labels_;
};

// Propagation probability per edge id.
struct EdgeParams {
  VectorXd prob;

  static EdgeParams uniform(const Graph& g, double p);
  void validate(const Graph& g) const;
  double operator[](int edge) const { return prob[edge]; }
};

struct SbmParams {
  std::vector<int> sizes;
  double p_within = 0.0;
  double p_between = 0.0;
  // Community structure requires p_between <= p_within unless relaxed.
  bool allow_between_above_within = false;

  int num_nodes() const;
  void validate() const;
};

// Nodes are numbered community by community; labels are attached.
Graph generate_sbm(const SbmParams& params, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Edge-list text format: one "u v [p]" per line, '#' starts a comment line.
// A "# nodes N" comment fixes the node count so isolated nodes survive a round
// trip. Community labels live in a sidecar with "node label" per line.

struct EdgeList {
  Graph graph;
  std::optional<EdgeParams> params;  // present iff every line carried p
};

EdgeList parse_edge_list(const std::string& text, int min_nodes = 0);
EdgeList read_edge_list(const std::string& path, int min_nodes = 0);
std::vector<int> read_labels(const std::string& path, int n);
std::string format_edge_list(const Graph& g, const EdgeParams* params = nullptr);
void write_edge_list(const std::string& path, const Graph& g,
                     const EdgeParams* params = nullptr);
Graph attach_labels(const Graph& g, std::vector<int> labels);

}  // namespace robsub
