#pragma once

#include "mrfgc/error.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mrfgc {

using Vertex = int;
using Edge = std::pair<Vertex, Vertex>;

/// Undirected simple graph on dense vertex ids 0..n-1, with optional stable
/// labels used only at I/O boundaries.
class Graph {
public:
    Graph() = default;
    explicit Graph(int n, std::span<const Edge> edges = {}, std::vector<std::string> labels = {});

    int vertex_count() const { return static_cast<int>(adjacency_.size()); }
    int edge_count() const { return edge_count_; }
    std::span<const Vertex> neighbors(Vertex v) const { return adjacency_.at(v); }
    int degree(Vertex v) const { return static_cast<int>(adjacency_.at(v).size()); }
    int max_degree() const;
    bool has_edge(Vertex u, Vertex v) const;
    std::vector<Edge> edges() const;

    const std::string& label(Vertex v) const { return labels_.at(v); }
    const std::vector<std::string>& labels() const { return labels_; }
    std::optional<Vertex> find_label(const std::string& label) const;

    bool is_connected() const;
    /// True iff the subgraph induced by `vertices` is connected (empty set counts as connected).
    bool is_connected_subset(std::span<const Vertex> vertices) const;
    Graph induced_subgraph(std::span<const Vertex> vertices) const;

    friend bool operator==(const Graph& a, const Graph& b) { return a.adjacency_ == b.adjacency_; }

private:
    std::vector<std::vector<Vertex>> adjacency_;
    std::vector<std::string> labels_;
    std::unordered_map<std::string, Vertex> label_index_;
    int edge_count_ = 0;
};

struct Contraction {
    Graph graph;
    /// merge_map[v] is the vertex of the contracted graph that v became.
    std::vector<Vertex> merge_map;
};

/// Contracts edge {u,v}: u and v become one vertex, parallel edges collapse,
/// self-loops vanish. Surviving vertices keep their relative order, the merged
/// vertex takes the smaller id's slot.
Contraction contract_edge(const Graph& g, Edge e);

class RootedTree {
public:
    RootedTree(Graph g, Vertex root);

    const Graph& graph() const { return graph_; }
    Vertex root() const { return root_; }
    int vertex_count() const { return graph_.vertex_count(); }
    Vertex parent(Vertex v) const { return parent_.at(v); } // -1 for the root
    std::span<const Vertex> children(Vertex v) const { return children_.at(v); }
    bool is_leaf(Vertex v) const { return children_.at(v).empty(); }
    /// Root first, parents before children.
    const std::vector<Vertex>& preorder() const { return preorder_; }
    int depth(Vertex v) const { return depth_.at(v); }

private:
    Graph graph_;
    Vertex root_;
    std::vector<Vertex> parent_;
    std::vector<std::vector<Vertex>> children_;
    std::vector<Vertex> preorder_;
    std::vector<int> depth_;
};

bool is_tree(const Graph& g);

} // namespace mrfgc
