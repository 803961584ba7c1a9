#pragma once

#include "mrfgc/graph.hpp"

#include <string>
#include <vector>

namespace mrfgc {

enum class BagKind { Leaf, Introduce, Forget, Join };

struct Bag {
    std::vector<Vertex> vertices; // sorted
    BagKind kind = BagKind::Leaf;
    Vertex vertex = -1;           // introduced / forgotten vertex
    std::vector<int> children;
    int parent = -1;
};

/// Any tree decomposition: bags plus undirected tree edges between bag ids.
struct TreeDecomposition {
    std::vector<std::vector<Vertex>> bags;
    std::vector<std::pair<int, int>> edges;
    int root = 0;
};

class NiceTreeDecomposition {
public:
    NiceTreeDecomposition() = default;
    NiceTreeDecomposition(int vertex_count, std::vector<Bag> bags, int root);

    int size() const { return static_cast<int>(bags_.size()); }
    int vertex_count() const { return n_; }
    const Bag& bag(int j) const;
    int root() const { return root_; }
    int width() const;
    /// Bag ids, children before parents.
    const std::vector<int>& postorder() const { return postorder_; }

    /// Vertices appearing only in bags strictly below j (not in B_j).
    std::vector<Vertex> v_down(int j) const;
    /// Vertices in neither B_j nor V_down(j).
    std::vector<Vertex> v_up(int j) const;

    TreeDecomposition plain() const;

private:
    int n_ = 0;
    std::vector<Bag> bags_;
    int root_ = -1;
    std::vector<int> postorder_;
};

NiceTreeDecomposition decompose_tree(const RootedTree& t);
NiceTreeDecomposition make_nice(const Graph& g, const TreeDecomposition& td);
/// Min-degree elimination ordering heuristic.
TreeDecomposition min_degree_decomposition(const Graph& g);

struct DecompositionReport {
    std::vector<std::string> problems;
    bool ok() const { return problems.empty(); }
};

DecompositionReport validate_decomposition(const Graph& g, const NiceTreeDecomposition& d);
/// Checks the three tree-decomposition properties of an arbitrary decomposition.
DecompositionReport validate_plain_decomposition(const Graph& g, const TreeDecomposition& td);

} // namespace mrfgc
