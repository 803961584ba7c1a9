#pragma once

#include "mrfgc/fpt.hpp"
#include "mrfgc/instance.hpp"
#include "mrfgc/oracle.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mrfgc {

struct CoverSubtree {
    Vertex root;
    std::vector<Vertex> vertices; // root first
    bool flushed;                 // false only for the residual subtree
};

/// Subtrees of an epsilon-tree-cover. Flushed subtrees come in the order the
/// DFS emitted them, the residual (rooted at the tree root) is last.
/// parent[i] is the cover-tree parent of subtree i (-1 for the residual).
struct TreeCover {
    double epsilon = 0;
    std::vector<CoverSubtree> subtrees;
    std::vector<int> parent;

    int residual() const { return static_cast<int>(subtrees.size()) - 1; }
    int flushed_count() const { return static_cast<int>(subtrees.size()) - 1; }
};

TreeCover tree_cover(const RootedTree& t, double epsilon);

struct CoverReport {
    std::vector<std::string> problems;
    bool ok() const { return problems.empty(); }
};

CoverReport validate_tree_cover(const RootedTree& t, double epsilon, const TreeCover& cover);

enum class Subsolver { Oracle, Fpt };

struct PtasOptions {
    Subsolver subsolver = Subsolver::Oracle;
    SearchLimits limits{};
    FptOptions fpt{};
    /// Also run the oracle on the whole instance to report the optimum.
    bool compute_optimum = false;
};

struct PtasResult {
    Traversal traversal;
    TreeCover cover;
    int greedy_time = 0;
    long cover_time = 0; // sum of subtree optima
    std::optional<int> optimal_time;
    double wall_ms = 0;
};

/// Exact traversal of the subtree `vertices` (root first) starting and ending
/// with every robot on the root, expressed on the host graph.
Traversal solve_subtree(const Instance& inst, std::span<const Vertex> vertices, const PtasOptions& options);

/// Follows an optimal traversal of every cover subtree rooted at the tree
/// root; the first occupancy of a vertex that roots deeper subtrees triggers a
/// regroup there, a recursive traversal below it and the reversed regroup.
Traversal greedy_traverse(const Instance& inst, const RootedTree& t, const TreeCover& cover, const PtasOptions& options, long* cover_time = nullptr);

/// Requires a tree host, start == end with all robots on one vertex (the
/// root) and a collapsible backend.
PtasResult solve_ptas(const Instance& inst, double epsilon, const PtasOptions& options = {});

} // namespace mrfgc
