#pragma once

#include "mrfgc/instance.hpp"

#include <optional>
#include <utility>

namespace mrfgc {

struct SearchLimits {
    long max_states = 20'000'000;
    long max_ms = 600'000;
};

enum class SolveStatus { Optimal, Infeasible, LimitExceeded };

struct SearchResult {
    SolveStatus status = SolveStatus::Infeasible;
    Traversal traversal; // set when Optimal
    long states = 0;
    double wall_ms = 0;

    int time() const { return status == SolveStatus::Optimal ? traversal_time(traversal) : -1; }
};

/// Breadth-first search over (configuration, covered-vertex set) pairs.
/// Needs n <= 64.
SearchResult solve_exact_bfs(const Instance& inst, SearchLimits limits = {});

/// Earliest i < i' with x^i = x^{i'} and x^{i+1} = x^{i'+1}.
std::optional<std::pair<int, int>> find_repeated_transition(const Traversal& x);

/// Drops the repeated transition (i, i') by walking x^{i'-1} .. x^{i+1}
/// backwards; the result is two transitions shorter.
Traversal z_transform(const Traversal& x, int i, int i2);

/// Applies z_transform until no transition repeats.
Traversal normalize_traversal(Traversal x);

} // namespace mrfgc
