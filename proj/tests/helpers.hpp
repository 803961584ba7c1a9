#pragma once

#include "mrfgc/configuration.hpp"
#include "mrfgc/graph.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <vector>

namespace testing_util {

using namespace mrfgc;

inline Graph path(int n)
{
    std::vector<Edge> e;
    for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return Graph(n, e);
}

inline Graph star(int leaves)
{
    std::vector<Edge> e;
    for (int i = 1; i <= leaves; ++i) e.emplace_back(0, i);
    return Graph(leaves + 1, e);
}

inline Graph random_connected(std::mt19937_64& rng, int n, int extra)
{
    std::set<Edge> e;
    for (int v = 1; v < n; ++v) e.insert({static_cast<int>(rng() % v), v});
    for (int i = 0; i < extra; ++i) {
        int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
        if (a != b) e.insert({std::min(a, b), std::max(a, b)});
    }
    std::vector<Edge> edges(e.begin(), e.end());
    return Graph(n, edges);
}

inline Graph random_tree(std::mt19937_64& rng, int n, int max_degree)
{
    std::vector<Edge> e;
    std::vector<int> deg(n, 0);
    for (int v = 1; v < n; ++v) {
        int p;
        do {
            p = static_cast<int>(rng() % v);
        } while (deg[p] >= max_degree);
        ++deg[p];
        ++deg[v];
        e.emplace_back(p, v);
    }
    return Graph(n, e);
}

/// Successors by brute force: label every robot and try every move tuple,
/// keep the ones with connected support.
inline std::set<Configuration> brute_successors(const Graph& g, const Configuration& a)
{
    std::vector<std::pair<Vertex, RobotType>> robots;
    for (const auto& p : a.placements())
        for (int i = 0; i < p.count; ++i) robots.emplace_back(p.vertex, p.type);
    std::set<Configuration> out;
    std::vector<Vertex> to(robots.size());
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == robots.size()) {
            Configuration c;
            for (std::size_t r = 0; r < robots.size(); ++r) c.add(to[r], robots[r].second, 1);
            if (g.is_connected_subset(c.occupied())) out.insert(c);
            return;
        }
        to[i] = robots[i].first;
        rec(i + 1);
        for (Vertex w : g.neighbors(robots[i].first)) {
            to[i] = w;
            rec(i + 1);
        }
    };
    rec(0);
    return out;
}

/// Every configuration of `types` on `g` whose support is connected.
inline std::vector<Configuration> all_connected(const Graph& g, const RobotTypes& types)
{
    std::vector<Configuration> out;
    std::set<Configuration> seen;
    std::vector<RobotType> robots;
    for (RobotType m = 0; m < types.type_count(); ++m)
        for (int i = 0; i < types.count(m); ++i) robots.push_back(m);
    std::vector<int> at(robots.size(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == robots.size()) {
            Configuration c;
            for (std::size_t r = 0; r < robots.size(); ++r) c.add(at[r], robots[r], 1);
            if (g.is_connected_subset(c.occupied()) && seen.insert(c).second) out.push_back(c);
            return;
        }
        for (int v = 0; v < g.vertex_count(); ++v) {
            at[i] = v;
            rec(i + 1);
        }
    };
    rec(0);
    return out;
}

/// Optimal connected-coverage time by iterative-deepening DFS over
/// brute-force successors; -1 when nothing up to `max_depth` works.
inline int iddfs_time(const Graph& g, const Configuration& start, const Configuration& end, int max_depth)
{
    int n = g.vertex_count();
    std::vector<int> covered(n, 0);
    std::function<bool(const Configuration&, int, int)> dfs = [&](const Configuration& c, int left, int missing) -> bool {
        if (missing == 0 && c == end) return true;
        if (left == 0) return false;
        for (const auto& next : brute_successors(g, c)) {
            int gained = 0;
            for (Vertex v : next.occupied())
                if (covered[v]++ == 0) ++gained;
            bool ok = dfs(next, left - 1, missing - gained);
            for (Vertex v : next.occupied()) --covered[v];
            if (ok) return true;
        }
        return false;
    };
    int missing = n;
    for (Vertex v : start.occupied())
        if (covered[v]++ == 0) --missing;
    for (int depth = 0; depth <= max_depth; ++depth)
        if (dfs(start, depth, missing)) return depth;
    return -1;
}

} // namespace testing_util
