#include "mrfgc/ptas.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>

namespace mrfgc {

namespace {
    constexpr double kSlack = 1e-9;

    void check_epsilon(double epsilon)
    {
        if (!(epsilon > 0 && epsilon < 1)) fail(ErrorKind::InvalidArgument, "epsilon must lie in (0, 1)");
    }

    AnchoredConfiguration relabel(const AnchoredConfiguration& a, std::span<const Vertex> map)
    {
        AnchoredConfiguration out;
        out.config = a.config.mapped(map);
        out.formation = a.formation;
        for (Vertex v : a.embedding) out.embedding.push_back(map[v]);
        return out;
    }
} // namespace

TreeCover tree_cover(const RootedTree& t, double epsilon)
{
    check_epsilon(epsilon);
    const double threshold = 1.0 / epsilon + kSlack;
    int n = t.vertex_count();
    TreeCover cover;
    cover.epsilon = epsilon;
    std::vector<long> size(n, 0);
    std::vector<std::vector<Vertex>> tau(n);
    // children before parents; every child residual is final when its parent runs
    const auto& order = t.preorder();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        Vertex r = *it;
        size[r] = 1;
        tau[r] = {r};
        for (Vertex u : t.children(r)) {
            size[r] += size[u];
            tau[r].insert(tau[r].end(), tau[u].begin(), tau[u].end());
            std::vector<Vertex>().swap(tau[u]);
            if (size[r] > threshold) {
                cover.subtrees.push_back({r, std::move(tau[r]), true});
                tau[r] = {r};
                size[r] = 1;
            }
        }
    }
    cover.subtrees.push_back({t.root(), std::move(tau[t.root()]), false});

    std::vector<int> owner(n, -1);
    for (int i = 0; i < static_cast<int>(cover.subtrees.size()); ++i)
        for (Vertex v : cover.subtrees[i].vertices)
            if (v != cover.subtrees[i].root) owner[v] = i;
    cover.parent.assign(cover.subtrees.size(), -1);
    for (int i = 0; i < cover.residual(); ++i) {
        Vertex r = cover.subtrees[i].root;
        cover.parent[i] = r == t.root() ? cover.residual() : owner[r];
    }
    return cover;
}

CoverReport validate_tree_cover(const RootedTree& t, double epsilon, const TreeCover& cover)
{
    CoverReport report;
    auto problem = [&](std::string s) { report.problems.push_back(std::move(s)); };
    if (!(epsilon > 0 && epsilon < 1)) problem("epsilon outside (0, 1)");
    int n = t.vertex_count();
    int m = static_cast<int>(cover.subtrees.size());
    if (m == 0) {
        problem("cover has no subtrees");
        return report;
    }
    std::vector<std::vector<int>> member(n);
    for (int i = 0; i < m; ++i) {
        const auto& s = cover.subtrees[i];
        auto tag = "subtree " + std::to_string(i);
        if (s.vertices.empty() || s.vertices.front() != s.root) {
            problem(tag + " does not list its root first");
            continue;
        }
        std::vector<Vertex> sorted = s.vertices;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) problem(tag + " repeats a vertex");
        bool in_range = sorted.front() >= 0 && sorted.back() < n;
        if (!in_range) {
            problem(tag + " has a vertex out of range");
            continue;
        }
        for (Vertex v : s.vertices) {
            if (member[v].empty() || member[v].back() != i) member[v].push_back(i);
            if (v != s.root && !std::binary_search(sorted.begin(), sorted.end(), t.parent(v)))
                problem(tag + " is not a subtree hanging from its root (vertex " + std::to_string(v) + ")");
        }
        double size = static_cast<double>(s.vertices.size());
        if (size > 2.0 / epsilon + kSlack) problem(tag + " has " + std::to_string(s.vertices.size()) + " vertices, above 2/epsilon");
        if (s.flushed && size < 1.0 / epsilon - kSlack) problem(tag + " was flushed below 1/epsilon");
        if (!s.flushed && (i != m - 1 || s.root != t.root())) problem(tag + " is a residual that is not last or not at the root");
        if (!s.flushed && size > 1.0 / epsilon + kSlack) problem("residual subtree exceeds 1/epsilon");
    }
    for (Vertex v = 0; v < n; ++v)
        if (member[v].empty()) problem("vertex " + std::to_string(v) + " is not covered");

    std::map<std::pair<int, int>, int> shared;
    for (Vertex v = 0; v < n; ++v)
        for (std::size_t a = 0; a < member[v].size(); ++a)
            for (std::size_t b = a + 1; b < member[v].size(); ++b) {
                int x = member[v][a], y = member[v][b];
                if (++shared[{x, y}] == 2) problem("subtrees " + std::to_string(x) + " and " + std::to_string(y) + " share more than one vertex");
                if (cover.subtrees[x].root != v && cover.subtrees[y].root != v)
                    problem("subtrees " + std::to_string(x) + " and " + std::to_string(y) + " meet at a vertex that roots neither");
            }

    if (static_cast<int>(cover.parent.size()) != m) {
        problem("cover tree has the wrong number of nodes");
    } else {
        int roots = 0;
        for (int i = 0; i < m; ++i) {
            int p = cover.parent[i];
            if (p < 0) {
                ++roots;
                continue;
            }
            if (p >= m || p == i || !shared.count({std::min(i, p), std::max(i, p)})) {
                problem("cover tree edge " + std::to_string(i) + "-" + std::to_string(p) + " joins disjoint subtrees");
                continue;
            }
            int steps = 0, q = i;
            while (q >= 0 && steps <= m) q = cover.parent[q], ++steps;
            if (steps > m) problem("cover tree has a cycle through subtree " + std::to_string(i));
        }
        if (roots != 1) problem("cover tree has " + std::to_string(roots) + " roots");
    }
    if (cover.flushed_count() > n * epsilon + kSlack) problem("more than n*epsilon flushed subtrees");
    return report;
}

Traversal solve_subtree(const Instance& inst, std::span<const Vertex> vertices, const PtasOptions& options)
{
    Graph sub = inst.graph.induced_subgraph(vertices);
    auto home = Configuration::all_at(0, inst.types);
    auto local = make_instance(std::move(sub), inst.backend, home, home);
    SolveStatus status;
    Traversal y;
    if (options.subsolver == Subsolver::Oracle) {
        auto r = solve_exact_bfs(local, options.limits);
        status = r.status;
        y = std::move(r.traversal);
    } else {
        auto r = solve_fpt(local, options.fpt);
        status = r.status;
        y = std::move(r.traversal);
    }
    if (status == SolveStatus::LimitExceeded) fail(ErrorKind::BudgetExceeded, "subtree solver ran out of budget");
    if (status != SolveStatus::Optimal) fail(ErrorKind::Internal, "subtree solver found no traversal");
    Traversal out;
    for (const auto& a : y) out.push_back(relabel(a, vertices));
    return out;
}

Traversal greedy_traverse(const Instance& inst, const RootedTree& t, const TreeCover& cover, const PtasOptions& options, long* cover_time)
{
    if (!is_collapsible(*inst.backend)) fail(ErrorKind::NonCollapsible, "the PTAS needs a collapsible formation library");
    int n = t.vertex_count();
    std::vector<std::vector<int>> rooted_at(n);
    for (int i = 0; i < static_cast<int>(cover.subtrees.size()); ++i) rooted_at.at(cover.subtrees[i].root).push_back(i);
    std::vector<char> triggered(n, 0);
    long total = 0;

    auto home = [&](Vertex v) {
        auto a = inst.backend->anchor(inst.graph, Configuration::all_at(v, inst.types));
        if (!a) fail(ErrorKind::PreconditionViolated, "all robots on one vertex is not a valid configuration");
        return *a;
    };

    std::function<Traversal(Vertex)> run = [&](Vertex v) {
        Traversal out{home(v)};
        for (int idx : rooted_at[v]) {
            Traversal y = solve_subtree(inst, cover.subtrees[idx].vertices, options);
            total += traversal_time(y);
            for (std::size_t i = 0; i < y.size(); ++i) {
                if (i > 0) out.push_back(y[i]);
                for (Vertex w : y[i].config.occupied()) {
                    if (w == v || rooted_at[w].empty() || triggered[w]) continue;
                    triggered[w] = 1;
                    Traversal gather = regroup_sequence(*inst.backend, inst.graph, y[i], w);
                    out.insert(out.end(), gather.begin(), gather.end());
                    Traversal below = run(w);
                    out.insert(out.end(), below.begin() + 1, below.end());
                    if (!gather.empty()) {
                        for (int k = static_cast<int>(gather.size()) - 2; k >= 0; --k) out.push_back(gather[k]);
                        out.push_back(y[i]);
                    }
                }
            }
        }
        return out;
    };
    Traversal x = run(t.root());
    if (cover_time) *cover_time = total;
    return x;
}

PtasResult solve_ptas(const Instance& inst, double epsilon, const PtasOptions& options)
{
    auto t0 = std::chrono::steady_clock::now();
    check_instance(inst);
    check_epsilon(epsilon);
    if (!is_tree(inst.graph)) fail(ErrorKind::NotATree, "the PTAS runs on trees only");
    auto occ = inst.start.occupied();
    if (inst.start != inst.end || occ.size() != 1) fail(ErrorKind::PreconditionViolated, "the PTAS needs start = end with every robot on the root");
    if (!is_collapsible(*inst.backend)) fail(ErrorKind::NonCollapsible, "the PTAS needs a collapsible formation library");
    RootedTree t(inst.graph, occ.front());
    PtasResult result;
    result.cover = tree_cover(t, epsilon);
    result.traversal = greedy_traverse(inst, t, result.cover, options, &result.cover_time);
    auto check = validate_traversal(inst, result.traversal);
    if (!check.ok()) fail(ErrorKind::Internal, "greedy traversal does not validate: " + check.describe(inst.graph));
    result.greedy_time = traversal_time(result.traversal);
    if (options.compute_optimum) {
        auto exact = solve_exact_bfs(inst, options.limits);
        if (exact.status == SolveStatus::Optimal) result.optimal_time = exact.time();
    }
    result.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

} // namespace mrfgc
