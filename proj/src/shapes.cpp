#include "mrfgc/shapes.hpp"

#include "mrfgc/config_space.hpp"
#include "mrfgc/oracle.hpp"

#include <algorithm>
#include <queue>

namespace mrfgc {

std::string letter_name(ShapeLetter l)
{
    switch (l) {
    case ShapeLetter::O: return "O";
    case ShapeLetter::Pbar: return "P̄";
    case ShapeLetter::P: return "P";
    case ShapeLetter::L: return "L";
    case ShapeLetter::V: return "V";
    }
    return "?";
}

std::string letter_ascii(ShapeLetter l) { return l == ShapeLetter::Pbar ? "Pb" : letter_name(l); }

std::optional<ShapeClass> classify_transition_shape(const RootedTree& t, const AnchoredConfiguration& a, const AnchoredConfiguration& b, Vertex pivot)
{
    if (a.config.total() != 3 || b.config.total() != 3) fail(ErrorKind::InvalidArgument, "transition shapes are defined for three robots");
    for (const auto& p : a.config.placements())
        if (p.type != 0) fail(ErrorKind::InvalidArgument, "transition shapes are defined for homogeneous robots");
    if (a.config.count_at(pivot) == 0) return std::nullopt;
    auto children = t.children(pivot);
    std::vector<int> below;
    for (Vertex c : children) {
        if (a.config.count_at(c) > 0) return std::nullopt;
        if (int n = b.config.count_at(c); n > 0) below.push_back(n);
    }
    if (below.empty()) return std::nullopt;
    std::sort(below.rbegin(), below.rend());

    Vertex parent = t.parent(pivot);
    ShapeClass s{};
    s.pre_at_r = a.config.count_at(pivot);
    s.pre_at_parent = parent >= 0 ? a.config.count_at(parent) : 0;
    s.pre_beyond = 3 - s.pre_at_r - s.pre_at_parent;
    s.post_children = below;
    s.post_at_r = b.config.count_at(pivot);
    s.post_at_parent = parent >= 0 ? b.config.count_at(parent) : 0;

    auto bad = [] { fail(ErrorKind::PreconditionViolated, "transition does not match any three robot shape"); };
    if (s.pre_at_r == 3) s.pre = ShapeLetter::O;
    else if (s.pre_at_r == 2 && s.pre_at_parent == 1) s.pre = ShapeLetter::Pbar;
    else if (s.pre_at_r == 1 && s.pre_at_parent == 2) s.pre = ShapeLetter::P;
    else if (s.pre_at_r == 1 && s.pre_at_parent == 1) s.pre = ShapeLetter::L;
    else bad();

    if (below == std::vector<int>{3}) s.post = ShapeLetter::O;
    else if (below == std::vector<int>{2} && s.post_at_r == 1) s.post = ShapeLetter::Pbar;
    else if (below == std::vector<int>{1} && s.post_at_r == 2) s.post = ShapeLetter::P;
    else if (below == std::vector<int>{1} && s.post_at_r == 1 && s.post_at_parent == 1) s.post = ShapeLetter::L;
    else if (below == std::vector<int>{1, 1} && s.post_at_r == 1) s.post = ShapeLetter::V;
    else bad();
    return s;
}

RootedTree shape_host()
{
    // 0 Q, 1 P, 2 R, 3 S, 4..6 children of R, 7..9 grandchildren
    std::vector<Edge> e{{0, 1}, {1, 2}, {1, 3}, {2, 4}, {2, 5}, {2, 6}, {4, 7}, {5, 8}, {6, 9}};
    return RootedTree(Graph(10, e, {"Q", "P", "R", "S", "C1", "C2", "C3", "G1", "G2", "G3"}), 0);
}

namespace {

    Instance host_instance(const RootedTree& t)
    {
        auto types = RobotTypes::homogeneous(3);
        auto home = Configuration::all_at(kShapePivot, types);
        return make_instance(t.graph(), make_implicit_backend(types), home, home);
    }

    struct Occurrence {
        int before, after;
    };

    std::vector<std::pair<ShapeClass, std::vector<Occurrence>>> occurrences(const RootedTree& t, const ConfigSpace& space)
    {
        std::vector<std::pair<ShapeClass, std::vector<Occurrence>>> out;
        for (int a = 0; a < space.size(); ++a) {
            for (int b : space.successors(a)) {
                auto s = classify_transition_shape(t, space.anchored(a), space.anchored(b), kShapePivot);
                if (!s) continue;
                auto it = std::find_if(out.begin(), out.end(), [&](const auto& e) { return e.first == *s; });
                if (it == out.end()) {
                    out.push_back({*s, {}});
                    it = out.end() - 1;
                }
                it->second.push_back({a, b});
            }
        }
        return out;
    }

    std::vector<int> shortest_path(const ConfigSpace& space, int from, int to)
    {
        std::vector<int> prev(space.size(), -2);
        std::queue<int> queue;
        queue.push(from);
        prev[from] = -1;
        while (!queue.empty() && prev[to] == -2) {
            int u = queue.front();
            queue.pop();
            for (int w : space.successors(u))
                if (prev[w] == -2) {
                    prev[w] = u;
                    queue.push(w);
                }
        }
        if (prev[to] == -2) fail(ErrorKind::Internal, "configuration unreachable in the shape host");
        std::vector<int> path;
        for (int v = to; v >= 0; v = prev[v]) path.push_back(v);
        std::reverse(path.begin(), path.end());
        return path;
    }

    void condense(Traversal& x)
    {
        x.erase(std::unique(x.begin(), x.end()), x.end());
    }

} // namespace

std::vector<ShapeWitness> enumerate_shapes()
{
    RootedTree t = shape_host();
    Instance inst = host_instance(t);
    ConfigSpace space(inst);
    std::vector<ShapeWitness> out;
    for (const auto& [shape, occ] : occurrences(t, space))
        out.push_back({shape, space.anchored(occ.front().before), space.anchored(occ.front().after)});
    return out;
}

std::vector<std::pair<int, ShapeClass>> shape_entries(const RootedTree& t, const Traversal& x, Vertex pivot)
{
    std::vector<std::pair<int, ShapeClass>> out;
    for (int i = 0; i + 1 < static_cast<int>(x.size()); ++i)
        if (auto s = classify_transition_shape(t, x[i], x[i + 1], pivot)) out.emplace_back(i, *s);
    return out;
}

Traversal shape_z_transform(const Instance& inst, const RootedTree& t, const Traversal& x, int i, int i2, Vertex pivot)
{
    int len = static_cast<int>(x.size());
    if (i < 0 || i >= i2 || i2 + 1 >= len) fail(ErrorKind::PreconditionViolated, "shape transform needs 0 <= i < i2 < |x| - 1");
    auto s1 = classify_transition_shape(t, x[i], x[i + 1], pivot);
    auto s2 = classify_transition_shape(t, x[i2], x[i2 + 1], pivot);
    if (!s1 || !s2 || !(*s1 == *s2)) fail(ErrorKind::PreconditionViolated, "transitions do not enter the pivot with the same shape");

    const auto& backend = *inst.backend;
    auto step = [&](const AnchoredConfiguration& a, const AnchoredConfiguration& b) { return a == b || is_valid_transition(backend, inst.graph, a, b); };
    Traversal y(x.begin(), x.begin() + i + 1);
    if (step(x[i], x[i2]) && step(x[i + 1], x[i2 + 1])) {
        for (int k = i2; k >= i + 1; --k) y.push_back(x[k]);
    } else if (x[i] == x[i2]) {
        for (int k = i2 - 1; k >= i + 1; --k) y.push_back(x[k]);
        auto home = backend.anchor(inst.graph, Configuration::all_at(pivot, inst.types));
        if (home && step(x[i + 1], *home) && step(*home, x[i2 + 1])) y.push_back(*home);
        else y.push_back(x[i]);
    } else {
        fail(ErrorKind::Internal, "repeated " + s1->ascii_name() + " shape cannot be bridged");
    }
    y.insert(y.end(), x.begin() + i2 + 1, x.end());
    condense(y);

    for (std::size_t k = 0; k + 1 < y.size(); ++k)
        if (!is_valid_transition(backend, inst.graph, y[k], y[k + 1])) fail(ErrorKind::Internal, "shape transform produced an invalid step");
    std::vector<char> seen(inst.graph.vertex_count(), 0), kept(inst.graph.vertex_count(), 0);
    for (const auto& a : x)
        for (Vertex v : a.config.occupied()) seen[v] = 1;
    for (const auto& a : y)
        for (Vertex v : a.config.occupied()) kept[v] = 1;
    if (seen != kept) fail(ErrorKind::Internal, "shape transform changed the covered vertices");
    return y;
}

Traversal normalize_shapes(const Instance& inst, const RootedTree& t, Traversal x, int max_rounds)
{
    for (int round = 0;; ++round) {
        bool changed = false;
        for (Vertex r : t.preorder()) {
            auto entries = shape_entries(t, x, r);
            for (std::size_t a = 0; a < entries.size() && !changed; ++a)
                for (std::size_t b = a + 1; b < entries.size() && !changed; ++b)
                    if (entries[a].second == entries[b].second) {
                        x = shape_z_transform(inst, t, x, entries[a].first, entries[b].first, r);
                        changed = true;
                    }
            if (changed) break;
        }
        if (!changed) return x;
        if (round + 1 >= max_rounds) fail(ErrorKind::BudgetExceeded, "shape normalization did not settle");
    }
}

ShapeFixture make_shape_fixture(const ShapeClass& shape)
{
    RootedTree t = shape_host();
    ShapeFixture f{host_instance(t), {}, -1, -1};
    ConfigSpace space(f.instance);
    const auto& backend = *f.instance.backend;
    auto step = [&](int a, int b) { return a == b || is_valid_transition(backend, t.graph(), space.anchored(a), space.anchored(b)); };

    std::vector<Occurrence> occ;
    for (const auto& [s, o] : occurrences(t, space))
        if (s == shape) occ = o;
    if (occ.empty()) fail(ErrorKind::InvalidArgument, "shape " + shape.ascii_name() + " does not occur");
    Occurrence first = occ.front(), second = occ.front();
    bool found = false;
    for (std::size_t p = 0; p < occ.size() && !found; ++p)
        for (std::size_t q = p + 1; q < occ.size() && !found; ++q) {
            const auto& u = occ[p];
            const auto& w = occ[q];
            bool direct = step(u.before, w.before) && step(u.after, w.after);
            if (direct || u.before == w.before) first = u, second = w, found = true;
        }

    int home = space.start();
    std::vector<int> ids = shortest_path(space, home, first.before);
    f.i = static_cast<int>(ids.size()) - 1;
    ids.push_back(first.after);
    // leave the subtree through a step whose reverse is not the same shape,
    // otherwise reversing the middle section recreates the repetition
    int exit_from = -1;
    std::size_t best = 0;
    for (int c : space.successors(second.before)) {
        auto s = classify_transition_shape(t, space.anchored(second.before), space.anchored(c), kShapePivot);
        if (s && *s == shape) continue;
        auto path = shortest_path(space, first.after, c);
        if (exit_from < 0 || path.size() < best) exit_from = c, best = path.size();
    }
    auto mid = shortest_path(space, first.after, exit_from >= 0 ? exit_from : second.before);
    if (exit_from >= 0) mid.push_back(second.before);
    ids.insert(ids.end(), mid.begin() + 1, mid.end());
    f.i2 = static_cast<int>(ids.size()) - 1;
    ids.push_back(second.after);
    auto back = shortest_path(space, second.after, home);
    ids.insert(ids.end(), back.begin() + 1, back.end());
    for (int id : ids) f.traversal.push_back(space.anchored(id));

    auto tour = solve_exact_bfs(f.instance);
    if (tour.status != SolveStatus::Optimal) fail(ErrorKind::Internal, "shape host tour failed");
    f.traversal.insert(f.traversal.end(), tour.traversal.begin() + 1, tour.traversal.end());
    return f;
}

} // namespace mrfgc
