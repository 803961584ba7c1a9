#include "mrfgc/tree_decomp.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace mrfgc {

NiceTreeDecomposition::NiceTreeDecomposition(int vertex_count, std::vector<Bag> bags, int root) : n_(vertex_count), bags_(std::move(bags)), root_(root)
{
    if (root_ < 0 || root_ >= size()) fail(ErrorKind::InvalidDecomposition, "root bag out of range");
    for (auto& b : bags_) std::sort(b.vertices.begin(), b.vertices.end());
    std::vector<int> stack{root_};
    std::vector<char> seen(size(), 0);
    std::vector<int> pre;
    while (!stack.empty()) {
        int j = stack.back();
        stack.pop_back();
        if (seen[j]) fail(ErrorKind::InvalidDecomposition, "bag graph is not a tree");
        seen[j] = 1;
        pre.push_back(j);
        for (int c : bags_[j].children) {
            if (c < 0 || c >= size()) fail(ErrorKind::InvalidDecomposition, "child bag out of range");
            stack.push_back(c);
        }
    }
    if (static_cast<int>(pre.size()) != size()) fail(ErrorKind::InvalidDecomposition, "bags unreachable from the root");
    postorder_.assign(pre.rbegin(), pre.rend());
}

const Bag& NiceTreeDecomposition::bag(int j) const
{
    if (j < 0 || j >= size()) fail(ErrorKind::InvalidArgument, "bad bag id " + std::to_string(j));
    return bags_[j];
}

int NiceTreeDecomposition::width() const
{
    int w = 0;
    for (const auto& b : bags_) w = std::max(w, static_cast<int>(b.vertices.size()));
    return w - 1;
}

std::vector<Vertex> NiceTreeDecomposition::v_down(int j) const
{
    const auto& top = bag(j).vertices;
    std::vector<char> mark(n_, 0);
    std::vector<int> stack(bags_[j].children.begin(), bags_[j].children.end());
    while (!stack.empty()) {
        int c = stack.back();
        stack.pop_back();
        for (Vertex v : bags_[c].vertices) mark[v] = 1;
        for (int cc : bags_[c].children) stack.push_back(cc);
    }
    for (Vertex v : top) mark[v] = 0;
    std::vector<Vertex> out;
    for (Vertex v = 0; v < n_; ++v)
        if (mark[v]) out.push_back(v);
    return out;
}

std::vector<Vertex> NiceTreeDecomposition::v_up(int j) const
{
    std::vector<char> mark(n_, 1);
    for (Vertex v : v_down(j)) mark[v] = 0;
    for (Vertex v : bag(j).vertices) mark[v] = 0;
    std::vector<Vertex> out;
    for (Vertex v = 0; v < n_; ++v)
        if (mark[v]) out.push_back(v);
    return out;
}

TreeDecomposition NiceTreeDecomposition::plain() const
{
    TreeDecomposition td;
    for (const auto& b : bags_) td.bags.push_back(b.vertices);
    for (int j = 0; j < size(); ++j)
        for (int c : bags_[j].children) td.edges.emplace_back(j, c);
    td.root = root_;
    return td;
}

namespace {

    class NiceBuilder {
    public:
        int leaf()
        {
            bags.push_back(Bag{{}, BagKind::Leaf, -1, {}, -1});
            return static_cast<int>(bags.size()) - 1;
        }

        int introduce(int child, Vertex v)
        {
            auto vs = bags[child].vertices;
            vs.insert(std::upper_bound(vs.begin(), vs.end(), v), v);
            return attach(Bag{std::move(vs), BagKind::Introduce, v, {child}, -1});
        }

        int forget(int child, Vertex v)
        {
            auto vs = bags[child].vertices;
            vs.erase(std::find(vs.begin(), vs.end(), v));
            return attach(Bag{std::move(vs), BagKind::Forget, v, {child}, -1});
        }

        int join(int a, int b) { return attach(Bag{bags[a].vertices, BagKind::Join, -1, {a, b}, -1}); }

        /// Forgets then introduces until the bag equals `target`.
        int morph(int from, const std::vector<Vertex>& target)
        {
            int cur = from;
            auto have = bags[from].vertices;
            for (Vertex v : have)
                if (!std::binary_search(target.begin(), target.end(), v)) cur = forget(cur, v);
            for (Vertex v : target)
                if (!std::binary_search(have.begin(), have.end(), v)) cur = introduce(cur, v);
            return cur;
        }

        std::vector<Bag> bags;

    private:
        int attach(Bag b)
        {
            int id = static_cast<int>(bags.size());
            for (int c : b.children) bags[c].parent = id;
            bags.push_back(std::move(b));
            return id;
        }
    };

} // namespace

NiceTreeDecomposition decompose_tree(const RootedTree& t)
{
    NiceBuilder nb;
    std::function<int(Vertex)> build = [&](Vertex v) -> int {
        auto kids = t.children(v);
        if (kids.empty()) return nb.introduce(nb.leaf(), v);
        int acc = -1;
        for (Vertex c : kids) {
            int below = build(c);
            int branch = nb.forget(nb.introduce(below, v), c);
            acc = acc < 0 ? branch : nb.join(acc, branch);
        }
        return acc;
    };
    int top = nb.forget(build(t.root()), t.root());
    return NiceTreeDecomposition(t.graph().vertex_count(), std::move(nb.bags), top);
}

DecompositionReport validate_plain_decomposition(const Graph& g, const TreeDecomposition& td)
{
    DecompositionReport r;
    int n = g.vertex_count(), m = static_cast<int>(td.bags.size());
    if (m == 0) {
        r.problems.push_back("no bags");
        return r;
    }
    if (static_cast<int>(td.edges.size()) != m - 1) r.problems.push_back("bag graph does not have |bags|-1 edges");
    std::vector<std::vector<int>> adj(m);
    for (auto [a, b] : td.edges) {
        if (a < 0 || b < 0 || a >= m || b >= m) {
            r.problems.push_back("bag edge out of range");
            return r;
        }
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<std::vector<char>> in(m, std::vector<char>(n, 0));
    for (int j = 0; j < m; ++j)
        for (Vertex v : td.bags[j]) {
            if (v < 0 || v >= n) {
                r.problems.push_back("bag vertex out of range");
                return r;
            }
            in[j][v] = 1;
        }
    for (Vertex v = 0; v < n; ++v) {
        std::vector<int> holders;
        for (int j = 0; j < m; ++j)
            if (in[j][v]) holders.push_back(j);
        if (holders.empty()) {
            r.problems.push_back("vertex " + g.label(v) + " in no bag");
            continue;
        }
        std::vector<char> seen(m, 0);
        std::vector<int> stack{holders.front()};
        seen[holders.front()] = 1;
        int reached = 0;
        while (!stack.empty()) {
            int j = stack.back();
            stack.pop_back();
            ++reached;
            for (int w : adj[j])
                if (in[w][v] && !seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
        }
        if (reached != static_cast<int>(holders.size())) r.problems.push_back("bags holding vertex " + g.label(v) + " are not connected");
    }
    for (auto [u, v] : g.edges()) {
        bool together = false;
        for (int j = 0; j < m && !together; ++j) together = in[j][u] && in[j][v];
        if (!together) r.problems.push_back("edge " + g.label(u) + "-" + g.label(v) + " in no bag");
    }
    return r;
}

DecompositionReport validate_decomposition(const Graph& g, const NiceTreeDecomposition& d)
{
    auto r = validate_plain_decomposition(g, d.plain());
    if (!d.bag(d.root()).vertices.empty()) r.problems.push_back("root bag is not empty");
    for (int j = 0; j < d.size(); ++j) {
        const auto& b = d.bag(j);
        std::string at = "bag " + std::to_string(j);
        for (int c : b.children)
            if (d.bag(c).parent != j) r.problems.push_back(at + ": child parent link broken");
        auto child = [&](int i) -> const std::vector<Vertex>& { return d.bag(b.children[i]).vertices; };
        switch (b.kind) {
        case BagKind::Leaf:
            if (!b.children.empty() || !b.vertices.empty()) r.problems.push_back(at + ": leaf must be empty and childless");
            break;
        case BagKind::Introduce: {
            if (b.children.size() != 1) {
                r.problems.push_back(at + ": introduce needs one child");
                break;
            }
            auto expect = child(0);
            if (std::binary_search(expect.begin(), expect.end(), b.vertex)) r.problems.push_back(at + ": introduced vertex already in child");
            expect.insert(std::upper_bound(expect.begin(), expect.end(), b.vertex), b.vertex);
            if (expect != b.vertices) r.problems.push_back(at + ": introduce bag is not child plus vertex");
            break;
        }
        case BagKind::Forget: {
            if (b.children.size() != 1) {
                r.problems.push_back(at + ": forget needs one child");
                break;
            }
            auto expect = child(0);
            auto it = std::find(expect.begin(), expect.end(), b.vertex);
            if (it == expect.end()) {
                r.problems.push_back(at + ": forgotten vertex not in child");
                break;
            }
            expect.erase(it);
            if (expect != b.vertices) r.problems.push_back(at + ": forget bag is not child minus vertex");
            break;
        }
        case BagKind::Join:
            if (b.children.size() != 2) {
                r.problems.push_back(at + ": join needs two children");
                break;
            }
            if (child(0) != b.vertices || child(1) != b.vertices) r.problems.push_back(at + ": join children differ from the join bag");
            break;
        }
    }
    return r;
}

NiceTreeDecomposition make_nice(const Graph& g, const TreeDecomposition& td)
{
    auto report = validate_plain_decomposition(g, td);
    if (!report.ok()) fail(ErrorKind::InvalidDecomposition, report.problems.front());
    int m = static_cast<int>(td.bags.size());
    if (td.root < 0 || td.root >= m) fail(ErrorKind::InvalidDecomposition, "root bag out of range");
    std::vector<std::vector<int>> adj(m);
    for (auto [a, b] : td.edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<std::vector<Vertex>> bags = td.bags;
    for (auto& b : bags) {
        std::sort(b.begin(), b.end());
        b.erase(std::unique(b.begin(), b.end()), b.end());
    }
    NiceBuilder nb;
    std::function<int(int, int)> build = [&](int j, int from) -> int {
        int acc = -1;
        for (int c : adj[j]) {
            if (c == from) continue;
            int branch = nb.morph(build(c, j), bags[j]);
            acc = acc < 0 ? branch : nb.join(acc, branch);
        }
        if (acc < 0) acc = nb.morph(nb.leaf(), bags[j]);
        return acc;
    };
    int top = nb.morph(build(td.root, -1), {});
    return NiceTreeDecomposition(g.vertex_count(), std::move(nb.bags), top);
}

TreeDecomposition min_degree_decomposition(const Graph& g)
{
    int n = g.vertex_count();
    TreeDecomposition td;
    if (n == 0) fail(ErrorKind::InvalidArgument, "empty graph");
    std::vector<std::set<Vertex>> adj(n);
    for (auto [u, v] : g.edges()) {
        adj[u].insert(v);
        adj[v].insert(u);
    }
    std::vector<char> gone(n, 0);
    std::vector<int> position(n, -1);
    std::vector<Vertex> order;
    for (int step = 0; step < n; ++step) {
        Vertex best = -1;
        for (Vertex v = 0; v < n; ++v)
            if (!gone[v] && (best < 0 || adj[v].size() < adj[best].size())) best = v;
        std::vector<Vertex> bag{best};
        bag.insert(bag.end(), adj[best].begin(), adj[best].end());
        std::sort(bag.begin(), bag.end());
        td.bags.push_back(bag);
        position[best] = step;
        order.push_back(best);
        for (Vertex a : adj[best])
            for (Vertex b : adj[best])
                if (a != b) adj[a].insert(b);
        for (Vertex a : adj[best]) adj[a].erase(best);
        gone[best] = 1;
    }
    // bag of v hangs below the bag of its neighbour eliminated next
    for (int step = 0; step + 1 < n; ++step) {
        int parent = n - 1;
        for (Vertex w : td.bags[step])
            if (position[w] > step) parent = std::min(parent, position[w]);
        td.edges.emplace_back(step, parent);
    }
    td.root = n - 1;
    return td;
}

} // namespace mrfgc
