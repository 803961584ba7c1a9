#include "doctest.h"
#include "helpers.hpp"
#include "mrfgc/tree_decomp.hpp"

#include <numeric>

using namespace mrfgc;
using namespace testing_util;

namespace {

// Is every path from `from` to `to` forced through `sep`?  BFS avoiding sep.
bool separates(const Graph& g, const std::vector<Vertex>& sep, const std::vector<Vertex>& from, const std::vector<Vertex>& to)
{
    std::vector<char> blocked(g.vertex_count(), 0), seen(g.vertex_count(), 0), target(g.vertex_count(), 0);
    for (Vertex v : sep) blocked[v] = 1;
    for (Vertex v : to) target[v] = 1;
    std::vector<Vertex> stack;
    for (Vertex v : from) {
        seen[v] = 1;
        stack.push_back(v);
    }
    while (!stack.empty()) {
        Vertex u = stack.back();
        stack.pop_back();
        if (target[u]) return false;
        for (Vertex w : g.neighbors(u))
            if (!blocked[w] && !seen[w]) {
                seen[w] = 1;
                stack.push_back(w);
            }
    }
    return true;
}

void check_partition(const NiceTreeDecomposition& d)
{
    for (int j = 0; j < d.size(); ++j) {
        std::vector<int> count(d.vertex_count(), 0);
        for (Vertex v : d.v_down(j)) ++count[v];
        for (Vertex v : d.v_up(j)) ++count[v];
        for (Vertex v : d.bag(j).vertices) ++count[v];
        for (int c : count) CHECK(c == 1);
    }
}

} // namespace

TEST_CASE("single vertex tree")
{
    auto d = decompose_tree(RootedTree(Graph(1), 0));
    CHECK(validate_decomposition(Graph(1), d).ok());
    CHECK(d.size() == 3);
    CHECK(d.width() == 0);
    CHECK(d.bag(d.root()).vertices.empty());
}

TEST_CASE("an edge gets a shared bag")
{
    Graph g = path(2);
    auto d = decompose_tree(RootedTree(g, 0));
    CHECK(validate_decomposition(g, d).ok());
    CHECK(d.width() == 1);
    bool shared = false;
    for (int j = 0; j < d.size(); ++j) shared |= d.bag(j).vertices == std::vector<Vertex>{0, 1};
    CHECK(shared);
}

TEST_CASE("random trees decompose with width one")
{
    std::mt19937_64 rng(2);
    for (int round = 0; round < 20; ++round) {
        Graph g = random_tree(rng, 50, 4);
        auto d = decompose_tree(RootedTree(g, static_cast<Vertex>(rng() % 50)));
        auto rep = validate_decomposition(g, d);
        CHECK(rep.ok());
        CHECK(d.width() == 1);
        check_partition(d);
        CHECK(d.v_down(d.root()).size() == 50);
        CHECK(d.v_up(d.root()).empty());
    }
}

TEST_CASE("leaf bags have nothing below")
{
    auto d = decompose_tree(RootedTree(star(3), 0));
    for (int j = 0; j < d.size(); ++j)
        if (d.bag(j).kind == BagKind::Leaf) CHECK(d.v_down(j).empty());
    CHECK_THROWS_AS(d.v_down(-1), Error);
}

TEST_CASE("make_nice on a single bag")
{
    std::vector<Edge> tri{{0, 1}, {1, 2}, {0, 2}};
    Graph g(3, tri);
    auto d = make_nice(g, TreeDecomposition{{{0, 1, 2}}, {}, 0});
    CHECK(validate_decomposition(g, d).ok());
    CHECK(d.width() == 2);
    CHECK(d.size() == 7);
}

TEST_CASE("make_nice on a four cycle")
{
    std::vector<Edge> c4{{0, 1}, {1, 2}, {2, 3}, {0, 3}};
    Graph g(4, c4);
    auto d = make_nice(g, TreeDecomposition{{{0, 1, 2}, {0, 2, 3}}, {{0, 1}}, 0});
    CHECK(validate_decomposition(g, d).ok());
    CHECK(d.width() == 2);
    check_partition(d);
}

TEST_CASE("make_nice rejects broken decompositions")
{
    Graph g = path(3);
    CHECK_THROWS_AS(make_nice(g, TreeDecomposition{{{0, 1}}, {}, 0}), Error);
    CHECK_THROWS_AS(make_nice(g, TreeDecomposition{{{0, 1}, {2}, {1, 2}}, {{0, 1}, {1, 2}}, 0}), Error);
}

TEST_CASE("make_nice keeps a nice decomposition's shape")
{
    std::mt19937_64 rng(6);
    for (int round = 0; round < 10; ++round) {
        Graph g = random_tree(rng, 12, 3);
        auto d = decompose_tree(RootedTree(g, 0));
        auto again = make_nice(g, d.plain());
        CHECK(again.size() == d.size());
        CHECK(again.width() == d.width());
        std::vector<int> kinds_a(4, 0), kinds_b(4, 0);
        for (int j = 0; j < d.size(); ++j) ++kinds_a[static_cast<int>(d.bag(j).kind)];
        for (int j = 0; j < again.size(); ++j) ++kinds_b[static_cast<int>(again.bag(j).kind)];
        CHECK(kinds_a == kinds_b);
    }
}

TEST_CASE("validation catches structural faults")
{
    Graph g = path(3);
    auto d = decompose_tree(RootedTree(g, 0));
    SUBCASE("vertex in two separated regions")
    {
        bool broken = false;
        for (int j = 0; j < static_cast<int>(d.size()) && !broken; ++j) {
            auto t2 = d.plain();
            if (std::find(t2.bags[j].begin(), t2.bags[j].end(), 0) != t2.bags[j].end()) continue;
            t2.bags[j].push_back(0);
            broken = !validate_plain_decomposition(g, t2).ok();
        }
        CHECK(broken);
    }
    SUBCASE("join with unequal children")
    {
        auto s = decompose_tree(RootedTree(star(2), 0));
        std::vector<Bag> bags;
        for (int j = 0; j < s.size(); ++j) bags.push_back(s.bag(j));
        for (auto& b : bags)
            if (b.kind == BagKind::Join) {
                auto& other = bags[b.children[1]];
                other.vertices.push_back(1);
            }
        NiceTreeDecomposition bad(s.vertex_count(), bags, s.root());
        auto rep = validate_decomposition(star(2), bad);
        CHECK_FALSE(rep.ok());
    }
}

TEST_CASE("min degree elimination on graphs of treewidth two")
{
    std::mt19937_64 rng(12);
    for (int round = 0; round < 20; ++round) {
        int n = 4 + static_cast<int>(rng() % 6);
        std::vector<Edge> e{{0, 1}, {0, 2}, {1, 2}};
        for (Vertex v = 3; v < n; ++v) {
            Vertex a = static_cast<Vertex>(rng() % v), b;
            do {
                b = static_cast<Vertex>(rng() % v);
            } while (b == a || std::find(e.begin(), e.end(), Edge{std::min(a, b), std::max(a, b)}) == e.end());
            e.emplace_back(a, v);
            e.emplace_back(b, v);
        }
        Graph g(n, e);
        auto td = min_degree_decomposition(g);
        CHECK(validate_plain_decomposition(g, td).ok());
        auto d = make_nice(g, td);
        CHECK(validate_decomposition(g, d).ok());
        CHECK(d.width() == 2);
        check_partition(d);
    }
}

TEST_CASE("join bags separate the two sides")
{
    std::mt19937_64 rng(14);
    for (int round = 0; round < 20; ++round) {
        int n = 4 + static_cast<int>(rng() % 7);
        Graph g = random_connected(rng, n, static_cast<int>(rng() % 4));
        auto d = make_nice(g, min_degree_decomposition(g));
        REQUIRE(validate_decomposition(g, d).ok());
        for (int j = 0; j < d.size(); ++j) {
            const auto& b = d.bag(j);
            if (b.kind != BagKind::Join) continue;
            CHECK(separates(g, b.vertices, d.v_down(b.children[0]), d.v_down(b.children[1])));
        }
    }
}
