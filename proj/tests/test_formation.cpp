#include "doctest.h"
#include "helpers.hpp"
#include "mrfgc/formation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>

using namespace mrfgc;
using namespace testing_util;

namespace {

// Independent count: try every injective map by permuting host vertices.
long brute_monomorphisms(const Graph& p, const Graph& h)
{
    int pn = p.vertex_count(), hn = h.vertex_count();
    if (pn > hn) return 0;
    std::vector<int> perm(hn);
    std::iota(perm.begin(), perm.end(), 0);
    std::set<std::vector<int>> seen;
    do {
        std::vector<int> m(perm.begin(), perm.begin() + pn);
        bool ok = true;
        for (auto [a, b] : p.edges())
            if (!h.has_edge(m[a], m[b])) ok = false;
        if (ok) seen.insert(m);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<long>(seen.size());
}

struct RouterCleaner {
    RobotTypes types{{"r", "b"}, {1, 2}};
    Graph host;
    Formation beta, gamma, alpha;
    Transposition t;

    RouterCleaner()
    {
        std::vector<Edge> e{{0, 1}, {1, 2}, {1, 3}, {2, 4}, {2, 5}, {3, 5}, {4, 6}, {4, 5}, {5, 7}};
        host = Graph(8, e, {"a", "b", "c", "d", "e", "f", "g", "h"});
        std::vector<Edge> uv{{0, 1}};
        beta = Formation{"beta", Graph(2, uv, {"u", "v"}), Configuration({{0, 0, 1}, {1, 1, 2}})};
        std::vector<Edge> tri{{0, 1}, {1, 2}, {0, 2}};
        gamma = Formation{"gamma", Graph(3, tri, {"u", "v", "w"}), Configuration({{0, 0, 1}, {1, 1, 1}, {2, 1, 1}})};
        std::vector<Edge> vuw{{1, 0}, {0, 2}};
        alpha = Formation{"alpha", Graph(3, vuw, {"u", "v", "w"}), Configuration({{0, 0, 1}, {1, 1, 1}, {2, 1, 1}})};
        std::vector<Edge> te{{0, 1}, {1, 2}, {2, 3}, {1, 3}};
        t.name = "beta-gamma";
        t.pattern = Graph(4, te, {"u'", "v'", "w'", "t'"});
        t.source = Configuration({{0, 0, 1}, {1, 1, 2}});
        t.target = Configuration({{1, 0, 1}, {2, 1, 1}, {3, 1, 1}});
    }

    Vertex at(const char* label) const { return *host.find_label(label); }
};

} // namespace

TEST_CASE("single vertex pattern maps onto every host vertex")
{
    CHECK(find_monomorphisms(Graph(1), path(5)).size() == 5);
}

TEST_CASE("triangles never embed into trees")
{
    std::vector<Edge> tri{{0, 1}, {1, 2}, {0, 2}};
    CHECK(find_monomorphisms(Graph(3, tri), star(4)).empty());
}

TEST_CASE("monomorphism counts match exhaustive enumeration")
{
    std::mt19937_64 rng(11);
    for (int round = 0; round < 60; ++round) {
        Graph host = random_connected(rng, 2 + static_cast<int>(rng() % 5), static_cast<int>(rng() % 4));
        Graph pattern = random_connected(rng, 1 + static_cast<int>(rng() % 3), static_cast<int>(rng() % 2));
        auto maps = find_monomorphisms(pattern, host);
        CHECK(static_cast<long>(maps.size()) == brute_monomorphisms(pattern, host));
        CHECK(std::is_sorted(maps.begin(), maps.end()));
    }
}

TEST_CASE("pinned monomorphisms extend the pin")
{
    Graph p = path(2);
    auto maps = find_monomorphisms(p, star(3), {0, -1});
    CHECK(maps.size() == 3);
    for (const auto& m : maps) CHECK(m[0] == 0);
}

TEST_CASE("router and cleaner formations")
{
    RouterCleaner fx;
    SUBCASE("beta placement occupies u and v")
    {
        CHECK(fx.beta.placement.occupied() == std::vector<Vertex>{0, 1});
        Configuration x({{fx.at("b"), 0, 1}, {fx.at("c"), 1, 2}});
        auto anchored = is_in_form(x, fx.beta, fx.host);
        REQUIRE(anchored.size() == 1);
        CHECK(anchored[0].active() == std::vector<Vertex>{fx.at("b"), fx.at("c")});
    }
    SUBCASE("triangle images are host triangles")
    {
        auto maps = find_monomorphisms(fx.gamma.pattern, fx.host);
        CHECK(static_cast<long>(maps.size()) == brute_monomorphisms(fx.gamma.pattern, fx.host));
        CHECK_FALSE(maps.empty());
        for (const auto& m : maps) {
            CHECK(fx.host.has_edge(m[0], m[1]));
            CHECK(fx.host.has_edge(m[1], m[2]));
            CHECK(fx.host.has_edge(m[0], m[2]));
        }
    }
    SUBCASE("beta to gamma transposition moves each robot at most one edge")
    {
        auto check = validate_transposition(fx.t);
        CHECK(check.valid);
        int moved = 0;
        for (const auto& mv : check.moves) moved += mv.count;
        CHECK(moved == 3);
    }
    SUBCASE("transition through u',v',w',t' -> b,c,e,f")
    {
        FormationLibrary lib(fx.types, {fx.beta, fx.gamma, fx.alpha}, {fx.t});
        auto backend = make_explicit_backend(lib);
        Configuration a({{fx.at("b"), 0, 1}, {fx.at("c"), 1, 2}});
        Configuration b({{fx.at("c"), 0, 1}, {fx.at("e"), 1, 1}, {fx.at("f"), 1, 1}});
        auto aa = backend->anchor(fx.host, a);
        auto bb = backend->anchor(fx.host, b);
        REQUIRE(aa);
        REQUIRE(bb);
        CHECK(bb->formation == 1);
        CHECK(is_valid_transition(*backend, fx.host, *aa, *bb));
        CHECK(is_valid_transition(*backend, fx.host, *bb, *aa));
        auto succ = backend->successors(fx.host, a);
        CHECK(std::find(succ.begin(), succ.end(), b) != succ.end());

        FormationLibrary bare(fx.types, {fx.beta, fx.gamma, fx.alpha}, {});
        CHECK_FALSE(bare.is_valid_transition(fx.host, a, b));
    }
}

TEST_CASE("transposition validation")
{
    Transposition id{"id", path(2), Configuration({{0, 0, 2}}), Configuration({{0, 0, 2}})};
    CHECK(validate_transposition(id).valid);

    Transposition swap{"swap", path(4), Configuration({{0, 0, 1}, {3, 1, 1}}), Configuration({{3, 0, 1}, {0, 1, 1}})};
    CHECK_FALSE(validate_transposition(swap).valid);

    Transposition lost{"lost", path(2), Configuration({{0, 0, 2}}), Configuration({{1, 0, 1}})};
    auto check = validate_transposition(lost);
    CHECK_FALSE(check.valid);
    CHECK_FALSE(check.diagnostic.empty());
}

TEST_CASE("library rejects transpositions outside every formation")
{
    RobotTypes one = RobotTypes::homogeneous(2);
    Formation point{"point", Graph(1), Configuration({{0, 0, 2}})};
    Transposition split{"split", path(2), Configuration({{0, 0, 2}}), Configuration({{0, 0, 1}, {1, 0, 1}})};
    CHECK_THROWS_AS(FormationLibrary(one, {point}, {split}), Error);
    Formation wrong{"wrong", Graph(1), Configuration({{0, 0, 3}})};
    CHECK_THROWS_AS(FormationLibrary(one, {wrong}, {}), Error);
}

TEST_CASE("implicit successors")
{
    auto backend = make_implicit_backend(RobotTypes::homogeneous(1));
    Graph g = star(3);
    auto succ = backend->successors(g, Configuration({{0, 0, 1}}));
    CHECK(succ.size() == 4);

    auto three = make_implicit_backend(RobotTypes::homogeneous(3));
    Configuration center({{0, 0, 3}});
    auto s3 = three->successors(g, center);
    auto expected = brute_successors(g, center);
    CHECK(std::set<Configuration>(s3.begin(), s3.end()) == expected);
    for (const auto& c : s3) {
        CHECK(three->is_valid_transition(g, center, c));
        int leaves = 0;
        for (Vertex v : c.occupied()) leaves += v != 0;
        CHECK((leaves <= 2 || c.occupied().size() == 1));
    }
}

TEST_CASE("implicit transitions reject disconnection")
{
    auto backend = make_implicit_backend(RobotTypes::homogeneous(2));
    Graph g = path(3);
    CHECK_FALSE(backend->is_valid_transition(g, Configuration({{1, 0, 2}}), Configuration({{0, 0, 1}, {2, 0, 1}})));
    CHECK(backend->is_valid_transition(g, Configuration({{1, 0, 2}}), Configuration({{1, 0, 2}})));
}

TEST_CASE("connectivity library sizes")
{
    CHECK(generate_connectivity_library(RobotTypes::homogeneous(1)).formations().size() == 1);
    CHECK(generate_connectivity_library(RobotTypes::homogeneous(2)).formations().size() == 2);
    // point, edge 2+1, path 1+1+1, triangle 1+1+1
    CHECK(generate_connectivity_library(RobotTypes::homogeneous(3)).formations().size() == 4);
    CHECK_THROWS_AS(generate_connectivity_library(RobotTypes::homogeneous(5)), Error);
}

TEST_CASE("explicit connectivity library agrees with the implicit backend")
{
    std::mt19937_64 rng(5);
    std::vector<RobotTypes> suites{RobotTypes::homogeneous(1), RobotTypes::homogeneous(2), RobotTypes::homogeneous(3), RobotTypes({"r", "b"}, {1, 1}),
                                   RobotTypes({"r", "b"}, {1, 2})};
    for (const auto& types : suites) {
        auto lib = generate_connectivity_library(types);
        auto ex = make_explicit_backend(lib);
        auto im = make_implicit_backend(types);
        for (int round = 0; round < 4; ++round) {
            Graph g = random_connected(rng, 3 + static_cast<int>(rng() % 5), static_cast<int>(rng() % 3));
            auto configs = all_connected(g, types);
            for (const auto& c : configs) {
                REQUIRE(ex->anchor(g, c));
                auto se = ex->successors(g, c);
                auto si = im->successors(g, c);
                CHECK(se == si);
            }
            for (int probe = 0; probe < 40; ++probe) {
                const auto& a = configs[rng() % configs.size()];
                const auto& b = configs[rng() % configs.size()];
                bool e = ex->is_valid_transition(g, a, b);
                CHECK(e == im->is_valid_transition(g, a, b));
                CHECK(e == ex->is_valid_transition(g, b, a));
            }
        }
    }
}

TEST_CASE("configurations activating a vertex are bounded by |F| d^max|V_a|")
{
    std::mt19937_64 rng(9);
    auto types = RobotTypes::homogeneous(3);
    auto lib = generate_connectivity_library(types);
    auto ex = make_explicit_backend(lib);
    for (int round = 0; round < 5; ++round) {
        Graph g = random_connected(rng, 6, 2);
        double bound = lib.formations().size() * std::pow(g.max_degree(), lib.max_pattern_vertices());
        for (Vertex v = 0; v < g.vertex_count(); ++v) {
            int activating = 0;
            for (const auto& c : all_connected(g, types)) {
                auto act = ex->anchor(g, c)->active();
                activating += std::binary_search(act.begin(), act.end(), v);
            }
            CHECK(activating <= bound);
        }
    }
}

TEST_CASE("collapsibility")
{
    CHECK(is_collapsible(generate_connectivity_library(RobotTypes::homogeneous(3))));
    CHECK(is_collapsible(generate_connectivity_library(RobotTypes({"r", "b"}, {1, 2}))));

    RobotTypes two = RobotTypes::homogeneous(2);
    Formation edge{"edge", path(2), Configuration({{0, 0, 1}, {1, 0, 1}})};
    FormationLibrary bare(two, {edge}, {});
    CHECK_FALSE(is_collapsible(bare));

    auto closed = collapsible_closure(bare);
    CHECK(is_collapsible(closed));
    auto twice = collapsible_closure(closed);
    CHECK(twice.formation_keys() == closed.formation_keys());
    CHECK(twice.transposition_keys() == closed.transposition_keys());
}

TEST_CASE("closure of a single path-of-3 formation")
{
    RobotTypes three = RobotTypes::homogeneous(3);
    Formation p3{"p3", path(3), Configuration({{0, 0, 1}, {1, 0, 1}, {2, 0, 1}})};
    auto closed = collapsible_closure(FormationLibrary(three, {p3}, {}));
    CHECK(is_collapsible(closed));
    std::set<std::pair<int, int>> shapes; // (vertices, max robots on one vertex)
    for (const auto& f : closed.formations()) {
        int most = 0;
        for (Vertex v : f.placement.occupied()) most = std::max(most, f.placement.count_at(v));
        shapes.insert({f.pattern.vertex_count(), most});
    }
    CHECK(shapes.count({3, 1}));
    CHECK(shapes.count({2, 2}));
    CHECK(shapes.count({1, 3}));
    CHECK(closed.transpositions().size() >= 2);
}

TEST_CASE("regrouping")
{
    auto types = RobotTypes::homogeneous(3);
    auto im = make_implicit_backend(types);
    Graph g = path(3);
    SUBCASE("already gathered")
    {
        auto a = im->anchor(g, Configuration({{1, 0, 3}}));
        CHECK(regroup_sequence(*im, g, *a, 1).empty());
    }
    SUBCASE("both ends move inward together")
    {
        auto a = im->anchor(g, Configuration({{0, 0, 1}, {1, 0, 1}, {2, 0, 1}}));
        auto seq = regroup_sequence(*im, g, *a, 1);
        CHECK(seq.size() == 1);
        CHECK(seq.back().config == Configuration({{1, 0, 3}}));
    }
    SUBCASE("target must be active")
    {
        auto a = im->anchor(g, Configuration({{0, 0, 3}}));
        CHECK_THROWS_AS(regroup_sequence(*im, g, *a, 2), Error);
    }
    SUBCASE("explicit library regroup stays within |E_a| steps")
    {
        auto ex = make_explicit_backend(generate_connectivity_library(types));
        std::mt19937_64 rng(3);
        for (int round = 0; round < 10; ++round) {
            Graph h = random_connected(rng, 6, 2);
            for (const auto& c : all_connected(h, types)) {
                auto a = ex->anchor(h, c);
                int edges = ex->pattern_of(h, *a).edge_count();
                for (Vertex v : a->active()) {
                    auto seq = regroup_sequence(*ex, h, *a, v);
                    CHECK(static_cast<int>(seq.size()) <= edges);
                    Configuration prev = c;
                    for (const auto& s : seq) {
                        CHECK(ex->is_valid_transition(h, prev, s.config));
                        prev = s.config;
                    }
                    CHECK(prev == Configuration::all_at(v, types));
                }
            }
        }
    }
}
