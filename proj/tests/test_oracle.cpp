#include "doctest.h"
#include "helpers.hpp"
#include "mrfgc/oracle.hpp"

using namespace mrfgc;
using namespace testing_util;

namespace {

Instance connected_instance(Graph g, int k, Vertex s)
{
    auto types = RobotTypes::homogeneous(k);
    auto start = Configuration::all_at(s, types);
    return make_instance(std::move(g), make_implicit_backend(types), start, start);
}

Traversal anchored(const Instance& inst, const std::vector<Configuration>& cs)
{
    Traversal x;
    for (const auto& c : cs) x.push_back(*inst.backend->anchor(inst.graph, c));
    return x;
}

} // namespace

TEST_CASE("single robot out and back on P3")
{
    auto r = solve_exact_bfs(connected_instance(path(3), 1, 0));
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.time() == 4);
}

TEST_CASE("three robots on a three-leaf star")
{
    auto inst = connected_instance(star(3), 3, 0);
    auto r = solve_exact_bfs(inst);
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.time() == 3);
    CHECK(validate_traversal(inst, r.traversal).ok());
}

TEST_CASE("one vertex instance needs no transitions")
{
    auto r = solve_exact_bfs(connected_instance(Graph(1), 2, 0));
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.time() == 0);
}

TEST_CASE("disconnected host is infeasible, tight budgets hit the limit")
{
    std::vector<Edge> e{{0, 1}};
    auto inst = connected_instance(Graph(3, e), 1, 0);
    CHECK(solve_exact_bfs(inst).status == SolveStatus::Infeasible);
    auto big = connected_instance(path(8), 2, 0);
    CHECK(solve_exact_bfs(big, {.max_states = 5, .max_ms = 1000}).status == SolveStatus::LimitExceeded);
}

TEST_CASE("oracle matches iterative deepening on small instances")
{
    std::mt19937_64 rng(21);
    for (int round = 0; round < 40; ++round) {
        int n = 2 + static_cast<int>(rng() % 5);
        int k = 1 + static_cast<int>(rng() % 2);
        Graph g = random_connected(rng, n, static_cast<int>(rng() % 3));
        Vertex s = static_cast<Vertex>(rng() % n);
        auto inst = connected_instance(g, k, s);
        auto r = solve_exact_bfs(inst);
        REQUIRE(r.status == SolveStatus::Optimal);
        CHECK(r.time() == iddfs_time(g, inst.start, inst.end, r.time()));
        CHECK(validate_traversal(inst, r.traversal).ok());
        CHECK_FALSE(find_repeated_transition(r.traversal));
    }
}

TEST_CASE("validation diagnostics")
{
    auto inst = connected_instance(path(3), 1, 0);
    SUBCASE("teleport")
    {
        auto x = anchored(inst, {Configuration({{0, 0, 1}}), Configuration({{2, 0, 1}}), Configuration({{1, 0, 1}}), Configuration({{0, 0, 1}})});
        auto rep = validate_traversal(inst, x);
        CHECK_FALSE(rep.ok());
        CHECK(rep.invalid_steps == std::vector<int>{0});
        CHECK(rep.unvisited.empty());
    }
    SUBCASE("missing leaf")
    {
        auto x = anchored(inst, {Configuration({{0, 0, 1}}), Configuration({{1, 0, 1}}), Configuration({{0, 0, 1}})});
        auto rep = validate_traversal(inst, x);
        CHECK(rep.invalid_steps.empty());
        CHECK(rep.unvisited == std::vector<Vertex>{2});
        CHECK(rep.time == 2);
    }
    SUBCASE("empty traversal is reported, not thrown")
    {
        auto rep = validate_traversal(inst, {});
        CHECK_FALSE(rep.ok());
        CHECK(rep.time == -1);
    }
}

TEST_CASE("repeated transitions and the Z-transform")
{
    auto inst = connected_instance(path(3), 1, 0);
    Configuration a({{0, 0, 1}}), b({{1, 0, 1}}), c({{2, 0, 1}});
    auto x = anchored(inst, {a, b, a, b, c});
    auto rep = find_repeated_transition(x);
    REQUIRE(rep);
    CHECK(*rep == std::make_pair(0, 2));
    auto z = z_transform(x, 0, 2);
    REQUIRE(z.size() == 3);
    CHECK(z[0].config == a);
    CHECK(z[1].config == b);
    CHECK(z[2].config == c);
    CHECK_FALSE(find_repeated_transition(anchored(inst, {a})));
    CHECK_THROWS_AS(z_transform(x, 0, 1), Error);
}

TEST_CASE("injected repeats are removed two transitions at a time")
{
    std::mt19937_64 rng(4);
    int checked = 0;
    for (int round = 0; round < 100; ++round) {
        int n = 3 + static_cast<int>(rng() % 4);
        Graph g = random_connected(rng, n, static_cast<int>(rng() % 2));
        auto inst = connected_instance(g, 2, static_cast<Vertex>(rng() % n));
        auto r = solve_exact_bfs(inst);
        REQUIRE(r.status == SolveStatus::Optimal);
        auto x = r.traversal;
        if (x.size() < 2) continue;
        int i = static_cast<int>(rng() % (x.size() - 1));
        // x^i x^{i+1} x^i x^{i+1}: the transition (x^i, x^{i+1}) now repeats
        Traversal y(x.begin(), x.begin() + i + 2);
        y.push_back(x[i]);
        y.insert(y.end(), x.begin() + i + 1, x.end());
        REQUIRE(validate_traversal(inst, y).ok());
        auto rep = find_repeated_transition(y);
        REQUIRE(rep);
        auto z = z_transform(y, rep->first, rep->second);
        CHECK(validate_traversal(inst, z).ok());
        CHECK(traversal_time(z) == traversal_time(y) - 2);
        CHECK(z.front().config == y.front().config);
        CHECK(z.back().config == y.back().config);

        // a second, disjoint repeat at the end
        Traversal w = y;
        w.push_back(y[y.size() - 2]);
        w.push_back(y.back());
        auto norm = normalize_traversal(w);
        CHECK(validate_traversal(inst, norm).ok());
        CHECK(traversal_time(norm) <= traversal_time(w) - 4);
        CHECK_FALSE(find_repeated_transition(norm));
        ++checked;
    }
    CHECK(checked > 50);
}

TEST_CASE("normalizing a repeat-free traversal changes nothing")
{
    auto inst = connected_instance(path(4), 1, 0);
    auto r = solve_exact_bfs(inst);
    auto norm = normalize_traversal(r.traversal);
    CHECK(norm == r.traversal);
}

TEST_CASE("more transpositions never slow the oracle down")
{
    std::mt19937_64 rng(8);
    auto types = RobotTypes::homogeneous(2);
    auto full = generate_connectivity_library(types);
    for (int round = 0; round < 15; ++round) {
        std::vector<Transposition> some;
        for (const auto& t : full.transpositions())
            if (rng() % 3 != 0) some.push_back(Transposition{t.name, t.pattern, t.source, t.target});
        FormationLibrary partial(types, full.formations(), some);
        Graph g = random_connected(rng, 5, 1);
        auto start = Configuration::all_at(0, types);
        auto rich = solve_exact_bfs(make_instance(g, make_explicit_backend(full), start, start));
        auto poor = solve_exact_bfs(make_instance(g, make_explicit_backend(partial), start, start));
        REQUIRE(rich.status == SolveStatus::Optimal);
        if (poor.status == SolveStatus::Optimal) CHECK(rich.time() <= poor.time());
    }
}
