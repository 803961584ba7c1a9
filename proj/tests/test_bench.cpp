#include "doctest.h"
#include "mrfgc/bench.hpp"

#include <sstream>

using namespace mrfgc;

namespace {

BenchSuite small_suite()
{
    BenchSuite s;
    s.name = "small";
    BenchGroup trees;
    trees.name = "trees";
    trees.n_min = 3;
    trees.n_max = 7;
    trees.robots = {1, 2, 3};
    trees.count = 6;
    BenchGroup graphs;
    graphs.name = "graphs";
    graphs.generator = "graph";
    graphs.n_min = 3;
    graphs.n_max = 6;
    graphs.robots = {1, 2};
    graphs.backend = "explicit";
    graphs.seed = 4;
    graphs.count = 3;
    s.groups = {trees, graphs};
    return s;
}

} // namespace

TEST_CASE("bench runs are deterministic and respect the bounds")
{
    auto suite = small_suite();
    auto a = run_bench(suite);
    suite.workers = 3;
    auto b = run_bench(suite);
    CHECK(a.csv() == b.csv());
    CHECK(a.violations() == 0);
    CHECK(a.errors() == 0);
    // 9 instances: oracle + fpt each, ptas per epsilon on the 6 trees, skipped on graphs
    CHECK(a.rows.size() == 9 * 2 + 9 * 2);
    for (const auto& r : a.rows) {
        CAPTURE(r.note);
        if (r.solver == "fpt") CHECK(r.gap == 0);
        if (r.solver == "ptas" && r.group == "graphs") CHECK(r.status == "skipped");
        if (r.solver == "ptas" && r.group == "trees") CHECK(r.checks.find("gap") != std::string::npos);
        if (r.gap) CHECK(r.optimum);
    }
    std::istringstream lines(a.csv());
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) ++count;
    CHECK(count == static_cast<int>(a.rows.size()) + 1);
    CHECK(a.table().find("0 bound violations") != std::string::npos);
}

TEST_CASE("corpus depends only on the suite")
{
    auto suite = small_suite();
    auto a = bench_corpus(suite), b = bench_corpus(suite);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].hash == b[i].hash);
    suite.groups[0].seed = 99;
    CHECK(bench_corpus(suite)[0].hash != a[0].hash);
}

TEST_CASE("suite documents")
{
    auto suite = small_suite();
    auto text = serialize_bench_suite(suite);
    CHECK(serialize_bench_suite(parse_bench_suite(text)) == text);
    CHECK(serialize_bench_suite(parse_bench_suite(serialize_bench_suite(default_bench_suite()))) == serialize_bench_suite(default_bench_suite()));
    CHECK_THROWS_AS(parse_bench_suite("{\"schema\": \"mrfgc-bench/1\", \"groups\": [{\"generator\": \"cube\"}]}"), Error);
    CHECK_THROWS_AS(parse_bench_suite("{\"schema\": \"x\", \"groups\": []}"), Error);
    CHECK_THROWS_AS(parse_bench_suite("{"), Error);

    suite.solvers = {"magic"};
    CHECK_THROWS_AS(run_bench(suite), Error);
}
