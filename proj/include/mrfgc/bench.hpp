#pragma once

#include "mrfgc/instance.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mrfgc {

inline constexpr const char* kBenchSchema = "mrfgc-bench/1";

/// One family of generated instances. Every instance starts and ends with all
/// robots on vertex 0.
struct BenchGroup {
    std::string name;
    std::string generator = "tree"; // "tree" or "graph"
    int n_min = 3;
    int n_max = 10;
    int max_degree = 3;  // trees
    int treewidth = 2;   // graphs
    std::vector<int> robots{1};
    std::string backend = "implicit"; // or "explicit" (generated connectivity library)
    std::uint64_t seed = 1;
    int count = 10;
};

struct BenchSuite {
    std::string name = "suite";
    std::vector<BenchGroup> groups;
    std::vector<std::string> solvers{"oracle", "fpt", "ptas"};
    std::vector<double> epsilons{0.25, 0.5};
    long max_states = 2'000'000;
    long max_ms = 60'000;
    int workers = 1;
};

BenchSuite parse_bench_suite(const std::string& text);
std::string serialize_bench_suite(const BenchSuite& suite);
/// Small trees and width-two graphs; finishes in well under a minute.
BenchSuite default_bench_suite();

struct BenchInstance {
    std::string group;
    std::string hash;
    Instance instance;
};

std::vector<BenchInstance> bench_corpus(const BenchSuite& suite);

struct BenchRow {
    std::string group;
    std::string instance_hash;
    int n = 0;
    int k = 0;
    std::string solver;
    std::optional<double> epsilon;
    std::string status; // optimal, feasible, infeasible, budget, skipped, error
    int time = -1;
    long states = 0;
    double wall_ms = 0;
    std::optional<int> optimum; // oracle time, when the oracle finished
    std::optional<int> gap;
    std::optional<double> bound; // largest gap a proven bound allows
    std::string checks;          // bound checks that ran, separated by '+'
    bool violation = false;
    std::string note;
};

struct BenchReport {
    std::string suite;
    std::vector<BenchRow> rows;

    int violations() const;
    int errors() const;
    /// Deterministic columns only; wall times go to timing_csv.
    std::string csv() const;
    std::string timing_csv() const;
    std::string table() const;
};

BenchReport run_bench(const BenchSuite& suite);

} // namespace mrfgc
