#include "mrfgc/bench.hpp"

#include "mrfgc/fpt.hpp"
#include "mrfgc/io.hpp"
#include "mrfgc/oracle.hpp"
#include "mrfgc/ptas.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <thread>

namespace mrfgc {

using json = nlohmann::json;

namespace {

    [[noreturn]] void bad_suite(const std::string& what) { fail(ErrorKind::Semantic, "bench suite: " + what); }

    std::string status_name(SolveStatus s)
    {
        switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::LimitExceeded: return "budget";
        }
        return "error";
    }

    std::string fmt(double x)
    {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", x);
        return buf;
    }

    std::string csv_field(const std::string& s)
    {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string out = "\"";
        for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
        return out + "\"";
    }

    template <class T> std::string opt(const std::optional<T>& v)
    {
        if (!v) return "";
        if constexpr (std::is_floating_point_v<T>) return fmt(*v);
        else return std::to_string(*v);
    }

    void check_valid(BenchRow& row, const Instance& inst, const Traversal& x)
    {
        row.checks += row.checks.empty() ? "valid" : "+valid";
        auto report = validate_traversal(inst, x);
        if (!report.ok()) {
            row.violation = true;
            row.note = "invalid traversal: " + report.describe(inst.graph);
        }
    }

    void add_check(BenchRow& row, const std::string& name, bool holds, const std::string& detail)
    {
        row.checks += row.checks.empty() ? name : "+" + name;
        if (!holds) {
            row.violation = true;
            if (!row.note.empty()) row.note += "; ";
            row.note += detail;
        }
    }

    std::vector<BenchRow> bench_instance(const BenchSuite& suite, const BenchInstance& b)
    {
        const Instance& inst = b.instance;
        BenchRow base;
        base.group = b.group;
        base.instance_hash = b.hash;
        base.n = inst.graph.vertex_count();
        base.k = inst.types.total();

        std::vector<BenchRow> rows;
        SearchLimits limits{suite.max_states, suite.max_ms};
        BenchRow oracle_row = base;
        oracle_row.solver = "oracle";
        try {
            auto r = solve_exact_bfs(inst, limits);
            oracle_row.status = status_name(r.status);
            oracle_row.states = r.states;
            oracle_row.wall_ms = r.wall_ms;
            if (r.status == SolveStatus::Optimal) {
                oracle_row.time = r.time();
                oracle_row.optimum = r.time();
                oracle_row.gap = 0;
                check_valid(oracle_row, inst, r.traversal);
            }
        } catch (const Error& e) {
            oracle_row.status = "error";
            oracle_row.note = e.what();
        }
        auto optimum = oracle_row.optimum;

        for (const auto& solver : suite.solvers) {
            if (solver == "oracle") {
                rows.push_back(oracle_row);
            } else if (solver == "fpt") {
                BenchRow row = base;
                row.solver = "fpt";
                row.optimum = optimum;
                try {
                    FptOptions options;
                    options.max_rows = suite.max_states;
                    auto r = solve_fpt(inst, options);
                    row.status = status_name(r.status);
                    row.states = r.rows;
                    row.wall_ms = r.wall_ms;
                    if (r.status == SolveStatus::Optimal) {
                        row.time = r.time();
                        check_valid(row, inst, r.traversal);
                        if (optimum) {
                            row.gap = row.time - *optimum;
                            row.bound = 0;
                            add_check(row, "exact", row.time == *optimum, "fpt time " + std::to_string(row.time) + " differs from optimum " + std::to_string(*optimum));
                        }
                    } else if (r.status == SolveStatus::Infeasible && optimum) {
                        add_check(row, "exact", false, "fpt reports infeasible but the oracle found a traversal");
                    }
                } catch (const Error& e) {
                    row.status = "error";
                    row.note = e.what();
                }
                rows.push_back(row);
            } else if (solver == "ptas") {
                for (double eps : suite.epsilons) {
                    BenchRow row = base;
                    row.solver = "ptas";
                    row.epsilon = eps;
                    row.optimum = optimum;
                    if (!is_tree(inst.graph)) {
                        row.status = "skipped";
                        row.note = "host is not a tree";
                        rows.push_back(row);
                        continue;
                    }
                    try {
                        PtasOptions options;
                        options.limits = limits;
                        auto r = solve_ptas(inst, eps, options);
                        row.status = "feasible";
                        row.time = r.greedy_time;
                        row.wall_ms = r.wall_ms;
                        row.states = static_cast<long>(r.cover.subtrees.size());
                        check_valid(row, inst, r.traversal);
                        RootedTree t(inst.graph, 0);
                        auto cover = validate_tree_cover(t, eps, r.cover);
                        add_check(row, "cover", cover.ok(), cover.ok() ? "" : "tree cover: " + cover.problems.front());
                        const auto& backend = *inst.backend;
                        double n = row.n;
                        double f = formation_count(backend) * std::pow(inst.graph.max_degree(), max_formation_vertices(backend));
                        double plus = 2.0 * max_formation_edges(backend);
                        double minus = plus * f;
                        add_check(row, "regroup", r.greedy_time - r.cover_time <= n * eps * plus + 1e-9,
                                  "greedy exceeds cover sum by more than the regroup allowance");
                        if (optimum) {
                            row.gap = r.greedy_time - *optimum;
                            row.bound = n * eps * (plus + minus);
                            add_check(row, "gap", *row.gap >= 0 && *row.gap <= *row.bound + 1e-9,
                                      "gap " + std::to_string(*row.gap) + " outside [0, " + fmt(*row.bound) + "]");
                            if (row.k == 3)
                                add_check(row, "three", r.cover_time - *optimum <= 52 * n * eps + 1e-9,
                                          "cover sum exceeds optimum by more than 52 n eps");
                        }
                    } catch (const Error& e) {
                        if (e.kind() == ErrorKind::NonCollapsible || e.kind() == ErrorKind::PreconditionViolated) {
                            row.status = "skipped";
                        } else if (e.kind() == ErrorKind::BudgetExceeded) {
                            row.status = "budget";
                        } else {
                            row.status = "error";
                        }
                        row.note = e.what();
                    }
                    rows.push_back(row);
                }
            }
        }
        return rows;
    }

} // namespace

BenchSuite parse_bench_suite(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::Parse, std::string("bench suite: ") + e.what());
    }
    try {
        if (j.value("schema", std::string()) != kBenchSchema) bad_suite(std::string("schema must be ") + kBenchSchema);
        BenchSuite s;
        s.name = j.value("name", s.name);
        s.solvers = j.value("solvers", s.solvers);
        s.epsilons = j.value("epsilons", s.epsilons);
        s.max_states = j.value("max_states", s.max_states);
        s.max_ms = j.value("max_ms", s.max_ms);
        s.workers = j.value("workers", s.workers);
        for (const auto& g : j.at("groups")) {
            BenchGroup b;
            b.name = g.value("name", "group" + std::to_string(s.groups.size()));
            b.generator = g.value("generator", b.generator);
            auto n = g.value("n", std::vector<int>{b.n_min, b.n_max});
            if (n.size() != 2 || n[0] < 1 || n[0] > n[1]) bad_suite("group '" + b.name + "': n must be [min, max] with 1 <= min <= max");
            b.n_min = n[0];
            b.n_max = n[1];
            b.max_degree = g.value("max_degree", b.max_degree);
            b.treewidth = g.value("treewidth", b.treewidth);
            b.robots = g.value("robots", b.robots);
            b.backend = g.value("backend", b.backend);
            b.seed = g.value("seed", b.seed);
            b.count = g.value("count", b.count);
            if (b.generator != "tree" && b.generator != "graph") bad_suite("group '" + b.name + "': unknown generator '" + b.generator + "'");
            if (b.backend != "implicit" && b.backend != "explicit") bad_suite("group '" + b.name + "': unknown backend '" + b.backend + "'");
            if (b.robots.empty()) bad_suite("group '" + b.name + "': robots must not be empty");
            s.groups.push_back(std::move(b));
        }
        if (s.workers < 1) bad_suite("workers must be positive");
        return s;
    } catch (const json::exception& e) {
        bad_suite(e.what());
    }
}

std::string serialize_bench_suite(const BenchSuite& s)
{
    json groups = json::array();
    for (const auto& b : s.groups)
        groups.push_back({{"name", b.name},
                          {"generator", b.generator},
                          {"n", {b.n_min, b.n_max}},
                          {"max_degree", b.max_degree},
                          {"treewidth", b.treewidth},
                          {"robots", b.robots},
                          {"backend", b.backend},
                          {"seed", b.seed},
                          {"count", b.count}});
    json j{{"schema", kBenchSchema},
           {"name", s.name},
           {"solvers", s.solvers},
           {"epsilons", s.epsilons},
           {"max_states", s.max_states},
           {"max_ms", s.max_ms},
           {"workers", s.workers},
           {"groups", groups}};
    return j.dump(2) + "\n";
}

BenchSuite default_bench_suite()
{
    BenchSuite s;
    s.name = "desk";
    BenchGroup trees;
    trees.name = "trees";
    trees.n_min = 3;
    trees.n_max = 9;
    trees.robots = {1, 2, 3};
    trees.seed = 1;
    trees.count = 24;
    BenchGroup graphs;
    graphs.name = "graphs";
    graphs.generator = "graph";
    graphs.n_min = 3;
    graphs.n_max = 8;
    graphs.robots = {1, 2};
    graphs.backend = "explicit";
    graphs.seed = 2;
    graphs.count = 8;
    s.groups = {trees, graphs};
    return s;
}

std::vector<BenchInstance> bench_corpus(const BenchSuite& suite)
{
    std::vector<BenchInstance> out;
    for (const auto& g : suite.groups) {
        std::mt19937_64 rng(g.seed);
        for (int i = 0; i < g.count; ++i) {
            int n = g.n_min + static_cast<int>(rng() % static_cast<std::uint64_t>(g.n_max - g.n_min + 1));
            int k = g.robots[i % g.robots.size()];
            std::uint64_t seed = rng();
            Graph graph = g.generator == "tree" ? gen_random_tree(n, g.max_degree, seed).graph() : gen_random_graph(n, g.treewidth, seed).graph;
            auto types = RobotTypes::homogeneous(k);
            BackendPtr backend = g.backend == "explicit" ? make_explicit_backend(generate_connectivity_library(types)) : make_implicit_backend(types);
            auto x = Configuration::all_at(0, types);
            BenchInstance b;
            b.group = g.name;
            b.instance = make_instance(std::move(graph), std::move(backend), x, x);
            b.hash = instance_hash(b.instance);
            out.push_back(std::move(b));
        }
    }
    return out;
}

BenchReport run_bench(const BenchSuite& suite)
{
    for (const auto& solver : suite.solvers)
        if (solver != "oracle" && solver != "fpt" && solver != "ptas") bad_suite("unknown solver '" + solver + "'");
    auto corpus = bench_corpus(suite);
    std::vector<std::vector<BenchRow>> results(corpus.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next++) < corpus.size();) results[i] = bench_instance(suite, corpus[i]);
    };
    int workers = std::max(1, std::min<int>(suite.workers, static_cast<int>(corpus.size())));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    BenchReport report;
    report.suite = suite.name;
    for (auto& rows : results)
        for (auto& r : rows) report.rows.push_back(std::move(r));
    return report;
}

int BenchReport::violations() const
{
    int c = 0;
    for (const auto& r : rows) c += r.violation;
    return c;
}

int BenchReport::errors() const
{
    int c = 0;
    for (const auto& r : rows) c += r.status == "error";
    return c;
}

std::string BenchReport::csv() const
{
    std::ostringstream os;
    os << "group,instance,n,k,solver,epsilon,status,time,states,optimum,gap,bound,checks,violation,note\n";
    for (const auto& r : rows)
        os << csv_field(r.group) << ',' << r.instance_hash << ',' << r.n << ',' << r.k << ',' << r.solver << ',' << opt(r.epsilon) << ','
           << r.status << ',' << (r.time >= 0 ? std::to_string(r.time) : "") << ',' << r.states << ',' << opt(r.optimum) << ',' << opt(r.gap)
           << ',' << opt(r.bound) << ',' << r.checks << ',' << (r.violation ? 1 : 0) << ',' << csv_field(r.note) << '\n';
    return os.str();
}

std::string BenchReport::timing_csv() const
{
    std::ostringstream os;
    os << "instance,solver,epsilon,wall_ms\n";
    for (const auto& r : rows) os << r.instance_hash << ',' << r.solver << ',' << opt(r.epsilon) << ',' << fmt(r.wall_ms) << '\n';
    return os.str();
}

std::string BenchReport::table() const
{
    std::ostringstream os;
    char line[256];
    std::snprintf(line, sizeof line, "%-8s %-16s %3s %2s %-6s %5s %-10s %5s %5s %4s %9s %10s %s\n", "group", "instance", "n", "k", "solver", "eps",
                  "status", "time", "opt", "gap", "bound", "wall_ms", "ok");
    os << line;
    for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%-8s %-16s %3d %2d %-6s %5s %-10s %5s %5s %4s %9s %10.2f %s\n", r.group.c_str(), r.instance_hash.c_str(), r.n, r.k,
                      r.solver.c_str(), opt(r.epsilon).c_str(), r.status.c_str(), r.time >= 0 ? std::to_string(r.time).c_str() : "-",
                      opt(r.optimum).c_str(), opt(r.gap).c_str(), opt(r.bound).c_str(), r.wall_ms, r.violation ? "VIOLATION" : "yes");
        os << line;
    }
    os << rows.size() << " rows, " << violations() << " bound violations, " << errors() << " errors\n";
    return os.str();
}

} // namespace mrfgc
