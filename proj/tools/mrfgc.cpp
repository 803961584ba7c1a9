#include "mrfgc/bench.hpp"
#include "mrfgc/fpt.hpp"
#include "mrfgc/io.hpp"
#include "mrfgc/oracle.hpp"
#include "mrfgc/ptas.hpp"
#include "mrfgc/shapes.hpp"
#include "mrfgc/tree_decomp.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

using namespace mrfgc;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kFailed = 1, kInfeasible = 2, kBudget = 3, kUsage = 64, kData = 65 };

struct Usage : std::runtime_error {
    using std::runtime_error::runtime_error;
};

InstanceDocument load_instance(const std::string& path)
{
    auto dir = fs::path(path).parent_path();
    return parse_instance(read_file(path), [dir](const std::string& ref) { return read_file((dir / ref).string()); });
}

BackendPtr backend_for(const std::string& kind, const RobotTypes& types)
{
    if (kind == "explicit") return make_explicit_backend(generate_connectivity_library(types));
    return make_implicit_backend(types);
}

void override_backend(Instance& inst, const std::string& kind)
{
    if (kind.empty()) return;
    if (kind == "explicit" && inst.backend->is_explicit()) return;
    if (kind == "implicit" && !inst.backend->is_explicit()) return;
    inst = make_instance(inst.graph, backend_for(kind, inst.types), inst.start, inst.end);
}

std::optional<Vertex> single_vertex(const Configuration& c)
{
    auto occ = c.occupied();
    if (occ.size() != 1) return std::nullopt;
    return occ.front();
}

struct SolveArgs {
    std::string instance, algo = "oracle", out, backend;
    std::optional<double> epsilon;
    long max_states = SearchLimits{}.max_states;
    long max_ms = SearchLimits{}.max_ms;
};

int cmd_solve(const SolveArgs& a)
{
    if (a.algo == "ptas" && !a.epsilon) throw Usage("--epsilon is required with --algo ptas");
    if (a.algo != "ptas" && a.epsilon) throw Usage("--epsilon only applies to --algo ptas");
    auto doc = load_instance(a.instance);
    override_backend(doc.instance, a.backend);
    const Instance& inst = doc.instance;

    Traversal x;
    long states = 0;
    double wall = 0;
    SolveStatus status = SolveStatus::Optimal;
    if (a.algo == "oracle") {
        auto r = solve_exact_bfs(inst, {a.max_states, a.max_ms});
        status = r.status;
        x = std::move(r.traversal);
        states = r.states;
        wall = r.wall_ms;
    } else if (a.algo == "fpt") {
        FptOptions options;
        options.max_rows = a.max_states;
        auto r = doc.decomposition ? solve_fpt(inst, make_nice(inst.graph, *doc.decomposition), options) : solve_fpt(inst, options);
        status = r.status;
        x = std::move(r.traversal);
        states = r.rows;
        wall = r.wall_ms;
    } else {
        PtasOptions options;
        options.limits = {a.max_states, a.max_ms};
        auto r = solve_ptas(inst, *a.epsilon, options);
        x = std::move(r.traversal);
        states = static_cast<long>(r.cover.subtrees.size());
        wall = r.wall_ms;
    }
    if (status == SolveStatus::Infeasible) {
        std::cerr << "infeasible: no traversal covers every vertex\n";
        return kInfeasible;
    }
    if (status == SolveStatus::LimitExceeded) {
        std::cerr << "budget exceeded\n";
        return kBudget;
    }
    auto out = a.out.empty() ? fs::path(a.instance).replace_extension(".trav").string() : a.out;
    write_file(out, serialize_traversal(inst, x));
    std::cout << "time=" << traversal_time(x) << " states=" << states << " wall_ms=" << static_cast<long>(wall + 0.5) << "\n";
    return kOk;
}

int cmd_validate(const std::string& instance_path, const std::string& traversal_path)
{
    auto doc = load_instance(instance_path);
    const Instance& inst = doc.instance;
    auto text = read_file(traversal_path);
    auto claimed = traversal_instance_hash(text);
    auto expected = instance_hash(inst);
    if (claimed != expected) fail(ErrorKind::Semantic, "traversal was made for instance " + claimed + ", not " + expected);
    auto trav = parse_traversal(text, inst);
    auto report = validate_traversal(inst, trav.traversal);
    if (report.ok()) {
        std::cout << "ok time=" << report.time << "\n";
        return kOk;
    }
    std::cout << report.describe(inst.graph) << "\n";
    return kFailed;
}

struct GenArgs {
    std::string kind = "tree", backend = "implicit", out;
    int n = 10, max_degree = 3, treewidth = 2, k = 1;
    Vertex start = 0, end = 0;
    std::uint64_t seed = 1;
};

int cmd_gen(const GenArgs& a)
{
    if (a.start < 0 || a.start >= a.n || a.end < 0 || a.end >= a.n) throw Usage("--start and --end must be vertices of the generated graph");
    auto types = RobotTypes::homogeneous(a.k);
    InstanceDocument doc;
    Graph g;
    if (a.kind == "tree") {
        g = gen_random_tree(a.n, a.max_degree, a.seed).graph();
        doc.root = a.start;
    } else {
        auto gen = gen_random_graph(a.n, a.treewidth, a.seed);
        g = std::move(gen.graph);
        doc.decomposition = std::move(gen.decomposition);
    }
    doc.instance = make_instance(std::move(g), backend_for(a.backend, types), Configuration::all_at(a.start, types), Configuration::all_at(a.end, types));
    auto text = serialize_instance(doc);
    if (a.out.empty()) std::cout << text;
    else write_file(a.out, text);
    return kOk;
}

int cmd_bench(const std::string& suite_path, const std::string& out, int workers)
{
    auto suite = suite_path.empty() ? default_bench_suite() : parse_bench_suite(read_file(suite_path));
    if (workers > 0) suite.workers = workers;
    auto report = run_bench(suite);
    if (!out.empty()) {
        write_file(out + ".csv", report.csv());
        write_file(out + ".timing.csv", report.timing_csv());
    }
    std::cout << report.table();
    return report.violations() == 0 ? kOk : kFailed;
}

int cmd_shapes()
{
    auto host = shape_host();
    auto types = RobotTypes::homogeneous(3);
    std::cout << "pivot " << host.graph().label(kShapePivot) << "\n";
    auto shapes = enumerate_shapes();
    for (const auto& w : shapes)
        std::cout << w.shape.ascii_name() << "\t" << to_string(w.before.config, &host.graph(), &types) << " -> " << to_string(w.after.config, &host.graph(), &types)
                  << "\n";
    std::cout << shapes.size() << " shapes\n";
    return kOk;
}

int cmd_cover(const std::string& instance_path, double epsilon)
{
    auto doc = load_instance(instance_path);
    const auto& g = doc.instance.graph;
    Vertex root = doc.root ? *doc.root : single_vertex(doc.instance.start).value_or(0);
    RootedTree t(g, root);
    auto cover = tree_cover(t, epsilon);
    auto report = validate_tree_cover(t, epsilon, cover);
    for (std::size_t i = 0; i < cover.subtrees.size(); ++i) {
        const auto& s = cover.subtrees[i];
        std::cout << i << (s.flushed ? " flushed" : " residual") << " parent=" << cover.parent[i] << " root=" << g.label(s.root) << " size=" << s.vertices.size() << " :";
        for (Vertex v : s.vertices) std::cout << ' ' << g.label(v);
        std::cout << "\n";
    }
    std::cout << cover.flushed_count() << " flushed subtrees, epsilon " << epsilon << ", n " << g.vertex_count() << "\n";
    for (const auto& p : report.problems) std::cerr << "cover problem: " << p << "\n";
    return report.ok() ? kOk : kFailed;
}

int exit_for(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::Infeasible: return kInfeasible;
    case ErrorKind::BudgetExceeded: return kBudget;
    default: return kData;
    }
}

} // namespace

const CLI::Validator kOpenUnit(
    [](std::string& v) {
        double e = 0;
        if (!CLI::detail::lexical_cast(v, e)) return std::string("epsilon must be a number");
        return e > 0 && e < 1 ? std::string() : std::string("epsilon must lie in (0, 1)");
    },
    "in (0, 1)");

int main(int argc, char** argv)
{
    CLI::App app{"Multi-robot formation-constrained graph coverage"};
    app.require_subcommand(1);

    SolveArgs solve;
    auto* s = app.add_subcommand("solve", "solve an instance and write its traversal");
    s->add_option("instance", solve.instance, "instance file (*.mrfgc)")->required()->check(CLI::ExistingFile);
    s->add_option("--algo", solve.algo, "oracle, fpt or ptas")->check(CLI::IsMember({"oracle", "fpt", "ptas"}));
    s->add_option("--epsilon", solve.epsilon, "cover granularity for ptas")->check(kOpenUnit);
    s->add_option("--max-states", solve.max_states, "state / table-row budget");
    s->add_option("--max-ms", solve.max_ms, "wall-clock budget for the oracle");
    s->add_option("--backend", solve.backend, "replace the constraint backend")->check(CLI::IsMember({"implicit", "explicit"}));
    s->add_option("--out", solve.out, "traversal file (default: instance with .trav)");

    std::string inst_path, trav_path;
    auto* v = app.add_subcommand("validate", "check a traversal against its instance");
    v->add_option("instance", inst_path)->required();
    v->add_option("traversal", trav_path)->required();

    GenArgs gen;
    auto* g = app.add_subcommand("gen", "generate a random instance");
    g->add_option("--kind", gen.kind, "tree or graph")->check(CLI::IsMember({"tree", "graph"}));
    g->add_option("--n", gen.n, "vertex count")->check(CLI::PositiveNumber);
    g->add_option("--max-degree", gen.max_degree, "tree degree bound");
    g->add_option("--treewidth", gen.treewidth, "graph width bound");
    g->add_option("--k", gen.k, "robot count")->check(CLI::PositiveNumber);
    g->add_option("--start", gen.start, "start vertex (all robots)");
    g->add_option("--end", gen.end, "end vertex (all robots)");
    g->add_option("--seed", gen.seed, "generator seed");
    g->add_option("--backend", gen.backend, "implicit or explicit")->check(CLI::IsMember({"implicit", "explicit"}));
    g->add_option("--out", gen.out, "output file (default: stdout)");

    std::string suite_path, bench_out;
    int workers = 0;
    auto* b = app.add_subcommand("bench", "run a benchmark suite (default: the desk suite)");
    b->add_option("suite", suite_path, "suite config (JSON)");
    b->add_option("--out", bench_out, "write <out>.csv and <out>.timing.csv");
    b->add_option("--workers", workers, "parallel rows")->check(CLI::PositiveNumber);

    auto* sh = app.add_subcommand("shapes", "list the 3-robot transition shapes");

    std::string cover_path;
    double cover_eps = 0.25;
    auto* c = app.add_subcommand("cover", "print an epsilon tree cover of a tree instance");
    c->add_option("instance", cover_path)->required();
    c->add_option("--epsilon", cover_eps)->check(kOpenUnit);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (s->parsed()) return cmd_solve(solve);
        if (v->parsed()) return cmd_validate(inst_path, trav_path);
        if (g->parsed()) return cmd_gen(gen);
        if (b->parsed()) return cmd_bench(suite_path, bench_out, workers);
        if (sh->parsed()) return cmd_shapes();
        if (c->parsed()) return cmd_cover(cover_path, cover_eps);
    } catch (const Usage& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_for(e.kind());
    }
    return kUsage;
}
