#include "helpers.hpp"

#include "mrfgc/io.hpp"
#include "mrfgc/oracle.hpp"
#include "mrfgc/tree_decomp.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>

using namespace mrfgc;
using namespace testing_util;

namespace {

std::string fixture(const std::string& name) { return std::string(MRFGC_FIXTURE_DIR) + "/" + name; }

LibraryLoader fixture_loader()
{
    return [](const std::string& path) { return read_file(fixture(path)); };
}

std::string error_of(const std::function<void()>& f, ErrorKind kind)
{
    try {
        f();
    } catch (const Error& e) {
        CHECK(e.kind() == kind);
        return e.what();
    }
    FAIL("no error raised");
    return {};
}

// Treewidth by trying every elimination order.
int brute_treewidth(const Graph& g)
{
    int n = g.vertex_count();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    int best = n;
    do {
        std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
        for (auto [u, v] : g.edges()) adj[u][v] = adj[v][u] = true;
        std::vector<bool> gone(n, false);
        int width = 0;
        for (int v : order) {
            std::vector<int> nb;
            for (int u = 0; u < n; ++u)
                if (!gone[u] && adj[v][u]) nb.push_back(u);
            width = std::max(width, static_cast<int>(nb.size()));
            for (int a : nb)
                for (int b : nb)
                    if (a != b) adj[a][b] = true;
            gone[v] = true;
            if (width >= best) break;
        }
        best = std::min(best, width);
    } while (std::next_permutation(order.begin(), order.end()));
    return best;
}

Instance path_instance(int n, int k)
{
    auto types = RobotTypes::homogeneous(k);
    return make_instance(path(n), make_implicit_backend(types), Configuration({{0, 0, k}}), Configuration({{n - 1, 0, k}}));
}

} // namespace

TEST_CASE("router fixture parses and its transition validates")
{
    auto doc = parse_instance(read_file(fixture("router_cleaner.mrfgc")), fixture_loader());
    const auto& inst = doc.instance;
    REQUIRE(doc.library_path);
    CHECK(inst.graph.vertex_count() == 8);
    CHECK(inst.graph.edges().size() == 9);
    const auto* lib = inst.backend->library();
    REQUIRE(lib);
    CHECK(lib->formations().size() == 3);
    CHECK(lib->transpositions().size() == 1);

    auto trav = parse_traversal(read_file(fixture("router_cleaner.trav")), inst);
    CHECK(trav.instance_hash == instance_hash(inst));
    REQUIRE(trav.traversal.size() == 2);
    CHECK(is_valid_transition(*inst.backend, inst.graph, trav.traversal[0], trav.traversal[1]));
    CHECK(validate_traversal(inst, trav.traversal).invalid_steps.empty());

    FormationLibrary bare(lib->types(), lib->formations(), {});
    CHECK_FALSE(bare.is_valid_transition(inst.graph, inst.start, inst.end));
}

TEST_CASE("canonical documents round-trip byte for byte")
{
    for (const char* name : {"router_cleaner.flib", "router_cleaner.mrfgc", "router_cleaner.trav"}) {
        CAPTURE(name);
        auto text = read_file(fixture(name));
        std::string again;
        if (std::string(name).ends_with(".flib")) {
            again = serialize_library(parse_library(text));
        } else if (std::string(name).ends_with(".mrfgc")) {
            again = serialize_instance(parse_instance(text, fixture_loader()));
        } else {
            auto inst = parse_instance(read_file(fixture("router_cleaner.mrfgc")), fixture_loader()).instance;
            again = serialize_traversal(inst, parse_traversal(text, inst).traversal);
        }
        CHECK(again == text);
    }

    std::mt19937_64 rng(5);
    for (int round = 0; round < 20; ++round) {
        auto gen = gen_random_graph(2 + static_cast<int>(rng() % 9), 1 + static_cast<int>(rng() % 3), rng());
        int k = 1 + static_cast<int>(rng() % 3);
        auto types = RobotTypes::homogeneous(k);
        InstanceDocument doc;
        doc.instance = make_instance(gen.graph, make_implicit_backend(types), Configuration({{0, 0, k}}), Configuration({{0, 0, k}}));
        doc.root = 0;
        doc.decomposition = gen.decomposition;
        auto text = serialize_instance(doc);
        auto back = parse_instance(text);
        CHECK(serialize_instance(back) == text);
        CHECK(back.decomposition->bags == gen.decomposition.bags);
        CHECK(instance_hash(back.instance) == instance_hash(doc.instance));
    }
}

TEST_CASE("traversals keep or recompute anchors")
{
    auto inst = path_instance(4, 2);
    auto t = solve_exact_bfs(inst);
    REQUIRE(t.status == SolveStatus::Optimal);
    auto text = serialize_traversal(inst, t.traversal);
    auto doc = parse_traversal(text, inst);
    CHECK(doc.traversal == t.traversal);
    CHECK(serialize_traversal(inst, doc.traversal) == text);
    CHECK(validate_traversal(inst, doc.traversal).ok());
}

TEST_CASE("robot totals must match")
{
    auto text = serialize_instance(path_instance(3, 2));
    auto pos = text.find("\"count\": 2");
    REQUIRE(pos != std::string::npos);
    auto bad = text;
    bad.replace(pos, 10, "\"count\": 1");
    auto what = error_of([&] { parse_instance(bad); }, ErrorKind::Semantic);
    CHECK(what.find("/end") != std::string::npos);
}

TEST_CASE("unknown labels are reported with a path")
{
    auto text = serialize_instance(path_instance(3, 1));
    auto pos = text.find("\"vertex\": \"2\"");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 13, "\"vertex\": \"z\"");
    auto what = error_of([&] { parse_instance(text); }, ErrorKind::Semantic);
    CHECK(what.find("/end/0/vertex") != std::string::npos);
    CHECK(what.find("'z'") != std::string::npos);
}

TEST_CASE("syntax errors carry line and column")
{
    std::string text = "{\n  \"schema\": \"mrfgc-instance/1\",\n  \"graph\": [1, 2,, 3]\n}\n";
    auto what = error_of([&] { parse_instance(text); }, ErrorKind::Parse);
    CHECK(what.find("line 3, column 18") != std::string::npos);
    error_of([] { parse_library("{"); }, ErrorKind::Parse);
    error_of([] { parse_instance("{\"schema\": \"other\"}"); }, ErrorKind::Semantic);
}

TEST_CASE("library references are checked by hash")
{
    auto text = read_file(fixture("router_cleaner.mrfgc"));
    auto pos = text.find("\"hash\": \"");
    REQUIRE(pos != std::string::npos);
    text[pos + 9] = text[pos + 9] == '0' ? '1' : '0';
    auto what = error_of([&] { parse_instance(text, fixture_loader()); }, ErrorKind::Semantic);
    CHECK(what.find("/backend/library_ref/hash") != std::string::npos);
    error_of([&] { parse_instance(read_file(fixture("router_cleaner.mrfgc"))); }, ErrorKind::Semantic);
}

TEST_CASE("anchors that do not place the configuration are rejected")
{
    auto inst = parse_instance(read_file(fixture("router_cleaner.mrfgc")), fixture_loader()).instance;
    auto text = read_file(fixture("router_cleaner.trav"));
    auto pos = text.find("\"formation\": 1");
    REQUIRE(pos != std::string::npos);
    text[pos + 13] = '2';
    error_of([&] { parse_traversal(text, inst); }, ErrorKind::Semantic);
}

TEST_CASE("content hash is stable")
{
    CHECK(content_hash("") == "cbf29ce484222325");
    CHECK(content_hash("a") == "af63dc4c8601ec8c");
}

TEST_CASE("random trees")
{
    CHECK(gen_random_tree(1, 0, 3).graph().vertex_count() == 1);
    CHECK(gen_random_tree(2, 1, 3).graph().edges().size() == 1);
    error_of([] { gen_random_tree(3, 1, 0); }, ErrorKind::InvalidArgument);
    error_of([] { gen_random_tree(2, 0, 0); }, ErrorKind::InvalidArgument);
    error_of([] { gen_random_tree(0, 3, 0); }, ErrorKind::InvalidArgument);

    auto a = gen_random_tree(40, 3, 77), b = gen_random_tree(40, 3, 77);
    CHECK(a.graph().edges() == b.graph().edges());

    std::vector<long> histogram(8, 0);
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        int bound = 2 + static_cast<int>(seed % 4);
        auto t = gen_random_tree(1 + static_cast<int>(seed % 50), bound, seed);
        const auto& g = t.graph();
        CHECK(is_tree(g));
        for (Vertex v = 0; v < g.vertex_count(); ++v) {
            CHECK(g.degree(v) <= bound);
            ++histogram[g.degree(v)];
        }
    }
    CHECK(histogram[5] > 0);
    CHECK(histogram[6] == 0);
}

TEST_CASE("random graphs stay within the target width")
{
    CHECK(gen_random_graph(1, 0, 1).graph.vertex_count() == 1);
    error_of([] { gen_random_graph(3, 0, 1); }, ErrorKind::InvalidArgument);
    auto a = gen_random_graph(30, 3, 9), b = gen_random_graph(30, 3, 9);
    CHECK(a.graph.edges() == b.graph.edges());
    CHECK(a.decomposition.bags == b.decomposition.bags);

    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        int n = 1 + static_cast<int>(seed % 8), target = 1 + static_cast<int>(seed % 3);
        auto gen = gen_random_graph(n, target, seed);
        CHECK(gen.graph.is_connected());
        CHECK(validate_plain_decomposition(gen.graph, gen.decomposition).ok());
        for (const auto& bag : gen.decomposition.bags) CHECK(static_cast<int>(bag.size()) <= target + 1);
        CHECK(brute_treewidth(gen.graph) <= target);
    }
}
