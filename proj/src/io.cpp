#include "mrfgc/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

namespace mrfgc {

using json = nlohmann::json;

namespace {

    [[noreturn]] void semantic(const std::string& path, const std::string& what)
    {
        fail(ErrorKind::Semantic, "at " + (path.empty() ? std::string("/") : path) + ": " + what);
    }

    json parse_json(const std::string& text)
    {
        try {
            return json::parse(text);
        } catch (const json::parse_error& e) {
            std::size_t line = 1, column = 1;
            std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
            for (std::size_t i = 0; i < end; ++i) {
                if (text[i] == '\n') ++line, column = 1;
                else ++column;
            }
            std::string what = e.what();
            if (auto cut = what.find("syntax error"); cut != std::string::npos) what = what.substr(cut);
            fail(ErrorKind::Parse, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what);
        }
    }

    std::string dump(const json& j) { return j.dump(2, ' ', false) + "\n"; }

    const json& field(const json& j, const std::string& key, const std::string& path)
    {
        if (!j.is_object()) semantic(path, "expected an object");
        auto it = j.find(key);
        if (it == j.end()) semantic(path + "/" + key, "missing field");
        return *it;
    }

    const json& array(const json& j, const std::string& path)
    {
        if (!j.is_array()) semantic(path, "expected an array");
        return j;
    }

    std::string text_of(const json& j, const std::string& path)
    {
        if (!j.is_string()) semantic(path, "expected a string");
        return j.get<std::string>();
    }

    long integer(const json& j, const std::string& path)
    {
        if (!j.is_number_integer()) semantic(path, "expected an integer");
        return j.get<long>();
    }

    void check_schema(const json& j, const char* schema)
    {
        if (text_of(field(j, "schema", ""), "/schema") != schema) semantic("/schema", std::string("expected ") + schema);
    }

    // graphs ---------------------------------------------------------------

    json graph_json(const Graph& g)
    {
        json vertices = json::array(), edges = json::array();
        for (Vertex v = 0; v < g.vertex_count(); ++v) vertices.push_back(g.label(v));
        for (auto [u, v] : g.edges()) edges.push_back({g.label(u), g.label(v)});
        return {{"vertices", vertices}, {"edges", edges}};
    }

    Vertex vertex_of(const Graph& g, const json& j, const std::string& path)
    {
        auto label = text_of(j, path);
        auto v = g.find_label(label);
        if (!v) semantic(path, "unknown vertex '" + label + "'");
        return *v;
    }

    Graph parse_graph(const json& j, const std::string& path)
    {
        std::vector<std::string> labels;
        const auto& vs = array(field(j, "vertices", path), path + "/vertices");
        for (std::size_t i = 0; i < vs.size(); ++i) labels.push_back(text_of(vs[i], path + "/vertices/" + std::to_string(i)));
        Graph bare;
        try {
            bare = Graph(static_cast<int>(labels.size()), {}, labels);
        } catch (const Error& e) {
            semantic(path + "/vertices", e.what());
        }
        std::vector<Edge> edges;
        const auto& es = array(field(j, "edges", path), path + "/edges");
        for (std::size_t i = 0; i < es.size(); ++i) {
            auto at = path + "/edges/" + std::to_string(i);
            if (!es[i].is_array() || es[i].size() != 2) semantic(at, "expected a pair of vertex labels");
            edges.emplace_back(vertex_of(bare, es[i][0], at + "/0"), vertex_of(bare, es[i][1], at + "/1"));
        }
        try {
            return Graph(static_cast<int>(labels.size()), edges, labels);
        } catch (const Error& e) {
            semantic(path + "/edges", e.what());
        }
    }

    // robots and placements --------------------------------------------------

    json robots_json(const RobotTypes& types)
    {
        json out = json::array();
        for (int m = 0; m < types.type_count(); ++m) out.push_back({{"type", types.name(m)}, {"count", types.count(m)}});
        return out;
    }

    RobotTypes parse_robots(const json& j, const std::string& path)
    {
        std::vector<std::string> names;
        std::vector<int> counts;
        const auto& rs = array(j, path);
        for (std::size_t i = 0; i < rs.size(); ++i) {
            auto at = path + "/" + std::to_string(i);
            names.push_back(text_of(field(rs[i], "type", at), at + "/type"));
            counts.push_back(static_cast<int>(integer(field(rs[i], "count", at), at + "/count")));
        }
        try {
            return RobotTypes(names, counts);
        } catch (const Error& e) {
            semantic(path, e.what());
        }
    }

    json placement_json(const Configuration& c, const Graph& g, const RobotTypes& types)
    {
        json out = json::array();
        for (const auto& p : c.placements()) out.push_back({{"vertex", g.label(p.vertex)}, {"type", types.name(p.type)}, {"count", p.count}});
        return out;
    }

    Configuration parse_placement(const json& j, const Graph& g, const RobotTypes& types, const std::string& path, bool full)
    {
        Configuration c;
        const auto& ps = array(j, path);
        for (std::size_t i = 0; i < ps.size(); ++i) {
            auto at = path + "/" + std::to_string(i);
            Vertex v = vertex_of(g, field(ps[i], "vertex", at), at + "/vertex");
            auto name = text_of(field(ps[i], "type", at), at + "/type");
            auto m = types.find(name);
            if (!m) semantic(at + "/type", "unknown robot type '" + name + "'");
            long count = integer(field(ps[i], "count", at), at + "/count");
            if (count < 1) semantic(at + "/count", "robot counts must be positive");
            c.add(v, *m, static_cast<int>(count));
        }
        if (full)
            for (int m = 0; m < types.type_count(); ++m)
                if (c.total_of(m) != types.count(m))
                    semantic(path, "places " + std::to_string(c.total_of(m)) + " robots of type '" + types.name(m) + "', expected " + std::to_string(types.count(m)));
        return c;
    }

    // libraries -------------------------------------------------------------

    json library_json(const FormationLibrary& lib)
    {
        const auto& types = lib.types();
        json formations = json::array(), transpositions = json::array();
        for (const auto& f : lib.formations())
            formations.push_back({{"name", f.name}, {"pattern", graph_json(f.pattern)}, {"placement", placement_json(f.placement, f.pattern, types)}});
        for (const auto& t : lib.transpositions())
            transpositions.push_back({{"name", t.name},
                                      {"pattern", graph_json(t.pattern)},
                                      {"source", placement_json(t.source, t.pattern, types)},
                                      {"target", placement_json(t.target, t.pattern, types)}});
        return {{"schema", kLibrarySchema}, {"robots", robots_json(types)}, {"formations", formations}, {"transpositions", transpositions}};
    }

    FormationLibrary parse_library_json(const json& j, const std::string& path)
    {
        if (text_of(field(j, "schema", path), path + "/schema") != kLibrarySchema) semantic(path + "/schema", std::string("expected ") + kLibrarySchema);
        RobotTypes types = parse_robots(field(j, "robots", path), path + "/robots");
        std::vector<Formation> formations;
        const auto& fs = array(field(j, "formations", path), path + "/formations");
        for (std::size_t i = 0; i < fs.size(); ++i) {
            auto at = path + "/formations/" + std::to_string(i);
            Graph pattern = parse_graph(field(fs[i], "pattern", at), at + "/pattern");
            auto placement = parse_placement(field(fs[i], "placement", at), pattern, types, at + "/placement", true);
            formations.push_back({text_of(field(fs[i], "name", at), at + "/name"), std::move(pattern), std::move(placement)});
        }
        std::vector<Transposition> transpositions;
        const auto& ts = array(field(j, "transpositions", path), path + "/transpositions");
        for (std::size_t i = 0; i < ts.size(); ++i) {
            auto at = path + "/transpositions/" + std::to_string(i);
            Transposition t;
            t.name = text_of(field(ts[i], "name", at), at + "/name");
            t.pattern = parse_graph(field(ts[i], "pattern", at), at + "/pattern");
            t.source = parse_placement(field(ts[i], "source", at), t.pattern, types, at + "/source", true);
            t.target = parse_placement(field(ts[i], "target", at), t.pattern, types, at + "/target", true);
            transpositions.push_back(std::move(t));
        }
        try {
            return FormationLibrary(types, std::move(formations), std::move(transpositions));
        } catch (const Error& e) {
            semantic(path, e.what());
        }
    }

    // anchors -----------------------------------------------------------------

    bool anchor_holds(const ConstraintBackend& backend, const Graph& g, const AnchoredConfiguration& a)
    {
        const auto* lib = backend.library();
        if (!lib) return false;
        if (a.formation < 0 || a.formation >= static_cast<int>(lib->formations().size())) return false;
        const auto& f = lib->formations()[a.formation];
        if (static_cast<int>(a.embedding.size()) != f.pattern.vertex_count()) return false;
        std::vector<Vertex> image = a.embedding;
        std::sort(image.begin(), image.end());
        if (std::adjacent_find(image.begin(), image.end()) != image.end()) return false;
        for (auto [u, v] : f.pattern.edges())
            if (!g.has_edge(a.embedding[u], a.embedding[v])) return false;
        return f.placement.mapped(a.embedding) == a.config;
    }

} // namespace

std::string content_hash(const std::string& text)
{
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) out[i] = hex[h & 0xF];
    return out;
}

FormationLibrary parse_library(const std::string& text) { return parse_library_json(parse_json(text), ""); }

std::string serialize_library(const FormationLibrary& lib) { return dump(library_json(lib)); }

InstanceDocument parse_instance(const std::string& text, const LibraryLoader& load)
{
    json j = parse_json(text);
    check_schema(j, kInstanceSchema);
    Graph g = parse_graph(field(j, "graph", ""), "/graph");
    RobotTypes types = parse_robots(field(j, "robots", ""), "/robots");

    InstanceDocument doc;
    const auto& b = field(j, "backend", "");
    auto kind = text_of(field(b, "kind", "/backend"), "/backend/kind");
    BackendPtr backend;
    if (kind == "implicit") {
        backend = make_implicit_backend(types);
    } else if (kind == "explicit") {
        std::optional<FormationLibrary> lib;
        if (b.contains("library")) {
            lib = parse_library_json(b["library"], "/backend/library");
        } else {
            const auto& ref = field(b, "library_ref", "/backend");
            auto path = text_of(field(ref, "path", "/backend/library_ref"), "/backend/library_ref/path");
            auto hash = text_of(field(ref, "hash", "/backend/library_ref"), "/backend/library_ref/hash");
            if (!load) semantic("/backend/library_ref", "no way to load referenced library '" + path + "'");
            auto body = load(path);
            if (content_hash(body) != hash) semantic("/backend/library_ref/hash", "library '" + path + "' has hash " + content_hash(body));
            lib = parse_library(body);
            doc.library_path = path;
        }
        if (!(lib->types() == types)) semantic("/backend", "library robot types differ from the instance's");
        backend = make_explicit_backend(std::move(*lib));
    } else {
        semantic("/backend/kind", "expected 'implicit' or 'explicit'");
    }

    auto start = parse_placement(field(j, "start", ""), g, types, "/start", true);
    auto end = parse_placement(field(j, "end", ""), g, types, "/end", true);
    if (j.contains("root")) doc.root = vertex_of(g, j["root"], "/root");
    if (j.contains("decomposition")) {
        const auto& d = j["decomposition"];
        TreeDecomposition td;
        const auto& bags = array(field(d, "bags", "/decomposition"), "/decomposition/bags");
        for (std::size_t i = 0; i < bags.size(); ++i) {
            auto at = "/decomposition/bags/" + std::to_string(i);
            std::vector<Vertex> bag;
            for (std::size_t k = 0; k < array(bags[i], at).size(); ++k) bag.push_back(vertex_of(g, bags[i][k], at + "/" + std::to_string(k)));
            td.bags.push_back(std::move(bag));
        }
        const auto& es = array(field(d, "edges", "/decomposition"), "/decomposition/edges");
        for (std::size_t i = 0; i < es.size(); ++i) {
            auto at = "/decomposition/edges/" + std::to_string(i);
            if (!es[i].is_array() || es[i].size() != 2) semantic(at, "expected a pair of bag indices");
            td.edges.emplace_back(static_cast<int>(integer(es[i][0], at + "/0")), static_cast<int>(integer(es[i][1], at + "/1")));
        }
        td.root = static_cast<int>(integer(field(d, "root", "/decomposition"), "/decomposition/root"));
        auto report = validate_plain_decomposition(g, td);
        if (!report.ok()) semantic("/decomposition", report.problems.front());
        doc.decomposition = std::move(td);
    }
    try {
        doc.instance = make_instance(std::move(g), std::move(backend), std::move(start), std::move(end));
    } catch (const Error& e) {
        semantic("", e.what());
    }
    return doc;
}

std::string serialize_instance(const InstanceDocument& doc)
{
    const Instance& inst = doc.instance;
    const Graph& g = inst.graph;
    json j{{"schema", kInstanceSchema},
           {"graph", graph_json(g)},
           {"robots", robots_json(inst.types)},
           {"start", placement_json(inst.start, g, inst.types)},
           {"end", placement_json(inst.end, g, inst.types)}};
    if (const auto* lib = inst.backend->library()) {
        if (doc.library_path)
            j["backend"] = {{"kind", "explicit"}, {"library_ref", {{"path", *doc.library_path}, {"hash", content_hash(serialize_library(*lib))}}}};
        else
            j["backend"] = {{"kind", "explicit"}, {"library", library_json(*lib)}};
    } else {
        j["backend"] = {{"kind", "implicit"}};
    }
    if (doc.root) j["root"] = g.label(*doc.root);
    if (doc.decomposition) {
        json bags = json::array(), edges = json::array();
        for (const auto& bag : doc.decomposition->bags) {
            json b = json::array();
            for (Vertex v : bag) b.push_back(g.label(v));
            bags.push_back(b);
        }
        for (auto [a, b] : doc.decomposition->edges) edges.push_back({a, b});
        j["decomposition"] = {{"bags", bags}, {"edges", edges}, {"root", doc.decomposition->root}};
    }
    return dump(j);
}

std::string serialize_instance(const Instance& inst)
{
    InstanceDocument doc;
    doc.instance = inst;
    return serialize_instance(doc);
}

std::string instance_hash(const Instance& inst) { return content_hash(serialize_instance(inst)); }

std::string traversal_instance_hash(const std::string& text)
{
    json j = parse_json(text);
    check_schema(j, kTraversalSchema);
    return text_of(field(j, "instance", ""), "/instance");
}

TraversalDocument parse_traversal(const std::string& text, const Instance& inst)
{
    json j = parse_json(text);
    check_schema(j, kTraversalSchema);
    TraversalDocument doc;
    doc.instance_hash = text_of(field(j, "instance", ""), "/instance");
    const auto& cs = array(field(j, "configurations", ""), "/configurations");
    for (std::size_t i = 0; i < cs.size(); ++i) {
        auto at = "/configurations/" + std::to_string(i);
        auto config = parse_placement(field(cs[i], "placement", at), inst.graph, inst.types, at + "/placement", true);
        if (cs[i].contains("formation")) {
            AnchoredConfiguration a;
            a.config = std::move(config);
            a.formation = static_cast<int>(integer(cs[i]["formation"], at + "/formation"));
            const auto& emb = array(field(cs[i], "embedding", at), at + "/embedding");
            for (std::size_t k = 0; k < emb.size(); ++k) a.embedding.push_back(vertex_of(inst.graph, emb[k], at + "/embedding/" + std::to_string(k)));
            if (!anchor_holds(*inst.backend, inst.graph, a)) semantic(at, "anchor does not place the configuration");
            doc.traversal.push_back(std::move(a));
        } else {
            auto a = inst.backend->anchor(inst.graph, config);
            if (a) {
                doc.traversal.push_back(std::move(*a));
            } else {
                // kept unanchored so validation can report it
                AnchoredConfiguration raw;
                raw.config = std::move(config);
                doc.traversal.push_back(std::move(raw));
            }
        }
    }
    if (j.contains("time") && integer(j["time"], "/time") != static_cast<long>(cs.size()) - 1) semantic("/time", "does not match the number of configurations");
    return doc;
}

std::string serialize_traversal(const Instance& inst, const Traversal& x)
{
    json cs = json::array();
    for (const auto& a : x) {
        json c{{"placement", placement_json(a.config, inst.graph, inst.types)}};
        if (a.formation >= 0) {
            c["formation"] = a.formation;
            json emb = json::array();
            for (Vertex v : a.embedding) emb.push_back(inst.graph.label(v));
            c["embedding"] = emb;
        }
        cs.push_back(c);
    }
    json j{{"schema", kTraversalSchema}, {"instance", instance_hash(inst)}, {"time", static_cast<long>(x.size()) - 1}, {"configurations", cs}};
    return dump(j);
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::InvalidArgument, "cannot read '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) fail(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
}

RootedTree gen_random_tree(int n, int max_degree, std::uint64_t seed)
{
    if (n < 1) fail(ErrorKind::InvalidArgument, "a tree needs at least one vertex");
    if ((max_degree < 1 && n > 1) || (max_degree == 1 && n > 2)) fail(ErrorKind::InvalidArgument, "no tree on " + std::to_string(n) + " vertices has max degree " + std::to_string(max_degree));
    std::mt19937_64 rng(seed);
    std::vector<Edge> edges;
    std::vector<int> degree(n, 0);
    std::vector<Vertex> open{0};
    for (Vertex v = 1; v < n; ++v) {
        std::size_t pick = rng() % open.size();
        Vertex p = open[pick];
        edges.emplace_back(p, v);
        ++degree[v];
        if (++degree[p] == max_degree) {
            open[pick] = open.back();
            open.pop_back();
        }
        if (degree[v] < max_degree) open.push_back(v);
    }
    return RootedTree(Graph(n, edges), 0);
}

GeneratedGraph gen_random_graph(int n, int target_tw, std::uint64_t seed)
{
    if (n < 1) fail(ErrorKind::InvalidArgument, "a graph needs at least one vertex");
    if (target_tw < 1 && n > 1) fail(ErrorKind::InvalidArgument, "a connected graph on several vertices has treewidth at least 1");
    std::mt19937_64 rng(seed);
    int k = std::min(target_tw, n - 1);
    GeneratedGraph out;
    std::vector<Edge> edges;
    std::vector<Vertex> first(k + 1);
    for (int v = 0; v <= k; ++v) first[v] = v;
    // the initial clique keeps a spanning path plus random chords
    for (int u = 0; u <= k; ++u)
        for (int v = u + 1; v <= k; ++v)
            if (v == u + 1 || rng() % 2) edges.emplace_back(u, v);
    out.decomposition.bags.push_back(first);
    std::vector<std::pair<std::vector<Vertex>, int>> cliques;
    if (k > 0) {
        for (int skip = 0; skip <= k; ++skip) {
            std::vector<Vertex> c;
            for (int v = 0; v <= k; ++v)
                if (v != skip) c.push_back(v);
            cliques.push_back({c, 0});
        }
    }
    for (Vertex v = k + 1; v < n; ++v) {
        auto [c, home] = cliques[rng() % cliques.size()];
        std::uint64_t mask = 0;
        while (mask == 0) mask = rng() & ((1ULL << k) - 1);
        for (int i = 0; i < k; ++i)
            if (mask >> i & 1) edges.emplace_back(c[i], v);
        auto bag = c;
        bag.push_back(v);
        int id = static_cast<int>(out.decomposition.bags.size());
        out.decomposition.bags.push_back(bag);
        out.decomposition.edges.emplace_back(home, id);
        for (int i = 0; i < k; ++i) {
            auto next = bag;
            next.erase(next.begin() + i);
            cliques.push_back({next, id});
        }
    }
    out.graph = Graph(n, edges);
    out.decomposition.root = 0;
    return out;
}

} // namespace mrfgc
