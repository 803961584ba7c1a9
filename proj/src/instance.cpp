#include "mrfgc/instance.hpp"

#include <sstream>

namespace mrfgc {

void check_instance(const Instance& inst)
{
    if (!inst.backend) fail(ErrorKind::Semantic, "instance has no constraint backend");
    if (!(inst.backend->types() == inst.types)) fail(ErrorKind::Semantic, "backend robot types differ from the instance's");
    if (!inst.backend->anchor(inst.graph, inst.start)) fail(ErrorKind::Semantic, "start configuration is not valid");
    if (!inst.backend->anchor(inst.graph, inst.end)) fail(ErrorKind::Semantic, "end configuration is not valid");
}

Instance make_instance(Graph g, BackendPtr backend, Configuration start, Configuration end)
{
    Instance inst{std::move(g), backend ? backend->types() : RobotTypes{}, std::move(backend), std::move(start), std::move(end)};
    check_instance(inst);
    return inst;
}

ValidationReport validate_traversal(const Instance& inst, const Traversal& x)
{
    ValidationReport r;
    int n = inst.graph.vertex_count();
    if (x.empty()) {
        for (Vertex v = 0; v < n; ++v) r.unvisited.push_back(v);
        return r;
    }
    r.time = static_cast<int>(x.size()) - 1;
    r.start_matches = x.front().config == inst.start;
    r.end_matches = x.back().config == inst.end;
    std::vector<char> seen(n, 0);
    for (int i = 0; i < static_cast<int>(x.size()); ++i) {
        const auto& c = x[i].config;
        if (c.max_vertex() >= n || !inst.backend || !inst.backend->anchor(inst.graph, c)) {
            r.invalid_configurations.push_back(i);
            continue;
        }
        for (Vertex v : c.occupied()) seen[v] = 1;
    }
    for (int i = 0; i + 1 < static_cast<int>(x.size()); ++i) {
        bool ok = false;
        try {
            ok = inst.backend && inst.backend->is_valid_transition(inst.graph, x[i].config, x[i + 1].config);
        } catch (const Error&) {
            ok = false;
        }
        if (!ok) r.invalid_steps.push_back(i);
    }
    for (Vertex v = 0; v < n; ++v)
        if (!seen[v]) r.unvisited.push_back(v);
    return r;
}

std::string ValidationReport::describe(const Graph& g) const
{
    std::ostringstream os;
    os << "time=" << time;
    os << " start=" << (start_matches ? "ok" : "mismatch");
    os << " end=" << (end_matches ? "ok" : "mismatch");
    if (!invalid_configurations.empty()) {
        os << " invalid-configurations=";
        for (std::size_t i = 0; i < invalid_configurations.size(); ++i) os << (i ? "," : "") << invalid_configurations[i];
    }
    if (!invalid_steps.empty()) {
        os << " invalid-steps=";
        for (std::size_t i = 0; i < invalid_steps.size(); ++i) os << (i ? "," : "") << invalid_steps[i];
    }
    if (!unvisited.empty()) {
        os << " unvisited=";
        for (std::size_t i = 0; i < unvisited.size(); ++i) os << (i ? "," : "") << g.label(unvisited[i]);
    }
    return os.str();
}

} // namespace mrfgc
