#pragma once

#include "mrfgc/configuration.hpp"
#include "mrfgc/formation.hpp"
#include "mrfgc/graph.hpp"

#include <string>
#include <vector>

namespace mrfgc {

struct Instance {
    Graph graph;
    RobotTypes types;
    BackendPtr backend;
    Configuration start;
    Configuration end;
};

/// Throws Semantic when the backend is missing, its robot types differ from
/// the instance's, or x0 / xf are not valid configurations.
void check_instance(const Instance& inst);

Instance make_instance(Graph g, BackendPtr backend, Configuration start, Configuration end);

struct ValidationReport {
    bool start_matches = false;
    bool end_matches = false;
    std::vector<int> invalid_configurations; // indices into the traversal
    std::vector<int> invalid_steps;          // i such that (x^i, x^{i+1}) is rejected
    std::vector<Vertex> unvisited;
    int time = -1;

    bool ok() const
    {
        return start_matches && end_matches && invalid_configurations.empty() && invalid_steps.empty() && unvisited.empty();
    }
    std::string describe(const Graph& g) const;
};

ValidationReport validate_traversal(const Instance& inst, const Traversal& x);

} // namespace mrfgc
