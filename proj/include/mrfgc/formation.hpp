#pragma once

#include "mrfgc/configuration.hpp"
#include "mrfgc/graph.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace mrfgc {

/// pattern vertex -> host vertex; -1 marks an unassigned vertex in a pin.
using VertexMap = std::vector<Vertex>;

/// Every injective map extending `pin` that sends pattern edges onto host
/// edges, in lexicographic order (pattern vertex 0 first, host ids ascending).
std::vector<VertexMap> find_monomorphisms(const Graph& pattern, const Graph& host, const VertexMap& pin = {});

/// Callback form used by the solvers. `compatible(p, h)` filters candidate
/// pairs; `visit` returns false to stop the search. `order` (optional) is the
/// assignment order of pattern vertices.
void for_each_monomorphism(const Graph& pattern, const Graph& host, const VertexMap& pin,
                           const std::function<bool(Vertex, Vertex)>& compatible,
                           const std::function<bool(const VertexMap&)>& visit,
                           std::span<const Vertex> order = {});

struct Formation {
    std::string name;
    Graph pattern;
    Configuration placement; // on pattern vertices
};

struct Move {
    RobotType type;
    Vertex from;
    Vertex to;
    int count;
    friend auto operator<=>(const Move&, const Move&) = default;
};

struct Transposition {
    std::string name;
    Graph pattern;
    Configuration source;
    Configuration target;

    // Filled in when the transposition joins a library.
    std::vector<Move> moves;
    int source_formation = -1;
    VertexMap source_embedding; // formation pattern -> transposition pattern
    int target_formation = -1;
    VertexMap target_embedding;
};

struct TranspositionCheck {
    bool valid = false;
    std::string diagnostic;
    std::vector<Move> moves;
};

/// Per-type transportation feasibility: every robot of `source` reaches
/// `target` by staying put or crossing one edge of `g`.
std::optional<std::vector<Move>> transport_plan(const Graph& g, const Configuration& source, const Configuration& target);

TranspositionCheck validate_transposition(const Transposition& t);

/// Formations F and transpositions P over a fixed set of robot types.
class FormationLibrary {
public:
    FormationLibrary(RobotTypes types, std::vector<Formation> formations, std::vector<Transposition> transpositions);

    const RobotTypes& types() const { return types_; }
    const std::vector<Formation>& formations() const { return formations_; }
    const std::vector<Transposition>& transpositions() const { return transpositions_; }

    /// Adjacency-list length plus |V_a| x |M| table per pattern.
    long representation_length() const;
    int max_pattern_vertices() const;
    int max_pattern_edges() const;

    /// All witnesses of `config` being in some formation's form, formations in
    /// library order, embeddings in lexicographic order.
    std::vector<AnchoredConfiguration> forms(const Graph& host, const Configuration& config, int limit = -1) const;
    std::vector<AnchoredConfiguration> forms_of(const Graph& host, const Configuration& config, int formation) const;
    bool is_valid_transition(const Graph& host, const Configuration& a, const Configuration& b) const;
    /// Successor configurations (sorted, duplicate-free).
    std::vector<Configuration> successors(const Graph& host, const Configuration& a) const;

    /// Canonical keys (isomorphism classes) of formations and of unordered transpositions.
    std::vector<std::string> formation_keys() const;
    std::vector<std::string> transposition_keys() const;

private:
    struct Orientation {
        int index;
        bool reversed;
    };
    std::string placement_key(const Configuration& c) const;
    std::string pair_key(const Configuration& a, const Configuration& b) const;

    RobotTypes types_;
    std::vector<Formation> formations_;
    std::vector<Transposition> transpositions_;
    std::unordered_map<std::string, std::vector<int>> formation_index_;
    std::unordered_map<std::string, std::vector<Orientation>> source_index_;
    std::unordered_map<std::string, std::vector<Orientation>> pair_index_;
};

/// Canonical isomorphism key of a small vertex-labelled graph.
std::string canonical_key(const Graph& g, const std::vector<std::vector<int>>& labels);

class ConstraintBackend {
public:
    virtual ~ConstraintBackend() = default;
    virtual bool is_explicit() const = 0;
    virtual const RobotTypes& types() const = 0;
    /// First witness of validity, or nullopt when the configuration is not valid.
    virtual std::optional<AnchoredConfiguration> anchor(const Graph& g, const Configuration& c) const = 0;
    virtual bool is_valid_transition(const Graph& g, const Configuration& a, const Configuration& b) const = 0;
    virtual std::vector<Configuration> successors(const Graph& g, const Configuration& a) const = 0;
    virtual const FormationLibrary* library() const { return nullptr; }
    /// Pattern graph of an anchored configuration (formation pattern, or the
    /// occupied subgraph for the implicit backend).
    virtual Graph pattern_of(const Graph& g, const AnchoredConfiguration& a) const = 0;
};

using BackendPtr = std::shared_ptr<const ConstraintBackend>;

BackendPtr make_implicit_backend(const RobotTypes& types);
BackendPtr make_explicit_backend(FormationLibrary library);

bool is_valid_configuration(const ConstraintBackend& backend, const Graph& g, const Configuration& c);
bool is_valid_transition(const ConstraintBackend& backend, const Graph& g, const AnchoredConfiguration& a, const AnchoredConfiguration& b);
std::vector<AnchoredConfiguration> enumerate_transitions(const ConstraintBackend& backend, const Graph& g, const AnchoredConfiguration& a);
std::vector<AnchoredConfiguration> is_in_form(const Configuration& config, const Formation& f, const Graph& host);

bool is_collapsible(const FormationLibrary& lib);
bool is_collapsible(const ConstraintBackend& backend);
FormationLibrary collapsible_closure(const FormationLibrary& lib);

constexpr int kConnectivityLibraryBound = 4;
FormationLibrary generate_connectivity_library(const RobotTypes& types, int bound = kConnectivityLibraryBound);

/// Moves every robot onto `target` by contracting pattern edges leaf-most
/// first along a BFS tree rooted at the target. Returns the configurations
/// after each step (the starting configuration is not repeated).
Traversal regroup_sequence(const ConstraintBackend& backend, const Graph& g, const AnchoredConfiguration& a, Vertex target);

/// Largest |E_a| / |V_a| over the formations a backend can produce (the
/// connectivity library is used for the implicit backend).
int max_formation_edges(const ConstraintBackend& backend);
int max_formation_vertices(const ConstraintBackend& backend);
int formation_count(const ConstraintBackend& backend);

} // namespace mrfgc
