#pragma once

#include "mrfgc/graph.hpp"

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mrfgc {

using RobotType = int;

class RobotTypes {
public:
    RobotTypes() = default;
    RobotTypes(std::vector<std::string> names, std::vector<int> counts);
    /// `k` indistinguishable robots of one type named "robot".
    static RobotTypes homogeneous(int k);

    int type_count() const { return static_cast<int>(names_.size()); }
    int count(RobotType m) const { return counts_.at(m); }
    const std::string& name(RobotType m) const { return names_.at(m); }
    int total() const { return total_; }
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<int>& counts() const { return counts_; }
    std::optional<RobotType> find(const std::string& name) const;

    friend bool operator==(const RobotTypes&, const RobotTypes&) = default;

private:
    std::vector<std::string> names_;
    std::vector<int> counts_;
    int total_ = 0;
};

struct Placement {
    Vertex vertex;
    RobotType type;
    int count;
    friend auto operator<=>(const Placement&, const Placement&) = default;
};

/// Sparse count map (vertex, type) -> robots. Entries are kept sorted by
/// (vertex, type) with strictly positive counts, so equality and ordering
/// are structural.
class Configuration {
public:
    Configuration() = default;
    explicit Configuration(std::vector<Placement> placements);
    /// All robots of every type on a single vertex.
    static Configuration all_at(Vertex v, const RobotTypes& types);

    std::span<const Placement> placements() const { return placements_; }
    bool empty() const { return placements_.empty(); }
    int count(Vertex v, RobotType m) const;
    int count_at(Vertex v) const;
    int total() const;
    int total_of(RobotType m) const;
    /// Sorted distinct occupied vertices.
    std::vector<Vertex> occupied() const;
    Vertex max_vertex() const;

    void add(Vertex v, RobotType m, int count);
    /// Renames vertices through `map` (map[v] = new id); counts landing on the same vertex add up.
    Configuration mapped(std::span<const Vertex> map) const;

    std::size_t hash() const;
    friend auto operator<=>(const Configuration&, const Configuration&) = default;
    friend bool operator==(const Configuration&, const Configuration&) = default;

private:
    std::vector<Placement> placements_;
};

struct ConfigurationHash {
    std::size_t operator()(const Configuration& c) const { return c.hash(); }
};

/// A configuration together with the witness that makes it valid: the
/// formation id and the monomorphism from the formation's pattern into the
/// host. Equality looks only at the configuration.
struct AnchoredConfiguration {
    Configuration config;
    int formation = -1;           // -1 for the implicit connectivity backend
    std::vector<Vertex> embedding; // pattern vertex -> host vertex

    /// Image of the embedding (sorted); for the implicit backend this is Occ(x).
    std::vector<Vertex> active() const;

    friend bool operator==(const AnchoredConfiguration& a, const AnchoredConfiguration& b) { return a.config == b.config; }
};

using Traversal = std::vector<AnchoredConfiguration>;

std::vector<Vertex> occupied(const Configuration& config);
bool is_connected_configuration(const Graph& g, const Configuration& config);

/// Number of transitions, i.e. sequence length minus one.
int traversal_time(const Traversal& x);

std::string to_string(const Configuration& config, const Graph* g = nullptr, const RobotTypes* types = nullptr);

} // namespace mrfgc
