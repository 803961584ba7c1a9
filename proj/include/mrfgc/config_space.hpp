#pragma once

#include "mrfgc/instance.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace mrfgc {

/// The configurations reachable from x0, interned to dense ids, with their
/// successor lists and occupied / active vertex sets.
class ConfigSpace {
public:
    explicit ConfigSpace(const Instance& inst, long max_configs = 1'000'000);

    int size() const { return static_cast<int>(configs_.size()); }
    const AnchoredConfiguration& anchored(int id) const { return configs_.at(id); }
    const Configuration& config(int id) const { return configs_.at(id).config; }
    std::optional<int> find(const Configuration& c) const;
    int start() const { return 0; }
    /// Id of xf, or nullopt when it cannot be reached from x0.
    std::optional<int> end() const { return end_; }

    std::span<const int> successors(int id) const { return successors_.at(id); }
    std::span<const Vertex> occupied(int id) const { return occupied_.at(id); }
    std::span<const Vertex> active(int id) const { return active_.at(id); }
    /// Configuration ids whose occupied set contains u.
    std::span<const int> occupying(Vertex u) const { return occupying_.at(u); }
    int vertex_count() const { return static_cast<int>(occupying_.size()); }

private:
    std::vector<AnchoredConfiguration> configs_;
    std::unordered_map<Configuration, int, ConfigurationHash> index_;
    std::vector<std::vector<int>> successors_;
    std::vector<std::vector<Vertex>> occupied_;
    std::vector<std::vector<Vertex>> active_;
    std::vector<std::vector<int>> occupying_;
    std::optional<int> end_;
};

/// All-pairs shortest transition counts over a ConfigSpace (-1 = unreachable),
/// plus distances to the nearest configuration occupying a vertex.
class ConfigDistances {
public:
    explicit ConfigDistances(const ConfigSpace& space);

    int between(int a, int b) const { return dist_[static_cast<std::size_t>(a) * n_ + b]; }
    /// min over configurations c occupying u of between(a, c).
    int to_cover(int a, Vertex u) const { return cover_[static_cast<std::size_t>(a) * vertices_ + u]; }
    /// min over configurations c occupying u of to_cover(c, w).
    int cover_to_cover(Vertex u, Vertex w) const { return pair_[static_cast<std::size_t>(u) * vertices_ + w]; }

private:
    std::size_t n_;
    std::size_t vertices_;
    std::vector<int> dist_;
    std::vector<int> cover_;
    std::vector<int> pair_;
};

} // namespace mrfgc
