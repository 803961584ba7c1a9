#include "mrfgc/config_space.hpp"

#include <deque>

namespace mrfgc {

ConfigSpace::ConfigSpace(const Instance& inst, long max_configs)
{
    const auto& g = inst.graph;
    auto add = [&](const Configuration& c) -> int {
        auto it = index_.find(c);
        if (it != index_.end()) return it->second;
        if (static_cast<long>(configs_.size()) >= max_configs) fail(ErrorKind::BudgetExceeded, "configuration space exceeds " + std::to_string(max_configs) + " configurations");
        auto anchored = inst.backend->anchor(g, c);
        if (!anchored) fail(ErrorKind::Internal, "unanchorable configuration reached");
        int id = static_cast<int>(configs_.size());
        index_.emplace(c, id);
        configs_.push_back(std::move(*anchored));
        return id;
    };
    if (!inst.backend->anchor(g, inst.start)) fail(ErrorKind::Semantic, "start configuration is not valid");
    add(inst.start);
    for (int id = 0; id < size(); ++id) {
        std::vector<int> next;
        for (const auto& c : inst.backend->successors(g, configs_[id].config)) next.push_back(add(c));
        successors_.push_back(std::move(next));
    }
    occupying_.assign(g.vertex_count(), {});
    for (int id = 0; id < size(); ++id) {
        occupied_.push_back(configs_[id].config.occupied());
        active_.push_back(configs_[id].active());
        for (Vertex v : occupied_.back()) occupying_[v].push_back(id);
    }
    end_ = find(inst.end);
}

std::optional<int> ConfigSpace::find(const Configuration& c) const
{
    auto it = index_.find(c);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

ConfigDistances::ConfigDistances(const ConfigSpace& space) : n_(space.size()), vertices_(space.vertex_count())
{
    dist_.assign(n_ * n_, -1);
    cover_.assign(n_ * vertices_, -1);
    for (std::size_t s = 0; s < n_; ++s) {
        int* row = dist_.data() + s * n_;
        std::deque<int> q{static_cast<int>(s)};
        row[s] = 0;
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            for (int w : space.successors(u))
                if (row[w] < 0) {
                    row[w] = row[u] + 1;
                    q.push_back(w);
                }
        }
        int* cov = cover_.data() + s * vertices_;
        for (std::size_t c = 0; c < n_; ++c) {
            if (row[c] < 0) continue;
            for (Vertex v : space.occupied(static_cast<int>(c)))
                if (cov[v] < 0 || row[c] < cov[v]) cov[v] = row[c];
        }
    }
    pair_.assign(vertices_ * vertices_, -1);
    for (std::size_t c = 0; c < n_; ++c) {
        const int* cov = cover_.data() + c * vertices_;
        for (Vertex u : space.occupied(static_cast<int>(c))) {
            int* out = pair_.data() + static_cast<std::size_t>(u) * vertices_;
            for (std::size_t w = 0; w < vertices_; ++w)
                if (cov[w] >= 0 && (out[w] < 0 || cov[w] < out[w])) out[w] = cov[w];
        }
    }
}

} // namespace mrfgc
