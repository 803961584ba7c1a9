#include "mrfgc/oracle.hpp"

#include "mrfgc/config_space.hpp"

#include <chrono>
#include <unordered_map>

namespace mrfgc {

namespace {

    struct StateKey {
        int config;
        std::uint64_t mask;
        bool operator==(const StateKey&) const = default;
    };

    struct StateKeyHash {
        std::size_t operator()(const StateKey& k) const { return std::hash<std::uint64_t>{}(k.mask * 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(k.config)); }
    };

    struct Node {
        int config;
        std::uint64_t mask;
        int parent;
    };

} // namespace

SearchResult solve_exact_bfs(const Instance& inst, SearchLimits limits)
{
    using Clock = std::chrono::steady_clock;
    auto t0 = Clock::now();
    auto elapsed_ms = [&] { return std::chrono::duration<double, std::milli>(Clock::now() - t0).count(); };

    SearchResult result;
    int n = inst.graph.vertex_count();
    if (n > 64) fail(ErrorKind::InvalidArgument, "the exact oracle handles at most 64 vertices");
    check_instance(inst);

    std::optional<ConfigSpace> space;
    try {
        space.emplace(inst, limits.max_states);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::BudgetExceeded) throw;
        result.status = SolveStatus::LimitExceeded;
        result.wall_ms = elapsed_ms();
        return result;
    }
    auto end = space->end();
    bool coverable = end.has_value();
    for (Vertex v = 0; v < n && coverable; ++v) coverable = !space->occupying(v).empty();
    if (!coverable) {
        result.status = SolveStatus::Infeasible;
        result.states = space->size();
        result.wall_ms = elapsed_ms();
        return result;
    }

    std::vector<std::uint64_t> occ_mask(space->size(), 0);
    for (int id = 0; id < space->size(); ++id)
        for (Vertex v : space->occupied(id)) occ_mask[id] |= std::uint64_t{1} << v;
    const std::uint64_t full = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;

    std::vector<Node> nodes;
    std::unordered_map<StateKey, int, StateKeyHash> seen;
    nodes.push_back({space->start(), occ_mask[space->start()], -1});
    seen.emplace(StateKey{space->start(), nodes[0].mask}, 0);

    auto finish = [&](int goal) {
        std::vector<int> chain;
        for (int at = goal; at >= 0; at = nodes[at].parent) chain.push_back(nodes[at].config);
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) result.traversal.push_back(space->anchored(*it));
        result.status = SolveStatus::Optimal;
        result.states = static_cast<long>(nodes.size());
        result.wall_ms = elapsed_ms();
        return result;
    };

    if (nodes[0].config == *end && nodes[0].mask == full) return finish(0);
    for (std::size_t head = 0; head < nodes.size(); ++head) {
        if ((head & 4095) == 0 && elapsed_ms() > static_cast<double>(limits.max_ms)) {
            result.status = SolveStatus::LimitExceeded;
            result.states = static_cast<long>(nodes.size());
            result.wall_ms = elapsed_ms();
            return result;
        }
        Node cur = nodes[head];
        for (int next : space->successors(cur.config)) {
            std::uint64_t mask = cur.mask | occ_mask[next];
            if (!seen.emplace(StateKey{next, mask}, static_cast<int>(nodes.size())).second) continue;
            nodes.push_back({next, mask, static_cast<int>(head)});
            if (next == *end && mask == full) return finish(static_cast<int>(nodes.size()) - 1);
            if (static_cast<long>(nodes.size()) >= limits.max_states) {
                result.status = SolveStatus::LimitExceeded;
                result.states = static_cast<long>(nodes.size());
                result.wall_ms = elapsed_ms();
                return result;
            }
        }
    }
    result.status = SolveStatus::Infeasible;
    result.states = static_cast<long>(nodes.size());
    result.wall_ms = elapsed_ms();
    return result;
}

std::optional<std::pair<int, int>> find_repeated_transition(const Traversal& x)
{
    int len = static_cast<int>(x.size());
    for (int i = 0; i + 1 < len; ++i)
        for (int j = i + 1; j + 1 < len; ++j)
            if (x[i].config == x[j].config && x[i + 1].config == x[j + 1].config) return std::make_pair(i, j);
    return std::nullopt;
}

Traversal z_transform(const Traversal& x, int i, int i2)
{
    int len = static_cast<int>(x.size());
    if (i < 0 || i >= i2 || i2 + 1 >= len || !(x[i].config == x[i2].config) || !(x[i + 1].config == x[i2 + 1].config))
        fail(ErrorKind::PreconditionViolated, "not a repeated transition");
    Traversal out(x.begin(), x.begin() + i + 1);
    for (int j = i2 - 1; j >= i + 1; --j) out.push_back(x[j]);
    // the walk back ends on x^{i+1} = x^{i'+1}, so continue after it
    out.insert(out.end(), x.begin() + i2 + 2, x.end());
    return out;
}

Traversal normalize_traversal(Traversal x)
{
    while (auto rep = find_repeated_transition(x)) x = z_transform(x, rep->first, rep->second);
    return x;
}

} // namespace mrfgc
