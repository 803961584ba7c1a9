#include "mrfgc/formation.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_set>

namespace mrfgc {

namespace {

    /// Per-vertex robot counts of one configuration, zero outside its support.
    class CountTable {
    public:
        CountTable(const Configuration& c, int type_count) : types_(type_count)
        {
            for (const auto& p : c.placements()) {
                auto [it, fresh] = slot_.emplace(p.vertex, static_cast<int>(counts_.size()));
                if (fresh) counts_.resize(counts_.size() + types_, 0);
                counts_[it->second + p.type] = p.count;
            }
            zero_.assign(types_, 0);
        }

        const int* at(Vertex v) const
        {
            auto it = slot_.find(v);
            return it == slot_.end() ? zero_.data() : counts_.data() + it->second;
        }

        bool same(Vertex v, const CountTable& other, Vertex w) const { return std::equal(at(v), at(v) + types_, other.at(w)); }

    private:
        int types_;
        std::unordered_map<Vertex, int> slot_;
        std::vector<int> counts_;
        std::vector<int> zero_;
    };

    std::string key_of_rows(std::vector<std::vector<int>> rows)
    {
        std::sort(rows.begin(), rows.end());
        std::ostringstream os;
        for (const auto& r : rows) {
            for (int x : r) os << x << ',';
            os << ';';
        }
        return os.str();
    }

    std::vector<int> counts_at(const Configuration& c, Vertex v, int types)
    {
        std::vector<int> out(types, 0);
        for (const auto& p : c.placements())
            if (p.vertex == v) out[p.type] = p.count;
        return out;
    }

    /// Pattern vertices ordered breadth-first from the occupied vertices so
    /// that the search is anchored by the tightly constrained ones.
    std::vector<Vertex> search_order(const Graph& pattern, const std::vector<char>& constrained)
    {
        int p = pattern.vertex_count();
        std::vector<Vertex> order;
        std::vector<char> seen(p, 0);
        for (Vertex s = 0; s < p; ++s) {
            if (!constrained[s] || seen[s]) continue;
            std::queue<Vertex> q;
            q.push(s);
            seen[s] = 1;
            while (!q.empty()) {
                Vertex u = q.front();
                q.pop();
                order.push_back(u);
                for (Vertex w : pattern.neighbors(u))
                    if (!seen[w]) {
                        seen[w] = 1;
                        q.push(w);
                    }
            }
        }
        for (Vertex v = 0; v < p; ++v)
            if (!seen[v]) order.push_back(v);
        return order;
    }

    bool is_cut_vertex(const Graph& g, Vertex u)
    {
        std::vector<Vertex> rest;
        for (Vertex v = 0; v < g.vertex_count(); ++v)
            if (v != u) rest.push_back(v);
        return !g.is_connected_subset(rest);
    }

    Configuration merged_into(const Configuration& c, Vertex from, Vertex to)
    {
        Configuration out;
        for (const auto& p : c.placements()) out.add(p.vertex == from ? to : p.vertex, p.type, p.count);
        return out;
    }

    bool max_flow_saturates(std::vector<std::vector<int>>& cap, int source, int sink, int demand)
    {
        int n = static_cast<int>(cap.size());
        int flow = 0;
        while (flow < demand) {
            std::vector<int> prev(n, -1);
            prev[source] = source;
            std::queue<int> q;
            q.push(source);
            while (!q.empty() && prev[sink] < 0) {
                int u = q.front();
                q.pop();
                for (int w = 0; w < n; ++w)
                    if (cap[u][w] > 0 && prev[w] < 0) {
                        prev[w] = u;
                        q.push(w);
                    }
            }
            if (prev[sink] < 0) return false;
            int push = demand - flow;
            for (int w = sink; w != source; w = prev[w]) push = std::min(push, cap[prev[w]][w]);
            for (int w = sink; w != source; w = prev[w]) {
                cap[prev[w]][w] -= push;
                cap[w][prev[w]] += push;
            }
            flow += push;
        }
        return true;
    }

} // namespace

void for_each_monomorphism(const Graph& pattern, const Graph& host, const VertexMap& pin,
                           const std::function<bool(Vertex, Vertex)>& compatible,
                           const std::function<bool(const VertexMap&)>& visit,
                           std::span<const Vertex> order)
{
    int p = pattern.vertex_count();
    int n = host.vertex_count();
    if (p > n) return;
    VertexMap map(p, -1);
    std::vector<char> used(n, 0);
    if (!pin.empty()) {
        if (static_cast<int>(pin.size()) != p) fail(ErrorKind::InvalidArgument, "pin size does not match pattern");
        for (Vertex v = 0; v < p; ++v) {
            if (pin[v] < 0) continue;
            if (pin[v] >= n) fail(ErrorKind::VertexOutOfRange, "pinned host vertex out of range");
            if (used[pin[v]]) return;
            if (compatible && !compatible(v, pin[v])) return;
            map[v] = pin[v];
            used[pin[v]] = 1;
        }
        for (auto [a, b] : pattern.edges())
            if (map[a] >= 0 && map[b] >= 0 && !host.has_edge(map[a], map[b])) return;
    }
    std::vector<Vertex> seq;
    if (order.empty()) {
        for (Vertex v = 0; v < p; ++v)
            if (map[v] < 0) seq.push_back(v);
    } else {
        for (Vertex v : order)
            if (map[v] < 0) seq.push_back(v);
    }

    std::function<bool(std::size_t)> step = [&](std::size_t i) -> bool {
        if (i == seq.size()) return visit(map);
        Vertex v = seq[i];
        Vertex anchor = -1;
        for (Vertex w : pattern.neighbors(v))
            if (map[w] >= 0) {
                anchor = map[w];
                break;
            }
        auto attempt = [&](Vertex h) -> bool {
            if (used[h]) return true;
            if (compatible && !compatible(v, h)) return true;
            for (Vertex w : pattern.neighbors(v))
                if (map[w] >= 0 && !host.has_edge(h, map[w])) return true;
            map[v] = h;
            used[h] = 1;
            bool go_on = step(i + 1);
            map[v] = -1;
            used[h] = 0;
            return go_on;
        };
        if (anchor >= 0) {
            for (Vertex h : host.neighbors(anchor))
                if (!attempt(h)) return false;
        } else {
            for (Vertex h = 0; h < n; ++h)
                if (!attempt(h)) return false;
        }
        return true;
    };
    step(0);
}

std::vector<VertexMap> find_monomorphisms(const Graph& pattern, const Graph& host, const VertexMap& pin)
{
    std::vector<VertexMap> out;
    for_each_monomorphism(pattern, host, pin, {}, [&](const VertexMap& m) {
        out.push_back(m);
        return true;
    });
    return out;
}

std::optional<std::vector<Move>> transport_plan(const Graph& g, const Configuration& source, const Configuration& target)
{
    int types = 0;
    for (const auto& p : source.placements()) types = std::max(types, p.type + 1);
    for (const auto& p : target.placements()) types = std::max(types, p.type + 1);
    std::vector<Move> moves;
    for (RobotType m = 0; m < types; ++m) {
        if (source.total_of(m) != target.total_of(m)) return std::nullopt;
        std::vector<Placement> from, to;
        for (const auto& p : source.placements())
            if (p.type == m) from.push_back(p);
        for (const auto& p : target.placements())
            if (p.type == m) to.push_back(p);
        if (from.empty()) continue;
        int a = static_cast<int>(from.size()), b = static_cast<int>(to.size());
        int src = a + b, sink = a + b + 1;
        std::vector<std::vector<int>> cap(a + b + 2, std::vector<int>(a + b + 2, 0));
        for (int i = 0; i < a; ++i) cap[src][i] = from[i].count;
        for (int j = 0; j < b; ++j) cap[a + j][sink] = to[j].count;
        for (int i = 0; i < a; ++i)
            for (int j = 0; j < b; ++j)
                if (from[i].vertex == to[j].vertex || g.has_edge(from[i].vertex, to[j].vertex)) cap[i][a + j] = source.total();
        auto residual = cap;
        if (!max_flow_saturates(residual, src, sink, source.total_of(m))) return std::nullopt;
        for (int i = 0; i < a; ++i)
            for (int j = 0; j < b; ++j) {
                int used = cap[i][a + j] - residual[i][a + j];
                if (cap[i][a + j] > 0 && used > 0) moves.push_back(Move{m, from[i].vertex, to[j].vertex, used});
            }
    }
    return moves;
}

TranspositionCheck validate_transposition(const Transposition& t)
{
    TranspositionCheck out;
    int n = t.pattern.vertex_count();
    if (t.source.max_vertex() >= n || t.target.max_vertex() >= n) {
        out.diagnostic = "placement outside the pattern graph";
        return out;
    }
    int types = 0;
    for (const auto& p : t.source.placements()) types = std::max(types, p.type + 1);
    for (const auto& p : t.target.placements()) types = std::max(types, p.type + 1);
    for (RobotType m = 0; m < types; ++m)
        if (t.source.total_of(m) != t.target.total_of(m)) {
            out.diagnostic = "robot totals differ for type " + std::to_string(m);
            return out;
        }
    auto plan = transport_plan(t.pattern, t.source, t.target);
    if (!plan) {
        out.diagnostic = "no assignment moves every robot along at most one edge";
        return out;
    }
    out.valid = true;
    out.moves = std::move(*plan);
    return out;
}

std::string canonical_key(const Graph& g, const std::vector<std::vector<int>>& labels)
{
    int m = g.vertex_count();
    std::vector<std::vector<int>> refined(labels);
    for (Vertex v = 0; v < m; ++v) refined[v].push_back(g.degree(v));
    std::vector<int> ord(m);
    std::iota(ord.begin(), ord.end(), 0);
    std::stable_sort(ord.begin(), ord.end(), [&](int a, int b) { return refined[a] < refined[b]; });
    std::ostringstream os;
    for (int v : ord) {
        for (int x : refined[v]) os << x << ',';
        os << ';';
    }
    if (m > 11) {
        os << "raw";
        for (auto [a, b] : g.edges()) os << ':' << a << '-' << b;
        return os.str();
    }
    std::vector<std::pair<int, int>> groups;
    for (int i = 0; i < m;) {
        int j = i;
        while (j < m && refined[ord[j]] == refined[ord[i]]) ++j;
        groups.emplace_back(i, j);
        i = j;
    }
    std::uint64_t best = ~std::uint64_t{0};
    std::vector<int> pos(m);
    std::function<void(std::size_t)> rec = [&](std::size_t gi) {
        if (gi == groups.size()) {
            for (int i = 0; i < m; ++i) pos[ord[i]] = i;
            std::uint64_t bits = 0;
            for (auto [a, b] : g.edges()) {
                int x = std::min(pos[a], pos[b]), y = std::max(pos[a], pos[b]);
                bits |= std::uint64_t{1} << (x * (2 * m - x - 1) / 2 + (y - x - 1));
            }
            best = std::min(best, bits);
            return;
        }
        auto [b, e] = groups[gi];
        std::sort(ord.begin() + b, ord.begin() + e);
        do {
            rec(gi + 1);
        } while (std::next_permutation(ord.begin() + b, ord.begin() + e));
    };
    rec(0);
    os << '|' << best;
    return os.str();
}

// ---------------------------------------------------------------- library

FormationLibrary::FormationLibrary(RobotTypes types, std::vector<Formation> formations, std::vector<Transposition> transpositions)
    : types_(std::move(types)), formations_(std::move(formations)), transpositions_(std::move(transpositions))
{
    int T = types_.type_count();
    for (int f = 0; f < static_cast<int>(formations_.size()); ++f) {
        const auto& form = formations_[f];
        if (form.pattern.vertex_count() == 0 || !form.pattern.is_connected())
            fail(ErrorKind::InvalidLibrary, "formation '" + form.name + "' has an empty or disconnected pattern");
        if (form.placement.max_vertex() >= form.pattern.vertex_count())
            fail(ErrorKind::InvalidLibrary, "formation '" + form.name + "' places robots outside its pattern");
        for (const auto& p : form.placement.placements())
            if (p.type >= T) fail(ErrorKind::InvalidLibrary, "formation '" + form.name + "' uses an unknown robot type");
        for (RobotType m = 0; m < T; ++m)
            if (form.placement.total_of(m) != types_.count(m))
                fail(ErrorKind::InvalidLibrary, "formation '" + form.name + "' does not place exactly " + std::to_string(types_.count(m)) + " robots of type '" + types_.name(m) + "'");
        formation_index_[placement_key(form.placement)].push_back(f);
    }
    for (int i = 0; i < static_cast<int>(transpositions_.size()); ++i) {
        auto& t = transpositions_[i];
        auto check = validate_transposition(t);
        if (!check.valid) fail(ErrorKind::InvalidLibrary, "transposition '" + t.name + "': " + check.diagnostic);
        t.moves = std::move(check.moves);
        auto src = forms(t.pattern, t.source, 1);
        if (src.empty()) fail(ErrorKind::InvalidLibrary, "transposition '" + t.name + "': source is in no formation's form");
        auto dst = forms(t.pattern, t.target, 1);
        if (dst.empty()) fail(ErrorKind::InvalidLibrary, "transposition '" + t.name + "': target is in no formation's form");
        t.source_formation = src.front().formation;
        t.source_embedding = src.front().embedding;
        t.target_formation = dst.front().formation;
        t.target_embedding = dst.front().embedding;
        source_index_[placement_key(t.source)].push_back({i, false});
        pair_index_[pair_key(t.source, t.target)].push_back({i, false});
        if (t.source != t.target) {
            source_index_[placement_key(t.target)].push_back({i, true});
            pair_index_[pair_key(t.target, t.source)].push_back({i, true});
        }
    }
}

std::string FormationLibrary::placement_key(const Configuration& c) const
{
    std::vector<std::vector<int>> rows;
    for (Vertex v : c.occupied()) rows.push_back(counts_at(c, v, types_.type_count()));
    return key_of_rows(std::move(rows));
}

std::string FormationLibrary::pair_key(const Configuration& a, const Configuration& b) const
{
    auto occ = a.occupied();
    for (Vertex v : b.occupied()) occ.push_back(v);
    std::sort(occ.begin(), occ.end());
    occ.erase(std::unique(occ.begin(), occ.end()), occ.end());
    std::vector<std::vector<int>> rows;
    for (Vertex v : occ) {
        auto row = counts_at(a, v, types_.type_count());
        auto rb = counts_at(b, v, types_.type_count());
        row.insert(row.end(), rb.begin(), rb.end());
        rows.push_back(std::move(row));
    }
    return key_of_rows(std::move(rows));
}

long FormationLibrary::representation_length() const
{
    long len = 0;
    auto graph_len = [](const Graph& g) { return static_cast<long>(g.vertex_count()) + 2L * g.edge_count(); };
    for (const auto& f : formations_) len += graph_len(f.pattern) + static_cast<long>(f.pattern.vertex_count()) * types_.type_count();
    for (const auto& t : transpositions_) len += graph_len(t.pattern) + 2L * t.pattern.vertex_count() * types_.type_count();
    return len;
}

int FormationLibrary::max_pattern_vertices() const
{
    int m = 0;
    for (const auto& f : formations_) m = std::max(m, f.pattern.vertex_count());
    return m;
}

int FormationLibrary::max_pattern_edges() const
{
    int m = 0;
    for (const auto& f : formations_) m = std::max(m, f.pattern.edge_count());
    return m;
}

std::vector<AnchoredConfiguration> FormationLibrary::forms_of(const Graph& host, const Configuration& config, int formation) const
{
    const auto& f = formations_.at(formation);
    std::vector<AnchoredConfiguration> out;
    if (placement_key(f.placement) != placement_key(config)) return out;
    int T = types_.type_count();
    CountTable host_counts(config, T), pattern_counts(f.placement, T);
    for_each_monomorphism(f.pattern, host, {},
                          [&](Vertex p, Vertex h) { return pattern_counts.same(p, host_counts, h); },
                          [&](const VertexMap& m) {
                              out.push_back(AnchoredConfiguration{config, formation, m});
                              return true;
                          });
    return out;
}

std::vector<AnchoredConfiguration> FormationLibrary::forms(const Graph& host, const Configuration& config, int limit) const
{
    std::vector<AnchoredConfiguration> out;
    if (config.max_vertex() >= host.vertex_count()) return out;
    auto it = formation_index_.find(placement_key(config));
    if (it == formation_index_.end()) return out;
    int T = types_.type_count();
    CountTable host_counts(config, T);
    for (int f : it->second) {
        const auto& form = formations_[f];
        CountTable pattern_counts(form.placement, T);
        std::vector<char> constrained(form.pattern.vertex_count(), 0);
        for (Vertex v : form.placement.occupied()) constrained[v] = 1;
        auto order = search_order(form.pattern, constrained);
        std::vector<VertexMap> maps;
        for_each_monomorphism(form.pattern, host, {},
                              [&](Vertex p, Vertex h) { return pattern_counts.same(p, host_counts, h); },
                              [&](const VertexMap& m) {
                                  maps.push_back(m);
                                  return limit < 0 || static_cast<int>(out.size() + maps.size()) < limit;
                              },
                              order);
        std::sort(maps.begin(), maps.end());
        for (auto& m : maps) out.push_back(AnchoredConfiguration{config, f, std::move(m)});
        if (limit >= 0 && static_cast<int>(out.size()) >= limit) break;
    }
    return out;
}

bool FormationLibrary::is_valid_transition(const Graph& host, const Configuration& a, const Configuration& b) const
{
    if (a.max_vertex() >= host.vertex_count() || b.max_vertex() >= host.vertex_count()) return false;
    auto it = pair_index_.find(pair_key(a, b));
    if (it == pair_index_.end()) return false;
    int T = types_.type_count();
    CountTable ca(a, T), cb(b, T);
    for (auto [index, reversed] : it->second) {
        const auto& t = transpositions_[index];
        const auto& s = reversed ? t.target : t.source;
        const auto& d = reversed ? t.source : t.target;
        CountTable ps(s, T), pd(d, T);
        std::vector<char> constrained(t.pattern.vertex_count(), 0);
        for (Vertex v : s.occupied()) constrained[v] = 1;
        for (Vertex v : d.occupied()) constrained[v] = 1;
        bool found = false;
        for_each_monomorphism(t.pattern, host, {},
                              [&](Vertex p, Vertex h) { return ps.same(p, ca, h) && pd.same(p, cb, h); },
                              [&](const VertexMap&) {
                                  found = true;
                                  return false;
                              },
                              search_order(t.pattern, constrained));
        if (found) return true;
    }
    return false;
}

std::vector<Configuration> FormationLibrary::successors(const Graph& host, const Configuration& a) const
{
    std::set<Configuration> out;
    auto it = source_index_.find(placement_key(a));
    if (it == source_index_.end() || a.max_vertex() >= host.vertex_count()) return {};
    int T = types_.type_count();
    CountTable ca(a, T);
    for (auto [index, reversed] : it->second) {
        const auto& t = transpositions_[index];
        const auto& s = reversed ? t.target : t.source;
        const auto& d = reversed ? t.source : t.target;
        CountTable ps(s, T);
        std::vector<char> constrained(t.pattern.vertex_count(), 0);
        for (Vertex v : s.occupied()) constrained[v] = 1;
        for_each_monomorphism(t.pattern, host, {},
                              [&](Vertex p, Vertex h) { return ps.same(p, ca, h); },
                              [&](const VertexMap& m) {
                                  out.insert(d.mapped(m));
                                  return true;
                              },
                              search_order(t.pattern, constrained));
    }
    return {out.begin(), out.end()};
}

std::vector<std::string> FormationLibrary::formation_keys() const
{
    std::vector<std::string> keys;
    for (const auto& f : formations_) {
        std::vector<std::vector<int>> labels;
        for (Vertex v = 0; v < f.pattern.vertex_count(); ++v) labels.push_back(counts_at(f.placement, v, types_.type_count()));
        keys.push_back(canonical_key(f.pattern, labels));
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    return keys;
}

namespace {
    std::string transposition_key(const Graph& pattern, const Configuration& s, const Configuration& d, int T)
    {
        auto one = [&](const Configuration& x, const Configuration& y) {
            std::vector<std::vector<int>> labels;
            for (Vertex v = 0; v < pattern.vertex_count(); ++v) {
                auto row = counts_at(x, v, T);
                auto other = counts_at(y, v, T);
                row.insert(row.end(), other.begin(), other.end());
                labels.push_back(std::move(row));
            }
            return canonical_key(pattern, labels);
        };
        return std::min(one(s, d), one(d, s));
    }
} // namespace

std::vector<std::string> FormationLibrary::transposition_keys() const
{
    std::vector<std::string> keys;
    for (const auto& t : transpositions_) keys.push_back(transposition_key(t.pattern, t.source, t.target, types_.type_count()));
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    return keys;
}

// ---------------------------------------------------------------- backends

namespace {

    class ImplicitConnected final : public ConstraintBackend {
    public:
        explicit ImplicitConnected(RobotTypes types) : types_(std::move(types)) {}

        bool is_explicit() const override { return false; }
        const RobotTypes& types() const override { return types_; }

        std::optional<AnchoredConfiguration> anchor(const Graph& g, const Configuration& c) const override
        {
            if (c.max_vertex() >= g.vertex_count()) return std::nullopt;
            for (const auto& p : c.placements())
                if (p.type >= types_.type_count()) return std::nullopt;
            for (RobotType m = 0; m < types_.type_count(); ++m)
                if (c.total_of(m) != types_.count(m)) return std::nullopt;
            auto occ = c.occupied();
            if (!g.is_connected_subset(occ)) return std::nullopt;
            return AnchoredConfiguration{c, -1, occ};
        }

        bool is_valid_transition(const Graph& g, const Configuration& a, const Configuration& b) const override
        {
            return anchor(g, a) && anchor(g, b) && transport_plan(g, a, b).has_value();
        }

        std::vector<Configuration> successors(const Graph& g, const Configuration& a) const override
        {
            std::set<Configuration> out;
            auto placements = a.placements();
            Configuration work;
            std::function<void(std::size_t)> place = [&](std::size_t i) {
                if (i == placements.size()) {
                    if (g.is_connected_subset(work.occupied())) out.insert(work);
                    return;
                }
                const auto& p = placements[i];
                std::vector<Vertex> spots{p.vertex};
                for (Vertex w : g.neighbors(p.vertex)) spots.push_back(w);
                // distribute p.count robots over spots
                std::function<void(std::size_t, int)> spread = [&](std::size_t s, int left) {
                    if (s + 1 == spots.size()) {
                        work.add(spots[s], p.type, left);
                        place(i + 1);
                        work.add(spots[s], p.type, -left);
                        return;
                    }
                    for (int c = left; c >= 0; --c) {
                        work.add(spots[s], p.type, c);
                        spread(s + 1, left - c);
                        work.add(spots[s], p.type, -c);
                    }
                };
                spread(0, p.count);
            };
            place(0);
            return {out.begin(), out.end()};
        }

        Graph pattern_of(const Graph& g, const AnchoredConfiguration& a) const override
        {
            auto act = a.embedding.empty() ? a.config.occupied() : a.embedding;
            return g.induced_subgraph(act);
        }

    private:
        RobotTypes types_;
    };

    class ExplicitLibrary final : public ConstraintBackend {
    public:
        explicit ExplicitLibrary(FormationLibrary lib) : lib_(std::move(lib)) {}

        bool is_explicit() const override { return true; }
        const RobotTypes& types() const override { return lib_.types(); }

        std::optional<AnchoredConfiguration> anchor(const Graph& g, const Configuration& c) const override
        {
            auto f = lib_.forms(g, c, 1);
            if (f.empty()) return std::nullopt;
            return f.front();
        }

        bool is_valid_transition(const Graph& g, const Configuration& a, const Configuration& b) const override
        {
            return lib_.is_valid_transition(g, a, b);
        }

        std::vector<Configuration> successors(const Graph& g, const Configuration& a) const override { return lib_.successors(g, a); }
        const FormationLibrary* library() const override { return &lib_; }

        Graph pattern_of(const Graph&, const AnchoredConfiguration& a) const override { return lib_.formations().at(a.formation).pattern; }

    private:
        FormationLibrary lib_;
    };

} // namespace

BackendPtr make_implicit_backend(const RobotTypes& types) { return std::make_shared<ImplicitConnected>(types); }
BackendPtr make_explicit_backend(FormationLibrary library) { return std::make_shared<ExplicitLibrary>(std::move(library)); }

bool is_valid_configuration(const ConstraintBackend& backend, const Graph& g, const Configuration& c) { return backend.anchor(g, c).has_value(); }

bool is_valid_transition(const ConstraintBackend& backend, const Graph& g, const AnchoredConfiguration& a, const AnchoredConfiguration& b)
{
    return backend.is_valid_transition(g, a.config, b.config);
}

std::vector<AnchoredConfiguration> enumerate_transitions(const ConstraintBackend& backend, const Graph& g, const AnchoredConfiguration& a)
{
    std::vector<AnchoredConfiguration> out;
    for (auto& c : backend.successors(g, a.config)) {
        auto anchored = backend.anchor(g, c);
        if (!anchored) fail(ErrorKind::Internal, "successor without a formation witness");
        out.push_back(std::move(*anchored));
    }
    return out;
}

std::vector<AnchoredConfiguration> is_in_form(const Configuration& config, const Formation& f, const Graph& host)
{
    int T = 0;
    for (const auto& p : f.placement.placements()) T = std::max(T, p.type + 1);
    for (const auto& p : config.placements()) T = std::max(T, p.type + 1);
    std::vector<AnchoredConfiguration> out;
    if (config.total() != f.placement.total() || config.occupied().size() != f.placement.occupied().size()) return out;
    CountTable host_counts(config, T), pattern_counts(f.placement, T);
    for_each_monomorphism(f.pattern, host, {},
                          [&](Vertex p, Vertex h) { return pattern_counts.same(p, host_counts, h); },
                          [&](const VertexMap& m) {
                              out.push_back(AnchoredConfiguration{config, -1, m});
                              return true;
                          });
    return out;
}

// ---------------------------------------------------------------- collapsibility

namespace {

    struct MergeProbe {
        int formation;
        Vertex from;
        Vertex to;
        Configuration merged;
    };

    /// Every merge (robots of a non-cut occupied vertex onto a neighbour) of
    /// every formation pattern.
    std::vector<MergeProbe> merge_probes(const FormationLibrary& lib)
    {
        std::vector<MergeProbe> out;
        for (int f = 0; f < static_cast<int>(lib.formations().size()); ++f) {
            const auto& form = lib.formations()[f];
            for (Vertex u = 0; u < form.pattern.vertex_count(); ++u) {
                if (form.placement.count_at(u) == 0 || is_cut_vertex(form.pattern, u)) continue;
                for (Vertex v : form.pattern.neighbors(u)) out.push_back({f, u, v, merged_into(form.placement, u, v)});
            }
        }
        return out;
    }

    bool probe_holds(const FormationLibrary& lib, const MergeProbe& probe)
    {
        const auto& form = lib.formations()[probe.formation];
        return !lib.forms(form.pattern, probe.merged, 1).empty() && lib.is_valid_transition(form.pattern, form.placement, probe.merged);
    }

} // namespace

bool is_collapsible(const FormationLibrary& lib)
{
    for (const auto& probe : merge_probes(lib))
        if (!probe_holds(lib, probe)) return false;
    return true;
}

bool is_collapsible(const ConstraintBackend& backend)
{
    if (!backend.is_explicit()) return true;
    return is_collapsible(*backend.library());
}

FormationLibrary collapsible_closure(const FormationLibrary& lib)
{
    FormationLibrary current = lib;
    int T = lib.types().type_count();
    for (;;) {
        auto formations = current.formations();
        auto transpositions = current.transpositions();
        auto fkeys_vec = current.formation_keys();
        std::set<std::string> fkeys(fkeys_vec.begin(), fkeys_vec.end());
        std::set<std::string> tkeys;
        for (const auto& t : transpositions) tkeys.insert(transposition_key(t.pattern, t.source, t.target, T));
        bool changed = false;
        for (const auto& probe : merge_probes(current)) {
            if (probe_holds(current, probe)) continue;
            const auto& form = current.formations()[probe.formation];
            if (current.forms(form.pattern, probe.merged, 1).empty()) {
                std::vector<Vertex> keep;
                for (Vertex v = 0; v < form.pattern.vertex_count(); ++v)
                    if (v != probe.from) keep.push_back(v);
                Graph sub = form.pattern.induced_subgraph(keep);
                std::vector<Vertex> relabel(form.pattern.vertex_count(), -1);
                for (int i = 0; i < static_cast<int>(keep.size()); ++i) relabel[keep[i]] = i;
                Formation nf{form.name + "/" + std::to_string(probe.from), sub, probe.merged.mapped(relabel)};
                std::vector<std::vector<int>> labels;
                for (Vertex v = 0; v < sub.vertex_count(); ++v) labels.push_back(counts_at(nf.placement, v, T));
                if (fkeys.insert(canonical_key(sub, labels)).second) formations.push_back(std::move(nf));
            }
            auto key = transposition_key(form.pattern, form.placement, probe.merged, T);
            if (tkeys.insert(key).second) {
                Transposition t;
                t.name = "collapse:" + form.name + ":" + std::to_string(probe.from) + ">" + std::to_string(probe.to);
                t.pattern = form.pattern;
                t.source = form.placement;
                t.target = probe.merged;
                transpositions.push_back(std::move(t));
            }
            changed = true;
        }
        if (!changed) return current;
        current = FormationLibrary(lib.types(), std::move(formations), std::move(transpositions));
    }
}

// ---------------------------------------------------------------- connectivity library

FormationLibrary generate_connectivity_library(const RobotTypes& types, int bound)
{
    int k = types.total();
    if (k > bound) fail(ErrorKind::InvalidArgument, "k=" + std::to_string(k) + " exceeds the connectivity library bound " + std::to_string(bound));
    int T = types.type_count();
    std::vector<RobotType> robots;
    for (RobotType m = 0; m < T; ++m)
        for (int i = 0; i < types.count(m); ++i) robots.push_back(m);

    auto labels_of = [&](int m, const Configuration& a) {
        std::vector<std::vector<int>> labels;
        for (Vertex v = 0; v < m; ++v) labels.push_back(counts_at(a, v, T));
        return labels;
    };

    // Formations: every connected graph on <= k vertices with every vertex occupied.
    std::vector<Formation> formations;
    std::set<std::string> seen;
    for (int m = 1; m <= k; ++m) {
        std::vector<Edge> all_pairs;
        for (int a = 0; a < m; ++a)
            for (int b = a + 1; b < m; ++b) all_pairs.emplace_back(a, b);
        std::vector<Vertex> spot(k, 0);
        std::function<void(int, int)> assign = [&](int i, int used) {
            if (i == k) {
                if (used != m) return;
                Configuration c;
                for (int r = 0; r < k; ++r) c.add(spot[r], robots[r], 1);
                for (std::uint32_t mask = 0; mask < (1u << all_pairs.size()); ++mask) {
                    std::vector<Edge> edges;
                    for (std::size_t e = 0; e < all_pairs.size(); ++e)
                        if (mask >> e & 1u) edges.push_back(all_pairs[e]);
                    Graph g(m, edges);
                    if (!g.is_connected()) continue;
                    if (seen.insert(canonical_key(g, labels_of(m, c))).second)
                        formations.push_back(Formation{"f" + std::to_string(formations.size()), g, c});
                }
                return;
            }
            for (Vertex v = 0; v <= std::min(used, m - 1); ++v) {
                spot[i] = v;
                assign(i + 1, std::max(used, v + 1));
            }
        };
        assign(0, 0);
    }

    // Transpositions: edge-minimal pattern graphs carrying a one-step move
    // between two connected placements.
    std::vector<Transposition> transpositions;
    std::set<std::string> tseen;
    std::vector<Vertex> src(k), dst(k);

    auto spanning_trees = [](const std::vector<Vertex>& vs) {
        std::vector<std::vector<Edge>> out;
        int s = static_cast<int>(vs.size());
        if (s <= 1) return std::vector<std::vector<Edge>>{{}};
        std::vector<Edge> pairs;
        for (int a = 0; a < s; ++a)
            for (int b = a + 1; b < s; ++b) pairs.emplace_back(vs[a], vs[b]);
        int need = s - 1;
        std::vector<int> pick(pairs.size(), 0);
        std::fill(pick.end() - need, pick.end(), 1);
        do {
            std::vector<Edge> edges;
            for (std::size_t e = 0; e < pairs.size(); ++e)
                if (pick[e]) edges.push_back(pairs[e]);
            // connected iff acyclic with s-1 edges: union-find
            std::map<Vertex, Vertex> parent;
            for (Vertex v : vs) parent[v] = v;
            std::function<Vertex(Vertex)> find = [&](Vertex x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
            bool ok = true;
            for (auto [a, b] : edges) {
                Vertex ra = find(a), rb = find(b);
                if (ra == rb) {
                    ok = false;
                    break;
                }
                parent[ra] = rb;
            }
            if (ok) out.push_back(std::move(edges));
        } while (std::next_permutation(pick.begin(), pick.end()));
        return out;
    };

    auto emit = [&](int m) {
        Configuration a, b;
        std::set<Edge> moves;
        for (int r = 0; r < k; ++r) {
            a.add(src[r], robots[r], 1);
            b.add(dst[r], robots[r], 1);
            if (src[r] != dst[r]) moves.insert({std::min(src[r], dst[r]), std::max(src[r], dst[r])});
        }
        auto occ_a = a.occupied(), occ_b = b.occupied();
        for (const auto& ta : spanning_trees(occ_a))
            for (const auto& tb : spanning_trees(occ_b)) {
                std::set<Edge> es(moves);
                es.insert(ta.begin(), ta.end());
                es.insert(tb.begin(), tb.end());
                std::vector<Edge> edges(es.begin(), es.end());
                auto works = [&](const std::vector<Edge>& e) {
                    Graph h(m, e);
                    return h.is_connected_subset(occ_a) && h.is_connected_subset(occ_b) && transport_plan(h, a, b).has_value();
                };
                bool minimal = true;
                for (std::size_t drop = 0; drop < edges.size() && minimal; ++drop) {
                    auto fewer = edges;
                    fewer.erase(fewer.begin() + static_cast<long>(drop));
                    if (works(fewer)) minimal = false;
                }
                if (!minimal) continue;
                Graph h(m, edges);
                if (!tseen.insert(transposition_key(h, a, b, T)).second) continue;
                Transposition t;
                t.name = "t" + std::to_string(transpositions.size());
                t.pattern = std::move(h);
                t.source = a;
                t.target = b;
                transpositions.push_back(std::move(t));
            }
    };

    std::function<void(int, int)> choose = [&](int r, int used) {
        if (r == k) {
            emit(used);
            return;
        }
        for (Vertex s = 0; s <= used; ++s) {
            int u1 = std::max(used, s + 1);
            src[r] = s;
            for (Vertex d = 0; d <= u1; ++d) {
                dst[r] = d;
                choose(r + 1, std::max(u1, d + 1));
            }
        }
    };
    choose(0, 0);

    return FormationLibrary(types, std::move(formations), std::move(transpositions));
}

// ---------------------------------------------------------------- regrouping

Traversal regroup_sequence(const ConstraintBackend& backend, const Graph& g, const AnchoredConfiguration& a, Vertex target)
{
    auto act = a.active();
    if (!std::binary_search(act.begin(), act.end(), target)) fail(ErrorKind::PreconditionViolated, "regroup target is not an active vertex");
    if (!is_collapsible(backend)) fail(ErrorKind::NonCollapsible, "regrouping needs a collapsible formation library");
    Graph pattern = backend.pattern_of(g, a);
    VertexMap embed = a.embedding.empty() ? a.config.occupied() : a.embedding;
    int p = pattern.vertex_count();
    Vertex root = static_cast<Vertex>(std::find(embed.begin(), embed.end(), target) - embed.begin());
    std::vector<int> depth(p, -1), parent(p, -1);
    std::queue<Vertex> q;
    q.push(root);
    depth[root] = 0;
    int max_depth = 0;
    while (!q.empty()) {
        Vertex u = q.front();
        q.pop();
        for (Vertex w : pattern.neighbors(u))
            if (depth[w] < 0) {
                depth[w] = depth[u] + 1;
                parent[w] = u;
                max_depth = std::max(max_depth, depth[w]);
                q.push(w);
            }
    }
    Traversal out;
    Configuration current = a.config;
    auto step_to = [&](const Configuration& next) {
        if (!backend.is_valid_transition(g, current, next)) return false;
        auto anchored = backend.anchor(g, next);
        if (!anchored) return false;
        out.push_back(std::move(*anchored));
        current = next;
        return true;
    };
    for (int d = max_depth; d >= 1; --d) {
        std::vector<Vertex> layer;
        for (Vertex u = 0; u < p; ++u)
            if (depth[u] == d && current.count_at(embed[u]) > 0) layer.push_back(u);
        if (layer.empty()) continue;
        Configuration all = current;
        for (Vertex u : layer) all = merged_into(all, embed[u], embed[parent[u]]);
        if (layer.size() > 1 && step_to(all)) continue;
        for (Vertex u : layer) {
            if (!step_to(merged_into(current, embed[u], embed[parent[u]])))
                fail(ErrorKind::NonCollapsible, "contraction step rejected by the backend");
        }
    }
    return out;
}

namespace {
    struct LibraryStats {
        int edges;
        int vertices;
        int count;
    };

    LibraryStats stats_for(const ConstraintBackend& backend)
    {
        if (const auto* lib = backend.library())
            return {lib->max_pattern_edges(), lib->max_pattern_vertices(), static_cast<int>(lib->formations().size())};
        int k = backend.types().total();
        if (k <= kConnectivityLibraryBound) {
            auto lib = generate_connectivity_library(backend.types());
            return {lib.max_pattern_edges(), lib.max_pattern_vertices(), static_cast<int>(lib.formations().size())};
        }
        return {k * (k - 1) / 2, k, -1};
    }
} // namespace

int max_formation_edges(const ConstraintBackend& backend) { return stats_for(backend).edges; }
int max_formation_vertices(const ConstraintBackend& backend) { return stats_for(backend).vertices; }
int formation_count(const ConstraintBackend& backend) { return stats_for(backend).count; }

} // namespace mrfgc
