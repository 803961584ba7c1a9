#include "mrfgc/fpt.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>

namespace mrfgc {

namespace {
    constexpr Symbol kNone = -9;
    constexpr Symbol kArrow = -3;
    // a run an open segment may still insert; costs nothing unless it covers
    constexpr Symbol kGap = -4;
    constexpr long kMaxDistanceTable = 8000;
} // namespace

FptSolver::FptSolver(const Instance& inst, NiceTreeDecomposition d, FptOptions options) : inst_(inst), d_(std::move(d)), options_(options)
{
    check_instance(inst_);
    if (d_.vertex_count() != inst_.graph.vertex_count()) fail(ErrorKind::InvalidDecomposition, "decomposition is for a different vertex count");
    auto report = validate_decomposition(inst_.graph, d_);
    if (!report.ok()) fail(ErrorKind::InvalidDecomposition, report.problems.front());
    space_ = std::make_unique<ConfigSpace>(inst_, options_.max_configs);
    if (space_->size() > kMaxDistanceTable)
        fail(ErrorKind::BudgetExceeded, "configuration space of " + std::to_string(space_->size()) + " is too large for the distance table");
    dist_ = std::make_unique<ConfigDistances>(*space_);

    int n = inst_.graph.vertex_count();
    in_bag_.assign(d_.size(), std::vector<char>(n, 0));
    in_up_.assign(d_.size(), std::vector<char>(n, 0));
    in_down_.assign(d_.size(), std::vector<char>(n, 0));
    for (int j = 0; j < d_.size(); ++j) {
        for (Vertex v : d_.bag(j).vertices) in_bag_[j][v] = 1;
        for (Vertex v : d_.v_up(j)) in_up_[j][v] = 1;
        for (Vertex v : d_.v_down(j)) in_down_[j][v] = 1;
    }
    activates_.assign(space_->size(), std::vector<char>(n, 0));
    for (int c = 0; c < space_->size(); ++c)
        for (Vertex v : space_->active(c)) activates_[c][v] = 1;
}

FptSolver::Side FptSolver::side_of(int config, int j) const
{
    bool up = false;
    for (Vertex v : space_->active(config)) {
        if (in_bag_[j][v]) return Side::Bag;
        up |= in_up_[j][v] != 0;
    }
    return up ? Side::Up : Side::Down;
}

bool FptSolver::touches(int config, std::span<const Vertex> a) const
{
    for (Vertex v : a)
        if (activates_[config][v]) return true;
    return false;
}

std::vector<int> FptSolver::ids_of(const Traversal& x) const
{
    std::vector<int> out;
    for (const auto& a : x) {
        auto id = space_->find(a.config);
        if (!id) fail(ErrorKind::InvalidArgument, "traversal leaves the reachable configuration space");
        out.push_back(*id);
    }
    return out;
}

Pattern FptSolver::condense(const Pattern& p)
{
    Pattern out;
    for (Symbol s : p)
        if (out.empty() || out.back() != s) out.push_back(s);
    return out;
}

Pattern FptSolver::project(const std::vector<int>& x, int j) const
{
    Pattern out;
    for (int c : x) {
        switch (side_of(c, j)) {
        case Side::Bag: out.push_back(c); break;
        case Side::Up: out.push_back(kUp); break;
        case Side::Down: out.push_back(kDown); break;
        }
    }
    return condense(out);
}

Pattern FptSolver::reduce(const Pattern& p, std::span<const Vertex> a) const
{
    Pattern out;
    for (Symbol s : p) out.push_back(s >= 0 && !touches(s, a) ? kUp : s);
    return condense(out);
}

Pattern FptSolver::lift(const Pattern& p, std::span<const Vertex> a) const
{
    Pattern out;
    for (Symbol s : p) out.push_back(s >= 0 && !touches(s, a) ? kDown : s);
    return condense(out);
}

bool FptSolver::combines(const Pattern& x, const Pattern& y, const Pattern& z)
{
    if (x.size() != y.size() || x.size() != z.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == kDown) {
            if (!((y[i] == kDown && z[i] == kUp) || (y[i] == kUp && z[i] == kDown))) return false;
        } else if (y[i] != x[i] || z[i] != x[i]) {
            return false;
        }
    }
    return true;
}

Pattern FptSolver::partial_traversal(const std::vector<int>& x, int j) const
{
    Pattern out;
    for (int c : x) out.push_back(side_of(c, j) == Side::Up ? kUp : c);
    return condense(out);
}

long FptSolver::partial_cost(const Pattern& partial, int j) const
{
    long cost = 0;
    for (Symbol s : partial)
        if (s >= 0 && side_of(s, j) == Side::Down) ++cost;
    return cost;
}

bool FptSolver::in_pattern_space(int j, const Pattern& p) const
{
    if (p.empty()) return false;
    int x0 = space_->start();
    auto xf = space_->end();
    std::vector<std::pair<int, int>> seen;
    for (std::size_t i = 0; i < p.size(); ++i) {
        Symbol s = p[i];
        if (s >= space_->size() || s < kDown) return false;
        if (i > 0 && p[i - 1] == s) return false;
        if (s == kUp && j == d_.root()) return false;
        if (s < 0) continue;
        if (side_of(s, j) != Side::Bag) return false;
        if (i > 0 && p[i - 1] >= 0) {
            if (dist_->between(p[i - 1], s) != 1) return false;
            std::pair<int, int> t{p[i - 1], s};
            if (std::find(seen.begin(), seen.end(), t) != seen.end()) return false;
            seen.push_back(t);
        }
    }
    if (side_of(x0, j) == Side::Bag && p.front() != x0) return false;
    if (xf && side_of(*xf, j) == Side::Bag && p.back() != *xf) return false;
    return true;
}

std::vector<Pattern> FptSolver::enumerate_patterns(int j, int max_length, long budget) const
{
    std::vector<Symbol> alphabet;
    for (int c = 0; c < space_->size(); ++c)
        if (side_of(c, j) == Side::Bag) alphabet.push_back(c);
    alphabet.push_back(kDown);
    if (j != d_.root()) alphabet.push_back(kUp);
    int x0 = space_->start();
    bool pinned_start = side_of(x0, j) == Side::Bag;
    std::vector<Pattern> out;
    Pattern cur;
    std::vector<std::pair<int, int>> pairs;
    std::function<void()> grow = [&] {
        if (!cur.empty() && in_pattern_space(j, cur)) {
            out.push_back(cur);
            if (static_cast<long>(out.size()) > budget) fail(ErrorKind::BudgetExceeded, "pattern enumeration exceeds its budget");
        }
        if (static_cast<int>(cur.size()) == max_length) return;
        for (Symbol s : alphabet) {
            if (cur.empty() && pinned_start && s != x0) continue;
            if (!cur.empty() && cur.back() == s) continue;
            bool pushed_pair = false;
            if (s >= 0 && !cur.empty() && cur.back() >= 0) {
                if (dist_->between(cur.back(), s) != 1) continue;
                std::pair<int, int> t{cur.back(), s};
                if (std::find(pairs.begin(), pairs.end(), t) != pairs.end()) continue;
                pairs.push_back(t);
                pushed_pair = true;
            }
            cur.push_back(s);
            grow();
            cur.pop_back();
            if (pushed_pair) pairs.pop_back();
        }
    };
    grow();
    return out;
}

double FptSolver::length_bound() const
{
    const auto& backend = *inst_.backend;
    int count = formation_count(backend);
    if (count < 0) return std::numeric_limits<double>::infinity();
    double d = inst_.graph.max_degree();
    double spread = std::pow(d, max_formation_vertices(backend));
    double f = count * spread;
    double g = 2.0 * (count * (count - 1) / 2.0) * spread;
    return f * g * (d_.width() + 1);
}

bool FptSolver::admissible(int j, const Pattern& p, long cost, long limit, bool complete) const
{
    int x0 = space_->start();
    int xf = *space_->end();
    auto expect = [&](int c) -> Symbol {
        switch (side_of(c, j)) {
        case Side::Bag: return c;
        case Side::Up: return kUp;
        default: return kDown;
        }
    };
    if (p.empty() || p.front() != expect(x0) || (complete && p.back() != expect(xf))) return false;
    int n = inst_.graph.vertex_count();
    const auto& up = in_up_[j];
    const auto& down = in_down_[j];
    bool any_up = std::find(up.begin(), up.end(), 1) != up.end();
    bool any_down = std::find(down.begin(), down.end(), 1) != down.end();
    if (!complete && !any_up) return true;
    std::vector<char> covered(n, 0);
    long explicit_entries = 0;
    int len = static_cast<int>(p.size());
    for (int i = 0; i < len; ++i) {
        Symbol s = p[i];
        if (s == kGap) continue;
        if (s == kUp) {
            if (!any_up) return false;
            if ((i > 0 && p[i - 1] == kDown) || (i + 1 < len && p[i + 1] == kDown)) return false;
        } else if (s == kDown) {
            if (!any_down) return false;
        } else {
            ++explicit_entries;
            for (Vertex v : space_->occupied(s)) covered[v] = 1;
        }
    }
    if (complete)
        for (Vertex v : d_.bag(j).vertices)
            if (!covered[v]) return false;

    struct Run {
        int a, b;
        long base;
        int adjust; // path length to configurations strictly inside the run
    };
    std::vector<Run> runs;
    long lb = cost + explicit_entries;
    for (int i = 0; i < len; ++i) {
        if (p[i] != kUp && p[i] != kGap) continue;
        int a = i > 0 ? p[i - 1] : -1;
        int b = i + 1 < len ? p[i + 1] : -1;
        int adjust = a >= 0 && b >= 0 ? -1 : a < 0 && b < 0 ? 1 : 0;
        if (p[i] == kGap) {
            runs.push_back({a, b, 0, adjust});
            continue;
        }
        int dd = dist_->between(a >= 0 ? a : x0, b >= 0 ? b : xf);
        if (dd < 0) return false;
        long base;
        if (a >= 0 && b >= 0) base = std::max(1, dd - 1);
        else if (a < 0 && b < 0) base = dd + 1;
        else base = std::max(1, dd);
        runs.push_back({a, b, base, adjust});
        lb += base;
    }
    if (lb > limit) return false;

    // Every up vertex left uncovered must be visited by some run. A run pays
    // at least the detour of each vertex it takes and, for two of them, the way
    // from a cover of one to a cover of the other.
    int r_count = static_cast<int>(runs.size());
    constexpr long kNever = std::numeric_limits<long>::max();
    std::vector<Vertex> need;
    std::vector<std::vector<int>> to_a, to_b; // per need, per run
    std::vector<std::vector<long>> single;
    long slack = limit - lb;
    for (Vertex u = 0; u < n; ++u) {
        if (!up[u] || covered[u]) continue;
        std::vector<int> ra(r_count, -1), rb(r_count, -1);
        std::vector<long> row(r_count, kNever);
        long best = kNever;
        for (int r = 0; r < r_count; ++r) {
            const auto& run = runs[r];
            ra[r] = dist_->to_cover(run.a >= 0 ? run.a : x0, u);
            rb[r] = dist_->to_cover(run.b >= 0 ? run.b : xf, u);
            if (ra[r] < 0 || rb[r] < 0) continue;
            row[r] = std::max(0L, ra[r] + rb[r] + run.adjust - run.base);
            best = std::min(best, row[r]);
        }
        if (best > slack) return false;
        need.push_back(u);
        to_a.push_back(std::move(ra));
        to_b.push_back(std::move(rb));
        single.push_back(std::move(row));
    }
    if (need.empty()) return true;

    auto pair_cost = [&](int i, int k, int r) -> long {
        int between = dist_->cover_to_cover(need[i], need[k]);
        if (between < 0) return kNever;
        long via = std::min(to_a[i][r] + between + to_b[k][r], to_a[k][r] + between + to_b[i][r]);
        return std::max(0L, via + runs[r].adjust - runs[r].base);
    };
    std::vector<int> owner(need.size(), -1);
    std::vector<long> charge(r_count, 0);
    long effort = 4096;
    // assigns needs in order; gives up (admits) after a fixed effort
    std::function<bool(std::size_t, long)> fits = [&](std::size_t i, long budget) -> bool {
        if (--effort < 0) return true;
        if (i == need.size()) return true;
        for (int r = 0; r < r_count; ++r) {
            if (single[i][r] == kNever) continue;
            long c = std::max(charge[r], single[i][r]);
            for (std::size_t k = 0; k < i && c - charge[r] <= budget; ++k)
                if (owner[k] == r) c = std::max(c, pair_cost(static_cast<int>(i), static_cast<int>(k), r));
            long inc = c - charge[r];
            if (inc > budget) continue;
            long old = charge[r];
            charge[r] = c;
            owner[i] = r;
            bool ok = fits(i + 1, budget - inc);
            charge[r] = old;
            owner[i] = -1;
            if (ok) return true;
        }
        return false;
    };
    return fits(0, slack);
}

void FptSolver::insert(int j, Pattern p, long cost, int left, int right)
{
    auto& rows = tables_[j];
    auto [it, fresh] = index_[j].try_emplace(p, static_cast<int>(rows.size()));
    if (!fresh) {
        auto& row = rows[it->second];
        if (cost < row.cost) {
            row.cost = cost;
            row.left = left;
            row.right = right;
        }
        return;
    }
    rows.push_back(Row{std::move(p), cost, left, right});
    if (++row_count_ > options_.max_rows) fail(ErrorKind::BudgetExceeded, "signature tables exceed " + std::to_string(options_.max_rows) + " rows");
}

void FptSolver::introduce(int j, long limit)
{
    const auto& bag = d_.bag(j);
    int child = bag.children[0];
    Vertex v = bag.vertex;
    const auto& below = d_.bag(child).vertices;
    std::vector<Symbol> choices{kUp};
    for (int c = 0; c < space_->size(); ++c)
        if (activates_[c][v] && !touches(c, below)) choices.push_back(c);
    int x0 = space_->start();
    auto expect = [&](int c) -> Symbol {
        switch (side_of(c, j)) {
        case Side::Bag: return c;
        case Side::Up: return kUp;
        default: return kDown;
        }
    };
    // admissible() demands these at both ends; checking early keeps the search small
    const Symbol first = expect(x0), last = expect(*space_->end());

    const auto& rows = tables_[child];
    for (int ri = 0; ri < static_cast<int>(rows.size()); ++ri) {
        const Pattern& src = rows[ri].pattern;
        const long cost = rows[ri].cost;
        int len = static_cast<int>(src.size());
        std::vector<long> rest(len + 1, 0);
        for (int i = len - 1; i >= 0; --i) rest[i] = rest[i + 1] + (src[i] != kDown);

        Pattern out;
        std::vector<std::pair<int, int>> pairs;
        long explicit_entries = 0, closed = 0;
        struct Undo {
            long explicit_entries, closed;
            std::size_t pairs;
        };
        auto push = [&](Symbol s, Undo& u) -> bool {
            u = {explicit_entries, closed, pairs.size()};
            Symbol prev = out.empty() ? kNone : out.back();
            if (prev == kNone && s != first) return false;
            if (prev == s) return false;
            if ((s == kUp && prev == kDown) || (s == kDown && prev == kUp)) return false;
            if (s >= 0) {
                if (prev >= 0) {
                    if (dist_->between(prev, s) != 1) return false;
                    std::pair<int, int> t{prev, s};
                    if (std::find(pairs.begin(), pairs.end(), t) != pairs.end()) return false;
                    pairs.push_back(t);
                } else if (prev == kUp) {
                    int a = out.size() >= 2 ? out[out.size() - 2] : -1;
                    int dd = dist_->between(a >= 0 ? a : x0, s);
                    if (dd < 0) return false;
                    closed += a >= 0 ? std::max(1, dd - 1) : std::max(1, dd);
                }
                ++explicit_entries;
            }
            out.push_back(s);
            return true;
        };
        auto pop = [&](const Undo& u) {
            out.pop_back();
            explicit_entries = u.explicit_entries;
            closed = u.closed;
            pairs.resize(u.pairs);
        };
        // while expanding a final up-run that must end on an explicit x_f, the way there;
        // -1 elsewhere
        auto tail = [&](int p) -> long {
            Symbol b = out.back();
            if (p != len - 1 || src[p] != kUp || last < 0) return -1;
            if (b == last) return 0;
            if (b >= 0) {
                int dd = dist_->between(b, last);
                return dd < 0 ? limit + 1 : dd;
            }
            if (b != kUp) return 1;
            int a = out.size() >= 2 ? out[out.size() - 2] : -1;
            int dd = dist_->between(a >= 0 ? a : x0, last);
            if (dd < 0) return limit + 1;
            return (a >= 0 ? std::max(1, dd - 1) : std::max(1, dd)) + 1;
        };
        auto within = [&](int p, long remaining) {
            long t = tail(p);
            long ahead = t < 0 ? remaining + (out.back() == kUp ? 1 : 0) : std::max(remaining, t);
            return cost + explicit_entries + closed + ahead <= limit;
        };

        // Bounds on the prefix plus the untouched rest of the child pattern.
        // Later choices only split runs, which never lowers the bound; a
        // segment still open after a configuration may add a run, hence kGap.
        Pattern probe;
        auto promising = [&](int p) {
            probe.assign(out.begin(), out.end());
            if (out.back() >= 0 && (p + 1 == len || src[p + 1] >= 0)) probe.push_back(kGap);
            probe.insert(probe.end(), src.begin() + p + 1, src.end());
            return admissible(j, probe, cost, limit, false);
        };

        std::function<void(int, int)> go = [&](int p, int seg) {
            if (p == len) {
                if (out.back() == last && admissible(j, out, cost, limit)) insert(j, out, cost, ri, -1);
                return;
            }
            Undo u;
            if (src[p] != kUp) {
                if (push(src[p], u)) {
                    if (within(p + 1, rest[p + 1])) go(p + 1, 0);
                    pop(u);
                }
                return;
            }
            if (seg > 0) go(p + 1, 0);
            for (Symbol s : choices) {
                if (push(s, u)) {
                    if (within(p, rest[p + 1]) && promising(p)) go(p, seg + 1);
                    pop(u);
                }
            }
        };
        go(0, 0);
    }
}

void FptSolver::forget(int j, long limit)
{
    const auto& bag = d_.bag(j);
    int child = bag.children[0];
    Vertex v = bag.vertex;
    const auto& rows = tables_[child];
    for (int ri = 0; ri < static_cast<int>(rows.size()); ++ri) {
        const Pattern& src = rows[ri].pattern;
        bool covers = false;
        for (Symbol s : src) {
            if (s < 0) continue;
            auto occ = space_->occupied(s);
            if (std::binary_search(occ.begin(), occ.end(), v)) {
                covers = true;
                break;
            }
        }
        if (!covers) continue;
        Pattern out;
        long added = 0;
        for (Symbol s : src) {
            if (s >= 0 && !touches(s, bag.vertices)) {
                ++added;
                s = kDown;
            }
            if (out.empty() || out.back() != s) out.push_back(s);
        }
        long cost = rows[ri].cost + added;
        if (admissible(j, out, cost, limit)) insert(j, std::move(out), cost, ri, -1);
    }
}

void FptSolver::join(int j, long limit)
{
    const auto& bag = d_.bag(j);
    int ca = bag.children[0], cb = bag.children[1];
    auto masked = [](const Pattern& p) {
        Pattern m(p);
        for (auto& s : m)
            if (s < 0) s = kArrow;
        return m;
    };
    std::unordered_map<Pattern, std::vector<int>, PatternHash> groups;
    const auto& right = tables_[cb];
    for (int ri = 0; ri < static_cast<int>(right.size()); ++ri) groups[masked(right[ri].pattern)].push_back(ri);
    const auto& left = tables_[ca];
    for (int li = 0; li < static_cast<int>(left.size()); ++li) {
        auto it = groups.find(masked(left[li].pattern));
        if (it == groups.end()) continue;
        const Pattern& pa = left[li].pattern;
        for (int ri : it->second) {
            const Pattern& pb = right[ri].pattern;
            Pattern out(pa.size());
            bool ok = true;
            for (std::size_t i = 0; i < pa.size() && ok; ++i) {
                if (pa[i] >= 0) out[i] = pa[i];
                else if (pa[i] == kUp && pb[i] == kUp) out[i] = kUp;
                else if (pa[i] == kDown && pb[i] == kDown) ok = false;
                else out[i] = kDown;
            }
            if (!ok) continue;
            long cost = left[li].cost + right[ri].cost;
            if (admissible(j, out, cost, limit)) insert(j, std::move(out), cost, li, ri);
        }
    }
}

void FptSolver::build_tables(long limit)
{
    tables_.assign(d_.size(), {});
    index_.assign(d_.size(), {});
    row_count_ = 0;
    for (int j : d_.postorder()) {
        switch (d_.bag(j).kind) {
        case BagKind::Leaf:
            if (admissible(j, {kUp}, 0, limit)) insert(j, {kUp}, 0, -1, -1);
            break;
        case BagKind::Introduce: introduce(j, limit); break;
        case BagKind::Forget: forget(j, limit); break;
        case BagKind::Join: join(j, limit); break;
        }
        // rows of a finished child are still needed for reconstruction
    }
}

std::vector<int> FptSolver::lift_groups(const Pattern& y, int j) const
{
    const auto& bag = d_.bag(j).vertices;
    std::vector<int> groups;
    int idx = -1;
    Symbol last = kNone;
    for (Symbol s : y) {
        Symbol t = s >= 0 && !touches(s, bag) ? kDown : s;
        if (t >= 0 || t != last) ++idx;
        groups.push_back(idx);
        last = t;
    }
    return groups;
}

Pattern FptSolver::reconstruct(int j, int row) const
{
    const auto& bag = d_.bag(j);
    const Row& r = tables_.at(j).at(row);
    Pattern out;
    switch (bag.kind) {
    case BagKind::Leaf: return {kUp};
    case BagKind::Forget: return reconstruct(bag.children[0], r.left);
    case BagKind::Introduce: {
        int child = bag.children[0];
        Pattern below = reconstruct(child, r.left);
        const auto& child_bag = d_.bag(child).vertices;
        // pattern index -> child pattern index under reduce
        std::vector<int> reduced;
        int idx = -1;
        Symbol last = kNone;
        for (Symbol s : r.pattern) {
            Symbol t = s >= 0 && !touches(s, child_bag) ? kUp : s;
            if (t >= 0 || t != last) ++idx;
            reduced.push_back(idx);
            last = t;
        }
        auto groups = lift_groups(below, child);
        for (std::size_t i = 0; i < below.size(); ++i) {
            if (below[i] != kUp) {
                out.push_back(below[i]);
                continue;
            }
            for (std::size_t k = 0; k < r.pattern.size(); ++k)
                if (reduced[k] == groups[i]) out.push_back(r.pattern[k]);
        }
        break;
    }
    case BagKind::Join: {
        int ca = bag.children[0], cb = bag.children[1];
        Pattern ya = reconstruct(ca, r.left), yb = reconstruct(cb, r.right);
        auto ga = lift_groups(ya, ca), gb = lift_groups(yb, cb);
        const Pattern& pa = tables_[ca][r.left].pattern;
        for (int i = 0; i < static_cast<int>(r.pattern.size()); ++i) {
            if (r.pattern[i] != kDown) {
                out.push_back(r.pattern[i]);
                continue;
            }
            const Pattern& y = pa[i] == kDown ? ya : yb;
            const auto& g = pa[i] == kDown ? ga : gb;
            for (std::size_t k = 0; k < y.size(); ++k)
                if (g[k] == i) out.push_back(y[k]);
        }
        break;
    }
    }
    if (lift(out, bag.vertices) != r.pattern) fail(ErrorKind::Internal, "reconstruction does not lift back to its row at bag " + std::to_string(j));
    return out;
}

FptResult FptSolver::solve()
{
    using Clock = std::chrono::steady_clock;
    auto t0 = Clock::now();
    FptResult result;
    auto done = [&] {
        result.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
        return result;
    };
    int n = inst_.graph.vertex_count();
    bool feasible = space_->end().has_value();
    for (Vertex u = 0; u < n && feasible; ++u) feasible = !space_->occupying(u).empty();
    if (!feasible) return done();

    int x0 = space_->start(), xf = *space_->end();
    long bound = dist_->between(x0, xf);
    for (Vertex u = 0; u < n; ++u) bound = std::max(bound, static_cast<long>(dist_->to_cover(x0, u) + dist_->to_cover(xf, u)));
    const long give_up = 4L * space_->size() * (n + 1) + 4;
    for (;; ++bound) {
        if (bound > give_up) fail(ErrorKind::Internal, "deepening passed every feasible bound");
        ++result.rounds;
        try {
            build_tables(bound + 1);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::BudgetExceeded) throw;
            result.status = SolveStatus::LimitExceeded;
            result.rows = row_count_;
            return done();
        }
        const auto& top = tables_[d_.root()];
        int best = -1;
        for (int r = 0; r < static_cast<int>(top.size()); ++r)
            if (top[r].pattern == Pattern{kDown} && (best < 0 || top[r].cost < top[best].cost)) best = r;
        if (best < 0) continue;
        Pattern full = reconstruct(d_.root(), best);
        if (full.empty() || static_cast<long>(full.size()) != top[best].cost || full.front() != x0 || full.back() != xf)
            fail(ErrorKind::Internal, "reconstructed traversal disagrees with the root row");
        for (Symbol s : full) {
            if (s < 0) fail(ErrorKind::Internal, "reconstructed traversal has an unresolved arrow");
            result.traversal.push_back(space_->anchored(s));
        }
        if (!validate_traversal(inst_, result.traversal).ok()) fail(ErrorKind::Internal, "reconstructed traversal does not validate");
        result.status = SolveStatus::Optimal;
        result.rows = row_count_;
        return done();
    }
}

NiceTreeDecomposition default_decomposition(const Graph& g)
{
    if (is_tree(g)) return decompose_tree(RootedTree(g, 0));
    return make_nice(g, min_degree_decomposition(g));
}

FptResult solve_fpt(const Instance& inst, const NiceTreeDecomposition& d, FptOptions options)
{
    try {
        FptSolver solver(inst, d, options);
        return solver.solve();
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::BudgetExceeded) throw;
        FptResult r;
        r.status = SolveStatus::LimitExceeded;
        return r;
    }
}

FptResult solve_fpt(const Instance& inst, FptOptions options) { return solve_fpt(inst, default_decomposition(inst.graph), options); }

} // namespace mrfgc
