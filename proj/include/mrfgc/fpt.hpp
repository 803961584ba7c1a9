#pragma once

#include "mrfgc/config_space.hpp"
#include "mrfgc/instance.hpp"
#include "mrfgc/oracle.hpp"
#include "mrfgc/tree_decomp.hpp"

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <span>
#include <vector>

namespace mrfgc {

/// Signature symbols: configuration ids (>= 0) of the solver's ConfigSpace,
/// or one of the two arrows.
using Symbol = int;
constexpr Symbol kUp = -1;
constexpr Symbol kDown = -2;
using Pattern = std::vector<Symbol>;

struct PatternHash {
    std::size_t operator()(const Pattern& p) const
    {
        std::uint64_t h = 1469598103934665603ULL;
        for (Symbol s : p) {
            h ^= static_cast<std::uint32_t>(s);
            h *= 1099511628211ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

struct FptOptions {
    long max_rows = 4'000'000;   // per deepening round, over all bags
    long max_configs = 200'000;  // reachable configuration space
};

struct FptResult {
    SolveStatus status = SolveStatus::Infeasible;
    Traversal traversal;
    long rows = 0;       // table rows in the final round
    int rounds = 0;      // deepening rounds run
    double wall_ms = 0;

    int time() const { return status == SolveStatus::Optimal ? traversal_time(traversal) : -1; }
};

/// Dynamic programming over a nice tree decomposition. Table rows are
/// produced from the children's rows (introduce expands child up-arrows,
/// forget lifts, join combines) and pruned with admissible lower bounds on
/// the final configuration count; the count bound is deepened until the
/// root row appears.
class FptSolver {
public:
    struct Row {
        Pattern pattern;
        long cost = 0;
        int left = -1;  // child row (introduce / forget / join)
        int right = -1; // second child row (join)
    };

    FptSolver(const Instance& inst, NiceTreeDecomposition d, FptOptions options = {});

    const Instance& instance() const { return inst_; }
    const ConfigSpace& space() const { return *space_; }
    const NiceTreeDecomposition& decomposition() const { return d_; }

    FptResult solve();
    /// Tables of the last round (empty before solve()).
    const std::vector<Row>& table(int j) const { return tables_.at(j); }
    /// Partial traversal of row `row` at bag j: configurations below j
    /// spelled out, up-arrows left in place.
    Pattern reconstruct(int j, int row) const;

    // Signature algebra, exposed for tests.
    std::vector<int> ids_of(const Traversal& x) const;
    /// Condensed projection of a traversal on bag j.
    Pattern project(const std::vector<int>& x, int j) const;
    static Pattern condense(const Pattern& p);
    Pattern reduce(const Pattern& p, std::span<const Vertex> a) const;
    Pattern lift(const Pattern& p, std::span<const Vertex> a) const;
    static bool combines(const Pattern& x, const Pattern& y, const Pattern& z);
    /// Partial traversal X restricted at j: configurations above j become
    /// up-arrows, everything else stays explicit.
    Pattern partial_traversal(const std::vector<int>& x, int j) const;
    /// Configurations of a partial traversal whose active set lies below j.
    long partial_cost(const Pattern& partial, int j) const;

    /// Membership in PS(j): condensed, entries intersect the bag, valid
    /// non-repeating consecutive transitions, endpoint and root filters.
    bool in_pattern_space(int j, const Pattern& p) const;
    /// Exhaustive pruned enumeration of PS(j) up to `max_length` symbols.
    /// Throws BudgetExceeded past `budget` patterns.
    std::vector<Pattern> enumerate_patterns(int j, int max_length, long budget = 1'000'000) const;
    /// f * g * (tw + 1) with f = |F| d^{max |V_a|}, g = 2 C(|F|,2) d^{max |V_a|}.
    double length_bound() const;

private:
    enum class Side { Bag, Up, Down };
    Side side_of(int config, int j) const;
    bool touches(int config, std::span<const Vertex> a) const;
    /// With `complete` false, `p` is a prefix followed by unexpanded child
    /// symbols: the end and bag-coverage checks are skipped and only bounds
    /// that expansion cannot lower are applied.
    bool admissible(int j, const Pattern& p, long cost, long limit, bool complete = true) const;
    void build_tables(long limit);
    void introduce(int j, long limit);
    void forget(int j, long limit);
    void join(int j, long limit);
    void insert(int j, Pattern p, long cost, int left, int right);
    std::vector<int> lift_groups(const Pattern& y, int j) const;

    const Instance& inst_;
    NiceTreeDecomposition d_;
    FptOptions options_;
    std::unique_ptr<ConfigSpace> space_;
    std::unique_ptr<ConfigDistances> dist_;
    std::vector<std::vector<char>> in_bag_, in_up_, in_down_;
    std::vector<std::vector<Row>> tables_;
    std::vector<std::unordered_map<Pattern, int, PatternHash>> index_;
    std::vector<std::vector<char>> activates_; // config x vertex
    long row_count_ = 0;
};


/// Decomposition used when none is supplied: decompose_tree rooted at vertex
/// 0 for trees, min-degree elimination otherwise.
NiceTreeDecomposition default_decomposition(const Graph& g);

FptResult solve_fpt(const Instance& inst, const NiceTreeDecomposition& d, FptOptions options = {});
FptResult solve_fpt(const Instance& inst, FptOptions options = {});

} // namespace mrfgc
