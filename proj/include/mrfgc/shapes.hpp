#pragma once

#include "mrfgc/instance.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mrfgc {

/// Local shape of three robots around a pivot R. Before entering the subtree
/// of R the letter reads R and upward (O: 3 on R, Pbar: 2 on R and 1 on its
/// parent, P: 1 and 2, L: one each on R, its parent and a further neighbor).
/// After entering it reads the children of R and upward (O: 3 on one child,
/// Pbar: 2 on a child and 1 on R, P: 1 and 2, L: child, R and parent, V: two
/// children and R).
enum class ShapeLetter { O, Pbar, P, L, V };

std::string letter_name(ShapeLetter l);
std::string letter_ascii(ShapeLetter l);

struct ShapeClass {
    ShapeLetter pre;
    ShapeLetter post;
    int pre_at_r = 0, pre_at_parent = 0, pre_beyond = 0;
    std::vector<int> post_children; // nonzero child counts, descending
    int post_at_r = 0, post_at_parent = 0;

    std::string name() const { return letter_name(pre) + letter_name(post); }
    std::string ascii_name() const { return letter_ascii(pre) + letter_ascii(post); }
    friend bool operator==(const ShapeClass& a, const ShapeClass& b) { return a.pre == b.pre && a.post == b.post; }
};

/// Shape of the transition (a, b) entering the subtree of `pivot`: a occupies
/// the pivot and none of its children, b occupies a child. nullopt when the
/// transition does not enter there.
std::optional<ShapeClass> classify_transition_shape(const RootedTree& t, const AnchoredConfiguration& a, const AnchoredConfiguration& b, Vertex pivot);

/// Neighborhood used for the exhaustive search: a root Q above P, P above the
/// pivot R and a sibling S, three children of R with one grandchild each.
RootedTree shape_host();
constexpr Vertex kShapePivot = 2;

struct ShapeWitness {
    ShapeClass shape;
    AnchoredConfiguration before;
    AnchoredConfiguration after;
};

/// One witness per shape class, in order of first discovery.
std::vector<ShapeWitness> enumerate_shapes();

/// Transitions entering the subtree of `pivot`: (index i of x^i, shape).
std::vector<std::pair<int, ShapeClass>> shape_entries(const RootedTree& t, const Traversal& x, Vertex pivot);

/// Removes the repetition of the shape entering at i and i2 (i < i2). Bridges
/// directly when (x^i, x^i2) and (x^{i+1}, x^{i2+1}) are transitions (or
/// equal), otherwise through all robots on the pivot, which needs x^i = x^i2.
Traversal shape_z_transform(const Instance& inst, const RootedTree& t, const Traversal& x, int i, int i2, Vertex pivot);

/// Applies shape_z_transform until no shape repeats at any pivot. Throws
/// BudgetExceeded after `max_rounds` transforms.
Traversal normalize_shapes(const Instance& inst, const RootedTree& t, Traversal x, int max_rounds = 10000);

/// A covering traversal of shape_host() from and to all robots on the pivot
/// that enters the pivot's subtree twice with `shape`, at indices i < i2.
struct ShapeFixture {
    Instance instance;
    Traversal traversal;
    int i = -1, i2 = -1;
};
ShapeFixture make_shape_fixture(const ShapeClass& shape);

} // namespace mrfgc
