#pragma once

#include <span>
#include <utility>
#include <vector>

#include "spantree/dataset.hpp"

namespace spantree {

// Enumerating all gamma^(gamma-2) labeled trees explodes quickly; the
// default cap keeps it at 6^4 = 1296 trees per neighborhood.
inline constexpr int kDefaultGammaCap = 6;

// A spanning tree over a neighborhood of gamma points. Node order is the
// neighborhood order; edges are canonical (i < j, lexicographically sorted).
struct LabeledTree {
    std::vector<std::vector<double>> nodes;  // payload per node
    std::vector<int> node_ids;               // source instance ids
    std::vector<std::pair<int, int>> edges;  // gamma-1 index pairs, i < j
    std::vector<double> edge_lengths;
    double weight_sum = 0.0;

    bool operator==(const LabeledTree&) const = default;
};

// Per-edge distances of one query point against one tree.
struct TreeDistance {
    std::vector<double> per_edge;
    double min_dist = 0.0;
};

double euclidean_distance(std::span<const double> a, std::span<const double> b);

// Decodes a Pruefer sequence of length gamma-2 into the gamma-1 edges of
// the corresponding labeled tree. The mapping is a bijection.
std::vector<std::pair<int, int>> decode_pruefer(const std::vector<int>& seq, int gamma);

// Builds the full tree with geometry (edge lengths, weight sum) for one
// Pruefer sequence over the given points.
LabeledTree build_tree(const std::vector<Instance>& points, const std::vector<int>& seq);

// All spanning trees on the given points, in lexicographic Pruefer order.
std::vector<LabeledTree> enumerate_spanning_trees(const std::vector<Instance>& points,
                                                  int gamma_cap = kDefaultGammaCap);

// Distance from z to the segment (xi, xj): perpendicular distance when the
// projection foot lies on the segment (0 <= t <= 1, returned flag true),
// otherwise the nearer endpoint distance. Identical endpoints fall back to
// the point distance.
std::pair<double, bool> point_to_edge_distance(std::span<const double> z,
                                               std::span<const double> xi,
                                               std::span<const double> xj);

TreeDistance point_to_tree_distance(std::span<const double> z, const LabeledTree& h);

// The boundary radius of a tree: its edge lengths sorted ascending, indexed
// at min(floor(alpha * n), n-1). alpha = 0.5 picks the median for odd n.
double tree_threshold(const LabeledTree& h, double boundary_alpha);

}  // namespace spantree
