#pragma once

#include <span>
#include <vector>

#include "spantree/trees.hpp"

namespace spantree {

enum class Branch { accept0_reject1, reject0_accept1, both_accept, both_reject };

// Decision of one class-(+1) tree against one class-(-1) tree for a query.
// The classifier is total: every finite input yields a +1 or -1 vote.
struct PairwiseDecision {
    int vote = 0;
    double d0 = 0.0;
    double d1 = 0.0;
    double theta0 = 0.0;
    double theta1 = 0.0;
    Branch branch = Branch::both_reject;
};

struct PairwiseConfig {
    double boundary_alpha = 0.5;
    int k1 = 2;
    // Reproduces the literal tie-break orientation (nearer class-(-1) tree
    // wins the +1 vote) instead of the default closer-tree-wins rule.
    bool literal_tiebreak = false;
};

// Everything classify_pair needs from one (tree, query) pairing, computed
// once so a tree can face many opponents without re-deriving distances.
struct TreeEval {
    std::vector<double> sorted_dists;  // per-edge distances, ascending
    double min_dist = 0.0;
    double theta = 0.0;
};

TreeEval evaluate_tree(const LabeledTree& h, std::span<const double> z,
                       double boundary_alpha);

PairwiseDecision classify_pair(const TreeEval& e0, const TreeEval& e1,
                               const PairwiseConfig& cfg);

PairwiseDecision classify_pair(const LabeledTree& h, const LabeledTree& h_prime,
                               std::span<const double> z, const PairwiseConfig& cfg);

// +1 iff the vote sum is non-negative (ties resolve positive).
int majority(std::span<const int> votes);

}  // namespace spantree
