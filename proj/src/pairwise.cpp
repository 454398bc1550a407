#include "spantree/pairwise.hpp"

#include <algorithm>
#include <stdexcept>

namespace spantree {

TreeEval evaluate_tree(const LabeledTree& h, std::span<const double> z,
                       double boundary_alpha) {
    TreeEval e;
    const TreeDistance td = point_to_tree_distance(z, h);
    e.sorted_dists = td.per_edge;
    std::sort(e.sorted_dists.begin(), e.sorted_dists.end());
    e.min_dist = td.min_dist;
    e.theta = tree_threshold(h, boundary_alpha);
    return e;
}

PairwiseDecision classify_pair(const TreeEval& e0, const TreeEval& e1,
                               const PairwiseConfig& cfg) {
    if (cfg.k1 < 1) throw std::invalid_argument("k1 must be >= 1");
    if (e0.sorted_dists.empty() || e1.sorted_dists.empty())
        throw std::invalid_argument("trees must be non-empty");

    PairwiseDecision out;
    out.d0 = e0.min_dist;
    out.d1 = e1.min_dist;
    out.theta0 = e0.theta;
    out.theta1 = e1.theta;

    const bool accept0 = out.d0 <= out.theta0;
    const bool accept1 = out.d1 <= out.theta1;

    if (accept0 && !accept1) {
        out.branch = Branch::accept0_reject1;
        out.vote = 1;
        return out;
    }
    if (!accept0 && accept1) {
        out.branch = Branch::reject0_accept1;
        out.vote = -1;
        return out;
    }
    out.branch = accept0 ? Branch::both_accept : Branch::both_reject;

    // Both descriptors agree, so compare the k1 nearest edges of each tree.
    const std::size_t k =
        std::min({static_cast<std::size_t>(cfg.k1), e0.sorted_dists.size(),
                  e1.sorted_dists.size()});
    int positive = 0;
    int negative = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const double diff = e1.sorted_dists[i] - e0.sorted_dists[i];
        if (diff > 0.0)
            ++positive;
        else if (diff < 0.0)
            ++negative;
    }
    const bool plus =
        cfg.literal_tiebreak ? (negative >= positive) : (positive >= negative);
    out.vote = plus ? 1 : -1;
    return out;
}

PairwiseDecision classify_pair(const LabeledTree& h, const LabeledTree& h_prime,
                               std::span<const double> z, const PairwiseConfig& cfg) {
    return classify_pair(evaluate_tree(h, z, cfg.boundary_alpha),
                         evaluate_tree(h_prime, z, cfg.boundary_alpha), cfg);
}

int majority(std::span<const int> votes) {
    if (votes.empty()) throw std::invalid_argument("majority of empty vote sequence");
    long sum = 0;
    for (int v : votes) sum += v;
    return sum >= 0 ? 1 : -1;
}

}  // namespace spantree
