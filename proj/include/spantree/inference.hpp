#pragma once

#include <optional>
#include <span>
#include <vector>

#include "spantree/training.hpp"

namespace spantree {

// Candidate ranking: "closest" keeps trees whose weight sum is nearest the
// reference beta; "farthest" inverts the order (the literal reading of the
// selection objective).
enum class Objective { closest, farthest };

struct InferOptions {
    Objective objective = Objective::closest;
    bool literal_tiebreak = false;
};

// One class's beta: a reference edge-weight sum harvested from the records
// of the k nearest dictionary owners, or absent when they hold no trees.
struct BetaSide {
    bool present = false;
    double value = 0.0;
    std::vector<int> consulted_owner_ids;  // nearest-first
    long index = -1;                       // position selected in the sorted weights

    std::optional<double> as_optional() const {
        return present ? std::optional<double>(value) : std::nullopt;
    }

    bool operator==(const BetaSide&) const = default;
};

struct BetaPair {
    BetaSide beta0;
    BetaSide beta1;

    bool operator==(const BetaPair&) const = default;
};

struct Prediction {
    int label = 0;
    std::vector<int> per_tree_votes;  // one +-1 outcome per selected class-(+1) tree
    int selected0 = 0;
    int selected1 = 0;

    // Fraction of per-tree outcomes voting +1; the graded score used for ROC.
    double vote_share() const;

    bool operator==(const Prediction&) const = default;
};

BetaPair beta_assignment(std::span<const double> z, const TrainedModel& model);

// Keeps the best_spt candidates by ascending |weight_sum - beta| (ties in
// enumeration order). Without a beta, falls back to ascending weight_sum.
std::vector<LabeledTree> select_subgraphs(const std::vector<LabeledTree>& candidates,
                                          std::optional<double> beta, int best_spt,
                                          Objective objective = Objective::closest);

Prediction classify(std::span<const double> z, const TrainedModel& model,
                    const InferOptions& opts = {});

// Elementwise classify, parallel over queries, order preserved; a failing
// item reports its index. The serial variant is the reference path.
std::vector<Prediction> classify_batch(const std::vector<std::vector<double>>& zs,
                                       const TrainedModel& model,
                                       const InferOptions& opts = {});
std::vector<Prediction> classify_batch_serial(const std::vector<std::vector<double>>& zs,
                                              const TrainedModel& model,
                                              const InferOptions& opts = {});

}  // namespace spantree
