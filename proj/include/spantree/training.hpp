#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spantree/dataset.hpp"
#include "spantree/pairwise.hpp"
#include "spantree/trees.hpp"

namespace spantree {

struct HyperParams {
    int gamma = 3;
    double boundary_alpha = 0.5;
    double beta_alpha = 0.5;
    int best_spt = 3;
    int k_neighbours = 3;
    int k1 = 2;
    double s_fraction = 0.2;
    std::uint64_t seed = 0;

    bool operator==(const HyperParams&) const = default;
};

void validate(const HyperParams& p, int gamma_cap = kDefaultGammaCap);

// One surviving tree of a probe's dictionary entry: the tree itself, its
// minimum distance to the owner probe, and its edge-weight sum.
struct TreeRecord {
    LabeledTree tree;
    double dist_to_owner = 0.0;
    double weight_sum = 0.0;

    bool operator==(const TreeRecord&) const = default;
};

struct TrainedModel {
    std::map<int, std::vector<TreeRecord>> zeta0;  // owner id -> records over x0 trees
    std::map<int, std::vector<TreeRecord>> zeta1;  // owner id -> records over x1 trees
    std::vector<Instance> owners;                  // the probe subset, ascending id
    std::vector<Instance> x0;
    std::vector<Instance> x1;
    HyperParams params;
    int feature_count = 0;

    bool operator==(const TrainedModel&) const = default;
};

struct TrainOptions {
    bool literal_tiebreak = false;
    int gamma_cap = kDefaultGammaCap;
};

// The gamma pool members nearest to z by Euclidean distance, ties broken by
// ascending id. self_id, when given, excludes that pool member.
std::vector<Instance> gamma_neighbourhood(std::span<const double> z,
                                          std::optional<int> self_id,
                                          const std::vector<Instance>& pool, int gamma);

std::vector<Instance> gamma_neighbourhood(const Instance& s,
                                          const std::vector<Instance>& pool, int gamma);

// For every probe: enumerate the spanning trees of both class
// neighborhoods, score each tree by pairwise votes against all opposing
// trees, and keep those whose correct-vote counter is non-negative.
// Probes are processed in parallel; output is independent of thread count.
TrainedModel train(const ClassSplit& split, const HyperParams& params,
                   const TrainOptions& opts = {});

// Single-threaded reference producing bit-identical models.
TrainedModel train_serial(const ClassSplit& split, const HyperParams& params,
                          const TrainOptions& opts = {});

// Model persistence: a single JSON document, reals as full-precision
// decimal strings, canonical key order (identical models => identical bytes).
void save_model(const TrainedModel& m, const std::string& path);
TrainedModel load_model(const std::string& path);

}  // namespace spantree
