#include "spantree/inference.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace spantree {

double Prediction::vote_share() const {
    if (per_tree_votes.empty()) return 0.0;
    long pos = 0;
    for (int v : per_tree_votes)
        if (v > 0) ++pos;
    return static_cast<double>(pos) / static_cast<double>(per_tree_votes.size());
}

BetaPair beta_assignment(std::span<const double> z, const TrainedModel& model) {
    std::map<int, const Instance*> owners_by_id;
    for (const auto& inst : model.owners) owners_by_id[inst.id] = &inst;

    const auto compute = [&](const std::map<int, std::vector<TreeRecord>>& dict) {
        struct Entry {
            double dist;
            int id;
        };
        std::vector<Entry> entries;
        entries.reserve(dict.size());
        for (const auto& [owner_id, records] : dict) {
            const auto it = owners_by_id.find(owner_id);
            if (it == owners_by_id.end())
                throw std::runtime_error("dictionary owner missing from model owners: " +
                                         std::to_string(owner_id));
            entries.push_back({euclidean_distance(z, it->second->features), owner_id});
        }
        std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
            return a.dist != b.dist ? a.dist < b.dist : a.id < b.id;
        });

        BetaSide side;
        const std::size_t k = std::min(
            entries.size(), static_cast<std::size_t>(std::max(model.params.k_neighbours, 0)));
        std::vector<double> weights;
        for (std::size_t i = 0; i < k; ++i) {
            side.consulted_owner_ids.push_back(entries[i].id);
            for (const auto& rec : dict.at(entries[i].id)) weights.push_back(rec.weight_sum);
        }
        if (weights.empty()) return side;  // absent

        std::sort(weights.begin(), weights.end());
        const auto n = static_cast<long>(weights.size());
        long idx = static_cast<long>(
            std::floor(model.params.beta_alpha * static_cast<double>(n)));
        idx = std::clamp(idx, 0L, n - 1);
        side.present = true;
        side.index = idx;
        side.value = weights[static_cast<std::size_t>(idx)];
        return side;
    };

    BetaPair bp;
    bp.beta0 = compute(model.zeta0);
    bp.beta1 = compute(model.zeta1);
    return bp;
}

std::vector<LabeledTree> select_subgraphs(const std::vector<LabeledTree>& candidates,
                                          std::optional<double> beta, int best_spt,
                                          Objective objective) {
    if (candidates.empty()) throw std::invalid_argument("empty candidate set");
    if (best_spt < 1) throw std::invalid_argument("best_spt must be >= 1");

    std::vector<std::size_t> order(candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    if (beta) {
        const double b = *beta;
        const auto gap = [&](std::size_t i) { return std::abs(candidates[i].weight_sum - b); };
        if (objective == Objective::closest) {
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t c) { return gap(a) < gap(c); });
        } else {
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t c) { return gap(a) > gap(c); });
        }
    } else {
        // No training evidence: prefer compact local structures.
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) {
            return candidates[a].weight_sum < candidates[c].weight_sum;
        });
    }

    const std::size_t take =
        std::min(candidates.size(), static_cast<std::size_t>(best_spt));
    std::vector<LabeledTree> out;
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) out.push_back(candidates[order[i]]);
    return out;
}

Prediction classify(std::span<const double> z, const TrainedModel& model,
                    const InferOptions& opts) {
    if (static_cast<int>(z.size()) != model.feature_count) {
        std::ostringstream msg;
        msg << "feature dimension mismatch: expected " << model.feature_count << ", found "
            << z.size();
        throw std::runtime_error(msg.str());
    }
    const auto& p = model.params;
    if (model.x0.size() < static_cast<std::size_t>(p.gamma) ||
        model.x1.size() < static_cast<std::size_t>(p.gamma))
        throw std::runtime_error("class pool smaller than gamma");

    const BetaPair bp = beta_assignment(z, model);

    const auto n0 = gamma_neighbourhood(z, std::nullopt, model.x0, p.gamma);
    const auto n1 = gamma_neighbourhood(z, std::nullopt, model.x1, p.gamma);
    const auto t0 = enumerate_spanning_trees(n0, p.gamma);
    const auto t1 = enumerate_spanning_trees(n1, p.gamma);

    const auto h0 = select_subgraphs(t0, bp.beta0.as_optional(), p.best_spt, opts.objective);
    const auto h1 = select_subgraphs(t1, bp.beta1.as_optional(), p.best_spt, opts.objective);

    const PairwiseConfig cfg{p.boundary_alpha, p.k1, opts.literal_tiebreak};
    std::vector<TreeEval> e0;
    std::vector<TreeEval> e1;
    e0.reserve(h0.size());
    e1.reserve(h1.size());
    for (const auto& h : h0) e0.push_back(evaluate_tree(h, z, p.boundary_alpha));
    for (const auto& h : h1) e1.push_back(evaluate_tree(h, z, p.boundary_alpha));

    Prediction pred;
    pred.selected0 = static_cast<int>(h0.size());
    pred.selected1 = static_cast<int>(h1.size());
    pred.per_tree_votes.reserve(h0.size());
    for (std::size_t i = 0; i < h0.size(); ++i) {
        long tally = 0;
        for (std::size_t j = 0; j < h1.size(); ++j)
            tally += classify_pair(e0[i], e1[j], cfg).vote;
        pred.per_tree_votes.push_back(tally >= 0 ? 1 : -1);
    }
    pred.label = majority(pred.per_tree_votes);
    return pred;
}

namespace {

std::vector<Prediction> classify_many(const std::vector<std::vector<double>>& zs,
                                      const TrainedModel& model, const InferOptions& opts,
                                      bool parallel) {
    std::vector<Prediction> out(zs.size());
    std::vector<std::string> errors(zs.size());

    const auto run_one = [&](std::size_t i) {
        try {
            out[i] = classify(zs[i], model, opts);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    };

    const auto n = static_cast<long>(zs.size());
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long i = 0; i < n; ++i) run_one(static_cast<std::size_t>(i));
    } else {
        for (long i = 0; i < n; ++i) run_one(static_cast<std::size_t>(i));
    }

    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (!errors[i].empty()) {
            std::ostringstream msg;
            msg << "item " << i << ": " << errors[i];
            throw std::runtime_error(msg.str());
        }
    }
    return out;
}

}  // namespace

std::vector<Prediction> classify_batch(const std::vector<std::vector<double>>& zs,
                                       const TrainedModel& model, const InferOptions& opts) {
    return classify_many(zs, model, opts, true);
}

std::vector<Prediction> classify_batch_serial(const std::vector<std::vector<double>>& zs,
                                              const TrainedModel& model,
                                              const InferOptions& opts) {
    return classify_many(zs, model, opts, false);
}

}  // namespace spantree
