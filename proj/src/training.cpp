#include "spantree/training.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace spantree {

void validate(const HyperParams& p, int gamma_cap) {
    std::ostringstream msg;
    if (p.gamma < 2)
        msg << "gamma must be >= 2";
    else if (p.gamma > gamma_cap)
        msg << "gamma above enumeration cap (" << p.gamma << " > " << gamma_cap << ")";
    else if (!(p.boundary_alpha >= 0.0 && p.boundary_alpha <= 1.0))
        msg << "boundary_alpha must lie in [0,1]";
    else if (!(p.beta_alpha >= 0.0 && p.beta_alpha <= 1.0))
        msg << "beta_alpha must lie in [0,1]";
    else if (p.best_spt < 1)
        msg << "best_spt must be >= 1";
    else if (p.k_neighbours < 1)
        msg << "k_neighbours must be >= 1";
    else if (p.k1 < 1)
        msg << "k1 must be >= 1";
    else if (!(p.s_fraction > 0.0 && p.s_fraction < 1.0))
        msg << "s_fraction must lie in (0,1)";
    else
        return;
    throw std::invalid_argument(msg.str());
}

std::vector<Instance> gamma_neighbourhood(std::span<const double> z,
                                          std::optional<int> self_id,
                                          const std::vector<Instance>& pool, int gamma) {
    if (gamma < 1) throw std::invalid_argument("gamma must be >= 1");

    struct Entry {
        double dist;
        int id;
        const Instance* inst;
    };
    std::vector<Entry> entries;
    entries.reserve(pool.size());
    for (const auto& p : pool) {
        if (self_id && p.id == *self_id) continue;
        entries.push_back({euclidean_distance(z, p.features), p.id, &p});
    }
    if (entries.size() < static_cast<std::size_t>(gamma)) {
        std::ostringstream msg;
        msg << "pool too small: " << entries.size() << " candidates for gamma=" << gamma;
        throw std::runtime_error(msg.str());
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.dist != b.dist ? a.dist < b.dist : a.id < b.id;
    });

    std::vector<Instance> out;
    out.reserve(static_cast<std::size_t>(gamma));
    for (int i = 0; i < gamma; ++i) out.push_back(*entries[static_cast<std::size_t>(i)].inst);
    return out;
}

std::vector<Instance> gamma_neighbourhood(const Instance& s,
                                          const std::vector<Instance>& pool, int gamma) {
    return gamma_neighbourhood(s.features, s.id, pool, gamma);
}

namespace {

struct ProbeResult {
    std::vector<TreeRecord> rec0;
    std::vector<TreeRecord> rec1;
};

void sort_records(std::vector<TreeRecord>& recs) {
    // Stable: equal distances keep enumeration order.
    std::stable_sort(recs.begin(), recs.end(), [](const TreeRecord& a, const TreeRecord& b) {
        return a.dist_to_owner < b.dist_to_owner;
    });
}

ProbeResult train_probe(const Instance& s, const ClassSplit& split,
                        const HyperParams& params, const TrainOptions& opts) {
    const auto n0 = gamma_neighbourhood(s, split.x0, params.gamma);
    const auto n1 = gamma_neighbourhood(s, split.x1, params.gamma);
    const auto h0 = enumerate_spanning_trees(n0, opts.gamma_cap);
    const auto h1 = enumerate_spanning_trees(n1, opts.gamma_cap);

    const PairwiseConfig cfg{params.boundary_alpha, params.k1, opts.literal_tiebreak};
    std::vector<TreeEval> e0;
    std::vector<TreeEval> e1;
    e0.reserve(h0.size());
    e1.reserve(h1.size());
    for (const auto& h : h0) e0.push_back(evaluate_tree(h, s.features, params.boundary_alpha));
    for (const auto& h : h1) e1.push_back(evaluate_tree(h, s.features, params.boundary_alpha));

    // counter[i] accumulates +1 per pair voting the probe's own label, -1
    // otherwise; a tree survives while its counter stays non-negative.
    std::vector<long> c0(h0.size(), 0);
    std::vector<long> c1(h1.size(), 0);
    for (std::size_t i = 0; i < h0.size(); ++i) {
        for (std::size_t j = 0; j < h1.size(); ++j) {
            const int vote = classify_pair(e0[i], e1[j], cfg).vote;
            const long agree = (vote == s.label) ? 1 : -1;
            c0[i] += agree;
            c1[j] += agree;
        }
    }

    ProbeResult out;
    for (std::size_t i = 0; i < h0.size(); ++i)
        if (c0[i] >= 0) out.rec0.push_back({h0[i], e0[i].min_dist, h0[i].weight_sum});
    for (std::size_t j = 0; j < h1.size(); ++j)
        if (c1[j] >= 0) out.rec1.push_back({h1[j], e1[j].min_dist, h1[j].weight_sum});
    sort_records(out.rec0);
    sort_records(out.rec1);
    return out;
}

TrainedModel assemble(const ClassSplit& split, const HyperParams& params,
                      std::vector<ProbeResult>&& results) {
    TrainedModel m;
    m.params = params;
    m.owners = split.s;
    m.x0 = split.x0;
    m.x1 = split.x1;
    m.feature_count =
        split.x0.empty() ? 0 : static_cast<int>(split.x0.front().features.size());
    for (std::size_t i = 0; i < split.s.size(); ++i) {
        m.zeta0[split.s[i].id] = std::move(results[i].rec0);
        m.zeta1[split.s[i].id] = std::move(results[i].rec1);
    }
    return m;
}

void check_pools(const ClassSplit& split, const HyperParams& params) {
    if (split.x0.size() < static_cast<std::size_t>(params.gamma) ||
        split.x1.size() < static_cast<std::size_t>(params.gamma)) {
        std::ostringstream msg;
        msg << "class pool smaller than gamma: |x0|=" << split.x0.size()
            << ", |x1|=" << split.x1.size() << ", gamma=" << params.gamma;
        throw std::runtime_error(msg.str());
    }
}

}  // namespace

TrainedModel train(const ClassSplit& split, const HyperParams& params,
                   const TrainOptions& opts) {
    validate(params, opts.gamma_cap);
    check_pools(split, params);

    const auto n = static_cast<long>(split.s.size());
    std::vector<ProbeResult> results(split.s.size());
    std::exception_ptr error;

#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) {
        try {
            results[static_cast<std::size_t>(i)] =
                train_probe(split.s[static_cast<std::size_t>(i)], split, params, opts);
        } catch (...) {
#pragma omp critical
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
    return assemble(split, params, std::move(results));
}

TrainedModel train_serial(const ClassSplit& split, const HyperParams& params,
                          const TrainOptions& opts) {
    validate(params, opts.gamma_cap);
    check_pools(split, params);

    std::vector<ProbeResult> results(split.s.size());
    for (std::size_t i = 0; i < split.s.size(); ++i)
        results[i] = train_probe(split.s[i], split, params, opts);
    return assemble(split, params, std::move(results));
}

}  // namespace spantree
