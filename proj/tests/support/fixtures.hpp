#pragma once

// Shared synthetic data for tests and benchmarks.

#include <vector>

#include "spantree/dataset.hpp"
#include "spantree/rng.hpp"

namespace spantree::testing {

// Two Gaussian blobs, one per class, centers separated by `separation`
// (default 10x the unit radius), so every pairwise tree decision is
// geometrically forced to the right class.
inline Dataset make_blobs(int per_class, std::uint64_t seed, int dims = 2,
                          double separation = 10.0) {
    Rng rng(seed);
    Dataset d;
    d.feature_count = dims;
    d.name = "blobs";
    int id = 0;
    for (int c = 0; c < 2; ++c) {
        const double center = (c == 0) ? 0.0 : separation;
        for (int i = 0; i < per_class; ++i) {
            Instance inst;
            inst.id = id++;
            inst.label = (c == 0) ? 1 : -1;
            for (int k = 0; k < dims; ++k) inst.features.push_back(center + rng.gaussian());
            d.instances.push_back(std::move(inst));
        }
    }
    return d;
}

inline std::vector<double> random_point(Rng& rng, int dims, double scale = 1.0) {
    std::vector<double> p;
    p.reserve(static_cast<std::size_t>(dims));
    for (int i = 0; i < dims; ++i) p.push_back((rng.unit() * 2.0 - 1.0) * scale);
    return p;
}

inline std::vector<Instance> random_instances(Rng& rng, int count, int dims,
                                              double scale = 1.0, int first_id = 0) {
    std::vector<Instance> out;
    for (int i = 0; i < count; ++i) {
        Instance inst;
        inst.id = first_id + i;
        inst.label = 1;
        inst.features = random_point(rng, dims, scale);
        out.push_back(std::move(inst));
    }
    return out;
}

// Minimal union-find for spanning-tree validation.
struct UnionFind {
    std::vector<int> parent;

    explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
        for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
    }

    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }

    // false if already connected (joining would close a cycle)
    bool unite(int a, int b) {
        const int ra = find(a);
        const int rb = find(b);
        if (ra == rb) return false;
        parent[static_cast<std::size_t>(ra)] = rb;
        return true;
    }
};

}  // namespace spantree::testing
