#include "spantree/trees.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace spantree {

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        acc += diff * diff;
    }
    return std::sqrt(acc);
}

std::vector<std::pair<int, int>> decode_pruefer(const std::vector<int>& seq, int gamma) {
    if (gamma < 2) throw std::invalid_argument("pruefer decode requires gamma >= 2");
    if (seq.size() != static_cast<std::size_t>(gamma - 2))
        throw std::invalid_argument("pruefer sequence must have length gamma-2");
    for (int v : seq)
        if (v < 0 || v >= gamma)
            throw std::invalid_argument("pruefer entry out of range");

    std::vector<int> degree(static_cast<std::size_t>(gamma), 1);
    for (int v : seq) ++degree[static_cast<std::size_t>(v)];

    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<std::size_t>(gamma - 1));
    for (int v : seq) {
        int leaf = -1;
        for (int u = 0; u < gamma; ++u) {
            if (degree[static_cast<std::size_t>(u)] == 1) {
                leaf = u;
                break;
            }
        }
        edges.emplace_back(std::min(leaf, v), std::max(leaf, v));
        --degree[static_cast<std::size_t>(leaf)];
        --degree[static_cast<std::size_t>(v)];
    }
    int first = -1;
    int second = -1;
    for (int u = 0; u < gamma; ++u) {
        if (degree[static_cast<std::size_t>(u)] == 1) {
            if (first < 0)
                first = u;
            else
                second = u;
        }
    }
    edges.emplace_back(first, second);
    std::sort(edges.begin(), edges.end());
    return edges;
}

LabeledTree build_tree(const std::vector<Instance>& points, const std::vector<int>& seq) {
    const int gamma = static_cast<int>(points.size());
    LabeledTree t;
    t.nodes.reserve(points.size());
    t.node_ids.reserve(points.size());
    for (const auto& p : points) {
        t.nodes.push_back(p.features);
        t.node_ids.push_back(p.id);
    }
    t.edges = decode_pruefer(seq, gamma);
    t.edge_lengths.reserve(t.edges.size());
    t.weight_sum = 0.0;
    for (const auto& [i, j] : t.edges) {
        const double len = euclidean_distance(t.nodes[static_cast<std::size_t>(i)],
                                              t.nodes[static_cast<std::size_t>(j)]);
        t.edge_lengths.push_back(len);
        t.weight_sum += len;
    }
    return t;
}

std::vector<LabeledTree> enumerate_spanning_trees(const std::vector<Instance>& points,
                                                  int gamma_cap) {
    const int gamma = static_cast<int>(points.size());
    if (gamma < 2) throw std::invalid_argument("tree enumeration requires gamma >= 2");
    if (gamma > gamma_cap) {
        std::ostringstream msg;
        msg << "gamma " << gamma << " above enumeration cap " << gamma_cap;
        throw std::invalid_argument(msg.str());
    }
    const std::size_t dim = points[0].features.size();
    for (const auto& p : points)
        if (p.features.size() != dim) throw std::invalid_argument("dimension mismatch");

    std::vector<LabeledTree> trees;
    std::size_t count = 1;
    for (int i = 0; i < gamma - 2; ++i) count *= static_cast<std::size_t>(gamma);
    trees.reserve(count);

    // Odometer over all gamma^(gamma-2) sequences, lexicographic.
    std::vector<int> seq(static_cast<std::size_t>(std::max(gamma - 2, 0)), 0);
    while (true) {
        trees.push_back(build_tree(points, seq));
        int pos = static_cast<int>(seq.size()) - 1;
        while (pos >= 0) {
            if (++seq[static_cast<std::size_t>(pos)] < gamma) break;
            seq[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    return trees;
}

std::pair<double, bool> point_to_edge_distance(std::span<const double> z,
                                               std::span<const double> xi,
                                               std::span<const double> xj) {
    if (z.size() != xi.size() || z.size() != xj.size())
        throw std::invalid_argument("dimension mismatch");

    // Canonical endpoint order makes the result bit-exactly symmetric.
    if (std::lexicographical_compare(xj.begin(), xj.end(), xi.begin(), xi.end()))
        std::swap(xi, xj);

    double seg_sq = 0.0;
    double dot = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) {
        const double e = xj[k] - xi[k];
        seg_sq += e * e;
        dot += e * (z[k] - xi[k]);
    }
    if (seg_sq == 0.0) return {euclidean_distance(z, xi), false};

    const double t = dot / seg_sq;
    if (t >= 0.0 && t <= 1.0) {
        // Residual in edge-relative coordinates: depends only on the
        // differences (z - xi) and (xj - xi), so translating every input by
        // the same vector cannot perturb the result.
        double acc = 0.0;
        for (std::size_t k = 0; k < z.size(); ++k) {
            const double diff = (z[k] - xi[k]) - t * (xj[k] - xi[k]);
            acc += diff * diff;
        }
        return {std::sqrt(acc), true};
    }
    return {std::min(euclidean_distance(z, xi), euclidean_distance(z, xj)), false};
}

TreeDistance point_to_tree_distance(std::span<const double> z, const LabeledTree& h) {
    TreeDistance td;
    td.per_edge.reserve(h.edges.size());
    td.min_dist = std::numeric_limits<double>::infinity();
    for (const auto& [i, j] : h.edges) {
        const double d = point_to_edge_distance(z, h.nodes[static_cast<std::size_t>(i)],
                                                h.nodes[static_cast<std::size_t>(j)])
                             .first;
        td.per_edge.push_back(d);
        td.min_dist = std::min(td.min_dist, d);
    }
    return td;
}

double tree_threshold(const LabeledTree& h, double boundary_alpha) {
    if (h.edge_lengths.empty()) throw std::invalid_argument("tree has no edges");
    std::vector<double> sorted = h.edge_lengths;
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<long>(sorted.size());
    long idx = static_cast<long>(std::floor(boundary_alpha * static_cast<double>(n)));
    idx = std::clamp(idx, 0L, n - 1);
    return sorted[static_cast<std::size_t>(idx)];
}

}  // namespace spantree
