#include "spantree/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "spantree/rng.hpp"
#include "spantree/util.hpp"

namespace spantree {

long Dataset::count_label(int label) const {
    long n = 0;
    for (const auto& inst : instances)
        if (inst.label == label) ++n;
    return n;
}

namespace {

bool is_integer_token(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

std::string path_stem(const std::string& path) {
    std::size_t slash = path.find_last_of("/\\");
    std::string base = (slash == std::string::npos) ? path : path.substr(slash + 1);
    std::size_t dot = base.find_last_of('.');
    return (dot == std::string::npos || dot == 0) ? base : base.substr(0, dot);
}

std::vector<std::vector<std::string>> read_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset file: " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        auto cells = split(line, ',');
        for (auto& c : cells) c = trim(c);
        rows.push_back(std::move(cells));
    }
    return rows;
}

// Sorted ids of the given label.
std::vector<int> ids_of_label(const Dataset& d, int label) {
    std::vector<int> ids;
    for (const auto& inst : d.instances)
        if (inst.label == label) ids.push_back(inst.id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

Dataset subset_by_ids(const Dataset& d, std::vector<int> ids, const std::string& suffix) {
    std::sort(ids.begin(), ids.end());
    std::map<int, const Instance*> by_id;
    for (const auto& inst : d.instances) by_id[inst.id] = &inst;
    Dataset out;
    out.feature_count = d.feature_count;
    out.name = d.name + suffix;
    out.instances.reserve(ids.size());
    for (int id : ids) out.instances.push_back(*by_id.at(id));
    return out;
}

}  // namespace

Dataset load_csv(const std::string& path, const std::string& label_column,
                 const std::string& positive_label) {
    const auto rows = read_rows(path);
    if (rows.empty()) throw std::runtime_error("empty dataset file: " + path);

    const std::size_t arity = rows[0].size();
    if (arity < 2) throw std::runtime_error("rows need at least one feature and a label: " + path);

    const std::string label_spec = trim(label_column);
    std::size_t label_idx = 0;
    bool has_header = false;

    if (is_integer_token(label_spec)) {
        const long idx = std::stol(label_spec);
        if (idx == -1) {
            label_idx = arity - 1;
        } else if (idx >= 0 && static_cast<std::size_t>(idx) < arity) {
            label_idx = static_cast<std::size_t>(idx);
        } else {
            throw std::runtime_error("label column index out of range: " + label_spec);
        }
        // Header iff the first row has a non-numeric cell outside the label column.
        for (std::size_t c = 0; c < arity && !has_header; ++c) {
            if (c == label_idx) continue;
            if (!parse_finite_double(rows[0][c])) has_header = true;
        }
    } else if (label_spec == "last") {
        label_idx = arity - 1;
        for (std::size_t c = 0; c + 1 < arity && !has_header; ++c)
            if (!parse_finite_double(rows[0][c])) has_header = true;
    } else {
        // Named label column: the first row must be a header containing it.
        has_header = true;
        auto it = std::find(rows[0].begin(), rows[0].end(), label_spec);
        if (it == rows[0].end())
            throw std::runtime_error("label column '" + label_spec + "' not found in header");
        label_idx = static_cast<std::size_t>(it - rows[0].begin());
    }

    Dataset d;
    d.feature_count = static_cast<int>(arity - 1);
    d.name = path_stem(path);

    int next_id = 0;
    for (std::size_t r = has_header ? 1 : 0; r < rows.size(); ++r) {
        const auto& cells = rows[r];
        if (cells.size() != arity) {
            std::ostringstream msg;
            msg << "ragged row " << r << ": expected " << arity << " cells, found "
                << cells.size();
            throw std::runtime_error(msg.str());
        }
        Instance inst;
        inst.id = next_id++;
        inst.features.reserve(arity - 1);
        for (std::size_t c = 0; c < arity; ++c) {
            if (c == label_idx) continue;
            const auto v = parse_finite_double(cells[c]);
            if (!v) {
                std::ostringstream msg;
                msg << "non-numeric feature cell at row " << r << ", column " << c << ": '"
                    << cells[c] << "'";
                throw std::runtime_error(msg.str());
            }
            inst.features.push_back(*v);
        }
        inst.label = (cells[label_idx] == trim(positive_label)) ? 1 : -1;
        d.instances.push_back(std::move(inst));
    }

    if (d.instances.empty()) throw std::runtime_error("dataset has no data rows: " + path);
    if (d.count_label(1) == 0 || d.count_label(-1) == 0)
        throw std::runtime_error("dataset has a single class: " + path);
    return d;
}

void write_csv(const Dataset& d, const std::string& path) {
    std::ostringstream out;
    for (const auto& inst : d.instances) {
        for (double f : inst.features) out << format_full(f) << ',';
        out << inst.label << '\n';
    }
    write_file(path, out.str());
}

std::pair<Dataset, Dataset> split_train_test(const Dataset& d, double train_ratio,
                                             std::uint64_t seed) {
    if (!(train_ratio > 0.0 && train_ratio < 1.0))
        throw std::invalid_argument("train_ratio must lie in (0,1)");

    std::vector<int> train_ids;
    std::vector<int> test_ids;
    for (int label : {1, -1}) {
        auto ids = ids_of_label(d, label);
        Rng rng(mix_seed(seed, label == 1 ? 11 : 13));
        rng.shuffle(ids);
        const auto n = static_cast<long>(ids.size());
        const long n_train = std::lround(train_ratio * static_cast<double>(n));
        if (n_train <= 0 || n_train >= n) {
            std::ostringstream msg;
            msg << "ratio " << train_ratio << " leaves label " << label
                << " empty on one side";
            throw std::runtime_error(msg.str());
        }
        train_ids.insert(train_ids.end(), ids.begin(), ids.begin() + n_train);
        test_ids.insert(test_ids.end(), ids.begin() + n_train, ids.end());
    }
    return {subset_by_ids(d, std::move(train_ids), "_train"),
            subset_by_ids(d, std::move(test_ids), "_test")};
}

std::vector<std::pair<Dataset, Dataset>> kfold(const Dataset& d, int k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("kfold requires k >= 2");
    for (int label : {1, -1}) {
        if (d.count_label(label) < k) {
            std::ostringstream msg;
            msg << "label " << label << " has fewer than k=" << k << " instances";
            throw std::runtime_error(msg.str());
        }
    }

    // Round-robin dealing with a cursor persisting across classes keeps both
    // the per-class counts and the fold totals within one of each other.
    std::vector<std::vector<int>> fold_ids(static_cast<std::size_t>(k));
    std::size_t cursor = 0;
    for (int label : {1, -1}) {
        auto ids = ids_of_label(d, label);
        Rng rng(mix_seed(seed, label == 1 ? 17 : 19));
        rng.shuffle(ids);
        for (int id : ids) fold_ids[cursor++ % static_cast<std::size_t>(k)].push_back(id);
    }

    std::vector<std::pair<Dataset, Dataset>> folds;
    folds.reserve(static_cast<std::size_t>(k));
    for (int f = 0; f < k; ++f) {
        std::vector<int> train_ids;
        for (int g = 0; g < k; ++g)
            if (g != f)
                train_ids.insert(train_ids.end(), fold_ids[static_cast<std::size_t>(g)].begin(),
                                 fold_ids[static_cast<std::size_t>(g)].end());
        const std::string tag = "_fold" + std::to_string(f);
        folds.emplace_back(subset_by_ids(d, train_ids, tag + "_train"),
                           subset_by_ids(d, fold_ids[static_cast<std::size_t>(f)], tag + "_test"));
    }
    return folds;
}

ClassSplit make_class_split(const Dataset& train, double s_fraction, std::uint64_t seed) {
    if (!(s_fraction > 0.0 && s_fraction <= 1.0))
        throw std::invalid_argument("s_fraction must lie in (0,1]");

    auto pos_ids = ids_of_label(train, 1);
    auto neg_ids = ids_of_label(train, -1);
    const long total =
        std::lround(s_fraction * static_cast<double>(train.instances.size()));

    // Largest-remainder apportionment of `total` across the two classes.
    const double want_pos = s_fraction * static_cast<double>(pos_ids.size());
    const double want_neg = s_fraction * static_cast<double>(neg_ids.size());
    long take_pos = static_cast<long>(std::floor(want_pos));
    long take_neg = static_cast<long>(std::floor(want_neg));
    long leftovers = total - take_pos - take_neg;  // 0, 1 or 2
    bool pos_first = (want_pos - std::floor(want_pos)) >= (want_neg - std::floor(want_neg));
    while (leftovers-- > 0) {
        if (pos_first && take_pos < static_cast<long>(pos_ids.size()))
            ++take_pos;
        else
            ++take_neg;
        pos_first = !pos_first;
    }
    take_pos = std::min(take_pos, static_cast<long>(pos_ids.size()));
    take_neg = std::min(take_neg, static_cast<long>(neg_ids.size()));

    Rng rng_pos(mix_seed(seed, 23));
    Rng rng_neg(mix_seed(seed, 29));
    rng_pos.shuffle(pos_ids);
    rng_neg.shuffle(neg_ids);

    std::vector<int> s_ids(pos_ids.begin(), pos_ids.begin() + take_pos);
    s_ids.insert(s_ids.end(), neg_ids.begin(), neg_ids.begin() + take_neg);
    std::vector<int> x0_ids(pos_ids.begin() + take_pos, pos_ids.end());
    std::vector<int> x1_ids(neg_ids.begin() + take_neg, neg_ids.end());

    if (x0_ids.empty() || x1_ids.empty())
        throw std::runtime_error("s_fraction leaves a class pool empty");

    ClassSplit cs;
    cs.x0 = subset_by_ids(train, std::move(x0_ids), "").instances;
    cs.x1 = subset_by_ids(train, std::move(x1_ids), "").instances;
    cs.s = subset_by_ids(train, std::move(s_ids), "").instances;
    return cs;
}

MinMaxScaler MinMaxScaler::fit(const Dataset& train) {
    if (train.instances.empty()) throw std::invalid_argument("cannot fit scaler on empty data");
    MinMaxScaler sc;
    const auto m = static_cast<std::size_t>(train.feature_count);
    sc.mins.assign(m, std::numeric_limits<double>::infinity());
    sc.maxs.assign(m, -std::numeric_limits<double>::infinity());
    for (const auto& inst : train.instances) {
        for (std::size_t j = 0; j < m; ++j) {
            sc.mins[j] = std::min(sc.mins[j], inst.features[j]);
            sc.maxs[j] = std::max(sc.maxs[j], inst.features[j]);
        }
    }
    return sc;
}

Dataset MinMaxScaler::transform(const Dataset& d) const {
    Dataset out = d;
    for (auto& inst : out.instances) {
        for (std::size_t j = 0; j < mins.size(); ++j) {
            const double range = maxs[j] - mins[j];
            inst.features[j] = (range > 0.0) ? (inst.features[j] - mins[j]) / range : 0.0;
        }
    }
    return out;
}

}  // namespace spantree
