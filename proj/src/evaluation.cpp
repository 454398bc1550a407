#include "spantree/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "spantree/rng.hpp"
#include "spantree/util.hpp"

namespace spantree {

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& o) {
    tp += o.tp;
    fp += o.fp;
    tn += o.tn;
    fn += o.fn;
    return *this;
}

MetricReport compute_metrics(const ConfusionMatrix& cm) {
    if (cm.total() <= 0) throw std::invalid_argument("empty confusion matrix");

    const auto ratio = [](long num, long den) -> std::optional<double> {
        if (den == 0) return std::nullopt;
        return static_cast<double>(num) / static_cast<double>(den);
    };

    MetricReport r;
    r.accuracy = ratio(cm.tp + cm.tn, cm.total());
    r.sensitivity = ratio(cm.tp, cm.tp + cm.fn);
    r.specificity = ratio(cm.tn, cm.tn + cm.fp);
    r.precision = ratio(cm.tp, cm.tp + cm.fp);
    if (r.precision && r.sensitivity && (*r.precision + *r.sensitivity) > 0.0)
        r.f1 = 2.0 * *r.precision * *r.sensitivity / (*r.precision + *r.sensitivity);
    return r;
}

std::pair<double, std::vector<std::pair<double, double>>> roc_auc(
    const std::vector<ScoredLabel>& scored) {
    long pos = 0;
    long neg = 0;
    for (const auto& s : scored) (s.label > 0 ? pos : neg) += 1;
    if (pos == 0 || neg == 0)
        throw std::invalid_argument("roc_auc needs at least one instance of each class");

    std::vector<ScoredLabel> sorted = scored;
    std::sort(sorted.begin(), sorted.end(), [](const ScoredLabel& a, const ScoredLabel& b) {
        return a.score > b.score;
    });

    // Integer pair counts keep the statistic exactly equal to a brute-force
    // pairwise evaluation: auc = (2*gt + eq) / (2*P*N).
    long long gt2 = 0;  // pairs with score_pos > score_neg, doubled later
    long long eq = 0;
    std::vector<std::pair<double, double>> points;
    points.emplace_back(0.0, 0.0);

    long tp_cum = 0;
    long fp_cum = 0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        long gp = 0;
        long gn = 0;
        while (j < sorted.size() && sorted[j].score == sorted[i].score) {
            (sorted[j].label > 0 ? gp : gn) += 1;
            ++j;
        }
        // Positives in this group beat every negative with a strictly lower
        // score; ties within the group count half.
        gt2 += static_cast<long long>(gp) * (neg - fp_cum - gn);
        eq += static_cast<long long>(gp) * gn;
        tp_cum += gp;
        fp_cum += gn;
        points.emplace_back(static_cast<double>(fp_cum) / static_cast<double>(neg),
                            static_cast<double>(tp_cum) / static_cast<double>(pos));
        i = j;
    }

    const double auc = (2.0 * static_cast<double>(gt2) + static_cast<double>(eq)) /
                       (2.0 * static_cast<double>(pos) * static_cast<double>(neg));
    return {auc, points};
}

std::pair<ConfusionMatrix, std::vector<ScoredLabel>> evaluate_split(
    const TrainedModel& model, const Dataset& test, const InferOptions& opts) {
    std::vector<std::vector<double>> queries;
    queries.reserve(test.instances.size());
    for (const auto& inst : test.instances) queries.push_back(inst.features);

    const auto preds = classify_batch(queries, model, opts);

    ConfusionMatrix cm;
    std::vector<ScoredLabel> scored;
    scored.reserve(preds.size());
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const int truth = test.instances[i].label;
        const int guess = preds[i].label;
        if (truth > 0)
            (guess > 0 ? cm.tp : cm.fn) += 1;
        else
            (guess > 0 ? cm.fp : cm.tn) += 1;
        scored.push_back({preds[i].vote_share(), truth});
    }
    return {cm, scored};
}

namespace {

using Getter = std::optional<double> MetricReport::*;

constexpr Getter kMetricFields[] = {&MetricReport::accuracy,   &MetricReport::sensitivity,
                                    &MetricReport::specificity, &MetricReport::precision,
                                    &MetricReport::f1,          &MetricReport::auc};

MetricReport fold_stat(const std::vector<FoldReport>& folds,
                       double (*reduce)(const std::vector<double>&)) {
    MetricReport out;
    for (Getter field : kMetricFields) {
        std::vector<double> vals;
        for (const auto& f : folds)
            if (f.metrics.*field) vals.push_back(*(f.metrics.*field));
        if (!vals.empty()) out.*field = reduce(vals);
    }
    return out;
}

double reduce_mean(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc / static_cast<double>(v.size());
}

double reduce_min(const std::vector<double>& v) {
    return *std::min_element(v.begin(), v.end());
}

double reduce_max(const std::vector<double>& v) {
    return *std::max_element(v.begin(), v.end());
}

Dataset maybe_scaled(const Dataset& d, const MinMaxScaler* scaler) {
    return scaler ? scaler->transform(d) : d;
}

}  // namespace

CrossValidationResult cross_validate(const Dataset& d, const HyperParams& params, int k,
                                     const EvalOptions& opts) {
    validate(params, opts.gamma_cap);
    const auto folds = kfold(d, k, params.seed);

    CrossValidationResult cv;
    ConfusionMatrix pooled_cm;
    std::vector<ScoredLabel> pooled_scores;

    for (std::size_t f = 0; f < folds.size(); ++f) {
        const auto& [train_ds, test_ds] = folds[f];
        std::optional<MinMaxScaler> scaler;
        if (opts.scale) scaler = MinMaxScaler::fit(train_ds);

        const auto split = make_class_split(maybe_scaled(train_ds, scaler ? &*scaler : nullptr),
                                            params.s_fraction,
                                            mix_seed(params.seed, f + 1));
        const auto model =
            train(split, params, TrainOptions{opts.infer.literal_tiebreak, opts.gamma_cap});
        const auto [cm, scored] =
            evaluate_split(model, maybe_scaled(test_ds, scaler ? &*scaler : nullptr), opts.infer);

        FoldReport fr;
        fr.fold = static_cast<int>(f);
        fr.cm = cm;
        fr.metrics = compute_metrics(cm);
        const auto [auc, points] = roc_auc(scored);
        fr.metrics.auc = auc;
        fr.metrics.roc_points = points;
        cv.folds.push_back(std::move(fr));

        pooled_cm += cm;
        pooled_scores.insert(pooled_scores.end(), scored.begin(), scored.end());
    }

    cv.pooled = compute_metrics(pooled_cm);
    const auto [auc, points] = roc_auc(pooled_scores);
    cv.pooled.auc = auc;
    cv.pooled.roc_points = points;
    cv.mean = fold_stat(cv.folds, reduce_mean);
    cv.min = fold_stat(cv.folds, reduce_min);
    cv.max = fold_stat(cv.folds, reduce_max);
    return cv;
}

std::vector<SweepRow> train_ratio_sweep(const Dataset& d, const HyperParams& params,
                                        const std::vector<double>& ratios,
                                        const EvalOptions& opts) {
    validate(params, opts.gamma_cap);
    constexpr int kRepetitions = 5;

    std::vector<SweepRow> rows;
    for (std::size_t r = 0; r < ratios.size(); ++r) {
        SweepRow row;
        row.ratio = ratios[r];
        std::vector<double> accs;
        std::string first_error;
        for (int rep = 0; rep < kRepetitions; ++rep) {
            try {
                const std::uint64_t rep_seed = mix_seed(params.seed, (r + 1) * 100 + rep);
                const auto [train_ds, test_ds] = split_train_test(d, ratios[r], rep_seed);
                std::optional<MinMaxScaler> scaler;
                if (opts.scale) scaler = MinMaxScaler::fit(train_ds);

                const auto split =
                    make_class_split(maybe_scaled(train_ds, scaler ? &*scaler : nullptr),
                                     params.s_fraction, mix_seed(rep_seed, 1));
                const auto model = train(
                    split, params, TrainOptions{opts.infer.literal_tiebreak, opts.gamma_cap});
                const auto [cm, scored] = evaluate_split(
                    model, maybe_scaled(test_ds, scaler ? &*scaler : nullptr), opts.infer);
                accs.push_back(*compute_metrics(cm).accuracy);
            } catch (const std::exception& e) {
                if (first_error.empty()) first_error = e.what();
            }
        }
        if (accs.empty()) {
            row.ok = false;
            row.error = first_error;
        } else {
            row.ok = true;
            row.mean_accuracy = reduce_mean(accs);
            row.min_accuracy = reduce_min(accs);
            row.max_accuracy = reduce_max(accs);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

std::string cell(const std::optional<double>& v) {
    return v ? format_fixed(*v) : "undefined";
}

void metrics_row(std::ostringstream& out, const std::string& dataset,
                 const std::string& unit, const MetricReport& m) {
    out << dataset << ',' << unit << ',' << cell(m.accuracy) << ',' << cell(m.sensitivity)
        << ',' << cell(m.specificity) << ',' << cell(m.precision) << ',' << cell(m.f1) << ','
        << cell(m.auc) << '\n';
}

}  // namespace

std::string metrics_csv(const std::string& dataset_name, const CrossValidationResult& cv) {
    std::ostringstream out;
    out << "dataset,unit,accuracy,sensitivity,specificity,precision,f1,auc\n";
    for (const auto& f : cv.folds)
        metrics_row(out, dataset_name, "fold" + std::to_string(f.fold), f.metrics);
    metrics_row(out, dataset_name, "mean", cv.mean);
    metrics_row(out, dataset_name, "min", cv.min);
    metrics_row(out, dataset_name, "max", cv.max);
    metrics_row(out, dataset_name, "pooled", cv.pooled);
    return out.str();
}

std::string roc_tsv(const std::vector<std::pair<double, double>>& points) {
    std::ostringstream out;
    out << "fpr\ttpr\n";
    for (const auto& [fpr, tpr] : points)
        out << format_full(fpr) << '\t' << format_full(tpr) << '\n';
    return out.str();
}

std::string sweep_csv(const std::string& dataset_name, const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "dataset,ratio,status,mean_accuracy,min_accuracy,max_accuracy,error\n";
    for (const auto& row : rows) {
        out << dataset_name << ',' << format_fixed(row.ratio) << ',';
        if (row.ok) {
            out << "ok," << format_fixed(row.mean_accuracy) << ','
                << format_fixed(row.min_accuracy) << ',' << format_fixed(row.max_accuracy)
                << ",\n";
        } else {
            std::string err = row.error;
            std::replace(err.begin(), err.end(), ',', ';');
            out << "error,,,," << err << '\n';
        }
    }
    return out.str();
}

}  // namespace spantree
