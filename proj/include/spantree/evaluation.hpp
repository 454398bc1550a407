#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spantree/dataset.hpp"
#include "spantree/inference.hpp"
#include "spantree/training.hpp"

namespace spantree {

struct ConfusionMatrix {
    long tp = 0;
    long fp = 0;
    long tn = 0;
    long fn = 0;

    long total() const { return tp + fp + tn + fn; }
    ConfusionMatrix& operator+=(const ConfusionMatrix& o);
};

// Metrics are optional: a 0/0 ratio is reported as undefined, never as 0 or 1.
struct MetricReport {
    std::optional<double> accuracy;
    std::optional<double> sensitivity;
    std::optional<double> specificity;
    std::optional<double> precision;
    std::optional<double> f1;
    std::optional<double> auc;
    std::vector<std::pair<double, double>> roc_points;  // (fpr, tpr)
};

MetricReport compute_metrics(const ConfusionMatrix& cm);

struct ScoredLabel {
    double score = 0.0;
    int label = 0;  // +1 or -1
};

// Mann-Whitney AUC over all positive/negative pairs (ties count half) plus
// the threshold-sweep ROC vertices from (0,0) to (1,1).
std::pair<double, std::vector<std::pair<double, double>>> roc_auc(
    const std::vector<ScoredLabel>& scored);

struct EvalOptions {
    InferOptions infer;
    bool scale = false;
    int gamma_cap = kDefaultGammaCap;
};

struct FoldReport {
    int fold = 0;
    ConfusionMatrix cm;
    MetricReport metrics;
};

struct CrossValidationResult {
    std::vector<FoldReport> folds;
    MetricReport pooled;  // summed confusion + concatenated scores
    MetricReport mean;    // per-metric mean over folds (defined values only)
    MetricReport min;
    MetricReport max;
};

// Trains and evaluates one split; exposed for protocol code and tests.
std::pair<ConfusionMatrix, std::vector<ScoredLabel>> evaluate_split(
    const TrainedModel& model, const Dataset& test, const InferOptions& opts = {});

CrossValidationResult cross_validate(const Dataset& d, const HyperParams& params, int k,
                                     const EvalOptions& opts = {});

struct SweepRow {
    double ratio = 0.0;
    bool ok = false;
    std::string error;
    double mean_accuracy = 0.0;
    double min_accuracy = 0.0;
    double max_accuracy = 0.0;
};

// Re-evaluates the pipeline at each train ratio with 5 seeded repetitions
// standing in for folds. Invalid ratios yield flagged rows, not failures.
std::vector<SweepRow> train_ratio_sweep(const Dataset& d, const HyperParams& params,
                                        const std::vector<double>& ratios,
                                        const EvalOptions& opts = {});

std::string metrics_csv(const std::string& dataset_name, const CrossValidationResult& cv);
std::string roc_tsv(const std::vector<std::pair<double, double>>& points);
std::string sweep_csv(const std::string& dataset_name, const std::vector<SweepRow>& rows);

}  // namespace spantree
