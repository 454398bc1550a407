#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace spantree {

// One labeled feature vector. `id` is the row index in the source dataset
// and stays stable through splits and folds.
struct Instance {
    std::vector<double> features;
    int label = 1;  // +1 or -1
    int id = 0;

    bool operator==(const Instance&) const = default;
};

struct Dataset {
    std::vector<Instance> instances;
    int feature_count = 0;
    std::string name;

    std::size_t size() const { return instances.size(); }
    long count_label(int label) const;
};

// Training material: per-class pools plus the probe subset drawn out of the
// training set before the class partition.
struct ClassSplit {
    std::vector<Instance> x0;  // label +1
    std::vector<Instance> x1;  // label -1
    std::vector<Instance> s;   // probe subset
};

// Loads a comma-separated file. label_column is a 0-based column index
// ("0", "4", ...), "-1" / "last" for the last column, or a header name.
// A header row is auto-detected: it is assumed present iff the first row
// has a non-numeric cell outside the label column. Labels equal to
// positive_label map to +1, everything else to -1.
Dataset load_csv(const std::string& path, const std::string& label_column,
                 const std::string& positive_label);

// Writes features followed by the numeric label, full precision. Reading
// the result back with load_csv reproduces every feature bit-exactly.
void write_csv(const Dataset& d, const std::string& path);

// Stratified train/test split; per-class proportions preserved within one
// instance. Both sides keep source ids, ordered ascending.
std::pair<Dataset, Dataset> split_train_test(const Dataset& d, double train_ratio,
                                             std::uint64_t seed);

// k stratified folds; every instance lands in exactly one test fold.
std::vector<std::pair<Dataset, Dataset>> kfold(const Dataset& d, int k,
                                               std::uint64_t seed);

// Draws the probe subset S (stratified, size round(s_fraction * |train|))
// and splits the remainder by label.
ClassSplit make_class_split(const Dataset& train, double s_fraction,
                            std::uint64_t seed);

// Optional per-feature min-max scaling, fitted on the training side only.
// Constant features map to 0.
struct MinMaxScaler {
    std::vector<double> mins;
    std::vector<double> maxs;

    static MinMaxScaler fit(const Dataset& train);
    Dataset transform(const Dataset& d) const;
};

}  // namespace spantree
