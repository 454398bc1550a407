// Times the parallel training/classification kernels against their serial
// reference implementations and verifies they produce identical results.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "spantree/dataset.hpp"
#include "spantree/inference.hpp"
#include "spantree/training.hpp"
#include "support/fixtures.hpp"

using namespace spantree;

namespace {

double time_of(const std::function<void()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
    int per_class = 300;
    int dims = 8;
    int queries = 400;
    if (argc > 1) per_class = std::atoi(argv[1]);
    if (argc > 2) dims = std::atoi(argv[2]);
    if (argc > 3) queries = std::atoi(argv[3]);

#ifdef _OPENMP
    const int threads = omp_get_max_threads();
#else
    const int threads = 1;
#endif
    std::printf("workload: %d instances/class, %d dims, %d queries, %d thread(s)\n",
                per_class, dims, queries, threads);

    const auto d = testing::make_blobs(per_class, 1, dims, 6.0);
    const auto split = make_class_split(d, 0.2, 2);
    HyperParams p;
    p.gamma = 4;

    TrainedModel serial_model;
    TrainedModel parallel_model;
    const double t_train_serial = time_of([&] { serial_model = train_serial(split, p); });
    const double t_train_parallel = time_of([&] { parallel_model = train(split, p); });
    const bool train_match = serial_model == parallel_model;

    Rng rng(3);
    std::vector<std::vector<double>> zs;
    for (int i = 0; i < queries; ++i) zs.push_back(testing::random_point(rng, dims, 8.0));

    std::vector<Prediction> serial_preds;
    std::vector<Prediction> parallel_preds;
    const double t_clf_serial =
        time_of([&] { serial_preds = classify_batch_serial(zs, serial_model); });
    const double t_clf_parallel =
        time_of([&] { parallel_preds = classify_batch(zs, parallel_model); });
    const bool clf_match = serial_preds == parallel_preds;

    std::printf("%-22s %10s %10s %9s %8s\n", "kernel", "serial_s", "parallel_s", "speedup",
                "match");
    std::printf("%-22s %10.3f %10.3f %8.2fx %8s\n", "train", t_train_serial, t_train_parallel,
                t_train_serial / t_train_parallel, train_match ? "yes" : "NO");
    std::printf("%-22s %10.3f %10.3f %8.2fx %8s\n", "classify_batch", t_clf_serial,
                t_clf_parallel, t_clf_serial / t_clf_parallel, clf_match ? "yes" : "NO");

    return (train_match && clf_match) ? 0 : 1;
}
