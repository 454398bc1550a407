// The parallel kernels must produce bit-identical results to the serial
// reference paths, independent of thread count.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#ifdef _OPENMP
#include <omp.h>
#endif

#include "spantree/inference.hpp"
#include "spantree/training.hpp"
#include "support/fixtures.hpp"

using namespace spantree;

namespace {

struct ThreadGuard {
#ifdef _OPENMP
    explicit ThreadGuard(int n) { omp_set_num_threads(n); }
    ~ThreadGuard() { omp_set_num_threads(omp_get_num_procs()); }
#else
    explicit ThreadGuard(int) {}
#endif
};

}  // namespace

TEST_CASE("parallel training equals the serial reference") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const auto d = testing::make_blobs(25, seed, 3, 4.0);  // partial overlap
        const auto split = make_class_split(d, 0.3, seed + 10);
        HyperParams p;
        p.gamma = 3;
        p.seed = seed;

        const auto reference = train_serial(split, p);
        for (int threads : {1, 2, 4}) {
            ThreadGuard guard(threads);
            const auto parallel = train(split, p);
            CHECK(parallel == reference);
        }
    }
}

TEST_CASE("parallel batch classification equals the serial reference") {
    const auto d = testing::make_blobs(25, 11, 2, 3.0);
    const auto split = make_class_split(d, 0.25, 21);
    HyperParams p;
    p.gamma = 3;
    const auto model = train_serial(split, p);

    Rng rng(333);
    std::vector<std::vector<double>> zs;
    for (int i = 0; i < 60; ++i) zs.push_back(testing::random_point(rng, 2, 5.0));

    const auto reference = classify_batch_serial(zs, model);
    for (int threads : {1, 2, 4}) {
        ThreadGuard guard(threads);
        const auto parallel = classify_batch(zs, model);
        REQUIRE(parallel.size() == reference.size());
        for (std::size_t i = 0; i < parallel.size(); ++i) CHECK(parallel[i] == reference[i]);
    }
}

TEST_CASE("parallel batch propagates the first failing item") {
    const auto d = testing::make_blobs(15, 13);
    const auto split = make_class_split(d, 0.25, 23);
    const auto model = train_serial(split, HyperParams{});
    std::vector<std::vector<double>> zs = {{0.0, 0.0}, {1.0}, {2.0, 2.0}};
    ThreadGuard guard(2);
    CHECK_THROWS_WITH_AS(classify_batch(zs, model), doctest::Contains("item 1"),
                         std::runtime_error);
}
