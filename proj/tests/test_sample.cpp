#include <gtest/gtest.h>

#include <numeric>

#include "fraudclust/sample.hpp"
#include "oracles.hpp"

using namespace fraudclust;

namespace {

std::vector<std::size_t> iota(std::size_t n) {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

// Two blocks of identical records, values disjoint between blocks.
Dataset two_blocks(std::size_t a, std::size_t b) {
    std::vector<Record> recs;
    for (std::size_t i = 0; i < a + b; ++i) {
        const std::string v = i < a ? "A" : "B";
        recs.push_back({"r" + std::to_string(i), 0, Label::unlabeled, {v + "1", v + "2", v + "3", v + "4"}});
    }
    return Dataset(oracle::make_schema(4), std::move(recs));
}

}  // namespace

TEST(SampleSizing, LandmarkCount) {
    EXPECT_EQ(landmark_count(10000, 0.5), 50u);
    EXPECT_EQ(landmark_count(4, 1.0), 2u);
    EXPECT_EQ(landmark_count(1, 0.25), 1u);
    EXPECT_EQ(landmark_count(9, 100.0), 9u);
    EXPECT_EQ(landmark_count(2, 0.5), 1u);  // 0.707 rounds to 1
}

TEST(SampleSizing, MaxClust) {
    EXPECT_EQ(maxclust_count(30000, 6.0), 5000u);
    EXPECT_EQ(maxclust_count(5, 6.0), 1u);
    EXPECT_EQ(maxclust_count(100, 1.01), 99u);
}

TEST(SampleSizing, DistanceComputationFormula) {
    EXPECT_EQ(count_distance_computations(4, SampleParams{1.0, 6.0, 0}), 8u);
    EXPECT_EQ(count_distance_computations(10000, SampleParams{0.5, 6.0, 0}), 500000u);
}

TEST(SampleClust, InstrumentedCountMatchesFormula) {
    const auto data = oracle::random_dataset(1000, 10, 4, 3);
    const HammingKernel k(WeightVector::unit(10), NullPolicy::mismatch);
    for (auto mode : {LandmarkLinkage::seeded, LandmarkLinkage::embedding}) {
        const SampleParams p{0.5, 6.0, 17, mode};
        const auto res = sample_clust(iota(1000), data, k, p);
        EXPECT_EQ(res.distance_evaluations, count_distance_computations(1000, p));
        EXPECT_EQ(res.landmarks.size(), landmark_count(1000, 0.5));
    }
}

TEST(SampleClust, TwoIdenticalBlocksSplitExactlyForAnySeed) {
    const auto data = two_blocks(30, 50);
    const HammingKernel k(WeightVector::unit(4), NullPolicy::mismatch);
    std::vector<std::size_t> a(30), b(50);
    std::iota(a.begin(), a.end(), 0);
    std::iota(b.begin(), b.end(), 30);
    for (auto mode : {LandmarkLinkage::seeded, LandmarkLinkage::embedding}) {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const auto res = sample_clust(iota(80), data, k, SampleParams{0.5, 6.0, seed, mode});
            ASSERT_EQ(oracle::as_sets(res.clustering), (std::vector<std::vector<std::size_t>>{a, b}))
                << "seed " << seed;
        }
    }
}

TEST(SampleClust, PartitionWithinBoundsAndDeterministic) {
    const auto data = oracle::random_dataset(600, 12, 5, 8, 0.05);
    const HammingKernel k(WeightVector::unit(12), NullPolicy::mismatch);
    std::vector<std::size_t> subset;
    for (std::size_t i = 0; i < 600; i += 2) subset.push_back(i);
    for (auto mode : {LandmarkLinkage::seeded, LandmarkLinkage::embedding}) {
        for (double rho_mc : {1.01, 2.0, 6.0}) {
            const SampleParams p{0.5, rho_mc, 99, mode};
            const auto r1 = sample_clust(subset, data, k, p);
            const auto r2 = sample_clust(subset, data, k, p);
            EXPECT_TRUE(is_partition_of(r1.clustering, subset));
            EXPECT_LE(r1.clustering.size(), std::max(r1.c_max, r1.landmarks.size()));
            EXPECT_EQ(r1.clustering, r2.clustering);
            EXPECT_EQ(r1.landmarks, r2.landmarks);
            for (const auto& c : r1.clustering.clusters) EXPECT_EQ(c.provenance, Provenance::sample);
            for (std::size_t l : r1.landmarks) EXPECT_TRUE(std::binary_search(subset.begin(), subset.end(), l));
        }
    }
}

TEST(SampleClust, SeededModeKeepsOneLandmarkPerCluster) {
    const auto data = oracle::random_dataset(400, 16, 6, 21);
    const HammingKernel k(WeightVector::unit(16), NullPolicy::mismatch);
    const auto res = sample_clust(iota(400), data, k, SampleParams{1.0, 6.0, 5, LandmarkLinkage::seeded});
    const auto where = res.clustering.assignment(400);
    std::vector<int> landmarks_in(res.clustering.size(), 0);
    for (std::size_t l : res.landmarks) ++landmarks_in[where[l]];
    for (int c : landmarks_in) EXPECT_LE(c, 1);
    // c_max = 66 and 20 landmarks: 46 elements are left on their own, the
    // farthest ones from any landmark.
    EXPECT_EQ(res.clustering.size(), 66u);
}

TEST(SampleClust, Errors) {
    const auto data = oracle::random_dataset(10, 3, 2, 1);
    const HammingKernel k(WeightVector::unit(3), NullPolicy::mismatch);
    EXPECT_THROW(sample_clust(std::vector<std::size_t>{1}, data, k, SampleParams{}), std::invalid_argument);
    EXPECT_THROW(sample_clust(iota(10), data, k, SampleParams{0.0, 6.0, 0}), std::invalid_argument);
    EXPECT_THROW(sample_clust(iota(10), data, k, SampleParams{0.5, 1.0, 0}), std::invalid_argument);
    EXPECT_THROW(sample_clust(std::vector<std::size_t>{0, 10}, data, k, SampleParams{}), std::out_of_range);
}

TEST(Rng, StreamIsFixed) {
    Rng a(123), b(123);
    for (int i = 0; i < 100; ++i) ASSERT_EQ(a.next(), b.next());
    Rng r(0);
    EXPECT_EQ(r.next(), 0xE220A8397B1DCDAFULL);  // published SplitMix64 output for seed 0
    Rng s(5);
    const auto pick = sample_without_replacement(100, 10, s);
    EXPECT_EQ(pick.size(), 10u);
    EXPECT_TRUE(std::is_sorted(pick.begin(), pick.end()));
    EXPECT_EQ(std::adjacent_find(pick.begin(), pick.end()), pick.end());
    EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
}
