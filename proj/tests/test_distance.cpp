#include <gtest/gtest.h>

#include <numeric>

#include "fraudclust/distance.hpp"
#include "oracles.hpp"

using namespace fraudclust;

namespace {

Record rec(std::vector<std::optional<std::string>> values) { return Record{"r", 0, Label::unlabeled, std::move(values)}; }

}  // namespace

TEST(WeightVector, Validation) {
    EXPECT_THROW(WeightVector({1.0, -0.5}), std::invalid_argument);
    EXPECT_THROW(WeightVector({std::numeric_limits<double>::infinity()}), std::invalid_argument);
    EXPECT_DOUBLE_EQ(WeightVector::unit(4).sum(), 4.0);
}

TEST(Hamming, IdenticalRecordsAreAtZero) {
    const auto r = rec({"a", "b", "c"});
    EXPECT_EQ(hamming(r, r, WeightVector({1, 2, 3})), 0.0);
}

TEST(Hamming, AllMismatchWithUnitWeightsIsOne) {
    std::vector<std::optional<std::string>> u, v;
    for (int i = 0; i < 37; ++i) {
        u.push_back("x" + std::to_string(i));
        v.push_back("y" + std::to_string(i));
    }
    EXPECT_DOUBLE_EQ(hamming(rec(u), rec(v), WeightVector::unit(37)), 1.0);
}

TEST(Hamming, WeightedSingleMismatch) {
    // d = 4, w = (1,3,1,1), mismatch on the second attribute only: 3/4.
    EXPECT_DOUBLE_EQ(hamming(rec({"a", "b", "c", "d"}), rec({"a", "X", "c", "d"}), WeightVector({1, 3, 1, 1})), 0.75);
}

TEST(Hamming, NullPolicies) {
    const auto u = rec({std::nullopt, "b"});
    const auto v = rec({std::nullopt, "b"});
    const WeightVector w({2, 1});
    EXPECT_DOUBLE_EQ(hamming(u, v, w, NullPolicy::mismatch), 1.0);  // null vs null mismatches
    EXPECT_DOUBLE_EQ(hamming(u, v, w, NullPolicy::ignore), 0.0);
    EXPECT_DOUBLE_EQ(hamming(u, rec({"a", "c"}), w, NullPolicy::ignore), 0.5);
    EXPECT_DOUBLE_EQ(hamming(u, rec({"a", "c"}), w, NullPolicy::mismatch, true), 1.0);
    EXPECT_THROW(hamming(u, rec({"a"}), w), std::invalid_argument);
}

TEST(Hamming, KernelMatchesStringVersionBitForBit) {
    const auto d = oracle::random_dataset(30, 9, 3, 5, 0.15);
    Rng rng(3);
    const WeightVector w(oracle::random_weights(9, rng));
    for (auto nulls : {NullPolicy::mismatch, NullPolicy::ignore}) {
        for (bool normalized : {false, true}) {
            const HammingKernel k(w, nulls, normalized);
            for (std::size_t i = 0; i < d.size(); ++i) {
                for (std::size_t j = 0; j < d.size(); ++j) {
                    ASSERT_EQ(k(d, i, j), hamming(d.record(i), d.record(j), w, nulls, normalized));
                    ASSERT_DOUBLE_EQ(k(d, i, j), oracle::hamming(d.record(i), d.record(j), w.values(),
                                                                 nulls == NullPolicy::mismatch, normalized));
                }
            }
        }
    }
}

TEST(DistanceMatrix, SingleCell) {
    const auto d = oracle::random_dataset(3, 4, 2, 1);
    const std::vector<std::size_t> one = {1};
    const auto D = distance_matrix(one, one, d, WeightVector::unit(4));
    ASSERT_EQ(D.rows(), 1u);
    ASSERT_EQ(D.cols(), 1u);
    EXPECT_EQ(D(0, 0), 0.0);
}

TEST(DistanceMatrix, SquareIsSymmetricWithZeroDiagonal) {
    const auto d = oracle::random_dataset(12, 6, 4, 2);
    std::vector<std::size_t> idx(12);
    std::iota(idx.begin(), idx.end(), 0);
    const auto D = distance_matrix(idx, idx, d, WeightVector::unit(6));
    for (std::size_t i = 0; i < 12; ++i) {
        EXPECT_EQ(D(i, i), 0.0);
        for (std::size_t j = 0; j < 12; ++j) EXPECT_EQ(D(i, j), D(j, i));
    }
}

TEST(DistanceMatrix, RectangularMatchesPairwiseCalls) {
    const auto d = oracle::random_dataset(10, 5, 3, 4, 0.1);
    const WeightVector w({1, 2, 3, 1.5, 0.5});
    const std::vector<std::size_t> rows = {7, 2};
    const std::vector<std::size_t> cols = {0, 9, 4};
    const auto D = distance_matrix(rows, cols, d, w);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) EXPECT_EQ(D(i, j), hamming(d.record(rows[i]), d.record(cols[j]), w));
    }
}

TEST(DistanceMatrix, Errors) {
    const auto d = oracle::random_dataset(4, 3, 2, 1);
    const std::vector<std::size_t> bad = {0, 4};
    const std::vector<std::size_t> ok = {0, 1, 2};
    const HammingKernel k(WeightVector::unit(3), NullPolicy::mismatch);
    EXPECT_THROW(distance_matrix(bad, ok, d, k), std::out_of_range);
    EXPECT_THROW(distance_matrix(ok, ok, d, k, 8), std::length_error);
}
