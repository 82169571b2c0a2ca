#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fraudclust/schema.hpp"

namespace fraudclust {

/// Per-attribute nonnegative weights, one per schema attribute.
class WeightVector {
public:
    WeightVector() = default;
    /// Throws std::invalid_argument on a negative or non-finite weight.
    explicit WeightVector(std::vector<double> w);

    static WeightVector unit(std::size_t d) { return WeightVector(std::vector<double>(d, 1.0)); }

    std::size_t size() const noexcept { return w_.size(); }
    double operator[](std::size_t i) const { return w_[i]; }
    const std::vector<double>& values() const noexcept { return w_; }
    double sum() const noexcept;

    bool operator==(const WeightVector&) const = default;

private:
    std::vector<double> w_;
};

enum class NullPolicy {
    mismatch,  // null vs anything, including null vs null, counts as a mismatch
    ignore,    // a position where either side is null contributes nothing
};

enum class LinkageMethod { single, complete };

struct DistanceParams {
    WeightVector weights;
    LinkageMethod linkage = LinkageMethod::single;
    double d_max = 0.5;
    NullPolicy nulls = NullPolicy::mismatch;
    /// Divide by sum(w) instead of d, bounding the distance by 1.
    bool normalized = false;
};

/// Weighted Hamming distance: (1/d) * sum_i w_i * [u_i != v_i].
/// Throws std::invalid_argument when lengths disagree.
double hamming(const Record& u, const Record& v, const WeightVector& w, NullPolicy nulls = NullPolicy::mismatch,
               bool normalized = false);

/// Same distance over interned codes (Dataset::kNullCode marks null).
class HammingKernel {
public:
    HammingKernel(const WeightVector& w, NullPolicy nulls, bool normalized = false);
    explicit HammingKernel(const DistanceParams& p) : HammingKernel(p.weights, p.nulls, p.normalized) {}

    double operator()(std::span<const Dataset::Code> a, std::span<const Dataset::Code> b) const noexcept {
        double s = 0.0;
        const std::size_t d = w_.size();
        if (nulls_ == NullPolicy::mismatch) {
            for (std::size_t i = 0; i < d; ++i) {
                if (a[i] != b[i] || a[i] == Dataset::kNullCode) s += w_[i];
            }
        } else {
            for (std::size_t i = 0; i < d; ++i) {
                if (a[i] != b[i] && a[i] != Dataset::kNullCode && b[i] != Dataset::kNullCode) s += w_[i];
            }
        }
        return s / denom_;
    }

    double operator()(const Dataset& data, std::size_t i, std::size_t j) const noexcept {
        return (*this)(data.codes(i), data.codes(j));
    }

    std::size_t d() const noexcept { return w_.size(); }

private:
    std::vector<double> w_;
    NullPolicy nulls_;
    double denom_;
};

/// Dense row-major matrix of pairwise distances.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    DistanceMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return values_[r * cols_ + c]; }
    double& operator()(std::size_t r, std::size_t c) noexcept { return values_[r * cols_ + c]; }
    std::span<const double> row(std::size_t r) const noexcept { return {values_.data() + r * cols_, cols_}; }
    const std::vector<double>& values() const noexcept { return values_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

inline constexpr std::size_t kDefaultCellBudget = 1'000'000'000;

/// values(i, j) = distance(rows[i], cols[j]). Rows are computed in parallel; the
/// result does not depend on the thread count. Throws std::out_of_range on a
/// bad index and std::length_error when rows*cols exceeds `cell_budget`.
DistanceMatrix distance_matrix(std::span<const std::size_t> rows, std::span<const std::size_t> cols,
                               const Dataset& data, const HammingKernel& kernel,
                               std::size_t cell_budget = kDefaultCellBudget);

DistanceMatrix distance_matrix(std::span<const std::size_t> rows, std::span<const std::size_t> cols,
                               const Dataset& data, const WeightVector& w, NullPolicy nulls = NullPolicy::mismatch);

}  // namespace fraudclust
