#include "fraudclust/distance.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace fraudclust {

WeightVector::WeightVector(std::vector<double> w) : w_(std::move(w)) {
    for (double x : w_) {
        if (!std::isfinite(x) || x < 0.0) throw std::invalid_argument("weights must be finite and nonnegative");
    }
}

double WeightVector::sum() const noexcept { return std::accumulate(w_.begin(), w_.end(), 0.0); }

namespace {

double denominator(const WeightVector& w, bool normalized) {
    if (!normalized) return static_cast<double>(w.size());
    const double s = w.sum();
    return s > 0.0 ? s : 1.0;
}

}  // namespace

double hamming(const Record& u, const Record& v, const WeightVector& w, NullPolicy nulls, bool normalized) {
    const std::size_t d = w.size();
    if (u.values.size() != d || v.values.size() != d) {
        throw std::invalid_argument("hamming: record length does not match weight vector");
    }
    if (d == 0) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        const auto& a = u.values[i];
        const auto& b = v.values[i];
        bool differ;
        if (!a || !b) {
            differ = nulls == NullPolicy::mismatch;
        } else {
            differ = *a != *b;
        }
        if (differ) s += w[i];
    }
    return s / denominator(w, normalized);
}

HammingKernel::HammingKernel(const WeightVector& w, NullPolicy nulls, bool normalized)
    : w_(w.values()), nulls_(nulls), denom_(w.size() == 0 ? 1.0 : denominator(w, normalized)) {}

DistanceMatrix distance_matrix(std::span<const std::size_t> rows, std::span<const std::size_t> cols,
                               const Dataset& data, const HammingKernel& kernel, std::size_t cell_budget) {
    if (kernel.d() != data.d()) throw std::invalid_argument("distance_matrix: weight vector length != schema.d");
    for (std::size_t i : rows) {
        if (i >= data.size()) throw std::out_of_range("distance_matrix: row index " + std::to_string(i));
    }
    for (std::size_t j : cols) {
        if (j >= data.size()) throw std::out_of_range("distance_matrix: column index " + std::to_string(j));
    }
    if (!cols.empty() && rows.size() > cell_budget / cols.size()) {
        throw std::length_error("distance_matrix: " + std::to_string(rows.size()) + "x" +
                                std::to_string(cols.size()) + " exceeds the cell budget");
    }
    DistanceMatrix out(rows.size(), cols.size());
    const auto nr = static_cast<std::ptrdiff_t>(rows.size());
#pragma omp parallel for schedule(dynamic, 16) if (rows.size() * cols.size() > 65536)
    for (std::ptrdiff_t r = 0; r < nr; ++r) {
        const auto a = data.codes(rows[r]);
        for (std::size_t c = 0; c < cols.size(); ++c) out(r, c) = kernel(a, data.codes(cols[c]));
    }
    return out;
}

DistanceMatrix distance_matrix(std::span<const std::size_t> rows, std::span<const std::size_t> cols,
                               const Dataset& data, const WeightVector& w, NullPolicy nulls) {
    return distance_matrix(rows, cols, data, HammingKernel(w, nulls));
}

}  // namespace fraudclust
