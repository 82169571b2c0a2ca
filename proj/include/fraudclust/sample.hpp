#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fraudclust/agglo.hpp"
#include "fraudclust/distance.hpp"
#include "fraudclust/schema.hpp"

namespace fraudclust {

/// How the landmark-by-element distance matrix is turned into a dendrogram.
enum class LandmarkLinkage {
    /// Each element becomes the vector of its distances to the landmarks;
    /// single linkage runs on Euclidean distances between those vectors.
    /// O(m^2 * n) work.
    embedding,
    /// Single linkage over the computed landmark-element distances with each
    /// landmark seeding its own cluster: elements with identical landmark
    /// profiles are joined first, then the remaining groups join their nearest
    /// landmark, closest first, until at most c_max clusters are left.
    /// O(n * m) distance work plus an O(m log m) sort.
    seeded,
};

struct SampleParams {
    double rho_s = 0.5;   // sample size = rho_s * sqrt(m)
    double rho_mc = 6.0;  // c_max = m / rho_mc
    std::uint64_t seed = 0;
    LandmarkLinkage mode = LandmarkLinkage::seeded;
};

struct SampleResult {
    Clustering clustering;               // record indices, provenance = sample
    std::vector<std::size_t> landmarks;  // record indices, ascending
    std::size_t c_max = 0;
    std::uint64_t distance_evaluations = 0;  // measured, not derived
};

/// clamp(round_half_up(rho_s * sqrt(m)), 1, m)
std::size_t landmark_count(std::size_t m, double rho_s);
/// max(1, floor(m / rho_mc))
std::size_t maxclust_count(std::size_t m, double rho_mc);
/// landmark_count(m) * m: the Hamming evaluations sample_clust performs.
std::uint64_t count_distance_computations(std::size_t m, const SampleParams& p);

/// Splits `c` into at most c_max clusters using distances to a random sample
/// of landmarks drawn without replacement from `c` (positions in `c`, seeded
/// by p.seed). No goodness guarantee. Throws std::invalid_argument if |c| < 2
/// or the parameters are out of range.
SampleResult sample_clust(std::span<const std::size_t> c, const Dataset& data, const HammingKernel& kernel,
                          const SampleParams& p);

Clustering sample_clust(std::span<const std::size_t> c, const Dataset& data, const WeightVector& w,
                        const SampleParams& p);

}  // namespace fraudclust
