#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "fraudclust/agglo.hpp"
#include "fraudclust/distance.hpp"
#include "fraudclust/sample.hpp"
#include "fraudclust/schema.hpp"

namespace fraudclust {

struct RecAggloParams {
    std::size_t delta_a = 1000;  // sets larger than this are split by sampling
    double d_max = 0.5;          // maximum single-linkage fusion distance
    double rho_s = 0.5;
    double rho_mc = 6.0;
    std::uint64_t seed = 0;
    std::size_t max_recursion_guard = 64;
    NullPolicy nulls = NullPolicy::mismatch;
    bool normalized = false;
    LandmarkLinkage landmark_mode = LandmarkLinkage::seeded;

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
    std::size_t max_split_size() const noexcept { return 4 * delta_a; }
};

/// Fallback value for rho_mc when a sampling split yields a single cluster.
inline constexpr double kRetryRhoMc = 1.01;

struct RecAggloStats {
    std::size_t max_depth = 0;  // 0 = only the top-level call
    std::size_t sample_calls = 0;
    std::size_t agglo_calls = 0;
    std::size_t retries = 0;            // rho_mc fallback to 1.01
    std::size_t agglo_fallbacks = 0;    // unsplittable set below 4 * delta_a
    std::size_t remain_singletons = 0;  // remain elements the remain split left alone
    std::uint64_t distance_evaluations = 0;  // Hamming evaluations inside sampling
};

class RecursionLimitError : public std::runtime_error {
public:
    RecursionLimitError(std::size_t depth, std::vector<std::size_t> subset);
    std::size_t depth() const noexcept { return depth_; }
    /// Record indices of the set being clustered when the limit was hit.
    const std::vector<std::size_t>& subset() const noexcept { return subset_; }

private:
    std::size_t depth_;
    std::vector<std::size_t> subset_;
};

/// Recursive agglomerative clustering of an initial partition `C`.
///
/// Sets above delta_a are split with sample_clust and the pieces are processed
/// recursively; sets of at most delta_a elements go through agglo_clust. When
/// sampling cannot split a set, sampling is retried once with rho_mc = 1.01,
/// then plain agglo_clust is used if the set is below 4 * delta_a; otherwise the
/// set joins `remain`, which is clustered once at the end of the call.
///
/// Every non-singleton output cluster comes from agglo_clust, so it satisfies
/// the d_max goodness criterion. Output is canonical and depends only on the
/// input, the parameters and the seed (not on the thread count).
Clustering rec_agglo(const Clustering& C, const Dataset& data, const WeightVector& w, const RecAggloParams& p,
                     RecAggloStats* stats = nullptr);

/// rec_agglo on one initial cluster holding every record of `data`.
Clustering rec_agglo(const Dataset& data, const WeightVector& w, const RecAggloParams& p,
                     RecAggloStats* stats = nullptr);

struct GoodnessViolation {
    std::size_t cluster;  // position in the clustering
    double final_merge_distance;
};

struct GoodnessReport {
    std::vector<GoodnessViolation> violations;
    bool ok() const noexcept { return violations.empty(); }
};

/// Re-runs single linkage on each non-singleton cluster and reports those whose
/// final merge distance exceeds params.d_max. params.linkage is ignored.
GoodnessReport goodness_check(const Clustering& cl, const Dataset& data, const DistanceParams& params);

}  // namespace fraudclust
