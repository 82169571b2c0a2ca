#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fraudclust/agglo.hpp"
#include "fraudclust/distance.hpp"
#include "fraudclust/recagglo.hpp"
#include "fraudclust/schema.hpp"

namespace fraudclust {

// ---- cardinality-driven weights -------------------------------------------

struct AttributeCardinality {
    std::size_t card = 0;      // distinct non-null values
    std::size_t non_null = 0;  // n_i
    std::optional<double> r_inv;  // n_i / card_i, absent when n_i == 0
};

struct CardinalityStats {
    std::vector<AttributeCardinality> attributes;
    double median_r_inv = 0.0;  // over attributes with n_i >= 1
};

CardinalityStats cardinality_stats(const Dataset& data);

/// 1 + 2 * (1 - r_inv / (median_r_inv + r_inv)); in (1, 3) for finite r_inv > 0.
double cardinality_weight(double r_inv, double median_r_inv);

/// Attributes that are never non-null get weight 1. Throws on an empty dataset
/// or when every attribute is entirely null.
WeightVector cardinality_weights(const Dataset& data);
WeightVector cardinality_weights(const CardinalityStats& stats);

// ---- label-driven weights ------------------------------------------------

/// Sum of squared value frequencies of one attribute over `members`; null is
/// treated as its own value. Throws std::invalid_argument on an empty cluster.
double simpson_index(std::span<const std::size_t> members, std::size_t attribute, const Dataset& data);

enum class ClusterKind { pure_fraud = 0, pure_legit = 1, mixed = 2 };

/// Pure when every labeled member carries the same label; mixed needs at least
/// one fraud and one legitimate member. Unlabeled members are ignored; a
/// cluster with no labeled member has no kind.
std::optional<ClusterKind> classify_cluster(std::span<const std::size_t> members, const Dataset& data);

struct SimpsonProfile {
    std::array<std::size_t, 3> cluster_counts{};  // per ClusterKind
    /// mean_lambda[kind][attribute]; absent when no cluster of that kind exists.
    std::array<std::optional<std::vector<double>>, 3> mean_lambda;
    std::vector<double> raw_fl;  // mean(c_f) - mean(c_l)
    std::vector<double> raw_pm;  // mean(c_f) + mean(c_l) - 2 * mean(c_m); 0 without mixed clusters
    double norm_adv = 0.0;
    std::vector<double> adv_fl;
    std::vector<double> adv_pm;
};

/// Simpson profile over the non-singleton clusters of `cl`, using labeled
/// members only. Throws std::runtime_error without pure-fraud clusters or
/// without pure-legitimate clusters.
SimpsonProfile simpson_profile(const Clustering& cl, const Dataset& data);

/// Fills raw_fl/raw_pm/norm_adv/adv_* from the mean Simpson indices.
void compute_advantages(SimpsonProfile& profile);

/// 1 + clamp(adv_fl + adv_pm, 0, 2) per attribute.
WeightVector weights_from_profile(const SimpsonProfile& profile);

struct LabelWeights {
    WeightVector weights;
    SimpsonProfile profile;
    Clustering training_clustering;
};

inline constexpr double kLabelTrainingDMax = 0.56;

/// Clusters `data` with unit weights (rec_agglo with `params`; callers usually
/// set params.d_max = kLabelTrainingDMax), then derives weights from the
/// Simpson profile of the result.
LabelWeights label_weights(const Dataset& data, const RecAggloParams& params);

// ---- persistence ----------------------------------------------------------

/// `attribute_id=weight` lines in schema order.
void write_weights(const std::filesystem::path& path, const AttributeSchema& schema, const WeightVector& w);
/// Every schema attribute must appear exactly once; order may differ.
WeightVector read_weights(const std::filesystem::path& path, const AttributeSchema& schema);

}  // namespace fraudclust
