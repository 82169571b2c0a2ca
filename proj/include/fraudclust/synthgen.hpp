#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "fraudclust/schema.hpp"

namespace fraudclust {

struct GeneratorConfig {
    std::uint64_t seed = 1;
    std::size_t n_legit = 10000;
    std::size_t n_fraud = 5000;
    std::size_t n_campaigns = 50;
    std::size_t campaign_size_min = 10;
    std::size_t campaign_size_max = 250;

    /// Probability that a campaign member reuses the campaign value of an
    /// attribute, indexed by AttributeCategory.
    std::array<double, kCategoryCount> overlap = {0.3, 0.7, 0.9, 0.4, 0.9};
    /// Fraction of campaign members that copy the campaign values outright.
    double core_fraction = 0.2;
    /// Probability that a legitimate order repeats an earlier legitimate value.
    double legit_repeat_prob = 0.05;
    /// Probability that a legitimate order comes from a returning customer: a
    /// copy of an earlier legitimate order with each cell redrawn with
    /// probability returning_change_prob.
    double returning_prob = 0.1;
    double returning_change_prob = 0.3;
    /// Probability that a non-core cell is missing.
    double null_prob = 0.02;

    /// Pool size per attribute; empty means default_cardinalities(schema).
    std::vector<std::uint64_t> cardinality;

    std::int64_t start_time = 1514764800;  // 2018-01-01T00:00:00Z
    std::int64_t span_days = 90;
    std::int64_t campaign_days_min = 1;
    std::int64_t campaign_days_max = 10;

    /// Throws std::invalid_argument on out-of-range fields or when no
    /// campaign sizes within the size range can sum to n_fraud.
    void validate(const AttributeSchema& schema) const;
};

/// Value pool sizes keyed on the attribute id (ids, emails and card numbers
/// effectively unique, zip codes 5000, countries 5, and so on). Unknown ids get 1000.
std::vector<std::uint64_t> default_cardinalities(const AttributeSchema& schema);

struct GeneratedData {
    Dataset data;
    std::vector<std::int64_t> campaign;  // per record; -1 for legitimate orders
};

/// Records sorted by timestamp with ids o0000001, o0000002, ... Deterministic
/// under cfg.seed. Fraud records are labeled F, legitimate ones L.
GeneratedData generate(const GeneratorConfig& cfg, const AttributeSchema& schema);

/// record_id,campaign_id
void write_ground_truth(const std::filesystem::path& path, const GeneratedData& g);

}  // namespace fraudclust
