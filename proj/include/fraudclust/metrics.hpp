#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "fraudclust/agglo.hpp"
#include "fraudclust/kvfile.hpp"
#include "fraudclust/schema.hpp"

namespace fraudclust {

/// An exact count ratio. A zero denominator means "undefined", never 0.
struct Ratio {
    std::uint64_t num = 0;
    std::uint64_t den = 0;

    bool defined() const noexcept { return den != 0; }
    /// NaN when undefined.
    double value() const noexcept;
    /// Decimal value, or "undefined".
    std::string str() const;

    bool operator==(const Ratio&) const = default;
};

std::vector<Label> labels_of(const Dataset& data);

/// Majority label of a cluster; ties resolve to fraud.
Label majority_label(std::uint64_t frauds, std::uint64_t legit) noexcept;

/// sum(s_i - m_i) / sum(s_i) where s_i counts the labeled (fraud or legitimate)
/// members of cluster i and m_i the size of its majority class. Unlabeled
/// records are skipped. Throws std::invalid_argument on an empty clustering.
Ratio impurity(const Clustering& cl, std::span<const Label> labels);

/// Fraction of frauds sitting in clusters of size >= 2. With a nonempty `mask`,
/// only records whose mask entry is true are counted (CFR_u uses the O_u mask).
/// Cluster size always counts every member.
Ratio cfr(const Clustering& cl, std::span<const Label> labels, const std::vector<bool>& mask = {});

/// Legitimate-order analog of cfr.
Ratio clr(const Clustering& cl, std::span<const Label> labels, const std::vector<bool>& mask = {});

/// Per-record "member of a cluster of size >= 2" flags for records [0, n).
std::vector<bool> clustered_flags(const Clustering& cl, std::size_t n);

struct Confusion {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;

    bool operator==(const Confusion&) const = default;
};

struct DetectionMetrics {
    Confusion counts;
    std::uint64_t clustered_frauds = 0;
    std::uint64_t clustered_tp = 0;
    Ratio recall_clust;  // clustered_tp / clustered_frauds
    Ratio recall_final;  // tp / (tp + fn)
    Ratio precision;     // tp / (tp + fp)
    Ratio fpr;           // fp / (fp + tn)
};

DetectionMetrics detection_metrics(const Confusion& counts, std::uint64_t clustered_frauds,
                                   std::uint64_t clustered_tp);

/// Confusion counts over records with mask[i] (all records when mask is empty)
/// labeled fraud or legitimate.
DetectionMetrics detection_metrics(const std::vector<bool>& predicted, std::span<const Label> labels,
                                   const std::vector<bool>& clustered, const std::vector<bool>& mask = {});

struct GridSearchRow {
    double rho_mc = 0.0;
    double rho_s = 0.0;
    double impurity = 0.0;
    double cfr = 0.0;
    double time_s = 0.0;
    double score = 0.0;
    bool best = false;
};

/// Sets score = I_hat + CFR_hat + t_hat on every row (min-max normalized,
/// CFR reversed) and marks the lowest score as best. Rows whose rho_mc is in
/// `excluded_time_rho_mc` do not enter the min/max of t, so their t_hat may
/// exceed 1; it is floored at 0. A metric that is constant across the
/// normalization rows contributes 0.
void performance_score(std::vector<GridSearchRow>& rows, std::span<const double> excluded_time_rho_mc);
void performance_score(std::vector<GridSearchRow>& rows);

struct MetricsReport {
    std::size_t records = 0;
    std::size_t cluster_count = 0;  // clusters of size >= 2
    std::size_t singleton_count = 0;
    Ratio impurity;
    Ratio cfr;
    Ratio cfr_u;
    Ratio clr;
    DetectionMetrics detection;
    bool has_detection = false;
    double wall_time_s = 0.0;
    std::size_t recursion_depth = 0;

    KeyValues to_key_values() const;
    void write(const std::filesystem::path& path) const;
};

}  // namespace fraudclust
