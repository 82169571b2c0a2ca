#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "fraudclust/agglo.hpp"
#include "fraudclust/schema.hpp"

namespace fraudclust {

/// Where a record of a screening run comes from.
enum class Origin {
    window,      // O_u: the unlabeled orders being screened
    background,  // O_f: earlier orders with known labels
};

/// Unlabeled records are window orders, labeled ones are background.
std::vector<Origin> origins_from_labels(const Dataset& data);

struct Verdict {
    std::size_t record = 0;  // index into the dataset
    std::string record_id;
    bool flagged = false;
    std::size_t cluster_id = 0;         // position in the clustering
    std::size_t known_fraud_count = 0;  // background frauds in that cluster
};

/// One verdict per window record, in record order. A window record is flagged
/// iff its cluster has at least two members and holds at least one background
/// record labeled fraud. Background records get no verdict.
std::vector<Verdict> label_propagation(const Clustering& cl, const Dataset& data, const std::vector<Origin>& origins);

/// Per-record flags (false for background records).
std::vector<bool> flagged_mask(const std::vector<Verdict>& verdicts, std::size_t n);

struct ClusterReportRow {
    std::size_t cluster_id = 0;
    std::size_t size = 0;
    std::size_t known_fraud_count = 0;
    std::size_t window_count = 0;
    std::size_t flagged_count = 0;
};

/// Non-singleton clusters ordered by known_fraud_count desc, then size desc,
/// then cluster_id.
std::vector<ClusterReportRow> cluster_report(const Clustering& cl, const Dataset& data,
                                             const std::vector<Origin>& origins);

/// record_id,flagged,cluster_id,known_fraud_count
void write_verdicts(const std::filesystem::path& path, const std::vector<Verdict>& verdicts);
/// cluster_id,size,known_fraud_count,window_count,flagged_count
void write_cluster_report(const std::filesystem::path& path, const std::vector<ClusterReportRow>& rows);

}  // namespace fraudclust
