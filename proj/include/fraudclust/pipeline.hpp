#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fraudclust/agglo.hpp"
#include "fraudclust/detect.hpp"
#include "fraudclust/distance.hpp"
#include "fraudclust/metrics.hpp"
#include "fraudclust/recagglo.hpp"
#include "fraudclust/schema.hpp"

namespace fraudclust {

enum class WeightStrategy { unit, cardinality, label, file };

std::string_view to_string(WeightStrategy s);
WeightStrategy parse_weight_strategy(std::string_view s);

/// Screening window. O_u holds the orders placed in
/// [ou_start, ou_start + ou_days). O_f holds the frauds placed in the of_days
/// before ou_start whose label is already known, i.e. placed before
/// ou_start - label_delay_days.
struct WindowSpec {
    bool enabled = false;
    std::int64_t ou_start = 0;  // unix seconds
    std::int64_t ou_days = 1;
    std::int64_t of_days = 60;
    std::int64_t label_delay_days = 1;

    void validate() const;
};

struct PipelineConfig {
    std::vector<std::filesystem::path> inputs;
    std::filesystem::path schema_path;  // empty: default schema
    std::string null_marker;
    WeightStrategy weights = WeightStrategy::unit;
    std::filesystem::path weights_file;    // WeightStrategy::file
    std::filesystem::path training_input;  // WeightStrategy::label; empty: labeled input records
    RecAggloParams params;
    WindowSpec window;
    bool detect = true;
    std::filesystem::path output_dir = ".";
};

/// A module error annotated with the pipeline stage that raised it.
class PipelineError : public std::runtime_error {
public:
    PipelineError(std::string stage, const std::string& what)
        : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

AttributeSchema load_schema(const PipelineConfig& cfg);

/// Loads and concatenates every input, then drops repeated record ids.
Dataset load_inputs(const PipelineConfig& cfg, const AttributeSchema& schema);

/// One record per record_id: the first labeled copy, or the first copy when
/// no copy is labeled. Keeps first-occurrence order.
Dataset dedup_by_record_id(const Dataset& data);

/// What gets clustered in one screening run.
struct ScreeningSet {
    Dataset data;                // window records have their label cleared
    std::vector<Label> truth;    // labels as loaded, for evaluation
    std::vector<Origin> origins;
    std::vector<bool> window_mask;
};

/// Without a window every record is clustered and origins follow the labels.
/// Throws if an O_f record is not strictly before the O_u window.
ScreeningSet select_window(const Dataset& data, const WindowSpec& window);

/// Labeled records whose label is known before the window opens (all labeled
/// records without a window).
Dataset label_training_pool(const Dataset& data, const WindowSpec& window);

/// Weights for clustering `data`. The label strategy trains on
/// cfg.training_input when set, else on `training_pool` (default: the labeled
/// records of `data`).
WeightVector resolve_weights(const PipelineConfig& cfg, const Dataset& data, const Dataset* training_pool = nullptr);

struct ClusterRun {
    Clustering clustering;
    RecAggloStats stats;
    MetricsReport report;
    std::vector<Verdict> verdicts;
    std::vector<ClusterReportRow> cluster_report;
};

/// rec_agglo plus metrics (and detection when `detect`), all in memory.
/// Wall time covers rec_agglo only.
ClusterRun cluster_screening_set(const ScreeningSet& set, const WeightVector& w, const RecAggloParams& p, bool detect);

/// record_id,cluster_id in dataset order; cluster ids index the clustering.
void write_clusters_csv(const std::filesystem::path& path, const Dataset& data, const Clustering& cl);

/// load, window, weights, rec_agglo, metrics, detect. Writes clusters.csv,
/// metrics.txt and, with detection, verdicts.csv and cluster_report.csv into
/// cfg.output_dir.
ClusterRun run_cluster(const PipelineConfig& cfg);

struct GridSpec {
    std::vector<double> rho_s = {0.25, 0.5, 1.0, 2.0};
    std::vector<double> rho_mc = {1.01, 1.5, 2.0, 3.0, 4.0, 6.0, 10.0};
    std::size_t repetitions = 1;
};

/// One row per (rho_s, rho_mc), rho_s-major, with I, CFR and t averaged over
/// the repetitions (seeds derived from p.seed) and scores filled in.
std::vector<GridSearchRow> grid_search(const Dataset& data, const WeightVector& w, const RecAggloParams& p,
                                       const GridSpec& grid);
void write_grid_csv(const std::filesystem::path& path, const std::vector<GridSearchRow>& rows);
/// Writes grid.csv into cfg.output_dir.
std::vector<GridSearchRow> run_grid_search(const PipelineConfig& cfg, const GridSpec& grid);

struct BenchRow {
    std::size_t size = 0;
    std::size_t repetitions = 0;
    double mean_s = 0.0;
    double min_s = 0.0;
    double max_s = 0.0;
    /// mean_s over the previous row's mean_s; empty on the first row.
    std::optional<double> growth;
};

/// For each size, clusters a seeded random subset of that many records
/// `repetitions` times and records the wall time of rec_agglo.
std::vector<BenchRow> scaling_bench(const Dataset& data, const WeightVector& w, const RecAggloParams& p,
                                    const std::vector<std::size_t>& sizes, std::size_t repetitions = 5);
void write_bench_csv(const std::filesystem::path& path, const std::vector<BenchRow>& rows);
/// Writes bench.csv into cfg.output_dir.
std::vector<BenchRow> run_scaling_bench(const PipelineConfig& cfg, const std::vector<std::size_t>& sizes,
                                        std::size_t repetitions = 5);

}  // namespace fraudclust
