#include "fraudclust/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <unordered_map>

#include "fraudclust/rng.hpp"
#include "fraudclust/weights.hpp"

namespace fraudclust {

namespace {

constexpr std::int64_t kDay = 86400;

template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const PipelineError&) {
        throw;
    } catch (const std::exception& e) {
        throw PipelineError(name, e.what());
    }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

std::string fixed(double x, int digits = 6) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

}  // namespace

std::string_view to_string(WeightStrategy s) {
    switch (s) {
        case WeightStrategy::unit: return "unit";
        case WeightStrategy::cardinality: return "cardinality";
        case WeightStrategy::label: return "label";
        case WeightStrategy::file: return "file";
    }
    return "unknown";
}

WeightStrategy parse_weight_strategy(std::string_view s) {
    if (s == "unit") return WeightStrategy::unit;
    if (s == "cardinality") return WeightStrategy::cardinality;
    if (s == "label") return WeightStrategy::label;
    if (s == "file") return WeightStrategy::file;
    throw std::invalid_argument("unknown weight strategy '" + std::string(s) + "'");
}

void WindowSpec::validate() const {
    if (!enabled) return;
    if (ou_days < 1) throw std::invalid_argument("window: ou_days must be >= 1");
    if (of_days < 1) throw std::invalid_argument("window: of_days must be >= 1");
    if (label_delay_days < 0 || label_delay_days >= of_days) {
        throw std::invalid_argument("window: need 0 <= label_delay_days < of_days");
    }
}

AttributeSchema load_schema(const PipelineConfig& cfg) {
    return cfg.schema_path.empty() ? AttributeSchema::default_schema() : AttributeSchema::load(cfg.schema_path);
}

Dataset dedup_by_record_id(const Dataset& data) {
    std::unordered_map<std::string_view, std::size_t> slot;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& r = data.record(i);
        const auto [it, fresh] = slot.emplace(r.record_id, keep.size());
        if (fresh) {
            keep.push_back(i);
        } else if (data.label(keep[it->second]) == Label::unlabeled && r.label != Label::unlabeled) {
            keep[it->second] = i;
        }
    }
    if (keep.size() == data.size()) return data;
    return data.subset(keep);
}

Dataset load_inputs(const PipelineConfig& cfg, const AttributeSchema& schema) {
    if (cfg.inputs.empty()) throw std::invalid_argument("no input files");
    Dataset all = load_csv(cfg.inputs[0], schema, cfg.null_marker);
    for (std::size_t k = 1; k < cfg.inputs.size(); ++k) all = merge(all, load_csv(cfg.inputs[k], schema, cfg.null_marker));
    return dedup_by_record_id(all);
}

ScreeningSet select_window(const Dataset& data, const WindowSpec& window) {
    window.validate();
    ScreeningSet s;
    if (!window.enabled) {
        s.data = data;
        s.truth = labels_of(data);
        s.origins = origins_from_labels(data);
        s.window_mask.resize(data.size());
        for (std::size_t i = 0; i < data.size(); ++i) s.window_mask[i] = s.origins[i] == Origin::window;
        return s;
    }
    const std::int64_t ou_begin = window.ou_start;
    const std::int64_t ou_end = window.ou_start + window.ou_days * kDay;
    const std::int64_t of_begin = window.ou_start - window.of_days * kDay;
    const std::int64_t of_end = window.ou_start - window.label_delay_days * kDay;

    std::vector<Record> records;
    for (const auto& r : data.records()) {
        if (r.timestamp >= ou_begin && r.timestamp < ou_end) {
            s.truth.push_back(r.label);
            s.origins.push_back(Origin::window);
            s.window_mask.push_back(true);
            records.push_back(r);
            records.back().label = Label::unlabeled;
        } else if (r.label == Label::fraud && r.timestamp >= of_begin && r.timestamp < of_end) {
            s.truth.push_back(r.label);
            s.origins.push_back(Origin::background);
            s.window_mask.push_back(false);
            records.push_back(r);
        }
    }
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (s.origins[i] == Origin::background && records[i].timestamp >= ou_begin) {
            throw std::logic_error("window selection: background record " + records[i].record_id +
                                   " does not precede the screening window");
        }
    }
    s.data = Dataset(data.schema(), std::move(records));
    return s;
}

Dataset label_training_pool(const Dataset& data, const WindowSpec& window) {
    std::vector<std::size_t> keep;
    const std::int64_t known_until = window.ou_start - window.label_delay_days * kDay;
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (data.label(i) == Label::unlabeled) continue;
        if (window.enabled && data.record(i).timestamp >= known_until) continue;
        keep.push_back(i);
    }
    return data.subset(keep);
}

WeightVector resolve_weights(const PipelineConfig& cfg, const Dataset& data, const Dataset* training_pool) {
    switch (cfg.weights) {
        case WeightStrategy::unit: return WeightVector::unit(data.d());
        case WeightStrategy::cardinality: return cardinality_weights(data);
        case WeightStrategy::file: return read_weights(cfg.weights_file, data.schema());
        case WeightStrategy::label: {
            Dataset training;
            if (!cfg.training_input.empty()) {
                training = load_csv(cfg.training_input, data.schema(), cfg.null_marker);
            } else {
                training = label_training_pool(training_pool ? *training_pool : data, WindowSpec{});
            }
            RecAggloParams p = cfg.params;
            p.d_max = kLabelTrainingDMax;
            return label_weights(training, p).weights;
        }
    }
    throw std::invalid_argument("unknown weight strategy");
}

ClusterRun cluster_screening_set(const ScreeningSet& set, const WeightVector& w, const RecAggloParams& p,
                                 bool detect) {
    ClusterRun run;
    const auto t0 = std::chrono::steady_clock::now();
    run.clustering = rec_agglo(set.data, w, p, &run.stats);
    const double elapsed = seconds_since(t0);

    auto& rep = run.report;
    rep.records = set.data.size();
    rep.singleton_count = run.clustering.singleton_count();
    rep.cluster_count = run.clustering.size() - rep.singleton_count;
    rep.impurity = impurity(run.clustering, set.truth);
    rep.cfr = cfr(run.clustering, set.truth);
    rep.cfr_u = cfr(run.clustering, set.truth, set.window_mask);
    rep.clr = clr(run.clustering, set.truth);  // with a window, every legitimate record is in O_u
    rep.wall_time_s = elapsed;
    rep.recursion_depth = run.stats.max_depth;

    const bool any_window = std::find(set.window_mask.begin(), set.window_mask.end(), true) != set.window_mask.end();
    if (detect && any_window) {
        run.verdicts = label_propagation(run.clustering, set.data, set.origins);
        run.cluster_report = cluster_report(run.clustering, set.data, set.origins);
        rep.detection = detection_metrics(flagged_mask(run.verdicts, set.data.size()), set.truth,
                                          clustered_flags(run.clustering, set.data.size()), set.window_mask);
        rep.has_detection = true;
    }
    return run;
}

void write_clusters_csv(const std::filesystem::path& path, const Dataset& data, const Clustering& cl) {
    const auto assignment = cl.assignment(data.size());
    auto out = open_output(path);
    out << "record_id,cluster_id\n";
    for (std::size_t i = 0; i < data.size(); ++i) out << data.record(i).record_id << ',' << assignment[i] << '\n';
}

ClusterRun run_cluster(const PipelineConfig& cfg) {
    const auto schema = stage("schema", [&] { return load_schema(cfg); });
    const auto data = stage("load", [&] { return load_inputs(cfg, schema); });
    const auto set = stage("window", [&] { return select_window(data, cfg.window); });
    const auto w = stage("weights", [&] {
        const auto pool = label_training_pool(data, cfg.window);
        return resolve_weights(cfg, set.data, &pool);
    });
    auto run = stage("cluster", [&] { return cluster_screening_set(set, w, cfg.params, cfg.detect); });
    stage("write", [&] {
        std::filesystem::create_directories(cfg.output_dir);
        write_clusters_csv(cfg.output_dir / "clusters.csv", set.data, run.clustering);
        run.report.write(cfg.output_dir / "metrics.txt");
        if (cfg.detect) {
            write_verdicts(cfg.output_dir / "verdicts.csv", run.verdicts);
            write_cluster_report(cfg.output_dir / "cluster_report.csv", run.cluster_report);
        }
        return 0;
    });
    return run;
}

std::vector<GridSearchRow> grid_search(const Dataset& data, const WeightVector& w, const RecAggloParams& p,
                                       const GridSpec& grid) {
    if (grid.rho_s.size() * grid.rho_mc.size() < 2) throw std::invalid_argument("grid search needs >= 2 grid points");
    if (grid.repetitions < 1) throw std::invalid_argument("grid search needs >= 1 repetition");
    const auto labels = labels_of(data);
    std::vector<GridSearchRow> rows;
    for (double rho_s : grid.rho_s) {
        for (double rho_mc : grid.rho_mc) {
            GridSearchRow row;
            row.rho_s = rho_s;
            row.rho_mc = rho_mc;
            for (std::size_t rep = 0; rep < grid.repetitions; ++rep) {
                RecAggloParams q = p;
                q.rho_s = rho_s;
                q.rho_mc = rho_mc;
                q.seed = grid.repetitions == 1 ? p.seed : derive_seed(p.seed, rep);
                const auto t0 = std::chrono::steady_clock::now();
                const auto cl = rec_agglo(data, w, q);
                row.time_s += seconds_since(t0);
                const auto i = impurity(cl, labels);
                const auto c = cfr(cl, labels);
                if (!i.defined() || !c.defined()) {
                    throw std::invalid_argument("grid search needs labeled records including frauds");
                }
                row.impurity += i.value();
                row.cfr += c.value();
            }
            const double n = static_cast<double>(grid.repetitions);
            row.impurity /= n;
            row.cfr /= n;
            row.time_s /= n;
            rows.push_back(row);
        }
    }
    performance_score(rows);
    return rows;
}

void write_grid_csv(const std::filesystem::path& path, const std::vector<GridSearchRow>& rows) {
    auto out = open_output(path);
    out << "rho_s,rho_mc,impurity,cfr,time_s,score,best\n";
    for (const auto& r : rows) {
        out << r.rho_s << ',' << r.rho_mc << ',' << fixed(r.impurity) << ',' << fixed(r.cfr) << ',' << fixed(r.time_s, 3)
            << ',' << fixed(r.score) << ',' << (r.best ? 1 : 0) << '\n';
    }
}

std::vector<GridSearchRow> run_grid_search(const PipelineConfig& cfg, const GridSpec& grid) {
    const auto schema = stage("schema", [&] { return load_schema(cfg); });
    const auto data = stage("load", [&] { return load_inputs(cfg, schema); });
    const auto w = stage("weights", [&] { return resolve_weights(cfg, data); });
    auto rows = stage("grid-search", [&] { return grid_search(data, w, cfg.params, grid); });
    stage("write", [&] {
        std::filesystem::create_directories(cfg.output_dir);
        write_grid_csv(cfg.output_dir / "grid.csv", rows);
        return 0;
    });
    return rows;
}

std::vector<BenchRow> scaling_bench(const Dataset& data, const WeightVector& w, const RecAggloParams& p,
                                    const std::vector<std::size_t>& sizes, std::size_t repetitions) {
    if (sizes.empty()) throw std::invalid_argument("bench: no sizes given");
    if (repetitions < 1) throw std::invalid_argument("bench: repetitions must be >= 1");
    for (std::size_t n : sizes) {
        if (n < 1) throw std::invalid_argument("bench: sizes must be >= 1");
        if (n > data.size()) {
            throw std::invalid_argument("bench: size " + std::to_string(n) + " exceeds the " +
                                        std::to_string(data.size()) + " input records");
        }
    }
    std::vector<BenchRow> rows;
    for (std::size_t n : sizes) {
        Rng rng(derive_seed(p.seed, n));
        const auto idx = sample_without_replacement(data.size(), n, rng);
        const Dataset subset = data.subset(idx);
        BenchRow row;
        row.size = n;
        row.repetitions = repetitions;
        row.min_s = std::numeric_limits<double>::infinity();
        for (std::size_t rep = 0; rep < repetitions; ++rep) {
            RecAggloParams q = p;
            q.seed = derive_seed(p.seed, rep);
            const auto t0 = std::chrono::steady_clock::now();
            const auto cl = rec_agglo(subset, w, q);
            const double t = seconds_since(t0);
            row.mean_s += t;
            row.min_s = std::min(row.min_s, t);
            row.max_s = std::max(row.max_s, t);
        }
        row.mean_s /= static_cast<double>(repetitions);
        if (!rows.empty() && rows.back().mean_s > 0.0) row.growth = row.mean_s / rows.back().mean_s;
        rows.push_back(row);
    }
    return rows;
}

void write_bench_csv(const std::filesystem::path& path, const std::vector<BenchRow>& rows) {
    auto out = open_output(path);
    out << "size,repetitions,mean_s,min_s,max_s,growth\n";
    for (const auto& r : rows) {
        out << r.size << ',' << r.repetitions << ',' << fixed(r.mean_s, 4) << ',' << fixed(r.min_s, 4) << ','
            << fixed(r.max_s, 4) << ',' << (r.growth ? fixed(*r.growth, 3) : "") << '\n';
    }
}

std::vector<BenchRow> run_scaling_bench(const PipelineConfig& cfg, const std::vector<std::size_t>& sizes,
                                        std::size_t repetitions) {
    const auto schema = stage("schema", [&] { return load_schema(cfg); });
    const auto data = stage("load", [&] { return load_inputs(cfg, schema); });
    const auto w = stage("weights", [&] { return resolve_weights(cfg, data); });
    auto rows = stage("bench", [&] { return scaling_bench(data, w, cfg.params, sizes, repetitions); });
    stage("write", [&] {
        std::filesystem::create_directories(cfg.output_dir);
        write_bench_csv(cfg.output_dir / "bench.csv", rows);
        return 0;
    });
    return rows;
}

}  // namespace fraudclust
