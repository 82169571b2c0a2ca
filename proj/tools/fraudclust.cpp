// fraudclust: clustering, screening and benchmarking of categorical order data.
//
//   fraudclust gen --out orders.csv --truth truth.csv
//   fraudclust cluster --input orders.csv --weights cardinality --out-dir run1
//   fraudclust grid-search --input orders.csv --out-dir grid
//   fraudclust bench --input orders.csv --sizes 10000,20000,40000
//   fraudclust weights-train --input labeled.csv --out weights.txt
//
// Every subcommand accepts --config FILE with flat `key=value` lines; keys are
// option long names without dashes. Flags given on the command line win.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>

#include <omp.h>

#include "CLI11.hpp"
#include "fraudclust/pipeline.hpp"
#include "fraudclust/synthgen.hpp"
#include "fraudclust/weights.hpp"

using namespace fraudclust;

namespace {

void ensure_parent(const std::filesystem::path& p) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
}

std::int64_t parse_time(const std::string& s) {
    int y = 0, m = 0, d = 0;
    char tail = 0;
    if (std::sscanf(s.c_str(), "%d-%d-%d%c", &y, &m, &d, &tail) == 3) {
        const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                              std::chrono::day{static_cast<unsigned>(d)}};
        if (!ymd.ok()) throw CLI::ValidationError("--window-start", "invalid date " + s);
        return std::chrono::sys_seconds{std::chrono::sys_days{ymd}}.time_since_epoch().count();
    }
    std::size_t used = 0;
    std::int64_t t = 0;
    try {
        t = std::stoll(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) {
        throw CLI::ValidationError("--window-start", "expected YYYY-MM-DD or unix seconds, got " + s);
    }
    return t;
}

const std::map<std::string, NullPolicy> kNullPolicies = {{"mismatch", NullPolicy::mismatch},
                                                         {"ignore", NullPolicy::ignore}};
const std::map<std::string, LandmarkLinkage> kLandmarkModes = {{"seeded", LandmarkLinkage::seeded},
                                                               {"embedding", LandmarkLinkage::embedding}};

void add_params(CLI::App* sub, RecAggloParams& p) {
    sub->add_option("--delta-a", p.delta_a, "largest set clustered directly")->capture_default_str();
    sub->add_option("--d-max", p.d_max, "single-linkage fusion threshold")->capture_default_str();
    sub->add_option("--rho-s", p.rho_s, "landmark count factor")->capture_default_str();
    sub->add_option("--rho-mc", p.rho_mc, "cluster count divisor for sampling splits")->capture_default_str();
    sub->add_option("--seed", p.seed)->capture_default_str();
    sub->add_option("--max-depth", p.max_recursion_guard, "recursion guard")->capture_default_str();
    sub->add_option("--nulls", p.nulls, "mismatch or ignore")->transform(CLI::CheckedTransformer(kNullPolicies));
    sub->add_flag("--normalized", p.normalized, "divide distances by the weight sum instead of d");
    sub->add_option("--landmark-mode", p.landmark_mode, "seeded or embedding")
        ->transform(CLI::CheckedTransformer(kLandmarkModes));
}

void add_inputs(CLI::App* sub, PipelineConfig& cfg) {
    sub->add_option("--input", cfg.inputs, "order CSV files")->required()->check(CLI::ExistingFile);
    sub->add_option("--schema", cfg.schema_path, "attribute_id=category file")->check(CLI::ExistingFile);
    sub->add_option("--null-marker", cfg.null_marker, "cell text meaning missing");
    sub->add_option_function<std::string>(
           "--weights", [&cfg](const std::string& s) { cfg.weights = parse_weight_strategy(s); },
           "unit, cardinality, label or file")
        ->check(CLI::IsMember({"unit", "cardinality", "label", "file"}));
    sub->add_option("--weights-file", cfg.weights_file, "weights for --weights file")->check(CLI::ExistingFile);
    sub->add_option("--training-input", cfg.training_input, "labeled orders for --weights label")
        ->check(CLI::ExistingFile);
    sub->add_option("--out-dir", cfg.output_dir)->capture_default_str();
    add_params(sub, cfg.params);
}

void print(const KeyValues& kv) {
    for (const auto& [k, v] : kv) std::cout << k << '=' << v << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Recursive agglomerative clustering of categorical order data"};
    app.require_subcommand(1);
    app.fallthrough();
    int threads = 0;
    app.add_option("--threads", threads, "OpenMP threads (0: runtime default)");

    // gen
    GeneratorConfig gen;
    std::string gen_out = "orders.csv";
    std::string gen_truth;
    std::string gen_schema;
    std::string gen_null_marker;
    auto* gen_cmd = app.add_subcommand("gen", "write a synthetic order set with planted fraud campaigns");
    gen_cmd->set_config("--config");
    gen_cmd->add_option("--out", gen_out)->capture_default_str();
    gen_cmd->add_option("--truth", gen_truth, "record_id,campaign_id output");
    gen_cmd->add_option("--schema", gen_schema)->check(CLI::ExistingFile);
    gen_cmd->add_option("--null-marker", gen_null_marker);
    gen_cmd->add_option("--seed", gen.seed)->capture_default_str();
    gen_cmd->add_option("--n-legit", gen.n_legit)->capture_default_str();
    gen_cmd->add_option("--n-fraud", gen.n_fraud)->capture_default_str();
    gen_cmd->add_option("--n-campaigns", gen.n_campaigns)->capture_default_str();
    gen_cmd->add_option("--campaign-size-min", gen.campaign_size_min)->capture_default_str();
    gen_cmd->add_option("--campaign-size-max", gen.campaign_size_max)->capture_default_str();
    const char* categories[] = {"customer", "delivery", "shipping", "payment", "billing"};
    for (std::size_t c = 0; c < kCategoryCount; ++c) {
        gen_cmd->add_option(std::string("--overlap-") + categories[c], gen.overlap[c])->capture_default_str();
    }
    gen_cmd->add_option("--core-fraction", gen.core_fraction)->capture_default_str();
    gen_cmd->add_option("--legit-repeat-prob", gen.legit_repeat_prob)->capture_default_str();
    gen_cmd->add_option("--returning-prob", gen.returning_prob)->capture_default_str();
    gen_cmd->add_option("--returning-change-prob", gen.returning_change_prob)->capture_default_str();
    gen_cmd->add_option("--null-prob", gen.null_prob)->capture_default_str();
    gen_cmd->add_option("--start-time", gen.start_time, "unix seconds")->capture_default_str();
    gen_cmd->add_option("--span-days", gen.span_days)->capture_default_str();
    gen_cmd->add_option("--campaign-days-min", gen.campaign_days_min)->capture_default_str();
    gen_cmd->add_option("--campaign-days-max", gen.campaign_days_max)->capture_default_str();

    // cluster
    PipelineConfig cluster_cfg;
    std::string window_start;
    bool no_detect = false;
    auto* cluster_cmd = app.add_subcommand("cluster", "cluster orders, report metrics and flag window orders");
    cluster_cmd->set_config("--config");
    add_inputs(cluster_cmd, cluster_cfg);
    cluster_cmd->add_option("--window-start", window_start, "O_u start, YYYY-MM-DD or unix seconds");
    cluster_cmd->add_option("--window-days", cluster_cfg.window.ou_days)->capture_default_str();
    cluster_cmd->add_option("--history-days", cluster_cfg.window.of_days, "O_f span before the window")
        ->capture_default_str();
    cluster_cmd->add_option("--label-delay-days", cluster_cfg.window.label_delay_days)->capture_default_str();
    cluster_cmd->add_flag("--no-detect", no_detect, "skip label propagation");

    // grid-search
    PipelineConfig grid_cfg;
    GridSpec grid;
    auto* grid_cmd = app.add_subcommand("grid-search", "score every (rho_s, rho_mc) combination");
    grid_cmd->set_config("--config");
    add_inputs(grid_cmd, grid_cfg);
    grid_cmd->add_option("--rho-s-grid", grid.rho_s)->delimiter(',')->capture_default_str();
    grid_cmd->add_option("--rho-mc-grid", grid.rho_mc)->delimiter(',')->capture_default_str();
    grid_cmd->add_option("--repetitions", grid.repetitions)->capture_default_str();

    // bench
    PipelineConfig bench_cfg;
    std::vector<std::size_t> sizes = {10000, 20000, 40000};
    std::size_t bench_reps = 5;
    auto* bench_cmd = app.add_subcommand("bench", "time rec_agglo on growing subsets");
    bench_cmd->set_config("--config");
    add_inputs(bench_cmd, bench_cfg);
    bench_cmd->add_option("--sizes", sizes)->delimiter(',')->capture_default_str();
    bench_cmd->add_option("--repetitions", bench_reps)->capture_default_str();

    // weights-train
    PipelineConfig train_cfg;
    train_cfg.weights = WeightStrategy::label;
    std::string weights_out = "weights.txt";
    auto* train_cmd = app.add_subcommand("weights-train", "derive attribute weights from labeled orders");
    train_cmd->set_config("--config");
    train_cmd->add_option("--input", train_cfg.inputs, "labeled order CSV files")->required()->check(CLI::ExistingFile);
    train_cmd->add_option("--schema", train_cfg.schema_path)->check(CLI::ExistingFile);
    train_cmd->add_option("--null-marker", train_cfg.null_marker);
    train_cmd
        ->add_option_function<std::string>(
            "--strategy", [&train_cfg](const std::string& s) { train_cfg.weights = parse_weight_strategy(s); },
            "label or cardinality")
        ->check(CLI::IsMember({"label", "cardinality"}));
    train_cmd->add_option("--out", weights_out)->capture_default_str();
    add_params(train_cmd, train_cfg.params);

    CLI11_PARSE(app, argc, argv);
    if (threads > 0) omp_set_num_threads(threads);

    try {
        if (*gen_cmd) {
            const auto schema = gen_schema.empty() ? AttributeSchema::default_schema() : AttributeSchema::load(gen_schema);
            const auto g = generate(gen, schema);
            ensure_parent(gen_out);
            ensure_parent(gen_truth);
            write_csv(gen_out, g.data, gen_null_marker);
            if (!gen_truth.empty()) write_ground_truth(gen_truth, g);
            std::cout << "records=" << g.data.size() << "\nout=" << gen_out << '\n';
        } else if (*cluster_cmd) {
            if (!window_start.empty()) {
                cluster_cfg.window.enabled = true;
                cluster_cfg.window.ou_start = parse_time(window_start);
            }
            cluster_cfg.detect = !no_detect;
            const auto run = run_cluster(cluster_cfg);
            print(run.report.to_key_values());
        } else if (*grid_cmd) {
            const auto rows = run_grid_search(grid_cfg, grid);
            for (const auto& r : rows) {
                std::printf("rho_s=%g rho_mc=%g I=%.4f CFR=%.4f t=%.2fs score=%.4f%s\n", r.rho_s, r.rho_mc, r.impurity,
                            r.cfr, r.time_s, r.score, r.best ? " best" : "");
            }
        } else if (*bench_cmd) {
            const auto rows = run_scaling_bench(bench_cfg, sizes, bench_reps);
            for (const auto& r : rows) {
                std::printf("N=%zu mean=%.3fs min=%.3fs max=%.3fs", r.size, r.mean_s, r.min_s, r.max_s);
                if (r.growth) std::printf(" growth=%.3f", *r.growth);
                std::printf("\n");
            }
        } else if (*train_cmd) {
            const auto schema = load_schema(train_cfg);
            const auto data = load_inputs(train_cfg, schema);
            const auto w = resolve_weights(train_cfg, data);
            ensure_parent(weights_out);
            write_weights(weights_out, schema, w);
            for (std::size_t a = 0; a < w.size(); ++a) std::printf("%s=%.6f\n", schema[a].id.c_str(), w[a]);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
