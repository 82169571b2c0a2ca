#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fraudclust/pipeline.hpp"
#include "fraudclust/synthgen.hpp"
#include "oracles.hpp"

using namespace fraudclust;

namespace {

constexpr std::int64_t kDay = 86400;

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "fraudclust_tests" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

GeneratedData orders(std::size_t n_legit = 1200, std::size_t n_fraud = 600) {
    GeneratorConfig g;
    g.seed = 5;
    g.n_legit = n_legit;
    g.n_fraud = n_fraud;
    g.n_campaigns = 12;
    g.campaign_size_min = 20;
    g.campaign_size_max = 80;
    g.campaign_days_max = 30;
    return generate(g, AttributeSchema::default_schema());
}

PipelineConfig config_for(const std::filesystem::path& input, const std::filesystem::path& out) {
    PipelineConfig cfg;
    cfg.inputs = {input};
    cfg.output_dir = out;
    cfg.params.delta_a = 300;
    return cfg;
}

}  // namespace

TEST(Pipeline, WeightStrategyNames) {
    for (auto s : {WeightStrategy::unit, WeightStrategy::cardinality, WeightStrategy::label, WeightStrategy::file}) {
        EXPECT_EQ(parse_weight_strategy(to_string(s)), s);
    }
    EXPECT_THROW(parse_weight_strategy("simpson"), std::invalid_argument);
}

TEST(Pipeline, DedupKeepsFirstLabeledCopy) {
    const auto schema = oracle::make_schema(1);
    const Dataset data(schema, {{"a", 0, Label::unlabeled, {"1"}},
                                {"b", 0, Label::legitimate, {"2"}},
                                {"a", 0, Label::fraud, {"3"}},
                                {"a", 0, Label::legitimate, {"4"}},
                                {"c", 0, Label::unlabeled, {"5"}}});
    const auto d = dedup_by_record_id(data);
    ASSERT_EQ(d.size(), 3u);
    EXPECT_EQ(d.record(0).record_id, "a");
    EXPECT_EQ(d.record(0).label, Label::fraud);
    EXPECT_EQ(d.record(0).values[0], "3");
    EXPECT_EQ(d.record(1).record_id, "b");
    EXPECT_EQ(d.record(2).record_id, "c");
}

TEST(Pipeline, NoWindowUsesLabelsAsOrigins) {
    const auto schema = oracle::make_schema(1);
    const Dataset data(schema, {{"a", 0, Label::fraud, {"1"}}, {"b", 0, Label::unlabeled, {"1"}}});
    const auto set = select_window(data, WindowSpec{});
    EXPECT_EQ(set.origins, (std::vector<Origin>{Origin::background, Origin::window}));
    EXPECT_EQ(set.window_mask, (std::vector<bool>{false, true}));
    EXPECT_EQ(set.truth, (std::vector<Label>{Label::fraud, Label::unlabeled}));
}

TEST(Pipeline, WindowSelection) {
    const auto g = orders();
    WindowSpec w;
    w.enabled = true;
    w.ou_start = GeneratorConfig{}.start_time + 60 * kDay;
    w.ou_days = 3;
    w.of_days = 30;
    w.label_delay_days = 2;
    const auto set = select_window(g.data, w);
    ASSERT_GT(set.data.size(), 0u);
    std::size_t window = 0;
    for (std::size_t i = 0; i < set.data.size(); ++i) {
        const auto& r = set.data.record(i);
        if (set.origins[i] == Origin::window) {
            ++window;
            EXPECT_TRUE(set.window_mask[i]);
            EXPECT_EQ(r.label, Label::unlabeled);
            EXPECT_GE(r.timestamp, w.ou_start);
            EXPECT_LT(r.timestamp, w.ou_start + 3 * kDay);
        } else {
            EXPECT_EQ(r.label, Label::fraud);
            EXPECT_EQ(set.truth[i], Label::fraud);
            EXPECT_GE(r.timestamp, w.ou_start - 30 * kDay);
            EXPECT_LT(r.timestamp, w.ou_start - 2 * kDay);
        }
    }
    EXPECT_GT(window, 0u);

    // The training pool only holds labels known before the window opens.
    const auto pool = label_training_pool(g.data, w);
    for (const auto& r : pool.records()) EXPECT_LT(r.timestamp, w.ou_start - 2 * kDay);

    WindowSpec bad = w;
    bad.label_delay_days = 30;
    EXPECT_THROW(select_window(g.data, bad), std::invalid_argument);
    bad = w;
    bad.ou_days = 0;
    EXPECT_THROW(select_window(g.data, bad), std::invalid_argument);
}

TEST(Pipeline, EmptyBackgroundFlagsNothing) {
    const auto g = orders();
    WindowSpec w;
    w.enabled = true;
    w.ou_start = GeneratorConfig{}.start_time + 2 * kDay;  // nothing labeled before it
    w.ou_days = 10;
    w.of_days = 5;
    const auto set = select_window(g.data, w);
    for (auto o : set.origins) ASSERT_EQ(o, Origin::window);
    RecAggloParams p;
    p.delta_a = 300;
    const auto run = cluster_screening_set(set, WeightVector::unit(set.data.d()), p, true);
    ASSERT_TRUE(run.report.has_detection);
    for (const auto& v : run.verdicts) EXPECT_FALSE(v.flagged);
    EXPECT_EQ(run.report.detection.counts.tp + run.report.detection.counts.fp, 0u);
}

TEST(Pipeline, DetectionIdentityHolds) {
    const auto g = orders();
    WindowSpec w;
    w.enabled = true;
    w.ou_start = GeneratorConfig{}.start_time + 45 * kDay;
    w.ou_days = 7;
    const auto set = select_window(g.data, w);
    RecAggloParams p;
    p.delta_a = 300;
    const auto run = cluster_screening_set(set, WeightVector::unit(set.data.d()), p, true);
    const auto& d = run.report.detection;
    const auto& c = run.report.cfr_u;
    // recall_final == recall_clust * cfr_u, compared as exact fractions.
    ASSERT_TRUE(d.recall_final.defined());
    EXPECT_EQ(d.recall_final.num * d.recall_clust.den * c.den, d.recall_clust.num * c.num * d.recall_final.den);
}

TEST(Pipeline, RunClusterWritesDeterministicOutputs) {
    const auto dir = scratch("run");
    const auto g = orders();
    write_csv(dir / "orders.csv", g.data);
    auto cfg = config_for(dir / "orders.csv", dir / "a");
    cfg.weights = WeightStrategy::cardinality;
    const auto run = run_cluster(cfg);
    cfg.output_dir = dir / "b";
    run_cluster(cfg);
    for (const char* f : {"clusters.csv", "metrics.txt", "verdicts.csv", "cluster_report.csv"}) {
        EXPECT_TRUE(std::filesystem::exists(dir / "a" / f)) << f;
    }
    const auto clusters = slurp(dir / "a" / "clusters.csv");
    EXPECT_EQ(clusters, slurp(dir / "b" / "clusters.csv"));
    EXPECT_EQ(clusters.substr(0, clusters.find('\n')), "record_id,cluster_id");
    EXPECT_LE(run.report.impurity.value(), 0.1);

    auto missing = cfg;
    missing.inputs = {dir / "nope.csv"};
    try {
        run_cluster(missing);
        FAIL() << "expected PipelineError";
    } catch (const PipelineError& e) {
        EXPECT_EQ(e.stage(), "load");
    }
}

TEST(Pipeline, LabelStrategyUsesKnownLabels) {
    const auto dir = scratch("label");
    write_csv(dir / "orders.csv", orders(2000, 900).data);
    auto cfg = config_for(dir / "orders.csv", dir / "out");
    cfg.weights = WeightStrategy::label;
    const auto set = select_window(load_inputs(cfg, load_schema(cfg)), cfg.window);
    const auto w = resolve_weights(cfg, set.data);
    for (double x : w.values()) {
        EXPECT_GE(x, 1.0);
        EXPECT_LE(x, 3.0);
    }
}

TEST(GridSearch, Shapes) {
    const auto g = orders(400, 300);
    RecAggloParams p;
    p.delta_a = 100;
    const auto w = WeightVector::unit(g.data.d());
    GridSpec tiny{{0.5}, {2.0, 6.0}, 1};
    const auto rows = grid_search(g.data, w, p, tiny);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].rho_mc, 2.0);
    EXPECT_EQ(rows[1].rho_mc, 6.0);
    EXPECT_EQ(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.best; }), 1);

    const auto full = grid_search(g.data, w, p, GridSpec{});
    ASSERT_EQ(full.size(), 28u);
    EXPECT_EQ(full[0].rho_s, 0.25);
    EXPECT_EQ(full[0].rho_mc, 1.01);
    EXPECT_EQ(full[7].rho_s, 0.5);

    EXPECT_THROW(grid_search(g.data, w, p, GridSpec{{0.5}, {6.0}, 1}), std::invalid_argument);
    EXPECT_THROW(grid_search(g.data, w, p, GridSpec{{0.5}, {2.0, 6.0}, 0}), std::invalid_argument);

    const auto dir = scratch("grid");
    write_grid_csv(dir / "grid.csv", rows);
    const auto text = slurp(dir / "grid.csv");
    EXPECT_EQ(text.substr(0, text.find('\n')), "rho_s,rho_mc,impurity,cfr,time_s,score,best");
}

TEST(ScalingBench, Rows) {
    const auto g = orders();
    RecAggloParams p;
    const auto w = WeightVector::unit(g.data.d());
    const auto one = scaling_bench(g.data, w, p, {1000}, 2);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0].size, 1000u);
    EXPECT_EQ(one[0].repetitions, 2u);
    EXPECT_FALSE(one[0].growth.has_value());
    EXPECT_LE(one[0].min_s, one[0].mean_s);
    EXPECT_LE(one[0].mean_s, one[0].max_s);

    const auto two = scaling_bench(g.data, w, p, {500, 1000}, 1);
    ASSERT_EQ(two.size(), 2u);
    EXPECT_TRUE(two[1].growth.has_value());

    EXPECT_THROW(scaling_bench(g.data, w, p, {5000}, 1), std::invalid_argument);
    EXPECT_THROW(scaling_bench(g.data, w, p, {}, 1), std::invalid_argument);
}
