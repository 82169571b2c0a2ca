#include "fraudclust/weights.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "fraudclust/kvfile.hpp"

namespace fraudclust {

CardinalityStats cardinality_stats(const Dataset& data) {
    const std::size_t d = data.d();
    CardinalityStats stats;
    stats.attributes.resize(d);
    std::vector<std::vector<bool>> seen(d);
    for (std::size_t r = 0; r < data.size(); ++r) {
        const auto codes = data.codes(r);
        for (std::size_t a = 0; a < d; ++a) {
            const auto c = codes[a];
            if (c == Dataset::kNullCode) continue;
            ++stats.attributes[a].non_null;
            if (seen[a].size() <= c) seen[a].resize(c + 1, false);
            if (!seen[a][c]) {
                seen[a][c] = true;
                ++stats.attributes[a].card;
            }
        }
    }
    std::vector<double> r_values;
    for (auto& attr : stats.attributes) {
        if (attr.non_null == 0) continue;
        attr.r_inv = static_cast<double>(attr.non_null) / static_cast<double>(attr.card);
        r_values.push_back(*attr.r_inv);
    }
    if (!r_values.empty()) {
        std::sort(r_values.begin(), r_values.end());
        const std::size_t k = r_values.size();
        stats.median_r_inv = k % 2 ? r_values[k / 2] : 0.5 * (r_values[k / 2 - 1] + r_values[k / 2]);
    }
    return stats;
}

double cardinality_weight(double r_inv, double median_r_inv) {
    return 1.0 + 2.0 * (1.0 - r_inv / (median_r_inv + r_inv));
}

WeightVector cardinality_weights(const CardinalityStats& stats) {
    std::vector<double> w(stats.attributes.size(), 1.0);
    bool any = false;
    for (std::size_t a = 0; a < w.size(); ++a) {
        if (!stats.attributes[a].r_inv) continue;
        any = true;
        w[a] = cardinality_weight(*stats.attributes[a].r_inv, stats.median_r_inv);
    }
    if (!any) throw std::invalid_argument("cardinality_weights: every attribute is null");
    return WeightVector(std::move(w));
}

WeightVector cardinality_weights(const Dataset& data) {
    if (data.empty()) throw std::invalid_argument("cardinality_weights: empty dataset");
    return cardinality_weights(cardinality_stats(data));
}

double simpson_index(std::span<const std::size_t> members, std::size_t attribute, const Dataset& data) {
    if (members.empty()) throw std::invalid_argument("simpson_index: empty cluster");
    if (attribute >= data.d()) throw std::out_of_range("simpson_index: attribute out of range");
    std::unordered_map<Dataset::Code, std::size_t> counts;
    for (std::size_t i : members) ++counts[data.codes(i)[attribute]];
    const double total = static_cast<double>(members.size());
    double s = 0.0;
    for (const auto& [code, n] : counts) {
        const double p = static_cast<double>(n) / total;
        s += p * p;
    }
    return s;
}

std::optional<ClusterKind> classify_cluster(std::span<const std::size_t> members, const Dataset& data) {
    std::size_t fraud = 0;
    std::size_t legit = 0;
    for (std::size_t i : members) {
        fraud += data.label(i) == Label::fraud;
        legit += data.label(i) == Label::legitimate;
    }
    if (fraud && legit) return ClusterKind::mixed;
    if (fraud) return ClusterKind::pure_fraud;
    if (legit) return ClusterKind::pure_legit;
    return std::nullopt;
}

SimpsonProfile simpson_profile(const Clustering& cl, const Dataset& data) {
    const std::size_t d = data.d();
    SimpsonProfile prof;
    std::array<std::vector<double>, 3> sums;
    for (auto& s : sums) s.assign(d, 0.0);

    for (const auto& cluster : cl.clusters) {
        if (cluster.size() < 2) continue;
        const auto kind = classify_cluster(cluster.members, data);
        if (!kind) continue;
        std::vector<std::size_t> labeled;
        for (std::size_t i : cluster.members) {
            if (data.label(i) != Label::unlabeled) labeled.push_back(i);
        }
        const auto k = static_cast<std::size_t>(*kind);
        ++prof.cluster_counts[k];
        for (std::size_t a = 0; a < d; ++a) sums[k][a] += simpson_index(labeled, a, data);
    }
    if (prof.cluster_counts[0] == 0) {
        throw std::runtime_error("label_weights: no pure-fraud clusters were formed; use a larger labeled training set");
    }
    if (prof.cluster_counts[1] == 0) {
        throw std::runtime_error("label_weights: no pure-legitimate clusters were formed; training data needs both labels");
    }
    for (std::size_t k = 0; k < 3; ++k) {
        if (prof.cluster_counts[k] == 0) continue;
        std::vector<double> mean(d);
        for (std::size_t a = 0; a < d; ++a) mean[a] = sums[k][a] / static_cast<double>(prof.cluster_counts[k]);
        prof.mean_lambda[k] = std::move(mean);
    }
    compute_advantages(prof);
    return prof;
}

void compute_advantages(SimpsonProfile& prof) {
    const auto& f = prof.mean_lambda[0];
    const auto& l = prof.mean_lambda[1];
    const auto& mixed = prof.mean_lambda[2];
    if (!f || !l) throw std::invalid_argument("compute_advantages: need pure-fraud and pure-legit means");
    const std::size_t d = f->size();
    prof.raw_fl.assign(d, 0.0);
    prof.raw_pm.assign(d, 0.0);
    double norm = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
        prof.raw_fl[a] = (*f)[a] - (*l)[a];
        if (mixed) prof.raw_pm[a] = (*f)[a] + (*l)[a] - 2.0 * (*mixed)[a];
        norm = std::max({norm, std::abs(prof.raw_fl[a]), std::abs(prof.raw_pm[a]) / 2.0});
    }
    // Floor keeps a profile with no signal at all (every raw advantage 0) finite.
    prof.norm_adv = std::max(norm, 1e3 * std::numeric_limits<double>::epsilon());
    prof.adv_fl.resize(d);
    prof.adv_pm.resize(d);
    for (std::size_t a = 0; a < d; ++a) {
        prof.adv_fl[a] = prof.raw_fl[a] / prof.norm_adv;
        prof.adv_pm[a] = prof.raw_pm[a] / (2.0 * prof.norm_adv);
    }
}

WeightVector weights_from_profile(const SimpsonProfile& prof) {
    std::vector<double> w(prof.adv_fl.size());
    for (std::size_t a = 0; a < w.size(); ++a) w[a] = 1.0 + std::clamp(prof.adv_fl[a] + prof.adv_pm[a], 0.0, 2.0);
    return WeightVector(std::move(w));
}

LabelWeights label_weights(const Dataset& data, const RecAggloParams& params) {
    bool has_fraud = false;
    bool has_legit = false;
    for (const auto& r : data.records()) {
        has_fraud |= r.label == Label::fraud;
        has_legit |= r.label == Label::legitimate;
    }
    if (!has_fraud || !has_legit) {
        throw std::invalid_argument("label_weights: training data needs both fraud and legitimate labels");
    }
    LabelWeights out;
    out.training_clustering = rec_agglo(data, WeightVector::unit(data.d()), params);
    out.profile = simpson_profile(out.training_clustering, data);
    out.weights = weights_from_profile(out.profile);
    return out;
}

void write_weights(const std::filesystem::path& path, const AttributeSchema& schema, const WeightVector& w) {
    if (w.size() != schema.d()) throw std::invalid_argument("write_weights: weight vector length != schema.d");
    KeyValues kv;
    char buf[32];
    for (std::size_t a = 0; a < w.size(); ++a) {
        std::snprintf(buf, sizeof buf, "%.17g", w[a]);
        kv.emplace_back(schema[a].id, buf);
    }
    write_key_values(path, kv);
}

WeightVector read_weights(const std::filesystem::path& path, const AttributeSchema& schema) {
    std::vector<double> w(schema.d(), 0.0);
    std::vector<bool> seen(schema.d(), false);
    for (const auto& [key, value] : read_key_values(path)) {
        const auto idx = schema.index_of(key);
        if (!idx) throw std::runtime_error(path.string() + ": unknown attribute '" + key + "'");
        if (seen[*idx]) throw std::runtime_error(path.string() + ": duplicate attribute '" + key + "'");
        std::size_t used = 0;
        try {
            w[*idx] = std::stod(value, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != value.size()) {
            throw std::runtime_error(path.string() + ": bad weight '" + value + "' for '" + key + "'");
        }
        seen[*idx] = true;
    }
    for (std::size_t a = 0; a < seen.size(); ++a) {
        if (!seen[a]) throw std::runtime_error(path.string() + ": missing weight for '" + schema[a].id + "'");
    }
    return WeightVector(std::move(w));
}

}  // namespace fraudclust
