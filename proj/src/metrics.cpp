#include "fraudclust/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace fraudclust {

double Ratio::value() const noexcept {
    if (!defined()) return std::numeric_limits<double>::quiet_NaN();
    return static_cast<double>(num) / static_cast<double>(den);
}

std::string Ratio::str() const {
    if (!defined()) return "undefined";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", value());
    return buf;
}

std::vector<Label> labels_of(const Dataset& data) {
    std::vector<Label> out;
    out.reserve(data.size());
    for (const auto& r : data.records()) out.push_back(r.label);
    return out;
}

Label majority_label(std::uint64_t frauds, std::uint64_t legit) noexcept {
    return legit > frauds ? Label::legitimate : Label::fraud;
}

Ratio impurity(const Clustering& cl, std::span<const Label> labels) {
    if (cl.clusters.empty()) throw std::invalid_argument("impurity: empty clustering");
    Ratio r;
    for (const auto& c : cl.clusters) {
        std::uint64_t f = 0;
        std::uint64_t l = 0;
        for (std::size_t i : c.members) {
            f += labels[i] == Label::fraud;
            l += labels[i] == Label::legitimate;
        }
        const std::uint64_t majority = majority_label(f, l) == Label::fraud ? f : l;
        r.num += f + l - majority;
        r.den += f + l;
    }
    return r;
}

namespace {

Ratio clustered_ratio(const Clustering& cl, std::span<const Label> labels, const std::vector<bool>& mask,
                      Label target) {
    Ratio r;
    for (const auto& c : cl.clusters) {
        const bool grouped = c.size() >= 2;
        for (std::size_t i : c.members) {
            if (labels[i] != target) continue;
            if (!mask.empty() && !mask[i]) continue;
            ++r.den;
            r.num += grouped;
        }
    }
    return r;
}

}  // namespace

Ratio cfr(const Clustering& cl, std::span<const Label> labels, const std::vector<bool>& mask) {
    return clustered_ratio(cl, labels, mask, Label::fraud);
}

Ratio clr(const Clustering& cl, std::span<const Label> labels, const std::vector<bool>& mask) {
    return clustered_ratio(cl, labels, mask, Label::legitimate);
}

std::vector<bool> clustered_flags(const Clustering& cl, std::size_t n) {
    std::vector<bool> out(n, false);
    for (const auto& c : cl.clusters) {
        if (c.size() < 2) continue;
        for (std::size_t i : c.members) {
            if (i < n) out[i] = true;
        }
    }
    return out;
}

DetectionMetrics detection_metrics(const Confusion& counts, std::uint64_t clustered_frauds,
                                   std::uint64_t clustered_tp) {
    DetectionMetrics m;
    m.counts = counts;
    m.clustered_frauds = clustered_frauds;
    m.clustered_tp = clustered_tp;
    m.recall_clust = {clustered_tp, clustered_frauds};
    m.recall_final = {counts.tp, counts.tp + counts.fn};
    m.precision = {counts.tp, counts.tp + counts.fp};
    m.fpr = {counts.fp, counts.fp + counts.tn};
    return m;
}

DetectionMetrics detection_metrics(const std::vector<bool>& predicted, std::span<const Label> labels,
                                   const std::vector<bool>& clustered, const std::vector<bool>& mask) {
    if (predicted.size() != labels.size() || clustered.size() != labels.size() ||
        (!mask.empty() && mask.size() != labels.size())) {
        throw std::invalid_argument("detection_metrics: input lengths differ");
    }
    Confusion c;
    std::uint64_t clustered_frauds = 0;
    std::uint64_t clustered_tp = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (!mask.empty() && !mask[i]) continue;
        if (labels[i] == Label::fraud) {
            if (predicted[i]) ++c.tp; else ++c.fn;
            if (clustered[i]) {
                ++clustered_frauds;
                clustered_tp += predicted[i];
            }
        } else if (labels[i] == Label::legitimate) {
            if (predicted[i]) ++c.fp; else ++c.tn;
        }
    }
    return detection_metrics(c, clustered_frauds, clustered_tp);
}

void performance_score(std::vector<GridSearchRow>& rows, std::span<const double> excluded_time_rho_mc) {
    if (rows.empty()) return;
    auto excluded = [&](double rho) {
        return std::any_of(excluded_time_rho_mc.begin(), excluded_time_rho_mc.end(),
                           [rho](double x) { return std::abs(x - rho) < 1e-9; });
    };
    double i_lo = rows[0].impurity, i_hi = rows[0].impurity;
    double c_lo = rows[0].cfr, c_hi = rows[0].cfr;
    for (const auto& r : rows) {
        i_lo = std::min(i_lo, r.impurity);
        i_hi = std::max(i_hi, r.impurity);
        c_lo = std::min(c_lo, r.cfr);
        c_hi = std::max(c_hi, r.cfr);
    }
    double t_lo = std::numeric_limits<double>::infinity();
    double t_hi = -std::numeric_limits<double>::infinity();
    for (const auto& r : rows) {
        if (excluded(r.rho_mc)) continue;
        t_lo = std::min(t_lo, r.time_s);
        t_hi = std::max(t_hi, r.time_s);
    }
    if (!std::isfinite(t_lo)) {  // every row excluded: normalize over all of them
        for (const auto& r : rows) {
            t_lo = std::min(t_lo, r.time_s);
            t_hi = std::max(t_hi, r.time_s);
        }
    }
    std::size_t best = 0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        auto& r = rows[k];
        const double ih = i_hi > i_lo ? (r.impurity - i_lo) / (i_hi - i_lo) : 0.0;
        const double ch = c_hi > c_lo ? (c_hi - r.cfr) / (c_hi - c_lo) : 0.0;
        const double th = t_hi > t_lo ? std::max(0.0, (r.time_s - t_lo) / (t_hi - t_lo)) : 0.0;
        r.score = ih + ch + th;
        r.best = false;
        if (r.score < rows[best].score) best = k;
    }
    rows[best].best = true;
}

void performance_score(std::vector<GridSearchRow>& rows) {
    static constexpr double kExcluded[] = {1.01};
    performance_score(rows, kExcluded);
}

KeyValues MetricsReport::to_key_values() const {
    auto num = [](double x) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", x);
        return std::string(buf);
    };
    KeyValues kv;
    kv.emplace_back("records", std::to_string(records));
    kv.emplace_back("clusters", std::to_string(cluster_count));
    kv.emplace_back("singletons", std::to_string(singleton_count));
    kv.emplace_back("impurity", impurity.str());
    kv.emplace_back("cfr", cfr.str());
    kv.emplace_back("cfr_u", cfr_u.str());
    kv.emplace_back("clr", clr.str());
    if (has_detection) {
        kv.emplace_back("tp", std::to_string(detection.counts.tp));
        kv.emplace_back("fp", std::to_string(detection.counts.fp));
        kv.emplace_back("tn", std::to_string(detection.counts.tn));
        kv.emplace_back("fn", std::to_string(detection.counts.fn));
        kv.emplace_back("recall_clust", detection.recall_clust.str());
        kv.emplace_back("recall_final", detection.recall_final.str());
        kv.emplace_back("precision", detection.precision.str());
        kv.emplace_back("fpr", detection.fpr.str());
    }
    kv.emplace_back("recursion_depth", std::to_string(recursion_depth));
    kv.emplace_back("wall_time_s", num(wall_time_s));
    return kv;
}

void MetricsReport::write(const std::filesystem::path& path) const { write_key_values(path, to_key_values()); }

}  // namespace fraudclust
