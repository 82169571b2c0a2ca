// Brute-force reference implementations and fixture builders for tests.
// Everything here is deliberately naive and shares no code with the library
// beyond its data types.
#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fraudclust/agglo.hpp"
#include "fraudclust/detect.hpp"
#include "fraudclust/rng.hpp"
#include "fraudclust/schema.hpp"

namespace oracle {

using fraudclust::Dataset;
using fraudclust::Label;
using fraudclust::Record;

inline fraudclust::AttributeSchema make_schema(std::size_t d) {
    std::vector<fraudclust::Attribute> attrs;
    for (std::size_t i = 0; i < d; ++i) {
        attrs.push_back({"a" + std::to_string(i), static_cast<fraudclust::AttributeCategory>(i % 5)});
    }
    return fraudclust::AttributeSchema(std::move(attrs));
}

/// n records over d attributes with values drawn from an alphabet of `alphabet`
/// symbols; cells are null with probability null_p.
inline Dataset random_dataset(std::size_t n, std::size_t d, std::size_t alphabet, std::uint64_t seed,
                              double null_p = 0.0) {
    fraudclust::Rng rng(seed);
    std::vector<Record> recs;
    for (std::size_t i = 0; i < n; ++i) {
        Record r;
        r.record_id = "r" + std::to_string(i);
        r.timestamp = static_cast<std::int64_t>(i);
        const auto u = rng.below(3);
        r.label = u == 0 ? Label::fraud : (u == 1 ? Label::legitimate : Label::unlabeled);
        for (std::size_t a = 0; a < d; ++a) {
            if (null_p > 0 && rng.bernoulli(null_p)) {
                r.values.push_back(std::nullopt);
            } else {
                r.values.push_back("v" + std::to_string(rng.below(alphabet)));
            }
        }
        recs.push_back(std::move(r));
    }
    return Dataset(make_schema(d), std::move(recs));
}

inline std::vector<double> random_weights(std::size_t d, fraudclust::Rng& rng) {
    std::vector<double> w(d);
    for (auto& x : w) x = 0.5 + 2.5 * rng.uniform();
    return w;
}

/// Weighted Hamming distance straight from the string values.
inline double hamming(const Record& u, const Record& v, const std::vector<double>& w, bool nulls_mismatch = true,
                      bool normalized = false) {
    double s = 0.0;
    double wsum = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        wsum += w[i];
        const bool un = !u.values[i].has_value();
        const bool vn = !v.values[i].has_value();
        if (un || vn) {
            if (nulls_mismatch) s += w[i];
            continue;
        }
        if (*u.values[i] != *v.values[i]) s += w[i];
    }
    return s / (normalized ? wsum : static_cast<double>(w.size()));
}

using Matrix = std::vector<std::vector<double>>;

inline Matrix pairwise(const Dataset& data, const std::vector<std::size_t>& idx, const std::vector<double>& w) {
    Matrix D(idx.size(), std::vector<double>(idx.size(), 0.0));
    for (std::size_t i = 0; i < idx.size(); ++i) {
        for (std::size_t j = 0; j < idx.size(); ++j) D[i][j] = hamming(data.record(idx[i]), data.record(idx[j]), w);
    }
    return D;
}

/// True when no two distinct off-diagonal pairs share a distance.
inline bool tie_free(const Matrix& D) {
    std::vector<double> v;
    for (std::size_t i = 0; i < D.size(); ++i) {
        for (std::size_t j = i + 1; j < D.size(); ++j) v.push_back(D[i][j]);
    }
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) == v.end();
}

enum class Link { single, complete };

/// Textbook agglomerative clustering: repeatedly scan every pair of live
/// clusters, recompute their linkage distance from member pairs and merge the
/// closest. Returns the merge heights in order and the partition obtained by
/// stopping before the first merge above d_max. O(m^3) or worse.
struct NaiveResult {
    std::vector<double> heights;
    std::vector<std::vector<std::size_t>> partition;  // canonical: sorted members, sorted by first
};

inline NaiveResult naive_agglomerative(const Matrix& D, Link link, double d_max) {
    const std::size_t m = D.size();
    std::vector<std::vector<std::size_t>> live;
    for (std::size_t i = 0; i < m; ++i) live.push_back({i});
    NaiveResult res;
    bool stopped = false;
    while (live.size() > 1) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t ba = 0, bb = 0;
        for (std::size_t a = 0; a < live.size(); ++a) {
            for (std::size_t b = a + 1; b < live.size(); ++b) {
                double d = link == Link::single ? std::numeric_limits<double>::infinity() : 0.0;
                for (std::size_t x : live[a]) {
                    for (std::size_t y : live[b]) d = link == Link::single ? std::min(d, D[x][y]) : std::max(d, D[x][y]);
                }
                if (d < best) {
                    best = d;
                    ba = a;
                    bb = b;
                }
            }
        }
        if (!stopped && best > d_max) {
            res.partition = live;
            stopped = true;
        }
        res.heights.push_back(best);
        live[ba].insert(live[ba].end(), live[bb].begin(), live[bb].end());
        live.erase(live.begin() + static_cast<std::ptrdiff_t>(bb));
    }
    if (!stopped) res.partition = live;
    for (auto& c : res.partition) std::sort(c.begin(), c.end());
    std::sort(res.partition.begin(), res.partition.end());
    return res;
}

inline std::vector<std::vector<std::size_t>> as_sets(const fraudclust::Clustering& cl) {
    std::vector<std::vector<std::size_t>> out;
    for (const auto& c : cl.clusters) {
        auto m = c.members;
        std::sort(m.begin(), m.end());
        out.push_back(std::move(m));
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Random partition of [0, n) given as a cluster id per element.
inline fraudclust::Clustering random_partition(std::size_t n, std::size_t max_clusters, fraudclust::Rng& rng) {
    std::map<std::size_t, std::vector<std::size_t>> by_id;
    for (std::size_t i = 0; i < n; ++i) by_id[rng.below(max_clusters)].push_back(i);
    fraudclust::Clustering cl;
    for (auto& [id, members] : by_id) cl.clusters.push_back({members, fraudclust::Provenance::agglo});
    return cl;
}

// ---- metrics -----------------------------------------------------------

struct Frac {
    std::uint64_t num = 0;
    std::uint64_t den = 0;
};

inline std::vector<std::size_t> cluster_of(const fraudclust::Clustering& cl, std::size_t n) {
    std::vector<std::size_t> id(n);
    for (std::size_t c = 0; c < cl.clusters.size(); ++c) {
        for (std::size_t i : cl.clusters[c].members) id[i] = c;
    }
    return id;
}

inline std::vector<std::size_t> cluster_sizes(const std::vector<std::size_t>& id) {
    std::map<std::size_t, std::size_t> count;
    for (std::size_t c : id) ++count[c];
    std::vector<std::size_t> out(id.size());
    for (std::size_t i = 0; i < id.size(); ++i) out[i] = count[id[i]];
    return out;
}

/// Impurity by counting, per record, whether it disagrees with its cluster's
/// majority; ties count the fraud side as majority.
inline Frac impurity(const fraudclust::Clustering& cl, const std::vector<Label>& labels) {
    const auto id = cluster_of(cl, labels.size());
    std::map<std::size_t, std::pair<std::uint64_t, std::uint64_t>> fl;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == Label::fraud) ++fl[id[i]].first;
        if (labels[i] == Label::legitimate) ++fl[id[i]].second;
    }
    Frac f;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == Label::unlabeled) continue;
        ++f.den;
        const auto [nf, nl] = fl[id[i]];
        const Label majority = nf >= nl ? Label::fraud : Label::legitimate;
        if (labels[i] != majority) ++f.num;
    }
    return f;
}

inline Frac clustered_fraction(const fraudclust::Clustering& cl, const std::vector<Label>& labels, Label target,
                               const std::vector<bool>& mask) {
    const auto sizes = cluster_sizes(cluster_of(cl, labels.size()));
    Frac f;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != target || (!mask.empty() && !mask[i])) continue;
        ++f.den;
        if (sizes[i] > 1) ++f.num;
    }
    return f;
}

/// Two-pass label propagation: pass one marks clusters that hold a background
/// fraud, pass two flags window records of marked clusters with >= 2 members.
inline std::vector<bool> propagate(const fraudclust::Clustering& cl, const std::vector<Label>& labels,
                                   const std::vector<fraudclust::Origin>& origins) {
    const auto id = cluster_of(cl, labels.size());
    const auto sizes = cluster_sizes(id);
    std::set<std::size_t> marked;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (origins[i] == fraudclust::Origin::background && labels[i] == Label::fraud) marked.insert(id[i]);
    }
    std::vector<bool> flagged(labels.size(), false);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        flagged[i] = origins[i] == fraudclust::Origin::window && sizes[i] >= 2 && marked.count(id[i]) > 0;
    }
    return flagged;
}

}  // namespace oracle
