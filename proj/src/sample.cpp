#include "fraudclust/sample.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "fraudclust/rng.hpp"

namespace fraudclust {
namespace {

// Groups elements whose landmark profiles (columns of the n x m matrix) are
// bitwise identical. Returns group id per element; groups are numbered in
// order of first appearance.
std::vector<std::size_t> group_profiles(const DistanceMatrix& D, std::size_t& groups, std::vector<std::size_t>& rep) {
    const std::size_t n = D.rows();
    const std::size_t m = D.cols();
    std::vector<std::uint64_t> hashes(m, 0xcbf29ce484222325ULL);
    for (std::size_t k = 0; k < n; ++k) {
        const auto row = D.row(k);
        for (std::size_t j = 0; j < m; ++j) {
            hashes[j] = (hashes[j] ^ std::bit_cast<std::uint64_t>(row[j])) * 0x100000001b3ULL;
        }
    }
    auto same = [&](std::size_t a, std::size_t b) {
        for (std::size_t k = 0; k < n; ++k) {
            if (D(k, a) != D(k, b)) return false;
        }
        return true;
    };
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> by_hash;  // hash -> group ids
    std::vector<std::size_t> group(m);
    rep.clear();
    for (std::size_t j = 0; j < m; ++j) {
        auto& bucket = by_hash[hashes[j]];
        std::size_t g = static_cast<std::size_t>(-1);
        for (std::size_t cand : bucket) {
            if (same(rep[cand], j)) {
                g = cand;
                break;
            }
        }
        if (g == static_cast<std::size_t>(-1)) {
            g = rep.size();
            rep.push_back(j);
            bucket.push_back(g);
        }
        group[j] = g;
    }
    groups = rep.size();
    return group;
}

// MST edges between group representatives, in element positions.
std::vector<WeightedEdge> embedding_mst(const DistanceMatrix& D, const std::vector<std::size_t>& rep) {
    const std::size_t n = D.rows();
    const std::size_t g = rep.size();
    std::vector<double> emb(g * n);
    for (std::size_t r = 0; r < g; ++r) {
        for (std::size_t k = 0; k < n; ++k) emb[r * n + k] = D(k, rep[r]);
    }
    auto sq = [&emb, n](std::size_t a, std::size_t b) {
        const double* x = emb.data() + a * n;
        const double* y = emb.data() + b * n;
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double t = x[k] - y[k];
            s += t * t;
        }
        return s;
    };
    auto edges = prim_mst(g, sq);
    for (auto& e : edges) {
        e.u = rep[e.u];
        e.v = rep[e.v];
        e.w = std::sqrt(e.w);
    }
    return edges;
}

// Elements with identical landmark profiles form groups. Groups holding a
// landmark seed one cluster each; every other group joins the seed of its
// nearest landmark (smallest landmark position on ties). Groups attach in
// order of that distance until at most c_max clusters are left, so the
// farthest groups stay on their own.
Clustering seeded_clusters(const DistanceMatrix& D, std::span<const std::size_t> landmark_pos, std::size_t c_max) {
    const std::size_t n = D.rows();
    const std::size_t m = D.cols();
    std::size_t groups = 0;
    std::vector<std::size_t> rep;
    const std::vector<std::size_t> group = group_profiles(D, groups, rep);

    constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    std::vector<std::size_t> owner(groups, kNone);  // group -> group it ends up in
    std::size_t seeds = 0;
    for (std::size_t pos : landmark_pos) {
        const std::size_t g = group[pos];
        if (owner[g] == kNone) {
            owner[g] = g;
            ++seeds;
        }
    }

    struct Attach {
        double w;
        std::size_t group;
        std::size_t target;
    };
    std::vector<Attach> order;
    order.reserve(groups - seeds);
    for (std::size_t g = 0; g < groups; ++g) {
        if (owner[g] != kNone) continue;
        std::size_t best = 0;
        for (std::size_t k = 1; k < n; ++k) {
            if (D(k, rep[g]) < D(best, rep[g])) best = k;
        }
        order.push_back({D(best, rep[g]), g, group[landmark_pos[best]]});
    }
    std::sort(order.begin(), order.end(), [](const Attach& a, const Attach& b) {
        if (a.w != b.w) return a.w < b.w;
        return a.group < b.group;
    });
    const std::size_t attach = groups > c_max ? std::min(groups - c_max, order.size()) : 0;
    for (std::size_t t = 0; t < order.size(); ++t) {
        owner[order[t].group] = t < attach ? order[t].target : order[t].group;
    }

    std::vector<std::size_t> slot(groups, kNone);
    Clustering out;
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t g = owner[group[j]];
        if (slot[g] == kNone) {
            slot[g] = out.clusters.size();
            out.clusters.emplace_back();
        }
        out.clusters[slot[g]].members.push_back(j);
    }
    return out;
}

}  // namespace

std::size_t landmark_count(std::size_t m, double rho_s) {
    if (m == 0) return 0;
    const double raw = std::floor(rho_s * std::sqrt(static_cast<double>(m)) + 0.5);
    if (raw < 1.0) return 1;
    return std::min(m, static_cast<std::size_t>(raw));
}

std::size_t maxclust_count(std::size_t m, double rho_mc) {
    const double raw = std::floor(static_cast<double>(m) / rho_mc);
    return raw < 1.0 ? 1 : static_cast<std::size_t>(raw);
}

std::uint64_t count_distance_computations(std::size_t m, const SampleParams& p) {
    return static_cast<std::uint64_t>(landmark_count(m, p.rho_s)) * m;
}

SampleResult sample_clust(std::span<const std::size_t> c, const Dataset& data, const HammingKernel& kernel,
                          const SampleParams& p) {
    const std::size_t m = c.size();
    if (m < 2) throw std::invalid_argument("sample_clust: need at least 2 elements");
    if (!(p.rho_s > 0.0)) throw std::invalid_argument("sample_clust: rho_s must be > 0");
    if (!(p.rho_mc > 1.0)) throw std::invalid_argument("sample_clust: rho_mc must be > 1");
    for (std::size_t i : c) {
        if (i >= data.size()) throw std::out_of_range("sample_clust: index out of range");
    }

    SampleResult res;
    const std::size_t n = landmark_count(m, p.rho_s);
    res.c_max = maxclust_count(m, p.rho_mc);
    Rng rng(p.seed);
    const std::vector<std::size_t> landmark_pos = sample_without_replacement(m, n, rng);
    res.landmarks.reserve(n);
    for (std::size_t pos : landmark_pos) res.landmarks.push_back(c[pos]);

    DistanceMatrix D(n, m);
    std::uint64_t evaluations = 0;
    const auto nm = static_cast<std::ptrdiff_t>(n * m);
#pragma omp parallel for schedule(static) reduction(+ : evaluations) if (n * m > 65536)
    for (std::ptrdiff_t idx = 0; idx < nm; ++idx) {
        const auto k = static_cast<std::size_t>(idx) / m;
        const auto j = static_cast<std::size_t>(idx) % m;
        D(k, j) = kernel(data.codes(res.landmarks[k]), data.codes(c[j]));
        ++evaluations;
    }
    res.distance_evaluations = evaluations;

    if (p.mode == LandmarkLinkage::seeded) {
        res.clustering = seeded_clusters(D, landmark_pos, res.c_max);
    } else {
        std::size_t groups = 0;
        std::vector<std::size_t> rep;
        const std::vector<std::size_t> group = group_profiles(D, groups, rep);
        std::vector<WeightedEdge> edges = embedding_mst(D, rep);
        for (std::size_t j = 0; j < m; ++j) {
            if (rep[group[j]] != j) edges.push_back({rep[group[j]], j, 0.0});
        }
        res.clustering = cut_maxclust(linkage_from_edges(m, std::move(edges)), res.c_max);
    }
    for (auto& cl : res.clustering.clusters) {
        cl.provenance = Provenance::sample;
        for (auto& i : cl.members) i = c[i];
    }
    res.clustering.canonicalize();
    return res;
}

Clustering sample_clust(std::span<const std::size_t> c, const Dataset& data, const WeightVector& w,
                        const SampleParams& p) {
    return sample_clust(c, data, HammingKernel(w, NullPolicy::mismatch), p).clustering;
}

}  // namespace fraudclust
