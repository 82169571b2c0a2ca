#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fraudclust/distance.hpp"
#include "fraudclust/schema.hpp"

namespace fraudclust {

/// Which algorithm produced a cluster.
enum class Provenance : std::uint8_t { agglo, sample, singleton };

struct Cluster {
    std::vector<std::size_t> members;
    Provenance provenance = Provenance::agglo;

    std::size_t size() const noexcept { return members.size(); }
    bool operator==(const Cluster&) const = default;
};

/// A partition of record indices. Canonical form: members ascending within each
/// cluster, clusters ordered by their smallest member.
struct Clustering {
    std::vector<Cluster> clusters;

    std::size_t size() const noexcept { return clusters.size(); }
    std::size_t element_count() const noexcept;
    std::size_t singleton_count() const noexcept;

    void canonicalize();
    /// Cluster position of every element, for elements in [0, n). Throws if an
    /// element is missing, repeated or out of range.
    std::vector<std::size_t> assignment(std::size_t n) const;

    bool operator==(const Clustering&) const = default;
};

/// True when the clusters are nonempty and cover `universe` exactly once.
bool is_partition_of(const Clustering& cl, std::span<const std::size_t> universe);

/// One row of a linkage matrix. Leaves are 0..m-1; merge i creates node m+i.
struct Merge {
    std::size_t left;
    std::size_t right;
    double distance;
    std::size_t size;

    bool operator==(const Merge&) const = default;
};

struct LinkageMatrix {
    std::size_t leaves = 0;
    std::vector<Merge> merges;
};

struct WeightedEdge {
    std::size_t u;
    std::size_t v;
    double w;
};

/// Minimum spanning tree over a complete graph on m vertices (Prim, O(m^2)
/// distance evaluations). Ties pick the smaller vertex index.
template <class DistanceFn>
std::vector<WeightedEdge> prim_mst(std::size_t m, DistanceFn&& dist);

/// Converts the edges of a spanning forest into a single-linkage merge
/// sequence. Edges are processed in (w, min(u,v), max(u,v)) order; a forest
/// with several components yields fewer than m-1 merges.
LinkageMatrix linkage_from_edges(std::size_t m, std::vector<WeightedEdge> edges);

/// Hierarchical agglomerative linkage over a square, symmetric, zero-diagonal
/// matrix. Single linkage goes through the MST; complete linkage uses the
/// generic algorithm with cached nearest neighbours and breaks ties by the
/// smallest (left, right) node pair. Throws std::invalid_argument if D is not square.
LinkageMatrix linkage(const DistanceMatrix& D, LinkageMethod method);

/// Dendrogram components after dropping every merge above `d_max`.
/// Members are leaf positions 0..m-1.
Clustering cut_distance(const LinkageMatrix& lm, double d_max);

/// Clustering at the smallest cut height that yields at most `c_max` clusters.
Clustering cut_maxclust(const LinkageMatrix& lm, std::size_t c_max);

/// distance_matrix -> linkage -> cut_distance(d_max) over the records in `c`.
/// Returned members are record indices.
Clustering agglo_clust(std::span<const std::size_t> c, const Dataset& data, const DistanceParams& params);

// ---------------------------------------------------------------------------

template <class DistanceFn>
std::vector<WeightedEdge> prim_mst(std::size_t m, DistanceFn&& dist) {
    std::vector<WeightedEdge> edges;
    if (m < 2) return edges;
    edges.reserve(m - 1);
    std::vector<double> key(m, 0.0);
    std::vector<std::size_t> parent(m, 0);
    std::vector<std::size_t> open(m - 1);
    for (std::size_t i = 1; i < m; ++i) open[i - 1] = i;

    std::size_t u = 0;
    bool first = true;
    while (!open.empty()) {
        const auto n_open = static_cast<std::ptrdiff_t>(open.size());
        double best_key = 0.0;
        std::size_t best_pos = 0;
        std::size_t best_idx = static_cast<std::size_t>(-1);
#pragma omp parallel if (open.size() > 2048)
        {
            double lk = 0.0;
            std::size_t lpos = 0;
            std::size_t lidx = static_cast<std::size_t>(-1);
#pragma omp for schedule(static) nowait
            for (std::ptrdiff_t p = 0; p < n_open; ++p) {
                const std::size_t v = open[p];
                const double dv = dist(u, v);
                if (first || dv < key[v]) {
                    key[v] = dv;
                    parent[v] = u;
                }
                if (lidx == static_cast<std::size_t>(-1) || key[v] < lk || (key[v] == lk && v < lidx)) {
                    lk = key[v];
                    lpos = static_cast<std::size_t>(p);
                    lidx = v;
                }
            }
#pragma omp critical(fraudclust_prim_argmin)
            {
                if (lidx != static_cast<std::size_t>(-1) &&
                    (best_idx == static_cast<std::size_t>(-1) || lk < best_key || (lk == best_key && lidx < best_idx))) {
                    best_key = lk;
                    best_pos = lpos;
                    best_idx = lidx;
                }
            }
        }
        first = false;
        edges.push_back({parent[best_idx], best_idx, best_key});
        open[best_pos] = open.back();
        open.pop_back();
        u = best_idx;
    }
    return edges;
}

}  // namespace fraudclust
