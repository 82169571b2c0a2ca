#include "fraudclust/agglo.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace fraudclust {
namespace {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a > b) std::swap(a, b);
        parent_[b] = a;
    }

private:
    std::vector<std::size_t> parent_;
};

// Groups elements 0..m-1 by union-find root.
Clustering components(UnionFind& uf, std::size_t m, Provenance prov) {
    std::vector<std::size_t> slot(m, static_cast<std::size_t>(-1));
    Clustering cl;
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t r = uf.find(i);
        if (slot[r] == static_cast<std::size_t>(-1)) {
            slot[r] = cl.clusters.size();
            cl.clusters.push_back({{}, prov});
        }
        cl.clusters[slot[r]].members.push_back(i);
    }
    return cl;
}

LinkageMatrix complete_linkage(const DistanceMatrix& D) {
    const std::size_t m = D.rows();
    LinkageMatrix lm;
    lm.leaves = m;
    if (m < 2) return lm;

    std::vector<double> dist(D.values());
    std::vector<std::size_t> node(m);
    std::iota(node.begin(), node.end(), 0);
    std::vector<std::size_t> size(m, 1);
    std::vector<bool> active(m, true);
    std::vector<std::size_t> nn(m, 0);
    std::vector<double> nnd(m, std::numeric_limits<double>::infinity());

    auto pair_less = [&](double d1, std::size_t a1, std::size_t b1, double d2, std::size_t a2, std::size_t b2) {
        const auto p1 = std::minmax(node[a1], node[b1]);
        const auto p2 = std::minmax(node[a2], node[b2]);
        if (d1 != d2) return d1 < d2;
        return p1 < p2;
    };
    auto refresh = [&](std::size_t a) {
        bool found = false;
        for (std::size_t b = 0; b < m; ++b) {
            if (b == a || !active[b]) continue;
            const double d = dist[a * m + b];
            if (!found || pair_less(d, a, b, nnd[a], a, nn[a])) {
                nnd[a] = d;
                nn[a] = b;
                found = true;
            }
        }
        if (!found) nnd[a] = std::numeric_limits<double>::infinity();
    };
    for (std::size_t a = 0; a < m; ++a) refresh(a);

    for (std::size_t step = 0; step + 1 < m; ++step) {
        std::size_t a = static_cast<std::size_t>(-1);
        for (std::size_t x = 0; x < m; ++x) {
            if (!active[x]) continue;
            if (a == static_cast<std::size_t>(-1) || pair_less(nnd[x], x, nn[x], nnd[a], a, nn[a])) a = x;
        }
        std::size_t b = nn[a];
        if (a > b) std::swap(a, b);
        const auto [lo, hi] = std::minmax(node[a], node[b]);
        lm.merges.push_back({lo, hi, dist[a * m + b], size[a] + size[b]});

        active[b] = false;
        size[a] += size[b];
        node[a] = m + step;
        for (std::size_t x = 0; x < m; ++x) {
            if (!active[x] || x == a) continue;
            const double d = std::max(dist[a * m + x], dist[b * m + x]);
            dist[a * m + x] = d;
            dist[x * m + a] = d;
        }
        refresh(a);
        for (std::size_t x = 0; x < m; ++x) {
            if (active[x] && x != a && (nn[x] == a || nn[x] == b)) refresh(x);
        }
    }
    return lm;
}

}  // namespace

std::size_t Clustering::element_count() const noexcept {
    std::size_t n = 0;
    for (const auto& c : clusters) n += c.size();
    return n;
}

std::size_t Clustering::singleton_count() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(clusters.begin(), clusters.end(), [](const Cluster& c) { return c.size() == 1; }));
}

void Clustering::canonicalize() {
    for (auto& c : clusters) std::sort(c.members.begin(), c.members.end());
    std::sort(clusters.begin(), clusters.end(), [](const Cluster& a, const Cluster& b) {
        if (a.members.empty() || b.members.empty()) return a.members.size() < b.members.size();
        return a.members.front() < b.members.front();
    });
}

std::vector<std::size_t> Clustering::assignment(std::size_t n) const {
    constexpr auto kUnset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> out(n, kUnset);
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        for (std::size_t i : clusters[c].members) {
            if (i >= n) throw std::out_of_range("clustering member " + std::to_string(i) + " out of range");
            if (out[i] != kUnset) throw std::invalid_argument("element " + std::to_string(i) + " appears twice");
            out[i] = c;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (out[i] == kUnset) throw std::invalid_argument("element " + std::to_string(i) + " is not clustered");
    }
    return out;
}

bool is_partition_of(const Clustering& cl, std::span<const std::size_t> universe) {
    std::vector<std::size_t> got;
    got.reserve(universe.size());
    for (const auto& c : cl.clusters) {
        if (c.members.empty()) return false;
        got.insert(got.end(), c.members.begin(), c.members.end());
    }
    std::vector<std::size_t> want(universe.begin(), universe.end());
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    return got == want && std::adjacent_find(want.begin(), want.end()) == want.end();
}

LinkageMatrix linkage_from_edges(std::size_t m, std::vector<WeightedEdge> edges) {
    for (auto& e : edges) {
        if (e.u >= m || e.v >= m) throw std::out_of_range("linkage_from_edges: vertex out of range");
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
        if (a.w != b.w) return a.w < b.w;
        if (a.u != b.u) return a.u < b.u;
        return a.v < b.v;
    });
    LinkageMatrix lm;
    lm.leaves = m;
    UnionFind uf(m);
    std::vector<std::size_t> node(m);  // root element -> current node id
    std::iota(node.begin(), node.end(), 0);
    std::vector<std::size_t> size(m, 1);
    for (const auto& e : edges) {
        const std::size_t ra = uf.find(e.u);
        const std::size_t rb = uf.find(e.v);
        if (ra == rb) continue;
        const auto [lo, hi] = std::minmax(node[ra], node[rb]);
        const std::size_t sz = size[ra] + size[rb];
        lm.merges.push_back({lo, hi, e.w, sz});
        uf.unite(ra, rb);
        const std::size_t r = uf.find(ra);
        node[r] = m + lm.merges.size() - 1;
        size[r] = sz;
    }
    return lm;
}

LinkageMatrix linkage(const DistanceMatrix& D, LinkageMethod method) {
    if (D.rows() != D.cols()) {
        throw std::invalid_argument("linkage: distance matrix is " + std::to_string(D.rows()) + "x" +
                                    std::to_string(D.cols()) + ", expected square");
    }
    const std::size_t m = D.rows();
    if (method == LinkageMethod::complete) return complete_linkage(D);
    auto edges = prim_mst(m, [&D](std::size_t a, std::size_t b) { return D(a, b); });
    return linkage_from_edges(m, std::move(edges));
}

Clustering cut_distance(const LinkageMatrix& lm, double d_max) {
    const std::size_t m = lm.leaves;
    UnionFind uf(m);
    std::vector<std::size_t> rep(m + lm.merges.size());
    std::iota(rep.begin(), rep.begin() + static_cast<std::ptrdiff_t>(m), 0);
    for (std::size_t i = 0; i < lm.merges.size(); ++i) {
        const Merge& mg = lm.merges[i];
        rep[m + i] = rep[mg.left];
        if (mg.distance <= d_max) uf.unite(rep[mg.left], rep[mg.right]);
    }
    Clustering cl = components(uf, m, Provenance::agglo);
    cl.canonicalize();
    return cl;
}

Clustering cut_maxclust(const LinkageMatrix& lm, std::size_t c_max) {
    const std::size_t m = lm.leaves;
    if (c_max == 0) throw std::invalid_argument("cut_maxclust: c_max must be >= 1");
    if (m <= c_max) return cut_distance(lm, -std::numeric_limits<double>::infinity());
    // A cut at height h keeps every merge with distance <= h; the component
    // count is leaves minus kept merges, so at least m - c_max merges are needed.
    std::vector<double> heights;
    heights.reserve(lm.merges.size());
    for (const auto& mg : lm.merges) heights.push_back(mg.distance);
    std::sort(heights.begin(), heights.end());
    const std::size_t need = m - c_max;
    const double h = need <= heights.size() ? heights[need - 1] : std::numeric_limits<double>::infinity();
    return cut_distance(lm, h);
}

Clustering agglo_clust(std::span<const std::size_t> c, const Dataset& data, const DistanceParams& params) {
    if (c.empty()) throw std::invalid_argument("agglo_clust: empty input set");
    Clustering out;
    if (c.size() == 1) {
        out.clusters.push_back({{c[0]}, Provenance::singleton});
        return out;
    }
    const HammingKernel kernel(params);
    const DistanceMatrix D = distance_matrix(c, c, data, kernel);
    const LinkageMatrix lm = linkage(D, params.linkage);
    out = cut_distance(lm, params.d_max);
    for (auto& cluster : out.clusters) {
        for (auto& i : cluster.members) i = c[i];
        if (cluster.size() == 1) cluster.provenance = Provenance::singleton;
    }
    out.canonicalize();
    return out;
}

}  // namespace fraudclust
