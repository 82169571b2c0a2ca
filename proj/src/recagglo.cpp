#include "fraudclust/recagglo.hpp"

#include <algorithm>
#include <exception>
#include <string>

#include "fraudclust/rng.hpp"

namespace fraudclust {

void RecAggloParams::validate() const {
    if (delta_a < 2) throw std::invalid_argument("delta_a must be >= 2");
    if (!(d_max >= 0.0)) throw std::invalid_argument("d_max must be >= 0");
    if (!(rho_s > 0.0)) throw std::invalid_argument("rho_s must be > 0");
    if (!(rho_mc > 1.0)) throw std::invalid_argument("rho_mc must be > 1");
    if (max_recursion_guard == 0) throw std::invalid_argument("max_recursion_guard must be >= 1");
}

RecursionLimitError::RecursionLimitError(std::size_t depth, std::vector<std::size_t> subset)
    : std::runtime_error([&] {
          std::string msg = "rec_agglo: recursion depth " + std::to_string(depth) +
                            " exceeds the guard on a subset of " + std::to_string(subset.size()) +
                            " records (first indices:";
          for (std::size_t i = 0; i < subset.size() && i < 8; ++i) msg += " " + std::to_string(subset[i]);
          return msg + ")";
      }()),
      depth_(depth),
      subset_(std::move(subset)) {}

namespace {

using Members = std::vector<std::size_t>;

class RecAggloRunner {
public:
    RecAggloRunner(const Dataset& data, const WeightVector& w, const RecAggloParams& p)
        : data_(data), p_(p), kernel_(w, p.nulls, p.normalized) {
        agglo_params_.weights = w;
        agglo_params_.linkage = LinkageMethod::single;
        agglo_params_.d_max = p.d_max;
        agglo_params_.nulls = p.nulls;
        agglo_params_.normalized = p.normalized;
    }

    std::vector<Cluster> run(const std::vector<Members>& C, std::size_t depth, double rho_mc, std::uint64_t seed) {
        if (depth > p_.max_recursion_guard) {
            Members all;
            for (const auto& c : C) all.insert(all.end(), c.begin(), c.end());
            std::sort(all.begin(), all.end());
            throw RecursionLimitError(depth, std::move(all));
        }
        stats_.max_depth = std::max(stats_.max_depth, depth);

        std::vector<std::vector<Cluster>> loop_out(C.size());
        std::vector<std::size_t> small;  // ordinals handled by agglo_clust directly
        Members remain;

        for (std::size_t ord = 0; ord < C.size(); ++ord) {
            const Members& c = C[ord];
            if (c.size() > p_.delta_a) {
                auto split = sample(c, rho_mc, derive_seed(seed, 3 * ord));
                if (split.size() > 1) {
                    loop_out[ord] = run(split, depth + 1, rho_mc, derive_seed(seed, 3 * ord + 1));
                } else if (rho_mc > kRetryRhoMc) {
                    ++stats_.retries;
                    loop_out[ord] = run(split, depth + 1, kRetryRhoMc, derive_seed(seed, 3 * ord + 2));
                } else if (c.size() < p_.max_split_size()) {
                    ++stats_.agglo_fallbacks;
                    loop_out[ord] = agglo(c);
                } else {
                    remain.insert(remain.end(), c.begin(), c.end());
                }
            } else if (c.size() > 1) {
                small.push_back(ord);
            } else {
                remain.insert(remain.end(), c.begin(), c.end());
            }
        }

        agglo_batch(C, small, loop_out);

        std::vector<Cluster> out;
        for (auto& part : loop_out) {
            for (auto& cl : part) out.push_back(std::move(cl));
        }

        std::sort(remain.begin(), remain.end());
        if (remain.size() > p_.delta_a) {
            const std::uint64_t base = 3 * C.size();
            auto split = sample(remain, rho_mc, derive_seed(seed, base));
            if (split.size() > 1) {
                // Elements the remain split leaves alone stay singletons; feeding
                // them back would peel the remain one level at a time.
                std::vector<Members> grouped;
                for (auto& m : split) {
                    if (m.size() > 1) {
                        grouped.push_back(std::move(m));
                    } else {
                        ++stats_.remain_singletons;
                        out.push_back({std::move(m), Provenance::singleton});
                    }
                }
                if (!grouped.empty()) {
                    for (auto& cl : run(grouped, depth + 1, rho_mc, derive_seed(seed, base + 1))) {
                        out.push_back(std::move(cl));
                    }
                }
            } else {
                stats_.remain_singletons += remain.size();
                for (std::size_t i : remain) out.push_back({{i}, Provenance::singleton});
            }
        } else if (remain.size() > 1) {
            for (auto& cl : agglo(remain)) out.push_back(std::move(cl));
        } else if (remain.size() == 1) {
            out.push_back({{remain.front()}, Provenance::singleton});
        }
        return out;
    }

    const RecAggloStats& stats() const noexcept { return stats_; }

private:
    std::vector<Members> sample(const Members& c, double rho_mc, std::uint64_t seed) {
        ++stats_.sample_calls;
        SampleParams sp{p_.rho_s, rho_mc, seed, p_.landmark_mode};
        SampleResult r = sample_clust(c, data_, kernel_, sp);
        stats_.distance_evaluations += r.distance_evaluations;
        std::vector<Members> out;
        out.reserve(r.clustering.size());
        for (auto& cl : r.clustering.clusters) out.push_back(std::move(cl.members));
        return out;
    }

    std::vector<Cluster> agglo(const Members& c) {
        ++stats_.agglo_calls;
        return agglo_clust(c, data_, agglo_params_).clusters;
    }

    void agglo_batch(const std::vector<Members>& C, const std::vector<std::size_t>& ords,
                     std::vector<std::vector<Cluster>>& out) {
        stats_.agglo_calls += ords.size();
        std::exception_ptr error;
        const auto n = static_cast<std::ptrdiff_t>(ords.size());
#pragma omp parallel for schedule(dynamic) if (ords.size() > 1)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            try {
                const std::size_t ord = ords[i];
                out[ord] = agglo_clust(C[ord], data_, agglo_params_).clusters;
            } catch (...) {
#pragma omp critical(fraudclust_recagglo_error)
                if (!error) error = std::current_exception();
            }
        }
        if (error) std::rethrow_exception(error);
    }

    const Dataset& data_;
    const RecAggloParams& p_;
    HammingKernel kernel_;
    DistanceParams agglo_params_;
    RecAggloStats stats_;
};

}  // namespace

Clustering rec_agglo(const Clustering& C, const Dataset& data, const WeightVector& w, const RecAggloParams& p,
                     RecAggloStats* stats) {
    p.validate();
    if (w.size() != data.d()) throw std::invalid_argument("rec_agglo: weight vector length != schema.d");
    std::vector<Members> initial;
    initial.reserve(C.size());
    Members seen;
    for (const auto& cl : C.clusters) {
        if (cl.members.empty()) throw std::invalid_argument("rec_agglo: empty cluster in the initial clustering");
        for (std::size_t i : cl.members) {
            if (i >= data.size()) throw std::out_of_range("rec_agglo: record index out of range");
        }
        seen.insert(seen.end(), cl.members.begin(), cl.members.end());
        Members m = cl.members;
        std::sort(m.begin(), m.end());
        initial.push_back(std::move(m));
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
        throw std::invalid_argument("rec_agglo: initial clustering is not a partition");
    }

    RecAggloRunner runner(data, w, p);
    Clustering out;
    out.clusters = runner.run(initial, 0, p.rho_mc, p.seed);
    out.canonicalize();
    if (stats) *stats = runner.stats();
    return out;
}

Clustering rec_agglo(const Dataset& data, const WeightVector& w, const RecAggloParams& p, RecAggloStats* stats) {
    Clustering C;
    if (!data.empty()) {
        Cluster all;
        all.members.resize(data.size());
        for (std::size_t i = 0; i < data.size(); ++i) all.members[i] = i;
        C.clusters.push_back(std::move(all));
    }
    return rec_agglo(C, data, w, p, stats);
}

GoodnessReport goodness_check(const Clustering& cl, const Dataset& data, const DistanceParams& params) {
    const HammingKernel kernel(params);
    std::vector<double> final_merge(cl.size(), 0.0);
    const auto n = static_cast<std::ptrdiff_t>(cl.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto& members = cl.clusters[i].members;
        if (members.size() < 2) continue;
        const DistanceMatrix D = distance_matrix(members, members, data, kernel);
        const LinkageMatrix lm = linkage(D, LinkageMethod::single);
        double top = 0.0;
        for (const auto& mg : lm.merges) top = std::max(top, mg.distance);
        final_merge[i] = top;
    }
    GoodnessReport report;
    for (std::size_t i = 0; i < cl.size(); ++i) {
        if (cl.clusters[i].size() >= 2 && final_merge[i] > params.d_max) report.violations.push_back({i, final_merge[i]});
    }
    return report;
}

}  // namespace fraudclust
