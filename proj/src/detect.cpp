#include "fraudclust/detect.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "fraudclust/csv.hpp"

namespace fraudclust {

std::vector<Origin> origins_from_labels(const Dataset& data) {
    std::vector<Origin> out;
    out.reserve(data.size());
    for (const auto& r : data.records()) out.push_back(r.label == Label::unlabeled ? Origin::window : Origin::background);
    return out;
}

namespace {

std::vector<std::size_t> known_frauds_per_cluster(const Clustering& cl, const Dataset& data,
                                                  const std::vector<Origin>& origins) {
    std::vector<std::size_t> out(cl.size(), 0);
    for (std::size_t c = 0; c < cl.size(); ++c) {
        for (std::size_t i : cl.clusters[c].members) {
            out[c] += origins[i] == Origin::background && data.label(i) == Label::fraud;
        }
    }
    return out;
}

}  // namespace

std::vector<Verdict> label_propagation(const Clustering& cl, const Dataset& data, const std::vector<Origin>& origins) {
    if (origins.size() != data.size()) throw std::invalid_argument("label_propagation: origins length != dataset size");
    const auto assignment = cl.assignment(data.size());
    const auto known = known_frauds_per_cluster(cl, data, origins);
    std::vector<Verdict> out;
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (origins[i] != Origin::window) continue;
        const std::size_t c = assignment[i];
        Verdict v;
        v.record = i;
        v.record_id = data.record(i).record_id;
        v.cluster_id = c;
        v.known_fraud_count = known[c];
        v.flagged = cl.clusters[c].size() >= 2 && known[c] >= 1;
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<bool> flagged_mask(const std::vector<Verdict>& verdicts, std::size_t n) {
    std::vector<bool> out(n, false);
    for (const auto& v : verdicts) {
        if (v.record < n) out[v.record] = v.flagged;
    }
    return out;
}

std::vector<ClusterReportRow> cluster_report(const Clustering& cl, const Dataset& data,
                                             const std::vector<Origin>& origins) {
    const auto known = known_frauds_per_cluster(cl, data, origins);
    std::vector<ClusterReportRow> rows;
    for (std::size_t c = 0; c < cl.size(); ++c) {
        const auto& members = cl.clusters[c].members;
        if (members.size() < 2) continue;
        ClusterReportRow r;
        r.cluster_id = c;
        r.size = members.size();
        r.known_fraud_count = known[c];
        for (std::size_t i : members) r.window_count += origins[i] == Origin::window;
        r.flagged_count = known[c] >= 1 ? r.window_count : 0;
        rows.push_back(r);
    }
    std::sort(rows.begin(), rows.end(), [](const ClusterReportRow& a, const ClusterReportRow& b) {
        if (a.known_fraud_count != b.known_fraud_count) return a.known_fraud_count > b.known_fraud_count;
        if (a.size != b.size) return a.size > b.size;
        return a.cluster_id < b.cluster_id;
    });
    return rows;
}

void write_verdicts(const std::filesystem::path& path, const std::vector<Verdict>& verdicts) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "record_id,flagged,cluster_id,known_fraud_count\n";
    for (const auto& v : verdicts) {
        out << csv::escape(v.record_id) << ',' << (v.flagged ? 1 : 0) << ',' << v.cluster_id << ','
            << v.known_fraud_count << '\n';
    }
}

void write_cluster_report(const std::filesystem::path& path, const std::vector<ClusterReportRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "cluster_id,size,known_fraud_count,window_count,flagged_count\n";
    for (const auto& r : rows) {
        out << r.cluster_id << ',' << r.size << ',' << r.known_fraud_count << ',' << r.window_count << ','
            << r.flagged_count << '\n';
    }
}

}  // namespace fraudclust
