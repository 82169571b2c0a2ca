#include "fraudclust/synthgen.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "fraudclust/rng.hpp"

namespace fraudclust {

namespace {

constexpr std::int64_t kDay = 86400;
constexpr std::uint64_t kUnique = 1'000'000'000'000ULL;
// Pools up to this size are drawn with a skew toward low indices, so a few
// values (a common country, the default delivery method) dominate.
constexpr std::uint64_t kSkewedPool = 10000;

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

std::vector<std::size_t> campaign_sizes(const GeneratorConfig& cfg, Rng& rng) {
    if (cfg.n_fraud == 0) return {};
    std::vector<std::size_t> sizes(cfg.n_campaigns, cfg.campaign_size_min);
    std::vector<std::size_t> open(cfg.n_campaigns);
    std::iota(open.begin(), open.end(), std::size_t{0});
    std::size_t left = cfg.n_fraud - cfg.n_campaigns * cfg.campaign_size_min;
    while (left > 0) {
        const std::size_t k = static_cast<std::size_t>(rng.below(open.size()));
        if (++sizes[open[k]] == cfg.campaign_size_max) {
            open[k] = open.back();
            open.pop_back();
        }
        --left;
    }
    return sizes;
}

class ValueSource {
public:
    explicit ValueSource(std::vector<std::uint64_t> card) : card_(std::move(card)) {}

    std::uint64_t draw(std::size_t a, Rng& rng) const {
        const std::uint64_t k = card_[a];
        if (k > kSkewedPool) return rng.below(k);
        const double u = rng.uniform();
        return std::min<std::uint64_t>(k - 1, static_cast<std::uint64_t>(static_cast<double>(k) * u * u));
    }

private:
    std::vector<std::uint64_t> card_;
};

struct Draft {
    std::int64_t timestamp = 0;
    Label label = Label::legitimate;
    std::int64_t campaign = -1;
    std::vector<std::optional<std::string>> values;
};

}  // namespace

void GeneratorConfig::validate(const AttributeSchema& schema) const {
    for (double p : overlap) {
        if (!is_probability(p)) throw std::invalid_argument("generator: overlap must be in [0, 1]");
    }
    if (!is_probability(core_fraction) || !is_probability(legit_repeat_prob) || !is_probability(null_prob) ||
        !is_probability(returning_prob) || !is_probability(returning_change_prob)) {
        throw std::invalid_argument("generator: probabilities must be in [0, 1]");
    }
    if (!cardinality.empty()) {
        if (cardinality.size() != schema.d()) {
            throw std::invalid_argument("generator: cardinality list length != schema.d");
        }
        for (auto k : cardinality) {
            if (k < 1) throw std::invalid_argument("generator: cardinality targets must be >= 1");
        }
    }
    if (span_days < 1) throw std::invalid_argument("generator: span_days must be >= 1");
    if (campaign_days_min < 1 || campaign_days_min > campaign_days_max || campaign_days_max > span_days) {
        throw std::invalid_argument("generator: need 1 <= campaign_days_min <= campaign_days_max <= span_days");
    }
    if (n_fraud == 0) return;
    if (campaign_size_min < 1 || campaign_size_min > campaign_size_max) {
        throw std::invalid_argument("generator: need 1 <= campaign_size_min <= campaign_size_max");
    }
    if (n_campaigns == 0 || n_campaigns * campaign_size_min > n_fraud || n_campaigns * campaign_size_max < n_fraud) {
        throw std::invalid_argument("generator: " + std::to_string(n_campaigns) + " campaigns of size [" +
                                    std::to_string(campaign_size_min) + ", " + std::to_string(campaign_size_max) +
                                    "] cannot sum to n_fraud=" + std::to_string(n_fraud));
    }
}

std::vector<std::uint64_t> default_cardinalities(const AttributeSchema& schema) {
    static const std::unordered_map<std::string, std::uint64_t> known = {
        {"cust_id", kUnique},         {"cust_email", kUnique},     {"cust_name", 1'000'000},
        {"cust_phone", kUnique},      {"cust_birth_year", 80},     {"cust_gender", 3},
        {"cust_language", 10},        {"cust_account_age", 60},    {"cust_device", 20},
        {"del_method", 3},            {"del_speed", 3},            {"del_carrier", 6},
        {"ship_name", 1'000'000},     {"ship_street", 100'000},    {"ship_house_number", 300},
        {"ship_zip", 5000},           {"ship_city", 2000},         {"ship_country", 5},
        {"ship_phone", kUnique},      {"pay_method", 6},           {"pay_card", kUnique},
        {"pay_card_bin", 2000},       {"pay_card_country", 20},    {"pay_iban", kUnique},
        {"pay_bank", 300},            {"pay_installments", 4},     {"pay_currency", 5},
        {"pay_voucher", 1000},        {"pay_wallet", 1'000'000},   {"pay_ip", kUnique},
        {"bill_name", 1'000'000},     {"bill_street", 100'000},    {"bill_house_number", 300},
        {"bill_zip", 5000},           {"bill_city", 2000},         {"bill_country", 5},
        {"bill_email", kUnique},
    };
    std::vector<std::uint64_t> out;
    out.reserve(schema.d());
    for (const auto& a : schema.attributes()) {
        const auto it = known.find(a.id);
        out.push_back(it == known.end() ? 1000 : it->second);
    }
    return out;
}

GeneratedData generate(const GeneratorConfig& cfg, const AttributeSchema& schema) {
    cfg.validate(schema);
    const std::size_t d = schema.d();
    const ValueSource source(cfg.cardinality.empty() ? default_cardinalities(schema) : cfg.cardinality);
    Rng rng(cfg.seed);
    const std::int64_t span = cfg.span_days * kDay;

    std::vector<Draft> drafts;
    drafts.reserve(cfg.n_legit + cfg.n_fraud);

    std::vector<std::vector<std::uint64_t>> legit_seen(d);
    for (std::size_t i = 0; i < cfg.n_legit; ++i) {
        Draft r;
        r.timestamp = cfg.start_time + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(span)));
        r.values.resize(d);
        const bool returning = !drafts.empty() && rng.bernoulli(cfg.returning_prob);
        const Draft* previous = returning ? &drafts[rng.below(drafts.size())] : nullptr;
        for (std::size_t a = 0; a < d; ++a) {
            if (previous && !rng.bernoulli(cfg.returning_change_prob)) {
                r.values[a] = previous->values[a];
                continue;
            }
            if (rng.bernoulli(cfg.null_prob)) continue;
            std::uint64_t v;
            auto& seen = legit_seen[a];
            if (!seen.empty() && rng.bernoulli(cfg.legit_repeat_prob)) {
                v = seen[rng.below(seen.size())];
            } else {
                v = source.draw(a, rng);
                seen.push_back(v);
            }
            r.values[a] = std::to_string(v);
        }
        drafts.push_back(std::move(r));
    }

    const auto sizes = campaign_sizes(cfg, rng);
    for (std::size_t c = 0; c < sizes.size(); ++c) {
        std::vector<std::uint64_t> shared(d);
        for (std::size_t a = 0; a < d; ++a) shared[a] = source.draw(a, rng);
        const std::int64_t days = rng.between(cfg.campaign_days_min, cfg.campaign_days_max);
        const std::int64_t begin =
            cfg.start_time + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(span - days * kDay) + 1));
        for (std::size_t k = 0; k < sizes[c]; ++k) {
            Draft r;
            r.label = Label::fraud;
            r.campaign = static_cast<std::int64_t>(c);
            r.timestamp = begin + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(days * kDay)));
            r.values.resize(d);
            const bool core = rng.bernoulli(cfg.core_fraction);
            for (std::size_t a = 0; a < d; ++a) {
                if (core) {
                    r.values[a] = std::to_string(shared[a]);
                    continue;
                }
                if (rng.bernoulli(cfg.null_prob)) continue;
                const double p = cfg.overlap[static_cast<std::size_t>(schema[a].category)];
                r.values[a] = std::to_string(rng.bernoulli(p) ? shared[a] : source.draw(a, rng));
            }
            drafts.push_back(std::move(r));
        }
    }

    std::vector<std::size_t> order(drafts.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return drafts[x].timestamp < drafts[y].timestamp; });

    std::vector<Record> records;
    records.reserve(drafts.size());
    GeneratedData out;
    out.campaign.reserve(drafts.size());
    char id[32];
    for (std::size_t k = 0; k < order.size(); ++k) {
        Draft& r = drafts[order[k]];
        std::snprintf(id, sizeof id, "o%07zu", k + 1);
        records.push_back(Record{id, r.timestamp, r.label, std::move(r.values)});
        out.campaign.push_back(r.campaign);
    }
    out.data = Dataset(schema, std::move(records));
    return out;
}

void write_ground_truth(const std::filesystem::path& path, const GeneratedData& g) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "record_id,campaign_id\n";
    for (std::size_t i = 0; i < g.data.size(); ++i) out << g.data.record(i).record_id << ',' << g.campaign[i] << '\n';
}

}  // namespace fraudclust
