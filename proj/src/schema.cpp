#include "fraudclust/schema.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "fraudclust/csv.hpp"
#include "fraudclust/kvfile.hpp"

namespace fraudclust {

std::string_view to_string(AttributeCategory c) {
    switch (c) {
        case AttributeCategory::customer: return "customer";
        case AttributeCategory::delivery: return "delivery";
        case AttributeCategory::shipping: return "shipping";
        case AttributeCategory::payment: return "payment";
        case AttributeCategory::billing: return "billing";
    }
    return "unknown";
}

AttributeCategory parse_category(std::string_view s) {
    if (s == "customer") return AttributeCategory::customer;
    if (s == "delivery") return AttributeCategory::delivery;
    if (s == "shipping") return AttributeCategory::shipping;
    if (s == "payment") return AttributeCategory::payment;
    if (s == "billing") return AttributeCategory::billing;
    throw std::invalid_argument("unknown attribute category '" + std::string(s) + "'");
}

AttributeSchema::AttributeSchema(std::vector<Attribute> attributes) : attributes_(std::move(attributes)) {
    std::unordered_set<std::string> seen;
    for (const auto& a : attributes_) {
        if (a.id.empty()) throw std::invalid_argument("empty attribute id");
        if (a.id == "record_id" || a.id == "timestamp" || a.id == "label") {
            throw std::invalid_argument("attribute id '" + a.id + "' is a reserved column name");
        }
        if (!seen.insert(a.id).second) throw std::invalid_argument("duplicate attribute id '" + a.id + "'");
    }
}

AttributeSchema AttributeSchema::default_schema() {
    using C = AttributeCategory;
    std::vector<Attribute> attrs;
    auto add = [&](C c, std::initializer_list<const char*> ids) {
        for (const char* id : ids) attrs.push_back({id, c});
    };
    add(C::customer, {"cust_id", "cust_email", "cust_name", "cust_phone", "cust_birth_year", "cust_gender",
                      "cust_language", "cust_account_age", "cust_device"});
    add(C::delivery, {"del_method", "del_speed", "del_carrier"});
    add(C::shipping, {"ship_name", "ship_street", "ship_house_number", "ship_zip", "ship_city", "ship_country",
                      "ship_phone"});
    add(C::payment, {"pay_method", "pay_card", "pay_card_bin", "pay_card_country", "pay_iban", "pay_bank",
                     "pay_installments", "pay_currency", "pay_voucher", "pay_wallet", "pay_ip"});
    add(C::billing, {"bill_name", "bill_street", "bill_house_number", "bill_zip", "bill_city", "bill_country",
                     "bill_email"});
    return AttributeSchema(std::move(attrs));
}

AttributeSchema AttributeSchema::load(const std::filesystem::path& path) {
    std::vector<Attribute> attrs;
    for (auto& [id, cat] : read_key_values(path)) attrs.push_back({id, parse_category(cat)});
    return AttributeSchema(std::move(attrs));
}

void AttributeSchema::save(const std::filesystem::path& path) const {
    KeyValues kv;
    for (const auto& a : attributes_) kv.emplace_back(a.id, std::string(to_string(a.category)));
    write_key_values(path, kv);
}

std::optional<std::size_t> AttributeSchema::index_of(std::string_view id) const {
    for (std::size_t i = 0; i < attributes_.size(); ++i) {
        if (attributes_[i].id == id) return i;
    }
    return std::nullopt;
}

std::size_t AttributeSchema::count(AttributeCategory c) const {
    std::size_t n = 0;
    for (const auto& a : attributes_) n += a.category == c;
    return n;
}

char label_token(Label l) {
    switch (l) {
        case Label::fraud: return 'F';
        case Label::legitimate: return 'L';
        case Label::unlabeled: return 'U';
    }
    return 'U';
}

Label parse_label(std::string_view t) {
    if (t == "F" || t == "fraud") return Label::fraud;
    if (t == "L" || t == "legit" || t == "legitimate") return Label::legitimate;
    if (t == "U" || t.empty()) return Label::unlabeled;
    throw std::invalid_argument("unknown label token '" + std::string(t) + "'");
}

Dataset::Dataset(AttributeSchema schema, std::vector<Record> records)
    : schema_(std::move(schema)), records_(std::move(records)) {
    const std::size_t d = schema_.d();
    codes_.resize(records_.size() * d);
    std::vector<std::unordered_map<std::string_view, Code>> dict(d);
    for (std::size_t r = 0; r < records_.size(); ++r) {
        const Record& rec = records_[r];
        if (rec.values.size() != d) {
            throw std::invalid_argument("record '" + rec.record_id + "' has " + std::to_string(rec.values.size()) +
                                        " values, schema has " + std::to_string(d));
        }
        for (std::size_t a = 0; a < d; ++a) {
            const auto& v = rec.values[a];
            if (!v) {
                codes_[r * d + a] = kNullCode;
                continue;
            }
            // string_views point into records_, which is not modified afterwards.
            auto [it, inserted] = dict[a].try_emplace(std::string_view(*v), static_cast<Code>(dict[a].size() + 1));
            codes_[r * d + a] = it->second;
        }
    }
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    Dataset out;
    out.schema_ = schema_;
    out.records_.reserve(indices.size());
    out.codes_.reserve(indices.size() * d());
    for (std::size_t i : indices) {
        if (i >= size()) throw std::out_of_range("subset index " + std::to_string(i) + " out of range");
        out.records_.push_back(records_[i]);
        auto c = codes(i);
        out.codes_.insert(out.codes_.end(), c.begin(), c.end());
    }
    return out;
}

Dataset parse_csv(std::string_view text, const AttributeSchema& schema, std::string_view null_marker) {
    const std::size_t d = schema.d();
    std::vector<std::size_t> column_to_attr;  // csv column -> schema index (for columns >= 3)
    std::vector<Record> records;
    std::size_t lineno = 0;
    bool have_header = false;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() && pos >= text.size()) break;

        std::vector<std::string> fields;
        try {
            fields = csv::split_line(line);
        } catch (const std::runtime_error& e) {
            throw ParseError(lineno, e.what());
        }

        if (!have_header) {
            if (fields.size() != d + 3 || fields[0] != "record_id" || fields[1] != "timestamp" || fields[2] != "label") {
                throw ParseError(lineno, "header must be record_id,timestamp,label followed by the " +
                                             std::to_string(d) + " schema attributes");
            }
            std::vector<bool> seen(d, false);
            for (std::size_t c = 3; c < fields.size(); ++c) {
                auto idx = schema.index_of(fields[c]);
                if (!idx) throw ParseError(lineno, "column '" + fields[c] + "' is not in the schema");
                if (seen[*idx]) throw ParseError(lineno, "duplicate column '" + fields[c] + "'");
                seen[*idx] = true;
                column_to_attr.push_back(*idx);
            }
            have_header = true;
            continue;
        }

        if (fields.size() != d + 3) {
            throw ParseError(lineno, "expected " + std::to_string(d + 3) + " columns, found " +
                                         std::to_string(fields.size()));
        }
        Record rec;
        rec.record_id = std::move(fields[0]);
        const std::string& ts = fields[1];
        auto [ptr, ec] = std::from_chars(ts.data(), ts.data() + ts.size(), rec.timestamp);
        if (ec != std::errc{} || ptr != ts.data() + ts.size()) {
            throw ParseError(lineno, "invalid timestamp '" + ts + "'");
        }
        try {
            rec.label = parse_label(fields[2]);
        } catch (const std::invalid_argument& e) {
            throw ParseError(lineno, e.what());
        }
        rec.values.resize(d);
        for (std::size_t c = 3; c < fields.size(); ++c) {
            if (fields[c] != null_marker) rec.values[column_to_attr[c - 3]] = std::move(fields[c]);
        }
        records.push_back(std::move(rec));
    }
    if (!have_header) throw ParseError(1, "missing header row");
    return Dataset(schema, std::move(records));
}

Dataset load_csv(const std::filesystem::path& path, const AttributeSchema& schema, std::string_view null_marker) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_csv(ss.str(), schema, null_marker);
    } catch (const ParseError& e) {
        throw ParseError(e.line(), path.string() + ": " + e.what());
    }
}

std::string format_csv(const Dataset& data, std::string_view null_marker) {
    std::string out = "record_id,timestamp,label";
    for (const auto& a : data.schema().attributes()) {
        out += ',';
        out += csv::escape(a.id);
    }
    out += '\n';
    for (const Record& r : data.records()) {
        out += csv::escape(r.record_id);
        out += ',';
        out += std::to_string(r.timestamp);
        out += ',';
        out += label_token(r.label);
        for (const auto& v : r.values) {
            out += ',';
            out += csv::escape(v ? std::string_view(*v) : null_marker);
        }
        out += '\n';
    }
    return out;
}

void write_csv(const std::filesystem::path& path, const Dataset& data, std::string_view null_marker) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << format_csv(data, null_marker);
}

Dataset merge(const Dataset& a, const Dataset& b) {
    if (!(a.schema() == b.schema())) throw std::invalid_argument("merge: schema mismatch");
    std::vector<Record> records;
    records.reserve(a.size() + b.size());
    records.insert(records.end(), a.records().begin(), a.records().end());
    records.insert(records.end(), b.records().begin(), b.records().end());
    return Dataset(a.schema(), std::move(records));
}

}  // namespace fraudclust
