#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fraudclust {

enum class AttributeCategory { customer, delivery, shipping, payment, billing };

inline constexpr std::size_t kCategoryCount = 5;

std::string_view to_string(AttributeCategory c);
AttributeCategory parse_category(std::string_view s);

struct Attribute {
    std::string id;
    AttributeCategory category;

    bool operator==(const Attribute&) const = default;
};

/// Ordered list of categorical attributes. Attribute ids are unique.
class AttributeSchema {
public:
    AttributeSchema() = default;
    explicit AttributeSchema(std::vector<Attribute> attributes);

    /// 37 order attributes: 9 customer, 3 delivery, 7 shipping, 11 payment, 7 billing.
    static AttributeSchema default_schema();

    /// Reads `attribute_id=category` lines, in order.
    static AttributeSchema load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

    std::size_t d() const noexcept { return attributes_.size(); }
    const std::vector<Attribute>& attributes() const noexcept { return attributes_; }
    const Attribute& operator[](std::size_t i) const { return attributes_.at(i); }
    std::optional<std::size_t> index_of(std::string_view id) const;
    std::size_t count(AttributeCategory c) const;

    bool operator==(const AttributeSchema&) const = default;

private:
    std::vector<Attribute> attributes_;
};

enum class Label { fraud, legitimate, unlabeled };

/// CSV token: F, L or U.
char label_token(Label l);
/// Accepts F/L/U, fraud/legit/legitimate and the empty string (unlabeled).
Label parse_label(std::string_view token);

struct Record {
    std::string record_id;
    std::int64_t timestamp = 0;
    Label label = Label::unlabeled;
    std::vector<std::optional<std::string>> values;  // nullopt = missing

    bool operator==(const Record&) const = default;
};

/// Immutable set of records conforming to one schema.
///
/// Besides the raw string values, every cell is interned to a per-attribute
/// integer code (0 is reserved for null) so distance kernels compare integers.
/// Codes are only meaningful within one Dataset.
class Dataset {
public:
    using Code = std::uint32_t;
    static constexpr Code kNullCode = 0;

    Dataset() = default;
    /// Throws std::invalid_argument if a record's value count differs from schema.d().
    Dataset(AttributeSchema schema, std::vector<Record> records);

    const AttributeSchema& schema() const noexcept { return schema_; }
    std::size_t size() const noexcept { return records_.size(); }
    std::size_t d() const noexcept { return schema_.d(); }
    bool empty() const noexcept { return records_.empty(); }

    const std::vector<Record>& records() const noexcept { return records_; }
    const Record& record(std::size_t i) const { return records_.at(i); }
    Label label(std::size_t i) const { return records_[i].label; }

    std::span<const Code> codes(std::size_t i) const noexcept {
        return {codes_.data() + i * schema_.d(), schema_.d()};
    }

    /// Records at `indices`, in the given order.
    Dataset subset(std::span<const std::size_t> indices) const;

private:
    AttributeSchema schema_;
    std::vector<Record> records_;
    std::vector<Code> codes_;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Header: record_id,timestamp,label followed by every schema attribute
/// (any order). Cells equal to `null_marker` become missing values.
Dataset load_csv(const std::filesystem::path& path, const AttributeSchema& schema,
                 std::string_view null_marker = "");
Dataset parse_csv(std::string_view text, const AttributeSchema& schema,
                  std::string_view null_marker = "");

/// Writes attributes in schema order; missing values are written as `null_marker`.
void write_csv(const std::filesystem::path& path, const Dataset& data,
               std::string_view null_marker = "");
std::string format_csv(const Dataset& data, std::string_view null_marker = "");

/// Records of `a` followed by records of `b`. Throws on schema mismatch.
Dataset merge(const Dataset& a, const Dataset& b);

}  // namespace fraudclust
