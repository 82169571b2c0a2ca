#include "fraudclust/csv.hpp"

#include <stdexcept>

namespace fraudclust::csv {

std::vector<std::string> split_line(std::string_view line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    bool field_was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(ch);
            }
            continue;
        }
        if (ch == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
            field_was_quoted = false;
        } else if (ch == '"' && cur.empty() && !field_was_quoted) {
            quoted = true;
            field_was_quoted = true;
        } else {
            cur.push_back(ch);
        }
    }
    if (quoted) throw std::runtime_error("unterminated quoted field");
    fields.push_back(std::move(cur));
    return fields;
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char ch : field) {
        if (ch == '"') out.push_back('"');
        out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

std::string join(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += escape(fields[i]);
    }
    return out;
}

}  // namespace fraudclust::csv
