#include "fraudclust/kvfile.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fraudclust {
namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

KeyValues parse_key_values(const std::string& text) {
    KeyValues out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("line " + std::to_string(lineno) + ": expected key=value");
        }
        std::string key = trim(t.substr(0, eq));
        if (key.empty()) throw std::runtime_error("line " + std::to_string(lineno) + ": empty key");
        out.emplace_back(std::move(key), trim(t.substr(eq + 1)));
    }
    return out;
}

KeyValues read_key_values(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_key_values(ss.str());
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

void write_key_values(const std::filesystem::path& path, const KeyValues& kv) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (const auto& [k, v] : kv) out << k << '=' << v << '\n';
}

}  // namespace fraudclust
