#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace fraudclust {

// Ordered key=value pairs. Blank lines and lines starting with '#' are skipped;
// whitespace around keys and values is trimmed.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

KeyValues parse_key_values(const std::string& text);
KeyValues read_key_values(const std::filesystem::path& path);
void write_key_values(const std::filesystem::path& path, const KeyValues& kv);

}  // namespace fraudclust
