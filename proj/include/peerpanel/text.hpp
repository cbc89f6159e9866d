#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace peerpanel::text {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
std::vector<std::string> split_lines(std::string_view s);

/// Collapses every whitespace run to one space, trims, and ASCII case-folds.
std::string normalize_for_match(std::string_view s);

/// True when `needle` is a contiguous substring of `haystack` after both are
/// normalized. An empty (post-normalization) needle never matches.
bool contains_normalized(std::string_view haystack, std::string_view needle);

/// Pulls the first JSON object out of a model reply: a ```json fenced block
/// if present, otherwise the first balanced {...} span. Returns nullopt when
/// nothing parses.
std::optional<nlohmann::json> extract_json_object(std::string_view reply);

}  // namespace peerpanel::text
