#include "peerpanel/text.hpp"

#include <cctype>

namespace peerpanel::text {

namespace {

bool is_space(char c) {
  return std::isspace(static_cast<unsigned char>(c)) != 0;
}

}  // namespace

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::vector<std::string> split_lines(std::string_view s) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto nl = s.find('\n', start);
    const auto end = nl == std::string_view::npos ? s.size() : nl;
    std::string line(s.substr(start, end - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return lines;
}

std::string normalize_for_match(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool in_space = false;
  for (char c : s) {
    if (is_space(c)) {
      in_space = true;
      continue;
    }
    if (in_space && !out.empty()) out.push_back(' ');
    in_space = false;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

bool contains_normalized(std::string_view haystack, std::string_view needle) {
  const std::string n = normalize_for_match(needle);
  if (n.empty()) return false;
  return normalize_for_match(haystack).find(n) != std::string::npos;
}

namespace {

std::optional<nlohmann::json> parse_object(std::string_view s) {
  auto j = nlohmann::json::parse(s, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  return j;
}

// First balanced {...} span starting at or after `from`, string-aware.
std::optional<std::string_view> balanced_object(std::string_view s,
                                                std::size_t from) {
  const auto open = s.find('{', from);
  if (open == std::string_view::npos) return std::nullopt;
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = open; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return s.substr(open, i - open + 1);
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<nlohmann::json> extract_json_object(std::string_view reply) {
  for (std::size_t pos = reply.find("```"); pos != std::string_view::npos;) {
    auto body_start = reply.find('\n', pos);
    if (body_start == std::string_view::npos) break;
    ++body_start;
    const auto close = reply.find("```", body_start);
    if (close == std::string_view::npos) break;
    if (auto j = parse_object(reply.substr(body_start, close - body_start))) {
      return j;
    }
    pos = reply.find("```", close + 3);
  }
  for (std::size_t from = 0; from < reply.size();) {
    auto span = balanced_object(reply, from);
    if (!span) break;
    if (auto j = parse_object(*span)) return j;
    from = static_cast<std::size_t>(span->data() - reply.data()) + 1;
  }
  return std::nullopt;
}

}  // namespace peerpanel::text
