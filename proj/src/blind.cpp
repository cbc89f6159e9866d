#include "peerpanel/blind.hpp"

#include <algorithm>
#include <cctype>

#include "peerpanel/errors.hpp"
#include "peerpanel/personas.hpp"
#include "peerpanel/text.hpp"

namespace peerpanel {

namespace {

bool is_word_char(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

bool has_separator(const std::string& term) {
  return std::any_of(term.begin(), term.end(),
                     [](unsigned char c) { return !is_word_char(c); });
}

std::string replace_all_ci(const std::string& text, const std::string& lowered_term) {
  std::string out;
  const auto lowered = text::to_lower(text);
  std::size_t pos = 0;
  while (true) {
    const auto hit = lowered.find(lowered_term, pos);
    if (hit == std::string::npos) break;
    out.append(text, pos, hit - pos);
    out += kBlindPlaceholder;
    pos = hit + lowered_term.size();
  }
  out.append(text, pos, std::string::npos);
  return out;
}

}  // namespace

BlindingTerms::BlindingTerms() {
  for (const auto& p : shipped_personas()) add(p.name);
  add("human");
  add("metareviewer");
}

BlindingTerms::BlindingTerms(const std::vector<std::string>& extra) : BlindingTerms() {
  for (const auto& t : extra) add(t);
}

void BlindingTerms::add(const std::string& term) {
  auto t = text::to_lower(text::trim(term));
  if (t.empty()) return;
  if (std::find(terms_.begin(), terms_.end(), t) == terms_.end()) terms_.push_back(std::move(t));
  // Longest first so "metareviewer" wins over shorter overlapping terms.
  std::stable_sort(terms_.begin(), terms_.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
}

std::string BlindingTerms::scrub(const std::string& input) const {
  std::string s = input;
  for (const auto& t : terms_) {
    if (has_separator(t)) s = replace_all_ci(s, t);
  }
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (!is_word_char(static_cast<unsigned char>(s[i]))) {
      out += s[i++];
      continue;
    }
    std::size_t j = i;
    while (j < s.size() && is_word_char(static_cast<unsigned char>(s[j]))) ++j;
    const auto word = s.substr(i, j - i);
    const auto lw = text::to_lower(word);
    bool banned = false;
    for (const auto& t : terms_) {
      if (has_separator(t)) continue;
      if (t.size() < 3 ? lw == t : lw.find(t) != std::string::npos) {
        banned = true;
        break;
      }
    }
    out += banned ? std::string(kBlindPlaceholder) : word;
    i = j;
  }
  return out;
}

std::string BlindingTerms::find_leak(const std::string& text) const {
  const auto lowered = text::to_lower(text);
  for (const auto& t : terms_) {
    if (lowered.find(t) != std::string::npos) return t;
  }
  return "";
}

std::string normalize_formatting(const std::string& input) {
  std::vector<std::string> lines;
  bool blank_pending = false;
  for (auto line : text::split_lines(input)) {
    // Collapse runs of horizontal whitespace.
    std::string collapsed;
    bool space = false;
    for (char c : line) {
      if (c == ' ' || c == '\t' || c == '\r') {
        space = true;
        continue;
      }
      if (space && !collapsed.empty()) collapsed += ' ';
      space = false;
      collapsed += c;
    }
    line = collapsed;
    if (line.empty()) {
      blank_pending = !lines.empty();
      continue;
    }
    if (line[0] == '#') {
      auto k = line.find_first_not_of('#');
      line = "## " + text::trim(k == std::string::npos ? "" : line.substr(k));
    } else if (line.size() > 4 && line.rfind("**", 0) == 0 &&
               line.compare(line.size() - 2, 2, "**") == 0 &&
               line.find("**", 2) == line.size() - 2) {
      line = "## " + text::trim(line.substr(2, line.size() - 4));
    } else if (line.size() > 1 && (line[0] == '*' || line[0] == '+' || line[0] == '-') &&
               line[1] == ' ') {
      line = "- " + line.substr(2);
    } else if (line.rfind("\xe2\x80\xa2", 0) == 0) {  // U+2022 bullet
      line = "- " + text::trim(line.substr(3));
    }
    if (blank_pending) lines.emplace_back();
    blank_pending = false;
    lines.push_back(std::move(line));
  }
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out += '\n';
    out += lines[i];
  }
  return out;
}

BlindedPair blind(const std::string& review_a, const std::string& review_b, std::uint64_t seed,
                  const BlindingTerms& terms) {
  if (text::trim(review_a).empty() || text::trim(review_b).empty()) {
    throw PreconditionError("blind: both reviews must be non-empty");
  }
  auto a = normalize_formatting(terms.scrub(review_a));
  auto b = normalize_formatting(terms.scrub(review_b));
  BlindedPair out;
  out.a_on_left = (seed & 1u) == 0;
  if (out.a_on_left) {
    out.left = std::move(a);
    out.right = std::move(b);
  } else {
    out.left = std::move(b);
    out.right = std::move(a);
  }
  return out;
}

}  // namespace peerpanel
