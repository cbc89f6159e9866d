#include "peerpanel/curator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "peerpanel/errors.hpp"
#include "peerpanel/fsutil.hpp"
#include "peerpanel/rng.hpp"
#include "peerpanel/text.hpp"

namespace peerpanel::curator {

namespace {

bool has(const std::string& s, const char* needle) { return s.find(needle) != std::string::npos; }

}  // namespace

NormalizedDecision normalize_decision(const std::string& decision) {
  const auto d = text::to_lower(text::trim(decision));
  if (has(d, "withdraw")) return {DecisionLabel::Reject, SourceStatus::Withdrawn};
  if (has(d, "desk")) return {DecisionLabel::DeskReject, SourceStatus::Active};
  if (has(d, "reject")) return {DecisionLabel::Reject, SourceStatus::Active};
  // Older ICLR names: notable-top-5% is oral, notable-top-25% spotlight.
  if (has(d, "oral") || has(d, "top-5%") || has(d, "top 5%")) {
    return {DecisionLabel::AcceptOral, SourceStatus::Active};
  }
  if (has(d, "spotlight") || has(d, "top-25%") || has(d, "top 25%")) {
    return {DecisionLabel::AcceptSpotlight, SourceStatus::Active};
  }
  if (has(d, "poster")) return {DecisionLabel::AcceptPoster, SourceStatus::Active};
  throw UnknownDecision("unmapped decision: \"" + decision + "\"");
}

namespace {

// API v2 wraps every content field as {"value": ...}.
json unwrap(const json& v) {
  if (v.is_object() && v.contains("value")) return v.at("value");
  return v;
}

std::string content_string(const json& content, const char* key) {
  if (!content.contains(key)) return "";
  const auto v = unwrap(content.at(key));
  return v.is_string() ? v.get<std::string>() : "";
}

}  // namespace

json from_openreview(const json& note) {
  const json content = note.value("content", json::object());
  json out;
  out["id"] = note.value("id", note.value("forum", ""));
  out["title"] = content_string(content, "title");
  std::string decision = content_string(content, "venue");
  if (decision.empty()) decision = content_string(content, "decision");
  if (decision.empty() && note.contains("decision")) decision = note.at("decision").get<std::string>();
  out["decision"] = decision;
  out["status"] = has(text::to_lower(decision), "withdraw") ? "withdrawn" : "active";
  const auto abstract = content_string(content, "abstract");
  if (!abstract.empty()) out["body"] = abstract;
  // Scores: explicit average, or the mean of attached review ratings.
  if (note.contains("avg_score")) {
    out["avg_score"] = note.at("avg_score");
  } else if (note.contains("ratings") && note.at("ratings").is_array() &&
             !note.at("ratings").empty()) {
    double sum = 0.0;
    for (const auto& r : note.at("ratings")) sum += unwrap(r).get<double>();
    out["avg_score"] = sum / static_cast<double>(note.at("ratings").size());
  }
  return out;
}

IngestResult ingest(std::istream& in) {
  IngestResult out;
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    const std::string where = "line " + std::to_string(lineno);
    json rec;
    try {
      rec = json::parse(line);
      if (rec.contains("content")) rec = from_openreview(rec);
    } catch (const json::exception& e) {
      out.skipped.push_back(where + ": malformed record (" + e.what() + ")");
      continue;
    }
    Manuscript m;
    try {
      m.paper_id = rec.at("id").get<std::string>();
      if (m.paper_id.empty()) throw SchemaError("empty id");
      const auto nd = normalize_decision(rec.at("decision").get<std::string>());
      m.ground_truth = nd.label;
      m.source_status = nd.status;
      if (text::to_lower(rec.value("status", "")) == "withdrawn") {
        m.ground_truth = DecisionLabel::Reject;
        m.source_status = SourceStatus::Withdrawn;
      }
      m.title = rec.value("title", "");
      m.body = rec.value("body", "");
      if (rec.contains("avg_score") && rec.at("avg_score").is_number()) {
        m.avg_reviewer_score = rec.at("avg_score").get<double>();
      }
    } catch (const Error& e) {
      out.skipped.push_back(where + ": " + e.what());
      continue;
    } catch (const json::exception& e) {
      out.skipped.push_back(where + ": malformed record (" + e.what() + ")");
      continue;
    }
    if (!seen.insert(m.paper_id).second) {
      out.skipped.push_back(where + ": duplicate id " + m.paper_id);
      continue;
    }
    out.corpus.push_back(std::move(m));
  }
  return out;
}

IngestResult ingest_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return ingest(in);
}

std::array<std::size_t, 3> third_sizes(std::size_t n) {
  std::array<std::size_t, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) out[i] = n / 3 + (i < n % 3 ? 1 : 0);
  return out;
}

std::map<std::string, std::size_t> Manifest::label_counts() const {
  std::map<std::string, std::size_t> out;
  for (const auto& e : entries) ++out[std::string(to_string(e.label))];
  return out;
}

std::map<std::string, std::size_t> Manifest::stratum_counts() const {
  std::map<std::string, std::size_t> out;
  for (const auto& e : entries) ++out[e.stratum];
  return out;
}

namespace {

// No quota means take the whole stratum.
void take_sample(std::vector<const Manuscript*> pool, std::optional<std::size_t> quota_opt,
                 std::uint64_t seed, const std::string& stratum, Manifest& out) {
  const auto quota = quota_opt.value_or(pool.size());
  if (pool.size() < quota) {
    out.warnings.push_back("insufficient population for " + stratum + ": wanted " +
                           std::to_string(quota) + ", have " + std::to_string(pool.size()));
  }
  std::vector<const Manuscript*> chosen;
  if (pool.size() <= quota) {
    chosen = std::move(pool);
  } else {
    const auto perm = seeded_permutation(pool.size(), seed);
    for (std::size_t i = 0; i < quota; ++i) chosen.push_back(pool[perm[i]]);
  }
  std::sort(chosen.begin(), chosen.end(),
            [](const auto* a, const auto* b) { return a->paper_id < b->paper_id; });
  for (const auto* m : chosen) out.entries.push_back({m->paper_id, *m->ground_truth, stratum});
}

void take_thirds(std::vector<const Manuscript*> pool, const std::array<std::size_t, 3>& quotas,
                 std::uint64_t seed, const std::string& name, Manifest& out) {
  std::size_t unscored = 0;
  for (const auto* m : pool) unscored += m->avg_reviewer_score ? 0 : 1;
  if (unscored) {
    out.warnings.push_back(std::to_string(unscored) + " " + name +
                           " papers without an average score ranked last");
  }
  auto score = [](const Manuscript* m) {
    return m->avg_reviewer_score.value_or(-std::numeric_limits<double>::infinity());
  };
  std::sort(pool.begin(), pool.end(), [&](const auto* a, const auto* b) {
    if (score(a) != score(b)) return score(a) > score(b);
    return a->paper_id < b->paper_id;
  });
  static constexpr const char* kThird[] = {"top", "middle", "bottom"};
  const auto sizes = third_sizes(pool.size());
  std::size_t begin = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    std::vector<const Manuscript*> third(pool.begin() + begin, pool.begin() + begin + sizes[i]);
    begin += sizes[i];
    take_sample(std::move(third), quotas[i], seed + 0x9e3779b97f4a7c15ull * (i + 1),
                name + "_" + kThird[i], out);
  }
}

}  // namespace

Manifest stratified_sample(const std::vector<Manuscript>& corpus, std::uint64_t seed,
                           const Quotas& quotas) {
  std::vector<const Manuscript*> oral, spotlight, poster, reject, withdrawn, desk;
  for (const auto& m : corpus) {
    if (!m.ground_truth) continue;
    if (m.source_status == SourceStatus::Withdrawn) {
      withdrawn.push_back(&m);
      continue;
    }
    switch (*m.ground_truth) {
      case DecisionLabel::AcceptOral: oral.push_back(&m); break;
      case DecisionLabel::AcceptSpotlight: spotlight.push_back(&m); break;
      case DecisionLabel::AcceptPoster: poster.push_back(&m); break;
      case DecisionLabel::Reject: reject.push_back(&m); break;
      case DecisionLabel::DeskReject: desk.push_back(&m); break;
    }
  }
  Manifest out;
  const std::optional<std::size_t> all;
  take_sample(oral, all, seed, "oral", out);
  take_sample(spotlight, all, seed, "spotlight", out);
  const auto p = quotas.posters_per_third;
  take_thirds(poster, {p, p, p}, seed ^ 0x1111, "poster", out);
  take_thirds(reject, quotas.rejects_per_third, seed ^ 0x2222, "reject", out);
  take_sample(withdrawn, quotas.withdrawn, seed ^ 0x3333, "withdrawn", out);
  take_sample(desk, all, seed, "desk_reject", out);
  return out;
}

void export_manifest(const Manifest& manifest, const std::filesystem::path& path) {
  if (manifest.entries.empty()) throw PreconditionError("refusing to export an empty manifest");
  std::ostringstream out;
  for (const auto& e : manifest.entries) {
    out << json{{"paper_id", e.paper_id}, {"label", to_string(e.label)}, {"stratum", e.stratum}}
               .dump()
        << "\n";
  }
  json summary = {{"total", manifest.entries.size()},
                  {"labels", manifest.label_counts()},
                  {"strata", manifest.stratum_counts()},
                  {"warnings", manifest.warnings}};
  out << json{{"summary", summary}}.dump() << "\n";
  write_file_atomic(path, out.str());
}

Manifest read_manifest(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  Manifest out;
  std::optional<json> summary;
  std::string line;
  while (std::getline(in, line)) {
    if (text::trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw SchemaError("manifest " + path.string() + ": " + e.what());
    }
    if (j.contains("summary")) {
      summary = j.at("summary");
      continue;
    }
    ManifestEntry e;
    try {
      e.paper_id = j.at("paper_id").get<std::string>();
      e.label = j.at("label").get<DecisionLabel>();
      e.stratum = j.value("stratum", "");
    } catch (const json::exception& ex) {
      throw SchemaError("manifest " + path.string() + ": " + ex.what());
    }
    out.entries.push_back(std::move(e));
  }
  if (summary) {
    if (summary->value("total", out.entries.size()) != out.entries.size() ||
        (summary->contains("labels") &&
         summary->at("labels").get<std::map<std::string, std::size_t>>() != out.label_counts())) {
      throw SchemaError("manifest " + path.string() + ": summary does not match entries");
    }
    out.warnings = summary->value("warnings", std::vector<std::string>{});
  }
  return out;
}

}  // namespace peerpanel::curator
