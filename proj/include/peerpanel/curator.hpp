#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "peerpanel/types.hpp"

namespace peerpanel::curator {

struct NormalizedDecision {
  DecisionLabel label = DecisionLabel::Reject;
  SourceStatus status = SourceStatus::Active;
};

/// Maps a conference decision string ("Accept (Oral)", "ICLR 2025 Poster",
/// "Withdrawn Submission", "Desk Rejected Submission", ...) to a label.
/// Withdrawn becomes Reject with status withdrawn. Throws UnknownDecision.
NormalizedDecision normalize_decision(const std::string& decision);

/// Converts one OpenReview note (API v1 or v2 shape) into the flat ingest
/// record {id, title, decision, avg_score, status, body}.
json from_openreview(const json& note);

struct IngestResult {
  std::vector<Manuscript> corpus;
  std::vector<std::string> skipped;  // one log line per dropped record
};

/// JSON lines of {id, title, decision, avg_score?, status?, body?}. Lines
/// that look like OpenReview notes (have "content") go through the adapter.
/// Unknown decisions, duplicates and malformed lines are skipped and logged.
IngestResult ingest(std::istream& in);
IngestResult ingest_file(const std::filesystem::path& path);

struct Quotas {
  std::size_t posters_per_third = 100;
  std::array<std::size_t, 3> rejects_per_third = {167, 167, 166};
  std::size_t withdrawn = 500;
};

struct ManifestEntry {
  std::string paper_id;
  DecisionLabel label = DecisionLabel::Reject;
  std::string stratum;

  bool operator==(const ManifestEntry&) const = default;
};

struct Manifest {
  std::vector<ManifestEntry> entries;
  std::vector<std::string> warnings;

  std::map<std::string, std::size_t> label_counts() const;
  std::map<std::string, std::size_t> stratum_counts() const;
};

/// All orals, spotlights and desk rejects; posters and decided rejects
/// ranked by average score (desc, ties by id) and sampled per third; a
/// uniform sample of withdrawn papers. Short strata are taken whole with a
/// warning. Deterministic under the seed.
Manifest stratified_sample(const std::vector<Manuscript>& corpus, std::uint64_t seed,
                           const Quotas& quotas = {});

/// Sizes of the three contiguous thirds of n ranked items (differ by <= 1).
std::array<std::size_t, 3> third_sizes(std::size_t n);

/// JSON lines {paper_id, label, stratum} followed by one {"summary": ...}
/// line. Throws PreconditionError on an empty manifest, IoError on write
/// failure.
void export_manifest(const Manifest& manifest, const std::filesystem::path& path);

/// Reads entries back; checks the summary block against the entries.
/// Throws SchemaError / IoError.
Manifest read_manifest(const std::filesystem::path& path);

}  // namespace peerpanel::curator
