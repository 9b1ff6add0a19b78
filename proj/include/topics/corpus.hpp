#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace topics {

struct PublicationRecord {
  std::string id;
  std::string title;
  std::string abstract_text;  // may be empty, removed by filter_corpus
  std::string venue;
  int year = 0;
};

// Immutable set of publication records. Every paper id maps to exactly one
// (venue, year) pair; ids are unique and years positive.
class PublicationCorpus {
 public:
  PublicationCorpus() = default;
  explicit PublicationCorpus(std::vector<PublicationRecord> records);

  const std::vector<PublicationRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  // Distinct venues / years, sorted.
  const std::vector<std::string>& venues() const { return venues_; }
  const std::vector<int>& years() const { return years_; }
  bool has_venue(std::string_view venue) const;

  const PublicationRecord* find(std::string_view id) const;

 private:
  std::vector<PublicationRecord> records_;
  std::vector<std::string> venues_;
  std::vector<int> years_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

struct FilterOptions {
  std::optional<int> min_year;
  std::optional<int> max_year;
  std::optional<std::unordered_set<std::string>> venue_allowlist;
};

struct FilterReport {
  std::int64_t removed_missing_abstract = 0;
  std::int64_t removed_title_heuristic = 0;
  std::int64_t removed_by_year_or_venue = 0;
  std::int64_t kept = 0;
};

struct VenueYearCount {
  std::string venue;
  int year = 0;
  std::int64_t count = 0;
};

// Reads one JSON object per line with keys {id, title, abstract, venue, year}.
// Throws InputError naming the offending line on parse/schema/uniqueness
// violations.
PublicationCorpus load_corpus(const std::filesystem::path& path);

// Inverse of load_corpus, used by the ingest command.
void save_corpus(const std::filesystem::path& path,
                 const PublicationCorpus& corpus);

// True when the title starts with the word "Publication" or contains the
// substring "Introduction" or "pecial" (all case-sensitive).
bool title_matches_heuristic(std::string_view title);

// Removal precedence: missing abstract, then title heuristic, then
// year/venue bounds. Whitespace-only abstracts count as missing.
std::pair<PublicationCorpus, FilterReport> filter_corpus(
    const PublicationCorpus& corpus, const FilterOptions& options = {});

// One row per (venue, year), sorted by (venue, year); counts sum to size().
std::vector<VenueYearCount> corpus_stats(const PublicationCorpus& corpus);

}  // namespace topics
