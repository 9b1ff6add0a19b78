#include "topics/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "topics/errors.hpp"

namespace topics {

namespace {

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isspace(c) != 0;
  });
}

std::string first_word(std::string_view title) {
  std::size_t begin = 0;
  while (begin < title.size() &&
         std::isspace(static_cast<unsigned char>(title[begin]))) {
    ++begin;
  }
  std::size_t end = begin;
  while (end < title.size() &&
         !std::isspace(static_cast<unsigned char>(title[end]))) {
    ++end;
  }
  return std::string(title.substr(begin, end - begin));
}

}  // namespace

PublicationCorpus::PublicationCorpus(std::vector<PublicationRecord> records)
    : records_(std::move(records)) {
  by_id_.reserve(records_.size());
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const PublicationRecord& record = records_[i];
    if (record.id.empty()) {
      throw InputError("record with empty id");
    }
    if (record.year <= 0) {
      throw InputError("record '" + record.id + "' has non-positive year");
    }
    if (!by_id_.emplace(record.id, i).second) {
      throw InputError("duplicate paper id '" + record.id + "'");
    }
  }
  for (const PublicationRecord& record : records_) {
    venues_.push_back(record.venue);
    years_.push_back(record.year);
  }
  std::sort(venues_.begin(), venues_.end());
  venues_.erase(std::unique(venues_.begin(), venues_.end()), venues_.end());
  std::sort(years_.begin(), years_.end());
  years_.erase(std::unique(years_.begin(), years_.end()), years_.end());
}

bool PublicationCorpus::has_venue(std::string_view venue) const {
  return std::binary_search(venues_.begin(), venues_.end(), venue);
}

const PublicationRecord* PublicationCorpus::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : &records_[it->second];
}

PublicationCorpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw MissingArtifactError("cannot open corpus file: " + path.string());
  }

  std::vector<PublicationRecord> records;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (is_blank(line)) {
      continue;
    }
    nlohmann::json object;
    try {
      object = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw InputError("line " + std::to_string(line_number) +
                       ": parse error: " + e.what());
    }
    auto fail = [&](const std::string& what) -> InputError {
      return InputError("line " + std::to_string(line_number) + ": " + what);
    };
    if (!object.is_object()) {
      throw fail("expected a JSON object");
    }
    for (const char* key : {"id", "title", "abstract", "venue", "year"}) {
      if (!object.contains(key)) {
        throw fail(std::string("missing required key '") + key + "'");
      }
    }
    for (const char* key : {"id", "title", "abstract", "venue"}) {
      if (!object.at(key).is_string()) {
        throw fail(std::string("key '") + key + "' must be a string");
      }
    }
    if (!object.at("year").is_number_integer()) {
      throw fail("key 'year' must be an integer");
    }

    PublicationRecord record;
    record.id = object.at("id").get<std::string>();
    record.title = object.at("title").get<std::string>();
    record.abstract_text = object.at("abstract").get<std::string>();
    record.venue = object.at("venue").get<std::string>();
    record.year = object.at("year").get<int>();
    if (record.id.empty()) {
      throw fail("key 'id' must be non-empty");
    }
    if (record.year <= 0) {
      throw fail("key 'year' must be positive");
    }
    records.push_back(std::move(record));
  }

  try {
    return PublicationCorpus(std::move(records));
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void save_corpus(const std::filesystem::path& path,
                 const PublicationCorpus& corpus) {
  std::ofstream out(path);
  if (!out) {
    throw InputError("cannot write corpus file: " + path.string());
  }
  for (const PublicationRecord& record : corpus.records()) {
    nlohmann::json object;
    object["id"] = record.id;
    object["title"] = record.title;
    object["abstract"] = record.abstract_text;
    object["venue"] = record.venue;
    object["year"] = record.year;
    out << object.dump() << '\n';
  }
}

bool title_matches_heuristic(std::string_view title) {
  if (first_word(title) == "Publication") {
    return true;
  }
  return title.find("Introduction") != std::string_view::npos ||
         title.find("pecial") != std::string_view::npos;
}

std::pair<PublicationCorpus, FilterReport> filter_corpus(
    const PublicationCorpus& corpus, const FilterOptions& options) {
  FilterReport report;
  std::vector<PublicationRecord> kept;
  kept.reserve(corpus.size());

  for (const PublicationRecord& record : corpus.records()) {
    if (is_blank(record.abstract_text)) {
      ++report.removed_missing_abstract;
      continue;
    }
    if (title_matches_heuristic(record.title)) {
      ++report.removed_title_heuristic;
      continue;
    }
    const bool below = options.min_year && record.year < *options.min_year;
    const bool above = options.max_year && record.year > *options.max_year;
    const bool off_venue =
        options.venue_allowlist && !options.venue_allowlist->count(record.venue);
    if (below || above || off_venue) {
      ++report.removed_by_year_or_venue;
      continue;
    }
    kept.push_back(record);
  }

  report.kept = static_cast<std::int64_t>(kept.size());
  return {PublicationCorpus(std::move(kept)), report};
}

std::vector<VenueYearCount> corpus_stats(const PublicationCorpus& corpus) {
  std::map<std::pair<std::string, int>, std::int64_t> counts;
  for (const PublicationRecord& record : corpus.records()) {
    ++counts[{record.venue, record.year}];
  }
  std::vector<VenueYearCount> rows;
  rows.reserve(counts.size());
  for (const auto& [key, count] : counts) {
    rows.push_back({key.first, key.second, count});
  }
  return rows;
}

}  // namespace topics
