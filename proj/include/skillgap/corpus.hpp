#ifndef SKILLGAP_CORPUS_HPP
#define SKILLGAP_CORPUS_HPP

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "skillgap/record.hpp"

namespace skillgap {

struct IngestResult {
    Corpus corpus;
    std::vector<Diagnostic> diagnostics;
};

// Reads raw records (JSON Lines; required keys source_id, title, body;
// doc_id defaults to the content hash), normalizes bodies and computes
// hashes. Rejections are reported per record and never abort the stream.
IngestResult ingest_records(std::istream& raw_jsonl, Side side,
                            const std::string& provenance = "");

struct DedupResult {
    Corpus corpus;
    std::size_t removed_by_id = 0;
    std::size_t removed_by_hash = 0;
};

// Pass 1 keeps the earliest record per (source_id, doc_id); pass 2 keeps the
// earliest per content_hash across sources. Survivor order is stable.
DedupResult dedup(const Corpus& corpus);

// Default localized relevance keywords ("security"/"sicherheit").
const std::map<std::string, std::string>& default_relevance_keywords();

// Keeps records where the keyword occurs in the title, or at least
// min_body_count times in the body. Matching is case-insensitive substring
// over normalized text; the keyword is localized per record language via
// the table, falling back to `keyword`.
Corpus filter_relevant(const Corpus& corpus, const std::string& keyword,
                       int min_body_count = 3,
                       const std::map<std::string, std::string>& language_keywords =
                           default_relevance_keywords());

// Non-overlapping occurrences of `needle` in `haystack` (both already
// normalized).
std::size_t count_occurrences(const std::string& haystack, const std::string& needle);

CorpusSummary summarize(const Corpus& corpus);

// JSON Lines persistence, one record per line, UTF-8, retrieved_at in
// RFC 3339. Write/read round-trips field for field.
void write_corpus(const Corpus& corpus, std::ostream& out);
void write_corpus_file(const Corpus& corpus, const std::string& path);
Corpus read_corpus(std::istream& in, const std::string& what = "corpus");
Corpus read_corpus_file(const std::string& path);

std::string record_to_json(const DocumentRecord& record);

}  // namespace skillgap

#endif
