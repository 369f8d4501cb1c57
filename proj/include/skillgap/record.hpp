#ifndef SKILLGAP_RECORD_HPP
#define SKILLGAP_RECORD_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace skillgap {

// Hard data errors (bad files, impossible requests). The CLI maps these to
// exit code 2; per-record problems travel as Diagnostics instead.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Side { demand, supply };

enum class Level { none, bachelor, master };

std::string to_string(Side side);
Side side_from_string(const std::string& s);
std::string to_string(Level level);
Level level_from_string(const std::string& s);

// One job ad (demand) or course description (supply).
// `body` is stored in normalized form; `content_hash` is always the digest
// of the normalized body.
struct DocumentRecord {
    std::string source_id;
    std::string doc_id;
    Side side = Side::demand;
    std::string language = "und";  // ISO 639-1, "und" when unknown
    std::string country;
    std::string title;
    std::string body;
    Level level = Level::none;
    std::string retrieved_at = "1970-01-01T00:00:00Z";  // RFC 3339
    std::string content_hash;

    bool operator==(const DocumentRecord&) const = default;
};

struct Corpus {
    Side side = Side::demand;
    std::vector<DocumentRecord> records;
    std::string provenance;

    bool operator==(const Corpus&) const = default;
};

struct CorpusSummary {
    std::map<std::pair<std::string, std::string>, std::size_t> counts;  // (country, language)
    std::size_t total = 0;
};

// Per-record or per-line problem report. Rendered to stderr as one JSON
// object per diagnostic by the CLI.
struct Diagnostic {
    std::string op;
    std::string reason;
    std::string detail;
    long line = -1;  // 1-based input line when applicable

    std::string to_json() const;
};

}  // namespace skillgap

#endif
