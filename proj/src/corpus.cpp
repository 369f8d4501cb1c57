#include "skillgap/corpus.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "skillgap/text.hpp"

namespace skillgap {

using nlohmann::json;

std::string to_string(Side side) {
    return side == Side::demand ? "demand" : "supply";
}

Side side_from_string(const std::string& s) {
    if (s == "demand") return Side::demand;
    if (s == "supply") return Side::supply;
    throw DataError("unknown side: " + s);
}

std::string to_string(Level level) {
    switch (level) {
        case Level::bachelor: return "bachelor";
        case Level::master: return "master";
        default: return "none";
    }
}

Level level_from_string(const std::string& s) {
    if (s == "bachelor") return Level::bachelor;
    if (s == "master") return Level::master;
    if (s == "none" || s.empty()) return Level::none;
    throw DataError("unknown level: " + s);
}

std::string Diagnostic::to_json() const {
    json j;
    j["op"] = op;
    j["reason"] = reason;
    if (!detail.empty()) j["detail"] = detail;
    if (line >= 0) j["line"] = line;
    return j.dump();
}

namespace {

// RFC 3339 timestamp, e.g. 2021-03-14T09:26:53Z or with a numeric offset.
bool looks_like_rfc3339(const std::string& s) {
    auto digit = [&](size_t i) { return i < s.size() && s[i] >= '0' && s[i] <= '9'; };
    if (s.size() < 20) return false;
    for (size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u, 11u, 12u, 14u, 15u, 17u, 18u})
        if (!digit(i)) return false;
    if (s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != 't') ||
        s[13] != ':' || s[16] != ':')
        return false;
    size_t i = 19;
    if (s[i] == '.') {
        ++i;
        if (!digit(i)) return false;
        while (digit(i)) ++i;
    }
    if (i >= s.size()) return false;
    if (s[i] == 'Z' || s[i] == 'z') return i + 1 == s.size();
    if (s[i] != '+' && s[i] != '-') return false;
    return s.size() == i + 6 && digit(i + 1) && digit(i + 2) && s[i + 3] == ':' &&
           digit(i + 4) && digit(i + 5);
}

std::string get_string(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) return "";
    return it->get<std::string>();
}

}  // namespace

IngestResult ingest_records(std::istream& raw_jsonl, Side side,
                            const std::string& provenance) {
    IngestResult result;
    result.corpus.side = side;
    result.corpus.provenance = provenance;

    std::string line;
    long line_no = 0;
    while (std::getline(raw_jsonl, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            result.diagnostics.push_back(
                {"ingest", "malformed input line", "", line_no});
            continue;
        }

        DocumentRecord rec;
        rec.source_id = get_string(j, "source_id");
        rec.title = get_string(j, "title");
        const std::string raw_body = get_string(j, "body");
        if (rec.source_id.empty()) {
            result.diagnostics.push_back({"ingest", "missing source_id", "", line_no});
            continue;
        }
        if (!j.contains("title")) {
            result.diagnostics.push_back({"ingest", "missing title", "", line_no});
            continue;
        }
        rec.body = normalize(raw_body);
        if (rec.body.empty()) {
            result.diagnostics.push_back(
                {"ingest", "empty body after normalization",
                 "source_id=" + rec.source_id, line_no});
            continue;
        }
        rec.content_hash = content_hash(rec.body);
        rec.doc_id = get_string(j, "doc_id");
        if (rec.doc_id.empty()) rec.doc_id = rec.content_hash;
        rec.side = side;
        const std::string lang = get_string(j, "language");
        rec.language = lang.empty() ? "und" : lang;
        rec.country = get_string(j, "country");
        try {
            rec.level = level_from_string(get_string(j, "level"));
        } catch (const DataError& e) {
            result.diagnostics.push_back({"ingest", e.what(), "", line_no});
            continue;
        }
        const std::string ts = get_string(j, "retrieved_at");
        if (!ts.empty()) {
            if (!looks_like_rfc3339(ts)) {
                result.diagnostics.push_back(
                    {"ingest", "retrieved_at is not RFC 3339", ts, line_no});
                continue;
            }
            rec.retrieved_at = ts;
        }
        result.corpus.records.push_back(std::move(rec));
    }
    return result;
}

DedupResult dedup(const Corpus& corpus) {
    DedupResult result;
    result.corpus.side = corpus.side;
    result.corpus.provenance = corpus.provenance;

    std::unordered_set<std::string> seen_ids;
    std::vector<const DocumentRecord*> after_id;
    for (const auto& rec : corpus.records) {
        const std::string key = rec.source_id + "\x1f" + rec.doc_id;
        if (seen_ids.insert(key).second) {
            after_id.push_back(&rec);
        } else {
            ++result.removed_by_id;
        }
    }

    std::unordered_set<std::string> seen_hashes;
    for (const auto* rec : after_id) {
        if (seen_hashes.insert(rec->content_hash).second) {
            result.corpus.records.push_back(*rec);
        } else {
            ++result.removed_by_hash;
        }
    }
    return result;
}

const std::map<std::string, std::string>& default_relevance_keywords() {
    static const std::map<std::string, std::string> table = {
        {"en", "security"}, {"de", "sicherheit"}};
    return table;
}

std::size_t count_occurrences(const std::string& haystack, const std::string& needle) {
    if (needle.empty()) return 0;
    std::size_t count = 0;
    std::size_t pos = 0;
    while ((pos = haystack.find(needle, pos)) != std::string::npos) {
        ++count;
        pos += needle.size();
    }
    return count;
}

Corpus filter_relevant(const Corpus& corpus, const std::string& keyword,
                       int min_body_count,
                       const std::map<std::string, std::string>& language_keywords) {
    if (keyword.empty()) throw DataError("filter keyword must be non-empty");
    if (min_body_count < 1) throw DataError("min_body_count must be >= 1");

    Corpus out;
    out.side = corpus.side;
    out.provenance = corpus.provenance;
    for (const auto& rec : corpus.records) {
        auto it = language_keywords.find(rec.language);
        const std::string kw =
            normalize(it != language_keywords.end() ? it->second : keyword);
        const bool in_title = normalize(rec.title).find(kw) != std::string::npos;
        const bool in_body =
            count_occurrences(rec.body, kw) >= static_cast<std::size_t>(min_body_count);
        if (in_title || in_body) out.records.push_back(rec);
    }
    return out;
}

CorpusSummary summarize(const Corpus& corpus) {
    CorpusSummary summary;
    for (const auto& rec : corpus.records) {
        ++summary.counts[{rec.country, rec.language}];
    }
    summary.total = corpus.records.size();
    return summary;
}

std::string record_to_json(const DocumentRecord& record) {
    json j;
    j["source_id"] = record.source_id;
    j["doc_id"] = record.doc_id;
    j["side"] = to_string(record.side);
    j["language"] = record.language;
    j["country"] = record.country;
    j["title"] = record.title;
    j["body"] = record.body;
    j["level"] = to_string(record.level);
    j["retrieved_at"] = record.retrieved_at;
    j["content_hash"] = record.content_hash;
    return j.dump();
}

void write_corpus(const Corpus& corpus, std::ostream& out) {
    for (const auto& rec : corpus.records) {
        out << record_to_json(rec) << '\n';
    }
}

void write_corpus_file(const Corpus& corpus, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write corpus file: " + path);
    write_corpus(corpus, out);
}

Corpus read_corpus(std::istream& in, const std::string& what) {
    Corpus corpus;
    bool side_set = false;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            throw DataError(what + ": malformed JSON at line " + std::to_string(line_no));
        }
        DocumentRecord rec;
        try {
            rec.source_id = j.at("source_id").get<std::string>();
            rec.doc_id = j.at("doc_id").get<std::string>();
            rec.side = side_from_string(j.at("side").get<std::string>());
            rec.language = j.at("language").get<std::string>();
            rec.country = j.at("country").get<std::string>();
            rec.title = j.at("title").get<std::string>();
            rec.body = j.at("body").get<std::string>();
            rec.level = level_from_string(j.at("level").get<std::string>());
            rec.retrieved_at = j.at("retrieved_at").get<std::string>();
            rec.content_hash = j.at("content_hash").get<std::string>();
        } catch (const json::exception& e) {
            throw DataError(what + ": bad record at line " + std::to_string(line_no) +
                            ": " + e.what());
        }
        if (rec.content_hash != content_hash(rec.body)) {
            throw DataError(what + ": content_hash mismatch at line " +
                            std::to_string(line_no) + " (corrupt or hand-edited file)");
        }
        if (!side_set) {
            corpus.side = rec.side;
            side_set = true;
        } else if (rec.side != corpus.side) {
            throw DataError(what + ": mixed corpus sides at line " + std::to_string(line_no));
        }
        corpus.records.push_back(std::move(rec));
    }
    return corpus;
}

Corpus read_corpus_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open corpus file: " + path);
    return read_corpus(in, path);
}

}  // namespace skillgap
