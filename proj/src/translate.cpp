#include "skillgap/translate.hpp"

#include <fstream>
#include <istream>

#include "json.hpp"
#include "skillgap/text.hpp"

// Client-only use of cpp-httplib; keep the footprint small.
#define CPPHTTPLIB_NO_EXCEPTIONS
#include "httplib.h"

namespace skillgap {

using nlohmann::json;

DictionaryProvider DictionaryProvider::from_tsv(std::istream& in) {
    std::map<std::string, std::string> entries;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw DataError("dictionary: missing tab at line " + std::to_string(line_no));
        const std::string key = normalize(line.substr(0, tab));
        const std::string value = line.substr(tab + 1);
        if (key.empty())
            throw DataError("dictionary: empty source at line " + std::to_string(line_no));
        entries[key] = value;
    }
    return DictionaryProvider(std::move(entries));
}

DictionaryProvider DictionaryProvider::from_tsv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open dictionary file: " + path);
    return from_tsv(in);
}

std::string DictionaryProvider::translate(const std::string& text,
                                          const std::string& /*source_lang*/,
                                          const std::string& /*target_lang*/) {
    // Walk code points; map maximal alphanumeric runs through the table.
    const std::u32string cps = utf8_decode(text);
    std::string out;
    std::u32string run;
    auto flush_run = [&] {
        if (run.empty()) return;
        const std::string word = utf8_encode(run);
        const auto it = entries_.find(normalize(word));
        out += it != entries_.end() ? it->second : word;
        run.clear();
    };
    for (char32_t c : cps) {
        if (is_word_codepoint(c)) {
            run.push_back(c);
        } else {
            flush_run();
            out += utf8_encode(std::u32string(1, c));
        }
    }
    flush_run();
    return out;
}

HttpProvider::HttpProvider(std::string base_url, int timeout_seconds)
    : base_url_(std::move(base_url)), timeout_seconds_(timeout_seconds) {}

std::string HttpProvider::translate(const std::string& text,
                                    const std::string& source_lang,
                                    const std::string& target_lang) {
    httplib::Client client(base_url_);
    client.set_connection_timeout(timeout_seconds_);
    client.set_read_timeout(timeout_seconds_);

    json request;
    request["text"] = text;
    request["source_lang"] = source_lang;
    request["target_lang"] = target_lang;

    auto res = client.Post("/translate", request.dump(), "application/json");
    if (!res)
        throw ProviderError("http provider: no response from " + base_url_);
    if (res->status != 200)
        throw ProviderError("http provider: status " + std::to_string(res->status));
    json reply = json::parse(res->body, nullptr, false);
    if (reply.is_discarded() || !reply.contains("text") || !reply["text"].is_string())
        throw ProviderError("http provider: malformed reply body");
    return reply["text"].get<std::string>();
}

std::unique_ptr<TranslationProvider> make_provider(const std::string& spec) {
    if (spec == "identity") return std::make_unique<IdentityProvider>();
    if (spec.rfind("dict:", 0) == 0) {
        return std::make_unique<DictionaryProvider>(
            DictionaryProvider::from_tsv_file(spec.substr(5)));
    }
    if (spec.rfind("http:", 0) == 0) {
        return std::make_unique<HttpProvider>(spec.substr(5));
    }
    throw DataError("unknown translation provider: " + spec);
}

TranslationCache::TranslationCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    if (!dir_.empty()) std::filesystem::create_directories(dir_);
}

std::filesystem::path TranslationCache::file_for(const std::string& target) const {
    return dir_ / ("translations-" + target + ".json");
}

void TranslationCache::ensure_loaded(const std::string& target) {
    if (by_target_.count(target)) return;
    auto& entries = by_target_[target];
    dirty_[target] = false;
    if (dir_.empty()) return;

    std::ifstream in(file_for(target), std::ios::binary);
    if (!in) return;
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        diagnostics_.push_back({"translate.cache", "corrupt cache discarded",
                                file_for(target).string()});
        dirty_[target] = true;  // rebuild on flush
        return;
    }
    for (const auto& [hash, value] : j.items()) {
        if (!value.is_object() || !value.contains("title") || !value.contains("body"))
            continue;
        entries[hash] = {value["title"].get<std::string>(),
                         value["body"].get<std::string>()};
    }
}

std::optional<CachedTranslation> TranslationCache::get(const std::string& hash,
                                                       const std::string& target) {
    ensure_loaded(target);
    const auto& entries = by_target_[target];
    const auto it = entries.find(hash);
    if (it == entries.end()) return std::nullopt;
    return it->second;
}

void TranslationCache::put(const std::string& hash, const std::string& target,
                           CachedTranslation value) {
    ensure_loaded(target);
    by_target_[target][hash] = std::move(value);
    dirty_[target] = true;
}

void TranslationCache::flush() {
    if (dir_.empty()) return;
    for (auto& [target, entries] : by_target_) {
        if (!dirty_[target]) continue;
        json j = json::object();
        for (const auto& [hash, value] : entries) {
            j[hash] = {{"title", value.title}, {"body", value.body}};
        }
        std::ofstream out(file_for(target), std::ios::binary | std::ios::trunc);
        out << j.dump(2) << '\n';
        dirty_[target] = false;
    }
}

TranslateResult translate_if_needed(const Corpus& corpus,
                                    TranslationProvider& provider,
                                    const std::string& target_language,
                                    TranslationCache* cache) {
    TranslateResult result;
    result.corpus.side = corpus.side;
    result.corpus.provenance = corpus.provenance;
    result.corpus.records.reserve(corpus.records.size());

    for (const auto& rec : corpus.records) {
        if (rec.language == target_language) {
            result.corpus.records.push_back(rec);
            continue;
        }

        CachedTranslation translated;
        bool have = false;
        if (cache) {
            if (auto hit = cache->get(rec.content_hash, target_language)) {
                translated = *hit;
                have = true;
                ++result.cache_hits;
            }
        }
        if (!have) {
            try {
                translated.title =
                    provider.translate(rec.title, rec.language, target_language);
                ++result.provider_calls;
                translated.body =
                    provider.translate(rec.body, rec.language, target_language);
                ++result.provider_calls;
            } catch (const ProviderError& e) {
                result.diagnostics.push_back(
                    {"translate", "provider failure, record kept untranslated",
                     "doc_id=" + rec.doc_id + ": " + e.what()});
                result.corpus.records.push_back(rec);
                continue;
            }
            if (cache) cache->put(rec.content_hash, target_language, translated);
        }

        DocumentRecord out = rec;
        out.title = translated.title;
        out.body = normalize(translated.body);
        if (out.body.empty()) {
            result.diagnostics.push_back(
                {"translate", "provider returned empty body, record kept untranslated",
                 "doc_id=" + rec.doc_id});
            result.corpus.records.push_back(rec);
            continue;
        }
        out.content_hash = content_hash(out.body);
        out.language = target_language;
        result.corpus.records.push_back(std::move(out));
        ++result.translated;
    }

    if (cache) {
        cache->flush();
        for (const auto& d : cache->diagnostics()) result.diagnostics.push_back(d);
    }
    return result;
}

}  // namespace skillgap
