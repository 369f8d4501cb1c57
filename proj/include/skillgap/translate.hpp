#ifndef SKILLGAP_TRANSLATE_HPP
#define SKILLGAP_TRANSLATE_HPP

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "skillgap/record.hpp"

namespace skillgap {

class ProviderError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TranslationProvider {
public:
    virtual ~TranslationProvider() = default;
    virtual std::string name() const = 0;
    // Throws ProviderError on failure.
    virtual std::string translate(const std::string& text,
                                  const std::string& source_lang,
                                  const std::string& target_lang) = 0;
};

// Passes text through unchanged.
class IdentityProvider : public TranslationProvider {
public:
    std::string name() const override { return "identity"; }
    std::string translate(const std::string& text, const std::string&,
                          const std::string&) override {
        return text;
    }
};

// Word-for-word mapping from a TSV file (`source<TAB>target`, '#' comments).
// Replaces alphanumeric runs whose lowercased form is in the table; anything
// else is kept verbatim. Meant for tests and offline fixtures.
class DictionaryProvider : public TranslationProvider {
public:
    explicit DictionaryProvider(std::map<std::string, std::string> entries)
        : entries_(std::move(entries)) {}
    static DictionaryProvider from_tsv(std::istream& in);
    static DictionaryProvider from_tsv_file(const std::string& path);

    std::string name() const override { return "dictionary"; }
    std::string translate(const std::string& text, const std::string& source_lang,
                          const std::string& target_lang) override;

private:
    std::map<std::string, std::string> entries_;
};

// Adapter for the JSON-over-HTTP provider contract in docs/providers.md.
class HttpProvider : public TranslationProvider {
public:
    explicit HttpProvider(std::string base_url, int timeout_seconds = 30);

    std::string name() const override { return "http"; }
    std::string translate(const std::string& text, const std::string& source_lang,
                          const std::string& target_lang) override;

private:
    std::string base_url_;
    int timeout_seconds_;
};

// "identity", "dict:<tsv path>" or "http:<base url>".
std::unique_ptr<TranslationProvider> make_provider(const std::string& spec);

struct CachedTranslation {
    std::string title;
    std::string body;
};

// File-backed translation cache keyed by (content_hash, target language).
// One JSON file per target under the cache directory; a corrupt file is
// discarded and rebuilt.
class TranslationCache {
public:
    explicit TranslationCache(std::filesystem::path dir);

    std::optional<CachedTranslation> get(const std::string& hash,
                                         const std::string& target);
    void put(const std::string& hash, const std::string& target,
             CachedTranslation value);
    void flush();

    const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

private:
    void ensure_loaded(const std::string& target);
    std::filesystem::path file_for(const std::string& target) const;

    std::filesystem::path dir_;
    std::map<std::string, std::map<std::string, CachedTranslation>> by_target_;
    std::map<std::string, bool> dirty_;
    std::vector<Diagnostic> diagnostics_;
};

struct TranslateResult {
    Corpus corpus;
    std::vector<Diagnostic> diagnostics;
    std::size_t provider_calls = 0;
    std::size_t cache_hits = 0;
    std::size_t translated = 0;
};

// Replaces records whose language differs from the target with translated
// copies (title and body); content hashes are recomputed and the language
// tag updated. Provider failures pass the record through untranslated with
// a diagnostic. The input corpus is never modified.
TranslateResult translate_if_needed(const Corpus& corpus,
                                    TranslationProvider& provider,
                                    const std::string& target_language,
                                    TranslationCache* cache = nullptr);

}  // namespace skillgap

#endif
