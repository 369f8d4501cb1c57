// Translation providers and the content-hash-keyed cache.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "skillgap/record.hpp"
#include "skillgap/text.hpp"
#include "skillgap/translate.hpp"

using namespace skillgap;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("skillgap-test-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter()++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    static int& counter() {
        static int n = 0;
        return n;
    }
};

// Counts translate() calls so cache behaviour is observable from outside.
class CountingProvider : public TranslationProvider {
  public:
    explicit CountingProvider(TranslationProvider& inner) : inner_(inner) {}
    std::string name() const override { return inner_.name(); }
    std::string translate(const std::string& text, const std::string& source,
                          const std::string& target) override {
        ++calls;
        return inner_.translate(text, source, target);
    }
    int calls = 0;

  private:
    TranslationProvider& inner_;
};

class FailingProvider : public TranslationProvider {
  public:
    std::string name() const override { return "failing"; }
    std::string translate(const std::string&, const std::string&, const std::string&) override {
        throw ProviderError("service unavailable");
    }
};

class EmptyProvider : public TranslationProvider {
  public:
    std::string name() const override { return "empty"; }
    std::string translate(const std::string&, const std::string&, const std::string&) override {
        return "   ";
    }
};

DocumentRecord german_record(const std::string& doc_id, const std::string& raw_body) {
    DocumentRecord rec;
    rec.source_id = "fixture-board";
    rec.doc_id = doc_id;
    rec.side = Side::demand;
    rec.language = "de";
    rec.title = "Ingenieur für Webanwendungssicherheit";
    rec.body = normalize(raw_body);
    rec.content_hash = content_hash(rec.body);
    return rec;
}

DocumentRecord english_record(const std::string& doc_id) {
    DocumentRecord rec;
    rec.source_id = "fixture-board";
    rec.doc_id = doc_id;
    rec.side = Side::demand;
    rec.language = "en";
    rec.title = "Security Engineer";
    rec.body = normalize("We ship secure software.");
    rec.content_hash = content_hash(rec.body);
    return rec;
}

}  // namespace

TEST_CASE("dictionary TSV parsing") {
    SUBCASE("comments, blank lines, case-insensitive keys, CRLF") {
        std::istringstream in("# German -> English\n\nSicherheit\tsecurity\r\nUND\tand\n");
        DictionaryProvider dict = DictionaryProvider::from_tsv(in);
        CHECK(dict.translate("sicherheit UND Sicherheit", "de", "en") ==
              "security and security");
    }
    SUBCASE("missing tab names the line") {
        std::istringstream in("gut\tgood\nkaputt broken\n");
        CHECK_THROWS_WITH_AS(DictionaryProvider::from_tsv(in), doctest::Contains("line 2"),
                             DataError);
    }
    SUBCASE("empty source names the line") {
        std::istringstream in("\ttarget\n");
        CHECK_THROWS_WITH_AS(DictionaryProvider::from_tsv(in), doctest::Contains("empty source"),
                             DataError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_WITH_AS(DictionaryProvider::from_tsv_file("fixtures/no-such.tsv"),
                             doctest::Contains("cannot open"), DataError);
    }
}

TEST_CASE("dictionary provider maps whole words and keeps everything else") {
    DictionaryProvider dict = DictionaryProvider::from_tsv_file("fixtures/dict.tsv");

    SUBCASE("word-for-word German sentence") {
        CHECK(dict.translate("Wir testen Webanwendungssicherheit und Kryptographie.", "de",
                             "en") == "we test web application security and cryptography.");
    }
    SUBCASE("multi-word target expands inside the sentence") {
        CHECK(dict.translate("webanwendungssicherheit", "de", "en") ==
              "web application security");
    }
    SUBCASE("loanwords and unknown words pass through verbatim") {
        CHECK(dict.translate("xss und sql injection", "de", "en") == "xss and sql injection");
        CHECK(dict.translate("Schwurbelwort", "de", "en") == "Schwurbelwort");
    }
    SUBCASE("punctuation and separators are preserved") {
        CHECK(dict.translate("sicherheit, sicherheit; (sicherheit)", "de", "en") ==
              "security, security; (security)");
    }
}

TEST_CASE("identity provider returns its input byte for byte") {
    IdentityProvider identity;
    const std::string text = "Prüfen größer – smaller <markup> &amp; raw\nlines";
    CHECK(identity.translate(text, "de", "en") == text);
}

TEST_CASE("make_provider understands the three specs") {
    CHECK(make_provider("identity")->name() == "identity");
    CHECK(make_provider("dict:fixtures/dict.tsv")->name() == "dictionary");
    CHECK(make_provider("http:http://localhost:9")->name() == "http");
    CHECK_THROWS_WITH_AS(make_provider("llm:gpt"), doctest::Contains("unknown translation"),
                         DataError);
    CHECK_THROWS_AS(make_provider("dict:fixtures/no-such.tsv"), DataError);
}

TEST_CASE("translate_if_needed translates only off-target records") {
    DictionaryProvider dict = DictionaryProvider::from_tsv_file("fixtures/dict.tsv");
    Corpus corpus;
    corpus.side = Side::demand;
    corpus.provenance = "fixture-board";
    corpus.records.push_back(english_record("EN-1"));
    corpus.records.push_back(
        german_record("DE-1", "Wir testen Webanwendungssicherheit und Kryptographie."));
    const std::string original_de_hash = corpus.records[1].content_hash;

    const TranslateResult result = translate_if_needed(corpus, dict, "en");

    REQUIRE(result.corpus.records.size() == 2);
    const DocumentRecord& en = result.corpus.records[0];
    const DocumentRecord& de = result.corpus.records[1];

    // The English record is untouched, hash and all.
    CHECK(en == corpus.records[0]);

    CHECK(de.language == "en");
    CHECK(de.title == "engineer for web application security");
    CHECK(de.body == "we test web application security and cryptography.");
    CHECK(de.content_hash == content_hash(de.body));
    CHECK(de.content_hash != original_de_hash);
    // Identity of the document is preserved.
    CHECK(de.doc_id == "DE-1");
    CHECK(de.source_id == "fixture-board");

    CHECK(result.translated == 1);
    CHECK(result.provider_calls == 2);  // title + body
    CHECK(result.cache_hits == 0);
    CHECK(result.diagnostics.empty());

    // The input corpus was not modified.
    CHECK(corpus.records[1].language == "de");
    CHECK(corpus.records[1].content_hash == original_de_hash);

    SUBCASE("corpus metadata carries over") {
        CHECK(result.corpus.side == Side::demand);
        CHECK(result.corpus.provenance == "fixture-board");
    }
}

TEST_CASE("provider failure keeps the record and reports it") {
    FailingProvider failing;
    Corpus corpus;
    corpus.side = Side::demand;
    corpus.records.push_back(german_record("DE-9", "Wir testen sicherheit."));

    const TranslateResult result = translate_if_needed(corpus, failing, "en");
    REQUIRE(result.corpus.records.size() == 1);
    CHECK(result.corpus.records[0] == corpus.records[0]);  // passed through untranslated
    CHECK(result.translated == 0);
    REQUIRE(result.diagnostics.size() == 1);
    CHECK(result.diagnostics[0].reason.find("provider failure") != std::string::npos);
    CHECK(result.diagnostics[0].detail.find("DE-9") != std::string::npos);
}

TEST_CASE("empty provider output keeps the record and reports it") {
    EmptyProvider empty;
    Corpus corpus;
    corpus.records.push_back(german_record("DE-8", "Wir testen sicherheit."));
    const TranslateResult result = translate_if_needed(corpus, empty, "en");
    REQUIRE(result.corpus.records.size() == 1);
    CHECK(result.corpus.records[0].language == "de");
    REQUIRE(result.diagnostics.size() == 1);
    CHECK(result.diagnostics[0].reason.find("empty body") != std::string::npos);
}

TEST_CASE("cache: second run answers from disk with zero provider calls") {
    TempDir tmp;
    DictionaryProvider dict = DictionaryProvider::from_tsv_file("fixtures/dict.tsv");
    Corpus corpus;
    corpus.side = Side::demand;
    corpus.records.push_back(german_record("DE-1", "Wir testen Webanwendungssicherheit."));
    corpus.records.push_back(german_record("DE-2", "Wir testen Kryptographie und sicherheit."));
    corpus.records.push_back(english_record("EN-1"));

    Corpus first_output;
    {
        CountingProvider counting(dict);
        TranslationCache cache(tmp.path);
        const TranslateResult first = translate_if_needed(corpus, counting, "en", &cache);
        CHECK(first.provider_calls == 4);
        CHECK(first.cache_hits == 0);
        CHECK(first.translated == 2);
        CHECK(counting.calls == 4);
        first_output = first.corpus;
    }
    CHECK(std::filesystem::exists(tmp.path / "translations-en.json"));

    {
        CountingProvider counting(dict);
        TranslationCache cache(tmp.path);  // fresh instance: must reload from disk
        const TranslateResult second = translate_if_needed(corpus, counting, "en", &cache);
        CHECK(second.provider_calls == 0);
        CHECK(counting.calls == 0);
        CHECK(second.cache_hits == 2);
        CHECK(second.translated == 2);
        CHECK(second.corpus.records == first_output.records);
    }
}

TEST_CASE("corrupt cache file is discarded, reported, and rebuilt") {
    TempDir tmp;
    {
        std::ofstream out(tmp.path / "translations-en.json", std::ios::binary);
        out << "{{{ not json";
    }
    DictionaryProvider dict = DictionaryProvider::from_tsv_file("fixtures/dict.tsv");
    Corpus corpus;
    corpus.records.push_back(german_record("DE-1", "Wir testen sicherheit."));

    CountingProvider counting(dict);
    TranslationCache cache(tmp.path);
    const TranslateResult result = translate_if_needed(corpus, counting, "en", &cache);

    CHECK(counting.calls == 2);  // cache gave nothing
    bool reported = false;
    for (const Diagnostic& d : result.diagnostics) {
        if (d.reason.find("corrupt cache") != std::string::npos) reported = true;
    }
    CHECK(reported);

    // The rebuilt file is valid now: a fresh run hits the cache.
    CountingProvider counting2(dict);
    TranslationCache cache2(tmp.path);
    const TranslateResult again = translate_if_needed(corpus, counting2, "en", &cache2);
    CHECK(counting2.calls == 0);
    CHECK(again.cache_hits == 1);
}

TEST_CASE("cache entries are keyed per target language") {
    TempDir tmp;
    TranslationCache cache(tmp.path);
    cache.put("hash-1", "en", {"title-en", "body-en"});
    cache.put("hash-1", "de", {"title-de", "body-de"});
    cache.flush();

    TranslationCache reloaded(tmp.path);
    auto en = reloaded.get("hash-1", "en");
    auto de = reloaded.get("hash-1", "de");
    REQUIRE(en.has_value());
    REQUIRE(de.has_value());
    CHECK(en->title == "title-en");
    CHECK(de->title == "title-de");
    CHECK(!reloaded.get("hash-2", "en").has_value());
}
