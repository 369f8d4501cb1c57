// Command-line front end: corpus ingestion, matching, topic modeling and
// gap reporting, plus the end-to-end `analyze` pipeline.

#include <fcntl.h>
#include <unistd.h>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "skillgap/config.hpp"
#include "skillgap/corpus.hpp"
#include "skillgap/fetch.hpp"
#include "skillgap/gap.hpp"
#include "skillgap/match.hpp"
#include "skillgap/report.hpp"
#include "skillgap/rng.hpp"
#include "skillgap/taxonomy.hpp"
#include "skillgap/text.hpp"
#include "skillgap/topics.hpp"
#include "skillgap/translate.hpp"

namespace {

using namespace skillgap;

// Misuse that CLI11 cannot catch itself (e.g. unsupported file extension);
// mapped to exit code 1 like any other usage error.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void print_diagnostics(const std::vector<Diagnostic>& diagnostics) {
    for (const Diagnostic& d : diagnostics) std::cerr << d.to_json() << "\n";
}

Corpus read_stored_corpus(const std::string& path) { return read_corpus_file(path); }

// Lenient load for raw exports: normalizes, hashes, reports bad lines.
Corpus ingest_file(const std::string& path, Side side) {
    const std::string provenance = std::filesystem::path(path).stem().string();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open input: " + path);
    IngestResult result = ingest_records(in, side, provenance);
    print_diagnostics(result.diagnostics);
    if (result.corpus.records.empty()) {
        throw DataError(path + ": no usable records after ingestion");
    }
    return result.corpus;
}

std::set<std::string> stopword_set() {
    const auto& words = english_stopwords();
    return {words.begin(), words.end()};
}

std::string primary_keyword(const AppConfig& config) {
    const auto en = config.keywords.find("en");
    if (en != config.keywords.end()) return en->second;
    if (!config.keywords.empty()) return config.keywords.begin()->second;
    return "security";
}

std::unique_ptr<TranslationCache> open_cache(const std::string& flag_value) {
    std::string dir = flag_value;
    if (dir.empty()) {
        const char* env = std::getenv("SKILLGAP_CACHE_DIR");
        if (env != nullptr) dir = env;
    }
    if (dir.empty()) return nullptr;
    return std::make_unique<TranslationCache>(dir);
}

// Topic ids that stay stable for one model and readable once annotated:
// "topic-<k>" until a label exists, then "<k>-<label-slug>".
std::string topic_id(const TopicModel& model, int k) {
    const std::string label = model.label_for(k);
    if (label == "topic-" + std::to_string(k)) return label;
    const std::string slug = slugify(label);
    if (slug.empty()) return "topic-" + std::to_string(k);
    return std::to_string(k) + "-" + slug;
}

DfTable topic_df_table(const TopicModel& model, const Corpus& corpus, const AppConfig& config,
                       const std::string& mode) {
    const TopicDfMode df_mode =
        mode == "threshold" ? TopicDfMode::threshold : TopicDfMode::dominant;
    const std::map<int, double> df = topic_document_frequency(
        model, corpus, df_mode, config.theta_threshold, config.infer_iterations, config.seed);
    DfTable table;
    table.taxonomy_name = "topic-model";
    table.corpus_side = corpus.side;
    table.threshold = 0;  // no token-set threshold in the topic route
    table.corpus_size = corpus.records.size();
    for (const auto& [k, value] : df) {
        table.entries[topic_id(model, k)] = DfEntry{1, value};
    }
    return table;
}

std::map<std::string, std::string> taxonomy_labels(const Taxonomy& taxonomy) {
    std::map<std::string, std::string> labels;
    for (const SkillCategory* category : all_categories(taxonomy)) {
        labels[category->id] = category->name;
    }
    return labels;
}

// Holds <dir>/.skillgap.lock exclusively for the life of the object so two
// analyze runs cannot interleave writes in one output directory.
class DirectoryLock {
  public:
    explicit DirectoryLock(const std::filesystem::path& dir) : path_(dir / ".skillgap.lock") {
        const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
        if (fd < 0) {
            throw DataError("output directory is locked (stale run?); remove " + path_.string());
        }
        ::close(fd);
    }
    ~DirectoryLock() {
        std::error_code ec;
        std::filesystem::remove(path_, ec);
    }
    DirectoryLock(const DirectoryLock&) = delete;
    DirectoryLock& operator=(const DirectoryLock&) = delete;

  private:
    std::filesystem::path path_;
};

void write_sweep_csv(const KSweepResult& sweep, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open for writing: " + path);
    out << "# best_K: " << sweep.best_K << "\n";
    out << "K,npmi\n";
    for (const SweepPoint& point : sweep.curve) {
        out << point.K << ',' << format_fixed(point.npmi) << "\n";
    }
}

std::string csv_quote_id(const std::string& id) {
    if (id.find_first_of(",\"\n\r") == std::string::npos) return id;
    std::string quoted = "\"";
    for (char c : id) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

void write_theta_csv(const TopicModel& model, const Corpus& corpus, const AppConfig& config,
                     const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open for writing: " + path);
    out << "doc_id";
    for (int k = 0; k < model.K; ++k) out << ',' << topic_id(model, k);
    out << "\n";
    std::vector<Diagnostic> diagnostics;
    for (std::size_t d = 0; d < corpus.records.size(); ++d) {
        const std::vector<double> theta =
            infer_theta(model, corpus.records[d], config.infer_iterations,
                        derive_seed(config.seed, static_cast<std::uint64_t>(d)), &diagnostics);
        out << csv_quote_id(corpus.records[d].doc_id);
        for (int k = 0; k < model.K; ++k) out << ',' << format_fixed(theta[k]);
        out << "\n";
    }
    print_diagnostics(diagnostics);
}

void summarize_to_stdout(const char* name, const Corpus& corpus) {
    const CorpusSummary summary = summarize(corpus);
    std::cout << name << ": " << summary.total << " records";
    for (const auto& [key, count] : summary.counts) {
        std::cout << "  " << key.first << "/" << key.second << "=" << count;
    }
    std::cout << "\n";
}

int run_analyze(const AppConfig& config, const std::string& demand_path,
                const std::string& supply_path, const std::string& taxonomy_path,
                const std::string& out_dir, const std::string& cache_dir) {
    std::filesystem::create_directories(out_dir);
    DirectoryLock lock{std::filesystem::path(out_dir)};
    const std::filesystem::path out(out_dir);

    Taxonomy taxonomy = parse_taxonomy_file(taxonomy_path);
    print_diagnostics(validate(taxonomy));

    Corpus demand = ingest_file(demand_path, Side::demand);
    Corpus supply = ingest_file(supply_path, Side::supply);

    const DedupResult demand_dedup = dedup(demand);
    const DedupResult supply_dedup = dedup(supply);
    std::cout << "dedup: demand -" << (demand_dedup.removed_by_id + demand_dedup.removed_by_hash)
              << ", supply -" << (supply_dedup.removed_by_id + supply_dedup.removed_by_hash)
              << "\n";

    // Job ads arrive from keyword queries plus noise, so the relevance rule
    // applies to the demand side; course descriptions are assumed curated.
    Corpus filtered_demand =
        filter_relevant(demand_dedup.corpus, primary_keyword(config), config.min_body_count,
                        config.keywords);
    if (filtered_demand.records.empty()) {
        throw DataError("no demand records survive the relevance filter");
    }

    auto provider = make_provider(config.translate_provider);
    const auto cache = open_cache(cache_dir);
    TranslateResult demand_translated =
        translate_if_needed(filtered_demand, *provider, config.translate_target, cache.get());
    TranslateResult supply_translated =
        translate_if_needed(supply_dedup.corpus, *provider, config.translate_target, cache.get());
    print_diagnostics(demand_translated.diagnostics);
    print_diagnostics(supply_translated.diagnostics);
    std::cout << "translate: demand " << demand_translated.translated << ", supply "
              << supply_translated.translated << " records to '" << config.translate_target
              << "'\n";

    summarize_to_stdout("demand", demand_translated.corpus);
    summarize_to_stdout("supply", supply_translated.corpus);

    const DfTable demand_df =
        document_frequency(demand_translated.corpus, taxonomy, config.threshold);
    const DfTable supply_df =
        document_frequency(supply_translated.corpus, taxonomy, config.threshold);
    write_df_csv_file(demand_df, (out / "demand-df.csv").string());
    write_df_csv_file(supply_df, (out / "supply-df.csv").string());

    GapReport gaps = compute_gaps(demand_df, supply_df);
    print_diagnostics(gaps.diagnostics);
    label_entries(gaps, taxonomy_labels(taxonomy));
    write_gap_csv_file(gaps, (out / "gaps.csv").string());

    const std::vector<PriorityPoint> points = prioritize(gaps);
    write_priority_svg_file(points, (out / "priority.svg").string());
    write_priority_json_file(points, (out / "priority.json").string());
    write_priority_csv_file(points, (out / "priority.csv").string());
    write_bars_svg_file(gaps, (out / "bars.svg").string());
    write_bars_json_file(gaps, (out / "bars.json").string());

    std::cout << "gaps: " << gaps.entries.size() << " skills -> " << (out / "gaps.csv").string()
              << "\n";
    const std::size_t top = std::min<std::size_t>(3, gaps.entries.size());
    for (std::size_t i = 0; i < top; ++i) {
        const GapEntry& e = gaps.entries[i];
        std::cout << "  " << e.skill_id << " gap " << format_fixed(e.gap) << " (demand "
                  << format_fixed(e.df_demand) << ", supply " << format_fixed(e.df_supply)
                  << ")\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"skill-gap analysis between a demand corpus (job ads) and a supply corpus "
                 "(course descriptions)"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    app.add_option("--config", config_path, "configuration file (key = value format)");
    std::uint64_t seed_flag = 0;
    CLI::Option* seed_opt = app.add_option("--seed", seed_flag, "override the RNG seed");
    int threshold_flag = 0;
    CLI::Option* threshold_opt =
        app.add_option("--threshold", threshold_flag, "override the token-set score threshold")
            ->check(CLI::Range(0, 100));

    // fetch ----------------------------------------------------------------
    auto* cmd_fetch = app.add_subcommand("fetch", "discover and download pages from a portal");
    std::string fetch_portal, fetch_fixture_dir, fetch_out;
    std::vector<std::string> fetch_keywords;
    cmd_fetch->add_option("--portal", fetch_portal, "portal name from the config")->required();
    cmd_fetch->add_option("--fixture-dir", fetch_fixture_dir,
                          "read result*.html and job pages from this directory instead of HTTP");
    cmd_fetch->add_option("--keywords", fetch_keywords, "query keywords (live mode)")
        ->delimiter(',');
    cmd_fetch->add_option("--out", fetch_out, "output corpus (JSON lines)")->required();

    // ingest ---------------------------------------------------------------
    auto* cmd_ingest = app.add_subcommand("ingest", "normalize raw JSON lines into a corpus file");
    std::string ingest_in, ingest_out, ingest_side = "demand", ingest_provenance;
    cmd_ingest->add_option("--in", ingest_in, "raw JSON lines ('-' for stdin)")->required();
    cmd_ingest->add_option("--side", ingest_side, "demand or supply")
        ->check(CLI::IsMember({"demand", "supply"}));
    cmd_ingest->add_option("--provenance", ingest_provenance, "source tag for the corpus");
    cmd_ingest->add_option("--out", ingest_out, "output corpus file")->required();

    // dedup ----------------------------------------------------------------
    auto* cmd_dedup = app.add_subcommand("dedup", "drop id and content duplicates");
    std::string dedup_in, dedup_out;
    cmd_dedup->add_option("--in", dedup_in, "corpus file")->required();
    cmd_dedup->add_option("--out", dedup_out, "output corpus file")->required();

    // filter ---------------------------------------------------------------
    auto* cmd_filter = app.add_subcommand("filter", "keep records relevant to the keyword");
    std::string filter_in, filter_out, filter_keyword;
    int filter_min_count = 0;
    cmd_filter->add_option("--in", filter_in, "corpus file")->required();
    cmd_filter->add_option("--out", filter_out, "output corpus file")->required();
    cmd_filter->add_option("--keyword", filter_keyword, "override the relevance keyword");
    CLI::Option* filter_min_opt = cmd_filter->add_option(
        "--min-count", filter_min_count, "minimum body occurrences when the title misses");

    // match ----------------------------------------------------------------
    auto* cmd_match = app.add_subcommand(
        "match", "taxonomy document frequencies via fuzzy token-set matching");
    std::string match_corpus, match_taxonomy, match_out;
    cmd_match->add_option("--corpus", match_corpus, "corpus file")->required();
    cmd_match->add_option("--taxonomy", match_taxonomy, "taxonomy file")->required();
    cmd_match->add_option("--out", match_out, "output df CSV")->required();

    // translate ------------------------------------------------------------
    auto* cmd_translate = app.add_subcommand("translate", "translate records to the target language");
    std::string translate_in, translate_out, translate_target, translate_provider, translate_cache;
    cmd_translate->add_option("--in", translate_in, "corpus file")->required();
    cmd_translate->add_option("--out", translate_out, "output corpus file")->required();
    cmd_translate->add_option("--target", translate_target, "target language (default from config)");
    cmd_translate->add_option("--provider", translate_provider,
                              "identity | dict:<tsv> | http:<url> (default from config)");
    cmd_translate->add_option("--cache", translate_cache,
                              "translation cache directory (or SKILLGAP_CACHE_DIR)");

    // topics ---------------------------------------------------------------
    auto* cmd_topics = app.add_subcommand("topics", "LDA topic modeling");
    cmd_topics->require_subcommand(1);

    auto* cmd_train = cmd_topics->add_subcommand("train", "train a topic model");
    std::string train_corpus, train_out, train_labels;
    int train_k = 0, train_iterations = 0;
    cmd_train->add_option("--corpus", train_corpus, "corpus file")->required();
    cmd_train->add_option("--k", train_k, "number of topics")->required()->check(CLI::Range(2, 10000));
    CLI::Option* train_iter_opt =
        cmd_train->add_option("--iterations", train_iterations, "Gibbs sweeps");
    cmd_train->add_option("--labels", train_labels, "label file: <index><TAB><label>");
    cmd_train->add_option("--out", train_out, "output model file")->required();

    auto* cmd_sweep = cmd_topics->add_subcommand("sweep", "choose K by NPMI coherence");
    std::string sweep_corpus, sweep_out;
    int sweep_k_min = 0, sweep_k_max = 0, sweep_k_step = 0;
    cmd_sweep->add_option("--corpus", sweep_corpus, "corpus file")->required();
    CLI::Option* sweep_min_opt = cmd_sweep->add_option("--k-min", sweep_k_min, "sweep lower bound");
    CLI::Option* sweep_max_opt = cmd_sweep->add_option("--k-max", sweep_k_max, "sweep upper bound");
    CLI::Option* sweep_step_opt = cmd_sweep->add_option("--k-step", sweep_k_step, "sweep step");
    cmd_sweep->add_option("--out", sweep_out, "coherence curve CSV");

    auto* cmd_words = cmd_topics->add_subcommand("words", "print top words per topic");
    std::string words_model;
    int words_top = 0;
    cmd_words->add_option("--model", words_model, "model file")->required();
    CLI::Option* words_top_opt = cmd_words->add_option("--top", words_top, "words per topic");

    auto* cmd_infer = cmd_topics->add_subcommand("infer", "topic mixtures for unseen documents");
    std::string infer_model, infer_corpus, infer_out;
    cmd_infer->add_option("--model", infer_model, "model file")->required();
    cmd_infer->add_option("--corpus", infer_corpus, "corpus file")->required();
    cmd_infer->add_option("--out", infer_out, "output theta CSV")->required();

    auto* cmd_tdf = cmd_topics->add_subcommand("df", "per-topic document frequencies");
    std::string tdf_model, tdf_corpus, tdf_out, tdf_mode;
    cmd_tdf->add_option("--model", tdf_model, "model file")->required();
    cmd_tdf->add_option("--corpus", tdf_corpus, "corpus file")->required();
    cmd_tdf->add_option("--mode", tdf_mode, "dominant or threshold")
        ->check(CLI::IsMember({"dominant", "threshold"}));
    cmd_tdf->add_option("--out", tdf_out, "output df CSV")->required();

    auto* cmd_coherence = cmd_topics->add_subcommand("coherence", "NPMI coherence of a model");
    std::string coh_model, coh_corpus, coh_out;
    cmd_coherence->add_option("--model", coh_model, "model file")->required();
    cmd_coherence->add_option("--corpus", coh_corpus, "reference corpus file")->required();
    cmd_coherence->add_option("--out", coh_out, "output coherence CSV");

    // gaps -----------------------------------------------------------------
    auto* cmd_gaps = app.add_subcommand("gaps", "combine demand and supply df tables");
    std::string gaps_demand, gaps_supply, gaps_out, gaps_labels;
    // Inputs are read as they are consumed, so a missing file surfaces as a
    // data error (exit 2) even when later flags were never given.
    cmd_gaps->add_option("--demand", gaps_demand, "demand df CSV");
    cmd_gaps->add_option("--supply", gaps_supply, "supply df CSV");
    cmd_gaps->add_option("--labels", gaps_labels, "taxonomy file providing display labels");
    cmd_gaps->add_option("--out", gaps_out, "output gap CSV");

    // report ---------------------------------------------------------------
    auto* cmd_report = app.add_subcommand("report", "charts from a gap CSV");
    std::string report_gaps, report_out, report_kind = "scatter";
    cmd_report->add_option("--gaps", report_gaps, "gap CSV")->required();
    cmd_report->add_option("--kind", report_kind, "scatter or bars")
        ->check(CLI::IsMember({"scatter", "bars"}));
    cmd_report->add_option("--out", report_out, "output file (.svg or .json)")->required();

    // analyze --------------------------------------------------------------
    auto* cmd_analyze = app.add_subcommand(
        "analyze", "full pipeline: ingest, dedup, filter, translate, match, gaps, charts");
    std::string an_demand, an_supply, an_taxonomy, an_out_dir, an_cache;
    cmd_analyze->add_option("--demand", an_demand, "raw demand JSON lines")->required();
    cmd_analyze->add_option("--supply", an_supply, "raw supply JSON lines")->required();
    cmd_analyze->add_option("--taxonomy", an_taxonomy, "taxonomy file")->required();
    cmd_analyze->add_option("--out-dir", an_out_dir, "output directory")->required();
    cmd_analyze->add_option("--cache", an_cache, "translation cache directory");

    // config ---------------------------------------------------------------
    auto* cmd_config = app.add_subcommand("config", "print the effective configuration");
    std::string config_out;
    cmd_config->add_option("--out", config_out, "write to a file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        AppConfig config =
            config_path.empty() ? AppConfig{} : parse_config_file(config_path);
        if (seed_opt->count() > 0) config.seed = seed_flag;
        if (threshold_opt->count() > 0) config.threshold = threshold_flag;

        if (cmd_fetch->parsed()) {
            const PortalConfig& portal = config.portal(fetch_portal);
            DiscoverResult discovered;
            std::unique_ptr<PageSource> source;
            std::unique_ptr<RateLimiter> limiter;
            if (!fetch_fixture_dir.empty()) {
                discovered = discover_fixture_dir(portal, fetch_fixture_dir);
                source = std::make_unique<FileSource>(fetch_fixture_dir);
                limiter = std::make_unique<RateLimiter>(0.0);  // no politeness gap for local files
            } else {
                std::vector<std::string> keywords = fetch_keywords;
                if (keywords.empty()) {
                    for (const auto& [language, keyword] : config.keywords) {
                        keywords.push_back(keyword);
                    }
                }
                source = std::make_unique<HttpSource>();
                limiter = std::make_unique<RateLimiter>(portal.politeness_delay);
                discovered = discover(portal, keywords, *source, *limiter);
            }
            print_diagnostics(discovered.diagnostics);
            FetchResult fetched =
                fetch_records(portal, discovered.urls, *source, *limiter, now_rfc3339());
            print_diagnostics(fetched.diagnostics);
            if (fetched.corpus.records.empty()) {
                throw DataError("no records could be extracted from '" + portal.name + "'");
            }
            write_corpus_file(fetched.corpus, fetch_out);
            std::cout << "discovered " << discovered.urls.size() << " pages, extracted "
                      << fetched.corpus.records.size() << " records -> " << fetch_out << "\n";
        } else if (cmd_ingest->parsed()) {
            IngestResult result;
            if (ingest_in == "-") {
                result = ingest_records(std::cin, side_from_string(ingest_side),
                                        ingest_provenance.empty() ? "stdin" : ingest_provenance);
            } else {
                std::ifstream in(ingest_in, std::ios::binary);
                if (!in) throw DataError("cannot open input: " + ingest_in);
                result = ingest_records(
                    in, side_from_string(ingest_side),
                    ingest_provenance.empty()
                        ? std::filesystem::path(ingest_in).stem().string()
                        : ingest_provenance);
            }
            print_diagnostics(result.diagnostics);
            if (result.corpus.records.empty()) {
                throw DataError("no usable records after ingestion");
            }
            write_corpus_file(result.corpus, ingest_out);
            std::cout << "ingested " << result.corpus.records.size() << " records ("
                      << result.diagnostics.size() << " rejected lines) -> " << ingest_out << "\n";
        } else if (cmd_dedup->parsed()) {
            const Corpus corpus = read_stored_corpus(dedup_in);
            const DedupResult result = dedup(corpus);
            write_corpus_file(result.corpus, dedup_out);
            std::cout << "kept " << result.corpus.records.size() << " of " << corpus.records.size()
                      << " records (" << result.removed_by_id << " id duplicates, "
                      << result.removed_by_hash << " content duplicates) -> " << dedup_out << "\n";
        } else if (cmd_filter->parsed()) {
            const Corpus corpus = read_stored_corpus(filter_in);
            const std::string keyword =
                filter_keyword.empty() ? primary_keyword(config) : filter_keyword;
            const int min_count =
                filter_min_opt->count() > 0 ? filter_min_count : config.min_body_count;
            const Corpus kept = filter_relevant(corpus, keyword, min_count, config.keywords);
            write_corpus_file(kept, filter_out);
            std::cout << "kept " << kept.records.size() << " of " << corpus.records.size()
                      << " records -> " << filter_out << "\n";
        } else if (cmd_match->parsed()) {
            const Corpus corpus = read_stored_corpus(match_corpus);
            const Taxonomy taxonomy = parse_taxonomy_file(match_taxonomy);
            print_diagnostics(validate(taxonomy));
            const DfTable table = document_frequency(corpus, taxonomy, config.threshold);
            write_df_csv_file(table, match_out);
            std::cout << "matched " << table.entries.size() << " categories over "
                      << table.corpus_size << " documents -> " << match_out << "\n";
        } else if (cmd_translate->parsed()) {
            const Corpus corpus = read_stored_corpus(translate_in);
            const std::string target =
                translate_target.empty() ? config.translate_target : translate_target;
            const std::string provider_spec =
                translate_provider.empty() ? config.translate_provider : translate_provider;
            auto provider = make_provider(provider_spec);
            const auto cache = open_cache(translate_cache);
            TranslateResult result =
                translate_if_needed(corpus, *provider, target, cache.get());
            print_diagnostics(result.diagnostics);
            write_corpus_file(result.corpus, translate_out);
            std::cout << "translated " << result.translated << " of "
                      << result.corpus.records.size() << " records (" << result.cache_hits
                      << " cache hits, " << result.provider_calls << " provider calls) -> "
                      << translate_out << "\n";
        } else if (cmd_train->parsed()) {
            const Corpus corpus = read_stored_corpus(train_corpus);
            const Vocabulary vocab = build_vocabulary(corpus, config.vocab_min_df,
                                                      config.vocab_max_df, stopword_set());
            TrainParams params;
            params.K = train_k;
            params.alpha = config.alpha;
            params.beta = config.beta;
            params.iterations = train_iter_opt->count() > 0 ? train_iterations : config.iterations;
            params.seed = config.seed;
            TrainResult result = train_lda(corpus, vocab, params);
            print_diagnostics(result.diagnostics);
            if (!train_labels.empty()) {
                std::ifstream labels(train_labels, std::ios::binary);
                if (!labels) throw DataError("cannot open label file: " + train_labels);
                print_diagnostics(annotate(result.model, labels));
            }
            save_model(result.model, train_out);
            std::cout << "trained K=" << train_k << " on " << corpus.records.size()
                      << " documents (vocabulary " << vocab.words.size() << ", "
                      << params.iterations << " sweeps, seed " << params.seed << ") -> "
                      << train_out << "\n";
        } else if (cmd_sweep->parsed()) {
            const Corpus corpus = read_stored_corpus(sweep_corpus);
            TrainParams params;
            params.alpha = config.alpha;
            params.beta = config.beta;
            params.iterations = config.iterations;
            params.seed = config.seed;
            const int k_min = sweep_min_opt->count() > 0 ? sweep_k_min : config.k_min;
            const int k_max = sweep_max_opt->count() > 0 ? sweep_k_max : config.k_max;
            const int k_step = sweep_step_opt->count() > 0 ? sweep_k_step : config.k_step;
            const KSweepResult sweep =
                select_k(corpus, k_min, k_max, k_step, params, config.npmi_top_n,
                         config.vocab_min_df, config.vocab_max_df, stopword_set());
            print_diagnostics(sweep.diagnostics);
            if (!sweep_out.empty()) write_sweep_csv(sweep, sweep_out);
            std::cout << "best_K = " << sweep.best_K << "\n";
            for (const SweepPoint& point : sweep.curve) {
                std::cout << "  K=" << point.K << " npmi=" << format_fixed(point.npmi) << "\n";
            }
        } else if (cmd_words->parsed()) {
            const TopicModel model = load_model(words_model);
            const int top = words_top_opt->count() > 0 ? words_top : config.top_words;
            for (int k = 0; k < model.K; ++k) {
                std::cout << k << "\t" << model.label_for(k) << "\t";
                const std::vector<std::string> words = top_words(model, k, top);
                for (std::size_t i = 0; i < words.size(); ++i) {
                    if (i > 0) std::cout << ' ';
                    std::cout << words[i];
                }
                std::cout << "\n";
            }
        } else if (cmd_infer->parsed()) {
            const TopicModel model = load_model(infer_model);
            const Corpus corpus = read_stored_corpus(infer_corpus);
            write_theta_csv(model, corpus, config, infer_out);
            std::cout << "inferred mixtures for " << corpus.records.size() << " documents -> "
                      << infer_out << "\n";
        } else if (cmd_tdf->parsed()) {
            const TopicModel model = load_model(tdf_model);
            const Corpus corpus = read_stored_corpus(tdf_corpus);
            const std::string mode = tdf_mode.empty() ? config.topic_df_mode : tdf_mode;
            const DfTable table = topic_df_table(model, corpus, config, mode);
            write_df_csv_file(table, tdf_out);
            std::cout << "topic document frequencies (" << mode << ") for " << model.K
                      << " topics -> " << tdf_out << "\n";
        } else if (cmd_coherence->parsed()) {
            const TopicModel model = load_model(coh_model);
            const Corpus corpus = read_stored_corpus(coh_corpus);
            const CoherenceReport report = npmi_coherence(model, corpus, config.npmi_top_n);
            if (!coh_out.empty()) write_coherence_csv_file(report, coh_out);
            std::cout << "mean NPMI over " << model.K << " topics: " << format_fixed(report.mean)
                      << "\n";
        } else if (cmd_gaps->parsed()) {
            if (gaps_demand.empty()) throw UsageError("gaps: --demand <df csv> is required");
            const DfTable demand = read_df_csv_file(gaps_demand);
            if (gaps_supply.empty()) throw UsageError("gaps: --supply <df csv> is required");
            const DfTable supply = read_df_csv_file(gaps_supply);
            if (gaps_out.empty()) throw UsageError("gaps: --out <gap csv> is required");
            GapReport report = compute_gaps(demand, supply);
            print_diagnostics(report.diagnostics);
            if (!gaps_labels.empty()) {
                label_entries(report, taxonomy_labels(parse_taxonomy_file(gaps_labels)));
            }
            write_gap_csv_file(report, gaps_out);
            std::cout << report.entries.size() << " skills -> " << gaps_out << "\n";
        } else if (cmd_report->parsed()) {
            const GapReport report = read_gap_csv_file(report_gaps);
            const std::string extension = std::filesystem::path(report_out).extension().string();
            if (report_kind == "scatter") {
                const std::vector<PriorityPoint> points = prioritize(report);
                if (extension == ".svg") {
                    write_priority_svg_file(points, report_out);
                } else if (extension == ".json") {
                    write_priority_json_file(points, report_out);
                } else if (extension == ".csv") {
                    write_priority_csv_file(points, report_out);
                } else {
                    throw UsageError("--out must end in .svg, .json or .csv, got '" + report_out +
                                     "'");
                }
            } else {
                if (extension == ".svg") {
                    write_bars_svg_file(report, report_out);
                } else if (extension == ".json") {
                    write_bars_json_file(report, report_out);
                } else {
                    throw UsageError("--out must end in .svg or .json, got '" + report_out + "'");
                }
            }
            std::cout << report_kind << " chart for " << report.entries.size() << " skills -> "
                      << report_out << "\n";
        } else if (cmd_analyze->parsed()) {
            return run_analyze(config, an_demand, an_supply, an_taxonomy, an_out_dir, an_cache);
        } else if (cmd_config->parsed()) {
            if (config_out.empty()) {
                dump_config(config, std::cout);
            } else {
                std::ofstream out(config_out, std::ios::binary);
                if (!out) throw DataError("cannot open for writing: " + config_out);
                dump_config(config, out);
            }
        }
        return 0;
    } catch (const UsageError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << Diagnostic{"cli", "data error", e.what(), -1}.to_json() << "\n";
        return 2;
    } catch (const ProviderError& e) {
        std::cerr << Diagnostic{"cli", "translation provider error", e.what(), -1}.to_json()
                  << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << Diagnostic{"cli", "internal error", e.what(), -1}.to_json() << "\n";
        return 2;
    }
}
