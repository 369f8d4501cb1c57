#ifndef SKILLGAP_TOPICS_HPP
#define SKILLGAP_TOPICS_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "skillgap/record.hpp"

namespace skillgap {

struct Vocabulary {
    std::vector<std::string> words;  // lexicographic order
    std::unordered_map<std::string, int> index;
    std::vector<int> doc_freq;  // documents containing each word
    std::size_t corpus_size = 0;

    int lookup(const std::string& word) const {
        const auto it = index.find(word);
        return it == index.end() ? -1 : it->second;
    }
};

// Document text for topic modeling: title and body, tokenized together.
std::vector<std::string> document_tokens(const DocumentRecord& record);

// Keeps tokens with document frequency in [min_df, max_df_fraction * N]
// that are not stopwords. Throws DataError when nothing survives.
Vocabulary build_vocabulary(const Corpus& corpus, int min_df,
                            double max_df_fraction,
                            const std::set<std::string>& stopwords);

struct TrainParams {
    int K = 20;
    double alpha = 0.0;  // <= 0 selects the 50/K default
    double beta = 0.01;
    int iterations = 500;
    std::uint64_t seed = 42;
    bool check_invariants = false;  // verify count/normalization after every sweep
};

// Collapsed Gibbs state: counts, assignments and the vocabulary they refer
// to. theta/phi are derived views.
struct TopicModel {
    int K = 0;
    double alpha = 0.0;
    double beta = 0.0;
    std::vector<std::vector<int>> n_kw;   // K x V topic-word counts
    std::vector<long long> n_k;           // per-topic totals
    std::vector<std::vector<int>> n_dk;   // D x K document-topic counts
    std::vector<std::vector<int>> docs;   // documents as vocabulary ids
    std::vector<std::vector<int>> assignments;  // parallel topic ids
    Vocabulary vocab;
    std::uint64_t seed = 0;
    int iterations = 0;
    std::vector<std::string> labels;  // empty entries mean "topic-<k>"

    std::vector<double> theta_row(int d) const;
    std::vector<double> phi_row(int k) const;
    std::string label_for(int k) const;
};

struct TrainResult {
    TopicModel model;
    std::vector<Diagnostic> diagnostics;
};

// Collapsed Gibbs sampling: p(z=k) proportional to
// (n_dk + alpha) * (n_kw + beta) / (n_k + V*beta), the resampled token
// excluded from all counts. Deterministic for fixed inputs and seed.
TrainResult train_lda(const Corpus& corpus, const Vocabulary& vocab,
                      const TrainParams& params);

// The n most likely words of topic k, ties broken lexicographically.
std::vector<std::string> top_words(const TopicModel& model, int k, int n = 30);

struct CoherenceReport {
    std::vector<double> per_topic;          // NPMI in [-1, 1]
    std::vector<int> skipped_pairs;         // pairs dropped per topic (word absent)
    std::vector<std::string> labels;        // display labels, one per topic
    double mean = 0.0;
    int topN = 10;
    std::string reference_corpus_id;
};

// Word co-occurrence document sets over a reference corpus.
struct CoocStats {
    std::size_t num_docs = 0;
    std::unordered_map<std::string, std::vector<int>> docs_with;  // sorted doc ids
};

CoocStats cooc_stats(const Corpus& reference);

// Pairwise NPMI from whole-document co-occurrence; -1 when the pair never
// co-occurs, +1 when it occurs in every document.
double npmi_pair(const CoocStats& stats, const std::string& wi, const std::string& wj);

// Mean pairwise NPMI of each topic's topN words, estimated on the
// reference corpus; pairs with an unseen word are skipped and counted.
CoherenceReport npmi_coherence(const TopicModel& model, const Corpus& reference,
                               int topN = 10);

struct SweepPoint {
    int K = 0;
    double npmi = 0.0;
};

struct KSweepResult {
    int best_K = 0;
    std::vector<SweepPoint> curve;
    std::vector<Diagnostic> diagnostics;
};

// Trains one model per K (chains run concurrently), scores each against the
// corpus and returns the argmax-NPMI K, smaller K winning ties. Chain seeds
// are derived from params.seed per K, so results do not depend on
// scheduling.
KSweepResult select_k(const Corpus& corpus, int k_min, int k_max, int step,
                      const TrainParams& params, int npmi_top_n = 10,
                      int vocab_min_df = 2, double vocab_max_df_fraction = 0.95,
                      const std::set<std::string>& stopwords = {});

// Fold-in Gibbs: resamples the document's assignments with topic-word
// counts held fixed. Out-of-vocabulary tokens are ignored; a document with
// no in-vocabulary tokens yields the uniform distribution.
std::vector<double> infer_theta(const TopicModel& model, const DocumentRecord& doc,
                                int iterations, std::uint64_t seed,
                                std::vector<Diagnostic>* diagnostics = nullptr);

enum class TopicDfMode { dominant, threshold };

// `dominant` assigns each document to its argmax topic (lowest index wins
// ties); `threshold` counts the document toward every topic with
// theta >= theta_threshold.
std::map<int, double> topic_document_frequency(const TopicModel& model,
                                               const Corpus& corpus,
                                               TopicDfMode mode = TopicDfMode::dominant,
                                               double theta_threshold = 0.2,
                                               int infer_iterations = 50,
                                               std::uint64_t seed = 42);

// Label file: `index<TAB>label` lines. Unlabeled topics keep "topic-<k>";
// a duplicate index wins last with a warning; an out-of-range index is an
// error.
std::vector<Diagnostic> annotate(TopicModel& model, std::istream& label_file);

// Versioned binary container: JSON header (K, alpha, beta, seed, vocabulary
// checksum) followed by little-endian row-major count matrices.
void save_model(const TopicModel& model, const std::string& path);
TopicModel load_model(const std::string& path);

std::string vocabulary_checksum(const Vocabulary& vocab);

}  // namespace skillgap

#endif
