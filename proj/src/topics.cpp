#include "skillgap/topics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "skillgap/rng.hpp"
#include "skillgap/text.hpp"

namespace skillgap {

namespace {

using nlohmann::json;

double effective_alpha(const TrainParams& params) {
    return params.alpha > 0.0 ? params.alpha : 50.0 / static_cast<double>(params.K);
}

// First bucket whose cumulative weight exceeds u. Roundoff can push u up to
// the total, so the last bucket catches the remainder.
int sample_bucket(const std::vector<double>& cumulative, double u) {
    for (std::size_t k = 0; k < cumulative.size(); ++k) {
        if (u < cumulative[k]) return static_cast<int>(k);
    }
    return static_cast<int>(cumulative.size()) - 1;
}

// Count identities that hold after every Gibbs sweep. A violation is a bug
// in the sampler, not bad input.
void verify_counts(const TopicModel& m, const char* where) {
    const auto fail = [&](const std::string& what) {
        throw std::logic_error(std::string("lda invariant broken (") + where + "): " + what);
    };
    const int K = m.K;
    const int V = static_cast<int>(m.vocab.words.size());
    std::vector<long long> per_topic(K, 0);
    for (int k = 0; k < K; ++k) {
        long long row = 0;
        for (int w = 0; w < V; ++w) {
            if (m.n_kw[k][w] < 0) fail("negative topic-word count");
            row += m.n_kw[k][w];
        }
        if (row != m.n_k[k]) fail("n_k does not match its n_kw row");
    }
    long long total_dk = 0;
    for (std::size_t d = 0; d < m.docs.size(); ++d) {
        if (m.assignments[d].size() != m.docs[d].size()) fail("assignment length mismatch");
        long long row = 0;
        for (int k = 0; k < K; ++k) {
            if (m.n_dk[d][k] < 0) fail("negative document-topic count");
            row += m.n_dk[d][k];
            per_topic[k] += m.n_dk[d][k];
        }
        if (row != static_cast<long long>(m.docs[d].size())) fail("n_dk row does not match document length");
        total_dk += row;
        for (int z : m.assignments[d]) {
            if (z < 0 || z >= K) fail("assignment outside [0, K)");
        }
    }
    long long total_k = std::accumulate(m.n_k.begin(), m.n_k.end(), 0LL);
    if (total_dk != total_k) fail("document and topic totals disagree");
    for (int k = 0; k < K; ++k) {
        if (per_topic[k] != m.n_k[k]) fail("per-topic document counts disagree with n_k");
    }
    // theta and phi are probability rows; smoothing keeps denominators > 0.
    for (std::size_t d = 0; d < m.docs.size(); ++d) {
        const std::vector<double> theta = m.theta_row(static_cast<int>(d));
        const double sum = std::accumulate(theta.begin(), theta.end(), 0.0);
        if (std::fabs(sum - 1.0) > 1e-9) fail("theta row does not sum to 1");
    }
    for (int k = 0; k < K; ++k) {
        const std::vector<double> phi = m.phi_row(k);
        const double sum = std::accumulate(phi.begin(), phi.end(), 0.0);
        if (std::fabs(sum - 1.0) > 1e-9) fail("phi row does not sum to 1");
    }
}

std::vector<int> sorted_doc_ids(const std::unordered_map<std::string, std::vector<int>>& docs_with,
                                const std::string& word) {
    const auto it = docs_with.find(word);
    return it == docs_with.end() ? std::vector<int>{} : it->second;
}

std::size_t intersection_size(const std::vector<int>& a, const std::vector<int>& b) {
    std::size_t n = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            ++n;
            ++ia;
            ++ib;
        }
    }
    return n;
}

CoherenceReport coherence_from_stats(const TopicModel& model, const CoocStats& stats,
                                     int topN, const std::string& reference_id) {
    if (topN < 2) throw DataError("coherence needs at least two top words per topic");
    CoherenceReport report;
    report.topN = topN;
    report.reference_corpus_id = reference_id;
    report.per_topic.assign(model.K, 0.0);
    report.skipped_pairs.assign(model.K, 0);
    report.labels.reserve(model.K);
    double sum = 0.0;
    for (int k = 0; k < model.K; ++k) {
        report.labels.push_back(model.label_for(k));
        const std::vector<std::string> words = top_words(model, k, topN);
        double acc = 0.0;
        int used = 0;
        for (std::size_t i = 0; i < words.size(); ++i) {
            for (std::size_t j = i + 1; j < words.size(); ++j) {
                if (stats.docs_with.count(words[i]) == 0 || stats.docs_with.count(words[j]) == 0) {
                    ++report.skipped_pairs[k];
                    continue;
                }
                acc += npmi_pair(stats, words[i], words[j]);
                ++used;
            }
        }
        report.per_topic[k] = used > 0 ? acc / used : 0.0;
        sum += report.per_topic[k];
    }
    report.mean = model.K > 0 ? sum / model.K : 0.0;
    return report;
}

void put_u32(std::ostream& out, std::uint32_t v) {
    char bytes[4];
    for (int i = 0; i < 4; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(bytes, 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
    char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(bytes, 8);
}

std::uint32_t get_u32(std::istream& in, const std::string& path) {
    unsigned char bytes[4];
    if (!in.read(reinterpret_cast<char*>(bytes), 4)) {
        throw DataError("truncated model file: " + path);
    }
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[i]) << (8 * i);
    return v;
}

std::uint64_t get_u64(std::istream& in, const std::string& path) {
    unsigned char bytes[8];
    if (!in.read(reinterpret_cast<char*>(bytes), 8)) {
        throw DataError("truncated model file: " + path);
    }
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    return v;
}

std::string trim_copy(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<std::string> document_tokens(const DocumentRecord& record) {
    return tokenize(record.title + " " + record.body);
}

Vocabulary build_vocabulary(const Corpus& corpus, int min_df, double max_df_fraction,
                            const std::set<std::string>& stopwords) {
    if (corpus.records.empty()) throw DataError("cannot build a vocabulary from an empty corpus");
    if (min_df < 1) throw DataError("min_df must be at least 1");
    if (max_df_fraction <= 0.0 || max_df_fraction > 1.0) {
        throw DataError("max_df_fraction must be in (0, 1]");
    }
    const std::size_t n = corpus.records.size();
    std::map<std::string, int> df;  // ordered: the word list comes out sorted
    for (const DocumentRecord& record : corpus.records) {
        std::vector<std::string> tokens = document_tokens(record);
        std::sort(tokens.begin(), tokens.end());
        tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
        for (const std::string& t : tokens) ++df[t];
    }
    const double df_limit = max_df_fraction * static_cast<double>(n);
    Vocabulary vocab;
    vocab.corpus_size = n;
    for (const auto& [word, count] : df) {
        if (count < min_df) continue;
        if (static_cast<double>(count) > df_limit) continue;
        if (stopwords.count(word) > 0) continue;
        vocab.index.emplace(word, static_cast<int>(vocab.words.size()));
        vocab.words.push_back(word);
        vocab.doc_freq.push_back(count);
    }
    if (vocab.words.empty()) {
        throw DataError("vocabulary is empty after document-frequency filtering");
    }
    return vocab;
}

std::vector<double> TopicModel::theta_row(int d) const {
    if (d < 0 || d >= static_cast<int>(n_dk.size())) {
        throw DataError("document index outside the trained corpus");
    }
    // Uses the count row, not docs[d], so it works on loaded models that
    // carry counts without token lists.
    const long long len = std::accumulate(n_dk[d].begin(), n_dk[d].end(), 0LL);
    std::vector<double> theta(K, 0.0);
    const double denom = static_cast<double>(len) + K * alpha;
    for (int k = 0; k < K; ++k) theta[k] = (n_dk[d][k] + alpha) / denom;
    return theta;
}

std::vector<double> TopicModel::phi_row(int k) const {
    if (k < 0 || k >= K) throw DataError("topic index outside [0, K)");
    const int V = static_cast<int>(vocab.words.size());
    std::vector<double> phi(V, 0.0);
    const double denom = static_cast<double>(n_k[k]) + V * beta;
    for (int w = 0; w < V; ++w) phi[w] = (n_kw[k][w] + beta) / denom;
    return phi;
}

std::string TopicModel::label_for(int k) const {
    if (k < 0 || k >= K) throw DataError("topic index outside [0, K)");
    if (k < static_cast<int>(labels.size()) && !labels[k].empty()) return labels[k];
    return "topic-" + std::to_string(k);
}

TrainResult train_lda(const Corpus& corpus, const Vocabulary& vocab, const TrainParams& params) {
    if (params.K < 2) throw DataError("topic count must be at least 2");
    if (params.iterations < 1) throw DataError("iteration count must be at least 1");
    if (params.beta <= 0.0) throw DataError("beta must be positive");
    if (corpus.records.empty()) throw DataError("cannot train on an empty corpus");
    const int K = params.K;
    const int V = static_cast<int>(vocab.words.size());
    const double alpha = effective_alpha(params);
    const double beta = params.beta;

    TrainResult result;
    TopicModel& m = result.model;
    m.K = K;
    m.alpha = alpha;
    m.beta = beta;
    m.vocab = vocab;
    m.seed = params.seed;
    m.iterations = params.iterations;
    m.n_kw.assign(K, std::vector<int>(V, 0));
    m.n_k.assign(K, 0);

    std::size_t empty_docs = 0;
    for (const DocumentRecord& record : corpus.records) {
        std::vector<int> ids;
        for (const std::string& t : document_tokens(record)) {
            const int w = vocab.lookup(t);
            if (w >= 0) ids.push_back(w);
        }
        if (ids.empty()) ++empty_docs;
        m.docs.push_back(std::move(ids));
    }
    const std::size_t D = m.docs.size();
    m.n_dk.assign(D, std::vector<int>(K, 0));
    m.assignments.resize(D);

    Rng rng(params.seed);
    long long total_tokens = 0;
    for (std::size_t d = 0; d < D; ++d) {
        m.assignments[d].resize(m.docs[d].size());
        for (std::size_t i = 0; i < m.docs[d].size(); ++i) {
            const int w = m.docs[d][i];
            const int z = static_cast<int>(rng.next_below(K));
            m.assignments[d][i] = z;
            ++m.n_dk[d][z];
            ++m.n_kw[z][w];
            ++m.n_k[z];
            ++total_tokens;
        }
    }
    if (total_tokens == 0) throw DataError("corpus has no in-vocabulary tokens");
    if (empty_docs > 0) {
        result.diagnostics.push_back({"train_lda", "documents without in-vocabulary tokens",
                                      std::to_string(empty_docs) + " of " + std::to_string(D), -1});
    }

    const double v_beta = V * beta;
    std::vector<double> cumulative(K, 0.0);
    for (int it = 0; it < params.iterations; ++it) {
        for (std::size_t d = 0; d < D; ++d) {
            std::vector<int>& dk = m.n_dk[d];
            for (std::size_t i = 0; i < m.docs[d].size(); ++i) {
                const int w = m.docs[d][i];
                const int old_z = m.assignments[d][i];
                --dk[old_z];
                --m.n_kw[old_z][w];
                --m.n_k[old_z];
                double acc = 0.0;
                for (int k = 0; k < K; ++k) {
                    acc += (dk[k] + alpha) * (m.n_kw[k][w] + beta) / (m.n_k[k] + v_beta);
                    cumulative[k] = acc;
                }
                const int z = sample_bucket(cumulative, rng.next_double() * acc);
                m.assignments[d][i] = z;
                ++dk[z];
                ++m.n_kw[z][w];
                ++m.n_k[z];
            }
        }
        if (params.check_invariants) verify_counts(m, "after sweep");
    }
    return result;
}

std::vector<std::string> top_words(const TopicModel& model, int k, int n) {
    if (k < 0 || k >= model.K) throw DataError("topic index outside [0, K)");
    if (n < 1) throw DataError("top word count must be at least 1");
    const int V = static_cast<int>(model.vocab.words.size());
    std::vector<int> order(V);
    std::iota(order.begin(), order.end(), 0);
    // Count descending, then word index ascending; the vocabulary is sorted,
    // so equal counts resolve lexicographically.
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (model.n_kw[k][a] != model.n_kw[k][b]) return model.n_kw[k][a] > model.n_kw[k][b];
        return a < b;
    });
    const int take = std::min(n, V);
    std::vector<std::string> words;
    words.reserve(take);
    for (int i = 0; i < take; ++i) words.push_back(model.vocab.words[order[i]]);
    return words;
}

CoocStats cooc_stats(const Corpus& reference) {
    if (reference.records.empty()) {
        throw DataError("coherence reference corpus is empty");
    }
    CoocStats stats;
    stats.num_docs = reference.records.size();
    for (std::size_t d = 0; d < reference.records.size(); ++d) {
        std::vector<std::string> tokens = document_tokens(reference.records[d]);
        std::sort(tokens.begin(), tokens.end());
        tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
        for (const std::string& t : tokens) {
            stats.docs_with[t].push_back(static_cast<int>(d));
        }
    }
    return stats;
}

double npmi_pair(const CoocStats& stats, const std::string& wi, const std::string& wj) {
    const std::vector<int> di = sorted_doc_ids(stats.docs_with, wi);
    const std::vector<int> dj = sorted_doc_ids(stats.docs_with, wj);
    if (di.empty() || dj.empty()) {
        throw DataError("word not present in the coherence reference corpus");
    }
    const double n = static_cast<double>(stats.num_docs);
    const std::size_t joint = intersection_size(di, dj);
    if (joint == 0) return -1.0;
    const double p_ij = static_cast<double>(joint) / n;
    if (joint == stats.num_docs) return 1.0;  // -ln(1) would divide by zero
    const double p_i = static_cast<double>(di.size()) / n;
    const double p_j = static_cast<double>(dj.size()) / n;
    return std::log(p_ij / (p_i * p_j)) / -std::log(p_ij);
}

CoherenceReport npmi_coherence(const TopicModel& model, const Corpus& reference, int topN) {
    return coherence_from_stats(model, cooc_stats(reference), topN, reference.provenance);
}

KSweepResult select_k(const Corpus& corpus, int k_min, int k_max, int step,
                      const TrainParams& params, int npmi_top_n,
                      int vocab_min_df, double vocab_max_df_fraction,
                      const std::set<std::string>& stopwords) {
    if (k_min < 2) throw DataError("topic count sweep must start at 2 or above");
    if (k_max < k_min) throw DataError("sweep upper bound is below the lower bound");
    if (step < 1) throw DataError("sweep step must be at least 1");
    std::vector<int> ks;
    for (int k = k_min; k <= k_max; k += step) ks.push_back(k);

    const Vocabulary vocab = build_vocabulary(corpus, vocab_min_df, vocab_max_df_fraction, stopwords);
    const CoocStats stats = cooc_stats(corpus);

    const int jobs = static_cast<int>(ks.size());
    std::vector<SweepPoint> curve(jobs);
    std::vector<std::vector<Diagnostic>> diags(jobs);
    std::vector<std::exception_ptr> errors(jobs);
    std::atomic<int> next{0};
    // Chains share nothing mutable; per-K seeds keep the outcome independent
    // of which worker picks up which K.
    const auto work = [&]() {
        for (int i = next.fetch_add(1); i < jobs; i = next.fetch_add(1)) {
            try {
                TrainParams p = params;
                p.K = ks[i];
                p.seed = derive_seed(params.seed, static_cast<std::uint64_t>(ks[i]));
                TrainResult trained = train_lda(corpus, vocab, p);
                const CoherenceReport report =
                    coherence_from_stats(trained.model, stats, npmi_top_n, corpus.provenance);
                curve[i] = {ks[i], report.mean};
                diags[i] = std::move(trained.diagnostics);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    unsigned hardware = std::thread::hardware_concurrency();
    if (hardware == 0) hardware = 2;
    const int workers = std::max(1, std::min<int>(static_cast<int>(hardware), jobs));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
    for (const std::exception_ptr& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    KSweepResult result;
    result.curve = curve;
    for (std::vector<Diagnostic>& d : diags) {
        result.diagnostics.insert(result.diagnostics.end(), d.begin(), d.end());
    }
    result.best_K = curve.front().K;
    double best = curve.front().npmi;
    for (const SweepPoint& point : curve) {
        if (point.npmi > best) {  // strict: ties go to the smaller K
            best = point.npmi;
            result.best_K = point.K;
        }
    }
    return result;
}

std::vector<double> infer_theta(const TopicModel& model, const DocumentRecord& doc,
                                int iterations, std::uint64_t seed,
                                std::vector<Diagnostic>* diagnostics) {
    if (iterations < 1) throw DataError("iteration count must be at least 1");
    const int K = model.K;
    const int V = static_cast<int>(model.vocab.words.size());
    std::vector<int> ids;
    std::size_t unknown = 0;
    for (const std::string& t : document_tokens(doc)) {
        const int w = model.vocab.lookup(t);
        if (w >= 0) {
            ids.push_back(w);
        } else {
            ++unknown;
        }
    }
    if (unknown > 0 && diagnostics != nullptr) {
        diagnostics->push_back({"infer_theta", "tokens outside the model vocabulary",
                                doc.doc_id + ": " + std::to_string(unknown), -1});
    }
    if (ids.empty()) {
        if (diagnostics != nullptr) {
            diagnostics->push_back({"infer_theta", "no in-vocabulary tokens; uniform distribution",
                                    doc.doc_id, -1});
        }
        return std::vector<double>(K, 1.0 / K);
    }

    // Fold-in: the model's topic-word counts stay fixed; only this
    // document's local counts move.
    Rng rng(seed);
    std::vector<int> local(K, 0);
    std::vector<int> z(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        z[i] = static_cast<int>(rng.next_below(K));
        ++local[z[i]];
    }
    const double v_beta = V * model.beta;
    std::vector<double> cumulative(K, 0.0);
    for (int it = 0; it < iterations; ++it) {
        for (std::size_t i = 0; i < ids.size(); ++i) {
            const int w = ids[i];
            --local[z[i]];
            double acc = 0.0;
            for (int k = 0; k < K; ++k) {
                acc += (local[k] + model.alpha) * (model.n_kw[k][w] + model.beta) /
                       (model.n_k[k] + v_beta);
                cumulative[k] = acc;
            }
            z[i] = sample_bucket(cumulative, rng.next_double() * acc);
            ++local[z[i]];
        }
    }
    std::vector<double> theta(K, 0.0);
    const double denom = static_cast<double>(ids.size()) + K * model.alpha;
    for (int k = 0; k < K; ++k) theta[k] = (local[k] + model.alpha) / denom;
    return theta;
}

std::map<int, double> topic_document_frequency(const TopicModel& model, const Corpus& corpus,
                                               TopicDfMode mode, double theta_threshold,
                                               int infer_iterations, std::uint64_t seed) {
    if (corpus.records.empty()) throw DataError("cannot compute topic frequencies on an empty corpus");
    if (mode == TopicDfMode::threshold && (theta_threshold <= 0.0 || theta_threshold > 1.0)) {
        throw DataError("theta threshold must be in (0, 1]");
    }
    std::vector<std::size_t> counts(model.K, 0);
    for (std::size_t d = 0; d < corpus.records.size(); ++d) {
        const std::vector<double> theta =
            infer_theta(model, corpus.records[d], infer_iterations,
                        derive_seed(seed, static_cast<std::uint64_t>(d)));
        if (mode == TopicDfMode::dominant) {
            // Lowest index wins ties, matching max_element.
            const int best = static_cast<int>(
                std::max_element(theta.begin(), theta.end()) - theta.begin());
            ++counts[best];
        } else {
            for (int k = 0; k < model.K; ++k) {
                if (theta[k] >= theta_threshold) ++counts[k];
            }
        }
    }
    std::map<int, double> df;
    for (int k = 0; k < model.K; ++k) {
        df[k] = static_cast<double>(counts[k]) / static_cast<double>(corpus.records.size());
    }
    return df;
}

std::vector<Diagnostic> annotate(TopicModel& model, std::istream& label_file) {
    std::vector<Diagnostic> diagnostics;
    model.labels.resize(model.K);
    std::string line;
    int line_no = 0;
    std::vector<bool> seen(model.K, false);
    while (std::getline(label_file, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string stripped = trim_copy(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos) {
            throw DataError("label file line " + std::to_string(line_no) +
                            ": expected <index><TAB><label>");
        }
        int index = 0;
        const std::string index_text = trim_copy(line.substr(0, tab));
        try {
            std::size_t used = 0;
            index = std::stoi(index_text, &used);
            if (used != index_text.size()) throw std::invalid_argument(index_text);
        } catch (const std::exception&) {
            throw DataError("label file line " + std::to_string(line_no) + ": index is not a number");
        }
        if (index < 0 || index >= model.K) {
            throw DataError("label file line " + std::to_string(line_no) + ": topic index " +
                            std::to_string(index) + " outside [0, " + std::to_string(model.K) + ")");
        }
        const std::string label = trim_copy(line.substr(tab + 1));
        if (label.empty()) {
            throw DataError("label file line " + std::to_string(line_no) + ": empty label");
        }
        if (seen[index]) {
            diagnostics.push_back({"annotate", "duplicate topic index; later label wins",
                                   std::to_string(index), line_no});
        }
        seen[index] = true;
        model.labels[index] = label;
    }
    return diagnostics;
}

std::string vocabulary_checksum(const Vocabulary& vocab) {
    std::string joined;
    for (const std::string& w : vocab.words) {
        joined += w;
        joined += '\n';
    }
    return to_hex64(fnv1a64(joined));
}

namespace {
constexpr char kModelMagic[4] = {'S', 'G', 'T', 'M'};
constexpr std::uint32_t kModelVersion = 1;
}  // namespace

void save_model(const TopicModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open model file for writing: " + path);
    const int V = static_cast<int>(model.vocab.words.size());
    const int D = static_cast<int>(model.n_dk.size());
    json header;
    header["K"] = model.K;
    header["V"] = V;
    header["D"] = D;
    header["alpha"] = model.alpha;
    header["beta"] = model.beta;
    header["seed"] = model.seed;
    header["iterations"] = model.iterations;
    header["vocab_checksum"] = vocabulary_checksum(model.vocab);
    std::vector<std::string> labels = model.labels;
    labels.resize(model.K);
    header["labels"] = labels;
    header["vocab"] = {{"words", model.vocab.words},
                       {"doc_freq", model.vocab.doc_freq},
                       {"corpus_size", model.vocab.corpus_size}};
    const std::string header_bytes = header.dump();

    out.write(kModelMagic, 4);
    put_u32(out, kModelVersion);
    put_u64(out, header_bytes.size());
    out.write(header_bytes.data(), static_cast<std::streamsize>(header_bytes.size()));
    // Count matrices as little-endian u32, row-major. Token lists and
    // assignments are not persisted: a saved model supports inference and
    // reporting, not resumed training.
    for (int k = 0; k < model.K; ++k) {
        for (int w = 0; w < V; ++w) put_u32(out, static_cast<std::uint32_t>(model.n_kw[k][w]));
    }
    for (int d = 0; d < D; ++d) {
        for (int k = 0; k < model.K; ++k) put_u32(out, static_cast<std::uint32_t>(model.n_dk[d][k]));
    }
    if (!out) throw DataError("failed while writing model file: " + path);
}

TopicModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open model file: " + path);
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kModelMagic, 4) != 0) {
        throw DataError("not a topic model file: " + path);
    }
    const std::uint32_t version = get_u32(in, path);
    if (version != kModelVersion) {
        throw DataError("unsupported model version " + std::to_string(version) + ": " + path);
    }
    const std::uint64_t header_len = get_u64(in, path);
    if (header_len > (1ull << 30)) throw DataError("implausible header size: " + path);
    std::string header_bytes(header_len, '\0');
    if (!in.read(header_bytes.data(), static_cast<std::streamsize>(header_len))) {
        throw DataError("truncated model file: " + path);
    }
    json header = json::parse(header_bytes, nullptr, false);
    if (header.is_discarded()) throw DataError("model header is not valid JSON: " + path);

    TopicModel model;
    try {
        model.K = header.at("K").get<int>();
        model.alpha = header.at("alpha").get<double>();
        model.beta = header.at("beta").get<double>();
        model.seed = header.at("seed").get<std::uint64_t>();
        model.iterations = header.at("iterations").get<int>();
        model.labels = header.at("labels").get<std::vector<std::string>>();
        const json& vocab = header.at("vocab");
        model.vocab.words = vocab.at("words").get<std::vector<std::string>>();
        model.vocab.doc_freq = vocab.at("doc_freq").get<std::vector<int>>();
        model.vocab.corpus_size = vocab.at("corpus_size").get<std::size_t>();
    } catch (const json::exception& e) {
        throw DataError("model header is missing fields: " + std::string(e.what()));
    }
    const int V = header.at("V").get<int>();
    const int D = header.at("D").get<int>();
    if (model.K < 1 || V < 1 || D < 0) throw DataError("model header has impossible dimensions");
    if (V != static_cast<int>(model.vocab.words.size()) ||
        V != static_cast<int>(model.vocab.doc_freq.size())) {
        throw DataError("model header vocabulary is inconsistent: " + path);
    }
    for (int w = 0; w < V; ++w) {
        model.vocab.index.emplace(model.vocab.words[w], w);
    }
    if (header.at("vocab_checksum").get<std::string>() != vocabulary_checksum(model.vocab)) {
        throw DataError("vocabulary checksum mismatch; model file is corrupt: " + path);
    }
    if (static_cast<int>(model.labels.size()) != model.K) {
        throw DataError("model header label list does not match K: " + path);
    }

    model.n_kw.assign(model.K, std::vector<int>(V, 0));
    model.n_k.assign(model.K, 0);
    for (int k = 0; k < model.K; ++k) {
        for (int w = 0; w < V; ++w) {
            const std::uint32_t v = get_u32(in, path);
            model.n_kw[k][w] = static_cast<int>(v);
            model.n_k[k] += v;
        }
    }
    model.n_dk.assign(D, std::vector<int>(model.K, 0));
    for (int d = 0; d < D; ++d) {
        for (int k = 0; k < model.K; ++k) {
            model.n_dk[d][k] = static_cast<int>(get_u32(in, path));
        }
    }
    char extra;
    if (in.read(&extra, 1)) throw DataError("trailing bytes after model data: " + path);
    return model;
}

}  // namespace skillgap
