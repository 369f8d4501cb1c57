#pragma once

// Synthetic corpora with planted topic structure, used to check that the
// sampler recovers known word blocks and that the model-selection sweep
// lands near the true topic count.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include "skillgap/record.hpp"
#include "skillgap/rng.hpp"
#include "skillgap/text.hpp"

namespace planted {

struct PlantedCorpus {
    skillgap::Corpus corpus;
    int topics = 0;
    int block = 0;  // words per topic block; word i belongs to block i / block
};

inline std::string word_name(int index) {
    char buffer[16];
    std::snprintf(buffer, sizeof(buffer), "w%03d", index);
    return buffer;
}

// Vocabulary of `topics * block` words named w000, w001, ... Each document
// is assigned one planted topic (round-robin, so counts are balanced) and
// draws `doc_len` tokens: with probability `own_fraction` uniformly from its
// topic's block, otherwise uniformly from the whole vocabulary.
inline PlantedCorpus make_planted(int topics, int block, int docs, int doc_len,
                                  double own_fraction, std::uint64_t seed) {
    PlantedCorpus out;
    out.topics = topics;
    out.block = block;
    out.corpus.side = skillgap::Side::demand;
    out.corpus.provenance = "planted";
    const int vocab = topics * block;
    skillgap::Rng rng(seed);
    for (int d = 0; d < docs; ++d) {
        const int topic = d % topics;
        std::string body;
        for (int t = 0; t < doc_len; ++t) {
            int word;
            if (rng.next_double() < own_fraction) {
                word = topic * block + static_cast<int>(rng.next_below(block));
            } else {
                word = static_cast<int>(rng.next_below(vocab));
            }
            if (!body.empty()) body += ' ';
            body += word_name(word);
        }
        skillgap::DocumentRecord rec;
        char id[24];
        std::snprintf(id, sizeof(id), "doc-%04d", d);
        rec.doc_id = id;
        rec.source_id = "planted";
        rec.side = skillgap::Side::demand;
        rec.title = "document " + std::to_string(d);
        rec.body = body;
        rec.language = "en";
        rec.content_hash = skillgap::content_hash(body);
        rec.retrieved_at = "2024-01-01T00:00:00Z";
        out.corpus.records.push_back(std::move(rec));
    }
    return out;
}

// Fraction of the given words that belong to planted block `b`.
inline double block_fraction(const std::vector<std::string>& words, int b, int block) {
    if (words.empty()) return 0.0;
    int inside = 0;
    for (const std::string& w : words) {
        if (w.size() < 2 || w[0] != 'w') continue;
        const int index = std::atoi(w.c_str() + 1);
        if (index / block == b) ++inside;
    }
    return static_cast<double>(inside) / static_cast<double>(words.size());
}

// Assign model topics to planted blocks 1:1 so that the worst per-topic
// recovery is as large as possible, brute-forcing all permutations (meant
// for small K; criterion 5 uses K = 4). `top_words[k]` is the word list for
// model topic k. Returns that maximized minimum recovery.
inline double best_permutation_min_recovery(
    const std::vector<std::vector<std::string>>& top_words, int block) {
    const int k = static_cast<int>(top_words.size());
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    double best = 0.0;
    do {
        double worst = 1.0;
        for (int topic = 0; topic < k; ++topic) {
            worst = std::min(worst, block_fraction(top_words[topic], perm[topic], block));
        }
        best = std::max(best, worst);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace planted
