#ifndef SKILLGAP_MATCH_HPP
#define SKILLGAP_MATCH_HPP

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "skillgap/record.hpp"
#include "skillgap/taxonomy.hpp"

namespace skillgap {

// Character-level similarity in 0..100: round(100 * 2*LCS / (|s1|+|s2|)),
// LCS over code points. Both empty -> 100, exactly one empty -> 0.
// Equivalent to an insert/delete-only edit-distance similarity.
int similarity_ratio(const std::string& s1, const std::string& s2);

// Token-set similarity: with A/B the sorted unique token sets, compares
// join(A&B) against that intersection extended by each side's leftover
// tokens and takes the best of the three pairings. Robust to token order,
// duplication and length mismatch; a subset relation scores 100.
int token_set_ratio(const std::string& a, const std::string& b);

// token_set_ratio over pre-tokenized sides (sorted, unique).
int token_set_ratio_tokens(const std::vector<std::string>& a_sorted_unique,
                           const std::vector<std::string>& b_sorted_unique);

std::vector<std::string> sorted_unique_tokens(const std::string& text);

// Score of a document against one category's keyword set.
int category_score(const DocumentRecord& doc, const SkillCategory& category);

struct DfEntry {
    int level = 2;
    double df = 0.0;

    bool operator==(const DfEntry&) const = default;
};

// Per-category document-frequency fractions for one corpus side under one
// threshold.
struct DfTable {
    std::string taxonomy_name;
    Side corpus_side = Side::demand;
    int threshold = 90;
    std::map<std::string, DfEntry> entries;  // category id -> level, df
    std::size_t corpus_size = 0;
};

// A document supports an L2 category iff its score strictly exceeds the
// threshold; an L1 category is supported iff any of its children is (union
// aggregation). df = supporting documents / corpus size.
DfTable document_frequency(const Corpus& corpus, const Taxonomy& taxonomy,
                           int threshold = 90);

// CSV: `category_id,level,df` preceded by `#`-comment provenance lines.
void write_df_csv(const DfTable& table, std::ostream& out);
void write_df_csv_file(const DfTable& table, const std::string& path);
DfTable read_df_csv(std::istream& in, const std::string& what = "df table");
DfTable read_df_csv_file(const std::string& path);

}  // namespace skillgap

#endif
