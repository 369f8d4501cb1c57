#include "skillgap/match.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "skillgap/text.hpp"

namespace skillgap {

namespace {

// Longest common subsequence length over code points, two-row DP.
std::size_t lcs_length(const std::u32string& a, const std::u32string& b) {
    if (a.empty() || b.empty()) return 0;
    std::vector<std::size_t> prev(b.size() + 1, 0);
    std::vector<std::size_t> curr(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            if (a[i - 1] == b[j - 1]) {
                curr[j] = prev[j - 1] + 1;
            } else {
                curr[j] = std::max(prev[j], curr[j - 1]);
            }
        }
        std::swap(prev, curr);
    }
    return prev[b.size()];
}

std::string join_tokens(const std::vector<std::string>& tokens) {
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out.push_back(' ');
        out += t;
    }
    return out;
}

std::string join_parts(const std::string& left, const std::string& right) {
    if (left.empty()) return right;
    if (right.empty()) return left;
    return left + " " + right;
}

}  // namespace

int similarity_ratio(const std::string& s1, const std::string& s2) {
    const std::u32string a = utf8_decode(s1);
    const std::u32string b = utf8_decode(s2);
    const std::size_t total = a.size() + b.size();
    if (total == 0) return 100;
    const std::size_t lcs = lcs_length(a, b);
    return static_cast<int>(
        std::llround(200.0 * static_cast<double>(lcs) / static_cast<double>(total)));
}

std::vector<std::string> sorted_unique_tokens(const std::string& text) {
    std::vector<std::string> tokens = tokenize(text);
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    return tokens;
}

int token_set_ratio_tokens(const std::vector<std::string>& a,
                           const std::vector<std::string>& b) {
    std::vector<std::string> common, only_a, only_b;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::back_inserter(common));
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(only_a));
    std::set_difference(b.begin(), b.end(), a.begin(), a.end(),
                        std::back_inserter(only_b));

    const std::string t0 = join_tokens(common);
    const std::string t1 = join_parts(t0, join_tokens(only_a));
    const std::string t2 = join_parts(t0, join_tokens(only_b));

    return std::max({similarity_ratio(t0, t1), similarity_ratio(t0, t2),
                     similarity_ratio(t1, t2)});
}

int token_set_ratio(const std::string& a, const std::string& b) {
    return token_set_ratio_tokens(sorted_unique_tokens(a), sorted_unique_tokens(b));
}

int category_score(const DocumentRecord& doc, const SkillCategory& category) {
    return token_set_ratio(join_tokens(category.keywords), doc.title + " " + doc.body);
}

DfTable document_frequency(const Corpus& corpus, const Taxonomy& taxonomy,
                           int threshold) {
    if (corpus.records.empty())
        throw DataError("document_frequency: empty corpus");
    if (threshold < 0 || threshold > 100)
        throw DataError("document_frequency: threshold must be in 0..100");

    DfTable table;
    table.taxonomy_name = taxonomy.name;
    table.corpus_side = corpus.side;
    table.threshold = threshold;
    table.corpus_size = corpus.records.size();

    // Tokenize each document once; scoring is then per (doc, category).
    std::vector<std::vector<std::string>> doc_tokens;
    doc_tokens.reserve(corpus.records.size());
    for (const auto& rec : corpus.records)
        doc_tokens.push_back(sorted_unique_tokens(rec.title + " " + rec.body));

    for (const auto& root : taxonomy.roots) {
        std::vector<std::vector<std::string>> child_keywords;
        for (const auto& child : root.children) {
            std::vector<std::string> kw = child.keywords;
            std::sort(kw.begin(), kw.end());
            kw.erase(std::unique(kw.begin(), kw.end()), kw.end());
            child_keywords.push_back(std::move(kw));
        }

        std::size_t root_support = 0;
        std::vector<std::size_t> child_support(root.children.size(), 0);
        for (const auto& tokens : doc_tokens) {
            bool any = false;
            for (std::size_t c = 0; c < root.children.size(); ++c) {
                if (token_set_ratio_tokens(child_keywords[c], tokens) > threshold) {
                    ++child_support[c];
                    any = true;
                }
            }
            if (any) ++root_support;
        }

        const double n = static_cast<double>(table.corpus_size);
        table.entries[root.id] = {1, static_cast<double>(root_support) / n};
        for (std::size_t c = 0; c < root.children.size(); ++c) {
            table.entries[root.children[c].id] = {
                2, static_cast<double>(child_support[c]) / n};
        }
    }
    return table;
}

void write_df_csv(const DfTable& table, std::ostream& out) {
    out << "# taxonomy: " << table.taxonomy_name << "\n";
    out << "# side: " << to_string(table.corpus_side) << "\n";
    out << "# threshold: " << table.threshold << "\n";
    out << "# corpus_size: " << table.corpus_size << "\n";
    out << "category_id,level,df\n";
    char buf[32];
    for (const auto& [id, entry] : table.entries) {
        std::snprintf(buf, sizeof(buf), "%.4f", entry.df);
        out << id << ',' << entry.level << ',' << buf << '\n';
    }
}

void write_df_csv_file(const DfTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: identical bytes everywhere
    if (!out) throw DataError("cannot open for writing: " + path);
    write_df_csv(table, out);
    out.flush();
    if (!out) throw DataError("failed while writing: " + path);
}

DfTable read_df_csv(std::istream& in, const std::string& what) {
    DfTable table;
    std::string line;
    long line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto colon = line.find(':');
            if (colon == std::string::npos) continue;
            std::string key = line.substr(1, colon - 1);
            std::string value = line.substr(colon + 1);
            const auto strip = [](std::string& s) {
                const auto b = s.find_first_not_of(' ');
                const auto e = s.find_last_not_of(' ');
                s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
            };
            strip(key);
            strip(value);
            if (key == "taxonomy") table.taxonomy_name = value;
            else if (key == "side") table.corpus_side = side_from_string(value);
            else if (key == "threshold") table.threshold = std::stoi(value);
            else if (key == "corpus_size") table.corpus_size = std::stoul(value);
            continue;
        }
        if (!header_seen) {
            if (line != "category_id,level,df")
                throw DataError(what + ": unexpected header at line " +
                                std::to_string(line_no));
            header_seen = true;
            continue;
        }
        std::stringstream row(line);
        std::string id, level_s, df_s;
        if (!std::getline(row, id, ',') || !std::getline(row, level_s, ',') ||
            !std::getline(row, df_s)) {
            throw DataError(what + ": malformed row at line " + std::to_string(line_no));
        }
        DfEntry entry;
        try {
            entry.level = std::stoi(level_s);
            entry.df = std::stod(df_s);
        } catch (const std::exception&) {
            throw DataError(what + ": malformed row at line " + std::to_string(line_no));
        }
        if (entry.df < 0.0 || entry.df > 1.0)
            throw DataError(what + ": df out of [0,1] at line " + std::to_string(line_no));
        table.entries[id] = entry;
    }
    if (!header_seen) throw DataError(what + ": missing header row");
    return table;
}

DfTable read_df_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open df csv: " + path);
    return read_df_csv(in, path);
}

}  // namespace skillgap
