#include "skillgap/taxonomy.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "skillgap/text.hpp"

namespace skillgap {

namespace {

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void parse_fail(const std::string& name, long line, const std::string& what) {
    throw DataError("taxonomy " + name + ": line " + std::to_string(line) + ": " + what);
}

// "Name | kw: a, b, c" -> category with an explicit keyword set.
SkillCategory make_category(const std::string& taxonomy_name, long line_no,
                            const std::string& content, int level) {
    std::string name_part = content;
    std::string kw_part;
    const auto bar = content.find('|');
    if (bar != std::string::npos) {
        name_part = trim(content.substr(0, bar));
        kw_part = trim(content.substr(bar + 1));
        if (kw_part.rfind("kw:", 0) != 0)
            parse_fail(taxonomy_name, line_no, "expected 'kw:' after '|'");
        kw_part = kw_part.substr(3);
    }

    SkillCategory cat;
    cat.name = name_part;
    cat.level = level;
    if (cat.name.empty()) parse_fail(taxonomy_name, line_no, "empty category name");
    cat.id = slugify(cat.name);
    if (cat.id.empty())
        parse_fail(taxonomy_name, line_no, "name has no alphanumeric content");

    if (bar == std::string::npos) {
        cat.keywords = tokenize(cat.name);
    } else {
        std::stringstream items(kw_part);
        std::string item;
        while (std::getline(items, item, ',')) {
            for (const auto& token : tokenize(item)) cat.keywords.push_back(token);
        }
        if (cat.keywords.empty())
            parse_fail(taxonomy_name, line_no, "keyword override is empty");
    }
    return cat;
}

}  // namespace

Taxonomy parse_taxonomy(std::istream& in, const std::string& name) {
    Taxonomy taxonomy;
    taxonomy.name = name;

    std::set<std::string> ids;
    std::string raw;
    long line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = strip_cr(raw);
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;

        size_t indent = 0;
        while (indent < line.size() && line[indent] == ' ') ++indent;
        if (line[indent] == '\t')
            parse_fail(name, line_no, "tab indentation is not supported");
        if (indent != 0 && indent != 2)
            parse_fail(name, line_no,
                       indent > 2 ? "nesting deeper than two levels"
                                  : "indentation must be exactly two spaces");

        const int level = indent == 0 ? 1 : 2;
        SkillCategory cat = make_category(name, line_no, stripped, level);
        if (!ids.insert(cat.id).second)
            parse_fail(name, line_no, "duplicate category id '" + cat.id + "'");

        if (level == 1) {
            taxonomy.roots.push_back(std::move(cat));
        } else {
            if (taxonomy.roots.empty())
                parse_fail(name, line_no, "L2 category without a preceding L1");
            taxonomy.roots.back().children.push_back(std::move(cat));
        }
    }
    return taxonomy;
}

Taxonomy parse_taxonomy_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open taxonomy file: " + path);
    std::string name = path;
    const auto slash = name.find_last_of("/\\");
    if (slash != std::string::npos) name = name.substr(slash + 1);
    const auto dot = name.find_last_of('.');
    if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
    return parse_taxonomy(in, name);
}

namespace {

void serialize_category(const SkillCategory& cat, std::string indent, std::string& out) {
    out += indent;
    out += cat.name;
    if (cat.keywords != tokenize(cat.name)) {
        out += " | kw: ";
        for (size_t i = 0; i < cat.keywords.size(); ++i) {
            if (i) out += ", ";
            out += cat.keywords[i];
        }
    }
    out += '\n';
    for (const auto& child : cat.children) serialize_category(child, "  ", out);
}

}  // namespace

std::string serialize_taxonomy(const Taxonomy& taxonomy) {
    std::string out;
    for (const auto& root : taxonomy.roots) serialize_category(root, "", out);
    return out;
}

std::vector<const SkillCategory*> all_categories(const Taxonomy& taxonomy) {
    std::vector<const SkillCategory*> flat;
    for (const auto& root : taxonomy.roots) {
        flat.push_back(&root);
        for (const auto& child : root.children) flat.push_back(&child);
    }
    return flat;
}

std::vector<Diagnostic> validate(const Taxonomy& taxonomy) {
    std::vector<Diagnostic> warnings;
    const auto categories = all_categories(taxonomy);

    std::vector<std::set<std::string>> keyword_sets;
    keyword_sets.reserve(categories.size());
    for (const auto* cat : categories)
        keyword_sets.emplace_back(cat->keywords.begin(), cat->keywords.end());

    // Only L2 categories compete for documents (L1 support is the union of
    // its children), so the shadowing check is restricted to them: names
    // like "Cryptography" -> "Public key cryptography" would otherwise warn
    // on every realistic tree.
    for (size_t i = 0; i < categories.size(); ++i) {
        if (categories[i]->level != 2) continue;
        for (size_t j = 0; j < categories.size(); ++j) {
            if (i == j || categories[j]->level != 2) continue;
            if (std::includes(keyword_sets[j].begin(), keyword_sets[j].end(),
                              keyword_sets[i].begin(), keyword_sets[i].end())) {
                warnings.push_back(
                    {"taxonomy.validate", "keyword set shadowed",
                     "'" + categories[i]->id + "' is a subset of '" +
                         categories[j]->id + "'"});
                break;
            }
        }
    }

    for (size_t i = 0; i < categories.size(); ++i) {
        const auto& set = keyword_sets[i];
        const bool all_stop =
            !set.empty() && std::all_of(set.begin(), set.end(), [](const std::string& w) {
                return english_stopwords().count(w) > 0;
            });
        if (all_stop)
            warnings.push_back({"taxonomy.validate", "stopword-only keyword set",
                                categories[i]->id});
    }

    for (const auto& root : taxonomy.roots) {
        if (root.children.empty())
            warnings.push_back(
                {"taxonomy.validate", "L1 category has no children", root.id});
    }
    return warnings;
}

}  // namespace skillgap
