#ifndef SKILLGAP_TAXONOMY_HPP
#define SKILLGAP_TAXONOMY_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "skillgap/record.hpp"

namespace skillgap {

// Two-level skill category tree (ACM CCS / EU CST style). L2 nodes carry no
// children; keywords default to the tokenized name.
struct SkillCategory {
    std::string id;    // stable slug of the name
    std::string name;
    int level = 1;     // 1 or 2
    std::vector<std::string> keywords;
    std::vector<SkillCategory> children;  // level 1 only

    bool operator==(const SkillCategory&) const = default;
};

struct Taxonomy {
    std::string name;  // e.g. "acm-ccs", "eu-cst"
    std::vector<SkillCategory> roots;

    bool operator==(const Taxonomy&) const = default;
};

// Text format: L1 lines unindented, L2 lines indented by two spaces,
// optional "| kw: a, b, c" suffix overriding the keyword set, '#' comments.
// Throws DataError with a line number on duplicate ids, empty names or
// nesting deeper than two levels.
Taxonomy parse_taxonomy(std::istream& in, const std::string& name);
Taxonomy parse_taxonomy_file(const std::string& path);

std::string serialize_taxonomy(const Taxonomy& taxonomy);

// Warnings only: keyword sets subsumed by another category (match
// shadowing), stopword-only keyword sets, L1 categories without children.
std::vector<Diagnostic> validate(const Taxonomy& taxonomy);

// Flat view in depth-first taxonomy order (L1 followed by its children).
std::vector<const SkillCategory*> all_categories(const Taxonomy& taxonomy);

}  // namespace skillgap

#endif
