#ifndef SKILLGAP_HTML_HPP
#define SKILLGAP_HTML_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace skillgap {

// Element or text node. Text nodes have an empty tag; elements keep their
// children in document order. Nodes are heap-allocated so raw pointers into
// the tree stay valid while the root lives.
struct HtmlNode {
    std::string tag;  // lowercase; empty for text nodes
    std::string text;
    std::map<std::string, std::string> attrs;  // lowercase names, first wins
    std::vector<std::unique_ptr<HtmlNode>> children;

    bool is_text() const { return tag.empty(); }
    const std::string* attr(const std::string& name) const {
        const auto it = attrs.find(name);
        return it == attrs.end() ? nullptr : &it->second;
    }
};

// Tolerant parser for the subset of HTML that job portals and course
// catalogs actually serve: comments, doctype, void elements, self-closing
// tags, quoted and bare attributes, raw script/style content, character
// entities. Stray close tags are ignored; unclosed elements close at end
// of input. There are no implicit-close rules beyond the void-element list.
std::unique_ptr<HtmlNode> parse_html(const std::string& bytes);

// Text content of a subtree: text segments joined by single spaces,
// script/style content excluded. Callers normalize the result.
std::string node_text(const HtmlNode& node);

// Extraction rules: whitespace-separated descendant steps, each
// [tag][#id][.class ...], with an optional trailing @attribute on the last
// step. Examples: "div.job-description", "a.result-link@href",
// "article #main p".
struct SelectorStep {
    std::string tag;  // empty matches any element
    std::string id;
    std::vector<std::string> classes;
};

struct Selector {
    std::vector<SelectorStep> steps;
    std::string attribute;  // empty: take node text
};

Selector parse_selector(const std::string& expression);  // DataError on malformed input

// Matching elements in document order, each reported once even when several
// ancestors satisfy the leading steps.
std::vector<const HtmlNode*> select_all(const HtmlNode& root, const Selector& selector);

// Node text (or the @attribute value) of every match; matches lacking the
// attribute are skipped.
std::vector<std::string> select_values(const HtmlNode& root, const Selector& selector);

}  // namespace skillgap

#endif
