#include "skillgap/html.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <map>
#include <set>

#include "skillgap/record.hpp"
#include "skillgap/text.hpp"

namespace skillgap {

namespace {

bool is_void_element(const std::string& tag) {
    static const std::set<std::string> kVoid = {"area",  "base", "br",    "col",  "embed",
                                                "hr",    "img",  "input", "link", "meta",
                                                "param", "source", "track", "wbr"};
    return kVoid.count(tag) > 0;
}

bool is_raw_text_element(const std::string& tag) { return tag == "script" || tag == "style"; }

char ascii_lower(char c) { return c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c; }

std::string lowercase_ascii(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), ascii_lower);
    return s;
}

bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == ':';
}

// The XML five, the Latin-1 accents seen on English and German job boards,
// and numeric forms. Anything else is left verbatim: better a literal
// "&foo;" than silently dropped text.
const std::map<std::string, const char*>& named_entities() {
    static const std::map<std::string, const char*> table = {
        {"amp", "&"},           {"lt", "<"},            {"gt", ">"},
        {"quot", "\""},         {"apos", "'"},          {"nbsp", "\xc2\xa0"},
        {"auml", "\xc3\xa4"},   {"ouml", "\xc3\xb6"},   {"uuml", "\xc3\xbc"},
        {"Auml", "\xc3\x84"},   {"Ouml", "\xc3\x96"},   {"Uuml", "\xc3\x9c"},
        {"szlig", "\xc3\x9f"},  {"eacute", "\xc3\xa9"}, {"Eacute", "\xc3\x89"},
        {"egrave", "\xc3\xa8"}, {"agrave", "\xc3\xa0"}, {"ccedil", "\xc3\xa7"},
        {"ndash", "\xe2\x80\x93"}, {"mdash", "\xe2\x80\x94"},
        {"lsquo", "\xe2\x80\x98"}, {"rsquo", "\xe2\x80\x99"},
        {"ldquo", "\xe2\x80\x9c"}, {"rdquo", "\xe2\x80\x9d"},
        {"hellip", "\xe2\x80\xa6"}, {"euro", "\xe2\x82\xac"},
        {"copy", "\xc2\xa9"},   {"middot", "\xc2\xb7"},  {"bull", "\xe2\x80\xa2"},
    };
    return table;
}

std::string decode_entities(const std::string& raw) {
    std::string out;
    out.reserve(raw.size());
    std::size_t i = 0;
    while (i < raw.size()) {
        if (raw[i] != '&') {
            out += raw[i++];
            continue;
        }
        const std::size_t semi = raw.find(';', i + 1);
        if (semi == std::string::npos || semi - i > 12) {
            out += raw[i++];
            continue;
        }
        const std::string name = raw.substr(i + 1, semi - i - 1);
        const auto& table = named_entities();
        if (const auto it = table.find(name); it != table.end()) {
            out += it->second;
        } else if (name.size() > 1 && name[0] == '#') {
            char32_t cp = 0;
            bool ok = true;
            if (name[1] == 'x' || name[1] == 'X') {
                for (std::size_t j = 2; j < name.size() && ok; ++j) {
                    const char c = ascii_lower(name[j]);
                    if (c >= '0' && c <= '9') {
                        cp = cp * 16 + (c - '0');
                    } else if (c >= 'a' && c <= 'f') {
                        cp = cp * 16 + (c - 'a' + 10);
                    } else {
                        ok = false;
                    }
                }
                ok = ok && name.size() > 2;
            } else {
                for (std::size_t j = 1; j < name.size() && ok; ++j) {
                    if (name[j] >= '0' && name[j] <= '9') {
                        cp = cp * 10 + (name[j] - '0');
                    } else {
                        ok = false;
                    }
                }
            }
            if (ok && cp > 0 && cp <= 0x10ffff && !(cp >= 0xd800 && cp <= 0xdfff)) {
                out += utf8_encode(std::u32string(1, cp));
            } else {
                out += raw.substr(i, semi - i + 1);
            }
        } else {
            out += raw.substr(i, semi - i + 1);
            i = semi + 1;
            continue;
        }
        i = semi + 1;
    }
    return out;
}

bool all_whitespace(const std::string& s) {
    return s.find_first_not_of(" \t\r\n\f") == std::string::npos;
}

class Parser {
  public:
    explicit Parser(const std::string& input) : s_(input) {}

    std::unique_ptr<HtmlNode> run() {
        auto root = std::make_unique<HtmlNode>();
        root->tag = "#root";
        std::vector<HtmlNode*> stack = {root.get()};
        while (i_ < s_.size()) {
            if (s_[i_] != '<') {
                emit_text(*stack.back(), read_until('<'));
                continue;
            }
            if (starts_with("<!--")) {
                skip_comment();
            } else if (starts_with("<!") || starts_with("<?")) {
                skip_past('>');
            } else if (starts_with("</")) {
                close_tag(stack);
            } else if (i_ + 1 < s_.size() &&
                       std::isalpha(static_cast<unsigned char>(s_[i_ + 1]))) {
                open_tag(stack);
            } else {
                emit_text(*stack.back(), "<");  // literal '<' in prose
                ++i_;
            }
        }
        return root;
    }

  private:
    bool starts_with(const char* prefix) const { return s_.compare(i_, std::strlen(prefix), prefix) == 0; }

    std::string read_until(char stop) {
        const std::size_t start = i_;
        while (i_ < s_.size() && s_[i_] != stop) ++i_;
        return s_.substr(start, i_ - start);
    }

    void skip_past(char stop) {
        while (i_ < s_.size() && s_[i_] != stop) ++i_;
        if (i_ < s_.size()) ++i_;
    }

    void skip_comment() {
        const std::size_t end = s_.find("-->", i_ + 4);
        i_ = end == std::string::npos ? s_.size() : end + 3;
    }

    void skip_ws() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }

    static void emit_text(HtmlNode& parent, const std::string& raw) {
        if (raw.empty() || all_whitespace(raw)) return;
        auto node = std::make_unique<HtmlNode>();
        node->text = decode_entities(raw);
        parent.children.push_back(std::move(node));
    }

    void close_tag(std::vector<HtmlNode*>& stack) {
        i_ += 2;
        std::string name;
        while (i_ < s_.size() && is_name_char(s_[i_])) name += ascii_lower(s_[i_++]);
        skip_past('>');
        // Pop to the nearest matching open element; a close with no open
        // counterpart is dropped.
        for (std::size_t depth = stack.size(); depth > 1; --depth) {
            if (stack[depth - 1]->tag == name) {
                stack.resize(depth - 1);
                return;
            }
        }
    }

    void open_tag(std::vector<HtmlNode*>& stack) {
        ++i_;
        auto node = std::make_unique<HtmlNode>();
        while (i_ < s_.size() && is_name_char(s_[i_])) node->tag += ascii_lower(s_[i_++]);
        bool self_closing = false;
        while (i_ < s_.size() && s_[i_] != '>') {
            skip_ws();
            if (i_ >= s_.size() || s_[i_] == '>') break;
            if (s_[i_] == '/') {
                self_closing = true;
                ++i_;
                continue;
            }
            std::string name;
            while (i_ < s_.size() && is_name_char(s_[i_])) name += ascii_lower(s_[i_++]);
            if (name.empty()) {  // stray byte; step over it
                ++i_;
                continue;
            }
            skip_ws();
            std::string value;
            if (i_ < s_.size() && s_[i_] == '=') {
                ++i_;
                skip_ws();
                if (i_ < s_.size() && (s_[i_] == '"' || s_[i_] == '\'')) {
                    const char quote = s_[i_++];
                    value = read_until(quote);
                    if (i_ < s_.size()) ++i_;
                } else {
                    while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) &&
                           s_[i_] != '>') {
                        value += s_[i_++];
                    }
                }
            }
            node->attrs.emplace(name, decode_entities(value));
        }
        if (i_ < s_.size()) ++i_;  // '>'

        HtmlNode* raw_parent = node.get();
        const std::string tag = node->tag;
        stack.back()->children.push_back(std::move(node));
        if (self_closing || is_void_element(tag)) return;
        if (is_raw_text_element(tag)) {
            read_raw_content(*raw_parent, tag);
            return;
        }
        stack.push_back(raw_parent);
    }

    // script/style bodies are not markup: scan to the matching close tag.
    void read_raw_content(HtmlNode& element, const std::string& tag) {
        const std::string close = "</" + tag;
        std::size_t end = i_;
        while (end < s_.size()) {
            if (s_.compare(end, close.size(), close) == 0) break;
            ++end;
        }
        if (end > i_) {
            auto node = std::make_unique<HtmlNode>();
            node->text = s_.substr(i_, end - i_);
            element.children.push_back(std::move(node));
        }
        i_ = end;
        if (i_ < s_.size()) skip_past('>');
    }

    const std::string& s_;
    std::size_t i_ = 0;
};

void collect_text(const HtmlNode& node, std::vector<const std::string*>& segments) {
    if (node.is_text()) {
        segments.push_back(&node.text);
        return;
    }
    if (is_raw_text_element(node.tag)) return;
    for (const auto& child : node.children) collect_text(*child, segments);
}

bool step_matches(const HtmlNode& node, const SelectorStep& step) {
    if (node.is_text()) return false;
    if (!step.tag.empty() && node.tag != step.tag) return false;
    if (!step.id.empty()) {
        const std::string* id = node.attr("id");
        if (id == nullptr || *id != step.id) return false;
    }
    if (!step.classes.empty()) {
        const std::string* cls = node.attr("class");
        if (cls == nullptr) return false;
        std::vector<std::string> have;
        std::string current;
        for (char c : *cls + " ") {
            if (std::isspace(static_cast<unsigned char>(c))) {
                if (!current.empty()) have.push_back(current);
                current.clear();
            } else {
                current += ascii_lower(c);
            }
        }
        for (const std::string& wanted : step.classes) {
            if (std::find(have.begin(), have.end(), wanted) == have.end()) return false;
        }
    }
    return true;
}

// Pre-order walk carrying the step indices whose prefixes matched along the
// ancestor chain. One visit per node keeps the output in document order and
// duplicate-free even when several ancestors satisfy the leading steps.
void walk(const HtmlNode& node, const std::vector<SelectorStep>& steps,
          const std::vector<std::size_t>& active, std::vector<const HtmlNode*>& out) {
    for (const auto& child : node.children) {
        if (child->is_text()) continue;
        std::vector<std::size_t> next = active;
        for (const std::size_t idx : active) {
            if (!step_matches(*child, steps[idx])) continue;
            if (idx + 1 == steps.size()) {
                out.push_back(child.get());
            } else if (std::find(next.begin(), next.end(), idx + 1) == next.end()) {
                next.push_back(idx + 1);
            }
        }
        walk(*child, steps, next, out);
    }
}

}  // namespace

std::unique_ptr<HtmlNode> parse_html(const std::string& bytes) { return Parser(bytes).run(); }

std::string node_text(const HtmlNode& node) {
    std::vector<const std::string*> segments;
    collect_text(node, segments);
    std::string joined;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        if (i > 0) joined += ' ';
        joined += *segments[i];
    }
    return joined;
}

Selector parse_selector(const std::string& expression) {
    Selector selector;
    std::string expr = expression;
    const std::size_t at = expr.find('@');
    if (at != std::string::npos) {
        selector.attribute = lowercase_ascii(expr.substr(at + 1));
        expr = expr.substr(0, at);
        if (selector.attribute.empty()) {
            throw DataError("selector '" + expression + "': empty attribute after '@'");
        }
    }
    std::string token;
    std::vector<std::string> tokens;
    for (char c : expr + " ") {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!token.empty()) tokens.push_back(token);
            token.clear();
        } else {
            token += c;
        }
    }
    for (const std::string& t : tokens) {
        SelectorStep step;
        std::size_t pos = 0;
        const auto read_ident = [&]() {
            std::string ident;
            while (pos < t.size() && t[pos] != '#' && t[pos] != '.') ident += ascii_lower(t[pos++]);
            return ident;
        };
        if (pos < t.size() && t[pos] != '#' && t[pos] != '.') step.tag = read_ident();
        while (pos < t.size()) {
            const char kind = t[pos++];
            const std::string ident = read_ident();
            if (ident.empty()) {
                throw DataError("selector '" + expression + "': empty name after '" +
                                std::string(1, kind) + "'");
            }
            if (kind == '#') {
                step.id = ident;
            } else {
                step.classes.push_back(ident);
            }
        }
        if (step.tag.empty() && step.id.empty() && step.classes.empty()) {
            throw DataError("selector '" + expression + "': empty step");
        }
        selector.steps.push_back(std::move(step));
    }
    if (selector.steps.empty()) {
        throw DataError("selector '" + expression + "': no steps");
    }
    return selector;
}

std::vector<const HtmlNode*> select_all(const HtmlNode& root, const Selector& selector) {
    std::vector<const HtmlNode*> out;
    walk(root, selector.steps, {0}, out);
    return out;
}

std::vector<std::string> select_values(const HtmlNode& root, const Selector& selector) {
    std::vector<std::string> values;
    for (const HtmlNode* node : select_all(root, selector)) {
        if (selector.attribute.empty()) {
            values.push_back(node_text(*node));
        } else if (const std::string* value = node->attr(selector.attribute)) {
            values.push_back(*value);
        }
    }
    return values;
}

}  // namespace skillgap
