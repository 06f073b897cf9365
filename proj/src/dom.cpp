#include "textweave/dom.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_set>
#include <utility>

namespace textweave {

namespace {

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return out;
}

bool is_ws(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f';
}

bool is_tag_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

const std::unordered_set<std::string_view>& void_tags() {
    static const std::unordered_set<std::string_view> tags = {
        "area", "base", "br", "col", "embed", "hr", "img", "input",
        "link", "meta", "param", "source", "track", "wbr",
    };
    return tags;
}

bool is_raw_text_tag(std::string_view tag) {
    return tag == "script" || tag == "style";
}

// Tags whose start implies the end of an open `p`.
const std::unordered_set<std::string_view>& p_closers() {
    static const std::unordered_set<std::string_view> tags = {
        "address", "article", "aside", "blockquote", "details", "dialog", "dd",
        "div", "dl", "dt", "fieldset", "figcaption", "figure", "footer", "form",
        "h1", "h2", "h3", "h4", "h5", "h6", "header", "hgroup", "hr", "li",
        "main", "menu", "nav", "ol", "p", "pre", "section", "table", "ul",
    };
    return tags;
}

// Open elements a start tag implicitly closes (popped while on top).
bool implicitly_closes(std::string_view opening, std::string_view open) {
    if (opening == "li") return open == "li";
    if (opening == "dt" || opening == "dd") return open == "dt" || open == "dd";
    if (opening == "td" || opening == "th") return open == "td" || open == "th";
    if (opening == "tr") return open == "td" || open == "th" || open == "tr";
    if (opening == "thead" || opening == "tbody" || opening == "tfoot")
        return open == "td" || open == "th" || open == "tr" || open == "thead" ||
               open == "tbody" || open == "tfoot";
    if (opening == "option") return open == "option";
    if (p_closers().count(opening)) return open == "p";
    return false;
}

struct TagToken {
    std::string name;  // lowercase
    std::vector<Attribute> attributes;
    bool self_closing = false;
    std::size_t end = 0;  // index just past '>'
};

// Nesting cap: deeper start tags become leaf elements so hostile input
// cannot blow the downstream traversal stack.
constexpr std::size_t max_tree_depth = 256;

class Parser {
public:
    explicit Parser(std::string src) : src_(std::move(src)) {}

    ElementTree run() {
        stack_.push_back(Node::element(""));
        std::size_t i = 0;
        const std::size_t n = src_.size();
        while (i < n) {
            std::size_t lt = src_.find('<', i);
            if (lt == std::string::npos) {
                append_text(src_.substr(i));
                break;
            }
            if (lt > i) append_text(src_.substr(i, lt - i));
            i = lt;
            if (i + 1 >= n) {
                append_text("<");
                break;
            }
            const char next = src_[i + 1];
            if (next == '!') {
                i = skip_declaration(i);
            } else if (next == '?') {
                std::size_t gt = src_.find('>', i);
                i = gt == std::string::npos ? n : gt + 1;
            } else if (next == '/') {
                i = handle_end_tag(i);
            } else if (is_tag_start(next)) {
                i = handle_start_tag(i);
            } else {
                append_text("<");  // literal '<' in text, e.g. "a < b"
                ++i;
            }
        }
        while (stack_.size() > 1) pop();  // auto-close at end of input
        ElementTree tree;
        tree.root = std::move(stack_.front());
        return tree;
    }

private:
    void append_text(std::string_view raw) {
        if (raw.empty()) return;
        std::string decoded = decode_entities(raw);
        auto& children = stack_.back().children;
        if (!children.empty() && children.back().is_text())
            children.back().text += decoded;
        else
            children.push_back(Node::text_node(std::move(decoded)));
    }

    void pop() {
        Node done = std::move(stack_.back());
        stack_.pop_back();
        stack_.back().children.push_back(std::move(done));
    }

    std::size_t skip_declaration(std::size_t i) {
        // <!-- comment -->, <!DOCTYPE ...>, <![CDATA[ ...
        if (src_.compare(i, 4, "<!--") == 0) {
            std::size_t end = src_.find("-->", i + 4);
            return end == std::string::npos ? src_.size() : end + 3;
        }
        std::size_t gt = src_.find('>', i);
        return gt == std::string::npos ? src_.size() : gt + 1;
    }

    std::size_t handle_end_tag(std::size_t i) {
        std::size_t j = i + 2;
        const std::size_t n = src_.size();
        std::size_t name_start = j;
        while (j < n && !is_ws(src_[j]) && src_[j] != '>') ++j;
        std::string name = ascii_lower(std::string_view(src_).substr(name_start, j - name_start));
        std::size_t gt = src_.find('>', j);
        const std::size_t after = gt == std::string::npos ? n : gt + 1;
        if (name.empty()) return after;
        // Close the nearest matching open element; a stray end tag is dropped.
        for (std::size_t d = stack_.size(); d-- > 1;) {
            if (stack_[d].tag == name) {
                while (stack_.size() > d) pop();
                break;
            }
        }
        return after;
    }

    std::size_t handle_start_tag(std::size_t i) {
        TagToken tag = lex_start_tag(i);
        while (stack_.size() > 1 && implicitly_closes(tag.name, stack_.back().tag)) pop();

        Node element = Node::element(tag.name);
        element.attributes = std::move(tag.attributes);

        const bool is_void = void_tags().count(tag.name) > 0;
        if (is_void || tag.self_closing || stack_.size() >= max_tree_depth) {
            stack_.back().children.push_back(std::move(element));
            return tag.end;
        }
        if (is_raw_text_tag(tag.name)) {
            const auto [content, after] = scan_raw_text(tag.name, tag.end);
            if (!content.empty()) element.children.push_back(Node::text_node(content));
            stack_.back().children.push_back(std::move(element));
            return after;
        }
        stack_.push_back(std::move(element));
        return tag.end;
    }

    TagToken lex_start_tag(std::size_t i) {
        TagToken tag;
        const std::size_t n = src_.size();
        std::size_t j = i + 1;
        std::size_t name_start = j;
        while (j < n && !is_ws(src_[j]) && src_[j] != '>' && src_[j] != '/') ++j;
        tag.name = ascii_lower(std::string_view(src_).substr(name_start, j - name_start));

        while (j < n) {
            while (j < n && is_ws(src_[j])) ++j;
            if (j >= n) break;
            if (src_[j] == '>') {
                ++j;
                break;
            }
            if (src_[j] == '/') {
                if (j + 1 < n && src_[j + 1] == '>') {
                    tag.self_closing = true;
                    j += 2;
                    break;
                }
                ++j;
                continue;
            }
            std::size_t attr_start = j;
            while (j < n && !is_ws(src_[j]) && src_[j] != '=' && src_[j] != '>' && src_[j] != '/')
                ++j;
            std::string name =
                ascii_lower(std::string_view(src_).substr(attr_start, j - attr_start));
            std::string value;
            while (j < n && is_ws(src_[j])) ++j;
            if (j < n && src_[j] == '=') {
                ++j;
                while (j < n && is_ws(src_[j])) ++j;
                if (j < n && (src_[j] == '"' || src_[j] == '\'')) {
                    const char quote = src_[j];
                    ++j;
                    std::size_t value_start = j;
                    while (j < n && src_[j] != quote) ++j;
                    value = src_.substr(value_start, j - value_start);
                    if (j < n) ++j;
                } else {
                    std::size_t value_start = j;
                    while (j < n && !is_ws(src_[j]) && src_[j] != '>') {
                        if (src_[j] == '/' && j + 1 < n && src_[j + 1] == '>') break;
                        ++j;
                    }
                    value = src_.substr(value_start, j - value_start);
                }
            }
            if (name.empty()) {
                ++j;  // stray '=' or similar junk
                continue;
            }
            const bool duplicate =
                std::any_of(tag.attributes.begin(), tag.attributes.end(),
                            [&](const Attribute& a) { return a.name == name; });
            if (!duplicate)
                tag.attributes.push_back({std::move(name), decode_entities(value)});
        }
        tag.end = j;
        return tag;
    }

    // Content of script/style runs to the matching case-insensitive end tag.
    std::pair<std::string, std::size_t> scan_raw_text(const std::string& tag, std::size_t from) {
        const std::size_t n = src_.size();
        std::size_t pos = from;
        while (pos < n) {
            std::size_t lt = src_.find("</", pos);
            if (lt == std::string::npos) break;
            std::size_t k = lt + 2;
            if (k + tag.size() <= n) {
                bool match = true;
                for (std::size_t t = 0; t < tag.size(); ++t) {
                    if (std::tolower(static_cast<unsigned char>(src_[k + t])) != tag[t]) {
                        match = false;
                        break;
                    }
                }
                if (match) {
                    std::size_t after_name = k + tag.size();
                    if (after_name >= n || src_[after_name] == '>' || is_ws(src_[after_name])) {
                        std::size_t gt = src_.find('>', after_name);
                        return {src_.substr(from, lt - from),
                                gt == std::string::npos ? n : gt + 1};
                    }
                }
            }
            pos = lt + 2;
        }
        return {src_.substr(from), n};
    }

    std::string src_;
    std::vector<Node> stack_;
};

void escape_into(std::string& out, std::string_view text, bool attribute) {
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"':
                if (attribute) {
                    out += "&quot;";
                    break;
                }
                [[fallthrough]];
            default: out.push_back(c);
        }
    }
}

void serialize_into(std::string& out, const Node& node) {
    if (node.is_text()) {
        escape_into(out, node.text, false);
        return;
    }
    const bool is_root = node.tag.empty();
    if (!is_root) {
        out.push_back('<');
        out += node.tag;
        for (const Attribute& a : node.attributes) {
            out.push_back(' ');
            out += a.name;
            out += "=\"";
            escape_into(out, a.value, true);
            out.push_back('"');
        }
        out.push_back('>');
        if (void_tags().count(node.tag)) return;
    }
    for (const Node& child : node.children) serialize_into(out, child);
    if (!is_root) {
        out += "</";
        out += node.tag;
        out.push_back('>');
    }
}

void collect_text(const Node& node, std::string& out) {
    if (node.is_text()) {
        out += node.text;
        return;
    }
    for (const Node& child : node.children) collect_text(child, out);
}

}  // namespace

Node Node::element(std::string tag_name) {
    Node n;
    n.kind = NodeKind::element;
    n.tag = std::move(tag_name);
    return n;
}

Node Node::text_node(std::string content) {
    Node n;
    n.kind = NodeKind::text;
    n.text = std::move(content);
    return n;
}

const std::string* Node::find_attribute(std::string_view name) const {
    for (const Attribute& a : attributes)
        if (a.name == name) return &a.value;
    return nullptr;
}

ElementTree parse_html(std::string_view input, const std::optional<std::string>& encoding_hint) {
    return Parser(decode_document_bytes(input, encoding_hint)).run();
}

std::string text_content(const Node& node) {
    std::string out;
    collect_text(node, out);
    return out;
}

std::string serialize_html(const Node& node) {
    std::string out;
    serialize_into(out, node);
    return out;
}

}  // namespace textweave
