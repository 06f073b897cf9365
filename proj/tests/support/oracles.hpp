// Test-only oracles and generators. Everything here computes expectations
// through an independent path (std::regex, plain DOM walks, hand
// arithmetic) so renderer bugs cannot cancel out.
#pragma once

#include <algorithm>
#include <cstddef>
#include <random>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "textweave/dom.hpp"
#include "textweave/style.hpp"
#include "textweave/utf8.hpp"

namespace testsupport {

// --- whitespace oracle -------------------------------------------------------

// Regex-based collapse: whitespace runs become one space, ends trimmed.
inline std::string collapse_oracle(const std::string& text) {
    static const std::regex runs("[ \t\n\r\f]+");
    std::string collapsed = std::regex_replace(text, runs, " ");
    const std::size_t begin = collapsed.find_first_not_of(' ');
    if (begin == std::string::npos) return "";
    const std::size_t end = collapsed.find_last_not_of(' ');
    return collapsed.substr(begin, end - begin + 1);
}

// All whitespace removed; the order-preserving content fingerprint.
inline std::string strip_whitespace(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text)
        if (c != ' ' && c != '\t' && c != '\n' && c != '\r' && c != '\f') out.push_back(c);
    return out;
}

inline std::string sorted_chars(std::string text) {
    std::sort(text.begin(), text.end());
    return text;
}

// --- DOM-side visibility oracle ----------------------------------------------

// Text the renderer is expected to preserve: text nodes outside
// display:none subtrees plus img alt values. Style resolution is reused
// (it has its own tests); the traversal is independent of the renderer.
inline void visible_text_into(const textweave::Node& node,
                              const textweave::ComputedStyle& parent,
                              const textweave::StyleProfile& profile, std::string& out) {
    if (node.is_text()) {
        out += node.text;
        return;
    }
    const textweave::ComputedStyle style = textweave::resolve_style(node, parent, profile);
    if (style.display == textweave::Display::none) return;
    if (node.tag == "img") {
        if (const std::string* alt = node.find_attribute("alt")) out += *alt;
        return;
    }
    for (const textweave::Node& child : node.children)
        visible_text_into(child, style, profile, out);
}

inline std::string visible_text(const textweave::Node& node,
                                const textweave::StyleProfile& profile) {
    std::string out;
    textweave::ComputedStyle root;
    root.display = textweave::Display::block;
    visible_text_into(node, root, profile, out);
    return out;
}

// --- XML unwrap oracle ---------------------------------------------------------

// Strips every tag and unescapes the three text entities; an independent
// scanner, not the project parser.
inline std::string xml_unwrap(std::string_view xml) {
    std::string out;
    std::size_t i = 0;
    while (i < xml.size()) {
        if (xml[i] == '<') {
            const std::size_t gt = xml.find('>', i);
            i = gt == std::string_view::npos ? xml.size() : gt + 1;
            continue;
        }
        if (xml[i] == '&') {
            if (xml.compare(i, 5, "&amp;") == 0) { out.push_back('&'); i += 5; continue; }
            if (xml.compare(i, 4, "&lt;") == 0) { out.push_back('<'); i += 4; continue; }
            if (xml.compare(i, 4, "&gt;") == 0) { out.push_back('>'); i += 4; continue; }
        }
        out.push_back(xml[i]);
        ++i;
    }
    return out;
}

// --- tree helpers --------------------------------------------------------------

inline void count_elements(const textweave::Node& node, std::string_view tag, std::size_t& count) {
    if (node.is_element() && node.tag == tag) ++count;
    for (const textweave::Node& child : node.children) count_elements(child, tag, count);
}

inline std::size_t count_elements(const textweave::Node& node, std::string_view tag) {
    std::size_t count = 0;
    count_elements(node, tag, count);
    return count;
}

inline const textweave::Node* find_element(const textweave::Node& node, std::string_view tag) {
    if (node.is_element() && node.tag == tag) return &node;
    for (const textweave::Node& child : node.children)
        if (const textweave::Node* hit = find_element(child, tag)) return hit;
    return nullptr;
}

inline void collect_elements(const textweave::Node& node, std::string_view tag,
                             std::vector<const textweave::Node*>& out) {
    if (node.is_element() && node.tag == tag) out.push_back(&node);
    for (const textweave::Node& child : node.children) collect_elements(child, tag, out);
}

// --- structural invariants -------------------------------------------------------

inline void check_tree_invariants(const textweave::Node& node, std::vector<std::string>& problems) {
    if (node.is_text()) {
        if (!node.children.empty()) problems.push_back("text node with children");
        return;
    }
    for (char c : node.tag)
        if (c >= 'A' && c <= 'Z') problems.push_back("uppercase tag: " + node.tag);
    for (const textweave::Attribute& a : node.attributes)
        for (char c : a.name)
            if (c >= 'A' && c <= 'Z') problems.push_back("uppercase attribute: " + a.name);
    for (const textweave::Node& child : node.children) check_tree_invariants(child, problems);
}

// Lines of a rendered text (which is "" or newline-terminated).
inline std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) nl = text.size();
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    return lines;
}

inline bool has_trailing_space_lines(const std::string& text) {
    for (const std::string& line : split_lines(text))
        if (!line.empty() && (line.back() == ' ' || line.back() == '\t')) return true;
    return false;
}

// --- random generators -----------------------------------------------------------

class Rng {
public:
    explicit Rng(std::uint32_t seed) : engine_(seed) {}

    int below(int n) { return std::uniform_int_distribution<int>(0, n - 1)(engine_); }
    bool chance(double p) { return std::uniform_real_distribution<double>(0, 1)(engine_) < p; }

    std::string word(int min_len, int max_len) {
        static const char alphabet[] = "abcdefghijklmnopqrstuvwxyz0123456789";
        const int len = min_len + below(max_len - min_len + 1);
        std::string out;
        for (int i = 0; i < len; ++i) out.push_back(alphabet[below(36)]);
        return out;
    }

    // Text with messy whitespace (tabs, newlines, runs) and the odd &nbsp;.
    std::string messy_text(int words) {
        static const char* gaps[] = {" ", "  ", "\t", "\n", " \n ", "\r\n", "   \t"};
        std::string out;
        if (chance(0.3)) out += gaps[below(7)];
        for (int i = 0; i < words; ++i) {
            if (i) out += gaps[below(7)];
            if (chance(0.06)) out += "&nbsp;";
            out += word(1, 8);
        }
        if (chance(0.3)) out += gaps[below(7)];
        return out;
    }

    std::mt19937& engine() { return engine_; }

private:
    std::mt19937 engine_;
};

}  // namespace testsupport
