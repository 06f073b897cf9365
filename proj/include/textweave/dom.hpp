#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace textweave {

enum class NodeKind { element, text };

struct Attribute {
    std::string name;   // lowercase
    std::string value;  // original case, character references resolved
};

/// One node of the parsed document. Elements own their children by value;
/// a finished tree is immutable in practice and safe to share across threads.
struct Node {
    NodeKind kind = NodeKind::element;
    std::string tag;    // lowercase, elements only
    std::string text;   // UTF-8, text nodes only
    std::vector<Attribute> attributes;
    std::vector<Node> children;

    static Node element(std::string tag_name);
    static Node text_node(std::string content);

    bool is_element() const { return kind == NodeKind::element; }
    bool is_text() const { return kind == NodeKind::text; }

    /// First attribute with the given lowercase name, or nullptr.
    const std::string* find_attribute(std::string_view name) const;
};

struct ElementTree {
    Node root;  // synthetic document root (empty tag)
};

/// Lenient parse of arbitrary bytes. Never fails: unclosed tags close at
/// their parent boundary, stray end tags are dropped, and undecodable
/// bytes become replacement characters. `encoding_hint` wins over a
/// `<meta charset>` found in the first 1024 bytes; the fallback is UTF-8.
ElementTree parse_html(std::string_view input,
                       const std::optional<std::string>& encoding_hint = std::nullopt);

/// Concatenation of all descendant text nodes in document order.
std::string text_content(const Node& node);

/// Markup form of a tree; used for diagnostics and round-trip checks.
std::string serialize_html(const Node& node);

/// Resolves `&amp;`-style named and numeric character references.
/// Unknown or malformed references are kept verbatim.
std::string decode_entities(std::string_view text);

/// Decodes raw document bytes to UTF-8 according to the hint / meta sniff /
/// UTF-8 fallback rules used by parse_html.
std::string decode_document_bytes(std::string_view bytes,
                                  const std::optional<std::string>& encoding_hint);

}  // namespace textweave
