#pragma once

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "textweave/flow.hpp"

namespace textweave {

/// Identity: the extracted text, annotations ignored.
std::string to_plain(const RenderedDocument& doc);

/// `<document>` wrapping the text with one element per span. Overlapping
/// spans that do not nest are split at the enclosing span's end so the
/// result is a well-formed tree; stripping tags and unescaping recovers
/// the text exactly.
std::string to_xml(const RenderedDocument& doc);

/// Standalone HTML page: highlighted spans inside a <pre>, one background
/// color per label from a fixed 12-color palette.
std::string to_surface_html(const RenderedDocument& doc);

/// One doccano-style JSON line: {"text": ..., "label": [[start, end, label], ...]}.
std::string to_jsonl(const RenderedDocument& doc);

using Postprocessor = std::function<std::string(const RenderedDocument&)>;

/// Post-processors keyed by format name. Custom formats can be registered
/// next to the built-in plain/xml/html/jsonl.
class PostprocessorRegistry {
public:
    static PostprocessorRegistry built_in();

    void register_format(std::string name, Postprocessor fn);
    const Postprocessor* find(std::string_view name) const;
    std::vector<std::string> names() const;

private:
    std::map<std::string, Postprocessor, std::less<>> formats_;
};

}  // namespace textweave
