#include "textweave/postprocess.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>

#include <nlohmann/json.hpp>

#include "textweave/utf8.hpp"

namespace textweave {

namespace {

// One open/close marker in a well-nested rewrite of the annotation spans.
struct MarkupEvent {
    std::size_t pos = 0;
    bool open = false;
    std::string label;
};

bool before(const Annotation& a, const Annotation& b) {
    if (a.start != b.start) return a.start < b.start;
    if (a.end != b.end) return a.end > b.end;
    return a.label < b.label;
}

// Rewrites possibly-overlapping spans into a well-nested event sequence.
// A span that crosses the end of an enclosing span is cut there and its
// tail re-queued, so character-level label coverage is unchanged.
std::vector<MarkupEvent> well_nested_events(const std::vector<Annotation>& annotations) {
    std::vector<Annotation> sorted = annotations;
    sort_annotations(sorted);
    std::deque<Annotation> work(sorted.begin(), sorted.end());
    std::vector<MarkupEvent> events;
    std::vector<Annotation> stack;

    auto close_top = [&] {
        events.push_back({stack.back().end, false, stack.back().label});
        stack.pop_back();
    };
    while (!work.empty()) {
        Annotation ann = std::move(work.front());
        work.pop_front();
        while (!stack.empty() && stack.back().end <= ann.start) close_top();
        if (!stack.empty() && ann.end > stack.back().end) {
            Annotation tail{stack.back().end, ann.end, ann.label};
            ann.end = stack.back().end;
            auto it = std::find_if(work.begin(), work.end(),
                                   [&](const Annotation& w) { return before(tail, w); });
            work.insert(it, std::move(tail));
        }
        if (ann.start >= ann.end) continue;
        events.push_back({ann.start, true, ann.label});
        stack.push_back(std::move(ann));
    }
    while (!stack.empty()) close_top();
    return events;
}

void escape_text(std::string& out, std::string_view text) {
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out.push_back(c);
        }
    }
}

void escape_attribute(std::string& out, std::string_view text) {
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
}

bool xml_name_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool xml_name_char(char c) {
    return xml_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}

std::string xml_name(std::string_view label) {
    std::string out;
    out.reserve(label.size());
    for (std::size_t i = 0; i < label.size(); ++i) {
        const char c = label[i];
        const bool ok = i == 0 ? xml_name_start(c) : xml_name_char(c);
        out.push_back(ok ? c : '_');
    }
    if (out.empty()) out = "_";
    return out;
}

std::string css_class(std::string_view label) {
    std::string out;
    out.reserve(label.size());
    for (char c : label) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '-' || c == '_';
        out.push_back(ok ? c : '_');
    }
    if (out.empty()) out = "_";
    return out;
}

constexpr std::array<const char*, 12> highlight_palette = {
    "#ffe08a", "#b5e8b0", "#aed9f5", "#f5b8c4", "#dcc7f0", "#f7d4a8",
    "#c9e6a1", "#a8e4dc", "#f0bfa0", "#ccd4f7", "#e6e394", "#bce8c8",
};

const char* label_color(std::string_view label) {
    std::uint32_t hash = 2166136261u;  // FNV-1a
    for (char c : label) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 16777619u;
    }
    return highlight_palette[hash % highlight_palette.size()];
}

// Splits UTF-8 text at code-point offsets named by the events and feeds
// the pieces through `text_out` / `tag_out`.
template <typename TextFn, typename TagFn>
void emit_marked_text(const RenderedDocument& doc, TextFn&& text_out, TagFn&& tag_out) {
    const std::u32string text = utf8::decode(doc.text);
    const std::vector<MarkupEvent> events = well_nested_events(doc.annotations);
    std::size_t pos = 0;
    for (const MarkupEvent& ev : events) {
        if (ev.pos > pos) {
            text_out(utf8::encode(std::u32string_view(text).substr(pos, ev.pos - pos)));
            pos = ev.pos;
        }
        tag_out(ev);
    }
    if (pos < text.size()) text_out(utf8::encode(std::u32string_view(text).substr(pos)));
}

}  // namespace

std::string to_plain(const RenderedDocument& doc) { return doc.text; }

std::string to_xml(const RenderedDocument& doc) {
    std::string out = "<document>";
    emit_marked_text(
        doc, [&](const std::string& piece) { escape_text(out, piece); },
        [&](const MarkupEvent& ev) {
            out += ev.open ? "<" : "</";
            out += xml_name(ev.label);
            out += ">";
        });
    out += "</document>";
    return out;
}

std::string to_surface_html(const RenderedDocument& doc) {
    std::vector<std::string> labels;
    for (const Annotation& ann : doc.annotations) labels.push_back(ann.label);
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

    std::string out =
        "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n"
        "<title>annotated text</title>\n<style>\n"
        "body { font-family: monospace; }\n"
        "pre { line-height: 1.4; }\n";
    for (const std::string& label : labels) {
        out += ".label-";
        out += css_class(label);
        out += " { background-color: ";
        out += label_color(label);
        out += "; }\n";
    }
    out += "</style>\n</head>\n<body>\n<pre>";
    emit_marked_text(
        doc, [&](const std::string& piece) { escape_text(out, piece); },
        [&](const MarkupEvent& ev) {
            if (ev.open) {
                out += "<span class=\"label-";
                out += css_class(ev.label);
                out += "\" title=\"";
                escape_attribute(out, ev.label);
                out += "\">";
            } else {
                out += "</span>";
            }
        });
    out += "</pre>\n</body>\n</html>\n";
    return out;
}

std::string to_jsonl(const RenderedDocument& doc) {
    nlohmann::ordered_json line;
    line["text"] = doc.text;
    nlohmann::ordered_json spans = nlohmann::ordered_json::array();
    std::vector<Annotation> sorted = doc.annotations;
    sort_annotations(sorted);
    for (const Annotation& ann : sorted)
        spans.push_back({ann.start, ann.end, ann.label});
    line["label"] = std::move(spans);
    return line.dump() + "\n";
}

PostprocessorRegistry PostprocessorRegistry::built_in() {
    PostprocessorRegistry registry;
    registry.register_format("plain", to_plain);
    registry.register_format("xml", to_xml);
    registry.register_format("html", to_surface_html);
    registry.register_format("jsonl", to_jsonl);
    return registry;
}

void PostprocessorRegistry::register_format(std::string name, Postprocessor fn) {
    formats_[std::move(name)] = std::move(fn);
}

const Postprocessor* PostprocessorRegistry::find(std::string_view name) const {
    auto it = formats_.find(name);
    return it == formats_.end() ? nullptr : &it->second;
}

std::vector<std::string> PostprocessorRegistry::names() const {
    std::vector<std::string> out;
    out.reserve(formats_.size());
    for (const auto& [name, fn] : formats_) out.push_back(name);
    return out;
}

}  // namespace textweave
