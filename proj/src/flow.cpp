#include "textweave/flow.hpp"

#include <algorithm>
#include <cassert>

#include "textweave/tables.hpp"
#include "textweave/utf8.hpp"

namespace textweave {

namespace {

bool is_collapsible(char32_t cp) {
    return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' || cp == U'\f';
}

// Flat code-point offset of each line start when lines are joined with
// newlines; one extra entry marks the end.
std::vector<std::size_t> line_offsets(const std::vector<std::u32string>& lines) {
    std::vector<std::size_t> offsets;
    offsets.reserve(lines.size() + 1);
    std::size_t at = 0;
    for (const auto& line : lines) {
        offsets.push_back(at);
        at += line.size() + 1;
    }
    offsets.push_back(at);
    return offsets;
}

}  // namespace

std::pair<std::u32string, CharClass> collapse_whitespace(std::u32string_view text,
                                                         CharClass state) {
    std::u32string out;
    out.reserve(text.size());
    for (char32_t cp : text) {
        if (is_collapsible(cp)) {
            if (state == CharClass::glyph) {
                out.push_back(U' ');
                state = CharClass::space;
            }
        } else {
            out.push_back(cp);
            state = CharClass::glyph;
        }
    }
    return {std::move(out), state};
}

std::size_t FragmentRender::width() const {
    std::size_t w = 0;
    for (const auto& line : lines) w = std::max(w, line.size());
    return w;
}

// --- Canvas ----------------------------------------------------------------

std::size_t Canvas::offset() const { return completed_ + current_.size(); }

CharClass Canvas::last_char_class() const { return char_class_; }

void Canvas::complete_line() {
    line_starts_.push_back(completed_);
    completed_ += current_.size() + 1;
    lines_.push_back(std::move(current_));
    current_.clear();
    pending_ws_.clear();
    char_class_ = CharClass::start_of_line;
}

void Canvas::flush_soft() {
    if (!current_.empty()) {
        complete_line();
    } else {
        pending_ws_.clear();
        char_class_ = CharClass::start_of_line;
    }
}

void Canvas::realize_pending_blanks() {
    if (current_.empty() && !lines_.empty()) {
        while (pending_blank_ > 0) {
            --pending_blank_;
            complete_line();  // current_ is empty: emits a blank line
        }
    }
    pending_blank_ = 0;  // margins never precede the first line
}

void Canvas::flush_hard() {
    realize_pending_blanks();
    complete_line();
}

void Canvas::line_break() { flush_hard(); }

void Canvas::realize_line_prefix() {
    realize_pending_blanks();
    std::u32string prefix(static_cast<std::size_t>(indent_), U' ');
    prefix += pending_bullet_;
    pending_bullet_.clear();
    if (prefix.empty()) return;
    current_ = std::move(prefix);
    // Frames that have seen no glyph yet begin after the layout prefix;
    // indentation and bullets are not element content.
    for (SpanFrame& frame : span_frames_)
        if (frame.start >= last_glyph_end_) frame.start = offset();
}

void Canvas::materialize_pending() {
    if (!pending_ws_.empty()) {
        current_ += pending_ws_;
        pending_ws_.clear();
    }
}

void Canvas::append_glyph(char32_t cp) {
    if (current_.empty()) realize_line_prefix();
    materialize_pending();
    current_.push_back(cp);
    char_class_ = CharClass::glyph;
    last_glyph_end_ = offset();
}

void Canvas::write_normal(std::u32string_view text) {
    auto [collapsed, new_state] = collapse_whitespace(text, char_class_);
    if (collapsed.empty()) {
        char_class_ = new_state;
        return;
    }
    std::u32string_view body = collapsed;
    const bool trailing_space = body.back() == U' ';
    if (trailing_space) body.remove_suffix(1);
    for (char32_t cp : body) {
        if (cp == U' ')
            pending_ws_ = U" ";
        else
            append_glyph(cp);
    }
    if (trailing_space) pending_ws_ = U" ";
    char_class_ = new_state;
}

void Canvas::write_pre(std::u32string_view text) {
    for (std::size_t i = 0; i < text.size(); ++i) {
        char32_t cp = text[i];
        if (cp == U'\r') {  // normalize CRLF / CR to LF
            if (i + 1 < text.size() && text[i + 1] == U'\n') continue;
            cp = U'\n';
        }
        if (swallow_newline_) {
            swallow_newline_ = false;
            if (cp == U'\n') continue;
        }
        if (cp == U'\n') {
            flush_hard();
        } else if (cp == U' ' || cp == U'\t') {
            pending_ws_.push_back(cp);
            char_class_ = CharClass::space;
        } else {
            append_glyph(cp);
        }
    }
}

void Canvas::write_text(std::u32string_view text, const ComputedStyle& style) {
    if (text.empty()) return;
    if (style.whitespace == WhitespaceMode::pre)
        write_pre(text);
    else
        write_normal(text);
}

void Canvas::open_block(const ComputedStyle& style) {
    flush_soft();
    pending_blank_ = std::max(pending_blank_, style.margin_before);
    indent_stack_.push_back(indent_);
    indent_ += style.padding_inline;
    if (style.list_bullet) pending_bullet_ = utf8::decode(*style.list_bullet);
}

void Canvas::close_block(const ComputedStyle& style) {
    flush_soft();
    pending_blank_ = std::max(pending_blank_, style.margin_after);
    if (!indent_stack_.empty()) {
        indent_ = indent_stack_.back();
        indent_stack_.pop_back();
    }
    if (style.list_bullet) pending_bullet_.clear();  // unconsumed bullet of this block
    swallow_newline_ = false;  // the pre opening newline cannot follow a block
}

Canvas::BlockPlacement Canvas::append_block_lines(const std::vector<std::u32string>& block_lines) {
    flush_soft();
    BlockPlacement placement;
    placement.line_offsets.reserve(block_lines.size());
    placement.line_indents.reserve(block_lines.size());
    for (const std::u32string& content : block_lines) {
        realize_pending_blanks();
        const std::size_t before = offset();
        std::size_t prefix_len = 0;
        if (!content.empty()) {
            std::u32string prefix(static_cast<std::size_t>(indent_), U' ');
            prefix += pending_bullet_;
            pending_bullet_.clear();
            prefix_len = prefix.size();
            for (SpanFrame& frame : span_frames_)
                if (frame.start >= last_glyph_end_) frame.start = before + prefix_len;
            current_ = std::move(prefix);
            current_ += content;
            last_glyph_end_ = offset();
        }
        placement.line_offsets.push_back(before);
        placement.line_indents.push_back(prefix_len);
        complete_line();
    }
    return placement;
}

void Canvas::add_annotation(Annotation annotation) {
    annotations_.push_back(std::move(annotation));
}

void Canvas::push_span_frame(std::vector<std::string> labels) {
    span_frames_.push_back({std::move(labels), offset()});
}

void Canvas::pop_span_frame() {
    assert(!span_frames_.empty());
    SpanFrame frame = std::move(span_frames_.back());
    span_frames_.pop_back();
    std::size_t start = frame.start;
    std::size_t end = offset();
    while (start < end && is_collapsible(char_at(start))) ++start;
    while (end > start && is_collapsible(char_at(end - 1))) --end;
    if (start >= end) return;
    for (std::string& label : frame.labels)
        annotations_.push_back({start, end, std::move(label)});
}

char32_t Canvas::char_at(std::size_t off) const {
    if (off >= completed_) return current_[off - completed_];
    auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), off);
    const std::size_t index = static_cast<std::size_t>(it - line_starts_.begin()) - 1;
    const std::size_t local = off - line_starts_[index];
    return local == lines_[index].size() ? U'\n' : lines_[index][local];
}

RenderedDocument Canvas::finish() && {
    flush_soft();
    RenderedDocument doc;
    std::string text;
    for (const std::u32string& line : lines_) {
        text += utf8::encode(line);
        text.push_back('\n');
    }
    doc.text = std::move(text);
    doc.annotations = std::move(annotations_);
    sort_annotations(doc.annotations);
    return doc;
}

FragmentRender Canvas::finish_fragment() && {
    flush_soft();
    FragmentRender fragment;
    fragment.lines = std::move(lines_);
    fragment.annotations = std::move(annotations_);
    sort_annotations(fragment.annotations);
    return fragment;
}

// --- tree walking ------------------------------------------------------------

class FlowWalker {
public:
    FlowWalker(const RenderContext& ctx, Canvas& canvas) : ctx_(ctx), canvas_(canvas) {}

    void walk(const Node& node, const ComputedStyle& parent_style) {
        if (node.is_text()) {
            canvas_.write_text(utf8::decode(node.text), parent_style);
            return;
        }
        ComputedStyle style = resolve_style(node, parent_style, *ctx_.profile);
        if (style.display == Display::none) return;

        if (node.tag == "br") {
            canvas_.line_break();
            return;
        }

        std::vector<std::string> labels = ctx_.rules->match(node);

        if (style.display == Display::table) {
            FragmentRender sub = render_table(node, style, ctx_);
            if (!labels.empty()) canvas_.push_span_frame(labels);
            integrate_block(sub);
            if (!labels.empty()) canvas_.pop_span_frame();
            return;
        }

        // Rows and cells showing up outside a table behave like plain
        // block / inline content.
        Display display = style.display;
        if (display == Display::table_row) display = Display::block;
        if (display == Display::table_cell) display = Display::inline_;

        if (display == Display::block) {
            const bool is_list = node.tag == "ul" || node.tag == "ol";
            if (is_list) lists_.push_back({node.tag == "ol", 0});
            if (node.tag == "li" && !lists_.empty() && lists_.back().ordered)
                style.list_bullet = ordered_list_bullet(++lists_.back().counter);

            canvas_.open_block(style);
            // The newline right after a `pre` start tag is markup, not content.
            if (node.tag == "pre" && style.whitespace == WhitespaceMode::pre)
                canvas_.swallow_pre_newline();
            if (!labels.empty()) canvas_.push_span_frame(labels);
            for (const Node& child : node.children) walk(child, style);
            if (!labels.empty()) canvas_.pop_span_frame();
            canvas_.close_block(style);

            if (is_list) lists_.pop_back();
        } else {
            if (!labels.empty()) canvas_.push_span_frame(labels);
            if (node.tag == "img") {
                const std::string* alt = node.find_attribute("alt");
                if (alt && !alt->empty()) canvas_.write_text(utf8::decode(*alt), style);
            }
            for (const Node& child : node.children) walk(child, style);
            if (!labels.empty()) canvas_.pop_span_frame();
        }
    }

private:
    // Places a pre-rendered block (a table) on the canvas and remaps its
    // local annotations to final offsets.
    void integrate_block(const FragmentRender& sub) {
        if (sub.lines.empty()) return;
        const Canvas::BlockPlacement placement = canvas_.append_block_lines(sub.lines);
        if (sub.annotations.empty()) return;
        const std::vector<std::size_t> local = line_offsets(sub.lines);
        auto locate = [&](std::size_t off) {
            auto it = std::upper_bound(local.begin(), local.end(), off);
            return static_cast<std::size_t>(it - local.begin()) - 1;
        };
        for (const Annotation& ann : sub.annotations) {
            const std::size_t start_line = locate(ann.start);
            const std::size_t end_line = locate(ann.end - 1);
            const std::size_t start = placement.line_offsets[start_line] +
                                      placement.line_indents[start_line] +
                                      (ann.start - local[start_line]);
            const std::size_t end = placement.line_offsets[end_line] +
                                    placement.line_indents[end_line] +
                                    (ann.end - local[end_line]);
            canvas_.add_annotation({start, end, ann.label});
        }
    }

    struct ListScope {
        bool ordered = false;
        int counter = 0;
    };

    const RenderContext& ctx_;
    Canvas& canvas_;
    std::vector<ListScope> lists_;
};

RenderedDocument render(const ElementTree& tree, const StyleProfile& profile,
                        const CompiledRules& rules) {
    RenderContext ctx{&profile, &rules};
    Canvas canvas;
    FlowWalker walker(ctx, canvas);
    ComputedStyle root_style;
    root_style.display = Display::block;
    for (const Node& child : tree.root.children) walker.walk(child, root_style);
    return std::move(canvas).finish();
}

FragmentRender render_fragment(const std::vector<const Node*>& nodes,
                               const ComputedStyle& parent_style, const RenderContext& ctx,
                               int initial_indent, const std::vector<std::string>& wrap_labels) {
    Canvas canvas;
    ComputedStyle pad;
    pad.display = Display::block;
    pad.padding_inline = initial_indent;
    if (initial_indent > 0) canvas.open_block(pad);
    if (!wrap_labels.empty()) canvas.push_span_frame(wrap_labels);
    FlowWalker walker(ctx, canvas);
    for (const Node* node : nodes) walker.walk(*node, parent_style);
    if (!wrap_labels.empty()) canvas.pop_span_frame();
    if (initial_indent > 0) canvas.close_block(pad);
    return std::move(canvas).finish_fragment();
}

}  // namespace textweave
