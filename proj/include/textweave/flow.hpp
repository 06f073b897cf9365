#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "textweave/annotate.hpp"
#include "textweave/dom.hpp"
#include "textweave/style.hpp"

namespace textweave {

/// Whitespace-collapse state: what the previously emitted character was.
enum class CharClass { start_of_line, space, glyph };

/// Final conversion result: UTF-8 text plus sorted annotation spans.
/// `text` is empty or ends with exactly one newline; span offsets count
/// code points into `text`.
struct RenderedDocument {
    std::string text;
    std::vector<Annotation> annotations;
};

/// Collapses runs of {space, tab, LF, CR, FF} to single spaces. A leading
/// run is dropped when `state` is start_of_line or space. Returns the
/// collapsed text and the class of its last character. U+00A0 is a glyph.
std::pair<std::u32string, CharClass> collapse_whitespace(std::u32string_view text,
                                                         CharClass state);

/// Rendered lines plus annotations local to them — the unit table cells,
/// captions and nested renders exchange. Annotation offsets index the
/// fragment's own text (lines joined with newlines).
struct FragmentRender {
    std::vector<std::u32string> lines;
    std::vector<Annotation> annotations;

    std::size_t width() const;  // widest line, in code points
};

/// The in-progress rendered text. Completed lines never carry trailing
/// whitespace; blank lines demanded by margins are realized lazily, when
/// the next glyph arrives, so the output never starts or ends with
/// margin-driven blanks. Offsets of materialized characters never change.
class Canvas {
public:
    Canvas() = default;

    // -- text -------------------------------------------------------------
    void write_text(std::u32string_view text, const ComputedStyle& style);
    void line_break();  // terminates the current line even if empty

    // -- blocks -----------------------------------------------------------
    void open_block(const ComputedStyle& style);
    void close_block(const ComputedStyle& style);

    /// Swallow a single newline at the start of the next pre-mode text
    /// (the newline right after a `<pre>` open tag is not content).
    void swallow_pre_newline() { swallow_newline_ = true; }

    /// Appends pre-rendered block lines (a table) under the current
    /// indentation. Returns the final start offset and indentation width
    /// of each appended line so local annotations can be remapped.
    struct BlockPlacement {
        std::vector<std::size_t> line_offsets;  // code-point offset of each line start
        std::vector<std::size_t> line_indents;  // prefix width applied to each line
    };
    BlockPlacement append_block_lines(const std::vector<std::u32string>& block_lines);

    void add_annotation(Annotation annotation);  // already in final offsets

    // -- annotation span capture -------------------------------------------
    void push_span_frame(std::vector<std::string> labels);
    /// Closes the innermost frame: trims the span to its non-whitespace
    /// extent and emits one annotation per label; empty spans vanish.
    void pop_span_frame();

    // -- state ------------------------------------------------------------
    std::size_t offset() const;  // code points emitted so far
    CharClass last_char_class() const;
    int pending_blank_lines() const { return pending_blank_; }
    const std::vector<std::u32string>& lines() const { return lines_; }

    RenderedDocument finish() &&;
    FragmentRender finish_fragment() &&;

private:
    struct SpanFrame {
        std::vector<std::string> labels;
        std::size_t start = 0;
    };

    void flush_soft();              // completes a non-empty current line
    void flush_hard();              // completes the current line even if empty
    void complete_line();
    void realize_pending_blanks();  // owed blank lines; suppressed before the first line
    void realize_line_prefix();     // pending blanks + indentation + bullet
    void materialize_pending();
    void append_glyph(char32_t cp);
    void write_normal(std::u32string_view text);
    void write_pre(std::u32string_view text);
    char32_t char_at(std::size_t off) const;

    std::vector<std::u32string> lines_;
    std::vector<std::size_t> line_starts_;  // offset of each completed line
    std::size_t completed_ = 0;             // code points in completed lines (incl. newlines)
    std::u32string current_;
    std::u32string pending_ws_;             // whitespace owed before the next glyph
    int pending_blank_ = 0;
    CharClass char_class_ = CharClass::start_of_line;
    std::vector<int> indent_stack_;
    int indent_ = 0;
    std::u32string pending_bullet_;
    std::size_t last_glyph_end_ = 0;  // offset just past the newest glyph
    bool swallow_newline_ = false;
    std::vector<SpanFrame> span_frames_;
    std::vector<Annotation> annotations_;

    friend class FlowWalker;
};

/// Everything a conversion shares; immutable while rendering.
struct RenderContext {
    const StyleProfile* profile = nullptr;
    const CompiledRules* rules = nullptr;
};

/// Depth-first render of the whole tree.
RenderedDocument render(const ElementTree& tree, const StyleProfile& profile,
                        const CompiledRules& rules);

/// Renders a node list into a standalone fragment (used for table cells,
/// captions and similar sub-layouts). `wrap_labels` opens an annotation
/// frame around the whole fragment; `initial_indent` indents every line.
FragmentRender render_fragment(const std::vector<const Node*>& nodes,
                               const ComputedStyle& parent_style,
                               const RenderContext& ctx,
                               int initial_indent = 0,
                               const std::vector<std::string>& wrap_labels = {});

}  // namespace textweave
