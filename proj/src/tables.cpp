#include "textweave/tables.hpp"

#include <algorithm>

#include "textweave/utf8.hpp"

namespace textweave {

namespace {

constexpr std::size_t column_separator = 2;

bool is_trim_ws(char32_t cp) {
    return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' || cp == U'\f';
}

bool all_whitespace(const std::string& utf8_text) {
    for (char32_t cp : utf8::decode(utf8_text))
        if (!is_trim_ws(cp)) return false;
    return true;
}

bool is_row_group(const std::string& tag) {
    return tag == "thead" || tag == "tbody" || tag == "tfoot";
}

bool is_cell_tag(const std::string& tag) { return tag == "td" || tag == "th"; }

struct PendingRow {
    std::vector<const Node*> cells;
    ComputedStyle parent_style;              // style the cells resolve against
    std::vector<std::string> labels;         // tr rules + containing group rules
};

// Gathers rows, the caption and loose (misnested) content from a table
// subtree. Consecutive td/th without a tr form an implied row.
struct TableShape {
    std::vector<PendingRow> rows;
    const Node* caption = nullptr;
    std::vector<const Node*> hoisted;
};

class ShapeCollector {
public:
    ShapeCollector(const RenderContext& ctx, TableShape& out) : ctx_(ctx), out_(out) {}

    void collect(const Node& table, const ComputedStyle& table_style) {
        scan_children(table, table_style, {});
        flush_implied(table_style, {});
    }

private:
    void scan_children(const Node& parent, const ComputedStyle& parent_style,
                       const std::vector<std::string>& group_labels) {
        for (const Node& child : parent.children) {
            if (child.is_text()) {
                if (!all_whitespace(child.text)) out_.hoisted.push_back(&child);
                continue;
            }
            const ComputedStyle style = resolve_style(child, parent_style, *ctx_.profile);
            if (style.display == Display::none) continue;
            if (child.tag == "caption") {
                if (!out_.caption) out_.caption = &child;
                else out_.hoisted.push_back(&child);
                continue;
            }
            if (child.tag == "tr") {
                flush_implied(parent_style, group_labels);
                add_row(child, style, group_labels);
                continue;
            }
            if (is_row_group(child.tag)) {
                flush_implied(parent_style, group_labels);
                std::vector<std::string> labels = group_labels;
                for (std::string& l : ctx_.rules->match(child)) labels.push_back(std::move(l));
                scan_children(child, style, labels);
                flush_implied(style, labels);
                continue;
            }
            if (is_cell_tag(child.tag)) {
                implied_.push_back(&child);
                implied_style_ = parent_style;
                continue;
            }
            out_.hoisted.push_back(&child);
        }
    }

    void add_row(const Node& tr, const ComputedStyle& row_style,
                 const std::vector<std::string>& group_labels) {
        PendingRow row;
        row.parent_style = row_style;
        row.labels = group_labels;
        for (std::string& l : ctx_.rules->match(tr)) row.labels.push_back(std::move(l));
        for (const Node& child : tr.children) {
            if (child.is_text()) {
                if (!all_whitespace(child.text)) out_.hoisted.push_back(&child);
                continue;
            }
            if (is_cell_tag(child.tag)) row.cells.push_back(&child);
            else out_.hoisted.push_back(&child);
        }
        out_.rows.push_back(std::move(row));
    }

    void flush_implied(const ComputedStyle& parent_style,
                       const std::vector<std::string>& group_labels) {
        if (implied_.empty()) return;
        PendingRow row;
        row.parent_style = implied_style_.value_or(parent_style);
        row.labels = group_labels;
        row.cells = std::move(implied_);
        implied_.clear();
        implied_style_.reset();
        out_.rows.push_back(std::move(row));
    }

    const RenderContext& ctx_;
    TableShape& out_;
    std::vector<const Node*> implied_;
    std::optional<ComputedStyle> implied_style_;
};

std::size_t left_padding(const ComputedStyle& style, std::size_t content, std::size_t width) {
    if (content >= width) return 0;
    switch (style.horizontal_align) {
        case HorizontalAlign::right: return width - content;
        case HorizontalAlign::center: return (width - content) / 2;  // extra space on the right
        default: return 0;
    }
}

std::size_t blank_lines_above(const ComputedStyle& style, std::size_t height,
                              std::size_t row_height) {
    if (height >= row_height) return 0;
    switch (style.vertical_align) {
        case VerticalAlign::bottom: return row_height - height;
        case VerticalAlign::middle: return (row_height - height) / 2;  // extra line below
        default: return 0;
    }
}

void append_fragment(FragmentRender& out, const FragmentRender& piece) {
    std::size_t base = 0;
    for (const auto& line : out.lines) base += line.size() + 1;
    for (const auto& line : piece.lines) out.lines.push_back(line);
    for (const Annotation& ann : piece.annotations)
        out.annotations.push_back({ann.start + base, ann.end + base, ann.label});
}

}  // namespace

std::vector<std::size_t> compute_column_widths(const std::vector<std::vector<CellRender>>& rows) {
    std::size_t columns = 0;
    for (const auto& row : rows) columns = std::max(columns, row.size());
    std::vector<std::size_t> widths(columns, 0);
    for (const auto& row : rows)
        for (std::size_t c = 0; c < row.size(); ++c)
            widths[c] = std::max(widths[c], row[c].width());
    return widths;
}

std::vector<Annotation> remap_cell_annotations(const std::vector<Annotation>& cell_annotations,
                                               const std::vector<std::u32string>& cell_lines,
                                               const CellPlacement& placement,
                                               const std::vector<std::size_t>& final_line_offsets) {
    std::vector<Annotation> out;
    if (cell_annotations.empty()) return out;
    std::vector<std::size_t> local;
    local.reserve(cell_lines.size());
    std::size_t at = 0;
    for (const auto& line : cell_lines) {
        local.push_back(at);
        at += line.size() + 1;
    }
    for (const Annotation& ann : cell_annotations) {
        for (std::size_t i = 0; i < cell_lines.size(); ++i) {
            const std::size_t line_start = local[i];
            const std::size_t line_end = line_start + cell_lines[i].size();  // excludes newline
            if (ann.end <= line_start) break;
            if (ann.start >= line_end + 1) continue;
            std::size_t s = std::max(ann.start, line_start) - line_start;
            std::size_t e = std::min(ann.end, line_end) - line_start;
            // Fragments keep only their non-whitespace extent.
            while (s < e && is_trim_ws(cell_lines[i][s])) ++s;
            while (e > s && is_trim_ws(cell_lines[i][e - 1])) --e;
            if (s >= e) continue;
            const std::size_t final_line = placement.first_line + i;
            const std::size_t column = placement.line_columns[i];
            out.push_back({final_line_offsets[final_line] + column + s,
                           final_line_offsets[final_line] + column + e, ann.label});
        }
    }
    return out;
}

FragmentRender render_table(const Node& table, const ComputedStyle& table_style,
                            const RenderContext& ctx) {
    TableShape shape;
    ShapeCollector(ctx, shape).collect(table, table_style);

    FragmentRender out;
    if (shape.caption)
        append_fragment(out, render_fragment({shape.caption}, table_style, ctx));
    if (!shape.hoisted.empty())
        append_fragment(out, render_fragment(shape.hoisted, table_style, ctx));

    // Render every cell recursively, then size columns and rows.
    std::vector<std::vector<CellRender>> cells;
    cells.reserve(shape.rows.size());
    for (const PendingRow& row : shape.rows) {
        std::vector<CellRender> rendered;
        rendered.reserve(row.cells.size());
        for (const Node* cell : row.cells) {
            ComputedStyle cell_style = resolve_style(*cell, row.parent_style, *ctx.profile);
            if (cell_style.display == Display::none) continue;
            std::vector<const Node*> content;
            content.reserve(cell->children.size());
            for (const Node& child : cell->children) content.push_back(&child);
            FragmentRender body = render_fragment(content, cell_style, ctx,
                                                  cell_style.padding_inline,
                                                  ctx.rules->match(*cell));
            rendered.push_back({std::move(body), cell_style});
        }
        cells.push_back(std::move(rendered));
    }

    const std::vector<std::size_t> widths = compute_column_widths(cells);
    std::vector<std::size_t> column_starts(widths.size(), 0);
    for (std::size_t c = 1; c < widths.size(); ++c)
        column_starts[c] = column_starts[c - 1] + widths[c - 1] + column_separator;

    struct PlacedCell {
        const CellRender* cell;
        CellPlacement placement;
    };
    struct RowSpan {
        std::size_t first_line;
        std::size_t line_count;
        const std::vector<std::string>* labels;
    };
    std::vector<PlacedCell> placed;
    std::vector<RowSpan> row_spans;

    for (std::size_t r = 0; r < cells.size(); ++r) {
        std::size_t row_height = 0;
        for (const CellRender& cell : cells[r]) row_height = std::max(row_height, cell.height());
        if (row_height == 0) continue;
        const std::size_t base = out.lines.size();
        std::vector<CellPlacement> placements(cells[r].size());
        for (std::size_t v = 0; v < row_height; ++v) {
            std::u32string line;
            for (std::size_t c = 0; c < cells[r].size(); ++c) {
                const CellRender& cell = cells[r][c];
                const std::size_t above = blank_lines_above(cell.style, cell.height(), row_height);
                if (v < above || v >= above + cell.height()) continue;
                const std::u32string& content = cell.content.lines[v - above];
                const std::size_t pad = left_padding(cell.style, content.size(), widths[c]);
                if (v == above) placements[c].first_line = base + above;
                placements[c].line_columns.push_back(column_starts[c] + pad);
                if (content.empty()) continue;
                const std::size_t target = column_starts[c] + pad;
                if (line.size() < target) line.resize(target, U' ');
                line += content;
            }
            out.lines.push_back(std::move(line));
        }
        for (std::size_t c = 0; c < cells[r].size(); ++c)
            placed.push_back({&cells[r][c], std::move(placements[c])});
        if (!shape.rows[r].labels.empty())
            row_spans.push_back({base, row_height, &shape.rows[r].labels});
    }

    // Final offsets are known only once the grid is assembled; remap all
    // cell-local and row annotations in one pass.
    std::vector<std::size_t> offsets;
    offsets.reserve(out.lines.size() + 1);
    std::size_t at = 0;
    for (const auto& line : out.lines) {
        offsets.push_back(at);
        at += line.size() + 1;
    }
    offsets.push_back(at);

    for (const PlacedCell& pc : placed) {
        std::vector<Annotation> remapped = remap_cell_annotations(
            pc.cell->content.annotations, pc.cell->content.lines, pc.placement, offsets);
        out.annotations.insert(out.annotations.end(), remapped.begin(), remapped.end());
    }
    for (const RowSpan& span : row_spans) {
        for (std::size_t i = span.first_line; i < span.first_line + span.line_count; ++i) {
            const std::u32string& line = out.lines[i];
            std::size_t s = 0, e = line.size();
            while (s < e && is_trim_ws(line[s])) ++s;
            while (e > s && is_trim_ws(line[e - 1])) --e;
            if (s >= e) continue;
            for (const std::string& label : *span.labels)
                out.annotations.push_back({offsets[i] + s, offsets[i] + e, label});
        }
    }
    sort_annotations(out.annotations);
    return out;
}

}  // namespace textweave
