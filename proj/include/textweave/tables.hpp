#pragma once

#include <cstddef>
#include <vector>

#include "textweave/flow.hpp"

namespace textweave {

/// One rendered table cell: a recursive fragment render plus the cell's
/// resolved style (alignment fields drive padding).
struct CellRender {
    FragmentRender content;
    ComputedStyle style;

    std::size_t width() const { return content.width(); }
    std::size_t height() const { return content.lines.size(); }
};

/// Where a cell's lines landed in the assembled table block.
struct CellPlacement {
    std::size_t first_line = 0;             // table-local index of the cell's first content line
    std::vector<std::size_t> line_columns;  // start column of each cell line, after alignment
};

/// column_widths[c] = max width of column c over all rows; rows may be
/// ragged (missing cells contribute width 0).
std::vector<std::size_t> compute_column_widths(const std::vector<std::vector<CellRender>>& rows);

/// Remaps cell-local annotation spans into table-local flat offsets.
/// Spans covering several cell lines split into one annotation per line;
/// fragments are trimmed to their non-whitespace extent and dropped when
/// nothing remains.
std::vector<Annotation> remap_cell_annotations(const std::vector<Annotation>& cell_annotations,
                                               const std::vector<std::u32string>& cell_lines,
                                               const CellPlacement& placement,
                                               const std::vector<std::size_t>& final_line_offsets);

/// Lays out a `table` subtree (nested tables included) into aligned
/// monospace lines. Cells pad to their column width per horizontal_align
/// and to their row height per vertical_align; adjacent cells are joined
/// with two spaces. A caption and any loose non-row content render as
/// block lines above the grid. Annotations are table-local.
FragmentRender render_table(const Node& table, const ComputedStyle& table_style,
                            const RenderContext& ctx);

}  // namespace textweave
