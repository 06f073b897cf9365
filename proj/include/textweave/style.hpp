#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "textweave/dom.hpp"

namespace textweave {

enum class Display { block, inline_, none, table, table_row, table_cell };
enum class WhitespaceMode { normal, pre };
enum class HorizontalAlign { left, center, right };
enum class VerticalAlign { top, middle, bottom };

/// Fully resolved rendering directives for one element.
struct ComputedStyle {
    Display display = Display::inline_;
    WhitespaceMode whitespace = WhitespaceMode::normal;
    int margin_before = 0;   // blank lines required above the block
    int margin_after = 0;    // blank lines required below the block
    int padding_inline = 0;  // leading character columns of indentation
    HorizontalAlign horizontal_align = HorizontalAlign::left;
    VerticalAlign vertical_align = VerticalAlign::top;
    std::optional<std::string> list_bullet;
};

/// A sparse style: only the set fields take effect when merged.
struct PartialStyle {
    std::optional<Display> display;
    std::optional<WhitespaceMode> whitespace;
    std::optional<int> margin_before;
    std::optional<int> margin_after;
    std::optional<int> padding_inline;
    std::optional<HorizontalAlign> horizontal_align;
    std::optional<VerticalAlign> vertical_align;
    std::optional<std::string> list_bullet;

    void merge_into(ComputedStyle& out) const;
    void merge_over(PartialStyle& out) const;
};

/// Per-tag defaults plus a fallback for unknown tags; lookup is total.
struct StyleProfile {
    std::unordered_map<std::string, PartialStyle> defaults;
    PartialStyle fallback;

    const PartialStyle& lookup(const std::string& tag) const;
};

struct ProfileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The built-in tag semantics (block/inline/none, margins, table roles,
/// list bullets, pre whitespace).
StyleProfile default_profile();

/// Merges overrides from a JSON object {tag: {field: value}} into `profile`.
/// Field names are the ComputedStyle fields in kebab-case. Throws
/// ProfileError on malformed JSON or invalid field values.
void apply_profile_overrides(StyleProfile& profile, std::string_view json_text);

/// Resolves an element against profile defaults, inherited fields
/// (whitespace and alignment inherit), HTML attributes (align/valign/hidden)
/// and supported inline `style` declarations, in that order of precedence.
ComputedStyle resolve_style(const Node& element, const ComputedStyle& parent,
                            const StyleProfile& profile);

/// Splits an inline style attribute into supported (property, value) pairs.
/// Property names and values are trimmed and lowercased; unsupported or
/// malformed declarations are silently dropped.
std::vector<std::pair<std::string, std::string>> parse_inline_style(std::string_view value);

/// Parses `<number>` or `<number>em` into whole lines/columns, rounding
/// half away from zero and clamping to [0, 1000]. Anything else is 0.
int parse_length_lines(std::string_view value);

/// "3. " for ordinal 3 — the marker for ordered list items.
std::string ordered_list_bullet(int ordinal);

}  // namespace textweave
