#include "textweave/style.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

#include <nlohmann/json.hpp>

namespace textweave {

namespace {

constexpr int max_length_lines = 1000;

std::string_view trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return out;
}

std::optional<Display> parse_display(std::string_view v) {
    if (v == "block") return Display::block;
    if (v == "inline") return Display::inline_;
    if (v == "none") return Display::none;
    if (v == "table") return Display::table;
    if (v == "table-row") return Display::table_row;
    if (v == "table-cell") return Display::table_cell;
    return std::nullopt;
}

std::optional<WhitespaceMode> parse_whitespace(std::string_view v) {
    if (v == "normal") return WhitespaceMode::normal;
    if (v == "pre") return WhitespaceMode::pre;
    return std::nullopt;
}

std::optional<HorizontalAlign> parse_halign(std::string_view v) {
    if (v == "left") return HorizontalAlign::left;
    if (v == "center") return HorizontalAlign::center;
    if (v == "right") return HorizontalAlign::right;
    return std::nullopt;
}

std::optional<VerticalAlign> parse_valign(std::string_view v) {
    if (v == "top") return VerticalAlign::top;
    if (v == "middle") return VerticalAlign::middle;
    if (v == "bottom") return VerticalAlign::bottom;
    return std::nullopt;
}

void apply_declaration(ComputedStyle& st, std::string_view prop, std::string_view value) {
    if (prop == "display") {
        if (auto d = parse_display(value)) st.display = *d;
    } else if (prop == "white-space") {
        if (auto w = parse_whitespace(value)) st.whitespace = *w;
    } else if (prop == "margin-top") {
        st.margin_before = parse_length_lines(value);
    } else if (prop == "margin-bottom") {
        st.margin_after = parse_length_lines(value);
    } else if (prop == "padding-left") {
        st.padding_inline = parse_length_lines(value);
    } else if (prop == "vertical-align") {
        if (auto v = parse_valign(value)) st.vertical_align = *v;
    } else if (prop == "text-align") {
        if (auto h = parse_halign(value)) st.horizontal_align = *h;
    }
}

bool supported_property(std::string_view prop) {
    return prop == "display" || prop == "white-space" || prop == "margin-top" ||
           prop == "margin-bottom" || prop == "padding-left" || prop == "vertical-align" ||
           prop == "text-align";
}

PartialStyle block(int margin_before, int margin_after, int padding = 0) {
    PartialStyle p;
    p.display = Display::block;
    p.margin_before = margin_before;
    p.margin_after = margin_after;
    if (padding) p.padding_inline = padding;
    return p;
}

}  // namespace

void PartialStyle::merge_into(ComputedStyle& out) const {
    if (display) out.display = *display;
    if (whitespace) out.whitespace = *whitespace;
    if (margin_before) out.margin_before = *margin_before;
    if (margin_after) out.margin_after = *margin_after;
    if (padding_inline) out.padding_inline = *padding_inline;
    if (horizontal_align) out.horizontal_align = *horizontal_align;
    if (vertical_align) out.vertical_align = *vertical_align;
    if (list_bullet) out.list_bullet = *list_bullet;
}

void PartialStyle::merge_over(PartialStyle& out) const {
    if (display) out.display = display;
    if (whitespace) out.whitespace = whitespace;
    if (margin_before) out.margin_before = margin_before;
    if (margin_after) out.margin_after = margin_after;
    if (padding_inline) out.padding_inline = padding_inline;
    if (horizontal_align) out.horizontal_align = horizontal_align;
    if (vertical_align) out.vertical_align = vertical_align;
    if (list_bullet) out.list_bullet = list_bullet;
}

const PartialStyle& StyleProfile::lookup(const std::string& tag) const {
    auto it = defaults.find(tag);
    return it == defaults.end() ? fallback : it->second;
}

StyleProfile default_profile() {
    StyleProfile profile;
    auto& d = profile.defaults;

    for (const char* tag : {"p", "pre", "blockquote", "h1", "h2", "h3", "h4", "h5", "h6", "figure"})
        d[tag] = block(1, 1);
    for (const char* tag : {"div", "section", "article", "header", "footer", "main", "aside",
                            "nav", "ul", "ol", "li", "dl", "dt", "dd", "caption"})
        d[tag] = block(0, 0);

    d["blockquote"].padding_inline = 2;
    d["ul"].padding_inline = 2;
    d["ol"].padding_inline = 2;
    d["li"].list_bullet = "* ";
    d["pre"].whitespace = WhitespaceMode::pre;

    d["table"].display = Display::table;
    d["tr"].display = Display::table_row;
    d["td"].display = Display::table_cell;
    d["th"].display = Display::table_cell;
    d["th"].horizontal_align = HorizontalAlign::center;

    for (const char* tag : {"script", "style", "head", "meta", "link", "template"}) {
        PartialStyle none;
        none.display = Display::none;
        d[tag] = none;
    }

    profile.fallback.display = Display::inline_;
    return profile;
}

ComputedStyle resolve_style(const Node& element, const ComputedStyle& parent,
                            const StyleProfile& profile) {
    ComputedStyle st;
    // Inheritable fields seed from the parent; everything else resets.
    st.whitespace = parent.whitespace;
    st.horizontal_align = parent.horizontal_align;
    st.vertical_align = parent.vertical_align;

    profile.lookup(element.tag).merge_into(st);

    if (const std::string* align = element.find_attribute("align")) {
        if (auto h = parse_halign(lower(trim(*align)))) st.horizontal_align = *h;
    }
    if (const std::string* valign = element.find_attribute("valign")) {
        if (auto v = parse_valign(lower(trim(*valign)))) st.vertical_align = *v;
    }
    if (element.find_attribute("hidden")) st.display = Display::none;

    if (const std::string* inline_style = element.find_attribute("style")) {
        for (const auto& [prop, value] : parse_inline_style(*inline_style))
            apply_declaration(st, prop, value);
    }
    return st;
}

std::vector<std::pair<std::string, std::string>> parse_inline_style(std::string_view value) {
    std::vector<std::pair<std::string, std::string>> out;
    std::size_t pos = 0;
    while (pos <= value.size()) {
        std::size_t semi = value.find(';', pos);
        if (semi == std::string_view::npos) semi = value.size();
        std::string_view decl = value.substr(pos, semi - pos);
        pos = semi + 1;
        std::size_t colon = decl.find(':');
        if (colon == std::string_view::npos) continue;
        std::string prop = lower(trim(decl.substr(0, colon)));
        std::string val = lower(trim(decl.substr(colon + 1)));
        if (prop.empty() || !supported_property(prop)) continue;
        out.emplace_back(std::move(prop), std::move(val));
    }
    return out;
}

int parse_length_lines(std::string_view value) {
    const std::string_view trimmed = trim(value);
    if (trimmed.empty()) return 0;
    std::string buf(trimmed);
    char* end = nullptr;
    const double number = std::strtod(buf.c_str(), &end);
    if (end == buf.c_str()) return 0;
    std::string_view unit = trim(std::string_view(end));
    if (!unit.empty() && unit != "em") return 0;
    if (!std::isfinite(number) || number <= 0) return 0;
    const double rounded = std::floor(number + 0.5);
    if (rounded >= max_length_lines) return max_length_lines;
    return static_cast<int>(rounded);
}

std::string ordered_list_bullet(int ordinal) {
    return std::to_string(ordinal) + ". ";
}

void apply_profile_overrides(StyleProfile& profile, std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ProfileError(std::string("profile: ") + e.what());
    }
    if (!doc.is_object()) throw ProfileError("profile: top level must be a JSON object");

    for (const auto& [tag, fields] : doc.items()) {
        if (tag.empty()) throw ProfileError("profile: empty tag name");
        if (!fields.is_object())
            throw ProfileError("profile: entry for '" + tag + "' must be an object");
        PartialStyle partial;
        for (const auto& [key, value] : fields.items()) {
            auto keyword = [&]() -> std::string {
                if (!value.is_string())
                    throw ProfileError("profile: '" + tag + "." + key + "' must be a string");
                return lower(trim(value.get<std::string>()));
            };
            auto count = [&]() -> int {
                if (value.is_number_unsigned() || value.is_number_integer()) {
                    const auto n = value.get<long long>();
                    if (n < 0) throw ProfileError("profile: '" + tag + "." + key + "' must be >= 0");
                    return static_cast<int>(std::min<long long>(n, max_length_lines));
                }
                throw ProfileError("profile: '" + tag + "." + key + "' must be an integer");
            };
            if (key == "display") {
                auto d = parse_display(keyword());
                if (!d) throw ProfileError("profile: bad display for '" + tag + "'");
                partial.display = d;
            } else if (key == "whitespace") {
                auto w = parse_whitespace(keyword());
                if (!w) throw ProfileError("profile: bad whitespace for '" + tag + "'");
                partial.whitespace = w;
            } else if (key == "margin-before") {
                partial.margin_before = count();
            } else if (key == "margin-after") {
                partial.margin_after = count();
            } else if (key == "padding-inline") {
                partial.padding_inline = count();
            } else if (key == "horizontal-align") {
                auto h = parse_halign(keyword());
                if (!h) throw ProfileError("profile: bad horizontal-align for '" + tag + "'");
                partial.horizontal_align = h;
            } else if (key == "vertical-align") {
                auto v = parse_valign(keyword());
                if (!v) throw ProfileError("profile: bad vertical-align for '" + tag + "'");
                partial.vertical_align = v;
            } else if (key == "list-bullet") {
                if (!value.is_string())
                    throw ProfileError("profile: '" + tag + ".list-bullet' must be a string");
                partial.list_bullet = value.get<std::string>();
            } else {
                throw ProfileError("profile: unknown field '" + key + "' for '" + tag + "'");
            }
        }
        const std::string tag_lower = lower(tag);
        auto it = profile.defaults.find(tag_lower);
        if (it == profile.defaults.end()) {
            PartialStyle base = profile.fallback;
            partial.merge_over(base);
            profile.defaults.emplace(tag_lower, base);
        } else {
            partial.merge_over(it->second);
        }
    }
}

}  // namespace textweave
