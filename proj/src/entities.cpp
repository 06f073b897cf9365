#include <cstdint>
#include <string_view>
#include <unordered_map>

#include "textweave/dom.hpp"
#include "textweave/utf8.hpp"

namespace textweave {

namespace {

// Named character references: the full Latin-1 set plus the general
// punctuation, symbol and Greek names that show up in real pages.
const std::unordered_map<std::string_view, char32_t>& entity_table() {
    static const std::unordered_map<std::string_view, char32_t> table = {
        {"amp", U'&'}, {"lt", U'<'}, {"gt", U'>'}, {"quot", U'"'}, {"apos", U'\''},
        {"nbsp", U' '}, {"iexcl", U'¡'}, {"cent", U'¢'}, {"pound", U'£'},
        {"curren", U'¤'}, {"yen", U'¥'}, {"brvbar", U'¦'}, {"sect", U'§'},
        {"uml", U'¨'}, {"copy", U'©'}, {"ordf", U'ª'}, {"laquo", U'«'},
        {"not", U'¬'}, {"shy", U'­'}, {"reg", U'®'}, {"macr", U'¯'},
        {"deg", U'°'}, {"plusmn", U'±'}, {"sup2", U'²'}, {"sup3", U'³'},
        {"acute", U'´'}, {"micro", U'µ'}, {"para", U'¶'}, {"middot", U'·'},
        {"cedil", U'¸'}, {"sup1", U'¹'}, {"ordm", U'º'}, {"raquo", U'»'},
        {"frac14", U'¼'}, {"frac12", U'½'}, {"frac34", U'¾'}, {"iquest", U'¿'},
        {"Agrave", U'À'}, {"Aacute", U'Á'}, {"Acirc", U'Â'}, {"Atilde", U'Ã'},
        {"Auml", U'Ä'}, {"Aring", U'Å'}, {"AElig", U'Æ'}, {"Ccedil", U'Ç'},
        {"Egrave", U'È'}, {"Eacute", U'É'}, {"Ecirc", U'Ê'}, {"Euml", U'Ë'},
        {"Igrave", U'Ì'}, {"Iacute", U'Í'}, {"Icirc", U'Î'}, {"Iuml", U'Ï'},
        {"ETH", U'Ð'}, {"Ntilde", U'Ñ'}, {"Ograve", U'Ò'}, {"Oacute", U'Ó'},
        {"Ocirc", U'Ô'}, {"Otilde", U'Õ'}, {"Ouml", U'Ö'}, {"times", U'×'},
        {"Oslash", U'Ø'}, {"Ugrave", U'Ù'}, {"Uacute", U'Ú'}, {"Ucirc", U'Û'},
        {"Uuml", U'Ü'}, {"Yacute", U'Ý'}, {"THORN", U'Þ'}, {"szlig", U'ß'},
        {"agrave", U'à'}, {"aacute", U'á'}, {"acirc", U'â'}, {"atilde", U'ã'},
        {"auml", U'ä'}, {"aring", U'å'}, {"aelig", U'æ'}, {"ccedil", U'ç'},
        {"egrave", U'è'}, {"eacute", U'é'}, {"ecirc", U'ê'}, {"euml", U'ë'},
        {"igrave", U'ì'}, {"iacute", U'í'}, {"icirc", U'î'}, {"iuml", U'ï'},
        {"eth", U'ð'}, {"ntilde", U'ñ'}, {"ograve", U'ò'}, {"oacute", U'ó'},
        {"ocirc", U'ô'}, {"otilde", U'õ'}, {"ouml", U'ö'}, {"divide", U'÷'},
        {"oslash", U'ø'}, {"ugrave", U'ù'}, {"uacute", U'ú'}, {"ucirc", U'û'},
        {"uuml", U'ü'}, {"yacute", U'ý'}, {"thorn", U'þ'}, {"yuml", U'ÿ'},
        {"OElig", U'Œ'}, {"oelig", U'œ'}, {"Scaron", U'Š'}, {"scaron", U'š'},
        {"Yuml", U'Ÿ'}, {"fnof", U'ƒ'}, {"circ", U'ˆ'}, {"tilde", U'˜'},
        {"ensp", U' '}, {"emsp", U' '}, {"thinsp", U' '}, {"zwnj", U'‌'},
        {"zwj", U'‍'}, {"lrm", U'‎'}, {"rlm", U'‏'},
        {"ndash", U'–'}, {"mdash", U'—'}, {"lsquo", U'‘'}, {"rsquo", U'’'},
        {"sbquo", U'‚'}, {"ldquo", U'“'}, {"rdquo", U'”'}, {"bdquo", U'„'},
        {"dagger", U'†'}, {"Dagger", U'‡'}, {"bull", U'•'}, {"hellip", U'…'},
        {"permil", U'‰'}, {"prime", U'′'}, {"Prime", U'″'}, {"lsaquo", U'‹'},
        {"rsaquo", U'›'}, {"oline", U'‾'}, {"frasl", U'⁄'}, {"euro", U'€'},
        {"trade", U'™'}, {"alefsym", U'ℵ'},
        {"larr", U'←'}, {"uarr", U'↑'}, {"rarr", U'→'}, {"darr", U'↓'},
        {"harr", U'↔'}, {"crarr", U'↵'},
        {"forall", U'∀'}, {"part", U'∂'}, {"exist", U'∃'}, {"empty", U'∅'},
        {"nabla", U'∇'}, {"isin", U'∈'}, {"notin", U'∉'}, {"ni", U'∋'},
        {"prod", U'∏'}, {"sum", U'∑'}, {"minus", U'−'}, {"lowast", U'∗'},
        {"radic", U'√'}, {"prop", U'∝'}, {"infin", U'∞'}, {"ang", U'∠'},
        {"and", U'∧'}, {"or", U'∨'}, {"cap", U'∩'}, {"cup", U'∪'},
        {"int", U'∫'}, {"there4", U'∴'}, {"sim", U'∼'}, {"cong", U'≅'},
        {"asymp", U'≈'}, {"ne", U'≠'}, {"equiv", U'≡'}, {"le", U'≤'},
        {"ge", U'≥'}, {"sub", U'⊂'}, {"sup", U'⊃'}, {"nsub", U'⊄'},
        {"sube", U'⊆'}, {"supe", U'⊇'}, {"oplus", U'⊕'}, {"otimes", U'⊗'},
        {"perp", U'⊥'}, {"sdot", U'⋅'},
        {"Alpha", U'Α'}, {"Beta", U'Β'}, {"Gamma", U'Γ'}, {"Delta", U'Δ'},
        {"Epsilon", U'Ε'}, {"Zeta", U'Ζ'}, {"Eta", U'Η'}, {"Theta", U'Θ'},
        {"Iota", U'Ι'}, {"Kappa", U'Κ'}, {"Lambda", U'Λ'}, {"Mu", U'Μ'},
        {"Nu", U'Ν'}, {"Xi", U'Ξ'}, {"Omicron", U'Ο'}, {"Pi", U'Π'},
        {"Rho", U'Ρ'}, {"Sigma", U'Σ'}, {"Tau", U'Τ'}, {"Upsilon", U'Υ'},
        {"Phi", U'Φ'}, {"Chi", U'Χ'}, {"Psi", U'Ψ'}, {"Omega", U'Ω'},
        {"alpha", U'α'}, {"beta", U'β'}, {"gamma", U'γ'}, {"delta", U'δ'},
        {"epsilon", U'ε'}, {"zeta", U'ζ'}, {"eta", U'η'}, {"theta", U'θ'},
        {"iota", U'ι'}, {"kappa", U'κ'}, {"lambda", U'λ'}, {"mu", U'μ'},
        {"nu", U'ν'}, {"xi", U'ξ'}, {"omicron", U'ο'}, {"pi", U'π'},
        {"rho", U'ρ'}, {"sigmaf", U'ς'}, {"sigma", U'σ'}, {"tau", U'τ'},
        {"upsilon", U'υ'}, {"phi", U'φ'}, {"chi", U'χ'}, {"psi", U'ψ'},
        {"omega", U'ω'}, {"piv", U'ϖ'},
        {"loz", U'◊'}, {"spades", U'♠'}, {"clubs", U'♣'}, {"hearts", U'♥'},
        {"diams", U'♦'},
    };
    return table;
}

bool is_entity_name_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

// Parses a reference starting at s[pos] == '&'. On success appends the
// decoded character and returns the index just past the ';'.
std::size_t try_decode_reference(std::string_view s, std::size_t pos, std::string& out) {
    const std::size_t n = s.size();
    std::size_t i = pos + 1;
    if (i >= n) return 0;
    if (s[i] == '#') {
        ++i;
        bool hex = i < n && (s[i] == 'x' || s[i] == 'X');
        if (hex) ++i;
        std::uint32_t value = 0;
        std::size_t digits = 0;
        while (i < n && digits < 8) {
            const char c = s[i];
            int d;
            if (c >= '0' && c <= '9') d = c - '0';
            else if (hex && c >= 'a' && c <= 'f') d = c - 'a' + 10;
            else if (hex && c >= 'A' && c <= 'F') d = c - 'A' + 10;
            else break;
            value = value * (hex ? 16 : 10) + static_cast<std::uint32_t>(d);
            ++i;
            ++digits;
        }
        if (digits == 0 || i >= n || s[i] != ';') return 0;
        if (value == 0) value = 0xFFFD;
        utf8::append(out, static_cast<char32_t>(value));
        return i + 1;
    }
    std::size_t start = i;
    while (i < n && i - start < 32 && is_entity_name_char(s[i])) ++i;
    if (i == start || i >= n || s[i] != ';') return 0;
    const auto& table = entity_table();
    auto it = table.find(s.substr(start, i - start));
    if (it == table.end()) return 0;
    utf8::append(out, it->second);
    return i + 1;
}

}  // namespace

std::string decode_entities(std::string_view text) {
    std::size_t amp = text.find('&');
    if (amp == std::string_view::npos) return std::string(text);
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '&') {
            std::size_t next = text.find('&', i);
            if (next == std::string_view::npos) next = text.size();
            out.append(text, i, next - i);
            i = next;
            continue;
        }
        const std::size_t advanced = try_decode_reference(text, i, out);
        if (advanced == 0) {
            out.push_back('&');
            ++i;
        } else {
            i = advanced;
        }
    }
    return out;
}

}  // namespace textweave
