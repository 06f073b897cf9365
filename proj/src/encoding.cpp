#include <algorithm>
#include <array>
#include <cctype>
#include <string>
#include <string_view>

#include "textweave/dom.hpp"
#include "textweave/utf8.hpp"

namespace textweave {

namespace {

std::string normalize_label(std::string_view label) {
    std::string out;
    out.reserve(label.size());
    for (char c : label) {
        if (c == '-' || c == '_' || c == ' ' || c == '\t') continue;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

// windows-1252 maps 0x80..0x9F to printable characters; the rest is Latin-1.
constexpr std::array<char32_t, 32> cp1252_high = {
    0x20AC, 0x0081, 0x201A, 0x0192, 0x201E, 0x2026, 0x2020, 0x2021,
    0x02C6, 0x2030, 0x0160, 0x2039, 0x0152, 0x008D, 0x017D, 0x008F,
    0x0090, 0x2018, 0x2019, 0x201C, 0x201D, 0x2022, 0x2013, 0x2014,
    0x02DC, 0x2122, 0x0161, 0x203A, 0x0153, 0x009D, 0x017E, 0x009F,
};

std::string decode_latin1(std::string_view bytes, bool cp1252) {
    std::string out;
    out.reserve(bytes.size());
    for (char c : bytes) {
        const unsigned char b = static_cast<unsigned char>(c);
        char32_t cp = b;
        if (cp1252 && b >= 0x80 && b <= 0x9F) cp = cp1252_high[b - 0x80];
        utf8::append(out, cp);
    }
    return out;
}

std::string decode_ascii(std::string_view bytes) {
    std::string out;
    out.reserve(bytes.size());
    for (char c : bytes) {
        const unsigned char b = static_cast<unsigned char>(c);
        if (b < 0x80) out.push_back(c);
        else utf8::append(out, utf8::replacement_char);
    }
    return out;
}

std::string decode_utf16(std::string_view bytes, bool little_endian) {
    std::string out;
    out.reserve(bytes.size());
    std::size_t i = 0;
    auto unit = [&](std::size_t at) -> char32_t {
        const unsigned char a = static_cast<unsigned char>(bytes[at]);
        const unsigned char b = static_cast<unsigned char>(bytes[at + 1]);
        return little_endian ? static_cast<char32_t>(a | (b << 8))
                             : static_cast<char32_t>((a << 8) | b);
    };
    while (i + 1 < bytes.size()) {
        char32_t u = unit(i);
        i += 2;
        if (u >= 0xD800 && u <= 0xDBFF) {
            if (i + 1 < bytes.size()) {
                const char32_t lo = unit(i);
                if (lo >= 0xDC00 && lo <= 0xDFFF) {
                    i += 2;
                    u = 0x10000 + ((u - 0xD800) << 10) + (lo - 0xDC00);
                    utf8::append(out, u);
                    continue;
                }
            }
            utf8::append(out, utf8::replacement_char);
            continue;
        }
        if (u >= 0xDC00 && u <= 0xDFFF) {
            utf8::append(out, utf8::replacement_char);
            continue;
        }
        utf8::append(out, u);
    }
    if (i < bytes.size()) utf8::append(out, utf8::replacement_char);  // odd trailing byte
    return out;
}

std::string decode_utf8_lossy(std::string_view bytes) {
    return utf8::encode(utf8::decode(bytes));
}

std::string decode_with_label(std::string_view bytes, const std::string& normalized) {
    if (normalized == "utf8" || normalized == "unicode11utf8" || normalized == "unicode20utf8")
        return decode_utf8_lossy(bytes);
    if (normalized == "iso88591" || normalized == "latin1" || normalized == "l1" ||
        normalized == "iso8859" || normalized == "8859")
        return decode_latin1(bytes, /*cp1252=*/false);
    if (normalized == "windows1252" || normalized == "cp1252" || normalized == "xcp1252" ||
        normalized == "1252")
        return decode_latin1(bytes, /*cp1252=*/true);
    if (normalized == "usascii" || normalized == "ascii" || normalized == "ansix3.41968")
        return decode_ascii(bytes);
    if (normalized == "utf16le" || normalized == "utf16")
        return decode_utf16(bytes, /*little_endian=*/true);
    if (normalized == "utf16be")
        return decode_utf16(bytes, /*little_endian=*/false);
    return decode_utf8_lossy(bytes);  // unknown labels fall back to UTF-8
}

// Scans the head of the document for a charset declaration, covering both
// <meta charset="..."> and <meta http-equiv content="...; charset=...">.
std::string sniff_meta_charset(std::string_view head) {
    std::string lower;
    lower.reserve(head.size());
    for (char c : head) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    std::size_t pos = 0;
    while ((pos = lower.find("charset", pos)) != std::string::npos) {
        std::size_t i = pos + 7;
        while (i < lower.size() && std::isspace(static_cast<unsigned char>(lower[i]))) ++i;
        if (i >= lower.size() || lower[i] != '=') {
            pos += 7;
            continue;
        }
        ++i;
        while (i < lower.size() && std::isspace(static_cast<unsigned char>(lower[i]))) ++i;
        if (i < lower.size() && (lower[i] == '"' || lower[i] == '\'')) ++i;
        std::size_t start = i;
        while (i < lower.size()) {
            const char c = lower[i];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.' ||
                c == ':') {
                ++i;
                continue;
            }
            break;
        }
        if (i > start) return lower.substr(start, i - start);
        pos += 7;
    }
    return {};
}

std::string strip_leading_bom_char(std::string u8) {
    if (u8.size() >= 3 && static_cast<unsigned char>(u8[0]) == 0xEF &&
        static_cast<unsigned char>(u8[1]) == 0xBB && static_cast<unsigned char>(u8[2]) == 0xBF)
        return u8.substr(3);
    return u8;
}

}  // namespace

std::string decode_document_bytes(std::string_view bytes,
                                  const std::optional<std::string>& encoding_hint) {
    if (encoding_hint && !encoding_hint->empty())
        return strip_leading_bom_char(decode_with_label(bytes, normalize_label(*encoding_hint)));

    if (bytes.size() >= 2) {
        const unsigned char b0 = static_cast<unsigned char>(bytes[0]);
        const unsigned char b1 = static_cast<unsigned char>(bytes[1]);
        if (b0 == 0xFF && b1 == 0xFE) return decode_utf16(bytes.substr(2), true);
        if (b0 == 0xFE && b1 == 0xFF) return decode_utf16(bytes.substr(2), false);
    }

    const std::string sniffed = sniff_meta_charset(bytes.substr(0, std::min<std::size_t>(bytes.size(), 1024)));
    if (!sniffed.empty()) {
        const std::string label = normalize_label(sniffed);
        // A UTF-16 meta label in an ASCII-compatible byte stream is a lie.
        if (label != "utf16" && label != "utf16le" && label != "utf16be")
            return strip_leading_bom_char(decode_with_label(bytes, label));
    }
    return strip_leading_bom_char(decode_utf8_lossy(bytes));
}

}  // namespace textweave
