#include "cevkit/unicode.hpp"

#include <array>
#include <cstdint>
#include <map>

namespace cevkit::unicode {

namespace {
constexpr char32_t kReplacement = 0xFFFD;
}

std::u32string decode_utf8(std::string_view s) {
    std::u32string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        const unsigned char b0 = static_cast<unsigned char>(s[i]);
        char32_t cp = 0;
        std::size_t len = 0;
        if (b0 < 0x80) {
            cp = b0;
            len = 1;
        } else if ((b0 & 0xE0) == 0xC0) {
            cp = b0 & 0x1F;
            len = 2;
        } else if ((b0 & 0xF0) == 0xE0) {
            cp = b0 & 0x0F;
            len = 3;
        } else if ((b0 & 0xF8) == 0xF0) {
            cp = b0 & 0x07;
            len = 4;
        } else {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        if (i + len > s.size()) {
            out.push_back(kReplacement);
            break;
        }
        bool ok = true;
        for (std::size_t k = 1; k < len; ++k) {
            const unsigned char b = static_cast<unsigned char>(s[i + k]);
            if ((b & 0xC0) != 0x80) {
                ok = false;
                break;
            }
            cp = (cp << 6) | (b & 0x3F);
        }
        if (!ok || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF) ||
            (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
            (len == 4 && cp < 0x10000)) {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

std::string encode_utf8(char32_t c) {
    std::string out;
    if (c > 0x10FFFF || (c >= 0xD800 && c <= 0xDFFF)) c = kReplacement;
    if (c < 0x80) {
        out.push_back(static_cast<char>(c));
    } else if (c < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (c >> 6)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else if (c < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (c >> 12)));
        out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (c >> 18)));
        out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
    return out;
}

std::string encode_utf8(std::u32string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char32_t c : s) out += encode_utf8(c);
    return out;
}

char32_t to_lower(char32_t c) {
    if (c >= U'A' && c <= U'Z') return c + 0x20;
    // Latin-1 uppercase, skipping the multiplication sign.
    if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 0x20;
    // Latin Extended-A: alternating upper/lower pairs.
    if ((c >= 0x100 && c <= 0x137) || (c >= 0x14A && c <= 0x177)) {
        return (c % 2 == 0) ? c + 1 : c;
    }
    if (c >= 0x139 && c <= 0x148) {
        return (c % 2 == 1) ? c + 1 : c;
    }
    if (c == 0x178) return 0xFF;
    // Greek capitals.
    if (c >= 0x391 && c <= 0x3A9 && c != 0x3A2) return c + 0x20;
    // Cyrillic capitals.
    if (c >= 0x410 && c <= 0x42F) return c + 0x20;
    if (c >= 0x400 && c <= 0x40F) return c + 0x50;
    return c;
}

bool is_space(char32_t c) {
    switch (c) {
        case U' ':
        case U'\t':
        case U'\n':
        case U'\r':
        case U'\f':
        case U'\v':
        case 0x00A0:  // no-break space
        case 0x2000:
        case 0x2001:
        case 0x2002:
        case 0x2003:
        case 0x2004:
        case 0x2005:
        case 0x2006:
        case 0x2007:
        case 0x2008:
        case 0x2009:
        case 0x200A:
        case 0x202F:
        case 0x3000:
            return true;
        default:
            return false;
    }
}

namespace {

// (base, combining mark) -> precomposed. Covers the Latin vowel and
// consonant pairs common in western-European print.
const std::map<std::pair<char32_t, char32_t>, char32_t>& compose_table() {
    static const std::map<std::pair<char32_t, char32_t>, char32_t> table = {
        {{U'A', 0x300}, 0xC0}, {{U'A', 0x301}, 0xC1}, {{U'A', 0x302}, 0xC2},
        {{U'A', 0x303}, 0xC3}, {{U'A', 0x308}, 0xC4}, {{U'A', 0x30A}, 0xC5},
        {{U'C', 0x327}, 0xC7}, {{U'E', 0x300}, 0xC8}, {{U'E', 0x301}, 0xC9},
        {{U'E', 0x302}, 0xCA}, {{U'E', 0x308}, 0xCB}, {{U'I', 0x300}, 0xCC},
        {{U'I', 0x301}, 0xCD}, {{U'I', 0x302}, 0xCE}, {{U'I', 0x308}, 0xCF},
        {{U'N', 0x303}, 0xD1}, {{U'O', 0x300}, 0xD2}, {{U'O', 0x301}, 0xD3},
        {{U'O', 0x302}, 0xD4}, {{U'O', 0x303}, 0xD5}, {{U'O', 0x308}, 0xD6},
        {{U'U', 0x300}, 0xD9}, {{U'U', 0x301}, 0xDA}, {{U'U', 0x302}, 0xDB},
        {{U'U', 0x308}, 0xDC}, {{U'Y', 0x301}, 0xDD},
        {{U'a', 0x300}, 0xE0}, {{U'a', 0x301}, 0xE1}, {{U'a', 0x302}, 0xE2},
        {{U'a', 0x303}, 0xE3}, {{U'a', 0x308}, 0xE4}, {{U'a', 0x30A}, 0xE5},
        {{U'c', 0x327}, 0xE7}, {{U'e', 0x300}, 0xE8}, {{U'e', 0x301}, 0xE9},
        {{U'e', 0x302}, 0xEA}, {{U'e', 0x308}, 0xEB}, {{U'i', 0x300}, 0xEC},
        {{U'i', 0x301}, 0xED}, {{U'i', 0x302}, 0xEE}, {{U'i', 0x308}, 0xEF},
        {{U'n', 0x303}, 0xF1}, {{U'o', 0x300}, 0xF2}, {{U'o', 0x301}, 0xF3},
        {{U'o', 0x302}, 0xF4}, {{U'o', 0x303}, 0xF5}, {{U'o', 0x308}, 0xF6},
        {{U'u', 0x300}, 0xF9}, {{U'u', 0x301}, 0xFA}, {{U'u', 0x302}, 0xFB},
        {{U'u', 0x308}, 0xFC}, {{U'y', 0x301}, 0xFD}, {{U'y', 0x308}, 0xFF},
    };
    return table;
}

}  // namespace

std::u32string compose_canonical(std::u32string_view s) {
    const auto& table = compose_table();
    std::u32string out;
    out.reserve(s.size());
    for (char32_t c : s) {
        if (!out.empty()) {
            auto it = table.find({out.back(), c});
            if (it != table.end()) {
                out.back() = it->second;
                continue;
            }
        }
        out.push_back(c);
    }
    return out;
}

}  // namespace cevkit::unicode
