#pragma once

#include <string>
#include <string_view>

namespace cevkit::unicode {

// UTF-8 <-> UTF-32. Invalid byte sequences decode to U+FFFD.
std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);
std::string encode_utf8(char32_t c);

// Simple one-to-one lowercase mapping covering ASCII, Latin-1,
// Latin Extended-A, Greek and Cyrillic basic blocks. Idempotent.
char32_t to_lower(char32_t c);

bool is_space(char32_t c);

// Pairwise canonical composition over a fixed table of Latin
// base + combining mark pairs (grave, acute, circumflex, tilde,
// diaeresis, ring, cedilla). Not full NFC; idempotent.
std::u32string compose_canonical(std::u32string_view s);

}  // namespace cevkit::unicode
