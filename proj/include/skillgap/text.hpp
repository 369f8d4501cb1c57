#ifndef SKILLGAP_TEXT_HPP
#define SKILLGAP_TEXT_HPP

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace skillgap {

// Canonical text form used for hashing, dedup and matching:
// Unicode NFC, then per-code-point lowercase, then whitespace runs
// collapsed to a single ASCII space and trimmed. Idempotent.
std::string normalize(std::string_view text);

// normalize(), then split on anything that is not a Unicode letter or digit.
// No empty tokens; textual order preserved.
std::vector<std::string> tokenize(std::string_view text);

// Decode UTF-8 to code points; invalid sequences become U+FFFD.
std::u32string utf8_decode(std::string_view text);
std::string utf8_encode(const std::u32string& cps);

// Re-encode arbitrary bytes as valid UTF-8 (lossy).
std::string utf8_sanitize(std::string_view bytes);

// Unicode letter or digit.
bool is_word_codepoint(char32_t c);

std::uint64_t fnv1a64(std::string_view bytes);
std::string to_hex64(std::uint64_t value);

// Hex digest of the normalized body; the corpus-wide dedup key.
std::string content_hash(std::string_view body);

// Lowercase slug: token runs joined by '-' ("Block and stream ciphers"
// -> "block-and-stream-ciphers").
std::string slugify(std::string_view name);

// Small built-in English stopword list (taxonomy validation and the
// default vocabulary filter).
const std::set<std::string>& english_stopwords();

}  // namespace skillgap

#endif
