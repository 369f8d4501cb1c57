#include "skillgap/text.hpp"

#include <unicode/uchar.h>
#include <unicode/unorm2.h>
#include <unicode/ustring.h>
#include <unicode/utf16.h>

#include <array>
#include <cstdio>
#include <stdexcept>

namespace skillgap {

namespace {

std::u32string utf16_to_cps(const std::vector<UChar>& units) {
    std::u32string cps;
    cps.reserve(units.size());
    int32_t i = 0;
    const int32_t n = static_cast<int32_t>(units.size());
    while (i < n) {
        UChar32 c;
        U16_NEXT(units.data(), i, n, c);
        cps.push_back(static_cast<char32_t>(c));
    }
    return cps;
}

std::vector<UChar> to_utf16(std::string_view text) {
    std::vector<UChar> units(text.size() + 1);
    int32_t len = 0;
    UErrorCode ec = U_ZERO_ERROR;
    // Substitute malformed input with U+FFFD instead of failing.
    u_strFromUTF8WithSub(units.data(), static_cast<int32_t>(units.size()), &len,
                         text.data(), static_cast<int32_t>(text.size()),
                         0xFFFD, nullptr, &ec);
    if (U_FAILURE(ec)) throw std::runtime_error("utf8 decode failed");
    units.resize(static_cast<size_t>(len));
    return units;
}

std::vector<UChar> nfc_utf16(const std::vector<UChar>& input) {
    UErrorCode ec = U_ZERO_ERROR;
    const UNormalizer2* nfc = unorm2_getNFCInstance(&ec);
    if (U_FAILURE(ec)) throw std::runtime_error("icu nfc unavailable");
    std::vector<UChar> out(input.size() + 16);
    int32_t len = unorm2_normalize(nfc, input.data(),
                                   static_cast<int32_t>(input.size()),
                                   out.data(), static_cast<int32_t>(out.size()), &ec);
    if (ec == U_BUFFER_OVERFLOW_ERROR) {
        ec = U_ZERO_ERROR;
        out.resize(static_cast<size_t>(len));
        len = unorm2_normalize(nfc, input.data(),
                               static_cast<int32_t>(input.size()),
                               out.data(), static_cast<int32_t>(out.size()), &ec);
    }
    if (U_FAILURE(ec)) throw std::runtime_error("icu nfc failed");
    out.resize(static_cast<size_t>(len));
    return out;
}

bool is_alnum(char32_t c) { return u_isalnum(static_cast<UChar32>(c)) != 0; }
bool is_space(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)) != 0; }

}  // namespace

std::u32string utf8_decode(std::string_view text) {
    return utf16_to_cps(to_utf16(text));
}

std::string utf8_encode(const std::u32string& cps) {
    std::string out;
    out.reserve(cps.size());
    for (char32_t c : cps) {
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
    }
    return out;
}

std::string utf8_sanitize(std::string_view bytes) {
    return utf8_encode(utf8_decode(bytes));
}

std::string normalize(std::string_view text) {
    const std::u32string cps = utf16_to_cps(nfc_utf16(to_utf16(text)));
    std::u32string out;
    out.reserve(cps.size());
    bool pending_space = false;
    for (char32_t c : cps) {
        if (is_space(c)) {
            if (!out.empty()) pending_space = true;
            continue;
        }
        if (pending_space) {
            out.push_back(U' ');
            pending_space = false;
        }
        out.push_back(static_cast<char32_t>(u_tolower(static_cast<UChar32>(c))));
    }
    return utf8_encode(out);
}

std::vector<std::string> tokenize(std::string_view text) {
    const std::u32string cps = utf8_decode(normalize(text));
    std::vector<std::string> tokens;
    std::u32string current;
    for (char32_t c : cps) {
        if (is_alnum(c)) {
            current.push_back(c);
        } else if (!current.empty()) {
            tokens.push_back(utf8_encode(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(utf8_encode(current));
    return tokens;
}

bool is_word_codepoint(char32_t c) { return is_alnum(c); }

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string to_hex64(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(value));
    return buf;
}

std::string content_hash(std::string_view body) {
    return to_hex64(fnv1a64(normalize(body)));
}

std::string slugify(std::string_view name) {
    std::string slug;
    for (const std::string& token : tokenize(name)) {
        if (!slug.empty()) slug.push_back('-');
        slug += token;
    }
    return slug;
}

const std::set<std::string>& english_stopwords() {
    static const std::set<std::string> words = {
        "a",  "an", "and", "are", "as",  "at",  "be",    "by",  "for",
        "from", "in", "into", "is", "it", "of",  "on",    "or",  "other",
        "over", "the", "to",  "under", "via", "with"};
    return words;
}

}  // namespace skillgap
