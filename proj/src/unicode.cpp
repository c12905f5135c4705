#include "ideate/unicode.hpp"

#include <algorithm>
#include <cstdint>

namespace ideate::unicode {

namespace {

struct CccEntry {
    char32_t cp;
    std::uint8_t ccc;
};

struct DecompEntry {
    char32_t cp;
    std::uint16_t offset;
    std::uint8_t len;
};

struct ComposeEntry {
    char32_t first;
    char32_t second;
    char32_t composed;
};

#include "unicode_tables.inc"

constexpr char32_t kReplacement = 0xFFFD;

// Hangul syllable arithmetic (UAX #15 section on algorithmic composition).
constexpr char32_t kHangulSBase = 0xAC00;
constexpr char32_t kHangulLBase = 0x1100;
constexpr char32_t kHangulVBase = 0x1161;
constexpr char32_t kHangulTBase = 0x11A7;
constexpr int kHangulLCount = 19;
constexpr int kHangulVCount = 21;
constexpr int kHangulTCount = 28;
constexpr int kHangulNCount = kHangulVCount * kHangulTCount;
constexpr int kHangulSCount = kHangulLCount * kHangulNCount;

std::uint8_t combining_class(char32_t cp) {
    auto it = std::lower_bound(std::begin(kCcc), std::end(kCcc), cp,
                               [](const CccEntry& e, char32_t c) { return e.cp < c; });
    if (it != std::end(kCcc) && it->cp == cp) return it->ccc;
    return 0;
}

void decompose_into(char32_t cp, std::u32string& out) {
    if (cp >= kHangulSBase && cp < kHangulSBase + kHangulSCount) {
        char32_t s = cp - kHangulSBase;
        out.push_back(kHangulLBase + s / kHangulNCount);
        out.push_back(kHangulVBase + (s % kHangulNCount) / kHangulTCount);
        char32_t t = s % kHangulTCount;
        if (t != 0) out.push_back(kHangulTBase + t);
        return;
    }
    auto it = std::lower_bound(std::begin(kDecomp), std::end(kDecomp), cp,
                               [](const DecompEntry& e, char32_t c) { return e.cp < c; });
    if (it != std::end(kDecomp) && it->cp == cp) {
        for (std::uint8_t i = 0; i < it->len; ++i) out.push_back(kDecompData[it->offset + i]);
        return;
    }
    out.push_back(cp);
}

// Returns 0 when the pair does not form a primary composite.
char32_t compose_pair(char32_t a, char32_t b) {
    if (a >= kHangulLBase && a < kHangulLBase + kHangulLCount && b >= kHangulVBase &&
        b < kHangulVBase + kHangulVCount) {
        return kHangulSBase + ((a - kHangulLBase) * kHangulVCount + (b - kHangulVBase)) * kHangulTCount;
    }
    if (a >= kHangulSBase && a < kHangulSBase + kHangulSCount &&
        (a - kHangulSBase) % kHangulTCount == 0 && b > kHangulTBase &&
        b < kHangulTBase + kHangulTCount) {
        return a + (b - kHangulTBase);
    }
    auto it = std::lower_bound(std::begin(kCompose), std::end(kCompose), std::pair{a, b},
                               [](const ComposeEntry& e, const std::pair<char32_t, char32_t>& key) {
                                   if (e.first != key.first) return e.first < key.first;
                                   return e.second < key.second;
                               });
    if (it != std::end(kCompose) && it->first == a && it->second == b) return it->composed;
    return 0;
}

} // namespace

std::u32string decode_utf8(std::string_view text) {
    std::u32string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        char32_t cp = 0;
        std::size_t extra = 0;
        if (c < 0x80) {
            cp = c;
        } else if ((c & 0xE0) == 0xC0) {
            cp = c & 0x1F;
            extra = 1;
        } else if ((c & 0xF0) == 0xE0) {
            cp = c & 0x0F;
            extra = 2;
        } else if ((c & 0xF8) == 0xF0) {
            cp = c & 0x07;
            extra = 3;
        } else {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        if (i + extra >= text.size()) {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        bool valid = true;
        for (std::size_t k = 1; k <= extra; ++k) {
            if ((static_cast<unsigned char>(text[i + k]) & 0xC0) != 0x80) {
                valid = false;
                break;
            }
            cp = (cp << 6) | (static_cast<unsigned char>(text[i + k]) & 0x3F);
        }
        if (!valid || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        out.push_back(cp);
        i += extra + 1;
    }
    return out;
}

std::string encode_utf8(const std::u32string& codepoints) {
    std::string out;
    out.reserve(codepoints.size());
    for (char32_t cp : codepoints) {
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        }
    }
    return out;
}

std::string nfc(std::string_view text) {
    std::u32string decomposed;
    for (char32_t cp : decode_utf8(text)) decompose_into(cp, decomposed);

    // Canonical ordering: stable-sort maximal runs of nonzero-ccc marks.
    std::size_t i = 0;
    while (i < decomposed.size()) {
        if (combining_class(decomposed[i]) == 0) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < decomposed.size() && combining_class(decomposed[j]) != 0) ++j;
        std::stable_sort(decomposed.begin() + static_cast<std::ptrdiff_t>(i),
                         decomposed.begin() + static_cast<std::ptrdiff_t>(j),
                         [](char32_t a, char32_t b) { return combining_class(a) < combining_class(b); });
        i = j;
    }

    // Canonical recomposition (UAX #15 composition algorithm).
    std::u32string out;
    out.reserve(decomposed.size());
    std::ptrdiff_t last_starter = -1;
    int last_starter_ccc = -1; // ccc of the last combining char appended after the starter
    for (char32_t cp : decomposed) {
        int ccc = combining_class(cp);
        if (last_starter >= 0) {
            bool blocked = last_starter_ccc >= ccc && last_starter_ccc != -1;
            if (!blocked) {
                char32_t composed =
                    compose_pair(out[static_cast<std::size_t>(last_starter)], cp);
                if (composed != 0) {
                    out[static_cast<std::size_t>(last_starter)] = composed;
                    continue;
                }
            }
        }
        if (ccc == 0) {
            last_starter = static_cast<std::ptrdiff_t>(out.size());
            last_starter_ccc = -1;
        } else {
            last_starter_ccc = ccc;
        }
        out.push_back(cp);
    }
    return encode_utf8(out);
}

} // namespace ideate::unicode
