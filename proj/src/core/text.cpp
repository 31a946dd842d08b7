#include "text.hpp"

#include <cctype>
#include <cstdint>

namespace euds {

namespace {

struct Codepoint {
    uint32_t value;
    size_t length; // bytes consumed
};

// Minimal UTF-8 decoder. Malformed bytes are passed through as single
// opaque characters so dirty corpora never abort tokenization.
Codepoint decode_utf8(std::string_view s, size_t pos) {
    const auto b0 = static_cast<unsigned char>(s[pos]);
    if (b0 < 0x80) return {b0, 1};
    auto cont = [&](size_t i) {
        return i < s.size() && (static_cast<unsigned char>(s[i]) & 0xC0) == 0x80;
    };
    if ((b0 & 0xE0) == 0xC0 && cont(pos + 1)) {
        uint32_t v = (b0 & 0x1Fu) << 6 | (static_cast<unsigned char>(s[pos + 1]) & 0x3Fu);
        return {v, 2};
    }
    if ((b0 & 0xF0) == 0xE0 && cont(pos + 1) && cont(pos + 2)) {
        uint32_t v = (b0 & 0x0Fu) << 12 | (static_cast<unsigned char>(s[pos + 1]) & 0x3Fu) << 6 |
                     (static_cast<unsigned char>(s[pos + 2]) & 0x3Fu);
        return {v, 3};
    }
    if ((b0 & 0xF8) == 0xF0 && cont(pos + 1) && cont(pos + 2) && cont(pos + 3)) {
        uint32_t v = (b0 & 0x07u) << 18 | (static_cast<unsigned char>(s[pos + 1]) & 0x3Fu) << 12 |
                     (static_cast<unsigned char>(s[pos + 2]) & 0x3Fu) << 6 |
                     (static_cast<unsigned char>(s[pos + 3]) & 0x3Fu);
        return {v, 4};
    }
    return {0xFFFD, 1};
}

bool is_space_cp(uint32_t cp) {
    switch (cp) {
        case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
        case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
        case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

bool is_punct_cp(uint32_t cp) {
    if (cp < 0x80) return std::ispunct(static_cast<int>(cp)) != 0;
    switch (cp) {
        case 0xA1: case 0xAB: case 0xBB: case 0xBF:          // inverted marks, guillemets
        case 0x2013: case 0x2014:                            // dashes
        case 0x2018: case 0x2019: case 0x201C: case 0x201D:  // curly quotes
        case 0x2026:                                         // ellipsis
        case 0x3001: case 0x3002:                            // CJK comma / full stop
        case 0xFF01: case 0xFF0C: case 0xFF1A: case 0xFF1B: case 0xFF1F:
            return true;
        default:
            return false;
    }
}

void append_lowered(std::string& out, std::string_view src, size_t pos, size_t len, uint32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(std::tolower(static_cast<int>(cp))));
    } else {
        out.append(src.substr(pos, len));
    }
}

// One pass over a whitespace-delimited chunk: record codepoint boundaries,
// then trim punctuation from both ends.
void emit_token(std::string_view chunk, std::vector<std::string>& out) {
    std::vector<std::pair<size_t, Codepoint>> cps;
    for (size_t i = 0; i < chunk.size();) {
        Codepoint cp = decode_utf8(chunk, i);
        cps.emplace_back(i, cp);
        i += cp.length;
    }
    size_t lo = 0, hi = cps.size();
    while (lo < hi && is_punct_cp(cps[lo].second.value)) ++lo;
    while (hi > lo && is_punct_cp(cps[hi - 1].second.value)) --hi;
    if (lo >= hi) return;
    std::string tok;
    for (size_t k = lo; k < hi; ++k) {
        append_lowered(tok, chunk, cps[k].first, cps[k].second.length, cps[k].second.value);
    }
    out.push_back(std::move(tok));
}

} // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    size_t start = 0;
    bool in_chunk = false;
    for (size_t i = 0; i < text.size();) {
        Codepoint cp = decode_utf8(text, i);
        if (is_space_cp(cp.value)) {
            if (in_chunk) {
                emit_token(text.substr(start, i - start), out);
                in_chunk = false;
            }
        } else if (!in_chunk) {
            start = i;
            in_chunk = true;
        }
        i += cp.length;
    }
    if (in_chunk) emit_token(text.substr(start), out);
    return out;
}

std::string normalize_for_equivalence(std::string_view text) {
    std::string out;
    bool pending_space = false;
    for (size_t i = 0; i < text.size();) {
        Codepoint cp = decode_utf8(text, i);
        if (is_space_cp(cp.value)) {
            pending_space = !out.empty();
        } else if (!is_punct_cp(cp.value)) {
            if (pending_space) {
                out.push_back(' ');
                pending_space = false;
            }
            append_lowered(out, text, i, cp.length, cp.value);
        }
        i += cp.length;
    }
    return out;
}

bool has_visible_text(std::string_view text) {
    for (size_t i = 0; i < text.size();) {
        Codepoint cp = decode_utf8(text, i);
        if (!is_space_cp(cp.value)) return true;
        i += cp.length;
    }
    return false;
}

} // namespace euds
