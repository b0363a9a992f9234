#include "matmcd/da/html.hpp"

#include <array>
#include <cctype>
#include <cstdint>

#include "matmcd/util/text.hpp"

namespace matmcd::da {

namespace {

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
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

// Tags that do not break words ("<b>wor</b>ld" stays one word).
bool is_inline_tag(std::string_view name) {
    static constexpr std::array<std::string_view, 16> kInline = {
        "a", "abbr", "b", "code", "em", "font", "i", "mark", "s", "small", "span", "strong", "sub", "sup", "u", "tt"};
    for (auto t : kInline) {
        if (t == name) return true;
    }
    return false;
}

std::string tag_name(std::string_view tag) {
    std::size_t i = 0;
    if (i < tag.size() && tag[i] == '/') ++i;
    std::string name;
    while (i < tag.size() && std::isalnum(static_cast<unsigned char>(tag[i]))) {
        name.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(tag[i]))));
        ++i;
    }
    return name;
}

}  // namespace

std::string decode_entities(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '&') {
            out.push_back(s[i]);
            continue;
        }
        const std::size_t semi = s.find(';', i + 1);
        if (semi == std::string_view::npos || semi - i > 10) {
            out.push_back('&');
            continue;
        }
        const std::string_view body = s.substr(i + 1, semi - i - 1);
        bool decoded = true;
        if (body == "amp") out.push_back('&');
        else if (body == "lt") out.push_back('<');
        else if (body == "gt") out.push_back('>');
        else if (body == "quot") out.push_back('"');
        else if (body == "apos") out.push_back('\'');
        else if (body == "nbsp") out.push_back(' ');
        else if (body.size() > 1 && body[0] == '#') {
            const bool hex = body[1] == 'x' || body[1] == 'X';
            const std::string digits(body.substr(hex ? 2 : 1));
            if (digits.empty()) {
                decoded = false;
            } else {
                std::uint32_t cp = 0;
                for (char c : digits) {
                    const int v = std::isdigit(static_cast<unsigned char>(c)) ? c - '0'
                                  : (hex && std::isxdigit(static_cast<unsigned char>(c)))
                                      ? std::tolower(static_cast<unsigned char>(c)) - 'a' + 10
                                      : -1;
                    if (v < 0) {
                        decoded = false;
                        break;
                    }
                    cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(v);
                    if (cp > 0x10FFFF) cp = 0x110000;
                }
                if (decoded) append_utf8(out, cp);
            }
        } else {
            decoded = false;
        }
        if (decoded) {
            i = semi;
        } else {
            out.push_back('&');
        }
    }
    return out;
}

std::string deformat_html(std::string_view html) {
    std::string out;
    out.reserve(html.size());
    std::string segment;
    auto flush = [&] {
        out += decode_entities(segment);
        segment.clear();
    };
    std::size_t i = 0;
    while (i < html.size()) {
        const char c = html[i];
        if (c != '<' || i + 1 >= html.size()) {
            segment.push_back(c);
            ++i;
            continue;
        }
        const char next = html[i + 1];
        if (html.substr(i, 4) == "<!--") {
            const std::size_t end = html.find("-->", i + 4);
            flush();
            out.push_back(' ');
            i = end == std::string_view::npos ? html.size() : end + 3;
            continue;
        }
        if (!(std::isalpha(static_cast<unsigned char>(next)) || next == '/' || next == '!' || next == '?')) {
            segment.push_back(c);  // a literal '<', as in "a < b"
            ++i;
            continue;
        }
        const std::size_t close = html.find('>', i + 1);
        if (close == std::string_view::npos) {
            flush();
            break;  // truncated tag at the end of the page
        }
        const std::string name = tag_name(html.substr(i + 1, close - i - 1));
        flush();
        if ((name == "script" || name == "style") && next != '/') {
            const std::string end_tag = "</" + name;
            const std::size_t end = text::find_ci(html, end_tag, close + 1);
            if (end == std::string_view::npos) break;
            const std::size_t end_close = html.find('>', end);
            i = end_close == std::string_view::npos ? html.size() : end_close + 1;
            out.push_back(' ');
            continue;
        }
        if (!is_inline_tag(name)) out.push_back(' ');
        i = close + 1;
    }
    flush();
    return text::collapse_whitespace(out);
}

}  // namespace matmcd::da
