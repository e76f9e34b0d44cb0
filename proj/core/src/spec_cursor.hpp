#pragma once

// Internal: tiny recursive-descent helpers shared by the distribution and
// weight-scheme text grammars.  Not installed.

#include <cctype>
#include <charconv>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "quasiboot/errors.hpp"

namespace quasiboot::detail {

struct Cursor {
    std::string_view s;
    size_t i = 0;

    void ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool peek(char c) {
        ws();
        return i < s.size() && s[i] == c;
    }
    bool eat(char c) {
        if (peek(c)) {
            ++i;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw SpecError("spec parse error at offset " + std::to_string(i) + ": " +
                        msg + " in \"" + std::string(s) + "\"");
    }
    std::string_view ident() {
        ws();
        size_t b = i;
        while (i < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
            ++i;
        if (i == b) fail("expected identifier");
        return s.substr(b, i - b);
    }
    double number() {
        ws();
        double v{};
        auto r = std::from_chars(s.data() + i, s.data() + s.size(), v);
        if (r.ec != std::errc{}) fail("expected number");
        i = static_cast<size_t>(r.ptr - s.data());
        return v;
    }
    std::vector<double> list() {
        expect('[');
        std::vector<double> out;
        if (!peek(']')) {
            out.push_back(number());
            while (eat(',')) out.push_back(number());
        }
        expect(']');
        return out;
    }
    bool done() {
        ws();
        return i == s.size();
    }
};

// Iterates "key=value" / bare-flag arguments up to the closing ')'.
struct ArgReader {
    Cursor& c;
    std::set<std::string, std::less<>> seen;

    bool next(std::string& key, bool& is_flag) {
        if (c.eat(')')) return false;
        key = std::string(c.ident());
        if (!seen.insert(key).second) c.fail("duplicate argument '" + key + "'");
        is_flag = !c.eat('=');
        return true;
    }
    void separator() {
        if (!c.eat(',') && !c.peek(')')) c.fail("expected ',' or ')'");
    }
};

}  // namespace quasiboot::detail
