#pragma once

// Text forms for sets, points, systems and cylinder tuples.
//
//   set    := [a]Z[(+|-)b] | {n1,n2,...[; lo..hi]} | blocks(j=J0..[J1]: expr, expr)
//           | union(set, set) | inter(set, set) | compl(set) | shift(set, s)
//   expr   := term {(+|-) term},  term := c | j | c*j | b^j | c*b^j
//   point  := const:s | periodic:word | indicator:set | seeded:k:seed | catalog:k
//           | rotation:rot[:p/q] | shift(point, s) | flip(point, set, k)
//           | defect(point; n=s, ...)
//   system := fullshift:k | sft:golden | sft:row,row,... | sturmian:rot
//           | periodic:word | indicator:set
//   rot    := golden | silver | cf:a1,...,(p1,...)

#include <cctype>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "meanlab/config.hpp"
#include "meanlab/correspondence.hpp"
#include "meanlab/error.hpp"
#include "meanlab/rotation.hpp"
#include "meanlab/subset.hpp"
#include "meanlab/subshift.hpp"

namespace meanlab {

inline constexpr std::int64_t kDefaultClosureHorizon = 4096;

namespace detail {

class Cursor {
public:
    explicit Cursor(std::string text) : t_(std::move(text)) {}

    std::size_t pos() const { return p_; }
    bool done() {
        skip();
        return p_ >= t_.size();
    }
    char peek() {
        skip();
        return p_ < t_.size() ? t_[p_] : '\0';
    }
    bool accept(const std::string& s) {
        skip();
        if (t_.compare(p_, s.size(), s) == 0) {
            p_ += s.size();
            return true;
        }
        return false;
    }
    void expect(const std::string& s) {
        if (!accept(s)) fail("'" + s + "'");
    }
    [[noreturn]] void fail(const std::string& expected, const std::string& what = "syntax error") const {
        throw ParseError(p_, expected, what);
    }

    std::int64_t integer() {
        skip();
        std::size_t start = p_;
        bool neg = false;
        if (p_ < t_.size() && (t_[p_] == '-' || t_[p_] == '+')) neg = t_[p_++] == '-';
        if (p_ >= t_.size() || !std::isdigit(static_cast<unsigned char>(t_[p_]))) {
            p_ = start;
            fail("integer");
        }
        std::int64_t v = 0;
        while (p_ < t_.size() && std::isdigit(static_cast<unsigned char>(t_[p_]))) {
            int d = t_[p_++] - '0';
            if (v > (INT64_MAX - d) / 10) throw ParseError(start, "integer", "integer out of range");
            v = v * 10 + d;
        }
        return neg ? -v : v;
    }
    bool at_digit() {
        skip();
        return p_ < t_.size() && std::isdigit(static_cast<unsigned char>(t_[p_]));
    }
    std::string word() {
        skip();
        std::size_t start = p_;
        while (p_ < t_.size() && (std::isalpha(static_cast<unsigned char>(t_[p_])) || t_[p_] == '_')) ++p_;
        return t_.substr(start, p_ - start);
    }
    std::vector<Symbol> digits() {
        skip();
        std::vector<Symbol> out;
        while (p_ < t_.size() && std::isdigit(static_cast<unsigned char>(t_[p_]))) out.push_back(t_[p_++] - '0');
        if (out.empty()) fail("symbol digits");
        return out;
    }
    std::string rest() {
        skip();
        std::string r = t_.substr(p_);
        p_ = t_.size();
        return r;
    }
    void rewind(std::size_t p) { p_ = p; }

private:
    void skip() {
        while (p_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[p_]))) ++p_;
    }
    std::string t_;
    std::size_t p_ = 0;
};

inline PowerAffine parse_affine(Cursor& c) {
    PowerAffine out;
    bool have_power = false, first = true;
    while (true) {
        std::int64_t sign = 1;
        if (c.accept("+")) {
            if (first) c.fail("term");
        } else if (c.accept("-")) {
            sign = -1;
        } else if (!first) {
            break;
        }
        first = false;
        auto power = [&](std::int64_t coef) {
            std::size_t at = c.pos();
            std::int64_t base = c.integer();
            c.expect("^");
            c.expect("j");
            if (have_power) throw ParseError(at, "at most one power term", "unsupported construct");
            have_power = true;
            out.coef = checked_mul(sign, coef);
            out.base = base;
        };
        if (c.accept("j")) {
            out.slope = checked_add(out.slope, sign);
            continue;
        }
        std::size_t at = c.pos();
        std::int64_t v = c.integer();
        if (v < 0) throw ParseError(at, "unsigned integer", "syntax error");
        if (c.accept("^")) {
            c.rewind(at);
            power(1);
        } else if (c.accept("*")) {
            if (c.accept("j"))
                out.slope = checked_add(out.slope, checked_mul(sign, v));
            else
                power(v);
        } else {
            out.constant = checked_add(out.constant, checked_mul(sign, v));
        }
    }
    return out;
}

inline SubsetDesc parse_set_expr(Cursor& c) {
    const std::size_t at = c.pos();
    if (c.accept("{")) {
        std::vector<GroupElem> el;
        if (c.peek() != '}' && c.peek() != ';') {
            el.push_back(GroupElem::scalar(c.integer()));
            while (c.accept(",")) el.push_back(GroupElem::scalar(c.integer()));
        }
        if (c.accept(";")) {
            std::int64_t lo = c.integer();
            c.expect("..");
            std::int64_t hi = c.integer();
            c.expect("}");
            return SubsetDesc::explicit_set(Window(std::move(el)), GroupElem::scalar(lo), GroupElem::scalar(hi));
        }
        c.expect("}");
        return SubsetDesc::explicit_set(Window(std::move(el)));
    }
    if (c.at_digit() || c.peek() == 'Z') {
        std::int64_t a = 1;
        if (c.at_digit()) a = c.integer();
        c.expect("Z");
        if (a < 1) throw ParseError(at, "positive modulus", "unsupported construct");
        std::int64_t b = 0;
        if (c.accept("+"))
            b = c.integer();
        else if (c.accept("-"))
            b = -c.integer();
        return SubsetDesc::progression(a, b);
    }
    std::string w = c.word();
    if (w.empty()) c.fail("set expression");
    c.expect("(");
    SubsetDesc out = SubsetDesc::whole();
    if (w == "union" || w == "inter") {
        auto a = parse_set_expr(c);
        c.expect(",");
        auto b = parse_set_expr(c);
        out = w == "union" ? SubsetDesc::united(a, b) : SubsetDesc::intersected(a, b);
    } else if (w == "compl") {
        out = parse_set_expr(c).complemented();
    } else if (w == "shift") {
        auto a = parse_set_expr(c);
        c.expect(",");
        out = a.shifted(GroupElem::scalar(c.integer()));
    } else if (w == "blocks") {
        BlockRule rule;
        c.expect("j");
        c.expect("=");
        rule.first = c.integer();
        c.expect("..");
        if (!c.accept("inf") && c.at_digit()) rule.last = c.integer();
        c.expect(":");
        rule.start = parse_affine(c);
        c.expect(",");
        rule.len = parse_affine(c);
        try {
            out = SubsetDesc::blocks(rule);
        } catch (const UsageError& e) {
            throw ParseError(at, "supported block rule", e.what());
        }
    } else {
        c.rewind(at);
        c.fail("union, inter, compl, shift, blocks, {...} or aZ+b");
    }
    c.expect(")");
    return out;
}

inline std::shared_ptr<const Rotation> parse_rotation(Cursor& c) {
    const std::size_t at = c.pos();
    std::string w = c.word();
    if (w == "golden") return std::make_shared<const Rotation>(Rotation::golden());
    if (w == "silver") return std::make_shared<const Rotation>(Rotation::silver());
    if (w == "cf") {
        c.expect(":");
        ContinuedFraction cf;
        while (c.at_digit()) {
            cf.prefix.push_back(c.integer());
            c.expect(",");
        }
        c.expect("(");
        cf.period.push_back(c.integer());
        while (c.accept(",")) cf.period.push_back(c.integer());
        c.expect(")");
        try {
            return std::make_shared<const Rotation>(cf);
        } catch (const UsageError& e) {
            throw ParseError(at, "positive partial quotients", e.what());
        }
    }
    c.rewind(at);
    c.fail("golden, silver or cf:...");
}

inline ConfigDesc parse_point_expr(Cursor& c) {
    const std::size_t at = c.pos();
    std::string w = c.word();
    if (w == "shift" || w == "flip" || w == "defect") {
        c.expect("(");
        auto base = parse_point_expr(c);
        ConfigDesc out = base;
        if (w == "shift") {
            c.expect(",");
            out = base.translated(GroupElem::scalar(c.integer()));
        } else if (w == "flip") {
            c.expect(",");
            auto s = parse_set_expr(c);
            c.expect(",");
            out = ConfigDesc::flip(base, s, static_cast<int>(c.integer()));
        } else {
            c.expect(";");
            std::map<GroupElem, Symbol> over;
            do {
                auto n = c.integer();
                c.expect("=");
                over[GroupElem::scalar(n)] = static_cast<Symbol>(c.integer());
            } while (c.accept(","));
            out = ConfigDesc::finite_defect(base, std::move(over));
        }
        c.expect(")");
        return out;
    }
    c.expect(":");
    if (w == "const") return ConfigDesc::constant(static_cast<Symbol>(c.integer()));
    if (w == "periodic") return ConfigDesc::periodic_word(c.digits());
    if (w == "indicator") return indicator_config(parse_set_expr(c));
    if (w == "catalog") return ConfigDesc::word_catalog(static_cast<int>(c.integer()));
    if (w == "seeded") {
        auto k = c.integer();
        c.expect(":");
        auto seed = c.integer();
        return ConfigDesc::seeded(static_cast<int>(k), static_cast<std::uint64_t>(seed));
    }
    if (w == "rotation") {
        auto r = parse_rotation(c);
        std::int64_t num = 0, den = 1;
        if (c.accept(":")) {
            num = c.integer();
            c.expect("/");
            den = c.integer();
        }
        return ConfigDesc::rotation_coding(r, num, den);
    }
    c.rewind(at);
    c.fail("const, periodic, indicator, seeded, catalog, rotation, shift, flip or defect");
}

inline void expect_end(Cursor& c) {
    if (!c.done()) c.fail("end of input", "trailing text");
}

}  // namespace detail

inline SubsetDesc parse_set(const std::string& text) {
    detail::Cursor c(text);
    if (c.done()) c.fail("set expression", "empty input");
    auto s = detail::parse_set_expr(c);
    detail::expect_end(c);
    return s;
}

inline ConfigDesc parse_point(const std::string& text) {
    detail::Cursor c(text);
    if (c.done()) c.fail("point expression", "empty input");
    auto p = detail::parse_point_expr(c);
    detail::expect_end(c);
    return p;
}

/// Periodic orbit or orbit closure of the indicator of E.
inline SubshiftSpec indicator_system(const SubsetDesc& e, const std::string& name,
                                     std::int64_t horizon = kDefaultClosureHorizon) {
    auto xi = indicator_config(e);
    if (const auto* k = xi.as<config_node::Constant>()) return SubshiftSpec::periodic_orbit(ConfigDesc::periodic_word({k->symbol}), name);
    if (xi.as<config_node::Periodic>()) return SubshiftSpec::periodic_orbit(xi, name);
    return SubshiftSpec::orbit_closure(xi, 2, horizon, name);
}

inline SubshiftSpec parse_system(const std::string& text) {
    detail::Cursor c(text);
    const std::string w = c.word();
    c.expect(":");
    if (w == "fullshift") {
        auto k = c.integer();
        int dim = 1;
        if (c.accept(":")) {
            c.expect("d");
            dim = static_cast<int>(c.integer());
        }
        detail::expect_end(c);
        if (k < 1 || k > 64) throw ParseError(0, "alphabet size 1..64", "unsupported construct");
        return SubshiftSpec::full_shift(static_cast<int>(k), dim);
    }
    if (w == "sft") {
        if (c.accept("golden")) {
            detail::expect_end(c);
            return SubshiftSpec::golden_mean();
        }
        std::vector<std::vector<int>> rows;
        do {
            auto d = c.digits();
            rows.emplace_back(d.begin(), d.end());
        } while (c.accept(","));
        detail::expect_end(c);
        return SubshiftSpec::sft(std::move(rows));
    }
    if (w == "sturmian") {
        auto r = detail::parse_rotation(c);
        detail::expect_end(c);
        return SubshiftSpec::sturmian(r);
    }
    if (w == "periodic") {
        auto d = c.digits();
        detail::expect_end(c);
        std::string name = "periodic:";
        for (auto s : d) name += static_cast<char>('0' + s);
        return SubshiftSpec::periodic_orbit(ConfigDesc::periodic_word(d), name);
    }
    if (w == "indicator") {
        auto e = detail::parse_set_expr(c);
        detail::expect_end(c);
        return indicator_system(e, text);
    }
    c.rewind(0);
    c.fail("fullshift:, sft:, sturmian:, periodic: or indicator:");
}

/// "[0=0][0=1]": cylinders as lists of position=symbol constraints.
inline std::vector<CylinderSet> parse_cylinders(const std::string& text) {
    detail::Cursor c(text);
    std::vector<CylinderSet> out;
    while (c.accept("[")) {
        std::vector<GroupElem> w;
        std::map<GroupElem, Symbol> m;
        do {
            auto pos = c.integer();
            c.expect("=");
            m[GroupElem::scalar(pos)] = static_cast<Symbol>(c.integer());
        } while (c.accept(","));
        c.expect("]");
        std::vector<Symbol> syms;
        for (const auto& [g, s] : m) {
            w.push_back(g);
            syms.push_back(s);
        }
        out.emplace_back(Window(std::move(w)), std::move(syms));
    }
    detail::expect_end(c);
    if (out.empty()) c.fail("'['");
    return out;
}

inline std::string to_text(const CylinderSet& cyl) {
    std::string s = "[";
    std::size_t i = 0;
    for (const auto& g : cyl.window) {
        s += (i ? "," : "") + std::to_string(g[0]) + "=" + std::to_string(cyl.symbols[i]);
        ++i;
    }
    return s + "]";
}

namespace detail {

inline std::string affine_text(const PowerAffine& p) {
    std::string s;
    auto add = [&](std::int64_t c, const std::string& body) {
        if (c == 0) return;
        if (s.empty())
            s += c < 0 ? "-" : "";
        else
            s += c < 0 ? " - " : " + ";
        std::int64_t a = c < 0 ? -c : c;
        if (body.empty())
            s += std::to_string(a);
        else
            s += (a == 1 ? "" : std::to_string(a) + "*") + body;
    };
    add(p.coef, std::to_string(p.base) + "^j");
    add(p.slope, "j");
    add(p.constant, "");
    return s.empty() ? "0" : s;
}

inline std::string set_text(const subset_node::Node& n) {
    if (n.dim != 1) throw UnsupportedShape("set text is defined for subsets of Z");
    return std::visit(
        [&](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, subset_node::Periodic>) {
                const std::int64_t m = v.set.modulus()[0];
                auto res = v.set.residues();
                if (res.empty()) return "compl(Z)";
                if (m == 1) return "Z";
                auto prog = [&](const GroupElem& r) {
                    return std::to_string(m) + "Z" + (r[0] ? "+" + std::to_string(r[0]) : "");
                };
                std::string s = prog(res.back());
                for (std::size_t i = res.size() - 1; i-- > 0;) s = "union(" + prog(res[i]) + ", " + s + ")";
                return s;
            } else if constexpr (std::is_same_v<T, subset_node::Explicit>) {
                std::string s = "{";
                std::size_t i = 0;
                for (const auto& g : v.elems) s += (i++ ? "," : "") + std::to_string(g[0]);
                if (v.universe_lo[0] != -kDefaultUniverse || v.universe_hi[0] != kDefaultUniverse)
                    s += "; " + std::to_string(v.universe_lo[0]) + ".." + std::to_string(v.universe_hi[0]);
                return s + "}";
            } else if constexpr (std::is_same_v<T, subset_node::Blocks>) {
                return "blocks(j=" + std::to_string(v.rule.first) + ".." +
                       (v.rule.last ? std::to_string(*v.rule.last) : std::string()) + ": " + affine_text(v.rule.start) +
                       ", " + affine_text(v.rule.len) + ")";
            } else if constexpr (std::is_same_v<T, subset_node::Shift>) {
                return "shift(" + set_text(*v.inner) + ", " + std::to_string(v.by[0]) + ")";
            } else if constexpr (std::is_same_v<T, subset_node::Complement>) {
                return "compl(" + set_text(*v.inner) + ")";
            } else if constexpr (std::is_same_v<T, subset_node::Union>) {
                return "union(" + set_text(*v.a) + ", " + set_text(*v.b) + ")";
            } else {
                return "inter(" + set_text(*v.a) + ", " + set_text(*v.b) + ")";
            }
        },
        n.v);
}

}  // namespace detail

/// Canonical text; parse_set(to_text(e)) == e.
inline std::string to_text(const SubsetDesc& e) { return detail::set_text(e.node()); }

}  // namespace meanlab
