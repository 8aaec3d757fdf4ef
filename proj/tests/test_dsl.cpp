#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "meanlab/dsl.hpp"

using namespace meanlab;

namespace {

std::size_t error_position(const std::string& text) {
    try {
        parse_set(text);
    } catch (const ParseError& e) {
        return e.position();
    }
    ADD_FAILURE() << "no parse error for " << text;
    return 0;
}

// random expression text with a membership predicate built alongside it
struct Gen {
    std::mt19937_64 rng;
    std::pair<std::string, std::function<bool(std::int64_t)>> make(int depth) {
        auto pick = rng() % (depth > 0 ? 7 : 2);
        auto m = [](std::int64_t a, std::int64_t b) { return ((a % b) + b) % b; };
        if (pick == 0) {
            std::int64_t a = 1 + static_cast<std::int64_t>(rng() % 6), b = static_cast<std::int64_t>(rng() % 9) - 4;
            std::string t = std::to_string(a) + "Z" + (b < 0 ? "-" + std::to_string(-b) : "+" + std::to_string(b));
            return {t, [=](std::int64_t n) { return m(n - b, a) == 0; }};
        }
        if (pick == 1) {
            std::vector<std::int64_t> el;
            for (int i = 0; i < 3; ++i) el.push_back(static_cast<std::int64_t>(rng() % 41) - 20);
            std::string t = "{" + std::to_string(el[0]) + "," + std::to_string(el[1]) + "," + std::to_string(el[2]) + "}";
            return {t, [=](std::int64_t n) { return n == el[0] || n == el[1] || n == el[2]; }};
        }
        if (pick == 2) {
            auto [t, f] = make(depth - 1);
            return {"compl(" + t + ")", [f = f](std::int64_t n) { return !f(n); }};
        }
        if (pick == 3) {
            auto [t, f] = make(depth - 1);
            std::int64_t s = static_cast<std::int64_t>(rng() % 11) - 5;
            return {"shift(" + t + ", " + std::to_string(s) + ")", [f = f, s](std::int64_t n) { return f(n - s); }};
        }
        if (pick == 4) {
            std::int64_t a = 1 + static_cast<std::int64_t>(rng() % 3);
            return {"blocks(j=1..: " + std::to_string(a + 1) + "^j, j)", [a](std::int64_t n) {
                        std::int64_t p = 1;
                        for (std::int64_t j = 1; j < 40; ++j) {
                            p *= a + 1;
                            if (p > n) return false;
                            if (n < p + j) return true;
                        }
                        return false;
                    }};
        }
        auto [ta, fa] = make(depth - 1);
        auto [tb, fb] = make(depth - 1);
        if (pick == 5) return {"union(" + ta + ", " + tb + ")", [fa = fa, fb = fb](std::int64_t n) { return fa(n) || fb(n); }};
        return {"inter(" + ta + ", " + tb + ")", [fa = fa, fb = fb](std::int64_t n) { return fa(n) && fb(n); }};
    }
};

}  // namespace

TEST(SetParser, CanonicalForms) {
    auto e = parse_set("2Z+1");
    ASSERT_TRUE(e.as_periodic());
    EXPECT_EQ(e.as_periodic()->modulus(), GroupElem::scalar(2));
    EXPECT_EQ(e.as_periodic()->residues(), (std::vector<GroupElem>{GroupElem::scalar(1)}));

    auto u = parse_set("union(3Z, shift(3Z, 1))");
    ASSERT_TRUE(u.as_periodic());
    EXPECT_EQ(u.as_periodic()->modulus(), GroupElem::scalar(3));
    EXPECT_EQ(u.as_periodic()->residues(), (std::vector<GroupElem>{GroupElem::scalar(0), GroupElem::scalar(1)}));
    EXPECT_EQ(to_text(u), "union(3Z, 3Z+1)");

    auto b = parse_set("blocks(j=1..12: 2^j, j)");
    const auto* blocks = std::get_if<subset_node::Blocks>(&b.node().v);
    ASSERT_NE(blocks, nullptr);
    EXPECT_EQ(blocks->rule.first, 1);
    EXPECT_EQ(blocks->rule.last, 12);
    EXPECT_EQ(blocks->rule.start.at(5), 32);
    EXPECT_EQ(blocks->rule.len.at(5), 5);

    EXPECT_EQ(to_text(parse_set("6Z-1")), "6Z+5");
    EXPECT_EQ(to_text(parse_set("inter(2Z,3Z)")), "6Z");
    EXPECT_EQ(to_text(parse_set("union(2Z, 2Z+1)")), "Z");
    EXPECT_EQ(to_text(parse_set("compl(Z)")), "compl(Z)");
}

TEST(SetParser, RoundTripAndMembership) {
    Gen gen{std::mt19937_64(99)};
    for (int i = 0; i < 300; ++i) {
        auto [text, member] = gen.make(3);
        auto e = parse_set(text);
        auto canon = to_text(e);
        auto again = parse_set(canon);
        EXPECT_EQ(again, e) << text;
        EXPECT_EQ(to_text(again), canon);
        for (std::int64_t n = -60; n <= 140; ++n) ASSERT_EQ(e.contains(GroupElem::scalar(n)), member(n)) << text << " at " << n;
    }
}

TEST(SetParser, ExplicitUniverse) {
    auto e = parse_set("{-4,9; -10..10}");
    EXPECT_EQ(to_text(e), "{-4,9; -10..10}");
    EXPECT_TRUE(e.contains(GroupElem::scalar(9)));
    EXPECT_THROW(parse_set("{11; -10..10}"), UniverseExceeded);
}

TEST(SetParser, ErrorsCarryPositionAndExpectation) {
    EXPECT_EQ(error_position("2Z+"), 3u);
    EXPECT_EQ(error_position("union(2Z 3Z)"), 9u);
    EXPECT_EQ(error_position("{1,2"), 4u);
    EXPECT_EQ(error_position("2Z)"), 2u);
    EXPECT_EQ(error_position("foo(2Z)"), 0u);
    try {
        parse_set("union(2Z 3Z)");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.expected(), "','");
        EXPECT_EQ(e.code(), "syntax");
    }
    try {
        parse_set("");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("empty input"), std::string::npos);
    }
}

TEST(SetParser, UnsupportedConstructs) {
    for (auto text : {"0Z", "blocks(j=1..3: 2^j + 3^j, j)", "blocks(j=3..1: j, 1)", "blocks(j=1..5: 5 - j, 1)"}) {
        try {
            parse_set(text);
            ADD_FAILURE() << text;
        } catch (const ParseError& e) {
            EXPECT_EQ(e.code(), "syntax") << text;
        }
    }
}

TEST(SystemParser, Zoo) {
    EXPECT_EQ(parse_system("fullshift:2").pattern_count(Window::interval(0, 4)), BigInt(16));
    EXPECT_EQ(parse_system("fullshift:2:d2").dim(), 2);
    EXPECT_EQ(parse_system("sft:golden").pattern_count(Window::interval(0, 4)), BigInt(8));
    EXPECT_EQ(parse_system("sft:11,10").pattern_count(Window::interval(0, 4)), BigInt(8));
    EXPECT_EQ(parse_system("periodic:001").pattern_count(Window::interval(0, 5)), BigInt(3));
    EXPECT_EQ(parse_system("indicator:3Z+1").pattern_count(Window::interval(0, 5)), BigInt(3));
    EXPECT_EQ(parse_system("sturmian:cf:(2)").pattern_count(Window::interval(0, 7)), BigInt(8));
    EXPECT_THROW(parse_system("bogus:1"), ParseError);
    EXPECT_THROW(parse_system("fullshift:99"), ParseError);
    EXPECT_THROW(parse_system("periodic:"), ParseError);
}

TEST(PointParser, Forms) {
    auto at = [](const ConfigDesc& x, std::int64_t n) { return static_cast<int>(x.at(n)); };
    auto s = parse_point("shift(periodic:01, 1)");
    EXPECT_EQ(at(s, 0), 1);
    EXPECT_EQ(at(s, 1), 0);
    auto f = parse_point("flip(const:0, 3Z, 2)");
    EXPECT_EQ(at(f, 0), 1);
    EXPECT_EQ(at(f, 1), 0);
    EXPECT_EQ(at(f, 3), 1);
    auto d = parse_point("defect(const:0; 5=1)");
    EXPECT_EQ(at(d, 5), 1);
    EXPECT_EQ(at(d, 4), 0);
    EXPECT_EQ(at(parse_point("indicator:2Z"), 2), 0);
    EXPECT_EQ(at(parse_point("indicator:2Z"), 3), 1);
    auto a = parse_point("seeded:2:7"), b = parse_point("seeded:2:7");
    for (std::int64_t n = 0; n < 50; ++n) EXPECT_EQ(a.at(n), b.at(n));
    EXPECT_THROW(parse_point("nothing:1"), ParseError);
}

TEST(CylinderParser, RoundTrip) {
    auto c = parse_cylinders("[0=0,2=1][1=1]");
    ASSERT_EQ(c.size(), 2u);
    EXPECT_EQ(to_text(c[0]), "[0=0,2=1]");
    EXPECT_EQ(to_text(c[1]), "[1=1]");
    EXPECT_EQ(parse_cylinders("[2=1,0=0]")[0], c[0]);
    EXPECT_THROW(parse_cylinders(""), ParseError);
    EXPECT_THROW(parse_cylinders("[0=0"), ParseError);
}
