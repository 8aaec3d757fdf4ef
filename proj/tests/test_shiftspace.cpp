#include <gtest/gtest.h>

#include <cmath>

#include "meanlab/dsl.hpp"
#include "meanlab/subshift.hpp"
#include "oracles.hpp"

using namespace meanlab;

namespace {

std::shared_ptr<const Rotation> golden() { return std::make_shared<const Rotation>(Rotation::golden()); }

const long double kGoldenAlpha = (std::sqrt(5.0L) - 1.0L) / 2.0L;

}  // namespace

TEST(Config, ConstantPeriodicTranslate) {
    auto x = ConfigDesc::periodic_word({0, 1, 1});
    EXPECT_EQ(x.at(0), 0);
    EXPECT_EQ(x.at(4), 1);
    EXPECT_EQ(x.at(-3), 0);
    EXPECT_EQ(x.translated(GroupElem::scalar(1)).at(0), 1);
    EXPECT_EQ(ConfigDesc::constant(2).at(-99), 2);
    auto d = ConfigDesc::finite_defect(ConfigDesc::constant(0), {{GroupElem::scalar(5), 1}});
    EXPECT_EQ(d.at(5), 1);
    EXPECT_EQ(d.at(4), 0);
}

TEST(Config, RotationCodingMatchesFloorFormula) {
    auto x = ConfigDesc::rotation_coding(golden());
    for (std::int64_t n = -2000; n <= 2000; ++n) EXPECT_EQ(x.at(n), oracle::sturmian_symbol(kGoldenAlpha, n)) << n;
}

TEST(Config, SeededIsDeterministic) {
    auto a = ConfigDesc::seeded(2, 42), b = ConfigDesc::seeded(2, 42), c = ConfigDesc::seeded(2, 43);
    int diff = 0;
    for (std::int64_t n = 0; n < 200; ++n) {
        EXPECT_EQ(a.at(n), b.at(n));
        diff += a.at(n) != c.at(n);
    }
    EXPECT_GT(diff, 50);
}

TEST(Config, IndicatorVisitDuality) {
    auto e = parse_set("union(5Z, {1,2,3})");
    auto xi = ConfigDesc::indicator(e);
    auto w = Window::interval(-30, 31);
    auto v = visit_times(xi, CylinderSet::at_origin(0), w);
    std::vector<GroupElem> want;
    for (const auto& g : w)
        if (e.contains(g)) want.push_back(g);
    EXPECT_EQ(v, Window(want));
}

TEST(Distance, TruncatedBounds) {
    auto x = ConfigDesc::constant(0), y = ConfigDesc::periodic_word({0, 1});
    auto d = distance(x, y, 5);
    // positions 0, 1, -1, 2, -2: mismatches at 1 and -1
    EXPECT_EQ(d.lo, Rational(1, 4) + Rational(1, 8));
    EXPECT_EQ(d.hi, d.lo + Rational(1, 32));
    EXPECT_EQ(distance(x, x, 10).lo, Rational(0));
    EXPECT_THROW(distance(x, y, 0), UsageError);
}

TEST(Cylinder, MergeAndContains) {
    CylinderSet a(Window::interval(0, 2), {0, 1}), b(Window({GroupElem::scalar(1)}), {1}),
        c(Window({GroupElem::scalar(1)}), {0});
    auto m = CylinderSet::merge({a, b});
    ASSERT_TRUE(m);
    EXPECT_EQ(m->window.size(), 2u);
    EXPECT_FALSE(CylinderSet::merge({a, c}));
    EXPECT_TRUE(a.contains(ConfigDesc::periodic_word({0, 1})));
    EXPECT_TRUE(a.translated(GroupElem::scalar(1)).contains(ConfigDesc::periodic_word({1, 0})));
    auto around = enumeration_cylinder(ConfigDesc::periodic_word({0, 1}), 3);
    EXPECT_EQ(around.window, Window::interval(-1, 2));
}

TEST(Subshift, PatternCountsAgainstDynamicProgramming) {
    const std::vector<std::vector<std::vector<int>>> mats{
        {{1, 1}, {1, 0}}, {{1, 1, 1}, {1, 0, 1}, {1, 1, 0}}, {{0, 1, 0}, {0, 0, 1}, {1, 1, 0}}, {{1, 1}, {0, 1}}};
    for (const auto& m : mats) {
        auto x = SubshiftSpec::sft(m);
        for (int n = 1; n <= 14; ++n)
            EXPECT_EQ(x.pattern_count(Window::interval(0, n)).str(), oracle::sft_words_essential(m, n).str());
    }
    auto f = SubshiftSpec::full_shift(3);
    EXPECT_EQ(f.pattern_count(Window::interval(0, 5)), BigInt(243));
    EXPECT_EQ(SubshiftSpec::full_shift(2, 2).pattern_count(Window::box(GroupElem{0, 0}, GroupElem{2, 2})), BigInt(16));
}

TEST(Subshift, DeadStatesAreTrimmed) {
    // state 2 has no successor
    std::vector<std::vector<int>> m{{1, 1, 1}, {1, 0, 0}, {0, 0, 0}};
    auto x = SubshiftSpec::sft(m);
    EXPECT_EQ(x.pattern_count(Window::interval(0, 6)).str(), oracle::sft_words_essential(m, 6).str());
    EXPECT_NE(x.pattern_count(Window::interval(0, 6)).str(), oracle::sft_words(m, 6).str());
    EXPECT_FALSE(x.cylinder_nonempty(CylinderSet::at_origin(2)));
}

TEST(Subshift, SturmianComplexity) {
    auto x = SubshiftSpec::sturmian(golden());
    std::vector<int> word;
    for (std::int64_t n = 0; n < 6000; ++n) word.push_back(oracle::sturmian_symbol(kGoldenAlpha, n));
    for (int n = 1; n <= 30; ++n) {
        EXPECT_EQ(oracle::distinct_factors(word, static_cast<std::size_t>(n)), static_cast<std::size_t>(n + 1));
        EXPECT_EQ(x.pattern_count(Window::interval(0, n)), BigInt(n + 1));
    }
}

TEST(Subshift, CylinderNonemptiness) {
    auto g = SubshiftSpec::golden_mean();
    EXPECT_FALSE(g.cylinder_nonempty(CylinderSet(Window::interval(0, 2), {1, 1})));
    EXPECT_TRUE(g.cylinder_nonempty(CylinderSet(Window({GroupElem::scalar(0), GroupElem::scalar(2)}), {1, 1})));
    auto p = SubshiftSpec::periodic_orbit(ConfigDesc::periodic_word({0, 0, 1}));
    EXPECT_FALSE(p.cylinder_nonempty(CylinderSet(Window({GroupElem::scalar(0), GroupElem::scalar(1)}), {1, 1})));
    EXPECT_TRUE(p.cylinder_nonempty(CylinderSet(Window({GroupElem::scalar(0), GroupElem::scalar(3)}), {1, 1})));
}

TEST(Subshift, Transitivity) {
    EXPECT_EQ(transitivity_check(SubshiftSpec::golden_mean()).verdict, Transitivity::Transitive);
    EXPECT_EQ(transitivity_check(SubshiftSpec::sft({{1, 1}, {0, 1}})).verdict, Transitivity::NotTransitive);
    EXPECT_EQ(transitivity_check(SubshiftSpec::sturmian(golden())).verdict, Transitivity::Transitive);
    EXPECT_EQ(transitivity_check(SubshiftSpec::full_shift(2)).verdict, Transitivity::Transitive);
}

TEST(Subshift, TransitivePointSeesAllShortWords) {
    auto x = SubshiftSpec::golden_mean();
    auto p = transitive_point(x);
    for (int n = 1; n <= 6; ++n) {
        std::set<std::vector<Symbol>> seen;
        for (std::int64_t t = -5000; t <= 5000; ++t) {
            std::vector<Symbol> w;
            for (int i = 0; i < n; ++i) w.push_back(p.at(t + i));
            seen.insert(w);
        }
        EXPECT_EQ(std::to_string(seen.size()), oracle::sft_words(std::vector<std::vector<int>>{{1, 1}, {1, 0}}, n).str());
    }
}

TEST(Rotation, ConvergentBrackets) {
    auto r = Rotation::golden();
    auto b = r.tightest_bracket();
    EXPECT_LT(to_long_double(b.lo), kGoldenAlpha + 1e-15L);
    EXPECT_GT(to_long_double(b.hi), kGoldenAlpha - 1e-15L);
    for (std::int64_t n : {1, 7, 1000, 123456789})
        EXPECT_EQ(r.floor_at(n), static_cast<std::int64_t>(std::floor(n * kGoldenAlpha)));
}
