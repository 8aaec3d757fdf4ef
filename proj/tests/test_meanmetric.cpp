#include <gtest/gtest.h>

#include <random>

#include "meanlab/classify.hpp"
#include "meanlab/dsl.hpp"
#include "meanlab/meanmetric.hpp"
#include "oracles.hpp"

using namespace meanlab;

namespace {

Rational to_rational(const oracle::Q& q) { return Rational(q); }

}  // namespace

TEST(MeanDistance, PeriodicPairsMatchOracle) {
    std::mt19937_64 rng(5);
    const Rational slack = Rational(1, BigInt(1) << 100);
    for (int i = 0; i < 50; ++i) {
        std::size_t p = 1 + rng() % 12, q = 1 + rng() % 12;
        std::vector<Symbol> a(p), b(q);
        std::vector<int> ai(p), bi(q);
        for (std::size_t j = 0; j < p; ++j) ai[j] = a[j] = static_cast<Symbol>(rng() % 2);
        for (std::size_t j = 0; j < q; ++j) bi[j] = b[j] = static_cast<Symbol>(rng() % 2);
        auto x = ConfigDesc::periodic_word(a), y = ConfigDesc::periodic_word(b);
        auto bd = banach_mean_distance(x, y), wd = weyl_distance(x, y);
        Rational want = to_rational(oracle::periodic_mean_distance(ai, bi));
        EXPECT_TRUE(bd.exact());
        EXPECT_EQ(bd.lower, bd.upper);
        EXPECT_EQ(wd.lower, wd.upper);
        EXPECT_EQ(bd.lower, wd.lower);
        Rational diff = bd.lower - want;
        if (diff < 0) diff = -diff;
        EXPECT_LT(diff, slack);
    }
}

TEST(MeanDistance, FrozenValues) {
    auto alt = ConfigDesc::periodic_word({0, 1});
    EXPECT_EQ(banach_mean_distance(alt, ConfigDesc::constant(0)).upper, Rational(1, 2));
    EXPECT_EQ(banach_mean_distance(alt, alt.translated(GroupElem::scalar(1))).upper, Rational(1));
    EXPECT_EQ(banach_mean_distance(ConfigDesc::periodic_word({0, 0, 1}), ConfigDesc::constant(0)).upper, Rational(1, 3));
    // a finite defect is invisible to mean distances
    auto d = ConfigDesc::finite_defect(alt, {{GroupElem::scalar(3), 0}});
    EXPECT_EQ(banach_mean_distance(alt, d).upper, Rational(0));
    EXPECT_EQ(weyl_distance(alt, d).upper, Rational(0));
}

TEST(MeanDistance, FlipOnPeriodicSet) {
    auto x = ConfigDesc::seeded(2, 9);
    auto y = ConfigDesc::flip(x, parse_set("3Z"), 2);
    auto bd = banach_mean_distance(x, y);
    EXPECT_EQ(bd.lower, Rational(1, 3));
    EXPECT_EQ(bd.upper, Rational(1, 3));
}

TEST(MeanDistance, SeededPairsBanachWeylOverlap) {
    MeanParams p;
    p.n_max = 200;
    p.radius = 1000;
    p.k = 20;
    for (std::uint64_t s = 0; s < 5; ++s) {
        auto x = ConfigDesc::seeded(2, 100 + s), y = ConfigDesc::seeded(2, 200 + s);
        auto bd = banach_mean_distance(x, y, p), wd = weyl_distance(x, y, p);
        EXPECT_EQ(bd.mode, MeanMode::Windowed);
        EXPECT_LE(bd.lower, bd.upper);
        EXPECT_LE(wd.lower, wd.upper);
        EXPECT_LE(bd.lower, wd.upper);
        EXPECT_LE(wd.lower, bd.upper);
        EXPECT_LE(std::max(bd.upper, wd.upper) - std::min(bd.lower, wd.lower), Rational(1, 20));
    }
}

TEST(MeanDistance, SturmianCodingsOfOneRotation) {
    auto r = std::make_shared<const Rotation>(Rotation::golden());
    auto x = ConfigDesc::rotation_coding(r), y = ConfigDesc::rotation_coding(r, 1, 10);
    auto bd = banach_mean_distance(x, y);
    // offsets differ by 1/10 < alpha, 1 - alpha: mismatch density 2/10
    EXPECT_EQ(bd.lower, Rational(1, 5));
    EXPECT_EQ(bd.upper, Rational(1, 5));
}

TEST(Classify, FullShiftIsSensitive) {
    auto x = SubshiftSpec::full_shift(2);
    auto rep = classify_system(x);
    EXPECT_EQ(rep.verdict, SystemVerdict::Sensitive);
    EXPECT_EQ(rep.grade, "certified");
    ASSERT_TRUE(rep.points.front().delta0);
    EXPECT_GE(*rep.points.front().delta0, Rational(1, 4));
    for (const auto& p : rep.points) EXPECT_NE(p.verdict, PointVerdict::Equicontinuous);
}

TEST(Classify, PeriodicOrbitsAreEquicontinuous) {
    for (auto name : {"periodic:01", "periodic:001", "periodic:0110", "indicator:3Z+1"}) {
        auto x = parse_system(name);
        auto rep = classify_system(x, default_classify_params(x));
        EXPECT_EQ(rep.verdict, SystemVerdict::AlmostEquicontinuous) << name;
        EXPECT_EQ(rep.grade, "exact") << name;
        for (const auto& p : rep.points) EXPECT_EQ(p.verdict, PointVerdict::Equicontinuous);
    }
}

TEST(Classify, SturmianIsAlmostEquicontinuousEmpirically) {
    auto x = parse_system("sturmian:golden");
    auto rep = classify_system(x, default_classify_params(x));
    EXPECT_EQ(rep.verdict, SystemVerdict::AlmostEquicontinuous);
    EXPECT_EQ(rep.grade, "empirical");
}

TEST(Classify, NonTransitiveIsRejected) {
    auto x = SubshiftSpec::sft({{1, 1}, {0, 1}});
    try {
        classify_system(x);
        FAIL() << "expected a precondition error";
    } catch (const PreconditionError& e) {
        EXPECT_NE(std::string(e.what()).find("dichotomy requires transitivity"), std::string::npos);
    }
}

TEST(Classify, GoldenMeanSftIsSensitive) {
    auto rep = classify_system(SubshiftSpec::golden_mean());
    EXPECT_EQ(rep.verdict, SystemVerdict::Sensitive);
}

TEST(MeanDistance, ConstantAgainstBlockIndicator) {
    MeanParams p;
    p.n_max = 64;
    p.radius = 4096;
    auto xi = ConfigDesc::indicator(parse_set("blocks(j=1..: 2^j, j)"));
    auto bd = banach_mean_distance(ConfigDesc::constant(0), xi, p);
    EXPECT_EQ(bd.mode, MeanMode::Windowed);
    EXPECT_GT(bd.lower, Rational(0));
    // the complement of the blocks carries full density, so the upper value is 1
    EXPECT_EQ(bd.upper, Rational(1));
}
