#include <gtest/gtest.h>

#include <random>

#include "meanlab/correspondence.hpp"
#include "meanlab/dsl.hpp"
#include "oracles.hpp"

using namespace meanlab;

namespace {

std::vector<bool> mask_of(const PeriodicSet& p) {
    const auto m = p.modulus()[0];
    std::vector<bool> mask(static_cast<std::size_t>(m));
    for (std::int64_t r = 0; r < m; ++r) mask[static_cast<std::size_t>(r)] = p.contains(GroupElem::scalar(r));
    return mask;
}

Rational q(const oracle::Q& v) { return Rational(v); }

}  // namespace

TEST(Indicator, ZeroOnTheSet) {
    auto e = parse_set("union(4Z, 4Z+1)");
    auto xi = indicator_config(e);
    for (std::int64_t n = -20; n <= 20; ++n) EXPECT_EQ(xi.at(n), e.contains(GroupElem::scalar(n)) ? 0 : 1);
    EXPECT_EQ(indicator_config(parse_set("Z")).at(7), 0);
    EXPECT_EQ(indicator_config(parse_set("compl(Z)")).at(7), 1);
}

TEST(EmpiricalMeasure, SymbolMassesSumToOne) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 30; ++i) {
        auto e = random_periodic_set(rng);
        auto m = empirical_measure(indicator_config(e), Window::interval(static_cast<std::int64_t>(rng() % 50), 70));
        Rational total = 0;
        for (const auto& [sym, mass] : m.symbol_masses()) total += mass;
        EXPECT_EQ(total, Rational(1));
    }
    EXPECT_THROW(empirical_measure(ConfigDesc::constant(0), Window()), UsageError);
}

TEST(EmpiricalMeasure, OriginMassIsWindowDensity) {
    auto e = parse_set("3Z+1");
    auto m = empirical_measure(indicator_config(e), Window::interval(0, 9));
    EXPECT_EQ(m.mass(origin_zero()), Rational(1, 3));
    auto m2 = empirical_measure(indicator_config(e), Window::interval(1, 2));
    EXPECT_EQ(m2.mass(origin_zero()), Rational(1));
}

TEST(InvarianceDefect, BoundedByWindowDefect) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        auto e = random_periodic_set(rng);
        auto lo = static_cast<std::int64_t>(rng() % 100) - 50;
        auto len = static_cast<std::int64_t>(1 + rng() % 40);
        auto m = empirical_measure(indicator_config(e), Window::interval(lo, lo + len));
        auto g = GroupElem::scalar(static_cast<std::int64_t>(rng() % 21) - 10);
        CylinderSet b(Window::interval(0, 2), {static_cast<Symbol>(rng() % 2), static_cast<Symbol>(rng() % 2)});
        auto d = invariance_defect_measure(m, g, b);
        EXPECT_TRUE(d.within()) << i;
        EXPECT_LE(d.bound, Rational(std::min<std::int64_t>(2 * std::abs(g[0]), 2 * len), len));
    }
}

TEST(CorrespondenceRows, MassMatchesDensityOnPeriodicSets) {
    std::mt19937_64 rng(21);
    std::vector<DensityParams> sched{{4, 64}, {8, 64}, {16, 64}};
    for (int i = 0; i < 40; ++i) {
        auto e = random_periodic_set(rng);
        auto mask = mask_of(*e.as_periodic());
        Rational want = q(oracle::shifted_intersection_density(mask, {0}));
        for (const auto& row : correspondence_rows(e, sched)) {
            EXPECT_TRUE(row.contained);
            EXPECT_EQ(row.density.upper, want);
            EXPECT_EQ(row.mass, want);
        }
    }
}

TEST(CorrespondenceRows, BlockSetStaysInsideTheInterval) {
    auto e = parse_set("blocks(j=1..: 2^j, j)");
    for (const auto& row : correspondence_rows(e, {{4, 4096}, {8, 4096}})) {
        EXPECT_FALSE(row.density.exact());
        EXPECT_TRUE(row.contained);
        EXPECT_GE(row.mass, row.density.lower);
        EXPECT_EQ(row.mass, Rational(1));
    }
}

TEST(CorrespondenceRows, FiniteBlockUnionHasDensityZero) {
    for (const auto& row : correspondence_rows(parse_set("blocks(j=1..12: 2^j, j)"), {{4, 4096}})) {
        EXPECT_TRUE(row.density.exact());
        EXPECT_EQ(row.mass, Rational(0));
    }
}

TEST(MultiIntersection, ProgressionExamples) {
    auto two = multi_intersection_search(parse_set("2Z"), Window::interval(1, 11), 2, Rational(1, 10));
    EXPECT_TRUE(two.met);
    EXPECT_TRUE(two.exact);
    EXPECT_EQ(two.density.lower, Rational(1, 2));
    EXPECT_EQ((two.shifts[1][0] - two.shifts[0][0]) % 2, 0);
    // first subset in lexicographic order that reaches the bound
    EXPECT_EQ(two.shifts, (std::vector<GroupElem>{GroupElem::scalar(1), GroupElem::scalar(3)}));

    auto three = multi_intersection_search(parse_set("3Z"), Window::interval(1, 8), 3, Rational(1, 20));
    EXPECT_TRUE(three.met);
    EXPECT_EQ(three.density.lower, Rational(1, 3));
    EXPECT_EQ(three.target, Rational(1, 27) - Rational(1, 20));
    for (const auto& s : three.shifts) EXPECT_EQ((s[0] - three.shifts[0][0]) % 3, 0);
}

TEST(MultiIntersection, SeededHalfSetsAgainstPairOracle) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 60; ++i) {
        auto e = random_half_set(rng);
        auto mask = mask_of(*e.as_periodic());
        const auto m = static_cast<std::int64_t>(mask.size());
        oracle::Q best = 0;
        for (std::int64_t a = 1; a <= m; ++a)
            for (std::int64_t b = a + 1; b <= m + 1; ++b) best = std::max(best, oracle::shifted_intersection_density(mask, {a, b}));
        auto w = multi_intersection_search(e, Window::interval(1, m + 2), 2, Rational(1, 10));
        EXPECT_EQ(w.density.lower, q(best));
        EXPECT_TRUE(w.met);
        EXPECT_EQ(w.base, Rational(1, 2));
    }
}

TEST(MultiIntersection, Limits) {
    EXPECT_THROW(multi_intersection_search(parse_set("2Z"), Window::interval(0, 2), 3, 0), UsageError);
    EXPECT_THROW(multi_intersection_search(parse_set("2Z"), Window::interval(0, 60), 10, 0), CapExceeded);
}

TEST(PairSearch, ProgressionExamples) {
    auto p = pair_density_lemma(parse_set("2Z"), Window::interval(1, 101));
    EXPECT_TRUE(p.met);
    EXPECT_EQ(p.density.lower, Rational(1, 2));
    EXPECT_EQ(p.target, Rational(1, 8));
    auto r = pair_density_lemma(parse_set("3Z+1"), Window::interval(1, 11));
    EXPECT_TRUE(r.met);
    EXPECT_EQ(r.density.lower, Rational(1, 3));
    EXPECT_EQ(r.target, Rational(1, 18));
    EXPECT_EQ((r.shifts[1][0] - r.shifts[0][0]) % 3, 0);
    EXPECT_THROW(pair_density_lemma(parse_set("2Z"), Window::interval(0, 1)), UsageError);
}

TEST(PairSearch, SeededPeriodicSets) {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 60; ++i) {
        auto e = random_periodic_set(rng, 12, Rational(3, 10));
        auto mask = mask_of(*e.as_periodic());
        const auto m = static_cast<std::int64_t>(mask.size());
        auto p = pair_density_lemma(e, Window::interval(1, m + 2));
        oracle::Q base = oracle::shifted_intersection_density(mask, {0});
        EXPECT_EQ(p.base, q(base));
        EXPECT_TRUE(p.met);
        EXPECT_EQ(p.density.lower, q(oracle::shifted_intersection_density(mask, {p.shifts[0][0], p.shifts[1][0]})));
    }
}

TEST(FiniteChecker, SameSetEverywhere) {
    FiniteMeasureSpace s;
    s.weights.assign(10, Rational(1, 10));
    std::vector<bool> e(10, false);
    for (int i = 0; i < 5; ++i) e[static_cast<std::size_t>(i)] = true;
    s.subsets.assign(4, e);
    auto w = finite_intersection_checker(s, 3, Rational(1, 100));
    EXPECT_TRUE(w.found);
    EXPECT_EQ(w.indices, (std::vector<std::size_t>{0, 1, 2}));
    EXPECT_EQ(w.mass, Rational(1, 2));
    EXPECT_EQ(w.target, Rational(1, 8) - Rational(1, 100));
}

TEST(FiniteChecker, DisjointPairIsNotACounterexample) {
    FiniteMeasureSpace s;
    s.weights = {Rational(1, 2), Rational(1, 2)};
    s.subsets = {{true, false}, {false, true}};
    auto w = finite_intersection_checker(s, 2, Rational(1, 5), Rational(1, 2));
    EXPECT_FALSE(w.found);
    EXPECT_EQ(w.mass, Rational(0));
    EXPECT_NE(w.note.find("not a counterexample"), std::string::npos);
}

TEST(FiniteChecker, SeededInstancesAgainstPairOracle) {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 40; ++i) {
        auto s = random_finite_space(rng, 20, 50, Rational(2, 5));
        for (const auto& e : s.subsets) EXPECT_GE(s.mass(e), Rational(2, 5));
        auto w = finite_intersection_checker(s, 2, Rational(1, 20), Rational(2, 5));
        EXPECT_TRUE(w.found);
        EXPECT_GE(q(oracle::best_pair_mass(s.subsets)), w.target);
        EXPECT_GE(w.mass, w.target);
    }
}

TEST(FiniteChecker, InvalidSpaces) {
    FiniteMeasureSpace s;
    s.weights = {Rational(1, 2), Rational(1, 3)};
    s.subsets = {{true, false}, {false, true}};
    EXPECT_THROW(finite_intersection_checker(s, 2, 0), UsageError);
    s.weights = {Rational(1, 2), Rational(1, 2)};
    EXPECT_THROW(finite_intersection_checker(s, 3, 0), UsageError);
    EXPECT_THROW(finite_intersection_checker(s, 1, 0, Rational(3, 4)), UsageError);
}
