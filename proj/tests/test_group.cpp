#include <gtest/gtest.h>

#include <set>

#include "meanlab/group.hpp"

using namespace meanlab;

TEST(GroupElem, Arithmetic) {
    GroupElem a{1, -2}, b{3, 5};
    EXPECT_EQ(a + b, (GroupElem{4, 3}));
    EXPECT_EQ(a - b, (GroupElem{-2, -7}));
    EXPECT_EQ(-a, (GroupElem{-1, 2}));
    EXPECT_EQ(b.max_norm(), 5);
    EXPECT_TRUE(GroupElem::zero(3).is_zero());
    EXPECT_THROW(a + GroupElem::scalar(1), UsageError);
}

TEST(GroupElem, OverflowIsReported) {
    GroupElem big = GroupElem::scalar(std::numeric_limits<std::int64_t>::max());
    EXPECT_THROW(big + GroupElem::scalar(1), OverflowError);
}

TEST(Window, IntervalAndBox) {
    auto w = Window::interval(-2, 3);
    EXPECT_EQ(w.size(), 5u);
    EXPECT_TRUE(w.is_interval());
    auto b = Window::box(GroupElem{0, 0}, GroupElem{2, 3});
    EXPECT_EQ(b.size(), 6u);
    EXPECT_TRUE(b.contains(GroupElem{1, 2}));
    EXPECT_FALSE(b.contains(GroupElem{2, 0}));
    EXPECT_EQ(Window::centered_box(2, 1).size(), 9u);
}

TEST(Window, SetOperations) {
    auto a = Window::interval(0, 10), b = Window::interval(5, 15);
    EXPECT_EQ(a.intersection_size(b), 5u);
    EXPECT_EQ(a.symmetric_difference_size(b), 10u);
    EXPECT_EQ(a.united(b).size(), 15u);
    EXPECT_TRUE(Window::interval(2, 4).is_subset_of(a));
    EXPECT_EQ(a.translate(GroupElem::scalar(5)).intersection_size(b), 10u);
}

TEST(InvarianceDefect, IntervalValues) {
    auto f = Window::interval(0, 10);
    EXPECT_EQ(invariance_defect(f, GroupElem::scalar(1)), make_rational(2, 10));
    EXPECT_EQ(invariance_defect(f, GroupElem::scalar(0)), Rational(0));
    EXPECT_EQ(invariance_defect(f, GroupElem::scalar(20)), Rational(2));
}

TEST(InvarianceDefect, BoxBoundAndDecay) {
    for (int d = 1; d <= 3; ++d) {
        GroupElem g(d);
        for (int i = 0; i < d; ++i) g[i] = (i % 2 ? -1 : 2);
        Rational prev = 3;
        const int top = d == 3 ? 6 : 12;
        for (std::int64_t n = 3; n <= top; ++n) {
            auto f = folner_window(CenteredBoxes{d, 1}, n);
            Rational side = 2 * n + 1;
            Rational defect = invariance_defect(f, g);
            Rational bound = Rational(2 * d * g.max_norm()) / side;
            EXPECT_LE(defect, bound) << "d=" << d << " n=" << n;
            EXPECT_LE(defect, prev);
            prev = defect;
        }
    }
}

TEST(IsInvariant, MonotoneInEps) {
    auto a = Window::interval(0, 40), f = Window::interval(0, 5);
    bool seen = false;
    for (int k = 0; k <= 20; ++k) {
        bool now = is_invariant(a, f, make_rational(k, 20));
        if (seen) {
            EXPECT_TRUE(now);
        }
        seen = seen || now;
    }
    EXPECT_TRUE(seen);
    EXPECT_FALSE(is_invariant(a, f, make_rational(1, 20)));
    EXPECT_TRUE(is_invariant(a, f, make_rational(1, 8)));
}

TEST(Enumeration, GoldenPrefix1D) {
    auto e = enumerate_group(1, 7);
    std::vector<std::int64_t> got;
    for (const auto& g : e) got.push_back(g[0]);
    EXPECT_EQ(got, (std::vector<std::int64_t>{0, 1, -1, 2, -2, 3, -3}));
}

TEST(Enumeration, GoldenPrefix2D) {
    auto e = enumerate_group(2, 9);
    std::vector<GroupElem> want{{0, 0}, {0, 1}, {0, -1}, {1, 0}, {1, 1}, {1, -1}, {-1, 0}, {-1, 1}, {-1, -1}};
    EXPECT_EQ(e, want);
}

TEST(Enumeration, BijectiveOntoShells) {
    for (int d = 1; d <= 3; ++d) {
        std::int64_t r = d == 3 ? 3 : 6;
        auto box = Window::centered_box(d, r);
        auto e = enumerate_group(d, box.size());
        std::set<GroupElem> seen(e.begin(), e.end());
        EXPECT_EQ(seen.size(), e.size());
        for (const auto& g : e) EXPECT_TRUE(box.contains(g));
        for (std::size_t i = 1; i < e.size(); ++i) EXPECT_LE(e[i - 1].max_norm(), e[i].max_norm());
    }
    EXPECT_EQ(enumerate_group(2, 50), enumerate_group(2, 50));
    EXPECT_THROW(enumerate_group(1, 0), UsageError);
}

TEST(Folner, Windows) {
    EXPECT_EQ(folner_window(CenteredBoxes{1, 1}, 3), Window::interval(-3, 4));
    auto w = folner_window(ShiftedBoxes{1, 1, 0, GeometricShift{2}}, 4);
    EXPECT_EQ(w, Window::interval(16, 20));
    ExplicitList list{{Window::interval(0, 2)}};
    EXPECT_EQ(folner_window(list, 1).size(), 2u);
    EXPECT_THROW(folner_window(list, 2), UsageError);
    EXPECT_FALSE(folner_checked(list));
    EXPECT_THROW(folner_window(CenteredBoxes{1, 1}, 0), UsageError);
}
