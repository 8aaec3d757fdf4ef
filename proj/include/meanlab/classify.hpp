#pragma once

// Mean equicontinuity versus mean sensitivity of points and of transitive
// systems, from points sampled inside shrinking cylinders.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "meanlab/config.hpp"
#include "meanlab/error.hpp"
#include "meanlab/group.hpp"
#include "meanlab/meanmetric.hpp"
#include "meanlab/rational.hpp"
#include "meanlab/subset.hpp"
#include "meanlab/subshift.hpp"

namespace meanlab {

enum class PointVerdict { Equicontinuous, Sensitive, Inconclusive };

inline std::string to_string(PointVerdict v) {
    switch (v) {
        case PointVerdict::Equicontinuous: return "equicontinuous";
        case PointVerdict::Sensitive: return "sensitive";
        case PointVerdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

inline std::vector<Rational> dyadic_grid(int from, int to) {
    std::vector<Rational> out;
    for (int j = from; j <= to; ++j) out.push_back(Rational(1) / (BigInt(1) << j));
    return out;
}

struct ClassifyParams {
    std::vector<Rational> eps_grid = dyadic_grid(1, 6);
    std::vector<int> delta_exponents = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};  // delta = 2^-j
    std::size_t budget = 8;
    MeanParams mean;
};

struct NeighborSample {
    ConfigDesc y;
    std::string label;
    MeanDistanceEstimate d;
};

struct LevelEvidence {
    int delta_exponent = 0;
    std::size_t samples = 0;
    Rational max_lower;  // best sensitivity witness at this level
    Rational max_upper;  // worst case for equicontinuity
    std::string witness;
    bool exact = true;
};

struct EpsEvidence {
    Rational eps;
    std::optional<int> delta_exponent;  // a level where every sample stays below eps
};

struct PointReport {
    std::string point;
    PointVerdict verdict = PointVerdict::Inconclusive;
    bool exact = false;             // sample sets exhaustive and every distance exact
    bool certified = false;         // sensitive witnesses carry exact lower bounds
    std::optional<Rational> delta0; // sensitivity constant when sensitive
    std::vector<LevelEvidence> levels;
    std::vector<EpsEvidence> eps;
};

namespace detail {

/// Offsets of the enumeration window of a given depth in Z, as [a, b].
inline std::pair<std::int64_t, std::int64_t> depth_interval(std::size_t depth) {
    auto gs = enumerate_group(1, depth);
    std::int64_t a = 0, b = 0;
    for (const auto& g : gs) {
        a = std::min(a, g[0]);
        b = std::max(b, g[0]);
    }
    return {a, b};
}

inline std::vector<NeighborSample> full_shift_samples(const SubshiftSpec& sys, const ConfigDesc& x,
                                                      const CylinderSet& cyl, std::size_t budget) {
    const int d = sys.dim();
    const int k = sys.alphabet_size();
    std::vector<NeighborSample> out;
    if (k < 2) return out;
    SubsetDesc window = SubsetDesc::explicit_set(cyl.window, d);
    for (std::size_t t = 1; t <= budget && t <= 20; ++t) {
        GroupElem m(d);
        for (int i = 0; i < d; ++i) m[i] = 1;
        m[0] = std::int64_t{1} << t;
        SubsetDesc lattice = SubsetDesc::periodic(PeriodicSet(m, {GroupElem::zero(d)}));
        SubsetDesc s = SubsetDesc::intersected(lattice, window.complemented());
        out.push_back({ConfigDesc::flip(x, s, k), "flip on " + std::to_string(m[0]) + "Z off the window", {}});
    }
    return out;
}

inline std::vector<NeighborSample> sft_samples(const SubshiftSpec& sys, const ConfigDesc& x, std::size_t depth,
                                               std::size_t budget) {
    std::vector<NeighborSample> out;
    auto [a, b] = depth_interval(depth);
    std::vector<Symbol> w;
    for (std::int64_t n = a; n <= b; ++n) w.push_back(x.at(n));
    for (const auto& p : sys.cycles(std::min<std::size_t>(6, sys.as<SFT>()->adj.size() + 2))) {
        if (out.size() >= budget) break;
        auto c1 = sys.connector(p.back(), w.front());
        auto c2 = sys.connector(w.back(), p.front());
        if (!c1 || !c2) continue;
        std::vector<Symbol> table(p.begin(), p.end());
        table.insert(table.end(), c1->begin(), c1->end());
        const std::int64_t lo = a - static_cast<std::int64_t>(table.size());
        table.insert(table.end(), w.begin(), w.end());
        table.insert(table.end(), c2->begin(), c2->end());
        table.push_back(p.front());
        const std::int64_t end = lo + static_cast<std::int64_t>(table.size()) - 1;
        ConfigDesc cyc = ConfigDesc::periodic_word(p);
        ConfigDesc y = ConfigDesc::spliced(lo, std::move(table), cyc.translated(GroupElem{-lo}), cyc.translated(GroupElem{-end}));
        std::string label = "glued on cycle ";
        for (auto s : p) label += std::to_string(s);
        out.push_back({y, label, {}});
    }
    return out;
}

inline std::vector<NeighborSample> sturmian_samples(const SubshiftSpec& sys, const ConfigDesc& x, std::size_t depth,
                                                    std::size_t budget) {
    std::vector<NeighborSample> out;
    const auto* rc = x.as<config_node::RotationCoding>();
    if (!rc || rc->ceiling) return out;
    const Rotation& r = *sys.as<Sturmian>()->rotation;
    if (!(r == *rc->rotation)) return out;
    auto [a, b] = depth_interval(depth);
    const Rational beta = make_rational(rc->beta_num, rc->beta_den);
    // breakpoints {-m alpha}, m in [-(b+1), -a]; find the nearest ones around beta
    std::optional<std::int64_t> above, below;
    for (std::int64_t m = -(b + 1); m <= -a; ++m) {
        bool is_below = r.frac_below(m, rc->beta_num, rc->beta_den);  // {m alpha} < beta
        bool is_equal = m == 0 && beta == 0;
        if (is_below || is_equal) {
            if (!below || r.frac_less(*below, m)) below = m;
        } else {
            if (!above || r.frac_less(m, *above)) above = m;
        }
    }
    auto gap_to = [&](std::int64_t m, bool up) -> Rational {
        Rational width = Rational(1) / (BigInt(1) << 40);
        Interval f = r.frac_bracket(m, width);
        return up ? f.lo - beta : beta - f.hi;
    };
    Rational up_gap = above ? gap_to(*above, true) : Rational(1) - beta;
    Rational down_gap = (below && !(*below == 0 && beta == 0)) ? gap_to(*below, false) : Rational(0);
    auto add_side = [&](const Rational& gap, int sign) {
        if (gap <= 0) return;
        int t = 1;
        while (Rational(static_cast<std::int64_t>(budget) + 1) / (BigInt(1) << t) >= gap) ++t;
        for (std::size_t i = 1; i <= budget / 2 + budget % 2 && out.size() < budget; ++i) {
            Rational b2 = beta + sign * Rational(static_cast<std::int64_t>(i)) / (BigInt(1) << t);
            b2 -= Rational(BigInt(boost::multiprecision::numerator(b2) / boost::multiprecision::denominator(b2)));
            if (b2 < 0) b2 += 1;
            auto num = boost::multiprecision::numerator(b2).convert_to<std::int64_t>();
            auto den = boost::multiprecision::denominator(b2).convert_to<std::int64_t>();
            if (den > kBetaDenCap) return;
            out.push_back({ConfigDesc::rotation_coding(rc->rotation, num, den), "offset " + to_string(b2), {}});
        }
    };
    add_side(up_gap, 1);
    add_side(down_gap, -1);
    return out;
}

inline std::vector<NeighborSample> translate_samples(const SubshiftSpec& sys, const ConfigDesc& x,
                                                     const CylinderSet& cyl, std::size_t budget, bool exhaustive) {
    std::vector<NeighborSample> out;
    for (const auto& t : sys.translation_range()) {
        if (!exhaustive && out.size() >= budget) break;
        if (t.is_zero()) continue;
        ConfigDesc y = x.translated(t);
        if (cyl.contains(y)) out.push_back({y, "translate by " + t.str(), {}});
    }
    return out;
}

}  // namespace detail

/// Points of X in the depth-j enumeration cylinder around x, with their
/// mean distances to x.
inline std::vector<NeighborSample> cylinder_samples(const SubshiftSpec& sys, const ConfigDesc& x, std::size_t depth,
                                                    std::size_t budget, const MeanParams& mp) {
    CylinderSet cyl = enumeration_cylinder(x, depth);
    std::vector<NeighborSample> s;
    if (sys.as<FullShift>()) s = detail::full_shift_samples(sys, x, cyl, budget);
    else if (sys.as<SFT>()) s = detail::sft_samples(sys, x, depth, budget);
    else if (sys.as<Sturmian>()) s = detail::sturmian_samples(sys, x, depth, budget);
    else s = detail::translate_samples(sys, x, cyl, budget, sys.as<PeriodicOrbit>() != nullptr);
    std::vector<NeighborSample> kept;
    for (auto& n : s) {
        if (!cyl.contains(n.y)) continue;  // samplers must stay inside the cylinder
        n.d = weyl_distance(x, n.y, mp);
        kept.push_back(std::move(n));
    }
    return kept;
}

inline PointReport classify_point(const SubshiftSpec& sys, const ConfigDesc& x, const ClassifyParams& p = {},
                                  std::string label = "x") {
    if (p.eps_grid.empty() || p.delta_exponents.empty()) throw UsageError("classification needs nonempty grids");
    if (sys.dim() != 1 && !sys.as<FullShift>() && !sys.as<PeriodicOrbit>())
        throw UnsupportedShape("classification samples cylinders in Z only for this system");
    PointReport rep;
    rep.point = std::move(label);
    const bool finite = sys.as<PeriodicOrbit>() != nullptr;
    bool all_exact = true;
    for (int j : p.delta_exponents) {
        if (j < 1) throw UsageError("delta exponents must be positive");
        auto samples = cylinder_samples(sys, x, static_cast<std::size_t>(j), p.budget, p.mean);
        LevelEvidence lv;
        lv.delta_exponent = j;
        lv.samples = samples.size();
        lv.max_lower = 0;
        lv.max_upper = 0;
        for (const auto& s : samples) {
            if (s.d.lower > lv.max_lower) {
                lv.max_lower = s.d.lower;
                lv.witness = s.label;
            }
            lv.max_upper = std::max(lv.max_upper, s.d.upper);
            if (!s.d.exact()) lv.exact = false;
        }
        all_exact = all_exact && lv.exact;
        rep.levels.push_back(std::move(lv));
    }
    // sensitivity: one eps exceeded by a witness in every tried cylinder
    std::vector<Rational> eps = p.eps_grid;
    std::sort(eps.begin(), eps.end(), std::greater<>());
    for (const auto& e : eps) {
        bool everywhere = std::all_of(rep.levels.begin(), rep.levels.end(),
                                      [&](const LevelEvidence& l) { return l.samples > 0 && l.max_lower > e; });
        if (everywhere) {
            rep.delta0 = e;
            break;
        }
    }
    for (const auto& e : p.eps_grid) {
        EpsEvidence ev{e, std::nullopt};
        for (const auto& l : rep.levels)
            if (l.max_upper < e) {
                ev.delta_exponent = l.delta_exponent;
                break;
            }
        rep.eps.push_back(ev);
    }
    if (rep.delta0) {
        rep.verdict = PointVerdict::Sensitive;
        rep.certified = std::all_of(rep.levels.begin(), rep.levels.end(), [](const LevelEvidence& l) { return l.exact; });
    } else if (std::all_of(rep.eps.begin(), rep.eps.end(), [](const EpsEvidence& e) { return e.delta_exponent.has_value(); })) {
        rep.verdict = PointVerdict::Equicontinuous;
        rep.exact = finite && all_exact;
    }
    return rep;
}

enum class SystemVerdict { AlmostEquicontinuous, Sensitive, Inconclusive };

inline std::string to_string(SystemVerdict v) {
    switch (v) {
        case SystemVerdict::AlmostEquicontinuous: return "almost-equicontinuous";
        case SystemVerdict::Sensitive: return "sensitive";
        case SystemVerdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

struct SystemReport {
    std::string system;
    SystemVerdict verdict = SystemVerdict::Inconclusive;
    std::string grade;  // exact, certified or empirical
    std::vector<PointReport> points;
};

/// Sample points: the transitive point first, then a few others.
inline std::vector<std::pair<std::string, ConfigDesc>> classification_points(const SubshiftSpec& sys) {
    std::vector<std::pair<std::string, ConfigDesc>> pts;
    pts.emplace_back("transitive point", transitive_point(sys));
    if (auto* f = sys.as<FullShift>()) {
        pts.emplace_back("seeded point", ConfigDesc::seeded(f->k, 7, f->dim));
        pts.emplace_back("constant point", ConfigDesc::constant(0, f->dim));
    } else if (sys.as<SFT>()) {
        auto cyc = sys.cycles(4);
        for (std::size_t i = 0; i < cyc.size() && i < 2; ++i) pts.emplace_back("periodic cycle point", ConfigDesc::periodic_word(cyc[i]));
    } else if (auto* s = sys.as<Sturmian>()) {
        pts.emplace_back("coding at offset 1/3", ConfigDesc::rotation_coding(s->rotation, 1, 3));
        pts.emplace_back("coding at offset 2/5", ConfigDesc::rotation_coding(s->rotation, 2, 5));
    } else if (auto* po = sys.as<PeriodicOrbit>()) {
        for (const auto& t : sys.translation_range())
            if (!t.is_zero()) pts.emplace_back("translate " + t.str(), po->point.translated(t));
    }
    return pts;
}

/// Grids per system: Sturmian neighbourhoods shrink slowly in the cylinder
/// depth, so their delta levels extend to 2^-256 and eps stops at 2^-5.
inline ClassifyParams default_classify_params(const SubshiftSpec& sys) {
    ClassifyParams p;
    if (sys.as<Sturmian>()) {
        p.eps_grid = dyadic_grid(1, 5);
        p.delta_exponents = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 16, 32, 64, 128, 256};
    }
    return p;
}

/// The dichotomy for a transitive system: sensitive, or almost equicontinuous.
inline SystemReport classify_system(const SubshiftSpec& sys, const ClassifyParams& p = {}) {
    if (transitivity_check(sys).verdict != Transitivity::Transitive)
        throw PreconditionError("dichotomy requires transitivity");
    SystemReport rep;
    rep.system = sys.name();
    for (auto& [label, pt] : classification_points(sys)) rep.points.push_back(classify_point(sys, pt, p, label));
    const auto& head = rep.points.front();
    if (head.verdict == PointVerdict::Sensitive) {
        rep.verdict = SystemVerdict::Sensitive;
        rep.grade = head.certified ? "certified" : "empirical";
    } else if (head.verdict == PointVerdict::Equicontinuous) {
        rep.verdict = SystemVerdict::AlmostEquicontinuous;
        bool all_exact = std::all_of(rep.points.begin(), rep.points.end(), [](const PointReport& r) {
            return r.verdict == PointVerdict::Equicontinuous && r.exact;
        });
        rep.grade = all_exact ? "exact" : "empirical";
    } else {
        rep.grade = "empirical";
    }
    return rep;
}

}  // namespace meanlab
