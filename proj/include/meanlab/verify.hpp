#pragma once

// The verification table: one row per acceptance criterion, grouped in suites.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "meanlab/report.hpp"

namespace meanlab {

struct VerifyRow {
    int id = 0;
    std::string suite;
    std::string name;
    bool pass = false;
    Json measured;
};

struct VerifyReport {
    std::string suite;
    std::uint64_t seed = 0;
    std::vector<VerifyRow> rows;
    bool pass() const {
        for (const auto& r : rows)
            if (!r.pass) return false;
        return true;
    }
};

inline const std::vector<std::string>& verify_suites() {
    static const std::vector<std::string> s{"density", "meanmetric", "independence", "entropy", "correspondence", "all"};
    return s;
}

/// Candidate IE pairs: sample points and their first translates, all pairs.
inline std::vector<IEPairCandidate> ie_candidates(const SubshiftSpec& x) {
    std::vector<std::pair<std::string, ConfigDesc>> base;
    try {
        base = classification_points(x);
    } catch (const PreconditionError&) {
        for (const auto& c : x.cycles(4)) base.emplace_back("periodic cycle point", ConfigDesc::periodic_word(c));
    }
    std::vector<std::pair<std::string, ConfigDesc>> pts;
    for (auto& [label, p] : base) {
        pts.emplace_back(label, p);
        if (x.dim() == 1)
            for (std::int64_t s = 1; s <= 2; ++s) pts.emplace_back(label + " shifted by " + std::to_string(s), p.translated(GroupElem::scalar(s)));
    }
    std::vector<IEPairCandidate> out;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            out.push_back({pts[i].first, pts[j].first, pts[i].second, pts[j].second});
    return out;
}

namespace verify_detail {

inline std::mt19937_64 rng_for(std::uint64_t seed, int row) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(row)};
    return std::mt19937_64(seq);
}

inline std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline const SubsetDesc& block_set() {
    static const SubsetDesc e = parse_set("blocks(j=1..: 2^j, j)");
    return e;
}

// 1
inline VerifyRow density_exactness(std::uint64_t seed) {
    VerifyRow row{1, "density", "density exactness on progressions and seeded periodic sets", true, {}};
    int progressions = 0;
    for (std::int64_t a = 2; a <= 12; ++a)
        for (std::int64_t b = 0; b < a; ++b) {
            auto e = SubsetDesc::progression(a, b);
            auto up = banach_upper_density(e), low = banach_lower_density(e);
            bool ok = up.exact() && up.lower == make_rational(1, a) && up.upper == make_rational(1, a) &&
                      low.lower == make_rational(1, a) && low.upper == make_rational(1, a);
            row.pass = row.pass && ok;
            ++progressions;
        }
    auto rng = rng_for(seed, 1);
    int shifts = 0, calculus = 0;
    for (int i = 0; i < 100; ++i) {
        auto e = random_periodic_set(rng, 12);
        auto s = GroupElem::scalar(uniform(rng, -50, 50));
        bool ok = banach_upper_density(e).upper == banach_upper_density(e.shifted(s)).upper &&
                  banach_lower_density(e).lower == banach_lower_density(e.shifted(s)).lower;
        row.pass = row.pass && ok;
        ++shifts;
        if (i % 10 == 0) {
            auto f = random_periodic_set(rng, 12);
            row.pass = row.pass && verify_density_calculus(e, f, s).pass();
            ++calculus;
        }
    }
    row.measured = {{"progressions", progressions}, {"shiftChecks", shifts}, {"calculusReports", calculus},
                    {"example", to_json(banach_upper_density(SubsetDesc::progression(3, 1)))}};
    return row;
}

// 2
inline VerifyRow banach_vs_asymptotic(std::uint64_t) {
    VerifyRow row{2, "density", "Banach vs asymptotic density on long sparse blocks", false, {}};
    const auto& e = block_set();
    auto asym = asymptotic_density(e, CenteredBoxes{1, 1}, {1 << 10, 1 << 12, 1 << 14});
    auto up = banach_upper_density(e, {12, 4096});
    const Rational ratio = asym.ratios.back().ratio;
    row.pass = ratio < Rational(1, 100) && up.lower >= Rational(11, 12);
    row.measured = {{"set", to_text(e)}, {"ratioAt2^14", rat(ratio)}, {"ratioDecimal", dec(to_long_double(ratio))},
                    {"windowedBanach", to_json(up)}};
    return row;
}

// 3
inline VerifyRow banach_equals_weyl(std::uint64_t seed) {
    VerifyRow row{3, "meanmetric", "Banach and Weyl mean distances agree", true, {}};
    auto rng = rng_for(seed, 3);
    int exact_pairs = 0;
    for (int i = 0; i < 50; ++i) {
        auto p = static_cast<std::size_t>(uniform(rng, 1, 12));
        std::vector<Symbol> a(p), b(p);
        for (auto& s : a) s = static_cast<Symbol>(rng() % 2);
        for (auto& s : b) s = static_cast<Symbol>(rng() % 2);
        auto x = ConfigDesc::periodic_word(a), y = ConfigDesc::periodic_word(b);
        auto bd = banach_mean_distance(x, y), wd = weyl_distance(x, y);
        bool ok = bd.lower == bd.upper && wd.lower == wd.upper && bd.lower == wd.lower;
        row.pass = row.pass && ok;
        exact_pairs += ok;
    }
    MeanParams mp;
    mp.n_max = 200;
    mp.radius = 1000;
    mp.k = 20;
    Rational worst = 0;
    int windowed_pairs = 0;
    for (int i = 0; i < 20; ++i) {
        auto x = ConfigDesc::seeded(2, rng()), y = ConfigDesc::seeded(2, rng());
        auto bd = banach_mean_distance(x, y, mp), wd = weyl_distance(x, y, mp);
        bool overlap = bd.lower <= wd.upper && wd.lower <= bd.upper;
        Rational spread = std::max(bd.upper, wd.upper) - std::min(bd.lower, wd.lower);
        worst = std::max(worst, spread);
        bool ok = overlap && spread <= Rational(1, 20);
        row.pass = row.pass && ok;
        windowed_pairs += ok;
    }
    row.measured = {{"exactPeriodicPairs", exact_pairs}, {"windowedPairs", windowed_pairs},
                    {"worstSpread", rat(worst)}, {"worstSpreadDecimal", dec(to_long_double(worst))}};
    return row;
}

// 4
inline VerifyRow dichotomy(std::uint64_t) {
    VerifyRow row{4, "meanmetric", "sensitive / almost-equicontinuous dichotomy", true, {}};
    Json sys = Json::array();
    auto run = [&](const std::string& name, SystemVerdict want, const std::string& grade) {
        auto x = parse_system(name);
        auto rep = classify_system(x, default_classify_params(x));
        bool ok = rep.verdict == want && (grade.empty() || rep.grade == grade);
        for (const auto& p : rep.points) {
            if (rep.verdict == SystemVerdict::Sensitive && p.verdict == PointVerdict::Equicontinuous) ok = false;
        }
        if (rep.verdict == SystemVerdict::AlmostEquicontinuous && rep.points.front().verdict != PointVerdict::Equicontinuous)
            ok = false;
        if (want == SystemVerdict::Sensitive)
            ok = ok && rep.points.front().delta0 && *rep.points.front().delta0 >= Rational(1, 4);
        row.pass = row.pass && ok;
        sys.push_back({{"system", name},
                       {"verdict", to_string(rep.verdict)},
                       {"mode", rep.grade},
                       {"delta0", rep.points.front().delta0 ? rat(*rep.points.front().delta0) : Json(nullptr)},
                       {"pass", ok}});
    };
    run("fullshift:2", SystemVerdict::Sensitive, "certified");
    for (auto p : {"periodic:01", "periodic:001", "periodic:0011", "periodic:01011"})
        run(p, SystemVerdict::AlmostEquicontinuous, "exact");
    run("sturmian:golden", SystemVerdict::AlmostEquicontinuous, "empirical");
    row.measured = {{"systems", sys}};
    return row;
}

// 5
inline VerifyRow entropy_exactness(std::uint64_t) {
    VerifyRow row{5, "entropy", "entropy exactness: full shifts and the golden-mean SFT", true, {}};
    Json full = Json::array();
    for (int k = 2; k <= 6; ++k) {
        auto e = topological_entropy(SubshiftSpec::full_shift(k), 8);
        bool ok = e.kind == ClaimKind::Exact && e.lo == e.hi &&
                  std::fabs(static_cast<double>(e.lo) - std::log(static_cast<double>(k))) < 1e-15;
        row.pass = row.pass && ok;
        full.push_back({{"k", k}, {"value", dec(e.lo)}, {"mode", to_string(e.kind)}});
    }
    const long double target = std::log((1.0L + std::sqrt(5.0L)) / 2.0L);
    auto g = topological_entropy(SubshiftSpec::golden_mean(), 20);
    long double err = std::max(std::fabs(g.lo - target), std::fabs(g.hi - target));
    long double n20 = std::fabs(g.rows.back().value - g.lo);
    row.pass = row.pass && g.kind == ClaimKind::Exact && err <= 1e-6L && n20 <= 0.01L && g.monotone;
    row.measured = {{"fullShifts", full},
                    {"golden", {{"lower", dec(g.lo)}, {"upper", dec(g.hi)}, {"error", dec(err)},
                                {"n20", dec(g.rows.back().value)}, {"n20Gap", dec(n20)}}}};
    return row;
}

// 6
inline VerifyRow sturmian_entropy(std::uint64_t) {
    VerifyRow row{6, "entropy", "Sturmian complexity n+1 and vanishing entropy bound", true, {}};
    auto x = parse_system("sturmian:golden");
    auto e = topological_entropy(x, 30);
    for (const auto& r : e.rows) row.pass = row.pass && r.count == BigInt(r.n + 1);
    row.pass = row.pass && e.kind == ClaimKind::Bounded && e.hi <= 0.12L;
    row.measured = {{"count30", e.rows.back().count.str()}, {"bound", dec(e.hi)}, {"claim", "<= bound, -> 0"}};
    return row;
}

/// max |J| over all independent J inside F, by enumerating every subset.
inline std::int64_t phi_exhaustive(const SubshiftSpec& x, const std::vector<CylinderSet>& a, const Window& f) {
    const auto& el = f.elems();
    std::int64_t best = 0;
    for (std::uint32_t mask = 0; mask < (1u << el.size()); ++mask) {
        auto bits = static_cast<std::int64_t>(std::popcount(mask));
        if (bits <= best) continue;
        std::vector<GroupElem> j;
        for (std::size_t i = 0; i < el.size(); ++i)
            if ((mask >> i) & 1) j.push_back(el[i]);
        if (is_independent(x, a, Window(j))) best = bits;
    }
    return best;
}

// 7
inline VerifyRow ie_consistency(std::uint64_t) {
    VerifyRow row{7, "independence", "IE-pair search and phi cross-check", true, {}};
    const auto schedule = interval_schedule(12);
    auto full = SubshiftSpec::full_shift(2);
    auto fw = find_ie_pair(full, {{"const:0", "const:1", ConfigDesc::constant(0), ConfigDesc::constant(1)}}, 1, schedule);
    bool full_ok = fw.witness && fw.witness->density.lower >= Rational(99, 100);
    Json none = Json::array();
    for (auto name : {"periodic:01", "periodic:001", "sturmian:golden"}) {
        auto x = parse_system(name);
        bool found = false;
        for (std::size_t res = 1; res <= 3; ++res) found = found || find_ie_pair(x, ie_candidates(x), res, schedule).witness;
        none.push_back({{"system", name}, {"witness", found}});
        row.pass = row.pass && !found;
    }
    int instances = 0, agree = 0;
    const std::vector<std::string> systems{"fullshift:2", "sft:golden", "sft:111,101,110", "periodic:001", "sturmian:golden"};
    const std::vector<std::string> tuples{"[0=0][0=1]", "[0=0,1=0][0=1]", "[0=1][1=1]"};
    std::vector<Window> windows;
    for (std::int64_t n = 1; n <= 10; ++n) windows.push_back(Window::interval(0, n));
    windows.push_back(Window({GroupElem::scalar(0), GroupElem::scalar(2), GroupElem::scalar(5), GroupElem::scalar(7)}));
    windows.push_back(Window({GroupElem::scalar(-3), GroupElem::scalar(0), GroupElem::scalar(1), GroupElem::scalar(4),
                              GroupElem::scalar(9)}));
    for (const auto& sn : systems) {
        auto x = parse_system(sn);
        for (const auto& tn : tuples) {
            auto a = parse_cylinders(tn);
            for (const auto& f : windows) {
                ++instances;
                agree += phi(x, a, f).phi == phi_exhaustive(x, a, f);
            }
        }
    }
    row.pass = row.pass && full_ok && agree == instances;
    row.measured = {{"fullShiftWitness", fw.witness ? rat(fw.witness->density.lower) : Json(nullptr)},
                    {"noWitness", none},
                    {"phiInstances", instances},
                    {"phiAgree", agree}};
    return row;
}

inline const std::vector<std::string>& zoo() {
    static const std::vector<std::string> z{"fullshift:2", "fullshift:3",  "sft:golden",      "sft:111,101,110",
                                            "sft:11,01",   "periodic:01",  "periodic:001",    "indicator:2Z",
                                            "sturmian:golden", "sturmian:silver"};
    return z;
}

// 8
inline VerifyRow consistency_sweep(std::uint64_t) {
    VerifyRow row{8, "entropy", "entropy / equicontinuity / IE consistency across the zoo", true, {}};
    Json sys = Json::array();
    int violations = 0;
    for (const auto& name : zoo()) {
        auto x = parse_system(name);
        auto h = topological_entropy(x, 30);
        bool exact_positive = h.kind == ClaimKind::Exact && h.lo > 0;
        bool zero_or_small = (h.kind == ClaimKind::Exact && h.hi == 0) || h.hi <= 0.12L;
        std::string verdict = "not-transitive";
        if (transitivity_check(x).verdict == Transitivity::Transitive)
            verdict = to_string(classify_system(x, default_classify_params(x)).verdict);
        auto ie = find_ie_pair(x, ie_candidates(x), 1, interval_schedule(12));
        bool ok = true;
        if (verdict == "almost-equicontinuous" && !zero_or_small) ok = false;
        if (exact_positive && verdict != "sensitive" && verdict != "not-transitive") ok = false;
        if (exact_positive != ie.witness.has_value()) ok = false;
        violations += !ok;
        sys.push_back({{"system", name},
                       {"entropy", {{"kind", to_string(h.kind)}, {"lower", dec(h.lo)}, {"upper", dec(h.hi)}}},
                       {"verdict", verdict},
                       {"ieWitness", ie.witness.has_value()},
                       {"consistent", ok}});
    }
    row.pass = violations == 0;
    row.measured = {{"systems", sys}, {"violations", violations}};
    return row;
}

// 9
inline VerifyRow correspondence_checks(std::uint64_t seed) {
    VerifyRow row{9, "correspondence", "empirical measures: optimal-window mass and invariance defect", true, {}};
    auto rng = rng_for(seed, 9);
    int contained = 0;
    for (int i = 0; i < 100; ++i) {
        auto e = random_periodic_set(rng, 12);
        auto rows = correspondence_rows(e, {DensityParams{}});
        bool ok = rows.front().contained;
        row.pass = row.pass && ok;
        contained += ok;
    }
    int within = 0;
    Rational worst_ratio = 0;
    for (int i = 0; i < 1000; ++i) {
        SubsetDesc e = i % 4 == 0 ? block_set() : random_periodic_set(rng, 12);
        auto xi = indicator_config(e);
        std::int64_t lo = uniform(rng, -100, 100), n = uniform(rng, 1, 200);
        auto g = GroupElem::scalar(uniform(rng, -20, 20));
        std::size_t width = static_cast<std::size_t>(uniform(rng, 1, 3));
        std::map<GroupElem, Symbol> cells;
        while (cells.size() < width) cells[GroupElem::scalar(uniform(rng, -3, 3))] = static_cast<Symbol>(rng() % 2);
        std::vector<GroupElem> w;
        std::vector<Symbol> s;
        for (const auto& [p, v] : cells) {
            w.push_back(p);
            s.push_back(v);
        }
        auto d = invariance_defect_measure(empirical_measure(xi, Window::interval(lo, lo + n)), g,
                                           CylinderSet(Window(w), s));
        within += d.within();
        row.pass = row.pass && d.within();
        if (d.bound > 0) worst_ratio = std::max(worst_ratio, Rational(d.defect / d.bound));
    }
    row.measured = {{"containedSets", contained}, {"defectTriples", within}, {"worstDefectOverBound", rat(worst_ratio)}};
    return row;
}

// 10
inline VerifyRow demonstrators(std::uint64_t seed) {
    VerifyRow row{10, "correspondence", "pair search, finite intersections and shifted intersections", true, {}};
    auto rng = rng_for(seed, 10);
    Window w = Window::interval(1, 14);
    int pair_ok = 0, finite_ok = 0, multi_ok = 0;
    for (int i = 0; i < 200; ++i) pair_ok += pair_density_lemma(random_periodic_set(rng, 12), w).met;
    for (int i = 0; i < 200; ++i)
        finite_ok +=
            finite_intersection_checker(random_finite_space(rng, 20, 50, Rational(2, 5)), 2, Rational(1, 20), Rational(2, 5))
                .found;
    for (int i = 0; i < 200; ++i)
        multi_ok += multi_intersection_search(random_periodic_set(rng, 12, Rational(3, 10)), w, 2, Rational(1, 20)).met;
    row.pass = pair_ok == 200 && finite_ok == 200 && multi_ok == 200;
    row.measured = {{"pairSearch", pair_ok}, {"finiteIntersections", finite_ok}, {"shiftedIntersections", multi_ok},
                    {"instances", 200}};
    return row;
}

struct RowSpec {
    int id;
    std::string suite;
    std::function<VerifyRow(std::uint64_t)> run;
};

inline const std::vector<RowSpec>& table() {
    static const std::vector<RowSpec> t{
        {1, "density", density_exactness},         {2, "density", banach_vs_asymptotic},
        {3, "meanmetric", banach_equals_weyl},     {4, "meanmetric", dichotomy},
        {5, "entropy", entropy_exactness},         {6, "entropy", sturmian_entropy},
        {7, "independence", ie_consistency},       {8, "entropy", consistency_sweep},
        {9, "correspondence", correspondence_checks}, {10, "correspondence", demonstrators},
    };
    return t;
}

}  // namespace verify_detail

/// Runs the rows of a suite, concurrently when threads > 1; rows come back
/// in id order whatever the thread count.
inline VerifyReport verify(const std::string& suite, std::uint64_t seed, unsigned threads = 1) {
    const auto& names = verify_suites();
    if (std::find(names.begin(), names.end(), suite) == names.end()) throw UsageError("unknown suite: " + suite);
    std::vector<const verify_detail::RowSpec*> todo;
    for (const auto& r : verify_detail::table())
        if (suite == "all" || r.suite == suite) todo.push_back(&r);
    VerifyReport rep;
    rep.suite = suite;
    rep.seed = seed;
    rep.rows.resize(todo.size());
    auto run_one = [&](std::size_t i) {
        try {
            rep.rows[i] = todo[i]->run(seed);
        } catch (const std::exception& e) {
            rep.rows[i] = {todo[i]->id, todo[i]->suite, "row raised an error", false, {{"error", e.what()}}};
        }
    };
    threads = std::max(1u, threads);
    if (threads == 1) {
        for (std::size_t i = 0; i < todo.size(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < std::min<std::size_t>(threads, todo.size()); ++t)
            pool.emplace_back([&] {
                for (std::size_t i; (i = next++) < todo.size();) run_one(i);
            });
        for (auto& th : pool) th.join();
    }
    return rep;
}

inline Json to_json(const VerifyReport& r) {
    Json rows = Json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"id", row.id}, {"suite", row.suite}, {"name", row.name}, {"pass", row.pass},
                        {"measured", row.measured}});
    return {{"suite", r.suite}, {"pass", r.pass()}, {"rows", rows}};
}

}  // namespace meanlab
