#pragma once

// Indicator configurations, empirical measures along windows, and the
// multiple-intersection demonstrators on sets and finite measure spaces.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "meanlab/config.hpp"
#include "meanlab/density.hpp"
#include "meanlab/error.hpp"
#include "meanlab/group.hpp"
#include "meanlab/rational.hpp"
#include "meanlab/subset.hpp"

namespace meanlab {

/// The 0/1 configuration that is 0 on E and 1 off E.
inline ConfigDesc indicator_config(const SubsetDesc& e) {
    if (const auto* p = e.as_periodic()) {
        if (p->residue_count() == 0) return ConfigDesc::constant(1, e.dim());
        if (p->residue_count() == p->cells()) return ConfigDesc::constant(0, e.dim());
        std::vector<Symbol> block;
        for (const auto& g : Window::box(GroupElem::zero(e.dim()), p->modulus()))
            block.push_back(p->contains(g) ? 0 : 1);
        return ConfigDesc::periodic(p->modulus(), std::move(block));
    }
    return ConfigDesc::indicator(e);
}

/// (1/|W|) sum over s in W of the point mass at s xi.
class EmpiricalMeasure {
public:
    EmpiricalMeasure(ConfigDesc xi, Window window) : xi_(std::move(xi)), window_(std::move(window)) {
        if (window_.empty()) throw UsageError("empirical measure needs a nonempty window");
        if (window_.dim() != xi_.dim()) throw UsageError("window and configuration differ in dimension");
    }

    const ConfigDesc& base() const { return xi_; }
    const Window& window() const { return window_; }

    /// |{s in W : s xi in B}| / |W|, exactly.
    Rational mass(const CylinderSet& b) const { return make_rational(hits(b, window_), size()); }

    /// Masses of the origin-symbol cylinders; they sum to 1.
    std::vector<std::pair<Symbol, Rational>> symbol_masses() const {
        std::map<Symbol, std::int64_t> counts;
        for (const auto& s : window_) ++counts[xi_.at(s)];
        std::vector<std::pair<Symbol, Rational>> out;
        for (const auto& [sym, c] : counts) out.emplace_back(sym, make_rational(c, size()));
        return out;
    }

    /// Mass of B under the measure moved by g, i.e. along the window W + g.
    Rational moved_mass(const GroupElem& g, const CylinderSet& b) const {
        return make_rational(hits(b, window_.translate(g)), size());
    }

private:
    std::int64_t size() const { return static_cast<std::int64_t>(window_.size()); }

    std::int64_t hits(const CylinderSet& b, const Window& w) const {
        std::int64_t n = 0;
        for (const auto& s : w) {
            bool in = true;
            std::size_t i = 0;
            for (const auto& g : b.window) {
                if (xi_.at(g + s) != b.symbols[i++]) {
                    in = false;
                    break;
                }
            }
            if (in) ++n;
        }
        return n;
    }

    ConfigDesc xi_;
    Window window_;
};

inline EmpiricalMeasure empirical_measure(const ConfigDesc& xi, const Window& window) { return {xi, window}; }

/// The origin cylinder [x(0) = 0].
inline CylinderSet origin_zero(int dim = 1) { return CylinderSet::at_origin(0, dim); }

struct InvarianceDefect {
    Rational defect;  // |g mu(B) - mu(B)|
    Rational bound;   // |(W + g) Δ W| / |W|
    bool within() const { return defect <= bound; }
};

inline InvarianceDefect invariance_defect_measure(const EmpiricalMeasure& m, const GroupElem& g,
                                                  const CylinderSet& b) {
    InvarianceDefect d;
    Rational diff = m.moved_mass(g, b) - m.mass(b);
    d.defect = diff < 0 ? Rational(-diff) : diff;
    const auto& w = m.window();
    d.bound = make_rational(static_cast<std::int64_t>(w.symmetric_difference_size(w.translate(g))),
                            static_cast<std::int64_t>(w.size()));
    return d;
}

/// mass(A(0)) on the window realizing the windowed BD* value at each scale.
struct CorrespondenceRow {
    std::int64_t len = 0;
    GroupElem shift;
    Rational mass;
    DensityEstimate density;
    bool contained = false;  // equals BD* when exact; at least the windowed lower bound otherwise
};

inline std::vector<CorrespondenceRow> correspondence_rows(const SubsetDesc& e, const std::vector<DensityParams>& schedule) {
    std::vector<CorrespondenceRow> rows;
    const auto xi = indicator_config(e);
    for (const auto& p : schedule) {
        CorrespondenceRow r;
        r.density = banach_upper_density(e, p);
        r.len = r.density.witness_len;
        r.shift = r.density.witness_shift;
        GroupElem lo = GroupElem::zero(e.dim()), hi(e.dim());
        for (int i = 0; i < e.dim(); ++i) hi[i] = r.len;
        auto m = empirical_measure(xi, Window::box(lo, hi).translate(r.shift));
        r.mass = m.mass(origin_zero(e.dim()));
        r.contained = r.density.exact() ? r.mass == r.density.upper : r.mass >= r.density.lower;
        rows.push_back(std::move(r));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Shifted intersections of one set

inline constexpr std::size_t kSubsetSearchCap = std::size_t{1} << 20;

namespace detail {

inline std::size_t choose(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    long double c = 1;
    for (std::size_t i = 0; i < k; ++i) c = c * static_cast<long double>(n - i) / static_cast<long double>(i + 1);
    return c > static_cast<long double>(kSubsetSearchCap) * 4 ? kSubsetSearchCap * 4 : static_cast<std::size_t>(c + 0.5L);
}

/// Lexicographic k-subsets of {0..n-1}; stops when f returns false.
template <class F>
void for_each_subset(std::size_t n, std::size_t k, F f) {
    if (k > n) return;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        if (!f(static_cast<const std::vector<std::size_t>&>(idx))) return;
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace detail

struct IntersectionWitness {
    std::vector<GroupElem> shifts;  // t_1 < ... < t_k
    DensityEstimate density;        // of the intersection of the sets E - t_i
    Rational base;                  // BD*(E), upper value
    Rational target;                // base^k - eps (or base^2 / 2)
    bool met = false;               // density lower >= target
    bool exact = false;
};

/// Best k-subset of the given shifts by BD* of the shifted intersection;
/// ties go to the lexicographically first subset.
inline IntersectionWitness multi_intersection_search(const SubsetDesc& e, const Window& tuple, std::size_t k,
                                                     const Rational& eps, const DensityParams& params = {}) {
    if (k < 1) throw UsageError("k must be >= 1");
    if (tuple.size() < k) throw UsageError("shift tuple has fewer than k elements");
    if (detail::choose(tuple.size(), k) > kSubsetSearchCap) throw CapExceeded("too many k-subsets of the shift tuple");
    auto base = banach_upper_density(e, params);
    Rational target = 1;
    for (std::size_t i = 0; i < k; ++i) target *= base.upper;
    target -= eps;
    IntersectionWitness best;
    bool have = false;
    const auto& el = tuple.elems();
    detail::for_each_subset(el.size(), k, [&](const std::vector<std::size_t>& idx) {
        SubsetDesc inter = e.shifted(-el[idx[0]]);
        for (std::size_t i = 1; i < idx.size(); ++i) inter = SubsetDesc::intersected(inter, e.shifted(-el[idx[i]]));
        auto d = banach_upper_density(inter, params);
        if (!have || d.lower > best.density.lower) {
            best.shifts.clear();
            for (auto i : idx) best.shifts.push_back(el[i]);
            best.density = d;
            have = true;
        }
        return !(best.density.exact() && best.density.lower == base.upper);  // cannot do better
    });
    best.base = base.upper;
    best.target = target;
    best.met = best.density.lower >= target;
    best.exact = best.density.exact() && base.exact();
    return best;
}

/// Two distinct l1, l2 in W with BD*(S - l1 ∩ S - l2) >= BD*(S)^2 / 2.
inline IntersectionWitness pair_density_lemma(const SubsetDesc& s, const Window& w, const DensityParams& params = {}) {
    if (w.size() < 2) throw UsageError("pair search needs |W| >= 2");
    auto r = multi_intersection_search(s, w, 2, 0, params);
    r.target = r.base * r.base / 2;
    r.met = r.density.lower >= r.target;
    return r;
}

// ---------------------------------------------------------------------------
// Finite measure spaces

struct FiniteMeasureSpace {
    std::vector<Rational> weights;            // one per point, summing to 1
    std::vector<std::vector<bool>> subsets;   // E_1..E_m as membership masks

    void validate() const {
        Rational total = 0;
        for (const auto& w : weights) {
            if (w < 0) throw UsageError("weights must be nonnegative");
            total += w;
        }
        if (weights.empty() || total != 1) throw UsageError("weights must sum to 1");
        for (const auto& e : subsets)
            if (e.size() != weights.size()) throw UsageError("subset mask differs in size from the ground set");
    }

    Rational mass(const std::vector<bool>& e) const {
        Rational m = 0;
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i]) m += weights[i];
        return m;
    }

    Rational intersection_mass(const std::vector<std::size_t>& idx) const {
        Rational m = 0;
        for (std::size_t p = 0; p < weights.size(); ++p) {
            bool all = true;
            for (auto i : idx)
                if (!subsets[i][p]) {
                    all = false;
                    break;
                }
            if (all) m += weights[p];
        }
        return m;
    }
};

struct FiniteWitness {
    bool found = false;
    std::vector<std::size_t> indices;  // first satisfying k-subset, or the best one
    Rational mass;
    Rational target;  // a^k - eps
    Rational a;
    std::string note;
};

/// Exhaustive k-subset search for mu(E_t1 ∩ ... ∩ E_tk) >= a^k - eps.
inline FiniteWitness finite_intersection_checker(const FiniteMeasureSpace& space, std::size_t k, const Rational& eps,
                                                 std::optional<Rational> a = std::nullopt) {
    space.validate();
    const std::size_t m = space.subsets.size();
    if (k < 1 || m < k) throw UsageError("need 1 <= k <= m");
    if (detail::choose(m, k) > kSubsetSearchCap) throw CapExceeded("too many k-subsets");
    Rational amin = space.mass(space.subsets[0]);
    for (const auto& e : space.subsets) amin = std::min(amin, space.mass(e));
    Rational av = a ? *a : amin;
    if (av <= 0) throw UsageError("the mass bound a must be positive");
    if (amin < av) throw UsageError("some E_i has mass below a");
    FiniteWitness w;
    w.a = av;
    w.target = 1;
    for (std::size_t i = 0; i < k; ++i) w.target *= av;
    w.target -= eps;
    bool have = false;
    detail::for_each_subset(m, k, [&](const std::vector<std::size_t>& idx) {
        Rational mass = space.intersection_mass(idx);
        if (mass >= w.target) {
            w.found = true;
            w.indices = idx;
            w.mass = mass;
            return false;
        }
        if (!have || mass > w.mass) {
            w.indices = idx;
            w.mass = mass;
            have = true;
        }
        return true;
    });
    w.note = w.found ? "witness" : "none found: m may be below the existence threshold N(a, k, eps); not a counterexample";
    return w;
}

// ---------------------------------------------------------------------------
// Seeded instances

/// Periodic subset of Z with period in [2, max_period] and density >= min_density.
inline SubsetDesc random_periodic_set(std::mt19937_64& rng, std::int64_t max_period = 12,
                                      const Rational& min_density = Rational(0)) {
    auto period = static_cast<std::int64_t>(2 + rng() % static_cast<std::uint64_t>(max_period - 1));
    std::vector<GroupElem> res;
    for (std::int64_t r = 0; r < period; ++r)
        if (rng() % 2) res.push_back(GroupElem::scalar(r));
    std::vector<bool> in(static_cast<std::size_t>(period), false);
    for (const auto& g : res) in[static_cast<std::size_t>(g[0])] = true;
    while (res.empty() || make_rational(static_cast<std::int64_t>(res.size()), period) < min_density) {
        auto r = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(period));
        if (in[static_cast<std::size_t>(r)]) continue;
        in[static_cast<std::size_t>(r)] = true;
        res.push_back(GroupElem::scalar(r));
    }
    return SubsetDesc::periodic(PeriodicSet(GroupElem::scalar(period), res));
}

/// Periodic subset with exactly half of the residues of an even period.
inline SubsetDesc random_half_set(std::mt19937_64& rng, std::int64_t max_half = 6) {
    auto half = static_cast<std::int64_t>(1 + rng() % static_cast<std::uint64_t>(max_half));
    std::vector<std::int64_t> r(static_cast<std::size_t>(2 * half));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = static_cast<std::int64_t>(i);
    for (std::size_t i = r.size() - 1; i > 0; --i) std::swap(r[i], r[rng() % (i + 1)]);
    std::vector<GroupElem> res;
    for (std::int64_t i = 0; i < half; ++i) res.push_back(GroupElem::scalar(r[static_cast<std::size_t>(i)]));
    return SubsetDesc::periodic(PeriodicSet(GroupElem::scalar(2 * half), res));
}

/// Uniform weights on n points; m subsets each of mass >= a.
inline FiniteMeasureSpace random_finite_space(std::mt19937_64& rng, std::size_t n, std::size_t m, const Rational& a) {
    FiniteMeasureSpace s;
    s.weights.assign(n, make_rational(1, static_cast<std::int64_t>(n)));
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<bool> e(n, false);
        std::size_t count = 0;
        for (std::size_t p = 0; p < n; ++p)
            if (rng() % 2) {
                e[p] = true;
                ++count;
            }
        while (make_rational(static_cast<std::int64_t>(count), static_cast<std::int64_t>(n)) < a) {
            auto p = static_cast<std::size_t>(rng() % n);
            if (!e[p]) {
                e[p] = true;
                ++count;
            }
        }
        s.subsets.push_back(std::move(e));
    }
    return s;
}

}  // namespace meanlab
