#pragma once

// Banach and Folner densities of subsets of Z^d.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "meanlab/error.hpp"
#include "meanlab/group.hpp"
#include "meanlab/rational.hpp"
#include "meanlab/subset.hpp"

namespace meanlab {

enum class DensityMethod { ExactPeriodic, Windowed, Empirical };

inline std::string to_string(DensityMethod m) {
    switch (m) {
        case DensityMethod::ExactPeriodic: return "exact-periodic";
        case DensityMethod::Windowed: return "windowed";
        case DensityMethod::Empirical: return "empirical";
    }
    return "?";
}

/// Window schedule [0, L)^d for L = 1..n_max, placements g in [-radius, radius]^d.
struct DensityParams {
    std::int64_t n_max = 16;
    std::int64_t radius = 4096;
};

struct DensityEstimate {
    Rational lower;
    Rational upper;
    DensityMethod method = DensityMethod::Windowed;
    DensityParams params;
    std::int64_t witness_len = 0;  // side of the window realizing `lower`
    GroupElem witness_shift;       // its placement

    bool exact() const { return method == DensityMethod::ExactPeriodic; }
};

namespace detail {

/// Sums of an integer weight over every box [0, L)^d + g inside the scanned
/// grid [lo, lo + side)^d, by d-dimensional prefix sums.
class BoxSum {
public:
    template <class Weight>
    BoxSum(int dim, std::int64_t lo, std::int64_t side, Weight weight) : dim_(dim), lo_(lo), side_(side + 1) {
        std::int64_t total = 1;
        for (int i = 0; i < dim_; ++i) total = checked_mul(total, side_);
        if (total > (std::int64_t{1} << 24)) throw CapExceeded("windowed scan exceeds cell cap; lower the radius");
        pre_.assign(static_cast<std::size_t>(total), 0);
        GroupElem zero(dim_), hi(dim_);
        for (int i = 0; i < dim_; ++i) hi[i] = side;
        for (const auto& c : Window::box(zero, hi)) {
            GroupElem g(dim_), idx(dim_);
            for (int i = 0; i < dim_; ++i) {
                g[i] = lo + c[i];
                idx[i] = c[i] + 1;
            }
            pre_[index(idx)] = weight(g);
        }
        for (int axis = 0; axis < dim_; ++axis) {
            std::size_t stride = 1;
            for (int i = dim_ - 1; i > axis; --i) stride *= static_cast<std::size_t>(side_);
            for (std::size_t k = 0; k < pre_.size(); ++k)
                if ((k / stride) % static_cast<std::size_t>(side_) != 0) pre_[k] += pre_[k - stride];
        }
    }

    /// Weight of [0, len)^d + g, for g_i >= lo and g_i + len <= lo + side.
    std::int64_t count(const GroupElem& g, std::int64_t len) const {
        std::int64_t total = 0;
        for (int mask = 0; mask < (1 << dim_); ++mask) {
            GroupElem idx(dim_);
            int bits = 0;
            for (int i = 0; i < dim_; ++i) {
                bool up = (mask >> i) & 1;
                idx[i] = g[i] - lo_ + (up ? len : 0);
                bits += up ? 0 : 1;
            }
            total += (bits % 2 == 0 ? 1 : -1) * pre_[index(idx)];
        }
        return total;
    }

private:
    std::size_t index(const GroupElem& idx) const {
        std::size_t k = 0;
        for (int i = 0; i < dim_; ++i) k = k * static_cast<std::size_t>(side_) + static_cast<std::size_t>(idx[i]);
        return k;
    }

    int dim_;
    std::int64_t lo_;
    std::int64_t side_;
    std::vector<std::int64_t> pre_;
};

inline std::int64_t ipow(std::int64_t b, int e) {
    std::int64_t r = 1;
    for (int i = 0; i < e; ++i) r = checked_mul(r, b);
    return r;
}

}  // namespace detail

/// BD*(E). Exact for sets that agree with a periodic set off a finite set;
/// otherwise the windowed sup over placements for each scheduled window.
inline DensityEstimate banach_upper_density(const SubsetDesc& e, const DensityParams& params = {}) {
    if (params.n_max < 1) throw UsageError("density window schedule needs n_max >= 1");
    if (params.radius < 0) throw UsageError("density search radius must be nonnegative");
    DensityEstimate est;
    est.params = params;
    const int d = e.dim();
    if (auto cls = e.periodic_class()) {
        // one full period: every placement sees each residue class exactly once
        GroupElem lo(d);
        std::int64_t hits = 0;
        for (const auto& g : Window::box(lo, cls->modulus()))
            if (cls->contains(g)) ++hits;
        est.lower = est.upper = make_rational(hits, cls->cells());
        est.method = DensityMethod::ExactPeriodic;
        est.witness_len = cls->modulus()[0];
        est.witness_shift = GroupElem::zero(d);
        return est;
    }
    est.method = DensityMethod::Windowed;
    const std::int64_t lo = -params.radius;
    const std::int64_t side = checked_add(checked_mul(2, params.radius) + 1, params.n_max - 1);
    detail::BoxSum counter(d, lo, side, [&](const GroupElem& g) -> std::int64_t { return e.contains(g) ? 1 : 0; });
    GroupElem glo(d), ghi(d);
    for (int i = 0; i < d; ++i) {
        glo[i] = -params.radius;
        ghi[i] = params.radius + 1;
    }
    const Window placements = Window::box(glo, ghi);
    bool first = true;
    Rational at_largest;
    GroupElem at_largest_shift;
    for (std::int64_t len = 1; len <= params.n_max; ++len) {
        std::int64_t best = -1;
        GroupElem best_g;
        for (const auto& g : placements) {
            std::int64_t c = counter.count(g, len);
            if (c > best) {
                best = c;
                best_g = g;
            }
        }
        Rational s = make_rational(best, detail::ipow(len, d));
        if (first || s < est.upper) est.upper = s;
        first = false;
        if (len == params.n_max) {
            at_largest = s;
            at_largest_shift = best_g;
        }
    }
    est.lower = std::min(at_largest, est.upper);
    est.witness_len = params.n_max;
    est.witness_shift = at_largest_shift;
    return est;
}

/// BD_*(E) = 1 - BD*(complement of E).
inline DensityEstimate banach_lower_density(const SubsetDesc& e, const DensityParams& params = {}) {
    DensityEstimate c = banach_upper_density(e.complemented(), params);
    DensityEstimate est = c;
    est.lower = 1 - c.upper;
    est.upper = 1 - c.lower;
    return est;
}

struct DensityRatio {
    std::int64_t n = 0;
    std::int64_t size = 0;
    std::int64_t hits = 0;
    Rational ratio;
};

struct AsymptoticDensity {
    std::vector<DensityRatio> ratios;  // exact |E ∩ F_n| / |F_n|
    DensityEstimate upper;             // limsup
    DensityEstimate lower;             // liminf
    bool limit_exact = false;          // only for periodic classes
};

/// |E ∩ F_n| / |F_n| along a Folner sequence, with range-empirical limsup and
/// liminf taken over the second half of the computed range.
inline AsymptoticDensity asymptotic_density(const SubsetDesc& e, const FolnerSpec& folner,
                                            const std::vector<std::int64_t>& ns) {
    if (ns.empty()) throw UsageError("asymptotic_density needs a nonempty index range");
    if (folner_dim(folner) != e.dim()) throw UsageError("Folner sequence and set differ in dimension");
    AsymptoticDensity out;
    for (auto n : ns) {
        Window f = folner_window(folner, n);
        if (f.empty()) throw UsageError("empty Folner window");
        std::int64_t hits = 0;
        for (const auto& g : f)
            if (e.contains(g)) ++hits;
        auto size = static_cast<std::int64_t>(f.size());
        out.ratios.push_back({n, size, hits, make_rational(hits, size)});
    }
    if (auto cls = e.periodic_class()) {
        Rational v = cls->density();
        out.upper.lower = out.upper.upper = out.lower.lower = out.lower.upper = v;
        out.upper.method = out.lower.method = DensityMethod::ExactPeriodic;
        out.limit_exact = true;
        return out;
    }
    const std::size_t tail = out.ratios.size() / 2;
    Rational hi = out.ratios[tail].ratio, lo = hi;
    for (std::size_t i = tail; i < out.ratios.size(); ++i) {
        hi = std::max(hi, out.ratios[i].ratio);
        lo = std::min(lo, out.ratios[i].ratio);
    }
    const Rational& last = out.ratios.back().ratio;
    out.upper = {last, hi, DensityMethod::Empirical, {}, 0, {}};
    out.lower = {lo, last, DensityMethod::Empirical, {}, 0, {}};
    return out;
}

struct CalculusCheck {
    std::string name;
    bool pass = true;
    bool applicable = true;
    std::string detail;
};

struct CalculusReport {
    std::vector<CalculusCheck> checks;
    bool pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const CalculusCheck& c) { return c.pass; });
    }
};

/// Shift invariance, monotonicity, complement duality and the density-one
/// closure rules, on exactly computable inputs.
inline CalculusReport verify_density_calculus(const SubsetDesc& e1, const SubsetDesc& e2, const GroupElem& s,
                                              const DensityParams& params = {}) {
    auto c1 = e1.periodic_class();
    auto c2 = e2.periodic_class();
    if (!c1 || !c2) throw PreconditionError("density calculus needs exactly computable (periodic) inputs");
    auto up = [&](const SubsetDesc& e) { return banach_upper_density(e, params).upper; };
    auto low = [&](const SubsetDesc& e) { return banach_lower_density(e, params).lower; };
    CalculusReport rep;
    auto add = [&](std::string name, bool applicable, bool pass, std::string detail) {
        rep.checks.push_back({std::move(name), !applicable || pass, applicable, std::move(detail)});
    };

    for (const auto* e : {&e1, &e2}) {
        Rational a = up(*e), b = up(e->shifted(s));
        add("shift-invariance", true, a == b, "BD*(E)=" + to_string(a) + " BD*(E+s)=" + to_string(b));
    }

    const bool nested = c1->is_subset_of(*c2);
    {
        Rational a = up(e1), b = up(e2);
        add("monotonicity", nested, a <= b, "BD*(E1)=" + to_string(a) + " BD*(E2)=" + to_string(b));
    }

    for (const auto* e : {&e1, &e2}) {
        Rational l = low(*e), cu = up(e->complemented());
        bool dual = l == 1 - cu;
        bool one = l != 1 || cu == 0;
        add("complement-duality", true, dual && one, "BD_*(E)=" + to_string(l) + " BD*(G\\E)=" + to_string(cu));
    }

    {
        Rational l1 = low(e1), l2 = low(e2);
        bool applicable = l1 == 1 && l2 == 1;
        Rational li = low(SubsetDesc::intersected(e1, e2));
        add("density-one-intersection", applicable, li == 1, "BD_*(E1∩E2)=" + to_string(li));
    }

    for (const auto* e : {&e1, &e2}) {
        Rational l = low(*e);
        Rational ls = low(e->shifted(s));
        add("density-one-translate", l == 1, ls == 1, "BD_*(E+s)=" + to_string(ls));
    }
    return rep;
}

}  // namespace meanlab
