#pragma once

// Mean pseudometrics between configurations: Besicovitch along a Folner
// sequence, Banach (inf over windows of sup over placements) and Weyl
// (sup over Folner sequences), as certified intervals.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "meanlab/config.hpp"
#include "meanlab/density.hpp"
#include "meanlab/error.hpp"
#include "meanlab/group.hpp"
#include "meanlab/rational.hpp"
#include "meanlab/subset.hpp"

namespace meanlab {

enum class MeanMode { ExactPeriodic, ExactRotation, Windowed };

inline std::string to_string(MeanMode m) {
    switch (m) {
        case MeanMode::ExactPeriodic: return "exact-periodic";
        case MeanMode::ExactRotation: return "exact-rotation";
        case MeanMode::Windowed: return "windowed";
    }
    return "?";
}

/// Windows [0, L)^d, L = 1..n_max, placed at g in center + [-radius, radius]^d;
/// metric truncated after K enumeration terms.
struct MeanParams {
    std::int64_t n_max = 64;
    std::int64_t radius = 256;
    std::size_t k = 20;
    std::int64_t center = 0;
};

struct MeanEvidence {
    std::int64_t inf_window = 0;     // window side attaining the upper bound
    GroupElem sup_shift;             // placement attaining it
    std::int64_t lower_window = 0;   // window side realizing the lower bound
    GroupElem lower_shift;           // Folner shift realizing it
    std::string note;
};

struct MeanDistanceEstimate {
    Rational lower;
    Rational upper;
    MeanMode mode = MeanMode::Windowed;
    MeanParams params;
    MeanEvidence evidence;

    bool exact() const { return mode != MeanMode::Windowed && lower == upper; }
    Rational gap() const { return upper - lower; }
};

// ---------------------------------------------------------------------------
// Eventually periodic structure in Z

/// Periodic words agreeing with a configuration near -infinity and +infinity:
/// x(n) = left[n mod |left|] for n << 0 and right[n mod |right|] for n >> 0.
struct Tails {
    std::vector<Symbol> left;
    std::vector<Symbol> right;
};

namespace detail {

inline std::vector<Symbol> rotate_block(const std::vector<Symbol>& b, std::int64_t s) {
    const auto p = static_cast<std::int64_t>(b.size());
    std::vector<Symbol> out(b.size());
    for (std::int64_t i = 0; i < p; ++i) out[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(mod_floor(i + s, p))];
    return out;
}

inline std::vector<Symbol> block_of(const PeriodicSet& p) {
    std::vector<Symbol> b;
    for (std::int64_t i = 0; i < p.modulus()[0]; ++i) b.push_back(p.contains(GroupElem{i}) ? 0 : 1);
    return b;
}

inline std::vector<Symbol> flip_block(const std::vector<Symbol>& base, const PeriodicSet& s, int k) {
    const std::int64_t m = lcm64(static_cast<std::int64_t>(base.size()), s.modulus()[0]);
    if (m > kPeriodCap) throw CapExceeded("common period exceeds cap");
    std::vector<Symbol> out;
    for (std::int64_t i = 0; i < m; ++i) {
        Symbol v = base[static_cast<std::size_t>(i % static_cast<std::int64_t>(base.size()))];
        out.push_back(s.contains(GroupElem{i}) ? (v + 1) % k : v);
    }
    return out;
}

inline std::optional<Tails> tails(const config_node::Node& n) {
    if (n.dim != 1) return std::nullopt;
    return std::visit(
        [&](const auto& v) -> std::optional<Tails> {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, config_node::Constant>) {
                return Tails{{v.symbol}, {v.symbol}};
            } else if constexpr (std::is_same_v<T, config_node::Periodic>) {
                return Tails{v.block, v.block};
            } else if constexpr (std::is_same_v<T, config_node::FiniteDefect>) {
                return tails(*v.base);
            } else if constexpr (std::is_same_v<T, config_node::Indicator>) {
                auto c = v.set.periodic_class();
                if (!c) return std::nullopt;
                auto b = block_of(*c);
                return Tails{b, b};
            } else if constexpr (std::is_same_v<T, config_node::Translate>) {
                auto t = tails(*v.base);
                if (!t) return std::nullopt;
                return Tails{rotate_block(t->left, v.by[0]), rotate_block(t->right, v.by[0])};
            } else if constexpr (std::is_same_v<T, config_node::Flip>) {
                auto t = tails(*v.base);
                auto c = v.set.periodic_class();
                if (!t || !c) return std::nullopt;
                return Tails{flip_block(t->left, *c, v.k), flip_block(t->right, *c, v.k)};
            } else if constexpr (std::is_same_v<T, config_node::Spliced>) {
                auto l = tails(*v.left);
                auto r = tails(*v.right);
                if (!l || !r) return std::nullopt;
                return Tails{l->left, r->right};
            } else {
                return std::nullopt;
            }
        },
        n.v);
}

/// Fraction of positions where two periodic words differ.
inline Rational block_mismatch(const std::vector<Symbol>& a, const std::vector<Symbol>& b) {
    const std::int64_t m = lcm64(static_cast<std::int64_t>(a.size()), static_cast<std::int64_t>(b.size()));
    if (m > kPeriodCap) throw CapExceeded("common period exceeds cap");
    std::int64_t diff = 0;
    for (std::int64_t i = 0; i < m; ++i)
        if (a[static_cast<std::size_t>(i % static_cast<std::int64_t>(a.size()))] !=
            b[static_cast<std::size_t>(i % static_cast<std::int64_t>(b.size()))])
            ++diff;
    return make_rational(diff, m);
}

/// The block of a purely periodic configuration in Z.
inline std::optional<std::vector<Symbol>> pure_block(const config_node::Node& n) {
    if (n.dim != 1) return std::nullopt;
    return std::visit(
        [&](const auto& v) -> std::optional<std::vector<Symbol>> {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, config_node::Constant>) {
                return std::vector<Symbol>{v.symbol};
            } else if constexpr (std::is_same_v<T, config_node::Periodic>) {
                return v.block;
            } else if constexpr (std::is_same_v<T, config_node::Indicator>) {
                if (const auto* p = v.set.as_periodic()) return block_of(*p);
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, config_node::Translate>) {
                auto b = pure_block(*v.base);
                if (!b) return std::nullopt;
                return rotate_block(*b, v.by[0]);
            } else if constexpr (std::is_same_v<T, config_node::Flip>) {
                auto b = pure_block(*v.base);
                const auto* p = v.set.as_periodic();
                if (!b || !p) return std::nullopt;
                return flip_block(*b, *p, v.k);
            } else {
                return std::nullopt;
            }
        },
        n.v);
}

}  // namespace detail

inline std::optional<Tails> tails(const ConfigDesc& x) { return detail::tails(x.node()); }

/// Exact per-position distance d(t x, t y) for a purely periodic pair, as a
/// function of t mod p: the enumeration 0, 1, -1, 2, -2, ... makes the
/// weighted sum a geometric series in blocks of one period.
inline std::vector<Rational> periodic_term_distances(const std::vector<Symbol>& a, const std::vector<Symbol>& b) {
    const std::int64_t p = lcm64(static_cast<std::int64_t>(a.size()), static_cast<std::int64_t>(b.size()));
    if (p > 4096) throw CapExceeded("common period too long for exact term distances");
    auto mis = [&](std::int64_t t) -> int {
        return a[static_cast<std::size_t>(mod_floor(t, static_cast<std::int64_t>(a.size())))] !=
               b[static_cast<std::size_t>(mod_floor(t, static_cast<std::int64_t>(b.size())))];
    };
    const Rational quarter = Rational(1) / 4;
    Rational qp = 1;
    for (std::int64_t j = 0; j < p; ++j) qp *= quarter;
    std::vector<Rational> out;
    for (std::int64_t t = 0; t < p; ++t) {
        // d = 1/2 m(t) + sum_{j>=1} 4^-j (m(t+j) + 1/2 m(t-j))
        Rational block = 0, w = 1;
        for (std::int64_t j = 1; j <= p; ++j) {
            w *= quarter;
            block += w * (Rational(mis(t + j)) + Rational(mis(t - j)) / 2);
        }
        out.push_back(Rational(mis(t)) / 2 + block / (1 - qp));
    }
    return out;
}

namespace detail {

struct ExactMean {
    Rational lower, upper;
    MeanMode mode;
    std::string note;
    Rational left, right;  // tail mismatch densities, periodic mode only
};

/// Mean distance when the mismatch structure is known in closed form.
inline std::optional<ExactMean> exact_mean(const ConfigDesc& x, const ConfigDesc& y) {
    if (x.dim() != y.dim()) throw UsageError("configurations differ in dimension");
    // y obtained from x by changing symbols on a periodic-class set S
    for (int pass = 0; pass < 2; ++pass) {
        const ConfigDesc& a = pass ? y : x;
        const ConfigDesc& b = pass ? x : y;
        if (const auto* f = b.as<config_node::Flip>(); f && f->base == a.node_ptr()) {
            if (auto c = f->set.periodic_class()) {
                Rational r = c->density();
                return ExactMean{r, r, MeanMode::ExactPeriodic, "mismatch set is the flipped set", r, r};
            }
        }
    }
    if (auto tx = tails(x)) {
        if (auto ty = tails(y)) {
            Rational l = block_mismatch(tx->left, ty->left);
            Rational r = block_mismatch(tx->right, ty->right);
            Rational v = std::max(l, r);
            return ExactMean{v, v, MeanMode::ExactPeriodic, "eventually periodic tails", l, r};
        }
    }
    const auto* rx = x.as<config_node::RotationCoding>();
    const auto* ry = y.as<config_node::RotationCoding>();
    if (rx && ry && *rx->rotation == *ry->rotation && rx->ceiling == ry->ceiling) {
        // codings differ at n exactly when one offset lies in the arc of n;
        // arcs have length alpha and equidistributed starts
        Rational tau = make_rational(ry->beta_num, ry->beta_den) - make_rational(rx->beta_num, rx->beta_den);
        tau -= Rational(BigInt(boost::multiprecision::numerator(tau) / boost::multiprecision::denominator(tau)));
        if (tau < 0) tau += 1;
        Rational tc = std::min(tau, Rational(1 - tau));
        Interval a = rx->rotation->tightest_bracket();
        Rational mlo = std::min(a.lo, Rational(1 - a.hi));
        Rational mhi = std::min(a.hi, Rational(1 - a.lo));
        Rational lo = 2 * std::min(tc, mlo), hi = 2 * std::min(tc, mhi);
        return ExactMean{lo, hi, MeanMode::ExactRotation, "codings of one rotation at offsets differing by " + to_string(tc),
                         lo, hi};
    }
    return std::nullopt;
}

inline std::int64_t ipow2(std::size_t k) { return std::int64_t{1} << k; }

/// lo-numerators over 2^K of d(t x, t y) for t in a box; hi = lo + 1.
struct TermTable {
    std::size_t k;
    std::vector<GroupElem> enumeration;

    TermTable(int dim, std::size_t k_) : k(k_), enumeration(enumerate_group(dim, k_)) {
        if (k < 1 || k > 40) throw UsageError("metric truncation K must be in 1..40");
    }
    std::int64_t lo(const ConfigDesc& x, const ConfigDesc& y, const GroupElem& t) const {
        std::int64_t v = 0;
        for (std::size_t i = 0; i < k; ++i) {
            GroupElem g = t + enumeration[i];
            if (x.at(g) != y.at(g)) v += ipow2(k - 1 - i);
        }
        return v;
    }
};

struct Windowed {
    Rational upper;
    Rational lower;
    MeanEvidence evidence;
};

inline Windowed windowed_banach(const ConfigDesc& x, const ConfigDesc& y, const MeanParams& p) {
    if (p.n_max < 1 || p.radius < 0) throw UsageError("mean distance needs n_max >= 1 and radius >= 0");
    const int d = x.dim();
    TermTable terms(d, p.k);
    const std::int64_t lo = p.center - p.radius;
    const std::int64_t side = 2 * p.radius + p.n_max;
    // in Z, read each coordinate once
    std::vector<char> mis;
    std::int64_t reach = 0;
    if (d == 1) {
        for (const auto& g : terms.enumeration) reach = std::max(reach, g.max_norm());
        for (std::int64_t u = lo - reach; u < lo + side + reach; ++u) mis.push_back(x.at(u) != y.at(u));
    }
    auto weight = [&](const GroupElem& t) -> std::int64_t {
        if (d != 1) return terms.lo(x, y, t);
        std::int64_t v = 0;
        for (std::size_t i = 0; i < terms.k; ++i)
            if (mis[static_cast<std::size_t>(t[0] + terms.enumeration[i][0] - (lo - reach))]) v += ipow2(terms.k - 1 - i);
        return v;
    };
    BoxSum sums(d, lo, side, weight);
    GroupElem glo(d), ghi(d);
    for (int i = 0; i < d; ++i) {
        glo[i] = p.center - p.radius;
        ghi[i] = p.center + p.radius + 1;
    }
    const Window placements = Window::box(glo, ghi);
    const Rational unit = Rational(1) / ipow2(p.k);
    Windowed out;
    bool first = true;
    for (std::int64_t len = 1; len <= p.n_max; ++len) {
        const std::int64_t cells = ipow(len, d);
        std::int64_t best = -1;
        GroupElem best_g;
        for (const auto& g : placements) {
            std::int64_t c = sums.count(g, len);
            if (c > best) {
                best = c;
                best_g = g;
            }
        }
        Rational hi = make_rational(best + cells, cells) * unit;
        if (first || hi < out.upper) {
            out.upper = hi;
            out.evidence.inf_window = len;
            out.evidence.sup_shift = best_g;
        }
        first = false;
        if (len == p.n_max) {
            out.lower = make_rational(best, cells) * unit;
            out.evidence.lower_window = len;
            out.evidence.lower_shift = best_g;
        }
    }
    out.lower = std::min(out.lower, out.upper);
    return out;
}

}  // namespace detail

struct BesicovitchRow {
    std::int64_t n = 0;
    std::int64_t size = 0;
    Rational lower;  // exact average of truncated distances
    Rational upper;
};

struct BesicovitchResult {
    std::vector<BesicovitchRow> rows;
    MeanDistanceEstimate limsup;
};

/// D_F(x, y): exact interval averages over each F_n and a range-empirical
/// limsup, exact when the pair's mismatch structure is known.
inline BesicovitchResult besicovitch_distance(const ConfigDesc& x, const ConfigDesc& y, const FolnerSpec& folner,
                                              const std::vector<std::int64_t>& ns, std::size_t k = 20) {
    if (ns.empty()) throw UsageError("besicovitch_distance needs a nonempty index range");
    if (folner_dim(folner) != x.dim()) throw UsageError("Folner sequence and configurations differ in dimension");
    detail::TermTable terms(x.dim(), k);
    const Rational unit = Rational(1) / detail::ipow2(k);
    BesicovitchResult out;
    for (auto n : ns) {
        Window f = folner_window(folner, n);
        std::int64_t total = 0;
        for (const auto& g : f) total += terms.lo(x, y, g);
        const auto size = static_cast<std::int64_t>(f.size());
        Rational lo = make_rational(total, size) * unit;
        out.rows.push_back({n, size, lo, lo + unit});
    }
    auto& est = out.limsup;
    est.params.k = k;
    if (auto ex = detail::exact_mean(x, y)) {
        if (ex->mode == MeanMode::ExactRotation || ex->left == ex->right) {
            // uniform along every Folner sequence
            est.lower = ex->lower;
            est.upper = ex->upper;
            est.mode = ex->mode;
            est.evidence.note = ex->note;
            return out;
        }
        // two different tails: the limit depends on where the windows go
        std::optional<Rational> v;
        if (std::holds_alternative<CenteredBoxes>(folner)) {
            v = (ex->left + ex->right) / 2;
        } else if (const auto* sb = std::get_if<ShiftedBoxes>(&folner)) {
            if (std::holds_alternative<NoShift>(sb->shift) || std::holds_alternative<GeometricShift>(sb->shift)) {
                v = ex->right;
            } else if (const auto* ls = std::get_if<LinearShift>(&sb->shift)) {
                Rational f = ls->step >= 0 ? Rational(0) : std::min(Rational(1), make_rational(-ls->step, sb->slope));
                v = f * ex->left + (1 - f) * ex->right;
            }
        }
        if (v) {
            est.lower = est.upper = *v;
            est.mode = MeanMode::ExactPeriodic;
            est.evidence.note = "tail-weighted limit along the Folner sequence";
            return out;
        }
    }
    const std::size_t tail = out.rows.size() / 2;
    Rational hi = out.rows[tail].upper;
    for (std::size_t i = tail; i < out.rows.size(); ++i) hi = std::max(hi, out.rows[i].upper);
    est.lower = out.rows.back().lower;
    est.upper = hi;
    est.mode = MeanMode::Windowed;
    est.evidence.note = "empirical over computed range";
    return out;
}

/// D-bar(x, y) = inf_F sup_g average of d(t x, t y) over F + g.
inline MeanDistanceEstimate banach_mean_distance(const ConfigDesc& x, const ConfigDesc& y, const MeanParams& p = {}) {
    MeanDistanceEstimate est;
    est.params = p;
    if (auto pa = detail::pure_block(x.node())) {
        if (auto pb = detail::pure_block(y.node())) {
            const std::int64_t period = lcm64(static_cast<std::int64_t>(pa->size()), static_cast<std::int64_t>(pb->size()));
            if (period <= 4096) {
                // literal inf over windows of length 1..period of the sup over one period of placements
                auto e = periodic_term_distances(*pa, *pb);
                std::vector<Rational> prefix(static_cast<std::size_t>(2 * period) + 1, Rational(0));
                for (std::int64_t t = 0; t < 2 * period; ++t)
                    prefix[static_cast<std::size_t>(t + 1)] = prefix[static_cast<std::size_t>(t)] + e[static_cast<std::size_t>(t % period)];
                Rational best;
                for (std::int64_t len = 1; len <= period; ++len) {
                    Rational sup = -1;
                    std::int64_t arg = 0;
                    for (std::int64_t g = 0; g < period; ++g) {
                        Rational s = prefix[static_cast<std::size_t>(g + len)] - prefix[static_cast<std::size_t>(g)];
                        if (s > sup) {
                            sup = s;
                            arg = g;
                        }
                    }
                    sup /= len;
                    if (len == 1 || sup < best) {
                        best = sup;
                        est.evidence.inf_window = len;
                        est.evidence.sup_shift = GroupElem{arg};
                    }
                }
                est.lower = est.upper = best;
                est.mode = MeanMode::ExactPeriodic;
                est.evidence.note = "exact term distances over one common period";
                return est;
            }
        }
    }
    if (auto ex = detail::exact_mean(x, y)) {
        est.lower = ex->lower;
        est.upper = ex->upper;
        est.mode = ex->mode;
        est.evidence.note = ex->note;
        return est;
    }
    auto w = detail::windowed_banach(x, y, p);
    est.lower = w.lower;
    est.upper = w.upper;
    est.mode = MeanMode::Windowed;
    est.evidence = w.evidence;
    est.evidence.note = "windowed";
    return est;
}

/// D(x, y) = sup over Folner sequences of D_F(x, y). The lower bound comes
/// from centered boxes and from boxes chasing the heaviest placement; the
/// upper bound is the Banach upper bound, since D <= D-bar.
inline MeanDistanceEstimate weyl_distance(const ConfigDesc& x, const ConfigDesc& y, const MeanParams& p = {}) {
    MeanDistanceEstimate est;
    est.params = p;
    if (auto ex = detail::exact_mean(x, y)) {
        est.lower = ex->lower;
        est.upper = ex->upper;
        est.mode = ex->mode;
        est.evidence.note = ex->note + "; mismatch density";
        return est;
    }
    auto w = detail::windowed_banach(x, y, p);
    const int d = x.dim();
    ShiftedBoxes chase{d, 1, 0, ExplicitShifts{}};
    auto& shifts = std::get<ExplicitShifts>(chase.shift).shifts;
    shifts.assign(static_cast<std::size_t>(p.n_max), w.evidence.lower_shift);
    auto adv = besicovitch_distance(x, y, chase, {p.n_max}, p.k).rows.back().lower;
    auto cen = besicovitch_distance(x, y, CenteredBoxes{d, 1}, {std::max<std::int64_t>(1, p.n_max / 2)}, p.k)
                   .rows.back()
                   .lower;
    est.lower = std::min(std::max(adv, cen), w.upper);
    est.upper = w.upper;
    est.mode = MeanMode::Windowed;
    est.evidence = w.evidence;
    est.evidence.note = adv >= cen ? "adversarial shifted boxes" : "centered boxes";
    return est;
}

}  // namespace meanlab
