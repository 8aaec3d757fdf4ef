#pragma once

// Topological entropy of subshifts by pattern counting and the Perron root of
// the transfer matrix; measure entropy of Bernoulli and Markov measures.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "meanlab/error.hpp"
#include "meanlab/group.hpp"
#include "meanlab/rational.hpp"
#include "meanlab/subshift.hpp"

namespace meanlab {

enum class ClaimKind { Exact, Bounded, Empirical };

inline std::string to_string(ClaimKind k) {
    switch (k) {
        case ClaimKind::Exact: return "exact";
        case ClaimKind::Bounded: return "bounded";
        case ClaimKind::Empirical: return "empirical";
    }
    return "?";
}

struct EntropyRow {
    std::int64_t n = 0;
    std::int64_t size = 0;  // |F_n|
    BigInt count;           // N(F_n), or the number of positive cells of the join
    long double value = 0;  // (1/|F_n|) log N(F_n), or (1/|F_n|) H(P^F_n)
};

struct EntropyEstimate {
    std::vector<EntropyRow> rows;
    ClaimKind kind = ClaimKind::Empirical;
    long double lo = 0;  // limit claim, natural log
    long double hi = 0;
    std::string note;
    std::optional<Interval> radius;  // Perron root enclosure for SFTs
    bool monotone = true;            // rows nonincreasing (checked exactly where possible)

    long double value() const { return (lo + hi) / 2; }
    bool positive() const { return lo > 0; }
};

// ---------------------------------------------------------------------------
// Perron root

using Poly = std::vector<Rational>;  // coefficient of x^i at index i

namespace detail {

inline void trim(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline Rational eval(const Poly& p, const Rational& x) {
    Rational v = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * x + *it;
    return v;
}

inline Poly derivative(const Poly& p) {
    Poly d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<std::int64_t>(i));
    return d;
}

inline Poly remainder(Poly a, const Poly& b) {
    while (a.size() >= b.size() && !a.empty()) {
        Rational f = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= f * b[i];
        a.pop_back();
        trim(a);
    }
    return a;
}

/// p / (x - m), for m a root of p.
inline Poly divide_linear(const Poly& p, std::int64_t m) {
    const std::size_t n = p.size() - 1;
    Poly q(n);
    Rational carry = 0;
    for (std::size_t i = n; i >= 1; --i) {
        carry = p[i] + carry * m;
        q[i - 1] = carry;
    }
    return q;
}

inline std::vector<Poly> sturm_chain(const Poly& p) {
    std::vector<Poly> chain{p, derivative(p)};
    trim(chain[1]);
    while (!chain.back().empty()) {
        Poly r = remainder(chain[chain.size() - 2], chain.back());
        if (r.empty()) break;
        for (auto& c : r) c = -c;
        chain.push_back(std::move(r));
    }
    return chain;
}

/// Sign changes of the chain at x, zeros skipped.
inline int sign_changes(const std::vector<Poly>& chain, const Rational& x) {
    int changes = 0, last = 0;
    for (const auto& q : chain) {
        Rational v = eval(q, x);
        int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

}  // namespace detail

/// det(xI - A) by Faddeev-LeVerrier, exact.
inline Poly characteristic_polynomial(const BoolMatrix& a) {
    const std::size_t n = a.size();
    using Mat = std::vector<std::vector<Rational>>;
    Mat am(n, std::vector<Rational>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) am[i][j] = ((a[i] >> j) & 1) ? 1 : 0;
    Poly c(n + 1, 0);
    c[n] = 1;
    Mat m(n, std::vector<Rational>(n, 0));
    for (std::size_t k = 1; k <= n; ++k) {
        Mat next(n, std::vector<Rational>(n, 0));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t l = 0; l < n; ++l)
                    if (am[i][l] != 0) next[i][j] += m[l][j];
            next[i][i] += c[n - k + 1];
        }
        m = std::move(next);
        Rational tr = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l)
                if (am[i][l] != 0) tr += m[l][i];
        c[n - k] = -tr / static_cast<std::int64_t>(k);
    }
    return c;
}

inline constexpr std::size_t kRootIsolationMax = 6;

struct PerronRoot {
    Interval enclosure;  // lambda in [lo, hi]
    bool exact = false;  // lo == hi is the root itself
    std::string method;
};

/// Largest real root of the characteristic polynomial, isolated by Sturm
/// counts and bisection to width <= tol.
inline PerronRoot perron_root_isolated(const BoolMatrix& a, const Rational& tol) {
    Poly p = characteristic_polynomial(a);
    std::int64_t rowmax = 0;
    for (auto r : a) rowmax = std::max<std::int64_t>(rowmax, std::popcount(r));
    PerronRoot out;
    out.method = "characteristic-polynomial root isolation";
    // the polynomial is monic with integer coefficients, so its rational roots
    // are integers; dividing them out leaves a polynomial that no rational
    // evaluation point can hit
    std::int64_t int_root = 0;
    for (std::int64_t m = 0; m <= rowmax; ++m)
        while (p.size() > 1 && detail::eval(p, m) == 0) {
            p = detail::divide_linear(p, m);
            int_root = m;
        }
    out.enclosure = Interval::point(int_root);
    out.exact = true;
    if (p.size() <= 1) return out;
    auto chain = detail::sturm_chain(p);
    const Rational top = rowmax + 1;  // strictly above every root
    const int v_top = detail::sign_changes(chain, top);
    auto roots_above = [&](const Rational& x) { return detail::sign_changes(chain, x) - v_top; };
    if (roots_above(int_root) == 0) return out;
    Rational lo = int_root, hi = top;
    while (hi - lo > tol) {
        Rational mid = (lo + hi) / 2;
        if (roots_above(mid) > 0)
            lo = mid;
        else
            hi = mid;
    }
    out.enclosure = {lo, hi};
    out.exact = false;
    return out;
}

/// Collatz-Wielandt bounds per strongly connected component of A + I.
inline PerronRoot perron_root_bounds(const BoolMatrix& a, int iterations = 400) {
    const std::size_t n = a.size();
    std::vector<std::uint64_t> reach(n);
    for (std::size_t i = 0; i < n; ++i) reach[i] = a[i] | (std::uint64_t{1} << i);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if ((reach[i] >> k) & 1) reach[i] |= reach[k];
    PerronRoot out;
    out.method = "Collatz-Wielandt enclosure";
    out.enclosure = Interval::point(0);
    std::uint64_t done = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if ((done >> i) & 1) continue;
        std::vector<std::size_t> comp;
        for (std::size_t j = 0; j < n; ++j)
            if (((reach[i] >> j) & 1) && ((reach[j] >> i) & 1)) comp.push_back(j);
        for (auto j : comp) done |= std::uint64_t{1} << j;
        bool cyclic = false;
        for (auto j : comp)
            for (auto l : comp)
                if ((a[j] >> l) & 1) cyclic = true;
        if (!cyclic) continue;
        const std::size_t m = comp.size();
        std::vector<double> v(m, 1.0);
        auto apply = [&](const auto& x, auto zero) {
            std::vector<decltype(zero)> y(m, zero);
            for (std::size_t r = 0; r < m; ++r) {
                y[r] = x[r];
                for (std::size_t c = 0; c < m; ++c)
                    if ((a[comp[r]] >> comp[c]) & 1) y[r] += x[c];
            }
            return y;
        };
        for (int it = 0; it < iterations; ++it) {
            auto w = apply(v, 0.0);
            double mx = *std::max_element(w.begin(), w.end());
            for (std::size_t r = 0; r < m; ++r) v[r] = w[r] / mx;
        }
        std::vector<Rational> vr(m);
        for (std::size_t r = 0; r < m; ++r) vr[r] = exact_rational(std::max(v[r], 1e-300));
        auto w = apply(vr, Rational(0));
        Rational lo = w[0] / vr[0], hi = lo;
        for (std::size_t r = 1; r < m; ++r) {
            lo = std::min(lo, Rational(w[r] / vr[r]));
            hi = std::max(hi, Rational(w[r] / vr[r]));
        }
        lo -= 1;
        hi -= 1;
        out.enclosure.lo = std::max(out.enclosure.lo, lo);
        out.enclosure.hi = std::max(out.enclosure.hi, hi);
    }
    return out;
}

inline PerronRoot perron_root(const BoolMatrix& a, const Rational& tol = make_rational(1, 1'000'000'000)) {
    if (a.size() <= kRootIsolationMax) return perron_root_isolated(a, tol);
    return perron_root_bounds(a);
}

// ---------------------------------------------------------------------------
// Topological entropy

namespace detail {

/// N_a^(1/s_a) >= N_b^(1/s_b) exactly.
inline bool rate_not_below(const BigInt& na, std::int64_t sa, const BigInt& nb, std::int64_t sb) {
    if (sa > 4096 || sb > 4096) return true;  // not checked at this size
    return boost::multiprecision::pow(na, static_cast<unsigned>(sb)) >=
           boost::multiprecision::pow(nb, static_cast<unsigned>(sa));
}

inline bool rows_monotone(const std::vector<EntropyRow>& rows) {
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].size > rows[i - 1].size &&
            !rate_not_below(rows[i - 1].count, rows[i - 1].size, rows[i].count, rows[i].size))
            return false;
    return true;
}

}  // namespace detail

/// Folner pattern-count entropy with a limit claim.
inline EntropyEstimate topological_entropy(const SubshiftSpec& x, const FolnerSpec& folner, std::int64_t n_max) {
    if (n_max < 1) throw UsageError("entropy needs n_max >= 1");
    if (folner_dim(folner) != x.dim()) throw UsageError("Folner sequence and system differ in dimension");
    EntropyEstimate est;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        Window f = folner_window(folner, n);
        if (f.empty()) throw UsageError("empty Folner window");
        EntropyRow row;
        row.n = n;
        row.size = static_cast<std::int64_t>(f.size());
        row.count = x.pattern_count(f);
        row.value = row.count > 0 ? log_bigint(row.count) / static_cast<long double>(row.size) : 0;
        est.rows.push_back(std::move(row));
    }
    est.monotone = detail::rows_monotone(est.rows);
    const auto& last = est.rows.back();
    if (const auto* fs = x.as<FullShift>()) {
        est.kind = ClaimKind::Exact;
        est.lo = est.hi = std::log(static_cast<long double>(fs->k));
        est.note = "log " + std::to_string(fs->k);
    } else if (x.as<SFT>()) {
        BoolMatrix m = x.trimmed();
        auto alive = x.essential_states();
        if (std::none_of(alive.begin(), alive.end(), [](bool b) { return b; })) {
            est.kind = ClaimKind::Exact;
            est.note = "empty subshift";
            return est;
        }
        auto root = perron_root(m);
        est.radius = root.enclosure;
        est.kind = ClaimKind::Exact;
        est.lo = root.enclosure.lo > 0 ? std::max<long double>(0, log_rational(root.enclosure.lo)) : 0;
        est.hi = std::max<long double>(0, log_rational(root.enclosure.hi));
        if (root.exact && root.enclosure.lo == 1) est.lo = est.hi = 0;
        est.note = "log of the Perron root, " + root.method;
    } else if (x.as<Sturmian>()) {
        est.kind = ClaimKind::Bounded;
        est.lo = 0;
        est.hi = last.value;
        est.note = "<= log N(n)/n at the largest window, -> 0";
    } else if (x.as<PeriodicOrbit>()) {
        est.kind = ClaimKind::Exact;
        est.lo = est.hi = 0;
        est.note = "finite orbit";
    } else {
        est.kind = ClaimKind::Empirical;
        est.lo = 0;
        est.hi = last.value;
        est.note = "horizon-limited pattern counts";
    }
    return est;
}

inline EntropyEstimate topological_entropy(const SubshiftSpec& x, std::int64_t n_max) {
    return topological_entropy(x, ShiftedBoxes{x.dim(), 1, 0, NoShift{}}, n_max);
}

// ---------------------------------------------------------------------------
// Measures

struct Bernoulli {
    std::vector<Rational> p;
};

/// Stationary chain on states with a symbol label per state (identity when
/// `labels` is empty).
struct Markov {
    std::vector<std::vector<Rational>> p;
    std::vector<Rational> pi;
    std::vector<Symbol> labels;
};

class MeasureSpec {
public:
    using Variant = std::variant<Bernoulli, Markov>;

    static MeasureSpec bernoulli(std::vector<Rational> p, std::string name = "") {
        Rational sum = 0;
        for (const auto& q : p) {
            if (q < 0) throw UsageError("Bernoulli weights must be nonnegative");
            sum += q;
        }
        if (p.empty() || sum != 1) throw UsageError("Bernoulli weights must sum to 1");
        if (name.empty()) {
            name = "bernoulli:";
            for (std::size_t i = 0; i < p.size(); ++i) name += (i ? "," : "") + to_string(p[i]);
        }
        return MeasureSpec(Bernoulli{std::move(p)}, std::move(name));
    }

    static MeasureSpec uniform_bernoulli(int k) {
        return bernoulli(std::vector<Rational>(static_cast<std::size_t>(k), Rational(1, k)));
    }

    static MeasureSpec markov(std::vector<std::vector<Rational>> p, std::vector<Rational> pi,
                              std::vector<Symbol> labels = {}, std::string name = "markov") {
        const std::size_t n = p.size();
        if (n == 0 || pi.size() != n) throw UsageError("Markov matrix and stationary vector differ in size");
        if (!labels.empty() && labels.size() != n) throw UsageError("Markov labels differ in size from the matrix");
        for (const auto& row : p) {
            if (row.size() != n) throw UsageError("Markov matrix must be square");
            Rational sum = 0;
            for (const auto& q : row) {
                if (q < 0) throw UsageError("Markov probabilities must be nonnegative");
                sum += q;
            }
            if (sum != 1) throw UsageError("Markov rows must sum to 1");
        }
        Rational total = 0;
        for (const auto& q : pi) {
            if (q < 0) throw UsageError("stationary vector must be nonnegative");
            total += q;
        }
        if (total != 1) throw UsageError("stationary vector must sum to 1");
        for (std::size_t j = 0; j < n; ++j) {
            Rational v = 0;
            for (std::size_t i = 0; i < n; ++i) v += pi[i] * p[i][j];
            if (v != pi[j]) throw UsageError("stationary vector is not invariant: (pi P)_" + std::to_string(j) + " = " +
                                             to_string(v) + " != " + to_string(pi[j]));
        }
        return MeasureSpec(Markov{std::move(p), std::move(pi), std::move(labels)}, std::move(name));
    }

    /// Uniform measure on the orbit of a periodic word, as a cyclic chain.
    static MeasureSpec orbit_uniform(const std::vector<Symbol>& word) {
        const std::size_t n = word.size();
        if (n == 0) throw UsageError("periodic word must be nonempty");
        std::vector<std::vector<Rational>> p(n, std::vector<Rational>(n, 0));
        for (std::size_t i = 0; i < n; ++i) p[i][(i + 1) % n] = 1;
        return markov(std::move(p), std::vector<Rational>(n, Rational(1, static_cast<std::int64_t>(n))), word,
                      "orbit-uniform");
    }

    const Variant& variant() const { return v_; }
    const std::string& name() const { return name_; }

    /// The measure as a labelled chain.
    Markov chain() const {
        if (const auto* m = std::get_if<Markov>(&v_)) {
            Markov c = *m;
            if (c.labels.empty())
                for (std::size_t i = 0; i < c.p.size(); ++i) c.labels.push_back(static_cast<Symbol>(i));
            return c;
        }
        const auto& b = std::get<Bernoulli>(v_);
        Markov c;
        c.p.assign(b.p.size(), b.p);
        c.pi = b.p;
        for (std::size_t i = 0; i < b.p.size(); ++i) c.labels.push_back(static_cast<Symbol>(i));
        return c;
    }

    /// Labels are a bijection onto symbols 0..n-1, so the chain is the
    /// symbol process itself.
    bool plain() const {
        Markov c = chain();
        for (std::size_t i = 0; i < c.labels.size(); ++i)
            if (c.labels[i] != static_cast<Symbol>(i)) return false;
        return true;
    }

private:
    MeasureSpec(Variant v, std::string name) : v_(std::move(v)), name_(std::move(name)) {}
    Variant v_;
    std::string name_;
};

/// Cells on a window [0, w): each cell is a list of words; origin symbols
/// when `cells` is empty.
struct PartitionSpec {
    std::int64_t width = 1;
    std::vector<std::vector<std::vector<Symbol>>> cells;

    static PartitionSpec origin() { return {}; }
    bool generating() const { return cells.empty() && width == 1; }
};

inline constexpr std::size_t kWordEnumerationCap = std::size_t{1} << 20;

namespace detail {

inline long double xlogx(const Rational& q) {
    if (q <= 0) return 0;
    return to_long_double(q) * log_rational(q);
}

/// Positive-probability words of length n with their probabilities.
inline std::map<std::vector<Symbol>, Rational> word_probabilities(const Markov& c, std::int64_t n) {
    const std::size_t s = c.p.size();
    struct Item {
        std::vector<Symbol> word;
        std::vector<Rational> mass;  // by current state
    };
    std::map<std::vector<Symbol>, Rational> out;
    std::vector<Item> stack;
    {
        std::map<Symbol, std::vector<Rational>> first;
        for (std::size_t i = 0; i < s; ++i) {
            if (c.pi[i] == 0) continue;
            auto& v = first[c.labels[i]];
            v.resize(s, 0);
            v[i] += c.pi[i];
        }
        for (auto& [sym, v] : first) stack.push_back({{sym}, v});
    }
    while (!stack.empty()) {
        Item it = std::move(stack.back());
        stack.pop_back();
        if (static_cast<std::int64_t>(it.word.size()) == n) {
            Rational total = 0;
            for (const auto& m : it.mass) total += m;
            out.emplace(std::move(it.word), total);
            if (out.size() > kWordEnumerationCap) throw CapExceeded("word enumeration exceeds cap");
            continue;
        }
        std::map<Symbol, std::vector<Rational>> next;
        for (std::size_t i = 0; i < s; ++i) {
            if (it.mass[i] == 0) continue;
            for (std::size_t j = 0; j < s; ++j) {
                if (c.p[i][j] == 0) continue;
                auto& v = next[c.labels[j]];
                v.resize(s, 0);
                v[j] += it.mass[i] * c.p[i][j];
            }
        }
        for (auto& [sym, v] : next) {
            auto w = it.word;
            w.push_back(sym);
            stack.push_back({std::move(w), std::move(v)});
        }
    }
    return out;
}

inline long double shannon(const std::vector<Rational>& q) {
    long double h = 0;
    for (const auto& v : q) h -= xlogx(v);
    return h;
}

/// -sum pi_i P_ij log P_ij.
inline long double chain_rate(const Markov& c) {
    long double h = 0;
    for (std::size_t i = 0; i < c.p.size(); ++i) {
        if (c.pi[i] == 0) continue;
        long double row = 0;
        for (const auto& q : c.p[i]) row -= xlogx(q);
        h += to_long_double(c.pi[i]) * row;
    }
    return h;
}

}  // namespace detail

/// Every positive-probability word up to `len` occurs in X.
inline void check_support(const SubshiftSpec& x, const MeasureSpec& mu, std::int64_t len = 8) {
    if (x.dim() != 1) throw UsageError("measure entropy is implemented for Z-subshifts");
    Markov c = mu.chain();
    for (auto l : c.labels)
        if (l < 0 || l >= x.alphabet_size()) throw UsageError("measure " + mu.name() + " uses symbols outside X");
    for (std::int64_t n = 1; n <= len; ++n)
        for (const auto& [w, q] : detail::word_probabilities(c, n))
            if (!x.cylinder_nonempty(CylinderSet(Window::interval(0, n), w)))
                throw UsageError("measure " + mu.name() + " charges a word outside X");
}

/// h_mu(P) along interval windows; exact claim for the generating partition.
inline EntropyEstimate measure_entropy(const SubshiftSpec& x, const MeasureSpec& mu, const PartitionSpec& part,
                                       const FolnerSpec& folner, std::int64_t n_max) {
    if (n_max < 1) throw UsageError("entropy needs n_max >= 1");
    check_support(x, mu);
    const Markov c = mu.chain();
    if (part.width < 1) throw UsageError("partition width must be >= 1");
    // cell index of each word on [0, width)
    std::map<std::vector<Symbol>, int> cell_of;
    if (!part.cells.empty()) {
        for (std::size_t i = 0; i < part.cells.size(); ++i)
            for (const auto& w : part.cells[i]) {
                if (static_cast<std::int64_t>(w.size()) != part.width)
                    throw UsageError("partition word length differs from its width");
                if (!cell_of.emplace(w, static_cast<int>(i)).second) throw UsageError("partition cells overlap");
            }
        for (const auto& [w, q] : detail::word_probabilities(c, part.width))
            if (!cell_of.count(w)) throw UsageError("partition cells do not cover the support of the measure");
    }
    const bool closed_form = part.cells.empty() && part.width == 1 && mu.plain();
    EntropyEstimate est;
    long double h_pi = detail::shannon(c.pi), rate = detail::chain_rate(c);
    for (std::int64_t n = 1; n <= n_max; ++n) {
        Window f = folner_window(folner, n);
        if (!f.is_interval()) throw UnsupportedShape("measure entropy needs interval windows");
        const auto len = static_cast<std::int64_t>(f.size());
        EntropyRow row;
        row.n = n;
        row.size = len;
        long double h = 0;
        if (closed_form) {
            h = h_pi + static_cast<long double>(len - 1) * rate;
            // positive cells: paths of the support graph from charged states
            std::vector<BigInt> ends(c.p.size());
            for (std::size_t i = 0; i < c.p.size(); ++i) ends[i] = c.pi[i] > 0 ? 1 : 0;
            for (std::int64_t step = 1; step < len; ++step) {
                std::vector<BigInt> next(c.p.size(), 0);
                for (std::size_t i = 0; i < c.p.size(); ++i)
                    for (std::size_t j = 0; j < c.p.size(); ++j)
                        if (c.p[i][j] > 0) next[j] += ends[i];
                ends = std::move(next);
            }
            row.count = 0;
            for (const auto& e : ends) row.count += e;
        } else {
            std::map<std::vector<int>, Rational> join;
            const std::int64_t wl = len + part.width - 1;
            for (const auto& [w, q] : detail::word_probabilities(c, wl)) {
                std::vector<int> key;
                for (std::int64_t s = 0; s < len; ++s) {
                    std::vector<Symbol> sub(w.begin() + s, w.begin() + s + part.width);
                    key.push_back(part.cells.empty() ? sub[0] : cell_of.at(sub));
                }
                join[key] += q;
            }
            for (const auto& [k, q] : join) h -= detail::xlogx(q);
            row.count = BigInt(join.size());
        }
        row.value = h / static_cast<long double>(len);
        est.rows.push_back(std::move(row));
    }
    est.monotone = true;
    for (std::size_t i = 1; i < est.rows.size(); ++i)
        if (est.rows[i].size > est.rows[i - 1].size && est.rows[i].value > est.rows[i - 1].value + 1e-12L)
            est.monotone = false;
    long double mn = est.rows.front().value;
    for (const auto& r : est.rows) mn = std::min(mn, r.value);
    if (part.generating() && mu.plain()) {
        est.kind = ClaimKind::Exact;
        est.lo = est.hi = std::holds_alternative<Bernoulli>(mu.variant()) ? h_pi : rate;
        est.note = std::holds_alternative<Bernoulli>(mu.variant()) ? "-sum p_i log p_i" : "-sum pi_i P_ij log P_ij";
    } else if (part.generating() && rate == 0) {
        est.kind = ClaimKind::Exact;
        est.lo = est.hi = 0;
        est.note = "deterministic chain";
    } else {
        est.kind = ClaimKind::Bounded;
        est.lo = 0;
        est.hi = mn;
        est.note = "h(P) <= min over the window schedule";
    }
    return est;
}

inline EntropyEstimate measure_entropy(const SubshiftSpec& x, const MeasureSpec& mu, std::int64_t n_max) {
    return measure_entropy(x, mu, PartitionSpec::origin(), ShiftedBoxes{1, 1, 0, NoShift{}}, n_max);
}

/// Maximal-entropy Markov measure of an irreducible SFT, with transition
/// probabilities rounded to rationals and the stationary vector solved exactly.
inline MeasureSpec parry_measure(const SubshiftSpec& x, int denominator_bits = 40) {
    const auto* sft = x.as<SFT>();
    if (!sft) throw UnsupportedShape("Parry measure needs an SFT");
    auto alive = x.essential_states();
    if (!std::all_of(alive.begin(), alive.end(), [](bool b) { return b; }) || !x.strongly_connected())
        throw UnsupportedShape("Parry measure needs an irreducible SFT without dead states");
    BoolMatrix a = x.trimmed();
    const std::size_t n = a.size();
    std::vector<long double> v(n, 1.0L);
    long double lambda = 1;
    for (int it = 0; it < 2000; ++it) {  // power iteration on A + I
        std::vector<long double> w(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = v[i];
            for (std::size_t j = 0; j < n; ++j)
                if ((a[i] >> j) & 1) w[i] += v[j];
        }
        long double mx = *std::max_element(w.begin(), w.end());
        lambda = mx / *std::max_element(v.begin(), v.end()) - 1;
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / mx;
    }
    const BigInt scale = BigInt(1) << denominator_bits;
    std::vector<std::vector<Rational>> p(n, std::vector<Rational>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        Rational sum = 0;
        std::size_t last = n;
        for (std::size_t j = 0; j < n; ++j) {
            if (!((a[i] >> j) & 1)) continue;
            long double q = v[j] / (lambda * v[i]);
            auto num = static_cast<std::int64_t>(std::llround(q * std::ldexp(1.0L, denominator_bits)));
            p[i][j] = Rational(BigInt(std::max<std::int64_t>(num, 1)), scale);
            sum += p[i][j];
            last = j;
        }
        p[i][last] += 1 - sum;
        if (p[i][last] <= 0) throw PreconditionError("Parry rounding produced a nonpositive entry");
    }
    // pi (P - I) = 0, sum pi = 1: Gauss-Jordan on the transposed system
    std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n + 1, 0));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) m[j][i] = p[i][j] - (i == j ? 1 : 0);
    }
    for (std::size_t i = 0; i < n; ++i) m[n - 1][i] = 1;
    m[n - 1][n] = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && m[piv][col] == 0) ++piv;
        if (piv == n) throw PreconditionError("singular stationary system");
        std::swap(m[piv], m[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || m[r][col] == 0) continue;
            Rational f = m[r][col] / m[col][col];
            for (std::size_t k = col; k <= n; ++k) m[r][k] -= f * m[col][k];
        }
    }
    std::vector<Rational> pi(n);
    for (std::size_t i = 0; i < n; ++i) pi[i] = m[i][n] / m[i][i];
    return MeasureSpec::markov(std::move(p), std::move(pi), {}, "parry");
}

struct VariationalRow {
    std::string measure;
    long double h_mu = 0;  // exact claim value or upper bound
    ClaimKind kind = ClaimKind::Exact;
    bool ok = true;
};

struct VariationalReport {
    std::string system;
    long double h_top_lo = 0, h_top_hi = 0;
    std::vector<VariationalRow> rows;
    long double max_h_mu = 0;
    long double gap = 0;  // h_top - max h_mu
    long double tolerance = 0;
    bool pass = true;
};

/// h_mu <= h_top + tol for each supplied measure, and the attainment gap.
inline VariationalReport check_variational(const SubshiftSpec& x, const std::vector<MeasureSpec>& measures,
                                           std::int64_t n_max = 12) {
    VariationalReport rep;
    rep.system = x.name();
    auto top = topological_entropy(x, std::max<std::int64_t>(n_max, 1));
    rep.h_top_lo = top.lo;
    rep.h_top_hi = top.hi;
    const bool exact = top.kind == ClaimKind::Exact;
    rep.tolerance = exact ? 1e-6L : 1e-2L;
    for (const auto& mu : measures) {
        auto h = measure_entropy(x, mu, n_max);
        VariationalRow row{mu.name(), h.kind == ClaimKind::Exact ? h.lo : h.hi, h.kind, true};
        if (h.kind != ClaimKind::Exact) rep.tolerance = 1e-2L;
        row.ok = row.h_mu <= rep.h_top_hi + rep.tolerance;
        rep.pass = rep.pass && row.ok;
        rep.max_h_mu = std::max(rep.max_h_mu, row.h_mu);
        rep.rows.push_back(std::move(row));
    }
    rep.gap = rep.h_top_hi - rep.max_h_mu;
    return rep;
}

}  // namespace meanlab
