#pragma once

// Irrational rotation numbers given by eventually periodic continued
// fractions, with floor queries certified by consecutive convergents.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "meanlab/error.hpp"
#include "meanlab/rational.hpp"

namespace meanlab {

inline constexpr std::int64_t kRotationHorizon = 1'000'000'000;
inline constexpr std::int64_t kBetaDenCap = std::int64_t{1} << 20;

/// alpha = [0; a_1, a_2, ...] with the partial quotients after `prefix`
/// repeating `period` forever. An empty period is rejected: alpha must be irrational.
struct ContinuedFraction {
    std::vector<std::int64_t> prefix;  // a_1 .. a_m
    std::vector<std::int64_t> period;  // repeated block

    std::int64_t quotient(std::size_t i) const {  // i >= 1
        if (i <= prefix.size()) return prefix[i - 1];
        return period[(i - 1 - prefix.size()) % period.size()];
    }
    std::string str() const {
        std::string s = "[0;";
        for (std::size_t i = 0; i < prefix.size(); ++i) s += (i ? "," : "") + std::to_string(prefix[i]);
        s += "(";
        for (std::size_t i = 0; i < period.size(); ++i) s += (i ? "," : "") + std::to_string(period[i]);
        return s + ")]";
    }
    friend bool operator==(const ContinuedFraction&, const ContinuedFraction&) = default;
};

class Rotation {
public:
    explicit Rotation(ContinuedFraction cf, std::string name = "") : cf_(std::move(cf)), name_(std::move(name)) {
        if (cf_.period.empty()) throw UsageError("rotation number needs a repeating block of partial quotients");
        for (auto a : cf_.prefix)
            if (a < 1) throw UsageError("partial quotients must be positive");
        for (auto a : cf_.period)
            if (a < 1) throw UsageError("partial quotients must be positive");
        if (name_.empty()) name_ = cf_.str();
        // p_{-1} = 1, q_{-1} = 0; p_0 = 0, q_0 = 1
        std::int64_t pm = 1, qm = 0, p = 0, q = 1;
        p_.push_back(p);
        q_.push_back(q);
        for (std::size_t i = 1;; ++i) {
            __int128 a = cf_.quotient(i);
            __int128 np = a * p + pm, nq = a * q + qm;
            if (nq > kDenCap) break;
            pm = p;
            qm = q;
            p = static_cast<std::int64_t>(np);
            q = static_cast<std::int64_t>(nq);
            p_.push_back(p);
            q_.push_back(q);
        }
    }

    static Rotation golden() { return Rotation({{}, {1}}, "golden"); }
    static Rotation silver() { return Rotation({{}, {2}}, "silver"); }

    const ContinuedFraction& cf() const { return cf_; }
    const std::string& name() const { return name_; }
    std::size_t convergent_count() const { return p_.size(); }

    /// Rational enclosure of alpha from convergents k and k + 1.
    Interval bracket(std::size_t k) const {
        k = std::min(k, p_.size() - 2);
        Rational a = make_rational(p_[k], q_[k]), b = make_rational(p_[k + 1], q_[k + 1]);
        return a < b ? Interval{a, b} : Interval{b, a};
    }
    Interval tightest_bracket() const { return bracket(p_.size() - 2); }

    /// floor(n * alpha + u / v), certified; v > 0.
    std::int64_t floor_at(std::int64_t n, std::int64_t u = 0, std::int64_t v = 1) const {
        if (v <= 0 || v > kBetaDenCap) throw HorizonExceeded("offset denominator outside the certified range");
        if (n == 0) return floor_div(u, v);
        if (n > kRotationHorizon || n < -kRotationHorizon)
            throw HorizonExceeded("rotation query at |n| = " + std::to_string(n) + " beyond the precision horizon");
        for (std::size_t k = 0; k + 1 < p_.size(); ++k) {
            // alpha lies strictly between p_k/q_k and p_{k+1}/q_{k+1}
            std::int64_t pl = p_[k], ql = q_[k], ph = p_[k + 1], qh = q_[k + 1];
            if ((k % 2 == 1) != (n < 0)) {
                std::swap(pl, ph);
                std::swap(ql, qh);
            }
            // value in the open interval (n pl/ql + u/v, n ph/qh + u/v)
            __int128 lo_num = static_cast<__int128>(n) * pl * v + static_cast<__int128>(u) * ql;
            __int128 lo_den = static_cast<__int128>(ql) * v;
            __int128 a = floor128(lo_num, lo_den);
            __int128 hi_num = static_cast<__int128>(n) * ph * v + static_cast<__int128>(u) * qh;
            __int128 hi_den = static_cast<__int128>(qh) * v;
            if (hi_num <= (a + 1) * hi_den) return static_cast<std::int64_t>(a);
        }
        throw HorizonExceeded("convergents exhausted before certifying floor at n = " + std::to_string(n));
    }

    /// {n alpha} < {m alpha}.
    bool frac_less(std::int64_t n, std::int64_t m) const {
        if (n == m) return false;
        std::int64_t c = floor_at(n) - floor_at(m);
        return floor_at(n - m) < c;
    }

    /// {n alpha} < u/v for 0 <= u/v <= 1.
    bool frac_below(std::int64_t n, std::int64_t u, std::int64_t v) const {
        if (n == 0) return 0 < u;
        return floor_at(n, -u, v) < floor_at(n);
    }

    /// Rational enclosure of {n alpha} no wider than `width`.
    Interval frac_bracket(std::int64_t n, const Rational& width) const {
        if (n == 0) return Interval::point(0);
        const std::int64_t f = floor_at(n);
        for (std::size_t k = 0; k + 1 < p_.size(); ++k) {
            Interval b = bracket(k);
            Interval r = n > 0 ? Interval{n * b.lo - f, n * b.hi - f} : Interval{n * b.hi - f, n * b.lo - f};
            if (r.width() <= width || k + 2 == p_.size()) return r;
        }
        return Interval{0, 1};
    }

    friend bool operator==(const Rotation& a, const Rotation& b) { return a.cf_ == b.cf_; }

private:
    static constexpr std::int64_t kDenCap = std::int64_t{1} << 40;

    static __int128 floor128(__int128 a, __int128 b) {
        __int128 q = a / b;
        if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
        return q;
    }

    ContinuedFraction cf_;
    std::string name_;
    std::vector<std::int64_t> p_, q_;
};

}  // namespace meanlab
