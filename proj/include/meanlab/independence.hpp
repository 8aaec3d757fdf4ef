#pragma once

// Independence sets for tuples of cylinders, phi_A(F), independence density
// and IE-pair witnesses.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "meanlab/config.hpp"
#include "meanlab/error.hpp"
#include "meanlab/group.hpp"
#include "meanlab/rational.hpp"
#include "meanlab/subshift.hpp"

namespace meanlab {

inline constexpr std::size_t kIndependenceCap = 20;
inline constexpr std::size_t kPhiCap = 14;

/// Cylinder emptiness with per-call caches (SFT matrix powers by gap).
class Feasibility {
public:
    explicit Feasibility(const SubshiftSpec& x) : x_(x) {
        if (x_.as<SFT>()) {
            m_ = x_.trimmed();
            alive_ = x_.essential_states();
        }
    }

    bool operator()(const CylinderSet& c) {
        if (x_.as<FullShift>()) {
            for (auto s : c.symbols)
                if (s < 0 || s >= x_.alphabet_size()) return false;
            return true;
        }
        if (!x_.as<SFT>()) return x_.cylinder_nonempty(c);
        const auto& w = c.window.elems();
        for (std::size_t i = 0; i < w.size(); ++i) {
            auto s = c.symbols[i];
            if (s < 0 || s >= static_cast<Symbol>(alive_.size()) || !alive_[static_cast<std::size_t>(s)]) return false;
            if (i == 0) continue;
            std::int64_t gap = w[i][0] - w[i - 1][0];
            auto it = powers_.find(gap);
            if (it == powers_.end()) it = powers_.emplace(gap, detail::bool_pow(m_, gap)).first;
            if (!((it->second[static_cast<std::size_t>(c.symbols[i - 1])] >> s) & 1)) return false;
        }
        return true;
    }

private:
    const SubshiftSpec& x_;
    BoolMatrix m_;
    std::vector<bool> alive_;
    std::map<std::int64_t, BoolMatrix> powers_;
};

namespace detail {

inline void check_tuple(const SubshiftSpec& x, const std::vector<CylinderSet>& a) {
    if (a.size() < 2 || a.size() > 4) throw UsageError("independence tuples need 2..4 cylinder sets");
    for (const auto& c : a)
        if (!c.window.empty() && c.window.dim() != x.dim()) throw UsageError("cylinder dimension differs from the system");
}

/// All merged constraint sets for J extended by s, or nullopt when some
/// assignment is infeasible.
inline std::optional<std::vector<CylinderSet>> extend(const std::vector<CylinderSet>& current,
                                                      const std::vector<CylinderSet>& a, const GroupElem& s,
                                                      Feasibility& feasible) {
    std::vector<CylinderSet> next;
    next.reserve(current.size() * a.size());
    for (const auto& cur : current)
        for (const auto& ai : a) {
            auto merged = CylinderSet::merge({cur, ai.translated(s)});
            if (!merged || !feasible(*merged)) return std::nullopt;
            next.push_back(std::move(*merged));
        }
    return next;
}

}  // namespace detail

/// Every assignment omega in {1..k}^J has nonempty intersection of the
/// translated sets A_omega(s) moved to window + s.
inline bool is_independent(const SubshiftSpec& x, const std::vector<CylinderSet>& a, const Window& j) {
    detail::check_tuple(x, a);
    if (j.size() > kIndependenceCap) throw CapExceeded("independence check limited to |J| <= 20");
    Feasibility feasible(x);
    std::vector<CylinderSet> current{CylinderSet()};
    for (const auto& s : j) {
        auto next = detail::extend(current, a, s, feasible);
        if (!next) return false;
        current = std::move(*next);
    }
    return true;
}

struct IndependenceResult {
    Window f;
    Window best_j;
    std::int64_t phi = 0;        // certified lower value (exact when `exact`)
    std::int64_t phi_upper = 0;  // equals phi when exact
    bool exact = true;
};

/// phi_A(F) = max |F ∩ J| over independence sets J, by include-first
/// branch and bound; the first maximizer found is the lexicographically least.
inline IndependenceResult phi(const SubshiftSpec& x, const std::vector<CylinderSet>& a, const Window& f,
                              std::size_t cap = kPhiCap) {
    detail::check_tuple(x, a);
    IndependenceResult out;
    out.f = f;
    const auto& el = f.elems();
    const std::size_t n = el.size();
    Feasibility feasible(x);
    if (n > cap) {
        // greedy independent subset; upper bound |F|
        std::vector<CylinderSet> current{CylinderSet()};
        std::vector<GroupElem> chosen;
        for (const auto& s : el) {
            if (chosen.size() >= kIndependenceCap) break;
            if (auto next = detail::extend(current, a, s, feasible)) {
                current = std::move(*next);
                chosen.push_back(s);
            }
        }
        out.best_j = Window(chosen);
        out.phi = static_cast<std::int64_t>(chosen.size());
        out.phi_upper = static_cast<std::int64_t>(n);
        out.exact = out.phi == out.phi_upper;
        return out;
    }
    std::vector<GroupElem> chosen, best;
    std::size_t best_size = 0;
    bool have = false;
    auto rec = [&](auto&& self, std::size_t i, const std::vector<CylinderSet>& current) -> void {
        if (have && chosen.size() + (n - i) <= best_size) return;
        if (i == n) {
            best = chosen;
            best_size = chosen.size();
            have = true;
            return;
        }
        if (auto next = detail::extend(current, a, el[i], feasible)) {
            chosen.push_back(el[i]);
            self(self, i + 1, *next);
            chosen.pop_back();
        }
        self(self, i + 1, current);
    };
    rec(rec, 0, {CylinderSet()});
    out.best_j = Window(best);
    out.phi = out.phi_upper = static_cast<std::int64_t>(best_size);
    return out;
}

struct DensityInterval {
    Rational lower;
    Rational upper;
    std::string certificate;            // how the lower bound was obtained
    std::vector<IndependenceResult> windows;
};

/// A lattice m Z^d that is itself an independence set, when the system makes
/// that checkable. Its density 1/m^d bounds I(A) from below.
inline std::optional<std::pair<std::int64_t, std::string>> lattice_certificate(const SubshiftSpec& x,
                                                                               const std::vector<CylinderSet>& a,
                                                                               std::int64_t m_max = 16) {
    Feasibility feasible(x);
    for (const auto& c : a)
        if (!feasible(c)) return std::nullopt;
    if (x.as<FullShift>()) {
        // translates by a lattice wider than every window never overlap
        std::int64_t m = 1;
        for (const auto& c : a) {
            if (c.window.empty()) continue;
            auto lo = c.window.min_corner(), hi = c.window.max_corner();
            for (int i = 0; i < lo.dim(); ++i) m = std::max(m, hi[i] - lo[i] + 1);
        }
        return std::make_pair(m, "lattice " + std::to_string(m) + "Z^d: translated windows are disjoint");
    }
    if (x.as<SFT>()) {
        // origin cylinders only: every ordered pair of their symbols must be
        // joined by paths of every length t*m, which holds once A^m is positive
        // on those pairs (paths then chain through the set)
        std::vector<Symbol> syms;
        for (const auto& c : a) {
            if (c.window.size() != 1 || !c.window.elems()[0].is_zero()) return std::nullopt;
            syms.push_back(c.symbols[0]);
        }
        BoolMatrix base = x.trimmed();
        for (std::int64_t m = 1; m <= m_max; ++m) {
            BoolMatrix p = detail::bool_pow(base, m);
            bool ok = true;
            for (auto s : syms)
                for (auto t : syms)
                    if (!((p[static_cast<std::size_t>(s)] >> t) & 1)) ok = false;
            if (ok) return std::make_pair(m, "lattice " + std::to_string(m) + "Z: A^m positive on the cylinder symbols");
        }
    }
    return std::nullopt;
}

/// I(A): upper = min phi/|F| over the schedule; lower from a certificate.
inline DensityInterval independence_density(const SubshiftSpec& x, const std::vector<CylinderSet>& a,
                                            const std::vector<Window>& schedule, std::size_t cap = kPhiCap) {
    if (schedule.empty()) throw UsageError("independence density needs a nonempty window schedule");
    DensityInterval out;
    out.upper = 1;
    for (const auto& f : schedule) {
        auto r = phi(x, a, f, cap);
        out.upper = std::min(out.upper, make_rational(r.phi_upper, static_cast<std::int64_t>(f.size())));
        out.windows.push_back(std::move(r));
    }
    out.lower = 0;
    out.certificate = "none";
    if (auto cert = lattice_certificate(x, a)) {
        std::int64_t cells = 1;
        for (int i = 0; i < x.dim(); ++i) cells = checked_mul(cells, cert->first);
        out.lower = std::min(out.upper, make_rational(1, cells));
        out.certificate = cert->second;
    }
    return out;
}

struct IEWitness {
    std::string first_point;
    std::string second_point;
    std::vector<CylinderSet> cylinders;
    Window best_j;  // independence set found on the largest window
    DensityInterval density;
    Window window;  // largest scheduled window
};

struct IEPairCandidate {
    std::string label0, label1;
    ConfigDesc x0, x1;
};

struct IESearch {
    std::optional<IEWitness> witness;
    std::string scale;  // scale annotation for "none found"
    std::vector<std::pair<std::string, DensityInterval>> tried;
};

/// First candidate pair whose cylinder pair at the given depth has certified
/// independence density at least `threshold`.
inline IESearch find_ie_pair(const SubshiftSpec& x, const std::vector<IEPairCandidate>& candidates,
                             std::size_t resolution, const std::vector<Window>& schedule,
                             const Rational& threshold = Rational(1) / 20) {
    IESearch out;
    std::size_t fmax = 0;
    for (const auto& w : schedule) fmax = std::max(fmax, w.size());
    out.scale = "cylinder depth " + std::to_string(resolution) + ", |F| <= " + std::to_string(fmax) +
                ", threshold " + to_string(threshold);
    for (const auto& c : candidates) {
        CylinderSet u0 = enumeration_cylinder(c.x0, resolution), u1 = enumeration_cylinder(c.x1, resolution);
        if (CylinderSet::merge({u0, u1})) continue;  // cylinders not disjoint at this resolution
        std::vector<CylinderSet> a{u0, u1};
        auto d = independence_density(x, a, schedule);
        out.tried.emplace_back(c.label0 + " / " + c.label1, d);
        if (d.lower >= threshold && !out.witness) {
            IEWitness w;
            w.first_point = c.label0;
            w.second_point = c.label1;
            w.cylinders = a;
            w.best_j = d.windows.back().best_j;
            w.window = d.windows.back().f;
            w.density = d;
            out.witness = std::move(w);
        }
    }
    return out;
}

/// Windows [0, n) for n = 1..fmax.
inline std::vector<Window> interval_schedule(std::int64_t fmax) {
    std::vector<Window> s;
    for (std::int64_t n = 1; n <= fmax; ++n) s.push_back(Window::interval(0, n));
    return s;
}

}  // namespace meanlab
