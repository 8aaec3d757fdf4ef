#pragma once

// Finitely described subsets of Z^d. Every description answers membership
// exactly; infinite sets are never materialized.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "meanlab/error.hpp"
#include "meanlab/group.hpp"
#include "meanlab/rational.hpp"

namespace meanlab {

inline constexpr std::int64_t kPeriodCap = std::int64_t{1} << 22;

/// A set invariant under translation by m_i e_i on every axis. Stored as a
/// membership mask over the period box [0, m_1) x ... x [0, m_d).
class PeriodicSet {
public:
    PeriodicSet() : PeriodicSet(GroupElem{1}, {}) {}
    PeriodicSet(GroupElem modulus, const std::vector<GroupElem>& residues) : modulus_(modulus) {
        std::int64_t cells = 1;
        for (int i = 0; i < modulus_.dim(); ++i) {
            if (modulus_[i] < 1) throw UsageError("periodic modulus must be positive");
            cells = checked_mul(cells, modulus_[i]);
        }
        if (cells > kPeriodCap) throw CapExceeded("period box exceeds cap");
        mask_.assign(static_cast<std::size_t>(cells), false);
        for (const auto& r : residues) {
            if (r.dim() != modulus_.dim()) throw UsageError("residue dimension mismatch");
            mask_[index_of(r)] = true;
        }
    }

    static PeriodicSet everything(int dim) {
        GroupElem m(dim);
        for (int i = 0; i < dim; ++i) m[i] = 1;
        return PeriodicSet(m, {GroupElem::zero(dim)});
    }
    static PeriodicSet nothing(int dim) {
        GroupElem m(dim);
        for (int i = 0; i < dim; ++i) m[i] = 1;
        return PeriodicSet(m, {});
    }

    int dim() const { return modulus_.dim(); }
    const GroupElem& modulus() const { return modulus_; }
    std::int64_t cells() const { return static_cast<std::int64_t>(mask_.size()); }

    bool contains(const GroupElem& g) const { return mask_[index_of(g)]; }

    std::vector<GroupElem> residues() const {
        std::vector<GroupElem> out;
        for (std::size_t i = 0; i < mask_.size(); ++i)
            if (mask_[i]) out.push_back(elem_of(i));
        return out;
    }
    std::int64_t residue_count() const { return std::count(mask_.begin(), mask_.end(), true); }

    /// |R| / |period box|: the exact Banach (and asymptotic) density.
    Rational density() const { return make_rational(residue_count(), cells()); }

    /// Same set over a multiple of the modulus.
    PeriodicSet refined(const GroupElem& m) const {
        std::vector<GroupElem> rs;
        GroupElem lo(dim());
        for (const auto& g : Window::box(lo, m))
            if (contains(g)) rs.push_back(g);
        return PeriodicSet(m, rs);
    }

    static GroupElem common_modulus(const PeriodicSet& a, const PeriodicSet& b) {
        if (a.dim() != b.dim()) throw UsageError("dimension mismatch between periodic sets");
        GroupElem m(a.dim());
        for (int i = 0; i < a.dim(); ++i) m[i] = lcm64(a.modulus_[i], b.modulus_[i]);
        return m;
    }

    template <class Op>
    static PeriodicSet combine(const PeriodicSet& a, const PeriodicSet& b, Op op) {
        GroupElem m = common_modulus(a, b);
        std::vector<GroupElem> rs;
        GroupElem lo(a.dim());
        for (const auto& g : Window::box(lo, m))
            if (op(a.contains(g), b.contains(g))) rs.push_back(g);
        return PeriodicSet(m, rs).reduced();
    }

    PeriodicSet complemented() const {
        PeriodicSet c = *this;
        c.mask_.flip();
        return c;
    }

    /// {e + s : e in this}.
    PeriodicSet shifted(const GroupElem& s) const {
        std::vector<GroupElem> rs;
        for (const auto& r : residues()) rs.push_back(r + s);
        return PeriodicSet(modulus_, rs);
    }

    bool is_subset_of(const PeriodicSet& o) const {
        GroupElem m = common_modulus(*this, o);
        GroupElem lo(dim());
        for (const auto& g : Window::box(lo, m))
            if (contains(g) && !o.contains(g)) return false;
        return true;
    }

    /// Smallest modulus (axis by axis) describing the same set.
    PeriodicSet reduced() const {
        PeriodicSet cur = *this;
        for (int axis = 0; axis < dim(); ++axis) {
            const std::int64_t m = cur.modulus_[axis];
            for (std::int64_t p = 1; p < m; ++p) {
                if (m % p != 0) continue;
                bool ok = true;
                GroupElem lo(dim());
                for (const auto& g : Window::box(lo, cur.modulus_)) {
                    GroupElem h = g;
                    h[axis] += p;
                    if (cur.contains(g) != cur.contains(h)) {
                        ok = false;
                        break;
                    }
                }
                if (ok) {
                    GroupElem nm = cur.modulus_;
                    nm[axis] = p;
                    std::vector<GroupElem> rs;
                    for (const auto& g : Window::box(lo, nm))
                        if (cur.contains(g)) rs.push_back(g);
                    cur = PeriodicSet(nm, rs);
                    break;
                }
            }
        }
        return cur;
    }

    friend bool operator==(const PeriodicSet& a, const PeriodicSet& b) {
        return a.modulus_ == b.modulus_ && a.mask_ == b.mask_;
    }

private:
    std::size_t index_of(const GroupElem& g) const {
        std::size_t idx = 0;
        for (int i = 0; i < modulus_.dim(); ++i)
            idx = idx * static_cast<std::size_t>(modulus_[i]) + static_cast<std::size_t>(mod_floor(g[i], modulus_[i]));
        return idx;
    }
    GroupElem elem_of(std::size_t idx) const {
        GroupElem g(modulus_.dim());
        for (int i = modulus_.dim() - 1; i >= 0; --i) {
            g[i] = static_cast<std::int64_t>(idx % static_cast<std::size_t>(modulus_[i]));
            idx /= static_cast<std::size_t>(modulus_[i]);
        }
        return g;
    }

    GroupElem modulus_;
    std::vector<bool> mask_;
};

/// coef * base^j + slope * j + constant, evaluated with overflow checks.
struct PowerAffine {
    std::int64_t coef = 0;
    std::int64_t base = 0;
    std::int64_t slope = 0;
    std::int64_t constant = 0;

    std::int64_t at(std::int64_t j) const {
        std::int64_t p = 0;
        if (coef != 0) {
            if (base == 0) p = j == 0 ? 1 : 0;
            else if (base == 1) p = 1;
            else {
                p = 1;
                for (std::int64_t i = 0; i < j; ++i) p = checked_mul(p, base);
            }
            p = checked_mul(coef, p);
        }
        return checked_add(checked_add(p, checked_mul(slope, j)), constant);
    }
    bool nondecreasing() const { return coef >= 0 && slope >= 0 && (coef == 0 || base >= 1); }
    bool strictly_increasing() const { return nondecreasing() && (slope > 0 || (coef > 0 && base >= 2)); }
    friend bool operator==(const PowerAffine&, const PowerAffine&) = default;
};

/// Union over j = first..last (last = nullopt for infinity) of [start(j), start(j) + len(j)) in Z.
struct BlockRule {
    std::int64_t first = 1;
    std::optional<std::int64_t> last;
    PowerAffine start;
    PowerAffine len;
    friend bool operator==(const BlockRule&, const BlockRule&) = default;
};

class SubsetDesc;

namespace subset_node {
struct Node;
struct Periodic {
    PeriodicSet set;
};
struct Explicit {
    Window elems;
    GroupElem universe_lo;  // inclusive
    GroupElem universe_hi;  // inclusive
};
struct Blocks {
    BlockRule rule;
};
struct Shift {
    std::shared_ptr<const Node> inner;
    GroupElem by;
};
struct Complement {
    std::shared_ptr<const Node> inner;
};
struct Union {
    std::shared_ptr<const Node> a, b;
};
struct Intersection {
    std::shared_ptr<const Node> a, b;
};
struct Node {
    std::variant<Periodic, Explicit, Blocks, Shift, Complement, Union, Intersection> v;
    int dim = 1;
};
}  // namespace subset_node

inline constexpr std::int64_t kDefaultUniverse = std::int64_t{1} << 31;

/// Immutable handle to a subset description.
class SubsetDesc {
public:
    using Node = subset_node::Node;

    static SubsetDesc periodic(const PeriodicSet& s) { return make({subset_node::Periodic{s.reduced()}, s.dim()}); }

    /// aZ + b in Z.
    static SubsetDesc progression(std::int64_t a, std::int64_t b) {
        if (a < 1) throw UsageError("progression modulus must be positive");
        return periodic(PeriodicSet(GroupElem{a}, {GroupElem{mod_floor(b, a)}}));
    }

    static SubsetDesc whole(int dim = 1) { return periodic(PeriodicSet::everything(dim)); }

    static SubsetDesc explicit_set(const Window& w, GroupElem lo, GroupElem hi) {
        for (const auto& g : w)
            for (int i = 0; i < g.dim(); ++i)
                if (g[i] < lo[i] || g[i] > hi[i]) throw UniverseExceeded("explicit element outside its declared universe");
        return make({subset_node::Explicit{w, lo, hi}, lo.dim()});
    }
    static SubsetDesc explicit_set(const Window& w, int dim = 1) {
        GroupElem lo(dim), hi(dim);
        for (int i = 0; i < dim; ++i) {
            lo[i] = -kDefaultUniverse;
            hi[i] = kDefaultUniverse;
        }
        return explicit_set(w, lo, hi);
    }

    static SubsetDesc blocks(const BlockRule& rule) {
        if (rule.first < 0) throw UsageError("block index must start at j >= 0");
        if (rule.last && *rule.last < rule.first) throw UsageError("empty block index range");
        if (!rule.start.strictly_increasing())
            throw UsageError("block starts must be strictly increasing in j");
        if (!rule.len.nondecreasing() || rule.len.at(rule.first) < 0)
            throw UsageError("block lengths must be nonnegative and nondecreasing in j");
        if (rule.last) {
            // the last block bounds every other one; raises OverflowError when it does not fit
            checked_add(rule.start.at(*rule.last), rule.len.at(*rule.last));
        }
        return make({subset_node::Blocks{rule}, 1});
    }

    SubsetDesc shifted(const GroupElem& s) const {
        if (auto* p = std::get_if<subset_node::Periodic>(&node_->v)) return periodic(p->set.shifted(s));
        if (auto* e = std::get_if<subset_node::Explicit>(&node_->v))
            return explicit_set(e->elems.translate(s), e->universe_lo + s, e->universe_hi + s);
        return make({subset_node::Shift{node_, s}, dim()});
    }

    SubsetDesc complemented() const {
        if (auto* p = std::get_if<subset_node::Periodic>(&node_->v)) return periodic(p->set.complemented());
        if (auto* c = std::get_if<subset_node::Complement>(&node_->v)) return SubsetDesc(c->inner);
        return make({subset_node::Complement{node_}, dim()});
    }

    static SubsetDesc united(const SubsetDesc& a, const SubsetDesc& b) {
        check_dims(a, b);
        auto* pa = std::get_if<subset_node::Periodic>(&a.node_->v);
        auto* pb = std::get_if<subset_node::Periodic>(&b.node_->v);
        if (pa && pb) return periodic(PeriodicSet::combine(pa->set, pb->set, [](bool x, bool y) { return x || y; }));
        return make({subset_node::Union{a.node_, b.node_}, a.dim()});
    }

    static SubsetDesc intersected(const SubsetDesc& a, const SubsetDesc& b) {
        check_dims(a, b);
        auto* pa = std::get_if<subset_node::Periodic>(&a.node_->v);
        auto* pb = std::get_if<subset_node::Periodic>(&b.node_->v);
        if (pa && pb) return periodic(PeriodicSet::combine(pa->set, pb->set, [](bool x, bool y) { return x && y; }));
        return make({subset_node::Intersection{a.node_, b.node_}, a.dim()});
    }

    int dim() const { return node_->dim; }
    const Node& node() const { return *node_; }
    const std::shared_ptr<const Node>& node_ptr() const { return node_; }

    bool contains(const GroupElem& g) const { return contains(*node_, g); }

    /// The periodic set this one differs from on a finite set, if the
    /// description makes that evident. Densities then coincide exactly.
    std::optional<PeriodicSet> periodic_class() const { return periodic_class(*node_); }

    const PeriodicSet* as_periodic() const {
        auto* p = std::get_if<subset_node::Periodic>(&node_->v);
        return p ? &p->set : nullptr;
    }

    friend bool operator==(const SubsetDesc& a, const SubsetDesc& b) { return equal(*a.node_, *b.node_); }

    explicit SubsetDesc(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

private:
    static SubsetDesc make(Node n) { return SubsetDesc(std::make_shared<const Node>(std::move(n))); }

    static void check_dims(const SubsetDesc& a, const SubsetDesc& b) {
        if (a.dim() != b.dim()) throw UsageError("dimension mismatch between subsets");
    }

    static bool block_contains(const BlockRule& r, std::int64_t g) {
        // starts increase strictly and ends never decrease, so only the last
        // block starting at or before g can contain it
        auto start_le = [&](std::int64_t j) {
            try {
                return r.start.at(j) <= g;
            } catch (const OverflowError&) {
                return false;  // start beyond the integer range, so beyond g
            }
        };
        if (!start_le(r.first)) return false;
        std::int64_t lo = r.first;  // start(lo) <= g
        std::int64_t hi;            // start(hi) > g, or hi past the last block
        if (r.last) {
            hi = *r.last + 1;
        } else {
            std::int64_t step = 1;
            hi = r.first + step;
            while (start_le(hi)) {
                lo = hi;
                step *= 2;
                hi = r.first + step;
            }
        }
        while (hi - lo > 1) {
            std::int64_t mid = lo + (hi - lo) / 2;
            if (start_le(mid)) lo = mid;
            else hi = mid;
        }
        std::int64_t s = r.start.at(lo);
        std::int64_t len;
        try {
            len = r.len.at(lo);
        } catch (const OverflowError&) {
            return true;
        }
        return g - s < len;
    }

    static bool contains(const Node& n, const GroupElem& g) {
        if (g.dim() != n.dim) throw UsageError("membership query with wrong dimension");
        return std::visit(
            [&](const auto& v) -> bool {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, subset_node::Periodic>) {
                    return v.set.contains(g);
                } else if constexpr (std::is_same_v<T, subset_node::Explicit>) {
                    for (int i = 0; i < g.dim(); ++i)
                        if (g[i] < v.universe_lo[i] || g[i] > v.universe_hi[i])
                            throw UniverseExceeded("explicit set queried at " + g.str() + " outside its declared universe");
                    return v.elems.contains(g);
                } else if constexpr (std::is_same_v<T, subset_node::Blocks>) {
                    return block_contains(v.rule, g[0]);
                } else if constexpr (std::is_same_v<T, subset_node::Shift>) {
                    return contains(*v.inner, g - v.by);
                } else if constexpr (std::is_same_v<T, subset_node::Complement>) {
                    return !contains(*v.inner, g);
                } else if constexpr (std::is_same_v<T, subset_node::Union>) {
                    return contains(*v.a, g) || contains(*v.b, g);
                } else {
                    return contains(*v.a, g) && contains(*v.b, g);
                }
            },
            n.v);
    }

    static std::optional<PeriodicSet> periodic_class(const Node& n) {
        return std::visit(
            [&](const auto& v) -> std::optional<PeriodicSet> {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, subset_node::Periodic>) {
                    return v.set;
                } else if constexpr (std::is_same_v<T, subset_node::Explicit>) {
                    return PeriodicSet::nothing(n.dim);
                } else if constexpr (std::is_same_v<T, subset_node::Blocks>) {
                    if (v.rule.last) return PeriodicSet::nothing(1);
                    return std::nullopt;
                } else if constexpr (std::is_same_v<T, subset_node::Shift>) {
                    auto c = periodic_class(*v.inner);
                    if (!c) return std::nullopt;
                    return c->shifted(v.by);
                } else if constexpr (std::is_same_v<T, subset_node::Complement>) {
                    auto c = periodic_class(*v.inner);
                    if (!c) return std::nullopt;
                    return c->complemented();
                } else {
                    auto a = periodic_class(*v.a);
                    if (!a) return std::nullopt;
                    auto b = periodic_class(*v.b);
                    if (!b) return std::nullopt;
                    if constexpr (std::is_same_v<T, subset_node::Union>)
                        return PeriodicSet::combine(*a, *b, [](bool x, bool y) { return x || y; });
                    else
                        return PeriodicSet::combine(*a, *b, [](bool x, bool y) { return x && y; });
                }
            },
            n.v);
    }

    static bool equal(const Node& x, const Node& y) {
        if (x.dim != y.dim || x.v.index() != y.v.index()) return false;
        return std::visit(
            [&](const auto& a) -> bool {
                using T = std::decay_t<decltype(a)>;
                const auto& b = std::get<T>(y.v);
                if constexpr (std::is_same_v<T, subset_node::Periodic>) {
                    return a.set == b.set;
                } else if constexpr (std::is_same_v<T, subset_node::Explicit>) {
                    return a.elems == b.elems && a.universe_lo == b.universe_lo && a.universe_hi == b.universe_hi;
                } else if constexpr (std::is_same_v<T, subset_node::Blocks>) {
                    return a.rule == b.rule;
                } else if constexpr (std::is_same_v<T, subset_node::Shift>) {
                    return a.by == b.by && equal(*a.inner, *b.inner);
                } else if constexpr (std::is_same_v<T, subset_node::Complement>) {
                    return equal(*a.inner, *b.inner);
                } else {
                    return equal(*a.a, *b.a) && equal(*a.b, *b.b);
                }
            },
            x.v);
    }

    std::shared_ptr<const Node> node_;
};

}  // namespace meanlab
