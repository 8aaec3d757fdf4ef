#pragma once

// The acting group Z^d: elements, finite windows, Folner sequences and the
// invariance measurements on them. Additive notation throughout; the
// right translate F g of a window is written F + g.

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "meanlab/error.hpp"
#include "meanlab/rational.hpp"

namespace meanlab {

inline constexpr int kMaxDim = 4;
inline constexpr std::size_t kEnumerationCap = std::size_t{1} << 20;

class GroupElem {
public:
    GroupElem() = default;
    explicit GroupElem(int dim) : dim_(check_dim(dim)) {}
    GroupElem(std::initializer_list<std::int64_t> coords) : dim_(check_dim(static_cast<int>(coords.size()))) {
        std::copy(coords.begin(), coords.end(), c_.begin());
    }
    explicit GroupElem(std::span<const std::int64_t> coords) : dim_(check_dim(static_cast<int>(coords.size()))) {
        std::copy(coords.begin(), coords.end(), c_.begin());
    }

    static GroupElem zero(int dim) { return GroupElem(dim); }
    static GroupElem scalar(std::int64_t v) { return GroupElem{v}; }
    static GroupElem unit(int dim, int axis, std::int64_t v = 1) {
        GroupElem g(dim);
        g.c_.at(static_cast<std::size_t>(axis)) = v;
        return g;
    }

    int dim() const { return dim_; }
    std::int64_t operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    std::int64_t& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
    std::span<const std::int64_t> coords() const { return {c_.data(), static_cast<std::size_t>(dim_)}; }

    bool is_zero() const {
        for (int i = 0; i < dim_; ++i)
            if (c_[i] != 0) return false;
        return true;
    }

    std::int64_t max_norm() const {
        std::int64_t m = 0;
        for (int i = 0; i < dim_; ++i) m = std::max(m, c_[i] < 0 ? -c_[i] : c_[i]);
        return m;
    }

    GroupElem operator-() const {
        GroupElem r(dim_);
        for (int i = 0; i < dim_; ++i) r.c_[i] = -c_[i];
        return r;
    }
    friend GroupElem operator+(const GroupElem& a, const GroupElem& b) {
        same_dim(a, b);
        GroupElem r(a.dim_);
        for (int i = 0; i < a.dim_; ++i) r.c_[i] = checked_add(a.c_[i], b.c_[i]);
        return r;
    }
    friend GroupElem operator-(const GroupElem& a, const GroupElem& b) { return a + (-b); }
    GroupElem& operator+=(const GroupElem& o) { return *this = *this + o; }

    friend bool operator==(const GroupElem& a, const GroupElem& b) {
        if (a.dim_ != b.dim_) return false;
        for (int i = 0; i < a.dim_; ++i)
            if (a.c_[i] != b.c_[i]) return false;
        return true;
    }
    friend std::strong_ordering operator<=>(const GroupElem& a, const GroupElem& b) {
        if (auto c = a.dim_ <=> b.dim_; c != 0) return c;
        for (int i = 0; i < a.dim_; ++i)
            if (auto c = a.c_[i] <=> b.c_[i]; c != 0) return c;
        return std::strong_ordering::equal;
    }

    std::string str() const {
        if (dim_ == 1) return std::to_string(c_[0]);
        std::string s = "(";
        for (int i = 0; i < dim_; ++i) s += (i ? "," : "") + std::to_string(c_[i]);
        return s + ")";
    }

private:
    static int check_dim(int d) {
        if (d < 1 || d > kMaxDim) throw UsageError("group dimension must be in 1.." + std::to_string(kMaxDim));
        return d;
    }
    static void same_dim(const GroupElem& a, const GroupElem& b) {
        if (a.dim_ != b.dim_) throw UsageError("dimension mismatch between group elements");
    }

    int dim_ = 1;
    std::array<std::int64_t, kMaxDim> c_{};
};

/// Finite subset of Z^d, kept sorted and deduplicated.
class Window {
public:
    Window() = default;
    explicit Window(std::vector<GroupElem> elems) : elems_(std::move(elems)) {
        std::sort(elems_.begin(), elems_.end());
        elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
        for (const auto& e : elems_)
            if (e.dim() != elems_.front().dim()) throw UsageError("window mixes dimensions");
    }

    /// [lo, hi) in Z.
    static Window interval(std::int64_t lo, std::int64_t hi) {
        std::vector<GroupElem> v;
        for (std::int64_t i = lo; i < hi; ++i) v.push_back(GroupElem::scalar(i));
        return Window(std::move(v));
    }

    /// Product of [lo_i, hi_i) over the axes.
    static Window box(const GroupElem& lo, const GroupElem& hi) {
        std::vector<GroupElem> out;
        const int d = lo.dim();
        for (int i = 0; i < d; ++i)
            if (hi[i] <= lo[i]) return Window();
        GroupElem cur = lo;
        while (true) {
            out.push_back(cur);
            int axis = d - 1;
            while (axis >= 0) {
                if (++cur[axis] < hi[axis]) break;
                cur[axis] = lo[axis];
                --axis;
            }
            if (axis < 0) break;
        }
        Window w;
        w.elems_ = std::move(out);  // already lexicographically sorted
        return w;
    }

    /// [-r, r]^d.
    static Window centered_box(int dim, std::int64_t r) {
        GroupElem lo(dim), hi(dim);
        for (int i = 0; i < dim; ++i) {
            lo[i] = -r;
            hi[i] = r + 1;
        }
        return box(lo, hi);
    }

    std::size_t size() const { return elems_.size(); }
    bool empty() const { return elems_.empty(); }
    int dim() const { return elems_.empty() ? 1 : elems_.front().dim(); }
    const std::vector<GroupElem>& elems() const { return elems_; }
    auto begin() const { return elems_.begin(); }
    auto end() const { return elems_.end(); }

    bool contains(const GroupElem& g) const { return std::binary_search(elems_.begin(), elems_.end(), g); }

    Window translate(const GroupElem& g) const {
        Window w;
        w.elems_.reserve(elems_.size());
        for (const auto& e : elems_) w.elems_.push_back(e + g);
        return w;  // translation preserves lexicographic order
    }

    std::size_t intersection_size(const Window& o) const {
        std::size_t n = 0;
        auto a = elems_.begin(), b = o.elems_.begin();
        while (a != elems_.end() && b != o.elems_.end()) {
            if (*a < *b) ++a;
            else if (*b < *a) ++b;
            else { ++n; ++a; ++b; }
        }
        return n;
    }

    std::size_t symmetric_difference_size(const Window& o) const {
        return size() + o.size() - 2 * intersection_size(o);
    }

    bool is_subset_of(const Window& o) const { return intersection_size(o) == size(); }

    Window united(const Window& o) const {
        std::vector<GroupElem> v = elems_;
        v.insert(v.end(), o.elems_.begin(), o.elems_.end());
        return Window(std::move(v));
    }

    /// Interval hull in Z when the window is contiguous.
    bool is_interval() const {
        if (elems_.empty() || dim() != 1) return false;
        return elems_.back()[0] - elems_.front()[0] + 1 == static_cast<std::int64_t>(elems_.size());
    }

    GroupElem min_corner() const {
        GroupElem m = elems_.at(0);
        for (const auto& e : elems_)
            for (int i = 0; i < m.dim(); ++i) m[i] = std::min(m[i], e[i]);
        return m;
    }
    GroupElem max_corner() const {
        GroupElem m = elems_.at(0);
        for (const auto& e : elems_)
            for (int i = 0; i < m.dim(); ++i) m[i] = std::max(m[i], e[i]);
        return m;
    }

    friend bool operator==(const Window&, const Window&) = default;

private:
    std::vector<GroupElem> elems_;
};

// ---------------------------------------------------------------------------
// Folner sequences

/// Shift schedule s_n for shifted boxes.
struct NoShift {};
struct GeometricShift {
    std::int64_t base = 2;  // s_n = base^n along axis 0
};
struct LinearShift {
    std::int64_t step = 1;  // s_n = step * n along axis 0
};
struct ExplicitShifts {
    std::vector<GroupElem> shifts;  // s_1, s_2, ...
};
using ShiftRule = std::variant<NoShift, GeometricShift, LinearShift, ExplicitShifts>;

struct CenteredBoxes {
    int dim = 1;
    std::int64_t scale = 1;  // F_n = [-scale*n, scale*n]^d
};

struct ShiftedBoxes {
    int dim = 1;
    std::int64_t slope = 1;   // side length(n) = slope*n + offset
    std::int64_t offset = 0;
    ShiftRule shift = NoShift{};  // F_n = [0, len(n))^d + s_n
};

struct ExplicitList {
    std::vector<Window> windows;  // carries no Folner guarantee
};

using FolnerSpec = std::variant<CenteredBoxes, ShiftedBoxes, ExplicitList>;

inline int folner_dim(const FolnerSpec& spec) {
    return std::visit(
        [](const auto& s) -> int {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ExplicitList>)
                return s.windows.empty() ? 1 : s.windows.front().dim();
            else
                return s.dim;
        },
        spec);
}

/// False for explicit lists, which are flagged "unchecked".
inline bool folner_checked(const FolnerSpec& spec) { return !std::holds_alternative<ExplicitList>(spec); }

inline GroupElem shift_at(const ShiftRule& rule, int dim, std::int64_t n) {
    return std::visit(
        [&](const auto& r) -> GroupElem {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, NoShift>) {
                return GroupElem::zero(dim);
            } else if constexpr (std::is_same_v<T, GeometricShift>) {
                std::int64_t v = 1;
                for (std::int64_t i = 0; i < n; ++i) v = checked_mul(v, r.base);
                return GroupElem::unit(dim, 0, v);
            } else if constexpr (std::is_same_v<T, LinearShift>) {
                return GroupElem::unit(dim, 0, checked_mul(r.step, n));
            } else {
                if (n < 1 || static_cast<std::size_t>(n) > r.shifts.size())
                    throw UsageError("explicit shift list has no entry " + std::to_string(n));
                return r.shifts[static_cast<std::size_t>(n - 1)];
            }
        },
        rule);
}

/// F_n for n >= 1.
inline Window folner_window(const FolnerSpec& spec, std::int64_t n) {
    if (n < 1) throw UsageError("Folner index must be >= 1");
    return std::visit(
        [&](const auto& s) -> Window {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, CenteredBoxes>) {
                return Window::centered_box(s.dim, checked_mul(s.scale, n));
            } else if constexpr (std::is_same_v<T, ShiftedBoxes>) {
                std::int64_t len = checked_add(checked_mul(s.slope, n), s.offset);
                if (len < 1) throw UsageError("shifted box side length must be positive");
                GroupElem lo(s.dim), hi(s.dim);
                for (int i = 0; i < s.dim; ++i) hi[i] = len;
                return Window::box(lo, hi).translate(shift_at(s.shift, s.dim, n));
            } else {
                if (static_cast<std::size_t>(n) > s.windows.size())
                    throw UsageError("index " + std::to_string(n) + " beyond explicit Folner list of length " +
                                     std::to_string(s.windows.size()));
                return s.windows[static_cast<std::size_t>(n - 1)];
            }
        },
        spec);
}

// ---------------------------------------------------------------------------
// Canonical enumeration g_1, g_2, ... of Z^d: max-norm shells, ties broken
// lexicographically on the zig-zag code of each coordinate (0, 1, -1, 2, -2, ...).

inline std::uint64_t zigzag(std::int64_t c) {
    return c > 0 ? 2 * static_cast<std::uint64_t>(c) - 1 : 2 * static_cast<std::uint64_t>(-c);
}

inline bool enumeration_less(const GroupElem& a, const GroupElem& b) {
    auto na = a.max_norm(), nb = b.max_norm();
    if (na != nb) return na < nb;
    for (int i = 0; i < a.dim(); ++i) {
        auto za = zigzag(a[i]), zb = zigzag(b[i]);
        if (za != zb) return za < zb;
    }
    return false;
}

inline std::vector<GroupElem> enumerate_group(int dim, std::size_t count) {
    if (count == 0) throw UsageError("enumerate_group: count must be >= 1");
    if (count > kEnumerationCap) throw UsageError("enumerate_group: count exceeds configured cap");
    std::vector<GroupElem> out;
    out.reserve(count);
    for (std::int64_t r = 0; out.size() < count; ++r) {
        std::vector<GroupElem> shell;
        for (const auto& g : Window::centered_box(dim, r))
            if (g.max_norm() == r) shell.push_back(g);
        std::sort(shell.begin(), shell.end(), enumeration_less);
        for (const auto& g : shell) {
            if (out.size() == count) break;
            out.push_back(g);
        }
    }
    return out;
}

/// |(A + g) symmetric-difference A| / |A|.
inline Rational invariance_defect(const Window& a, const GroupElem& g) {
    if (a.empty()) throw UsageError("invariance_defect: window must be nonempty");
    auto sd = a.translate(g).symmetric_difference_size(a);
    return make_rational(static_cast<std::int64_t>(sd), static_cast<std::int64_t>(a.size()));
}

/// |{s in A : F + s subset of A}| >= (1 - eps)|A|.
inline bool is_invariant(const Window& a, const Window& f, const Rational& eps) {
    if (a.empty() || f.empty()) throw UsageError("is_invariant: windows must be nonempty");
    if (eps < 0 || eps > 1) throw UsageError("is_invariant: eps must lie in [0, 1]");
    std::int64_t good = 0;
    for (const auto& s : a) {
        bool inside = true;
        for (const auto& t : f)
            if (!a.contains(t + s)) {
                inside = false;
                break;
            }
        if (inside) ++good;
    }
    return Rational(good) >= (1 - eps) * Rational(static_cast<std::int64_t>(a.size()));
}

}  // namespace meanlab
