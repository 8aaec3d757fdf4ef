#pragma once

// Subshift systems: admissibility of cylinders, pattern counts, transitivity
// and return times.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "meanlab/config.hpp"
#include "meanlab/error.hpp"
#include "meanlab/group.hpp"
#include "meanlab/rational.hpp"
#include "meanlab/rotation.hpp"

namespace meanlab {

inline constexpr std::int64_t kDefaultOrbitHorizon = 4096;

struct FullShift {
    int k = 2;
    int dim = 1;
};
/// Vertex shift in Z: x(n) -> x(n+1) must be an edge of `adj`.
struct SFT {
    std::vector<std::vector<int>> adj;
};
struct Sturmian {
    std::shared_ptr<const Rotation> rotation;
};
struct PeriodicOrbit {
    ConfigDesc point;
};
struct OrbitClosure {
    ConfigDesc point;
    int k = 2;
    std::int64_t horizon = kDefaultOrbitHorizon;
};

using BoolMatrix = std::vector<std::uint64_t>;  // row bitmasks

namespace detail {

inline BoolMatrix bool_mul(const BoolMatrix& a, const BoolMatrix& b) {
    BoolMatrix c(a.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            if ((a[i] >> j) & 1) c[i] |= b[j];
    return c;
}

inline BoolMatrix bool_pow(const BoolMatrix& a, std::int64_t e) {
    BoolMatrix r(a.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::uint64_t{1} << i;
    BoolMatrix b = a;
    while (e > 0) {
        if (e & 1) r = bool_mul(r, b);
        b = bool_mul(b, b);
        e >>= 1;
    }
    return r;
}

}  // namespace detail

class SubshiftSpec {
public:
    using Variant = std::variant<FullShift, SFT, Sturmian, PeriodicOrbit, OrbitClosure>;

    SubshiftSpec(Variant v, std::string name) : v_(std::move(v)), name_(std::move(name)) { validate(); }

    static SubshiftSpec full_shift(int k, int dim = 1) {
        return SubshiftSpec(FullShift{k, dim}, "fullshift:" + std::to_string(k) + (dim > 1 ? ":d" + std::to_string(dim) : ""));
    }
    static SubshiftSpec sft(std::vector<std::vector<int>> adj, std::string name = "") {
        if (name.empty()) {
            name = "sft:";
            for (std::size_t i = 0; i < adj.size(); ++i) {
                if (i) name += ",";
                for (auto e : adj[i]) name += std::to_string(e);
            }
        }
        return SubshiftSpec(SFT{std::move(adj)}, name);
    }
    static SubshiftSpec golden_mean() { return sft({{1, 1}, {1, 0}}, "sft:golden"); }
    static SubshiftSpec sturmian(std::shared_ptr<const Rotation> r) {
        std::string n = "sturmian:" + r->name();
        return SubshiftSpec(Sturmian{std::move(r)}, n);
    }
    static SubshiftSpec periodic_orbit(const ConfigDesc& x, std::string name = "periodic") {
        return SubshiftSpec(PeriodicOrbit{x}, std::move(name));
    }
    static SubshiftSpec orbit_closure(const ConfigDesc& x, int k, std::int64_t horizon, std::string name = "orbit") {
        return SubshiftSpec(OrbitClosure{x, k, horizon}, std::move(name));
    }

    const Variant& variant() const { return v_; }
    const std::string& name() const { return name_; }
    template <class T>
    const T* as() const {
        return std::get_if<T>(&v_);
    }

    int dim() const {
        return std::visit(
            [](const auto& s) -> int {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, FullShift>) return s.dim;
                else if constexpr (std::is_same_v<T, PeriodicOrbit> || std::is_same_v<T, OrbitClosure>)
                    return s.point.dim();
                else return 1;
            },
            v_);
    }

    int alphabet_size() const {
        return std::visit(
            [&](const auto& s) -> int {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, FullShift>) return s.k;
                else if constexpr (std::is_same_v<T, SFT>) return static_cast<int>(s.adj.size());
                else if constexpr (std::is_same_v<T, Sturmian>) return 2;
                else if constexpr (std::is_same_v<T, PeriodicOrbit>) {
                    const auto* p = s.point.template as<config_node::Periodic>();
                    return std::max(2, *std::max_element(p->block.begin(), p->block.end()) + 1);
                } else return s.k;
            },
            v_);
    }

    /// Admissibility answers depend on a finite search horizon.
    bool horizon_limited() const { return std::holds_alternative<OrbitClosure>(v_); }

    // ---- SFT structure ----------------------------------------------------

    /// States lying on some bi-infinite path.
    std::vector<bool> essential_states() const {
        const auto& a = as<SFT>()->adj;
        const std::size_t n = a.size();
        std::vector<bool> alive(n, true);
        for (bool changed = true; changed;) {
            changed = false;
            for (std::size_t i = 0; i < n; ++i) {
                if (!alive[i]) continue;
                bool out = false, in = false;
                for (std::size_t j = 0; j < n; ++j) {
                    if (alive[j] && a[i][j]) out = true;
                    if (alive[j] && a[j][i]) in = true;
                }
                if (!out || !in) {
                    alive[i] = false;
                    changed = true;
                }
            }
        }
        return alive;
    }

    /// Adjacency restricted to essential states, as row bitmasks over all states.
    BoolMatrix trimmed() const {
        const auto& a = as<SFT>()->adj;
        auto alive = essential_states();
        BoolMatrix m(a.size(), 0);
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < a.size(); ++j)
                if (alive[i] && alive[j] && a[i][j]) m[i] |= std::uint64_t{1} << j;
        return m;
    }

    bool strongly_connected() const {
        auto alive = essential_states();
        const std::size_t n = alive.size();
        if (std::find(alive.begin(), alive.end(), true) == alive.end()) return false;
        BoolMatrix m = trimmed();
        // reachability closure
        BoolMatrix r = m;
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i)
                if ((r[i] >> k) & 1) r[i] |= r[k];
        for (std::size_t i = 0; i < n; ++i) {
            if (!alive[i]) continue;
            for (std::size_t j = 0; j < n; ++j)
                if (alive[j] && !((r[i] >> j) & 1)) return false;
        }
        // states that were trimmed do not belong to the subshift
        return true;
    }

    /// Simple cycles of the trimmed graph up to a length, each listed from its
    /// smallest state, in lexicographic order.
    std::vector<std::vector<Symbol>> cycles(std::size_t max_len) const {
        BoolMatrix m = trimmed();
        const int n = static_cast<int>(m.size());
        std::vector<std::vector<Symbol>> out;
        std::vector<Symbol> path;
        std::vector<bool> used(static_cast<std::size_t>(n), false);
        auto dfs = [&](auto&& self, int start, int cur) -> void {
            for (int j = 0; j < n; ++j) {
                if (!((m[static_cast<std::size_t>(cur)] >> j) & 1)) continue;
                if (j == start) out.push_back(path);
                else if (j > start && !used[static_cast<std::size_t>(j)] && path.size() < max_len) {
                    used[static_cast<std::size_t>(j)] = true;
                    path.push_back(j);
                    self(self, start, j);
                    path.pop_back();
                    used[static_cast<std::size_t>(j)] = false;
                }
            }
        };
        for (int s = 0; s < n; ++s) {
            path = {s};
            used.assign(static_cast<std::size_t>(n), false);
            used[static_cast<std::size_t>(s)] = true;
            dfs(dfs, s, s);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// A shortest path a = s_0 -> ... -> s_t = b with t >= 1 edges, endpoints excluded.
    std::optional<std::vector<Symbol>> connector(Symbol a, Symbol b) const {
        BoolMatrix m = trimmed();
        const int n = static_cast<int>(m.size());
        std::vector<int> prev(static_cast<std::size_t>(n), -2);
        std::vector<int> queue;
        for (int j = 0; j < n; ++j)
            if ((m[static_cast<std::size_t>(a)] >> j) & 1) {
                prev[static_cast<std::size_t>(j)] = -1;
                queue.push_back(j);
            }
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            int u = queue[qi];
            if (u == b) break;
            for (int j = 0; j < n; ++j)
                if (((m[static_cast<std::size_t>(u)] >> j) & 1) && prev[static_cast<std::size_t>(j)] == -2) {
                    prev[static_cast<std::size_t>(j)] = u;
                    queue.push_back(j);
                }
        }
        if (prev[static_cast<std::size_t>(b)] == -2) return std::nullopt;
        std::vector<Symbol> mid;
        for (int u = prev[static_cast<std::size_t>(b)]; u != -1; u = prev[static_cast<std::size_t>(u)]) mid.push_back(u);
        std::reverse(mid.begin(), mid.end());
        return mid;
    }

    // ---- Sturmian structure -----------------------------------------------

    /// Words on `positions` realized by Sturmian codings: one per cell of the
    /// circle cut at the points {-m alpha}, m in positions and positions + 1.
    std::vector<std::vector<Symbol>> sturmian_words(const std::vector<std::int64_t>& positions) const {
        const Rotation& r = *as<Sturmian>()->rotation;
        std::vector<std::int64_t> ms;
        for (auto n : positions) {
            ms.push_back(-n);
            ms.push_back(-(n + 1));
        }
        std::sort(ms.begin(), ms.end());
        ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
        std::sort(ms.begin(), ms.end(), [&](std::int64_t a, std::int64_t b) { return r.frac_less(a, b); });
        std::map<std::int64_t, std::size_t> rank;
        for (std::size_t i = 0; i < ms.size(); ++i) rank[ms[i]] = i;
        std::vector<std::vector<Symbol>> words;
        for (std::size_t cell = 0; cell < ms.size(); ++cell) {
            std::vector<Symbol> w;
            for (auto n : positions) {
                std::size_t a = rank[-(n + 1)], b = rank[-n];
                bool in = a < b ? (a <= cell && cell < b) : (cell >= a || cell < b);
                w.push_back(in ? 1 : 0);
            }
            words.push_back(std::move(w));
        }
        std::sort(words.begin(), words.end());
        words.erase(std::unique(words.begin(), words.end()), words.end());
        return words;
    }

    // ---- generic operations -----------------------------------------------

    bool cylinder_nonempty(const CylinderSet& c) const {
        if (!c.window.empty() && c.window.dim() != dim()) throw UsageError("cylinder dimension differs from the system");
        const int k = alphabet_size();
        for (auto s : c.symbols)
            if (s < 0 || s >= k) return false;
        if (c.window.empty()) return true;
        return std::visit(
            [&](const auto& s) -> bool {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, FullShift>) {
                    return true;
                } else if constexpr (std::is_same_v<T, SFT>) {
                    BoolMatrix m = trimmed();
                    auto alive = essential_states();
                    std::map<std::int64_t, BoolMatrix> powers;
                    for (std::size_t i = 0; i < c.symbols.size(); ++i) {
                        if (!alive[static_cast<std::size_t>(c.symbols[i])]) return false;
                        if (i == 0) continue;
                        std::int64_t gap = c.window.elems()[i][0] - c.window.elems()[i - 1][0];
                        auto it = powers.find(gap);
                        if (it == powers.end()) it = powers.emplace(gap, detail::bool_pow(m, gap)).first;
                        if (!((it->second[static_cast<std::size_t>(c.symbols[i - 1])] >> c.symbols[i]) & 1)) return false;
                    }
                    return true;
                } else if constexpr (std::is_same_v<T, Sturmian>) {
                    std::vector<std::int64_t> pos;
                    for (const auto& g : c.window) pos.push_back(g[0]);
                    auto words = sturmian_words(pos);
                    return std::binary_search(words.begin(), words.end(), c.symbols);
                } else if constexpr (std::is_same_v<T, PeriodicOrbit>) {
                    const auto* p = s.point.template as<config_node::Periodic>();
                    for (const auto& t : Window::box(GroupElem::zero(dim()), p->period))
                        if (c.translated(-t).contains(s.point)) return true;
                    return false;
                } else {
                    for (const auto& t : Window::centered_box(dim(), s.horizon))
                        if (c.translated(-t).contains(s.point)) return true;
                    return false;
                }
            },
            v_);
    }

    /// Number of patterns on F occurring in the system.
    BigInt pattern_count(const Window& f) const {
        if (f.empty()) throw UsageError("pattern_count needs a nonempty window");
        if (f.dim() != dim()) throw UsageError("window dimension differs from the system");
        return std::visit(
            [&](const auto& s) -> BigInt {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, FullShift>) {
                    return boost::multiprecision::pow(BigInt(s.k), static_cast<unsigned>(f.size()));
                } else if constexpr (std::is_same_v<T, SFT>) {
                    if (!f.is_interval()) throw UnsupportedShape("SFT pattern counts need an interval window");
                    BoolMatrix m = trimmed();
                    auto alive = essential_states();
                    const std::size_t n = m.size();
                    std::vector<BigInt> v(n);
                    for (std::size_t i = 0; i < n; ++i) v[i] = alive[i] ? 1 : 0;
                    for (std::size_t step = 1; step < f.size(); ++step) {
                        std::vector<BigInt> w(n);
                        for (std::size_t i = 0; i < n; ++i)
                            for (std::size_t j = 0; j < n; ++j)
                                if ((m[i] >> j) & 1) w[j] += v[i];
                        v = std::move(w);
                    }
                    BigInt total = 0;
                    for (const auto& x : v) total += x;
                    return total;
                } else if constexpr (std::is_same_v<T, Sturmian>) {
                    if (!f.is_interval()) throw UnsupportedShape("Sturmian pattern counts need an interval window");
                    std::vector<std::int64_t> pos;
                    for (const auto& g : f) pos.push_back(g[0]);
                    return BigInt(sturmian_words(pos).size());
                } else {
                    std::set<std::vector<Symbol>> seen;
                    for (const auto& t : translation_range())
                        seen.insert(read_window(s.point.translated(t), f));
                    return BigInt(seen.size());
                }
            },
            v_);
    }

    /// Translates scanned for finite orbits and orbit closures.
    Window translation_range() const {
        if (auto* p = as<PeriodicOrbit>())
            return Window::box(GroupElem::zero(dim()), p->point.template as<config_node::Periodic>()->period);
        if (auto* o = as<OrbitClosure>()) return Window::centered_box(dim(), o->horizon);
        throw UnsupportedShape("system has no finite translation range");
    }

private:
    void validate() const {
        std::visit(
            [](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, FullShift>) {
                    if (s.k < 1) throw UsageError("full shift needs k >= 1");
                    if (s.dim < 1 || s.dim > kMaxDim) throw UsageError("full shift dimension out of range");
                } else if constexpr (std::is_same_v<T, SFT>) {
                    if (s.adj.empty() || s.adj.size() > 64) throw UsageError("SFT needs 1..64 states");
                    for (const auto& row : s.adj) {
                        if (row.size() != s.adj.size()) throw UsageError("SFT adjacency must be square");
                        for (auto e : row)
                            if (e != 0 && e != 1) throw UsageError("SFT adjacency entries must be 0 or 1");
                    }
                } else if constexpr (std::is_same_v<T, Sturmian>) {
                    if (!s.rotation) throw UsageError("Sturmian system needs a rotation");
                } else if constexpr (std::is_same_v<T, PeriodicOrbit>) {
                    if (!s.point.template as<config_node::Periodic>())
                        throw UsageError("periodic orbit needs a periodic configuration");
                } else {
                    if (s.horizon < 1) throw UsageError("orbit closure horizon must be positive");
                }
            },
            v_);
    }

    Variant v_;
    std::string name_;
};

enum class Transitivity { Transitive, NotTransitive, HorizonLimited };

inline std::string to_string(Transitivity t) {
    switch (t) {
        case Transitivity::Transitive: return "transitive";
        case Transitivity::NotTransitive: return "not-transitive";
        case Transitivity::HorizonLimited: return "horizon-limited";
    }
    return "?";
}

/// A point of an SFT whose orbit meets every admissible word up to
/// `max_len`: a periodic cycle on the left, the words joined by connecting
/// paths, and the same cycle on the right.
inline ConfigDesc sft_catalog_point(const SubshiftSpec& x, std::size_t max_len = 8, std::size_t max_table = 4096) {
    auto cyc = x.cycles(x.as<SFT>()->adj.size());
    if (cyc.empty()) throw PreconditionError("SFT has no bi-infinite path");
    const auto& c = cyc.front();
    std::vector<Symbol> table(c.begin(), c.end());
    auto append_word = [&](const std::vector<Symbol>& w) {
        auto mid = x.connector(table.back(), w.front());
        if (!mid) return;  // unreachable from here; words of other components are skipped
        table.insert(table.end(), mid->begin(), mid->end());
        table.insert(table.end(), w.begin(), w.end());
    };
    BoolMatrix m = x.trimmed();
    const int n = static_cast<int>(m.size());
    auto alive = x.essential_states();
    for (std::size_t len = 1; len <= max_len && table.size() < max_table; ++len) {
        std::vector<Symbol> w;
        auto rec = [&](auto&& self) -> void {
            if (table.size() >= max_table) return;
            if (w.size() == len) {
                append_word(w);
                return;
            }
            for (int s = 0; s < n; ++s) {
                if (!alive[static_cast<std::size_t>(s)]) continue;
                if (!w.empty() && !((m[static_cast<std::size_t>(w.back())] >> s) & 1)) continue;
                w.push_back(s);
                self(self);
                w.pop_back();
            }
        };
        rec(rec);
    }
    // return to the cycle's first state
    if (auto mid = x.connector(table.back(), c.front())) {
        table.insert(table.end(), mid->begin(), mid->end());
        table.push_back(c.front());
    } else {
        throw PreconditionError("SFT catalog cannot return to its base cycle");
    }
    const auto len = static_cast<std::int64_t>(table.size());
    ConfigDesc cycle = ConfigDesc::periodic_word(c);
    return ConfigDesc::spliced(0, std::move(table), cycle, cycle.translated(GroupElem{1 - len}));
}

/// A point with dense orbit, when one is constructible.
inline ConfigDesc transitive_point(const SubshiftSpec& x) {
    return std::visit(
        [&](const auto& s) -> ConfigDesc {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, FullShift>) {
                if (s.dim != 1) return ConfigDesc::seeded(s.k, 1, s.dim);
                return ConfigDesc::word_catalog(s.k);
            } else if constexpr (std::is_same_v<T, SFT>) {
                return sft_catalog_point(x);
            } else if constexpr (std::is_same_v<T, Sturmian>) {
                return ConfigDesc::rotation_coding(s.rotation);
            } else {
                return s.point;
            }
        },
        x.variant());
}

struct TransitivityResult {
    Transitivity verdict = Transitivity::Transitive;
    std::string witness;
};

inline TransitivityResult transitivity_check(const SubshiftSpec& x, std::int64_t horizon = 2000,
                                             std::size_t word_len = 10) {
    return std::visit(
        [&](const auto& s) -> TransitivityResult {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, FullShift>) {
                return {Transitivity::Transitive, s.dim == 1 ? "word-catalog point" : "product system"};
            } else if constexpr (std::is_same_v<T, SFT>) {
                if (x.strongly_connected()) return {Transitivity::Transitive, "essential graph strongly connected"};
                return {Transitivity::NotTransitive, "essential graph not strongly connected"};
            } else if constexpr (std::is_same_v<T, Sturmian>) {
                // every admissible word must appear along the orbit of the coding point
                ConfigDesc p = ConfigDesc::rotation_coding(s.rotation);
                for (std::size_t len = 1; len <= word_len; ++len) {
                    std::vector<std::int64_t> pos;
                    for (std::size_t i = 0; i < len; ++i) pos.push_back(static_cast<std::int64_t>(i));
                    auto words = x.sturmian_words(pos);
                    std::set<std::vector<Symbol>> seen;
                    for (std::int64_t t = -horizon; t <= horizon; ++t) {
                        std::vector<Symbol> w;
                        for (auto q : pos) w.push_back(p.at(t + q));
                        seen.insert(std::move(w));
                    }
                    if (seen.size() != words.size())
                        return {Transitivity::HorizonLimited, "not all words realized within horizon"};
                }
                return {Transitivity::Transitive,
                        "coding point realizes all words up to length " + std::to_string(word_len)};
            } else if constexpr (std::is_same_v<T, PeriodicOrbit>) {
                return {Transitivity::Transitive, "single finite orbit"};
            } else {
                return {Transitivity::Transitive, "orbit closure of its generating point"};
            }
        },
        x.variant());
}

/// {s in search : s x in U}.
inline Window visit_times(const ConfigDesc& x, const CylinderSet& u, const Window& search) {
    std::vector<GroupElem> out;
    for (const auto& s : search)
        if (u.contains(x.translated(s))) out.push_back(s);
    return Window(std::move(out));
}

}  // namespace meanlab
