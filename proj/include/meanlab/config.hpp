#pragma once

// Points of A^G given by finite descriptions, the translation action and
// the metric d(x, y) = sum_i 2^-i [x(g_i) != y(g_i)].

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "meanlab/error.hpp"
#include "meanlab/group.hpp"
#include "meanlab/rational.hpp"
#include "meanlab/rotation.hpp"
#include "meanlab/subset.hpp"

namespace meanlab {

using Symbol = int;

struct Alphabet {
    int k = 2;
    std::vector<std::string> labels;

    explicit Alphabet(int size = 2) : k(size) {
        if (k < 1) throw UsageError("alphabet needs at least one symbol");
        for (int i = 0; i < k; ++i) labels.push_back(std::to_string(i));
    }
};

inline constexpr std::int64_t kSubstitutionHorizon = std::int64_t{1} << 16;

class ConfigDesc;

namespace config_node {
struct Node;
using Ptr = std::shared_ptr<const Node>;

struct Constant {
    Symbol symbol = 0;
};
/// x(g) = block at g mod period, block listed lexicographically over the period box.
struct Periodic {
    GroupElem period;
    std::vector<Symbol> block;
};
struct FiniteDefect {
    Ptr base;
    std::map<GroupElem, Symbol> overrides;
};
/// floor((n+1)alpha + beta) - floor(n alpha + beta), or the ceiling variant.
struct RotationCoding {
    std::shared_ptr<const Rotation> rotation;
    std::int64_t beta_num = 0;
    std::int64_t beta_den = 1;
    bool ceiling = false;
};
/// One-sided fixed point u of a substitution, read as x(n) = u(n) for n >= 0
/// and x(n) = u(-n-1) for n < 0.
struct SubstitutionFixedPoint {
    std::vector<std::vector<Symbol>> rules;
    Symbol seed = 0;
    std::shared_ptr<const std::vector<Symbol>> prefix;
};
/// 0 on E, 1 off E.
struct Indicator {
    SubsetDesc set;
};
/// All words over k symbols, by length then lexicographically, concatenated
/// from position 0; mirrored to negative positions.
struct WordCatalog {
    int k = 2;
};
struct Translate {
    Ptr base;
    GroupElem by;
};
/// Deterministic pseudo-random point from a seed.
struct Seeded {
    int k = 2;
    std::uint64_t seed = 0;
    int dim = 1;
};
/// base(g) + 1 mod k on S, base elsewhere.
struct Flip {
    Ptr base;
    SubsetDesc set;
    int k = 2;
};
/// Finite table on [lo, lo + |values|) in Z, `left` below it and `right` above it.
struct Spliced {
    std::int64_t lo = 0;
    std::vector<Symbol> values;
    Ptr left;
    Ptr right;
};

struct Node {
    std::variant<Constant, Periodic, FiniteDefect, RotationCoding, SubstitutionFixedPoint, Indicator, WordCatalog,
                 Translate, Seeded, Flip, Spliced>
        v;
    int dim = 1;
};
}  // namespace config_node

/// Immutable handle to a configuration description.
class ConfigDesc {
public:
    using Node = config_node::Node;

    static ConfigDesc constant(Symbol s, int dim = 1) { return make({config_node::Constant{s}, dim}); }

    static ConfigDesc periodic(const GroupElem& period, std::vector<Symbol> block) {
        std::int64_t cells = 1;
        for (int i = 0; i < period.dim(); ++i) {
            if (period[i] < 1) throw UsageError("period must be positive on every axis");
            cells = checked_mul(cells, period[i]);
        }
        if (static_cast<std::int64_t>(block.size()) != cells) throw UsageError("periodic block size must equal the period box");
        return make({config_node::Periodic{period, std::move(block)}, period.dim()});
    }
    /// Periodic word in Z, e.g. "0011".
    static ConfigDesc periodic_word(const std::vector<Symbol>& word) {
        if (word.empty()) throw UsageError("periodic word must be nonempty");
        return periodic(GroupElem{static_cast<std::int64_t>(word.size())}, word);
    }

    static ConfigDesc finite_defect(const ConfigDesc& base, std::map<GroupElem, Symbol> overrides) {
        for (const auto& [g, s] : overrides)
            if (g.dim() != base.dim()) throw UsageError("defect position has wrong dimension");
        return make({config_node::FiniteDefect{base.node_, std::move(overrides)}, base.dim()});
    }

    static ConfigDesc rotation_coding(std::shared_ptr<const Rotation> r, std::int64_t beta_num = 0,
                                      std::int64_t beta_den = 1, bool ceiling = false) {
        if (beta_den <= 0 || beta_den > kBetaDenCap) throw UsageError("rotation offset denominator out of range");
        std::int64_t g = gcd64(beta_num, beta_den);
        if (g > 1) {
            beta_num /= g;
            beta_den /= g;
        }
        return make({config_node::RotationCoding{std::move(r), beta_num, beta_den, ceiling}, 1});
    }

    static ConfigDesc substitution(std::vector<std::vector<Symbol>> rules, Symbol seed,
                                   std::int64_t horizon = kSubstitutionHorizon) {
        const int k = static_cast<int>(rules.size());
        if (seed < 0 || seed >= k) throw UsageError("substitution seed outside the alphabet");
        for (const auto& r : rules)
            for (auto s : r)
                if (s < 0 || s >= k) throw UsageError("substitution image uses unknown symbol");
        const auto& img = rules[static_cast<std::size_t>(seed)];
        if (img.size() < 2 || img.front() != seed) throw UsageError("substitution must be prolongable on its seed");
        auto word = std::make_shared<std::vector<Symbol>>(std::vector<Symbol>{seed});
        while (static_cast<std::int64_t>(word->size()) < horizon) {
            std::vector<Symbol> next;
            for (auto s : *word) {
                const auto& r = rules[static_cast<std::size_t>(s)];
                next.insert(next.end(), r.begin(), r.end());
                if (static_cast<std::int64_t>(next.size()) >= horizon) break;
            }
            if (next.size() <= word->size()) throw UsageError("substitution does not grow from its seed");
            *word = std::move(next);
        }
        word->resize(static_cast<std::size_t>(horizon));
        return make({config_node::SubstitutionFixedPoint{std::move(rules), seed, word}, 1});
    }

    static ConfigDesc indicator(const SubsetDesc& e) { return make({config_node::Indicator{e}, e.dim()}); }

    static ConfigDesc word_catalog(int k) {
        if (k < 1) throw UsageError("catalog needs k >= 1");
        return make({config_node::WordCatalog{k}, 1});
    }

    static ConfigDesc seeded(int k, std::uint64_t seed, int dim = 1) {
        if (k < 1) throw UsageError("seeded point needs k >= 1");
        return make({config_node::Seeded{k, seed, dim}, dim});
    }

    static ConfigDesc flip(const ConfigDesc& base, const SubsetDesc& s, int k) {
        if (s.dim() != base.dim()) throw UsageError("flip set has wrong dimension");
        if (k < 2) throw UsageError("flip needs k >= 2");
        return make({config_node::Flip{base.node_, s, k}, base.dim()});
    }

    static ConfigDesc spliced(std::int64_t lo, std::vector<Symbol> values, const ConfigDesc& left,
                              const ConfigDesc& right) {
        if (left.dim() != 1 || right.dim() != 1) throw UsageError("splicing is defined in Z only");
        return make({config_node::Spliced{lo, std::move(values), left.node_, right.node_}, 1});
    }

    /// (s x)(g) = x(g + s).
    ConfigDesc translated(const GroupElem& s) const {
        if (s.dim() != dim()) throw UsageError("translation has wrong dimension");
        if (s.is_zero()) return *this;
        if (std::holds_alternative<config_node::Constant>(node_->v)) return *this;
        if (auto* t = std::get_if<config_node::Translate>(&node_->v)) {
            GroupElem total = t->by + s;
            if (total.is_zero()) return ConfigDesc(t->base);
            return make({config_node::Translate{t->base, total}, dim()});
        }
        return make({config_node::Translate{node_, s}, dim()});
    }

    int dim() const { return node_->dim; }
    const Node& node() const { return *node_; }
    const config_node::Ptr& node_ptr() const { return node_; }

    template <class T>
    const T* as() const {
        return std::get_if<T>(&node_->v);
    }

    Symbol at(const GroupElem& g) const { return at(*node_, g); }
    Symbol at(std::int64_t n) const { return at(*node_, GroupElem{n}); }

    explicit ConfigDesc(config_node::Ptr n) : node_(std::move(n)) {}

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Symbol at position n >= 0 of the word catalog.
    static Symbol catalog_symbol(int k, std::int64_t n) {
        if (k == 1) return 0;
        std::int64_t len = 1, count = k;
        while (true) {
            std::int64_t block = checked_mul(len, count);
            if (n < block) break;
            n -= block;
            ++len;
            count = checked_mul(count, k);
        }
        std::int64_t word = n / len, pos = n % len;
        for (std::int64_t i = len - 1; i > pos; --i) word /= k;
        return static_cast<Symbol>(word % k);
    }

private:
    static ConfigDesc make(Node n) { return ConfigDesc(std::make_shared<const Node>(std::move(n))); }

    static Symbol at(const Node& n, const GroupElem& g) {
        if (g.dim() != n.dim) throw UsageError("symbol query with wrong dimension");
        return std::visit(
            [&](const auto& v) -> Symbol {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, config_node::Constant>) {
                    return v.symbol;
                } else if constexpr (std::is_same_v<T, config_node::Periodic>) {
                    std::size_t idx = 0;
                    for (int i = 0; i < g.dim(); ++i)
                        idx = idx * static_cast<std::size_t>(v.period[i]) +
                              static_cast<std::size_t>(mod_floor(g[i], v.period[i]));
                    return v.block[idx];
                } else if constexpr (std::is_same_v<T, config_node::FiniteDefect>) {
                    auto it = v.overrides.find(g);
                    return it != v.overrides.end() ? it->second : at(*v.base, g);
                } else if constexpr (std::is_same_v<T, config_node::RotationCoding>) {
                    const auto& r = *v.rotation;
                    const std::int64_t n0 = g[0];
                    if (!v.ceiling)
                        return static_cast<Symbol>(r.floor_at(n0 + 1, v.beta_num, v.beta_den) -
                                                   r.floor_at(n0, v.beta_num, v.beta_den));
                    // ceil(t) = -floor(-t)
                    return static_cast<Symbol>(-r.floor_at(-(n0 + 1), -v.beta_num, v.beta_den) +
                                               r.floor_at(-n0, -v.beta_num, v.beta_den));
                } else if constexpr (std::is_same_v<T, config_node::SubstitutionFixedPoint>) {
                    std::int64_t i = g[0] >= 0 ? g[0] : -g[0] - 1;
                    if (i >= static_cast<std::int64_t>(v.prefix->size()))
                        throw HorizonExceeded("substitution point queried beyond its precomputed horizon");
                    return (*v.prefix)[static_cast<std::size_t>(i)];
                } else if constexpr (std::is_same_v<T, config_node::Indicator>) {
                    return v.set.contains(g) ? 0 : 1;
                } else if constexpr (std::is_same_v<T, config_node::WordCatalog>) {
                    return catalog_symbol(v.k, g[0] >= 0 ? g[0] : -g[0] - 1);
                } else if constexpr (std::is_same_v<T, config_node::Translate>) {
                    return at(*v.base, g + v.by);
                } else if constexpr (std::is_same_v<T, config_node::Seeded>) {
                    std::uint64_t h = mix(v.seed);
                    for (int i = 0; i < g.dim(); ++i) h = mix(h ^ static_cast<std::uint64_t>(g[i]));
                    return static_cast<Symbol>(h % static_cast<std::uint64_t>(v.k));
                } else if constexpr (std::is_same_v<T, config_node::Flip>) {
                    Symbol s = at(*v.base, g);
                    return v.set.contains(g) ? (s + 1) % v.k : s;
                } else {
                    const std::int64_t n0 = g[0];
                    if (n0 < v.lo) return at(*v.left, g);
                    if (n0 - v.lo >= static_cast<std::int64_t>(v.values.size())) return at(*v.right, g);
                    return v.values[static_cast<std::size_t>(n0 - v.lo)];
                }
            },
            n.v);
    }

    config_node::Ptr node_;
};

/// Symbols of x on a window, in window order.
inline std::vector<Symbol> read_window(const ConfigDesc& x, const Window& w) {
    std::vector<Symbol> out;
    out.reserve(w.size());
    for (const auto& g : w) out.push_back(x.at(g));
    return out;
}

/// A pattern on a window; the clopen set of configurations carrying it.
struct CylinderSet {
    Window window;
    std::vector<Symbol> symbols;  // aligned with window order

    CylinderSet() = default;
    CylinderSet(Window w, std::vector<Symbol> s) : window(std::move(w)), symbols(std::move(s)) {
        if (window.size() != symbols.size()) throw UsageError("cylinder pattern length differs from its window");
    }

    static CylinderSet at_origin(Symbol s, int dim = 1) {
        return CylinderSet(Window({GroupElem::zero(dim)}), {s});
    }
    static CylinderSet around(const ConfigDesc& x, const Window& w) { return CylinderSet(w, read_window(x, w)); }

    bool contains(const ConfigDesc& x) const {
        std::size_t i = 0;
        for (const auto& g : window)
            if (x.at(g) != symbols[i++]) return false;
        return true;
    }

    /// s^-1 C: the constraints moved to window + s.
    CylinderSet translated(const GroupElem& s) const { return CylinderSet(window.translate(s), symbols); }

    /// Intersection of cylinders; nullopt when two constraints conflict.
    static std::optional<CylinderSet> merge(const std::vector<CylinderSet>& parts) {
        std::map<GroupElem, Symbol> m;
        for (const auto& c : parts) {
            std::size_t i = 0;
            for (const auto& g : c.window) {
                auto [it, fresh] = m.emplace(g, c.symbols[i]);
                if (!fresh && it->second != c.symbols[i]) return std::nullopt;
                ++i;
            }
        }
        std::vector<GroupElem> w;
        std::vector<Symbol> s;
        for (const auto& [g, sym] : m) {
            w.push_back(g);
            s.push_back(sym);
        }
        CylinderSet out;
        out.window = Window(std::move(w));
        out.symbols = std::move(s);
        return out;
    }

    friend bool operator==(const CylinderSet&, const CylinderSet&) = default;
};

/// The cylinder fixing x on the first `depth` enumeration positions; it lies
/// inside the ball B(x, 2^-depth).
inline CylinderSet enumeration_cylinder(const ConfigDesc& x, std::size_t depth) {
    return CylinderSet::around(x, Window(enumerate_group(x.dim(), depth)));
}

/// [sum_{i<=K} 2^-i [x(g_i) != y(g_i)], same + 2^-K].
inline Interval distance(const ConfigDesc& x, const ConfigDesc& y, std::size_t k) {
    if (k < 1) throw UsageError("distance truncation K must be >= 1");
    if (x.dim() != y.dim()) throw UsageError("configurations differ in dimension");
    const auto gs = enumerate_group(x.dim(), k);
    Rational partial = 0, w = Rational(1) / 2;
    for (const auto& g : gs) {
        if (x.at(g) != y.at(g)) partial += w;
        w /= 2;
    }
    return {partial, partial + w * 2};
}

}  // namespace meanlab
