#pragma once

// Brute-force reference computations. They use only raw data (residue lists,
// adjacency matrices, words) and plain loops, never the library's algorithms.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using Big = boost::multiprecision::cpp_int;
using Q = boost::multiprecision::cpp_rational;

inline std::int64_t mod(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

/// Largest count of hits in any length-n window of an m-periodic set, over n.
inline Q periodic_window_max(const std::vector<bool>& mask, std::int64_t n) {
    const auto m = static_cast<std::int64_t>(mask.size());
    std::int64_t best = 0;
    for (std::int64_t s = 0; s < m; ++s) {
        std::int64_t c = 0;
        for (std::int64_t i = 0; i < n; ++i) c += mask[static_cast<std::size_t>(mod(s + i, m))];
        best = std::max(best, c);
    }
    return Q(best, n);
}

inline Q periodic_window_min(const std::vector<bool>& mask, std::int64_t n) {
    const auto m = static_cast<std::int64_t>(mask.size());
    std::int64_t best = n;
    for (std::int64_t s = 0; s < m; ++s) {
        std::int64_t c = 0;
        for (std::int64_t i = 0; i < n; ++i) c += mask[static_cast<std::size_t>(mod(s + i, m))];
        best = std::min(best, c);
    }
    return Q(best, n);
}

/// Hits of E = union_j [2^j, 2^j + j) in [-n, n].
inline std::int64_t block_hits(std::int64_t n) {
    std::int64_t c = 0;
    for (int j = 1; j < 62 && (std::int64_t{1} << j) <= n; ++j)
        for (std::int64_t t = 0; t < j; ++t)
            if ((std::int64_t{1} << j) + t <= n) ++c;
    return c;
}

/// Mean over one common period of d(t x, t y), the metric summed to `terms`
/// positions of the enumeration 0, 1, -1, 2, -2, ...; error below 2^-terms.
inline Q periodic_mean_distance(const std::vector<int>& a, const std::vector<int>& b, int terms = 120) {
    const auto p = std::lcm(static_cast<std::int64_t>(a.size()), static_cast<std::int64_t>(b.size()));
    std::vector<std::int64_t> pos{0};
    for (std::int64_t r = 1; static_cast<int>(pos.size()) < terms; ++r) {
        pos.push_back(r);
        pos.push_back(-r);
    }
    pos.resize(static_cast<std::size_t>(terms));
    Big total = 0;
    for (std::int64_t t = 0; t < p; ++t) {
        for (std::size_t i = 0; i < pos.size(); ++i) {
            auto g = t + pos[i];
            if (a[static_cast<std::size_t>(mod(g, static_cast<std::int64_t>(a.size())))] !=
                b[static_cast<std::size_t>(mod(g, static_cast<std::int64_t>(b.size())))])
                total += Big(1) << (terms - 1 - static_cast<int>(i));
        }
    }
    return Q(total, Big(p) << terms);
}

/// Admissible words of length n for a 0/1 adjacency matrix, by dynamic programming.
inline Big sft_words(const std::vector<std::vector<int>>& adj, int n) {
    const std::size_t k = adj.size();
    std::vector<Big> ends(k, 1);
    for (int step = 1; step < n; ++step) {
        std::vector<Big> next(k, 0);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                if (adj[i][j]) next[j] += ends[i];
        ends = next;
    }
    Big total = 0;
    for (const auto& e : ends) total += e;
    return total;
}

/// Words of length n extendable both ways forever: states on a bi-infinite path.
inline Big sft_words_essential(const std::vector<std::vector<int>>& adj, int n) {
    const std::size_t k = adj.size();
    std::vector<bool> alive(k, true);
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < k; ++i) {
            if (!alive[i]) continue;
            bool in = false, out = false;
            for (std::size_t j = 0; j < k; ++j) {
                if (!alive[j]) continue;
                out = out || adj[i][j];
                in = in || adj[j][i];
            }
            if (!in || !out) {
                alive[i] = false;
                changed = true;
            }
        }
    }
    std::vector<std::vector<int>> sub(k, std::vector<int>(k, 0));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) sub[i][j] = alive[i] && alive[j] && adj[i][j];
    std::vector<Big> ends(k);
    for (std::size_t i = 0; i < k; ++i) ends[i] = alive[i] ? 1 : 0;
    for (int step = 1; step < n; ++step) {
        std::vector<Big> next(k, 0);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                if (sub[i][j]) next[j] += ends[i];
        ends = next;
    }
    Big total = 0;
    for (const auto& e : ends) total += e;
    return total;
}

/// Spectral radius by power iteration in long double.
inline long double power_iteration(const std::vector<std::vector<int>>& adj, int iters = 5000) {
    const std::size_t k = adj.size();
    std::vector<long double> v(k, 1.0L);
    long double lambda = 0;
    for (int it = 0; it < iters; ++it) {
        std::vector<long double> w(k, 0.0L);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) w[i] += adj[i][j] * v[j];
        long double norm = 0;
        for (auto x : w) norm = std::max(norm, x);
        if (norm == 0) return 0;
        for (auto& x : w) x /= norm;
        lambda = norm;
        v = w;
    }
    return lambda;
}

/// Sturmian coding floor((n+1)a) - floor(n a) in long double; exact for small n.
inline int sturmian_symbol(long double alpha, std::int64_t n) {
    return static_cast<int>(std::floor((n + 1) * alpha) - std::floor(n * alpha));
}

inline std::size_t distinct_factors(const std::vector<int>& word, std::size_t n) {
    std::set<std::vector<int>> seen;
    for (std::size_t i = 0; i + n <= word.size(); ++i) seen.emplace(word.begin() + static_cast<std::ptrdiff_t>(i),
                                                                     word.begin() + static_cast<std::ptrdiff_t>(i + n));
    return seen.size();
}

/// Is some admissible configuration equal to the given symbols at the given
/// positions? Positions sorted; gaps filled by matrix powers.
inline bool sft_pattern_exists(const std::vector<std::vector<int>>& adj, const std::vector<std::int64_t>& pos,
                               const std::vector<int>& sym) {
    const std::size_t k = adj.size();
    // restrict to states on bi-infinite paths
    std::vector<bool> alive(k, true);
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < k; ++i) {
            if (!alive[i]) continue;
            bool in = false, out = false;
            for (std::size_t j = 0; j < k; ++j) {
                if (!alive[j]) continue;
                out = out || adj[i][j];
                in = in || adj[j][i];
            }
            if (!in || !out) alive[i] = false, changed = true;
        }
    }
    std::vector<bool> reach(k, false);
    if (!alive[static_cast<std::size_t>(sym[0])]) return false;
    reach[static_cast<std::size_t>(sym[0])] = true;
    for (std::size_t p = 1; p < pos.size(); ++p) {
        for (std::int64_t step = pos[p - 1]; step < pos[p]; ++step) {
            std::vector<bool> next(k, false);
            for (std::size_t i = 0; i < k; ++i)
                if (reach[i])
                    for (std::size_t j = 0; j < k; ++j)
                        if (adj[i][j] && alive[j]) next[j] = true;
            reach = next;
        }
        std::vector<bool> only(k, false);
        only[static_cast<std::size_t>(sym[p])] = reach[static_cast<std::size_t>(sym[p])];
        reach = only;
    }
    for (bool r : reach)
        if (r) return true;
    return false;
}

/// Independence of J for origin cylinders of symbols (s0, s1): every 0/1
/// assignment over J is realized.
inline bool sft_independent(const std::vector<std::vector<int>>& adj, int s0, int s1, const std::vector<std::int64_t>& j) {
    const std::size_t n = j.size();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        std::vector<int> sym(n);
        for (std::size_t i = 0; i < n; ++i) sym[i] = (mask >> i) & 1 ? s1 : s0;
        if (!sft_pattern_exists(adj, j, sym)) return false;
    }
    return true;
}

/// Same for a periodic word: an assignment is realized iff some translate matches it.
inline bool word_independent(const std::vector<int>& w, int s0, int s1, const std::vector<std::int64_t>& j) {
    const auto p = static_cast<std::int64_t>(w.size());
    const std::size_t n = j.size();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        bool found = false;
        for (std::int64_t t = 0; t < p && !found; ++t) {
            bool ok = true;
            for (std::size_t i = 0; i < n && ok; ++i)
                ok = w[static_cast<std::size_t>(mod(t + j[i], p))] == ((mask >> i) & 1 ? s1 : s0);
            found = ok;
        }
        if (!found) return false;
    }
    return true;
}

/// max |J| over subsets J of [0, n) passing `indep`.
inline int max_independent(std::int64_t n, const std::function<bool(const std::vector<std::int64_t>&)>& indep) {
    int best = 0;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        int bits = __builtin_popcount(mask);
        if (bits <= best) continue;
        std::vector<std::int64_t> j;
        for (std::int64_t i = 0; i < n; ++i)
            if ((mask >> i) & 1) j.push_back(i);
        if (indep(j)) best = bits;
    }
    return best;
}

inline long double shannon(const std::vector<long double>& p) {
    long double h = 0;
    for (auto q : p)
        if (q > 0) h -= q * std::log(q);
    return h;
}

/// Entropy rate -sum pi_i P_ij log P_ij.
inline long double markov_rate(const std::vector<std::vector<long double>>& p, const std::vector<long double>& pi) {
    long double h = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (auto q : p[i])
            if (q > 0) h -= pi[i] * q * std::log(q);
    return h;
}

/// Density of the intersection of (E - t) over the shifts, for an m-periodic mask.
inline Q shifted_intersection_density(const std::vector<bool>& mask, const std::vector<std::int64_t>& shifts) {
    const auto m = static_cast<std::int64_t>(mask.size());
    std::int64_t c = 0;
    for (std::int64_t g = 0; g < m; ++g) {
        bool in = true;
        for (auto t : shifts) in = in && mask[static_cast<std::size_t>(mod(g + t, m))];
        c += in;
    }
    return Q(c, m);
}

/// Best pair (i < j) mass of E_i intersect E_j under uniform weights.
inline Q best_pair_mass(const std::vector<std::vector<bool>>& sets) {
    Q best = 0;
    const std::size_t n = sets.empty() ? 0 : sets[0].size();
    for (std::size_t i = 0; i < sets.size(); ++i)
        for (std::size_t j = i + 1; j < sets.size(); ++j) {
            std::int64_t c = 0;
            for (std::size_t p = 0; p < n; ++p) c += sets[i][p] && sets[j][p];
            best = std::max(best, Q(c, static_cast<std::int64_t>(n)));
        }
    return best;
}

}  // namespace oracle
