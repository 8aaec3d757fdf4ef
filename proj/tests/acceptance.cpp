// Runs the acceptance table: one PASS/FAIL line per criterion. Library rows
// come from verify(); each is paired with a brute-force cross-check.

#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <thread>

#include "meanlab/meanlab.hpp"
#include "oracles.hpp"

using namespace meanlab;

namespace {

std::vector<bool> mask_of(const SubsetDesc& e) {
    const auto* p = e.as_periodic();
    const auto m = p->modulus()[0];
    std::vector<bool> mask(static_cast<std::size_t>(m));
    for (std::int64_t r = 0; r < m; ++r) mask[static_cast<std::size_t>(r)] = p->contains(GroupElem::scalar(r));
    return mask;
}

Rational q(const oracle::Q& v) { return Rational(v); }

// 1: BD* of a periodic set is the densest window of one period length
bool cross_density() {
    std::mt19937_64 rng(101);
    for (int i = 0; i < 50; ++i) {
        auto e = random_periodic_set(rng, 12);
        auto mask = mask_of(e);
        auto m = static_cast<std::int64_t>(mask.size());
        if (banach_upper_density(e).upper != q(oracle::periodic_window_max(mask, m))) return false;
        if (banach_lower_density(e).lower != q(oracle::periodic_window_min(mask, m))) return false;
    }
    return true;
}

// 2: centered count at 2^14 and a fully covered length-12 window at block 12
bool cross_blocks() {
    const std::int64_t n = std::int64_t{1} << 14;
    if (!(oracle::Q(oracle::block_hits(n), 2 * n + 1) < oracle::Q(1, 100))) return false;
    auto e = parse_set("blocks(j=1..: 2^j, j)");
    for (std::int64_t t = 0; t < 12; ++t)
        if (!e.contains(GroupElem::scalar(4096 + t))) return false;
    return true;
}

// 3: periodic mean distances against a truncated direct sum
bool cross_mean() {
    std::mt19937_64 rng(103);
    const Rational slack(1, BigInt(1) << 100);
    for (int i = 0; i < 20; ++i) {
        auto p = 1 + rng() % 12;
        std::vector<Symbol> a(p), b(p);
        std::vector<int> ai(p), bi(p);
        for (std::size_t j = 0; j < p; ++j) ai[j] = a[j] = static_cast<Symbol>(rng() % 2);
        for (std::size_t j = 0; j < p; ++j) bi[j] = b[j] = static_cast<Symbol>(rng() % 2);
        Rational d = banach_mean_distance(ConfigDesc::periodic_word(a), ConfigDesc::periodic_word(b)).upper -
                     q(oracle::periodic_mean_distance(ai, bi));
        if (d < 0) d = -d;
        if (!(d < slack)) return false;
    }
    return true;
}

// 4: the two verdicts are never given to the same system
bool cross_dichotomy() {
    for (auto name : {"fullshift:2", "periodic:01", "sturmian:golden"}) {
        auto x = parse_system(name);
        auto rep = classify_system(x, default_classify_params(x));
        bool sens = rep.verdict == SystemVerdict::Sensitive;
        for (const auto& p : rep.points)
            if (sens && p.verdict == PointVerdict::Equicontinuous) return false;
    }
    return true;
}

// 5: golden-mean word counts and spectral radius
bool cross_entropy() {
    const std::vector<std::vector<int>> g{{1, 1}, {1, 0}};
    if (oracle::sft_words(g, 20) != 17711) return false;
    const long double target = std::log((1.0L + std::sqrt(5.0L)) / 2.0L);
    if (std::fabs(std::log(oracle::power_iteration(g)) - target) > 1e-12L) return false;
    auto e = topological_entropy(SubshiftSpec::golden_mean(), 20);
    return std::fabs(std::log(17711.0L) / 20.0L - e.lo) <= 0.01L;
}

// 6: factor counts of a long Sturmian word
bool cross_sturmian() {
    const long double alpha = (std::sqrt(5.0L) - 1.0L) / 2.0L;
    std::vector<int> word;
    for (std::int64_t t = 0; t < 4000; ++t) word.push_back(oracle::sturmian_symbol(alpha, t));
    for (std::size_t n = 1; n <= 30; ++n)
        if (oracle::distinct_factors(word, n) != n + 1) return false;
    return std::log(31.0L) / 30.0L <= 0.12L;
}

// 7: phi against subset enumeration over adjacency data
bool cross_phi() {
    const std::vector<std::vector<int>> g{{1, 1}, {1, 0}};
    auto x = SubshiftSpec::golden_mean();
    std::vector<CylinderSet> a{CylinderSet::at_origin(0), CylinderSet::at_origin(1)};
    for (std::int64_t n = 1; n <= 10; ++n) {
        int want = oracle::max_independent(n, [&](const std::vector<std::int64_t>& j) { return oracle::sft_independent(g, 0, 1, j); });
        if (phi(x, a, Window::interval(0, n)).phi != want) return false;
    }
    return true;
}

// 8: word counts confirm positive entropy exactly where the sweep claims it
bool cross_zoo() {
    return oracle::sft_words_essential({{1, 1, 1}, {1, 0, 1}, {1, 1, 0}}, 12) > oracle::Big(1) << 12 &&
           oracle::sft_words_essential({{1, 1}, {0, 1}}, 40) == 41;
}

// 9: window mass of the indicator against direct counting
bool cross_correspondence() {
    std::mt19937_64 rng(109);
    for (int i = 0; i < 50; ++i) {
        auto e = random_periodic_set(rng, 12);
        auto row = correspondence_rows(e, {DensityParams{}}).front();
        if (row.mass != q(oracle::shifted_intersection_density(mask_of(e), {0}))) return false;
    }
    return true;
}

// 10: best pair mass on finite spaces and exact shifted-pair densities
bool cross_demonstrators() {
    std::mt19937_64 rng(110);
    for (int i = 0; i < 50; ++i) {
        auto s = random_finite_space(rng, 20, 50, Rational(2, 5));
        if (q(oracle::best_pair_mass(s.subsets)) < Rational(2, 5) * Rational(2, 5) - Rational(1, 20)) return false;
        auto e = random_periodic_set(rng, 12, Rational(3, 10));
        auto p = pair_density_lemma(e, Window::interval(1, 14));
        if (p.density.lower != q(oracle::shifted_intersection_density(mask_of(e), {p.shifts[0][0], p.shifts[1][0]})))
            return false;
    }
    return true;
}

}  // namespace

int main() {
    const std::uint64_t seed = 7;
    const unsigned threads = std::max(2u, std::thread::hardware_concurrency());
    auto report = verify("all", seed, threads);

    const std::vector<std::function<bool()>> cross{cross_density, cross_blocks,         cross_mean,     cross_dichotomy,
                                                   cross_entropy, cross_sturmian,       cross_phi,      cross_zoo,
                                                   cross_correspondence, cross_demonstrators};
    int failures = 0;
    for (const auto& row : report.rows) {
        bool oracle_ok = false;
        try {
            oracle_ok = cross[static_cast<std::size_t>(row.id - 1)]();
        } catch (const std::exception& e) {
            std::cerr << "cross-check " << row.id << " threw: " << e.what() << "\n";
        }
        bool ok = row.pass && oracle_ok;
        failures += !ok;
        std::printf("%s  %2d  %s%s\n", ok ? "PASS" : "FAIL", row.id, row.name.c_str(),
                    row.pass && !oracle_ok ? " (cross-check disagrees)" : "");
        if (!row.pass) std::printf("      measured: %s\n", row.measured.dump().c_str());
    }

    const std::string one = to_json(verify("all", seed, 1)).dump();
    const std::string many = to_json(verify("all", seed, 4)).dump();
    const bool same = one == many && one == to_json(report).dump();
    failures += !same;
    std::printf("%s  11  deterministic report bodies across runs and thread counts\n", same ? "PASS" : "FAIL");
    return failures == 0 ? 0 : 1;
}
