// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include "dsk/error.hpp"
#include "dsk/rng.hpp"
#include "dsk/seqs.hpp"

using namespace dsk;

namespace {

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::parse_error;
}

int ceil_log2(int k) {
    int b = 0;
    while ((1 << b) < k) ++b;
    return b;
}

}  // namespace

TEST_CASE("ZC sequences by hand") {
    const ZcBasis z2 = zc_generate(2, 1);
    CHECK(std::abs(z2.seq[0] - cplx(1.0, 0.0) / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(z2.seq[1] - cplx(0.0, 1.0) / std::sqrt(2.0)) < 1e-15);

    const ZcBasis z4 = zc_generate(4, 1);
    const cplx e = std::polar(1.0, std::numbers::pi / 4.0);
    const cplx expected[] = {1.0, e, -1.0, e};
    for (int k = 0; k < 4; ++k) CHECK(std::abs(z4.seq[static_cast<std::size_t>(k)] - expected[k] / 2.0) < 1e-15);

    // Odd length uses k(k+1).
    const ZcBasis z5 = zc_generate(5, 2);
    for (int k = 0; k < 5; ++k) {
        const cplx v = std::polar(1.0 / std::sqrt(5.0), std::numbers::pi * 2.0 * k * (k + 1) / 5.0);
        CHECK(std::abs(z5.seq[static_cast<std::size_t>(k)] - v) < 1e-14);
    }

    CHECK(code_of([] { zc_generate(4, 2); }) == ErrorCode::root_not_coprime);
    CHECK(code_of([] { zc_generate(8, 0); }) == ErrorCode::root_not_coprime);
    CHECK(code_of([] { zc_generate(8, 9); }) == ErrorCode::root_not_coprime);
}

TEST_CASE("zero autocorrelation for every root") {
    for (int n : {8, 16, 64, 67}) {
        for (int m = 1; m < n; ++m) {
            if (std::gcd(m, n) != 1) continue;
            const ZcBasis z = zc_generate(n, m);
            double worst = 0.0;
            for (int lag = 0; lag < n; ++lag) {
                worst = std::max(worst, std::abs(cross_corr(z, z, lag, 0) - (lag == 0 ? 1.0 : 0.0)));
            }
            CHECK(worst < 1e-12);
        }
    }
}

TEST_CASE("cross-correlation basics") {
    const ZcBasis a = zc_generate(16, 3);
    CHECK(std::abs(cross_corr(a, a, 0, 0) - 1.0) < 1e-14);
    CHECK(std::abs(cross_corr(a, a, 5, 5) - 1.0) < 1e-14);
    CHECK(std::abs(cross_corr(a, a, 1, 0)) < 1e-14);
    CHECK(std::norm(cross_corr(zc_generate(8, 1), zc_generate(8, 3), 0, 0)) == Catch::Approx(0.25));
    CHECK(code_of([&] { cross_corr(a, zc_generate(8, 1), 0, 0); }) == ErrorCode::length_mismatch);
}

TEST_CASE("closed-form cross power agrees with direct sums") {
    for (int n : {8, 16, 32}) {
        double worst = 0.0;
        for (int ma = 1; ma < n; ma += 2) {
            for (int mb = 1; mb < n; mb += 2) {
                const ZcBasis a = zc_generate(n, ma), b = zc_generate(n, mb);
                for (int ka = 0; ka < n; ++ka) {
                    for (int kb = 0; kb < n; ++kb) {
                        worst = std::max(worst, std::abs(std::norm(cross_corr(a, b, ka, kb)) -
                                                         cross_power_closed(n, ma, mb, ka, kb)));
                    }
                }
            }
        }
        CHECK(worst < 1e-10);
    }
    CHECK(cross_power_closed(8, 3, 3, 2, 2) == 1.0);
    CHECK(cross_power_closed(8, 1, 3, 0, 0) == Catch::Approx(0.25));

    // gcd(4, 64) = 4: every shift pair is either 0 or 4/64.
    const ZcBasis a = zc_generate(64, 1), b = zc_generate(64, 5);
    std::set<long> values;
    for (int ka = 0; ka < 64; ka += 3) {
        for (int kb = 0; kb < 64; kb += 5) values.insert(std::lround(std::norm(cross_corr(a, b, ka, kb)) * 64.0));
    }
    CHECK(values == std::set<long>{0, 4});
    CHECK(cross_power_closed(64, 1, 5, 0, 0) == Catch::Approx(0.0625));

    CHECK(code_of([] { cross_power_closed(12, 1, 5, 0, 0); }) == ErrorCode::out_of_scope_n);
}

TEST_CASE("chirp autocorrelation closed form") {
    CHECK(std::abs(chirp_autocorr(16, 3, 0) - 1.0) < 1e-15);
    CHECK(chirp_autocorr(16, 2, 3) == 0.0);
    CHECK(std::abs(chirp_autocorr(8, 2, 4) - 1.0) < 1e-12);
    for (int n : {8, 16}) {
        for (int dm = 0; dm < n; ++dm) {
            for (int lag = 0; lag < n; ++lag) {
                cplx direct{};
                for (int k = 0; k < n; ++k) {
                    const int kk = (k - lag + n) % n;
                    direct += std::polar(1.0, -std::numbers::pi * dm * kk * kk / n) *
                              std::polar(1.0, std::numbers::pi * dm * k * k / n);
                }
                direct /= static_cast<double>(n);
                CHECK(std::abs(direct - chirp_autocorr(n, dm, lag)) < 1e-12);
            }
        }
    }
}

TEST_CASE("root allocation") {
    CHECK(allocate_roots(3, 64, 1) == std::vector<int>{1, 3, 5});
    CHECK(allocate_roots(4, 64, 1) == std::vector<int>{1, 3, 5, 7});
    CHECK(allocate_roots(2, 16, 7) == std::vector<int>{7, 9});
    CHECK(allocate_roots(1, 64, 3) == std::vector<int>{3});
    CHECK(code_of([] { allocate_roots(2, 64, 2); }) == ErrorCode::even_m0);
    CHECK(code_of([] { allocate_roots(5, 8, 1); }) == ErrorCode::too_many_users);
    CHECK(code_of([] { allocate_roots(2, 8, 7); }) == ErrorCode::too_many_users);
    CHECK(code_of([] { allocate_roots(2, 15, 1); }) == ErrorCode::out_of_scope_n);
    CHECK(code_of([] { allocate_roots(0, 16, 1); }) == ErrorCode::invalid_dimension);

    const auto prime = allocate_roots(8, 67, 1, 42);
    CHECK(prime.size() == 8u);
    CHECK(std::set<int>(prime.begin(), prime.end()).size() == 8u);
    for (int r : prime) {
        CHECK(r > 0);
        CHECK(r < 67);
    }
    CHECK(allocate_roots(8, 67, 1, 42) == prime);
    CHECK(code_of([] { allocate_roots(67, 67, 1); }) == ErrorCode::too_many_users);
}

TEST_CASE("cross-correlation metrics of root sets") {
    const std::vector<int> three{1, 3, 5};
    const PsiMetrics m = psi_metrics(three, 64, 64);
    CHECK(m.peak_num == 4);
    CHECK(m.peak_den == 64);
    CHECK(m.attaining_pairs == 1);
    CHECK(m.pair_peak_num[0][2] == 4);
    CHECK(m.pair_peak_num[0][1] == 2);
    CHECK(m.pair_peak_num[1][2] == 2);
    CHECK(m.pair_peak_num[1][0] == 2);
    CHECK(m.pair_peak_num[1][1] == 0);
    CHECK(m.psi_max() == Catch::Approx(std::sqrt(4.0 / 64.0)));

    const std::vector<int> pair{1, 3};
    const PsiMetrics p = psi_metrics(pair, 8, 8);
    CHECK(p.peak_power() == Catch::Approx(0.25));
    CHECK(p.attaining_pairs == 1);

    const std::vector<int> half{1, 9};
    CHECK(psi_metrics(half, 16, 16).peak_power() == Catch::Approx(0.5));

    const std::vector<int> four{1, 3, 5, 7};
    CHECK(psi_metrics(four, 64, 64).peak_power() == Catch::Approx(4.0 / 64.0));
}

TEST_CASE("exhaustive root search") {
    const RootSearch two = brute_force_roots(2, 8, 8);
    CHECK(two.metrics.peak_power() == Catch::Approx(2.0 / 8.0));
    CHECK(two.roots == std::vector<int>{1, 3});

    const RootSearch three = brute_force_roots(3, 8, 8);
    const auto alloc = allocate_roots(3, 8, 1);
    const PsiMetrics am = psi_metrics(alloc, 8, 8);
    CHECK(three.metrics.peak_power() == Catch::Approx(0.5));
    CHECK(three.metrics.attaining_pairs == 1);
    CHECK(am.peak_num == three.metrics.peak_num);
    CHECK(am.attaining_pairs == three.metrics.attaining_pairs);

    CHECK(code_of([] { brute_force_roots(5, 8, 8); }) == ErrorCode::too_many_users);
}

TEST_CASE("arithmetic roots are optimal for small grids") {
    for (int n : {8, 16}) {
        for (int users : {2, 3, 4}) {
            const auto alloc = allocate_roots(users, n, 1);
            const PsiMetrics am = psi_metrics(alloc, n, n);
            const RootSearch best = brute_force_roots(users, n, n);
            CHECK(am.peak_num == best.metrics.peak_num);
            CHECK(am.attaining_pairs == best.metrics.attaining_pairs);
            CHECK(am.attaining_pairs == users - (1 << (ceil_log2(users) - 1)));
        }
    }
}

TEST_CASE("basis-set lookup depends only on the shift difference") {
    std::vector<ZcBasis> bases;
    for (int r : allocate_roots(4, 16, 1)) bases.push_back(zc_generate(16, r));
    const BasisSet set(bases);
    CHECK(set.users() == 4);
    CHECK(set.length() == 16);
    Rng rng(9);
    std::uniform_int_distribution<int> user(0, 3), shift(0, 15);
    for (int i = 0; i < 500; ++i) {
        const int u = user(rng), v = user(rng), a = shift(rng), b = shift(rng);
        CHECK(std::abs(set.psi(u, v, a, b) - cross_corr(bases[static_cast<std::size_t>(u)], bases[static_cast<std::size_t>(v)], a, b)) < 1e-12);
        const int s = shift(rng);
        CHECK(std::abs(set.psi(u, v, a, b) - set.psi(u, v, (a + s) % 16, (b + s) % 16)) < 1e-12);
    }
    CHECK(std::abs(set.row(2, 2)[0] - 1.0) < 1e-12);
    CHECK(code_of([] { BasisSet({zc_generate(16, 1), zc_generate(8, 1)}); }) == ErrorCode::length_mismatch);
}

TEST_CASE("number-theory helpers") {
    CHECK(is_power_of_two(1));
    CHECK(is_power_of_two(64));
    CHECK_FALSE(is_power_of_two(0));
    CHECK_FALSE(is_power_of_two(12));
    CHECK(is_prime(2));
    CHECK(is_prime(67));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(91));
}
