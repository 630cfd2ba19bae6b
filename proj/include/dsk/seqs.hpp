// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dsk/ddgrid.hpp"

namespace dsk {

/// Unit-power Zadoff-Chu sequence: |z[k]| = 1/sqrt(N), zero circular
/// autocorrelation at every non-zero lag.
struct ZcBasis {
    int length = 0;
    int root = 0;
    std::vector<cplx> seq;
};

/// z[k] = e^{j pi m k^2 / N} / sqrt(N) for even N, e^{j pi m k(k+1) / N} / sqrt(N)
/// for odd N. Throws Error(root_not_coprime) unless 0 < m < N and gcd(m, N) = 1.
ZcBasis zc_generate(int length, int root);

/// psi(k_a, k_b) = sum_k conj(a[(k - k_a)_N]) b[(k - k_b)_N], evaluated directly.
cplx cross_corr(const ZcBasis& a, const ZcBasis& b, int shift_a, int shift_b);

/// Closed-form |psi|^2 for power-of-two N: c/N when
/// ((k_a m_a - k_b m_b)_N)_c = 0 with c = gcd(m_b - m_a, N), else 0.
double cross_power_closed(int length, int root_a, int root_b, int shift_a, int shift_b);

/// Circular autocorrelation at `lag` of F[k] = e^{j pi dm k^2 / N} / sqrt(N),
/// in closed form e^{-j pi dm lag^2 / N} * delta[(lag * dm)_N].
cplx chirp_autocorr(int length, int root_diff, int lag);

bool is_power_of_two(int n);
bool is_prime(int n);

/// Roots for a multi-user basis set. Power-of-two N: the arithmetic
/// progression first_root, first_root + 2, ... (first_root must be odd).
/// Prime N: `users` distinct roots drawn from `seed`.
std::vector<int> allocate_roots(int users, int length, int first_root, std::uint64_t seed = 0);

/// Worst-case cross-correlation statistics of a root set, measured by
/// exhaustive evaluation over the shift range [0, usable)^2.
struct PsiMetrics {
    int peak_num = 0;         // max |psi|^2 = peak_num / peak_den
    int peak_den = 1;
    int attaining_pairs = 0;  // unordered user pairs whose peak reaches the max
    /// pair_peak_num[u][v]: peak |psi_{u,v}|^2 * N for u != v (0 on the diagonal)
    std::vector<std::vector<int>> pair_peak_num;

    double psi_max() const;
    double peak_power() const { return static_cast<double>(peak_num) / peak_den; }
};

PsiMetrics psi_metrics(std::span<const int> roots, int length, int usable);

struct RootSearch {
    std::vector<int> roots;
    PsiMetrics metrics;
};

/// Exhaustive search over every `users`-subset of odd roots in [1, N); returns
/// the lexicographically first subset minimising (peak, attaining pairs).
RootSearch brute_force_roots(int users, int length, int usable);

/// Basis sequences for all users plus the cross-correlation lookup.
///
/// psi_{u,v}(a, b) only depends on (a - b) mod N, so one row of N values per
/// ordered user pair is stored.
class BasisSet {
public:
    BasisSet() = default;
    explicit BasisSet(std::vector<ZcBasis> users);

    int users() const { return static_cast<int>(users_.size()); }
    int length() const { return length_; }
    const ZcBasis& basis(int u) const { return users_[static_cast<std::size_t>(u)]; }

    /// psi_{u,v}(a, b)
    cplx psi(int u, int v, int shift_u, int shift_v) const {
        int d = (shift_u - shift_v) % length_;
        if (d < 0) d += length_;
        return table_[index(u, v) + static_cast<std::size_t>(d)];
    }
    /// psi_{u,v}(d, 0) for d in [0, N)
    std::span<const cplx> row(int u, int v) const {
        return {table_.data() + index(u, v), static_cast<std::size_t>(length_)};
    }

private:
    std::size_t index(int u, int v) const {
        return (static_cast<std::size_t>(u) * users_.size() + static_cast<std::size_t>(v)) *
               static_cast<std::size_t>(length_);
    }

    std::vector<ZcBasis> users_;
    int length_ = 0;
    std::vector<cplx> table_;
};

}  // namespace dsk
