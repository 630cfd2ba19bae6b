// SPDX-License-Identifier: Apache-2.0
#include "dsk/seqs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <string>

#include "dsk/error.hpp"
#include "dsk/rng.hpp"

namespace dsk {

namespace {

inline int wrap(long long k, int n) {
    long long r = k % n;
    return static_cast<int>(r < 0 ? r + n : r);
}

// e^{j pi a / n} with a reduced mod 2n first, so large exponents stay exact.
inline cplx half_turn_phase(long long a, int n) {
    const long long two_n = 2LL * n;
    long long r = a % two_n;
    if (r < 0) r += two_n;
    return std::polar(1.0, std::numbers::pi * static_cast<double>(r) / n);
}

void require_power_of_two(int n, const char* what) {
    if (!is_power_of_two(n)) {
        throw Error(ErrorCode::out_of_scope_n, std::string(what) + " needs a power-of-two length, got " + std::to_string(n));
    }
}

// Peak |psi_{a,b}|^2 over all shift pairs in [0, usable)^2, by direct summation.
double pair_peak(const ZcBasis& a, const ZcBasis& b, const std::vector<int>& diffs) {
    double peak = 0.0;
    for (int d : diffs) peak = std::max(peak, std::norm(cross_corr(a, b, d, 0)));
    return peak;
}

std::vector<int> shift_differences(int length, int usable) {
    std::set<int> diffs;
    for (int d = -(usable - 1); d <= usable - 1; ++d) diffs.insert(wrap(d, length));
    return {diffs.begin(), diffs.end()};
}

}  // namespace

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

bool is_prime(int n) {
    if (n < 2) return false;
    for (int d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

ZcBasis zc_generate(int length, int root) {
    if (length < 1 || root <= 0 || root >= length || std::gcd(root, length) != 1) {
        throw Error(ErrorCode::root_not_coprime,
                    "root " + std::to_string(root) + " is not a unit mod " + std::to_string(length));
    }
    ZcBasis z;
    z.length = length;
    z.root = root;
    z.seq.resize(static_cast<std::size_t>(length));
    const double amp = 1.0 / std::sqrt(static_cast<double>(length));
    const bool even = length % 2 == 0;
    for (long long k = 0; k < length; ++k) {
        const long long e = even ? root * k * k : root * k * (k + 1);
        z.seq[static_cast<std::size_t>(k)] = amp * half_turn_phase(e, length);
    }
    return z;
}

cplx cross_corr(const ZcBasis& a, const ZcBasis& b, int shift_a, int shift_b) {
    if (a.length != b.length) {
        throw Error(ErrorCode::length_mismatch,
                    std::to_string(a.length) + " vs " + std::to_string(b.length));
    }
    const int n = a.length;
    cplx acc{};
    for (int k = 0; k < n; ++k) {
        acc += std::conj(a.seq[static_cast<std::size_t>(wrap(k - shift_a, n))]) *
               b.seq[static_cast<std::size_t>(wrap(k - shift_b, n))];
    }
    return acc;
}

double cross_power_closed(int length, int root_a, int root_b, int shift_a, int shift_b) {
    require_power_of_two(length, "cross_power_closed");
    if (std::gcd(root_a, length) != 1 || std::gcd(root_b, length) != 1) {
        throw Error(ErrorCode::root_not_coprime, "roots must be odd");
    }
    const int c = std::gcd(wrap(static_cast<long long>(root_b) - root_a, length), length);
    const int residue = wrap(static_cast<long long>(shift_a) * root_a - static_cast<long long>(shift_b) * root_b, length);
    return residue % c == 0 ? static_cast<double>(c) / length : 0.0;
}

cplx chirp_autocorr(int length, int root_diff, int lag) {
    require_power_of_two(length, "chirp_autocorr");
    if (wrap(static_cast<long long>(lag) * root_diff, length) != 0) return {};
    return half_turn_phase(-static_cast<long long>(root_diff) * lag * lag, length);
}

std::vector<int> allocate_roots(int users, int length, int first_root, std::uint64_t seed) {
    if (users < 1) throw Error(ErrorCode::invalid_dimension, "need at least one user");
    if (is_power_of_two(length)) {
        if (first_root % 2 == 0) {
            throw Error(ErrorCode::even_m0, "first root " + std::to_string(first_root) + " is even");
        }
        if (first_root <= 0 || first_root + 2 * (users - 1) >= length) {
            throw Error(ErrorCode::too_many_users,
                        std::to_string(users) + " users starting at root " + std::to_string(first_root) +
                            " do not fit below " + std::to_string(length));
        }
        std::vector<int> roots(static_cast<std::size_t>(users));
        for (int u = 0; u < users; ++u) roots[static_cast<std::size_t>(u)] = first_root + 2 * u;
        return roots;
    }
    if (is_prime(length)) {
        if (users > length - 1) throw Error(ErrorCode::too_many_users, "not enough roots");
        std::vector<int> pool(static_cast<std::size_t>(length - 1));
        std::iota(pool.begin(), pool.end(), 1);
        Rng rng = stream_rng(seed, 0x726f6f7473ULL);
        std::shuffle(pool.begin(), pool.end(), rng);
        pool.resize(static_cast<std::size_t>(users));
        std::sort(pool.begin(), pool.end());
        return pool;
    }
    throw Error(ErrorCode::out_of_scope_n, "root allocation needs a power-of-two or prime length");
}

double PsiMetrics::psi_max() const { return std::sqrt(peak_power()); }

PsiMetrics psi_metrics(std::span<const int> roots, int length, int usable) {
    if (!is_power_of_two(length) && !is_prime(length)) {
        throw Error(ErrorCode::out_of_scope_n, "psi_metrics needs a power-of-two or prime length");
    }
    std::vector<ZcBasis> bases;
    for (int m : roots) bases.push_back(zc_generate(length, m));
    for (std::size_t i = 0; i < roots.size(); ++i) {
        for (std::size_t j = i + 1; j < roots.size(); ++j) {
            if (roots[i] == roots[j]) throw Error(ErrorCode::root_not_coprime, "duplicate root");
        }
    }
    const std::vector<int> diffs = shift_differences(length, usable);
    const int users = static_cast<int>(roots.size());

    PsiMetrics m;
    m.peak_den = length;
    m.pair_peak_num.assign(static_cast<std::size_t>(users), std::vector<int>(static_cast<std::size_t>(users), 0));
    for (int u = 0; u < users; ++u) {
        for (int v = u + 1; v < users; ++v) {
            const double peak = pair_peak(bases[static_cast<std::size_t>(u)], bases[static_cast<std::size_t>(v)], diffs);
            const int num = static_cast<int>(std::lround(peak * length));
            m.pair_peak_num[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = num;
            m.pair_peak_num[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] = num;
            if (num > m.peak_num) {
                m.peak_num = num;
                m.attaining_pairs = 1;
            } else if (num == m.peak_num && num > 0) {
                ++m.attaining_pairs;
            }
        }
    }
    return m;
}

RootSearch brute_force_roots(int users, int length, int usable) {
    require_power_of_two(length, "brute_force_roots");
    const int odd = length / 2;
    if (users < 1 || users > odd) {
        throw Error(ErrorCode::too_many_users,
                    std::to_string(users) + " users but only " + std::to_string(odd) + " odd roots");
    }
    std::vector<int> candidates(static_cast<std::size_t>(odd));
    for (int i = 0; i < odd; ++i) candidates[static_cast<std::size_t>(i)] = 2 * i + 1;

    // Pairwise peaks over all candidate roots, each measured once.
    const std::vector<int> diffs = shift_differences(length, usable);
    std::vector<ZcBasis> bases;
    for (int m : candidates) bases.push_back(zc_generate(length, m));
    std::vector<std::vector<int>> peak(static_cast<std::size_t>(odd), std::vector<int>(static_cast<std::size_t>(odd), 0));
    for (int a = 0; a < odd; ++a) {
        for (int b = a + 1; b < odd; ++b) {
            const int num = static_cast<int>(std::lround(pair_peak(bases[static_cast<std::size_t>(a)], bases[static_cast<std::size_t>(b)], diffs) * length));
            peak[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = num;
            peak[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = num;
        }
    }

    // Lexicographic enumeration of index combinations.
    std::vector<int> pick(static_cast<std::size_t>(users));
    std::iota(pick.begin(), pick.end(), 0);
    std::vector<int> best;
    int best_peak = 0;
    int best_pairs = 0;
    while (true) {
        int worst = 0;
        int pairs = 0;
        for (int i = 0; i < users; ++i) {
            for (int j = i + 1; j < users; ++j) {
                const int v = peak[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])][static_cast<std::size_t>(pick[static_cast<std::size_t>(j)])];
                if (v > worst) {
                    worst = v;
                    pairs = 1;
                } else if (v == worst && v > 0) {
                    ++pairs;
                }
            }
        }
        if (best.empty() || worst < best_peak || (worst == best_peak && pairs < best_pairs)) {
            best = pick;
            best_peak = worst;
            best_pairs = pairs;
        }
        int i = users - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == odd - users + i) --i;
        if (i < 0) break;
        ++pick[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < users; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }

    RootSearch out;
    for (int idx : best) out.roots.push_back(candidates[static_cast<std::size_t>(idx)]);
    out.metrics = psi_metrics(out.roots, length, usable);
    return out;
}

BasisSet::BasisSet(std::vector<ZcBasis> users) : users_(std::move(users)) {
    if (users_.empty()) throw Error(ErrorCode::inconsistent_user_count, "empty basis set");
    length_ = users_.front().length;
    for (const ZcBasis& z : users_) {
        if (z.length != length_) throw Error(ErrorCode::length_mismatch, "basis lengths differ");
    }
    const std::size_t k = users_.size();
    table_.resize(k * k * static_cast<std::size_t>(length_));
    for (std::size_t u = 0; u < k; ++u) {
        for (std::size_t v = 0; v < k; ++v) {
            for (int d = 0; d < length_; ++d) {
                table_[index(static_cast<int>(u), static_cast<int>(v)) + static_cast<std::size_t>(d)] =
                    cross_corr(users_[u], users_[v], d, 0);
            }
        }
    }
}

}  // namespace dsk
