// SPDX-License-Identifier: Apache-2.0
#include "dsk/detect.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dsk/error.hpp"
#include "fft.hpp"

namespace dsk {

namespace {

inline int wrap(int k, int n) {
    k %= n;
    return k < 0 ? k + n : k;
}

// h_p e^{j2pi k_p l/(NM)} for every tap and every received symbol l.
struct TapCoefficients {
    int symbols = 0;
    std::vector<cplx> coef;  // [tap][l]
    double power = 0.0;

    TapCoefficients(const EsddChannel& ch, const FrameParams& params) : symbols(params.symbols) {
        const int grid = params.grid_size();
        coef.resize(ch.taps.size() * static_cast<std::size_t>(symbols));
        for (std::size_t p = 0; p < ch.taps.size(); ++p) {
            const Tap& t = ch.taps[p];
            for (int l = 0; l < symbols; ++l) {
                coef[p * static_cast<std::size_t>(symbols) + static_cast<std::size_t>(l)] =
                    t.gain * std::polar(1.0, 2.0 * std::numbers::pi * t.doppler * l / grid);
            }
            power += std::norm(t.gain);
        }
    }

    cplx at(std::size_t p, int l) const { return coef[p * static_cast<std::size_t>(symbols) + static_cast<std::size_t>(l)]; }
};

void require_taps(const EsddChannel& ch, const FrameParams& params) {
    for (const Tap& t : ch.taps) {
        if (t.delay < 0 || t.delay > params.max_delay) {
            throw Error(ErrorCode::invalid_dimension,
                        "tap delay " + std::to_string(t.delay) + " exceeds the zero padding");
        }
    }
}

// Strict '>' keeps the lowest index on ties.
template <typename F>
int argmax_abs(int count, F&& value) {
    int best = 0;
    double best_mag = -1.0;
    for (int k = 0; k < count; ++k) {
        const double mag = std::norm(value(k));
        if (mag > best_mag) {
            best_mag = mag;
            best = k;
        }
    }
    return best;
}

// Plain MRC over the P observations of each hypothesis.
std::vector<int> mrc_initial(const DDFrame& r, const EsddChannel& ch, const TapCoefficients& tc,
                             const FrameParams& params, DetectorTrace& trace) {
    const int n = params.subcarriers;
    const double inv_power = tc.power > 0.0 ? 1.0 / tc.power : 0.0;
    std::vector<int> est(static_cast<std::size_t>(params.data_symbols));
    for (int l = 0; l < params.data_symbols; ++l) {
        est[static_cast<std::size_t>(l)] = argmax_abs(params.usable_subcarriers, [&](int k) {
            cplx c{};
            for (std::size_t p = 0; p < ch.taps.size(); ++p) {
                const Tap& t = ch.taps[p];
                const int lo = l + t.delay;
                c += std::conj(tc.at(p, lo)) * r(wrap(k + t.doppler, n), lo);
            }
            return c * inv_power;
        });
        trace.hypotheses += static_cast<std::uint64_t>(params.usable_subcarriers);
        trace.observations_read += static_cast<std::uint64_t>(params.usable_subcarriers) * ch.taps.size();
    }
    return est;
}

DskSymbols as_symbols(const std::vector<int>& est) { return DskSymbols{est}; }

}  // namespace

DDFrame correlate_rx(const DDFrame& y, std::span<const cplx> basis) {
    const int n = y.subcarriers();
    if (static_cast<int>(basis.size()) != n) {
        throw Error(ErrorCode::length_mismatch, "basis length " + std::to_string(basis.size()) +
                                                    " vs " + std::to_string(n) + " subcarriers");
    }
    // Circular cross-correlation through the DFT: R = conj(Z) Y.
    std::vector<cplx> spectrum;
    detail::unitary_dft(basis, spectrum);
    const double scale = std::sqrt(static_cast<double>(n));
    DDFrame r(n, y.symbols());
    std::vector<cplx> col_f;
    std::vector<cplx> out;
    for (int l = 0; l < y.symbols(); ++l) {
        detail::unitary_dft(y.column(l), col_f);
        for (int f = 0; f < n; ++f) col_f[static_cast<std::size_t>(f)] *= std::conj(spectrum[static_cast<std::size_t>(f)]) * scale;
        detail::unitary_idft(col_f, out);
        std::copy(out.begin(), out.end(), r.column(l).begin());
    }
    return r;
}

SensingMatrix build_sensing_matrix(const EsddChannel& channel, const FrameParams& params) {
    require_taps(channel, params);
    const int n = params.subcarriers;
    const int usable = params.usable_subcarriers;
    const TapCoefficients tc(channel, params);
    SensingMatrix a;
    a.rows = params.grid_size();
    a.cols = usable * params.data_symbols;
    a.paths = static_cast<int>(channel.taps.size());
    a.row_index.resize(static_cast<std::size_t>(a.cols) * a.paths);
    a.value.resize(a.row_index.size());
    for (int l = 0; l < params.data_symbols; ++l) {
        for (int k = 0; k < usable; ++k) {
            const std::size_t base = static_cast<std::size_t>(k + l * usable) * a.paths;
            for (std::size_t p = 0; p < channel.taps.size(); ++p) {
                const Tap& t = channel.taps[p];
                const int lo = l + t.delay;
                a.row_index[base + p] = wrap(k + t.doppler, n) + lo * n;
                a.value[base + p] = tc.at(p, lo);
            }
        }
    }
    return a;
}

double column_coherence(const SensingMatrix& a, int i, int j) {
    // Columns may repeat a row when two Dopplers alias mod N; merge first.
    auto merged = [&](int c) {
        std::vector<std::pair<int, cplx>> entries;
        const auto rows = a.column_rows(c);
        const auto vals = a.column_values(c);
        for (std::size_t p = 0; p < rows.size(); ++p) {
            auto it = std::find_if(entries.begin(), entries.end(), [&](const auto& e) { return e.first == rows[p]; });
            if (it == entries.end()) entries.emplace_back(rows[p], vals[p]);
            else it->second += vals[p];
        }
        return entries;
    };
    const auto ai = merged(i);
    const auto aj = merged(j);
    double ni = 0.0, nj = 0.0;
    for (const auto& e : ai) ni += std::norm(e.second);
    for (const auto& e : aj) nj += std::norm(e.second);
    if (ni <= 0.0 || nj <= 0.0) throw Error(ErrorCode::zero_column, "coherence of a zero column");
    cplx dot{};
    for (const auto& x : ai) {
        for (const auto& y : aj) {
            if (x.first == y.first) dot += std::conj(x.second) * y.second;
        }
    }
    return std::abs(dot) / std::sqrt(ni * nj);
}

DskSymbols mp_detect(const DDFrame& y, const SensingMatrix& a, const FrameParams& params, MpStats* stats) {
    require_shape(y, params);
    const int usable = params.usable_subcarriers;
    const int data = params.data_symbols;
    if (a.rows != params.grid_size() || a.cols != usable * data) {
        throw Error(ErrorCode::shape_mismatch, "sensing matrix does not match the frame");
    }
    std::vector<cplx> residual(y.data().begin(), y.data().end());
    std::vector<char> decided(static_cast<std::size_t>(data), 0);
    DskSymbols out;
    out.index.assign(static_cast<std::size_t>(data), 0);
    if (stats) {
        stats->macs.clear();
        stats->residual_norm.clear();
    }

    for (int pick = 0; pick < data; ++pick) {
        int best = -1;
        double best_mag = -1.0;
        std::uint64_t macs = 0;
        for (int l = 0; l < data; ++l) {
            if (decided[static_cast<std::size_t>(l)]) continue;
            for (int k = 0; k < usable; ++k) {
                const int j = k + l * usable;
                const auto rows = a.column_rows(j);
                const auto vals = a.column_values(j);
                cplx g{};
                for (std::size_t p = 0; p < rows.size(); ++p) g += std::conj(vals[p]) * residual[static_cast<std::size_t>(rows[p])];
                macs += rows.size();
                const double mag = std::norm(g);
                if (mag > best_mag) {
                    best_mag = mag;
                    best = j;
                }
            }
        }
        const auto rows = a.column_rows(best);
        const auto vals = a.column_values(best);
        for (std::size_t p = 0; p < rows.size(); ++p) residual[static_cast<std::size_t>(rows[p])] -= vals[p];
        const int l = best / usable;
        out.index[static_cast<std::size_t>(l)] = best - l * usable;
        decided[static_cast<std::size_t>(l)] = 1;
        if (stats) {
            double norm = 0.0;
            for (const cplx& v : residual) norm += std::norm(v);
            stats->macs.push_back(macs);
            stats->residual_norm.push_back(std::sqrt(norm));
        }
    }
    return out;
}

P2pDetection sic_mrc_p2p(const DDFrame& r, const EsddChannel& channel, const FrameParams& params,
                         const DetectorOptions& opts) {
    require_shape(r, params);
    require_taps(channel, params);
    const int n = params.subcarriers;
    const int usable = params.usable_subcarriers;
    const int data = params.data_symbols;
    const TapCoefficients tc(channel, params);
    const double inv_power = tc.power > 0.0 ? 1.0 / tc.power : 0.0;
    const auto& taps = channel.taps;

    P2pDetection out;
    DetectorTrace& trace = out.trace;
    std::vector<int> est = mrc_initial(r, channel, tc, params, trace);
    trace.estimates.push_back({as_symbols(est)});
    trace.changed.push_back(data);
    trace.iterations = 1;

    std::vector<int> prev;
    for (int it = 2; it <= opts.max_iterations; ++it) {
        prev = est;
        // Successive: cancellation sees estimates updated earlier in this pass.
        const std::vector<int>& ref = opts.schedule == Schedule::parallel ? prev : est;
        int changed = 0;
        for (int l = 0; l < data; ++l) {
            const int decision = argmax_abs(usable, [&](int k) {
                cplx c{};
                for (std::size_t p = 0; p < taps.size(); ++p) {
                    const int lo = l + taps[p].delay;
                    const int ko = wrap(k + taps[p].doppler, n);
                    cplx b = r(ko, lo);
                    for (std::size_t q = 0; q < taps.size(); ++q) {
                        if (q == p) continue;
                        const int ls = lo - taps[q].delay;
                        if (ls < 0 || ls >= data) continue;
                        if (wrap(ko - taps[q].doppler - ref[static_cast<std::size_t>(ls)], n) == 0) b -= tc.at(q, lo);
                    }
                    c += std::conj(tc.at(p, lo)) * b;
                }
                return c * inv_power;
            });
            trace.hypotheses += static_cast<std::uint64_t>(usable);
            trace.observations_read += static_cast<std::uint64_t>(usable) * taps.size();
            if (decision != prev[static_cast<std::size_t>(l)]) ++changed;
            est[static_cast<std::size_t>(l)] = decision;
        }
        if (changed == 0) {
            trace.converged = true;
            break;
        }
        trace.estimates.push_back({as_symbols(est)});
        trace.changed.push_back(changed);
        trace.iterations = it;
    }
    out.symbols = as_symbols(est);
    return out;
}

MuDetection sic_mrc_mu(std::span<const DDFrame> r_all, std::span<const EsddChannel> channels,
                       const BasisSet& basis, const FrameParams& params, const DetectorOptions& opts) {
    const int users = static_cast<int>(r_all.size());
    if (users < 1 || static_cast<int>(channels.size()) != users || basis.users() != users) {
        throw Error(ErrorCode::inconsistent_user_count,
                    std::to_string(r_all.size()) + " observations, " + std::to_string(channels.size()) +
                        " channels, " + std::to_string(basis.users()) + " bases");
    }
    if (basis.length() != params.subcarriers) throw Error(ErrorCode::length_mismatch, "basis length");
    const int n = params.subcarriers;
    const int usable = params.usable_subcarriers;
    const int data = params.data_symbols;
    const std::size_t grid = static_cast<std::size_t>(params.grid_size());

    std::vector<TapCoefficients> tcs;
    tcs.reserve(static_cast<std::size_t>(users));
    for (int u = 0; u < users; ++u) {
        require_shape(r_all[static_cast<std::size_t>(u)], params);
        require_taps(channels[static_cast<std::size_t>(u)], params);
        tcs.emplace_back(channels[static_cast<std::size_t>(u)], params);
    }

    MuDetection out;
    DetectorTrace& trace = out.trace;
    std::vector<std::vector<int>> est(static_cast<std::size_t>(users));
    for (int u = 0; u < users; ++u) {
        est[static_cast<std::size_t>(u)] = mrc_initial(r_all[static_cast<std::size_t>(u)], channels[static_cast<std::size_t>(u)],
                                  tcs[static_cast<std::size_t>(u)], params, trace);
    }
    auto snapshot = [&] {
        std::vector<DskSymbols> s;
        for (const auto& e : est) s.push_back(as_symbols(e));
        return s;
    };
    trace.estimates.push_back(snapshot());
    trace.changed.push_back(users * data);
    trace.iterations = 1;

    // interference[u][k + l N]: everything user u's correlator would see if all
    // current estimates were the transmitted indices.
    std::vector<std::vector<cplx>> interference(static_cast<std::size_t>(users), std::vector<cplx>(grid));
    auto deposit = [&](int v, int l, int index, double sign) {
        const auto& taps = channels[static_cast<std::size_t>(v)].taps;
        for (std::size_t q = 0; q < taps.size(); ++q) {
            const int lo = l + taps[q].delay;
            const cplx coef = sign * tcs[static_cast<std::size_t>(v)].at(q, lo);
            const int offset = taps[q].doppler + index;
            for (int u = 0; u < users; ++u) {
                const auto row = basis.row(u, v);
                cplx* dst = interference[static_cast<std::size_t>(u)].data() + static_cast<std::size_t>(lo) * n;
                for (int k = 0; k < n; ++k) dst[k] += coef * row[static_cast<std::size_t>(wrap(k - offset, n))];
            }
        }
    };
    for (int v = 0; v < users; ++v) {
        for (int l = 0; l < data; ++l) deposit(v, l, est[static_cast<std::size_t>(v)][static_cast<std::size_t>(l)], 1.0);
    }

    auto decide = [&](int u, int l) {
        const DDFrame& r = r_all[static_cast<std::size_t>(u)];
        const auto& taps = channels[static_cast<std::size_t>(u)].taps;
        const TapCoefficients& tc = tcs[static_cast<std::size_t>(u)];
        const std::vector<cplx>& interf = interference[static_cast<std::size_t>(u)];
        const auto self = basis.row(u, u);
        const int current = est[static_cast<std::size_t>(u)][static_cast<std::size_t>(l)];
        const double inv_power = tc.power > 0.0 ? 1.0 / tc.power : 0.0;
        trace.hypotheses += static_cast<std::uint64_t>(usable);
        trace.observations_read += static_cast<std::uint64_t>(usable) * taps.size();
        return argmax_abs(usable, [&](int k) {
            // Own contribution through path p is added back, since only the
            // other paths and the other users are cancelled.
            const cplx own = self[static_cast<std::size_t>(wrap(k - current, n))];
            cplx c{};
            for (std::size_t p = 0; p < taps.size(); ++p) {
                const int lo = l + taps[p].delay;
                const std::size_t obs = static_cast<std::size_t>(wrap(k + taps[p].doppler, n) + lo * n);
                const cplx coef = tc.at(p, lo);
                const cplx b = r.data()[obs] - interf[obs] + coef * own;
                c += std::conj(coef) * b;
            }
            return c * inv_power;
        });
    };

    std::vector<std::vector<int>> next;
    for (int it = 2; it <= opts.max_iterations; ++it) {
        int changed = 0;
        if (opts.schedule == Schedule::parallel) {
            next = est;
            for (int l = 0; l < data; ++l) {
                for (int u = 0; u < users; ++u) next[static_cast<std::size_t>(u)][static_cast<std::size_t>(l)] = decide(u, l);
            }
            for (int u = 0; u < users; ++u) {
                for (int l = 0; l < data; ++l) {
                    const int old_idx = est[static_cast<std::size_t>(u)][static_cast<std::size_t>(l)];
                    const int new_idx = next[static_cast<std::size_t>(u)][static_cast<std::size_t>(l)];
                    if (old_idx == new_idx) continue;
                    ++changed;
                    deposit(u, l, old_idx, -1.0);
                    deposit(u, l, new_idx, 1.0);
                }
            }
            est.swap(next);
        } else {
            for (int l = 0; l < data; ++l) {
                for (int u = 0; u < users; ++u) {
                    const int old_idx = est[static_cast<std::size_t>(u)][static_cast<std::size_t>(l)];
                    const int new_idx = decide(u, l);
                    if (old_idx == new_idx) continue;
                    ++changed;
                    deposit(u, l, old_idx, -1.0);
                    deposit(u, l, new_idx, 1.0);
                    est[static_cast<std::size_t>(u)][static_cast<std::size_t>(l)] = new_idx;
                }
            }
        }
        if (changed == 0) {
            trace.converged = true;
            break;
        }
        trace.estimates.push_back(snapshot());
        trace.changed.push_back(changed);
        trace.iterations = it;
    }
    for (const auto& e : est) out.symbols.push_back(as_symbols(e));
    return out;
}

std::vector<BitBlock> lmmse_bpsk(const DDFrame& y, std::span<const EsddChannel> channels,
                                 std::span<const BpskPlacement> placements, const FrameParams& params,
                                 double noise_variance) {
    using SpMat = Eigen::SparseMatrix<cplx>;
    using Vec = Eigen::VectorXcd;
    require_shape(y, params);
    if (channels.size() != placements.size() || channels.empty()) {
        throw Error(ErrorCode::inconsistent_user_count, "channels and placements differ in count");
    }
    const int n = params.subcarriers;
    const int data = params.data_symbols;

    std::vector<int> offset(channels.size() + 1, 0);
    for (std::size_t u = 0; u < channels.size(); ++u) {
        require_taps(channels[u], params);
        offset[u + 1] = offset[u] + static_cast<int>(placements[u].subcarriers.size()) * data;
    }
    const int unknowns = offset.back();

    std::vector<Eigen::Triplet<cplx>> entries;
    for (std::size_t u = 0; u < channels.size(); ++u) {
        const TapCoefficients tc(channels[u], params);
        const BpskPlacement& pl = placements[u];
        const int width = static_cast<int>(pl.subcarriers.size());
        for (int l = 0; l < data; ++l) {
            for (int i = 0; i < width; ++i) {
                const int col = offset[u] + l * width + i;
                for (std::size_t p = 0; p < channels[u].taps.size(); ++p) {
                    const Tap& t = channels[u].taps[p];
                    const int lo = l + t.delay;
                    const int row = wrap(pl.subcarriers[static_cast<std::size_t>(i)] + t.doppler, n) + lo * n;
                    entries.emplace_back(row, col, pl.amplitude * tc.at(p, lo));
                }
            }
        }
    }
    SpMat h(params.grid_size(), unknowns);
    h.setFromTriplets(entries.begin(), entries.end());

    const Eigen::Map<const Vec> obs(y.data().data(), params.grid_size());
    const Vec rhs = h.adjoint() * obs;
    SpMat gram = SpMat(h.adjoint()) * h;

    Vec estimate;
    if (noise_variance > 0.0) {
        SpMat eye(unknowns, unknowns);
        eye.setIdentity();
        gram += noise_variance * eye;
        Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper> cg;
        cg.setTolerance(1e-10);
        cg.setMaxIterations(4 * unknowns);
        cg.compute(gram);
        estimate = cg.solve(rhs);
    } else {
        Eigen::SimplicialLDLT<SpMat> ldlt;
        ldlt.compute(gram);
        const auto d = ldlt.vectorD();
        const double dmax = d.size() ? d.cwiseAbs().maxCoeff() : 0.0;
        if (ldlt.info() != Eigen::Success || d.size() == 0 || d.cwiseAbs().minCoeff() <= 1e-12 * dmax) {
            throw Error(ErrorCode::singular_system, "zero-forcing system is rank deficient");
        }
        estimate = ldlt.solve(rhs);
    }

    std::vector<BitBlock> bits(channels.size());
    for (std::size_t u = 0; u < channels.size(); ++u) {
        bits[u].resize(static_cast<std::size_t>(offset[u + 1] - offset[u]));
        for (int j = offset[u]; j < offset[u + 1]; ++j) {
            bits[u][static_cast<std::size_t>(j - offset[u])] = estimate[j].real() < 0.0 ? 1 : 0;
        }
    }
    return bits;
}

}  // namespace dsk
