// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dsk/channel.hpp"
#include "dsk/ddgrid.hpp"
#include "dsk/seqs.hpp"
#include "dsk/txmap.hpp"

namespace dsk {

/// Per-symbol circular correlation with the basis:
/// r[k,l] = sum_ky conj(z[(ky - k)_N]) y[ky, l].
DDFrame correlate_rx(const DDFrame& y, std::span<const cplx> basis);
inline DDFrame correlate_rx(const DDFrame& y, const ZcBasis& basis) {
    return correlate_rx(y, basis.seq);
}

/// Sparse (N M) x (N' M') matrix mapping one-hot symbol vectors to the
/// received grid. Column k' + l' N' has one entry per tap at row
/// (k' + k_p)_N + (l' + l_p) N with value h_p e^{j2pi k_p (l' + l_p)/(NM)}.
struct SensingMatrix {
    int rows = 0;
    int cols = 0;
    int paths = 0;
    std::vector<int> row_index;  // cols * paths, column-major
    std::vector<cplx> value;

    std::span<const int> column_rows(int j) const {
        return {row_index.data() + static_cast<std::size_t>(j) * paths, static_cast<std::size_t>(paths)};
    }
    std::span<const cplx> column_values(int j) const {
        return {value.data() + static_cast<std::size_t>(j) * paths, static_cast<std::size_t>(paths)};
    }
};

SensingMatrix build_sensing_matrix(const EsddChannel& channel, const FrameParams& params);

/// |a_i^H a_j| / (|a_i| |a_j|). Throws Error(zero_column).
double column_coherence(const SensingMatrix& a, int i, int j);

struct MpStats {
    std::vector<std::uint64_t> macs;     // multiply-accumulates per greedy pick
    std::vector<double> residual_norm;   // |r| after each pick
};

/// Greedy matching pursuit: one pick per data symbol, restricted to symbols
/// not yet decided, residual updated with the unscaled column.
DskSymbols mp_detect(const DDFrame& y, const SensingMatrix& a, const FrameParams& params,
                     MpStats* stats = nullptr);

enum class Schedule { successive, parallel };

struct DetectorOptions {
    int max_iterations = 5;
    Schedule schedule = Schedule::successive;
};

/// Iteration 1 is the plain MRC initialisation; each later iteration is one
/// full cancellation pass. A pass that changes nothing ends the run and is not
/// recorded.
struct DetectorTrace {
    std::vector<std::vector<DskSymbols>> estimates;  // [iteration][user]
    std::vector<int> changed;                        // estimates changed in iteration i (all of them for i = 0)
    int iterations = 0;
    bool converged = false;
    std::uint64_t hypotheses = 0;
    std::uint64_t observations_read = 0;
};

struct P2pDetection {
    DskSymbols symbols;
    DetectorTrace trace;
};

struct MuDetection {
    std::vector<DskSymbols> symbols;
    DetectorTrace trace;
};

/// Iterative SIC-MRC on a single-user observation `r` (the demodulated grid
/// for one-hot frames, the correlate_rx output for sequence frames).
P2pDetection sic_mrc_p2p(const DDFrame& r, const EsddChannel& channel, const FrameParams& params,
                         const DetectorOptions& opts = {});

/// Multi-user iterative SIC-MRC. `r_all[u]` is y correlated with user u's
/// basis. Intra- and inter-user interference is rebuilt from the current
/// estimates through the basis cross-correlations.
MuDetection sic_mrc_mu(std::span<const DDFrame> r_all, std::span<const EsddChannel> channels,
                       const BasisSet& basis, const FrameParams& params,
                       const DetectorOptions& opts = {});

/// Linear MMSE detection of BPSK frames. Unknowns are the placed entries of
/// every user; the model is the grid-domain input-output relation. Returns hard
/// bits per user. Throws Error(singular_system) when noise_variance == 0 and
/// the system is rank deficient.
std::vector<BitBlock> lmmse_bpsk(const DDFrame& y, std::span<const EsddChannel> channels,
                                 std::span<const BpskPlacement> placements,
                                 const FrameParams& params, double noise_variance);

}  // namespace dsk
