// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "dsk/ddgrid.hpp"
#include "dsk/modem.hpp"
#include "dsk/rng.hpp"

namespace dsk {

/// One on-grid path: complex gain, integer delay bin, integer Doppler bin.
struct Tap {
    cplx gain;
    int delay = 0;
    int doppler = 0;
};

struct EsddChannel {
    std::vector<Tap> taps;

    double power() const;
};

struct NoiseSpec {
    double snr_linear = 0.0;
    double variance = 0.0;

    /// variance = 1 / (bits_per_symbol * snr)
    static NoiseSpec from_snr_db(double snr_db, int bits_per_symbol);
};

/// `paths` taps with distinct (delay, Doppler) pairs drawn uniformly from
/// [0, max_delay] x [-max_doppler, max_doppler]; gains i.i.d. CN(0, 1/paths).
/// Throws Error(infeasible_taps) if the grid cannot hold that many pairs.
EsddChannel draw_channel(Rng& rng, int paths, int max_delay, int max_doppler);

/// Grid-domain input-output relation with zero padding, summed over users:
/// y[k,l] = sum_u sum_p h e^{j2pi k_p l/(NM)} I(l - l_p) x_u[(k - k_p)_N, l - l_p].
DDFrame apply_dd(std::span<const DDFrame> frames, std::span<const EsddChannel> channels,
                 const FrameParams& params);
DDFrame apply_dd(const DDFrame& frame, const EsddChannel& channel, const FrameParams& params);

/// Discrete-time channel r[i] = sum_p h_p e^{j2pi k_p t_i/(NM)} s[i - l_p L],
/// with t_i the time of sample i in delay bins relative to the frame start.
Waveform apply_time(const Waveform& s, const EsddChannel& channel, const FrameParams& params,
                    const PulseConfig& pulse);

/// Adds CN(0, variance) to every grid entry, zero-padding region included.
DDFrame add_awgn(DDFrame y, double variance, Rng& rng);

/// Channel-estimate model h' = h + e, e ~ CN(0, error_variance); indices kept.
EsddChannel perturb_csi(const EsddChannel& channel, double error_variance, Rng& rng);

}  // namespace dsk
