// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "dsk/ddgrid.hpp"

namespace dsk {

enum class PulseKind { critical_delta, rrc };

/// Sample-wise pulse used after the per-symbol IFFT.
///
/// `critical_delta` is one sample per delay bin with a unit pulse, which makes
/// the modem an exact unitary map and the waveform path bit-compatible with the
/// grid-domain channel. `rrc` is a square-root raised cosine truncated to
/// +/- half_len symbol intervals and sampled `oversample` times per interval.
struct PulseConfig {
    PulseKind kind = PulseKind::critical_delta;
    int oversample = 1;
    double rolloff = 0.1;
    int half_len = 8;

    static PulseConfig critical() { return {}; }
    static PulseConfig rrc(double rolloff = 0.1, int half_len = 8, int oversample = 8) {
        return {PulseKind::rrc, oversample, rolloff, half_len};
    }

    int span_samples() const { return kind == PulseKind::rrc ? half_len * oversample : 0; }
    int samples_per_chip() const { return kind == PulseKind::rrc ? oversample : 1; }
};

/// Unit-energy pulse taps, length 2 * half_len * oversample + 1 (a single 1.0
/// for critical_delta).
std::vector<double> pulse_taps(const PulseConfig& pulse);

/// Time samples of one frame. `lead` samples of pulse tail precede the nominal
/// frame start; the nominal frame spans `nominal_length` samples after that.
struct Waveform {
    std::vector<cplx> samples;
    int samples_per_chip = 1;
    int lead = 0;
    int nominal_length = 0;

    Waveform() = default;
    explicit Waveform(std::vector<cplx> s)
        : samples(std::move(s)), nominal_length(static_cast<int>(samples.size())) {}

    double energy() const;
};

/// Normalised N-point IFFT per symbol, chips placed at time l + n*M, then
/// pulse shaped.
Waveform modulate(const DDFrame& frame, const FrameParams& params, const PulseConfig& pulse);

/// Matched filter at each chip instant followed by the normalised N-point FFT.
DDFrame demodulate(const Waveform& rx, const FrameParams& params, const PulseConfig& pulse);

/// Peak-to-average power over the nominal frame window, in dB.
/// Throws Error(zero_energy) if the window carries no power.
double papr_db(const Waveform& s);

}  // namespace dsk
