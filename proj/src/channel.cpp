// SPDX-License-Identifier: Apache-2.0
#include "dsk/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dsk/error.hpp"

namespace dsk {

namespace {

inline int wrap(int k, int n) {
    k %= n;
    return k < 0 ? k + n : k;
}

inline cplx doppler_phase(int doppler, double time_bins, int grid) {
    return std::polar(1.0, 2.0 * std::numbers::pi * doppler * time_bins / grid);
}

}  // namespace

double EsddChannel::power() const {
    double p = 0.0;
    for (const Tap& t : taps) p += std::norm(t.gain);
    return p;
}

NoiseSpec NoiseSpec::from_snr_db(double snr_db, int bits_per_symbol) {
    NoiseSpec n;
    n.snr_linear = std::pow(10.0, snr_db / 10.0);
    n.variance = 1.0 / (bits_per_symbol * n.snr_linear);
    return n;
}

EsddChannel draw_channel(Rng& rng, int paths, int max_delay, int max_doppler) {
    const long capacity = static_cast<long>(max_delay + 1) * (2L * max_doppler + 1);
    if (paths < 1 || paths > capacity || max_delay < 0 || max_doppler < 0) {
        throw Error(ErrorCode::infeasible_taps,
                    std::to_string(paths) + " taps on a grid of " + std::to_string(capacity) + " pairs");
    }
    std::uniform_int_distribution<int> delay(0, max_delay);
    std::uniform_int_distribution<int> doppler(-max_doppler, max_doppler);
    EsddChannel ch;
    ch.taps.reserve(static_cast<std::size_t>(paths));
    while (static_cast<int>(ch.taps.size()) < paths) {
        Tap t;
        t.delay = delay(rng);
        t.doppler = doppler(rng);
        const bool taken = std::any_of(ch.taps.begin(), ch.taps.end(), [&](const Tap& o) {
            return o.delay == t.delay && o.doppler == t.doppler;
        });
        if (!taken) ch.taps.push_back(t);
    }
    for (Tap& t : ch.taps) t.gain = complex_gaussian(rng, 1.0 / paths);
    return ch;
}

DDFrame apply_dd(std::span<const DDFrame> frames, std::span<const EsddChannel> channels,
                 const FrameParams& params) {
    if (frames.size() != channels.size()) {
        throw Error(ErrorCode::list_length_mismatch,
                    std::to_string(frames.size()) + " frames vs " + std::to_string(channels.size()) + " channels");
    }
    const int n_sub = params.subcarriers;
    const int grid = params.grid_size();
    DDFrame y(n_sub, params.symbols);
    for (std::size_t u = 0; u < frames.size(); ++u) {
        const DDFrame& x = frames[u];
        require_shape(x, params);
        for (const Tap& tap : channels[u].taps) {
            const int first = tap.delay;
            const int last = std::min(params.symbols - 1, tap.delay + params.data_symbols - 1);
            for (int l = first; l <= last; ++l) {
                const cplx coef = tap.gain * doppler_phase(tap.doppler, l, grid);
                const auto src = x.column(l - tap.delay);
                auto dst = y.column(l);
                for (int k = 0; k < n_sub; ++k) {
                    dst[static_cast<std::size_t>(k)] += coef * src[static_cast<std::size_t>(wrap(k - tap.doppler, n_sub))];
                }
            }
        }
    }
    return y;
}

DDFrame apply_dd(const DDFrame& frame, const EsddChannel& channel, const FrameParams& params) {
    return apply_dd(std::span<const DDFrame>(&frame, 1), std::span<const EsddChannel>(&channel, 1), params);
}

Waveform apply_time(const Waveform& s, const EsddChannel& channel, const FrameParams& params,
                    const PulseConfig& pulse) {
    const int per_chip = pulse.samples_per_chip();
    const int grid = params.grid_size();
    Waveform r = s;
    std::fill(r.samples.begin(), r.samples.end(), cplx{});
    const int len = static_cast<int>(s.samples.size());
    for (const Tap& tap : channel.taps) {
        const int shift = tap.delay * per_chip;
        for (int i = shift; i < len; ++i) {
            const double t = static_cast<double>(i - s.lead) / per_chip;
            r.samples[static_cast<std::size_t>(i)] +=
                tap.gain * doppler_phase(tap.doppler, t, grid) * s.samples[static_cast<std::size_t>(i - shift)];
        }
    }
    return r;
}

DDFrame add_awgn(DDFrame y, double variance, Rng& rng) {
    if (variance <= 0.0) return y;
    for (cplx& v : y.data()) v += complex_gaussian(rng, variance);
    return y;
}

EsddChannel perturb_csi(const EsddChannel& channel, double error_variance, Rng& rng) {
    EsddChannel out = channel;
    if (error_variance <= 0.0) return out;
    for (Tap& t : out.taps) t.gain += complex_gaussian(rng, error_variance);
    return out;
}

}  // namespace dsk
