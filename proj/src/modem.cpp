// SPDX-License-Identifier: Apache-2.0
#include "dsk/modem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dsk/error.hpp"
#include "fft.hpp"

namespace dsk {

namespace {

// Square-root raised cosine at time t in symbol intervals.
double rrc_value(double t, double beta) {
    constexpr double pi = std::numbers::pi;
    if (std::abs(t) < 1e-12) return 1.0 - beta + 4.0 * beta / pi;
    if (beta > 0.0 && std::abs(std::abs(t) - 1.0 / (4.0 * beta)) < 1e-9) {
        return beta / std::numbers::sqrt2 *
               ((1.0 + 2.0 / pi) * std::sin(pi / (4.0 * beta)) +
                (1.0 - 2.0 / pi) * std::cos(pi / (4.0 * beta)));
    }
    const double num = std::sin(pi * t * (1.0 - beta)) + 4.0 * beta * t * std::cos(pi * t * (1.0 + beta));
    const double den = pi * t * (1.0 - (4.0 * beta * t) * (4.0 * beta * t));
    return num / den;
}

int expected_length(const FrameParams& params, const PulseConfig& pulse) {
    const int chips = params.grid_size();
    return (chips - 1) * pulse.samples_per_chip() + 2 * pulse.span_samples() + 1;
}

}  // namespace

std::vector<double> pulse_taps(const PulseConfig& pulse) {
    if (pulse.kind == PulseKind::critical_delta) return {1.0};
    if (pulse.oversample < 1 || pulse.half_len < 1 || pulse.rolloff < 0.0 || pulse.rolloff > 1.0) {
        throw Error(ErrorCode::invalid_dimension, "rrc needs oversample >= 1, half_len >= 1, rolloff in [0,1]");
    }
    const int span = pulse.span_samples();
    std::vector<double> taps(static_cast<std::size_t>(2 * span + 1));
    double energy = 0.0;
    for (int j = -span; j <= span; ++j) {
        const double v = rrc_value(static_cast<double>(j) / pulse.oversample, pulse.rolloff);
        taps[static_cast<std::size_t>(j + span)] = v;
        energy += v * v;
    }
    const double scale = 1.0 / std::sqrt(energy);
    for (double& v : taps) v *= scale;
    return taps;
}

double Waveform::energy() const {
    double e = 0.0;
    for (const cplx& v : samples) e += std::norm(v);
    return e;
}

Waveform modulate(const DDFrame& frame, const FrameParams& params, const PulseConfig& pulse) {
    require_shape(frame, params);
    const int n_sub = params.subcarriers;
    const int n_sym = params.symbols;
    const int chips = params.grid_size();

    std::vector<cplx> chip(static_cast<std::size_t>(chips));
    std::vector<cplx> time;
    for (int l = 0; l < n_sym; ++l) {
        detail::unitary_idft(frame.column(l), time);
        for (int n = 0; n < n_sub; ++n) chip[static_cast<std::size_t>(l + n * n_sym)] = time[static_cast<std::size_t>(n)];
    }

    const std::vector<double> taps = pulse_taps(pulse);
    const int per_chip = pulse.samples_per_chip();
    Waveform out;
    out.samples.assign(static_cast<std::size_t>(expected_length(params, pulse)), cplx{});
    out.samples_per_chip = per_chip;
    out.lead = pulse.span_samples();
    out.nominal_length = chips * per_chip;
    for (int q = 0; q < chips; ++q) {
        const cplx c = chip[static_cast<std::size_t>(q)];
        if (c == cplx{}) continue;
        cplx* dst = out.samples.data() + static_cast<std::size_t>(q) * per_chip;
        for (std::size_t j = 0; j < taps.size(); ++j) dst[j] += c * taps[j];
    }
    return out;
}

DDFrame demodulate(const Waveform& rx, const FrameParams& params, const PulseConfig& pulse) {
    const int per_chip = pulse.samples_per_chip();
    if (rx.samples_per_chip != per_chip ||
        static_cast<int>(rx.samples.size()) < expected_length(params, pulse)) {
        throw Error(ErrorCode::shape_mismatch,
                    "waveform of " + std::to_string(rx.samples.size()) + " samples does not fit the frame");
    }
    const int n_sub = params.subcarriers;
    const int n_sym = params.symbols;
    const int chips = params.grid_size();
    const std::vector<double> taps = pulse_taps(pulse);

    std::vector<cplx> chip(static_cast<std::size_t>(chips));
    for (int q = 0; q < chips; ++q) {
        const cplx* src = rx.samples.data() + static_cast<std::size_t>(q) * per_chip;
        cplx acc{};
        for (std::size_t j = 0; j < taps.size(); ++j) acc += taps[j] * src[j];
        chip[static_cast<std::size_t>(q)] = acc;
    }

    DDFrame out(n_sub, n_sym);
    std::vector<cplx> column(static_cast<std::size_t>(n_sub));
    std::vector<cplx> freq;
    for (int l = 0; l < n_sym; ++l) {
        for (int n = 0; n < n_sub; ++n) column[static_cast<std::size_t>(n)] = chip[static_cast<std::size_t>(l + n * n_sym)];
        detail::unitary_dft(column, freq);
        std::copy(freq.begin(), freq.end(), out.column(l).begin());
    }
    return out;
}

double papr_db(const Waveform& s) {
    const int begin = std::max(0, s.lead);
    const int end = std::min(static_cast<int>(s.samples.size()), s.lead + s.nominal_length);
    double peak = 0.0;
    double total = 0.0;
    for (int i = begin; i < end; ++i) {
        const double p = std::norm(s.samples[static_cast<std::size_t>(i)]);
        peak = std::max(peak, p);
        total += p;
    }
    if (end <= begin || total <= 0.0) throw Error(ErrorCode::zero_energy, "papr of an empty waveform");
    const double mean = total / (end - begin);
    return 10.0 * std::log10(peak / mean);
}

}  // namespace dsk
