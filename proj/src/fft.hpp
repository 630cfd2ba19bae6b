// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <span>
#include <vector>

#include "dsk/ddgrid.hpp"

namespace dsk::detail {

// Unitary N-point transforms. Plans are cached per thread.
inline Eigen::FFT<double>& thread_fft() {
    thread_local Eigen::FFT<double> fft = [] {
        Eigen::FFT<double> f;
        f.SetFlag(Eigen::FFT<double>::Unscaled);
        return f;
    }();
    return fft;
}

/// out[n] = 1/sqrt(N) sum_k in[k] e^{+j2pi kn/N}
inline void unitary_idft(std::span<const cplx> in, std::vector<cplx>& out) {
    std::vector<cplx> src(in.begin(), in.end());
    out.resize(in.size());
    thread_fft().inv(out.data(), src.data(), static_cast<int>(src.size()));
    const double scale = 1.0 / std::sqrt(static_cast<double>(in.size()));
    for (cplx& v : out) v *= scale;
}

/// out[k] = 1/sqrt(N) sum_n in[n] e^{-j2pi nk/N}
inline void unitary_dft(std::span<const cplx> in, std::vector<cplx>& out) {
    std::vector<cplx> src(in.begin(), in.end());
    out.resize(in.size());
    thread_fft().fwd(out.data(), src.data(), static_cast<int>(src.size()));
    const double scale = 1.0 / std::sqrt(static_cast<double>(in.size()));
    for (cplx& v : out) v *= scale;
}

}  // namespace dsk::detail
