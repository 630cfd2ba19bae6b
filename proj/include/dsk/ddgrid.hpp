// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <span>
#include <vector>

namespace dsk {

using cplx = std::complex<double>;

inline constexpr double kSpeedOfLight = 2.998e8;  // m/s

/// Geometry of one ODDM frame on the delay-Doppler grid.
///
/// Rows of the grid are subcarriers (Doppler bins), columns are multicarrier
/// symbols (delay bins). The last `max_delay` symbols are zero padding, so only
/// `data_symbols` columns carry data, and only the first `usable_subcarriers`
/// (a power of two) rows are addressable by a shift-keying index.
struct FrameParams {
    int subcarriers = 0;         // N
    int symbols = 0;             // M
    int max_delay = 0;           // l_max, also the zero-padding length
    int max_doppler = 0;         // k_max
    int bits_per_symbol = 0;     // floor(log2 N)
    int usable_subcarriers = 0;  // 2^bits_per_symbol
    int data_symbols = 0;        // M - l_max

    int grid_size() const { return subcarriers * symbols; }
};

struct PhysConfig {
    double carrier_hz = 5e9;
    double sample_rate_hz = 3.84e6;
    double max_speed_mps = 100.0;

    static double kmh_to_mps(double kmh) { return kmh / 3.6; }
};

/// Fills every derived field; `max_doppler` is left at zero.
/// Throws Error(invalid_dimension) unless N >= 2, l_max >= 0 and M > l_max.
FrameParams derive_params(int subcarriers, int symbols, int max_delay);

/// Largest Doppler index, ceil(v/c * f_c * N * M / f_s).
int doppler_bound(const PhysConfig& phys, const FrameParams& params);

/// N x M complex delay-Doppler grid, stored column-major so that entry
/// (k, l) lives at k + l * N. This matches the vectorisation used by the
/// sensing-matrix formulation.
class DDFrame {
public:
    DDFrame() = default;
    DDFrame(int subcarriers, int symbols);

    int subcarriers() const { return subcarriers_; }
    int symbols() const { return symbols_; }

    cplx& operator()(int k, int l) { return data_[static_cast<std::size_t>(k + l * subcarriers_)]; }
    const cplx& operator()(int k, int l) const {
        return data_[static_cast<std::size_t>(k + l * subcarriers_)];
    }

    std::span<cplx> column(int l) {
        return {data_.data() + static_cast<std::size_t>(l * subcarriers_),
                static_cast<std::size_t>(subcarriers_)};
    }
    std::span<const cplx> column(int l) const {
        return {data_.data() + static_cast<std::size_t>(l * subcarriers_),
                static_cast<std::size_t>(subcarriers_)};
    }

    std::span<cplx> data() { return data_; }
    std::span<const cplx> data() const { return data_; }

    double energy() const;

    /// True when every column l >= data_symbols is exactly zero.
    bool zero_padded(const FrameParams& params) const;

    DDFrame& operator+=(const DDFrame& other);

private:
    int subcarriers_ = 0;
    int symbols_ = 0;
    std::vector<cplx> data_;
};

/// Throws Error(shape_mismatch) when the frame is not N x M.
void require_shape(const DDFrame& frame, const FrameParams& params);

double max_abs_diff(const DDFrame& a, const DDFrame& b);

}  // namespace dsk
