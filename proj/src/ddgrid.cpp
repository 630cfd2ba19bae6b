// SPDX-License-Identifier: Apache-2.0
#include "dsk/ddgrid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dsk/error.hpp"

namespace dsk {

FrameParams derive_params(int subcarriers, int symbols, int max_delay) {
    if (subcarriers < 2 || max_delay < 0 || symbols <= max_delay) {
        throw Error(ErrorCode::invalid_dimension,
                    "need N >= 2 and M > l_max >= 0, got N=" + std::to_string(subcarriers) +
                        " M=" + std::to_string(symbols) + " l_max=" + std::to_string(max_delay));
    }
    FrameParams p;
    p.subcarriers = subcarriers;
    p.symbols = symbols;
    p.max_delay = max_delay;
    int bits = 0;
    while ((2 << bits) <= subcarriers) ++bits;
    p.bits_per_symbol = bits;
    p.usable_subcarriers = 1 << bits;
    p.data_symbols = symbols - max_delay;
    return p;
}

int doppler_bound(const PhysConfig& phys, const FrameParams& params) {
    const double doppler_hz = phys.max_speed_mps / kSpeedOfLight * phys.carrier_hz;
    const double resolution_hz =
        phys.sample_rate_hz / (static_cast<double>(params.subcarriers) * params.symbols);
    return static_cast<int>(std::ceil(doppler_hz / resolution_hz));
}

DDFrame::DDFrame(int subcarriers, int symbols)
    : subcarriers_(subcarriers),
      symbols_(symbols),
      data_(static_cast<std::size_t>(subcarriers) * static_cast<std::size_t>(symbols)) {}

double DDFrame::energy() const {
    double e = 0.0;
    for (const cplx& v : data_) e += std::norm(v);
    return e;
}

bool DDFrame::zero_padded(const FrameParams& params) const {
    for (int l = params.data_symbols; l < symbols_; ++l) {
        for (const cplx& v : column(l)) {
            if (v != cplx{}) return false;
        }
    }
    return true;
}

DDFrame& DDFrame::operator+=(const DDFrame& other) {
    if (other.subcarriers_ != subcarriers_ || other.symbols_ != symbols_) {
        throw Error(ErrorCode::shape_mismatch, "frame sum");
    }
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

void require_shape(const DDFrame& frame, const FrameParams& params) {
    if (frame.subcarriers() != params.subcarriers || frame.symbols() != params.symbols) {
        throw Error(ErrorCode::shape_mismatch,
                    "frame is " + std::to_string(frame.subcarriers()) + "x" +
                        std::to_string(frame.symbols()) + ", expected " +
                        std::to_string(params.subcarriers) + "x" + std::to_string(params.symbols));
    }
}

double max_abs_diff(const DDFrame& a, const DDFrame& b) {
    if (a.subcarriers() != b.subcarriers() || a.symbols() != b.symbols()) {
        throw Error(ErrorCode::shape_mismatch, "max_abs_diff");
    }
    double m = 0.0;
    const auto da = a.data();
    const auto db = b.data();
    for (std::size_t i = 0; i < da.size(); ++i) m = std::max(m, std::abs(da[i] - db[i]));
    return m;
}

}  // namespace dsk
