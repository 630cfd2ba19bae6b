// SPDX-License-Identifier: Apache-2.0
#include "dsk/txmap.hpp"

#include <cmath>
#include <string>

#include "dsk/error.hpp"

namespace dsk {

namespace {

void require_symbols(const DskSymbols& symbols, const FrameParams& params) {
    if (static_cast<int>(symbols.index.size()) != params.data_symbols) {
        throw Error(ErrorCode::length_mismatch,
                    std::to_string(symbols.index.size()) + " indices for " +
                        std::to_string(params.data_symbols) + " data symbols");
    }
    for (int n : symbols.index) {
        if (n < 0 || n >= params.usable_subcarriers) {
            throw Error(ErrorCode::index_out_of_range, "index " + std::to_string(n));
        }
    }
}

}  // namespace

DskSymbols split_bits(std::span<const std::uint8_t> bits, const FrameParams& params) {
    const int nb = params.bits_per_symbol;
    if (static_cast<long>(bits.size()) != static_cast<long>(nb) * params.data_symbols) {
        throw Error(ErrorCode::length_mismatch,
                    std::to_string(bits.size()) + " bits for " + std::to_string(params.data_symbols) +
                        " symbols of " + std::to_string(nb) + " bits");
    }
    DskSymbols s;
    s.index.resize(static_cast<std::size_t>(params.data_symbols));
    for (int l = 0; l < params.data_symbols; ++l) {
        int n = 0;
        for (int b = 0; b < nb; ++b) n = (n << 1) | (bits[static_cast<std::size_t>(l * nb + b)] & 1);
        s.index[static_cast<std::size_t>(l)] = n;
    }
    return s;
}

BitBlock demap_bits(const DskSymbols& symbols, const FrameParams& params) {
    require_symbols(symbols, params);
    const int nb = params.bits_per_symbol;
    BitBlock bits(static_cast<std::size_t>(nb) * symbols.index.size());
    for (std::size_t l = 0; l < symbols.index.size(); ++l) {
        for (int b = 0; b < nb; ++b) {
            bits[l * static_cast<std::size_t>(nb) + static_cast<std::size_t>(b)] =
                static_cast<std::uint8_t>((symbols.index[l] >> (nb - 1 - b)) & 1);
        }
    }
    return bits;
}

DDFrame map_onehot(const DskSymbols& symbols, const FrameParams& params) {
    require_symbols(symbols, params);
    DDFrame x(params.subcarriers, params.symbols);
    for (int l = 0; l < params.data_symbols; ++l) x(symbols.index[static_cast<std::size_t>(l)], l) = 1.0;
    return x;
}

DDFrame map_sequence(const DskSymbols& symbols, std::span<const cplx> basis, const FrameParams& params) {
    require_symbols(symbols, params);
    const int n = params.subcarriers;
    if (static_cast<int>(basis.size()) != n) {
        throw Error(ErrorCode::length_mismatch, "basis of length " + std::to_string(basis.size()));
    }
    DDFrame x(n, params.symbols);
    for (int l = 0; l < params.data_symbols; ++l) {
        const int shift = symbols.index[static_cast<std::size_t>(l)];
        auto col = x.column(l);
        for (int k = 0; k < n; ++k) col[static_cast<std::size_t>(k)] = basis[static_cast<std::size_t>(((k - shift) % n + n) % n)];
    }
    return x;
}

int default_guard(const FrameParams& params) { return params.subcarriers / params.bits_per_symbol - 1; }

BpskPlacement interleaved_placement(const FrameParams& params, int guard) {
    const int nb = params.bits_per_symbol;
    if (guard < 0 || static_cast<long>(nb) * (guard + 1) > params.subcarriers) {
        throw Error(ErrorCode::overfull_grid,
                    std::to_string(nb) + " symbols with " + std::to_string(guard) + " guards exceed N");
    }
    BpskPlacement p;
    p.amplitude = 1.0 / std::sqrt(static_cast<double>(nb));
    for (int i = 0; i < nb; ++i) p.subcarriers.push_back(i * (guard + 1));
    return p;
}

std::vector<BpskPlacement> fdma_placements(const FrameParams& params, int users) {
    const int nb = params.bits_per_symbol;
    const int band = users > 0 ? params.subcarriers / users : 0;
    if (users < 1 || band < nb) {
        throw Error(ErrorCode::too_many_users,
                    std::to_string(users) + " users leave " + std::to_string(band) + " subcarriers each, need " +
                        std::to_string(nb));
    }
    std::vector<BpskPlacement> out(static_cast<std::size_t>(users));
    for (int u = 0; u < users; ++u) {
        BpskPlacement& p = out[static_cast<std::size_t>(u)];
        p.amplitude = 1.0 / std::sqrt(static_cast<double>(nb));
        for (int i = 0; i < nb; ++i) p.subcarriers.push_back(u * band + i);
    }
    return out;
}

DDFrame map_bpsk(std::span<const std::uint8_t> bits, const BpskPlacement& placement, const FrameParams& params) {
    const std::size_t per_symbol = placement.subcarriers.size();
    if (bits.size() != per_symbol * static_cast<std::size_t>(params.data_symbols)) {
        throw Error(ErrorCode::length_mismatch, std::to_string(bits.size()) + " bits for the BPSK placement");
    }
    DDFrame x(params.subcarriers, params.symbols);
    for (int l = 0; l < params.data_symbols; ++l) {
        for (std::size_t i = 0; i < per_symbol; ++i) {
            const bool one = bits[static_cast<std::size_t>(l) * per_symbol + i] & 1;
            x(placement.subcarriers[i], l) = one ? -placement.amplitude : placement.amplitude;
        }
    }
    return x;
}

DDFrame map_bpsk_interleaved(std::span<const std::uint8_t> bits, const FrameParams& params, int guard) {
    return map_bpsk(bits, interleaved_placement(params, guard), params);
}

std::vector<DDFrame> map_bpsk_fdma(std::span<const BitBlock> bits_per_user, const FrameParams& params, int users) {
    if (static_cast<int>(bits_per_user.size()) != users) {
        throw Error(ErrorCode::inconsistent_user_count, "bit blocks do not match the user count");
    }
    const std::vector<BpskPlacement> placements = fdma_placements(params, users);
    std::vector<DDFrame> frames;
    frames.reserve(static_cast<std::size_t>(users));
    for (int u = 0; u < users; ++u) {
        frames.push_back(map_bpsk(bits_per_user[static_cast<std::size_t>(u)], placements[static_cast<std::size_t>(u)], params));
    }
    return frames;
}

}  // namespace dsk
