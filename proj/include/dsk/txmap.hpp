// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dsk/ddgrid.hpp"
#include "dsk/seqs.hpp"

namespace dsk {

/// One shift-keying index per data symbol, each in [0, usable_subcarriers).
struct DskSymbols {
    std::vector<int> index;

    bool operator==(const DskSymbols&) const = default;
};

using BitBlock = std::vector<std::uint8_t>;

/// Groups of bits_per_symbol bits, first bit most significant.
DskSymbols split_bits(std::span<const std::uint8_t> bits, const FrameParams& params);
BitBlock demap_bits(const DskSymbols& symbols, const FrameParams& params);

/// Unit entry at row n_l of each data column.
DDFrame map_onehot(const DskSymbols& symbols, const FrameParams& params);

/// Data column l is the basis circularly shifted down by n_l.
DDFrame map_sequence(const DskSymbols& symbols, std::span<const cplx> basis,
                     const FrameParams& params);
inline DDFrame map_sequence(const DskSymbols& symbols, const ZcBasis& basis,
                            const FrameParams& params) {
    return map_sequence(symbols, basis.seq, params);
}

/// Active subcarriers of a BPSK frame, identical in every data column. Entries
/// are +/-amplitude; amplitude = 1/sqrt(bits_per_symbol) gives unit power per
/// data column, the same as a DSK column.
struct BpskPlacement {
    std::vector<int> subcarriers;
    double amplitude = 1.0;
};

/// floor(N / N_b) - 1 null subcarriers between neighbours.
int default_guard(const FrameParams& params);

/// k = i (guard + 1), i = 0 .. N_b - 1. Throws Error(overfull_grid).
BpskPlacement interleaved_placement(const FrameParams& params, int guard);

/// User u occupies k = u N_s .. u N_s + N_b - 1 with N_s = floor(N / users).
/// Throws Error(too_many_users) if N_s < N_b.
std::vector<BpskPlacement> fdma_placements(const FrameParams& params, int users);

/// bit 0 -> +amplitude, bit 1 -> -amplitude. Bit l * |placement| + i drives
/// subcarrier placement[i] of symbol l.
DDFrame map_bpsk(std::span<const std::uint8_t> bits, const BpskPlacement& placement,
                 const FrameParams& params);

DDFrame map_bpsk_interleaved(std::span<const std::uint8_t> bits, const FrameParams& params,
                             int guard);
std::vector<DDFrame> map_bpsk_fdma(std::span<const BitBlock> bits_per_user,
                                   const FrameParams& params, int users);

}  // namespace dsk
