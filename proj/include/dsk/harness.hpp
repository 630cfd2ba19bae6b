// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dsk/ddgrid.hpp"
#include "dsk/modem.hpp"
#include "dsk/seqs.hpp"

namespace dsk {

enum class Scenario { p2p_dsk, mu_dsk, p2p_bpsk, mu_bpsk };
enum class DetectorKind { mp, sicmrc_parallel, sicmrc_successive, lmmse };
enum class Mapper { zc, onehot };

const char* to_string(Scenario s);
const char* to_string(DetectorKind d);
Scenario parse_scenario(const std::string& s);
DetectorKind parse_detector(const std::string& s);

struct ExperimentConfig {
    Scenario scenario = Scenario::p2p_dsk;
    std::optional<DetectorKind> detector;  // default depends on the scenario
    Mapper mapper = Mapper::zc;  // point-to-point DSK only
    int subcarriers = 64;
    int symbols = 64;
    int max_delay = 10;
    std::optional<int> max_doppler;  // derived from phys when unset
    PhysConfig phys;
    std::vector<double> snr_db{12.0};
    int users = 1;
    int paths = 5;
    int first_root = 1;
    int frames = 2000;
    int max_iterations = 5;
    std::optional<double> csi_error_db;
    PulseConfig pulse = PulseConfig::critical();
    std::uint64_t seed = 1;
    int threads = 1;

    /// sicmrc-seq for DSK scenarios, lmmse for BPSK ones unless set.
    DetectorKind detector_kind() const;

    /// Grid geometry with max_doppler filled in.
    FrameParams frame_params() const;

    /// Throws Error(invalid_dimension | incompatible_config).
    void validate() const;

    /// Full-scale frame: N = 64, M = 256, l_max = 10, 10^4 frames.
    void apply_full_scale();
};

struct BerRow {
    double snr_db = 0.0;
    int user = -1;  // -1: aggregate over users
    std::uint64_t bit_errors = 0;
    std::uint64_t bits = 0;
    double mean_iterations = 0.0;

    double ber() const { return bits ? static_cast<double>(bit_errors) / static_cast<double>(bits) : 0.0; }
};

struct IterationRow {
    double snr_db = 0.0;
    int iteration = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t bits = 0;

    double ber() const { return bits ? static_cast<double>(bit_errors) / static_cast<double>(bits) : 0.0; }
};

struct ExperimentResult {
    std::vector<BerRow> rows;
    std::vector<IterationRow> iteration_rows;
    int frames = 0;
    double wall_seconds = 0.0;

    const BerRow& aggregate(double snr_db) const;
};

struct CcdfPoint {
    double threshold_db = 0.0;
    double ccdf = 0.0;
};

struct PaprResult {
    std::vector<double> papr_db;  // one per frame, in frame order
    std::vector<CcdfPoint> ccdf;

    /// Smallest tabulated threshold whose CCDF is at or below `level`.
    double threshold_at(double level) const;
};

struct RootsReport {
    int length = 0;
    int usable = 0;
    std::vector<int> roots;
    PsiMetrics metrics;
    bool verified = false;  // the exhaustive oracle ran and agreed
    std::optional<RootSearch> oracle;
};

/// Monte Carlo BER sweep over cfg.snr_db. Every frame draws its bits, channels
/// and unit-variance noise from its own stream, shared by all SNR points.
ExperimentResult run_ber(const ExperimentConfig& cfg);

/// BER after each detector iteration, 1 .. max_iterations.
/// Throws Error(wrong_detector) for non-iterative detectors.
ExperimentResult run_convergence(const ExperimentConfig& cfg);

/// PAPR of cfg.frames transmit waveforms; CCDF tabulated every 0.1 dB.
PaprResult run_papr(const ExperimentConfig& cfg);

/// Root allocation report; with `verify` and N <= 32, users <= 5 the
/// exhaustive search must agree or Error(incompatible_config) is thrown.
RootsReport run_roots(int users, int length, int first_root, bool verify);

bool is_dsk(Scenario s);
bool is_multi_user(Scenario s);

std::string ber_csv(const ExperimentResult& result);
std::string convergence_csv(const ExperimentResult& result);
std::string papr_csv(const PaprResult& result);
std::string roots_csv(const RootsReport& report);

/// Flat `key = value` text, '#' starts a comment. Unknown keys are errors.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});
std::vector<double> parse_number_list(const std::string& text);

}  // namespace dsk
