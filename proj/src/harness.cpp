// SPDX-License-Identifier: Apache-2.0
#include "dsk/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <thread>

#include "dsk/channel.hpp"
#include "dsk/detect.hpp"
#include "dsk/error.hpp"
#include "dsk/rng.hpp"
#include "dsk/txmap.hpp"

namespace dsk {

bool is_dsk(Scenario s) { return s == Scenario::p2p_dsk || s == Scenario::mu_dsk; }
bool is_multi_user(Scenario s) { return s == Scenario::mu_dsk || s == Scenario::mu_bpsk; }

DetectorKind ExperimentConfig::detector_kind() const {
    if (detector) return *detector;
    return is_dsk(scenario) ? DetectorKind::sicmrc_successive : DetectorKind::lmmse;
}

FrameParams ExperimentConfig::frame_params() const {
    FrameParams p = derive_params(subcarriers, symbols, max_delay);
    p.max_doppler = max_doppler ? *max_doppler : doppler_bound(phys, p);
    return p;
}

namespace {

void validate_shape(const ExperimentConfig& cfg) {
    if (cfg.frames < 1) throw Error(ErrorCode::invalid_dimension, "frames must be at least 1");
    if (cfg.users < 1) throw Error(ErrorCode::invalid_dimension, "users must be at least 1");
    if (cfg.paths < 1) throw Error(ErrorCode::invalid_dimension, "paths must be at least 1");
    if (cfg.max_iterations < 1) throw Error(ErrorCode::invalid_dimension, "max_iterations must be at least 1");
    if (cfg.threads < 1) throw Error(ErrorCode::invalid_dimension, "threads must be at least 1");
    if (cfg.snr_db.empty()) throw Error(ErrorCode::invalid_dimension, "empty SNR list");
    if (!is_multi_user(cfg.scenario) && cfg.users != 1) {
        throw Error(ErrorCode::incompatible_config,
                    std::string(to_string(cfg.scenario)) + " is single-user, got users = " + std::to_string(cfg.users));
    }
    const FrameParams p = cfg.frame_params();
    if (p.max_doppler < 0) throw Error(ErrorCode::invalid_dimension, "negative max_doppler");
}

}  // namespace

void ExperimentConfig::validate() const {
    validate_shape(*this);
    const DetectorKind d = detector_kind();
    const bool ok = is_dsk(scenario) ? d != DetectorKind::lmmse : d == DetectorKind::lmmse;
    if (!ok) {
        throw Error(ErrorCode::incompatible_config,
                    std::string(to_string(d)) + " cannot detect " + to_string(scenario));
    }
    if (d == DetectorKind::mp && scenario != Scenario::p2p_dsk) {
        throw Error(ErrorCode::incompatible_config, "mp is a point-to-point detector");
    }
}

void ExperimentConfig::apply_full_scale() {
    subcarriers = 64;
    symbols = 256;
    max_delay = 10;
    frames = 10000;
}

const BerRow& ExperimentResult::aggregate(double snr) const {
    for (const BerRow& r : rows) {
        if (r.user < 0 && r.snr_db == snr) return r;
    }
    throw Error(ErrorCode::index_out_of_range, "no aggregate row for SNR " + std::to_string(snr));
}

double PaprResult::threshold_at(double level) const {
    for (const CcdfPoint& p : ccdf) {
        if (p.ccdf <= level) return p.threshold_db;
    }
    return ccdf.empty() ? 0.0 : ccdf.back().threshold_db;
}

namespace {

// Everything one frame needs, drawn in a fixed order from the frame's stream.
struct FrameDraw {
    std::vector<BitBlock> bits;          // per user
    std::vector<EsddChannel> channels;   // true channels
    std::vector<EsddChannel> estimates;  // receiver CSI
    DDFrame clean;
    DDFrame unit_noise;
};

struct Setup {
    ExperimentConfig cfg;
    FrameParams params;
    DetectorKind detector;
    int users = 1;
    int bits_per_user = 0;
    std::vector<ZcBasis> bases;  // DSK with sequence mapping
    std::optional<BasisSet> basis_set;
    std::vector<BpskPlacement> placements;
};

Setup make_setup(const ExperimentConfig& cfg) {
    Setup s;
    s.cfg = cfg;
    s.params = cfg.frame_params();
    s.detector = cfg.detector_kind();
    s.users = cfg.users;
    const FrameParams& p = s.params;
    switch (cfg.scenario) {
        case Scenario::p2p_dsk:
            s.bits_per_user = p.data_symbols * p.bits_per_symbol;
            if (cfg.mapper == Mapper::zc) s.bases.push_back(zc_generate(p.subcarriers, cfg.first_root));
            break;
        case Scenario::mu_dsk: {
            s.bits_per_user = p.data_symbols * p.bits_per_symbol;
            const auto roots = allocate_roots(cfg.users, p.subcarriers, cfg.first_root, cfg.seed);
            for (int r : roots) s.bases.push_back(zc_generate(p.subcarriers, r));
            s.basis_set.emplace(s.bases);
            break;
        }
        case Scenario::p2p_bpsk:
            s.placements.push_back(interleaved_placement(p, default_guard(p)));
            s.bits_per_user = static_cast<int>(s.placements[0].subcarriers.size()) * p.data_symbols;
            break;
        case Scenario::mu_bpsk:
            s.placements = fdma_placements(p, cfg.users);
            s.bits_per_user = static_cast<int>(s.placements[0].subcarriers.size()) * p.data_symbols;
            break;
    }
    return s;
}

DDFrame map_user(const Setup& s, int u, const BitBlock& bits) {
    const FrameParams& p = s.params;
    if (is_dsk(s.cfg.scenario)) {
        const DskSymbols sym = split_bits(bits, p);
        if (s.bases.empty()) return map_onehot(sym, p);
        return map_sequence(sym, s.bases[static_cast<std::size_t>(u)], p);
    }
    return map_bpsk(bits, s.placements[static_cast<std::size_t>(u)], p);
}

FrameDraw draw_frame(const Setup& s, std::uint64_t frame) {
    const FrameParams& p = s.params;
    Rng rng = stream_rng(s.cfg.seed, frame);
    FrameDraw d{{}, {}, {}, DDFrame(p.subcarriers, p.symbols), DDFrame(p.subcarriers, p.symbols)};
    std::bernoulli_distribution coin(0.5);
    d.bits.resize(static_cast<std::size_t>(s.users));
    for (auto& b : d.bits) {
        b.resize(static_cast<std::size_t>(s.bits_per_user));
        for (auto& bit : b) bit = coin(rng) ? 1 : 0;
    }
    for (int u = 0; u < s.users; ++u) d.channels.push_back(draw_channel(rng, s.cfg.paths, p.max_delay, p.max_doppler));
    d.unit_noise = add_awgn(DDFrame(p.subcarriers, p.symbols), 1.0, rng);
    if (s.cfg.csi_error_db) {
        const double var = std::pow(10.0, *s.cfg.csi_error_db / 10.0);
        for (const auto& ch : d.channels) d.estimates.push_back(perturb_csi(ch, var, rng));
    } else {
        d.estimates = d.channels;
    }
    std::vector<DDFrame> tx;
    for (int u = 0; u < s.users; ++u) tx.push_back(map_user(s, u, d.bits[static_cast<std::size_t>(u)]));
    d.clean = apply_dd(tx, d.channels, p);
    return d;
}

DDFrame noisy(const FrameDraw& d, double variance) {
    DDFrame y = d.clean;
    const double sigma = std::sqrt(variance);
    auto out = y.data();
    auto n = d.unit_noise.data();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += sigma * n[i];
    return y;
}

struct Detected {
    std::vector<BitBlock> bits;                  // final, per user
    std::vector<std::vector<BitBlock>> history;  // [iteration][user], sicmrc only
    int iterations = 0;
};

Detected detect_frame(const Setup& s, const FrameDraw& d, const DDFrame& y, double variance) {
    const FrameParams& p = s.params;
    const DetectorOptions opts{s.cfg.max_iterations, s.detector == DetectorKind::sicmrc_parallel
                                                           ? Schedule::parallel
                                                           : Schedule::successive};
    Detected out;
    auto record = [&](const DetectorTrace& trace) {
        out.iterations = trace.iterations;
        for (const auto& snapshot : trace.estimates) {
            std::vector<BitBlock> b;
            for (const auto& sym : snapshot) b.push_back(demap_bits(sym, p));
            out.history.push_back(std::move(b));
        }
    };
    switch (s.cfg.scenario) {
        case Scenario::p2p_dsk: {
            const DDFrame r = s.bases.empty() ? y : correlate_rx(y, s.bases[0]);
            if (s.detector == DetectorKind::mp) {
                out.bits.push_back(demap_bits(mp_detect(r, build_sensing_matrix(d.estimates[0], p), p), p));
            } else {
                const P2pDetection det = sic_mrc_p2p(r, d.estimates[0], p, opts);
                out.bits.push_back(demap_bits(det.symbols, p));
                record(det.trace);
            }
            break;
        }
        case Scenario::mu_dsk: {
            std::vector<DDFrame> r;
            for (const auto& z : s.bases) r.push_back(correlate_rx(y, z));
            const MuDetection det = sic_mrc_mu(r, d.estimates, *s.basis_set, p, opts);
            for (const auto& sym : det.symbols) out.bits.push_back(demap_bits(sym, p));
            record(det.trace);
            break;
        }
        case Scenario::p2p_bpsk:
        case Scenario::mu_bpsk:
            out.bits = lmmse_bpsk(y, d.estimates, s.placements, p, variance);
            break;
    }
    return out;
}

std::uint64_t count_errors(const BitBlock& a, const BitBlock& b) {
    std::uint64_t e = 0;
    for (std::size_t i = 0; i < a.size(); ++i) e += a[i] != b[i];
    return e;
}

// Integer tallies; summing them is order independent.
struct Tally {
    std::vector<std::uint64_t> errors;       // [snr][user]
    std::vector<std::uint64_t> iterations;   // [snr]
    std::vector<std::uint64_t> iter_errors;  // [snr][iteration]

    Tally(std::size_t snrs, std::size_t users, std::size_t iters)
        : errors(snrs * users), iterations(snrs), iter_errors(snrs * iters) {}

    void add(const Tally& o) {
        for (std::size_t i = 0; i < errors.size(); ++i) errors[i] += o.errors[i];
        for (std::size_t i = 0; i < iterations.size(); ++i) iterations[i] += o.iterations[i];
        for (std::size_t i = 0; i < iter_errors.size(); ++i) iter_errors[i] += o.iter_errors[i];
    }
};

template <typename Work>
void for_frames(int frames, int threads, Work&& work) {
    const int n = std::max(1, std::min(threads, frames));
    if (n == 1) {
        work(0, 1);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) {
        pool.emplace_back([&, t] {
            try {
                work(t, n);
            } catch (...) {
                failures[static_cast<std::size_t>(t)] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& f : failures) {
        if (f) std::rethrow_exception(f);
    }
}

ExperimentResult simulate(const ExperimentConfig& cfg, bool convergence) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    const Setup s = make_setup(cfg);
    const std::size_t snrs = cfg.snr_db.size();
    const std::size_t users = static_cast<std::size_t>(s.users);
    const std::size_t iters = static_cast<std::size_t>(cfg.max_iterations);
    std::vector<double> variance;
    for (double db : cfg.snr_db) variance.push_back(NoiseSpec::from_snr_db(db, s.params.bits_per_symbol).variance);

    std::vector<Tally> partial;
    for (int t = 0; t < std::max(1, cfg.threads); ++t) partial.emplace_back(snrs, users, iters);
    for_frames(cfg.frames, cfg.threads, [&](int t, int stride) {
        Tally& tally = partial[static_cast<std::size_t>(t)];
        for (int f = t; f < cfg.frames; f += stride) {
            const FrameDraw d = draw_frame(s, static_cast<std::uint64_t>(f));
            for (std::size_t i = 0; i < snrs; ++i) {
                const Detected det = detect_frame(s, d, noisy(d, variance[i]), variance[i]);
                for (std::size_t u = 0; u < users; ++u) {
                    tally.errors[i * users + u] += count_errors(d.bits[u], det.bits[u]);
                }
                tally.iterations[i] += static_cast<std::uint64_t>(det.iterations);
                if (!convergence) continue;
                for (std::size_t it = 0; it < iters; ++it) {
                    // A converged run keeps its last estimate for the remaining iterations.
                    const auto& snap = det.history[std::min(it, det.history.size() - 1)];
                    for (std::size_t u = 0; u < users; ++u) tally.iter_errors[i * iters + it] += count_errors(d.bits[u], snap[u]);
                }
            }
        }
    });
    Tally total(snrs, users, iters);
    for (const auto& p : partial) total.add(p);

    ExperimentResult result;
    result.frames = cfg.frames;
    const std::uint64_t user_bits = static_cast<std::uint64_t>(s.bits_per_user) * static_cast<std::uint64_t>(cfg.frames);
    for (std::size_t i = 0; i < snrs; ++i) {
        const double mean_iters = static_cast<double>(total.iterations[i]) / cfg.frames;
        BerRow all{cfg.snr_db[i], -1, 0, 0, mean_iters};
        for (std::size_t u = 0; u < users; ++u) {
            const BerRow row{cfg.snr_db[i], static_cast<int>(u), total.errors[i * users + u], user_bits, mean_iters};
            all.bit_errors += row.bit_errors;
            all.bits += row.bits;
            result.rows.push_back(row);
        }
        result.rows.push_back(all);
        if (!convergence) continue;
        for (std::size_t it = 0; it < iters; ++it) {
            result.iteration_rows.push_back(
                {cfg.snr_db[i], static_cast<int>(it + 1), total.iter_errors[i * iters + it], user_bits * users});
        }
    }
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace

ExperimentResult run_ber(const ExperimentConfig& cfg) { return simulate(cfg, false); }

ExperimentResult run_convergence(const ExperimentConfig& cfg) {
    const DetectorKind d = cfg.detector_kind();
    if (d != DetectorKind::sicmrc_parallel && d != DetectorKind::sicmrc_successive) {
        throw Error(ErrorCode::wrong_detector, std::string(to_string(d)) + " is not iterative");
    }
    return simulate(cfg, true);
}

PaprResult run_papr(const ExperimentConfig& cfg) {
    validate_shape(cfg);
    const Setup s = make_setup(cfg);
    const int per_frame = s.users;
    PaprResult out;
    out.papr_db.resize(static_cast<std::size_t>(cfg.frames) * static_cast<std::size_t>(per_frame));
    for_frames(cfg.frames, cfg.threads, [&](int t, int stride) {
        std::bernoulli_distribution coin(0.5);
        for (int f = t; f < cfg.frames; f += stride) {
            Rng rng = stream_rng(cfg.seed, static_cast<std::uint64_t>(f));
            for (int u = 0; u < per_frame; ++u) {
                BitBlock bits(static_cast<std::size_t>(s.bits_per_user));
                for (auto& b : bits) b = coin(rng) ? 1 : 0;
                const Waveform w = modulate(map_user(s, u, bits), s.params, cfg.pulse);
                out.papr_db[static_cast<std::size_t>(f) * per_frame + static_cast<std::size_t>(u)] = papr_db(w);
            }
        }
    });
    std::vector<double> sorted = out.papr_db;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i <= 150; ++i) {
        const double threshold = i / 10.0;
        const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), threshold);
        out.ccdf.push_back({threshold, static_cast<double>(above) / static_cast<double>(sorted.size())});
    }
    return out;
}

RootsReport run_roots(int users, int length, int first_root, bool verify) {
    RootsReport rep;
    rep.length = length;
    rep.usable = 1;
    while (rep.usable * 2 <= length) rep.usable *= 2;
    rep.roots = allocate_roots(users, length, first_root);
    rep.metrics = psi_metrics(rep.roots, length, rep.usable);
    if (verify && length <= 32 && users <= 5 && users >= 2) {
        rep.oracle = brute_force_roots(users, length, rep.usable);
        const PsiMetrics& o = rep.oracle->metrics;
        if (o.peak_num * rep.metrics.peak_den != rep.metrics.peak_num * o.peak_den ||
            o.attaining_pairs != rep.metrics.attaining_pairs) {
            throw Error(ErrorCode::incompatible_config, "allocation is worse than the exhaustive optimum");
        }
        rep.verified = true;
    }
    return rep;
}

namespace {

std::string format_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string format_e(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return buf;
}

}  // namespace

std::string ber_csv(const ExperimentResult& result) {
    std::string out = "snr_db,user,bit_errors,bits,ber,mean_iters\n";
    char iters[64];
    for (const BerRow& r : result.rows) {
        std::snprintf(iters, sizeof iters, "%.4f", r.mean_iterations);
        out += format_g(r.snr_db) + ',' + (r.user < 0 ? std::string("all") : std::to_string(r.user)) + ',' +
               std::to_string(r.bit_errors) + ',' + std::to_string(r.bits) + ',' + format_e(r.ber()) + ',' + iters + '\n';
    }
    return out;
}

std::string convergence_csv(const ExperimentResult& result) {
    std::string out = "snr_db,iteration,bit_errors,bits,ber\n";
    for (const IterationRow& r : result.iteration_rows) {
        out += format_g(r.snr_db) + ',' + std::to_string(r.iteration) + ',' + std::to_string(r.bit_errors) + ',' +
               std::to_string(r.bits) + ',' + format_e(r.ber()) + '\n';
    }
    return out;
}

std::string papr_csv(const PaprResult& result) {
    std::string out = "threshold_db,ccdf\n";
    char buf[96];
    for (const CcdfPoint& p : result.ccdf) {
        std::snprintf(buf, sizeof buf, "%.1f,%.6e\n", p.threshold_db, p.ccdf);
        out += buf;
    }
    return out;
}

std::string roots_csv(const RootsReport& report) {
    std::string out = "user,root,psi_max_sq_num,psi_max_sq_den,pairs\n";
    const auto& peaks = report.metrics.pair_peak_num;
    for (std::size_t u = 0; u < report.roots.size(); ++u) {
        int worst = 0;
        int pairs = 0;
        for (std::size_t v = 0; v < report.roots.size(); ++v) {
            if (v == u) continue;
            const int pk = peaks[u][v];
            if (pk > worst) {
                worst = pk;
                pairs = 1;
            } else if (pk == worst && pk > 0) {
                ++pairs;
            }
        }
        out += std::to_string(u) + ',' + std::to_string(report.roots[u]) + ',' + std::to_string(worst) + ',' +
               std::to_string(report.length) + ',' + std::to_string(pairs) + '\n';
    }
    return out;
}

}  // namespace dsk
