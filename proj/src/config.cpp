// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dsk/error.hpp"
#include "dsk/harness.hpp"

namespace dsk {

const char* to_string(Scenario s) {
    switch (s) {
        case Scenario::p2p_dsk: return "p2p-dsk";
        case Scenario::mu_dsk: return "mu-dsk";
        case Scenario::p2p_bpsk: return "p2p-bpsk";
        case Scenario::mu_bpsk: return "mu-bpsk";
    }
    return "?";
}

const char* to_string(DetectorKind d) {
    switch (d) {
        case DetectorKind::mp: return "mp";
        case DetectorKind::sicmrc_parallel: return "sicmrc-par";
        case DetectorKind::sicmrc_successive: return "sicmrc-seq";
        case DetectorKind::lmmse: return "lmmse";
    }
    return "?";
}

Scenario parse_scenario(const std::string& s) {
    for (Scenario v : {Scenario::p2p_dsk, Scenario::mu_dsk, Scenario::p2p_bpsk, Scenario::mu_bpsk}) {
        if (s == to_string(v)) return v;
    }
    throw Error(ErrorCode::parse_error, "unknown scenario '" + s + "'");
}

DetectorKind parse_detector(const std::string& s) {
    for (DetectorKind v : {DetectorKind::mp, DetectorKind::sicmrc_parallel, DetectorKind::sicmrc_successive,
                           DetectorKind::lmmse}) {
        if (s == to_string(v)) return v;
    }
    throw Error(ErrorCode::parse_error, "unknown detector '" + s + "'");
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text) {
    const std::string t = trim(text);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v)) {
        throw Error(ErrorCode::parse_error, "not a number: '" + text + "'");
    }
    return v;
}

long long parse_integer(const std::string& text) {
    const std::string t = trim(text);
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(t.c_str(), &end, 10);
    if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE) {
        throw Error(ErrorCode::parse_error, "not an integer: '" + text + "'");
    }
    return v;
}

int parse_int(const std::string& text) {
    const long long v = parse_integer(text);
    if (v < -2147483647LL || v > 2147483647LL) throw Error(ErrorCode::parse_error, "out of range: '" + text + "'");
    return static_cast<int>(v);
}

}  // namespace

// "4,6,8" or "4:2:14" (start:step:stop, inclusive), or a mix.
std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::string t = trim(item);
        if (t.empty()) throw Error(ErrorCode::parse_error, "empty item in '" + text + "'");
        const auto c1 = t.find(':');
        if (c1 == std::string::npos) {
            out.push_back(parse_double(t));
            continue;
        }
        const auto c2 = t.find(':', c1 + 1);
        if (c2 == std::string::npos) throw Error(ErrorCode::parse_error, "range needs start:step:stop");
        const double start = parse_double(t.substr(0, c1));
        const double step = parse_double(t.substr(c1 + 1, c2 - c1 - 1));
        const double stop = parse_double(t.substr(c2 + 1));
        if (step <= 0.0 || stop < start) throw Error(ErrorCode::parse_error, "bad range '" + t + "'");
        const long long count = std::llround(std::floor((stop - start) / step + 1e-9));
        for (long long i = 0; i <= count; ++i) out.push_back(start + static_cast<double>(i) * step);
    }
    if (out.empty()) throw Error(ErrorCode::parse_error, "empty list");
    return out;
}

void apply_setting(ExperimentConfig& cfg, const std::string& raw_key, const std::string& raw_value) {
    std::string key = trim(raw_key);
    std::replace(key.begin(), key.end(), '-', '_');
    const std::string value = trim(raw_value);
    if (key == "scenario") cfg.scenario = parse_scenario(value);
    else if (key == "detector") cfg.detector = parse_detector(value);
    else if (key == "mapper") {
        if (value == "zc") cfg.mapper = Mapper::zc;
        else if (value == "onehot") cfg.mapper = Mapper::onehot;
        else throw Error(ErrorCode::parse_error, "unknown mapper '" + value + "'");
    } else if (key == "subcarriers") cfg.subcarriers = parse_int(value);
    else if (key == "symbols") cfg.symbols = parse_int(value);
    else if (key == "max_delay") cfg.max_delay = parse_int(value);
    else if (key == "max_doppler") cfg.max_doppler = parse_int(value);
    else if (key == "speed_kmh") cfg.phys.max_speed_mps = PhysConfig::kmh_to_mps(parse_double(value));
    else if (key == "carrier_hz") cfg.phys.carrier_hz = parse_double(value);
    else if (key == "sample_rate_hz") cfg.phys.sample_rate_hz = parse_double(value);
    else if (key == "snr_db") cfg.snr_db = parse_number_list(value);
    else if (key == "users") cfg.users = parse_int(value);
    else if (key == "paths") cfg.paths = parse_int(value);
    else if (key == "first_root" || key == "m0") cfg.first_root = parse_int(value);
    else if (key == "frames") cfg.frames = parse_int(value);
    else if (key == "max_iterations" || key == "max_iter") cfg.max_iterations = parse_int(value);
    else if (key == "csi_error_db") {
        if (value == "none") cfg.csi_error_db.reset();
        else cfg.csi_error_db = parse_double(value);
    } else if (key == "pulse") {
        if (value == "critical") cfg.pulse = PulseConfig::critical();
        else if (value == "rrc") cfg.pulse = PulseConfig::rrc(cfg.pulse.rolloff, cfg.pulse.half_len);
        else throw Error(ErrorCode::parse_error, "unknown pulse '" + value + "'");
    } else if (key == "rolloff") cfg.pulse.rolloff = parse_double(value);
    else if (key == "pulse_half_len") cfg.pulse.half_len = parse_int(value);
    else if (key == "oversample") cfg.pulse.oversample = parse_int(value);
    else if (key == "seed") {
        const long long v = parse_integer(value);
        if (v < 0) throw Error(ErrorCode::parse_error, "seed must be non-negative");
        cfg.seed = static_cast<std::uint64_t>(v);
    } else if (key == "threads") cfg.threads = parse_int(value);
    else throw Error(ErrorCode::parse_error, "unknown key '" + raw_key + "'");
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::parse_error, "cannot open " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::parse_error, path + ":" + std::to_string(lineno) + ": expected key = value");
        }
        try {
            apply_setting(base, line.substr(0, eq), line.substr(eq + 1));
        } catch (const Error& e) {
            throw Error(ErrorCode::parse_error, path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return base;
}

}  // namespace dsk
