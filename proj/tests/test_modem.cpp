// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "dsk/error.hpp"
#include "dsk/modem.hpp"
#include "dsk/rng.hpp"
#include "dsk/seqs.hpp"

using namespace dsk;

namespace {

DDFrame random_frame(const FrameParams& p, Rng& rng) {
    DDFrame x(p.subcarriers, p.symbols);
    for (int l = 0; l < p.data_symbols; ++l) {
        for (int k = 0; k < p.subcarriers; ++k) x(k, l) = complex_gaussian(rng, 1.0);
    }
    return x;
}

double relative_error(const DDFrame& a, const DDFrame& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        num += std::norm(a.data()[i] - b.data()[i]);
        den += std::norm(b.data()[i]);
    }
    return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("zero frame gives a zero waveform") {
    const FrameParams p = derive_params(8, 6, 2);
    for (const PulseConfig& pulse : {PulseConfig::critical(), PulseConfig::rrc()}) {
        const Waveform w = modulate(DDFrame(8, 6), p, pulse);
        CHECK(w.energy() == 0.0);
        CHECK(demodulate(w, p, pulse).energy() == 0.0);
    }
}

TEST_CASE("impulse at the origin spreads over one chip per subcarrier") {
    const FrameParams p = derive_params(8, 6, 2);
    DDFrame x(8, 6);
    x(0, 0) = 1.0;
    const Waveform w = modulate(x, p, PulseConfig::critical());
    REQUIRE(w.samples.size() == 48u);
    for (int q = 0; q < 48; ++q) {
        const double expected = q % 6 == 0 ? 1.0 / std::sqrt(8.0) : 0.0;
        CHECK(std::abs(w.samples[static_cast<std::size_t>(q)] - expected) < 1e-12);
    }
}

TEST_CASE("chip samples follow the normalised inverse DFT") {
    const FrameParams p = derive_params(6, 5, 1);
    Rng rng(3);
    const DDFrame x = random_frame(p, rng);
    const Waveform w = modulate(x, p, PulseConfig::critical());
    double worst = 0.0;
    for (int l = 0; l < 5; ++l) {
        for (int n = 0; n < 6; ++n) {
            cplx acc{};
            for (int k = 0; k < 6; ++k) acc += x(k, l) * std::polar(1.0, 2.0 * std::numbers::pi * k * n / 6.0);
            acc /= std::sqrt(6.0);
            worst = std::max(worst, std::abs(acc - w.samples[static_cast<std::size_t>(l + n * 5)]));
        }
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("critical pulse round trip and energy") {
    Rng rng(11);
    for (auto [n, m, lmax] : {std::tuple{16, 32, 4}, {64, 16, 3}, {12, 10, 2}}) {
        const FrameParams p = derive_params(n, m, lmax);
        const DDFrame x = random_frame(p, rng);
        const Waveform w = modulate(x, p, PulseConfig::critical());
        CHECK(std::abs(w.energy() - x.energy()) < 1e-10 * x.energy());
        CHECK(max_abs_diff(demodulate(w, p, PulseConfig::critical()), x) < 1e-10);
    }
}

TEST_CASE("rrc taps") {
    const PulseConfig pulse = PulseConfig::rrc(0.1, 8, 8);
    const auto taps = pulse_taps(pulse);
    REQUIRE(taps.size() == 129u);
    double e = 0.0;
    for (double t : taps) e += t * t;
    CHECK(e == Catch::Approx(1.0).epsilon(1e-12));
    for (std::size_t j = 0; j < taps.size(); ++j) CHECK(taps[j] == Catch::Approx(taps[taps.size() - 1 - j]));
    CHECK(std::max_element(taps.begin(), taps.end()) - taps.begin() == 64);

    CHECK(pulse_taps(PulseConfig::critical()) == std::vector<double>{1.0});
    CHECK_THROWS_AS(pulse_taps(PulseConfig::rrc(1.5)), Error);

    // The quarter-period point is a removable singularity.
    const auto wide = pulse_taps(PulseConfig::rrc(0.25, 4, 4));
    for (double t : wide) CHECK(std::isfinite(t));
}

TEST_CASE("rrc round trip stays within the truncation tolerance") {
    // Residual comes from cutting the pulse at +/-8 chips; measured about 2e-2.
    const FrameParams p = derive_params(16, 32, 4);
    const PulseConfig pulse = PulseConfig::rrc(0.1, 8, 8);
    Rng rng(5);
    for (int trial = 0; trial < 5; ++trial) {
        const DDFrame x = random_frame(p, rng);
        const Waveform w = modulate(x, p, pulse);
        CHECK(w.lead == 64);
        CHECK(w.nominal_length == 16 * 32 * 8);
        CHECK(relative_error(demodulate(w, p, pulse), x) < 0.05);
    }
    const PulseConfig longer = PulseConfig::rrc(0.1, 32, 8);
    const DDFrame x = random_frame(p, rng);
    CHECK(relative_error(demodulate(modulate(x, p, longer), p, longer), x) <
          relative_error(demodulate(modulate(x, p, pulse), p, pulse), x));
}

TEST_CASE("demodulate rejects a waveform of the wrong shape") {
    const FrameParams p = derive_params(8, 6, 2);
    Waveform w(std::vector<cplx>(10));
    CHECK_THROWS_AS(demodulate(w, p, PulseConfig::critical()), Error);
    const Waveform ok = modulate(DDFrame(8, 6), p, PulseConfig::rrc());
    CHECK_THROWS_AS(demodulate(ok, p, PulseConfig::critical()), Error);
}

TEST_CASE("PAPR") {
    CHECK(papr_db(Waveform(std::vector<cplx>(32, cplx(0.0, 3.0)))) == Catch::Approx(0.0).margin(1e-12));

    std::vector<cplx> spike(64 * 16);
    spike[100] = 2.0;
    CHECK(papr_db(Waveform(spike)) == Catch::Approx(10.0 * std::log10(64.0 * 16.0)));

    CHECK_THROWS_AS(papr_db(Waveform(std::vector<cplx>(16))), Error);
    CHECK_THROWS_AS(papr_db(Waveform{}), Error);
}

TEST_CASE("ZC frames without zero padding have constant envelope") {
    for (int n : {8, 16, 64}) {
        const FrameParams p = derive_params(n, 8, 0);
        const ZcBasis z = zc_generate(n, 1);
        DDFrame x(n, 8);
        for (int l = 0; l < 8; ++l) {
            for (int k = 0; k < n; ++k) x(k, l) = z.seq[static_cast<std::size_t>((k + 3 * l) % n)];
        }
        CHECK(papr_db(modulate(x, p, PulseConfig::critical())) == Catch::Approx(0.0).margin(1e-9));
    }
}

TEST_CASE("PAPR window excludes pulse tails") {
    const FrameParams p = derive_params(8, 4, 0);
    DDFrame x(8, 4);
    x(0, 0) = 1.0;
    const Waveform w = modulate(x, p, PulseConfig::rrc());
    CHECK(w.samples.size() > static_cast<std::size_t>(w.nominal_length));
    std::vector<cplx> window(w.samples.begin() + w.lead, w.samples.begin() + w.lead + w.nominal_length);
    CHECK(papr_db(w) == Catch::Approx(papr_db(Waveform(window))));
}
