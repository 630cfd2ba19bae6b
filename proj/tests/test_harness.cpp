// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "dsk/error.hpp"
#include "dsk/harness.hpp"

using namespace dsk;

namespace {

ExperimentConfig small(Scenario s) {
    ExperimentConfig cfg;
    cfg.scenario = s;
    cfg.subcarriers = 16;
    cfg.symbols = 12;
    cfg.max_delay = 3;
    cfg.max_doppler = 2;
    cfg.frames = 30;
    cfg.paths = 3;
    cfg.snr_db = {4.0, 12.0};
    return cfg;
}

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::parse_error;
}

}  // namespace

TEST_CASE("configuration validation") {
    ExperimentConfig cfg = small(Scenario::p2p_dsk);
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.detector_kind() == DetectorKind::sicmrc_successive);
    cfg.detector = DetectorKind::lmmse;
    CHECK(code_of([&] { cfg.validate(); }) == ErrorCode::incompatible_config);
    cfg.detector = DetectorKind::mp;
    CHECK_NOTHROW(cfg.validate());

    ExperimentConfig bpsk = small(Scenario::mu_bpsk);
    bpsk.users = 2;
    CHECK(bpsk.detector_kind() == DetectorKind::lmmse);
    CHECK_NOTHROW(bpsk.validate());
    bpsk.detector = DetectorKind::sicmrc_parallel;
    CHECK(code_of([&] { bpsk.validate(); }) == ErrorCode::incompatible_config);

    ExperimentConfig mu = small(Scenario::mu_dsk);
    mu.detector = DetectorKind::mp;
    CHECK(code_of([&] { mu.validate(); }) == ErrorCode::incompatible_config);

    ExperimentConfig p2p = small(Scenario::p2p_dsk);
    p2p.users = 3;
    CHECK(code_of([&] { p2p.validate(); }) == ErrorCode::incompatible_config);
    p2p.users = 1;
    p2p.frames = 0;
    CHECK(code_of([&] { p2p.validate(); }) == ErrorCode::invalid_dimension);
}

TEST_CASE("derived Doppler bound and full scale") {
    ExperimentConfig cfg;
    cfg.apply_full_scale();
    CHECK(cfg.symbols == 256);
    CHECK(cfg.frames == 10000);
    CHECK(cfg.frame_params().max_doppler == 8);
    CHECK(cfg.frame_params().data_symbols == 246);
    cfg.max_doppler = 3;
    CHECK(cfg.frame_params().max_doppler == 3);
}

TEST_CASE("settings and config files") {
    ExperimentConfig cfg;
    apply_setting(cfg, "scenario", "mu-dsk");
    apply_setting(cfg, "detector", "sicmrc-par");
    apply_setting(cfg, "snr-db", "4:2:14");
    apply_setting(cfg, "users", "8");
    apply_setting(cfg, "speed_kmh", "500");
    apply_setting(cfg, "csi_error_db", "-20");
    apply_setting(cfg, "seed", "123456789012");
    CHECK(cfg.scenario == Scenario::mu_dsk);
    CHECK(cfg.detector == DetectorKind::sicmrc_parallel);
    CHECK(cfg.snr_db == std::vector<double>{4, 6, 8, 10, 12, 14});
    CHECK(cfg.users == 8);
    CHECK(cfg.phys.max_speed_mps == Catch::Approx(500.0 / 3.6));
    CHECK(*cfg.csi_error_db == -20.0);
    CHECK(cfg.seed == 123456789012ULL);
    CHECK(code_of([&] { apply_setting(cfg, "colour", "blue"); }) == ErrorCode::parse_error);
    CHECK(code_of([&] { apply_setting(cfg, "users", "8x"); }) == ErrorCode::parse_error);
    CHECK(code_of([&] { apply_setting(cfg, "detector", "ml"); }) == ErrorCode::parse_error);

    CHECK(parse_number_list("1, 2.5,-3") == std::vector<double>{1.0, 2.5, -3.0});
    CHECK(parse_number_list("0:0.5:1,5") == std::vector<double>{0.0, 0.5, 1.0, 5.0});
    CHECK_THROWS_AS(parse_number_list(""), Error);
    CHECK_THROWS_AS(parse_number_list("1:0:3"), Error);

    const std::string path = "harness_test_config.txt";
    {
        std::ofstream out(path);
        out << "# desk run\nscenario = p2p-bpsk\n\nframes = 77   # trailing comment\nsnr_db = 8,10\n";
    }
    const ExperimentConfig loaded = load_config(path);
    CHECK(loaded.scenario == Scenario::p2p_bpsk);
    CHECK(loaded.frames == 77);
    CHECK(loaded.snr_db == std::vector<double>{8.0, 10.0});
    {
        std::ofstream out(path);
        out << "frames 77\n";
    }
    CHECK_THROWS_AS(load_config(path), Error);
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_config("does/not/exist.cfg"), Error);
}

TEST_CASE("BER runs are reproducible and thread independent") {
    for (Scenario s : {Scenario::p2p_dsk, Scenario::mu_dsk, Scenario::p2p_bpsk, Scenario::mu_bpsk}) {
        ExperimentConfig cfg = small(s);
        if (is_multi_user(s)) cfg.users = 2;
        const std::string a = ber_csv(run_ber(cfg));
        CHECK(a == ber_csv(run_ber(cfg)));
        cfg.threads = 4;
        CHECK(a == ber_csv(run_ber(cfg)));
        cfg.seed = 2;
        CHECK(a != ber_csv(run_ber(cfg)));
    }
}

TEST_CASE("BER table layout") {
    ExperimentConfig cfg = small(Scenario::mu_dsk);
    cfg.users = 2;
    const ExperimentResult r = run_ber(cfg);
    REQUIRE(r.rows.size() == 6u);
    CHECK(r.rows[0].user == 0);
    CHECK(r.rows[1].user == 1);
    CHECK(r.rows[2].user == -1);
    const FrameParams p = cfg.frame_params();
    CHECK(r.rows[0].bits == static_cast<std::uint64_t>(p.data_symbols * p.bits_per_symbol * cfg.frames));
    CHECK(r.aggregate(12.0).bits == 2 * r.rows[0].bits);
    CHECK(r.aggregate(12.0).bit_errors == r.rows[3].bit_errors + r.rows[4].bit_errors);
    CHECK(r.aggregate(12.0).mean_iterations >= 1.0);
    CHECK(r.aggregate(12.0).mean_iterations <= 5.0);
    CHECK_THROWS_AS(r.aggregate(7.0), Error);

    const std::string csv = ber_csv(r);
    CHECK(csv.rfind("snr_db,user,bit_errors,bits,ber,mean_iters\n4,0,", 0) == 0);
    CHECK(csv.find("\n12,all,") != std::string::npos);
    CHECK(csv.back() == '\n');
}

TEST_CASE("single-tap channels at high SNR are error free") {
    for (auto [s, d] : {std::pair{Scenario::p2p_dsk, DetectorKind::mp}, {Scenario::p2p_dsk, DetectorKind::sicmrc_successive},
                        {Scenario::mu_dsk, DetectorKind::sicmrc_parallel}, {Scenario::p2p_bpsk, DetectorKind::lmmse},
                        {Scenario::mu_bpsk, DetectorKind::lmmse}}) {
        ExperimentConfig cfg = small(s);
        cfg.detector = d;
        cfg.paths = 1;
        cfg.snr_db = {200.0};
        if (is_multi_user(s)) cfg.users = 2;
        CHECK(run_ber(cfg).aggregate(200.0).bit_errors == 0);
    }
    ExperimentConfig onehot = small(Scenario::p2p_dsk);
    onehot.mapper = Mapper::onehot;
    onehot.paths = 1;
    onehot.snr_db = {200.0};
    CHECK(run_ber(onehot).aggregate(200.0).bit_errors == 0);
}

TEST_CASE("convergence runs") {
    ExperimentConfig cfg = small(Scenario::p2p_dsk);
    cfg.paths = 1;
    cfg.snr_db = {6.0};
    const ExperimentResult flat = run_convergence(cfg);
    REQUIRE(flat.iteration_rows.size() == 5u);
    for (const auto& row : flat.iteration_rows) CHECK(row.bit_errors == flat.iteration_rows.front().bit_errors);
    CHECK(flat.iteration_rows.front().bit_errors == run_ber(cfg).aggregate(6.0).bit_errors);

    cfg.paths = 4;
    const ExperimentResult multi = run_convergence(cfg);
    // The last iteration row is the final decision.
    CHECK(multi.iteration_rows.back().bit_errors == run_ber(cfg).aggregate(6.0).bit_errors);
    const std::string csv = convergence_csv(multi);
    CHECK(csv.rfind("snr_db,iteration,bit_errors,bits,ber\n6,1,", 0) == 0);

    cfg.detector = DetectorKind::mp;
    CHECK(code_of([&] { run_convergence(cfg); }) == ErrorCode::wrong_detector);
}

TEST_CASE("PAPR runs") {
    ExperimentConfig cfg = small(Scenario::p2p_dsk);
    cfg.max_delay = 0;
    cfg.frames = 20;
    const PaprResult flat = run_papr(cfg);
    REQUIRE(flat.papr_db.size() == 20u);
    for (double v : flat.papr_db) CHECK(v == Catch::Approx(0.0).margin(1e-9));
    CHECK(flat.ccdf.size() == 151u);
    CHECK(flat.ccdf.front().ccdf == 0.0);
    CHECK(flat.threshold_at(1e-3) == 0.0);

    ExperimentConfig rrc = small(Scenario::p2p_bpsk);
    rrc.pulse = PulseConfig::rrc();
    rrc.frames = 50;
    const PaprResult r = run_papr(rrc);
    for (std::size_t i = 1; i < r.ccdf.size(); ++i) CHECK(r.ccdf[i].ccdf <= r.ccdf[i - 1].ccdf);
    CHECK(r.ccdf.front().ccdf == 1.0);
    rrc.threads = 3;
    CHECK(papr_csv(run_papr(rrc)) == papr_csv(r));
    CHECK(papr_csv(r).rfind("threshold_db,ccdf\n0.0,1.000000e+00\n0.1,", 0) == 0);
}

TEST_CASE("root reports") {
    const RootsReport rep = run_roots(3, 64, 1, false);
    CHECK(rep.roots == std::vector<int>{1, 3, 5});
    CHECK(roots_csv(rep) ==
          "user,root,psi_max_sq_num,psi_max_sq_den,pairs\n0,1,4,64,1\n1,3,2,64,2\n2,5,4,64,1\n");
    CHECK_FALSE(rep.verified);

    const RootsReport checked = run_roots(4, 16, 1, true);
    CHECK(checked.verified);
    REQUIRE(checked.oracle.has_value());
    CHECK(checked.oracle->metrics.attaining_pairs == checked.metrics.attaining_pairs);

    CHECK(code_of([] { run_roots(2, 64, 2, false); }) == ErrorCode::even_m0);
}
