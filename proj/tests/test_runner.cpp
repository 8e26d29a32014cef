#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ionfilm/dispersion.hpp"
#include "ionfilm/runner.hpp"

using namespace ionfilm;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::string kDataDir = std::string(IONFILM_TEST_DATA);

double row_value(const Report& rep, const std::string& label) {
    for (size_t i = 0; i < rep.row_labels.size(); ++i) {
        if (rep.row_labels[i] == label) return rep.rows[i][0];
    }
    FAIL("missing row ", label);
    return 0;
}

} // namespace

TEST_CASE("lab-unit config and its SI twin produce identical output") {
    const RunConfig si = parse_config_text(Mode::steady, read_file(kDataDir + "/silicon_250eV.cfg"));
    const RunConfig lab =
        parse_config_text(Mode::steady, read_file(kDataDir + "/silicon_250eV_lab.cfg"));
    REQUIRE(si.material.has_value());
    REQUIRE(lab.material.has_value());
    CHECK(si.material->flux == lab.material->flux);
    CHECK(si.material->strain_per_dose == lab.material->strain_per_dose);
    CHECK(si.material->thickness == lab.material->thickness);
    CHECK(si.material->shear_modulus == lab.material->shear_modulus);
    CHECK(si.material->surface_energy == lab.material->surface_energy);
    CHECK(si.measured_stress == lab.measured_stress);
    CHECK(to_csv(run_steady(si)) == to_csv(run_steady(lab)));
}

TEST_CASE("config errors name the offender") {
    CHECK_THROWS_WITH_AS(parse_config_text(Mode::steady, "viscosity = 1"),
                         doctest::Contains("viscosity"), config_error);
    CHECK_THROWS_WITH_AS(parse_config_text(Mode::steady, "eta = 1 Pa*s\nflux = 1"),
                         doctest::Contains("shear_modulus"), config_error);
    CHECK_THROWS_WITH_AS(parse_config_text(Mode::steady, "eta = fast"),
                         doctest::Contains("fast"), config_error);
    CHECK_THROWS_WITH_AS(parse_config_text(Mode::steady, "thickness = 2 lightyears"),
                         doctest::Contains("lightyears"), config_error);
    CHECK_THROWS_AS(parse_config_text(Mode::steady, "eta = inf"), config_error);
}

TEST_CASE("mode-specific validation") {
    RunConfig cfg = parse_config_text(Mode::neutral, read_file(kDataDir + "/neutral_c1.cfg"));
    CHECK_NOTHROW(validate_config(cfg));

    RunConfig bad = cfg;
    bad.sweep.variable = 'k';
    CHECK_THROWS_AS(validate_config(bad), config_error);
    bad = cfg;
    bad.sweep.count = 1;
    CHECK_THROWS_AS(validate_config(bad), config_error);
    bad = cfg;
    bad.sweep.min = 0.0;
    bad.sweep.spacing = Spacing::log;
    CHECK_THROWS_AS(validate_config(bad), config_error);
    bad = cfg;
    bad.sweep.min = 5.0;
    CHECK_THROWS_AS(validate_config(bad), config_error);

    RunConfig verify = parse_config_text(Mode::verify, "");
    CHECK_NOTHROW(validate_config(verify));

    RunConfig disp = parse_config_text(Mode::dispersion, read_file(kDataDir + "/viscous_paper.cfg"));
    CHECK_THROWS_AS(validate_config(disp), config_error); // sentinel: use viscous mode
}

TEST_CASE("steady report carries the headline numbers") {
    const RunConfig cfg =
        parse_config_text(Mode::steady, read_file(kDataDir + "/silicon_250eV.cfg"));
    const Report rep = run_steady(cfg);
    CHECK(row_value(rep, "stress_xx") == doctest::Approx(-6.51e8).epsilon(1e-12));
    CHECK(row_value(rep, "measured_over_computed") ==
          doctest::Approx(2.150537634408602).epsilon(1e-12));
    const std::string csv = to_csv(rep);
    CHECK(csv.find("compressive") != std::string::npos);
    CHECK(csv.find("\r") == std::string::npos); // LF only
}

TEST_CASE("steady report with the beam off is all zeros") {
    RunConfig cfg = parse_config_text(Mode::steady, read_file(kDataDir + "/silicon_250eV.cfg"));
    cfg.material->flux = 0.0;
    cfg.measured_stress.reset();
    const Report rep = run_steady(cfg);
    CHECK(row_value(rep, "stress_xx") == 0.0);
    CHECK(row_value(rep, "strain_zz") == 0.0);
}

TEST_CASE("incompressible sentinel marks the strain rows") {
    RunConfig cfg = parse_config_text(Mode::steady, read_file(kDataDir + "/silicon_250eV.cfg"));
    cfg.material->bulk_modulus = infinite_modulus;
    const std::string csv = to_csv(run_steady(cfg));
    CHECK(csv.find("incompressible") != std::string::npos);
}

TEST_CASE("neutral sweep is strictly negative and decreasing, with the quadratic onset") {
    const RunConfig cfg = parse_config_text(Mode::neutral, read_file(kDataDir + "/neutral_c1.cfg"));
    const Report rep = run_neutral(cfg);
    REQUIRE(rep.rows.size() == 300);
    double prev = 0.0;
    for (const auto& row : rep.rows) {
        CHECK(row[1] < 0.0);
        CHECK(row[1] < prev);
        prev = row[1];
    }
    // first row at Q = 0.01 follows D* ~ -(4/3) C Q^2
    CHECK(rep.rows[0][1] == doctest::Approx(-4.0 / 3.0 * 1e-4).epsilon(1e-4));
    CHECK(rep.rows[0][0] == 0.01);
}

TEST_CASE("dispersion sweep on the reference film is stable and converged") {
    RunConfig cfg = parse_config_text(Mode::dispersion, read_file(kDataDir + "/silicon_250eV.cfg"));
    cfg.sweep.variable = 'Q';
    cfg.sweep.min = 0.05;
    cfg.sweep.max = 2.0;
    cfg.sweep.count = 12;
    cfg.sweep.spacing = Spacing::log;
    cfg.sweep.present = true;
    const Report rep = run_dispersion(cfg);
    REQUIRE(rep.rows.size() == 12);
    for (const auto& row : rep.rows) {
        CHECK(row[2] < 0.0);             // sigma
        CHECK(row[3] < 0.0);             // R
        CHECK(row[4] == 1.0);            // converged
        CHECK(row[1] == doctest::Approx(row[0] * cfg.material->thickness)); // Q = k h
    }
    CHECK(rep.exit_code == 0);
}

TEST_CASE("viscous sweep reduces to the leveling rate without the beam") {
    RunConfig cfg = parse_config_text(Mode::viscous, read_file(kDataDir + "/viscous_paper.cfg"));
    cfg.material->flux = 0.0;
    const Report rep = run_dispersion(cfg);
    for (const auto& row : rep.rows) {
        const double expect = viscous_growth(*cfg.material, row[0]);
        CHECK(row[2] == expect);
        CHECK(row[2] < 0.0);
    }
}

TEST_CASE("empty forcing yields an all-zero growth column") {
    RunConfig cfg = parse_config_text(Mode::viscous, read_file(kDataDir + "/viscous_paper.cfg"));
    cfg.material->flux = 0.0;
    cfg.material->surface_energy = 0.0;
    const Report rep = run_dispersion(cfg);
    for (const auto& row : rep.rows) CHECK(row[2] == 0.0);
}

TEST_CASE("identical config produces byte-identical CSV") {
    const RunConfig cfg = parse_config_text(Mode::neutral, read_file(kDataDir + "/neutral_c1.cfg"));
    CHECK(to_csv(run_neutral(cfg)) == to_csv(run_neutral(cfg)));
}

TEST_CASE("JSON round-trips every numeric cell exactly") {
    RunConfig cfg = parse_config_text(Mode::dispersion, read_file(kDataDir + "/silicon_250eV.cfg"));
    cfg.sweep.variable = 'Q';
    cfg.sweep.min = 0.1;
    cfg.sweep.max = 1.0;
    cfg.sweep.count = 5;
    cfg.sweep.present = true;
    const Report rep = run_dispersion(cfg);
    const std::string payload = to_json(rep, cfg, 0.0);
    const nlohmann::json j = nlohmann::json::parse(payload);
    REQUIRE(j["results"].size() == rep.rows.size());
    for (size_t r = 0; r < rep.rows.size(); ++r) {
        for (size_t c = 0; c < rep.columns.size(); ++c) {
            const double got = j["results"][r][rep.columns[c]].get<double>();
            CHECK(got == rep.rows[r][c]);
        }
    }
    CHECK(j["metadata"]["version"] == kVersion);
    CHECK(j["config_echo"]["material"]["eta"].get<double>() == cfg.material->eta);
}

TEST_CASE("verify: single point agrees across paths and exits clean") {
    RunConfig cfg = parse_config_text(
        Mode::verify, "verify_q = 0.5\nverify_d = 0.2\nverify_c = 0.1\nverify_gamma = 10");
    const Report rep = run_verify(cfg);
    REQUIRE(rep.rows.size() == 1);
    CHECK(rep.rows[0][6] <= 1e-6); // rel_dev
    CHECK(rep.rows[0][7] == 1.0);  // converged
    CHECK(rep.exit_code == 0);
}

TEST_CASE("verify: starved integrator is reported per row with a failing exit") {
    RunConfig cfg = parse_config_text(
        Mode::verify,
        "verify_q = 0.5\nverify_d = 0.2\nverify_c = 0.1\nverify_gamma = 10\nn_steps = 10");
    const Report rep = run_verify(cfg);
    REQUIRE(rep.rows.size() == 1);
    CHECK(rep.rows[0][7] == 0.0);
    CHECK(rep.exit_code == 2);
}

TEST_CASE("verify: tolerance tighter than the agreement fails with code 3") {
    RunConfig cfg = parse_config_text(
        Mode::verify,
        "verify_q = 0.5\nverify_d = 0.2\nverify_c = 0.1\nverify_gamma = 10\ntol = 1e-14");
    const Report rep = run_verify(cfg);
    CHECK(rep.exit_code == 3);
}
