#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "oisac/common.hpp"
#include "oisac/config.hpp"

using namespace oisac;

TEST_CASE("empty override file loads the reference defaults") {
    const SystemConfig cfg = config_from_json_text("{}");
    CHECK(cfg.ap_position.z == 10.0);
    CHECK(cfg.target_position.x == 2.0);
    CHECK(cfg.target_position.y == 2.0);
    CHECK(cfg.eh_position.x == -2.0);
    CHECK(cfg.eh_position.y == -2.0);
    CHECK(cfg.chan_ap_target.refractive_index == 1.33);
    CHECK(cfg.chan_ap_target.attenuation_coeff == 0.1);
    CHECK(cfg.chan_ap_target.aperture_area == 1e-3);
    CHECK(cfg.chan_ap_target.fov == doctest::Approx(deg2rad(90.0)));
    CHECK(cfg.eh.pd_responsivity == 0.5);
    CHECK(cfg.turbulence.mu_x == -0.1);
    CHECK(cfg.turbulence.sigma_x2 == 0.1);
    CHECK(cfg.camera.cam_area == 1e-3);
    CHECK(cfg.camera.focal_x == 0.05);
    CHECK(cfg.camera.focal_y == 0.05);
    CHECK(cfg.eh.fill_factor == 0.9);
    CHECK(cfg.eh.thermal_voltage == 0.025);
    CHECK(cfg.eh.pv_responsivity == 0.9);
    CHECK(cfg.eh.dark_current == 1e-9);
    CHECK(cfg.seed == 0);
    CHECK(cfg.attitude.var_roll == doctest::Approx(deg2rad(10.0) * deg2rad(10.0)));
    CHECK(cfg.estimator_attitude == EstimatorAttitude::per_trial);
}

TEST_CASE("degree fields convert to radians") {
    const SystemConfig cfg = config_from_json_text(
        R"({"attitude": {"sigma_roll_deg": 5, "mean_yaw_deg": 30},
            "channel": {"fov_deg": 60, "half_power_angle_deg": 30}})");
    CHECK(cfg.attitude.var_roll == doctest::Approx(deg2rad(5.0) * deg2rad(5.0)));
    CHECK(cfg.attitude.mean_yaw == doctest::Approx(deg2rad(30.0)));
    CHECK(cfg.chan_ap_target.fov == doctest::Approx(deg2rad(60.0)));
    CHECK(cfg.chan_ap_eh.half_power_angle == doctest::Approx(deg2rad(30.0)));
}

TEST_CASE("alpha out of range names the field") {
    try {
        config_from_json_text(R"({"energy": {"alpha": 1.2}})");
        FAIL("expected a validation error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("alpha") != std::string::npos);
    }
}

TEST_CASE("unknown keys are rejected") {
    CHECK_THROWS_AS(config_from_json_text(R"({"chanel": {}})"), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json_text(R"({"camera": {"rws": 3}})"), std::invalid_argument);
    try {
        config_from_json_text(R"({"camera": {"rws": 3}})");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("rws") != std::string::npos);
    }
}

TEST_CASE("per-link channel overrides") {
    const SystemConfig cfg = config_from_json_text(
        R"({"channel": {"attenuation_coeff": 0.2,
                        "overrides": {"ap_to_eh": {"attenuation_coeff": 0.05}}}})");
    CHECK(cfg.chan_ap_target.attenuation_coeff == 0.2);
    CHECK(cfg.chan_target_camera.attenuation_coeff == 0.2);
    CHECK(cfg.chan_ap_eh.attenuation_coeff == 0.05);
    CHECK(cfg.chan_eh_ap.attenuation_coeff == 0.2);
}

TEST_CASE("normalized turbulence derives mu_x") {
    const SystemConfig cfg =
        config_from_json_text(R"({"turbulence": {"sigma_x2": 0.2, "normalized": true}})");
    CHECK(cfg.turbulence.mu_x == doctest::Approx(-0.2));
    CHECK_THROWS(config_from_json_text(
        R"({"turbulence": {"sigma_x2": 0.2, "mu_x": -0.1, "normalized": true}})"));
}

TEST_CASE("config hash is stable and sensitive") {
    const SystemConfig a = config_from_json_text("{}");
    const SystemConfig b = config_from_json_text("{}");
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
    SystemConfig c = a;
    c.eh.p_dl *= 2;
    CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("load_config reads files and reports missing ones") {
    const char* path = "test_config_tmp.json";
    {
        std::ofstream out(path);
        out << R"({"simulation": {"seed": 99, "trials_mse": 5000}})";
    }
    const SystemConfig cfg = load_config(path);
    CHECK(cfg.seed == 99);
    CHECK(cfg.trials_mse == 5000);
    std::remove(path);
    CHECK_THROWS_AS(load_config("does_not_exist.json"), std::runtime_error);
}

TEST_CASE("estimator attitude modes parse") {
    const SystemConfig cfg =
        config_from_json_text(R"({"simulation": {"estimator_attitude": "mean"}})");
    CHECK(cfg.estimator_attitude == EstimatorAttitude::mean);
    CHECK_THROWS(config_from_json_text(R"({"simulation": {"estimator_attitude": "genie"}})"));
}
