#include "oisac/config.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "oisac/common.hpp"

namespace oisac {

using nlohmann::json;

SystemConfig SystemConfig::make_default() {
    SystemConfig cfg;
    const double sd = deg2rad(10.0);
    cfg.attitude.var_roll = sd * sd;
    cfg.attitude.var_pitch = sd * sd;
    cfg.attitude.var_yaw = sd * sd;
    return cfg;
}

void SystemConfig::validate() const {
    attitude.validate();
    chan_ap_target.validate();
    chan_target_camera.validate();
    chan_ap_eh.validate();
    chan_eh_ap.validate();
    turbulence.validate();
    camera.validate();
    eh.validate();
    if (!(target_reflectivity > 0.0 && target_reflectivity <= 1.0))
        throw std::invalid_argument("SystemConfig: target_reflectivity outside (0, 1]");
    if (trials_mse < 1 || trials_rate < 1)
        throw std::invalid_argument("SystemConfig: trial counts must be >= 1");
    for (int n : quadrature_orders)
        if (n < 1) throw std::invalid_argument("SystemConfig: quadrature orders must be >= 1");
    if ((ap_position - target_position).norm() == 0.0 ||
        (ap_position - eh_position).norm() == 0.0)
        throw std::invalid_argument("SystemConfig: coincident node positions");
}

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw std::invalid_argument("config: " + where + ": " + what);
}

void expect_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    if (!obj.is_object()) fail(where, "expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key())) fail(where, "unknown key '" + it.key() + "'");
}

double get_num(const json& obj, const std::string& where, const std::string& key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) fail(where, "'" + key + "' must be a number");
    return obj[key].get<double>();
}

long get_int(const json& obj, const std::string& where, const std::string& key, long fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer()) fail(where, "'" + key + "' must be an integer");
    return obj[key].get<long>();
}

Vec3 get_vec3(const json& obj, const std::string& where, const std::string& key, Vec3 fallback) {
    if (!obj.contains(key)) return fallback;
    const json& a = obj[key];
    if (!a.is_array() || a.size() != 3 || !a[0].is_number() || !a[1].is_number() ||
        !a[2].is_number())
        fail(where, "'" + key + "' must be an array of 3 numbers");
    return {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
}

void parse_channel_fields(const json& obj, const std::string& where, ChannelParams& p) {
    expect_keys(obj, where,
                {"half_power_angle_deg", "aperture_area_m2", "tia_gain", "refractive_index",
                 "fov_deg", "attenuation_coeff"});
    p.half_power_angle = deg2rad(get_num(obj, where, "half_power_angle_deg",
                                         rad2deg(p.half_power_angle)));
    p.aperture_area = get_num(obj, where, "aperture_area_m2", p.aperture_area);
    p.tia_gain = get_num(obj, where, "tia_gain", p.tia_gain);
    p.refractive_index = get_num(obj, where, "refractive_index", p.refractive_index);
    p.fov = deg2rad(get_num(obj, where, "fov_deg", rad2deg(p.fov)));
    p.attenuation_coeff = get_num(obj, where, "attenuation_coeff", p.attenuation_coeff);
}

SystemConfig parse(const json& root) {
    SystemConfig cfg = SystemConfig::make_default();
    expect_keys(root, "top level",
                {"positions", "attitude", "channel", "turbulence", "camera", "energy",
                 "target_reflectivity", "simulation"});

    if (root.contains("positions")) {
        const json& p = root["positions"];
        expect_keys(p, "positions", {"ap", "target", "eh_sensor"});
        cfg.ap_position = get_vec3(p, "positions", "ap", cfg.ap_position);
        cfg.target_position = get_vec3(p, "positions", "target", cfg.target_position);
        cfg.eh_position = get_vec3(p, "positions", "eh_sensor", cfg.eh_position);
    }

    if (root.contains("attitude")) {
        const json& a = root["attitude"];
        expect_keys(a, "attitude",
                    {"mean_yaw_deg", "sigma_roll_deg", "sigma_pitch_deg", "sigma_yaw_deg"});
        cfg.attitude.mean_yaw = deg2rad(get_num(a, "attitude", "mean_yaw_deg", 0.0));
        auto var_of = [&](const char* key, double fb) {
            const double s = deg2rad(get_num(a, "attitude", key, fb));
            if (s < 0.0) fail("attitude", std::string("'") + key + "' must be >= 0");
            return s * s;
        };
        cfg.attitude.var_roll = var_of("sigma_roll_deg", 10.0);
        cfg.attitude.var_pitch = var_of("sigma_pitch_deg", 10.0);
        cfg.attitude.var_yaw = var_of("sigma_yaw_deg", 10.0);
    }

    if (root.contains("channel")) {
        const json& c = root["channel"];
        if (!c.is_object()) fail("channel", "expected an object");
        json base = c;
        base.erase("overrides");
        parse_channel_fields(base, "channel", cfg.chan_ap_target);
        cfg.chan_target_camera = cfg.chan_ap_target;
        cfg.chan_ap_eh = cfg.chan_ap_target;
        cfg.chan_eh_ap = cfg.chan_ap_target;
        if (c.contains("overrides")) {
            const json& ov = c["overrides"];
            expect_keys(ov, "channel.overrides",
                        {"ap_to_target", "target_to_camera", "ap_to_eh", "eh_to_ap"});
            if (ov.contains("ap_to_target"))
                parse_channel_fields(ov["ap_to_target"], "channel.overrides.ap_to_target",
                                     cfg.chan_ap_target);
            if (ov.contains("target_to_camera"))
                parse_channel_fields(ov["target_to_camera"], "channel.overrides.target_to_camera",
                                     cfg.chan_target_camera);
            if (ov.contains("ap_to_eh"))
                parse_channel_fields(ov["ap_to_eh"], "channel.overrides.ap_to_eh", cfg.chan_ap_eh);
            if (ov.contains("eh_to_ap"))
                parse_channel_fields(ov["eh_to_ap"], "channel.overrides.eh_to_ap", cfg.chan_eh_ap);
        }
    }

    if (root.contains("turbulence")) {
        const json& t = root["turbulence"];
        expect_keys(t, "turbulence", {"sigma_x2", "mu_x", "normalized"});
        cfg.turbulence.sigma_x2 = get_num(t, "turbulence", "sigma_x2", cfg.turbulence.sigma_x2);
        if (t.contains("normalized") && !t["normalized"].is_boolean())
            fail("turbulence", "'normalized' must be a boolean");
        const bool normalized = t.value("normalized", false);
        if (normalized && t.contains("mu_x"))
            fail("turbulence", "'mu_x' conflicts with 'normalized'");
        cfg.turbulence.mu_x = normalized ? -cfg.turbulence.sigma_x2
                                         : get_num(t, "turbulence", "mu_x", cfg.turbulence.mu_x);
    }

    if (root.contains("camera")) {
        const json& c = root["camera"];
        expect_keys(c, "camera",
                    {"rows", "cols", "spacing_x_m", "spacing_y_m", "focal_x_m", "focal_y_m",
                     "area_m2", "eta", "pixel_noise_variance"});
        cfg.camera.rows = static_cast<int>(get_int(c, "camera", "rows", cfg.camera.rows));
        cfg.camera.cols = static_cast<int>(get_int(c, "camera", "cols", cfg.camera.cols));
        cfg.camera.spacing_x = get_num(c, "camera", "spacing_x_m", cfg.camera.spacing_x);
        cfg.camera.spacing_y = get_num(c, "camera", "spacing_y_m", cfg.camera.spacing_y);
        cfg.camera.focal_x = get_num(c, "camera", "focal_x_m", cfg.camera.focal_x);
        cfg.camera.focal_y = get_num(c, "camera", "focal_y_m", cfg.camera.focal_y);
        cfg.camera.cam_area = get_num(c, "camera", "area_m2", cfg.camera.cam_area);
        cfg.camera.eta = get_num(c, "camera", "eta", cfg.camera.eta);
        cfg.camera.pixel_noise_base =
            get_num(c, "camera", "pixel_noise_variance", cfg.camera.pixel_noise_base);
    }

    if (root.contains("energy")) {
        const json& e = root["energy"];
        expect_keys(e, "energy",
                    {"fill_factor", "thermal_voltage_v", "pv_responsivity", "dark_current_a",
                     "pd_responsivity", "noise_variance_a2", "frame_duration_s", "alpha",
                     "downlink_power_w"});
        cfg.eh.fill_factor = get_num(e, "energy", "fill_factor", cfg.eh.fill_factor);
        cfg.eh.thermal_voltage = get_num(e, "energy", "thermal_voltage_v", cfg.eh.thermal_voltage);
        cfg.eh.pv_responsivity = get_num(e, "energy", "pv_responsivity", cfg.eh.pv_responsivity);
        cfg.eh.dark_current = get_num(e, "energy", "dark_current_a", cfg.eh.dark_current);
        cfg.eh.pd_responsivity = get_num(e, "energy", "pd_responsivity", cfg.eh.pd_responsivity);
        cfg.eh.noise_var = get_num(e, "energy", "noise_variance_a2", cfg.eh.noise_var);
        cfg.eh.frame_duration = get_num(e, "energy", "frame_duration_s", cfg.eh.frame_duration);
        cfg.eh.alpha = get_num(e, "energy", "alpha", cfg.eh.alpha);
        if (!(cfg.eh.alpha > 0.0 && cfg.eh.alpha < 1.0))
            fail("energy", "'alpha' must lie in (0, 1)");
        cfg.eh.p_dl = get_num(e, "energy", "downlink_power_w", cfg.eh.p_dl);
    }

    if (root.contains("target_reflectivity")) {
        if (!root["target_reflectivity"].is_number())
            fail("top level", "'target_reflectivity' must be a number");
        cfg.target_reflectivity = root["target_reflectivity"].get<double>();
    }

    if (root.contains("simulation")) {
        const json& s = root["simulation"];
        expect_keys(s, "simulation",
                    {"seed", "trials_mse", "trials_rate", "quadrature_orders",
                     "estimator_attitude", "independent_rate_attitude"});
        if (s.contains("seed")) {
            if (!s["seed"].is_number_unsigned() && !s["seed"].is_number_integer())
                fail("simulation", "'seed' must be an integer");
            cfg.seed = s["seed"].get<std::uint64_t>();
        }
        cfg.trials_mse = get_int(s, "simulation", "trials_mse", cfg.trials_mse);
        cfg.trials_rate = get_int(s, "simulation", "trials_rate", cfg.trials_rate);
        if (s.contains("quadrature_orders")) {
            const json& qo = s["quadrature_orders"];
            if (!qo.is_array() || qo.size() != 3) fail("simulation", "'quadrature_orders' must be [N1,N2,N3]");
            for (int k = 0; k < 3; ++k) {
                if (!qo[k].is_number_integer()) fail("simulation", "'quadrature_orders' entries must be integers");
                cfg.quadrature_orders[k] = qo[k].get<int>();
            }
        }
        if (s.contains("estimator_attitude")) {
            const std::string v = s["estimator_attitude"].get<std::string>();
            if (v == "per-trial")
                cfg.estimator_attitude = EstimatorAttitude::per_trial;
            else if (v == "mean")
                cfg.estimator_attitude = EstimatorAttitude::mean;
            else
                fail("simulation", "'estimator_attitude' must be 'per-trial' or 'mean'");
        }
        if (s.contains("independent_rate_attitude")) {
            if (!s["independent_rate_attitude"].is_boolean())
                fail("simulation", "'independent_rate_attitude' must be a boolean");
            cfg.independent_rate_attitude = s["independent_rate_attitude"].get<bool>();
        }
    }

    cfg.validate();

    const double warn = deg2rad(20.0);
    if (std::sqrt(cfg.attitude.var_roll) > warn || std::sqrt(cfg.attitude.var_pitch) > warn ||
        std::sqrt(cfg.attitude.var_yaw) > warn)
        std::fprintf(stderr,
                     "warning: attitude sigma exceeds 20 deg; the closed forms assume small angles\n");
    return cfg;
}

}  // namespace

SystemConfig config_from_json_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: JSON parse error: ") + e.what());
    }
    return parse(root);
}

SystemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return config_from_json_text(ss.str());
}

std::string config_to_json_text(const SystemConfig& cfg) {
    json j;
    j["positions"] = {{"ap", {cfg.ap_position.x, cfg.ap_position.y, cfg.ap_position.z}},
                      {"target", {cfg.target_position.x, cfg.target_position.y, cfg.target_position.z}},
                      {"eh_sensor", {cfg.eh_position.x, cfg.eh_position.y, cfg.eh_position.z}}};
    j["attitude"] = {{"mean_yaw_rad", cfg.attitude.mean_yaw},
                     {"var_roll_rad2", cfg.attitude.var_roll},
                     {"var_pitch_rad2", cfg.attitude.var_pitch},
                     {"var_yaw_rad2", cfg.attitude.var_yaw}};
    auto chan = [](const ChannelParams& p) {
        return json{{"half_power_angle_rad", p.half_power_angle},
                    {"aperture_area_m2", p.aperture_area},
                    {"tia_gain", p.tia_gain},
                    {"refractive_index", p.refractive_index},
                    {"fov_rad", p.fov},
                    {"attenuation_coeff", p.attenuation_coeff}};
    };
    j["channel"] = {{"ap_to_target", chan(cfg.chan_ap_target)},
                    {"target_to_camera", chan(cfg.chan_target_camera)},
                    {"ap_to_eh", chan(cfg.chan_ap_eh)},
                    {"eh_to_ap", chan(cfg.chan_eh_ap)}};
    j["turbulence"] = {{"mu_x", cfg.turbulence.mu_x}, {"sigma_x2", cfg.turbulence.sigma_x2}};
    j["camera"] = {{"rows", cfg.camera.rows},
                   {"cols", cfg.camera.cols},
                   {"spacing_x_m", cfg.camera.spacing_x},
                   {"spacing_y_m", cfg.camera.spacing_y},
                   {"focal_x_m", cfg.camera.focal_x},
                   {"focal_y_m", cfg.camera.focal_y},
                   {"area_m2", cfg.camera.cam_area},
                   {"eta", cfg.camera.eta},
                   {"pixel_noise_variance", cfg.camera.pixel_noise_base}};
    j["energy"] = {{"fill_factor", cfg.eh.fill_factor},
                   {"thermal_voltage_v", cfg.eh.thermal_voltage},
                   {"pv_responsivity", cfg.eh.pv_responsivity},
                   {"dark_current_a", cfg.eh.dark_current},
                   {"pd_responsivity", cfg.eh.pd_responsivity},
                   {"noise_variance_a2", cfg.eh.noise_var},
                   {"frame_duration_s", cfg.eh.frame_duration},
                   {"alpha", cfg.eh.alpha},
                   {"downlink_power_w", cfg.eh.p_dl}};
    j["target_reflectivity"] = cfg.target_reflectivity;
    j["simulation"] = {{"seed", cfg.seed},
                       {"trials_mse", cfg.trials_mse},
                       {"trials_rate", cfg.trials_rate},
                       {"quadrature_orders", cfg.quadrature_orders},
                       {"estimator_attitude",
                        cfg.estimator_attitude == EstimatorAttitude::per_trial ? "per-trial" : "mean"},
                       {"independent_rate_attitude", cfg.independent_rate_attitude}};
    return j.dump();
}

std::string config_hash(const SystemConfig& cfg) {
    const std::string text = config_to_json_text(cfg);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return buf;
}

}  // namespace oisac
