#include "oisac/sweep.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "oisac/common.hpp"
#include "oisac/energy_rate.hpp"
#include "oisac/sensing.hpp"

namespace oisac {

using nlohmann::json;

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void check_grid(std::span<const double> grid) {
    if (grid.empty()) throw std::invalid_argument("sweep: empty grid");
    for (size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("sweep: grid must be strictly increasing");
}

SweepResult run_sweep(const SystemConfig& base, std::span<const double> grid,
                      const std::string& variable, const SweepOptions& opts,
                      const std::function<void(SystemConfig&, double)>& apply) {
    check_grid(grid);
    SweepResult res;
    res.variable = variable;
    res.config_hash = config_hash(base);
    res.seed = base.seed;
    res.timestamp = utc_timestamp();
    res.tool_version = kVersion;
    res.points.reserve(grid.size());

    for (size_t i = 0; i < grid.size(); ++i) {
        SystemConfig cfg = base;
        apply(cfg, grid[i]);
        SweepPoint pt;
        pt.sweep_value = grid[i];
        pt.analytic_mse = pt.mc_mse = pt.mc_mse_stderr = kNan;
        pt.analytic_rate = pt.mc_rate = pt.mc_rate_stderr = pt.failure_rate = kNan;
        // failed quantities stay NaN, the sweep continues
        try {
            pt.analytic_mse = analytic_mse(cfg);
        } catch (const std::exception&) {
        }
        try {
            pt.analytic_rate = analytic_rate(cfg, cfg.quadrature_orders);
        } catch (const std::exception&) {
        }
        if (opts.montecarlo) {
            // substream domains: even for the sensing draws, odd for the rate
            try {
                const auto mse = monte_carlo_mse(cfg, cfg.trials_mse, 2 * i);
                pt.mc_mse = mse.mse;
                pt.mc_mse_stderr = mse.std_error;
                pt.failure_rate = mse.failure_rate;
            } catch (const std::exception&) {
            }
            try {
                const auto rate = monte_carlo_rate(cfg, cfg.trials_rate, 2 * i + 1);
                pt.mc_rate = rate.rate;
                pt.mc_rate_stderr = rate.std_error;
            } catch (const std::exception&) {
            }
        }
        res.points.push_back(pt);
    }
    return res;
}

}  // namespace

SweepResult sweep_power(const SystemConfig& cfg, std::span<const double> grid,
                        const SweepOptions& opts) {
    for (double p : grid)
        if (!(p > 0.0)) throw std::invalid_argument("sweep_power: powers must be positive");
    return run_sweep(cfg, grid, "p_dl_w", opts, [](SystemConfig& c, double v) { c.eh.p_dl = v; });
}

SweepResult sweep_spacing(const SystemConfig& cfg, std::span<const double> grid,
                          const SweepOptions& opts) {
    for (double r : grid)
        if (!(r > 0.0)) throw std::invalid_argument("sweep_spacing: spacings must be positive");
    return run_sweep(cfg, grid, "camera_spacing_m", opts, [](SystemConfig& c, double v) {
        c.camera.spacing_x = v;
        c.camera.spacing_y = v;
    });
}

SweepResult sweep_alpha(const SystemConfig& cfg, std::span<const double> grid,
                        const SweepOptions& opts) {
    for (double a : grid)
        if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("sweep_alpha: grid must lie in (0, 1)");
    return run_sweep(cfg, grid, "alpha", opts, [](SystemConfig& c, double v) { c.eh.alpha = v; });
}

std::vector<double> default_power_grid() {
    std::vector<double> g(10);
    for (int i = 0; i < 10; ++i) g[i] = 3e4 * std::pow(10.0, 4.0 * i / 9.0);
    return g;
}

std::vector<double> default_spacing_grid() {
    std::vector<double> g;
    for (int i = 1; i <= 25; ++i) g.push_back(0.2 * i);
    return g;
}

std::vector<double> default_alpha_grid() {
    std::vector<double> g;
    for (int i = 1; i <= 19; ++i) g.push_back(0.05 * i);
    return g;
}

namespace {
std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
}  // namespace

void write_csv(const SweepResult& r, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_csv: cannot open '" + path + "'");
    out << "# config_hash=" << r.config_hash << " seed=" << r.seed
        << " tool_version=" << r.tool_version << " variable=" << r.variable << "\n";
    out << "sweep_value,analytic_mse,mc_mse,mc_mse_stderr,analytic_rate,mc_rate,mc_rate_stderr,"
           "failure_rate\n";
    for (const auto& p : r.points) {
        out << fmt(p.sweep_value) << ',' << fmt(p.analytic_mse) << ',' << fmt(p.mc_mse) << ','
            << fmt(p.mc_mse_stderr) << ',' << fmt(p.analytic_rate) << ',' << fmt(p.mc_rate) << ','
            << fmt(p.mc_rate_stderr) << ',' << fmt(p.failure_rate) << '\n';
    }
    if (!out) throw std::runtime_error("write_csv: write failed for '" + path + "'");
}

void write_json(const SweepResult& r, const std::string& path) {
    json j;
    j["variable"] = r.variable;
    j["config_hash"] = r.config_hash;
    j["seed"] = r.seed;
    j["timestamp"] = r.timestamp;
    j["tool_version"] = r.tool_version;
    j["points"] = json::array();
    for (const auto& p : r.points) {
        // NaN is not representable in JSON; emit null and map back on read
        auto num = [](double v) { return std::isnan(v) ? json() : json(v); };
        j["points"].push_back({{"sweep_value", p.sweep_value},
                               {"analytic_mse", num(p.analytic_mse)},
                               {"mc_mse", num(p.mc_mse)},
                               {"mc_mse_stderr", num(p.mc_mse_stderr)},
                               {"analytic_rate", num(p.analytic_rate)},
                               {"mc_rate", num(p.mc_rate)},
                               {"mc_rate_stderr", num(p.mc_rate_stderr)},
                               {"failure_rate", num(p.failure_rate)}});
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_json: cannot open '" + path + "'");
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write_json: write failed for '" + path + "'");
}

SweepResult read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_json: cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error("read_json: parse error in '" + path + "': " + e.what());
    }
    SweepResult r;
    r.variable = j.at("variable").get<std::string>();
    r.config_hash = j.at("config_hash").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.timestamp = j.at("timestamp").get<std::string>();
    r.tool_version = j.at("tool_version").get<std::string>();
    auto num = [](const json& v) { return v.is_null() ? kNan : v.get<double>(); };
    for (const auto& p : j.at("points")) {
        SweepPoint pt;
        pt.sweep_value = p.at("sweep_value").get<double>();
        pt.analytic_mse = num(p.at("analytic_mse"));
        pt.mc_mse = num(p.at("mc_mse"));
        pt.mc_mse_stderr = num(p.at("mc_mse_stderr"));
        pt.analytic_rate = num(p.at("analytic_rate"));
        pt.mc_rate = num(p.at("mc_rate"));
        pt.mc_rate_stderr = num(p.at("mc_rate_stderr"));
        pt.failure_rate = num(p.at("failure_rate"));
        r.points.push_back(pt);
    }
    return r;
}

}  // namespace oisac
