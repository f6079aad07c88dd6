// Command-line harness: single-point evaluation, the three parameter
// sweeps, and config validation. See README.md for usage.

#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oisac/common.hpp"
#include "oisac/config.hpp"
#include "oisac/energy_rate.hpp"
#include "oisac/sensing.hpp"
#include "oisac/sweep.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<long> trials;
    std::optional<std::string> quadrature;
    std::string out_path;
    std::string format = "csv";
    bool no_montecarlo = false;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool with_out) {
    cmd->add_option("--config", a.config_path, "JSON config file (defaults used when omitted)");
    cmd->add_option("--seed", a.seed, "override the RNG seed");
    cmd->add_option("--trials", a.trials, "override both Monte Carlo trial counts");
    cmd->add_option("--quadrature", a.quadrature, "quadrature orders N1,N2,N3");
    cmd->add_flag("--no-montecarlo", a.no_montecarlo, "analytic results only");
    if (with_out) {
        cmd->add_option("--out", a.out_path, "output file path");
        cmd->add_option("--format", a.format, "output format: csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
    }
}

oisac::SystemConfig resolve_config(const CommonArgs& a) {
    oisac::SystemConfig cfg = a.config_path.empty() ? oisac::SystemConfig::make_default()
                                                    : oisac::load_config(a.config_path);
    if (a.seed) cfg.seed = *a.seed;
    if (a.trials) cfg.trials_mse = cfg.trials_rate = *a.trials;
    if (a.quadrature) {
        int n1 = 0, n2 = 0, n3 = 0;
        if (std::sscanf(a.quadrature->c_str(), "%d,%d,%d", &n1, &n2, &n3) != 3)
            throw std::invalid_argument("--quadrature expects N1,N2,N3");
        cfg.quadrature_orders = {n1, n2, n3};
    }
    cfg.validate();
    return cfg;
}

void emit(const oisac::SweepResult& r, const CommonArgs& a) {
    if (a.out_path.empty()) return;
    if (a.format == "csv")
        oisac::write_csv(r, a.out_path);
    else
        oisac::write_json(r, a.out_path);
    std::printf("wrote %s\n", a.out_path.c_str());
}

int run_simulate(const CommonArgs& a) {
    const oisac::SystemConfig cfg = resolve_config(a);
    std::printf("config_hash: %s\n", oisac::config_hash(cfg).c_str());

    const double amse = oisac::analytic_mse(cfg);
    const double arate = oisac::analytic_rate(cfg, cfg.quadrature_orders);
    std::printf("analytic_mse:  %.6e m^2\n", amse);
    std::printf("analytic_rate: %.6f bits/s/Hz\n", arate);

    oisac::SweepPoint pt;
    pt.sweep_value = cfg.eh.p_dl;
    pt.analytic_mse = amse;
    pt.analytic_rate = arate;
    pt.mc_mse = pt.mc_mse_stderr = pt.mc_rate = pt.mc_rate_stderr = pt.failure_rate =
        std::numeric_limits<double>::quiet_NaN();

    if (!a.no_montecarlo) {
        const auto mse = oisac::monte_carlo_mse(cfg, cfg.trials_mse, 0);
        const auto rate = oisac::monte_carlo_rate(cfg, cfg.trials_rate, 1);
        std::printf("mc_mse:        %.6e m^2 (stderr %.2e, failure rate %.4f, %ld trials)\n",
                    mse.mse, mse.std_error, mse.failure_rate, mse.trials);
        std::printf("mc_rate:       %.6f bits/s/Hz (stderr %.2e, %ld trials)\n", rate.rate,
                    rate.std_error, rate.trials);
        pt.mc_mse = mse.mse;
        pt.mc_mse_stderr = mse.std_error;
        pt.failure_rate = mse.failure_rate;
        pt.mc_rate = rate.rate;
        pt.mc_rate_stderr = rate.std_error;
    }

    oisac::SweepResult r;
    r.variable = "single_point";
    r.config_hash = oisac::config_hash(cfg);
    r.seed = cfg.seed;
    r.tool_version = oisac::kVersion;
    r.points.push_back(pt);
    emit(r, a);
    return 0;
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> g;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t next = text.find(',', pos);
        if (next == std::string::npos) next = text.size();
        g.push_back(std::stod(text.substr(pos, next - pos)));
        pos = next + 1;
    }
    return g;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Underwater optical ISAC link simulator"};
    app.require_subcommand(1);

    CommonArgs sim_args, pw_args, sp_args, al_args;
    std::string vc_path, pw_grid, sp_grid, al_grid;

    CLI::App* sim = app.add_subcommand("simulate", "evaluate one scenario point");
    add_common(sim, sim_args, true);

    CLI::App* pw = app.add_subcommand("sweep-power", "sweep downlink transmit power");
    add_common(pw, pw_args, true);
    pw->add_option("--grid", pw_grid, "comma-separated powers in watts (default: 4-decade logspace)");

    CLI::App* sp = app.add_subcommand("sweep-spacing", "sweep camera grid spacing");
    add_common(sp, sp_args, true);
    sp->add_option("--grid", sp_grid, "comma-separated spacings in meters (default: 0.2..5 step 0.2)");

    CLI::App* al = app.add_subcommand("sweep-alpha", "sweep the harvest-use fraction");
    add_common(al, al_args, true);
    al->add_option("--grid", al_grid, "comma-separated fractions in (0,1) (default: 0.05..0.95)");

    CLI::App* vc = app.add_subcommand("validate-config", "check a config file and print its hash");
    vc->add_option("--config", vc_path, "JSON config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return run_simulate(sim_args);

        if (vc->parsed()) {
            const oisac::SystemConfig cfg = oisac::load_config(vc_path);
            std::printf("ok config_hash=%s\n", oisac::config_hash(cfg).c_str());
            return 0;
        }

        const CommonArgs* args = pw->parsed() ? &pw_args : sp->parsed() ? &sp_args : &al_args;
        const oisac::SystemConfig cfg = resolve_config(*args);
        oisac::SweepOptions opts;
        opts.montecarlo = !args->no_montecarlo;

        oisac::SweepResult r;
        if (pw->parsed()) {
            const auto grid = pw_grid.empty() ? oisac::default_power_grid() : parse_grid(pw_grid);
            r = oisac::sweep_power(cfg, grid, opts);
        } else if (sp->parsed()) {
            const auto grid = sp_grid.empty() ? oisac::default_spacing_grid() : parse_grid(sp_grid);
            r = oisac::sweep_spacing(cfg, grid, opts);
        } else {
            const auto grid = al_grid.empty() ? oisac::default_alpha_grid() : parse_grid(al_grid);
            r = oisac::sweep_alpha(cfg, grid, opts);
        }

        for (const auto& p : r.points)
            std::printf("%-12g analytic_mse=%.4e mc_mse=%.4e analytic_rate=%.4f mc_rate=%.4f\n",
                        p.sweep_value, p.analytic_mse, p.mc_mse, p.analytic_rate, p.mc_rate);
        emit(r, *args);
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
