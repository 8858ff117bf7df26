#include <cstdio>
#include <map>
#include <sstream>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "hydrostat/checkpoint.hpp"
#include "hydrostat/cli_harness.hpp"

using namespace hydrostat;

namespace {

void add_common_flags(CLI::App* cmd, RunConfig& cfg, std::string& config_path,
                      std::string& grid_spec, std::string& eps_spec) {
    cmd->add_option("--config", config_path, "flat key=value config file");
    cmd->add_option("--out", cfg.out, "output directory");
    cmd->add_option("--jobs", cfg.jobs, "worker pool size");
    cmd->add_option("--seed", cfg.seed, "random seed");
    cmd->add_option("--eps", eps_spec, "comma-separated epsilon list");
    cmd->add_option("--grid", grid_spec, "N or NHxNV grid points");
    cmd->add_option("--dt", cfg.dt, "time step");
    cmd->add_option("--T", cfg.T, "horizon");
    cmd->add_option("--q", cfg.q, "vertical norm exponent");
    cmd->add_option("--preset", cfg.preset, "initial data preset");
    cmd->add_option("--checkpoint", cfg.checkpoint, "initial data checkpoint");
    cmd->add_option("--store-stride", cfg.store_stride, "trajectory storage stride");
    cmd->add_option("--segments", cfg.segments, "fixed-point restart segments");
    cmd->add_flag("--no-picard", "skip the fixed-point difference solve");
    cmd->add_option("--suite", "comma-separated certificate ids");
}

void apply_common(CLI::App* cmd, RunConfig& cfg, const std::string& config_path,
                  const std::string& grid_spec, const std::string& eps_spec) {
    if (!config_path.empty()) {
        RunConfig file_cfg = parse_config_file(config_path);
        // command line overrides file values
        const RunConfig defaults;
        file_cfg.mode = cfg.mode;
        if (cfg.out != defaults.out) file_cfg.out = cfg.out;
        if (cfg.jobs != defaults.jobs) file_cfg.jobs = cfg.jobs;
        if (cfg.seed != defaults.seed) file_cfg.seed = cfg.seed;
        if (cfg.dt != defaults.dt) file_cfg.dt = cfg.dt;
        if (cfg.T != defaults.T) file_cfg.T = cfg.T;
        if (cfg.q != defaults.q) file_cfg.q = cfg.q;
        if (cfg.preset != defaults.preset) file_cfg.preset = cfg.preset;
        if (!cfg.checkpoint.empty()) file_cfg.checkpoint = cfg.checkpoint;
        if (cfg.store_stride != defaults.store_stride)
            file_cfg.store_stride = cfg.store_stride;
        if (cfg.segments != defaults.segments) file_cfg.segments = cfg.segments;
        cfg = file_cfg;
    }
    if (!grid_spec.empty()) {
        const auto x = grid_spec.find('x');
        if (x == std::string::npos) {
            cfg.grid_h = cfg.grid_v = std::stoi(grid_spec);
        } else {
            cfg.grid_h = std::stoi(grid_spec.substr(0, x));
            cfg.grid_v = std::stoi(grid_spec.substr(x + 1));
        }
    }
    if (!eps_spec.empty()) {
        cfg.eps.clear();
        std::stringstream ss(eps_spec);
        std::string tok;
        while (std::getline(ss, tok, ','))
            if (!tok.empty()) cfg.eps.push_back(std::stod(tok));
    }
    if (cmd->count("--no-picard")) cfg.picard = false;
    if (cmd->count("--suite")) {
        cfg.suite_given = true;
        cfg.suite.clear();
        std::stringstream ss(cmd->get_option("--suite")->as<std::string>());
        std::string tok;
        while (std::getline(ss, tok, ','))
            if (!tok.empty()) cfg.suite.push_back(tok);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pseudo-spectral hydrostatic-limit lab"};
    app.require_subcommand(1);

    struct Sub {
        CLI::App* cmd;
        RunConfig cfg;
        std::string config_path, grid_spec, eps_spec;
    };
    std::map<std::string, Sub> subs;
    for (const char* name :
         {"simulate-pe", "simulate-nse", "diff-sweep", "certify", "w-residual"}) {
        Sub& s = subs[name];
        s.cfg.mode = name;
        s.cmd = app.add_subcommand(name);
        add_common_flags(s.cmd, s.cfg, s.config_path, s.grid_spec, s.eps_spec);
    }
    subs["simulate-pe"].cmd->description("solve the hydrostatic system");
    subs["simulate-nse"].cmd->description("solve the rescaled system (first eps)");
    subs["diff-sweep"].cmd->description("epsilon sweep of the difference norms");
    subs["certify"].cmd->description("run estimate certificates");
    subs["w-residual"].cmd->description("w-equation residual under step halving");

    CLI11_PARSE(app, argc, argv);

    try {
        for (auto& [name, s] : subs) {
            if (!s.cmd->parsed()) continue;
            apply_common(s.cmd, s.cfg, s.config_path, s.grid_spec, s.eps_spec);
            RunConfig& cfg = s.cfg;
            if (name == "diff-sweep") {
                SweepReport rep = run_diff_sweep(cfg);
                write_sweep_outputs(rep, cfg.out);
                bool failed = false;
                for (const auto& r : rep.rows) {
                    if (!r.error.empty()) {
                        std::cerr << "solver abort: " << r.error << "\n";
                        failed = true;
                        continue;
                    }
                    std::printf("eps=%-8g total=%.6e", r.eps, r.direct.total);
                    if (r.has_picard)
                        std::printf("  picard=%.6e (%s, %d iters)", r.picard.total,
                                    r.picard_converged ? "converged" : "NOT CONVERGED",
                                    r.picard_iterations);
                    std::printf("\n");
                }
                if (rep.has_fit)
                    std::printf("fitted slope %.4f (r^2 %.4f)\n", rep.fit.slope,
                                rep.fit.r2);
                else
                    std::printf("fit skipped (needs >= 2 positive totals)\n");
                if (failed) return 1;
            } else if (name == "certify") {
                auto certs = run_certify(cfg);
                write_certificates(
                    (std::filesystem::path(cfg.out) / "certificates").string(),
                    certs);
                for (const auto& c : certs)
                    std::printf("%-22s sup_ratio=%-12.6g %s\n",
                                c.inequality_id.c_str(), c.sup_ratio,
                                c.pass ? "pass" : "FAIL");
            } else if (name == "w-residual") {
                WResidualStudy st = run_w_residual(cfg);
                std::filesystem::create_directories(cfg.out);
                std::ofstream f(std::filesystem::path(cfg.out) / "w_residual.json");
                f << "{\n  \"dt\": " << st.dt_coarse
                  << ",\n  \"max_residual_dt\": " << st.coarse.max_residual
                  << ",\n  \"max_residual_dt_half\": " << st.fine.max_residual
                  << ",\n  \"max_ratio\": " << st.max_ratio
                  << ",\n  \"l2_ratio\": " << st.l2_ratio << "\n}\n";
                std::printf("residual ratio under dt halving: max %.3f, l2 %.3f\n",
                            st.max_ratio, st.l2_ratio);
            } else {
                run_simulate(cfg);
                std::printf("wrote %s\n", cfg.out.c_str());
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
