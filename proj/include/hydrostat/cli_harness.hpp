#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hydrostat/estimate_lab.hpp"
#include "hydrostat/nse_difference.hpp"

// Batch front-end: flat key=value configuration, the epsilon sweep with its
// rate fit, certificate campaigns, the w-equation residual study, and
// CSV/JSON/SVG emission. Identical config and seed give byte-identical
// outputs except for one timestamp header line.

namespace hydrostat {

struct RunConfig {
    std::string mode = "diff-sweep";
    int grid_h = 24;
    int grid_v = 24;
    double T = 0.5;
    double dt = 2.5e-3;
    double q = 1.0;
    std::vector<double> eps{0.4, 0.2, 0.1, 0.05, 0.025};
    std::string preset = "default";   // default | zero | single-mode
    std::string checkpoint;           // initial data from a trajectory dump
    std::uint64_t seed = 12345;
    std::string out = "out";
    int jobs = 2;
    int store_stride = 1;
    int checkpoint_stride = 25;       // thinning for emitted checkpoints
    bool picard = true;
    int segments = 1;
    std::vector<std::string> suite;   // certify selection (see suite_given)
    bool suite_given = false;         // false = run the full default suite
};

RunConfig parse_config_file(const std::string& path);
void validate_config(const RunConfig& cfg);

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

// Ordinary least squares on (log eps, log value); rejects nonpositive
// values and fewer than two pairs.
RateFit fit_rate(const std::vector<std::pair<double, double>>& pairs);

struct SweepRow {
    double eps = 0.0;
    NormReport direct;
    bool has_picard = false;
    NormReport picard;
    bool picard_converged = false;
    int picard_iterations = 0;
    double picard_growth = 0.0;
    double gap = 0.0;  // |picard.total - direct.total| / direct.total
    std::string error;
};

struct SweepReport {
    RunConfig cfg;
    std::vector<SweepRow> rows;
    bool has_fit = false;
    RateFit fit;
    double pe_wall_seconds = 0.0;
    double total_wall_seconds = 0.0;
};

// Solves the hydrostatic system once, then per epsilon the rescaled system
// (direct difference) and the fixed-point difference; fits log total vs
// log eps over the direct rows.
SweepReport run_diff_sweep(const RunConfig& cfg);

void write_sweep_outputs(const SweepReport& rep, const std::string& dir);
std::string sweep_csv(const SweepReport& rep, const std::string& timestamp);
std::string sweep_json(const SweepReport& rep, const std::string& timestamp);
std::string svg_rate_plot(const SweepReport& rep);

std::vector<EstimateCertificate> run_certify(const RunConfig& cfg);

struct WResidualStudy {
    WResidualReport coarse, fine;
    double max_ratio = 0.0;  // coarse.max / fine.max
    double l2_ratio = 0.0;
    double dt_coarse = 0.0;
};
WResidualStudy run_w_residual(const RunConfig& cfg);

// simulate-pe / simulate-nse entry points; write a checkpoint and norms.csv.
void run_simulate(const RunConfig& cfg);

SpectralVec2 initial_data_from_config(const RunConfig& cfg, const Grid& g);

}  // namespace hydrostat
