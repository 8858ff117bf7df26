#include "hydrostat/cli_harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "hydrostat/checkpoint.hpp"
#include "json.hpp"

namespace hydrostat {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string now_utc() {
    const auto t = std::chrono::system_clock::to_time_t(
        std::chrono::system_clock::now());
    char buf[64];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stod(tok));
    }
    return out;
}

std::vector<std::string> parse_string_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(tok);
    return out;
}

void parallel_jobs(int n, int jobs, const std::function<void(int)>& work) {
    if (n <= 0) return;
    const int nthreads = std::max(1, std::min(jobs, n));
    if (nthreads == 1) {
        for (int i = 0; i < n; ++i) work(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t)
        pool.emplace_back([&]() {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n) return;
                work(i);
            }
        });
    for (auto& th : pool) th.join();
}

}  // namespace

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected key=value");
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "mode") cfg.mode = val;
        else if (key == "grid_h") cfg.grid_h = std::stoi(val);
        else if (key == "grid_v") cfg.grid_v = std::stoi(val);
        else if (key == "T") cfg.T = std::stod(val);
        else if (key == "dt") cfg.dt = std::stod(val);
        else if (key == "q") cfg.q = val == "inf" ? q_infinity : std::stod(val);
        else if (key == "eps") cfg.eps = parse_double_list(val);
        else if (key == "preset") cfg.preset = val;
        else if (key == "checkpoint") cfg.checkpoint = val;
        else if (key == "seed") cfg.seed = std::stoull(val);
        else if (key == "out") cfg.out = val;
        else if (key == "jobs") cfg.jobs = std::stoi(val);
        else if (key == "store_stride") cfg.store_stride = std::stoi(val);
        else if (key == "checkpoint_stride") cfg.checkpoint_stride = std::stoi(val);
        else if (key == "picard") cfg.picard = val == "true" || val == "1";
        else if (key == "segments") cfg.segments = std::stoi(val);
        else if (key == "suite") {
            cfg.suite = parse_string_list(val);
            cfg.suite_given = true;
        }
        else
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": unknown key '" + key + "'");
    }
    return cfg;
}

void validate_config(const RunConfig& cfg) {
    if (cfg.eps.empty()) throw std::invalid_argument("config: eps list is empty");
    for (double e : cfg.eps)
        if (!(e > 0.0) || e > 1.0)
            throw std::invalid_argument("config: eps values must lie in (0,1]");
    for (std::size_t i = 1; i < cfg.eps.size(); ++i)
        if (!(cfg.eps[i] < cfg.eps[i - 1]))
            throw std::invalid_argument("config: eps must be strictly decreasing");
    if (!(cfg.dt > 0.0) || cfg.T < cfg.dt)
        throw std::invalid_argument("config: need 0 < dt <= T");
    const double n = std::round(cfg.T / cfg.dt);
    const double ulp = std::nextafter(cfg.T, cfg.T * 2) - cfg.T;
    if (std::abs(n * cfg.dt - cfg.T) > 2 * ulp + 1e-15 * cfg.T)
        throw std::invalid_argument("config: dt must divide T");
    if (cfg.jobs < 1) throw std::invalid_argument("config: jobs must be >= 1");
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& pairs) {
    if (pairs.size() < 2)
        throw std::invalid_argument("fit_rate: need at least two pairs");
    std::vector<double> x, y;
    for (const auto& [e, v] : pairs) {
        if (!(e > 0.0) || !(v > 0.0))
            throw std::invalid_argument("fit_rate: values must be positive");
        x.push_back(std::log(e));
        y.push_back(std::log(v));
    }
    const LinFit f = ols_fit(x, y);
    return RateFit{f.slope, f.intercept, f.r2};
}

SpectralVec2 initial_data_from_config(const RunConfig& cfg, const Grid& g) {
    if (!cfg.checkpoint.empty()) {
        SpectralVec2 v = load_initial_from_checkpoint(cfg.checkpoint);
        if (v[0].grid != g)
            throw std::invalid_argument("checkpoint grid does not match config");
        return v;
    }
    if (cfg.preset == "default") return initial_default(g);
    if (cfg.preset == "zero") return initial_zero(g);
    if (cfg.preset == "single-mode") return initial_single_mode(g);
    throw std::invalid_argument("unknown preset '" + cfg.preset + "'");
}

SweepReport run_diff_sweep(const RunConfig& cfg) {
    validate_config(cfg);
    const auto t_start = std::chrono::steady_clock::now();
    SweepReport rep;
    rep.cfg = cfg;

    const Grid g = Grid::make3d(cfg.grid_h, cfg.grid_v);
    const SpectralVec2 v0 = initial_data_from_config(cfg, g);

    PeSolveOptions pe_opt;
    pe_opt.store_stride = cfg.store_stride;
    const PeTrajectory pe = solve_pe(v0, cfg.T, cfg.dt, pe_opt);
    rep.pe_wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
            .count();

    std::vector<SpectralField> f_tilde;
    if (cfg.picard) f_tilde = compute_f_tilde_series(pe);

    if (!cfg.out.empty()) {
        fs::create_directories(fs::path(cfg.out) / "checkpoints");
        save_checkpoint((fs::path(cfg.out) / "checkpoints" / "pe.hsck").string(),
                        pe, cfg.checkpoint_stride);
    }

    rep.rows.resize(cfg.eps.size());
    parallel_jobs(static_cast<int>(cfg.eps.size()), cfg.jobs, [&](int i) {
        SweepRow& row = rep.rows[i];
        row.eps = cfg.eps[i];
        try {
            NseSolveOptions nse_opt;
            nse_opt.store_stride = cfg.store_stride;
            const NseTrajectory nse =
                solve_scaled_nse(v0, nullptr, row.eps, cfg.T, cfg.dt, nse_opt);
            if (!cfg.out.empty()) {
                std::ostringstream name;
                name << "nse_eps" << fmt(row.eps) << ".hsck";
                save_checkpoint(
                    (fs::path(cfg.out) / "checkpoints" / name.str()).string(),
                    nse, cfg.checkpoint_stride);
            }
            const DiffTrajectory diff = difference_direct(nse, pe);
            row.direct = fujita_kato_report(diff, cfg.q);
            if (cfg.picard) {
                PicardOptions popt;
                popt.segments = cfg.segments;
                const PicardResult pr =
                    solve_difference_picard(pe, f_tilde, row.eps, popt);
                row.has_picard = true;
                row.picard = fujita_kato_report(pr.traj, cfg.q);
                row.picard_converged = pr.converged;
                row.picard_iterations = pr.iterations;
                row.picard_growth = pr.growth_factor;
                if (row.direct.total > 0.0)
                    row.gap = std::abs(row.picard.total - row.direct.total) /
                              row.direct.total;
            }
        } catch (const std::exception& e) {
            row.error = std::string("eps=") + fmt(row.eps) + ": " + e.what();
        }
    });

    std::vector<std::pair<double, double>> fit_pts;
    for (const auto& row : rep.rows)
        if (row.error.empty() && row.direct.total > 0.0)
            fit_pts.emplace_back(row.eps, row.direct.total);
    if (fit_pts.size() >= 2) {
        rep.fit = fit_rate(fit_pts);
        rep.has_fit = true;
    }
    rep.total_wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
            .count();
    return rep;
}

std::string sweep_csv(const SweepReport& rep, const std::string& timestamp) {
    std::ostringstream out;
    out << "# generated_at=" << timestamp << "\n";
    out << "eps,sup_V,sup_tgradV,sup_eW,sup_tgradeW,total\n";
    for (const auto& r : rep.rows) {
        if (!r.error.empty()) continue;
        out << fmt(r.eps) << "," << fmt(r.direct.sup_V) << ","
            << fmt(r.direct.sup_tgradV) << "," << fmt(r.direct.sup_eW) << ","
            << fmt(r.direct.sup_tgradeW) << "," << fmt(r.direct.total) << "\n";
    }
    return out.str();
}

namespace {

nlohmann::json report_json(const NormReport& r) {
    nlohmann::json j;
    j["sup_V"] = r.sup_V;
    j["sup_tgradV"] = r.sup_tgradV;
    j["sup_eW"] = r.sup_eW;
    j["sup_tgradeW"] = r.sup_tgradeW;
    j["total"] = r.total;
    j["sup_W"] = r.sup_W;
    j["sup_tgradW"] = r.sup_tgradW;
    return j;
}

}  // namespace

std::string sweep_json(const SweepReport& rep, const std::string& timestamp) {
    nlohmann::json j;
    j["timestamp"] = timestamp;
    j["config"] = {{"grid_h", rep.cfg.grid_h}, {"grid_v", rep.cfg.grid_v},
                   {"T", rep.cfg.T},           {"dt", rep.cfg.dt},
                   {"q", rep.cfg.q},           {"seed", rep.cfg.seed},
                   {"preset", rep.cfg.preset}, {"store_stride", rep.cfg.store_stride},
                   {"segments", rep.cfg.segments}};
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : rep.rows) {
        nlohmann::json jr;
        jr["eps"] = r.eps;
        if (!r.error.empty()) {
            jr["error"] = r.error;
        } else {
            jr["direct"] = report_json(r.direct);
            if (r.has_picard) {
                jr["picard"] = report_json(r.picard);
                jr["picard_converged"] = r.picard_converged;
                jr["picard_iterations"] = r.picard_iterations;
                if (!r.picard_converged) jr["picard_growth"] = r.picard_growth;
                jr["relative_gap"] = r.gap;
            }
        }
        rows.push_back(jr);
    }
    j["rows"] = rows;
    if (rep.has_fit)
        j["fit"] = {{"slope", rep.fit.slope},
                    {"intercept", rep.fit.intercept},
                    {"r2", rep.fit.r2}};
    return j.dump(2) + "\n";
}

std::string svg_rate_plot(const SweepReport& rep) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : rep.rows)
        if (r.error.empty() && r.direct.total > 0.0)
            pts.emplace_back(r.eps, r.direct.total);
    const int W = 640, H = 480, ml = 70, mr = 20, mt = 20, mb = 50;
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (pts.empty()) {
        s << "<text x=\"40\" y=\"40\">no data</text>\n</svg>\n";
        return s.str();
    }
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    for (const auto& [e, v] : pts) {
        xlo = std::min(xlo, std::log10(e));
        xhi = std::max(xhi, std::log10(e));
        ylo = std::min(ylo, std::log10(v));
        yhi = std::max(yhi, std::log10(v));
    }
    const double xpad = 0.08 * std::max(xhi - xlo, 1e-9);
    const double ypad = 0.08 * std::max(yhi - ylo, 1e-9);
    xlo -= xpad; xhi += xpad; ylo -= ypad; yhi += ypad;
    auto px = [&](double lx) {
        return ml + (lx - xlo) / (xhi - xlo) * (W - ml - mr);
    };
    auto py = [&](double ly) {
        return H - mb - (ly - ylo) / (yhi - ylo) * (H - mt - mb);
    };
    s << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << (W - ml - mr)
      << "\" height=\"" << (H - mt - mb)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    // decade ticks
    for (int d = static_cast<int>(std::ceil(xlo)); d <= std::floor(xhi); ++d) {
        s << "<line x1=\"" << px(d) << "\" y1=\"" << (H - mb) << "\" x2=\""
          << px(d) << "\" y2=\"" << (H - mb + 6) << "\" stroke=\"black\"/>\n";
        s << "<text x=\"" << px(d) << "\" y=\"" << (H - mb + 20)
          << "\" text-anchor=\"middle\" font-size=\"12\">1e" << d << "</text>\n";
    }
    for (int d = static_cast<int>(std::ceil(ylo)); d <= std::floor(yhi); ++d) {
        s << "<line x1=\"" << (ml - 6) << "\" y1=\"" << py(d) << "\" x2=\"" << ml
          << "\" y2=\"" << py(d) << "\" stroke=\"black\"/>\n";
        s << "<text x=\"" << (ml - 10) << "\" y=\"" << (py(d) + 4)
          << "\" text-anchor=\"end\" font-size=\"12\">1e" << d << "</text>\n";
    }
    if (rep.has_fit) {
        const double y1 = rep.fit.intercept + rep.fit.slope * (xlo * std::log(10.0));
        const double y2 = rep.fit.intercept + rep.fit.slope * (xhi * std::log(10.0));
        s << "<line x1=\"" << px(xlo) << "\" y1=\"" << py(y1 / std::log(10.0))
          << "\" x2=\"" << px(xhi) << "\" y2=\"" << py(y2 / std::log(10.0))
          << "\" stroke=\"steelblue\" stroke-width=\"1.5\"/>\n";
        s << "<text x=\"" << (ml + 10) << "\" y=\"" << (mt + 18)
          << "\" font-size=\"13\">slope " << fmt(rep.fit.slope) << ", r^2 "
          << fmt(rep.fit.r2) << "</text>\n";
    }
    for (const auto& [e, v] : pts)
        s << "<circle cx=\"" << px(std::log10(e)) << "\" cy=\""
          << py(std::log10(v)) << "\" r=\"4\" fill=\"crimson\"/>\n";
    s << "<text x=\"" << (W / 2) << "\" y=\"" << (H - 12)
      << "\" text-anchor=\"middle\" font-size=\"13\">epsilon</text>\n";
    s << "<text x=\"16\" y=\"" << (H / 2)
      << "\" font-size=\"13\" transform=\"rotate(-90 16 " << (H / 2)
      << ")\" text-anchor=\"middle\">fujita-kato total</text>\n";
    s << "</svg>\n";
    return s.str();
}

void write_sweep_outputs(const SweepReport& rep, const std::string& dir) {
    fs::create_directories(dir);
    const std::string ts = now_utc();
    {
        std::ofstream f(fs::path(dir) / "sweep.csv");
        f << sweep_csv(rep, ts);
    }
    {
        std::ofstream f(fs::path(dir) / "sweep.json");
        f << sweep_json(rep, ts);
    }
    {
        std::ofstream f(fs::path(dir) / "rate.svg");
        f << svg_rate_plot(rep);
    }
}

std::vector<EstimateCertificate> run_certify(const RunConfig& cfg) {
    validate_config(cfg);
    std::vector<std::string> suite = cfg.suite;
    if (!cfg.suite_given)
        suite = {"P2.2-1", "P2.2-2", "P2.2-3", "P2.2-4", "P2.1", "P2.3",
                 "P3.1",   "P3.2",   "P3.4",   "P3.6",   "P3.7", "INTERP"};

    const std::vector<double> ab{0.25, 0.5, 0.75};
    const std::vector<double> tgrid{1e-2, 1e-1, 1.0, 10.0};
    const std::vector<double> egrid{1.0, 1e-1, 1e-2, 1e-3};
    const std::vector<double> eps_nl{1.0, 0.3, 0.1, 0.03};
    const std::vector<double> eps_forcing{1.0, 0.1, 0.01};
    const Grid small = Grid::make3d(16, 16);

    // short hydrostatic trajectory for the forcing certificates
    std::optional<PeTrajectory> pe;
    auto need_pe = [&]() -> const PeTrajectory& {
        if (!pe) {
            PeSolveOptions opt;
            opt.store_stride = 4;
            pe = solve_pe(initial_default(small), 0.2, 1.25e-3, opt);
        }
        return *pe;
    };

    std::vector<EstimateCertificate> out;
    for (const std::string& id : suite) {
        if (id.rfind("P2.2-", 0) == 0) {
            const int which = std::stoi(id.substr(5));
            out.push_back(certify_integral_inequality(which, ab, ab, egrid, tgrid));
        } else if (id == "P2.1") {
            out.push_back(certify_smoothing(16, small, cfg.seed));
        } else if (id == "P2.3") {
            out.push_back(certify_composite(16, eps_forcing, cfg.q, small, cfg.seed));
        } else if (id == "P3.1") {
            out.push_back(certify_sup_bound(1000, cfg.q, small, cfg.seed));
        } else if (id == "P3.2") {
            out.push_back(certify_nonlinear_bound(NonlinearKind::P32, eps_nl, 8,
                                                  {0.1, 1.0}, cfg.q, small,
                                                  cfg.seed));
        } else if (id == "P3.4") {
            out.push_back(certify_nonlinear_bound(NonlinearKind::P34a, eps_nl, 8,
                                                  {0.1, 1.0}, cfg.q, small,
                                                  cfg.seed));
            out.push_back(certify_nonlinear_bound(NonlinearKind::P34b, eps_nl, 8,
                                                  {0.1, 1.0}, cfg.q, small,
                                                  cfg.seed));
        } else if (id == "P3.6") {
            for (int a = 0; a <= 1; ++a) {
                out.push_back(certify_forcing_bound(ForcingKind::P36_first, a,
                                                    eps_forcing, need_pe(), cfg.q));
                out.push_back(certify_forcing_bound(ForcingKind::P36_second, a,
                                                    eps_forcing, need_pe(), cfg.q));
            }
        } else if (id == "P3.7") {
            for (int a = 0; a <= 1; ++a)
                out.push_back(certify_forcing_bound(ForcingKind::P37, a,
                                                    eps_forcing, need_pe(), cfg.q));
        } else if (id == "INTERP") {
            const std::vector<double> sgrid{0.25, 0.5, 0.75};
            for (auto dir : {InterpolationDirection::horizontal,
                             InterpolationDirection::vertical})
                for (auto mode :
                     {InterpolationMode::paper, InterpolationMode::corrected}) {
                    EstimateCertificate c = certify_interpolation(
                        sgrid, 200, mode, dir, small, cfg.seed);
                    c.inequality_id +=
                        std::string(mode == InterpolationMode::paper ? "-paper"
                                                                     : "-corrected") +
                        (dir == InterpolationDirection::horizontal ? "-H" : "-V");
                    out.push_back(std::move(c));
                }
        } else {
            throw std::invalid_argument("unknown certificate id '" + id + "'");
        }
    }
    return out;
}

WResidualStudy run_w_residual(const RunConfig& cfg) {
    validate_config(cfg);
    const Grid g = Grid::make3d(cfg.grid_h, cfg.grid_v);
    const SpectralVec2 v0 = initial_data_from_config(cfg, g);
    WResidualStudy st;
    st.dt_coarse = cfg.dt;
    // halve the step for both the solve and the stored grid, so the centered
    // difference and the integrator error shrink together
    st.coarse = check_w_equation(solve_pe(v0, cfg.T, cfg.dt, {}));
    st.fine = check_w_equation(solve_pe(v0, cfg.T, cfg.dt / 2, {}));
    st.max_ratio = st.coarse.max_residual / std::max(st.fine.max_residual, 1e-300);
    st.l2_ratio = st.coarse.l2_residual / std::max(st.fine.l2_residual, 1e-300);
    return st;
}

void run_simulate(const RunConfig& cfg) {
    validate_config(cfg);
    fs::create_directories(cfg.out);
    const Grid g = Grid::make3d(cfg.grid_h, cfg.grid_v);
    const SpectralVec2 v0 = initial_data_from_config(cfg, g);
    std::ofstream norms(fs::path(cfg.out) / "norms.csv");
    norms << "t,norm_q,grad_norm_q,l2\n";
    if (cfg.mode == "simulate-pe") {
        PeSolveOptions opt;
        opt.store_stride = cfg.store_stride;
        const PeTrajectory traj = solve_pe(v0, cfg.T, cfg.dt, opt);
        for (const auto& s : traj.states) {
            const double n = std::max(norm_linf_h_lq(s.v1, cfg.q),
                                      norm_linf_h_lq(s.v2, cfg.q));
            double gn = 0.0;
            for (int a = 0; a < 3; ++a) {
                gn = std::max(gn, norm_linf_h_lq(derivative(s.v1, a), cfg.q));
                gn = std::max(gn, norm_linf_h_lq(derivative(s.v2, a), cfg.q));
            }
            const double e = std::hypot(l2_norm_spectral(s.v1),
                                        l2_norm_spectral(s.v2));
            norms << fmt(s.time) << "," << fmt(n) << "," << fmt(gn) << ","
                  << fmt(e) << "\n";
        }
        save_checkpoint((fs::path(cfg.out) / "pe.hsck").string(), traj,
                        cfg.checkpoint_stride);
    } else if (cfg.mode == "simulate-nse") {
        NseSolveOptions opt;
        opt.store_stride = cfg.store_stride;
        const double eps = cfg.eps.front();
        const NseTrajectory traj =
            solve_scaled_nse(v0, nullptr, eps, cfg.T, cfg.dt, opt);
        for (const auto& s : traj.states) {
            const double n = std::max(norm_linf_h_lq(s.u1, cfg.q),
                                      norm_linf_h_lq(s.u2, cfg.q));
            double gn = 0.0;
            for (int a = 0; a < 3; ++a) {
                gn = std::max(gn, norm_linf_h_lq(derivative(s.u1, a), cfg.q));
                gn = std::max(gn, norm_linf_h_lq(derivative(s.u2, a), cfg.q));
            }
            const double e =
                std::hypot(l2_norm_spectral(s.u1), l2_norm_spectral(s.u2));
            norms << fmt(s.time) << "," << fmt(n) << "," << fmt(gn) << ","
                  << fmt(e) << "\n";
        }
        save_checkpoint((fs::path(cfg.out) / "nse.hsck").string(), traj,
                        cfg.checkpoint_stride);
    } else {
        throw std::invalid_argument("run_simulate: unknown mode " + cfg.mode);
    }
}

}  // namespace hydrostat
