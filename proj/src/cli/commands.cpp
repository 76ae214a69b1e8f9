// commands.cpp — the subcommands: option parsing and result tables.

#include "cli/cli.hpp"

#include "omt/errors.hpp"
#include "omt/evolution.hpp"
#include "omt/fock_oracle.hpp"
#include "omt/linear_model.hpp"
#include "omt/normal_modes.hpp"
#include "omt/spectra.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <complex>
#include <iostream>
#include <memory>

namespace omt::cli {

namespace {

LinearModel build_level(const std::string& level, const ModelParams& p) {
    if (level == "three") return build_three_mode(p);
    if (level == "five") return build_five_mode(p);
    if (level == "two") return build_two_mode_adiabatic(p);
    throw ConfigError("unknown model level '" + level + "'", "--level");
}

void add_params(Report& r, const ModelParams& p) {
    r.add("delta_a", p.delta_a);
    r.add("delta_b", p.delta_b);
    r.add("G_a", p.G_a);
    r.add("G_b", p.G_b);
    r.add("kappa_a", p.kappa_a);
    r.add("kappa_b", p.kappa_b);
    r.add("gamma", p.gamma);
    r.add("nbar_a", p.nbar_a);
    r.add("nbar_b", p.nbar_b);
    r.add("nbar_c", p.nbar_c);
    r.add("nbar_ap", p.nbar_ap);
    r.add("nbar_bp", p.nbar_bp);
    r.add("x_c", p.x_c);
}

Table matrix_table(const Eigen::MatrixXd& m, const std::vector<std::string>& labels) {
    Table t;
    t.columns.push_back("row");
    for (const auto& l : labels) t.columns.push_back(l);
    for (Index i = 0; i < m.rows(); ++i) {
        std::vector<double> row{static_cast<double>(i)};
        for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        t.rows.push_back(std::move(row));
    }
    return t;
}

void warn(const std::string& msg) { std::cerr << "warning: " << msg << "\n"; }

// --- steady -------------------------------------------------------------

void steady_cmd(const Resolved& r, Sink& sink) {
    Report rep;
    rep.add("drive", std::string(r.config.drive_is_eta() ? "eta" : "G"));
    if (r.steady) {
        const SteadyState& s = *r.steady;
        auto cplx = [&](const std::string& k, std::complex<double> v) {
            rep.add(k + "_re", v.real());
            rep.add(k + "_im", v.imag());
        };
        cplx("alpha_p", s.alpha_p);
        cplx("beta_p", s.beta_p);
        cplx("alpha", s.alpha);
        cplx("beta", s.beta);
        rep.add("x_c", s.x_c);
        rep.add("iterations", static_cast<double>(s.iterations));
        rep.add("residual", s.residual);
        const double shift = std::max(std::abs(s.x_c * r.config.g_a0), std::abs(s.x_c * r.config.g_b0));
        rep.add("x_c_shift_rad_s", shift);
        rep.add("balanced", shift < balance_threshold(r.config));
    }
    Report params;
    add_params(params, r.params);
    for (auto& e : params.entries) rep.entries.push_back(std::move(e));
    const RegimeReport reg = validate_regime(r.params);
    rep.add("adiabatic_elimination_ok", reg.adiabatic_elimination.ok);
    rep.add("adiabatic_elimination_margin", reg.adiabatic_elimination.margin);
    rep.add("sideband_resolved_ok", reg.sideband_resolved.ok);
    rep.add("sideband_resolved_margin", reg.sideband_resolved.margin);
    rep.add("coupling_weak_ok", reg.coupling_weak.ok);
    rep.add("coupling_weak_margin", reg.coupling_weak.margin);
    for (const auto& m : reg.messages) warn(m);
    sink.report("steady", rep);
}

// --- model --------------------------------------------------------------

struct ModelOpts {
    std::string level{"three"};
    bool dump{false};
};

void model_cmd(const ModelOpts& o, const Resolved& r, Sink& sink) {
    const LinearModel m = build_level(o.level, r.params);
    const StabilityReport st = stability_check(m);
    Report rep;
    rep.add("model", m.label);
    rep.add("n_modes", static_cast<double>(m.n_modes()));
    rep.add("stable", st.stable);
    rep.add("spectral_abscissa", st.spectral_abscissa);
    rep.add("dominant_mode", st.dominant_mode);
    if (o.level == "two") {
        const NoiseModel nm = squeezing_params(r.params);
        rep.add("m_a", nm.m_a);
        rep.add("m_b", nm.m_b);
        rep.add("m_ab", nm.m_ab);
        rep.add("delta_a_prime", nm.delta_a_prime);
        rep.add("delta_b_prime", nm.delta_b_prime);
    }
    if (o.dump) {
        const auto labels = m.quadrature_labels();
        sink.table(o.level + "_A", matrix_table(m.A, labels));
        sink.table(o.level + "_D", matrix_table(m.D, labels));
    }
    sink.report(o.level + "_model", rep);
}

// --- spectrum -----------------------------------------------------------

struct SpectrumOpts {
    double from{-1.2}, to{-0.1};
    int points{200};
    std::optional<double> anchor;
};

Table spectrum_table(const std::vector<SweepPoint>& sweep) {
    Table t;
    t.columns = {"delta_a",     "omega_A",     "omega_B",     "omega_C",     "frac_B_on_b",
                 "frac_B_on_a", "frac_C_on_c", "frac_A_on_a", "frac_A_on_b", "frac_A_on_c",
                 "frac_B_on_c", "frac_C_on_a", "frac_C_on_b", "flagged"};
    for (const auto& p : sweep) {
        if (!p.spectrum) {
            std::vector<double> row(t.columns.size(), std::nan(""));
            row.front() = p.delta_a;
            row.back() = 1;
            t.rows.push_back(std::move(row));
            continue;
        }
        const auto& s = *p.spectrum;
        const auto& c = s.composition;
        t.rows.push_back({p.delta_a, s.omega_A, s.omega_B, s.omega_C, c(1, 1), c(1, 0), c(2, 2), c(0, 0),
                          c(0, 1), c(0, 2), c(1, 2), c(2, 0), c(2, 1), 0});
    }
    return t;
}

void spectrum_cmd(const SpectrumOpts& o, const Resolved& r, Sink& sink) {
    if (o.points < 2) throw ConfigError("need at least 2 points", "--points");
    if (!(o.to > o.from)) throw ConfigError("--to must exceed --from", "--to");
    std::vector<double> grid;
    for (int i = 0; i < o.points; ++i) grid.push_back(o.from + (o.to - o.from) * i / (o.points - 1));
    SweepOptions so;
    so.anchor_delta_a = o.anchor;
    const auto sweep = spectrum_sweep(r.params, grid, so);
    for (const auto& p : sweep) {
        if (!p.spectrum) warn("Delta_a = " + format_number(p.delta_a) + " flagged: " + p.error);
    }
    sink.table("spectrum", spectrum_table(sweep));
}

// --- psd ----------------------------------------------------------------

struct PsdOpts {
    std::string level{"five"};
    std::vector<std::string> modes{"a"};
    double span{12};
    int base_points{4001};
};

void psd_cmd(const PsdOpts& o, const Resolved& r, Sink& sink) {
    const LinearModel m = build_level(o.level, r.params);
    GridOptions go;
    go.span = o.span;
    go.base_points = o.base_points;
    const auto grid = adaptive_grid(m, go);
    const CovarianceState steady = lyapunov_steady(m);
    Report rep;
    rep.add("model", m.label);
    rep.add("grid_points", static_cast<double>(grid.size()));
    for (const auto& mode : o.modes) {
        Index idx = 0;
        try {
            idx = m.index_of(mode);
        } catch (const std::out_of_range& e) {
            throw ConfigError(e.what(), "--mode");
        }
        const PSDResult p = psd(m, grid, mode);
        Table t;
        t.columns = {"omega", "S"};
        for (std::size_t i = 0; i < p.omega.size(); ++i) t.rows.push_back({p.omega[i], p.S[i]});
        sink.table("psd_" + o.level + "_" + mode, t);
        const OccupationEstimate occ = mean_occupation_from_psd(p);
        if (!occ.coverage_ok) warn(occ.warning);
        rep.add("n_" + mode + "_psd", occ.value);
        rep.add("n_" + mode + "_lyapunov", mode_occupation(steady.sigma, idx));
        rep.add("coverage_ok_" + mode, occ.coverage_ok);
    }
    if (sink.to_directory()) sink.report("psd_" + o.level + "_summary", rep);
}

// --- evolve -------------------------------------------------------------

struct EvolveOpts {
    double t_end{1000};
    double dt{0.04};
    int sample_every{25};
};

Table population_table(const Trajectory& tr) {
    Table t;
    t.columns = {"t", "n_a", "n_b", "n_c", "n_A", "n_B", "n_C"};
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        const auto& b = tr.bare_populations[i];
        std::vector<double> row{tr.times[i], b(0), b(1), b(2)};
        if (i < tr.polariton_populations.size()) {
            for (double v : tr.polariton_populations[i]) row.push_back(v);
        } else {
            row.insert(row.end(), 3, std::nan(""));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

void evolve_cmd(const EvolveOpts& o, const Resolved& r, Sink& sink) {
    const LinearModel m = build_three_mode(r.params);
    const PolaritonSpectrum spec = diagonalize(r.params);
    std::vector<std::array<double, 3>> pol;
    EvolveOptions eo;
    eo.dt = o.dt;
    eo.sample_every = o.sample_every;
    eo.observer = [&](const CovarianceState& s) { pol.push_back(project_polaritons(s, spec)); };
    const auto init = thermal_state(m.mode_labels, Eigen::Vector3d(r.params.nbar_a, r.params.nbar_b, r.params.nbar_c));
    Trajectory tr = evolve_covariance(m, init, o.t_end, eo);
    tr.polariton_populations = std::move(pol);
    for (const auto& w : tr.warnings) warn(w);
    sink.table("evolve", population_table(tr));
}

// --- protocol -----------------------------------------------------------

void protocol_cmd(const Protocol& p, const Resolved& r, Sink& sink) {
    const ProtocolResult res = run_protocol(p, r.params);
    for (const auto& m : res.feasibility.messages) warn(m);
    for (const auto& w : res.trajectory.warnings) warn(w);
    sink.table("protocol", population_table(res.trajectory));
    if (!sink.to_directory()) return;
    const ProtocolSummary s = summarize(p, res.trajectory);
    Report rep;
    rep.add("tau_min", res.feasibility.tau_min);
    rep.add("tau_max", res.feasibility.tau_max);
    rep.add("feasible", res.feasibility.ok);
    rep.add("receive_n_a", s.receive_n_a);
    rep.add("receive_n_b", s.receive_n_b);
    rep.add("detect_n_a", s.detect_n_a);
    rep.add("detect_n_b", s.detect_n_b);
    rep.add("polariton_drift", s.polariton_drift);
    rep.add("step_halving_deviation", res.step_halving_deviation);
    rep.add("step_halving_ok", res.step_halving_ok);
    sink.report("protocol_summary", rep);
}

// --- budget -------------------------------------------------------------

void budget_cmd(std::optional<double> n_s, const Resolved& r, Sink& sink) {
    const BudgetReport b = noise_budget(r.config, r.params, n_s, r.steady ? &*r.steady : nullptr);
    Report rep;
    rep.add("n_s", b.n_s);
    rep.add("n_s_from_temperature", b.n_s_from_temperature);
    rep.add("nbar_c", b.nbar_c);
    rep.add("mech_noise_term", b.mech_noise_term);
    rep.add("n_o", b.n_o);
    rep.add("omega_s_rad_s", b.omega_s);
    rep.add("omega_o_rad_s", b.omega_o);
    rep.add("f_s_hz", b.omega_s / kTwoPi);
    rep.add("f_o_hz", b.omega_o / kTwoPi);
    rep.add("tau_min_s", b.tau_min);
    rep.add("tau_max_s", b.tau_max);
    rep.add("window_ratio", b.window_ratio);
    rep.add("window_feasible", b.window_feasible);
    rep.add("dead_time_s", b.dead_time);
    rep.add("min_gate_window_s", b.min_gate_window);
    for (const auto& n : b.notes) warn(n);
    sink.report("budget", rep);
}

// --- oracle -------------------------------------------------------------

struct OracleOpts {
    double t_end{1000};
    double dt{0.025};
    std::vector<int> cutoff{3};
    int sample_every{40};
};

void oracle_cmd(const OracleOpts& o, const Resolved& r, Sink& sink) {
    FockOptions fo;
    if (o.cutoff.size() == 1) {
        fo.cutoff = {o.cutoff[0], o.cutoff[0], o.cutoff[0]};
    } else if (o.cutoff.size() == 3) {
        fo.cutoff = {o.cutoff[0], o.cutoff[1], o.cutoff[2]};
    } else {
        throw ConfigError("give one cutoff or three (a b c)", "--cutoff");
    }
    fo.t_end = o.t_end;
    fo.dt = o.dt;
    fo.sample_every = o.sample_every;
    const FockTrajectory f = fock_oracle(r.params, fo);

    EvolveOptions eo;
    eo.dt = o.dt;
    eo.sample_every = o.sample_every;
    const LinearModel m = build_three_mode(r.params);
    const auto init = thermal_state(m.mode_labels, Eigen::Vector3d(r.params.nbar_a, r.params.nbar_b, r.params.nbar_c));
    const Trajectory g = evolve_covariance(m, init, o.t_end, eo);
    if (g.times.size() != f.times.size()) throw NumericalError("oracle: sample grids differ");

    Table t;
    t.columns = {"t", "n_a_gauss", "n_a_fock", "n_b_gauss", "n_b_fock", "n_c_gauss", "n_c_fock"};
    std::array<double, 3> dev{}, peak{};
    for (std::size_t i = 0; i < g.times.size(); ++i) {
        std::vector<double> row{g.times[i]};
        for (int k = 0; k < 3; ++k) {
            const auto u = static_cast<std::size_t>(k);
            row.push_back(g.bare_populations[i](k));
            row.push_back(f.populations[i](k));
            dev[u] = std::max(dev[u], std::abs(g.bare_populations[i](k) - f.populations[i](k)));
            peak[u] = std::max(peak[u], std::abs(g.bare_populations[i](k)));
        }
        t.rows.push_back(std::move(row));
    }
    sink.table("oracle", t);
    Report rep;
    bool ok = true;
    for (int k = 0; k < 3; ++k) {
        const auto u = static_cast<std::size_t>(k);
        const std::string name(1, "abc"[k]);
        const double tol = 0.02 * peak[u] + f.max_leakage;
        rep.add("max_deviation_" + name, dev[u]);
        rep.add("tolerance_" + name, tol);
        ok = ok && dev[u] <= tol;
    }
    rep.add("max_leakage", f.max_leakage);
    rep.add("initial_truncation", f.initial_truncation);
    rep.add("agree", ok);
    if (sink.to_directory()) {
        sink.report("oracle_report", rep);
    } else {
        std::cerr << to_csv(rep);
    }
}

}  // namespace

void register_commands(CLI::App& app, Selection& sel) {
    auto pick = [&sel](const std::string& name, Action a) {
        sel.name = name;
        sel.action = std::move(a);
    };
    const std::vector<std::string> levels{"three", "five", "two"};

    app.add_subcommand("steady", "classical steady state, normalized parameters and regime checks")
        ->callback([pick] { pick("steady", steady_cmd); });

    auto model_o = std::make_shared<ModelOpts>();
    auto* model = app.add_subcommand("model", "drift/diffusion matrices and stability");
    model->add_option("--level", model_o->level, "model level")->check(CLI::IsMember(levels));
    model->add_flag("--dump", model_o->dump, "write the A and D matrices");
    model->callback([pick, model_o] {
        pick("model", [model_o](const Resolved& r, Sink& s) { model_cmd(*model_o, r, s); });
    });

    auto spec_o = std::make_shared<SpectrumOpts>();
    auto* spec = app.add_subcommand("spectrum", "polariton frequencies and compositions over Delta_a");
    spec->add_option("--from", spec_o->from, "first Delta_a (units of omega_m)");
    spec->add_option("--to", spec_o->to, "last Delta_a");
    spec->add_option("--points", spec_o->points, "grid points");
    spec->add_option("--anchor", spec_o->anchor, "Delta_a where labels follow bare-mode composition");
    spec->callback([pick, spec_o] {
        pick("spectrum", [spec_o](const Resolved& r, Sink& s) { spectrum_cmd(*spec_o, r, s); });
    });

    auto psd_o = std::make_shared<PsdOpts>();
    auto* psd_c = app.add_subcommand("psd", "normally ordered power spectral densities");
    psd_c->add_option("--level", psd_o->level, "model level")->check(CLI::IsMember(levels));
    psd_c->add_option("--mode", psd_o->modes, "mode label(s)");
    psd_c->add_option("--span", psd_o->span, "grid covers [-span, span]");
    psd_c->add_option("--base-points", psd_o->base_points, "uniform background points");
    psd_c->callback([pick, psd_o] {
        pick("psd", [psd_o](const Resolved& r, Sink& s) { psd_cmd(*psd_o, r, s); });
    });

    auto ev_o = std::make_shared<EvolveOpts>();
    auto* ev = app.add_subcommand("evolve", "covariance relaxation from the thermal product state");
    ev->add_option("--t-end", ev_o->t_end, "final time (1/omega_m)");
    ev->add_option("--dt", ev_o->dt, "RK4 step");
    ev->add_option("--sample-every", ev_o->sample_every, "steps between samples");
    ev->callback([pick, ev_o] {
        pick("evolve", [ev_o](const Resolved& r, Sink& s) { evolve_cmd(*ev_o, r, s); });
    });

    auto pr_o = std::make_shared<Protocol>();
    auto halving_off = std::make_shared<bool>(false);
    auto* pr = app.add_subcommand("protocol", "receive / ramp / detect simulation");
    pr->add_option("--tau", pr_o->tau, "ramp duration (1/omega_m)");
    pr->add_option("--tau-r", pr_o->tau_r, "receive window");
    pr->add_option("--tau-d", pr_o->tau_d, "detect window");
    pr->add_option("--from", pr_o->delta_a_start, "Delta_a at the ramp start");
    pr->add_option("--to", pr_o->delta_a_end, "Delta_a at the ramp end");
    pr->add_option("--dt", pr_o->dt, "RK4 step");
    pr->add_option("--sample-every", pr_o->sample_every, "steps between samples");
    pr->add_flag("--no-step-halving", *halving_off, "skip the dt/2 convergence run");
    pr->callback([pick, pr_o, halving_off] {
        pr_o->check_step_halving = !*halving_off;
        pick("protocol", [pr_o](const Resolved& r, Sink& s) { protocol_cmd(*pr_o, r, s); });
    });

    auto n_s = std::make_shared<std::optional<double>>();
    auto* bud = app.add_subcommand("budget", "output occupation and timing budget");
    bud->add_option("--n-s", *n_s, "input microwave occupation (default: thermal)");
    bud->callback([pick, n_s] {
        pick("budget", [n_s](const Resolved& r, Sink& s) { budget_cmd(*n_s, r, s); });
    });

    auto or_o = std::make_shared<OracleOpts>();
    auto* orc = app.add_subcommand("oracle", "truncated-Fock master equation vs covariance dynamics");
    orc->add_option("--t-end", or_o->t_end, "final time (1/omega_m)");
    orc->add_option("--dt", or_o->dt, "RK4 step");
    orc->add_option("--cutoff", or_o->cutoff, "highest Fock number, one value or a b c")->expected(1, 3);
    orc->add_option("--sample-every", or_o->sample_every, "steps between samples");
    orc->callback([pick, or_o] {
        pick("oracle", [or_o](const Resolved& r, Sink& s) { oracle_cmd(*or_o, r, s); });
    });
}

}  // namespace omt::cli
