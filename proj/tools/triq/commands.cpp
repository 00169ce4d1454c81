#include "commands.hpp"

#include "output.hpp"

#include <triq/analytic.hpp>
#include <triq/ddseq.hpp>
#include <triq/errors.hpp>
#include <triq/states.hpp>
#include <triq/tomo.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace triq::cli {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::ostream& log(const RunContext& ctx) {
    static std::ostream null(nullptr);
    return ctx.log ? *ctx.log : null;
}

struct Initial {
    DensityMatrix rho;
    std::string label;
};

Initial initial_state(const ExperimentConfig& cfg) {
    if (cfg.circuit_file) {
        try {
            return {run_circuit(parse_circuit(read_file(*cfg.circuit_file))), cfg.circuit_file->filename().string()};
        } catch (const std::invalid_argument& e) {
            throw ConfigError(cfg.circuit_file->string() + ": " + e.what());
        }
    }
    if (!cfg.state) throw ConfigError("one of 'state' or 'circuit_file' is required");
    if (*cfg.state == "ghz") return {prepare_ghz(), "ghz"};
    if (*cfg.state == "w") return {prepare_w(), "w"};
    return {prepare_wwbar(), "wwbar"};
}

SpinSystem effective_spins(const ExperimentConfig& cfg) {
    SpinSystem s = cfg.spins;
    if (!cfg.hamiltonian) {
        s.offsets_hz = {0.0, 0.0, 0.0};
        s.j_hz = {0.0, 0.0, 0.0};
    }
    return s;
}

DDSchedule schedule_of(const ExperimentConfig& cfg) {
    DDSchedule s;
    if (cfg.dd == "xy16s") s = build_xy16s(cfg.dd_tau_s);
    else if (cfg.dd == "kddxy") s = build_kddxy(cfg.dd_tau_s);
    else if (cfg.dd == "single_axis") s = build_single_axis(cfg.dd_tau_s);
    else throw ConfigError("dd.sequence must name a sequence (xy16s, kddxy, single_axis) for this command");
    return with_flip_error(std::move(s), cfg.flip_error);
}

std::vector<double> column(const DecayCurve& c) { return c.n3_tri; }

}  // namespace

void cmd_decay(const ExperimentConfig& cfg, const RunContext& ctx) {
    const Initial init = initial_state(cfg);
    const SpinSystem spins = effective_spins(cfg);
    NoiseModel noise = cfg.noise_model();
    if (noise.bath_mode == BathMode::correlated) noise.seed = cfg.require_seed("decay");
    noise.validate();
    const double dt = cfg.dt_s.value_or(default_dt(spins));

    DecayCurve curve;
    if (cfg.t_final_s > 0.0) {
        const StateSeries series =
            noise.bath_mode == BathMode::markovian
                ? evolve_markovian(init.rho, spins, noise, cfg.t_final_s, dt, cfg.sample_s)
                : evolve_correlated(init.rho, spins, noise, {}, cfg.t_final_s, dt, cfg.sample_s);
        curve = make_decay_curve(series, init.rho);
    }
    write_text_file(ctx.out_dir / "decay.csv", curve_csv(curve));

    std::vector<PlotSeries> plot{{"numerical", curve.times, column(curve), "#1f77b4", false}};
    const bool overlay = cfg.state && !cfg.hamiltonian && noise.bath_mode == BathMode::markovian;
    if (overlay) {
        const RateSet rates = RateSet::from_spins(cfg.spins);
        DecayCurve ac;
        for (double t : curve.times) {
            const DensityMatrix a = *cfg.state == "ghz" ? ghz_analytic(t, rates)
                                    : *cfg.state == "w" ? w_analytic(t, rates)
                                                        : wwbar_analytic(t, rates);
            ac.append(t, a, init.rho);
        }
        write_text_file(ctx.out_dir / "decay_analytic.csv", curve_csv(ac));
        plot.push_back({"analytic", ac.times, column(ac), "#d62728", true});
    }
    write_text_file(ctx.out_dir / "decay.svg",
                    render_svg("Tripartite negativity, " + init.label, "t (s)", "N3", plot));

    auto& out = log(ctx);
    out << "decay: state=" << init.label << " samples=" << curve.size();
    if (curve.size() > 0) {
        try {
            out << " disentanglement_time_s=" << fmt(disentanglement_time(curve, cfg.decay_threshold));
        } catch (const std::invalid_argument&) {
            out << " disentanglement_time_s=none";
        }
        try {
            out << " gamma_per_s=" << fmt(fit_decay_rate(curve).rate);
        } catch (const std::invalid_argument&) {
            out << " gamma_per_s=none";
        }
    }
    out << "\n";
}

void cmd_protect(const ExperimentConfig& cfg, const RunContext& ctx) {
    if (cfg.dd == "none") throw ConfigError("protect: dd.sequence must not be none");
    if (cfg.bath_mode != BathMode::correlated) throw ConfigError("protect: bath.mode must be correlated");
    if (!(cfg.ou_sigma > 0.0)) throw ConfigError("protect: bath.ou_sigma must be > 0 (see the calibrate command)");
    const Initial init = initial_state(cfg);
    const SpinSystem spins = effective_spins(cfg);
    NoiseModel noise = cfg.noise_model();
    noise.seed = cfg.require_seed("protect");
    noise.validate();
    const DDSchedule schedule = schedule_of(cfg);
    const double dur = cycle_duration(schedule);
    const double total = cfg.dd_cycles > 0 ? cfg.dd_cycles * dur : cfg.t_final_s;
    if (total < dur * (1 - 1e-12)) throw ConfigError("protect: grid.t_final_s is shorter than one DD cycle");
    const double dt = cfg.dt_s.value_or(default_dt(spins, min_delay(schedule)));

    const ProtectedRun p = run_protected(init.rho, spins, noise, schedule, total, dt);
    const ProtectedRun u = run_unprotected(init.rho, spins, noise, p.states.times, dt);
    const std::vector<double> factor = protection_factor(p.curve, u.curve);

    write_text_file(ctx.out_dir / "protected.csv", curve_csv(p.curve, factor));
    write_text_file(ctx.out_dir / "unprotected.csv", curve_csv(u.curve));
    write_text_file(ctx.out_dir / "protect.svg",
                    render_svg("Tripartite negativity, " + init.label + ", " + schedule.name, "t (s)", "N3",
                               {{schedule.name, p.curve.times, column(p.curve), "#1f77b4", false},
                                {"free", u.curve.times, column(u.curve), "#d62728", true}}));
    log(ctx) << "protect: state=" << init.label << " sequence=" << schedule.name
             << " cycles=" << p.curve.size() - 1 << " t_end_s=" << fmt(p.curve.times.back())
             << " protection_factor=" << fmt(factor.back()) << "\n";
}

void cmd_calibrate(const ExperimentConfig& cfg, const RunContext& ctx) {
    if (cfg.bath_mode != BathMode::correlated) throw ConfigError("calibrate: bath.mode must be correlated");
    NoiseModel noise = cfg.noise_model();
    noise.seed = cfg.require_seed("calibrate");
    noise.validate();
    const double dt = cfg.dt_s.value_or(default_dt(cfg.spins));
    const Calibration c = calibrate_ou_sigma(cfg.spins, noise, cfg.calibrate_qubit, cfg.sigma_min, cfg.sigma_max, dt);
    const double target = cfg.spins.t2_s[static_cast<std::size_t>(cfg.calibrate_qubit - 1)];
    std::string text = "# OU bath calibrated on qubit " + std::to_string(cfg.calibrate_qubit) +
                       ": tau_c_s=" + fmt(cfg.tau_c_s) + " target_t2_s=" + fmt(target) +
                       " achieved_t2_s=" + fmt(c.achieved_t2) + " trajectories=" +
                       std::to_string(cfg.trajectories) + " evaluations=" + std::to_string(c.evaluations) + "\n";
    text += "bath.ou_sigma = " + fmt(c.sigma) + "\n";
    write_text_file(ctx.out_dir / "calibrated.conf", text);
    log(ctx) << "calibrate: ou_sigma=" << fmt(c.sigma) << " achieved_t2_s=" << fmt(c.achieved_t2) << "\n";
}

void cmd_tomo(const ExperimentConfig& cfg, const RunContext& ctx) {
    const Initial init = initial_state(cfg);
    std::vector<TomoRecord> records;
    if (cfg.records_file) {
        try {
            records = read_records(read_file(*cfg.records_file));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(cfg.records_file->string() + ": " + e.what());
        }
    } else {
        records = simulate_all_settings(init.rho, cfg.noise_sigma, cfg.require_seed("tomo"));
        write_text_file(ctx.out_dir / "tomo_records.txt", write_records(records));
    }
    MleResult r;
    try {
        r = mle_fit(records);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("tomo: ") + e.what());
    }
    if (!r.converged)
        throw ConvergenceError("tomo: reconstruction did not converge (gradient norm " + fmt(r.gradient_norm) + ")",
                               r.gradient_norm);
    const DensityMatrix est((r.rho + r.rho.adjoint()) * cplx(0.5));
    const double f = fidelity_report(est, init.rho);
    std::string json = "{\n";
    json += "  \"state\": \"" + init.label + "\",\n";
    json += "  \"noise_sigma\": " + fmt(cfg.noise_sigma) + ",\n";
    json += "  \"fidelity\": " + fmt(f) + ",\n";
    json += "  \"iterations\": " + std::to_string(r.iterations) + ",\n";
    json += "  \"gradient_norm\": " + fmt(r.gradient_norm) + ",\n";
    json += "  \"reconstruction\": " + to_interchange(est.matrix()) + ",\n";
    json += "  \"reference\": " + to_interchange(init.rho.matrix()) + "\n}\n";
    write_text_file(ctx.out_dir / "tomo_report.json", json);
    log(ctx) << "tomo: state=" << init.label << " fidelity=" << fmt(f) << " iterations=" << r.iterations << "\n";
}

void cmd_schedule_dump(const ExperimentConfig& cfg, const RunContext& ctx) {
    const DDSchedule s = schedule_of(cfg);
    write_text_file(ctx.out_dir / "schedule.csv", export_schedule(s));
    log(ctx) << "schedule-dump: sequence=" << s.name << " pulses=" << s.events.size()
             << " cycle_s=" << fmt(cycle_duration(s)) << "\n";
}

int run_command(std::string_view command, const ExperimentConfig& cfg, const RunContext& ctx, std::ostream& err) {
    try {
        if (command == "decay") cmd_decay(cfg, ctx);
        else if (command == "protect") cmd_protect(cfg, ctx);
        else if (command == "calibrate") cmd_calibrate(cfg, ctx);
        else if (command == "tomo") cmd_tomo(cfg, ctx);
        else if (command == "schedule-dump") cmd_schedule_dump(cfg, ctx);
        else throw ConfigError("unknown command '" + std::string(command) + "'");
        return kOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << "\n";
        return kNumericalError;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::out_of_range& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kIoError;
    }
}

}  // namespace triq::cli
