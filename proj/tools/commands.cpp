#include "commands.hpp"

#include <qlambda/amplitudes.hpp>
#include <qlambda/error.hpp>
#include <qlambda/io.hpp>
#include <qlambda/lambda.hpp>
#include <qlambda/vacpol.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <thread>
#include <utility>

namespace qlambda::cli {

namespace {

[[noreturn]] void config_error(const std::string& key, const std::string& message) {
    throw Error(ErrorCode::ParseError, "key '" + key + "': " + message);
}

bool is_physics_domain(ErrorCode code) {
    switch (code) {
        case ErrorCode::ParseError:
        case ErrorCode::InvalidArgument:
        case ErrorCode::SuperluminalBoost:
        case ErrorCode::BelowThreshold:
        case ErrorCode::StepTooLarge:
        case ErrorCode::GridTooCoarse:
            return false;
        default:
            return true;
    }
}

template <class F>
auto with_diagnostics(const std::vector<std::pair<const char*, FourVector>>& kinematics, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        if (is_physics_domain(e.code())) {
            std::cerr << "kinematics:\n";
            for (const auto& [name, p] : kinematics) std::cerr << "  " << name << " = " << p << '\n';
        }
        throw;
    }
}

void common_flags(Settings& s, const char* default_format) {
    s.flag("out", "output path, '-' for stdout");
    s.flag("format", std::string("csv or json (default ") + default_format + ")");
}

std::string output_format(const Settings& s, const std::string& fallback) {
    return s.choice("format", fallback, {"csv", "json"});
}

SpinorNorm spinor_norm(const Settings& s) {
    return s.choice("norm", "box", {"box", "covariant"}) == "box" ? SpinorNorm::Box : SpinorNorm::Covariant;
}

int label(const Settings& s, const std::string& key) {
    const int v = s.integer(key, 1);
    if (v != 1 && v != 2) config_error(key, "labels are 1 or 2");
    return v;
}

/// --beta is either one number (along x) or three components.
Boost frame_boost(const Settings& s, const std::string& frame) {
    const std::vector<double> beta = s.list("beta", {0.0});
    Vec3 v;
    if (beta.size() == 1) {
        v = Vec3(beta[0], 0.0, 0.0);
    } else if (beta.size() == 3) {
        v = Vec3(beta[0], beta[1], beta[2]);
    } else {
        config_error("beta", "expected one or three components");
    }
    if (frame != "boosted" && !v.isZero(0.0)) config_error("beta", "a nonzero boost needs frame = boosted");
    return Boost(v);
}

void write_amplitude(const Settings& s, const AmplitudeResult& r) {
    const std::string out = s.text("out", "");
    if (output_format(s, "json") == "json") {
        emit(out, amplitude_to_json(r));
    } else {
        std::ostringstream csv;
        write_amplitude_csv(csv, r);
        emit(out, csv.str());
    }
}

std::string summary_path(const Settings& s) {
    const std::string out = s.text("out", "");
    return s.text("summary", out.empty() || out == "-" ? "" : out + ".summary.json");
}

int thread_count() {
    int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("QLAMBDA_THREADS")) {
        const std::string_view text(env);
        int cap = 0;
        const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), cap);
        if (ec != std::errc() || end != text.data() + text.size() || cap < 1) {
            throw Error(ErrorCode::ParseError, "QLAMBDA_THREADS must be a positive integer, got '" +
                                                   std::string(text) + "'");
        }
        n = std::min(n, cap);
    }
    return n;
}

// lambda-sim -----------------------------------------------------------------

void lambda_flags(Settings& s) {
    common_flags(s, "csv");
    s.flag("system", "level-system JSON file");
    s.flag("initial-level", "initially populated level, 1-based (default 1)");
    s.flag("target-level", "level whose population is fitted (default N)");
    s.flag("duration", "evolution time (default pi hbar / |M|)");
    s.flag("dt", "time step (default: the interaction-frame period)");
    s.flag("stride", "keep every n-th step (default: at most 5000 rows)");
    s.flag("summary", "summary JSON path for csv output (default <out>.summary.json)");
}

LevelSystem read_system(const Settings& s) {
    const auto path = s.raw("system");
    if (!path || path->empty()) config_error("system", "a level-system JSON file is required");
    std::ifstream in(*path);
    if (!in) config_error("system", "cannot open '" + *path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    LevelSystem sys = level_system_from_json(text.str());
    sys.validate();
    return sys;
}

void run_lambda(const Settings& s) {
    const Constants& k = s.constants();
    const LevelSystem sys = read_system(s);
    const int n = sys.size();

    LambdaSummary summary;
    summary.levels = n;
    summary.hbar = k.hbar;
    summary.initial_level = s.integer("initial_level", 1);
    summary.target_level = s.integer("target_level", n);
    if (summary.initial_level < 1 || summary.initial_level > n) config_error("initial_level", "out of range");
    if (summary.target_level < 1 || summary.target_level > n) config_error("target_level", "out of range");
    const int from = summary.initial_level - 1;
    const int to = summary.target_level - 1;

    // Degenerate coupled levels have no averaging period; the direct
    // coupling then drives the transition.
    try {
        const EffectiveHamiltonian eff = magnus_second_order(sys, k.hbar);
        summary.period = eff.period;
        summary.analytic_coupling = eff.analytic(to, from);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::DegenerateLevels && e.code() != ErrorCode::IncommensurateFrequencies) throw;
        summary.analytic_coupling = sys.couplings(to, from);
    }
    const double rate = std::abs(summary.analytic_coupling) / k.hbar;

    double fallback_duration = 1.0;
    if (rate > 0.0) {
        fallback_duration = std::numbers::pi / rate;
    } else if (summary.period) {
        fallback_duration = 10.0 * *summary.period;
    }
    summary.duration = s.number("duration", fallback_duration);
    if (!(summary.duration > 0.0)) config_error("duration", "must be positive");
    const double fallback_dt =
        summary.period ? std::min(*summary.period, summary.duration / 20.0) : summary.duration / 2000.0;
    summary.dt = s.number("dt", fallback_dt);
    if (!(summary.dt > 0.0)) config_error("dt", "must be positive");

    const double steps = std::ceil(summary.duration / summary.dt);
    const int stride = s.integer("stride", static_cast<int>(std::max(1.0, std::ceil(steps / 5000.0))));
    if (stride < 1) config_error("stride", "must be >= 1");

    CVec psi0 = CVec::Zero(n);
    psi0[from] = 1.0;
    const Trajectory traj = evolve(sys, psi0, summary.duration, summary.dt, k.hbar, stride);
    summary.samples = traj.times.size();
    summary.final_norm = traj.states.back().norm();

    if (to != from) {
        try {
            summary.fitted_rabi_rate = fit_rabi_rate(traj.times, traj.populations(to));
            if (rate > 0.0) summary.relative_deviation = std::abs(*summary.fitted_rabi_rate - rate) / rate;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::InvalidArgument) throw;
        }
    }

    const std::string out = s.text("out", "");
    if (output_format(s, "csv") == "json") {
        emit(out, lambda_summary_to_json(summary));
        return;
    }
    std::ostringstream csv;
    write_trajectory_csv(csv, traj);
    emit(out, csv.str());
    if (const std::string path = summary_path(s); !path.empty()) emit(path, lambda_summary_to_json(summary));
}

// compton / moller -------------------------------------------------------------

void kinematic_flags(Settings& s, const char* energy_help) {
    common_flags(s, "json");
    s.flag("energy", energy_help);
    s.flag("theta", "scattering angle in radians (default 1)");
    s.flag("frame", "cm, lab or boosted (default cm)");
    s.flag("beta", "boost velocity for frame = boosted: b (along x) or bx,by,bz");
    s.flag("norm", "external spinor normalization: box or covariant (default box)");
}

void compton_flags(Settings& s) {
    kinematic_flags(s, "photon energy in the chosen frame (default 1)");
    s.flag("spin-in", "incoming electron spin label 1|2");
    s.flag("spin-out", "outgoing electron spin label 1|2");
    s.flag("pol-in", "incoming photon polarization 1|2");
    s.flag("pol-out", "outgoing photon polarization 1|2");
}

void run_compton(const Settings& s) {
    const Constants& k = s.constants();
    const double energy = s.number("energy", 1.0);
    const double theta = s.number("theta", 1.0);
    const std::string frame = s.choice("frame", "cm", {"cm", "lab", "boosted"});
    AmplitudeOptions opt;
    opt.norm = spinor_norm(s);
    opt.frame = frame_boost(s, frame);
    const ComptonLabels labels{label(s, "spin_in"), label(s, "spin_out"), label(s, "pol_in"), label(s, "pol_out")};

    const ComptonKinematics kin = frame == "lab" ? compton_lab_kinematics(energy, theta, opt.frame, k.m_e)
                                                 : compton_kinematics(energy, theta, opt.frame, k.m_e);
    const AmplitudeResult r = with_diagnostics({{"p", kin.p}, {"k", kin.k}, {"p'", kin.p_out}, {"k'", kin.k_out}},
                                               [&] { return compton_total(kin, labels, k, opt); });
    write_amplitude(s, r);
}

void moller_flags(Settings& s) {
    kinematic_flags(s, "total CM energy (default 3)");
    s.flag("spin-p1", "incoming electron 1 spin label 1|2");
    s.flag("spin-q1", "incoming electron 2 spin label 1|2");
    s.flag("spin-p2", "outgoing electron 1 spin label 1|2");
    s.flag("spin-q2", "outgoing electron 2 spin label 1|2");
}

void run_moller(const Settings& s) {
    const Constants& k = s.constants();
    const double energy = s.number("energy", 3.0);
    const double theta = s.number("theta", 1.0);
    const std::string frame = s.choice("frame", "cm", {"cm", "lab", "boosted"});
    AmplitudeOptions opt;
    opt.norm = spinor_norm(s);
    opt.frame = frame_boost(s, frame);
    const MollerSpins spins{label(s, "spin_p1"), label(s, "spin_q1"), label(s, "spin_p2"), label(s, "spin_q2")};

    if (frame == "lab") {
        // rest frame of the second incoming electron
        opt.frame = Boost::to_rest_frame(moller_kinematics(energy, theta, Boost(), k.m_e).q1);
    }
    const MollerKinematics kin = moller_kinematics(energy, theta, opt.frame, k.m_e);
    const MollerResult r = with_diagnostics({{"p1", kin.p1}, {"q1", kin.q1}, {"p2", kin.p2}, {"q2", kin.q2}},
                                            [&] { return moller_total(kin, spins, k, opt); });
    write_amplitude(s, r.amplitude);
}

// vacpol -----------------------------------------------------------------------

void vacpol_flags(Settings& s) {
    common_flags(s, "csv");
    s.flag("k", "photon wavevector kx,ky,kz (default 0,0,0.5)");
    s.flag("cutoff", "momentum cutoff (default 1000 m_e)");
    s.flag("photon-energy", "energy of the photon level (default |k|)");
    s.flag("inner-panels", "radial panels on [0, m]");
    s.flag("panels-per-decade", "logarithmic radial panels per decade");
    s.flag("radial-order", "Gauss-Legendre points per radial panel");
    s.flag("cos-points", "Gauss-Legendre points in cos(theta)");
    s.flag("phi-points", "uniform points in phi");
    s.flag("refinement-tolerance", "allowed relative change under radial refinement");
    s.flag("summary", "summary JSON path for csv output (default <out>.summary.json)");
}

void run_vacpol(const Settings& s) {
    const Constants& k = s.constants();
    const Vec3 photon = s.vec3("k", Vec3(0.0, 0.0, 0.5));
    const double cutoff = s.number("cutoff", 1000.0 * k.m_e);
    MomentumGrid grid;
    grid.inner_panels = s.integer("inner_panels", grid.inner_panels);
    grid.panels_per_decade = s.integer("panels_per_decade", grid.panels_per_decade);
    grid.radial_order = s.integer("radial_order", grid.radial_order);
    grid.cos_points = s.integer("cos_points", grid.cos_points);
    grid.phi_points = s.integer("phi_points", grid.phi_points);
    grid.refinement_tolerance = s.number("refinement_tolerance", grid.refinement_tolerance);
    ShiftOptions opt;
    opt.photon_energy = s.number("photon_energy");
    opt.threads = thread_count();

    const ShiftResult r = total_shift(photon, cutoff, grid, k, opt);
    const std::string summary = convergence_summary_json(r, photon, cutoff, grid);
    const std::string out = s.text("out", "");
    if (output_format(s, "csv") == "json") {
        emit(out, summary);
        return;
    }
    std::ostringstream csv;
    write_convergence_csv(csv, r.report);
    emit(out, csv.str());
    if (const std::string path = summary_path(s); !path.empty()) emit(path, summary);
}

// boost-scan -------------------------------------------------------------------

void boost_scan_flags(Settings& s) {
    common_flags(s, "csv");
    s.flag("process", "compton or moller (default compton)");
    s.flag("betas", "comma-separated speeds in [0, 1) (default 0,0.1,...,0.9)");
    s.flag("axis", "boost direction ax,ay,az (default 1,0,0)");
    s.flag("norm", "external spinor normalization: box or covariant (default box)");
    s.flag("energy", "CM photon energy (compton, default 1) or total CM energy (moller, default 3)");
    s.flag("theta", "CM scattering angle in radians (default 1)");
}

void run_boost_scan(const Settings& s) {
    BoostScanConfig cfg;
    cfg.process = s.choice("process", "compton", {"compton", "moller"}) == "compton" ? Process::Compton
                                                                                      : Process::Moller;
    std::vector<double> fallback;
    for (int i = 0; i < 10; ++i) fallback.push_back(0.1 * i);
    cfg.betas = s.list("betas", fallback);
    const Vec3 axis = s.vec3("axis", Vec3::UnitX());
    if (!(axis.norm() > 0.0)) config_error("axis", "must be nonzero");
    cfg.direction = axis.normalized();
    cfg.norm = spinor_norm(s);
    cfg.energy = s.number("energy", cfg.process == Process::Compton ? 1.0 : 3.0);
    cfg.theta = s.number("theta", 1.0);

    const std::vector<BoostScanRow> rows = boost_scan(cfg, s.constants());
    if (output_format(s, "csv") == "json") {
        emit(s.text("out", ""), boost_scan_to_json(rows, cfg.norm));
        return;
    }
    std::ostringstream csv;
    write_boost_scan_csv(csv, rows, cfg.norm);
    emit(s.text("out", ""), csv.str());
}

}  // namespace

const std::vector<CommandSpec>& commands() {
    static const std::vector<CommandSpec> table{
        {"lambda-sim", "Evolve a few-level system and compare the Rabi rate with the effective coupling",
         lambda_flags, run_lambda},
        {"compton", "Electron-photon scattering amplitude", compton_flags, run_compton},
        {"moller", "Electron-electron scattering amplitude", moller_flags, run_moller},
        {"vacpol", "Pair-mode level shift with its convergence report", vacpol_flags, run_vacpol},
        {"boost-scan", "Amplitude magnitude across boosted frames", boost_scan_flags, run_boost_scan},
    };
    return table;
}

}  // namespace qlambda::cli
