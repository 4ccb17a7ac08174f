#include "qlambda/lambda.hpp"

#include "qlambda/error.hpp"
#include "qlambda/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace qlambda {

namespace {

constexpr double kHermitianTol = 1e-14;
constexpr double kNormDriftTol = 1e-6;

double energy_scale(const LevelSystem& sys) {
    double scale = sys.energies.cwiseAbs().maxCoeff();
    return scale > 0.0 ? scale : 1.0;
}

bool same_energy(const LevelSystem& sys, int j, int k) {
    return std::abs(sys.energies[j] - sys.energies[k]) <= 1e-12 * energy_scale(sys);
}

CMat step_propagator(const CMat& h, double dt, double hbar) {
    const Eigen::SelfAdjointEigenSolver<CMat> eig(h);
    const Eigen::VectorXcd phases =
        (eig.eigenvalues().cast<std::complex<double>>() * std::complex<double>(0.0, -dt / hbar)).array().exp();
    return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

void check_initial_state(const CVec& psi0, int n) {
    if (psi0.size() != n) throw Error(ErrorCode::InvalidArgument, "initial state has wrong dimension");
    if (std::abs(psi0.norm() - 1.0) > 1e-9) throw Error(ErrorCode::InvalidArgument, "initial state must be normalized");
}

void check_norm(const CVec& psi, double t) {
    const double drift = std::abs(psi.norm() - 1.0);
    if (!(drift <= kNormDriftTol)) {
        std::ostringstream msg;
        msg << "norm drift " << drift << " at t = " << t;
        throw Error(ErrorCode::StepTooLarge, msg.str());
    }
}

struct StepPlan {
    long long steps;
    double dt;
};

StepPlan plan_steps(double duration, double dt, int stride) {
    if (!(duration >= 0.0) || !(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "need duration >= 0 and dt > 0");
    if (stride < 1) throw Error(ErrorCode::InvalidArgument, "stride must be >= 1");
    const auto steps = std::max<long long>(1, static_cast<long long>(std::ceil(duration / dt - 1e-9)));
    return {steps, duration / static_cast<double>(steps)};
}

template <class StepFn>
Trajectory run(const CVec& psi0, const StepPlan& plan, int stride, StepFn&& step) {
    Trajectory traj;
    const auto kept = static_cast<std::size_t>(plan.steps / stride + 2);
    traj.times.reserve(kept);
    traj.states.reserve(kept);
    CVec psi = psi0;
    traj.times.push_back(0.0);
    traj.states.push_back(psi);
    for (long long n = 1; n <= plan.steps; ++n) {
        psi = step(static_cast<double>(n - 1) * plan.dt, psi);
        if (n % stride == 0 || n == plan.steps) {
            const double t = static_cast<double>(n) * plan.dt;
            check_norm(psi, t);
            traj.times.push_back(t);
            traj.states.push_back(psi);
        }
    }
    return traj;
}

}  // namespace

LevelSystem LevelSystem::lambda(double e1, double e2, std::complex<double> omega1, std::complex<double> omega2) {
    return lambda(e1, e2, e1, omega1, omega2);
}

LevelSystem LevelSystem::lambda(double e1, double e2, double e3, std::complex<double> omega1,
                                std::complex<double> omega2) {
    LevelSystem sys;
    sys.energies = Eigen::Vector3d(e1, e2, e3);
    sys.couplings = CMat::Zero(3, 3);
    sys.couplings(1, 0) = omega1;
    sys.couplings(0, 1) = std::conj(omega1);
    sys.couplings(2, 1) = omega2;
    sys.couplings(1, 2) = std::conj(omega2);
    return sys;
}

LevelSystem LevelSystem::two_level(double e1, double e2, std::complex<double> omega) {
    LevelSystem sys;
    sys.energies = Eigen::Vector2d(e1, e2);
    sys.couplings = CMat::Zero(2, 2);
    sys.couplings(1, 0) = omega;
    sys.couplings(0, 1) = std::conj(omega);
    return sys;
}

CMat LevelSystem::hamiltonian() const {
    CMat h = couplings;
    h.diagonal() += energies.cast<std::complex<double>>();
    return h;
}

void LevelSystem::validate() const {
    const auto n = energies.size();
    if (n < 2 || n > 4) throw Error(ErrorCode::InvalidArgument, "level count must be 2, 3 or 4");
    if (couplings.rows() != n || couplings.cols() != n) {
        throw Error(ErrorCode::InvalidArgument, "coupling matrix must be N x N");
    }
    if (!energies.allFinite() || !couplings.allFinite()) {
        throw Error(ErrorCode::InvalidArgument, "energies and couplings must be finite");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        if (std::abs(couplings(j, j)) != 0.0) throw Error(ErrorCode::InvalidArgument, "coupling diagonal must be zero");
        for (Eigen::Index k = 0; k < j; ++k) {
            if (std::abs(couplings(j, k) - std::conj(couplings(k, j))) > kHermitianTol) {
                throw Error(ErrorCode::InvalidArgument,
                            "couplings not Hermitian at (" + std::to_string(j) + "," + std::to_string(k) + ")");
            }
        }
    }
}

std::vector<double> Trajectory::populations(int level) const {
    std::vector<double> out;
    out.reserve(states.size());
    for (const auto& s : states) out.push_back(std::norm(s[level]));
    return out;
}

Trajectory evolve(const LevelSystem& sys, const CVec& psi0, double duration, double dt, double hbar, int stride) {
    sys.validate();
    check_initial_state(psi0, sys.size());
    const StepPlan plan = plan_steps(duration, dt, stride);
    const CMat u = step_propagator(sys.hamiltonian(), plan.dt, hbar);
    return run(psi0, plan, stride, [&](double, const CVec& psi) -> CVec { return u * psi; });
}

Trajectory evolve(const HamiltonianFn& hamiltonian, const CVec& psi0, double duration, double dt, double hbar,
                  int stride) {
    const StepPlan plan = plan_steps(duration, dt, stride);
    check_initial_state(psi0, static_cast<int>(hamiltonian(0.0).rows()));
    return run(psi0, plan, stride, [&](double t, const CVec& psi) -> CVec {
        return step_propagator(hamiltonian(t + 0.5 * plan.dt), plan.dt, hbar) * psi;
    });
}

CMat interaction_frame(const LevelSystem& sys, double t, double hbar) {
    const auto n = sys.size();
    CMat h = CMat::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            if (j == k) continue;
            const double phase = (sys.energies[j] - sys.energies[k]) * t / hbar;
            h(j, k) = sys.couplings(j, k) * std::polar(1.0, phase);
        }
    }
    return h;
}

double interaction_period(const LevelSystem& sys, double hbar) {
    sys.validate();
    std::vector<double> gaps;
    for (int j = 0; j < sys.size(); ++j) {
        for (int k = 0; k < j; ++k) {
            if (sys.couplings(j, k) == 0.0) continue;
            if (same_energy(sys, j, k)) {
                throw Error(ErrorCode::DegenerateLevels, "levels " + std::to_string(k + 1) + " and " +
                                                             std::to_string(j + 1) + " are coupled with zero gap");
            }
            gaps.push_back(std::abs(sys.energies[j] - sys.energies[k]));
        }
    }
    if (gaps.empty()) return 2.0 * std::numbers::pi * hbar / energy_scale(sys);

    const double smallest = *std::min_element(gaps.begin(), gaps.end());
    constexpr long long kMaxDenominator = 1000;
    std::vector<std::pair<long long, long long>> ratios;  // gap / smallest = a / b
    long long lcm_b = 1;
    for (double gap : gaps) {
        const double x = gap / smallest;
        long long b = 1;
        for (; b <= kMaxDenominator; ++b) {
            const double xb = x * static_cast<double>(b);
            if (std::abs(xb - std::round(xb)) <= 1e-9 * xb) break;
        }
        if (b > kMaxDenominator) {
            throw Error(ErrorCode::IncommensurateFrequencies, "transition frequencies have no common period");
        }
        ratios.emplace_back(std::llround(x * static_cast<double>(b)), b);
        lcm_b = std::lcm(lcm_b, b);
        if (lcm_b > 1'000'000) {
            throw Error(ErrorCode::IncommensurateFrequencies, "common period too long");
        }
    }
    long long g = 0;
    for (const auto& [a, b] : ratios) g = std::gcd(g, a * (lcm_b / b));
    // fundamental gap = smallest * g / lcm_b
    return 2.0 * std::numbers::pi * hbar * static_cast<double>(lcm_b) / (smallest * static_cast<double>(g));
}

double EffectiveHamiltonian::relative_mismatch() const {
    const double scale = analytic.cwiseAbs().maxCoeff();
    const double diff = (analytic - numeric).cwiseAbs().maxCoeff();
    return scale > 0.0 ? diff / scale : diff;
}

EffectiveHamiltonian magnus_second_order(const LevelSystem& sys, double hbar) {
    const double period = interaction_period(sys, hbar);
    const int n = sys.size();
    const CMat& v = sys.couplings;

    CMat analytic = CMat::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        for (int l = 0; l < n; ++l) {
            if (!same_energy(sys, j, l)) continue;
            for (int k = 0; k < n; ++k) {
                if (k == j || k == l) continue;
                const auto product = v(j, k) * v(k, l);
                if (product == 0.0) continue;
                analytic(j, l) += product / (sys.energies[l] - sys.energies[k]);
            }
        }
    }

    // Composite Gauss-Legendre over the outer variable; the inner integral
    // over [0, s1] uses the same panel layout truncated at s1.
    double max_gap = 0.0;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) max_gap = std::max(max_gap, std::abs(sys.energies[j] - sys.energies[k]));
    const double oscillations = max_gap * period / (2.0 * std::numbers::pi * hbar);
    const int panels = std::max(4, static_cast<int>(std::ceil(2.0 * oscillations)));
    const GaussLegendre rule(20);
    const double width = period / panels;

    auto inner = [&](double s1) -> CMat {
        CMat acc = CMat::Zero(n, n);
        const int full = static_cast<int>(std::floor(s1 / width));
        for (int p = 0; p < full; ++p) {
            acc += rule.integrate([&](double s) -> CMat { return interaction_frame(sys, s, hbar); }, p * width,
                                  (p + 1) * width);
        }
        if (s1 > full * width) {
            acc += rule.integrate([&](double s) -> CMat { return interaction_frame(sys, s, hbar); }, full * width, s1);
        }
        return acc;
    };

    CMat double_commutator = CMat::Zero(n, n);
    for (int p = 0; p < panels; ++p) {
        double_commutator += rule.integrate(
            [&](double s1) -> CMat {
                const CMat h1 = interaction_frame(sys, s1, hbar);
                const CMat integral = inner(s1);
                return h1 * integral - integral * h1;
            },
            p * width, (p + 1) * width);
    }
    const CMat numeric = std::complex<double>(0.0, -1.0 / (2.0 * hbar * period)) * double_commutator;
    return {analytic, numeric, period};
}

std::complex<double> effective_coupling(std::complex<double> omega1, std::complex<double> omega2, double e1,
                                        double e2) {
    if (e1 == e2) throw Error(ErrorCode::PoleEncountered, "E1 == E2");
    return omega1 * omega2 / (e1 - e2);
}

LevelSystem eliminate_pair_level(const LevelSystem& sys4) {
    sys4.validate();
    if (sys4.size() != 4) throw Error(ErrorCode::InvalidArgument, "pair-level elimination needs four levels");
    if (sys4.couplings(3, 0) != 0.0 || sys4.couplings(3, 2) != 0.0) {
        throw Error(ErrorCode::InvalidArgument, "level 4 may couple only to level 2");
    }
    const double gap = sys4.energies[1] - sys4.energies[3];
    if (gap == 0.0) throw Error(ErrorCode::PoleEncountered, "E2 == E4");
    LevelSystem out;
    out.energies = sys4.energies.head<3>();
    out.energies[1] += std::norm(sys4.couplings(3, 1)) / gap;
    out.couplings = sys4.couplings.topLeftCorner<3, 3>();
    return out;
}

double fit_rabi_rate(const std::vector<double>& times, const std::vector<double>& population) {
    if (times.size() != population.size() || times.empty()) {
        throw Error(ErrorCode::InvalidArgument, "times and populations must be non-empty and equal length");
    }
    // Rising edge ends at the first sample where the population turns down
    // after having crossed 0.95.
    double sxy = 0.0;
    double sxx = 0.0;
    bool crossed = false;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double p = population[i];
        if (p >= 0.95) crossed = true;
        if (crossed && p < 0.95) break;
        if (p <= 0.05 || p >= 0.95) continue;
        const double angle = std::asin(std::sqrt(p));
        sxy += times[i] * angle;
        sxx += times[i] * times[i];
    }
    if (sxx == 0.0) throw Error(ErrorCode::InvalidArgument, "population never rises through (0.05, 0.95)");
    return sxy / sxx;
}

}  // namespace qlambda
