#pragma once

#include <Eigen/Core>

#include <complex>
#include <functional>
#include <vector>

namespace qlambda {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

/// Few-level system H = diag(energies) + couplings. couplings(j, k) is the
/// amplitude for |k> -> |j>, so a Lambda system has couplings(1,0) = Omega1
/// and couplings(2,1) = Omega2.
struct LevelSystem {
    Eigen::VectorXd energies;
    CMat couplings;

    static LevelSystem lambda(double e1, double e2, std::complex<double> omega1, std::complex<double> omega2);
    static LevelSystem lambda(double e1, double e2, double e3, std::complex<double> omega1,
                              std::complex<double> omega2);
    static LevelSystem two_level(double e1, double e2, std::complex<double> omega);

    int size() const { return static_cast<int>(energies.size()); }
    CMat hamiltonian() const;

    /// Throws InvalidArgument unless N is 2..4, shapes agree, the coupling
    /// matrix is Hermitian to 1e-14 and its diagonal is zero.
    void validate() const;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<CVec> states;

    std::vector<double> populations(int level) const;
};

/// Unitary stepping of i hbar psi' = H psi with the exact propagator of the
/// time-independent Hamiltonian. `stride` keeps every stride-th step (the
/// initial and final state are always kept).
Trajectory evolve(const LevelSystem& sys, const CVec& psi0, double duration, double dt, double hbar = 1.0,
                  int stride = 1);

using HamiltonianFn = std::function<CMat(double)>;

/// Same for a time-dependent Hermitian H(t): each step applies
/// exp(-i H(t + dt/2) dt / hbar).
Trajectory evolve(const HamiltonianFn& hamiltonian, const CVec& psi0, double duration, double dt,
                  double hbar = 1.0, int stride = 1);

/// Coupling matrix with phases exp(i (E_j - E_k) t / hbar); zero diagonal.
CMat interaction_frame(const LevelSystem& sys, double t, double hbar = 1.0);

/// Common period 2 pi hbar / omega_fund of the interaction-frame Hamiltonian.
/// DegenerateLevels if coupled levels share an energy,
/// IncommensurateFrequencies if no common period with small integer ratios.
double interaction_period(const LevelSystem& sys, double hbar = 1.0);

struct EffectiveHamiltonian {
    CMat analytic;  // sum_k V_jk V_kl / (E_l - E_k) over resonant (j, l)
    CMat numeric;   // -(i / (2 hbar T)) int_0^T int_0^s1 [H(s1), H(s2)]
    double period = 0.0;

    double relative_mismatch() const;
};

EffectiveHamiltonian magnus_second_order(const LevelSystem& sys, double hbar = 1.0);

/// Omega1 Omega2 / (E1 - E2). PoleEncountered when E1 == E2.
std::complex<double> effective_coupling(std::complex<double> omega1, std::complex<double> omega2, double e1,
                                        double e2);

/// Removes level 4 (index 3), which must couple only to level 2 (index 1),
/// by shifting E2 -> E2 + |Omega|^2 / (E2 - E4). Returns the remaining three
/// levels with their couplings unchanged.
LevelSystem eliminate_pair_level(const LevelSystem& sys4);

/// Rate R of a fit P(t) = sin^2(R t) to the rising edge of a population
/// history (samples with 0.05 < P < 0.95 before the first maximum).
double fit_rabi_rate(const std::vector<double>& times, const std::vector<double>& population);

}  // namespace qlambda
