#pragma once

#include "qlambda/amplitudes.hpp"
#include "qlambda/dirac.hpp"
#include "qlambda/units.hpp"

#include <optional>
#include <vector>

namespace qlambda {

/// Which two-level pair process the coupling belongs to.
enum class PairVertex {
    Creation,   // photon k + negative-energy electron p -> electron p+k: ubar(p+k) eps(k) u(p)
    Conjugate,  // vacuum -> e-, e+, photon:                  ubar(p) eps*(k) u(p+k)
};

struct PairLabels {
    int spin_p = 1;
    int spin_pk = 1;
    int alpha = 1;
};

/// m / sqrt(|p+k|^2 + m^2), the eta factor of the outgoing electron.
double pair_eta(const Vec3& p, const Vec3& k, double m);

cplx pair_coupling(const Vec3& p, const Vec3& k, const PairLabels& labels, const Constants& c,
                   PairVertex vertex = PairVertex::Creation, double coupling_scale = 1.0);

struct ShiftOptions {
    /// Energy of the photon level; defaults to |k| (on-shell photon mode).
    std::optional<double> photon_energy;
    /// Multiplies every pair coupling (the sqrt(P0/P) rescaling enters here).
    double coupling_scale = 1.0;
    /// Worker threads for the radial panels; the reduction order is fixed, so
    /// results do not depend on this.
    int threads = 1;
};

struct PairShiftSample {
    Vec3 p = Vec3::Zero();
    Vec3 k = Vec3::Zero();
    double eta1 = 0.0;
    double spinor_factor = 0.0;  // sum_{s,s'} |ubar(p+k) eps u(p)|^2, averaged over alpha
    double shift_density = 0.0;
};

/// Level-2 shift contributed by the pair mode p, both two-level systems and
/// all spin labels included, photon polarization averaged:
///   sum |Omega|^2 [1 / (E_k - E_p - E_{p+k}) - 1 / (E_k + E_p + E_{p+k})].
/// RealPairThreshold when E_k >= E_p + E_{p+k}.
PairShiftSample shift_sample(const Vec3& p, const Vec3& k, const Constants& c, const ShiftOptions& opt = {});
double shift_density(const Vec3& p, const Vec3& k, const Constants& c, const ShiftOptions& opt = {});

/// Quadrature layout for the momentum sum V/(2 pi)^3 int d^3p. Radial:
/// Gauss-Legendre panels on [0, m], then panels uniform in log|p| up to the
/// cutoff. Angular: Gauss-Legendre in cos(theta) about khat, uniform in phi.
struct MomentumGrid {
    int inner_panels = 2;
    int panels_per_decade = 4;
    int radial_order = 8;
    int cos_points = 16;
    int phi_points = 4;
    double refinement_tolerance = 1e-3;

    MomentumGrid refined() const;
};

struct ConvergenceReport {
    std::vector<double> cutoffs;
    std::vector<double> partial_sums;
    std::vector<double> tail_estimates;
    double fitted_slope = 0.0;
    double refinement_change = 0.0;  // relative change when the radial grid is doubled
};

struct ShiftResult {
    double shift = 0.0;  // E'_2 up to the cutoff, refined grid
    ConvergenceReport report;
};

/// Angular average of shift_density over the sphere |p| = r.
double angular_average_density(double r, const Vec3& k, const Constants& c, const MomentumGrid& grid,
                               const ShiftOptions& opt = {});

/// Least-squares slope of log|angular average| against log|p| on `samples`
/// log-spaced radii in [r_lo, r_hi].
double radial_slope(const Vec3& k, double r_lo, double r_hi, int samples, const Constants& c,
                    const MomentumGrid& grid = {}, const ShiftOptions& opt = {});

/// V/(2 pi)^3 int_{|p| > cutoff} d^3p density, via the substitution |p| = cutoff / t.
double tail_integral(const Vec3& k, double cutoff, const Constants& c, const MomentumGrid& grid = {},
                     const ShiftOptions& opt = {});

/// E'_2 summed over |p| <= cutoff. Requires cutoff > 10 max(m, |k|);
/// GridTooCoarse when doubling the radial grid moves the result by more than
/// grid.refinement_tolerance (relative).
ShiftResult total_shift(const Vec3& k, double cutoff, const MomentumGrid& grid, const Constants& c,
                        const ShiftOptions& opt = {});

/// (E'_2 / E_k) ((k0)^2 + E_k^2) / ((k0)^2 - E_k^2) with k = p1 - p2.
double pair_factor(const MollerKinematics& kin, double shift);

struct CorrectedAmplitude {
    cplx base;        // M
    cplx correction;  // M_1, first order in E'_2
    double factor = 0.0;  // P, with M_1 = M P
    cplx exact;       // sum Omega1 Omega2 / (E1 - E2 - E'_2)
};

/// First-order vacuum-polarization correction of the Moller amplitude.
/// CorrectionTooLarge when |E'_2| exceeds `guard` times the smallest energy
/// denominator.
CorrectedAmplitude corrected_amplitude(const MollerKinematics& kin, const MollerSpins& spins, double shift,
                                       const Constants& c, const AmplitudeOptions& opt = {}, double guard = 0.1);

struct PairFactorComparison {
    double here = 0.0;  // P in the given frame
    double cm = 0.0;    // P0, everything boosted to p1 + q1 at rest
    double shift_here = 0.0;
    double shift_cm = 0.0;
};

PairFactorComparison pair_factors(const MollerKinematics& kin, double cutoff, const MomentumGrid& grid,
                                  const Constants& c);

/// pair_coupling scaled by sqrt(P0 / P). SignMismatch unless P0 P > 0.
cplx corrected_pair_coupling(const Vec3& p, const Vec3& k, const PairLabels& labels, double p_cm, double p_here,
                             const Constants& c, PairVertex vertex = PairVertex::Creation);

}  // namespace qlambda
