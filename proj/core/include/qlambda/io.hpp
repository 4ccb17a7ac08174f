#pragma once

#include "qlambda/amplitudes.hpp"
#include "qlambda/lambda.hpp"
#include "qlambda/vacpol.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qlambda {

/// 17 significant digits, '.' decimal point regardless of locale, no negative zero.
std::string format_number(double x);

/// {"energies": [...], "couplings": [[re, im], ...]} with the N*N couplings in
/// row-major order. Nested rows ([[[re, im], ...], ...]) are accepted on input.
/// ParseError names the offending key.
LevelSystem level_system_from_json(std::string_view text);
std::string level_system_to_json(const LevelSystem& sys);

/// {process, frame: {beta}, eta, parts: [{name, omega1, omega2, denom, value,
/// weight}], total, closed_form, textbook_ratio}; complex numbers as [re, im].
std::string amplitude_to_json(const AmplitudeResult& r);

/// One row per diagram part:
/// `name,omega1_re,omega1_im,omega2_re,omega2_im,denom,value_re,value_im,weight`.
void write_amplitude_csv(std::ostream& out, const AmplitudeResult& r);

/// Header `t,re1,im1,re2,im2,...`.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

/// A `# normalization=<box|covariant>` line, then
/// `beta,eta,abs_amplitude,ratio_to_cm,sqrt_one_minus_beta2`.
void write_boost_scan_csv(std::ostream& out, const std::vector<BoostScanRow>& rows, SpinorNorm norm);

/// `cutoff,partial_sum,tail_estimate`.
void write_convergence_csv(std::ostream& out, const ConvergenceReport& report);

/// {"normalization", "rows": [{beta, eta, abs_amplitude, ratio_to_cm, sqrt_one_minus_beta2}]}.
std::string boost_scan_to_json(const std::vector<BoostScanRow>& rows, SpinorNorm norm);

/// Effective-coupling summary of a level-system run. Levels are 1-based.
struct LambdaSummary {
    int levels = 0;
    int initial_level = 1;
    int target_level = 1;
    double hbar = 1.0;
    std::optional<double> period;
    double dt = 0.0;
    double duration = 0.0;
    std::size_t samples = 0;
    cplx analytic_coupling;
    std::optional<double> fitted_rabi_rate;  // in units of 1 / time
    std::optional<double> relative_deviation;
    double final_norm = 1.0;
};

/// Missing optionals are written as null.
std::string lambda_summary_to_json(const LambdaSummary& s);

std::string convergence_summary_json(const ShiftResult& result, const Vec3& k, double cutoff,
                                     const MomentumGrid& grid);

std::string_view to_string(SpinorNorm norm);

}  // namespace qlambda
