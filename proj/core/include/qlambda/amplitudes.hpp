#pragma once

#include "qlambda/dirac.hpp"
#include "qlambda/units.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace qlambda {

/// e c hbar eta sqrt(1 / (V eps0 E)), the modified vertex prefactor.
struct CouplingFactor {
    double value = 0.0;
    double eta = 1.0;
    double energy = 0.0;
    double volume = 1.0;
};

CouplingFactor coupling_factor(const Constants& k, double eta, double energy, double volume);

/// One ordering of a three-level process: Omega1 Omega2 / (E1 - E2).
struct DiagramAmplitude {
    std::string name;
    cplx omega1;
    cplx omega2;
    double denom = 0.0;
    cplx value;
    double weight = 1.0;  // contribution to the total is weight * value
};

struct AmplitudeResult {
    std::string process;
    Boost frame;
    double eta = 1.0;
    std::vector<DiagramAmplitude> parts;
    cplx total;
    cplx closed_form;
    cplx textbook;
    cplx textbook_ratio;
};

struct AmplitudeOptions {
    SpinorNorm norm = SpinorNorm::Box;  // external spinors only
    std::optional<double> eta_override;
    std::optional<double> volume_override;
    Boost frame;  // recorded in the result, kinematics are taken as given
};

/// Spin and polarization labels (each 1 or 2).
struct ComptonLabels {
    int spin_in = 1;
    int spin_out = 1;
    int pol_in = 1;
    int pol_out = 1;
};

/// External states of the Compton process, built from kinematics + labels or
/// supplied directly (e.g. spinors carried over by boost_spinor).
struct ComptonExternals {
    BiSpinor u_in;
    BiSpinor u_out;
    PolarizationVector eps_in;
    PolarizationVector eps_out;
};

ComptonExternals compton_externals(const ComptonKinematics& kin, const ComptonLabels& labels, double m,
                                   SpinorNorm norm = SpinorNorm::Box);

/// Sum over the two orderings and both intermediate spins of a fermion line
/// u_in -> q -> u_out with `first` attached at the incoming vertex and
/// `second` at the outgoing vertex. Intermediate spinors are box-normalized
/// u_s(q) with energy E_q. The closed form uses (qslash_on + m) / (q^2 - m^2).
AmplitudeResult fermion_line_channel(const std::string& label, const FourVector& q, const BiSpinor& u_in,
                                     const BiSpinor& u_out, const PolarizationVector& first,
                                     const PolarizationVector& second, double eta, const Constants& k,
                                     const AmplitudeOptions& opt);

/// s-channel, q = p + k.
AmplitudeResult compton_pair_A(const ComptonKinematics& kin, const ComptonLabels& labels, const Constants& k,
                               const AmplitudeOptions& opt = {});
AmplitudeResult compton_pair_A(const ComptonKinematics& kin, const ComptonExternals& ext, const Constants& k,
                               const AmplitudeOptions& opt = {});

/// u-channel, q = p - k'.
AmplitudeResult compton_pair_B(const ComptonKinematics& kin, const ComptonLabels& labels, const Constants& k,
                               const AmplitudeOptions& opt = {});
AmplitudeResult compton_pair_B(const ComptonKinematics& kin, const ComptonExternals& ext, const Constants& k,
                               const AmplitudeOptions& opt = {});

/// Both channels; `textbook` holds the Feynman-propagator form
/// e^2 [ubar' eps'* (pslash + kslash + m) eps u / ((p+k)^2 - m^2) + crossed].
AmplitudeResult compton_total(const ComptonKinematics& kin, const ComptonLabels& labels, const Constants& k,
                              const AmplitudeOptions& opt = {});
AmplitudeResult compton_total(const ComptonKinematics& kin, const ComptonExternals& ext, const Constants& k,
                              const AmplitudeOptions& opt = {});

struct MollerSpins {
    int p1 = 1;
    int q1 = 1;
    int p2 = 1;
    int q2 = 1;
};

struct MollerExternals {
    BiSpinor p1, q1, p2, q2;
};

MollerExternals moller_externals(const MollerKinematics& kin, const MollerSpins& spins, double m,
                                 SpinorNorm norm = SpinorNorm::Box);

struct MollerPolarizationTerm {
    int alpha = 1;
    cplx ordering_sum;  // (M_A + M_B) / 2
    cplx closed_form;   // E_k Omega1 Omega2 / (k0^2 - E_k^2)
};

struct MollerResult {
    AmplitudeResult amplitude;
    std::array<MollerPolarizationTerm, 2> per_polarization;
    double energy_denominator = 0.0;     // k0^2 - E_k^2
    double invariant_denominator = 0.0;  // (p1 - p2)^2
};

/// Photon exchange with both emission orderings. The two orderings of the
/// same exchange are averaged (weight 1/2 each), which is what reproduces the
/// closed form E_k Omega1 Omega2 / (k0^2 - E_k^2) per photon polarization.
MollerResult moller_total(const MollerKinematics& kin, const MollerSpins& spins, const Constants& k,
                          const AmplitudeOptions& opt = {});
MollerResult moller_total(const MollerKinematics& kin, const MollerExternals& ext, const Constants& k,
                          const AmplitudeOptions& opt = {});

enum class Process { Compton, Moller };

struct BoostScanConfig {
    Process process = Process::Compton;
    std::vector<double> betas;
    Vec3 direction = Vec3::UnitX();
    SpinorNorm norm = SpinorNorm::Box;
    double energy = 1.0;  // photon energy (Compton) or total CM energy (Moller), CM frame
    double theta = 1.0;
    ComptonLabels compton;
    MollerSpins moller;
};

struct BoostScanRow {
    double beta = 0.0;
    double eta = 1.0;
    double abs_amplitude = 0.0;
    double ratio_to_cm = 1.0;
    double dilation = 1.0;              // sqrt(1 - beta^2)
    double abs_amplitude_unit_eta = 0.0;  // same frame with eta forced to 1
};

/// Re-evaluates the process in frames moving along `direction`. External
/// spinors are carried from the CM frame with boost_spinor and renormalized
/// to the selected convention; polarizations are rebuilt transverse to the
/// boosted photon momenta; the mode volume contracts to V sqrt(1 - beta^2).
std::vector<BoostScanRow> boost_scan(const BoostScanConfig& cfg, const Constants& k);

}  // namespace qlambda
