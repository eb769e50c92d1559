// Heisenberg-Langevin equations of one or two coherently driven qubits and
// their quantum-regression spectra. Independent of the scattering engine:
// the only shared inputs are the configuration and, for a qubit in front of
// the mirror, its renormalized frequency and decay rate.
//
// The drive is a right-moving coherent field of amplitude A (A^2 photons per
// unit time) at frequency k. Output fields are
//   a_beta = base_beta A - i sum_j c_{beta,j} sigma_j-
// with c the detection couplings scaled by sqrt(2 pi).
#pragma once

#include <string>
#include <vector>

#include "wqed/model.hpp"
#include "wqed/numerics.hpp"
#include "wqed/transport.hpp"

namespace wqed::langevin {

using transport::Channel;

/// One-qubit operator slot of a basis element.
enum class Op { Id, Lower, Raise, Number };

struct LangevinSystem {
    int n_qubits = 1;
    int dim = 3;  // 3 or 15
    CMatrix D;
    CVector F;
    CVector S0;  // ground state: zeros
    double A = 0.0;
    double k = 0.0;
    double omega = 0.0;  // qubit frequency (renormalized in front of the mirror)
    double gamma = 0.0;  // decay rate (renormalized in front of the mirror)
    double rabi = 0.0;   // Omega = sqrt(2 Gamma) A
    double delta = 0.0;  // k - omega0
    cplx drive_n{0.0, 0.0};  // sqrt(Gamma/2) A e^{-i k0 L / 2} for two qubits
    std::vector<cplx> drive;  // g_j: per-qubit drive, F_j = -i g_j
    std::vector<std::vector<Op>> basis;  // operator content of each S entry
    std::vector<Channel> channels;
    std::vector<cplx> base;  // plane-wave part per channel
    std::vector<CVector> detect;  // c_{beta,j} per channel
    bool degenerate = false;  // the drive reaches no decay channel
    std::vector<std::string> warnings;

    /// Index of sigma_j- in S.
    int lower_index(int j) const;
};

/// D and F for the configuration, drive amplitude A and drive frequency k.
/// Infinite waveguide: one or two qubits. Mirror: one qubit with the
/// renormalized frequency and decay rate. Anything else is unsupported.
LangevinSystem build_system(const SystemConfig& config, double A, double k);

/// Solves D S = -F. Throws SingularError when D is singular.
CVector steady_state(const LangevinSystem& sys);

/// Closed-form one-qubit steady state (s1, s2).
std::pair<cplx, double> steady_state_closed_form(double gamma, double delta, double rabi);

struct WeakAmplitudes {
    cplx t{0.0, 0.0};  // zero in front of the mirror
    cplx r{0.0, 0.0};
    CVector e;  // s_j / A, carries the sqrt(2 pi) of the coherent-state normalization
};

/// Coherent output amplitudes <a_beta> / A at the system's drive strength.
/// With small A these are the single-photon amplitudes.
WeakAmplitudes drive_amplitudes(const LangevinSystem& sys, const CVector& steady);

/// A -> 0 limit: rebuilds the system at A = 1e-6 sqrt(Gamma).
WeakAmplitudes weak_drive_amplitudes(const SystemConfig& config, double k);

struct RegressionSpectrum {
    std::vector<double> omega_grid;
    std::vector<double> S_R;  // incoherent, transmitted
    std::vector<double> S_L;  // incoherent, reflected
    std::vector<bool> skipped;  // singular resolvent at that point
    double coherent_R = 0.0;  // delta-function weight at omega = k
    double coherent_L = 0.0;
    double incoherent_R = 0.0;  // exact integral of the incoherent part
    double incoherent_L = 0.0;
    double conservation_residual = 0.0;  // (total flux - A^2) / A^2
};

/// Fourier transform of the two-time correlations from the regression
/// matrix, I(omega) = -(D + i(omega - k))^-1 dS(0), contracted with the
/// detection couplings: S_beta = (1/pi) Re sum_ij conj(c_i) c_j I^(i)_j.
RegressionSpectrum regression_spectrum(const LangevinSystem& sys, const std::vector<double>& omega_grid);

/// Incoherent spectral density at a single frequency.
double incoherent_density(const LangevinSystem& sys, const CVector& steady, Channel beta, double omega);

struct Trajectory {
    std::vector<double> times;
    std::vector<CVector> states;
};

/// Integrates dS/dt = D S + F from S0 with an adaptive Dormand-Prince stepper
/// and records S at the requested times.
Trajectory evolve(const LangevinSystem& sys, const std::vector<double>& times, double rel_tol = 1e-10,
                  double abs_tol = 1e-12);

}  // namespace wqed::langevin
