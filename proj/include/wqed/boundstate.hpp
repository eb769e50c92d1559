// Two-photon scattering off the qubit array for two identical incident
// photons (k1 = k2 = E/2, both right-moving): bound-state weights,
// resonance-fluorescence spectra, g2(t) and the N = 1 photon probabilities.
//
// All single-photon objects are the Markovian amplitudes. With the qubit-space
// resolvent R(k) = (k - H_eff)^-1, the qubit amplitude of an incident photon in
// channel gamma is e^gamma(k) = R(k) u_gamma, and the outgoing bound-state
// amplitude with one photon in channel beta at momentum q carries the factor
// h_{beta,i}(q) = (out_beta^T R(q))_i.
#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wqed/model.hpp"
#include "wqed/numerics.hpp"
#include "wqed/transport.hpp"

namespace wqed::boundstate {

using transport::Channel;
using transport::Direction;

/// Normalization of |d_i d_i> relative to e_i e_i; cancels in S/F and g2.
inline const double kOverlapNorm = std::sqrt(2.0);

/// Optional sink for quadrature spot checks of residue-evaluated integrals.
struct CrossCheck {
    std::string what;
    cplx residue;
    cplx quadrature;
    double quad_error = 0.0;
    double relative() const;
};
using CrossCheckSink = std::function<void(const CrossCheck&)>;

/// Residue-form pieces shared by the two-photon formulas.
class Resolvent {
public:
    explicit Resolvent(const SystemConfig& config);

    const SystemConfig& config() const { return config_; }
    const transport::Couplings& couplings() const { return couplings_; }
    const transport::PoleSet& pole_set() const { return poles_; }
    /// False when poles are closer than the degeneracy threshold (or H_eff is
    /// not diagonalizable); callers then use direct solves or quadrature.
    bool has_pole_form() const { return pole_form_; }

    /// R(k) by a dense solve.
    CMatrix resolvent(cplx k) const;
    /// e^gamma(k) = R(k) u_gamma for an incident photon from `direction`.
    CVector qubit_amplitudes(cplx k, Direction direction) const;
    /// (out_beta^T R(k))_i for all i.
    CVector outgoing(Channel beta, cplx k) const;
    /// Spectral density A(k) = sum_gamma e^gamma(k) e^gamma(k)^dagger.
    CMatrix spectral_density(double k) const;
    cplx amplitude(Channel beta, cplx k) const;
    std::vector<Direction> incident_channels() const;
    std::vector<Channel> outgoing_channels() const;

    /// h_{beta,i} as a rational function (requires pole form).
    numerics::RationalFunction outgoing_rational(Channel beta, int i) const;
    /// R_ij(k) as a rational function (requires pole form).
    numerics::RationalFunction resolvent_rational(int i, int j) const;
    /// A_ij(k) continued off the real axis (requires pole form).
    numerics::RationalFunction spectral_rational(int i, int j) const;

    /// a^m_ij = V_im (V^-1)_mj of H_eff = sum_m z_m a^m.
    cplx projector(int m, int i, int j) const { return vectors_(i, m) * inverse_(m, j); }
    cplx eigenvalue(int m) const { return values_(m); }

private:
    SystemConfig config_;
    transport::Couplings couplings_;
    transport::PoleSet poles_;
    CMatrix h_;
    bool pole_form_ = false;
    CVector values_;
    CMatrix vectors_;
    CMatrix inverse_;
};

struct TwoPhotonState {
    double E = 0.0;
    CVector overlap;  // <d_j d_j | phi_2>
    CMatrix green;    // G_ij = <d_i d_i | G^R(E) | d_j d_j>
    CVector weights;  // G^-1 overlap
    bool decoupled = false;  // no qubit is driven: bound state absent
    std::vector<std::string> warnings;
};

/// sqrt(2) e_j(E/2)^2 for right-moving incidence.
CVector overlap_vector(const Resolvent& rv, double E);
CVector overlap_vector(const SystemConfig& config, double E);

/// G_ij = |c|^2 int dk1 A_ij(k1) R_ij(E - k1) (the inner momentum integral
/// closed in the lower half plane), the outer integral by residues over the
/// poles. With near-degenerate poles the outer integral falls back to
/// adaptive quadrature and a warning is recorded.
CMatrix green_matrix(const Resolvent& rv, double E, std::vector<std::string>* warnings = nullptr,
                     const CrossCheckSink& sink = {});
CMatrix green_matrix(const SystemConfig& config, double E);

TwoPhotonState two_photon_state(const Resolvent& rv, double E, const CrossCheckSink& sink = {});
TwoPhotonState two_photon_state(const SystemConfig& config, double E);

/// alpha_{gamma beta, i}(k): the bound-state component i projected on a
/// single photon of momentum k incident from `gamma`, with the other photon
/// detected at x0 in channel beta. The detector integral over the remaining
/// momentum is evaluated by residues (iε prescription on the contour) and
/// gives conj(e^gamma_i(k)) h_{beta,i}(E - k) e^{i(E - k)|x0|}, up to which
/// phase the result is independent of x0. x0 must lie beyond the array on the
/// side of the channel.
cplx alpha_beta(const Resolvent& rv, double E, int i, Direction gamma, Channel beta, double k, double x0,
                const CrossCheckSink& sink = {});

/// On-shell T^{gamma beta}(omega): the dissipative part of the triple integral
/// whose energy denominator (E - k - omega + i0) fixes k = E - omega. Only this
/// part survives in S = 2 Re[y^dagger T y]; entries are
/// 4 pi^2 conj(alpha_i) alpha_j evaluated at k = E - omega.
CMatrix t_matrix(const Resolvent& rv, double E, Direction gamma, Channel beta, double omega);

struct SpectrumResult {
    double E = 0.0;
    std::vector<double> omega_grid;
    std::vector<double> S_R;  // transmitted (right-going) incoherent density
    std::vector<double> S_L;  // reflected (left-going) incoherent density
    std::vector<double> normalized;  // (S_R + S_L) / F
    double flux = 0.0;  // F = int (S_R + S_L) d omega
    double coherent_weight_R = 0.0;  // |t(E/2)|^2
    double coherent_weight_L = 0.0;  // |r(E/2)|^2
    double interference_R = 0.0;  // plane-wave / bound-state cross term at omega = E/2
    double interference_L = 0.0;
    double flux_error = 0.0;
    std::vector<std::string> warnings;

    std::vector<double> total() const;
};

/// Default grid: 2001 points over [E/2 - 6, E/2 + 6] Gamma.
std::vector<double> default_omega_grid(const SystemConfig& config, double E);

/// S_beta(omega) = 2 Re sum_gamma y^dagger T^{gamma beta}(omega) y with
/// y = conj(c) G^-1 overlap. E must lie within 10 Gamma of 2 omega0.
SpectrumResult incoherent_spectrum(const SystemConfig& config, double E, const std::vector<double>& omega_grid,
                                   const CrossCheckSink& sink = {});

/// Closed form 8 pi^2 sum_beta' |sum_i y_i h_{beta,i}(omega) h_{beta',i}(E - omega)|^2,
/// algebraically independent of the T-matrix assembly.
double spectrum_direct(const Resolvent& rv, const TwoPhotonState& st, Channel beta, double omega);

/// Plane-wave / bound-state cross term of the two-photon probability in
/// channel beta: 4 Re sum_beta' conj(t_beta t_beta') i sum_i y_i h_{beta,i}(E/2) h_{beta',i}(E/2).
double interference_term(const Resolvent& rv, const TwoPhotonState& st, Channel beta);

/// int S_beta d omega by adaptive quadrature over the real line.
numerics::QuadResult integrated_spectrum(const Resolvent& rv, const TwoPhotonState& st, Channel beta);

struct G2Trace {
    Channel channel = Channel::Reflected;
    double E = 0.0;
    std::vector<double> t_grid;  // Gamma t
    std::vector<double> values;
    cplx denominator_amplitude;  // t_beta(E/2)^2
};

std::vector<double> default_t_grid(double t_max = 40.0, std::size_t points = 2000);

/// g2(t) = |psi_2(x0, x0 + t)|^2 / |t_beta(E/2)^2|^2 in the far field, with
/// the bound-state part evaluated by residues (closing above for t > 0).
/// Throws IllConditioned when |t_beta(E/2)|^2 < 1e-12.
G2Trace g2_trace(const SystemConfig& config, double E, Channel channel, const std::vector<double>& t_grid,
                 const CrossCheckSink& sink = {});

struct PhotonProbabilities {
    std::optional<double> T2;  // infinite geometry only
    double R2 = 0.0;
    double plane_T = 0.0, interference_T = 0.0, bound_T = 0.0;
    double plane_R = 0.0, interference_R = 0.0, bound_R = 0.0;
};

/// Two-photon transmission and reflection probabilities for N = 1 with drive
/// power A^2: plane part |t|^2 plus 2 pi^2 A^2 (interference + int S d omega / 2 pi).
PhotonProbabilities photon_probabilities_n1(const SystemConfig& config, double E, double drive_power);

}  // namespace wqed::boundstate
