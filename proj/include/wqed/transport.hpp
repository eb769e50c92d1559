// Single-photon scattering: piecewise plane-wave eigenstates, the effective
// non-Hermitian Hamiltonian, its poles and the transmission time delay.
#pragma once

#include <span>
#include <vector>

#include "wqed/model.hpp"
#include "wqed/numerics.hpp"

namespace wqed::transport {

enum class Direction { FromLeft, FromRight };

/// Plane-wave amplitudes of the single-photon eigenstate at momentum k.
///
/// Segment i (0-based, i = 0..N) is the region between qubit i and qubit
/// i + 1; segment 0 lies left of the array. Right movers carry
/// t_segments[i] e^{ikx} / sqrt(2 pi), left movers r_segments[i] e^{-ikx} / sqrt(2 pi).
struct SinglePhotonSolution {
    cplx k;
    Direction direction = Direction::FromLeft;
    std::vector<cplx> t_segments;  // size N + 1
    std::vector<cplx> r_segments;  // size N + 1
    std::vector<cplx> e;           // qubit amplitudes, size N

    /// Outgoing amplitude in the forward direction (1 for no scatterer).
    cplx t() const;
    /// Outgoing amplitude back towards the source.
    cplx r() const;
};

/// Solves the matching conditions at each qubit (jumps of the chiral
/// amplitudes, averaged field driving the qubit) plus the boundary condition
/// t_N + r_N = 0 at the mirror for the semi-infinite geometry.
///
/// With config.markovian the propagation phases e^{ikx} are frozen at k0
/// while the detuning k - omega0 is kept. Markovian amplitudes are analytic in
/// k and may be evaluated at complex momentum. Throws SingularError exactly
/// on a real-axis pole.
SinglePhotonSolution solve_single_photon(const SystemConfig& config, cplx k,
                                         Direction direction = Direction::FromLeft);

/// |t(k)|^2 for the infinite geometry.
double transmission_probability(const SystemConfig& config, double k);

/// H_eff = omega0 - i (Gamma/2) M with M_ij = e^{ik0|x_i-x_j|} (minus the
/// mirror image term e^{ik0(|x_i|+|x_j|)} for the semi-infinite geometry).
CMatrix effective_hamiltonian(const SystemConfig& config);

struct PoleSet {
    std::vector<cplx> poles;  // z_i = omega_i - i Gamma_i / 2, sorted by real part
    bool near_degenerate = false;
    double eigen_residual = 0.0;

    double omega_tilde(std::size_t i) const { return poles[i].real(); }
    double gamma_tilde(std::size_t i) const { return -2.0 * poles[i].imag(); }
    cplx mean() const;
    std::size_t most_subradiant() const;
};

PoleSet poles(const SystemConfig& config);

/// Zeros of the Markovian amplitude denominator (t for the infinite
/// waveguide, r for the semi-infinite one) obtained independently of H_eff:
/// the amplitude is sampled at 2N + 1 points on a circle enclosing the poles,
/// P(k) - amp(k) Q(k) = 0 is solved for the numerator P and monic denominator
/// Q, and Q is factored with numerics::roots.
std::vector<cplx> reconstructed_poles(const SystemConfig& config);

enum class DelayMethod { Auto, FiniteDifference, PoleZero };

/// tau(k) = d arg t / dk with propagation phases frozen at k0 (infinite
/// geometry only).
///
/// FiniteDifference: central difference of the phase with step
/// h = max(1e-6, 1e-4 min Gamma_i) and one Richardson step; throws
/// IllConditioned at a transmission zero. PoleZero: t = det(k - H')/det(k - H)
/// with H' = H + 2 pi i u_R u_L^T, so tau = sum_poles (Gamma_i/2)/|k - z_i|^2
/// + sum_zeros Im(zeta)/|k - zeta|^2, continuous across real zeros. Auto uses
/// the finite difference away from zeros and the pole-zero form near them or
/// wherever |t| < 1e-6.
double time_delay(const SystemConfig& config, double k, DelayMethod method = DelayMethod::Auto);

/// Zeros of t(k): eigenvalues of H + 2 pi i u_R u_L^T (infinite geometry).
std::vector<cplx> transmission_zeros(const SystemConfig& config);

struct ScalingFit {
    double exponent = 0.0;
    double prefactor = 0.0;
    std::vector<int> n_values;
    std::vector<double> samples;
};

/// Least-squares log-log fit of min_i Gamma_i against N (infinite geometry).
ScalingFit subradiance_scaling(double k0L, std::span<const int> n_range, double omega0 = 100.0);

/// Same fit for the time delay evaluated at the most sub-radiant pole.
ScalingFit subradiant_delay_scaling(double k0L, std::span<const int> n_range, double omega0 = 100.0);

enum class Channel { Transmitted, Reflected };

/// Drive and detection vectors of the Markovian model in qubit space.
///
/// u_in is the qubit drive by a right-moving unit plane wave:
/// V e^{ik0 x_j} / sqrt(2 pi) on the infinite waveguide and
/// V (e^{ik0 x_j} - e^{-ik0 x_j}) / sqrt(2 pi) in front of the mirror. The
/// outgoing amplitude in a channel is base - 2 pi i out^T (k - H)^-1 u_in.
struct Couplings {
    CVector u_in;
    CVector out_transmitted;  // empty for the semi-infinite geometry
    CVector out_reflected;
    cplx base_transmitted{1.0, 0.0};
    cplx base_reflected{0.0, 0.0};

    bool has(Channel c) const { return c == Channel::Reflected || out_transmitted.size() > 0; }
    const CVector& out(Channel c) const;
    cplx base(Channel c) const;
};

Couplings couplings(const SystemConfig& config);

/// Outgoing Markovian amplitude of a channel from the qubit-space resolvent.
cplx channel_amplitude(const SystemConfig& config, const Couplings& cp, Channel channel, cplx k);

}  // namespace wqed::transport
