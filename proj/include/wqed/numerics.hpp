// Shared numeric kernels: rational functions in pole-residue form, contour
// residue sums, polynomial roots, dense eigen decompositions and the adaptive
// Gauss-Kronrod quadrature used as an independent oracle.
#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "wqed/errors.hpp"

namespace wqed {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

namespace numerics {

/// Poles closer than this (in units of Gamma) are treated as degenerate.
inline constexpr double kDegeneracyThreshold = 1e-6;

struct PoleTerm {
    cplx pole;
    cplx residue;
};

/// f(z) = sum_p residue_p / (z - pole_p) + polynomial(z).
///
/// Only simple poles are represented. The polynomial part is stored in
/// ascending coefficient order and is empty for strictly proper functions.
class RationalFunction {
public:
    RationalFunction() = default;
    explicit RationalFunction(std::vector<PoleTerm> terms, std::vector<cplx> polynomial = {})
        : terms_(std::move(terms)), polynomial_(std::move(polynomial)) {}

    static RationalFunction constant(cplx c) { return RationalFunction({}, {c}); }

    const std::vector<PoleTerm>& terms() const { return terms_; }
    const std::vector<cplx>& polynomial() const { return polynomial_; }

    cplx operator()(cplx z) const;

    /// Decay order at infinity: 1 for strictly proper, <= 0 otherwise.
    int decay_order() const;

    /// Analytic continuation of conj(f(k)) off the real axis: conj(f(conj z)).
    RationalFunction conjugated() const;

    /// g(k) = f(s - k) as a function of k.
    RationalFunction reflected(cplx s) const;

    RationalFunction scaled(cplx c) const;

    void add_term(cplx pole, cplx residue) { terms_.push_back({pole, residue}); }

private:
    std::vector<PoleTerm> terms_;
    std::vector<cplx> polynomial_;
};

enum class Contour { Lower, Upper };

/// Treatment of poles lying exactly on the real axis: rejected, or read as
/// displaced infinitesimally above (k = p + i0) or below (k = p - i0).
enum class RealAxis { Reject, Above, Below };

/// Integral over the real line of prod(factors)(k) * exp(i k tau), closed in
/// the half plane fixed by `contour`. Returns 2 pi i * (+/-) sum of enclosed
/// residues. Requires simple poles separated by more than
/// kDegeneracyThreshold; otherwise throws DegeneratePoles.
///
/// For tau != 0 the contour must be Upper when tau > 0 and Lower when
/// tau < 0 (Jordan's lemma); for tau == 0 the product must decay at least as
/// 1/k^2.
cplx residue_sum(std::span<const RationalFunction> factors, Contour contour, double tau = 0.0,
                 RealAxis real_axis = RealAxis::Reject);

/// h(s) = integral dk f(k) / (s - k + i0), as a rational function of s.
/// Closes in the lower half plane, so only lower poles of f contribute.
RationalFunction cauchy_transform_lower(const RationalFunction& f);

/// Monic-or-not polynomial in ascending coefficient order.
using Polynomial = std::vector<cplx>;

cplx evaluate(const Polynomial& p, cplx z);

/// Polynomial with the given roots, leading coefficient 1.
Polynomial from_roots(std::span<const cplx> roots);

/// All roots of p (degree <= 16) via companion-matrix eigenvalues followed by
/// one Newton polish per root. Throws ConvergenceError when the worst scaled
/// residual |p(z)|/||p|| exceeds 1e-10.
std::vector<cplx> roots(const Polynomial& p);

/// Eigenvalues of a general complex matrix via Householder reduction to
/// Hessenberg form and single-shift QR with Wilkinson shifts and deflation.
std::vector<cplx> hessenberg_qr_eigenvalues(const CMatrix& a, int max_sweeps = 100);

struct EigenDecomposition {
    CVector values;
    CMatrix vectors;  // columns
    CMatrix inverse;  // inverse of `vectors`
    double residual = 0.0;  // max_i ||A v_i - lambda_i v_i|| / ||A||
};

/// Dense eigen decomposition A = V diag(values) V^-1 (Eigen's complex Schur
/// solver). Throws ConvergenceError when the residual exceeds `tolerance`.
EigenDecomposition eigen_decompose(const CMatrix& a, double tolerance = 1e-12);

// ---------------------------------------------------------------------------
// Quadrature oracle

struct QuadratureSpec {
    std::vector<double> epsilon_ladder{1e-2, 1e-3, 1e-4};
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_subdivisions = 20000;

    void validate() const;
};

struct QuadResult {
    cplx value;
    double error = 0.0;
    bool converged = true;
    int evaluations = 0;
};

/// Integration domain. Infinite domains are mapped onto (-pi/2, pi/2) with
/// k = center + scale * tan(theta), so tails are integrated exactly rather
/// than truncated.
struct Domain {
    double a = 0.0;
    double b = 0.0;
    bool infinite = false;
    double center = 0.0;
    double scale = 1.0;
    std::vector<double> breakpoints;  // in k, for narrow features

    static Domain finite(double a, double b, std::vector<double> breaks = {}) {
        return {a, b, false, 0.0, 1.0, std::move(breaks)};
    }
    static Domain real_line(double center, double scale, std::vector<double> breaks = {}) {
        return {0.0, 0.0, true, center, scale, std::move(breaks)};
    }
};

using Integrand = std::function<cplx(double)>;

/// Adaptive 7/15-point Gauss-Kronrod integration with global subdivision.
QuadResult integrate(const Integrand& f, const Domain& domain, const QuadratureSpec& spec = {});

/// Integrand depending on the regulator epsilon of an i*epsilon prescription.
using RegularizedIntegrand = std::function<cplx(double k, double epsilon)>;

/// Integrates once per rung of the epsilon ladder and extrapolates the result
/// polynomially to epsilon -> 0 (Neville). The reported error combines the
/// quadrature error with the last extrapolation correction.
QuadResult quad_oracle(const RegularizedIntegrand& f, const Domain& domain,
                       const QuadratureSpec& spec = {});

/// Polynomial extrapolation of samples (x_i, y_i) to x = 0.
cplx extrapolate_to_zero(std::span<const double> x, std::span<const cplx> y);

}  // namespace numerics
}  // namespace wqed
