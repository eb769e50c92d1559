#include "wqed/boundstate.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <Eigen/LU>

namespace wqed::boundstate {

using numerics::PoleTerm;
using numerics::RationalFunction;
using Idx = Eigen::Index;

double CrossCheck::relative() const {
    const double scale = std::max(std::abs(residue), 1e-300);
    return std::abs(residue - quadrature) / scale;
}

Resolvent::Resolvent(const SystemConfig& config) : config_(config) {
    config_.markovian = true;
    config_.validate();
    couplings_ = transport::couplings(config_);
    poles_ = transport::poles(config_);
    h_ = transport::effective_hamiltonian(config_);
    pole_form_ = !poles_.near_degenerate;
    for (cplx z : poles_.poles) {
        // decoupled modes sit on the real axis where no contour can be chosen
        if (-z.imag() < numerics::kDegeneracyThreshold * config_.gamma) pole_form_ = false;
    }
    if (pole_form_) {
        try {
            auto dec = numerics::eigen_decompose(h_);
            values_ = dec.values;
            vectors_ = dec.vectors;
            inverse_ = dec.inverse;
            const double cond = vectors_.norm() * inverse_.norm();
            if (!std::isfinite(cond) || cond > 1e8) pole_form_ = false;
        } catch (const ConvergenceError&) {
            pole_form_ = false;
        }
    }
}

CMatrix Resolvent::resolvent(cplx k) const {
    const Idx n = h_.rows();
    const CMatrix kh = k * CMatrix::Identity(n, n) - h_;
    return kh.partialPivLu().inverse();
}

CVector Resolvent::qubit_amplitudes(cplx k, Direction direction) const {
    const Idx n = h_.rows();
    const CMatrix kh = k * CMatrix::Identity(n, n) - h_;
    if (config_.geometry == Geometry::SemiInfinite || direction == Direction::FromLeft) {
        return kh.partialPivLu().solve(couplings_.u_in);
    }
    // incidence from the right drives qubit j with V e^{-ik0 x_j} / sqrt(2 pi)
    return kh.partialPivLu().solve(couplings_.out_transmitted);
}

CVector Resolvent::outgoing(Channel beta, cplx k) const {
    const Idx n = h_.rows();
    const CMatrix kh = k * CMatrix::Identity(n, n) - h_;
    // out^T R = (R^T out)^T
    return kh.transpose().partialPivLu().solve(couplings_.out(beta));
}

CMatrix Resolvent::spectral_density(double k) const {
    const Idx n = h_.rows();
    CMatrix a = CMatrix::Zero(n, n);
    for (Direction d : incident_channels()) {
        const CVector e = qubit_amplitudes(k, d);
        a += e * e.adjoint();
    }
    return a;
}

cplx Resolvent::amplitude(Channel beta, cplx k) const {
    return transport::channel_amplitude(config_, couplings_, beta, k);
}

std::vector<Direction> Resolvent::incident_channels() const {
    if (config_.geometry == Geometry::SemiInfinite) return {Direction::FromLeft};
    return {Direction::FromLeft, Direction::FromRight};
}

std::vector<Channel> Resolvent::outgoing_channels() const {
    if (config_.geometry == Geometry::SemiInfinite) return {Channel::Reflected};
    return {Channel::Transmitted, Channel::Reflected};
}

namespace {

void require_pole_form(const Resolvent& rv, const char* what) {
    if (!rv.has_pole_form()) {
        throw DegeneratePoles(std::string(what) + ": poles are near-degenerate or on the real axis");
    }
}

}  // namespace

RationalFunction Resolvent::outgoing_rational(Channel beta, int i) const {
    require_pole_form(*this, "outgoing_rational");
    const CVector& out = couplings_.out(beta);
    std::vector<PoleTerm> terms;
    for (int m = 0; m < values_.size(); ++m) {
        cplx rho{0.0, 0.0};
        for (int j = 0; j < out.size(); ++j) rho += out(j) * projector(m, j, i);
        terms.push_back({values_(m), rho});
    }
    return RationalFunction(std::move(terms));
}

RationalFunction Resolvent::resolvent_rational(int i, int j) const {
    require_pole_form(*this, "resolvent_rational");
    std::vector<PoleTerm> terms;
    for (int m = 0; m < values_.size(); ++m) terms.push_back({values_(m), projector(m, i, j)});
    return RationalFunction(std::move(terms));
}

RationalFunction Resolvent::spectral_rational(int i, int j) const {
    require_pole_form(*this, "spectral_rational");
    // A = (i / 2 pi)(R - R^dagger) since sum_gamma u u^dagger = i (H - H^dagger) / 2 pi
    const cplx c = kI / (2.0 * kPi);
    std::vector<PoleTerm> terms;
    for (int m = 0; m < values_.size(); ++m) {
        terms.push_back({values_(m), c * projector(m, i, j)});
        terms.push_back({std::conj(values_(m)), -c * std::conj(projector(m, j, i))});
    }
    return RationalFunction(std::move(terms));
}

// ---------------------------------------------------------------------------

CVector overlap_vector(const Resolvent& rv, double E) {
    const CVector e = rv.qubit_amplitudes(E / 2.0, Direction::FromLeft);
    return kOverlapNorm * e.cwiseProduct(e);
}

CVector overlap_vector(const SystemConfig& config, double E) { return overlap_vector(Resolvent(config), E); }

namespace {

numerics::Domain line_domain(const Resolvent& rv, double E) {
    std::vector<double> breaks;
    for (cplx z : rv.pole_set().poles) {
        breaks.push_back(z.real());
        breaks.push_back(E - z.real());
    }
    std::sort(breaks.begin(), breaks.end());
    return numerics::Domain::real_line(E / 2.0, rv.config().gamma, breaks);
}

cplx green_entry_quadrature(const Resolvent& rv, double E, int i, int j, double* error) {
    numerics::QuadratureSpec spec;
    spec.abs_tol = 1e-13;
    spec.rel_tol = 1e-11;
    auto f = [&](double k) {
        const CMatrix a = rv.spectral_density(k);
        const CMatrix r = rv.resolvent(E - k);
        return a(i, j) * r(i, j);
    };
    auto res = numerics::integrate(f, line_domain(rv, E), spec);
    if (!res.converged) throw ConvergenceError("green_matrix: quadrature fallback did not converge", res.error);
    if (error) *error = res.error;
    return res.value;
}

}  // namespace

CMatrix green_matrix(const Resolvent& rv, double E, std::vector<std::string>* warnings, const CrossCheckSink& sink) {
    const int n = rv.config().n_qubits;
    const double c2 = kOverlapNorm * kOverlapNorm;
    CMatrix g(n, n);
    if (!rv.has_pole_form()) {
        if (warnings) warnings->push_back("near-degenerate poles: Green matrix by quadrature");
        for (int i = 0; i < n; ++i) {
            for (int j = i; j < n; ++j) {
                g(i, j) = c2 * green_entry_quadrature(rv, E, i, j, nullptr);
                g(j, i) = g(i, j);
            }
        }
        return g;
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            // inner integral: int dk2 A_ij(k2) / (E - k1 - k2 + i0) = R_ij(E - k1)
            const RationalFunction factors[2] = {rv.spectral_rational(i, j),
                                                 rv.resolvent_rational(i, j).reflected(E)};
            g(i, j) = c2 * numerics::residue_sum(factors, numerics::Contour::Lower);
        }
    }
    if (sink) {
        const std::pair<int, int> picks[3] = {{0, 0}, {0, n - 1}, {n - 1, n - 1}};
        for (auto [i, j] : picks) {
            double err = 0.0;
            const cplx q = c2 * green_entry_quadrature(rv, E, i, j, &err);
            sink({"green(" + std::to_string(i) + "," + std::to_string(j) + ")", g(i, j), q, c2 * err});
        }
    }
    return g;
}

CMatrix green_matrix(const SystemConfig& config, double E) { return green_matrix(Resolvent(config), E); }

TwoPhotonState two_photon_state(const Resolvent& rv, double E, const CrossCheckSink& sink) {
    TwoPhotonState st;
    st.E = E;
    const int n = rv.config().n_qubits;
    st.overlap = overlap_vector(rv, E);
    if (rv.couplings().u_in.norm() < 1e-12 * rv.config().coupling()) {
        st.decoupled = true;
        st.green = CMatrix::Zero(n, n);
        st.weights = CVector::Zero(n);
        st.warnings.emplace_back("no qubit couples to the incident photons");
        return st;
    }
    st.green = green_matrix(rv, E, &st.warnings, sink);
    Eigen::FullPivLU<CMatrix> lu(st.green);
    if (!lu.isInvertible()) throw SingularError("two_photon_state: Green matrix is singular");
    st.weights = lu.solve(st.overlap);
    return st;
}

TwoPhotonState two_photon_state(const SystemConfig& config, double E) {
    return two_photon_state(Resolvent(config), E);
}

namespace {

// y = conj(c) G^-1 overlap; the normalization c drops out here.
CVector effective_weights(const TwoPhotonState& st) { return kOverlapNorm * st.weights; }

void check_detector(const Resolvent& rv, Channel beta, double x0) {
    const auto x = qubit_positions(rv.config());
    if (beta == Channel::Transmitted) {
        if (!rv.couplings().has(beta)) throw IllConditioned("no transmitted channel in front of a mirror");
        if (!(x0 > x.back())) throw ConfigError("x0", "transmission detector must lie right of the array");
    } else if (!(x0 < x.front())) {
        throw ConfigError("x0", "reflection detector must lie left of the array");
    }
}

}  // namespace

cplx alpha_beta(const Resolvent& rv, double E, int i, Direction gamma, Channel beta, double k, double x0,
                const CrossCheckSink& sink) {
    check_detector(rv, beta, x0);
    const double xi = std::abs(x0);
    const double s = E - k;
    const CVector e = rv.qubit_amplitudes(k, gamma);
    cplx detector;
    if (rv.has_pole_form()) {
        // (1 / -2 pi i) int dk1 e^{i k1 xi} h(k1) / (s - k1 + i0), closed above
        const RationalFunction factors[2] = {rv.outgoing_rational(beta, i), RationalFunction({{s, -1.0}})};
        detector = numerics::residue_sum(factors, numerics::Contour::Upper, xi, numerics::RealAxis::Above) /
                   (-2.0 * kPi * kI);
        if (sink) {
            sink({"alpha detector integral", detector, std::exp(kI * s * xi) * rv.outgoing(beta, s)(i), 0.0});
        }
    } else {
        detector = std::exp(kI * s * xi) * rv.outgoing(beta, s)(i);
    }
    return std::conj(e(i)) * detector;
}

namespace {

double detector_position(const Resolvent& rv, Channel beta) {
    const auto x = qubit_positions(rv.config());
    return beta == Channel::Transmitted ? x.back() + 1.0 : x.front() - 1.0;
}

}  // namespace

CMatrix t_matrix(const Resolvent& rv, double E, Direction gamma, Channel beta, double omega) {
    const int n = rv.config().n_qubits;
    const double x0 = detector_position(rv, beta);
    CVector a(n);
    for (int i = 0; i < n; ++i) a(i) = alpha_beta(rv, E, i, gamma, beta, E - omega, x0);
    return 4.0 * kPi * kPi * a.conjugate() * a.transpose();
}

std::vector<double> SpectrumResult::total() const {
    std::vector<double> t(S_R.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = S_R[i] + S_L[i];
    return t;
}

std::vector<double> default_omega_grid(const SystemConfig& config, double E) {
    std::vector<double> w(2001);
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = E / 2.0 + config.gamma * (-6.0 + 12.0 * static_cast<double>(i) / 2000.0);
    }
    return w;
}

double spectrum_direct(const Resolvent& rv, const TwoPhotonState& st, Channel beta, double omega) {
    if (st.decoupled) return 0.0;
    const CVector y = effective_weights(st);
    const CVector hb = rv.outgoing(beta, omega);
    double s = 0.0;
    for (Channel other : rv.outgoing_channels()) {
        const CVector ho = rv.outgoing(other, st.E - omega);
        s += std::norm((y.array() * hb.array() * ho.array()).sum());
    }
    return 8.0 * kPi * kPi * s;
}

double interference_term(const Resolvent& rv, const TwoPhotonState& st, Channel beta) {
    if (st.decoupled) return 0.0;
    const CVector y = effective_weights(st);
    const double q = st.E / 2.0;
    const cplx tb = rv.amplitude(beta, q);
    const CVector hb = rv.outgoing(beta, q);
    cplx acc{0.0, 0.0};
    for (Channel other : rv.outgoing_channels()) {
        const cplx to = rv.amplitude(other, q);
        const CVector ho = rv.outgoing(other, q);
        acc += std::conj(tb * to) * kI * (y.array() * hb.array() * ho.array()).sum();
    }
    return 4.0 * acc.real();
}

numerics::QuadResult integrated_spectrum(const Resolvent& rv, const TwoPhotonState& st, Channel beta) {
    if (st.decoupled) return {};
    numerics::QuadratureSpec spec;
    spec.abs_tol = 1e-15;
    spec.rel_tol = 1e-11;
    spec.max_subdivisions = 50000;
    auto f = [&](double w) { return cplx{spectrum_direct(rv, st, beta, w), 0.0}; };
    return numerics::integrate(f, line_domain(rv, st.E), spec);
}

SpectrumResult incoherent_spectrum(const SystemConfig& config, double E, const std::vector<double>& omega_grid,
                                   const CrossCheckSink& sink) {
    if (!(std::abs(E - 2.0 * config.omega0) <= 10.0 * config.gamma)) {
        throw ConfigError("E", "total energy must lie within 10 Gamma of 2 omega0");
    }
    const Resolvent rv(config);
    const auto st = two_photon_state(rv, E, sink);
    SpectrumResult out;
    out.E = E;
    out.omega_grid = omega_grid;
    out.warnings = st.warnings;
    out.S_R.assign(omega_grid.size(), 0.0);
    out.S_L.assign(omega_grid.size(), 0.0);
    const CVector y = effective_weights(st);
    if (!st.decoupled) {
        for (std::size_t p = 0; p < omega_grid.size(); ++p) {
            const double w = omega_grid[p];
            for (Channel beta : rv.outgoing_channels()) {
                double s = 0.0;
                for (Direction gamma : rv.incident_channels()) {
                    const CMatrix t = t_matrix(rv, E, gamma, beta, w);
                    s += 2.0 * (y.adjoint() * t * y)(0).real();
                }
                (beta == Channel::Transmitted ? out.S_R : out.S_L)[p] = s;
            }
        }
        if (sink && !omega_grid.empty()) {
            // alpha detector integrals against a direct solve at three grid points
            const std::size_t picks[3] = {0, omega_grid.size() / 2, omega_grid.size() - 1};
            for (std::size_t p : picks) {
                const Channel beta = rv.outgoing_channels().back();
                alpha_beta(rv, E, 0, Direction::FromLeft, beta, E - omega_grid[p], detector_position(rv, beta),
                           sink);
            }
        }
    }
    double flux = 0.0, err = 0.0;
    for (Channel beta : rv.outgoing_channels()) {
        const auto q = integrated_spectrum(rv, st, beta);
        if (!q.converged) throw ConvergenceError("incoherent_spectrum: flux quadrature did not converge", q.error);
        flux += q.value.real();
        err += q.error;
    }
    out.flux = flux;
    out.flux_error = err;
    const auto tot = out.total();
    out.normalized.resize(tot.size());
    for (std::size_t p = 0; p < tot.size(); ++p) out.normalized[p] = flux > 0.0 ? tot[p] / flux : 0.0;

    const double q = E / 2.0;
    out.coherent_weight_L = std::norm(rv.amplitude(Channel::Reflected, q));
    out.interference_L = interference_term(rv, st, Channel::Reflected);
    if (config.geometry == Geometry::Infinite) {
        out.coherent_weight_R = std::norm(rv.amplitude(Channel::Transmitted, q));
        out.interference_R = interference_term(rv, st, Channel::Transmitted);
    }
    return out;
}

// ---------------------------------------------------------------------------

std::vector<double> default_t_grid(double t_max, std::size_t points) {
    std::vector<double> t(points);
    for (std::size_t i = 0; i < points; ++i) {
        t[i] = points > 1 ? t_max * static_cast<double>(i) / static_cast<double>(points - 1) : 0.0;
    }
    return t;
}

G2Trace g2_trace(const SystemConfig& config, double E, Channel channel, const std::vector<double>& t_grid,
                 const CrossCheckSink& sink) {
    const Resolvent rv(config);
    if (!rv.couplings().has(channel)) throw IllConditioned("g2: no transmitted channel in front of a mirror");
    const cplx tb = rv.amplitude(channel, E / 2.0);
    if (std::norm(tb) < 1e-12) {
        throw IllConditioned("g2: ill-conditioned channel, single-photon amplitude vanishes at E/2");
    }
    G2Trace out;
    out.channel = channel;
    out.E = E;
    out.t_grid = t_grid;
    out.denominator_amplitude = tb * tb;
    const auto st = two_photon_state(rv, E, sink);
    const int n = config.n_qubits;
    if (st.decoupled) {
        out.values.assign(t_grid.size(), 1.0);
        return out;
    }
    require_pole_form(rv, "g2_trace");
    const CVector y = effective_weights(st);
    std::vector<std::array<RationalFunction, 2>> factors;
    for (int i = 0; i < n; ++i) {
        const auto h = rv.outgoing_rational(channel, i);
        factors.push_back({h, h.reflected(E)});
    }
    out.values.reserve(t_grid.size());
    for (double t : t_grid) {
        if (t < 0.0) throw ConfigError("t_grid", "times must be non-negative");
        const double delta = t / config.gamma;
        cplx bound{0.0, 0.0};
        for (int i = 0; i < n; ++i) {
            bound += y(i) * numerics::residue_sum(factors[static_cast<std::size_t>(i)], numerics::Contour::Upper, delta);
        }
        const cplx ratio = tb * tb + 2.0 * kPi * kI * std::exp(-kI * E * delta / 2.0) * bound;
        out.values.push_back(std::norm(ratio) / std::norm(tb * tb));
    }
    return out;
}

PhotonProbabilities photon_probabilities_n1(const SystemConfig& config, double E, double drive_power) {
    if (config.n_qubits != 1) throw UnsupportedError("photon probabilities are derived for a single qubit only");
    if (!(drive_power >= 0.0) || !std::isfinite(drive_power)) {
        throw ConfigError("drive_power", "must be non-negative");
    }
    const Resolvent rv(config);
    const auto st = two_photon_state(rv, E);
    const double q = E / 2.0;
    const double scale = 2.0 * kPi * kPi * drive_power;
    PhotonProbabilities p;
    auto bound = [&](Channel c) {
        const auto r = integrated_spectrum(rv, st, c);
        if (!r.converged) throw ConvergenceError("photon_probabilities_n1: quadrature did not converge", r.error);
        return r.value.real() / (2.0 * kPi);
    };
    p.plane_R = std::norm(rv.amplitude(Channel::Reflected, q));
    p.interference_R = interference_term(rv, st, Channel::Reflected);
    p.bound_R = bound(Channel::Reflected);
    p.R2 = p.plane_R + scale * (p.interference_R + p.bound_R);
    if (config.geometry == Geometry::Infinite) {
        p.plane_T = std::norm(rv.amplitude(Channel::Transmitted, q));
        p.interference_T = interference_term(rv, st, Channel::Transmitted);
        p.bound_T = bound(Channel::Transmitted);
        p.T2 = p.plane_T + scale * (p.interference_T + p.bound_T);
    }
    return p;
}

}  // namespace wqed::boundstate
