#include "wqed/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/LU>
#include <Eigen/QR>

namespace wqed::transport {

namespace {

const double kSqrt2Pi = std::sqrt(2.0 * kPi);

using Idx = Eigen::Index;

// Propagation factors e^{i q x_j}, q = k0 (Markovian) or k.
std::vector<cplx> phases(const SystemConfig& config, cplx k) {
    const cplx q = config.markovian ? cplx{config.k0(), 0.0} : k;
    std::vector<cplx> p;
    for (double x : qubit_positions(config)) p.push_back(std::exp(kI * q * x));
    return p;
}

}  // namespace

cplx SinglePhotonSolution::t() const {
    return direction == Direction::FromLeft ? t_segments.back() : r_segments.front();
}

cplx SinglePhotonSolution::r() const {
    return direction == Direction::FromLeft ? r_segments.front() : t_segments.back();
}

namespace {

struct MatchingSystem {
    CMatrix a;
    CVector b;
};

// Rows per qubit: right-mover jump, left-mover jump, qubit equation; then two
// boundary rows. Unknowns: t_0..t_N, r_0..r_N, e_1..e_N.
MatchingSystem matching_system(const SystemConfig& config, cplx k, Direction direction) {
    const int n = config.n_qubits;
    const double V = config.coupling();
    const auto p = phases(config, k);
    const Idx dim = 3 * n + 2;
    auto ti = [](int i) { return static_cast<Idx>(i); };
    auto ri = [n](int i) { return static_cast<Idx>(n + 1 + i); };
    auto ei = [n](int j) { return static_cast<Idx>(2 * n + 1 + j); };
    CMatrix a = CMatrix::Zero(dim, dim);
    CVector b = CVector::Zero(dim);
    Idx row = 0;
    for (int j = 1; j <= n; ++j) {
        const cplx pj = p[static_cast<std::size_t>(j - 1)];
        a(row, ti(j)) = 1.0;
        a(row, ti(j - 1)) = -1.0;
        a(row, ei(j)) = kI * kSqrt2Pi * V / pj;
        ++row;
        a(row, ri(j)) = 1.0;
        a(row, ri(j - 1)) = -1.0;
        a(row, ei(j)) = -kI * kSqrt2Pi * V * pj;
        ++row;
        const cplx c = V / kSqrt2Pi / 2.0;
        a(row, ei(j)) = k - config.omega0;
        a(row, ti(j - 1)) = -c * pj;
        a(row, ti(j)) = -c * pj;
        a(row, ri(j - 1)) = -c / pj;
        a(row, ri(j)) = -c / pj;
        ++row;
    }
    if (config.geometry == Geometry::SemiInfinite) {
        a(row, ti(0)) = 1.0;
        b(row++) = 1.0;
        a(row, ti(n)) = 1.0;
        a(row, ri(n)) = 1.0;
    } else {
        a(row, ti(0)) = 1.0;
        b(row++) = direction == Direction::FromLeft ? 1.0 : 0.0;
        a(row, ri(n)) = 1.0;
        b(row) = direction == Direction::FromLeft ? 0.0 : 1.0;
    }
    return {std::move(a), std::move(b)};
}

}  // namespace

SinglePhotonSolution solve_single_photon(const SystemConfig& config, cplx k, Direction direction) {
    config.validate();
    if (config.geometry == Geometry::SemiInfinite && direction == Direction::FromRight) {
        throw ConfigError("direction", "the semi-infinite waveguide is only driven from the left");
    }
    const int n = config.n_qubits;
    auto [a, b] = matching_system(config, k, direction);
    auto ti = [](int i) { return static_cast<Idx>(i); };
    auto ri = [n](int i) { return static_cast<Idx>(n + 1 + i); };
    auto ei = [n](int j) { return static_cast<Idx>(2 * n + 1 + j); };

    Eigen::FullPivLU<CMatrix> lu(a);
    lu.setThreshold(1e-13);
    if (!lu.isInvertible()) {
        throw SingularError("solve_single_photon: matching system singular at k = " +
                            std::to_string(k.real()) + (k.imag() != 0.0 ? " (complex)" : "") +
                            ", a decoupled mode sits on the real axis");
    }
    const CVector x = lu.solve(b);

    SinglePhotonSolution s;
    s.k = k;
    s.direction = direction;
    for (int i = 0; i <= n; ++i) {
        s.t_segments.push_back(x(ti(i)));
        s.r_segments.push_back(x(ri(i)));
    }
    for (int j = 1; j <= n; ++j) s.e.push_back(x(ei(j)));
    return s;
}

double transmission_probability(const SystemConfig& config, double k) {
    if (config.geometry != Geometry::Infinite) {
        throw ConfigError("geometry", "transmission is defined for the infinite waveguide only");
    }
    return std::norm(solve_single_photon(config, k).t());
}

CMatrix effective_hamiltonian(const SystemConfig& config) {
    config.validate();
    const auto x = qubit_positions(config);
    const Idx n = config.n_qubits;
    const double k0 = config.k0();
    CMatrix h(n, n);
    for (Idx i = 0; i < n; ++i) {
        for (Idx j = 0; j < n; ++j) {
            const double xi = x[static_cast<std::size_t>(i)], xj = x[static_cast<std::size_t>(j)];
            cplx m = std::exp(kI * k0 * std::abs(xi - xj));
            if (config.geometry == Geometry::SemiInfinite) m -= std::exp(kI * k0 * (std::abs(xi) + std::abs(xj)));
            h(i, j) = -kI * (config.gamma / 2.0) * m;
        }
        h(i, i) += config.omega0;
    }
    return h;
}

Couplings couplings(const SystemConfig& config) {
    SystemConfig m = config;
    m.markovian = true;
    const auto p = phases(m, config.omega0);
    const Idx n = config.n_qubits;
    const double V = config.coupling();
    Couplings c;
    c.u_in.resize(n);
    c.out_reflected.resize(n);
    if (config.geometry == Geometry::Infinite) {
        c.out_transmitted.resize(n);
        for (Idx j = 0; j < n; ++j) {
            const cplx pj = p[static_cast<std::size_t>(j)];
            c.u_in(j) = V * pj / kSqrt2Pi;
            c.out_reflected(j) = V * pj / kSqrt2Pi;
            c.out_transmitted(j) = V / pj / kSqrt2Pi;
        }
        c.base_transmitted = 1.0;
        c.base_reflected = 0.0;
    } else {
        for (Idx j = 0; j < n; ++j) {
            const cplx pj = p[static_cast<std::size_t>(j)];
            c.u_in(j) = V * (pj - 1.0 / pj) / kSqrt2Pi;
        }
        c.out_reflected = c.u_in;
        c.base_transmitted = 0.0;
        c.base_reflected = -1.0;
    }
    return c;
}

const CVector& Couplings::out(Channel c) const {
    if (!has(c)) throw IllConditioned("no transmitted channel in front of a mirror");
    return c == Channel::Transmitted ? out_transmitted : out_reflected;
}

cplx Couplings::base(Channel c) const {
    return c == Channel::Transmitted ? base_transmitted : base_reflected;
}

cplx channel_amplitude(const SystemConfig& config, const Couplings& cp, Channel channel, cplx k) {
    // nothing couples: the drive passes (or bounces off the mirror) untouched
    if (cp.u_in.norm() < 1e-12 * config.coupling()) return cp.base(channel);
    const CMatrix h = effective_hamiltonian(config);
    const Idx n = h.rows();
    const CMatrix kh = k * CMatrix::Identity(n, n) - h;
    const CVector e = kh.partialPivLu().solve(cp.u_in);
    return cp.base(channel) - 2.0 * kPi * kI * cp.out(channel).cwiseProduct(e).sum();
}

// ---------------------------------------------------------------------------

cplx PoleSet::mean() const {
    cplx s{0.0, 0.0};
    for (cplx z : poles) s += z;
    return poles.empty() ? s : s / static_cast<double>(poles.size());
}

std::size_t PoleSet::most_subradiant() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < poles.size(); ++i) {
        if (gamma_tilde(i) < gamma_tilde(best)) best = i;
    }
    return best;
}

namespace {

void sort_poles(std::vector<cplx>& z) {
    std::sort(z.begin(), z.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
}

}  // namespace

PoleSet poles(const SystemConfig& config) {
    const auto dec = numerics::eigen_decompose(effective_hamiltonian(config));
    PoleSet out;
    out.eigen_residual = dec.residual;
    for (Idx i = 0; i < dec.values.size(); ++i) out.poles.push_back(dec.values(i));
    sort_poles(out.poles);
    for (std::size_t i = 0; i < out.poles.size(); ++i) {
        for (std::size_t j = i + 1; j < out.poles.size(); ++j) {
            if (std::abs(out.poles[i] - out.poles[j]) < numerics::kDegeneracyThreshold * config.gamma) {
                out.near_degenerate = true;
            }
        }
    }
    return out;
}

namespace {

// With frozen phases the matching matrix depends on k only through the N
// qubit rows, so its determinant is a degree-N polynomial in k and, by
// Cramer's rule, the common denominator of every outgoing amplitude.
cplx matching_determinant(const SystemConfig& m, cplx k) {
    return matching_system(m, k, Direction::FromLeft).a.partialPivLu().determinant();
}

// Newton iteration on the determinant with already located poles divided out.
cplx polish_pole(const SystemConfig& m, cplx start, const std::vector<cplx>& found) {
    auto f = [&](cplx k) {
        cplx v = matching_determinant(m, k);
        for (cplx z : found) v /= (k - z);
        return v;
    };
    cplx k = start;
    const double h = 1e-4 * m.gamma;
    const double cap = 0.5 * m.gamma * m.n_qubits;
    double last = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 200; ++it) {
        const cplx fk = f(k);
        if (fk == 0.0) return k;
        const cplx df = (f(k + h) - f(k - h)) / (2.0 * h);
        if (df == 0.0) break;
        cplx step = fk / df;
        if (std::abs(step) > cap) step *= cap / std::abs(step);
        k -= step;
        last = std::abs(step);
        if (last < 1e-14 * std::abs(k)) return k;
    }
    if (last < 1e-11 * std::abs(k)) return k;
    throw ConvergenceError("reconstructed_poles: Newton refinement did not converge", last);
}

}  // namespace

std::vector<cplx> reconstructed_poles(const SystemConfig& config) {
    SystemConfig m = config;
    m.markovian = true;
    m.validate();
    const int n = config.n_qubits;
    // Gershgorin: every pole lies within (Gamma/2) * max row sum of |M| of omega0.
    const double row = (config.geometry == Geometry::Infinite ? 1.0 : 2.0) * n;
    const double rho = 0.5 * config.gamma * row + 0.25 * config.gamma;
    const cplx center = config.omega0;

    // N + 1 samples on the circle fix the coefficients by a discrete Fourier sum.
    const int samples = n + 1;
    std::vector<cplx> values(static_cast<std::size_t>(samples));
    for (int s = 0; s < samples; ++s) {
        values[static_cast<std::size_t>(s)] =
            matching_determinant(m, center + rho * std::polar(1.0, 2.0 * kPi * s / samples));
    }
    numerics::Polynomial q(static_cast<std::size_t>(samples));
    for (int j = 0; j < samples; ++j) {
        cplx acc{0.0, 0.0};
        for (int s = 0; s < samples; ++s) {
            acc += values[static_cast<std::size_t>(s)] * std::polar(1.0, -2.0 * kPi * j * s / samples);
        }
        q[static_cast<std::size_t>(j)] = acc / static_cast<double>(samples);
    }
    std::vector<cplx> estimates;
    try {
        estimates = numerics::roots(q);
    } catch (const ConvergenceError&) {
        // clustered roots: fall back to starting points spread over the circle
        for (int j = 0; j < n; ++j) estimates.push_back(std::polar(0.5, 2.0 * kPi * j / n));
    }
    for (auto& z : estimates) z = center + rho * z;
    // Sub-radiant poles are only roughly located by the coefficients; refine
    // on the determinant itself.
    std::vector<cplx> found;
    for (cplx start : estimates) found.push_back(polish_pole(m, start, found));
    sort_poles(found);
    return found;
}

// ---------------------------------------------------------------------------

std::vector<cplx> transmission_zeros(const SystemConfig& config) {
    if (config.geometry != Geometry::Infinite) {
        throw ConfigError("geometry", "transmission zeros are defined for the infinite waveguide only");
    }
    const auto cp = couplings(config);
    const CMatrix hp = effective_hamiltonian(config) +
                       2.0 * kPi * kI * cp.u_in * cp.out_transmitted.transpose();
    // For ordered positions the strictly lower part cancels; the Jordan-like
    // structure would wreck a general eigen solve, so read the diagonal.
    const double norm = hp.norm();
    double lower = 0.0;
    for (Idx i = 0; i < hp.rows(); ++i) {
        for (Idx j = 0; j < i; ++j) lower = std::max(lower, std::abs(hp(i, j)));
    }
    std::vector<cplx> z;
    if (lower <= 1e-12 * norm) {
        for (Idx i = 0; i < hp.rows(); ++i) z.push_back(hp(i, i));
    } else {
        z = numerics::hessenberg_qr_eigenvalues(hp);
    }
    sort_poles(z);
    return z;
}

namespace {

double pole_zero_delay(const std::vector<cplx>& p, const std::vector<cplx>& z, double k) {
    double tau = 0.0;
    for (cplx v : p) tau += -v.imag() / std::norm(k - v);
    for (cplx v : z) {
        if (std::abs(v.imag()) > 1e-12) tau += v.imag() / std::norm(k - v);
    }
    return tau;
}

double phase_slope(const SystemConfig& config, double k, double h) {
    const cplx tp = solve_single_photon(config, k + h).t();
    const cplx tm = solve_single_photon(config, k - h).t();
    return std::arg(tp / tm) / (2.0 * h);
}

}  // namespace

double time_delay(const SystemConfig& config, double k, DelayMethod method) {
    if (config.geometry != Geometry::Infinite) {
        throw ConfigError("geometry", "time delay is defined for the infinite waveguide only");
    }
    SystemConfig m = config;
    m.markovian = true;
    const auto ps = poles(m);
    const auto zeros = transmission_zeros(m);
    double near_zero = std::numeric_limits<double>::infinity();
    for (cplx z : zeros) near_zero = std::min(near_zero, std::abs(k - z));

    if (method == DelayMethod::Auto) {
        const bool small = near_zero < 1e-2 * config.gamma || std::abs(solve_single_photon(m, k).t()) < 1e-6;
        method = small ? DelayMethod::PoleZero : DelayMethod::FiniteDifference;
    }
    if (method == DelayMethod::PoleZero) return pole_zero_delay(ps.poles, zeros, k);

    double min_gamma = config.gamma;
    for (std::size_t i = 0; i < ps.poles.size(); ++i) {
        if (ps.gamma_tilde(i) > 0.0) min_gamma = std::min(min_gamma, ps.gamma_tilde(i));
    }
    const double h = std::max(1e-6 * config.gamma, 1e-4 * min_gamma);
    if (std::abs(solve_single_photon(m, k).t()) < 1e-10 || near_zero < 4.0 * h) {
        throw IllConditioned("time_delay: transmission zero at k = " + std::to_string(k) +
                             ", phase undefined");
    }
    const double d1 = phase_slope(m, k, h);
    const double d2 = phase_slope(m, k, h / 2.0);
    return (4.0 * d2 - d1) / 3.0;
}

// ---------------------------------------------------------------------------

namespace {

ScalingFit fit_loglog(std::vector<int> ns, std::vector<double> ys) {
    ScalingFit f;
    f.n_values = ns;
    f.samples = ys;
    const double m = static_cast<double>(ns.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const double lx = std::log(static_cast<double>(ns[i]));
        const double ly = std::log(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    f.exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    f.prefactor = std::exp((sy - f.exponent * sx) / m);
    return f;
}

void check_range(std::span<const int> n_range) {
    if (n_range.size() < 2) throw ConfigError("n_range", "need at least two qubit counts");
    for (int n : n_range) {
        if (n < 2 || n > 12) throw ConfigError("n_range", "qubit counts must lie in 2..12");
    }
}

}  // namespace

ScalingFit subradiance_scaling(double k0L, std::span<const int> n_range, double omega0) {
    check_range(n_range);
    std::vector<int> ns(n_range.begin(), n_range.end());
    std::vector<double> ys;
    for (int n : ns) {
        SystemConfig c;
        c.n_qubits = n;
        c.k0L = k0L;
        c.omega0 = omega0;
        const auto ps = poles(c);
        ys.push_back(ps.gamma_tilde(ps.most_subradiant()));
    }
    return fit_loglog(ns, ys);
}

ScalingFit subradiant_delay_scaling(double k0L, std::span<const int> n_range, double omega0) {
    check_range(n_range);
    std::vector<int> ns(n_range.begin(), n_range.end());
    std::vector<double> ys;
    for (int n : ns) {
        SystemConfig c;
        c.n_qubits = n;
        c.k0L = k0L;
        c.omega0 = omega0;
        const auto ps = poles(c);
        ys.push_back(time_delay(c, ps.omega_tilde(ps.most_subradiant()), DelayMethod::PoleZero));
    }
    return fit_loglog(ns, ys);
}

}  // namespace wqed::transport
