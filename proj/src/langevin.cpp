#include "wqed/langevin.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <optional>

#include "wqed/errors.hpp"

namespace wqed::langevin {

namespace {

using Basis = std::vector<std::vector<Op>>;

const Basis& basis_one() {
    static const Basis b{{Op::Lower}, {Op::Raise}, {Op::Number}};
    return b;
}

// Ordering of the two-qubit S vector; entry = {qubit 1 slot, qubit 2 slot}.
const Basis& basis_two() {
    static const Basis b{
        {Op::Lower, Op::Id},      {Op::Raise, Op::Id},     {Op::Id, Op::Lower},      {Op::Id, Op::Raise},
        {Op::Number, Op::Id},     {Op::Id, Op::Number},    {Op::Raise, Op::Lower},   {Op::Lower, Op::Raise},
        {Op::Lower, Op::Lower},   {Op::Raise, Op::Raise},  {Op::Number, Op::Lower},  {Op::Number, Op::Raise},
        {Op::Lower, Op::Number},  {Op::Raise, Op::Number}, {Op::Number, Op::Number},
    };
    return b;
}

int find_index(const Basis& basis, const std::vector<Op>& ops) {
    const auto it = std::find(basis.begin(), basis.end(), ops);
    return it == basis.end() ? -1 : static_cast<int>(it - basis.begin());
}

// sigma+ applied from the left on one qubit slot; Id means the product vanishes.
std::optional<Op> raise_times(Op op) {
    switch (op) {
        case Op::Id: return Op::Raise;
        case Op::Lower: return Op::Number;
        default: return std::nullopt;
    }
}

// One qubit with complex drive g (g = Omega / 2 on the bare waveguide).
void fill_one(LangevinSystem& s, cplx g) {
    const double G = s.gamma;
    const double d = s.k - s.omega;
    s.D = CMatrix::Zero(3, 3);
    s.D(0, 0) = cplx(-G / 2.0, d);
    s.D(0, 2) = 2.0 * kI * g;
    s.D(1, 1) = cplx(-G / 2.0, -d);
    s.D(1, 2) = -2.0 * kI * std::conj(g);
    s.D(2, 0) = kI * std::conj(g);
    s.D(2, 1) = -kI * g;
    s.D(2, 2) = -G;
    s.F = CVector::Zero(3);
    s.F(0) = -kI * g;
    s.F(1) = kI * std::conj(g);
    s.drive = {g};
}

void fill_two(LangevinSystem& s, double k0L) {
    const double G = s.gamma;
    const double d = s.k - s.omega;
    const cplx N = s.drive_n, Nc = std::conj(N);
    const cplx E = std::exp(kI * k0L), Ec = std::conj(E);
    const double c2 = 2.0 * G * std::cos(k0L);
    const cplx i = kI;
    auto& D = s.D;
    D = CMatrix::Zero(15, 15);

    D(0, 0) = i * d - G / 2.0; D(0, 2) = -G / 2.0 * E; D(0, 4) = 2.0 * i * N; D(0, 10) = G * E;
    D(1, 1) = -i * d - G / 2.0; D(1, 3) = -G / 2.0 * Ec; D(1, 4) = -2.0 * i * Nc; D(1, 11) = G * Ec;
    D(2, 0) = -G / 2.0 * E; D(2, 2) = i * d - G / 2.0; D(2, 5) = 2.0 * i * Nc; D(2, 12) = G * E;
    D(3, 1) = -G / 2.0 * Ec; D(3, 3) = -i * d - G / 2.0; D(3, 5) = -2.0 * i * N; D(3, 13) = G * Ec;

    D(4, 0) = i * Nc; D(4, 1) = -i * N; D(4, 4) = -G; D(4, 6) = -G / 2.0 * E; D(4, 7) = -G / 2.0 * Ec;
    D(5, 2) = i * N; D(5, 3) = -i * Nc; D(5, 5) = -G; D(5, 6) = -G / 2.0 * Ec; D(5, 7) = -G / 2.0 * E;

    D(6, 1) = -i * Nc; D(6, 2) = i * Nc; D(6, 4) = -G / 2.0 * E; D(6, 5) = -G / 2.0 * Ec; D(6, 6) = -G;
    D(6, 10) = -2.0 * i * Nc; D(6, 13) = 2.0 * i * Nc; D(6, 14) = c2;
    D(7, 0) = i * N; D(7, 3) = -i * N; D(7, 4) = -G / 2.0 * Ec; D(7, 5) = -G / 2.0 * E; D(7, 7) = -G;
    D(7, 11) = 2.0 * i * N; D(7, 12) = -2.0 * i * N; D(7, 14) = c2;

    D(8, 0) = -i * Nc; D(8, 2) = -i * N; D(8, 8) = 2.0 * i * d - G; D(8, 10) = 2.0 * i * N; D(8, 12) = 2.0 * i * Nc;
    D(9, 1) = i * N; D(9, 3) = i * Nc; D(9, 9) = -2.0 * i * d - G; D(9, 11) = -2.0 * i * Nc; D(9, 13) = -2.0 * i * N;

    D(10, 4) = -i * Nc; D(10, 6) = -i * N; D(10, 8) = i * Nc; D(10, 10) = i * d - 1.5 * G;
    D(10, 12) = -G / 2.0 * Ec; D(10, 14) = 2.0 * i * Nc;
    D(11, 4) = i * N; D(11, 7) = i * Nc; D(11, 9) = -i * N; D(11, 11) = -i * d - 1.5 * G;
    D(11, 13) = -G / 2.0 * E; D(11, 14) = -2.0 * i * N;
    D(12, 5) = -i * N; D(12, 7) = -i * Nc; D(12, 8) = i * N; D(12, 10) = -G / 2.0 * Ec;
    D(12, 12) = i * d - 1.5 * G; D(12, 14) = 2.0 * i * N;
    D(13, 5) = i * Nc; D(13, 6) = i * N; D(13, 9) = -i * Nc; D(13, 11) = -G / 2.0 * E;
    D(13, 13) = -i * d - 1.5 * G; D(13, 14) = -2.0 * i * Nc;

    D(14, 10) = i * N; D(14, 11) = -i * Nc; D(14, 12) = i * Nc; D(14, 13) = -i * N; D(14, 14) = -2.0 * G;

    s.F = CVector::Zero(15);
    s.F(0) = -i * N;
    s.F(1) = i * Nc;
    s.F(2) = -i * Nc;
    s.F(3) = i * N;
    s.drive = {N, Nc};
}

}  // namespace

int LangevinSystem::lower_index(int j) const {
    std::vector<Op> ops(static_cast<std::size_t>(n_qubits), Op::Id);
    ops[static_cast<std::size_t>(j)] = Op::Lower;
    return find_index(basis, ops);
}

LangevinSystem build_system(const SystemConfig& config, double A, double k) {
    config.validate();
    if (config.n_qubits > 2) {
        throw UnsupportedError("langevin: regression matrices exist for one and two qubits only");
    }
    if (config.geometry == Geometry::SemiInfinite && config.n_qubits != 1) {
        throw UnsupportedError("langevin: two qubits in front of a mirror are not supported");
    }
    if (!(A >= 0.0) || !std::isfinite(A)) throw ConfigError("A", "drive amplitude must be non-negative");

    LangevinSystem s;
    s.n_qubits = config.n_qubits;
    s.dim = config.n_qubits == 1 ? 3 : 15;
    s.A = A;
    s.k = k;
    s.rabi = std::sqrt(2.0 * config.gamma) * A;
    s.delta = k - config.omega0;
    s.basis = config.n_qubits == 1 ? basis_one() : basis_two();

    const auto cp = transport::couplings(config);
    const double root = std::sqrt(2.0 * kPi);
    for (Channel c : {Channel::Transmitted, Channel::Reflected}) {
        if (!cp.has(c)) continue;
        s.channels.push_back(c);
        s.base.push_back(cp.base(c));
        s.detect.push_back(root * cp.out(c));
    }

    if (config.geometry == Geometry::SemiInfinite) {
        // renormalized frequency and decay rate of the single pole
        const cplx z = transport::effective_hamiltonian(config)(0, 0);
        s.omega = z.real();
        s.gamma = -2.0 * z.imag();
        const cplx g = A * root * cp.u_in(0);
        if (s.gamma < 1e-12 * config.gamma) {
            s.degenerate = true;
            s.warnings.emplace_back("qubit sits at a node of the mirror field: no decay, no drive");
        }
        fill_one(s, g);
    } else if (config.n_qubits == 1) {
        s.omega = config.omega0;
        s.gamma = config.gamma;
        fill_one(s, cplx(s.rabi / 2.0, 0.0));
    } else {
        s.omega = config.omega0;
        s.gamma = config.gamma;
        s.drive_n = config.coupling() * A * std::exp(-0.5 * kI * config.k0L);
        fill_two(s, config.k0L);
    }
    s.S0 = CVector::Zero(s.dim);
    return s;
}

CVector steady_state(const LangevinSystem& sys) {
    Eigen::FullPivLU<CMatrix> lu(sys.D);
    lu.setThreshold(1e-13);
    if (!lu.isInvertible()) throw SingularError("langevin: D is singular (decoupled qubit)");
    return lu.solve(-sys.F);
}

std::pair<cplx, double> steady_state_closed_form(double gamma, double delta, double rabi) {
    const double den = gamma * (gamma * gamma / 4.0 + delta * delta) + gamma * rabi * rabi / 2.0;
    const cplx s1 = -0.5 * kI * gamma * cplx(gamma / 2.0, delta) * rabi / den;
    const double s2 = 0.5 * gamma * rabi * rabi / den;
    return {s1, s2};
}

WeakAmplitudes drive_amplitudes(const LangevinSystem& sys, const CVector& steady) {
    if (!(sys.A > 0.0)) throw ConfigError("A", "amplitudes need a nonzero drive");
    WeakAmplitudes w;
    w.e = CVector(sys.n_qubits);
    for (int j = 0; j < sys.n_qubits; ++j) w.e(j) = steady(sys.lower_index(j)) / sys.A;
    for (std::size_t b = 0; b < sys.channels.size(); ++b) {
        const cplx a = sys.base[b] - kI * (sys.detect[b].transpose() * w.e)(0);
        if (sys.channels[b] == Channel::Transmitted) {
            w.t = a;
        } else {
            w.r = a;
        }
    }
    return w;
}

WeakAmplitudes weak_drive_amplitudes(const SystemConfig& config, double k) {
    const auto sys = build_system(config, 1e-6 * std::sqrt(config.gamma), k);
    return drive_amplitudes(sys, steady_state(sys));
}

namespace {

// dS^(i)(0) for the correlations <sigma_i+(T) X(T + t')>.
CVector regression_initial(const LangevinSystem& sys, const CVector& steady, int i) {
    CVector out(sys.dim);
    const cplx si_conj = std::conj(steady(sys.lower_index(i)));
    for (int x = 0; x < sys.dim; ++x) {
        auto ops = sys.basis[static_cast<std::size_t>(x)];
        const auto raised = raise_times(ops[static_cast<std::size_t>(i)]);
        cplx at_zero{0.0, 0.0};
        if (raised) {
            ops[static_cast<std::size_t>(i)] = *raised;
            at_zero = steady(find_index(sys.basis, ops));
        }
        out(x) = at_zero - si_conj * steady(x);
    }
    return out;
}

std::size_t channel_slot(const LangevinSystem& sys, Channel beta) {
    const auto it = std::find(sys.channels.begin(), sys.channels.end(), beta);
    if (it == sys.channels.end()) throw ConfigError("channel", "not present in this geometry");
    return static_cast<std::size_t>(it - sys.channels.begin());
}

double contract(const LangevinSystem& sys, const std::vector<CVector>& per_qubit, std::size_t slot) {
    const CVector& c = sys.detect[slot];
    cplx sum{0.0, 0.0};
    for (int i = 0; i < sys.n_qubits; ++i) {
        for (int j = 0; j < sys.n_qubits; ++j) {
            sum += std::conj(c(i)) * c(j) * per_qubit[static_cast<std::size_t>(i)](sys.lower_index(j));
        }
    }
    return sum.real();
}

}  // namespace

double incoherent_density(const LangevinSystem& sys, const CVector& steady, Channel beta, double omega) {
    const std::size_t slot = channel_slot(sys, beta);
    const CMatrix M = sys.D + kI * (omega - sys.k) * CMatrix::Identity(sys.dim, sys.dim);
    Eigen::FullPivLU<CMatrix> lu(M);
    lu.setThreshold(1e-14);
    if (!lu.isInvertible()) throw SingularError("langevin: regression resolvent singular on the real axis");
    std::vector<CVector> I;
    for (int i = 0; i < sys.n_qubits; ++i) I.push_back(-lu.solve(regression_initial(sys, steady, i)));
    return contract(sys, I, slot) / kPi;
}

RegressionSpectrum regression_spectrum(const LangevinSystem& sys, const std::vector<double>& omega_grid) {
    const CVector steady = steady_state(sys);
    RegressionSpectrum out;
    out.omega_grid = omega_grid;

    std::vector<CVector> dS0;
    for (int i = 0; i < sys.n_qubits; ++i) dS0.push_back(regression_initial(sys, steady, i));

    CVector s(sys.n_qubits);
    for (int j = 0; j < sys.n_qubits; ++j) s(j) = steady(sys.lower_index(j));
    const double A2 = sys.A * sys.A;
    double total = 0.0;
    for (std::size_t b = 0; b < sys.channels.size(); ++b) {
        const cplx mean = sys.base[b] * sys.A - kI * (sys.detect[b].transpose() * s)(0);
        // int Re I d omega = pi Re dS(0)
        const double incoh = contract(sys, dS0, b);
        if (sys.channels[b] == Channel::Transmitted) {
            out.coherent_R = std::norm(mean);
            out.incoherent_R = incoh;
        } else {
            out.coherent_L = std::norm(mean);
            out.incoherent_L = incoh;
        }
        total += std::norm(mean) + incoh;
    }
    out.conservation_residual = A2 > 0.0 ? (total - A2) / A2 : total;

    out.S_R.assign(omega_grid.size(), 0.0);
    out.S_L.assign(omega_grid.size(), 0.0);
    out.skipped.assign(omega_grid.size(), false);
    for (std::size_t n = 0; n < omega_grid.size(); ++n) {
        const CMatrix M = sys.D + kI * (omega_grid[n] - sys.k) * CMatrix::Identity(sys.dim, sys.dim);
        Eigen::FullPivLU<CMatrix> lu(M);
        lu.setThreshold(1e-14);
        if (!lu.isInvertible()) {
            out.skipped[n] = true;
            continue;
        }
        std::vector<CVector> I;
        for (const auto& d : dS0) I.push_back(-lu.solve(d));
        for (std::size_t b = 0; b < sys.channels.size(); ++b) {
            const double v = contract(sys, I, b) / kPi;
            (sys.channels[b] == Channel::Transmitted ? out.S_R : out.S_L)[n] = v;
        }
    }
    return out;
}

Trajectory evolve(const LangevinSystem& sys, const std::vector<double>& times, double rel_tol, double abs_tol) {
    namespace ode = boost::numeric::odeint;
    using State = std::vector<cplx>;
    if (times.empty()) return {};
    if (!std::is_sorted(times.begin(), times.end()) || times.front() < 0.0) {
        throw ConfigError("times", "must be non-negative and increasing");
    }
    auto rhs = [&](const State& x, State& dxdt, double) {
        for (int r = 0; r < sys.dim; ++r) {
            cplx v = sys.F(r);
            for (int c = 0; c < sys.dim; ++c) v += sys.D(r, c) * x[static_cast<std::size_t>(c)];
            dxdt[static_cast<std::size_t>(r)] = v;
        }
    };
    State x(sys.S0.data(), sys.S0.data() + sys.dim);
    Trajectory tr;
    auto observer = [&](const State& st, double t) {
        tr.times.push_back(t);
        tr.states.push_back(Eigen::Map<const CVector>(st.data(), static_cast<Eigen::Index>(st.size())));
    };
    std::vector<double> grid = times;
    if (grid.front() > 0.0) grid.insert(grid.begin(), 0.0);
    auto stepper = ode::make_dense_output(abs_tol, rel_tol, ode::runge_kutta_dopri5<State>());
    ode::integrate_times(stepper, rhs, x, grid.begin(), grid.end(), 0.01 / (sys.gamma > 0.0 ? sys.gamma : 1.0), observer);
    if (times.front() > 0.0) {
        tr.times.erase(tr.times.begin());
        tr.states.erase(tr.states.begin());
    }
    return tr;
}

}  // namespace wqed::langevin
