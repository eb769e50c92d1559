#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include <Eigen/Eigenvalues>

#include "wqed/boundstate.hpp"
#include "wqed/langevin.hpp"

using namespace wqed;
using namespace wqed::langevin;

namespace {

SystemConfig infinite(int n, double k0L_over_pi) {
    SystemConfig c;
    c.n_qubits = n;
    c.k0L = k0L_over_pi * kPi;
    return c;
}

SystemConfig mirror(int n, double k0a_over_pi) {
    SystemConfig c = infinite(n, 0.5);
    c.geometry = Geometry::SemiInfinite;
    c.k0a = k0a_over_pi * kPi;
    return c;
}

std::vector<cplx> eigenvalues(const CMatrix& m) {
    Eigen::ComplexEigenSolver<CMatrix> es(m, false);
    return {es.eigenvalues().data(), es.eigenvalues().data() + m.rows()};
}

double nearest(const std::vector<cplx>& set, cplx z) {
    double best = 1e300;
    for (cplx s : set) best = std::min(best, std::abs(s - z));
    return best;
}

// textbook two-level steady state: rho_ee = (W^2/4) / (d^2 + G^2/4 + W^2/2)
double excited_population(double d, double W) { return 0.25 * W * W / (d * d + 0.25 + 0.5 * W * W); }

}  // namespace

TEST_CASE("undriven one-qubit matrix") {
    for (double d : {0.0, -1.3}) {
        const auto sys = build_system(infinite(1, 0.5), 0.0, 100.0 + d);
        const auto ev = eigenvalues(sys.D);
        for (cplx want : {cplx{-0.5, d}, cplx{-0.5, -d}, cplx{-1.0, 0.0}}) CHECK(nearest(ev, want) < 1e-14);
        CHECK(sys.F.norm() == 0.0);
    }
}

TEST_CASE("resonant Mollow eigenvalues") {
    for (double W : {5.0, 20.0}) {
        const auto sys = build_system(infinite(1, 0.5), W / std::sqrt(2.0), 100.0);
        CHECK(sys.rabi == doctest::Approx(W));
        const double s = std::sqrt(W * W - 1.0 / 16.0);
        const auto ev = eigenvalues(sys.D);
        for (cplx want : {cplx{-0.5, 0.0}, cplx{-0.75, s}, cplx{-0.75, -s}}) CHECK(nearest(ev, want) < 1e-10);
    }
}

TEST_CASE("Mollow triplet peaks") {
    const double W = 20.0;
    const auto sys = build_system(infinite(1, 0.5), W / std::sqrt(2.0), 100.0);
    const double s = std::sqrt(W * W - 1.0 / 16.0);
    const auto sp = regression_spectrum(sys, {100.0, 100.0 + s, 100.0 - s, 100.0 + 0.5 * s});
    // strong drive: centre to sideband height ratio 3
    CHECK(sp.S_L[0] / sp.S_L[1] == doctest::Approx(3.0).epsilon(5e-3));
    CHECK(sp.S_L[1] == doctest::Approx(sp.S_L[2]).epsilon(1e-10));
    CHECK(sp.S_L[3] < 0.05 * sp.S_L[1]);
}

TEST_CASE("one-qubit steady state against the textbook populations") {
    const auto c = infinite(1, 0.5);
    for (double d : {0.0, -1.0, 0.4}) {
        for (double A : {0.05, 0.7, 3.0}) {
            const auto sys = build_system(c, A, 100.0 + d);
            const auto s = steady_state(sys);
            const double ree = excited_population(d, sys.rabi);
            CHECK(s(2).real() == doctest::Approx(ree).epsilon(1e-12));
            const auto [s1, s2] = steady_state_closed_form(1.0, d, sys.rabi);
            CHECK(std::abs(s(0) - s1) < 1e-12);
            CHECK(std::abs(s(1) - std::conj(s1)) < 1e-12);
            // the printed population form is twice the population
            CHECK(s2 == doctest::Approx(2.0 * ree).epsilon(1e-12));
            // incoherent emission per direction: G/2 (rho_ee - |s1|^2)
            const auto sp = regression_spectrum(sys, {100.0});
            const double inc = 0.5 * (ree - std::norm(s(0)));
            CHECK(sp.incoherent_R == doctest::Approx(inc).epsilon(1e-10));
            CHECK(sp.incoherent_L == doctest::Approx(inc).epsilon(1e-10));
        }
    }
}

TEST_CASE("printed population form at W = G / sqrt 2") {
    const double W = 1.0 / std::sqrt(2.0);
    CHECK(steady_state_closed_form(1.0, 0.0, W).second == doctest::Approx(0.5).epsilon(1e-14));
    const auto sys = build_system(infinite(1, 0.5), W / std::sqrt(2.0), 100.0);
    CHECK(steady_state(sys)(2).real() == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("saturation: coherence vanishes under strong drive") {
    const auto c = infinite(1, 0.5);
    double last = 1.0;
    for (double A : {10.0, 100.0, 1000.0}) {
        const auto sys = build_system(c, A, 100.0);
        const auto s = steady_state(sys);
        CHECK(std::abs(s(0)) < last);
        last = std::abs(s(0));
        CHECK(s(2).real() == doctest::Approx(excited_population(0.0, sys.rabi)).epsilon(1e-12));
    }
    CHECK(last < 1e-3);
    CHECK(excited_population(0.0, 1e6) == doctest::Approx(0.5));
}

TEST_CASE("two-qubit coupling and one-excitation block") {
    const auto c = infinite(2, 0.5);
    const auto sys = build_system(c, 0.3, 100.0);
    CHECK(sys.dim == 15);
    CHECK(std::abs(sys.D(sys.lower_index(0), sys.lower_index(1)) - cplx{0.0, -0.5}) < 1e-14);
    // the sigma- block at A = 0 carries the effective-Hamiltonian poles
    for (double L : {0.3, 0.5, 0.8}) {
        const auto cl = infinite(2, L);
        const double k = 99.5;
        const auto s0 = build_system(cl, 0.0, k);
        const int i0 = s0.lower_index(0), i1 = s0.lower_index(1);
        CMatrix blk(2, 2);
        blk << s0.D(i0, i0), s0.D(i0, i1), s0.D(i1, i0), s0.D(i1, i1);
        const auto ev = eigenvalues(blk);
        for (cplx z : transport::poles(cl).poles) CHECK(nearest(ev, -kI * (z - k)) < 1e-12);
    }
}

TEST_CASE("unsupported and degenerate systems") {
    CHECK_THROWS_AS(build_system(infinite(3, 0.5), 0.1, 100.0), UnsupportedError);
    CHECK_THROWS_AS(build_system(mirror(2, 0.5), 0.1, 100.0), UnsupportedError);
    CHECK_THROWS_AS(build_system(infinite(1, 0.5), -0.1, 100.0), ConfigError);
    const auto sys = build_system(mirror(1, 1.0), 0.1, 100.0);
    CHECK(sys.degenerate);
    CHECK_FALSE(sys.warnings.empty());
    CHECK_THROWS_AS(steady_state(sys), SingularError);
}

TEST_CASE("mirror renormalization") {
    for (double a : {0.25, 0.5, 0.7}) {
        const auto sys = build_system(mirror(1, a), 0.1, 100.0);
        const double phi = 2.0 * a * kPi;
        CHECK(sys.omega == doctest::Approx(100.0 - 0.5 * std::sin(phi)).epsilon(1e-13));
        CHECK(sys.gamma == doctest::Approx(1.0 - std::cos(phi)).epsilon(1e-13));
    }
}

TEST_CASE("weak drive reproduces the scattering amplitudes") {
    for (const auto& c : {infinite(1, 0.5), infinite(2, 0.3), infinite(2, 0.5)}) {
        for (double k : {99.2, 100.0, 100.7}) {
            const auto w = weak_drive_amplitudes(c, k);
            const auto s = transport::solve_single_photon(c, k);
            CHECK(std::abs(w.t - s.t()) < 1e-8);
            CHECK(std::abs(w.r - s.r()) < 1e-8);
        }
    }
    const auto w = weak_drive_amplitudes(infinite(1, 0.5), 100.0);
    CHECK(std::abs(w.t) < 1e-10);
    CHECK(std::abs(w.r + 1.0) < 1e-10);
    for (double a : {0.25, 0.6}) {
        const auto c = mirror(1, a);
        const auto wm = weak_drive_amplitudes(c, 99.7);
        CHECK(std::abs(wm.r - transport::solve_single_photon(c, 99.7).r()) < 1e-8);
    }
}

TEST_CASE("photon flux is conserved and spectra are non-negative") {
    std::vector<double> grid;
    for (int i = 0; i <= 200; ++i) grid.push_back(94.0 + 0.06 * i);
    for (const auto& c : {infinite(1, 0.5), infinite(2, 0.25), infinite(2, 0.5), mirror(1, 0.25)}) {
        for (double A : {0.1, 1.0}) {
            const auto sys = build_system(c, A, 99.6);
            const auto sp = regression_spectrum(sys, grid);
            CHECK(std::abs(sp.conservation_residual) < 1e-10);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                CHECK(sp.S_L[i] >= -1e-14);
                CHECK(sp.S_R[i] >= -1e-14);
            }
        }
    }
}

TEST_CASE("weak-drive nonlinear transmission matches the two-photon result") {
    const auto c = infinite(1, 0.5);
    for (double d : {0.0, -0.7}) {
        const double A2 = 1e-5;
        const auto sys = build_system(c, std::sqrt(A2), 100.0 + d);
        const auto sp = regression_spectrum(sys, {100.0});
        const double t_lin = std::norm(transport::solve_single_photon(c, 100.0 + d).t());
        const double slope_hl = ((sp.coherent_R + sp.incoherent_R) / A2 - t_lin) / A2;
        const auto p = boundstate::photon_probabilities_n1(c, 2.0 * (100.0 + d), 1.0);
        const double slope_ls = *p.T2 - p.plane_T;
        CHECK(slope_hl == doctest::Approx(slope_ls).epsilon(1e-3));
    }
}

TEST_CASE("time evolution relaxes to the steady state") {
    for (const auto& c : {infinite(1, 0.5), infinite(2, 0.5)}) {
        const auto sys = build_system(c, 0.8, 99.7);
        const auto tr = evolve(sys, {0.0, 1.0, 80.0});
        CHECK(tr.states[0].norm() == 0.0);
        CHECK((tr.states[2] - steady_state(sys)).norm() < 1e-8);
    }
    // early times: rho_ee grows as (W t / 2)^2 from the ground state
    const auto sys = build_system(infinite(1, 0.5), 0.01, 100.0);
    const auto tr = evolve(sys, {0.0, 0.01});
    const double w = sys.rabi * 0.01 / 2.0;
    CHECK(tr.states[1](2).real() == doctest::Approx(w * w).epsilon(1e-2));
}
