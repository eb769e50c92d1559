#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "wqed/boundstate.hpp"

using namespace wqed;
using namespace wqed::boundstate;

namespace {

SystemConfig infinite(int n, double k0L_over_pi) {
    SystemConfig c;
    c.n_qubits = n;
    c.k0L = k0L_over_pi * kPi;
    return c;
}

SystemConfig semi(int n, double k0L_over_pi, double k0a_over_pi) {
    SystemConfig c = infinite(n, k0L_over_pi);
    c.geometry = Geometry::SemiInfinite;
    c.k0a = k0a_over_pi * kPi;
    return c;
}

// single qubit, both channels: G^4 / (4 pi^2 L(E - w0 - w) L(E/2 - w0) L(w - w0)), L(x) = x^2 + G^2/4
double single_qubit_spectrum(double E, double w) {
    auto lor = [](double x) { return x * x + 0.25; };
    return 1.0 / (4.0 * kPi * kPi) / (lor(E - 100.0 - w) * lor(E / 2.0 - 100.0) * lor(w - 100.0));
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

}  // namespace

TEST_CASE("single-qubit spectrum matches the closed form") {
    const auto c = infinite(1, 0.5);
    for (double half : {100.0, 99.5, 101.2}) {
        const auto grid = linspace(94.0, 106.0, 241);
        const auto sp = incoherent_spectrum(c, 2.0 * half, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double ref = single_qubit_spectrum(2.0 * half, grid[i]);
            CHECK(std::abs(sp.S_R[i] - ref) < 1e-8 * ref);
            CHECK(std::abs(sp.S_L[i] - ref) < 1e-8 * ref);
        }
    }
}

TEST_CASE("T-matrix assembly agrees with the direct bound-state form") {
    for (const auto& c : {infinite(3, 0.25), infinite(5, 0.5), semi(2, 0.5, 0.25)}) {
        const double E = 2.0 * 99.6;
        const auto grid = linspace(96.0, 103.0, 29);
        const auto sp = incoherent_spectrum(c, E, grid);
        const Resolvent rv(c);
        const auto st = two_photon_state(rv, E);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double dl = spectrum_direct(rv, st, Channel::Reflected, grid[i]);
            CHECK(std::abs(sp.S_L[i] - dl) < 1e-10 * std::max(1.0, dl));
            if (c.geometry == Geometry::Infinite) {
                const double dr = spectrum_direct(rv, st, Channel::Transmitted, grid[i]);
                CHECK(std::abs(sp.S_R[i] - dr) < 1e-10 * std::max(1.0, dr));
            }
        }
    }
}

TEST_CASE("residue-evaluated integrals agree with quadrature") {
    double worst = 0.0;
    int seen = 0;
    auto sink = [&](const CrossCheck& x) {
        worst = std::max(worst, x.relative());
        ++seen;
    };
    const auto c = infinite(3, 0.25);
    incoherent_spectrum(c, 2.0 * 99.6, linspace(97.0, 102.0, 11), sink);
    g2_trace(c, 2.0 * 99.6, Channel::Reflected, default_t_grid(10.0, 20), sink);
    CHECK(seen > 0);
    CHECK(worst < 1e-6);
}

TEST_CASE("Green matrix is symmetric") {
    for (const auto& c : {infinite(4, 0.3), semi(3, 0.5, 0.25)}) {
        const CMatrix G = green_matrix(c, 2.0 * 99.65);
        CHECK((G - G.transpose()).norm() < 1e-10 * G.norm());
    }
}

TEST_CASE("spectrum is non-negative and its integral is the flux") {
    const auto c = infinite(3, 0.5);
    const double E = 2.0 * 99.7;
    const auto grid = linspace(99.7 - 60.0, 99.7 + 60.0, 24001);
    const auto sp = incoherent_spectrum(c, E, grid);
    double trap = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(sp.S_R[i] >= 0.0);
        CHECK(sp.S_L[i] >= 0.0);
        if (i) trap += 0.5 * (grid[i] - grid[i - 1]) * (sp.S_R[i] + sp.S_R[i - 1] + sp.S_L[i] + sp.S_L[i - 1]);
    }
    // tails beyond +-60 Gamma fall off as omega^-4
    CHECK(trap == doctest::Approx(sp.flux).epsilon(1e-4));
    CHECK(sp.flux_error < 1e-8 * sp.flux);
}

TEST_CASE("single-qubit g2 follows the conditional-amplitude formula") {
    // After a click the emitter coherence restarts from the conditional value
    // and relaxes at rate G/2 - i delta back to steady state.
    const auto c = infinite(1, 0.5);
    const auto grid = default_t_grid(12.0, 121);
    for (double d : {0.0, -0.7, 1.3}) {
        const double E = 2.0 * (100.0 + d);
        const cplx lam{0.5, -d};
        const auto R = g2_trace(c, E, Channel::Reflected, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            CHECK(std::abs(R.values[i] - std::norm(1.0 - std::exp(-lam * grid[i]))) < 1e-10);
        }
        if (d == 0.0) continue;
        const auto s = transport::solve_single_photon(c, E / 2.0);
        const cplx q = s.r() / s.t();
        const auto T = g2_trace(c, E, Channel::Transmitted, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            CHECK(std::abs(T.values[i] - std::norm(1.0 - q * q * std::exp(-lam * grid[i]))) < 1e-10);
        }
    }
    CHECK_THROWS_AS(g2_trace(c, 200.0, Channel::Transmitted, grid), IllConditioned);
}

TEST_CASE("g2 relaxes to one") {
    // long times: the most subradiant N = 5 mode decays at a few 1e-2 Gamma
    for (const auto& c : {infinite(5, 0.5), infinite(3, 0.25), semi(2, 0.5, 0.25)}) {
        const auto tr = g2_trace(c, 2.0 * 99.8, Channel::Reflected, {3000.0, 6000.0});
        CHECK(tr.values[0] == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(tr.values[1] == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("decoupled mirror geometry has no bound state") {
    const auto c = semi(1, 0.5, 1.0);
    const auto st = two_photon_state(c, 200.0);
    CHECK(st.decoupled);
    const auto sp = incoherent_spectrum(c, 200.0, {99.0, 100.0, 101.0});
    CHECK(sp.flux == 0.0);
    for (double s : sp.S_L) CHECK(s == 0.0);
    const auto tr = g2_trace(semi(1, 0.5, 20.0), 200.0, Channel::Reflected, {0.0, 1.0});
    CHECK(tr.values[0] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("single-qubit photon probabilities") {
    const auto c = infinite(1, 0.5);
    for (double d : {0.0, -0.7, 1.3}) {
        const double E = 2.0 * (100.0 + d);
        const auto lin = photon_probabilities_n1(c, E, 0.0);
        const auto s = transport::solve_single_photon(c, E / 2.0);
        CHECK(*lin.T2 == doctest::Approx(std::norm(s.t())).epsilon(1e-12));
        CHECK(lin.R2 == doctest::Approx(std::norm(s.r())).epsilon(1e-12));
        const auto p = photon_probabilities_n1(c, E, 0.01);
        CHECK(std::abs(*p.T2 + p.R2 - 1.0) < 1e-10);
        CHECK(*p.T2 >= lin.T2);
    }
    // resonance: 2 pi^2 A^2 (interference + bound) / A^2 = 4
    const auto r = photon_probabilities_n1(c, 200.0, 0.01);
    CHECK(*r.T2 == doctest::Approx(0.04).epsilon(1e-9));
    CHECK_THROWS_AS(photon_probabilities_n1(infinite(2, 0.5), 200.0, 0.01), UnsupportedError);
    CHECK_FALSE(photon_probabilities_n1(semi(1, 0.5, 0.25), 200.0, 0.01).T2.has_value());
}

TEST_CASE("mirror pair driven at the null: opposite amplitudes, equal overlaps") {
    const auto c = semi(2, 0.5, 0.25);
    const Resolvent rv(c);
    const CVector e = rv.qubit_amplitudes(99.5, rv.incident_channels().front());
    CHECK(std::abs(e(0) + e(1)) < 1e-12 * std::abs(e(0)));
    // overlaps carry e_j^2, so the sign flip drops out
    const CVector ov = overlap_vector(rv, 199.0);
    CHECK(std::abs(ov(0) - ov(1)) < 1e-12 * std::abs(ov(0)));
    CHECK(std::abs(ov(0) - kOverlapNorm * e(0) * e(0)) < 1e-12 * std::abs(ov(0)));
}
