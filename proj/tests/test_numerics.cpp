#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "wqed/numerics.hpp"

using namespace wqed;
using namespace wqed::numerics;

namespace {

double nearest(const std::vector<cplx>& set, cplx z) {
    double best = 1e300;
    for (cplx s : set) best = std::min(best, std::abs(s - z));
    return best;
}

}  // namespace

TEST_CASE("roots of a single linear factor") {
    const cplx z{100.0, -0.5};
    const auto r = roots(Polynomial{-z, 1.0});
    REQUIRE(r.size() == 1);
    CHECK(std::abs(r[0] - z) < 1e-12);
}

TEST_CASE("roots round-trip a synthetic factorization") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> re(-3.0, 3.0), im(-2.0, -0.01);
    for (int n : {2, 5, 10, 16}) {
        std::vector<cplx> want;
        for (int i = 0; i < n; ++i) want.push_back({re(rng), im(rng)});
        const auto got = roots(from_roots(want));
        REQUIRE(got.size() == want.size());
        for (cplx w : want) CHECK(nearest(got, w) < 1e-8);
    }
}

TEST_CASE("roots of constants and oversized polynomials") {
    CHECK(roots(Polynomial{}).empty());
    CHECK(roots(Polynomial{2.0, 0.0}).empty());
    CHECK_THROWS_AS(roots(Polynomial(18, 1.0)), UnsupportedError);
}

TEST_CASE("Hessenberg QR agrees with the Schur eigen solver") {
    std::mt19937 rng(3);
    std::normal_distribution<double> g;
    for (int n : {1, 3, 8, 16}) {
        CMatrix a(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) a(i, j) = {g(rng), g(rng)};
        }
        const auto qr = hessenberg_qr_eigenvalues(a);
        const auto ed = eigen_decompose(a);
        for (int i = 0; i < n; ++i) CHECK(nearest(qr, ed.values(i)) < 1e-10);
    }
}

TEST_CASE("eigen decomposition reconstructs the matrix") {
    std::mt19937 rng(11);
    std::normal_distribution<double> g;
    for (int n : {2, 10, 16}) {
        CMatrix a(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) a(i, j) = {g(rng), g(rng)};
        }
        const auto ed = eigen_decompose(a);
        const CMatrix back = ed.vectors * ed.values.asDiagonal() * ed.inverse;
        CHECK((back - a).norm() / a.norm() < 1e-10);
    }
}

TEST_CASE("residue sum of a Lorentzian pair matches the closed form") {
    const cplx z{100.0, -0.5};
    const RationalFunction f({{z, 1.0}});
    const RationalFunction g = f.conjugated();
    const RationalFunction both[] = {f, g};
    const cplx lower = residue_sum(both, Contour::Lower);
    const cplx upper = residue_sum(both, Contour::Upper);
    const cplx exact = -2.0 * kPi * kI / (z - std::conj(z));
    CHECK(std::abs(lower - exact) < 1e-12);
    CHECK(std::abs(upper - exact) < 1e-12);
    const auto q = integrate([&](double k) { return f(k) * g(k); }, Domain::real_line(100.0, 0.5));
    CHECK(std::abs(q.value - exact) < 1e-10 * std::abs(exact));
}

TEST_CASE("residue sum with no enclosed poles is zero") {
    const RationalFunction f({{cplx{1.0, -1.0}, 1.0}, {cplx{2.0, -0.3}, 2.0}});
    const RationalFunction fs[] = {f, f};
    CHECK(residue_sum(fs, Contour::Upper) == cplx{0.0, 0.0});
}

TEST_CASE("residue sum refuses degenerate and real-axis poles") {
    const RationalFunction a({{cplx{1.0, -1.0}, 1.0}});
    const RationalFunction b({{cplx{1.0 + 1e-9, -1.0}, 1.0}});
    const RationalFunction ab[] = {a, b};
    CHECK_THROWS_AS(residue_sum(ab, Contour::Lower), DegeneratePoles);
    const RationalFunction r({{cplx{1.0, 0.0}, 1.0}});
    const RationalFunction ar[] = {a, r};
    CHECK_THROWS_AS(residue_sum(ar, Contour::Lower), DegeneratePoles);
    // displaced above, the real pole is not enclosed from below
    const cplx v = residue_sum(ar, Contour::Lower, 0.0, RealAxis::Above);
    CHECK(std::abs(v - (-2.0 * kPi * kI) / (cplx{1.0, -1.0} - 1.0)) < 1e-12);
}

TEST_CASE("residue sum with an oscillating factor matches quadrature") {
    const RationalFunction f({{cplx{0.0, -0.5}, 1.0}, {cplx{1.0, -0.2}, 0.5}});
    const RationalFunction g({{cplx{0.3, 0.7}, 1.0}});
    const RationalFunction fg[] = {f, g};
    const double tau = 1.7;
    const cplx res = residue_sum(fg, Contour::Upper, tau);
    const auto q = integrate([&](double k) { return f(k) * g(k) * std::exp(kI * k * tau); },
                             Domain::finite(-4000.0, 4000.0, {0.0, 1.0}));
    CHECK(std::abs(res - q.value) < 1e-3);
}

TEST_CASE("reflected and conjugated rational functions") {
    const RationalFunction f({{cplx{1.0, -0.5}, cplx{2.0, 1.0}}}, {cplx{0.5, 0.0}, cplx{0.0, 1.0}});
    const cplx s{3.0, 0.2}, z{0.4, -0.9};
    CHECK(std::abs(f.reflected(s)(z) - f(s - z)) < 1e-13);
    CHECK(std::abs(f.conjugated()(z) - std::conj(f(std::conj(z)))) < 1e-13);
    CHECK(f.decay_order() == -1);
    CHECK(RationalFunction({{z, 1.0}}).decay_order() == 1);
}

TEST_CASE("Cauchy transform closes in the lower half plane") {
    const RationalFunction f({{cplx{0.0, -1.0}, 1.0}, {cplx{0.0, 2.0}, 1.0}});
    const auto h = cauchy_transform_lower(f);
    const double s = 0.7;
    const auto q = quad_oracle(
        [&](double k, double eps) { return f(k) / (cplx(s, eps) - k); }, Domain::real_line(0.0, 1.0, {s}));
    CHECK(std::abs(h(s) - q.value) < 1e-3);
}

TEST_CASE("unit-norm Lorentzian over +-50 Gamma") {
    const double w0 = 100.0, G = 1.0;
    auto f = [&](double k) { return cplx{G / (2.0 * kPi) / ((k - w0) * (k - w0) + G * G / 4.0), 0.0}; };
    const auto q = integrate(f, Domain::finite(w0 - 50.0, w0 + 50.0, {w0}));
    const double exact = 2.0 / kPi * std::atan(100.0);
    CHECK(q.converged);
    CHECK(std::abs(q.value.real() - exact) < 1e-8);
    CHECK(std::abs(integrate(f, Domain::real_line(w0, G)).value.real() - 1.0) < 1e-8);
}

TEST_CASE("odd integrand about omega0 integrates to zero") {
    auto f = [](double k) { return cplx{(k - 100.0) / (1.0 + std::pow(k - 100.0, 4)), 0.0}; };
    const auto q = integrate(f, Domain::real_line(100.0, 1.0));
    CHECK(std::abs(q.value) < 1e-10);
}

TEST_CASE("quadrature reports an exhausted budget") {
    QuadratureSpec spec;
    spec.max_subdivisions = 3;
    spec.abs_tol = 1e-16;
    spec.rel_tol = 1e-16;
    const auto q = integrate([](double k) { return cplx{std::sin(50.0 * k) / (1e-3 + k * k), 0.0}; },
                             Domain::finite(-10.0, 10.0), spec);
    CHECK_FALSE(q.converged);
}

TEST_CASE("quadrature spec validation") {
    QuadratureSpec bad;
    bad.epsilon_ladder = {1e-3, 1e-2};
    CHECK_THROWS(bad.validate());
    QuadratureSpec neg;
    neg.abs_tol = -1.0;
    CHECK_THROWS(neg.validate());
    CHECK_NOTHROW(QuadratureSpec{}.validate());
}

TEST_CASE("Richardson extrapolation to zero removes polynomial bias") {
    const double x[] = {1e-2, 5e-3, 2.5e-3};
    cplx y[3];
    for (int i = 0; i < 3; ++i) y[i] = cplx{2.0 + 3.0 * x[i] - 7.0 * x[i] * x[i], 1.0};
    CHECK(std::abs(extrapolate_to_zero(x, y) - cplx{2.0, 1.0}) < 1e-12);
}
