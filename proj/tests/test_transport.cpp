#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "wqed/transport.hpp"

using namespace wqed;
using namespace wqed::transport;

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

double nearest(const std::vector<cplx>& set, cplx z) {
    double best = 1e300;
    for (cplx s : set) best = std::min(best, std::abs(s - z));
    return best;
}

}  // namespace

TEST_CASE("single qubit amplitudes") {
    const auto c = infinite(1, 0.5);
    for (double k : {98.0, 99.7, 100.0, 101.3}) {
        const auto s = solve_single_photon(c, k);
        const cplx d{k - 100.0, 0.5};
        CHECK(std::abs(s.t() - (k - 100.0) / d) < 1e-13);
        CHECK(std::abs(s.r() - cplx{0.0, -0.5} / d) < 1e-13);
    }
    const auto res = solve_single_photon(c, 100.0);
    CHECK(std::abs(res.t()) < 1e-14);
    CHECK(std::abs(res.r() + 1.0) < 1e-14);
}

TEST_CASE("matching solve equals the effective-Hamiltonian amplitudes") {
    for (int n : {2, 3, 7}) {
        for (double L : {0.25, 0.5, 0.8}) {
            const auto c = infinite(n, L);
            const auto cp = couplings(c);
            for (cplx k : {cplx{99.1, 0.0}, cplx{100.4, 0.0}, cplx{100.2, 0.3}}) {
                const auto s = solve_single_photon(c, k);
                CHECK(std::abs(s.t() - channel_amplitude(c, cp, Channel::Transmitted, k)) < 1e-11);
                CHECK(std::abs(s.r() - channel_amplitude(c, cp, Channel::Reflected, k)) < 1e-11);
            }
        }
    }
    const auto c = semi(3, 0.5, 0.25);
    const auto cp = couplings(c);
    const auto s = solve_single_photon(c, 99.3);
    CHECK(std::abs(s.r() - channel_amplitude(c, cp, Channel::Reflected, 99.3)) < 1e-11);
}

TEST_CASE("reciprocity: transmission is the same from either side") {
    const auto c = infinite(4, 0.3);
    for (double k : {99.0, 99.8, 100.6}) {
        const auto a = solve_single_photon(c, k, Direction::FromLeft);
        const auto b = solve_single_photon(c, k, Direction::FromRight);
        CHECK(std::abs(a.t() - b.t()) < 1e-12);
        CHECK(std::abs(std::norm(a.r()) - std::norm(b.r())) < 1e-12);
    }
}

TEST_CASE("semi-infinite reflection is unimodular") {
    for (double a : {0.25, 0.5, 0.9}) {
        const auto c = semi(3, 0.5, a);
        for (double k = 95.0; k <= 105.0; k += 0.37) {
            CHECK(std::abs(std::norm(solve_single_photon(c, k).r()) - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("non-Markovian phases keep the flux") {
    auto c = infinite(3, 0.5);
    c.markovian = false;
    for (double k : {99.0, 100.5}) {
        const auto s = solve_single_photon(c, k);
        CHECK(std::abs(std::norm(s.t()) + std::norm(s.r()) - 1.0) < 1e-12);
    }
}

TEST_CASE("poles: single qubit and the two-qubit circle") {
    const auto p1 = poles(infinite(1, 0.5));
    REQUIRE(p1.poles.size() == 1);
    CHECK(std::abs(p1.poles[0] - cplx{100.0, -0.5}) < 1e-13);
    // two qubits: omega0 - i Gamma/2 (1 -+ e^{i k0 L})
    for (double L : {0.25, 0.5, 0.7}) {
        const auto p2 = poles(infinite(2, L));
        const cplx e = std::exp(kI * L * kPi);
        for (cplx want : {100.0 - 0.5 * kI * (1.0 + e), 100.0 - 0.5 * kI * (1.0 - e)}) {
            CHECK(nearest(p2.poles, want) < 1e-12);
        }
    }
}

TEST_CASE("reconstructed denominators agree with the eigenvalues") {
    for (int n : {2, 5, 10, 16}) {
        for (double L : {0.25, 0.5}) {
            const auto c = infinite(n, L);
            const auto ps = poles(c);
            const auto rec = reconstructed_poles(c);
            REQUIRE(rec.size() == ps.poles.size());
            for (cplx z : rec) CHECK(nearest(ps.poles, z) < 1e-8);
        }
    }
    const auto c = semi(4, 0.5, 0.25);
    const auto ps = poles(c);
    for (cplx z : reconstructed_poles(c)) CHECK(nearest(ps.poles, z) < 1e-8);
}

TEST_CASE("poles are the real-axis singularities of the amplitude") {
    const auto c = infinite(3, 0.5);
    const auto ps = poles(c);
    for (cplx z : ps.poles) {
        const auto near = solve_single_photon(c, z + cplx{1e-6, 0.0});
        CHECK(std::abs(near.t()) > 1e3);
    }
}

TEST_CASE("transmission zeros sit at omega0") {
    for (int n : {1, 3, 8}) {
        const auto zs = transmission_zeros(infinite(n, 0.25));
        REQUIRE(zs.size() == static_cast<std::size_t>(n));
        for (cplx z : zs) CHECK(std::abs(z - 100.0) < 1e-9);
    }
    CHECK_THROWS(transmission_zeros(semi(1, 0.5, 0.5)));
}

TEST_CASE("time delay: methods agree away from zeros") {
    const auto c = infinite(4, 0.5);
    for (double k : {98.7, 99.2, 100.9}) {
        const double fd = time_delay(c, k, DelayMethod::FiniteDifference);
        const double pz = time_delay(c, k, DelayMethod::PoleZero);
        CHECK(fd == doctest::Approx(pz).epsilon(1e-6));
    }
    CHECK_THROWS_AS(time_delay(c, 100.0, DelayMethod::FiniteDifference), IllConditioned);
    CHECK(time_delay(c, 100.0) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK_THROWS_AS(time_delay(semi(1, 0.5, 0.5), 100.0), ConfigError);
}

TEST_CASE("single-qubit delay is the Lorentzian phase slope") {
    const auto c = infinite(1, 0.5);
    for (double k : {99.0, 100.3, 102.0}) {
        // arg t = arg(k - w0) - arg(k - w0 + i/2), slope 1/2 / (d^2 + 1/4)
        const double d = k - 100.0;
        CHECK(time_delay(c, k) == doctest::Approx(0.5 / (d * d + 0.25)).epsilon(1e-7));
    }
    CHECK(time_delay(c, 100.5) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("effective Hamiltonian is complex symmetric") {
    for (const auto& c : {infinite(5, 0.3), semi(5, 0.3, 0.4)}) {
        const CMatrix h = effective_hamiltonian(c);
        CHECK((h - h.transpose()).norm() < 1e-14);
        CHECK(h.trace().real() == doctest::Approx(5.0 * 100.0));
    }
}

TEST_CASE("subradiance and delay scaling") {
    const int ns[] = {4, 5, 6, 7, 8, 9, 10};
    const auto fit = subradiance_scaling(0.5 * kPi, ns);
    CHECK(fit.exponent == doctest::Approx(-3.0).epsilon(0.1));
    const auto d = subradiant_delay_scaling(0.5 * kPi, ns);
    CHECK(d.exponent == doctest::Approx(3.0).epsilon(0.1));
    const int bad[] = {1, 4};
    CHECK_THROWS_AS(subradiance_scaling(0.5 * kPi, bad), ConfigError);
}

TEST_CASE("transfer-matrix oracle at an arbitrary origin") {
    // Each qubit is a point scatterer with t1 = d / (d + i/2), r1 = t1 - 1. In
    // the (e^{ikx}, e^{-ikx}) basis it maps left coefficients to right ones by
    // M0 = [[t1 - r1^2/t1, r1/t1], [-r1/t1, 1/t1]], shifted to x by P(x)^-1 M0 P(x)
    // with P = diag(e^{i k0 x}, e^{-i k0 x}). The array sits at x0 + j L.
    for (int n : {2, 5, 9}) {
        for (double L : {0.25, 0.5, 0.7}) {
            const auto c = infinite(n, L);
            for (double x0 : {0.0, 0.0137, -3.21}) {
                for (double k : {99.3, 99.95, 100.8}) {
                    const cplx t1 = (k - 100.0) / cplx{k - 100.0, 0.5};
                    const cplx r1 = t1 - 1.0;
                    Eigen::Matrix2cd m0, total = Eigen::Matrix2cd::Identity();
                    m0 << t1 - r1 * r1 / t1, r1 / t1, -r1 / t1, 1.0 / t1;
                    for (int j = 0; j < n; ++j) {
                        const double x = x0 + j * c.spacing();
                        const cplx p = std::exp(kI * c.k0() * x);
                        Eigen::Matrix2cd P = Eigen::Matrix2cd::Zero(), Pinv = Eigen::Matrix2cd::Zero();
                        P(0, 0) = p;
                        P(1, 1) = 1.0 / p;
                        Pinv(0, 0) = 1.0 / p;
                        Pinv(1, 1) = p;
                        total = Pinv * m0 * P * total;
                    }
                    const cplx t = 1.0 / total(1, 1);
                    const cplx r = -total(1, 0) / total(1, 1);
                    const auto s = solve_single_photon(c, k);
                    CHECK(std::abs(t - s.t()) < 1e-12);
                    CHECK(std::abs(std::norm(r) - std::norm(s.r())) < 1e-12);
                }
            }
        }
    }
}
