#include <algorithm>
#include <cmath>

#include "wqed/numerics.hpp"

namespace wqed::numerics {

cplx evaluate(const Polynomial& p, cplx z) {
    cplx acc{0.0, 0.0};
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * z + *it;
    return acc;
}

Polynomial from_roots(std::span<const cplx> roots) {
    Polynomial p{cplx{1.0, 0.0}};
    for (cplx r : roots) {
        Polynomial next(p.size() + 1, cplx{0.0, 0.0});
        for (std::size_t i = 0; i < p.size(); ++i) {
            next[i + 1] += p[i];
            next[i] -= r * p[i];
        }
        p = std::move(next);
    }
    return p;
}

namespace {

// |p(z)| relative to the size of the terms summed at z, so the residual is
// scale free for roots far from the origin.
double scaled_residual(const Polynomial& p, cplx z) {
    double mag = 0.0;
    double zk = 1.0;
    for (cplx c : p) {
        mag += std::abs(c) * zk;
        zk *= std::abs(z);
    }
    return std::abs(evaluate(p, z)) / std::max(mag, 1e-300);
}

}  // namespace

std::vector<cplx> roots(const Polynomial& input) {
    Polynomial p = input;
    while (!p.empty() && p.back() == cplx{0.0, 0.0}) p.pop_back();
    if (p.size() <= 1) return {};
    const std::size_t degree = p.size() - 1;
    if (degree > 16) throw UnsupportedError("roots: degree above 16");

    const cplx lead = p.back();
    for (auto& c : p) c /= lead;

    CMatrix companion = CMatrix::Zero(static_cast<Eigen::Index>(degree),
                                      static_cast<Eigen::Index>(degree));
    for (std::size_t i = 1; i < degree; ++i) {
        companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    }
    for (std::size_t i = 0; i < degree; ++i) {
        companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(degree - 1)) = -p[i];
    }
    auto z = hessenberg_qr_eigenvalues(companion);

    Polynomial dp(degree);
    for (std::size_t i = 1; i <= degree; ++i) dp[i - 1] = p[i] * static_cast<double>(i);

    double worst = 0.0;
    for (auto& root : z) {
        const cplx d = evaluate(dp, root);
        if (std::abs(d) > 0.0) {
            const cplx polished = root - evaluate(p, root) / d;
            if (scaled_residual(p, polished) <= scaled_residual(p, root)) root = polished;
        }
        worst = std::max(worst, scaled_residual(p, root));
    }
    if (worst > 1e-10) throw ConvergenceError("roots: residual above 1e-10", worst);
    std::sort(z.begin(), z.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return z;
}

}  // namespace wqed::numerics
