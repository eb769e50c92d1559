#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "wqed/numerics.hpp"

namespace wqed::numerics {

namespace {

// Householder reduction to upper Hessenberg form, in place.
void reduce_to_hessenberg(CMatrix& h) {
    const Eigen::Index n = h.rows();
    for (Eigen::Index k = 0; k + 2 < n; ++k) {
        CVector x = h.block(k + 1, k, n - k - 1, 1);
        const double alpha_norm = x.norm();
        if (alpha_norm == 0.0) continue;
        const cplx phase = (std::abs(x(0)) > 0.0) ? x(0) / std::abs(x(0)) : cplx{1.0, 0.0};
        CVector v = x;
        v(0) += phase * alpha_norm;
        const double vnorm = v.norm();
        if (vnorm == 0.0) continue;
        v /= vnorm;
        // H <- P H P with P = I - 2 v v^*
        auto rows = h.block(k + 1, 0, n - k - 1, n);
        rows -= 2.0 * v * (v.adjoint() * rows);
        auto cols = h.block(0, k + 1, n, n - k - 1);
        cols -= 2.0 * (cols * v) * v.adjoint();
        for (Eigen::Index i = k + 2; i < n; ++i) h(i, k) = 0.0;
    }
}

// Givens rotation zeroing b in (a, b)^T.
struct Givens {
    double c;
    cplx s;
};

Givens make_givens(cplx a, cplx b) {
    const double na = std::abs(a);
    const double nb = std::abs(b);
    if (nb == 0.0) return {1.0, 0.0};
    if (na == 0.0) return {0.0, std::conj(b) / nb};
    const double r = std::hypot(na, nb);
    const cplx phase = a / na;
    return {na / r, phase * std::conj(b) / r};
}

}  // namespace

std::vector<cplx> hessenberg_qr_eigenvalues(const CMatrix& a, int max_sweeps) {
    if (a.rows() != a.cols()) throw Error("hessenberg_qr_eigenvalues: matrix not square");
    CMatrix h = a;
    reduce_to_hessenberg(h);
    const Eigen::Index n = h.rows();
    std::vector<cplx> eig(static_cast<std::size_t>(n));
    const double scale = std::max(h.norm(), 1e-300);

    Eigen::Index hi = n - 1;
    int iterations = 0;
    const int budget = max_sweeps * static_cast<int>(std::max<Eigen::Index>(n, 1));
    while (hi >= 0) {
        if (hi == 0) {
            eig[0] = h(0, 0);
            break;
        }
        // find the active unreduced block [lo, hi]
        Eigen::Index lo = hi;
        while (lo > 0) {
            const double off = std::abs(h(lo, lo - 1));
            const double diag = std::abs(h(lo, lo)) + std::abs(h(lo - 1, lo - 1));
            if (off <= 1e-15 * (diag > 0.0 ? diag : scale)) {
                h(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }
        if (lo == hi) {
            eig[static_cast<std::size_t>(hi)] = h(hi, hi);
            --hi;
            iterations = 0;
            continue;
        }
        if (++iterations > budget) {
            throw ConvergenceError("hessenberg_qr_eigenvalues: QR iteration did not converge",
                                   std::abs(h(hi, hi - 1)));
        }
        // Wilkinson shift from the trailing 2x2 block; exceptional shift now and then.
        const cplx a11 = h(hi - 1, hi - 1), a12 = h(hi - 1, hi), a21 = h(hi, hi - 1),
                   a22 = h(hi, hi);
        const cplx tr = a11 + a22;
        const cplx det = a11 * a22 - a12 * a21;
        const cplx disc = std::sqrt(tr * tr / 4.0 - det);
        const cplx l1 = tr / 2.0 + disc, l2 = tr / 2.0 - disc;
        cplx shift = (std::abs(l1 - a22) < std::abs(l2 - a22)) ? l1 : l2;
        if (iterations % 11 == 10) shift = a22 + std::abs(h(hi, hi - 1)) * cplx{0.75, 0.5};

        // QR step on the active block: H - mu I = QR, H <- RQ + mu I
        std::vector<Givens> rot;
        rot.reserve(static_cast<std::size_t>(hi - lo));
        for (Eigen::Index i = lo; i <= hi; ++i) h(i, i) -= shift;
        for (Eigen::Index k = lo; k < hi; ++k) {
            const Givens g = make_givens(h(k, k), h(k + 1, k));
            rot.push_back(g);
            for (Eigen::Index j = k; j < n; ++j) {
                const cplx x = h(k, j), y = h(k + 1, j);
                h(k, j) = g.c * x + g.s * y;
                h(k + 1, j) = -std::conj(g.s) * x + g.c * y;
            }
        }
        for (Eigen::Index k = lo; k < hi; ++k) {
            const Givens& g = rot[static_cast<std::size_t>(k - lo)];
            for (Eigen::Index i = 0; i <= std::min(k + 2, hi); ++i) {
                const cplx x = h(i, k), y = h(i, k + 1);
                h(i, k) = g.c * x + std::conj(g.s) * y;
                h(i, k + 1) = -g.s * x + g.c * y;
            }
        }
        for (Eigen::Index i = lo; i <= hi; ++i) h(i, i) += shift;
    }
    return eig;
}

EigenDecomposition eigen_decompose(const CMatrix& a, double tolerance) {
    Eigen::ComplexEigenSolver<CMatrix> solver(a, true);
    if (solver.info() != Eigen::Success) {
        throw ConvergenceError("eigen_decompose: complex Schur iteration failed", -1.0);
    }
    EigenDecomposition out;
    out.values = solver.eigenvalues();
    out.vectors = solver.eigenvectors();
    const double norm = std::max(a.norm(), 1e-300);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        const double r = (a * out.vectors.col(i) - out.values(i) * out.vectors.col(i)).norm();
        worst = std::max(worst, r / norm);
    }
    out.residual = worst;
    if (worst > tolerance) {
        throw ConvergenceError("eigen_decompose: eigenpair residual above tolerance", worst);
    }
    Eigen::PartialPivLU<CMatrix> lu(out.vectors);
    out.inverse = lu.inverse();
    return out;
}

}  // namespace wqed::numerics
