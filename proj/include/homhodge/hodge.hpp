#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <array>
#include <cmath>
#include <string>

#include "homhodge/errors.hpp"
#include "homhodge/twisted_complex.hpp"

namespace homhodge {

namespace detail {

// G-orthonormalize the columns of V in place (modified Gram-Schmidt).
inline void gram_orthonormalize(const DressedComplex& c, int p, Eigen::MatrixXd& v) {
    for (int k = 0; k < v.cols(); ++k) {
        for (int j = 0; j < k; ++j)
            v.col(k) -= c.inner(p, v.col(j), v.col(k)) * v.col(j);
        double nrm = c.norm(p, v.col(k));
        if (!(nrm > 0.0)) throw NumericalError("gram_orthonormalize: rank-deficient basis");
        v.col(k) /= nrm;
    }
}

// Kernel of the G-self-adjoint operator Delta~ via the generalized symmetric
// eigenproblem (G Delta~) x = mu G x. Dense path for moderate sizes.
inline Eigen::MatrixXd kernel_dense(const DressedComplex& c, int p, double gap_tol) {
    const Eigen::MatrixXd lap = Eigen::MatrixXd(twisted_laplacian(c, p));
    const Eigen::MatrixXd g = c.gram(p).asDiagonal();
    Eigen::MatrixXd a = g * lap;
    a = 0.5 * (a + a.transpose());  // symmetrize away roundoff
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, g);
    if (es.info() != Eigen::Success)
        throw NumericalError("harmonic_space: dense eigensolver failed");
    const Eigen::VectorXd& mu = es.eigenvalues();
    const double scale = std::max(mu.cwiseAbs().maxCoeff(), 1e-300);
    const double cutoff = gap_tol * scale;
    int dim = 0;
    while (dim < mu.size() && std::abs(mu[dim]) < cutoff) ++dim;
    Eigen::MatrixXd basis = es.eigenvectors().leftCols(dim);
    if (dim > 0) {
        // Two shifted inverse-iteration passes sharpen the kernel subspace well
        // past the eigensolver's own accuracy.
        Eigen::MatrixXd shifted = a + 1e-10 * scale * g;
        Eigen::LDLT<Eigen::MatrixXd> solver(shifted);
        for (int pass = 0; pass < 2; ++pass) {
            basis = solver.solve(g * basis);
            gram_orthonormalize(c, p, basis);
        }
    }
    return basis;
}

// Shifted inverse iteration fallback for large meshes: iterate
// x <- (G Delta~ + sigma G)^{-1} G x on a small block and keep the
// eigenvector estimates whose Rayleigh quotients sit below the gap.
inline Eigen::MatrixXd kernel_inverse_iteration(const DressedComplex& c, int p, double gap_tol) {
    const SparseMat lap = twisted_laplacian(c, p);
    const int n = static_cast<int>(lap.rows());
    const Eigen::VectorXd& g = c.gram(p);
    SparseMat a = SparseMat(g.asDiagonal()) * lap;
    a = SparseMat(0.5 * (a + SparseMat(a.transpose())));
    // Operator scale estimate for the shift and the kernel cutoff.
    double scale = 0.0;
    for (int k = 0; k < a.outerSize(); ++k)
        for (SparseMat::InnerIterator it(a, k); it; ++it)
            scale = std::max(scale, std::abs(it.value()) / std::min(g[it.row()], g[it.col()]));
    const double sigma = 1e-10 * std::max(scale, 1.0);
    SparseMat shifted = a + SparseMat(Eigen::VectorXd(sigma * g).asDiagonal());
    Eigen::SimplicialLDLT<SparseMat> solver(shifted);
    if (solver.info() != Eigen::Success)
        throw NumericalError("harmonic_space: factorization failed in inverse iteration");

    const int block = 6;  // kernel dims here are at most 2
    Eigen::MatrixXd x = Eigen::MatrixXd::Random(n, block);
    for (int iter = 0; iter < 60; ++iter) {
        for (int k = 0; k < block; ++k)
            x.col(k) = solver.solve(g.cwiseProduct(x.col(k)));
        gram_orthonormalize(c, p, x);
    }
    Eigen::VectorXd rayleigh(block);
    for (int k = 0; k < block; ++k) rayleigh[k] = x.col(k).dot(a * x.col(k));
    const double cutoff = gap_tol * std::max(scale, 1e-300);
    int dim = 0;
    while (dim < block && std::abs(rayleigh[dim]) < cutoff) ++dim;
    return x.leftCols(dim);
}

}  // namespace detail

// G-orthonormal basis of ker Delta~ on degree-p cochains. Kernel detection
// uses a relative eigenvalue threshold (default 1e-6 of the largest).
inline Eigen::MatrixXd harmonic_space(const DressedComplex& c, int p, double gap_tol = 1e-6) {
    if (p < 0 || p > 2) throw ConfigError("harmonic_space: degree must be 0, 1 or 2");
    const int n = c.mesh().cell_count(p);
    if (n <= 512) return detail::kernel_dense(c, p, gap_tol);
    return detail::kernel_inverse_iteration(c, p, gap_tol);
}

// Largest principal angle between the column spans of a and b in the G_p
// metric, via the sine form (accurate near zero, where the cosine form
// saturates at sqrt(machine epsilon)).
inline double max_principal_angle(const DressedComplex& c, int p, Eigen::MatrixXd a,
                                  Eigen::MatrixXd b) {
    detail::gram_orthonormalize(c, p, a);
    detail::gram_orthonormalize(c, p, b);
    Eigen::MatrixXd cross(a.cols(), b.cols());
    for (int i = 0; i < a.cols(); ++i)
        for (int j = 0; j < b.cols(); ++j) cross(i, j) = c.inner(p, a.col(i), b.col(j));
    Eigen::MatrixXd residual = b - a * cross;  // component of b outside span(a)
    Eigen::MatrixXd scaled = c.gram(p).cwiseSqrt().asDiagonal() * residual;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(scaled);
    double s = svd.singularValues().size() ? svd.singularValues().maxCoeff() : 0.0;
    return std::asin(std::clamp(s, 0.0, 1.0));
}

struct HodgeSplit {
    Eigen::VectorXd exact;     // in im d~
    Eigen::VectorXd coexact;   // in im delta~
    Eigen::VectorXd harmonic;  // in ker Delta~
    double reassembly_rel = 0.0;
    double max_cross_gram = 0.0;  // largest normalized pairwise G-inner product
    int cg_iterations = 0;
};

namespace detail {

inline Eigen::VectorXd cg_solve(const SparseMat& a, const Eigen::VectorXd& rhs, double tol,
                                int max_iter, int& used) {
    Eigen::ConjugateGradient<SparseMat, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(tol);
    cg.setMaxIterations(max_iter);
    cg.compute(a);
    Eigen::VectorXd x = cg.solve(rhs);
    used = static_cast<int>(cg.iterations());
    if (cg.info() != Eigen::Success && cg.error() > 100 * tol)
        throw NumericalError("hodge_decompose: conjugate gradient did not converge (residual " +
                             std::to_string(cg.error()) + ")");
    return x;
}

}  // namespace detail

// G-orthogonal splitting eta = d~ alpha + delta~ beta + harmonic part. The
// potentials solve the G-normal equations by conjugate gradients after the
// harmonic component is projected out, which makes both systems consistent.
inline HodgeSplit hodge_decompose(const DressedComplex& c, const Cochain& eta,
                                  double cg_tol = 1e-12) {
    const int p = eta.degree;
    if (p < 0 || p > 2) throw ConfigError("hodge_decompose: degree must be 0, 1 or 2");
    const int n = c.mesh().cell_count(p);
    if (eta.values.size() != n) throw ConfigError("hodge_decompose: cochain size mismatch");

    HodgeSplit split;
    Eigen::MatrixXd h = harmonic_space(c, p);
    split.harmonic = Eigen::VectorXd::Zero(n);
    for (int k = 0; k < h.cols(); ++k)
        split.harmonic += c.inner(p, h.col(k), eta.values) * h.col(k);
    Eigen::VectorXd bulk = eta.values - split.harmonic;

    const Eigen::VectorXd g = c.gram(p);
    split.exact = Eigen::VectorXd::Zero(n);
    split.coexact = Eigen::VectorXd::Zero(n);
    int it1 = 0, it2 = 0;
    const int max_iter = 40 * n + 200;
    if (p >= 1) {
        // min || d~ alpha - bulk ||_G  =>  (d~^T G d~) alpha = d~^T G bulk
        const SparseMat& d = c.twisted_d_matrix(p - 1);
        SparseMat dt = SparseMat(d.transpose());
        SparseMat normal = dt * SparseMat(g.asDiagonal()) * d;
        Eigen::VectorXd alpha = detail::cg_solve(normal, dt * g.cwiseProduct(bulk),
                                                 cg_tol, max_iter, it1);
        split.exact = d * alpha;
    }
    if (p <= 1) {
        // min || delta~ beta - bulk ||_G with delta~ = G_p^{-1} d~_p^T G_{p+1}:
        //   (G_{p+1} d~ G_p^{-1} d~^T G_{p+1}) beta = G_{p+1} d~ bulk
        const SparseMat& d = c.twisted_d_matrix(p);
        const Eigen::VectorXd& gq = c.gram(p + 1);
        SparseMat normal = SparseMat(gq.asDiagonal()) * d *
                           SparseMat(g.cwiseInverse().asDiagonal()) *
                           SparseMat(d.transpose()) * SparseMat(gq.asDiagonal());
        normal = SparseMat(0.5 * (normal + SparseMat(normal.transpose())));
        Eigen::VectorXd beta = detail::cg_solve(normal, gq.cwiseProduct(d * bulk),
                                                cg_tol, max_iter, it2);
        split.coexact = g.cwiseInverse().cwiseProduct(
            SparseMat(d.transpose()) * gq.cwiseProduct(beta));
    }
    split.cg_iterations = it1 + it2;

    const double nrm = std::max(c.norm(p, eta.values), 1e-300);
    split.reassembly_rel =
        c.norm(p, eta.values - split.exact - split.coexact - split.harmonic) / nrm;
    auto cross = [&](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
        double nu = c.norm(p, u), nv = c.norm(p, v);
        if (nu == 0.0 || nv == 0.0) return 0.0;
        return std::abs(c.inner(p, u, v)) / (nu * nv);
    };
    split.max_cross_gram = std::max({cross(split.exact, split.coexact),
                                     cross(split.exact, split.harmonic),
                                     cross(split.coexact, split.harmonic)});
    return split;
}

// Reference decomposition by dense orthogonal projection in the G^{1/2}
// metric (SVD column spaces, no iterative solves); independent of the
// CG-based path above and used to cross-check it.
inline HodgeSplit hodge_decompose_dense(const DressedComplex& c, const Cochain& eta) {
    const int p = eta.degree;
    const int n = c.mesh().cell_count(p);
    const Eigen::VectorXd w = c.gram(p).cwiseSqrt();
    auto project_onto = [&](const Eigen::MatrixXd& cols, const Eigen::VectorXd& v) {
        if (cols.cols() == 0) return Eigen::VectorXd(Eigen::VectorXd::Zero(n));
        Eigen::MatrixXd scaled = w.asDiagonal() * cols;
        Eigen::BDCSVD<Eigen::MatrixXd> svd(scaled, Eigen::ComputeThinU);
        const double cutoff = 1e-12 * svd.singularValues()[0];
        int rank = 0;
        while (rank < svd.singularValues().size() && svd.singularValues()[rank] > cutoff) ++rank;
        Eigen::MatrixXd u = svd.matrixU().leftCols(rank);
        Eigen::VectorXd vw = w.cwiseProduct(v);
        return Eigen::VectorXd(w.cwiseInverse().cwiseProduct(u * (u.transpose() * vw)));
    };
    HodgeSplit split;
    split.exact = p >= 1 ? project_onto(Eigen::MatrixXd(c.twisted_d_matrix(p - 1)), eta.values)
                         : Eigen::VectorXd(Eigen::VectorXd::Zero(n));
    split.coexact = p <= 1 ? project_onto(Eigen::MatrixXd(twisted_codifferential_matrix(c, p)),
                                          eta.values)
                           : Eigen::VectorXd(Eigen::VectorXd::Zero(n));
    split.harmonic = eta.values - split.exact - split.coexact;
    return split;
}

// Cohomology dimensions h_p = dim ker d~_p - rank d~_{p-1}, by rank-revealing
// QR on the (small, dense) twisted differentials. Equals the torus Betti
// numbers (1, 2, 1) for every finite lambda.
inline std::array<int, 3> cohomology_dims(const DressedComplex& c) {
    auto rank = [](const Eigen::MatrixXd& m) {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
        return static_cast<int>(qr.rank());
    };
    const int n0 = c.mesh().cell_count(0);
    const int n1 = c.mesh().cell_count(1);
    const int n2 = c.mesh().cell_count(2);
    const int r0 = rank(Eigen::MatrixXd(c.twisted_d_matrix(0)));
    const int r1 = rank(Eigen::MatrixXd(c.twisted_d_matrix(1)));
    return {n0 - r0, (n1 - r1) - r0, n2 - r1};
}

}  // namespace homhodge
