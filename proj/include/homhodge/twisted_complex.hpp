#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "homhodge/errors.hpp"
#include "homhodge/torus_mesh.hpp"

namespace homhodge {

struct Cochain {
    int degree = 0;
    Eigen::VectorXd values;
};

// Discrete twisted exterior calculus on a torus mesh. The dressing operator
// S_p = diag(e^{w lambda}) is sampled at cell barycenters per degree; the
// twisted differential is the conjugate d~_p = S_{p+1}^{-1} D_p S_p, the
// weighted Gram matrices are G_p = S_p M_p S_p, and the twisted
// codifferential is the exact G-adjoint of d~.
class DressedComplex {
public:
    static constexpr double kMaxExponent = 30.0;  // |w lambda| beyond this is numerically vacuous

    static DressedComplex build(const TorusMesh& mesh, double weight,
                                const std::function<double(double, double)>& lambda) {
        std::array<Eigen::VectorXd, 3> samples;
        for (int p = 0; p < 3; ++p) {
            samples[p].resize(mesh.cell_count(p));
            for (int c = 0; c < mesh.cell_count(p); ++c) {
                auto [x, y] = mesh.cell_center(p, c);
                samples[p][c] = lambda(x, y);
            }
        }
        return build_from_samples(mesh, weight, samples);
    }

    static DressedComplex build_from_samples(const TorusMesh& mesh, double weight,
                                             const std::array<Eigen::VectorXd, 3>& lambda) {
        DressedComplex c;
        c.mesh_ = mesh;
        c.weight_ = weight;
        for (int p = 0; p < 3; ++p) {
            if (lambda[p].size() != mesh.cell_count(p))
                throw ConfigError("dressed complex: lambda sample count mismatch at degree " +
                                  std::to_string(p));
            double worst = (weight * lambda[p]).cwiseAbs().maxCoeff();
            if (!(worst <= kMaxExponent))
                throw ConfigError("dressed complex: |w lambda| exceeds " +
                                  std::to_string(kMaxExponent) + "; dressing is ill-conditioned");
            c.lambda_[p] = lambda[p];
            c.dress_[p] = (weight * lambda[p]).array().exp();
        }
        auto [d0, d1] = incidence_matrices(mesh);
        c.d_[0] = d0;
        c.d_[1] = d1;
        auto [m0, m1, m2] = mass_matrices(mesh);
        c.mass_[0] = m0;
        c.mass_[1] = m1;
        c.mass_[2] = m2;
        for (int p = 0; p < 3; ++p)
            c.gram_[p] = c.dress_[p].cwiseProduct(c.mass_[p]).cwiseProduct(c.dress_[p]);
        for (int p = 0; p < 2; ++p)
            c.twisted_d_[p] = c.dress_[p + 1].cwiseInverse().asDiagonal() * c.d_[p] *
                              c.dress_[p].asDiagonal();
        return c;
    }

    const TorusMesh& mesh() const { return mesh_; }
    double weight() const { return weight_; }
    const Eigen::VectorXd& lambda(int p) const { return lambda_[p]; }
    const Eigen::VectorXd& dressing(int p) const { return dress_[p]; }
    const Eigen::VectorXd& mass(int p) const { return mass_[p]; }
    const Eigen::VectorXd& gram(int p) const { return gram_[p]; }
    const SparseMat& incidence(int p) const { return d_[p]; }
    const SparseMat& twisted_d_matrix(int p) const { return twisted_d_[p]; }

    // G_p inner product and norm.
    double inner(int p, const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
        return u.dot(gram_[p].cwiseProduct(v));
    }
    double norm(int p, const Eigen::VectorXd& u) const { return std::sqrt(inner(p, u, u)); }

private:
    TorusMesh mesh_;
    double weight_ = 1.0;
    std::array<Eigen::VectorXd, 3> lambda_, dress_, mass_, gram_;
    std::array<SparseMat, 2> d_;
    std::array<SparseMat, 2> twisted_d_;
};

inline Cochain twisted_d(const DressedComplex& c, const Cochain& eta) {
    if (eta.degree < 0 || eta.degree > 1)
        throw ConfigError("twisted_d: degree must be 0 or 1");
    return {eta.degree + 1, c.twisted_d_matrix(eta.degree) * eta.values};
}

// Exact G-adjoint of the twisted differential, as a matrix:
//   delta~_{p+1} = G_p^{-1} d~_p^T G_{p+1},
// algebraically equal to the conjugated classical codifferential
//   S_p^{-1} (M_p^{-1} D_p^T M_{p+1}) S_{p+1}.
inline SparseMat twisted_codifferential_matrix(const DressedComplex& c, int target_degree) {
    if (target_degree < 0 || target_degree > 1)
        throw ConfigError("twisted_codifferential: target degree must be 0 or 1");
    const int p = target_degree;
    return c.gram(p).cwiseInverse().asDiagonal() *
           SparseMat(c.twisted_d_matrix(p).transpose()) * c.gram(p + 1).asDiagonal();
}

inline Cochain twisted_codifferential(const DressedComplex& c, const Cochain& xi) {
    if (xi.degree < 1 || xi.degree > 2)
        throw ConfigError("twisted_codifferential: degree must be 1 or 2");
    return {xi.degree - 1, twisted_codifferential_matrix(c, xi.degree - 1) * xi.values};
}

// Homothetic Laplacian on degree-p cochains, Delta~ = d~ delta~ + delta~ d~.
inline SparseMat twisted_laplacian(const DressedComplex& c, int p) {
    if (p < 0 || p > 2)
        throw ConfigError("twisted_laplacian: degree must be 0, 1 or 2");
    const int n = c.mesh().cell_count(p);
    SparseMat lap(n, n);
    if (p <= 1)
        lap = twisted_codifferential_matrix(c, p) * c.twisted_d_matrix(p);
    if (p >= 1) {
        SparseMat dd = c.twisted_d_matrix(p - 1) * twisted_codifferential_matrix(c, p - 1);
        lap = p <= 1 ? SparseMat(lap + dd) : dd;
    }
    return lap;
}

// Residual of the chain-map identity S d~ eta = D S eta. Exact in exact
// arithmetic; the return value is pure floating-point noise.
inline double chain_map_check(const DressedComplex& c, const Cochain& eta) {
    if (eta.degree < 0 || eta.degree > 1)
        throw ConfigError("chain_map_check: degree must be 0 or 1");
    const int p = eta.degree;
    Eigen::VectorXd lhs =
        c.dressing(p + 1).cwiseProduct(c.twisted_d_matrix(p) * eta.values);
    Eigen::VectorXd rhs = c.incidence(p) * c.dressing(p).cwiseProduct(eta.values);
    return (lhs - rhs).norm();
}

}  // namespace homhodge
