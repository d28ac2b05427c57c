#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <random>

#include "homhodge/hodge.hpp"
#include "homhodge/random_fields.hpp"

using namespace homhodge;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VectorXd random_unit(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = gauss(rng);
    return v / v.norm();
}

DressedComplex random_complex(int nx, int ny, std::mt19937_64& rng, double w = 1.0) {
    TorusMesh mesh = build_torus_mesh(nx, ny, 1.0, 1.0);
    SmoothTorusField f(nx, ny, 1.2, 1.0, rng);
    return DressedComplex::build(mesh, w, [&](double x, double y) { return f(x, y); });
}

MatrixXd classical_harmonics(const TorusMesh& mesh, int p) {
    if (p == 0) return MatrixXd::Ones(mesh.vertex_count(), 1);
    if (p == 2) return MatrixXd::Ones(mesh.face_count(), 1);
    MatrixXd h = MatrixXd::Zero(mesh.edge_count(), 2);
    h.col(0).head(mesh.nx * mesh.ny).setOnes();
    h.col(1).tail(mesh.nx * mesh.ny).setOnes();
    return h;
}

double subspace_angle(const DressedComplex& c, int p, const MatrixXd& a, const MatrixXd& b) {
    return max_principal_angle(c, p, a, b);
}

}  // namespace

TEST_CASE("harmonic spaces have the torus Betti dimensions") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 5; ++t) {
        DressedComplex c = random_complex(4, 4, rng);
        REQUIRE(harmonic_space(c, 0).cols() == 1);
        REQUIRE(harmonic_space(c, 1).cols() == 2);
        REQUIRE(harmonic_space(c, 2).cols() == 1);
    }
}

TEST_CASE("degree-0 harmonic space is spanned by the inverse dressing of constants") {
    std::mt19937_64 rng(19);
    DressedComplex c = random_complex(5, 6, rng);
    MatrixXd kernel = harmonic_space(c, 0);
    MatrixXd transported = c.dressing(0).cwiseInverse().asDiagonal() *
                           classical_harmonics(c.mesh(), 0);
    REQUIRE(subspace_angle(c, 0, kernel, transported) < 1e-8);
}

TEST_CASE("flat 4x4 torus has the two constant edge fields as 1-harmonics") {
    TorusMesh mesh = build_torus_mesh(4, 4);
    DressedComplex c = DressedComplex::build(mesh, 1.0, [](double, double) { return 0.0; });
    MatrixXd kernel = harmonic_space(c, 1);
    REQUIRE(kernel.cols() == 2);
    REQUIRE(subspace_angle(c, 1, kernel, classical_harmonics(mesh, 1)) < 1e-10);
}

TEST_CASE("harmonic transport: kernel equals dressed classical harmonics") {
    std::mt19937_64 rng(23);
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
        DressedComplex c = random_complex(4 + t % 3, 4 + t % 5, rng);
        for (int p = 0; p < 3; ++p) {
            MatrixXd kernel = harmonic_space(c, p);
            MatrixXd transported = c.dressing(p).cwiseInverse().asDiagonal() *
                                   classical_harmonics(c.mesh(), p);
            REQUIRE(kernel.cols() == transported.cols());
            worst = std::max(worst, subspace_angle(c, p, kernel, transported));
        }
    }
    REQUIRE(worst < 1e-8);
}

TEST_CASE("harmonic basis vectors have a small Laplacian residual") {
    std::mt19937_64 rng(29);
    DressedComplex c = random_complex(6, 6, rng);
    SparseMat lap = twisted_laplacian(c, 1);
    MatrixXd kernel = harmonic_space(c, 1);
    for (int k = 0; k < kernel.cols(); ++k)
        REQUIRE(c.norm(1, lap * kernel.col(k)) < 1e-9);
}

TEST_CASE("hodge decomposition splits constructed inputs cleanly") {
    std::mt19937_64 rng(37);
    DressedComplex c = random_complex(5, 5, rng);
    SECTION("an exact input has no coexact or harmonic part") {
        VectorXd gamma = random_unit(c.mesh().vertex_count(), rng);
        Cochain eta{1, c.twisted_d_matrix(0) * gamma};
        HodgeSplit split = hodge_decompose(c, eta);
        double scale = c.norm(1, eta.values);
        REQUIRE(c.norm(1, split.coexact) < 1e-8 * scale);
        REQUIRE(c.norm(1, split.harmonic) < 1e-8 * scale);
        REQUIRE(c.norm(1, eta.values - split.exact) < 1e-8 * scale);
    }
    SECTION("a harmonic input passes through untouched") {
        MatrixXd kernel = harmonic_space(c, 1);
        Cochain eta{1, kernel.col(0)};
        HodgeSplit split = hodge_decompose(c, eta);
        REQUIRE(c.norm(1, split.exact) < 1e-8);
        REQUIRE(c.norm(1, split.coexact) < 1e-8);
    }
}

TEST_CASE("hodge decomposition: reassembly, orthogonality, dense oracle") {
    std::mt19937_64 rng(43);
    double worst_reassembly = 0.0, worst_cross = 0.0, worst_oracle = 0.0;
    for (int t = 0; t < 25; ++t) {
        DressedComplex c = random_complex(6, 6, rng);
        Cochain eta{1, random_unit(c.mesh().edge_count(), rng)};
        HodgeSplit split = hodge_decompose(c, eta);
        worst_reassembly = std::max(worst_reassembly, split.reassembly_rel);
        worst_cross = std::max(worst_cross, split.max_cross_gram);
        HodgeSplit ref = hodge_decompose_dense(c, eta);
        double scale = c.norm(1, eta.values);
        worst_oracle = std::max({worst_oracle, c.norm(1, split.exact - ref.exact) / scale,
                                 c.norm(1, split.coexact - ref.coexact) / scale,
                                 c.norm(1, split.harmonic - ref.harmonic) / scale});
    }
    REQUIRE(worst_reassembly < 1e-10);
    REQUIRE(worst_cross < 1e-8);
    REQUIRE(worst_oracle < 1e-8);
}

TEST_CASE("hodge decomposition at the end degrees") {
    std::mt19937_64 rng(47);
    DressedComplex c = random_complex(4, 4, rng);
    Cochain eta0{0, random_unit(c.mesh().vertex_count(), rng)};
    HodgeSplit s0 = hodge_decompose(c, eta0);
    REQUIRE(s0.exact.norm() == 0.0);  // no degree -1 potentials
    REQUIRE(s0.reassembly_rel < 1e-10);
    Cochain eta2{2, random_unit(c.mesh().face_count(), rng)};
    HodgeSplit s2 = hodge_decompose(c, eta2);
    REQUIRE(s2.coexact.norm() == 0.0);  // no degree 3 potentials
    REQUIRE(s2.reassembly_rel < 1e-10);
}

TEST_CASE("cohomology dimensions are the Betti numbers (1,2,1)") {
    std::mt19937_64 rng(53);
    SECTION("flat") {
        TorusMesh mesh = build_torus_mesh(4, 4);
        DressedComplex c = DressedComplex::build(mesh, 1.0, [](double, double) { return 0.0; });
        REQUIRE(cohomology_dims(c) == std::array<int, 3>{1, 2, 1});
    }
    SECTION("random twists, and weight zero") {
        for (int t = 0; t < 10; ++t) {
            DressedComplex c = random_complex(4 + t % 4, 4 + (t * 2) % 4, rng);
            REQUIRE(cohomology_dims(c) == std::array<int, 3>{1, 2, 1});
        }
        DressedComplex zero_w = random_complex(5, 5, rng, 0.0);
        REQUIRE(cohomology_dims(zero_w) == std::array<int, 3>{1, 2, 1});
    }
}
