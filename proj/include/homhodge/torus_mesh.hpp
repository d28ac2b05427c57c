#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <string>
#include <tuple>
#include <vector>

#include "homhodge/errors.hpp"

namespace homhodge {

using SparseMat = Eigen::SparseMatrix<double>;

// Cubical mesh of the flat 2-torus: nx*ny vertices, 2*nx*ny edges (x-edges
// first, then y-edges), nx*ny faces, all indices wrapping periodically.
// Orientation convention: x-edges point +x, y-edges point +y, face boundaries
// run counterclockwise.
struct TorusMesh {
    int nx = 2, ny = 2;
    double hx = 1.0, hy = 1.0;

    int vertex_count() const { return nx * ny; }
    int edge_count() const { return 2 * nx * ny; }
    int face_count() const { return nx * ny; }
    int cell_count(int degree) const {
        return degree == 1 ? edge_count() : vertex_count();
    }

    int vertex(int i, int j) const { return wrap(j, ny) * nx + wrap(i, nx); }
    int edge_x(int i, int j) const { return wrap(j, ny) * nx + wrap(i, nx); }
    int edge_y(int i, int j) const { return nx * ny + wrap(j, ny) * nx + wrap(i, nx); }
    int face(int i, int j) const { return wrap(j, ny) * nx + wrap(i, nx); }

    // Barycenter of a cell, used to sample scalar fields per degree.
    // Degree 0: vertices; degree 1: edge midpoints; degree 2: face centers.
    std::pair<double, double> cell_center(int degree, int index) const {
        if (degree == 0) {
            int i = index % nx, j = index / nx;
            return {i * hx, j * hy};
        }
        if (degree == 1) {
            if (index < nx * ny) {
                int i = index % nx, j = index / nx;
                return {(i + 0.5) * hx, j * hy};
            }
            int k = index - nx * ny;
            int i = k % nx, j = k / nx;
            return {i * hx, (j + 0.5) * hy};
        }
        int i = index % nx, j = index / nx;
        return {(i + 0.5) * hx, (j + 0.5) * hy};
    }

    static int wrap(int i, int n) { return ((i % n) + n) % n; }
};

inline TorusMesh build_torus_mesh(int nx, int ny, double hx = 1.0, double hy = 1.0) {
    if (nx < 2 || ny < 2)
        throw ConfigError("torus mesh: need nx, ny >= 2 (periodic 1-cell meshes are degenerate)");
    if (!(hx > 0.0) || !(hy > 0.0))
        throw ConfigError("torus mesh: spacings must be positive");
    return TorusMesh{nx, ny, hx, hy};
}

// Signed incidence matrices: D0 (edges x vertices) and D1 (faces x edges),
// with D1 * D0 = 0 exactly (entries are -1, 0, +1).
inline std::pair<SparseMat, SparseMat> incidence_matrices(const TorusMesh& m) {
    std::vector<Eigen::Triplet<double>> t0, t1;
    t0.reserve(4 * m.nx * m.ny);
    t1.reserve(4 * m.nx * m.ny);
    for (int j = 0; j < m.ny; ++j) {
        for (int i = 0; i < m.nx; ++i) {
            t0.emplace_back(m.edge_x(i, j), m.vertex(i + 1, j), 1.0);
            t0.emplace_back(m.edge_x(i, j), m.vertex(i, j), -1.0);
            t0.emplace_back(m.edge_y(i, j), m.vertex(i, j + 1), 1.0);
            t0.emplace_back(m.edge_y(i, j), m.vertex(i, j), -1.0);

            int f = m.face(i, j);
            t1.emplace_back(f, m.edge_x(i, j), 1.0);
            t1.emplace_back(f, m.edge_y(i + 1, j), 1.0);
            t1.emplace_back(f, m.edge_x(i, j + 1), -1.0);
            t1.emplace_back(f, m.edge_y(i, j), -1.0);
        }
    }
    SparseMat d0(m.edge_count(), m.vertex_count());
    SparseMat d1(m.face_count(), m.edge_count());
    d0.setFromTriplets(t0.begin(), t0.end());
    d1.setFromTriplets(t1.begin(), t1.end());
    return {d0, d1};
}

// Diagonal mass matrices from the dual/primal volume ratios of the uniform
// cubical complex: M0 = hx*hy, M1 = dual length / primal length per edge
// family, M2 = 1/(hx*hy). Only adjointness relations depend on the overall
// scale, so the convention lives here and nowhere else.
inline std::tuple<Eigen::VectorXd, Eigen::VectorXd, Eigen::VectorXd>
mass_matrices(const TorusMesh& m) {
    Eigen::VectorXd m0 = Eigen::VectorXd::Constant(m.vertex_count(), m.hx * m.hy);
    Eigen::VectorXd m1(m.edge_count());
    m1.head(m.nx * m.ny).setConstant(m.hy / m.hx);
    m1.tail(m.nx * m.ny).setConstant(m.hx / m.hy);
    Eigen::VectorXd m2 = Eigen::VectorXd::Constant(m.face_count(), 1.0 / (m.hx * m.hy));
    return {m0, m1, m2};
}

}  // namespace homhodge
