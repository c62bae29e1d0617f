#pragma once

#include <cstddef>
#include <vector>

#include "llg/vec3.hpp"

namespace llg {

enum class Boundary { Neumann, Periodic };

/// Structured uniform grid on the unit interval (dim=1) or unit cube (dim=3).
/// Neumann grids are node-centered with nodes on the faces, h = 1/(n-1);
/// periodic grids use h = 1/n with wrapped indices.
struct Grid {
    int dim = 1;
    int n = 3;        // nodes per axis (uniform across axes in 3D)
    double h = 0.5;   // spacing
    Boundary bc = Boundary::Neumann;

    std::size_t node_count() const {
        auto nn = static_cast<std::size_t>(n);
        return dim == 1 ? nn : nn * nn * nn;
    }
    double coord(int i) const { return i * h; }
    std::size_t index(int i, int j = 0, int k = 0) const {
        auto nn = static_cast<std::size_t>(n);
        return static_cast<std::size_t>(i) + nn * (static_cast<std::size_t>(j) + nn * static_cast<std::size_t>(k));
    }
    friend bool operator==(const Grid&, const Grid&) = default;
};

/// Builds a grid, rejecting dim not in {1,3} or n < 3.
Grid make_grid(int dim, int n, Boundary bc);

/// One real 3-vector per node, x-fastest linearization.
struct VectorField {
    Grid grid;
    std::vector<Vec3> data;
};

/// Zero field on the given grid.
VectorField make_field(const Grid& g);

struct NormTriple {
    double linf = 0.0;
    double l2 = 0.0;
    double h1 = 0.0;
};

/// Discrete error norms of a nodal 3-vector field:
///   linf = max_i |e_i|_2
///   l2   = sqrt(h^dim sum_i |e_i|^2)
///   h1   = sqrt(l2^2 + h^dim sum over axis-directed forward differences |de/h|^2),
/// differences over interior node pairs (wrapped for periodic grids).
/// h1 is the full norm; the seminorm alone is sqrt(h1^2 - l2^2).
NormTriple error_norms(const VectorField& e);

/// max_i | |m_i|_2 - 1 |.
double max_unit_norm_deviation(const VectorField& m);

/// Discrete exchange energy h^dim/h^2 * sum of squared forward differences
/// (in 1D this is (1/h) sum_i |m_{i+1}-m_i|^2 over the stencil implied by the
/// boundary rule).
double exchange_energy(const VectorField& m);

/// Trapezoid weight of a node: product over axes of 1/2 at Neumann axis
/// boundaries, 1 elsewhere. All ones on periodic grids.
double node_weight(const Grid& g, std::size_t flat);

/// Per-node trapezoid weights for the whole grid.
std::vector<double> node_weights(const Grid& g);

/// Mesh inner product h^dim sum_i w_i u_i . v_i with trapezoid weights;
/// the pairing in which the mirror-ghost Laplacian is self-adjoint.
double inner_product(const VectorField& u, const VectorField& v);

/// sqrt(inner_product(u, u)).
double weighted_norm(const VectorField& u);

/// Throws NumericalError when any component is NaN or infinite.
void check_finite(const VectorField& f, const char* context);

}  // namespace llg
