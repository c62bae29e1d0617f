#include "llg/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "llg/errors.hpp"

namespace llg {

Grid make_grid(int dim, int n, Boundary bc) {
    if (dim != 1 && dim != 3) {
        throw std::invalid_argument("make_grid: dim must be 1 or 3, got " + std::to_string(dim));
    }
    if (n < 3) {
        throw std::invalid_argument("make_grid: n must be at least 3, got " + std::to_string(n));
    }
    const double h = bc == Boundary::Neumann ? 1.0 / (n - 1) : 1.0 / n;
    return Grid{dim, n, h, bc};
}

VectorField make_field(const Grid& g) {
    return VectorField{g, std::vector<Vec3>(g.node_count(), Vec3{})};
}

namespace {

void require_consistent(const VectorField& f, const char* op) {
    if (f.data.size() != f.grid.node_count()) {
        throw std::invalid_argument(std::string(op) + ": field size does not match its grid");
    }
}

// Sum of |u_{i+1} - u_i|^2 over axis-directed forward differences: interior
// pairs on Neumann grids, wrapped pairs on periodic ones.
double sum_sq_forward_diffs(const VectorField& u) {
    const Grid& g = u.grid;
    const int n = g.n;
    const bool wrap = g.bc == Boundary::Periodic;
    double acc = 0.0;
    auto add = [&acc](const Vec3& a, const Vec3& b) {
        const Vec3 d = b - a;
        acc += dot(d, d);
    };
    if (g.dim == 1) {
        for (int i = 0; i + 1 < n; ++i) add(u.data[i], u.data[i + 1]);
        if (wrap) add(u.data[n - 1], u.data[0]);
        return acc;
    }
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                const std::size_t c = g.index(i, j, k);
                if (i + 1 < n) add(u.data[c], u.data[g.index(i + 1, j, k)]);
                else if (wrap) add(u.data[c], u.data[g.index(0, j, k)]);
                if (j + 1 < n) add(u.data[c], u.data[g.index(i, j + 1, k)]);
                else if (wrap) add(u.data[c], u.data[g.index(i, 0, k)]);
                if (k + 1 < n) add(u.data[c], u.data[g.index(i, j, k + 1)]);
                else if (wrap) add(u.data[c], u.data[g.index(i, j, 0)]);
            }
        }
    }
    return acc;
}

double cell_volume(const Grid& g) {
    return g.dim == 1 ? g.h : g.h * g.h * g.h;
}

}  // namespace

NormTriple error_norms(const VectorField& e) {
    require_consistent(e, "error_norms");
    double linf = 0.0;
    double sq = 0.0;
    for (const Vec3& v : e.data) {
        linf = std::max(linf, norm(v));
        sq += dot(v, v);
    }
    const double vol = cell_volume(e.grid);
    const double l2sq = vol * sq;
    const double semi = vol / (e.grid.h * e.grid.h) * sum_sq_forward_diffs(e);
    return NormTriple{linf, std::sqrt(l2sq), std::sqrt(l2sq + semi)};
}

double max_unit_norm_deviation(const VectorField& m) {
    require_consistent(m, "max_unit_norm_deviation");
    double dev = 0.0;
    for (const Vec3& v : m.data) dev = std::max(dev, std::abs(norm(v) - 1.0));
    return dev;
}

double exchange_energy(const VectorField& m) {
    require_consistent(m, "exchange_energy");
    return cell_volume(m.grid) / (m.grid.h * m.grid.h) * sum_sq_forward_diffs(m);
}

double node_weight(const Grid& g, std::size_t flat) {
    if (g.bc == Boundary::Periodic) return 1.0;
    const auto n = static_cast<std::size_t>(g.n);
    auto axis = [&](std::size_t i) { return (i == 0 || i + 1 == n) ? 0.5 : 1.0; };
    if (g.dim == 1) return axis(flat);
    const std::size_t i = flat % n;
    const std::size_t j = (flat / n) % n;
    const std::size_t k = flat / (n * n);
    return axis(i) * axis(j) * axis(k);
}

std::vector<double> node_weights(const Grid& g) {
    std::vector<double> w(g.node_count());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = node_weight(g, i);
    return w;
}

double inner_product(const VectorField& u, const VectorField& v) {
    require_consistent(u, "inner_product");
    if (!(u.grid == v.grid)) throw std::invalid_argument("inner_product: grids differ");
    double acc = 0.0;
    for (std::size_t i = 0; i < u.data.size(); ++i) {
        acc += node_weight(u.grid, i) * dot(u.data[i], v.data[i]);
    }
    return cell_volume(u.grid) * acc;
}

double weighted_norm(const VectorField& u) { return std::sqrt(inner_product(u, u)); }

void check_finite(const VectorField& f, const char* context) {
    for (const Vec3& v : f.data) {
        if (!std::isfinite(v[0]) || !std::isfinite(v[1]) || !std::isfinite(v[2])) {
            throw NumericalError(std::string(context) + ": field contains NaN or Inf");
        }
    }
}

}  // namespace llg
