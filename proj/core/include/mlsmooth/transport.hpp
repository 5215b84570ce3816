#pragma once

#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "mlsmooth/basis.hpp"
#include "mlsmooth/quadrature.hpp"

namespace mlsmooth {

/// One component T^(i)(x_1..x_i) = a_i(x_anc) + int_0^{x_diag} b_i(x_anc, t)^2 dt
/// of a monotone lower-triangular map. `anc` lists the input indices the
/// component reads besides its monotone argument `diag`; multi-indices
/// select products of univariate basis elements (see BasisSpec).
struct MapComponent {
    std::vector<int> anc;
    int diag = 0;
    std::vector<std::vector<int>> a_idx;  // length anc.size() each
    std::vector<std::vector<int>> b_idx;  // length anc.size() + 1, last = diag
    std::vector<double> a;
    std::vector<double> b;
};

struct MonotoneTriangularMap {
    int dim = 1;
    BasisSpec basis;
    int gl_order = 12;  // fixed Gauss-Legendre order for the monotone integral
    std::vector<MapComponent> comps;
};

/// Full lower-triangular map of the given dimension with total-degree
/// truncation at basis order; coefficients initialized to the identity map
/// (a = 0, b = constant 1).
MonotoneTriangularMap make_identity_map(int dim, int order);

/// Shared Gauss-Legendre rule cache.
const Quad1D& gl_rule(int n);

double eval_component(const MonotoneTriangularMap& map, int i,
                      std::span<const double> x);
std::vector<double> eval_map(const MonotoneTriangularMap& map,
                             std::span<const double> x);

/// b_i(x_anc, x_diag) at the diagonal point.
double diag_b(const MonotoneTriangularMap& map, int i,
              std::span<const double> x);

/// dT_i / dx_diag = b_i^2 >= 0.
double diag_partial(const MonotoneTriangularMap& map, int i,
                    std::span<const double> x);

/// dT_i / dx_j for any input j (0 for inputs the component does not read).
double component_partial(const MonotoneTriangularMap& map, int i,
                         std::span<const double> x, int j);

/// Sum of log diagonal partials; -inf when some b_i vanishes at x.
double logdet_jacobian(const MonotoneTriangularMap& map,
                       std::span<const double> x);

/// Coordinate-reversal conjugation S o T o S with S the full reversal
/// permutation; applying it twice gives back the original map action.
struct ReversedMap {
    MonotoneTriangularMap inner;
    std::vector<double> operator()(std::span<const double> x) const;
};
ReversedMap permute_conjugate(MonotoneTriangularMap map);

/// First-coordinate outputs of two maps evaluated on the same base points:
/// the coupled sample pairs of the multilevel increment.
std::vector<std::pair<double, double>> coupled_sample_pair(
    const MonotoneTriangularMap& map_p, const MonotoneTriangularMap& map_pm1,
    std::span<const double> base_first_coord);

/// Versioned flat text serialization; coefficients printed with 17
/// significant digits so a round trip is bit exact.
void save_map(std::ostream& os, const MonotoneTriangularMap& map);
MonotoneTriangularMap load_map(std::istream& is);

/// Coefficient-vector packing used by the optimizers.
std::vector<double> pack_coefficients(const MonotoneTriangularMap& map);
void unpack_coefficients(std::span<const double> theta,
                         MonotoneTriangularMap& map);

}  // namespace mlsmooth
