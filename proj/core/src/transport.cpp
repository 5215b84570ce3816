#include "mlsmooth/transport.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace mlsmooth {

namespace {

// All multi-indices over nvars variables with total degree <= order.
std::vector<std::vector<int>> total_degree_indices(int nvars, int order) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(nvars, 0);
    for (;;) {
        int deg = 0;
        for (int v : cur) deg += v;
        if (deg <= order) out.push_back(cur);
        int i = nvars - 1;
        for (; i >= 0; --i) {
            if (++cur[i] <= order) break;
            cur[i] = 0;
        }
        if (i < 0) break;
    }
    if (nvars == 0) out.assign(1, {});
    return out;
}

double offdiag_product(std::span<const int> mi, std::span<const double> xs,
                       std::span<const int> anc, std::span<const double> x) {
    (void)xs;
    double p = 1.0;
    for (std::size_t j = 0; j < anc.size(); ++j) {
        double v, dv;
        offdiag_basis(mi[j], x[anc[j]], v, dv);
        p *= v;
    }
    return p;
}

}  // namespace

MonotoneTriangularMap make_identity_map(int dim, int order) {
    if (dim < 1 || dim > 4) {
        throw std::invalid_argument("make_identity_map: dim must be in [1, 4]");
    }
    MonotoneTriangularMap map;
    map.dim = dim;
    map.basis.order = order;
    map.comps.resize(dim);
    for (int i = 0; i < dim; ++i) {
        MapComponent& c = map.comps[i];
        c.diag = i;
        for (int j = 0; j < i; ++j) c.anc.push_back(j);
        c.a_idx = total_degree_indices(i, order);
        c.b_idx = total_degree_indices(i + 1, order);
        c.a.assign(c.a_idx.size(), 0.0);
        c.b.assign(c.b_idx.size(), 0.0);
        // b == 1 (constant element is the all-zero multi-index).
        for (std::size_t k = 0; k < c.b_idx.size(); ++k) {
            bool all_zero = true;
            for (int v : c.b_idx[k]) all_zero &= (v == 0);
            if (all_zero) {
                c.b[k] = 1.0;
                break;
            }
        }
    }
    return map;
}

const Quad1D& gl_rule(int n) {
    static std::map<int, Quad1D> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, gauss_legendre(n)).first;
    return it->second;
}

namespace {

// b_i evaluated at ancestors x and diagonal value t.
double b_at(const MapComponent& c, std::span<const double> x, double t) {
    double sum = 0.0;
    for (std::size_t k = 0; k < c.b_idx.size(); ++k) {
        const auto& mi = c.b_idx[k];
        double p = 1.0;
        for (std::size_t j = 0; j < c.anc.size(); ++j) {
            double v, dv;
            offdiag_basis(mi[j], x[c.anc[j]], v, dv);
            p *= v;
        }
        double v, dv;
        diag_basis(mi[c.anc.size()], t, v, dv);
        sum += c.b[k] * p * v;
    }
    return sum;
}

double a_at(const MapComponent& c, std::span<const double> x) {
    double sum = 0.0;
    for (std::size_t k = 0; k < c.a_idx.size(); ++k) {
        sum += c.a[k] * offdiag_product(c.a_idx[k], {}, c.anc, x);
    }
    return sum;
}

}  // namespace

double eval_component(const MonotoneTriangularMap& map, int i,
                      std::span<const double> x) {
    const MapComponent& c = map.comps[i];
    const Quad1D& gl = gl_rule(map.gl_order);
    double xi = x[c.diag];
    double integral = 0.0;
    for (std::size_t g = 0; g < gl.x.size(); ++g) {
        double t = 0.5 * xi * (gl.x[g] + 1.0);
        double b = b_at(c, x, t);
        integral += gl.w[g] * b * b;
    }
    integral *= 0.5 * xi;
    return a_at(c, x) + integral;
}

std::vector<double> eval_map(const MonotoneTriangularMap& map,
                             std::span<const double> x) {
    std::vector<double> out(map.dim);
    for (int i = 0; i < map.dim; ++i) out[i] = eval_component(map, i, x);
    return out;
}

double diag_b(const MonotoneTriangularMap& map, int i,
              std::span<const double> x) {
    const MapComponent& c = map.comps[i];
    return b_at(c, x, x[c.diag]);
}

double diag_partial(const MonotoneTriangularMap& map, int i,
                    std::span<const double> x) {
    double b = diag_b(map, i, x);
    return b * b;
}

double component_partial(const MonotoneTriangularMap& map, int i,
                         std::span<const double> x, int j) {
    const MapComponent& c = map.comps[i];
    if (j == c.diag) return diag_partial(map, i, x);
    int aj = -1;
    for (std::size_t k = 0; k < c.anc.size(); ++k) {
        if (c.anc[k] == j) aj = static_cast<int>(k);
    }
    if (aj < 0) return 0.0;

    // d a_i / dx_j
    double da = 0.0;
    for (std::size_t k = 0; k < c.a_idx.size(); ++k) {
        double p = 1.0;
        for (std::size_t l = 0; l < c.anc.size(); ++l) {
            double v, dv;
            offdiag_basis(c.a_idx[k][l], x[c.anc[l]], v, dv);
            p *= (static_cast<int>(l) == aj) ? dv : v;
        }
        da += c.a[k] * p;
    }
    // d/dx_j int_0^{xi} b^2 dt = int 2 b (db/dx_j) dt
    const Quad1D& gl = gl_rule(map.gl_order);
    double xi = x[c.diag];
    double dint = 0.0;
    for (std::size_t g = 0; g < gl.x.size(); ++g) {
        double t = 0.5 * xi * (gl.x[g] + 1.0);
        double b = 0.0, db = 0.0;
        for (std::size_t k = 0; k < c.b_idx.size(); ++k) {
            double p = 1.0, dp = 1.0;
            for (std::size_t l = 0; l < c.anc.size(); ++l) {
                double v, dv;
                offdiag_basis(c.b_idx[k][l], x[c.anc[l]], v, dv);
                p *= v;
                dp *= (static_cast<int>(l) == aj) ? dv : v;
            }
            double v, dv;
            diag_basis(c.b_idx[k][c.anc.size()], t, v, dv);
            b += c.b[k] * p * v;
            db += c.b[k] * dp * v;
        }
        dint += gl.w[g] * 2.0 * b * db;
    }
    dint *= 0.5 * xi;
    return da + dint;
}

double logdet_jacobian(const MonotoneTriangularMap& map,
                       std::span<const double> x) {
    double s = 0.0;
    for (int i = 0; i < map.dim; ++i) {
        double b = diag_b(map, i, x);
        if (b == 0.0) return -std::numeric_limits<double>::infinity();
        s += 2.0 * std::log(std::abs(b));
    }
    return s;
}

std::vector<double> ReversedMap::operator()(std::span<const double> x) const {
    std::vector<double> rx(x.rbegin(), x.rend());
    std::vector<double> y = eval_map(inner, rx);
    return {y.rbegin(), y.rend()};
}

ReversedMap permute_conjugate(MonotoneTriangularMap map) {
    return ReversedMap{std::move(map)};
}

std::vector<std::pair<double, double>> coupled_sample_pair(
    const MonotoneTriangularMap& map_p, const MonotoneTriangularMap& map_pm1,
    std::span<const double> base_first_coord) {
    std::vector<std::pair<double, double>> out;
    out.reserve(base_first_coord.size());
    std::vector<double> x(std::max(map_p.dim, map_pm1.dim), 0.0);
    for (double s : base_first_coord) {
        x[0] = s;
        out.emplace_back(eval_component(map_p, 0, x),
                         eval_component(map_pm1, 0, x));
    }
    return out;
}

void save_map(std::ostream& os, const MonotoneTriangularMap& map) {
    os << "mlsmooth-map 1\n";
    os << map.dim << ' ' << map.basis.order << ' ' << map.gl_order << '\n';
    os.precision(17);
    for (const MapComponent& c : map.comps) {
        os << c.anc.size();
        for (int a : c.anc) os << ' ' << a;
        os << ' ' << c.diag << '\n';
        os << c.a.size();
        for (double v : c.a) os << ' ' << v;
        os << '\n';
        os << c.b.size();
        for (double v : c.b) os << ' ' << v;
        os << '\n';
    }
}

MonotoneTriangularMap load_map(std::istream& is) {
    std::string tag;
    int version = 0;
    is >> tag >> version;
    if (tag != "mlsmooth-map" || version != 1) {
        throw std::runtime_error("load_map: unrecognized header");
    }
    int dim = 0, order = 0, gl = 0;
    is >> dim >> order >> gl;
    MonotoneTriangularMap map = make_identity_map(dim, order);
    map.gl_order = gl;
    for (MapComponent& c : map.comps) {
        std::size_t na = 0;
        is >> na;
        std::vector<int> anc(na);
        for (auto& a : anc) is >> a;
        int diag = 0;
        is >> diag;
        if (anc != c.anc || diag != c.diag) {
            throw std::runtime_error("load_map: unexpected component layout");
        }
        std::size_t ka = 0;
        is >> ka;
        if (ka != c.a.size()) throw std::runtime_error("load_map: bad a size");
        for (auto& v : c.a) is >> v;
        std::size_t kb = 0;
        is >> kb;
        if (kb != c.b.size()) throw std::runtime_error("load_map: bad b size");
        for (auto& v : c.b) is >> v;
    }
    if (!is) throw std::runtime_error("load_map: truncated input");
    return map;
}

std::vector<double> pack_coefficients(const MonotoneTriangularMap& map) {
    std::vector<double> theta;
    for (const MapComponent& c : map.comps) {
        theta.insert(theta.end(), c.a.begin(), c.a.end());
        theta.insert(theta.end(), c.b.begin(), c.b.end());
    }
    return theta;
}

void unpack_coefficients(std::span<const double> theta,
                         MonotoneTriangularMap& map) {
    std::size_t pos = 0;
    for (MapComponent& c : map.comps) {
        for (auto& v : c.a) v = theta[pos++];
        for (auto& v : c.b) v = theta[pos++];
    }
    if (pos != theta.size()) {
        throw std::invalid_argument("unpack_coefficients: size mismatch");
    }
}

}  // namespace mlsmooth
