#include "mlsmooth/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mlsmooth {

namespace {

// Golub-Welsch: eigenvalues of the Jacobi matrix are the nodes, squared
// first eigenvector components the weights. Implicit-shift QL on a
// symmetric tridiagonal (diag d, off-diag e), rotating the first-row
// vector z along.
void golub_welsch(std::vector<double>& d, std::vector<double>& e,
                  std::vector<double>& z) {
    const int n = static_cast<int>(d.size());
    e.push_back(0.0);
    z.assign(n, 0.0);
    z[0] = 1.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        for (;;) {
            int m = l;
            for (; m < n - 1; ++m) {
                double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-16 * dd) break;
            }
            if (m == l) break;
            if (++iter > 50) {
                throw std::runtime_error("golub_welsch: QL failed to converge");
            }
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            for (int i = m - 1; i >= l; --i) {
                double f = s * e[i];
                double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                double zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if (r == 0.0 && m - 1 >= l) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    // Sort by node.
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return d[a] < d[b]; });
    std::vector<double> ds(n), zs(n);
    for (int i = 0; i < n; ++i) {
        ds[i] = d[idx[i]];
        zs[i] = z[idx[i]];
    }
    d = ds;
    z = zs;
}

}  // namespace

Quad1D gauss_hermite_normal(int n) {
    if (n < 1) throw std::invalid_argument("gauss_hermite_normal: n >= 1");
    std::vector<double> d(n, 0.0), e(n - 1), z;
    for (int i = 1; i < n; ++i) e[i - 1] = std::sqrt(static_cast<double>(i));
    golub_welsch(d, e, z);
    Quad1D q;
    q.x = d;
    q.w.resize(n);
    for (int i = 0; i < n; ++i) q.w[i] = z[i] * z[i];
    return q;
}

Quad1D gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1");
    std::vector<double> d(n, 0.0), e(n - 1), z;
    for (int i = 1; i < n; ++i) {
        e[i - 1] = i / std::sqrt(4.0 * i * i - 1.0);
    }
    golub_welsch(d, e, z);
    Quad1D q;
    q.x = d;
    q.w.resize(n);
    for (int i = 0; i < n; ++i) q.w[i] = 2.0 * z[i] * z[i];
    return q;
}

QuadratureRule tensor_normal_quadrature(int dim, int order) {
    if (dim < 1 || dim > 4) {
        throw std::invalid_argument("tensor_normal_quadrature: dim in [1, 4]");
    }
    Quad1D q1 = gauss_hermite_normal(order);
    QuadratureRule q;
    q.dim = dim;
    q.order = order;
    int total = 1;
    for (int i = 0; i < dim; ++i) total *= order;
    q.nodes.reserve(total);
    q.weights.reserve(total);
    std::vector<int> idx(dim, 0);
    for (int t = 0; t < total; ++t) {
        std::vector<double> node(dim);
        double w = 1.0;
        for (int i = 0; i < dim; ++i) {
            node[i] = q1.x[idx[i]];
            w *= q1.w[idx[i]];
        }
        q.nodes.push_back(std::move(node));
        q.weights.push_back(w);
        for (int i = dim - 1; i >= 0; --i) {
            if (++idx[i] < order) break;
            idx[i] = 0;
        }
    }
    return q;
}

}  // namespace mlsmooth
