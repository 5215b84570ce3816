#include "mlsmooth/lg2d.hpp"

#include <cmath>
#include <stdexcept>

namespace mlsmooth {

namespace {

Mat2 mul(const Mat2& a, const Mat2& b) {
    Mat2 c{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return c;
}

Mat2 add(const Mat2& a, const Mat2& b) {
    Mat2 c{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) c[i][j] = a[i][j] + b[i][j];
    return c;
}

Mat2 sub(const Mat2& a, const Mat2& b) {
    Mat2 c{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) c[i][j] = a[i][j] - b[i][j];
    return c;
}

Mat2 transpose(const Mat2& a) {
    return Mat2{{{a[0][0], a[1][0]}, {a[0][1], a[1][1]}}};
}

Mat2 inverse(const Mat2& a) {
    double det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if (det == 0.0) throw std::runtime_error("lg2d: singular 2x2 matrix");
    return Mat2{{{a[1][1] / det, -a[0][1] / det},
                 {-a[1][0] / det, a[0][0] / det}}};
}

Vec2 mulv(const Mat2& a, const Vec2& v) {
    return {a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]};
}

Vec2 addv(const Vec2& a, const Vec2& b) { return {a[0] + b[0], a[1] + b[1]}; }
Vec2 subv(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }

// Lower Cholesky factor of a symmetric positive semi-definite 2x2.
Mat2 chol(const Mat2& a) {
    double l00 = std::sqrt(std::max(0.0, a[0][0]));
    double l10 = l00 > 0.0 ? a[1][0] / l00 : 0.0;
    double l11 = std::sqrt(std::max(0.0, a[1][1] - l10 * l10));
    return Mat2{{{l00, 0.0}, {l10, l11}}};
}

struct Filt2d {
    Vec2 m_filt;
    Mat2 v_filt;
    Vec2 m_pred;
    Mat2 v_pred;
};

std::vector<Filt2d> filter2d(const Lg2dParams& p,
                             const std::vector<Vec2>& obs, int up_to) {
    std::vector<Filt2d> out;
    out.reserve(up_to + 1);
    Vec2 m = p.mu0;
    Mat2 v = p.p0;
    for (int t = 0; t <= up_to; ++t) {
        Mat2 s = add(v, p.r);
        Mat2 k = mul(v, inverse(s));
        Vec2 innov = subv(obs[t], m);
        Filt2d f;
        f.m_filt = addv(m, mulv(k, innov));
        Mat2 ikh = sub(Mat2{{{1, 0}, {0, 1}}}, k);
        f.v_filt = mul(ikh, v);
        // Symmetrize against roundoff.
        f.v_filt[0][1] = f.v_filt[1][0] =
            0.5 * (f.v_filt[0][1] + f.v_filt[1][0]);
        f.m_pred = mulv(p.a, f.m_filt);
        f.v_pred = add(mul(mul(p.a, f.v_filt), transpose(p.a)), p.q);
        out.push_back(f);
        m = f.m_pred;
        v = f.v_pred;
    }
    return out;
}

}  // namespace

std::pair<std::vector<Vec2>, std::vector<Vec2>> lg2d_simulate(
    const Lg2dParams& params, int horizon, std::uint64_t seed) {
    Rng rng(seed);
    Mat2 lq = chol(params.q);
    Mat2 l0 = chol(params.p0);
    Mat2 lr = chol(params.r);
    auto noise = [&rng](const Mat2& l) -> Vec2 {
        double z0 = rng.normal(), z1 = rng.normal();
        return {l[0][0] * z0, l[1][0] * z0 + l[1][1] * z1};
    };
    std::vector<Vec2> xs, ys;
    Vec2 x = addv(params.mu0, noise(l0));
    xs.push_back(x);
    ys.push_back(addv(x, noise(lr)));
    for (int t = 1; t <= horizon; ++t) {
        x = addv(mulv(params.a, x), noise(lq));
        xs.push_back(x);
        ys.push_back(addv(x, noise(lr)));
    }
    return {xs, ys};
}

std::vector<Gauss2d> lg2d_fixed_point_moments(const Lg2dParams& params,
                                              const std::vector<Vec2>& obs,
                                              int up_to) {
    if (up_to < 0 || up_to >= static_cast<int>(obs.size())) {
        throw std::invalid_argument("lg2d_fixed_point_moments: bad horizon");
    }
    std::vector<Gauss2d> out;
    out.reserve(up_to + 1);
    // For each horizon run the RTS pass back to time 0. O(p^2) total, which
    // is fine at desk scale.
    for (int n = 0; n <= up_to; ++n) {
        auto f = filter2d(params, obs, n);
        Vec2 m = f[n].m_filt;
        Mat2 v = f[n].v_filt;
        for (int t = n - 1; t >= 0; --t) {
            Mat2 g = mul(mul(f[t].v_filt, transpose(params.a)),
                         inverse(f[t].v_pred));
            m = addv(f[t].m_filt, mulv(g, subv(m, f[t].m_pred)));
            v = add(f[t].v_filt, mul(mul(g, sub(v, f[t].v_pred)), transpose(g)));
            v[0][1] = v[1][0] = 0.5 * (v[0][1] + v[1][0]);
        }
        out.push_back(Gauss2d{m, v});
    }
    return out;
}

GridDensity2D gaussian_grid_2d(const Gauss2d& g, const Grid1D& gx,
                               const Grid1D& gy) {
    Mat2 prec = inverse(g.cov);
    GridDensity2D d(gx, gy);
    for (int i = 0; i < gx.m; ++i) {
        double dx = gx.node(i) - g.mean[0];
        for (int j = 0; j < gy.m; ++j) {
            double dy = gy.node(j) - g.mean[1];
            double q = prec[0][0] * dx * dx + 2.0 * prec[0][1] * dx * dy +
                       prec[1][1] * dy * dy;
            d.at(i, j) = std::exp(-0.5 * q);
        }
    }
    d.normalize();
    return d;
}

}  // namespace mlsmooth
