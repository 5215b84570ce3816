#include "mlsmooth/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mlsmooth {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.8378770664093454836;

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double sup_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

}  // namespace

KlObjective::KlObjective(const MonotoneTriangularMap& structure,
                         const TargetDensity& target,
                         const QuadratureRule& quad)
    : proto_(structure), target_(target), quad_(quad) {
    if (quad_.dim != structure.dim || target.dim != structure.dim) {
        throw std::invalid_argument("KlObjective: dimension mismatch");
    }
    n_params_ = static_cast<int>(pack_coefficients(proto_).size());
    precompute();
}

void KlObjective::precompute() {
    const Quad1D& gl = gl_rule(proto_.gl_order);
    tables_.resize(quad_.nodes.size());
    for (std::size_t q = 0; q < quad_.nodes.size(); ++q) {
        const std::vector<double>& x = quad_.nodes[q];
        NodeTables& t = tables_[q];
        t.x = x;
        t.a_vals.resize(proto_.dim);
        t.b_gl.resize(proto_.dim);
        t.b_diag.resize(proto_.dim);
        for (int i = 0; i < proto_.dim; ++i) {
            const MapComponent& c = proto_.comps[i];
            t.a_vals[i].resize(c.a_idx.size());
            for (std::size_t k = 0; k < c.a_idx.size(); ++k) {
                double p = 1.0;
                for (std::size_t j = 0; j < c.anc.size(); ++j) {
                    double v, dv;
                    offdiag_basis(c.a_idx[k][j], x[c.anc[j]], v, dv);
                    p *= v;
                }
                t.a_vals[i][k] = p;
            }
            double xd = x[c.diag];
            t.b_gl[i].resize(gl.x.size());
            for (std::size_t g = 0; g < gl.x.size(); ++g) {
                double tt = 0.5 * xd * (gl.x[g] + 1.0);
                t.b_gl[i][g].resize(c.b_idx.size());
                for (std::size_t k = 0; k < c.b_idx.size(); ++k) {
                    double p = 1.0;
                    for (std::size_t j = 0; j < c.anc.size(); ++j) {
                        double v, dv;
                        offdiag_basis(c.b_idx[k][j], x[c.anc[j]], v, dv);
                        p *= v;
                    }
                    double v, dv;
                    diag_basis(c.b_idx[k][c.anc.size()], tt, v, dv);
                    t.b_gl[i][g][k] = p * v;
                }
            }
            t.b_diag[i].resize(c.b_idx.size());
            for (std::size_t k = 0; k < c.b_idx.size(); ++k) {
                double p = 1.0;
                for (std::size_t j = 0; j < c.anc.size(); ++j) {
                    double v, dv;
                    offdiag_basis(c.b_idx[k][j], x[c.anc[j]], v, dv);
                    p *= v;
                }
                double v, dv;
                diag_basis(c.b_idx[k][c.anc.size()], xd, v, dv);
                t.b_diag[i][k] = p * v;
            }
        }
    }
}

double KlObjective::value_grad(std::span<const double> theta,
                               std::span<double> grad) const {
    ++evals;
    std::fill(grad.begin(), grad.end(), 0.0);
    const Quad1D& gl = gl_rule(proto_.gl_order);
    const int dim = proto_.dim;

    // Coefficient offsets per component in the packed vector.
    std::vector<std::size_t> a_off(dim), b_off(dim);
    {
        std::size_t pos = 0;
        for (int i = 0; i < dim; ++i) {
            a_off[i] = pos;
            pos += proto_.comps[i].a.size();
            b_off[i] = pos;
            pos += proto_.comps[i].b.size();
        }
    }

    double obj = 0.0;
    std::vector<double> y(dim), glog(dim), bg(gl.x.size());
    for (std::size_t q = 0; q < tables_.size(); ++q) {
        const NodeTables& t = tables_[q];
        double wq = quad_.weights[q];
        double logdet = 0.0;
        std::vector<double> bdiag(dim);

        for (int i = 0; i < dim; ++i) {
            const MapComponent& c = proto_.comps[i];
            const double* ca = theta.data() + a_off[i];
            const double* cb = theta.data() + b_off[i];
            double a = 0.0;
            for (std::size_t k = 0; k < c.a_idx.size(); ++k) {
                a += ca[k] * t.a_vals[i][k];
            }
            double xd = t.x[c.diag];
            double integral = 0.0;
            for (std::size_t g = 0; g < gl.x.size(); ++g) {
                double b = 0.0;
                const auto& row = t.b_gl[i][g];
                for (std::size_t k = 0; k < row.size(); ++k) b += cb[k] * row[k];
                bg[g] = b;
                integral += gl.w[g] * b * b;
            }
            y[i] = a + 0.5 * xd * integral;

            double bd = 0.0;
            for (std::size_t k = 0; k < t.b_diag[i].size(); ++k) {
                bd += cb[k] * t.b_diag[i][k];
            }
            bdiag[i] = bd;
            if (bd == 0.0) return kInf;
            logdet += 2.0 * std::log(std::abs(bd));
        }

        double lt = target_.log_unnorm(y);
        if (!std::isfinite(lt)) {
            if (throw_on_nonfinite) {
                throw std::runtime_error(
                    "kl_objective: non-finite target at quadrature node " +
                    std::to_string(q));
            }
            return kInf;
        }
        double log_eta = 0.0;
        for (int i = 0; i < dim; ++i) {
            log_eta += -0.5 * (t.x[i] * t.x[i] + kLog2Pi);
        }
        obj += wq * (log_eta - lt - logdet);

        target_.grad_log(y, glog);
        for (int i = 0; i < dim; ++i) {
            const MapComponent& c = proto_.comps[i];
            double* ga = grad.data() + a_off[i];
            double* gb = grad.data() + b_off[i];
            for (std::size_t k = 0; k < c.a_idx.size(); ++k) {
                ga[k] += wq * (-glog[i]) * t.a_vals[i][k];
            }
            double xd = t.x[c.diag];
            const double* cb = theta.data() + b_off[i];
            // Recompute b at GL points for this component (bg was
            // overwritten by later components).
            for (std::size_t g = 0; g < gl.x.size(); ++g) {
                double b = 0.0;
                const auto& row = t.b_gl[i][g];
                for (std::size_t k = 0; k < row.size(); ++k) b += cb[k] * row[k];
                bg[g] = b;
            }
            for (std::size_t k = 0; k < c.b_idx.size(); ++k) {
                double dint = 0.0;
                for (std::size_t g = 0; g < gl.x.size(); ++g) {
                    dint += gl.w[g] * 2.0 * bg[g] * t.b_gl[i][g][k];
                }
                double dT = 0.5 * xd * dint;
                gb[k] += wq * (-glog[i]) * dT;
                gb[k] += wq * (-2.0 * t.b_diag[i][k] / bdiag[i]);
            }
        }
    }
    return obj;
}

double kl_objective(const MonotoneTriangularMap& map,
                    const TargetDensity& target, const QuadratureRule& quad) {
    KlObjective obj(map, target, quad);
    obj.throw_on_nonfinite = true;
    std::vector<double> theta = pack_coefficients(map);
    std::vector<double> grad(theta.size());
    return obj.value_grad(theta, grad);
}

OptimReport newton_cg(const ValueGrad& f, std::vector<double>& theta,
                      const NewtonOptions& opts) {
    const int n = static_cast<int>(theta.size());
    OptimReport rep;
    std::vector<double> g(n), gp(n), gm(n), d(n), r(n), p(n), hp(n), trial(n);

    auto eval = [&](std::span<const double> th, std::span<double> grad) {
        ++rep.objective_evals;
        return f(th, grad);
    };

    double fx = eval(theta, g);
    if (!std::isfinite(fx)) {
        throw std::runtime_error("newton_cg: objective not finite at start");
    }

    for (int it = 0; it < opts.max_iter; ++it) {
        rep.iterations = it;
        rep.grad_norm = sup_norm(g);
        rep.objective = fx;
        if (rep.grad_norm < opts.tol) {
            rep.converged = true;
            return rep;
        }

        // Hessian-vector product by central differences of the gradient.
        double theta_scale = 1.0 + norm2(theta);
        auto hess_vec = [&](std::span<const double> v, std::span<double> out) {
            double nv = norm2(v);
            double h = 1e-6 * theta_scale / (nv > 0.0 ? nv : 1.0);
            for (int i = 0; i < n; ++i) trial[i] = theta[i] + h * v[i];
            double fp = eval(trial, gp);
            for (int i = 0; i < n; ++i) trial[i] = theta[i] - h * v[i];
            double fm = eval(trial, gm);
            if (!std::isfinite(fp) || !std::isfinite(fm)) return false;
            for (int i = 0; i < n; ++i) out[i] = (gp[i] - gm[i]) / (2.0 * h);
            return true;
        };

        // CG on H d = -g, truncated at negative curvature.
        std::fill(d.begin(), d.end(), 0.0);
        for (int i = 0; i < n; ++i) r[i] = -g[i];
        p = r;
        double rr = 0.0;
        for (int i = 0; i < n; ++i) rr += r[i] * r[i];
        double rr0 = rr;
        for (int cg = 0; cg < opts.cg_max_iter && rr > 0.0; ++cg) {
            if (!hess_vec(p, hp)) break;
            double php = 0.0;
            for (int i = 0; i < n; ++i) php += p[i] * hp[i];
            if (php <= 0.0) {
                if (cg == 0) d = p;  // steepest descent fallback
                break;
            }
            double alpha = rr / php;
            for (int i = 0; i < n; ++i) {
                d[i] += alpha * p[i];
                r[i] -= alpha * hp[i];
            }
            double rr_new = 0.0;
            for (int i = 0; i < n; ++i) rr_new += r[i] * r[i];
            if (rr_new <= opts.cg_rtol * opts.cg_rtol * rr0) {
                rr = rr_new;
                break;
            }
            double beta = rr_new / rr;
            rr = rr_new;
            for (int i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
        }
        if (norm2(d) == 0.0) {
            for (int i = 0; i < n; ++i) d[i] = -g[i];
        }
        double gd = 0.0;
        for (int i = 0; i < n; ++i) gd += g[i] * d[i];
        if (gd >= 0.0) {
            for (int i = 0; i < n; ++i) d[i] = -g[i];
            gd = 0.0;
            for (int i = 0; i < n; ++i) gd += g[i] * d[i];
        }

        // Backtracking Armijo search.
        double step = 1.0;
        bool accepted = false;
        for (int bt = 0; bt <= opts.bt_max; ++bt) {
            for (int i = 0; i < n; ++i) trial[i] = theta[i] + step * d[i];
            double ft = eval(trial, gp);
            if (std::isfinite(ft) && ft <= fx + 1e-4 * step * gd) {
                theta = trial;
                fx = ft;
                g = gp;
                accepted = true;
                break;
            }
            step *= opts.bt_factor;
        }
        if (!accepted) {
            rep.converged = false;
            rep.grad_norm = sup_norm(g);
            rep.objective = fx;
            return rep;
        }
    }
    rep.iterations = opts.max_iter;
    rep.grad_norm = sup_norm(g);
    rep.objective = fx;
    rep.converged = rep.grad_norm < opts.tol;
    return rep;
}

std::pair<MonotoneTriangularMap, OptimReport> optimize_map(
    const MonotoneTriangularMap& initial, const TargetDensity& target,
    const QuadratureRule& quad, double tol, NewtonOptions opts) {
    opts.tol = tol;
    KlObjective obj(initial, target, quad);
    std::vector<double> theta = pack_coefficients(initial);
    OptimReport rep = newton_cg(
        [&obj](std::span<const double> th, std::span<double> gr) {
            return obj.value_grad(th, gr);
        },
        theta, opts);
    MonotoneTriangularMap out = initial;
    unpack_coefficients(theta, out);
    return {std::move(out), rep};
}

ComposeResult compose_and_reapproximate(const MonotoneTriangularMap& outer,
                                        const MonotoneTriangularMap& inner,
                                        const Quad1D& quad,
                                        double warn_residual) {
    if (outer.dim != 1 || inner.dim != 1) {
        throw std::invalid_argument(
            "compose_and_reapproximate: expects 1D maps");
    }
    // Composition targets at the quadrature nodes.
    std::vector<double> y(quad.x.size());
    for (std::size_t q = 0; q < quad.x.size(); ++q) {
        double xin[1] = {quad.x[q]};
        double mid = eval_component(inner, 0, xin);
        double xmid[1] = {mid};
        y[q] = eval_component(outer, 0, xmid);
    }

    MonotoneTriangularMap fit = outer;  // same basis family and layout
    const MapComponent& proto = fit.comps[0];
    const Quad1D& gl = gl_rule(fit.gl_order);
    const std::size_t na = proto.a.size();
    const std::size_t nb = proto.b.size();

    // Basis tables at the fit nodes.
    std::vector<std::vector<std::vector<double>>> b_gl(quad.x.size());
    for (std::size_t q = 0; q < quad.x.size(); ++q) {
        b_gl[q].resize(gl.x.size());
        for (std::size_t g = 0; g < gl.x.size(); ++g) {
            double t = 0.5 * quad.x[q] * (gl.x[g] + 1.0);
            b_gl[q][g].resize(nb);
            for (std::size_t k = 0; k < nb; ++k) {
                double v, dv;
                diag_basis(proto.b_idx[k][0], t, v, dv);
                b_gl[q][g][k] = v;
            }
        }
    }

    auto value_grad = [&](std::span<const double> theta,
                          std::span<double> grad) {
        std::fill(grad.begin(), grad.end(), 0.0);
        const double* ca = theta.data();
        const double* cb = theta.data() + na;
        double obj = 0.0;
        std::vector<double> bg(gl.x.size());
        for (std::size_t q = 0; q < quad.x.size(); ++q) {
            double xq = quad.x[q];
            double integral = 0.0;
            for (std::size_t g = 0; g < gl.x.size(); ++g) {
                double b = 0.0;
                for (std::size_t k = 0; k < nb; ++k) {
                    b += cb[k] * b_gl[q][g][k];
                }
                bg[g] = b;
                integral += gl.w[g] * b * b;
            }
            double m = ca[0] + 0.5 * xq * integral;
            double resid = m - y[q];
            double wq = quad.w[q];
            obj += wq * resid * resid;
            grad[0] += wq * 2.0 * resid;
            for (std::size_t k = 0; k < nb; ++k) {
                double dint = 0.0;
                for (std::size_t g = 0; g < gl.x.size(); ++g) {
                    dint += gl.w[g] * 2.0 * bg[g] * b_gl[q][g][k];
                }
                grad[na + k] += wq * 2.0 * resid * 0.5 * xq * dint;
            }
        }
        return obj;
    };

    // Warm start from the outer map (near-identity inner gives a nearby
    // optimum).
    std::vector<double> theta = pack_coefficients(fit);
    NewtonOptions opts;
    opts.tol = 1e-10;
    opts.max_iter = 100;
    ComposeResult res;
    res.report = newton_cg(value_grad, theta, opts);
    unpack_coefficients(theta, fit);
    res.map = std::move(fit);
    res.residual = std::sqrt(std::max(0.0, res.report.objective));
    (void)warn_residual;
    return res;
}

}  // namespace mlsmooth
