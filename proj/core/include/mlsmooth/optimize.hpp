#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "mlsmooth/quadrature.hpp"
#include "mlsmooth/transport.hpp"

namespace mlsmooth {

/// Unnormalized target log-density with analytic gradient.
struct TargetDensity {
    int dim = 1;
    std::function<double(std::span<const double>)> log_unnorm;
    std::function<void(std::span<const double>, std::span<double>)> grad_log;
};

struct NewtonOptions {
    double tol = 1e-4;       // sup-norm gradient tolerance
    int max_iter = 200;
    int cg_max_iter = 50;
    double cg_rtol = 1e-6;
    double bt_factor = 0.5;  // backtracking line-search factor
    int bt_max = 30;
};

struct OptimReport {
    bool converged = false;
    int iterations = 0;
    double grad_norm = 0.0;
    double objective = 0.0;
    std::uint64_t objective_evals = 0;  // value-and-gradient evaluations
};

/// f(theta, grad_out) -> value. Returns +inf for inadmissible points.
using ValueGrad =
    std::function<double(std::span<const double>, std::span<double>)>;

/// Truncated Newton: CG inner solves with Hessian-vector products taken by
/// central differences of the analytic gradient, globalized by a
/// backtracking (Armijo) line search.
OptimReport newton_cg(const ValueGrad& f, std::vector<double>& theta,
                      const NewtonOptions& opts);

/// Quadrature approximation of KL(T_# eta || target) up to the target's
/// normalizing constant:
///   sum_q w_q [ log eta(x_q) - log target(T(x_q)) - log det grad T(x_q) ].
/// The gradient with respect to all map coefficients is analytic.
class KlObjective {
  public:
    KlObjective(const MonotoneTriangularMap& structure,
                const TargetDensity& target, const QuadratureRule& quad);

    int n_params() const { return n_params_; }
    /// Value and gradient at packed coefficients theta. Non-finite target
    /// values yield +inf (throwing instead when throw_on_nonfinite is set,
    /// naming the offending node).
    double value_grad(std::span<const double> theta,
                      std::span<double> grad) const;

    bool throw_on_nonfinite = false;
    mutable std::uint64_t evals = 0;

    struct NodeTables {
        // Per component i: a-basis values, b-basis values at the
        // Gauss-Legendre points of [0, x_diag], and at the diagonal point.
        std::vector<std::vector<double>> a_vals;             // [i][k]
        std::vector<std::vector<std::vector<double>>> b_gl;  // [i][g][k]
        std::vector<std::vector<double>> b_diag;             // [i][k]
        std::vector<double> x;                               // node
    };

  private:
    MonotoneTriangularMap proto_;
    TargetDensity target_;
    QuadratureRule quad_;
    int n_params_ = 0;
    // Precomputed basis tables; quadrature nodes are fixed so every basis
    // value involved is a constant of the problem.
    std::vector<NodeTables> tables_;
    void precompute();
};

double kl_objective(const MonotoneTriangularMap& map,
                    const TargetDensity& target, const QuadratureRule& quad);

/// Newton fit of the map coefficients to the target; returns the optimized
/// map and a convergence report (never throws on non-convergence).
std::pair<MonotoneTriangularMap, OptimReport> optimize_map(
    const MonotoneTriangularMap& initial, const TargetDensity& target,
    const QuadratureRule& quad, double tol, NewtonOptions opts = {});

struct ComposeResult {
    MonotoneTriangularMap map;
    double residual = 0.0;  // quadrature-weighted RMS fit error
    OptimReport report;
};

/// Least-squares reapproximation of outer(inner(x)) by a single map from
/// the same basis family, under the standard normal base measure.
ComposeResult compose_and_reapproximate(const MonotoneTriangularMap& outer,
                                        const MonotoneTriangularMap& inner,
                                        const Quad1D& quad,
                                        double warn_residual = 1e-2);

}  // namespace mlsmooth
