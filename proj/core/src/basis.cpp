#include "mlsmooth/basis.hpp"

#include <cmath>

namespace mlsmooth {

double hermite_he(int k, double x) {
    double h0 = 1.0;
    if (k == 0) return h0;
    double h1 = x;
    for (int i = 1; i < k; ++i) {
        double h2 = x * h1 - i * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

void hermite_fn(int k, double x, double& val, double& dval) {
    double he = hermite_he(k, x);
    double dhe = k > 0 ? k * hermite_he(k - 1, x) : 0.0;
    double damp = std::exp(-0.25 * x * x);
    val = he * damp;
    dval = (dhe - 0.5 * x * he) * damp;
}

void offdiag_basis(int k, double x, double& val, double& dval) {
    if (k == 0) {
        val = 1.0;
        dval = 0.0;
    } else if (k == 1) {
        val = x;
        dval = 1.0;
    } else {
        hermite_fn(k - 2, x, val, dval);
    }
}

void diag_basis(int k, double x, double& val, double& dval) {
    if (k == 0) {
        val = 1.0;
        dval = 0.0;
    } else {
        hermite_fn(k - 1, x, val, dval);
    }
}

}  // namespace mlsmooth
