#ifndef SKL_QUADRATURE_HPP
#define SKL_QUADRATURE_HPP

#include <functional>
#include <vector>

// One-dimensional quadrature: Gauss rules built by Golub-Welsch, plus an
// adaptive bisecting engine for integrands with endpoint or interior
// boundary layers. Rules are cached; everything else is pure.

namespace skl::quad {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre on [-1,1] (weight 1).
const Rule& gauss_legendre(int n);

/// Gauss-Jacobi on [-1,1] for the weight (1-x)^alpha (1+x)^beta.
const Rule& gauss_jacobi(int n, double alpha, double beta);

/// Generalized Gauss-Laguerre on [0,inf) for the weight x^alpha e^{-x}.
const Rule& gauss_laguerre(int n, double alpha = 0.0);

enum class Scheme {
    gauss_legendre,
    gauss_jacobi,
    gauss_laguerre,
    adaptive_subdivision
};

/// Scheme + resolution for a 1-D integral. For gauss_jacobi, alpha is the
/// exponent of (x - lo) at the lower endpoint and beta the exponent of
/// (hi - x) at the upper endpoint; the weight is applied by the rule and f
/// supplies only the remaining smooth factor. For gauss_laguerre, alpha is
/// the x^alpha factor at lo and the weight e^{-(x-lo)} is implicit.
struct QuadratureSpec {
    Scheme scheme = Scheme::adaptive_subdivision;
    int nodes = 64;
    double rel_tol = 1e-10;
    int max_subdivisions = 400;
    double alpha = 0.0;
    double beta = 0.0;
};

struct Interval {
    double lo = 0.0;
    double hi = 1.0; // may be +inf for gauss_laguerre
};

struct QuadResult {
    double value = 0.0;
    double est_error = 0.0; // absolute
    int evaluations = 0;
};

/// Integrate f over the interval per the QuadratureSpec. Gauss schemes estimate the
/// error by node doubling; the adaptive scheme bisects until the local
/// error is below tolerance or the subdivision budget is spent. Throws
/// std::runtime_error if the tolerance cannot be met within the budget.
QuadResult integrate_1d(const std::function<double(double)>& f, Interval iv,
                        const QuadratureSpec& spec);

/// Non-throwing adaptive core: returns an honest error estimate even when
/// the budget is exhausted. Used internally by the special functions.
QuadResult adaptive_integrate(const std::function<double(double)>& f,
                              double lo, double hi, double abs_tol,
                              int max_panels = 400);

} // namespace skl::quad

#endif
