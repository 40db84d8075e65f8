#ifndef SKL_SOLVERS_HPP
#define SKL_SOLVERS_HPP

#include "skl/datum.hpp"
#include "skl/kernels.hpp"
#include "skl/quadrature.hpp"

#include <string>
#include <vector>

// Cauchy-problem solvers built on the reduced radial forms: one singular
// 1-D integral per evaluation, with the even-dimension wave case raising
// the 2-D integral through numerically applied first-order operators.

namespace skl::solvers {

enum class Problem { heat, wave };

struct SolveRequest {
    Problem problem = Problem::heat;
    int n = 2;
    double k = 0.5;
    double t = 1.0;
    std::vector<double> X;
    InitialDatum datum;
    quad::QuadratureSpec quad;
};

struct SolveDiagnostics {
    int nodes_used = 0;
    std::string branch;
    double inner_step = 0.0; // x-stencil step of the even-n operator chain
};

struct SolveResult {
    double value = 0.0;
    double est_error = 0.0;
    SolveDiagnostics diagnostics;
};

/// u(t,X) for the singular heat problem, by generalized Gauss-Laguerre in
/// z = r^2/4t with an adaptive fallback on [0,40] plus a tail estimate.
SolveResult solve_heat(const SolveRequest& req);

/// Full-space cross-check of the heat solution (n <= 3): radial quadrature
/// of the kernel against a forced-numeric spherical mean.
SolveResult solve_heat_fullspace(const SolveRequest& req);

/// w(t,X) for odd n in {3,5,7}: adaptive Gauss-Legendre on z in (0,1).
SolveResult solve_wave_odd(const SolveRequest& req);

/// w(t,X) for n = 2: Gauss-Jacobi for the (1-z)^{-1/2} endpoint plus
/// subdivision against the logarithmic behavior at z -> 0.
SolveResult solve_wave_2d(const SolveRequest& req);

/// w(t,X) for even n in {4,6,8}: smooth inner integral I(x) on a local
/// stencil around x = t^2, then (n-2)/2 operators f -> (x f' + a f)/a.
SolveResult solve_wave_even(const SolveRequest& req);

/// Parity dispatch.
SolveResult solve_wave(const SolveRequest& req);
SolveResult solve(const SolveRequest& req);

} // namespace skl::solvers

#endif
