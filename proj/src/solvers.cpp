#include "skl/solvers.hpp"
#include "skl/specfun.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace skl::solvers {

namespace sf = skl::specfun;
namespace kn = skl::kernels;

namespace {

constexpr double pi = std::numbers::pi;

void check_request(const SolveRequest& req) {
    if (req.n < 2 || req.n > 8)
        throw std::domain_error("solve: n must be in [2,8]");
    if (!(req.t > 0.0)) throw std::domain_error("solve: t must be positive");
    if (static_cast<int>(req.X.size()) != req.n)
        throw std::invalid_argument("solve: X dimension must equal n");
    int dd = req.datum.dim();
    if (dd != 0 && dd != req.n)
        throw std::invalid_argument("solve: datum dimension must equal n");
}

} // namespace

// ---------------------------------------------------------------------------
// heat

SolveResult solve_heat(const SolveRequest& req) {
    check_request(req);
    if (!(req.k > 0.0)) throw std::domain_error("solve_heat: k must be positive");

    const double c = 0.5 * req.n;
    auto mean = [&](double r) {
        return spherical_mean(req.datum, req.X, r, req.n, req.quad);
    };
    // integrand against the e^{-z} weight
    auto g = [&](double z) {
        if (z <= 0.0) return 0.0;
        return sf::hypU(req.k, c, z).value * std::pow(z, c - 1.0) *
               mean(std::sqrt(4.0 * req.t * z));
    };

    SolveResult out;
    // Gamma(k+1): the unit-mass propagator normalization (the Gamma(k)
    // prefactor of the kernel itself integrates to 1/k, not 1)
    const double pref = sf::gamma_fn(req.k + 1.0) / (2.0 * std::pow(pi, c));

    auto laguerre_sum = [&](int nn) {
        const quad::Rule& rule = quad::gauss_laguerre(nn, 0.0);
        double s = 0.0;
        for (size_t i = 0; i < rule.nodes.size(); ++i)
            s += rule.weights[i] * g(rule.nodes[i]);
        return s;
    };
    int base = std::max(req.quad.nodes, 32);
    double q1 = laguerre_sum(base);
    double q2 = laguerre_sum(2 * base);
    double est = std::abs(q2 - q1);
    double scale = std::max(std::abs(q2), 1e-280);
    if (est <= req.quad.rel_tol * scale) {
        out.value = pref * q2;
        out.est_error = pref * est;
        out.diagnostics.nodes_used = 3 * base;
        out.diagnostics.branch = "gauss_laguerre";
        return out;
    }
    // adaptive fallback: weight written out explicitly on [0, 40], the
    // remainder estimated by a shifted Laguerre rule
    quad::QuadResult body = quad::adaptive_integrate(
        [&](double z) { return std::exp(-z) * g(z); }, 0.0, 40.0,
        req.quad.rel_tol * scale, req.quad.max_subdivisions);
    const quad::Rule& tail_rule = quad::gauss_laguerre(15, 0.0);
    double tail = 0.0;
    for (size_t i = 0; i < tail_rule.nodes.size(); ++i)
        tail += tail_rule.weights[i] * g(40.0 + tail_rule.nodes[i]);
    tail *= std::exp(-40.0);
    out.value = pref * (body.value + tail);
    out.est_error = pref * (body.est_error + std::abs(tail) * 1e-6);
    out.diagnostics.nodes_used = 3 * base + body.evaluations + 15;
    out.diagnostics.branch = "adaptive";
    return out;
}

SolveResult solve_heat_fullspace(const SolveRequest& req) {
    check_request(req);
    if (req.n > 3)
        throw std::domain_error("solve_heat_fullspace: n <= 3 only");
    if (!(req.k > 0.0)) throw std::domain_error("solve_heat: k must be positive");

    // generic numeric mean: independent of the closed-form radial path
    auto mean = [&](double r) {
        return spherical_mean_numeric(req.datum, req.X, r, req.n, req.quad);
    };
    // req.k * H is the unit-mass propagator the radial formula integrates
    auto integrand = [&](double r) {
        if (r <= 0.0) return 0.0;
        kn::KernelQuery q{req.n, req.k, req.t, r};
        return req.k * kn::heat_kernel(q) * std::pow(r, req.n - 1.0) * mean(r);
    };
    double extent = 0.0;
    if (req.datum.is_radial()) {
        const auto& C = req.datum.center();
        double d = 0.0;
        for (size_t i = 0; i < req.X.size(); ++i) {
            double di = req.X[i] - (C.empty() ? 0.0 : C[i]);
            d += di * di;
        }
        extent = std::sqrt(d) + 12.0; // generous span for the preset profiles
    } else if (auto* gd = std::get_if<GridDatum>(&req.datum.kind())) {
        for (int i = 0; i < req.n; ++i) {
            double lo = gd->axes[i].front() - req.X[i];
            double hi = gd->axes[i].back() - req.X[i];
            extent += std::max(lo * lo, hi * hi);
        }
        extent = std::sqrt(extent);
    }
    const double rmax = std::sqrt(168.0 * req.t) + extent;
    quad::QuadResult q = quad::adaptive_integrate(
        integrand, 0.0, rmax, req.quad.rel_tol, req.quad.max_subdivisions);
    SolveResult out;
    out.value = q.value;
    out.est_error = q.est_error;
    out.diagnostics.nodes_used = q.evaluations;
    out.diagnostics.branch = "fullspace_radial";
    return out;
}

// ---------------------------------------------------------------------------
// wave

SolveResult solve_wave_odd(const SolveRequest& req) {
    check_request(req);
    if (req.n % 2 == 0 || req.n < 3 || req.n > 7)
        throw std::domain_error("solve_wave_odd: n must be 3, 5 or 7");
    kn::NormalizationTable norms(req.k);
    const double Cn = norms.odd_C(req.n);
    const double a = 0.5 * (1.0 + req.k);
    const double b = 1.0 - 0.5 * req.k;
    const double cc = 0.5 * (req.n + 1.0);
    auto mean = [&](double r) {
        return spherical_mean(req.datum, req.X, r, req.n, req.quad);
    };
    auto integrand = [&](double z) {
        if (z <= 0.0 || z >= 1.0) return 0.0;
        sf::EvalResult F = sf::hyp2f1_cm(a, b, cc, 1.0 - z, z);
        return F.value * mean(req.t * std::sqrt(z));
    };
    double probe = std::abs(mean(0.5 * req.t)) + 1e-12;
    quad::QuadResult q = quad::adaptive_integrate(
        integrand, 0.0, 1.0, req.quad.rel_tol * probe, req.quad.max_subdivisions);
    SolveResult out;
    out.value = Cn * 0.5 * req.t * q.value;
    out.est_error = std::abs(Cn) * 0.5 * req.t * q.est_error;
    out.diagnostics.nodes_used = q.evaluations;
    out.diagnostics.branch = "odd_reduced";
    return out;
}

namespace {

// shared by the 2-D solver and the even-n inner function:
//   J(tau) = (tau/2) Int_0^1 (1-z)^{-1/2} F((1-k)/2, k/2; 1/2; 1-z) g#(tau sqrt z) dz
// without any normalization constant. fixed_nodes selects deterministic
// rules (needed when J is differentiated in tau^2).
double wave_plane_integral(const SolveRequest& req, double tau,
                           bool fixed_nodes, double* est_out, int* evals_out) {
    const double a = 0.5 * (1.0 - req.k);
    const double b = 0.5 * req.k;
    auto mean = [&](double r) {
        return spherical_mean(req.datum, req.X, r, req.n, req.quad);
    };
    auto Fpart = [&](double z) {
        sf::EvalResult F = sf::hyp2f1_cm(a, b, 0.5, 1.0 - z, z);
        return F.value;
    };
    int evals = 0;
    double est = 0.0;

    // [split,1]: Gauss-Jacobi absorbs the (1-z)^{-1/2} endpoint factor
    const double split = 0.125;
    auto jacobi_part = [&](int nn) {
        const quad::Rule& rule = quad::gauss_jacobi(nn, -0.5, 0.0);
        const double h = 0.5 * (1.0 - split);
        const double mid = 0.5 * (1.0 + split);
        double s = 0.0;
        for (size_t i = 0; i < rule.nodes.size(); ++i) {
            double z = mid + h * rule.nodes[i];
            s += rule.weights[i] * Fpart(z) * mean(tau * std::sqrt(z));
        }
        evals += nn;
        return s * std::pow(h, 0.5); // (1-z) = h (1-x)
    };
    double J1;
    if (fixed_nodes) {
        J1 = jacobi_part(64);
    } else {
        double q1 = jacobi_part(48);
        double q2 = jacobi_part(96);
        est += std::abs(q2 - q1);
        J1 = q2;
    }

    // [0,split]: logarithmic behavior of F at z -> 0
    auto body = [&](double z) {
        if (z <= 0.0) return 0.0;
        return std::pow(1.0 - z, -0.5) * Fpart(z) * mean(tau * std::sqrt(z));
    };
    double J0 = 0.0;
    if (fixed_nodes) {
        // fixed geometric panels toward 0: deterministic and smooth in tau
        const quad::Rule& gl = quad::gauss_legendre(12);
        double hi = split;
        for (int p = 0; p < 40; ++p) {
            double lo = hi * 0.5;
            if (p == 39) lo = 0.0;
            const double hh = 0.5 * (hi - lo), mm = 0.5 * (hi + lo);
            for (size_t i = 0; i < gl.nodes.size(); ++i)
                J0 += hh * gl.weights[i] * body(mm + hh * gl.nodes[i]);
            evals += 12;
            hi = lo;
        }
    } else {
        double probe = std::abs(mean(0.0)) + std::abs(mean(0.3 * tau)) + 1e-12;
        quad::QuadResult q = quad::adaptive_integrate(
            body, 0.0, split, req.quad.rel_tol * probe, req.quad.max_subdivisions);
        J0 = q.value;
        est += q.est_error;
        evals += q.evaluations;
    }
    if (est_out) *est_out += 0.5 * tau * est;
    if (evals_out) *evals_out += evals;
    return 0.5 * tau * (J0 + J1);
}

} // namespace

SolveResult solve_wave_2d(const SolveRequest& req) {
    check_request(req);
    if (req.n != 2) throw std::domain_error("solve_wave_2d: n must be 2");
    SolveResult out;
    out.diagnostics.branch = "plane_reduced";
    double est = 0.0;
    int evals = 0;
    double J = wave_plane_integral(req, req.t, false, &est, &evals);
    const double c2 = kn::wave_c2(req.k);
    out.value = c2 * J;
    out.est_error = c2 * est;
    out.diagnostics.nodes_used = evals;
    return out;
}

SolveResult solve_wave_even(const SolveRequest& req) {
    check_request(req);
    if (req.n % 2 == 1 || req.n < 4 || req.n > 8)
        throw std::domain_error("solve_wave_even: n must be 4, 6 or 8");
    kn::NormalizationTable norms(req.k);
    const double kappa = norms.even_solver_c(req.n);

    int evals = 0;
    auto inner = [&](double x) {
        return wave_plane_integral(req, std::sqrt(x), true, nullptr, &evals);
    };

    // chain of first-order operators f -> (x f' + a f)/a, a = 1/2, 3/2, ...
    const double eta = 1e-2;
    std::function<double(int, double)> level = [&](int lvl, double x) -> double {
        if (lvl == 0) return inner(x);
        const double a = lvl - 0.5;
        const double h = eta * x;
        auto f = [&](double xx) { return level(lvl - 1, xx); };
        const double d1 = (f(x + h) - f(x - h)) / (2.0 * h);
        const double d2 = (f(x + 0.5 * h) - f(x - 0.5 * h)) / h;
        const double deriv = (4.0 * d2 - d1) / 3.0;
        return (x * deriv + a * f(x)) / a;
    };
    const int nops = (req.n - 2) / 2;
    const double x = req.t * req.t;
    double val = level(nops, x);

    SolveResult out;
    out.value = kappa * val;
    out.diagnostics.nodes_used = evals;
    out.diagnostics.branch = "even_operator_chain";
    out.diagnostics.inner_step = eta * x;
    // error gauge: repeat the top level with a coarser step
    {
        const double h2 = 2.0 * eta * x;
        auto f = [&](double xx) { return level(nops - 1, xx); };
        const double a = nops - 0.5;
        const double d1 = (f(x + h2) - f(x - h2)) / (2.0 * h2);
        const double d2 = (f(x + 0.5 * h2) - f(x - 0.5 * h2)) / h2;
        double alt = (x * (4.0 * d2 - d1) / 3.0 + a * f(x)) / a;
        out.est_error = std::abs(kappa) * std::abs(alt - val) / 15.0 +
                        std::abs(out.value) * 1e-12;
    }
    return out;
}

SolveResult solve_wave(const SolveRequest& req) {
    if (req.n == 2) return solve_wave_2d(req);
    if (req.n % 2 == 1) return solve_wave_odd(req);
    return solve_wave_even(req);
}

SolveResult solve(const SolveRequest& req) {
    return req.problem == Problem::heat ? solve_heat(req) : solve_wave(req);
}

} // namespace skl::solvers
