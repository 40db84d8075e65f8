#include "skl/datum.hpp"
#include "skl/kernels.hpp"
#include "skl/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace skl::solvers {

namespace {

constexpr double pi = std::numbers::pi;

double dist(std::span<const double> a, std::span<const double> b) {
    if (b.empty()) { // empty center means the origin
        double s = 0.0;
        for (double v : a) s += v * v;
        return std::sqrt(s);
    }
    if (a.size() != b.size())
        throw std::invalid_argument("datum: dimension mismatch");
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double bump_profile(const BumpDatum& b, double s) {
    double u = s / b.radius;
    if (u >= 1.0) return 0.0;
    return b.amplitude * std::exp(1.0 - 1.0 / (1.0 - u * u));
}

double poly_profile(const RadialPolyDatum& p, double s) {
    double s2 = s * s, pw = 1.0, acc = 0.0;
    for (double c : p.coeffs) {
        acc += c * pw;
        pw *= s2;
    }
    return acc;
}

// Int_{S^{n-1}} e^{lam <e,w>} dw = (2 pi)^{n/2} lam^{(2-n)/2} I_{(n-2)/2}(lam)
double sphere_exp_integral(int n, double lam) {
    const double nu = 0.5 * n - 1.0;
    if (lam < 1e-4) {
        // series: omega_{n-1} (1 + lam^2/(2n) + lam^4/(8 n (n+2)) + ...)
        double l2 = lam * lam;
        return kernels::sphere_surface(n) *
               (1.0 + l2 / (2.0 * n) + l2 * l2 / (8.0 * n * (n + 2.0)));
    }
    double log_pref = 0.5 * n * std::log(2.0 * pi) - nu * std::log(lam);
    if (lam <= 600.0) {
        double I = std::cyl_bessel_i(nu, lam);
        return std::exp(log_pref) * I;
    }
    // log-space asymptotic of I_nu for very large arguments
    double mu = 4.0 * nu * nu;
    double corr = 1.0 - (mu - 1.0) / (8.0 * lam) +
                  (mu - 1.0) * (mu - 9.0) / (128.0 * lam * lam) -
                  (mu - 1.0) * (mu - 9.0) * (mu - 25.0) /
                      (3072.0 * lam * lam * lam);
    double logI = lam - 0.5 * std::log(2.0 * pi * lam) + std::log(corr);
    return std::exp(log_pref + logI);
}

} // namespace

// ---------------------------------------------------------------------------
// GridDatum

GridDatum GridDatum::from_samples(const std::vector<std::vector<double>>& points,
                                  const std::vector<double>& values,
                                  int interp_order) {
    if (points.empty() || points.size() != values.size())
        throw std::invalid_argument("grid datum: empty or mismatched samples");
    if (interp_order != 1 && interp_order != 3)
        throw std::invalid_argument("grid datum: interpolation order must be 1 or 3");
    const size_t n = points.front().size();
    GridDatum g;
    g.interp_order = interp_order;
    g.axes.resize(n);
    for (size_t d = 0; d < n; ++d) {
        std::vector<double> ax;
        for (const auto& p : points) ax.push_back(p.at(d));
        std::sort(ax.begin(), ax.end());
        ax.erase(std::unique(ax.begin(), ax.end()), ax.end());
        g.axes[d] = std::move(ax);
    }
    size_t total = 1;
    for (const auto& ax : g.axes) total *= ax.size();
    if (total != points.size())
        throw std::invalid_argument(
            "grid datum: samples do not fill a tensor lattice");
    g.values.assign(total, 0.0);
    std::vector<char> seen(total, 0);
    for (size_t i = 0; i < points.size(); ++i) {
        size_t idx = 0;
        for (size_t d = 0; d < n; ++d) {
            auto& ax = g.axes[d];
            auto it = std::lower_bound(ax.begin(), ax.end(), points[i][d]);
            idx = idx * ax.size() + size_t(it - ax.begin());
        }
        if (seen[idx])
            throw std::invalid_argument("grid datum: duplicate sample point");
        seen[idx] = 1;
        g.values[idx] = values[i];
    }
    return g;
}

GridDatum GridDatum::from_csv(const std::string& path, int interp_order) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("grid datum: cannot open " + path);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("grid datum: empty file " + path);
    size_t ncols = 1 + std::count(line.begin(), line.end(), ',');
    if (ncols < 2)
        throw std::runtime_error("grid datum: header must be x1,...,xn,value");
    std::vector<std::vector<double>> pts;
    std::vector<double> vals;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != ncols)
            throw std::runtime_error("grid datum: ragged row in " + path);
        vals.push_back(row.back());
        row.pop_back();
        pts.push_back(std::move(row));
    }
    return from_samples(pts, vals, interp_order);
}

namespace {

// 1-D Lagrange interpolation through m points of the axis starting at i0
double lagrange_1d(const std::vector<double>& ax, size_t i0, size_t m, double x,
                   const std::function<double(size_t)>& f) {
    double acc = 0.0;
    for (size_t j = 0; j < m; ++j) {
        double w = 1.0;
        for (size_t l = 0; l < m; ++l) {
            if (l == j) continue;
            w *= (x - ax[i0 + l]) / (ax[i0 + j] - ax[i0 + l]);
        }
        acc += w * f(i0 + j);
    }
    return acc;
}

} // namespace

double GridDatum::eval(std::span<const double> y) const {
    const size_t n = axes.size();
    if (y.size() != n)
        throw std::invalid_argument("grid datum: dimension mismatch");
    const size_t m = (interp_order == 3) ? 4 : 2;
    std::vector<size_t> base(n);
    for (size_t d = 0; d < n; ++d) {
        const auto& ax = axes[d];
        if (y[d] < ax.front() || y[d] > ax.back())
            throw std::domain_error(
                "grid datum: evaluation outside the sampled range");
        if (ax.size() < m)
            throw std::domain_error("grid datum: axis too short for the order");
        size_t hi = size_t(std::lower_bound(ax.begin(), ax.end(), y[d]) -
                           ax.begin());
        size_t lo = (hi == 0) ? 0 : hi - 1;
        size_t start = (lo >= (m - 1) / 2) ? lo - (m - 1) / 2 : 0;
        start = std::min(start, ax.size() - m);
        base[d] = start;
    }
    std::function<double(size_t, size_t)> rec =
        [&](size_t d, size_t flat) -> double {
        const auto& ax = axes[d];
        if (d + 1 == n) {
            return lagrange_1d(ax, base[d], m, y[d], [&](size_t i) {
                return values[flat * ax.size() + i];
            });
        }
        return lagrange_1d(ax, base[d], m, y[d], [&](size_t i) {
            return rec(d + 1, flat * ax.size() + i);
        });
    };
    return rec(0, 0);
}

// ---------------------------------------------------------------------------
// InitialDatum

InitialDatum::InitialDatum(GaussianDatum g, bool exact)
    : kind_(std::move(g)), exact_mean_(exact) {
    const auto& gd = std::get<GaussianDatum>(kind_);
    if (!(gd.width > 0.0))
        throw std::invalid_argument("gaussian datum: width must be positive");
}

InitialDatum::InitialDatum(BumpDatum b) : kind_(std::move(b)) {
    const auto& bd = std::get<BumpDatum>(kind_);
    if (!(bd.radius > 0.0))
        throw std::invalid_argument("bump datum: radius must be positive");
}

InitialDatum::InitialDatum(RadialPolyDatum p) : kind_(std::move(p)) {}

InitialDatum::InitialDatum(GridDatum g) : kind_(std::move(g)) {
    for (double v : std::get<GridDatum>(kind_).values)
        if (!std::isfinite(v))
            throw std::invalid_argument("grid datum: non-finite sample value");
}

int InitialDatum::dim() const {
    if (auto* g = std::get_if<GaussianDatum>(&kind_))
        return static_cast<int>(g->center.size());
    if (auto* b = std::get_if<BumpDatum>(&kind_))
        return static_cast<int>(b->center.size());
    if (auto* p = std::get_if<RadialPolyDatum>(&kind_))
        return static_cast<int>(p->center.size());
    if (auto* g = std::get_if<GridDatum>(&kind_)) return g->dim();
    return 0;
}

bool InitialDatum::is_radial() const {
    return !std::holds_alternative<GridDatum>(kind_) &&
           !std::holds_alternative<std::monostate>(kind_);
}

const std::vector<double>& InitialDatum::center() const {
    if (auto* g = std::get_if<GaussianDatum>(&kind_)) return g->center;
    if (auto* b = std::get_if<BumpDatum>(&kind_)) return b->center;
    if (auto* p = std::get_if<RadialPolyDatum>(&kind_)) return p->center;
    throw std::logic_error("datum: no center for this kind");
}

double InitialDatum::profile(double s) const {
    if (auto* g = std::get_if<GaussianDatum>(&kind_))
        return g->amplitude * std::exp(-0.5 * s * s / (g->width * g->width));
    if (auto* b = std::get_if<BumpDatum>(&kind_)) return bump_profile(*b, s);
    if (auto* p = std::get_if<RadialPolyDatum>(&kind_))
        return poly_profile(*p, s);
    throw std::logic_error("datum: profile undefined for this kind");
}

double InitialDatum::operator()(std::span<const double> y) const {
    if (auto* g = std::get_if<GridDatum>(&kind_)) return g->eval(y);
    if (std::holds_alternative<std::monostate>(kind_))
        throw std::logic_error("datum: empty");
    return profile(dist(y, center()));
}

// ---------------------------------------------------------------------------
// spherical means

namespace {

// mean of a radial profile about a center at distance d from X:
//   f^#(r) = omega_{n-2} Int_0^pi phi(sqrt(d^2+r^2-2 d r cos th)) sin^{n-2}th dth
double radial_mean_quadrature(const InitialDatum& datum, double d, double r,
                              int n, const quad::QuadratureSpec& spec) {
    auto chord = [&](double u) {
        double s2 = d * d + r * r - 2.0 * d * r * u;
        return datum.profile(std::sqrt(std::max(s2, 0.0)));
    };
    const bool is_bump = std::holds_alternative<BumpDatum>(datum.kind());
    if (n == 2) {
        // periodic trapezoid on the circle (spectrally accurate)
        auto trap = [&](int m) {
            double h = pi / m, s = 0.5 * (chord(1.0) + chord(-1.0));
            for (int i = 1; i < m; ++i) s += chord(std::cos(i * h));
            return 2.0 * h * s;
        };
        if (!is_bump) return trap(std::max(spec.nodes, 64));
        quad::QuadResult q = quad::adaptive_integrate(
            [&](double th) { return chord(std::cos(th)); }, 0.0, pi,
            spec.rel_tol *
                std::max(std::abs(datum.profile(std::abs(d - r))), 1e-12),
            spec.max_subdivisions);
        return 2.0 * q.value;
    }
    const double lam = 0.5 * (n - 3.0);
    const double omega_sub = kernels::sphere_surface(n - 1);
    if (is_bump) {
        // the cutoff makes the chord function only finitely smooth at an
        // interior point; keep the (1-u^2)^lam weight explicit and subdivide
        quad::QuadResult q = quad::adaptive_integrate(
            [&](double u) {
                return std::pow(std::max(1.0 - u * u, 0.0), lam) * chord(u);
            },
            -1.0, 1.0,
            spec.rel_tol *
                std::max(std::abs(datum.profile(std::abs(d - r))), 1e-12),
            spec.max_subdivisions);
        return omega_sub * q.value;
    }
    const quad::Rule& rule = quad::gauss_jacobi(std::max(spec.nodes, 24), lam, lam);
    double s = 0.0;
    for (size_t i = 0; i < rule.nodes.size(); ++i)
        s += rule.weights[i] * chord(rule.nodes[i]);
    return omega_sub * s;
}

// product rule over S^{n-1}: Gauss-Legendre in each polar angle, periodic
// trapezoid in the azimuth
double product_sphere_mean(const InitialDatum& datum, std::span<const double> X,
                           double r, int n, const quad::QuadratureSpec& spec) {
    if (n == 2) {
        int m = std::max(spec.nodes, 32);
        double h = 2.0 * pi / m, s = 0.0;
        std::vector<double> y(2);
        for (int i = 0; i < m; ++i) {
            double phi = i * h;
            y[0] = X[0] + r * std::cos(phi);
            y[1] = X[1] + r * std::sin(phi);
            s += datum(y);
        }
        return s * h;
    }
    const int npolar = std::max(spec.nodes / 2, 16);
    const int naz = std::max(spec.nodes, 32);
    const quad::Rule& gl = quad::gauss_legendre(npolar);
    std::vector<double> y(n);
    std::vector<double> dircos(std::max(n - 2, 1), 0.0);
    std::function<double(int, double)> sweep = [&](int level,
                                                   double sinprod) -> double {
        if (level == n - 2) {
            double h = 2.0 * pi / naz, s = 0.0;
            for (int i = 0; i < naz; ++i) {
                double phi = i * h;
                for (int d = 0; d < n - 2; ++d) y[d] = X[d] + r * dircos[d];
                y[n - 2] = X[n - 2] + r * sinprod * std::cos(phi);
                y[n - 1] = X[n - 1] + r * sinprod * std::sin(phi);
                s += datum(y);
            }
            return s * h;
        }
        double acc = 0.0;
        for (size_t i = 0; i < gl.nodes.size(); ++i) {
            double th = 0.5 * pi * (gl.nodes[i] + 1.0); // [0, pi]
            double wt = 0.5 * pi * gl.weights[i];
            double snt = std::sin(th);
            dircos[level] = sinprod * std::cos(th);
            double meas = std::pow(snt, double(n - 2 - level));
            acc += wt * meas * sweep(level + 1, sinprod * snt);
        }
        return acc;
    };
    return sweep(0, 1.0);
}

} // namespace

double spherical_mean_numeric(const InitialDatum& datum,
                              std::span<const double> X, double r, int n,
                              const quad::QuadratureSpec& spec) {
    return product_sphere_mean(datum, X, r, n, spec);
}

double spherical_mean(const InitialDatum& datum, std::span<const double> X,
                      double r, int n, const quad::QuadratureSpec& spec) {
    if (n < 2 || n > 8)
        throw std::domain_error("spherical_mean: n must be in [2,8]");
    if (r < 0.0) throw std::domain_error("spherical_mean: r must be >= 0");
    const double omega = kernels::sphere_surface(n);
    if (r == 0.0) return omega * datum(X);

    if (datum.is_radial()) {
        const auto& C = datum.center();
        const double d = C.empty() ? 0.0 : dist(X, C);
        if (d <= 1e-14 * (1.0 + r)) return omega * datum.profile(r);
        if (datum.exact_spherical_mean()) {
            if (auto* g = std::get_if<GaussianDatum>(&datum.kind())) {
                const double s2 = g->width * g->width;
                const double lam = d * r / s2;
                return g->amplitude *
                       std::exp(-0.5 * (d * d + r * r) / s2 +
                                std::log(sphere_exp_integral(n, lam)));
            }
        }
        return radial_mean_quadrature(datum, d, r, n, spec);
    }
    return product_sphere_mean(datum, X, r, n, spec);
}

} // namespace skl::solvers
