#include "skl/quadrature.hpp"
#include "skl/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>

namespace skl::quad {

namespace {

constexpr double pi = std::numbers::pi;

// Symmetric tridiagonal eigensolve (implicit QL with shifts), tracking the
// first row of the eigenvector matrix. d: diagonal, e: subdiagonal
// (e[0..n-2]). On return d holds eigenvalues and z the first components.
void tql_first_row(std::vector<double>& d, std::vector<double>& e,
                   std::vector<double>& z) {
    const int n = static_cast<int>(d.size());
    z.assign(n, 0.0);
    if (n == 0) return;
    z[0] = 1.0;
    if (n == 1) return;
    e.push_back(0.0);

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd)
                    break;
            }
            if (m != l) {
                if (iter++ == 60)
                    throw std::runtime_error("quadrature: eigensolve failed");
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
                    f = z[i + 1];
                    z[i + 1] = s * z[i] + c * f;
                    z[i] = c * z[i] - s * f;
                }
                if (r == 0.0 && m - 1 >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

Rule golub_welsch(std::vector<double> diag, std::vector<double> offdiag,
                  double mu0) {
    const int n = static_cast<int>(diag.size());
    std::vector<double> z;
    tql_first_row(diag, offdiag, z);
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](int i, int j) { return diag[i] < diag[j]; });
    Rule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = diag[idx[i]];
        rule.weights[i] = mu0 * z[idx[i]] * z[idx[i]];
    }
    return rule;
}

struct RuleKey {
    int kind; // 0 legendre, 1 jacobi, 2 laguerre
    int n;
    double alpha;
    double beta;
    bool operator<(const RuleKey& o) const {
        return std::tie(kind, n, alpha, beta) <
               std::tie(o.kind, o.n, o.alpha, o.beta);
    }
};

std::map<RuleKey, Rule>& rule_cache() {
    static std::map<RuleKey, Rule> cache;
    return cache;
}
std::mutex& cache_mutex() {
    static std::mutex m;
    return m;
}

const Rule& cached(const RuleKey& key, Rule (*make)(const RuleKey&)) {
    std::lock_guard<std::mutex> lock(cache_mutex());
    auto& cache = rule_cache();
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, make(key)).first;
    return it->second;
}

Rule make_legendre(const RuleKey& key) {
    const int n = key.n;
    std::vector<double> d(n, 0.0), e(n - 1);
    for (int i = 1; i < n; ++i)
        e[i - 1] = i / std::sqrt(4.0 * i * i - 1.0);
    return golub_welsch(std::move(d), std::move(e), 2.0);
}

Rule make_jacobi(const RuleKey& key) {
    const int n = key.n;
    const double al = key.alpha, be = key.beta;
    std::vector<double> d(n), e(n > 1 ? n - 1 : 0);
    double ab = al + be;
    d[0] = (be - al) / (ab + 2.0);
    for (int i = 1; i < n; ++i) {
        double den = (2.0 * i + ab) * (2.0 * i + ab + 2.0);
        d[i] = (be * be - al * al) / den;
        double num = 4.0 * i * (i + al) * (i + be) * (i + ab);
        double dd = (2.0 * i + ab) * (2.0 * i + ab);
        e[i - 1] = std::sqrt(num / (dd * (2.0 * i + ab + 1.0) *
                                    (2.0 * i + ab - 1.0)));
    }
    double lmu = (ab + 1.0) * std::log(2.0) + specfun::log_gamma(al + 1.0) +
                 specfun::log_gamma(be + 1.0) - specfun::log_gamma(ab + 2.0);
    return golub_welsch(std::move(d), std::move(e), std::exp(lmu));
}

Rule make_laguerre(const RuleKey& key) {
    const int n = key.n;
    const double al = key.alpha;
    std::vector<double> d(n), e(n > 1 ? n - 1 : 0);
    for (int i = 0; i < n; ++i) {
        d[i] = 2.0 * i + al + 1.0;
        if (i + 1 < n) e[i] = std::sqrt((i + 1.0) * (i + 1.0 + al));
    }
    return golub_welsch(std::move(d), std::move(e),
                        std::exp(specfun::log_gamma(al + 1.0)));
}

// fixed 15-point Gauss-Legendre panel for the adaptive engine
double panel_gl15(const std::function<double(double)>& f, double lo, double hi,
                  int& evals) {
    const Rule& r = gauss_legendre(15);
    const double h = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    double s = 0.0;
    for (size_t i = 0; i < r.nodes.size(); ++i)
        s += r.weights[i] * f(mid + h * r.nodes[i]);
    evals += 15;
    return s * h;
}

struct AdaptState {
    const std::function<double(double)>* f;
    int evals = 0;
    int panels = 0;
    int max_panels = 400;
    double value = 0.0;
    double err = 0.0;
};

void adapt_rec(AdaptState& st, double lo, double hi, double whole,
               double abs_tol, int depth) {
    double mid = 0.5 * (lo + hi);
    double left = panel_gl15(*st.f, lo, mid, st.evals);
    double right = panel_gl15(*st.f, mid, hi, st.evals);
    double delta = std::abs(whole - (left + right));
    bool budget = st.panels < st.max_panels && depth < 60 &&
                  (hi - lo) > 1e-15 * (std::abs(lo) + std::abs(hi) + 1e-30);
    if (delta <= abs_tol || !budget) {
        st.value += left + right;
        st.err += delta;
        st.panels += 1;
        return;
    }
    adapt_rec(st, lo, mid, left, 0.5 * abs_tol, depth + 1);
    adapt_rec(st, mid, hi, right, 0.5 * abs_tol, depth + 1);
}

} // namespace

const Rule& gauss_legendre(int n) {
    if (n < 1) throw std::domain_error("gauss_legendre: n >= 1 required");
    return cached({0, n, 0.0, 0.0}, make_legendre);
}

const Rule& gauss_jacobi(int n, double alpha, double beta) {
    if (n < 1) throw std::domain_error("gauss_jacobi: n >= 1 required");
    if (alpha <= -1.0 || beta <= -1.0)
        throw std::domain_error("gauss_jacobi: exponents must exceed -1");
    return cached({1, n, alpha, beta}, make_jacobi);
}

const Rule& gauss_laguerre(int n, double alpha) {
    if (n < 1) throw std::domain_error("gauss_laguerre: n >= 1 required");
    if (alpha <= -1.0)
        throw std::domain_error("gauss_laguerre: alpha must exceed -1");
    return cached({2, n, alpha, 0.0}, make_laguerre);
}

QuadResult adaptive_integrate(const std::function<double(double)>& f,
                              double lo, double hi, double abs_tol,
                              int max_panels) {
    AdaptState st;
    st.f = &f;
    st.max_panels = max_panels;
    double whole = panel_gl15(f, lo, hi, st.evals);
    adapt_rec(st, lo, hi, whole, std::max(abs_tol, 0.0), 0);
    return {st.value, st.err, st.evals};
}

namespace {

QuadResult fixed_rule_apply(const std::function<double(double)>& f,
                            Interval iv, const QuadratureSpec& spec, int n) {
    QuadResult out;
    switch (spec.scheme) {
        case Scheme::gauss_legendre: {
            const Rule& r = gauss_legendre(n);
            const double h = 0.5 * (iv.hi - iv.lo);
            const double mid = 0.5 * (iv.hi + iv.lo);
            double s = 0.0;
            for (size_t i = 0; i < r.nodes.size(); ++i)
                s += r.weights[i] * f(mid + h * r.nodes[i]);
            out.value = s * h;
            out.evaluations = n;
            return out;
        }
        case Scheme::gauss_jacobi: {
            // weight (x-lo)^alpha (hi-x)^beta on [lo,hi]; standard Jacobi has
            // (1-x)^A (1+x)^B, so A = spec.beta (upper), B = spec.alpha (lower)
            const Rule& r = gauss_jacobi(n, spec.beta, spec.alpha);
            const double h = 0.5 * (iv.hi - iv.lo);
            const double mid = 0.5 * (iv.hi + iv.lo);
            double s = 0.0;
            for (size_t i = 0; i < r.nodes.size(); ++i)
                s += r.weights[i] * f(mid + h * r.nodes[i]);
            // scale: x = mid + h*xi, (x-lo) = h(1+xi), (hi-x) = h(1-xi)
            out.value = s * std::pow(h, spec.alpha + spec.beta + 1.0);
            out.evaluations = n;
            return out;
        }
        case Scheme::gauss_laguerre: {
            // integral over [lo, inf) of g(x); rule handles
            // (x-lo)^alpha e^{-(x-lo)} so f supplies the smooth rest
            const Rule& r = gauss_laguerre(n, spec.alpha);
            double s = 0.0;
            for (size_t i = 0; i < r.nodes.size(); ++i)
                s += r.weights[i] * f(iv.lo + r.nodes[i]);
            out.value = s;
            out.evaluations = n;
            return out;
        }
        default:
            throw std::logic_error("fixed_rule_apply: not a fixed scheme");
    }
}

} // namespace

QuadResult integrate_1d(const std::function<double(double)>& f, Interval iv,
                        const QuadratureSpec& spec) {
    if (spec.nodes < 2) throw std::domain_error("integrate_1d: nodes >= 2");
    if (!(spec.rel_tol > 0.0))
        throw std::domain_error("integrate_1d: rel_tol must be positive");

    if (spec.scheme == Scheme::adaptive_subdivision) {
        if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi))
            throw std::domain_error("integrate_1d: adaptive needs finite interval");
        // two passes: roughly size the integral, then set the absolute goal
        QuadResult rough = adaptive_integrate(f, iv.lo, iv.hi,
                                              1e-6 * std::abs(iv.hi - iv.lo),
                                              spec.max_subdivisions);
        double goal = spec.rel_tol * std::max(std::abs(rough.value), 1e-280);
        QuadResult fine = adaptive_integrate(f, iv.lo, iv.hi, goal,
                                             spec.max_subdivisions);
        fine.evaluations += rough.evaluations;
        if (fine.est_error > 50.0 * goal + 1e-270)
            throw std::runtime_error(
                "integrate_1d: tolerance not met at max_subdivisions");
        return fine;
    }

    QuadResult q1 = fixed_rule_apply(f, iv, spec, spec.nodes);
    QuadResult q2 = fixed_rule_apply(f, iv, spec, 2 * spec.nodes);
    q2.est_error = std::abs(q2.value - q1.value);
    q2.evaluations += q1.evaluations;
    return q2;
}

} // namespace skl::quad
