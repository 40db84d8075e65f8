#include "skl/specfun.hpp"
#include "skl/quadrature.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace skl::specfun {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double eps = std::numeric_limits<double>::epsilon();

bool is_nonpositive_integer(double x) {
    return x <= 0.0 && x == std::floor(x);
}

void check_control(const SeriesControl& ctl) {
    if (!(ctl.rel_tol > 0.0) || ctl.max_terms < 1 || ctl.abs_floor < 0.0)
        throw std::invalid_argument(
            "SeriesControl: needs rel_tol > 0, max_terms >= 1, abs_floor >= 0");
}

// sin(pi*x) with argument reduction done on x, not on pi*x.
double sin_pi(double x) {
    double m = std::floor(x);
    double f = x - m;
    double s = std::sin(pi * f);
    return (static_cast<long long>(std::fmod(m, 2.0)) % 2 == 0) ? s : -s;
}

double cos_pi(double x) {
    return sin_pi(x + 0.5);
}

// Stirling series for ln Gamma, valid x >= 10.
double stirling_lgamma(double x) {
    const double w = 1.0 / (x * x);
    double series = (1.0 / 12.0
        + w * (-1.0 / 360.0
        + w * (1.0 / 1260.0
        + w * (-1.0 / 1680.0
        + w * (1.0 / 1188.0
        + w * (-691.0 / 360360.0
        + w * (1.0 / 156.0))))))) / x;
    return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * pi) + series;
}

double lgamma_positive(double x) {
    // shift into the Stirling regime
    double acc = 0.0;
    while (x < 10.0) {
        acc -= std::log(x);
        x += 1.0;
    }
    return acc + stirling_lgamma(x);
}

// 1/Gamma(x) as (log, sign); returns sign 0 at poles so pole coefficients
// vanish cleanly inside the connection formulas.
struct LogVal {
    double log;
    int sign;
};

LogVal log_gamma_checked(double x) {
    if (is_nonpositive_integer(x)) return {-inf, 0};
    int s = 1;
    double lg;
    if (x >= 0.5) {
        lg = lgamma_positive(x);
    } else {
        double sp = sin_pi(x);
        s = (sp > 0.0) ? 1 : -1;
        lg = std::log(pi / std::abs(sp)) - lgamma_positive(1.0 - x);
    }
    return {lg, s};
}

} // namespace

std::string_view branch_name(Branch b) {
    switch (b) {
        case Branch::direct_series: return "direct_series";
        case Branch::connection_formula: return "connection_formula";
        case Branch::log_series: return "log_series";
        case Branch::integral_rep: return "integral_rep";
        case Branch::gauss_point: return "gauss_point";
        case Branch::euler_transform: return "euler_transform";
    }
    return "unknown";
}

double log_gamma(double x, int* sign_out) {
    if (std::isnan(x)) throw std::domain_error("log_gamma: NaN argument");
    if (is_nonpositive_integer(x))
        throw std::domain_error("log_gamma: pole at nonpositive integer");
    LogVal v = log_gamma_checked(x);
    if (sign_out) *sign_out = v.sign;
    return v.log;
}

double gamma_fn(double x) {
    int s = 1;
    double lg = log_gamma(x, &s);
    return s * std::exp(lg);
}

double digamma(double x) {
    if (std::isnan(x)) throw std::domain_error("digamma: NaN argument");
    if (is_nonpositive_integer(x))
        throw std::domain_error("digamma: pole at nonpositive integer");
    double acc = 0.0;
    if (x < 0.5) {
        // psi(x) = psi(1-x) - pi*cot(pi*x)
        acc = -pi * cos_pi(x) / sin_pi(x);
        x = 1.0 - x;
    }
    while (x < 10.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double w = 1.0 / (x * x);
    double series = w * (1.0 / 12.0
        + w * (-1.0 / 120.0
        + w * (1.0 / 252.0
        + w * (-1.0 / 240.0
        + w * (1.0 / 132.0
        + w * (-691.0 / 32760.0
        + w * (1.0 / 12.0)))))));
    return acc + std::log(x) - 0.5 / x - series;
}

double pochhammer(double a, int m) {
    if (m < 0) throw std::domain_error("pochhammer: negative order");
    double p = 1.0;
    for (int j = 0; j < m; ++j) {
        p *= a + j;
        if (std::isinf(p))
            throw std::overflow_error("pochhammer: result overflows");
    }
    return p;
}

double double_factorial(int m) {
    if (m < -1) throw std::domain_error("double_factorial: m < -1");
    double p = 1.0;
    for (int j = m; j >= 2; j -= 2) p *= j;
    return p;
}

// ---------------------------------------------------------------------------
// 1F1

namespace {

EvalResult hyp1f1_series(double a, double c, double z, const SeriesControl& ctl) {
    EvalResult res;
    res.diag.branch = Branch::direct_series;
    double term = 1.0, sum = 1.0, sumabs = 1.0;
    int small_streak = 0;
    int k = 0;
    for (; k < ctl.max_terms; ++k) {
        term *= (a + k) * z / ((c + k) * (k + 1.0));
        sum += term;
        sumabs += std::abs(term);
        if (term == 0.0) { small_streak = 2; ++k; break; } // terminated
        if (std::abs(term) <= std::max(ctl.rel_tol * std::abs(sum), ctl.abs_floor)) {
            if (++small_streak >= 2) { ++k; break; }
        } else {
            small_streak = 0;
        }
    }
    res.diag.terms_used = k + 1;
    res.value = sum;
    double denom = std::max(std::abs(sum), 1e-300);
    res.diag.est_error = (std::abs(term) + eps * sumabs) / denom;
    if (small_streak < 2) {
        res.diag.valid = false;
        res.diag.est_error = inf;
    }
    return res;
}

} // namespace

EvalResult hyp1f1(double a, double c, double z, const SeriesControl& ctl) {
    check_control(ctl);
    if (is_nonpositive_integer(c))
        throw std::domain_error("hyp1f1: c is a nonpositive integer");
    if (z < 0.0) {
        // Kummer transform keeps the series terms one-signed for a,c > 0
        EvalResult res = hyp1f1_series(c - a, c, -z, ctl);
        res.value *= std::exp(z);
        return res;
    }
    return hyp1f1_series(a, c, z, ctl);
}

EvalResult hyp1f1(const HypergeomArgs& args, const SeriesControl& ctl) {
    return hyp1f1(args.a, args.c, args.z, ctl);
}

// ---------------------------------------------------------------------------
// Tricomi U

namespace {

// U(a,c,z) = z^{-a}/Gamma(a) * Int_0^inf e^{-u} u^{a-1} (1+u/z)^{c-a-1} du,
// split at s = p in the original variable s = u/z:
//   piece A: s in [0,p], Gauss-Jacobi absorbs s^{a-1};
//   piece B: s in [p,inf), mapped by s = p/u to u in (0,1], adaptive (the
//   boundary layer at u ~ z/c carries the z->0 singular behavior).
EvalResult hypU_integral(double a, double c, double z) {
    EvalResult res;
    res.diag.branch = Branch::integral_rep;

    const double p = std::min(1.0, 20.0 / z);
    const double cma1 = c - a - 1.0;

    auto smooth = [&](double s) {
        return std::exp(-z * s + cma1 * std::log1p(s));
    };

    // piece A = p^a * 2^{-a} * sum_i w_i * smooth(p*(1+x_i)/2)
    auto jacobi_piece = [&](int nnodes) {
        const quad::Rule& rule = quad::gauss_jacobi(nnodes, 0.0, a - 1.0);
        double s = 0.0;
        for (size_t i = 0; i < rule.nodes.size(); ++i)
            s += rule.weights[i] * smooth(p * (1.0 + rule.nodes[i]) / 2.0);
        return std::pow(p, a) * std::pow(2.0, -a) * s;
    };
    double A1 = jacobi_piece(48);
    double A2 = jacobi_piece(96);
    double errA = std::abs(A2 - A1);
    int evals = 48 + 96;

    // piece B = p^a * Int_0^1 exp(-z*p/u - c*ln u + (c-a-1)*ln(u+p)) du,
    // fixed geometric panels toward u = 0 (the boundary layer at u ~ z/c):
    // deterministic nodes keep the evaluation smooth in z, which the
    // finite-difference verification layers differentiate through
    auto tail_integrand = [&](double u) {
        if (u <= 0.0) return 0.0;
        double lg = -z * p / u - c * std::log(u) + cma1 * std::log(u + p);
        return lg < -745.0 ? 0.0 : std::exp(lg);
    };
    auto tail_panels = [&](int nodes_per_panel) {
        const quad::Rule& gl = quad::gauss_legendre(nodes_per_panel);
        double acc = 0.0, hi = 1.0;
        for (int panel = 0; panel < 60; ++panel) {
            double lo = (panel == 59) ? 0.0 : hi * 0.5;
            const double hh = 0.5 * (hi - lo), mm = 0.5 * (hi + lo);
            double s = 0.0;
            for (size_t i = 0; i < gl.nodes.size(); ++i)
                s += gl.weights[i] * tail_integrand(mm + hh * gl.nodes[i]);
            acc += hh * s;
            evals += nodes_per_panel;
            hi = lo;
            if (z * p / hi > 760.0) break; // integrand underflowed to 0
        }
        return acc;
    };
    double B1 = tail_panels(8);
    double B2 = tail_panels(14);
    double Bval = std::pow(p, a) * B2;
    double errB = std::pow(p, a) * std::abs(B2 - B1);

    double total = A2 + Bval;
    res.value = total / gamma_fn(a);
    res.diag.terms_used = evals;
    res.diag.est_error = (errA + errB) / std::max(std::abs(total), 1e-300);
    return res;
}

} // namespace

EvalResult hypU(double a, double c, double z, const SeriesControl& ctl) {
    check_control(ctl);
    if (!(z > 0.0)) throw std::domain_error("hypU: requires z > 0");
    if (a < 0.0) throw std::domain_error("hypU: requires a >= 0");
    if (a == 0.0) {
        EvalResult res;
        res.value = 1.0;
        res.diag.branch = Branch::direct_series;
        return res;
    }

    const bool near_int_c = std::abs(c - std::round(c)) <= 1e-6;
    if (!near_int_c && z < 30.0) {
        // two-series combination; both 1F1 arguments are positive
        EvalResult m1 = hyp1f1(a, c, z, ctl);
        EvalResult m2 = hyp1f1(a - c + 1.0, 2.0 - c, z, ctl);
        LogVal g1a = log_gamma_checked(1.0 + a - c);
        LogVal g1b = log_gamma_checked(c);
        LogVal g2a = log_gamma_checked(a);
        LogVal g2b = log_gamma_checked(2.0 - c);
        double coef1 = (g1a.sign && g1b.sign)
            ? g1a.sign * g1b.sign * std::exp(-g1a.log - g1b.log) : 0.0;
        double coef2 = (g2a.sign && g2b.sign)
            ? g2a.sign * g2b.sign * std::exp(-g2a.log - g2b.log) : 0.0;
        double T1 = m1.value * coef1;
        double T2 = std::pow(z, 1.0 - c) * m2.value * coef2;
        double pref = pi / sin_pi(c);
        double val = pref * (T1 - T2);
        double amp = (std::abs(T1) + std::abs(T2)) /
                     std::max(std::abs(T1 - T2), 1e-300);
        if (m1.diag.valid && m2.diag.valid && amp <= 1e8) {
            EvalResult res;
            res.value = val;
            res.diag.branch = Branch::direct_series;
            res.diag.terms_used = m1.diag.terms_used + m2.diag.terms_used;
            res.diag.est_error =
                amp * (m1.diag.est_error + m2.diag.est_error + 4.0 * eps);
            return res;
        }
        // cancellation beyond budget: fall through to the integral
    }
    return hypU_integral(a, c, z);
}

EvalResult hypU(const HypergeomArgs& args, const SeriesControl& ctl) {
    return hypU(args.a, args.c, args.z, ctl);
}

// ---------------------------------------------------------------------------
// 2F1

namespace {

EvalResult hyp2f1_series(double a, double b, double c, double z,
                         const SeriesControl& ctl) {
    EvalResult res;
    res.diag.branch = Branch::direct_series;
    double term = 1.0, sum = 1.0, sumabs = 1.0;
    int small_streak = 0;
    int k = 0;
    for (; k < ctl.max_terms; ++k) {
        term *= (a + k) * (b + k) * z / ((c + k) * (k + 1.0));
        sum += term;
        sumabs += std::abs(term);
        if (term == 0.0) { small_streak = 2; ++k; break; }
        if (std::abs(term) <= std::max(ctl.rel_tol * std::abs(sum), ctl.abs_floor)) {
            if (++small_streak >= 2) { ++k; break; }
        } else {
            small_streak = 0;
        }
    }
    res.diag.terms_used = k + 1;
    res.value = sum;
    double denom = std::max(std::abs(sum), 1e-300);
    res.diag.est_error = (std::abs(term) + eps * sumabs) / denom;
    if (small_streak < 2) {
        res.diag.valid = false;
        res.diag.est_error = inf;
    }
    return res;
}

// connection to argument w = 1-z, c-a-b away from integers
EvalResult hyp2f1_connection(double a, double b, double c, double w,
                             const SeriesControl& ctl) {
    const double s = c - a - b;
    LogVal gc = log_gamma_checked(c);
    LogVal gs = log_gamma_checked(s);
    LogVal gca = log_gamma_checked(c - a);
    LogVal gcb = log_gamma_checked(c - b);
    LogVal gms = log_gamma_checked(-s);
    LogVal ga = log_gamma_checked(a);
    LogVal gb = log_gamma_checked(b);

    double coef1 = 0.0;
    if (gc.sign && gs.sign && gca.sign && gcb.sign)
        coef1 = gc.sign * gs.sign * gca.sign * gcb.sign *
                std::exp(gc.log + gs.log - gca.log - gcb.log);
    double coef2 = 0.0;
    if (gc.sign && gms.sign && ga.sign && gb.sign)
        coef2 = gc.sign * gms.sign * ga.sign * gb.sign *
                std::exp(gc.log + gms.log - ga.log - gb.log);

    EvalResult f1{1.0, {}};
    if (coef1 != 0.0) f1 = hyp2f1_series(a, b, a + b - c + 1.0, w, ctl);
    EvalResult f2{1.0, {}};
    if (coef2 != 0.0) f2 = hyp2f1_series(c - a, c - b, s + 1.0, w, ctl);

    double t1 = coef1 * f1.value;
    double t2 = std::pow(w, s) * coef2 * f2.value;

    EvalResult res;
    res.value = t1 + t2;
    res.diag.branch = Branch::connection_formula;
    res.diag.terms_used = f1.diag.terms_used + f2.diag.terms_used;
    res.diag.valid = f1.diag.valid && f2.diag.valid;
    double cancel = (std::abs(t1) + std::abs(t2)) /
                    std::max(std::abs(res.value), 1e-300);
    res.diag.est_error = cancel * (f1.diag.est_error + f2.diag.est_error + 4.0 * eps);
    if (!res.diag.valid) res.diag.est_error = inf;
    return res;
}

// logarithmic connection for integer s = c-a-b = m, argument w = 1-z < 1.
EvalResult hyp2f1_log_case(double a, double b, double c, double w, long m,
                           const SeriesControl& ctl) {
    EvalResult res;
    res.diag.branch = Branch::log_series;
    const double L = -std::log(w);
    LogVal gc = log_gamma_checked(c);

    if (m >= 0) {
        // finite part
        double finite = 0.0;
        if (m >= 1) {
            LogVal gam = log_gamma_checked(a + m);
            LogVal gbm = log_gamma_checked(b + m);
            double coef = 0.0;
            if (gc.sign && gam.sign && gbm.sign)
                coef = gc.sign * gam.sign * gbm.sign *
                       std::exp(log_gamma_checked(double(m)).log + gc.log -
                                gam.log - gbm.log);
            if (coef != 0.0) {
                double term = 1.0, ssum = 0.0;
                for (long j = 0; j < m; ++j) {
                    ssum += term;
                    if (j + 1 < m)
                        term *= (a + j) * (b + j) * w /
                                ((j + 1.0) * (1.0 - m + j));
                }
                finite = coef * ssum;
            }
        }
        // log series
        LogVal ga = log_gamma_checked(a);
        LogVal gb = log_gamma_checked(b);
        double series = 0.0;
        int terms = 0;
        double coef2 = 0.0;
        if (gc.sign && ga.sign && gb.sign)
            coef2 = gc.sign * ga.sign * gb.sign *
                    std::exp(gc.log - ga.log - gb.log) *
                    ((m % 2 == 0) ? 1.0 : -1.0) * std::pow(w, double(m));
        if (coef2 != 0.0) {
            double mfact = 1.0;
            for (long j = 2; j <= m; ++j) mfact *= j;
            double coef = 1.0 / mfact;                     // j = 0 coefficient
            double p1 = digamma(1.0);                      // psi(j+1)
            double p2 = digamma(double(m) + 1.0);          // psi(j+m+1)
            double pa = digamma(a + m);                    // psi(a+m+j)
            double pb = digamma(b + m);                    // psi(b+m+j)
            for (long j = 0; j < ctl.max_terms; ++j) {
                double piece = coef * (L + p1 + p2 - pa - pb);
                series += piece;
                if (std::abs(piece) <= ctl.rel_tol * std::abs(series) + ctl.abs_floor &&
                    j > 2) {
                    terms = int(j) + 1;
                    break;
                }
                coef *= (a + m + j) * (b + m + j) * w /
                        ((j + 1.0) * (j + m + 1.0));
                p1 += 1.0 / (j + 1.0);
                p2 += 1.0 / (j + m + 1.0);
                pa += 1.0 / (a + m + j);
                pb += 1.0 / (b + m + j);
                terms = int(j) + 1;
            }
            series *= coef2;
        }
        res.value = finite + series;
        res.diag.terms_used = terms;
        double cancel = (std::abs(finite) + std::abs(series)) /
                        std::max(std::abs(res.value), 1e-300);
        res.diag.est_error = cancel * (ctl.rel_tol + 8.0 * eps);
        return res;
    }

    // m < 0: c = a+b-M
    const long M = -m;
    double finite = 0.0;
    {
        LogVal ga = log_gamma_checked(a);
        LogVal gb = log_gamma_checked(b);
        double coef = 0.0;
        if (gc.sign && ga.sign && gb.sign)
            coef = gc.sign * ga.sign * gb.sign *
                   std::exp(log_gamma_checked(double(M)).log + gc.log -
                            ga.log - gb.log) * std::pow(w, -double(M));
        if (coef != 0.0) {
            double term = 1.0, ssum = 0.0;
            for (long j = 0; j < M; ++j) {
                ssum += term;
                if (j + 1 < M)
                    term *= (a - M + j) * (b - M + j) * w /
                            ((j + 1.0) * (1.0 - M + j));
            }
            finite = coef * ssum;
        }
    }
    double series = 0.0;
    int terms = 0;
    {
        LogVal gaM = log_gamma_checked(a - M);
        LogVal gbM = log_gamma_checked(b - M);
        double coef2 = 0.0;
        if (gc.sign && gaM.sign && gbM.sign)
            coef2 = gc.sign * gaM.sign * gbM.sign *
                    std::exp(gc.log - gaM.log - gbM.log) *
                    ((M % 2 == 0) ? 1.0 : -1.0);
        if (coef2 != 0.0) {
            double mfact = 1.0;
            for (long j = 2; j <= M; ++j) mfact *= j;
            double coef = 1.0 / mfact;
            double p1 = digamma(1.0);            // psi(j+1)
            double p2 = digamma(double(M) + 1.0); // psi(j+M+1)
            double pa = digamma(a);              // psi(a+j)
            double pb = digamma(b);              // psi(b+j)
            for (long j = 0; j < ctl.max_terms; ++j) {
                double piece = coef * (L + p1 + p2 - pa - pb);
                series += piece;
                if (std::abs(piece) <= ctl.rel_tol * std::abs(series) + ctl.abs_floor &&
                    j > 2) {
                    terms = int(j) + 1;
                    break;
                }
                coef *= (a + j) * (b + j) * w / ((j + 1.0) * (j + M + 1.0));
                p1 += 1.0 / (j + 1.0);
                p2 += 1.0 / (j + M + 1.0);
                pa += 1.0 / (a + j);
                pb += 1.0 / (b + j);
                terms = int(j) + 1;
            }
            series *= coef2;
        }
    }
    res.value = finite + series;
    res.diag.terms_used = terms;
    double cancel = (std::abs(finite) + std::abs(series)) /
                    std::max(std::abs(res.value), 1e-300);
    res.diag.est_error = cancel * (ctl.rel_tol + 8.0 * eps);
    return res;
}

} // namespace

EvalResult hyp2f1_cm(double a, double b, double c, double z, double one_minus_z,
                     const SeriesControl& ctl) {
    check_control(ctl);
    if (is_nonpositive_integer(c))
        throw std::domain_error("hyp2f1: c is a nonpositive integer");
    if (z < 0.0 || !(one_minus_z > 0.0))
        throw std::domain_error("hyp2f1: z outside [0,1)");

    // terminating polynomial: valid for any z, no connection machinery
    if (is_nonpositive_integer(a) || is_nonpositive_integer(b))
        return hyp2f1_series(a, b, c, z, ctl);

    if (z <= 0.5) return hyp2f1_series(a, b, c, z, ctl);

    const double s = c - a - b;
    const double dist = std::abs(s - std::round(s));
    // seam between the connection and logarithmic branches: the connection
    // coefficients blow up like 1/dist (and an inner c-parameter approaches
    // a pole, costing eps/dist^2), while the rounded logarithmic series is
    // off by O(dist * ln(1-z)). Inside the seam the direct series is still
    // convergent for z away from 1 and is the accurate route.
    if (dist <= 1e-3 && dist != 0.0 && z <= 0.92)
        return hyp2f1_series(a, b, c, z, ctl);
    if (dist > 3.2e-6) return hyp2f1_connection(a, b, c, one_minus_z, ctl);
    EvalResult res = hyp2f1_log_case(a, b, c, one_minus_z, std::lround(s), ctl);
    res.diag.est_error += 4.0 * dist * (std::abs(std::log(one_minus_z)) + 3.0);
    return res;
}

EvalResult hyp2f1(double a, double b, double c, double z,
                  const SeriesControl& ctl) {
    return hyp2f1_cm(a, b, c, z, 1.0 - z, ctl);
}

EvalResult hyp2f1(const HypergeomArgs& args, const SeriesControl& ctl) {
    if (!args.b) throw std::domain_error("hyp2f1: missing b parameter");
    return hyp2f1(args.a, *args.b, args.c, args.z, ctl);
}

double hyp2f1_at_one(double a, double b, double c) {
    if (is_nonpositive_integer(c))
        throw std::domain_error("hyp2f1_at_one: c is a nonpositive integer");
    const double s = c - a - b;
    if (!(s > 0.0))
        throw std::domain_error("hyp2f1_at_one: divergent, needs a+b-c < 0");
    LogVal gc = log_gamma_checked(c);
    LogVal gs = log_gamma_checked(s);
    LogVal gca = log_gamma_checked(c - a);
    LogVal gcb = log_gamma_checked(c - b);
    if (gca.sign == 0 || gcb.sign == 0) return 0.0; // limit through the pole
    return gc.sign * gs.sign * gca.sign * gcb.sign *
           std::exp(gc.log + gs.log - gca.log - gcb.log);
}

} // namespace skl::specfun
