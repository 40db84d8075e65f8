#include "skl/kernels.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace skl::kernels {

namespace sf = skl::specfun;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double inf = std::numeric_limits<double>::infinity();

void check_heat_query(const KernelQuery& q) {
    if (q.n < 2 || q.n > 8)
        throw std::domain_error("kernel: dimension n must be in [2,8]");
    if (!(q.t > 0.0)) throw std::domain_error("kernel: t must be positive");
    if (q.r < 0.0) throw std::domain_error("kernel: r must be nonnegative");
}

void check_wave_query(const KernelQuery& q) {
    check_heat_query(q);
    if (q.r >= q.t)
        throw std::domain_error("wave kernel: r >= t violates the light cone");
}

} // namespace

double sphere_surface(int n) {
    if (n < 1) throw std::domain_error("sphere_surface: n >= 1");
    return 2.0 * std::pow(pi, 0.5 * n) / sf::gamma_fn(0.5 * n);
}

double wave_c2(double k) {
    return sf::gamma_fn(1.0 + 0.5 * k) * sf::gamma_fn(0.5 * (3.0 - k)) /
           std::pow(pi, 1.5);
}

double wave_ladder_step_constant() { return -2.0 * pi; }

OddWaveNorm odd_wave_norm_const(int n, double k) {
    if (n < 3 || n % 2 == 0 || n > 7)
        throw std::domain_error("odd_wave_norm_const: n must be 3, 5 or 7");
    if (k * (k - 1.0) == 0.0)
        throw std::domain_error(
            "odd_wave_norm_const: k(k-1) = 0 is the classical limit; "
            "evaluate the k -> 0 limiting path instead");
    OddWaveNorm norm;
    // derived: -C_n * omega_{n-1} * (n-1)/(k(k-1)) * [F((k-1)/2,-k/2;(n-1)/2;1) - 1] = 1
    const double F1 =
        sf::hyp2f1_at_one(0.5 * (k - 1.0), -0.5 * k, 0.5 * (n - 1.0));
    norm.derived = -k * (k - 1.0) /
                   (sphere_surface(n) * (n - 1.0) * (F1 - 1.0));
    // literal printed constant (bracket numerator repeats the first
    // denominator factor; kept verbatim for the comparison report)
    const double P = sf::gamma_fn(0.5 * (n - k)) * sf::gamma_fn(0.5 * (n - 1.0 - k));
    const double Q = sf::gamma_fn(0.5 * n) * sf::gamma_fn(0.5 * (n - 1.0));
    norm.literal = sf::gamma_fn(0.5 * n) * k * (k - 1.0) /
                 (2.0 * std::pow(pi, 0.5 * n) * (n - 1.0)) * (P / (P - Q));
    return norm;
}

NormalizationTable::NormalizationTable(double k) : k_(k) {
    c2_ = wave_c2(k);
    for (int n = 3; n <= 7; n += 2) {
        if (k * (k - 1.0) != 0.0) {
            OddWaveNorm norm = odd_wave_norm_const(n, k);
            odd_C_[n] = norm.derived;
            odd_C_literal_[n] = norm.literal;
        } else {
            odd_C_[n] = std::numeric_limits<double>::quiet_NaN();
            odd_C_literal_[n] = odd_C_[n];
        }
    }
    for (int n = 4; n <= 8; n += 2) {
        // derived kernel constant: exact ladder chain from the 2-D kernel,
        // one factor 1/(2 pi) per dimension step; hits (2 pi)^{-n/2} at k=0
        even_c_[n] = c2_ * std::pow(2.0 * pi, -0.5 * (n - 2.0));
        double dfact = sf::double_factorial(n - 3);
        double half_fact = sf::gamma_fn(0.5 * (n - 2.0) + 1.0); // ((n-2)/2)!
        even_c_literal_[n] = std::pow(2.0, 0.5 * n - 1.0) * dfact *
                           sf::gamma_fn(0.5 * n) /
                           (half_fact * std::pow(pi, 0.5 * (n - 1.0))) * c2_;
        // derived solver constant: forces lim_{t->0} dw/dt = g with the
        // operators a^{-1}(x d/dx + a) applied outside the integral
        even_solver_[n] = dfact * sf::gamma_fn(0.5 * n) *
                          sf::gamma_fn(1.0 + 0.5 * k) *
                          sf::gamma_fn(0.5 * (3.0 - k)) /
                          (std::pow(2.0, 0.5 * (n - 2.0)) * half_fact *
                           std::pow(pi, 0.5 * (n + 1.0)));
        even_solver_literal_[n] = std::pow(2.0, 0.5 * n - 1.0) * dfact *
                                sf::gamma_fn(0.5 * n) /
                                (half_fact * std::pow(pi, 0.5 * (n - 1.0))) *
                                c2_;
    }
}

double NormalizationTable::odd_C(int n) const {
    if (n < 3 || n > 7 || n % 2 == 0)
        throw std::domain_error("NormalizationTable: odd n in {3,5,7}");
    return odd_C_[n];
}
double NormalizationTable::odd_C_literal(int n) const {
    if (n < 3 || n > 7 || n % 2 == 0)
        throw std::domain_error("NormalizationTable: odd n in {3,5,7}");
    return odd_C_literal_[n];
}
double NormalizationTable::even_kernel_c(int n) const {
    if (n < 4 || n > 8 || n % 2 == 1)
        throw std::domain_error("NormalizationTable: even n in {4,6,8}");
    return even_c_[n];
}
double NormalizationTable::even_kernel_c_literal(int n) const {
    if (n < 4 || n > 8 || n % 2 == 1)
        throw std::domain_error("NormalizationTable: even n in {4,6,8}");
    return even_c_literal_[n];
}
double NormalizationTable::even_solver_c(int n) const {
    if (n < 4 || n > 8 || n % 2 == 1)
        throw std::domain_error("NormalizationTable: even n in {4,6,8}");
    return even_solver_[n];
}
double NormalizationTable::even_solver_c_literal(int n) const {
    if (n < 4 || n > 8 || n % 2 == 1)
        throw std::domain_error("NormalizationTable: even n in {4,6,8}");
    return even_solver_literal_[n];
}

// ---------------------------------------------------------------------------
// heat kernels

KernelEval heat_kernel_ex(const KernelQuery& q) {
    check_heat_query(q);
    if (!(q.k > 0.0))
        throw std::domain_error("heat_kernel: k must be positive");
    KernelEval out;
    if (q.r == 0.0) {
        out.value = inf; // U blows up at z = 0 for every n >= 2
        return out;
    }
    const double z = q.r * q.r / (4.0 * q.t);
    sf::EvalResult u = sf::hypU(q.k, 0.5 * q.n, z);
    out.value = sf::gamma_fn(q.k) * std::pow(4.0 * pi * q.t, -0.5 * q.n) *
                std::exp(-z) * u.value;
    out.diag = u.diag;
    return out;
}

double heat_kernel(const KernelQuery& q) { return heat_kernel_ex(q).value; }

KernelEval scaled_heat_kernel_ex(const KernelQuery& q) {
    KernelEval out = heat_kernel_ex(q);
    out.value *= std::pow(q.t, q.k);
    return out;
}

double scaled_heat_kernel(const KernelQuery& q) {
    return scaled_heat_kernel_ex(q).value;
}

double classical_heat_kernel(const KernelQuery& q) {
    check_heat_query(q);
    return std::pow(4.0 * pi * q.t, -0.5 * q.n) *
           std::exp(-q.r * q.r / (4.0 * q.t));
}

double classical_wave_kernel(const KernelQuery& q) {
    check_wave_query(q);
    return std::pow(2.0 * pi, -0.5 * q.n) *
           std::pow(q.t * q.t - q.r * q.r, 0.5 * (1.0 - q.n));
}

double heat_general_solution(const KernelQuery& q, GeneralSolutionCoeffs coeffs) {
    check_heat_query(q);
    const double z = q.r * q.r / (4.0 * q.t);
    const double tp = std::pow(q.t, -0.5 * q.n);
    double val = 0.0;
    if (coeffs.A != 0.0) {
        // 1F1(n/2-k; n/2; -z) = e^{-z} 1F1(k; n/2; z); the evaluator applies
        // the transform internally for the negative argument
        val += coeffs.A * tp * sf::hyp1f1(0.5 * q.n - q.k, 0.5 * q.n, -z).value;
    }
    if (coeffs.B != 0.0) {
        if (!(q.k > 0.0))
            throw std::domain_error("heat_general_solution: U branch needs k > 0");
        if (q.r == 0.0) return std::copysign(inf, coeffs.B);
        val += coeffs.B * tp * std::exp(-z) * sf::hypU(q.k, 0.5 * q.n, z).value;
    }
    return val;
}

// ---------------------------------------------------------------------------
// wave kernels

KernelEval wave_kernel_2d_ex(const KernelQuery& q) {
    check_wave_query(q);
    if (q.n != 2) throw std::domain_error("wave_kernel_2d: n must be 2");
    KernelEval out;
    if (q.r == 0.0) {
        out.value = inf; // logarithmic blow-up of F at argument 1
        return out;
    }
    const double w = (q.r / q.t) * (q.r / q.t); // 1 - z, exact near the cone
    const double z = (q.t - q.r) * (q.t + q.r) / (q.t * q.t);
    sf::EvalResult F =
        sf::hyp2f1_cm(0.5 * (1.0 - q.k), 0.5 * q.k, 0.5, z, w);
    out.value = wave_c2(q.k) / std::sqrt((q.t - q.r) * (q.t + q.r)) * F.value;
    out.diag = F.diag;
    return out;
}

double wave_kernel_2d(const KernelQuery& q) { return wave_kernel_2d_ex(q).value; }

KernelEval wave_kernel_odd_ex(const KernelQuery& q,
                              const NormalizationTable& norms) {
    check_wave_query(q);
    if (q.n % 2 == 0 || q.n < 3 || q.n > 7)
        throw std::domain_error("wave_kernel_odd: n must be 3, 5 or 7");
    if (q.k * (q.k - 1.0) == 0.0)
        throw std::domain_error(
            "wave_kernel_odd: k(k-1) = 0; use wave_kernel_odd_limit0 for the "
            "k -> 0 limit");
    KernelEval out;
    if (q.r == 0.0) {
        out.value = inf; // r^{2-n} center singularity
        return out;
    }
    // Euler-transformed form: the (r^2/t^2)^{(2-n)/2} power carries the
    // center singularity and the remaining 2F1 stays bounded on the cone
    const double w = (q.r / q.t) * (q.r / q.t);
    const double z = (q.t - q.r) * (q.t + q.r) / (q.t * q.t);
    sf::EvalResult F = sf::hyp2f1_cm(0.5 * (1.0 + q.k), 1.0 - 0.5 * q.k,
                                     0.5 * (q.n + 1.0), z, w);
    out.value = norms.odd_C(q.n) * std::pow(q.t, 1.0 - q.n) *
                std::pow(w, 0.5 * (2.0 - q.n)) * F.value;
    out.diag = F.diag;
    out.diag.branch = sf::Branch::euler_transform;
    return out;
}

double wave_kernel_odd(const KernelQuery& q, const NormalizationTable& norms) {
    return wave_kernel_odd_ex(q, norms).value;
}

double wave_kernel_odd(const KernelQuery& q) {
    return wave_kernel_odd(q, NormalizationTable(q.k));
}

double odd_wave_norm_limit0(int n) {
    if (n < 3 || n % 2 == 0 || n > 7)
        throw std::domain_error("odd_wave_norm_limit0: n must be 3, 5 or 7");
    const double s = 0.5 * (sf::digamma(0.5 * n) - sf::digamma(0.5 * (n - 1.0)));
    return 1.0 / (sphere_surface(n) * (n - 1.0) * s);
}

double wave_kernel_odd_limit0(const KernelQuery& q) {
    check_wave_query(q);
    if (q.n % 2 == 0 || q.n < 3 || q.n > 7)
        throw std::domain_error("wave_kernel_odd_limit0: n must be 3, 5 or 7");
    if (q.r == 0.0) return inf;
    const double w = (q.r / q.t) * (q.r / q.t);
    const double z = (q.t - q.r) * (q.t + q.r) / (q.t * q.t);
    sf::EvalResult F = sf::hyp2f1_cm(0.5, 1.0, 0.5 * (q.n + 1.0), z, w);
    return odd_wave_norm_limit0(q.n) * std::pow(q.t, 1.0 - q.n) *
           std::pow(w, 0.5 * (2.0 - q.n)) * F.value;
}

KernelEval wave_kernel_even_ex(const KernelQuery& q,
                               const NormalizationTable& norms) {
    check_wave_query(q);
    if (q.n % 2 == 1 || q.n < 4 || q.n > 8)
        throw std::domain_error("wave_kernel_even: n must be 4, 6 or 8");
    KernelEval out;
    if (q.r == 0.0) {
        out.value = inf;
        return out;
    }
    const double w = (q.r / q.t) * (q.r / q.t);
    const double z = (q.t - q.r) * (q.t + q.r) / (q.t * q.t);
    sf::EvalResult F = sf::hyp2f1_cm(0.5 * (1.0 - q.k), 0.5 * q.k,
                                     0.5 * (3.0 - q.n), z, w);
    out.value = norms.even_kernel_c(q.n) *
                std::pow((q.t - q.r) * (q.t + q.r), 0.5 * (1.0 - q.n)) * F.value;
    out.diag = F.diag;
    return out;
}

double wave_kernel_even(const KernelQuery& q, const NormalizationTable& norms) {
    return wave_kernel_even_ex(q, norms).value;
}

double wave_kernel_even(const KernelQuery& q) {
    return wave_kernel_even(q, NormalizationTable(q.k));
}

double wave_kernel(const KernelQuery& q) { return wave_kernel_ex(q).value; }

KernelEval wave_kernel_ex(const KernelQuery& q) {
    if (q.n == 2) return wave_kernel_2d_ex(q);
    NormalizationTable norms(q.k);
    if (q.n % 2 == 1) return wave_kernel_odd_ex(q, norms);
    return wave_kernel_even_ex(q, norms);
}

double wave_general_solution(const KernelQuery& q, GeneralSolutionCoeffs coeffs) {
    check_wave_query(q);
    double val = 0.0;
    const double w = (q.r / q.t) * (q.r / q.t);
    const double z = (q.t - q.r) * (q.t + q.r) / (q.t * q.t);
    if (coeffs.A != 0.0) {
        if (q.r == 0.0) return inf; // phi1 ~ r^{2-n} (log for n = 2)
        sf::EvalResult F = sf::hyp2f1_cm(0.5 * (1.0 + q.k), 1.0 - 0.5 * q.k,
                                         0.5 * (q.n + 1.0), z, w);
        val += coeffs.A * std::pow(q.t, 1.0 - q.n) *
               std::pow(w, 0.5 * (2.0 - q.n)) * F.value;
    }
    if (coeffs.B != 0.0) {
        if (q.n % 2 == 1)
            throw std::domain_error(
                "wave_general_solution: phi2 degenerates for odd n (B must be 0)");
        if (q.r == 0.0) return inf;
        sf::EvalResult F = sf::hyp2f1_cm(0.5 * (1.0 - q.k), 0.5 * q.k,
                                         0.5 * (3.0 - q.n), z, w);
        val += coeffs.B * std::pow((q.t - q.r) * (q.t + q.r), 0.5 * (1.0 - q.n)) *
               F.value;
    }
    return val;
}

double ladder_apply(double a, double r, const std::function<double(double)>& inner,
                    double x, double step) {
    if (!(x > 0.0)) throw std::domain_error("ladder_apply: x must be positive");
    if (!(r > 0.0)) throw std::domain_error("ladder_apply: r must be positive");
    if (!(a > 0.0)) throw std::domain_error("ladder_apply: a must be positive");
    if (!(step > 0.0) || step >= x)
        throw std::domain_error("ladder_apply: step must be in (0, x)");
    const double d1 = (inner(x + step) - inner(x - step)) / (2.0 * step);
    const double d2 = (inner(x + 0.5 * step) - inner(x - 0.5 * step)) / step;
    const double deriv = (4.0 * d2 - d1) / 3.0;
    return (x * deriv + a * inner(x)) / (a * r * r);
}

} // namespace skl::kernels
