#ifndef SKL_SPECFUN_HPP
#define SKL_SPECFUN_HPP

#include <optional>
#include <string_view>

// Gamma-family and hypergeometric evaluators used by the kernel and solver
// layers. All functions are pure and thread-safe; domain violations throw
// std::domain_error, overflow throws std::overflow_error, and soft failures
// (series not converged within the term budget) are reported through
// EvalDiagnostics::valid instead of an exception.

namespace skl::specfun {

inline constexpr double euler_gamma = 0.577215664901532860606512090082402431;

/// Truncation policy for the hypergeometric series.
struct SeriesControl {
    double rel_tol = 1e-13;
    double abs_floor = 1e-300;
    int max_terms = 600;
};

/// Which evaluation route produced a value. Recorded on every call.
enum class Branch {
    direct_series,     // power series (for U: the two-series combination)
    connection_formula, // 2F1 mapped to argument 1-z, non-integer c-a-b
    log_series,        // 2F1 near z=1 with integer c-a-b (logarithmic case)
    integral_rep,      // U via its Laplace integral representation
    gauss_point,       // closed form at z=1
    euler_transform    // (1-z)^{c-a-b} * F(c-a,c-b;c;z) rearrangement
};

std::string_view branch_name(Branch b);

struct EvalDiagnostics {
    int terms_used = 0;
    Branch branch = Branch::direct_series;
    double est_error = 0.0; // relative
    bool valid = true;
};

struct EvalResult {
    double value = 0.0;
    EvalDiagnostics diag;
};

/// Argument bundle for the hypergeometric evaluators; b is absent for the
/// confluent functions.
struct HypergeomArgs {
    double a = 0.0;
    std::optional<double> b;
    double c = 0.0;
    double z = 0.0;
};

/// ln|Gamma(x)| with the sign of Gamma(x) written to *sign_out (if non-null).
/// Poles at x = 0, -1, -2, ... throw.
double log_gamma(double x, int* sign_out = nullptr);

/// Gamma(x) by exponentiating log_gamma; overflows to +/-inf honestly.
double gamma_fn(double x);

/// Digamma psi(x); poles at nonpositive integers throw.
double digamma(double x);

/// Rising factorial (a)_m as a running product (exact at integer-spaced a).
double pochhammer(double a, int m);

/// m!! with (-1)!! = 0!! = 1; m < -1 throws.
double double_factorial(int m);

/// Kummer's 1F1(a;c;z). Negative z is routed through the Kummer transform
/// e^z 1F1(c-a;c;-z) so the series stays sign-definite.
EvalResult hyp1f1(double a, double c, double z, const SeriesControl& ctl = {});
EvalResult hyp1f1(const HypergeomArgs& args, const SeriesControl& ctl = {});

/// Tricomi U(a,c,z) for a >= 0, z > 0. Non-integer c uses the two-series
/// combination; c within 1e-6 of an integer (or a catastrophic cancellation
/// between the two series, amplification > 1e8) falls back to the Laplace
/// integral representation, valid for a > 0. U(0,c,z) = 1 exactly.
EvalResult hypU(double a, double c, double z, const SeriesControl& ctl = {});
EvalResult hypU(const HypergeomArgs& args, const SeriesControl& ctl = {});

/// Gauss 2F1(a,b;c;z) on z in [0,1). Dispatch: z <= 0.5 direct series;
/// z > 0.5 connection formula when c-a-b is more than 1e-6 from an integer,
/// otherwise the logarithmic series for the integer case. Terminating
/// series (a or b a nonpositive integer) are summed directly for any z.
EvalResult hyp2f1(double a, double b, double c, double z,
                  const SeriesControl& ctl = {});
EvalResult hyp2f1(const HypergeomArgs& args, const SeriesControl& ctl = {});

/// Internal-precision variant: callers that know 1-z exactly (kernels near
/// the light cone) pass it to avoid the 1-z rounding loss.
EvalResult hyp2f1_cm(double a, double b, double c, double z, double one_minus_z,
                     const SeriesControl& ctl = {});

/// 2F1(a,b;c;1) = Gamma(c)Gamma(c-a-b) / (Gamma(c-a)Gamma(c-b)), requires
/// a+b-c < 0; computed in log space with sign tracking.
double hyp2f1_at_one(double a, double b, double c);

} // namespace skl::specfun

#endif
