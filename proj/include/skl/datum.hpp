#ifndef SKL_DATUM_HPP
#define SKL_DATUM_HPP

#include "skl/quadrature.hpp"

#include <span>
#include <string>
#include <variant>
#include <vector>

// Cauchy data: preset closed-form families (all radial about their own
// center) plus tensor-grid samples, and the spherical-mean operator
//   f_X^#(r) = Int_{S^{n-1}} f(X + r w) dw   (unnormalized; total weight
// omega_{n-1}), which is what the radial solution formulas consume.

namespace skl::solvers {

struct GaussianDatum {
    std::vector<double> center;
    double width = 1.0;     // f = amp * exp(-|Y-C|^2 / (2 width^2))
    double amplitude = 1.0;
};

struct BumpDatum {
    std::vector<double> center;
    double radius = 1.0;    // f = amp * exp(1 - 1/(1-s^2)), s = |Y-C|/radius < 1
    double amplitude = 1.0;
};

struct RadialPolyDatum {
    std::vector<double> center;
    std::vector<double> coeffs; // f = sum_j coeffs[j] |Y-C|^{2j}
};

/// Samples on a full tensor-product lattice; axes are inferred from the
/// sample coordinates. Evaluation outside the lattice range is an error,
/// never an extrapolation.
struct GridDatum {
    std::vector<std::vector<double>> axes;  // sorted unique coords per axis
    std::vector<double> values;             // row-major over axes
    int interp_order = 1;                   // 1 (multilinear) or 3 (cubic)

    /// Build from scattered rows (points[i] is an n-vector); the rows must
    /// fill a complete tensor lattice.
    static GridDatum from_samples(const std::vector<std::vector<double>>& points,
                                  const std::vector<double>& values,
                                  int interp_order);
    /// CSV with header x1,...,xn,value, one sample per row.
    static GridDatum from_csv(const std::string& path, int interp_order);

    int dim() const { return static_cast<int>(axes.size()); }
    double eval(std::span<const double> y) const;
};

class InitialDatum {
public:
    InitialDatum() = default;
    InitialDatum(GaussianDatum g, bool exact_spherical_mean = true);
    explicit InitialDatum(BumpDatum b);
    explicit InitialDatum(RadialPolyDatum p);
    explicit InitialDatum(GridDatum g);

    int dim() const;         // 0 for dimension-free radial presets
    bool is_radial() const;  // radial about its own center
    bool exact_spherical_mean() const { return exact_mean_; }
    void set_exact_spherical_mean(bool v) { exact_mean_ = v; }

    const std::vector<double>& center() const;

    /// Point evaluation f(Y).
    double operator()(std::span<const double> y) const;

    /// Radial profile about the center (radial kinds only).
    double profile(double s) const;

    const std::variant<std::monostate, GaussianDatum, BumpDatum,
                       RadialPolyDatum, GridDatum>& kind() const {
        return kind_;
    }

private:
    std::variant<std::monostate, GaussianDatum, BumpDatum, RadialPolyDatum,
                 GridDatum> kind_;
    bool exact_mean_ = false;
};

/// Unnormalized spherical mean of the datum over the sphere |Y-X| = r in
/// R^n. Closed form when the datum is radial about X (and, for Gaussians
/// with the exact flag, about any center); otherwise a 1-D reduction for
/// radial data or the product polar rule for grid data.
double spherical_mean(const InitialDatum& datum, std::span<const double> X,
                      double r, int n, const quad::QuadratureSpec& spec);

/// Force the generic quadrature path (used by cross-check tests).
double spherical_mean_numeric(const InitialDatum& datum,
                              std::span<const double> X, double r, int n,
                              const quad::QuadratureSpec& spec);

} // namespace skl::solvers

#endif
