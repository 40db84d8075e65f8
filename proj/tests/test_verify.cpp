#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "skl/kernels.hpp"
#include "skl/solvers.hpp"
#include "skl/verify.hpp"

#include <cmath>
#include <numbers>

using namespace skl;
using namespace skl::verify;
namespace kn = skl::kernels;
namespace sv = skl::solvers;

static double norm2v(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

TEST_CASE("residual_heat: the kernel solves its equation at second order") {
    const int n = 3;
    const double k = 0.5, t = 0.5, r = 0.7;
    std::vector<double> X{r, 0.0, 0.0};
    Field field = [&](double tt, std::span<const double> Y) {
        return kn::heat_kernel({n, k, tt, norm2v(Y)});
    };
    ResidualReport rep = residual_heat(field, n, k, t, X, 1e-2 * t);
    CHECK(rep.valid);
    REQUIRE(rep.residuals.size() == 4);
    for (size_t i = 1; i < rep.steps.size(); ++i)
        CHECK(rep.steps[i] < rep.steps[i - 1]);
    CHECK(rep.est_order >= 1.9);
    CHECK(rep.residuals.back() <= 1e-5);
}

TEST_CASE("residual_heat: t^k H under the classical operator") {
    const int n = 3;
    const double k = 0.6, t = 0.5;
    std::vector<double> X{0.7, 0.0, 0.0};
    Field field = [&](double tt, std::span<const double> Y) {
        return kn::scaled_heat_kernel({n, k, tt, norm2v(Y)});
    };
    ResidualReport rep = residual_classical_heat(field, n, t, X, 1e-2 * t);
    CHECK(rep.est_order >= 1.9);
    // and the classical kernel under its own equation
    Field cls = [&](double tt, std::span<const double> Y) {
        return kn::classical_heat_kernel({n, 0.0, tt, norm2v(Y)});
    };
    ResidualReport rep2 = residual_classical_heat(cls, n, t, X, 1e-2 * t);
    CHECK(rep2.est_order >= 1.9);
}

TEST_CASE("residual_heat: both general-solution branches solve the equation") {
    const int n = 3;
    const double k = 0.6, t = 0.5, r = 0.7;
    std::vector<double> X{0.0, r, 0.0};
    for (bool bbranch : {false, true}) {
        Field field = [&](double tt, std::span<const double> Y) {
            kn::GeneralSolutionCoeffs c{bbranch ? 0.0 : 1.0, bbranch ? 1.0 : 0.0};
            return kn::heat_general_solution({n, k, tt, norm2v(Y)}, c);
        };
        ResidualReport rep = residual_heat(field, n, k, t, X, 1e-2 * t);
        CHECK(rep.est_order >= 1.9);
    }
}

TEST_CASE("residual_wave: kernels and general-solution branches") {
    const int n = 3;
    const double k = 0.4, t = 1.0, r = 0.3;
    std::vector<double> X{r, 0.0, 0.0};
    Field kernel = [&](double tt, std::span<const double> Y) {
        return kn::wave_kernel({n, k, tt, norm2v(Y)});
    };
    ResidualReport rep = residual_wave(kernel, n, k, t, X, 2e-3 * t);
    CHECK(rep.valid);
    CHECK(rep.est_order >= 1.9);

    Field phi1 = [&](double tt, std::span<const double> Y) {
        return kn::wave_general_solution({n, k, tt, norm2v(Y)}, {1.0, 0.0});
    };
    CHECK(residual_wave(phi1, n, k, t, X, 2e-3 * t).est_order >= 1.9);

    Field phi2 = [&](double tt, std::span<const double> Y) {
        return kn::wave_general_solution({4, k, tt, norm2v(Y)}, {0.0, 1.0});
    };
    std::vector<double> X4{r, 0.0, 0.0, 0.0};
    CHECK(residual_wave(phi2, 4, k, t, X4, 2e-3 * t).est_order >= 1.9);

    // classical plane kernel at k = 0 under the classical wave operator
    Field cls = [&](double tt, std::span<const double> Y) {
        return kn::classical_wave_kernel({3, 0.0, tt, norm2v(Y)});
    };
    CHECK(residual_wave(cls, 3, 0.0, t, X, 2e-3 * t).est_order >= 1.9);
}

TEST_CASE("residual stencil leaving the light cone is flagged invalid") {
    Field kernel = [&](double tt, std::span<const double> Y) {
        return kn::wave_kernel({2, 0.5, tt, norm2v(Y)});
    };
    std::vector<double> X{0.999, 0.0};
    ResidualReport rep = residual_wave(kernel, 2, 0.5, 1.0, X, 5e-2);
    CHECK_FALSE(rep.valid);
}

TEST_CASE("solver fields do NOT solve the equation pointwise (measured law)") {
    // with a locally constant datum the solution is w = t, so the wave
    // residual equals k(1-k)/t; the published solution-theorem claim fails
    // by exactly this amount
    for (int n : {2, 3, 4}) {
        double dev = solver_residual_characterization(n, 0.4);
        CHECK(dev <= 1e-4);
    }
}

TEST_CASE("limit_ladder: heat and wave classical limits") {
    LimitRequest req;
    req.target = LimitTarget::heat_k0;
    req.n = 2;
    for (int j = 6; j <= 12; ++j) req.ladder.push_back(std::pow(2.0, -j));
    req.probes_tr = {{0.5, 0.7}, {1.0, 1.2}};
    LimitReport rep = limit_ladder(req);
    REQUIRE(rep.distances.size() == req.ladder.size());
    CHECK(rep.monotone);
    CHECK(rep.est_rate == doctest::Approx(1.0).epsilon(0.1)); // O(k) halving

    req.target = LimitTarget::wave_k0;
    req.n = 4;
    req.probes_tr = {{1.0, 0.3}, {1.0, 0.6}};
    LimitReport wrep = limit_ladder(req);
    CHECK(wrep.est_rate == doctest::Approx(1.0).epsilon(0.1));

    // ladders must strictly decrease
    LimitRequest bad = req;
    bad.ladder = {0.1, 0.1};
    CHECK_THROWS_AS(limit_ladder(bad), std::invalid_argument);
}

TEST_CASE("limit_ladder: initial-condition targets") {
    sv::GaussianDatum g;
    g.center = {0.0, 0.0};
    g.width = 0.8;
    g.amplitude = 1.0;

    LimitRequest req;
    req.target = LimitTarget::heat_ic;
    req.n = 2;
    req.k = 0.5;
    for (int j = 0; j <= 8; ++j) req.ladder.push_back(std::pow(4.0, -j));
    req.datum = sv::InitialDatum(g);
    req.X = {0.15, 0.0};
    LimitReport rep = limit_ladder(req);
    CHECK(rep.monotone);
    CHECK(rep.distances.back() <= 1e-3);

    LimitRequest w0 = req;
    w0.target = LimitTarget::wave_ic0;
    w0.ladder.clear();
    for (int j = 2; j <= 11; ++j) w0.ladder.push_back(std::pow(2.0, -j));
    LimitReport w0rep = limit_ladder(w0);
    CHECK(w0rep.distances.back() <= 1e-3);

    LimitRequest w1 = req;
    w1.target = LimitTarget::wave_ic1;
    w1.ladder = {1e-3};
    LimitReport w1rep = limit_ladder(w1);
    CHECK(w1rep.distances.back() <= 1e-3);
}

TEST_CASE("recursion_check: single step and chain on a cone-interior grid") {
    std::vector<std::pair<double, double>> grid;
    for (double t : {0.8, 1.0, 1.2})
        for (double q : {0.1, 0.3, 0.5, 0.7}) grid.emplace_back(t, q * t);
    RecursionReport rep = recursion_check(4, 0.4, grid);
    CHECK(rep.step_constant == doctest::Approx(-2.0 * std::numbers::pi));
    CHECK(rep.max_rel_step <= 1e-6);
    CHECK(rep.max_rel_chain <= 1e-6);
    RecursionReport rep5 = recursion_check(4, 0.5, grid);
    CHECK(rep5.max_rel_chain <= 1e-6);
    CHECK_THROWS_AS(recursion_check(3, 0.4, grid), std::domain_error);

    // near k = 0 the chain lands on the classical prefactor relation
    RecursionReport rep0 = recursion_check(4, std::pow(2.0, -12), grid);
    CHECK(rep0.max_rel_step <= 1e-6);
}

TEST_CASE("u_identity_check: antiderivative identity on a z grid") {
    const std::vector<double> zg{0.5, 1.0, 2.0, 4.0};
    CHECK(u_identity_check(0.5, 1.5, zg) <= 1e-6);
    // a = 0: the right side reduces to e^{-z} z^{c-1}
    CHECK(u_identity_check(0.0, 1.5, zg) <= 1e-6);
    // large z: both sides ~ e^{-z} z^{c-a-1}
    const std::vector<double> zl{60.0, 80.0};
    CHECK(u_identity_check(0.5, 1.5, zl) <= 1e-5);
}

TEST_CASE("acceptance suite: quick configuration is deterministic") {
    AcceptanceConfig cfg;
    cfg.quick = true;
    auto r1 = run_acceptance_suite(cfg);
    auto r2 = run_acceptance_suite(cfg);
    REQUIRE(r1.size() == 10);
    for (size_t i = 0; i < r1.size(); ++i) {
        CHECK(r1[i].pass == r2[i].pass);
        CHECK(r1[i].metric == r2[i].metric);
    }
    // every criterion either passes or is the documented defect
    for (const auto& r : r1) CHECK((r.pass || r.expected_fail));
}
