#include <stdexcept>
#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <omp.h>
#include <random>

#include "doctest.h"
#include "reflect/diagnostics.hpp"
#include "reflect/engine.hpp"
#include "reflect/oracle.hpp"

using namespace reflect;

namespace {

constexpr double pi = std::numbers::pi;

ParticleConfig single_sphere(double r = 0.1) {
    ParticleConfig c;
    c.particles = {{{0, 0, 0}, r}};
    return c;
}

ParticleConfig pair_spheres(double r = 0.1, double dist = 1.0) {
    ParticleConfig c;
    c.particles = {{{0, 0, 0}, r}, {{dist, 0, 0}, r}};
    return c;
}

// Source whose field value is 1 at both centers of pair_spheres: used for the
// hand-checkable 2x2 recurrences.
InteractionSystem pair_system_unit_rhs() {
    InteractionSystem sys = assemble_operator(pair_spheres());
    sys.rhs = {1.0, 1.0};
    return sys;
}

Eigen::MatrixXd dense_of(const InteractionSystem& sys) {
    const std::size_t n = sys.size() * sys.comps;
    Eigen::MatrixXd A(n, n);
    Strengths e;
    e.comps = sys.comps;
    e.data.assign(n, 0.0);
    std::vector<double> col;
    for (std::size_t j = 0; j < n; ++j) {
        e.data[j] = 1.0;
        apply_interaction(sys, e, col);
        for (std::size_t i = 0; i < n; ++i) A(i, j) = col[i];
        e.data[j] = 0.0;
    }
    return A;
}

}  // namespace

TEST_CASE("assembly of small systems") {
    auto sys1 = assemble(single_sphere(), SourceSpec::point_charge({5, 0, 0}, 1.0));
    CHECK(sys1.diag.size() == 1);
    CHECK(sys1.diag[0] == doctest::Approx(10.0));

    auto sys2 = assemble_operator(pair_spheres());
    CHECK(sys2.diag[0] == doctest::Approx(10.0));
    // off-diagonal coupling at unit distance is 1 in the bare-profile convention
    Strengths s{1, {0.0, 1.0}};
    std::vector<double> out;
    apply_interaction(sys2, s, out);
    CHECK(out[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(out[1] == doctest::Approx(10.0).epsilon(1e-15));

    CHECK_THROWS_AS(assemble_operator(pair_spheres(), 3.0), std::invalid_argument);
    auto yuk = pair_spheres();
    yuk.kernel = Kernel::yukawa;
    yuk.xi = 0.5;
    CHECK_NOTHROW(assemble_operator(yuk, 3.0));
}

TEST_CASE("apply_interaction basics") {
    auto sys = pair_system_unit_rhs();
    Strengths zero{1, {0.0, 0.0}};
    std::vector<double> out;
    apply_interaction(sys, zero, out);
    CHECK(out == std::vector<double>{0.0, 0.0});

    Strengths ones{1, {1.0, 1.0}};
    apply_interaction(sys, ones, out);
    CHECK(out[0] == doctest::Approx(11.0).epsilon(1e-15));
    CHECK(out[1] == doctest::Approx(11.0).epsilon(1e-15));
}

TEST_CASE("reflect_step hand recurrence") {
    auto sys = pair_system_unit_rhs();
    IterationSettings plain;
    Strengths s{1, {0.0, 0.0}};
    s = reflect_step(sys, s, plain);
    CHECK(s.data[0] == doctest::Approx(-0.1).epsilon(1e-15));
    CHECK(s.data[1] == doctest::Approx(-0.1).epsilon(1e-15));
    s = reflect_step(sys, s, plain);
    CHECK(s.data[0] == doctest::Approx(-0.09).epsilon(1e-14));
    CHECK(s.data[1] == doctest::Approx(-0.09).epsilon(1e-14));

    // single sphere cancels its boundary in one sweep
    auto one = assemble_operator(single_sphere());
    one.rhs = {1.0};
    Strengths t{1, {0.0}};
    t = reflect_step(one, t, plain);
    CHECK(t.data[0] == doctest::Approx(-0.1).epsilon(1e-15));
    CHECK(boundary_residual(one, t).max == doctest::Approx(0.0));
}

TEST_CASE("damped with gamma 1 equals plain") {
    auto sys = pair_system_unit_rhs();
    IterationSettings plain;
    IterationSettings damped{Scheme::damped, 1.0, 200, 1e-10, false};
    Strengths s{1, {0.2, -0.3}};
    auto a = reflect_step(sys, s, plain);
    auto b = reflect_step(sys, s, damped);
    CHECK(a.data == b.data);
}

TEST_CASE("two-sphere iteration converges at the jacobi rate") {
    auto sys = pair_system_unit_rhs();
    IterationSettings settings;
    settings.tol = 1e-12;
    settings.max_iter = 100;
    auto result = iterate(sys, settings);
    CHECK(result.trace.converged);
    CHECK(result.strengths.data[0] == doctest::Approx(-1.0 / 11.0).epsilon(1e-10));
    CHECK(result.strengths.data[1] == doctest::Approx(-1.0 / 11.0).epsilon(1e-10));

    // residual contracts by r/d = 0.1 per sweep (checked above the rounding floor)
    const auto& res = result.trace.residual_max;
    for (std::size_t k = 1; k + 1 < res.size() && res[k] > 1e-9; ++k)
        CHECK(res[k + 1] / res[k] == doctest::Approx(0.1).epsilon(5e-5));

    // single sphere: one step, exact zero residual
    auto one = assemble_operator(single_sphere());
    one.rhs = {2.5};
    auto r1 = iterate(one, IterationSettings{});
    CHECK(r1.trace.converged);
    CHECK(r1.trace.iterations == 1);
    CHECK(r1.trace.residual_max.back() == 0.0);
}

TEST_CASE("plain scheme diverges on a dense cluster and reports it") {
    // 3x3x3 cluster, r/d = 0.2: the normalized operator norm exceeds 2
    auto cluster = generate_lattice({1.0, 0.2, {{-1, -1, -1}, {1, 1, 1}}});
    auto spectrum = jacobi_spectrum(cluster, Scheme::plain);
    CHECK(spectrum.iteration_spectral_radius > 1.0);

    auto sys = assemble(cluster, SourceSpec::point_charge({0.13, 0.21, 0.34}, 10.0));
    IterationSettings settings;
    settings.max_iter = 100;
    auto result = iterate(sys, settings);
    CHECK(result.trace.diverged);
    CHECK_FALSE(result.trace.converged);

    // damped with the default gamma = 1/lambda_hat recovers convergence
    IterationSettings damped{Scheme::damped, 0.0, 1000, 1e-8, false};
    auto rescued = iterate(sys, damped);
    CHECK(rescued.trace.converged);
    const double lambda = estimate_norm(sys, false);
    CHECK(rescued.trace.gamma_used == doctest::Approx(1.0 / lambda));
}

TEST_CASE("iterate matches the explicit matrix recurrence") {
    // convergent instance: the engine must take all 20 sweeps, not bail out
    // through the divergence detector
    auto config = generate_random(60, 0.004, 2.0, {{0, 0, 0}, {1, 1, 1}}, 99);
    REQUIRE(traytak_bound(config) < 1.0);
    auto sys = assemble(config, SourceSpec::point_charge({0.5, 0.5, 0.5}, 1.0));
    const Eigen::MatrixXd A = dense_of(sys);
    const Eigen::Map<const Eigen::VectorXd> b(sys.rhs.data(), sys.rhs.size());
    const Eigen::VectorXd dinv = A.diagonal().cwiseInverse();

    IterationSettings settings;
    settings.max_iter = 20;
    settings.tol = 1e-300;  // force all 20 sweeps
    auto result = iterate(sys, settings);

    Eigen::VectorXd s = Eigen::VectorXd::Zero(b.size());
    for (int k = 0; k < 20; ++k) s -= dinv.asDiagonal() * (A * s + b);
    for (std::size_t i = 0; i < sys.size(); ++i)
        CHECK(result.strengths.data[i] == doctest::Approx(s(i)).epsilon(1e-12));
}

TEST_CASE("recorded corrections telescope to the iterate") {
    auto config = generate_random(25, 0.015, 2.0, {{0, 0, 0}, {1, 1, 1}}, 5);
    auto sys = assemble(config, SourceSpec::point_charge({0.4, 0.6, 0.3}, 2.0));
    IterationSettings settings;
    settings.max_iter = 30;
    settings.tol = 1e-300;
    settings.record_corrections = true;
    auto result = iterate(sys, settings);
    REQUIRE(result.corrections.size() == 31);

    std::vector<double> sum(sys.size(), 0.0);
    for (const auto& c : result.corrections)
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += c.data[i];
    for (std::size_t i = 0; i < sum.size(); ++i)
        CHECK(sum[i] == doctest::Approx(result.strengths.data[i]).epsilon(1e-12));
}

TEST_CASE("damping by 1/lambda_hat is non-expansive on the range") {
    auto config = generate_random(40, 0.02, 2.0, {{0, 0, 0}, {1, 1, 1}}, 21);
    auto sys = assemble_operator(config);
    const double lambda = estimate_norm(sys, false);
    const double gamma = 1.0 / lambda;

    const Eigen::MatrixXd A = dense_of(sys);
    const Eigen::VectorXd dih = A.diagonal().cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd M = dih.asDiagonal() * A * dih.asDiagonal();

    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd w(A.rows());
        for (int i = 0; i < w.size(); ++i) w(i) = g(rng);
        const Eigen::VectorXd v = M * w;  // in the range of M
        CHECK(((v - gamma * (M * v)).norm()) <= v.norm() * (1.0 + 1e-10));
    }
}

TEST_CASE("matvec is bitwise reproducible across thread counts") {
    auto config = generate_lattice({1.0, 0.1, {{-2, -2, -2}, {2, 2, 2}}}, Kernel::yukawa, 1.5);
    auto sys = assemble(config, SourceSpec::point_charge({0.2, 0.1, 0.4}, 1.0));
    Strengths s = zero_strengths(sys);
    for (std::size_t k = 0; k < s.data.size(); ++k) s.data[k] = std::sin(0.1 * k);

    const int saved = omp_get_max_threads();
    std::vector<double> out1, out2, out_serial;
    omp_set_num_threads(1);
    apply_interaction(sys, s, out1);
    omp_set_num_threads(2);
    apply_interaction(sys, s, out2);
    omp_set_num_threads(saved);
    apply_interaction_serial(sys, s, out_serial);

    CHECK(out1 == out2);
    CHECK(out1 == out_serial);

    IterationSettings settings{Scheme::damped, 0.0, 50, 1e-9, false};
    omp_set_num_threads(1);
    auto r1 = iterate(sys, settings);
    omp_set_num_threads(2);
    auto r2 = iterate(sys, settings);
    omp_set_num_threads(saved);
    CHECK(r1.strengths.data == r2.strengths.data);
    CHECK(r1.trace.residual_max == r2.trace.residual_max);
}

TEST_CASE("truncated matvec stays within the yukawa tail bound") {
    const double xi = 0.5, rcut = 3.0;
    auto config = generate_lattice({1.0, 0.1, {{-2, -2, -2}, {2, 2, 2}}}, Kernel::yukawa, xi);
    auto source = SourceSpec::point_charge({0.3, 0.2, 0.1}, 1.0);
    auto full = assemble(config, source);
    auto truncated = assemble(config, source, rcut);

    Strengths s = zero_strengths(full);
    for (std::size_t k = 0; k < s.data.size(); ++k) s.data[k] = 1.0 + 0.01 * (k % 5);

    std::vector<double> ref, cut;
    apply_interaction(full, s, ref);
    apply_interaction(truncated, s, cut);

    double max_rel = 0.0, scale = 0.0;
    for (double v : ref) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < ref.size(); ++i)
        max_rel = std::max(max_rel, std::abs(ref[i] - cut[i]) / scale);
    CHECK(max_rel <= std::exp(-rcut / xi));
    CHECK(max_rel > 0.0);  // something was actually dropped
}

TEST_CASE("evaluate_field") {
    auto config = pair_spheres();
    auto source = SourceSpec::point_charge({0, 0, 5}, 3.0);
    Strengths zero{1, {0.0, 0.0}};
    const std::vector<Vec3> pts{{1, 1, 1}, {-2, 0, 0.5}};
    auto u = evaluate_field(config, zero, source, pts);
    auto bg = background_field(source, pts, config.kernel, config.xi);
    CHECK(u == bg);

    CHECK_THROWS_AS(evaluate_field(config, zero, source, {{0, 0, 0}}), std::domain_error);
}

TEST_CASE("single sphere surface value vanishes where the background equals its center value") {
    // point source at distance rho0; on the circle |y - z| = rho0 of the
    // sphere surface the background matches its center value exactly, so the
    // converged monopole cancels it to rounding
    const double r = 0.1, rho0 = 2.0;
    auto config = single_sphere(r);
    auto source = SourceSpec::point_charge({rho0, 0, 0}, 7.0);
    auto result = iterate(assemble(config, source), IterationSettings{});
    REQUIRE(result.trace.converged);

    const double cos_alpha = r / (2.0 * rho0);
    const Vec3 y{r * cos_alpha, r * std::sqrt(1.0 - cos_alpha * cos_alpha), 0.0};
    CHECK(std::abs(norm(y - Vec3{rho0, 0, 0}) - rho0) < 1e-14);  // geometry sanity
    auto u = evaluate_field(config, result.strengths, source, {y});
    const double b = 7.0 * yukawa_kernel({rho0, 0, 0}, infinite_xi);
    CHECK(std::abs(u[0]) <= 1e-14 * std::abs(b));
}

TEST_CASE("far field reduces to a single monopole") {
    auto config = generate_random(5, 0.05, 2.0, {{0, 0, 0}, {1, 1, 1}}, 55);
    auto source = SourceSpec::point_charge({0.5, 0.5, 0.5}, 4.0 * pi);
    auto result = iterate(assemble(config, source), IterationSettings{Scheme::plain, 0, 300, 1e-11, false});
    REQUIRE(result.trace.converged);

    double total = 0.0;
    for (double s : result.strengths.data) total += s;
    const double diam = std::sqrt(3.0);
    const Vec3 far{100.0 * diam, 17.0, -9.0};
    auto u = evaluate_field(config, result.strengths, source, {far});
    const double approx =
        4.0 * pi * yukawa_kernel(far - Vec3{0.5, 0.5, 0.5}, infinite_xi) + total / norm(far);
    CHECK(u[0] == doctest::Approx(approx).epsilon(0.01));
}

TEST_CASE("boundary residual") {
    auto sys = pair_system_unit_rhs();
    Strengths zero{1, {0.0, 0.0}};
    auto norms = boundary_residual(sys, zero);
    CHECK(norms.max == doctest::Approx(1.0));
    CHECK(norms.rms == doctest::Approx(1.0));

    IterationSettings settings;
    settings.max_iter = 6;
    settings.tol = 1e-300;
    auto result = iterate(sys, settings);
    auto after = boundary_residual(sys, result.strengths);
    CHECK(after.max == doctest::Approx(std::pow(0.1, 6)).epsilon(1e-6));
}

TEST_CASE("estimate_norm") {
    auto single = single_sphere();
    CHECK(estimate_norm(single, false) == doctest::Approx(1.0).epsilon(1e-9));

    auto sys = assemble_operator(pair_spheres());
    CHECK(estimate_norm(sys, false) == doctest::Approx(1.1).epsilon(1e-6));

    auto lattice = generate_lattice({1.0, 0.1, {{-2, -2, -2}, {2, 2, 2}}});
    const double power = estimate_norm(lattice, false);
    const auto spectrum = jacobi_spectrum(lattice, Scheme::plain);
    CHECK(power == doctest::Approx(spectrum.max_eigenvalue).epsilon(1e-5));

    // cutoff-weighted norm matches the dense weighted eigensolve too
    auto sys_lat = assemble_operator(lattice);
    const double wpower = estimate_norm(sys_lat, true);
    const auto wspec = jacobi_spectrum(lattice, Scheme::cutoff_damped);
    CHECK(wpower == doctest::Approx(wspec.max_eigenvalue).epsilon(1e-4));
}

TEST_CASE("stokes pair agrees with the dense reference") {
    ParticleConfig config;
    config.kernel = Kernel::stokes;
    config.particles = {{{0, 0, 0}, 0.1}, {{0.7, 0.4, -0.2}, 0.15}};
    auto source = SourceSpec::uniform_flow({0.3, -1.0, 0.25});
    auto sys = assemble(config, source);

    IterationSettings settings;
    settings.max_iter = 400;
    settings.tol = 1e-13;
    auto iterated = iterate(sys, settings);
    REQUIRE(iterated.trace.converged);
    auto direct = dense_solve(sys);
    for (std::size_t k = 0; k < direct.data.size(); ++k)
        CHECK(iterated.strengths.data[k] == doctest::Approx(direct.data[k]).epsilon(1e-8));
}
