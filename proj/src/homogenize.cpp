#include "reflect/homogenize.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "reflect/config.hpp"

namespace reflect {

namespace {
constexpr double pi = std::numbers::pi;
}

Mat3 brinkman_tensor(Vec3 x, double mu) {
    const double rho = norm(x);
    if (!(rho > 0.0)) throw std::domain_error("brinkman_tensor evaluated at x = 0");
    if (!(mu >= 0.0)) throw std::domain_error("brinkman_tensor: mu must be nonnegative");
    if (mu == 0.0) return oseen_tensor(x);

    // G = Y(rho) I + lambda^-2 grad grad h(rho),
    //   Y = e^{-lambda rho}/(4 pi rho),  h = (1 - e^{-lambda rho})/(4 pi rho)
    const double lambda = std::sqrt(mu);
    const double E = std::exp(-lambda * rho);
    const double one_minus_E = -std::expm1(-lambda * rho);
    const double Y = E / (4.0 * pi * rho);
    const double hp = lambda * E / (4.0 * pi * rho) - one_minus_E / (4.0 * pi * rho * rho);
    const double hpp = -lambda * lambda * E / (4.0 * pi * rho) -
                       2.0 * lambda * E / (4.0 * pi * rho * rho) +
                       2.0 * one_minus_E / (4.0 * pi * rho * rho * rho);

    const double iso = Y + hp / (lambda * lambda * rho);
    const double dyad = (hpp - hp / rho) / (lambda * lambda);

    Mat3 g;
    const double inv_rho2 = 1.0 / (rho * rho);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) g(i, j) = dyad * x[i] * x[j] * inv_rho2;
    g(0, 0) += iso;
    g(1, 1) += iso;
    g(2, 2) += iso;
    return g;
}

Vec3 stokeslet_pressure_gradient_basis(Vec3 x) {
    const double rho = norm(x);
    if (!(rho > 0.0)) throw std::domain_error("stokeslet pressure evaluated at x = 0");
    return x / (4.0 * pi * rho * rho * rho);
}

std::vector<double> limit_solution(Kernel kernel, double mu, double xi,
                                   const SourceSpec& source, const std::vector<Vec3>& points) {
    if (!(mu > 0.0)) throw std::invalid_argument("limit_solution: mu must be positive");
    if (kernel != Kernel::stokes) {
        // reaction term mu + xi^-2 acts as one effective screening length
        const double inv_xi2 = std::isinf(xi) ? 0.0 : 1.0 / (xi * xi);
        const double xi_eff = 1.0 / std::sqrt(mu + inv_xi2);
        return background_field(source, points, Kernel::yukawa, xi_eff);
    }
    if (source.kind != SourceKind::point)
        throw std::invalid_argument("stokes limit_solution supports point forces only");
    std::vector<double> out;
    out.reserve(points.size() * 3);
    for (const auto& y : points) {
        const Vec3 u = brinkman_tensor(y - source.location, mu) * source.vector_strength;
        out.push_back(u.x);
        out.push_back(u.y);
        out.push_back(u.z);
    }
    return out;
}

double radius_for_capacity(double mu, double d, Kernel kernel) {
    const double denom = kernel == Kernel::stokes ? 6.0 * pi : 4.0 * pi;
    return mu * d * d * d / denom;
}

std::vector<Vec3> fibonacci_sphere(int n, double radius, Vec3 center) {
    std::vector<Vec3> points;
    points.reserve(n);
    const double golden = pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / n;
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * i;
        points.push_back(center + radius * Vec3{rho * std::cos(phi), rho * std::sin(phi), z});
    }
    return points;
}

SweepReport sweep(const SweepSpec& spec) {
    SweepReport report;
    report.spec = spec;
    if (spec.d_list.empty()) return report;

    const int comps = components(spec.kernel);

    std::vector<ParticleConfig> lattices;
    lattices.reserve(spec.d_list.size());
    for (double d : spec.d_list) {
        const double r = radius_for_capacity(spec.mu, d, spec.kernel);
        lattices.push_back(generate_lattice({d, r, spec.box}, spec.kernel, spec.xi));
    }

    // Keep only probes clear of every row's boundary layers.
    std::vector<Vec3> probes;
    for (const auto& p : spec.probes) {
        bool ok = true;
        for (const auto& lattice : lattices) {
            const double clearance = spec.probe_clearance * lattice.particles[0].radius;
            for (const auto& part : lattice.particles) {
                if (norm(p - part.center) <= clearance) {
                    ok = false;
                    break;
                }
            }
            if (!ok) break;
        }
        if (ok) probes.push_back(p);
    }
    if (probes.empty()) throw std::runtime_error("sweep: no probes clear the particle layers");
    report.spec.probes = probes;

    for (std::size_t row_idx = 0; row_idx < spec.d_list.size(); ++row_idx) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto& lattice = lattices[row_idx];

        SweepRow row;
        row.d = spec.d_list[row_idx];
        row.r = lattice.particles[0].radius;
        row.mu = spec.mu;
        row.n_particles = lattice.size();

        const double trunc = spec.kernel == Kernel::yukawa ? spec.truncation : 0.0;
        const InteractionSystem sys = assemble(lattice, spec.source, trunc);
        IterationResult solve = iterate(sys, spec.settings);
        row.converged = solve.trace.converged;
        row.iterations = solve.trace.iterations;

        row.solver_values = evaluate_field(lattice, solve.strengths, spec.source, probes);
        row.limit_values = limit_solution(spec.kernel, spec.mu, spec.xi, spec.source, probes);

        double diff2 = 0.0, ref2 = 0.0, worst = 0.0;
        for (std::size_t p = 0; p < probes.size(); ++p) {
            double dp = 0.0, rp = 0.0;
            for (int c = 0; c < comps; ++c) {
                const double dv = row.solver_values[p * comps + c] - row.limit_values[p * comps + c];
                dp += dv * dv;
                rp += row.limit_values[p * comps + c] * row.limit_values[p * comps + c];
            }
            diff2 += dp;
            ref2 += rp;
            worst = std::max(worst, std::sqrt(dp));
        }
        const double ref_rms = std::sqrt(ref2 / probes.size());
        row.probe_rms_error = std::sqrt(diff2 / probes.size()) / ref_rms;
        row.max_error = worst / ref_rms;

        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace reflect
