#include "reflect/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace reflect {

namespace {

// Index of the particle closest to the cloud centroid; the screening sums
// are taken around it.
std::size_t central_particle(const ParticleConfig& config) {
    Vec3 centroid{};
    for (const auto& p : config.particles) centroid += p.center;
    centroid = centroid / static_cast<double>(config.size());
    std::size_t best = 0;
    double best_dist = norm(config.particles[0].center - centroid);
    for (std::size_t i = 1; i < config.size(); ++i) {
        const double d = norm(config.particles[i].center - centroid);
        if (d < best_dist) {
            best_dist = d;
            best = i;
        }
    }
    return best;
}

// Exterior field of a sphere held at boundary value one, evaluated at
// distance rho from its center: (r/rho) for laplace,
// r e^{r/xi} e^{-rho/xi} / rho for yukawa, and the drag-normalized operator
// norm (3/2)(r/rho) for stokes.
double unit_boundary_potential(double r, double rho, Kernel kernel, double xi) {
    switch (kernel) {
        case Kernel::laplace: return r / rho;
        case Kernel::yukawa:
            if (std::isinf(xi)) return r / rho;
            return r * std::exp((r - rho) / xi) / rho;
        case Kernel::stokes: return 1.5 * r / rho;
    }
    return 0.0;
}

}  // namespace

double traytak_bound(const ParticleConfig& config) {
    validate_disjoint(config);
    const std::size_t n = config.size();
    double worst = 0.0;
#pragma omp parallel for schedule(static) reduction(max : worst)
    for (long ii = 0; ii < static_cast<long>(n); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        double sum = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (k == i) continue;
            const double rho = norm(config.particles[i].center - config.particles[k].center);
            const double ratio = config.particles[k].radius / rho;
            sum += ratio / (1.0 - ratio);
        }
        worst = std::max(worst, sum);
    }
    return worst;
}

double theta(const ParticleConfig& config, double R) {
    if (config.size() == 0) throw std::invalid_argument("theta: empty config");
    if (!(R > 0.0)) throw std::invalid_argument("theta: R must be positive");
    const std::size_t c = central_particle(config);
    const Vec3 xc = config.particles[c].center;
    const double rc = config.particles[c].radius;

    // serial fixed-order sum: the value feeds a bisection, so it must not
    // depend on the thread count
    double sum = 0.0;
    for (std::size_t j = 0; j < config.size(); ++j) {
        if (j == c) continue;
        const double rho = norm(config.particles[j].center - xc);
        if (rho > R) continue;
        // evaluate at the central sphere's surface point facing particle j
        sum += unit_boundary_potential(config.particles[j].radius, rho - rc, config.kernel,
                                       config.xi);
    }
    return sum;
}

double screening_length(const ParticleConfig& config) {
    if (config.size() == 0) throw std::invalid_argument("screening_length: empty config");
    const std::size_t c = central_particle(config);
    const Vec3 xc = config.particles[c].center;

    double rho_max = 0.0;
    for (const auto& p : config.particles) rho_max = std::max(rho_max, norm(p.center - xc));
    if (rho_max == 0.0 || theta(config, rho_max * (1.0 + 1e-12)) < 1.0)
        return std::numeric_limits<double>::infinity();

    double lo = 0.0, hi = rho_max * (1.0 + 1e-12);
    for (int it = 0; it < 200 && (hi - lo) > 1e-12 * rho_max; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= 0.0) break;
        if (theta(config, mid) < 1.0)
            lo = mid;
        else
            hi = mid;
    }
    // hi is the smallest radius with theta >= 1; the sup of the sub-unit
    // radii coincides with it up to the bisection resolution
    return hi;
}

DiagnosticsReport diagnose(const ParticleConfig& config, const std::vector<double>& theta_radii) {
    DiagnosticsReport report;
    const auto cond = check_conditions(config, 2.0, 1.0);
    report.mu0 = cond.mu0;
    report.traytak = traytak_bound(config);
    report.predicted_convergent = report.traytak < 1.0;
    report.lambda_screen = config.size() > 1 ? screening_length(config)
                                             : std::numeric_limits<double>::infinity();
    for (double R : theta_radii) report.theta_of_R.emplace_back(R, theta(config, R));
    return report;
}

}  // namespace reflect
