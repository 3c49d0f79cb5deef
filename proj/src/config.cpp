#include "reflect/config.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace reflect {

const char* kernel_name(Kernel k) {
    switch (k) {
        case Kernel::laplace: return "laplace";
        case Kernel::yukawa: return "yukawa";
        case Kernel::stokes: return "stokes";
    }
    return "?";
}

Kernel kernel_from_name(const std::string& name) {
    if (name == "laplace") return Kernel::laplace;
    if (name == "yukawa") return Kernel::yukawa;
    if (name == "stokes") return Kernel::stokes;
    throw std::invalid_argument("unknown kernel '" + name + "'");
}

double lattice_capacity(double d, double r, Kernel kernel) {
    const double cap = kernel == Kernel::stokes ? 6.0 * std::numbers::pi * r
                                                : 4.0 * std::numbers::pi * r;
    return cap / (d * d * d);
}

std::vector<double> nearest_distances(const ParticleConfig& config) {
    const std::size_t n = config.size();
    if (n == 0) throw std::invalid_argument("nearest_distances: empty config");
    std::vector<double> d(n, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dist = norm(config.particles[i].center - config.particles[j].center);
            if (dist < d[i]) d[i] = dist;
            if (dist < d[j]) d[j] = dist;
        }
    }
    return d;
}

void validate_disjoint(const ParticleConfig& config) {
    const std::size_t n = config.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& pi = config.particles[i];
        if (!(pi.radius > 0.0) || !std::isfinite(pi.radius))
            throw std::invalid_argument("particle " + std::to_string(i) + " has radius " +
                                        std::to_string(pi.radius));
        if (!std::isfinite(pi.center.x) || !std::isfinite(pi.center.y) ||
            !std::isfinite(pi.center.z))
            throw std::invalid_argument("particle " + std::to_string(i) + " has non-finite center");
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dist = norm(config.particles[i].center - config.particles[j].center);
            const double touch = config.particles[i].radius + config.particles[j].radius;
            if (!(dist > touch))
                throw std::invalid_argument("spheres " + std::to_string(i) + " and " +
                                            std::to_string(j) + " overlap: center distance " +
                                            std::to_string(dist) + " <= r_i + r_j = " +
                                            std::to_string(touch));
        }
    }
}

ConditionsReport check_conditions(const ParticleConfig& config, double kappa, double alpha) {
    validate_disjoint(config);
    ConditionsReport report;
    report.nearest = nearest_distances(config);
    const std::size_t n = config.size();
    report.mu0 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = config.particles[i].radius;
        const double d = report.nearest[i];
        // d = +inf (single particle) contributes 0
        const double density = std::isinf(d) ? 0.0 : r / (d * d * d);
        if (density > report.mu0) report.mu0 = density;
        if (!(d / 2.0 > kappa * r)) {
            report.kappa_ok = false;
            report.violations.push_back(static_cast<int>(i));
            report.violation_reasons.push_back("d_i/2 = " + std::to_string(d / 2.0) +
                                               " <= kappa*r_i = " + std::to_string(kappa * r));
        }
        if (config.kernel == Kernel::yukawa && !(r <= alpha * config.xi)) {
            report.alpha_ok = false;
            report.violations.push_back(static_cast<int>(i));
            report.violation_reasons.push_back("r_i = " + std::to_string(r) +
                                               " > alpha*xi = " + std::to_string(alpha * config.xi));
        }
    }
    return report;
}

ParticleConfig generate_lattice(const LatticeSpec& spec, Kernel kernel, double xi) {
    if (!(2.0 * spec.r < spec.d))
        throw std::invalid_argument("lattice spheres would touch: need 2r < d");
    ParticleConfig config;
    config.kernel = kernel;
    config.xi = xi;

    // Slack absorbs representation error of box bounds that are exact
    // multiples of d.
    const double eps = 1e-9 * spec.d;
    long kx0 = static_cast<long>(std::ceil((spec.box.lo.x - eps) / spec.d));
    long kx1 = static_cast<long>(std::floor((spec.box.hi.x + eps) / spec.d));
    long ky0 = static_cast<long>(std::ceil((spec.box.lo.y - eps) / spec.d));
    long ky1 = static_cast<long>(std::floor((spec.box.hi.y + eps) / spec.d));
    long kz0 = static_cast<long>(std::ceil((spec.box.lo.z - eps) / spec.d));
    long kz1 = static_cast<long>(std::floor((spec.box.hi.z + eps) / spec.d));

    for (long kx = kx0; kx <= kx1; ++kx)
        for (long ky = ky0; ky <= ky1; ++ky)
            for (long kz = kz0; kz <= kz1; ++kz)
                config.particles.push_back(
                    {Vec3{kx * spec.d, ky * spec.d, kz * spec.d}, spec.r});

    if (config.particles.empty())
        throw std::invalid_argument("lattice box contains no lattice points");
    return config;
}

namespace {

// Upper 53 bits to a double in [0,1); keeps configs identical across
// standard library implementations.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

ParticleConfig generate_random(int n, double r, double kappa, const Bounds& box,
                               std::uint64_t seed, Kernel kernel, double xi) {
    if (n < 0) throw std::invalid_argument("generate_random: negative count");
    ParticleConfig config;
    config.kernel = kernel;
    config.xi = xi;
    if (n == 0) return config;
    if (!(r > 0.0)) throw std::invalid_argument("generate_random: radius must be positive");

    const double min_dist = 2.0 * kappa * r;
    std::mt19937_64 rng(seed);
    const long max_attempts = 2000L * n + 10000L;
    long attempts = 0;
    while (config.particles.size() < static_cast<std::size_t>(n)) {
        if (++attempts > max_attempts)
            throw std::runtime_error("generate_random: placed only " +
                                     std::to_string(config.particles.size()) + " of " +
                                     std::to_string(n) + " spheres after " +
                                     std::to_string(max_attempts) + " attempts");
        Vec3 c{box.lo.x + uniform01(rng) * (box.hi.x - box.lo.x),
               box.lo.y + uniform01(rng) * (box.hi.y - box.lo.y),
               box.lo.z + uniform01(rng) * (box.hi.z - box.lo.z)};
        bool ok = true;
        for (const auto& p : config.particles) {
            if (!(norm(c - p.center) > min_dist)) {
                ok = false;
                break;
            }
        }
        if (ok) config.particles.push_back({c, r});
    }
    return config;
}

}  // namespace reflect
