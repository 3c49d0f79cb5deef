#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "reflect/vec3.hpp"

namespace reflect {

enum class Kernel { laplace, yukawa, stokes };

inline constexpr double infinite_xi = std::numeric_limits<double>::infinity();

const char* kernel_name(Kernel k);
Kernel kernel_from_name(const std::string& name);

struct Particle {
    Vec3 center;
    double radius = 0.0;
};

// A collection of disjoint spheres plus the kernel the solver runs with.
// xi is the screening length; it only matters for the yukawa kernel and
// is +inf for laplace/stokes.
struct ParticleConfig {
    std::vector<Particle> particles;
    Kernel kernel = Kernel::laplace;
    double xi = infinite_xi;

    std::size_t size() const { return particles.size(); }
};

struct ConditionsReport {
    std::vector<double> nearest;  // d_i, +inf for a single particle
    double mu0 = 0.0;             // max_i r_i / d_i^3
    bool kappa_ok = true;         // d_i/2 > kappa*r_i for all i
    bool alpha_ok = true;         // r_i <= alpha*xi for all i
    std::vector<int> violations;
    std::vector<std::string> violation_reasons;

    bool all_ok() const { return kappa_ok && alpha_ok; }
};

struct Bounds {
    Vec3 lo, hi;
};

struct LatticeSpec {
    double d = 1.0;       // lattice spacing
    double r = 0.1;       // common radius, must satisfy 2r < d
    Bounds box{};
};

// Capacity density of a lattice: 4*pi*r/d^3 for the scalar kernels,
// 6*pi*r/d^3 for stokes (drag normalization).
double lattice_capacity(double d, double r, Kernel kernel);

// d_i = min_{j != i} |x_i - x_j|; a single particle gets +inf.
std::vector<double> nearest_distances(const ParticleConfig& config);

// Throws std::invalid_argument naming the offending pair if any two
// sphere closures intersect (touching counts as overlap).
void validate_disjoint(const ParticleConfig& config);

ConditionsReport check_conditions(const ParticleConfig& config, double kappa, double alpha);

// One particle at every point of (d*Z)^3 inside the box, ordered
// lexicographically by lattice index.
ParticleConfig generate_lattice(const LatticeSpec& spec, Kernel kernel = Kernel::laplace,
                                double xi = infinite_xi);

// n spheres with pairwise center distance > 2*kappa*r, uniform in the box,
// reproducible for a fixed seed. Throws if placement fails after bounded
// retries, reporting the achieved count.
ParticleConfig generate_random(int n, double r, double kappa, const Bounds& box,
                               std::uint64_t seed, Kernel kernel = Kernel::laplace,
                               double xi = infinite_xi);

}  // namespace reflect
