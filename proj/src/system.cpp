#include "reflect/system.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace reflect {

namespace {

constexpr double pi = std::numbers::pi;

// Strength convention: a scalar strength s multiplies the bare profile
// exp(-rho/xi)/rho (no 1/4pi), a stokes strength multiplies the Oseen
// tensor as is. The physical charge is 4 pi s.

// Truncation neighbor lists via cell binning; each row sorted so the
// accumulation order is fixed.
void build_neighbor_lists(InteractionSystem& sys) {
    const auto& parts = sys.config.particles;
    const std::size_t n = parts.size();
    const double cell = sys.truncation;

    auto key = [&](long ix, long iy, long iz) {
        return (static_cast<std::uint64_t>(ix + (1L << 20)) << 42) ^
               (static_cast<std::uint64_t>(iy + (1L << 20)) << 21) ^
               static_cast<std::uint64_t>(iz + (1L << 20));
    };
    auto cell_of = [&](Vec3 p) {
        return std::array<long, 3>{static_cast<long>(std::floor(p.x / cell)),
                                   static_cast<long>(std::floor(p.y / cell)),
                                   static_cast<long>(std::floor(p.z / cell))};
    };

    std::unordered_map<std::uint64_t, std::vector<int>> bins;
    bins.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = cell_of(parts[i].center);
        bins[key(c[0], c[1], c[2])].push_back(static_cast<int>(i));
    }

    std::vector<std::vector<int>> rows(n);
#pragma omp parallel for schedule(static)
    for (long ii = 0; ii < static_cast<long>(n); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        const auto c = cell_of(parts[i].center);
        auto& row = rows[i];
        for (long dx = -1; dx <= 1; ++dx)
            for (long dy = -1; dy <= 1; ++dy)
                for (long dz = -1; dz <= 1; ++dz) {
                    auto it = bins.find(key(c[0] + dx, c[1] + dy, c[2] + dz));
                    if (it == bins.end()) continue;
                    for (int j : it->second) {
                        if (j == static_cast<int>(i)) continue;
                        if (norm(parts[i].center - parts[j].center) <= sys.truncation)
                            row.push_back(j);
                    }
                }
        std::sort(row.begin(), row.end());
    }

    sys.neighbor_start.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i)
        sys.neighbor_start[i + 1] = sys.neighbor_start[i] + static_cast<int>(rows[i].size());
    sys.neighbors.resize(sys.neighbor_start[n]);
    for (std::size_t i = 0; i < n; ++i)
        std::copy(rows[i].begin(), rows[i].end(),
                  sys.neighbors.begin() + sys.neighbor_start[i]);
}

}  // namespace

InteractionSystem assemble_operator(const ParticleConfig& config, double truncation) {
    validate_disjoint(config);
    if (truncation > 0.0 && config.kernel != Kernel::yukawa)
        throw std::invalid_argument(
            "truncation requires the yukawa kernel; laplace/stokes couplings do not decay");

    InteractionSystem sys;
    sys.config = config;
    sys.comps = components(config.kernel);
    sys.truncation = truncation;
    const std::size_t n = config.size();

    sys.diag.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = config.particles[i].radius;
        // own-surface value per unit strength; for stokes this is the scalar
        // in front of the identity block
        sys.diag[i] = config.kernel == Kernel::stokes
                          ? 1.0 / (6.0 * pi * r)
                          : (std::isinf(config.xi) ? 1.0 / r : std::exp(-r / config.xi) / r);
    }
    sys.rhs.assign(n * sys.comps, 0.0);
    if (sys.truncated()) build_neighbor_lists(sys);
    return sys;
}

InteractionSystem assemble(const ParticleConfig& config, const SourceSpec& source,
                           double truncation) {
    InteractionSystem sys = assemble_operator(config, truncation);
    std::vector<Vec3> centers;
    centers.reserve(config.size());
    for (const auto& p : config.particles) centers.push_back(p.center);
    sys.rhs = background_field(source, centers, config.kernel, config.xi);
    return sys;
}

Strengths zero_strengths(const InteractionSystem& sys) {
    Strengths s;
    s.comps = sys.comps;
    s.data.assign(sys.size() * sys.comps, 0.0);
    return s;
}

namespace {

// Row kernels. The j loop always runs in ascending index order; parallelism
// is across rows only, which keeps results bitwise identical for any thread
// count.

double scalar_row(const InteractionSystem& sys, const double* s, std::size_t i,
                  bool screened) {
    const auto& parts = sys.config.particles;
    const std::size_t n = parts.size();
    const Vec3 xi = parts[i].center;
    const double inv_xi_len = screened ? 1.0 / sys.config.xi : 0.0;
    double acc = sys.diag[i] * s[i];
    if (sys.truncated()) {
        for (int k = sys.neighbor_start[i]; k < sys.neighbor_start[i + 1]; ++k) {
            const int j = sys.neighbors[k];
            const double rho = norm(xi - parts[j].center);
            acc += std::exp(-rho * inv_xi_len) / rho * s[j];
        }
        return acc;
    }
    if (screened) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double rho = norm(xi - parts[j].center);
            acc += std::exp(-rho * inv_xi_len) / rho * s[j];
        }
    } else {
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            acc += s[j] / norm(xi - parts[j].center);
        }
    }
    return acc;
}

void stokes_row(const InteractionSystem& sys, const double* s, std::size_t i, double* out) {
    const auto& parts = sys.config.particles;
    const std::size_t n = parts.size();
    const Vec3 xi = parts[i].center;
    double ax = sys.diag[i] * s[3 * i];
    double ay = sys.diag[i] * s[3 * i + 1];
    double az = sys.diag[i] * s[3 * i + 2];
    constexpr double c8pi = 1.0 / (8.0 * std::numbers::pi);
    for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const Vec3 d = xi - parts[j].center;
        const double r2 = norm2(d);
        const double inv = 1.0 / std::sqrt(r2);
        const double a = c8pi * inv;
        const double b = c8pi * inv * inv * inv;
        const double sx = s[3 * j], sy = s[3 * j + 1], sz = s[3 * j + 2];
        const double sd = d.x * sx + d.y * sy + d.z * sz;
        ax += a * sx + b * sd * d.x;
        ay += a * sy + b * sd * d.y;
        az += a * sz + b * sd * d.z;
    }
    out[3 * i] = ax;
    out[3 * i + 1] = ay;
    out[3 * i + 2] = az;
}

void apply_impl(const InteractionSystem& sys, const Strengths& s, std::vector<double>& out,
                bool parallel) {
    if (s.comps != sys.comps || s.data.size() != sys.size() * sys.comps)
        throw std::invalid_argument("apply_interaction: strengths do not match the system");
    const long n = static_cast<long>(sys.size());
    out.resize(s.data.size());
    const double* sp = s.data.data();

    if (sys.comps == 3) {
#pragma omp parallel for schedule(static) if (parallel)
        for (long i = 0; i < n; ++i) stokes_row(sys, sp, static_cast<std::size_t>(i), out.data());
        return;
    }
    const bool screened = sys.config.kernel == Kernel::yukawa && !std::isinf(sys.config.xi);
#pragma omp parallel for schedule(static) if (parallel)
    for (long i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] = scalar_row(sys, sp, static_cast<std::size_t>(i), screened);
}

}  // namespace

void apply_interaction(const InteractionSystem& sys, const Strengths& s,
                       std::vector<double>& out) {
    apply_impl(sys, s, out, true);
}

void apply_interaction_serial(const InteractionSystem& sys, const Strengths& s,
                              std::vector<double>& out) {
    apply_impl(sys, s, out, false);
}

}  // namespace reflect
