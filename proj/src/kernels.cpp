#include "reflect/kernels.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace reflect {

namespace {

constexpr double pi = std::numbers::pi;

double require_nonzero(Vec3 x) {
    const double rho = norm(x);
    if (!(rho > 0.0)) throw std::domain_error("kernel evaluated at x = 0");
    return rho;
}

}  // namespace

double yukawa_kernel(Vec3 x, double xi) {
    const double rho = require_nonzero(x);
    if (std::isinf(xi)) return 1.0 / (4.0 * pi * rho);
    return std::exp(-rho / xi) / (4.0 * pi * rho);
}

Mat3 oseen_tensor(Vec3 x) {
    const double rho = require_nonzero(x);
    const double a = 1.0 / (8.0 * pi * rho);
    const double b = 1.0 / (8.0 * pi * rho * rho * rho);
    Mat3 t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t(i, j) = b * x[i] * x[j];
    t(0, 0) += a;
    t(1, 1) += a;
    t(2, 2) += a;
    return t;
}

double self_coefficient(double r, double xi, Kernel kernel) {
    if (!(r > 0.0)) throw std::domain_error("self_coefficient: radius must be positive");
    switch (kernel) {
        case Kernel::laplace: return 1.0 / r;
        case Kernel::yukawa: return std::exp(-r / xi) / r;
        case Kernel::stokes: return 1.0 / (6.0 * pi * r);
    }
    throw std::invalid_argument("self_coefficient: bad kernel");
}

SourceSpec SourceSpec::point_charge(Vec3 loc, double q) {
    SourceSpec s;
    s.kind = SourceKind::point;
    s.location = loc;
    s.strength = q;
    return s;
}

SourceSpec SourceSpec::point_force(Vec3 loc, Vec3 f) {
    SourceSpec s;
    s.kind = SourceKind::point;
    s.location = loc;
    s.vector_strength = f;
    return s;
}

SourceSpec SourceSpec::gaussian_charge(Vec3 center, double width, double q) {
    if (!(width > 0.0)) throw std::invalid_argument("gaussian source needs width > 0");
    SourceSpec s;
    s.kind = SourceKind::gaussian;
    s.location = center;
    s.width = width;
    s.strength = q;
    return s;
}

SourceSpec SourceSpec::uniform_flow(Vec3 u) {
    SourceSpec s;
    s.kind = SourceKind::uniform_flow;
    s.vector_strength = u;
    return s;
}

namespace {

// Potential at radius rho of a unit-charge gaussian cloud of width sigma,
// screened at xi: radial shell decomposition against the screened shell
// kernel. The laplace case collapses to erf(rho/(sqrt 2 sigma))/(4 pi rho).
double gaussian_potential_laplace(double rho, double sigma) {
    const double a = rho / (sigma * std::numbers::sqrt2);
    if (a < 1e-6) {
        // series of erf(a)/a around 0
        const double c = 2.0 / std::sqrt(pi);
        return c * (1.0 - a * a / 3.0) / (4.0 * pi * sigma * std::numbers::sqrt2);
    }
    return std::erf(a) / (4.0 * pi * rho);
}

// Screened potential of a unit spherical shell of radius s at distance rho:
//   xi (e^{-|rho-s|/xi} - e^{-(rho+s)/xi}) / (8 pi s rho).
// The difference is written through expm1 so neither the sinh overflow nor
// the rho -> 0 cancellation appears.
double shell_kernel(double rho, double s, double xi) {
    if (rho == 0.0) return std::exp(-s / xi) / (4.0 * pi * s);
    const double lo = std::abs(rho - s);
    const double closer = std::min(rho, s);
    return -xi * std::exp(-lo / xi) * std::expm1(-2.0 * closer / xi) / (8.0 * pi * s * rho);
}

double gaussian_potential_yukawa(double rho, double sigma, double xi) {
    const double norm3 = std::pow(2.0 * pi * sigma * sigma, -1.5);
    auto charge_density = [&](double s) {
        return 4.0 * pi * s * s * norm3 * std::exp(-s * s / (2.0 * sigma * sigma));
    };
    auto integrand = [&](double s) { return charge_density(s) * shell_kernel(rho, s, xi); };

    using boost::math::quadrature::gauss_kronrod;
    const double s_max = 12.0 * sigma;
    double result = 0.0;
    // split at the kink s = rho
    if (rho > 0.0 && rho < s_max) {
        result += gauss_kronrod<double, 31>::integrate(integrand, 0.0, rho, 12, 1e-12);
        result += gauss_kronrod<double, 31>::integrate(integrand, rho, s_max, 12, 1e-12);
    } else {
        result += gauss_kronrod<double, 31>::integrate(integrand, 0.0, s_max, 12, 1e-12);
    }
    return result;
}

}  // namespace

std::vector<double> background_field(const SourceSpec& source, const std::vector<Vec3>& points,
                                     Kernel kernel, double xi) {
    const bool scalar = kernel != Kernel::stokes;
    std::vector<double> out;
    out.reserve(points.size() * (scalar ? 1 : 3));

    switch (source.kind) {
        case SourceKind::point: {
            if (scalar) {
                for (const auto& y : points)
                    out.push_back(source.strength * yukawa_kernel(y - source.location, xi));
            } else {
                for (const auto& y : points) {
                    const Vec3 u = oseen_tensor(y - source.location) * source.vector_strength;
                    out.push_back(u.x);
                    out.push_back(u.y);
                    out.push_back(u.z);
                }
            }
            return out;
        }
        case SourceKind::gaussian: {
            if (!scalar)
                throw std::invalid_argument("gaussian sources are defined for scalar kernels only");
            for (const auto& y : points) {
                const double rho = norm(y - source.location);
                const double u = std::isinf(xi)
                                     ? gaussian_potential_laplace(rho, source.width)
                                     : gaussian_potential_yukawa(rho, source.width, xi);
                out.push_back(source.strength * u);
            }
            return out;
        }
        case SourceKind::uniform_flow: {
            if (scalar)
                throw std::invalid_argument("uniform_flow source requires the stokes kernel");
            for (std::size_t i = 0; i < points.size(); ++i) {
                out.push_back(source.vector_strength.x);
                out.push_back(source.vector_strength.y);
                out.push_back(source.vector_strength.z);
            }
            return out;
        }
    }
    throw std::invalid_argument("background_field: bad source kind");
}

}  // namespace reflect
