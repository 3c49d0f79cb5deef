#pragma once

#include <vector>

#include "reflect/config.hpp"
#include "reflect/vec3.hpp"

namespace reflect {

// Fundamental solution of -lap + xi^-2: exp(-|x|/xi)/(4 pi |x|).
// xi = +inf gives the plain Coulomb kernel 1/(4 pi |x|).
double yukawa_kernel(Vec3 x, double xi);

// Oseen tensor: (1/(8 pi)) (I/|x| + x xT/|x|^3).
Mat3 oseen_tensor(Vec3 x);

// Surface field produced on a sphere's own boundary by a unit-strength
// monopole at its center. Scalar kernels: exp(-r/xi)/r. Stokes: the
// angular average of the Oseen tensor over the sphere, I/(6 pi r);
// returned as the scalar multiplying the identity.
double self_coefficient(double r, double xi, Kernel kernel);

enum class SourceKind { point, gaussian, uniform_flow };

struct SourceSpec {
    SourceKind kind = SourceKind::point;
    Vec3 location{};        // point location / gaussian center
    double width = 0.0;     // gaussian only
    double strength = 0.0;  // total charge, scalar kernels
    Vec3 vector_strength{};  // point force / uniform velocity, stokes

    static SourceSpec point_charge(Vec3 loc, double q);
    static SourceSpec point_force(Vec3 loc, Vec3 f);
    static SourceSpec gaussian_charge(Vec3 center, double width, double q);
    static SourceSpec uniform_flow(Vec3 u);
};

// Unperturbed field of the source at the given points. Scalar kernels
// return one value per point, stokes three. Point sources are evaluated
// in closed form, gaussians through the radial shell decomposition
// (closed form for laplace, adaptive quadrature for yukawa).
std::vector<double> background_field(const SourceSpec& source, const std::vector<Vec3>& points,
                                     Kernel kernel, double xi);

}  // namespace reflect
