#pragma once

#include <vector>

#include "reflect/engine.hpp"
#include "reflect/kernels.hpp"

namespace reflect {

// Fundamental solution of the Brinkman system -lap u + grad p + mu u = F delta,
// div u = 0: a screened Stokeslet. mu -> 0 recovers the Oseen tensor.
Mat3 brinkman_tensor(Vec3 x, double mu);

// Pressure of the same point force (identical to the Stokes pressure):
// p = F . x / (4 pi |x|^3), returned as the vector multiplying F.
Vec3 stokeslet_pressure_gradient_basis(Vec3 x);

// Solution of the homogenized limit problem at the probe points.
// Scalar kernels: the source field screened at xi_eff = (mu + xi^-2)^-1/2.
// Stokes point force: the Brinkman fundamental solution.
std::vector<double> limit_solution(Kernel kernel, double mu, double xi,
                                   const SourceSpec& source, const std::vector<Vec3>& points);

struct SweepSpec {
    Kernel kernel = Kernel::laplace;
    double xi = infinite_xi;   // screening of the perforated problem itself
    double mu = 1.0;           // capacity density, fixed across rows
    std::vector<double> d_list;
    Bounds box{};
    SourceSpec source;
    std::vector<Vec3> probes;
    IterationSettings settings{Scheme::damped, 0.0, 400, 1e-8, false};
    double truncation = 0.0;       // forwarded to assemble (yukawa rows only)
    double probe_clearance = 4.0;  // drop probes within this multiple of r of a center
};

struct SweepRow {
    double d = 0.0, r = 0.0, mu = 0.0;
    std::size_t n_particles = 0;
    bool converged = false;
    int iterations = 0;
    double seconds = 0.0;
    double probe_rms_error = 0.0;  // relative RMS against the limit field
    double max_error = 0.0;        // worst single-probe relative error
    std::vector<double> solver_values;
    std::vector<double> limit_values;
};

struct SweepReport {
    SweepSpec spec;                 // with the filtered probe set
    std::vector<SweepRow> rows;
};

// Radius of the common sphere reproducing capacity mu at spacing d.
double radius_for_capacity(double mu, double d, Kernel kernel);

// Lattice sweep at fixed capacity: for each spacing, generate the lattice,
// solve with the requested scheme, and compare the field at the probes with
// the homogenized limit. Rows that fail to converge are flagged and the
// sweep continues.
SweepReport sweep(const SweepSpec& spec);

// Evenly spread directions (spherical Fibonacci), handy for probe sets.
std::vector<Vec3> fibonacci_sphere(int n, double radius, Vec3 center = {});

}  // namespace reflect
