#pragma once

#include <utility>
#include <vector>

#include "reflect/config.hpp"

namespace reflect {

struct DiagnosticsReport {
    double mu0 = 0.0;
    double traytak = 0.0;
    std::vector<std::pair<double, double>> theta_of_R;
    double lambda_screen = 0.0;  // +inf when the criterion is never violated
    bool predicted_convergent = false;  // traytak < 1
};

// max_i sum_{k != i} (r_k/rho)/(1 - r_k/rho), rho = |x_i - x_k|.
// Throws for overlapping spheres (a denominator would vanish).
double traytak_bound(const ParticleConfig& config);

// Collective boundary load on the particle nearest the cloud center: the sum
// over the other particles inside the radius-R ball around it of their
// unit-boundary-value exterior fields, each evaluated at the central sphere's
// surface point nearest that particle.
double theta(const ParticleConfig& config, double R);

// sup of the radii rho with theta(rho) < 1, located by bisection; +inf when
// even the full cloud stays below 1.
double screening_length(const ParticleConfig& config);

DiagnosticsReport diagnose(const ParticleConfig& config, const std::vector<double>& theta_radii);

}  // namespace reflect
