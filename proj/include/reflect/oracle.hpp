#pragma once

#include <vector>

#include "reflect/engine.hpp"
#include "reflect/system.hpp"

namespace reflect {

// Dense direct reference solutions for small instances. Everything here is
// single threaded and capped by contract; it exists to check the iterative
// paths, not to scale.

struct DenseSolveOptions {
    std::size_t max_scalar = 2000;
    std::size_t max_stokes = 700;
    double residual_tol = 1e-12;  // certified relative residual
};

// Direct factorization of A s = -b with a certified residual. Throws if the
// instance exceeds the cap or the factorization cannot reach the certificate.
Strengths dense_solve(const ParticleConfig& config, const SourceSpec& source,
                      const DenseSolveOptions& opts = {});
Strengths dense_solve(const InteractionSystem& sys, const DenseSolveOptions& opts = {});

struct SpectrumReport {
    std::vector<double> eigenvalues;  // of M = W^1/2 D^-1/2 A D^-1/2 W^1/2, ascending
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
    double iteration_spectral_radius = 0.0;  // of I - gamma M
    double gamma = 1.0;
};

// Eigendecomposition of the normalized symmetric matrix behind the
// relaxation, and the spectral radius of the iteration matrix I - gamma M.
// gamma <= 0 picks the scheme default (1 for plain, 1/lambda_max otherwise).
SpectrumReport jacobi_spectrum(const ParticleConfig& config, Scheme scheme, double gamma = 0.0);

}  // namespace reflect
