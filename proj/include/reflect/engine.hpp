#pragma once

#include <optional>
#include <string>
#include <vector>

#include "reflect/system.hpp"

namespace reflect {

enum class Scheme { plain, damped, cutoff_damped };

const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

struct IterationSettings {
    Scheme scheme = Scheme::plain;
    // Relaxation factor for damped/cutoff_damped. <= 0 requests the default
    // 1/lambda_hat, with lambda_hat from estimate_norm.
    double gamma = 0.0;
    int max_iter = 200;
    double tol = 1e-10;  // absolute threshold on the max boundary residual
    bool record_corrections = false;
};

struct IterationTrace {
    std::vector<double> residual_max;       // entry 0 is the initial residual
    std::vector<double> residual_rms;
    std::vector<double> correction_norm;    // 2-norm of each correction
    bool converged = false;
    bool diverged = false;
    int iterations = 0;
    double gamma_used = 1.0;
    Scheme scheme = Scheme::plain;
};

struct IterationResult {
    Strengths strengths;
    IterationTrace trace;
    // When recorded: corrections[0] is the initial strengths (zero for a cold
    // start, standing in for the background term), corrections[k] the k-th
    // update. Their plain sum telescopes back to the final strengths.
    std::vector<Strengths> corrections;
};

// One relaxation sweep over all particles simultaneously:
//   plain:         s' = s - D^-1 (A s + b)
//   damped:        s' = s - gamma D^-1 (A s + b)
//   cutoff_damped: s' = s - gamma W D^-1 (A s + b),  W = diag(exp(-|x_i|))
// gamma in the settings must be positive here (no auto default).
Strengths reflect_step(const InteractionSystem& sys, const Strengths& s,
                       const IterationSettings& settings);

// Runs reflect_step until the max residual drops below tol or max_iter is
// hit. Divergence (residual at 10x its running minimum, or non-finite) is
// reported in the trace, not thrown.
IterationResult iterate(const InteractionSystem& sys, IterationSettings settings);
IterationResult iterate(const ParticleConfig& config, const SourceSpec& source,
                        IterationSettings settings, double truncation = 0.0);

// u(y) = background(y) + sum_i K(y - x_i) s_i. Throws if y coincides with a
// particle center.
std::vector<double> evaluate_field(const ParticleConfig& config, const Strengths& s,
                                   const SourceSpec& source, const std::vector<Vec3>& points);

struct ResidualNorms {
    double max = 0.0;
    double rms = 0.0;
};

// Boundary residual |(A s + b)_i| at the collocation points.
ResidualNorms boundary_residual(const InteractionSystem& sys, const Strengths& s);
ResidualNorms boundary_residual(const ParticleConfig& config, const Strengths& s,
                                const SourceSpec& source);

// Largest eigenvalue of the normalized operator
//   M = W^1/2 D^-1/2 A D^-1/2 W^1/2
// (W = identity, or the cutoff weights exp(-|x_i|)), by power iteration to
// relative 1e-6 or 500 matvecs. This is the discrete operator norm the
// damped schemes divide by.
double estimate_norm(const InteractionSystem& sys, bool cutoff_weights,
                     double rel_tol = 1e-6, int max_iter = 500);
double estimate_norm(const ParticleConfig& config, bool cutoff_weights);

}  // namespace reflect
