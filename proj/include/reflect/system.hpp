#pragma once

#include <vector>

#include "reflect/config.hpp"
#include "reflect/kernels.hpp"

namespace reflect {

// Per-particle monopole strengths, flattened: one double per particle for the
// scalar kernels, three for stokes (a force vector per particle).
struct Strengths {
    int comps = 1;
    std::vector<double> data;

    std::size_t size() const { return data.size() / comps; }
};

inline int components(Kernel k) { return k == Kernel::stokes ? 3 : 1; }

// Monopole collocation system A s = -b. The couplings are implicit: row i of
// A is diag[i] plus the kernel evaluated at x_i - x_j for the neighbors of i.
// Immutable after assembly, safe to share between threads.
struct InteractionSystem {
    ParticleConfig config;
    std::vector<double> diag;  // self coefficient per particle (scalar, times I for stokes)
    std::vector<double> rhs;   // background field at the centers, flattened
    double truncation = 0.0;   // 0 = none; only legal for yukawa

    // CSR neighbor lists, present only when truncated.
    std::vector<int> neighbor_start;
    std::vector<int> neighbors;

    int comps = 1;
    std::size_t size() const { return config.size(); }
    bool truncated() const { return truncation > 0.0; }
};

// truncation drops couplings with |x_i - x_j| > truncation. Requesting it for
// laplace or stokes throws (those kernels have no decay to hide behind).
InteractionSystem assemble(const ParticleConfig& config, const SourceSpec& source,
                           double truncation = 0.0);

// Same system without a source; rhs is left zero.
InteractionSystem assemble_operator(const ParticleConfig& config, double truncation = 0.0);

// out = A s. Parallel across rows; each row accumulates its neighbor sum in
// index order, so the result is bitwise independent of the thread count.
void apply_interaction(const InteractionSystem& sys, const Strengths& s,
                       std::vector<double>& out);

// Single-threaded reference for the same contract; used by tests and the
// benchmark. Must agree bitwise with apply_interaction.
void apply_interaction_serial(const InteractionSystem& sys, const Strengths& s,
                              std::vector<double>& out);

Strengths zero_strengths(const InteractionSystem& sys);

}  // namespace reflect
