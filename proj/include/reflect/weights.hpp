#pragma once

#include <vector>

#include "reflect/system.hpp"

namespace reflect {

// Summation weight q(n, M, gamma): the regularized incomplete beta
// I_gamma(n, M-n+1), equivalently the binomial tail P[Bin(M, gamma) >= n].
// q(0) = 1 and q(n) = 0 for n > M. Throws for gamma outside (0, 1].
double q_weight(int n, int M, double gamma);

struct WeightTable {
    int M = 0;
    double gamma = 1.0;
    std::vector<double> q;  // q[0..M]
};

WeightTable make_weight_table(int M, double gamma);

// sum_n q(n, M, gamma) * corrections[n], reconstructing the damped iterate
// from corrections recorded under the plain scheme. corrections[0] must be
// the recorded initial strengths.
Strengths weighted_sum(const std::vector<Strengths>& corrections, double gamma);

}  // namespace reflect
