#include "reflect/weights.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <stdexcept>

namespace reflect {

double q_weight(int n, int M, double gamma) {
    if (n < 0 || M < 0) throw std::domain_error("q_weight: indices must be nonnegative");
    if (!(gamma > 0.0) || gamma > 1.0)
        throw std::domain_error("q_weight: gamma must lie in (0, 1]");
    if (n == 0) return 1.0;
    if (n > M) return 0.0;
    // I_gamma(n, M-n+1); the regularized form stays bounded where the
    // factorial expression would overflow near M ~ 170.
    return boost::math::ibeta(static_cast<double>(n), static_cast<double>(M - n + 1), gamma);
}

WeightTable make_weight_table(int M, double gamma) {
    WeightTable table;
    table.M = M;
    table.gamma = gamma;
    table.q.resize(M + 1);
    for (int n = 0; n <= M; ++n) table.q[n] = q_weight(n, M, gamma);
    return table;
}

Strengths weighted_sum(const std::vector<Strengths>& corrections, double gamma) {
    if (corrections.empty()) throw std::invalid_argument("weighted_sum: no corrections");
    const int M = static_cast<int>(corrections.size()) - 1;
    Strengths acc = corrections[0];  // q(0) = 1
    for (int n = 1; n <= M; ++n) {
        if (corrections[n].data.size() != acc.data.size() || corrections[n].comps != acc.comps)
            throw std::invalid_argument("weighted_sum: correction " + std::to_string(n) +
                                        " has mismatched length");
        const double q = q_weight(n, M, gamma);
        for (std::size_t k = 0; k < acc.data.size(); ++k)
            acc.data[k] += q * corrections[n].data[k];
    }
    return acc;
}

}  // namespace reflect
