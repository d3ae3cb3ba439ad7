#include "tasep/oracle.hpp"

#include <random>

namespace tasep {

ParamBinding random_binding(CaseId cs, int ell, int n, int pos_max, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto pick = [&rng](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    ParamBinding b;
    for (int i = 1; i <= n; ++i) b[X(i)] = mpq_class(pick(1, 9), 10);
    int min_rate = 10;
    for (int j = 1; j <= ell; ++j) {
        const int r = pick(1, 9);
        min_rate = std::min(min_rate, r);
        b[P(j)] = mpq_class(r, 10);
    }
    for (auto& [v, q] : b) q.canonicalize();
    for (int k = 1; k <= pos_max; ++k) {
        if (cs == CaseId::CanonicalC) {
            // alpha_k + pi_j >= 0 and alpha_k x > -1.
            b[A(k)] = mpq_class(pick(-min_rate, 9), 10);
            b[A(k)].canonicalize();
        } else if (cs == CaseId::CanonicalB) {
            // 0 <= beta_k x < 1.
            b[B(k)] = mpq_class(pick(0, 9), 10);
            b[B(k)].canonicalize();
        }
    }
    return b;
}

}  // namespace tasep
