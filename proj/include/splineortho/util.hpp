#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace splineortho {

/// Deterministic 64-bit generator (splitmix64). All randomness in the library
/// flows through this type so that results depend only on the seed, never on
/// platform distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next();
    double uniform();                          // [0, 1)
    double uniform(double lo, double hi);      // [lo, hi)
    std::int64_t uniform_int(std::int64_t n);  // [0, n)
    int sign();                                // -1 or +1

private:
    std::uint64_t state_;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

/// Least-squares line through (x, y); r2 = 1 for exact fits, 0 for constant y.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Spearman rank correlation with average ranks for ties; 0 when either
/// variable is constant.
double spearman_rho(const std::vector<double>& x, const std::vector<double>& y);

/// Runs fn(i) for i in [0, count), in parallel when count is large enough.
/// Honors the SPLINEORTHO_THREADS cap. fn must be thread-safe; iteration
/// order is unspecified.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

int max_threads();

}  // namespace splineortho
