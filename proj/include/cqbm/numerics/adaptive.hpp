#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace cqbm::numerics {

struct AdaptiveOptions {
    double rel_tol = 1e-11;
    double abs_tol = 0.0;
    int max_intervals = 2'000'000;
};

struct AdaptiveResult {
    std::vector<double> value;
    std::vector<double> error;
    long evaluations = 0;
    bool converged = false;
};

/// f(x, out) writes dim integrand components at x.
using VectorIntegrand = std::function<void(double, std::span<double>)>;

/// Per-component reference magnitudes for the relative tolerance, from the running totals.
/// Defaults to |total_j|.
using ReferenceScale = std::function<void(std::span<const double> total, std::span<double> ref)>;

/// Globally adaptive Gauss-Kronrod (7/15) integration of a vector-valued function.
/// The initial partition is [cuts[0], cuts[1], ...]; it must be sorted.
AdaptiveResult integrate_adaptive(const VectorIntegrand& f, std::size_t dim,
                                  std::span<const double> cuts, const AdaptiveOptions& opts = {},
                                  const ReferenceScale& reference = {});

}  // namespace cqbm::numerics
