#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nlpg::verify {

/// Outcome of one property check. `counterexample` is filled on failure with
/// whatever is needed to reproduce it (seed, instance index, data).
struct Check {
    std::string name;
    bool pass = true;
    std::string detail;
    std::string counterexample;
};

// Duality maps.
Check duality_identities(int count, std::uint64_t seed);          ///< <J v, v> = |v|^2, |J v|_* = |v|
Check duality_homogeneity(int count, std::uint64_t seed);
Check duality_monotonicity(int count, std::uint64_t seed);
Check duality_subdifferential(int count, std::uint64_t seed);
Check duality_examples();

// Best approximation and geometric constants.
Check apriori_bounds(int per_p, std::uint64_t seed);                ///< ||y0|| <= min(C_BM, 1 + C_AO) ||y||
Check ao_constant_values();                                        ///< C_AO(2) = 0, symmetry, C_AO(1.01) > 0.9
Check best_approx_optimality(int count, std::uint64_t seed);
Check best_approx_scan_example();
Check constant_ordering();

// Mixed method.
Check formulation_equivalence(int count, std::uint64_t seed);      ///< mixed solve vs direct dual-norm minimiser
Check descent_cross_check(int count, std::uint64_t seed);
Check scaling_equivariance(int count, std::uint64_t seed);
Check petrov_galerkin_collapse();
Check infsup_graded();                                              ///< decaying vs floored inf-sup
Check infsup_hilbert_identity();

// Applications.
Check cell_average_study();
Check gibbs_suppression();
Check laplace_smooth_rates();
Check laplace_rough_rates();
Check graded_study();

// Quick convergence smoke tests.
Check rates_smoke();

/// The mesh sequence used for the cell-average rate fit: `count` element
/// counts spread log-uniformly over [lo, hi] (duplicates removed).
std::vector<std::size_t> log_spaced_counts(std::size_t lo, std::size_t hi, int count);

}  // namespace nlpg::verify
