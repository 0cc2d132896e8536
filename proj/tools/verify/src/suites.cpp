#include "nlpg/verify/suites.hpp"

#include <stdexcept>

namespace nlpg::verify {

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"duality", "bestapprox", "equivalence", "infsup", "rates-smoke"};
    return names;
}

std::vector<Check> run_suite(const std::string& name, std::uint64_t seed) {
    if (name == "duality")
        return {duality_identities(1000, seed), duality_homogeneity(200, seed), duality_monotonicity(200, seed),
                duality_subdifferential(100, seed), duality_examples()};
    if (name == "bestapprox")
        return {apriori_bounds(1000, seed), ao_constant_values(), best_approx_optimality(40, seed),
                best_approx_scan_example(), constant_ordering()};
    if (name == "equivalence")
        return {formulation_equivalence(20, seed), descent_cross_check(20, seed), scaling_equivariance(6, seed),
                petrov_galerkin_collapse()};
    if (name == "infsup") return {infsup_graded(), infsup_hilbert_identity()};
    if (name == "rates-smoke") return {rates_smoke()};
    throw std::invalid_argument("unknown suite '" + name + "'");
}

}  // namespace nlpg::verify
