#include "nlpg/smoothed_lp.hpp"

#include <algorithm>
#include <cmath>

namespace nlpg {

namespace {

// Largest of |z_i| and delta; the scale used to normalise before powering.
double sample_scale(const Eigen::VectorXd& z, double delta) {
    double m = delta;
    for (Eigen::Index i = 0; i < z.size(); ++i) m = std::max(m, std::abs(z[i]));
    return m;
}

}  // namespace

double smoothed_lp_norm(const Eigen::VectorXd& z, const Eigen::VectorXd& weights, double rho,
                        double delta) {
    const double m = sample_scale(z, delta);
    if (m == 0.0) return 0.0;
    const double dm = delta / m;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        const double t = z[i] / m;
        acc += weights[i] * std::pow(t * t + dm * dm, 0.5 * rho);
    }
    return m * std::pow(acc, 1.0 / rho);
}

SmoothedLp eval_smoothed_lp(const Eigen::VectorXd& z, const Eigen::VectorXd& weights, double rho,
                            double delta) {
    SmoothedLp out;
    const Eigen::Index n = z.size();
    out.grad = Eigen::VectorXd::Zero(n);
    out.hess = Eigen::VectorXd::Zero(n);
    const double norm = smoothed_lp_norm(z, weights, rho, delta);
    out.norm = norm;
    if (norm == 0.0) {
        const double meas = weights.sum();
        const double c = std::pow(meas, 2.0 / rho - 1.0);
        out.hess = c * weights;
        out.rank_one = 0.0;
        return out;
    }
    const double dhat2 = (delta / norm) * (delta / norm);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double zh = z[i] / norm;
        const double s = zh * zh + dhat2;
        if (s == 0.0) {
            // Exact zero sample with delta = 0: the weight is 0 for rho > 2 and
            // unbounded for rho < 2. A zero gradient entry is exact; for the
            // Hessian we fall back to the rho = 2 weight, which keeps Newton
            // systems regular and only affects the step, not the residual.
            out.hess[i] = rho > 2.0 ? 0.0 : weights[i];
            continue;
        }
        const double sp = std::pow(s, 0.5 * rho - 1.0);
        out.grad[i] = weights[i] * sp * zh;
        out.hess[i] = weights[i] * (sp / s) * ((rho - 1.0) * zh * zh + dhat2);
    }
    out.rank_one = 2.0 - rho;
    return out;
}

}  // namespace nlpg
