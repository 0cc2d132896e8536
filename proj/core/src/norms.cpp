#include "nlpg/norms.hpp"

#include <cmath>

#include "nlpg/errors.hpp"
#include "nlpg/smoothed_lp.hpp"

namespace nlpg {

NormSpec NormSpec::values(double rho) {
    NormSpec s;
    s.kind = NormKind::LpValues;
    s.rho = rho;
    s.validate();
    return s;
}

NormSpec NormSpec::derivative(double rho) {
    NormSpec s;
    s.kind = NormKind::LpDerivative;
    s.rho = rho;
    s.validate();
    return s;
}

NormSpec NormSpec::graph(double rho, ScalarFunction beta, ScalarFunction dbeta) {
    NormSpec s;
    s.kind = NormKind::Graph;
    s.rho = rho;
    s.beta = std::move(beta);
    s.dbeta = std::move(dbeta);
    s.validate();
    return s;
}

void NormSpec::validate() const {
    if (!(rho > 1.0) || !std::isfinite(rho)) throw InvalidInput("NormSpec: exponent must be finite and > 1");
    if (kind == NormKind::Graph && (!beta || !dbeta))
        throw InvalidInput("NormSpec: graph norm needs beta and its derivative");
}

std::size_t SampledNorm::dim() const {
    return terms.empty() ? 0 : static_cast<std::size_t>(terms.front().L.cols());
}

double SampledNorm::norm(const Eigen::VectorXd& c) const {
    double acc = 0.0;
    for (const auto& t : terms) {
        const double n = smoothed_lp_norm(t.L * c, t.w, rho, 0.0);
        acc += n * n;
    }
    return std::sqrt(acc);
}

Eigen::VectorXd SampledNorm::duality_map(const Eigen::VectorXd& c) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(c.size());
    for (const auto& t : terms) {
        const SmoothedLp s = eval_smoothed_lp(t.L * c, t.w, rho, 0.0);
        if (s.norm > 0.0) out.noalias() += s.norm * (t.L.transpose() * s.grad);
    }
    return out;
}

SampledNorm SampledNorm::coefficient_lp(std::size_t dim, double rho) {
    SampledNorm s;
    s.rho = rho;
    NormTerm t;
    t.L.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    t.L.setIdentity();
    t.w = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(dim));
    s.terms.push_back(std::move(t));
    return s;
}

namespace {

// Which linear image of the function a norm term samples.
enum class Image { Value, Derivative, BetaDerivative };

std::vector<Image> images_of(const NormSpec& spec) {
    switch (spec.kind) {
    case NormKind::LpValues: return {Image::Value};
    case NormKind::LpDerivative: return {Image::Derivative};
    case NormKind::Graph: return {Image::Value, Image::BetaDerivative};
    }
    return {};
}

double image_of_entry(Image im, const BasisEntry& e, double x, const NormSpec& spec) {
    switch (im) {
    case Image::Value: return e.value;
    case Image::Derivative: return e.deriv;
    case Image::BetaDerivative: return spec.dbeta(x) * e.value + spec.beta(x) * e.deriv;
    }
    return 0.0;
}

std::vector<double> all_breaks(const FESpace& space, const std::vector<double>& extra) {
    std::vector<double> b = space.breakpoints();
    const auto d = space.discontinuities();
    b.insert(b.end(), d.begin(), d.end());
    b.insert(b.end(), extra.begin(), extra.end());
    return b;
}

}  // namespace

SampledNorm sample_norm(const NormSpec& spec, const FESpace& space, const QuadratureRule& rule,
                        const std::vector<double>& extra_breaks) {
    spec.validate();
    const std::vector<double> breaks = merge_breakpoints({all_breaks(space, extra_breaks)}, rule);
    const QuadPoints q = quadrature_points(breaks, rule);
    SampledNorm out;
    out.rho = spec.rho;
    std::vector<BasisEntry> ev;
    for (Image im : images_of(spec)) {
        std::vector<Eigen::Triplet<double>> trips;
        for (std::size_t i = 0; i < q.size(); ++i) {
            space.evaluate(q.x[i], ev);
            for (const auto& e : ev) {
                const double v = image_of_entry(im, e, q.x[i], spec);
                if (!std::isfinite(v)) throw InvalidInput("sample_norm: non-finite basis sample");
                if (v != 0.0) trips.emplace_back(static_cast<int>(i), static_cast<int>(e.dof), v);
            }
        }
        NormTerm t;
        t.L.resize(static_cast<Eigen::Index>(q.size()), static_cast<Eigen::Index>(space.dim()));
        t.L.setFromTriplets(trips.begin(), trips.end());
        t.w = Eigen::Map<const Eigen::VectorXd>(q.w.data(), static_cast<Eigen::Index>(q.w.size()));
        out.terms.push_back(std::move(t));
    }
    return out;
}

namespace {

double image_value(Image im, const DiscreteFunction& f, double x, const NormSpec& spec) {
    switch (im) {
    case Image::Value: return f.value(x);
    case Image::Derivative: return f.derivative(x);
    case Image::BetaDerivative: return spec.dbeta(x) * f.value(x) + spec.beta(x) * f.derivative(x);
    }
    return 0.0;
}

QuadPoints points_for(const DiscreteFunction& r, const DiscreteFunction& v, const QuadratureRule& rule) {
    const std::vector<double> breaks =
        merge_breakpoints({all_breaks(r.space(), {}), all_breaks(v.space(), {})}, rule);
    return quadrature_points(breaks, rule);
}

}  // namespace

double spec_norm(const NormSpec& spec, const DiscreteFunction& v, const QuadratureRule& rule) {
    spec.validate();
    const QuadPoints q = points_for(v, v, rule);
    double acc = 0.0;
    for (Image im : images_of(spec)) {
        Eigen::VectorXd z(static_cast<Eigen::Index>(q.size()));
        for (std::size_t i = 0; i < q.size(); ++i) z[static_cast<Eigen::Index>(i)] = image_value(im, v, q.x[i], spec);
        const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(q.w.data(), static_cast<Eigen::Index>(q.w.size()));
        const double n = smoothed_lp_norm(z, w, spec.rho, 0.0);
        acc += n * n;
    }
    return std::sqrt(acc);
}

double duality_pairing(const NormSpec& spec, const DiscreteFunction& r, const DiscreteFunction& v,
                       const QuadratureRule& rule) {
    spec.validate();
    const QuadPoints q = points_for(r, v, rule);
    const double rho = spec.rho;
    double total = 0.0;
    for (Image im : images_of(spec)) {
        // <J_t(r), v> = ||z_r||^{2-rho} int |z_r|^{rho-2} z_r z_v, computed as
        // ||z_r|| * int (|z_r|/||z_r||)^{rho-1} sign(z_r) z_v.
        std::vector<double> zr(q.size()), zv(q.size());
        double mx = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) {
            zr[i] = image_value(im, r, q.x[i], spec);
            zv[i] = image_value(im, v, q.x[i], spec);
            mx = std::max(mx, std::abs(zr[i]));
        }
        if (mx == 0.0) continue;
        double acc = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) acc += q.w[i] * std::pow(std::abs(zr[i]) / mx, rho);
        const double nr = mx * std::pow(acc, 1.0 / rho);
        double pair = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) {
            const double t = std::abs(zr[i]) / nr;
            pair += q.w[i] * std::copysign(std::pow(t, rho - 1.0), zr[i]) * zv[i];
        }
        total += nr * pair;
    }
    return total;
}

}  // namespace nlpg
