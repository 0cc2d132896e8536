#include "nlpg/fe_space.hpp"

#include <algorithm>
#include <cmath>

#include "nlpg/errors.hpp"

namespace nlpg {

namespace {

// Legendre polynomials L_0..L_n at xi.
void legendre(int n, double xi, std::vector<double>& L) {
    L.assign(static_cast<std::size_t>(n + 1), 0.0);
    L[0] = 1.0;
    if (n >= 1) L[1] = xi;
    for (int k = 2; k <= n; ++k)
        L[static_cast<std::size_t>(k)] =
            ((2.0 * k - 1.0) * xi * L[static_cast<std::size_t>(k - 1)] - (k - 1.0) * L[static_cast<std::size_t>(k - 2)]) / k;
}

bool same_point(double a, double b, double scale) { return std::abs(a - b) <= 1e-14 * scale; }

}  // namespace

FESpace FESpace::continuous(Mesh1D mesh, int degree, BoundaryCondition bc) {
    if (degree < 1) throw InvalidInput("FESpace::continuous: degree must be >= 1");
    FESpace s(std::move(mesh));
    s.family_ = Family::ContinuousPk;
    s.degree_ = degree;
    s.bc_ = bc;
    const std::size_t nv = s.mesh_.nodes().size();
    s.node_dof_.assign(nv, -1);
    const bool fix_left = bc == BoundaryCondition::ZeroLeft || bc == BoundaryCondition::ZeroBoth;
    const bool fix_right = bc == BoundaryCondition::ZeroRight || bc == BoundaryCondition::ZeroBoth;
    long next = 0;
    for (std::size_t i = 0; i < nv; ++i) {
        if ((i == 0 && fix_left) || (i + 1 == nv && fix_right)) continue;
        s.node_dof_[i] = next++;
    }
    s.n_vertex_dofs_ = static_cast<std::size_t>(next);
    s.dim_ = s.n_vertex_dofs_ + s.mesh_.n_elem() * static_cast<std::size_t>(degree - 1);
    if (s.dim_ == 0) throw InvalidInput("FESpace::continuous: space has no degrees of freedom");
    return s;
}

FESpace FESpace::piecewise_constant(Mesh1D mesh) {
    FESpace s(std::move(mesh));
    s.family_ = Family::DiscontinuousP0;
    s.degree_ = 0;
    s.dim_ = s.mesh_.n_elem();
    return s;
}

FESpace FESpace::custom(Mesh1D mesh, std::vector<CustomBasisFunction> basis) {
    if (basis.empty()) throw InvalidInput("FESpace::custom: empty basis");
    FESpace s(std::move(mesh));
    s.family_ = Family::Custom;
    s.degree_ = -1;
    for (const auto& f : basis) {
        if (!f.value || !f.derivative) throw InvalidInput("FESpace::custom: missing callbacks");
        if (!(f.support_hi > f.support_lo)) throw InvalidInput("FESpace::custom: empty support");
    }
    s.custom_ = std::move(basis);
    s.dim_ = s.custom_.size();
    s.build_custom_index();

    if (s.dim_ <= 400) {
        // H^1 Gram matrix; a tiny eigenvalue ratio means dependent functions.
        QuadratureRule rule;
        const QuadPoints q = quadrature_points(s.custom_cells_, rule);
        Eigen::MatrixXd G = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(s.dim_), static_cast<Eigen::Index>(s.dim_));
        std::vector<BasisEntry> ev;
        for (std::size_t i = 0; i < q.size(); ++i) {
            s.evaluate(q.x[i], ev);
            for (const auto& a : ev)
                for (const auto& b : ev)
                    G(static_cast<Eigen::Index>(a.dof), static_cast<Eigen::Index>(b.dof)) +=
                        q.w[i] * (a.value * b.value + a.deriv * b.deriv);
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G, Eigen::EigenvaluesOnly);
        const double lmax = es.eigenvalues().maxCoeff();
        const double lmin = es.eigenvalues().minCoeff();
        if (!(lmax > 0.0) || !(lmin > 1e-14 * lmax))
            throw DegenerateSubspace("FESpace::custom: basis functions are linearly dependent");
    }
    return s;
}

void FESpace::build_custom_index() {
    std::vector<std::vector<double>> lists{mesh_.nodes()};
    for (const auto& f : custom_) {
        lists.push_back(f.breakpoints);
        lists.push_back(f.jumps);
        lists.push_back({f.support_lo, f.support_hi});
    }
    std::vector<double> all;
    for (const auto& l : lists)
        for (double x : l)
            if (x >= mesh_.a() && x <= mesh_.b()) all.push_back(x);
    std::sort(all.begin(), all.end());
    const double scale = std::max(1.0, mesh_.b() - mesh_.a());
    custom_cells_.clear();
    for (double x : all)
        if (custom_cells_.empty() || x - custom_cells_.back() > 1e-14 * scale) custom_cells_.push_back(x);
    active_.assign(custom_cells_.size() - 1, {});
    for (std::size_t j = 0; j < custom_.size(); ++j) {
        const auto& f = custom_[j];
        auto lo = std::lower_bound(custom_cells_.begin(), custom_cells_.end(), f.support_lo - 1e-14 * scale);
        for (auto it = lo; it + 1 != custom_cells_.end() && it != custom_cells_.end(); ++it) {
            if (*it >= f.support_hi - 1e-14 * scale) break;
            active_[static_cast<std::size_t>(it - custom_cells_.begin())].push_back(j);
        }
    }
}

void FESpace::evaluate(double x, std::vector<BasisEntry>& out, int side) const {
    out.clear();
    const auto& nodes = mesh_.nodes();
    const double scale = std::max(1.0, mesh_.b() - mesh_.a());
    if (family_ == Family::Custom) {
        if (x < custom_cells_.front() - 1e-14 * scale || x > custom_cells_.back() + 1e-14 * scale) return;
        auto it = std::upper_bound(custom_cells_.begin(), custom_cells_.end(), x);
        std::size_t c = it == custom_cells_.begin() ? 0 : static_cast<std::size_t>(it - custom_cells_.begin()) - 1;
        c = std::min(c, active_.size() - 1);
        if (side < 0 && c > 0 && same_point(x, custom_cells_[c], scale)) --c;
        for (std::size_t j : active_[c]) out.push_back({j, custom_[j].value(x), custom_[j].derivative(x)});
        return;
    }
    if (x < mesh_.a() - 1e-14 * scale || x > mesh_.b() + 1e-14 * scale) return;
    std::size_t e = mesh_.locate(x);
    if (side < 0 && e > 0 && same_point(x, nodes[e], scale)) --e;
    if (family_ == Family::DiscontinuousP0) {
        out.push_back({e, 1.0, 0.0});
        return;
    }
    const double h = mesh_.h(e);
    const double xi = 2.0 * (x - nodes[e]) / h - 1.0;
    const double jac = 2.0 / h;
    if (node_dof_[e] >= 0) out.push_back({static_cast<std::size_t>(node_dof_[e]), 0.5 * (1.0 - xi), -0.5 * jac});
    if (node_dof_[e + 1] >= 0)
        out.push_back({static_cast<std::size_t>(node_dof_[e + 1]), 0.5 * (1.0 + xi), 0.5 * jac});
    if (degree_ >= 2) {
        thread_local std::vector<double> L;
        legendre(degree_, xi, L);
        const std::size_t base = n_vertex_dofs_ + e * static_cast<std::size_t>(degree_ - 1);
        for (int j = 2; j <= degree_; ++j) {
            const double c = 1.0 / std::sqrt(2.0 * (2.0 * j - 1.0));
            const double v = c * (L[static_cast<std::size_t>(j)] - L[static_cast<std::size_t>(j - 2)]);
            const double d = std::sqrt((2.0 * j - 1.0) / 2.0) * L[static_cast<std::size_t>(j - 1)] * jac;
            out.push_back({base + static_cast<std::size_t>(j - 2), v, d});
        }
    }
}

std::vector<double> FESpace::breakpoints() const {
    if (family_ == Family::Custom) return custom_cells_;
    return mesh_.nodes();
}

std::vector<double> FESpace::discontinuities() const {
    std::vector<double> out;
    if (family_ == Family::DiscontinuousP0) {
        const auto& n = mesh_.nodes();
        out.assign(n.begin() + 1, n.end() - 1);
    } else if (family_ == Family::Custom) {
        for (const auto& f : custom_) out.insert(out.end(), f.jumps.begin(), f.jumps.end());
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    }
    return out;
}

bool FESpace::vanishes_at(double x) const {
    std::vector<BasisEntry> ev;
    for (int side : {-1, +1}) {
        evaluate(x, ev, side);
        for (const auto& e : ev)
            if (std::abs(e.value) > 1e-12) return false;
    }
    return true;
}

DiscreteFunction::DiscreteFunction(std::shared_ptr<const FESpace> space, Eigen::VectorXd coeffs)
    : space_(std::move(space)), coeffs_(std::move(coeffs)) {
    if (!space_) throw InvalidInput("DiscreteFunction: null space");
    if (static_cast<std::size_t>(coeffs_.size()) != space_->dim())
        throw InvalidInput("DiscreteFunction: coefficient count does not match the space dimension");
}

double DiscreteFunction::value(double x, int side) const {
    thread_local std::vector<BasisEntry> ev;
    space_->evaluate(x, ev, side);
    double s = 0.0;
    for (const auto& e : ev) s += coeffs_[static_cast<Eigen::Index>(e.dof)] * e.value;
    return s;
}

double DiscreteFunction::derivative(double x, int side) const {
    thread_local std::vector<BasisEntry> ev;
    space_->evaluate(x, ev, side);
    double s = 0.0;
    for (const auto& e : ev) s += coeffs_[static_cast<Eigen::Index>(e.dof)] * e.deriv;
    return s;
}

std::vector<double> DiscreteFunction::element_samples(std::size_t e, int n) const {
    const Mesh1D& m = space_->mesh();
    if (e >= m.n_elem() || n < 2) throw InvalidInput("element_samples: bad element or sample count");
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double x = m.left(e) + m.h(e) * i / (n - 1);
        // Stay inside element e at its endpoints.
        const int side = i == 0 ? +1 : (i == n - 1 ? -1 : +1);
        out[static_cast<std::size_t>(i)] = value(x, side);
    }
    return out;
}

DiscreteFunction interpolate(std::shared_ptr<const FESpace> space, const ScalarFunction& f) {
    const FESpace& s = *space;
    const Mesh1D& m = s.mesh();
    Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.dim()));
    if (s.family() == Family::Custom) throw InvalidInput("interpolate: custom spaces are not supported");
    if (s.family() == Family::DiscontinuousP0) {
        const GaussLegendre& g = gauss_legendre(10);
        for (std::size_t e = 0; e < m.n_elem(); ++e) {
            double acc = 0.0;
            for (std::size_t i = 0; i < g.x.size(); ++i)
                acc += 0.5 * g.w[i] * f(0.5 * (m.left(e) + m.right(e)) + 0.5 * m.h(e) * g.x[i]);
            c[static_cast<Eigen::Index>(e)] = acc;
        }
        return DiscreteFunction(std::move(space), std::move(c));
    }
    // Vertex values.
    std::vector<BasisEntry> ev;
    const auto& nodes = m.nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        s.evaluate(nodes[i], ev);
        for (const auto& e : ev)
            if (std::abs(e.value - 1.0) < 1e-14 && e.dof < s.dim() && s.degree() >= 1) {
                // Only the hat that peaks here has value 1 at a vertex.
                c[static_cast<Eigen::Index>(e.dof)] = f(nodes[i]);
            }
    }
    const int k = s.degree();
    if (k >= 2) {
        const GaussLegendre& g = gauss_legendre(k - 1);
        DiscreteFunction partial(space, c);
        for (std::size_t e = 0; e < m.n_elem(); ++e) {
            Eigen::MatrixXd A(k - 1, k - 1);
            Eigen::VectorXd rhs(k - 1);
            std::size_t first_bubble = 0;
            for (int i = 0; i < k - 1; ++i) {
                const double x = 0.5 * (m.left(e) + m.right(e)) + 0.5 * m.h(e) * g.x[static_cast<std::size_t>(i)];
                s.evaluate(x, ev);
                rhs[i] = f(x) - partial.value(x);
                // Bubbles are the last k - 1 entries of the element evaluation.
                const std::size_t nb = ev.size() - static_cast<std::size_t>(k - 1);
                first_bubble = ev[nb].dof;
                for (int j = 0; j < k - 1; ++j) A(i, j) = ev[nb + static_cast<std::size_t>(j)].value;
            }
            const Eigen::VectorXd b = A.fullPivLu().solve(rhs);
            for (int j = 0; j < k - 1; ++j) c[static_cast<Eigen::Index>(first_bubble) + j] = b[j];
        }
    }
    return DiscreteFunction(std::move(space), std::move(c));
}

namespace {

// beta * v_j (called N_j below) for the three supported sign patterns.
enum class BetaPattern { Positive, Negative, TwoInflow };

double overlap(double lo, double hi, double a, double b) {
    return std::max(0.0, std::min(hi, b) - std::max(lo, a));
}

}  // namespace

FESpace build_ideal_advection_test_space(const Mesh1D& mesh, const ScalarFunction& beta,
                                         const ScalarFunction& dbeta_in, bool local) {
    if (!beta) throw InvalidInput("ideal test space: beta is required");
    ScalarFunction dbeta = dbeta_in;
    if (!dbeta) {
        dbeta = [beta](double x) {
            const double h = 1e-6 * std::max(1.0, std::abs(x));
            return (beta(x + h) - beta(x - h)) / (2.0 * h);
        };
    }
    const auto& nodes = mesh.nodes();
    const double a = mesh.a(), b = mesh.b();

    // Sign pattern from dense sampling.
    std::vector<double> xs;
    for (std::size_t e = 0; e < mesh.n_elem(); ++e)
        for (int i = 0; i < 32; ++i) xs.push_back(mesh.left(e) + mesh.h(e) * i / 32.0);
    xs.push_back(b);
    int changes = 0;
    bool pos_to_neg = true;
    bool touches_zero = false;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double v = beta(xs[i]);
        if (!std::isfinite(v)) throw InvalidInput("ideal test space: beta is not finite");
        if (v == 0.0) touches_zero = true;
        if (i > 0) {
            const double u = beta(xs[i - 1]);
            if ((u > 0.0 && v < 0.0) || (u < 0.0 && v > 0.0) || (u > 0.0 && v == 0.0 && i + 1 < xs.size() && beta(xs[i + 1]) < 0.0)) {
                ++changes;
                if (u < 0.0) pos_to_neg = false;
            }
        }
    }
    BetaPattern pattern;
    double xt = 0.0;
    if (changes == 0) {
        if (touches_zero) throw SingularCoefficient("ideal test space: beta vanishes without changing sign");
        pattern = beta(a) > 0.0 ? BetaPattern::Positive : BetaPattern::Negative;
    } else if (changes == 1 && pos_to_neg) {
        pattern = BetaPattern::TwoInflow;
        double lo = a, hi = b;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
            const double mid = 0.5 * (lo + hi);
            if (beta(mid) > 0.0) lo = mid;
            else hi = mid;
        }
        xt = 0.5 * (lo + hi);
        if (local) throw InvalidInput("ideal test space: the local basis needs a one-signed beta");
    } else {
        throw SingularCoefficient("ideal test space: beta must be one-signed or decrease through one zero");
    }
    const double scale = std::max(1.0, b - a);
    for (double n : nodes)
        if (pattern == BetaPattern::TwoInflow && std::abs(n - xt) < 1e-12 * scale) xt = n;

    const std::size_t N = mesh.n_elem();
    // N_j = beta v_j and its derivative for the unscaled global basis.
    auto make_N = [&, xt, pattern](std::size_t j) {
        const double lo = nodes[j], hi = nodes[j + 1];
        struct Nfun {
            std::function<double(double)> val, der;
        } out;
        switch (pattern) {
        case BetaPattern::Positive:
            out.val = [lo, hi](double x) { return overlap(lo, hi, x, hi); };
            out.der = [lo, hi](double x) { return (x > lo && x < hi) ? -1.0 : 0.0; };
            break;
        case BetaPattern::Negative:
            out.val = [lo, hi](double x) { return -overlap(lo, hi, lo, x); };
            out.der = [lo, hi](double x) { return (x > lo && x < hi) ? -1.0 : 0.0; };
            break;
        case BetaPattern::TwoInflow: {
            const double c = overlap(lo, hi, lo, xt);
            out.val = [lo, hi, c](double x) { return c - overlap(lo, hi, lo, x); };
            out.der = [lo, hi](double x) { return (x > lo && x < hi) ? -1.0 : 0.0; };
            break;
        }
        }
        return out;
    };

    std::vector<CustomBasisFunction> basis;
    basis.reserve(N);
    auto wrap = [&](std::function<double(double)> Nv, std::function<double(double)> Nd, double slo, double shi,
                    std::vector<double> bps, std::vector<double> jumps) {
        CustomBasisFunction f;
        f.value = [beta, Nv](double x) { return Nv(x) / beta(x); };
        f.derivative = [beta, dbeta, Nv, Nd](double x) {
            const double bx = beta(x);
            const double v = Nv(x) / bx;
            return (Nd(x) - v * dbeta(x)) / bx;
        };
        f.support_lo = slo;
        f.support_hi = shi;
        f.breakpoints = std::move(bps);
        f.jumps = std::move(jumps);
        basis.push_back(std::move(f));
    };

    if (!local) {
        for (std::size_t j = 0; j < N; ++j) {
            auto n = make_N(j);
            const double lo = nodes[j], hi = nodes[j + 1];
            double slo = a, shi = b;
            std::vector<double> jumps;
            if (pattern == BetaPattern::Positive) shi = hi;
            else if (pattern == BetaPattern::Negative) slo = lo;
            else {
                if (hi <= xt + 1e-14 * scale) shi = std::min(b, std::max(hi, xt));
                if (lo >= xt - 1e-14 * scale) slo = std::max(a, std::min(lo, xt));
                if ((std::abs(hi - xt) < 1e-14 * scale || std::abs(lo - xt) < 1e-14 * scale) && xt > a && xt < b)
                    jumps.push_back(xt);
            }
            std::vector<double> bps{lo, hi};
            if (pattern == BetaPattern::TwoInflow) bps.push_back(xt);
            wrap(n.val, n.der, slo, shi, bps, jumps);
        }
    } else {
        // Scaled differences with support on at most two elements.
        std::vector<std::function<double(double)>> lv(N), ld(N);
        for (std::size_t j = 0; j < N; ++j) {
            auto n = make_N(j);
            const double h = mesh.h(j);
            lv[j] = [f = n.val, h](double x) { return f(x) / h; };
            ld[j] = [f = n.der, h](double x) { return f(x) / h; };
        }
        for (std::size_t j = 0; j < N; ++j) {
            std::function<double(double)> v, d;
            double slo, shi;
            if (pattern == BetaPattern::Positive) {
                if (j == 0) {
                    v = lv[0];
                    d = ld[0];
                } else {
                    v = [f = lv[j], g = lv[j - 1]](double x) { return f(x) - g(x); };
                    d = [f = ld[j], g = ld[j - 1]](double x) { return f(x) - g(x); };
                }
                slo = nodes[j == 0 ? 0 : j - 1];
                shi = nodes[j + 1];
            } else {
                if (j + 1 == N) {
                    v = lv[j];
                    d = ld[j];
                } else {
                    v = [f = lv[j], g = lv[j + 1]](double x) { return f(x) - g(x); };
                    d = [f = ld[j], g = ld[j + 1]](double x) { return f(x) - g(x); };
                }
                slo = nodes[j];
                shi = nodes[std::min(N, j + 2)];
            }
            wrap(v, d, slo, shi, {}, {});
        }
    }
    return FESpace::custom(mesh, std::move(basis));
}

namespace {

CustomBasisFunction graded_phi(double eps) {
    const double slope = std::pow(eps, -1.0 / 3.0) - 1.0;
    CustomBasisFunction f;
    f.value = [eps, slope](double x) { return x <= eps ? slope * x : std::cbrt(x * x) - x; };
    f.derivative = [eps, slope](double x) {
        return x <= eps ? slope : (2.0 / 3.0) / std::cbrt(x) - 1.0;
    };
    f.support_lo = 0.0;
    f.support_hi = 1.0;
    f.breakpoints = {eps};
    return f;
}

}  // namespace

FESpace build_graded_basis(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw InvalidInput("build_graded_basis: need 0 < eps < 1");
    return FESpace::custom(make_uniform_mesh(0.0, 1.0, 1), {graded_phi(eps)});
}

FESpace build_graded_enriched_basis(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw InvalidInput("build_graded_enriched_basis: need 0 < eps < 1");
    CustomBasisFunction psi;
    psi.value = [](double x) { return x * (1.0 - x); };
    psi.derivative = [](double x) { return 1.0 - 2.0 * x; };
    psi.support_lo = 0.0;
    psi.support_hi = 1.0;
    return FESpace::custom(make_uniform_mesh(0.0, 1.0, 1), {graded_phi(eps), psi});
}

}  // namespace nlpg
