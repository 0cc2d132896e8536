#include "nlpg/mesh.hpp"

#include <algorithm>
#include <cmath>

#include "nlpg/errors.hpp"

namespace nlpg {

Mesh1D::Mesh1D(std::vector<double> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 2) throw InvalidInput("Mesh1D: need at least two nodes");
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!std::isfinite(nodes_[i])) throw InvalidInput("Mesh1D: non-finite node");
        if (i > 0 && !(nodes_[i] > nodes_[i - 1]))
            throw InvalidInput("Mesh1D: nodes must be strictly increasing");
    }
}

std::size_t Mesh1D::locate(double x) const {
    if (x <= nodes_.front()) return 0;
    if (x >= nodes_.back()) return n_elem() - 1;
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
    return static_cast<std::size_t>(it - nodes_.begin()) - 1;
}

Mesh1D Mesh1D::refined(int k) const {
    if (k < 1) throw InvalidInput("Mesh1D::refined: factor must be >= 1");
    std::vector<double> out;
    out.reserve(n_elem() * static_cast<std::size_t>(k) + 1);
    for (std::size_t e = 0; e < n_elem(); ++e)
        for (int i = 0; i < k; ++i) out.push_back(left(e) + h(e) * i / k);
    out.push_back(b());
    return Mesh1D(std::move(out));
}

Mesh1D make_uniform_mesh(double a, double b, std::size_t n_elem) {
    if (!(b > a)) throw InvalidInput("make_uniform_mesh: need b > a");
    if (n_elem < 1) throw InvalidInput("make_uniform_mesh: need at least one element");
    std::vector<double> nodes(n_elem + 1);
    for (std::size_t i = 0; i <= n_elem; ++i)
        nodes[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n_elem);
    nodes.back() = b;
    return Mesh1D(std::move(nodes));
}

}  // namespace nlpg
