#pragma once

#include <cstddef>
#include <vector>

namespace nlpg {

/// Partition a = x_0 < x_1 < ... < x_N = b of an interval.
class Mesh1D {
public:
    /// Throws InvalidInput unless there are at least two strictly increasing
    /// finite nodes.
    explicit Mesh1D(std::vector<double> nodes);

    const std::vector<double>& nodes() const noexcept { return nodes_; }
    std::size_t n_elem() const noexcept { return nodes_.size() - 1; }
    double a() const noexcept { return nodes_.front(); }
    double b() const noexcept { return nodes_.back(); }
    double left(std::size_t e) const { return nodes_[e]; }
    double right(std::size_t e) const { return nodes_[e + 1]; }
    double h(std::size_t e) const { return nodes_[e + 1] - nodes_[e]; }

    /// Element containing x. Interior nodes belong to the element on their
    /// right; b belongs to the last element. Points outside [a, b] are clamped.
    std::size_t locate(double x) const;

    /// Every element split into `k` equal parts.
    Mesh1D refined(int k) const;

private:
    std::vector<double> nodes_;
};

Mesh1D make_uniform_mesh(double a, double b, std::size_t n_elem);

}  // namespace nlpg
