#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace tcmdp {

enum class QuadratureScheme { midpoint_composite, exact_piecewise };

//! Rule on [0, 1] with weights summing to one.
class Quadrature {
public:
    //! k equal cells, one node at each midpoint.
    static Quadrature midpoint(std::size_t k = 256);
    //! Midpoints of the 2^depth dyadic cells. Integrates functions that are
    //! constant on dyadic cells of depth <= depth without error.
    static Quadrature exact_piecewise(int depth);
    //! Exact rule for depth when depth >= 8, otherwise the 256-node default.
    static Quadrature refined_for(int depth);

    Quadrature(std::vector<double> nodes, std::vector<double> weights, QuadratureScheme scheme);

    std::size_t size() const { return nodes_.size(); }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }
    QuadratureScheme scheme() const { return scheme_; }
    //! Dyadic depth up to which piecewise constants are integrated exactly,
    //! or -1 when the node layout is not dyadic.
    int exact_depth() const { return exact_depth_; }

    double integrate(const std::function<double(double)>& f) const;

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
    QuadratureScheme scheme_;
    int exact_depth_ = -1;
};

//! Tensor product of four rules, for integrals over (x, a, g, y) in [0,1]^4.
class ProductQuadrature {
public:
    explicit ProductQuadrature(const Quadrature& q) : axes_{q, q, q, q} {}
    ProductQuadrature(Quadrature qx, Quadrature qa, Quadrature qg, Quadrature qy)
        : axes_{std::move(qx), std::move(qa), std::move(qg), std::move(qy)} {}

    const Quadrature& axis(std::size_t i) const { return axes_[i]; }
    std::size_t size() const;

private:
    std::array<Quadrature, 4> axes_;
};

} // namespace tcmdp
