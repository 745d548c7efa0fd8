// quadrature.cpp — Gauss–Legendre nodes and weights

#include "optoment/quadrature.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>

namespace optoment {

GaussLegendre::GaussLegendre(unsigned order) {
    if (order < 1) throw std::invalid_argument("GaussLegendre: order must be >= 1");
    // Boost returns the nonnegative zeros; mirror them.
    const std::vector<double> positive = boost::math::legendre_p_zeros<double>(static_cast<int>(order));
    auto weight = [order](double x) {
        const double dp = boost::math::legendre_p_prime(static_cast<int>(order), x);
        return 2.0 / ((1.0 - x * x) * dp * dp);
    };
    for (double x : positive) {
        if (x == 0.0) {
            nodes_.push_back(0.0);
            weights_.push_back(weight(0.0));
            continue;
        }
        nodes_.push_back(x);
        weights_.push_back(weight(x));
        nodes_.push_back(-x);
        weights_.push_back(weight(x));
    }
    std::vector<std::size_t> order_idx(nodes_.size());
    for (std::size_t i = 0; i < order_idx.size(); ++i) order_idx[i] = i;
    std::sort(order_idx.begin(), order_idx.end(), [this](std::size_t i, std::size_t j) { return nodes_[i] < nodes_[j]; });
    std::vector<double> n2, w2;
    for (std::size_t i : order_idx) {
        n2.push_back(nodes_[i]);
        w2.push_back(weights_[i]);
    }
    nodes_ = std::move(n2);
    weights_ = std::move(w2);
}

}  // namespace optoment
