// quadrature.hpp — Gauss–Legendre rules and an adaptive integrator for
// matrix-valued integrands

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <type_traits>
#include <span>
#include <stdexcept>
#include <vector>

namespace optoment {

class GaussLegendre {
public:
    explicit GaussLegendre(unsigned order);

    unsigned order() const noexcept { return static_cast<unsigned>(nodes_.size()); }
    std::span<const double> nodes() const noexcept { return nodes_; }
    std::span<const double> weights() const noexcept { return weights_; }

    // ∫_a^b f. T must support T + T and double * T.
    template <class F>
    auto integrate(F&& f, double a, double b) const {
        using T = std::decay_t<std::invoke_result_t<F&, double>>;
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        T acc = (weights_[0] * half) * f(mid + half * nodes_[0]);
        for (std::size_t k = 1; k < nodes_.size(); ++k) {
            acc += (weights_[k] * half) * f(mid + half * nodes_[k]);
        }
        return acc;
    }

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

template <class T>
struct QuadratureResult {
    T value;
    double error_estimate{0.0};  // max-abs entry of (fine − coarse), summed over panels
    int panels{0};
};

struct AdaptiveOptions {
    unsigned order{32};       // coarse rule; the fine rule has twice the nodes
    int initial_panels{1};
    int max_depth{30};
    double rel_tol{1e-8};
};

// Adaptive bisection with order-doubling error estimates. The tolerance is
// relative to the max-abs entry of the whole integral, shared out over panels
// by length. T is an Eigen matrix type.
template <class T, class F>
QuadratureResult<T> integrate_adaptive(F&& f, double a, double b, const AdaptiveOptions& opts = {}) {
    if (!(b > a)) throw std::invalid_argument("integrate_adaptive: need b > a");
    static thread_local std::map<unsigned, GaussLegendre> cache;
    auto rule = [](unsigned order) -> const GaussLegendre& {
        return cache.try_emplace(order, order).first->second;
    };
    const GaussLegendre& coarse = rule(opts.order);
    const GaussLegendre& fine = rule(2 * opts.order);

    struct Panel {
        double lo, hi;
        T coarse, fine;
        int depth;
    };
    std::vector<Panel> work;
    T total_estimate;
    const double width = (b - a) / opts.initial_panels;
    for (int p = 0; p < opts.initial_panels; ++p) {
        const double lo = a + p * width;
        const double hi = (p + 1 == opts.initial_panels) ? b : lo + width;
        T c = coarse.integrate(f, lo, hi);
        T fn = fine.integrate(f, lo, hi);
        if (p == 0) {
            total_estimate = fn;
        } else {
            total_estimate += fn;
        }
        work.push_back({lo, hi, std::move(c), std::move(fn), 0});
    }
    const double scale = std::max(total_estimate.cwiseAbs().maxCoeff(), 1e-300);

    QuadratureResult<T> result;
    bool first = true;
    while (!work.empty()) {
        Panel panel = std::move(work.back());
        work.pop_back();
        const double err = (panel.fine - panel.coarse).cwiseAbs().maxCoeff();
        const double allowed = opts.rel_tol * scale * (panel.hi - panel.lo) / (b - a);
        if (err <= allowed || panel.depth >= opts.max_depth) {
            if (first) {
                result.value = panel.fine;
                first = false;
            } else {
                result.value += panel.fine;
            }
            result.error_estimate += err;
            ++result.panels;
            continue;
        }
        const double mid = 0.5 * (panel.lo + panel.hi);
        for (auto [lo, hi] : {std::pair{panel.lo, mid}, std::pair{mid, panel.hi}}) {
            work.push_back({lo, hi, coarse.integrate(f, lo, hi), fine.integrate(f, lo, hi), panel.depth + 1});
        }
    }
    return result;
}

}  // namespace optoment
