#pragma once

// Adaptive Gauss-Kronrod (G7,K15) quadrature for scalar- and matrix-valued
// integrands, with the compactification s = u/(1-u) for half-line
// integrals. Integrable endpoint singularities are handled by subdivision.

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

#include "meanmat/matrix.hpp"

namespace meanmat {

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_subdivisions = 400;
};

struct QuadratureError : std::runtime_error {
    QuadratureError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_error(achieved) {}
    double achieved_error;
};

namespace detail {

// K15 nodes (positive half) and weights; G7 shares the odd-indexed nodes.
inline constexpr double kKronrodNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0,
};
inline constexpr double kKronrodWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
};
inline constexpr double kGaussWeights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469,
};

// |K15 - G7| alone badly underestimates the error on panels with an
// integrable singularity (both rules miss in the same direction), so the
// estimate is rescaled against the variation integral the way QUADPACK
// does: err = resasc * min(1, (200 |K-G| / resasc)^1.5).
template <class V, class F>
void gk15_panel(F&& f, double a, double b, V& value, double& error) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    V nodes[15];
    nodes[7] = f(c);
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kKronrodNodes[i];
        nodes[i] = f(c - dx);
        nodes[14 - i] = f(c + dx);
    }
    V k_sum = nodes[7] * kKronrodWeights[7];
    V g_sum = nodes[7] * kGaussWeights[3];
    for (int i = 0; i < 7; ++i) {
        const V pair = nodes[i] + nodes[14 - i];
        k_sum += pair * kKronrodWeights[i];
        if (i % 2 == 1) g_sum += pair * kGaussWeights[i / 2];
    }
    value = k_sum * h;
    const double diff = norm_of(value - g_sum * h);

    const V mean = k_sum * 0.5;
    double resasc = norm_of(nodes[7] - mean) * kKronrodWeights[7];
    for (int i = 0; i < 7; ++i)
        resasc += (norm_of(nodes[i] - mean) + norm_of(nodes[14 - i] - mean)) * kKronrodWeights[i];
    resasc *= h;

    error = diff;
    if (resasc > 0.0 && diff > 0.0) {
        const double scaled = 200.0 * diff / resasc;
        error = scaled < 1.0 ? resasc * scaled * std::sqrt(scaled) : resasc;
    }
}

}  // namespace detail

template <class V>
struct QuadratureResult {
    V value;
    double error = 0.0;
    bool converged = false;
    int panels = 0;
};

// Adaptive bisection on [a, b]; the panel with the largest error estimate
// splits first. The returned value is the sum of panel results in interval
// order, so it does not depend on the processing order.
template <class F>
auto integrate_adaptive(F&& f, double a, double b, const QuadratureSpec& spec)
    -> QuadratureResult<decltype(f(a))> {
    using V = decltype(f(a));
    struct Panel {
        double a, b, error;
        V value;
    };

    std::vector<Panel> panels;
    // (error, index); stale entries are skipped when popped
    std::priority_queue<std::pair<double, int>> queue;

    Panel first;
    first.a = a;
    first.b = b;
    detail::gk15_panel(f, a, b, first.value, first.error);
    double err_sum = first.error;
    double val_norm = norm_of(first.value);
    panels.push_back(std::move(first));
    queue.emplace(panels[0].error, 0);

    while (static_cast<int>(panels.size()) < spec.max_subdivisions && !queue.empty()) {
        if (err_sum <= std::max(spec.abs_tol, spec.rel_tol * val_norm)) break;
        const auto [err, idx] = queue.top();
        queue.pop();
        if (err != panels[idx].error) continue;  // stale
        const double lo = panels[idx].a, hi = panels[idx].b, mid = 0.5 * (lo + hi);
        Panel left, right;
        left.a = lo;
        left.b = mid;
        right.a = mid;
        right.b = hi;
        detail::gk15_panel(f, lo, mid, left.value, left.error);
        detail::gk15_panel(f, mid, hi, right.value, right.error);
        err_sum += left.error + right.error - panels[idx].error;
        val_norm = std::max(val_norm, norm_of(left.value + right.value));
        panels[idx] = std::move(left);
        queue.emplace(panels[idx].error, idx);
        panels.push_back(std::move(right));
        queue.emplace(panels.back().error, static_cast<int>(panels.size()) - 1);
    }

    std::vector<int> order(panels.size());
    for (std::size_t i = 0; i < panels.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int i, int j) { return panels[i].a < panels[j].a; });
    V total = panels[order[0]].value;
    double err_total = panels[order[0]].error;
    for (std::size_t i = 1; i < order.size(); ++i) {
        total += panels[order[i]].value;
        err_total += panels[order[i]].error;
    }

    QuadratureResult<V> r{std::move(total), err_total, false, static_cast<int>(panels.size())};
    r.converged = err_total <= std::max(spec.abs_tol, spec.rel_tol * norm_of(r.value));
    return r;
}

// Integral over [0, inf), split at s = 1 with the tail folded back by
// s = 1/v. Power-law endpoint behavior then sits at 0 on both halves,
// where bisection can grade panels arbitrarily finely (a singularity at
// the right endpoint would hit the spacing of doubles near 1 long before
// the quadrature error is resolved).
template <class F>
auto integrate_half_line(F&& f, const QuadratureSpec& spec)
    -> QuadratureResult<decltype(f(1.0))> {
    QuadratureSpec half = spec;
    half.abs_tol = 0.5 * spec.abs_tol;
    half.rel_tol = 0.5 * spec.rel_tol;
    auto head = integrate_adaptive(f, 0.0, 1.0, half);
    auto tail = integrate_adaptive(
        [&f](double v) { return f(1.0 / v) * (1.0 / (v * v)); }, 0.0, 1.0, half);

    QuadratureResult<decltype(f(1.0))> r{head.value + tail.value, head.error + tail.error, false,
                                         head.panels + tail.panels};
    r.converged = r.error <= std::max(spec.abs_tol, spec.rel_tol * norm_of(r.value));
    return r;
}

template <class V>
const V& require_converged(const QuadratureResult<V>& r, const char* what) {
    if (!r.converged)
        throw QuadratureError(std::string(what) + ": quadrature did not converge", r.error);
    return r.value;
}

}  // namespace meanmat
