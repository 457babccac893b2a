#pragma once

// Derivative-free local minimization (Nelder-Mead simplex with restarts).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace coherence::optimize {

struct NelderMeadOptions {
    double initial_step = 0.2;
    double ftol = 1e-13;   // spread of simplex values
    double xtol = 1e-9;    // simplex diameter
    int max_evaluations = 20000;
    int restarts = 2;      // fresh simplex around the incumbent after convergence
};

struct MinimizeResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int evaluations = 0;
    bool converged = false;
};

template <typename F>
MinimizeResult nelder_mead(F&& f, Eigen::VectorXd x0, const NelderMeadOptions& opts = {}) {
    const Eigen::Index n = x0.size();
    MinimizeResult best{x0, f(x0), 1, false};
    if (n == 0) {
        best.converged = true;
        return best;
    }

    double step = opts.initial_step;
    for (int round = 0; round <= opts.restarts; ++round) {
        std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(n + 1), best.x);
        std::vector<double> vals(static_cast<std::size_t>(n + 1), best.value);
        for (Eigen::Index i = 0; i < n; ++i) {
            auto& p = pts[static_cast<std::size_t>(i + 1)];
            p(i) += step;
            vals[static_cast<std::size_t>(i + 1)] = f(p);
        }
        best.evaluations += static_cast<int>(n);

        std::vector<std::size_t> order(pts.size());
        bool converged = false;
        while (best.evaluations < opts.max_evaluations) {
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
            const std::size_t lo = order.front();
            const std::size_t hi = order.back();
            const std::size_t second = order[order.size() - 2];

            double diameter = 0.0;
            for (const auto& p : pts) diameter = std::max(diameter, (p - pts[lo]).cwiseAbs().maxCoeff());
            if (vals[hi] - vals[lo] <= opts.ftol && diameter <= opts.xtol) {
                converged = true;
                break;
            }
            if (vals[hi] - vals[lo] <= 0.0 && diameter <= 1e3 * opts.xtol) {
                converged = true;
                break;
            }

            Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
            for (std::size_t k = 0; k < pts.size(); ++k)
                if (k != hi) centroid += pts[k];
            centroid /= static_cast<double>(n);

            const Eigen::VectorXd reflected = centroid + (centroid - pts[hi]);
            const double fr = f(reflected);
            ++best.evaluations;
            if (fr < vals[lo]) {
                const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - pts[hi]);
                const double fe = f(expanded);
                ++best.evaluations;
                if (fe < fr) {
                    pts[hi] = expanded;
                    vals[hi] = fe;
                } else {
                    pts[hi] = reflected;
                    vals[hi] = fr;
                }
                continue;
            }
            if (fr < vals[second]) {
                pts[hi] = reflected;
                vals[hi] = fr;
                continue;
            }
            const bool outside = fr < vals[hi];
            const Eigen::VectorXd contracted =
                outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid))
                        : Eigen::VectorXd(centroid + 0.5 * (pts[hi] - centroid));
            const double fc = f(contracted);
            ++best.evaluations;
            if (fc < (outside ? fr : vals[hi])) {
                pts[hi] = contracted;
                vals[hi] = fc;
                continue;
            }
            // shrink toward the best vertex
            for (std::size_t k = 0; k < pts.size(); ++k) {
                if (k == lo) continue;
                pts[k] = pts[lo] + 0.5 * (pts[k] - pts[lo]);
                vals[k] = f(pts[k]);
            }
            best.evaluations += static_cast<int>(n);
        }

        const auto it = std::min_element(vals.begin(), vals.end());
        const auto idx = static_cast<std::size_t>(std::distance(vals.begin(), it));
        if (*it <= best.value) {
            best.value = *it;
            best.x = pts[idx];
        }
        best.converged = converged;
        if (!converged) break;
        step = std::max(10.0 * opts.xtol, 0.1 * step);
    }
    return best;
}

}  // namespace coherence::optimize
