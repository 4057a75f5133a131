// Copyright 2026 The fqcontrol Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FQC_SIMPLEX_H
#define FQC_SIMPLEX_H

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

namespace fqc {

struct SimplexOptions {
    int max_iterations = 2000;
    /// Converged when the spread of vertex values is below this...
    double f_tolerance = 1e-12;
    /// ...and every vertex lies within this distance of the best one.
    double x_tolerance = 1e-9;
    double initial_step = 0.25;
    /// Re-seeding a fresh simplex at the converged point guards against collapsed simplices.
    int max_restarts = 4;
};

template <std::size_t N>
struct SimplexResult {
    std::array<double, N> x{};
    double f = 0;
    int iterations = 0;
    int evaluations = 0;
    /// Best objective value after each iteration.
    std::vector<double> trace;
};

/// Nelder-Mead downhill simplex over R^N.
///
/// The objective must be defined everywhere; constraints are handled by the caller's
/// parametrization (projection or reflection inside `f`).
template <std::size_t N, class F>
SimplexResult<N> simplex_minimize(F &&f, const std::array<double, N> &x0, const SimplexOptions &opt = {}) {
    using Point = std::array<double, N>;
    constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;

    SimplexResult<N> res;
    auto eval = [&](const Point &p) {
        res.evaluations++;
        return f(p);
    };

    std::array<Point, N + 1> pts;
    std::array<double, N + 1> vals;
    auto seed_simplex = [&](const Point &base, double step) {
        pts[0] = base;
        vals[0] = eval(base);
        for (std::size_t i = 0; i < N; i++) {
            pts[i + 1] = base;
            pts[i + 1][i] += step;
            vals[i + 1] = eval(pts[i + 1]);
        }
    };

    std::array<std::size_t, N + 1> order;
    auto sort_vertices = [&] {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        auto p2 = pts;
        auto v2 = vals;
        for (std::size_t k = 0; k <= N; k++) {
            pts[k] = p2[order[k]];
            vals[k] = v2[order[k]];
        }
    };

    auto converged = [&] {
        if (vals[N] - vals[0] > opt.f_tolerance) {
            return false;
        }
        for (std::size_t k = 1; k <= N; k++) {
            double d = 0;
            for (std::size_t i = 0; i < N; i++) {
                d = std::max(d, std::abs(pts[k][i] - pts[0][i]));
            }
            if (d > opt.x_tolerance) {
                return false;
            }
        }
        return true;
    };

    auto along = [](const Point &c, const Point &w, double t) {
        Point p;
        for (std::size_t i = 0; i < N; i++) {
            p[i] = c[i] + t * (w[i] - c[i]);
        }
        return p;
    };

    seed_simplex(x0, opt.initial_step);
    sort_vertices();
    int restarts = 0;
    double step = opt.initial_step;
    while (res.iterations < opt.max_iterations) {
        if (converged()) {
            if (restarts >= opt.max_restarts) {
                break;
            }
            double before = vals[0];
            Point best = pts[0];
            restarts++;
            step *= 0.5;
            seed_simplex(best, step);
            sort_vertices();
            if (before - vals[0] <= opt.f_tolerance && converged()) {
                break;
            }
            continue;
        }
        res.iterations++;

        Point centroid{};
        for (std::size_t k = 0; k < N; k++) {
            for (std::size_t i = 0; i < N; i++) {
                centroid[i] += pts[k][i] / static_cast<double>(N);
            }
        }
        Point reflected = along(centroid, pts[N], -kReflect);
        double fr = eval(reflected);
        if (fr < vals[0]) {
            Point expanded = along(centroid, pts[N], -kExpand);
            double fe = eval(expanded);
            if (fe < fr) {
                pts[N] = expanded;
                vals[N] = fe;
            } else {
                pts[N] = reflected;
                vals[N] = fr;
            }
        } else if (fr < vals[N - 1]) {
            pts[N] = reflected;
            vals[N] = fr;
        } else {
            bool outside = fr < vals[N];
            Point contracted = outside ? along(centroid, pts[N], -kContract) : along(centroid, pts[N], kContract);
            double fc = eval(contracted);
            if (fc < (outside ? fr : vals[N])) {
                pts[N] = contracted;
                vals[N] = fc;
            } else {
                for (std::size_t k = 1; k <= N; k++) {
                    pts[k] = along(pts[0], pts[k], kShrink);
                    vals[k] = eval(pts[k]);
                }
            }
        }
        sort_vertices();
        res.trace.push_back(vals[0]);
    }
    res.x = pts[0];
    res.f = vals[0];
    return res;
}

}  // namespace fqc

#endif
