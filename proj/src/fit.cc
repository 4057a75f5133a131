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

#include "fqc/fit.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "fqc/errors.h"

namespace fqc {

namespace {

/// Feature multiplying the first linear coefficient for a given nonlinear parameter.
double basis(ModelKind kind, double capacity, double t) {
    switch (kind) {
        case ModelKind::Linear:
            return capacity;
        case ModelKind::Power:
            return capacity == 0.0 ? 0.0 : std::pow(capacity, t);
        case ModelKind::Log:
            return std::log2(capacity + t);
    }
    return 0;
}

struct Profiled {
    double slope = 0;
    double intercept = 0;
    double sse = std::numeric_limits<double>::infinity();
};

/// Linear least squares of y on [basis, 1] for a fixed nonlinear parameter.
Profiled profile(ModelKind kind, std::span<const FitPoint> pts, double t) {
    double n = static_cast<double>(pts.size());
    double sx = 0, sy = 0;
    for (const auto &p : pts) {
        sx += basis(kind, p.capacity, t);
        sy += p.y;
    }
    double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (const auto &p : pts) {
        double dx = basis(kind, p.capacity, t) - mx;
        sxx += dx * dx;
        sxy += dx * (p.y - my);
    }
    Profiled r;
    if (!(sxx > 0)) {
        return r;
    }
    r.slope = sxy / sxx;
    r.intercept = my - r.slope * mx;
    r.sse = 0;
    for (const auto &p : pts) {
        double e = r.slope * basis(kind, p.capacity, t) + r.intercept - p.y;
        r.sse += e * e;
    }
    return r;
}

/// Scan then golden section on s in [lo, hi]; t = to_param(s).
double outer_search(const std::function<double(double)> &sse_at, double lo, double hi) {
    constexpr int kScan = 301;
    int best_i = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kScan; i++) {
        double v = sse_at(lo + (hi - lo) * i / (kScan - 1));
        if (v < best) {
            best = v;
            best_i = i;
        }
    }
    double step = (hi - lo) / (kScan - 1);
    double a0 = std::max(lo, lo + (best_i - 1) * step);
    double b0 = std::min(hi, lo + (best_i + 1) * step);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = b0 - g * (b0 - a0), b = a0 + g * (b0 - a0);
    double fa = sse_at(a), fb = sse_at(b);
    while (b0 - a0 > 1e-8) {
        if (fa < fb) {
            b0 = b;
            b = a;
            fb = fa;
            a = b0 - g * (b0 - a0);
            fa = sse_at(a);
        } else {
            a0 = a;
            a = b;
            fa = fb;
            b = a0 + g * (b0 - a0);
            fb = sse_at(b);
        }
    }
    double s_best = lo + best_i * step;
    double mid = 0.5 * (a0 + b0);
    return sse_at(mid) <= best ? mid : s_best;
}

/// Damped Gauss-Newton on (k1, k2, t); only steps that lower the SSE are taken.
void polish(ModelKind kind, std::span<const FitPoint> pts, std::vector<double> &coef, double t_lo, double t_hi) {
    double lambda = 1e-6;
    double sse = model_sse(kind, coef, pts);
    for (int iter = 0; iter < 100; iter++) {
        Eigen::MatrixXd jac(pts.size(), 3);
        Eigen::VectorXd res(pts.size());
        for (std::size_t i = 0; i < pts.size(); i++) {
            double q = pts[i].capacity, t = coef[2];
            double f = basis(kind, q, t);
            double df = kind == ModelKind::Power ? (q == 0.0 ? 0.0 : f * std::log(q)) : 1.0 / ((q + t) * std::log(2.0));
            jac(i, 0) = f;
            jac(i, 1) = 1.0;
            jac(i, 2) = coef[0] * df;
            res(i) = coef[0] * f + coef[1] - pts[i].y;
        }
        Eigen::Matrix3d jtj = jac.transpose() * jac;
        Eigen::Vector3d jtr = jac.transpose() * res;
        bool improved = false;
        for (int tries = 0; tries < 20 && !improved; tries++) {
            Eigen::Matrix3d a = jtj;
            a.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-300);
            Eigen::Vector3d step = a.ldlt().solve(-jtr);
            std::vector<double> trial{coef[0] + step(0), coef[1] + step(1), std::clamp(coef[2] + step(2), t_lo, t_hi)};
            double s = model_sse(kind, trial, pts);
            if (std::isfinite(s) && s < sse) {
                double gain = sse - s;
                coef = trial;
                sse = s;
                lambda = std::max(lambda * 0.1, 1e-12);
                improved = true;
                if (gain <= 1e-30 + 1e-15 * sse) {
                    return;
                }
            } else {
                lambda *= 10;
            }
        }
        if (!improved) {
            return;
        }
    }
}

}  // namespace

std::string_view model_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::Linear:
            return "i";
        case ModelKind::Power:
            return "ii";
        case ModelKind::Log:
            return "iii";
    }
    return "?";
}

ModelKind parse_model(std::string_view name) {
    if (name == "i") return ModelKind::Linear;
    if (name == "ii") return ModelKind::Power;
    if (name == "iii") return ModelKind::Log;
    throw DomainError("unknown model '" + std::string(name) + "' (expected i, ii or iii)");
}

std::size_t model_arity(ModelKind kind) { return kind == ModelKind::Linear ? 2 : 3; }

double model_value(ModelKind kind, std::span<const double> c, double capacity) {
    double t = kind == ModelKind::Linear ? 0.0 : c[2];
    return c[0] * basis(kind, capacity, t) + c[1];
}

double model_sse(ModelKind kind, std::span<const double> coefficients, std::span<const FitPoint> points) {
    double s = 0;
    for (const auto &p : points) {
        double e = model_value(kind, coefficients, p.capacity) - p.y;
        s += e * e;
    }
    return s;
}

double FitResult::evaluate(double capacity) const { return model_value(kind, coefficients, capacity); }

FitResult fit_points(ModelKind kind, std::span<const FitPoint> points, std::optional<Window> window) {
    std::size_t need = kind == ModelKind::Linear ? 3 : 4;
    if (points.size() < need) {
        throw InsufficientData("model " + std::string(model_name(kind)) + " needs at least " + std::to_string(need) +
                               " points, got " + std::to_string(points.size()));
    }
    for (const auto &p : points) {
        if (!std::isfinite(p.capacity) || !std::isfinite(p.y)) {
            throw DomainError("fit points must be finite");
        }
    }
    auto [mn, mx] = std::minmax_element(points.begin(), points.end(),
                                        [](const FitPoint &a, const FitPoint &b) { return a.capacity < b.capacity; });
    if (mn->capacity == mx->capacity) {
        throw SingularDesign("all capacities are equal; slope is undetermined");
    }

    FitResult fit;
    fit.kind = kind;
    fit.window = window;
    fit.n_points_used = points.size();
    switch (kind) {
        case ModelKind::Linear: {
            Profiled p = profile(kind, points, 0);
            fit.coefficients = {p.slope, p.intercept};
            break;
        }
        case ModelKind::Power: {
            auto sse = [&](double t) { return profile(kind, points, t).sse; };
            double t = outer_search(sse, kPowerExponentMin, kPowerExponentMax);
            Profiled p = profile(kind, points, t);
            fit.coefficients = {p.slope, p.intercept, t};
            polish(kind, points, fit.coefficients, kPowerExponentMin, kPowerExponentMax);
            break;
        }
        case ModelKind::Log: {
            // Searched on log10(c3) so that small shifts are resolved.
            auto sse = [&](double s) { return profile(kind, points, std::pow(10.0, s)).sse; };
            double s = outer_search(sse, std::log10(kLogShiftMin), std::log10(kLogShiftMax));
            double t = std::pow(10.0, s);
            Profiled p = profile(kind, points, t);
            fit.coefficients = {p.slope, p.intercept, t};
            polish(kind, points, fit.coefficients, kLogShiftMin, kLogShiftMax);
            break;
        }
    }
    fit.sse = model_sse(kind, fit.coefficients, points);
    fit.zeta = fitting_error_zeta(fit, points, window);
    return fit;
}

double fitting_error_zeta(const FitResult &fit, std::span<const FitPoint> points, std::optional<Window> window) {
    double num = 0, den = 0;
    std::size_t used = 0;
    for (const auto &p : points) {
        if (window && !window->contains(p.y)) {
            continue;
        }
        double r = fit.evaluate(p.capacity) - p.y;
        num += r * r;
        den += p.y * p.y;
        used++;
    }
    if (used == 0) {
        throw EmptyWindow("no points inside the zeta window");
    }
    if (den == 0) {
        return num == 0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return std::sqrt(num / den);
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) {
            j++;
        }
        double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; k++) {
            ranks[idx[k]] = r;
        }
        i = j + 1;
    }
    return ranks;
}

}  // namespace

double spearman_rank_correlation(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.size() < 2) {
        throw InsufficientData("spearman correlation needs two equally sized samples of length >= 2");
    }
    auto ra = average_ranks(a);
    auto rb = average_ranks(b);
    double n = static_cast<double>(a.size());
    double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
    double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < ra.size(); i++) {
        sab += (ra[i] - ma) * (rb[i] - mb);
        saa += (ra[i] - ma) * (ra[i] - ma);
        sbb += (rb[i] - mb) * (rb[i] - mb);
    }
    if (saa == 0 || sbb == 0) {
        return 0.0;
    }
    return sab / std::sqrt(saa * sbb);
}

double information_content(const BoundParams &bp, double capacity) {
    return bp.n * capacity * std::log2(1.0 + bp.ratio);
}

double eps_ball_information(int dimension, double eps) { return -dimension * std::log2(eps); }

double shannon_hartley_bound(const BoundParams &bp, double capacity) {
    if (bp.n < 1 || bp.dimension < 1 || !(bp.ratio >= 0)) {
        throw DomainError("bound parameters require n >= 1, D >= 1, ratio >= 0");
    }
    if (!(capacity >= 0) || !std::isfinite(capacity)) {
        throw DomainError("capacity must be finite and non-negative");
    }
    return -information_content(bp, capacity) / bp.dimension;
}

}  // namespace fqc
