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

#include "fqc/qubit_control.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "fqc/errors.h"
#include "fqc/simplex.h"

namespace fqc {

namespace {

constexpr double kAngleSlack = 1e-12;
constexpr double kBallRadius = 1.0 - 1e-12;
constexpr double kStallTolerance = 1e-6;

std::array<double, 3> project_to_ball(std::array<double, 3> b, double radius = kBallRadius) {
    double n = std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
    if (n > radius) {
        for (auto &v : b) {
            v *= radius / n;
        }
    }
    return b;
}

double norm3(const std::array<double, 3> &b) { return std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]); }

/// Orthonormal pair spanning the plane orthogonal to p (p != 0).
std::pair<std::array<double, 3>, std::array<double, 3>> tangent_basis(const std::array<double, 3> &p) {
    double n = norm3(p);
    std::array<double, 3> u{p[0] / n, p[1] / n, p[2] / n};
    std::array<double, 3> helper = std::abs(u[0]) < 0.9 ? std::array<double, 3>{1, 0, 0} : std::array<double, 3>{0, 1, 0};
    double d = helper[0] * u[0] + helper[1] * u[1] + helper[2] * u[2];
    std::array<double, 3> e1{helper[0] - d * u[0], helper[1] - d * u[1], helper[2] - d * u[2]};
    double n1 = norm3(e1);
    for (auto &v : e1) {
        v /= n1;
    }
    std::array<double, 3> e2{u[1] * e1[2] - u[2] * e1[1], u[2] * e1[0] - u[0] * e1[2], u[0] * e1[1] - u[1] * e1[0]};
    return {e1, e2};
}

double family_objective(double p, double c2t, double s2t, double s2p) {
    double c1 = p * c2t + (1.0 - p) * s2p;
    double c2 = p * s2t + (1.0 - p) * s2p;
    return binary_entropy(std::clamp(c1, 0.0, 1.0)) - binary_entropy(std::clamp(c2, 0.0, 1.0));
}

}  // namespace

QubitChannelParams QubitChannelParams::checked(double theta, double phi) {
    auto ok = [](double a) { return std::isfinite(a) && a >= -kAngleSlack && a <= M_PI / 4 + kAngleSlack; };
    if (!ok(theta) || !ok(phi)) {
        throw DomainError("channel angles must lie in [0, pi/4]: theta=" + std::to_string(theta) +
                          " phi=" + std::to_string(phi));
    }
    return {std::clamp(theta, 0.0, M_PI / 4), std::clamp(phi, 0.0, M_PI / 4)};
}

KrausPair control_kraus(const QubitChannelParams &params) {
    KrausPair k;
    k.a1 = ComplexMat2::diag(std::cos(params.theta), -std::cos(params.phi));
    k.a2(0, 1) = std::sin(params.phi);
    k.a2(1, 0) = -std::sin(params.theta);
    return k;
}

double capacity_qubit_family(double theta, double phi) {
    if (std::cos(2 * theta) * std::cos(2 * phi) < 0) {
        return 0.0;
    }
    double c2t = std::cos(theta) * std::cos(theta);
    double s2t = std::sin(theta) * std::sin(theta);
    double s2p = std::sin(phi) * std::sin(phi);
    auto f = [&](double p) { return family_objective(p, c2t, s2t, s2p); };

    constexpr int kScan = 1001;
    int best_i = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < kScan; i++) {
        double v = f(static_cast<double>(i) / (kScan - 1));
        if (v > best) {
            best = v;
            best_i = i;
        }
    }

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = std::max(0, best_i - 1) / double(kScan - 1);
    double hi = std::min(kScan - 1, best_i + 1) / double(kScan - 1);
    double a = hi - inv_phi * (hi - lo);
    double b = lo + inv_phi * (hi - lo);
    double fa = f(a), fb = f(b);
    while (hi - lo > 1e-9) {
        if (fa < fb) {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = f(a);
        }
    }
    best = std::max({best, fa, fb, f(0.5 * (lo + hi))});
    return std::max(0.0, best);
}

double capacity_control_channel(const QubitChannelParams &params) {
    return capacity_qubit_family(params.theta, params.phi);
}

BallGridResult ball_grid_maximize(const std::function<double(const std::array<double, 3> &)> &f, int n_grid) {
    BallGridResult res;
    res.value = -std::numeric_limits<double>::infinity();
    auto consider = [&](std::array<double, 3> p) {
        p = project_to_ball(p, 1.0);
        double v = f(p);
        res.evaluations++;
        if (v > res.value) {
            res.value = v;
            res.point = p;
        }
    };

    // Cube side m gives about (pi/6) m^3 points inside the ball.
    int coarse_budget = std::max(1, n_grid / 2);
    int m = std::max(3, static_cast<int>(std::cbrt(coarse_budget * 6.0 / M_PI)));
    double h = 2.0 / (m - 1);
    for (int i = 0; i < m; i++) {
        for (int j = 0; j < m; j++) {
            for (int k = 0; k < m; k++) {
                std::array<double, 3> p{-1 + i * h, -1 + j * h, -1 + k * h};
                if (p[0] * p[0] + p[1] * p[1] + p[2] * p[2] <= 1.0 + 1e-15) {
                    consider(p);
                }
            }
        }
    }

    // Pattern search on local 5x5x5 blocks, alternating spherical coordinates (the boundary r = 1
    // is a coordinate plane) with Cartesian ones (no singularity at the poles). Each block
    // re-centres at the same spacing while the incumbent sits on its edge, else halves it.
    auto to_spherical = [](const std::array<double, 3> &p) {
        double r = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
        double pol = r > 0 ? std::acos(std::clamp(p[2] / r, -1.0, 1.0)) : 0.0;
        return std::array<double, 3>{r, pol, std::atan2(p[1], p[0])};
    };
    auto to_cartesian = [](double r, double pol, double az) {
        r = std::clamp(r, 0.0, 1.0);
        return std::array<double, 3>{r * std::sin(pol) * std::cos(az), r * std::sin(pol) * std::sin(az),
                                     r * std::cos(pol)};
    };
    constexpr int kSide = 5;
    auto edge = [](double moved, double step) { return std::abs(std::abs(moved) - 2 * step) < 1e-3 * step; };
    double hr = h, ha = h, hc = h;
    while (res.evaluations + 2 * kSide * kSide * kSide <= n_grid && std::max({hr, ha, hc}) > 1e-13) {
        if (std::max(hr, ha) > 1e-13) {
            auto c = to_spherical(res.point);
            auto before = res.point;
            double sr = hr / 2, sa = ha / 2;
            for (int i = 0; i < kSide; i++) {
                for (int j = 0; j < kSide; j++) {
                    for (int k = 0; k < kSide; k++) {
                        consider(to_cartesian(c[0] + (i - 2) * sr, c[1] + (j - 2) * sa, c[2] + (k - 2) * sa));
                    }
                }
            }
            auto n = to_spherical(res.point);
            bool r_edge = edge(n[0] - c[0], sr) && n[0] < 1.0 - 1e-12;
            bool on_edge = res.point != before && (r_edge || edge(n[1] - c[1], sa) || edge(n[2] - c[2], sa));
            if (!on_edge) {
                hr = sr;
                ha = sa;
            }
        }
        if (hc > 1e-13) {
            auto c = res.point;
            double sc = hc / 2;
            for (int i = 0; i < kSide; i++) {
                for (int j = 0; j < kSide; j++) {
                    for (int k = 0; k < kSide; k++) {
                        consider({c[0] + (i - 2) * sc, c[1] + (j - 2) * sc, c[2] + (k - 2) * sc});
                    }
                }
            }
            auto n = res.point;
            if (!(n != c && (edge(n[0] - c[0], sc) || edge(n[1] - c[1], sc) || edge(n[2] - c[2], sc)))) {
                hc = sc;
            }
        }
    }
    return res;
}

double coherent_information_oracle(const KrausPair &k, int n_grid) {
    auto coherent_info = [&](const std::array<double, 3> &b) {
        DensityMatrix rho = DensityMatrix::from_bloch(project_to_ball(b, 1.0));
        ComplexMat2 r = rho.matrix();
        ComplexMat2 out = apply_kraus_raw(k, r);
        const ComplexMat2 *ops[2] = {&k.a1, &k.a2};
        ComplexMat2 env;
        for (int i = 0; i < 2; i++) {
            for (int j = 0; j < 2; j++) {
                env(i, j) = (*ops[i] * r * ops[j]->adjoint()).trace();
            }
        }
        return von_neumann_entropy(out) - von_neumann_entropy(env);
    };
    return ball_grid_maximize(coherent_info, n_grid).value;
}

ComplexMat2 AnalyticControl::matrix() const {
    ComplexMat2 r;
    r(0, 0) = y;
    r(0, 1) = z;
    r(1, 0) = std::conj(z);
    r(1, 1) = 1.0 - y;
    return r;
}

AnalyticControl analytic_control_state(const QubitChannelParams &params, const DensityMatrix &target) {
    double ct = std::cos(params.theta), sp = std::sin(params.phi);
    // cos^2 t - sin^2 p = cos(p - t) cos(p + t), so this also guards the coherence denominators.
    double den = ct * ct - sp * sp;
    if (std::abs(den) < 1e-12) {
        throw DegenerateChannel("cos^2(theta) = sin^2(phi): analytic controller undefined");
    }
    AnalyticControl a;
    a.y = (target.y() - sp * sp) / den;
    a.z = cplx(-target.z().real() / std::cos(params.phi - params.theta),
               -target.z().imag() / std::cos(params.phi + params.theta));
    return a;
}

ControlSolution solve_qubit_control(const QubitChannelParams &params, const DensityMatrix &target) {
    KrausPair kraus = control_kraus(params);
    std::optional<AnalyticControl> analytic;
    try {
        analytic = analytic_control_state(params, target);
    } catch (const DegenerateChannel &) {
    }

    ControlSolution sol;
    if (analytic && analytic->physical()) {
        sol.controller = DensityMatrix::from_parts(analytic->y, analytic->z);
        sol.reachable = true;
        sol.error = std::max(0.0, 1.0 - uhlmann_fidelity(target, apply_kraus(kraus, sol.controller)));
        return sol;
    }

    double best_err = std::numeric_limits<double>::infinity();
    std::array<double, 3> best_point{};
    auto objective = [&](const std::array<double, 3> &b) {
        auto p = project_to_ball(b);
        // Outside the ball the projected objective is flat along rays, which lets the
        // simplex collapse; a quadratic exterior penalty keeps the same constrained minimum.
        double excess = std::max(0.0, std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]) - kBallRadius);
        ComplexMat2 out = apply_kraus_raw(kraus, DensityMatrix::from_bloch(p).matrix());
        DensityMatrix rho_out = DensityMatrix::from_parts(std::clamp(out(0, 0).real(), 0.0, 1.0), out(0, 1));
        double err = 1.0 - uhlmann_fidelity(target, rho_out);
        if (err < best_err) {
            best_err = err;
            best_point = p;
        }
        return err + excess * excess;
    };

    std::array<double, 3> third = target.bloch();
    if (analytic) {
        // Analytic solution (Bloch vector of the raw matrix) pulled radially into the ball.
        third = project_to_ball({2.0 * analytic->z.real(), -2.0 * analytic->z.imag(), 2.0 * analytic->y - 1.0});
    }
    const std::array<std::array<double, 3>, 3> starts{{{0, 0, 0}, {0, 0, kBallRadius}, third}};

    // Interior phase: simplex on the Bloch vector. An unreachable target has its optimum on
    // the sphere (the fidelity is concave in the controller and its unconstrained maximum lies
    // outside the ball), so each start finishes with a surface phase on a tangent-plane chart
    // around the interior result, where the objective is smooth.
    constexpr int kMaxIterations = 2000;
    constexpr int kInteriorIterations = 500;
    SimplexOptions opt;
    opt.max_iterations = kInteriorIterations;
    opt.f_tolerance = 1e-12;
    opt.initial_step = 0.25;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto &s : starts) {
        auto r = simplex_minimize<3>(objective, s, opt);
        int iterations = r.iterations;
        double f = r.f;
        std::vector<double> trace = std::move(r.trace);
        auto p = project_to_ball(r.x);
        if (norm3(p) < 1e-6) {
            p = {0, 0, 1};
        }
        double n = norm3(p);
        for (auto &v : p) {
            v *= kBallRadius / n;
        }
        auto [e1, e2] = tangent_basis(p);
        auto on_sphere = [&](const std::array<double, 2> &uv) {
            std::array<double, 3> b{p[0] + uv[0] * e1[0] + uv[1] * e2[0], p[1] + uv[0] * e1[1] + uv[1] * e2[1],
                                    p[2] + uv[0] * e1[2] + uv[1] * e2[2]};
            double nb = norm3(b);
            for (auto &v : b) {
                v *= kBallRadius / nb;
            }
            return objective(b);
        };
        SimplexOptions surface = opt;
        surface.initial_step = 0.1;
        surface.max_iterations = kMaxIterations - iterations;
        auto s2 = simplex_minimize<2>(on_sphere, {0.0, 0.0}, surface);
        iterations += s2.iterations;
        for (double v : s2.trace) {
            trace.push_back(trace.empty() ? v : std::min(v, trace.back()));
        }
        f = std::min(f, s2.f);
        sol.iterations += iterations;
        lo = std::min(lo, f);
        hi = std::max(hi, f);
        if (f <= lo) {
            sol.trace = std::move(trace);
        }
    }
    sol.starts_agreement = hi - lo;
    if (sol.starts_agreement > kStallTolerance) {
        throw OptimizerStalled("qubit fallback restarts disagree by " + std::to_string(sol.starts_agreement));
    }
    sol.reachable = false;
    sol.error = std::clamp(best_err, 0.0, 1.0);
    sol.controller = DensityMatrix::from_bloch(best_point);
    return sol;
}

}  // namespace fqc
