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

#include "fqc/gaussian.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "fqc/errors.h"
#include "fqc/simplex.h"

namespace fqc {

namespace {

constexpr double kPhysTolerance = 1e-12;
constexpr double kStallTolerance = 1e-6;

struct UVPhi {
    double u = 0;
    double v = 0;
    double angle = 0;
};

/// Inverse of cov_from_uvphi for positive definite input. With `project`, v is clamped at 0,
/// which moves an unphysical matrix to the pure state with the same eigenvectors and ratio.
UVPhi to_uvphi(const CovarianceMatrix &g, bool project) {
    double mean = 0.5 * g.trace();
    double radius = std::hypot(0.5 * (g.g1 - g.g3), g.g2);
    double hi = mean + radius;
    double lo = mean - radius;
    if (!(hi > 0)) {
        return {};
    }
    lo = std::max(lo, hi * 1e-8);
    UVPhi r;
    r.angle = 0.5 * std::atan2(2 * g.g2, g.g1 - g.g3);
    r.u = std::clamp(0.5 * std::log(hi / lo), -10.0, 10.0);
    r.v = 0.5 * std::log(hi * lo);
    if (project) {
        r.v = std::max(0.0, r.v);
    }
    return r;
}

}  // namespace

bool is_physical_cov(const CovarianceMatrix &gamma) {
    if (!std::isfinite(gamma.g1) || !std::isfinite(gamma.g2) || !std::isfinite(gamma.g3)) {
        return false;
    }
    return gamma.g1 > 0 && gamma.g3 > 0 && gamma.det() >= 1.0 - kPhysTolerance;
}

double symplectic_min_eigenvalue(const CovarianceMatrix &gamma) {
    ComplexMat2 h;
    h(0, 0) = gamma.g1;
    h(0, 1) = cplx(gamma.g2, 1.0);
    h(1, 0) = cplx(gamma.g2, -1.0);
    h(1, 1) = gamma.g3;
    return hermitian_eigenvalues(h)[0];
}

GaussianChannelParam GaussianChannelParam::checked(double q) {
    if (!std::isfinite(q) || q < 0) {
        throw DomainError("channel parameter q must be finite and >= 0, got " + std::to_string(q));
    }
    return {q};
}

CovarianceMatrix channel_apply(const GaussianChannelParam &param, const CovarianceMatrix &gamma) {
    double noise = std::abs(param.q - 1.0);
    return {param.q * gamma.g1 + noise, param.q * gamma.g2, param.q * gamma.g3 + noise};
}

double capacity_gaussian(const GaussianChannelParam &param) {
    double q = param.q;
    if (!(q >= 0)) {
        throw DomainError("channel parameter q must be >= 0");
    }
    if (q <= 0.5) {
        return 0.0;
    }
    if (std::abs(q - 1.0) <= 1e-9) {
        return std::numeric_limits<double>::infinity();
    }
    return std::max(0.0, std::log2(q / std::abs(q - 1.0)));
}

CovarianceMatrix analytic_control_cov(const GaussianChannelParam &param, const CovarianceMatrix &target) {
    if (param.q < 1e-12) {
        throw DegenerateChannel("q = " + std::to_string(param.q) + " has no inverse");
    }
    double noise = std::abs(param.q - 1.0);
    return {(target.g1 - noise) / param.q, target.g2 / param.q, (target.g3 - noise) / param.q};
}

double gaussian_fidelity(const CovarianceMatrix &a, const CovarianceMatrix &b) {
    if (!is_physical_cov(a) || !is_physical_cov(b)) {
        throw NonPhysicalInput("gaussian_fidelity requires physical covariance matrices");
    }
    double big = (a + b).det();
    double small = std::max(0.0, a.det() - 1.0) * std::max(0.0, b.det() - 1.0);
    // sqrt(D + d) - sqrt(d) rewritten as D / (sqrt(D + d) + sqrt(d)) to avoid cancellation.
    double f2 = 2.0 * (std::sqrt(big + small) + std::sqrt(small)) / big;
    return std::clamp(std::sqrt(f2), 0.0, 1.0);
}

double matrix_uhlmann(const CovarianceMatrix &a, const CovarianceMatrix &b) {
    auto positive = [](const CovarianceMatrix &g) {
        return std::isfinite(g.g1) && std::isfinite(g.g2) && std::isfinite(g.g3) && g.g1 > 0 && g.det() > 0;
    };
    if (!positive(a) || !positive(b)) {
        throw NonPositiveInput("matrix_uhlmann requires positive definite matrices");
    }
    double s = std::sqrt(a.det());
    double t = std::sqrt(a.trace() + 2 * s);
    CovarianceMatrix root{(a.g1 + s) / t, a.g2 / t, (a.g3 + s) / t};
    // root * b * root, symmetric.
    double m11 = root.g1 * b.g1 + root.g2 * b.g2;
    double m12 = root.g1 * b.g2 + root.g2 * b.g3;
    double m21 = root.g2 * b.g1 + root.g3 * b.g2;
    double m22 = root.g2 * b.g2 + root.g3 * b.g3;
    CovarianceMatrix inner{m11 * root.g1 + m12 * root.g2, m11 * root.g2 + m12 * root.g3,
                           m21 * root.g2 + m22 * root.g3};
    double det = std::max(0.0, inner.det());
    return std::sqrt(std::max(0.0, inner.trace() + 2 * std::sqrt(det)));
}

std::string_view cost_kind_name(CostKind kind) {
    return kind == CostKind::GaussianFidelity ? "gaussian-fidelity" : "matrix-uhlmann";
}

CostKind parse_cost_kind(std::string_view name) {
    if (name == "gaussian" || name == "gaussian-fidelity") {
        return CostKind::GaussianFidelity;
    }
    if (name == "matrix-uhlmann") {
        return CostKind::MatrixUhlmann;
    }
    throw DomainError("unknown cost kind '" + std::string(name) + "'");
}

double control_error(CostKind kind, const CovarianceMatrix &target, const CovarianceMatrix &output) {
    double f = kind == CostKind::GaussianFidelity ? gaussian_fidelity(target, output) : matrix_uhlmann(target, output);
    return std::max(0.0, 1.0 - f);
}

CovarianceMatrix cov_from_uvphi(double u, double v, double angle) {
    // cosh/sinh form: exact identity at u = v = 0 for every angle.
    double scale = std::exp(v), ch = std::cosh(u), sh = std::sinh(u);
    double c2 = std::cos(2 * angle), s2 = std::sin(2 * angle);
    return {scale * (ch + sh * c2), scale * sh * s2, scale * (ch - sh * c2)};
}

CovarianceMatrix squeezed_thermal(double nbar, double r, double angle) {
    return cov_from_uvphi(2 * r, 0, angle) * (2 * nbar + 1);
}

GaussianControlSolution solve_gaussian_control(const GaussianChannelParam &param, const CovarianceMatrix &target,
                                               CostKind cost_kind) {
    if (!is_physical_cov(target)) {
        throw NonPhysicalInput("target covariance matrix is not physical");
    }
    CovarianceMatrix inverse = analytic_control_cov(param, target);

    GaussianControlSolution sol;
    sol.cost_kind = cost_kind;
    if (is_physical_cov(inverse)) {
        sol.controller_cov = inverse;
        sol.reachable = true;
        sol.error = control_error(cost_kind, target, channel_apply(param, inverse));
        return sol;
    }

    double best_err = std::numeric_limits<double>::infinity();
    CovarianceMatrix best_cov = CovarianceMatrix::identity();
    auto objective = [&](const std::array<double, 3> &x) {
        CovarianceMatrix c = cov_from_uvphi(x[0], std::abs(x[1]), x[2]);
        double err = control_error(cost_kind, target, channel_apply(param, c));
        if (err < best_err) {
            best_err = err;
            best_cov = c;
        }
        return err;
    };

    UVPhi from_inverse = to_uvphi(inverse, true);
    UVPhi from_target = to_uvphi(target, true);
    const std::array<std::array<double, 3>, 3> starts{{{0, 0, 0},
                                                       {from_inverse.u, from_inverse.v, from_inverse.angle},
                                                       {from_target.u, from_target.v, from_target.angle}}};
    SimplexOptions opt;
    opt.max_iterations = 3000;
    opt.f_tolerance = 1e-12;
    opt.initial_step = 0.25;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto &s : starts) {
        auto r = simplex_minimize<3>(objective, s, opt);
        sol.iterations += r.iterations;
        lo = std::min(lo, r.f);
        hi = std::max(hi, r.f);
        if (r.f <= lo) {
            sol.trace = std::move(r.trace);
        }
    }
    sol.starts_agreement = hi - lo;
    if (sol.starts_agreement > kStallTolerance) {
        throw OptimizerStalled("gaussian fallback restarts disagree by " + std::to_string(sol.starts_agreement));
    }
    sol.reachable = false;
    sol.error = std::max(0.0, best_err);
    sol.controller_cov = best_cov;
    return sol;
}

CovarianceMatrix sample_gaussian_target(RngStream &rng, double r_max, double nbar_max) {
    double angle = rng.uniform(0, M_PI);
    double r = rng.uniform(0, r_max);
    double nbar = rng.uniform(0, nbar_max);
    return squeezed_thermal(nbar, r, angle);
}

}  // namespace fqc
