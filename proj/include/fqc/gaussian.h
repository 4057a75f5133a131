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

#ifndef FQC_GAUSSIAN_H
#define FQC_GAUSSIAN_H

#include <array>
#include <string_view>
#include <vector>

#include "fqc/qstate.h"

namespace fqc {

/// Symmetric 2x2 covariance matrix [[g1, g2], [g2, g3]] of a one-mode Gaussian state,
/// in units where the vacuum is the identity.
struct CovarianceMatrix {
    double g1 = 1;
    double g2 = 0;
    double g3 = 1;

    static CovarianceMatrix identity() { return {1, 0, 1}; }
    static CovarianceMatrix scalar(double s) { return {s, 0, s}; }

    double det() const { return g1 * g3 - g2 * g2; }
    double trace() const { return g1 + g3; }
    CovarianceMatrix operator+(const CovarianceMatrix &o) const { return {g1 + o.g1, g2 + o.g2, g3 + o.g3}; }
    CovarianceMatrix operator*(double s) const { return {g1 * s, g2 * s, g3 * s}; }
    bool operator==(const CovarianceMatrix &) const = default;
};

/// Uncertainty relation gamma + i sigma >= 0, checked as g1 > 0, g3 > 0, det >= 1 - 1e-12.
bool is_physical_cov(const CovarianceMatrix &gamma);

/// Smallest eigenvalue of the Hermitian matrix gamma + i sigma, sigma = [[0, 1], [-1, 0]].
double symplectic_min_eigenvalue(const CovarianceMatrix &gamma);

/// Attenuation (q < 1) or amplification (q > 1) parameter of the canonical channel.
struct GaussianChannelParam {
    double q = 1;

    /// Throws DomainError unless q is finite and non-negative.
    static GaussianChannelParam checked(double q);
    bool operator==(const GaussianChannelParam &) const = default;
};

/// gamma -> X^T gamma X + Y with X = sqrt(q) 1 and Y = |q - 1| 1. Accepts unphysical input.
CovarianceMatrix channel_apply(const GaussianChannelParam &param, const CovarianceMatrix &gamma);

/// Capacity of the control channel in bits: 0 for q <= 1/2, +infinity within 1e-9 of q = 1,
/// otherwise log2(q / |q - 1|).
double capacity_gaussian(const GaussianChannelParam &param);

/// Raw inverse of channel_apply, possibly unphysical. Throws DegenerateChannel if q < 1e-12.
CovarianceMatrix analytic_control_cov(const GaussianChannelParam &param, const CovarianceMatrix &target);

/// Fidelity (root form) between zero-mean one-mode Gaussian states,
/// F = sqrt(2 / (sqrt(D + d) - sqrt(d))), D = det(a + b), d = (det a - 1)(det b - 1).
/// Throws NonPhysicalInput.
double gaussian_fidelity(const CovarianceMatrix &a, const CovarianceMatrix &b);

/// Tr sqrt(sqrt(a) b sqrt(a)) taken literally on the covariance matrices; not bounded by 1.
/// Throws NonPositiveInput unless both are positive definite.
double matrix_uhlmann(const CovarianceMatrix &a, const CovarianceMatrix &b);

enum class CostKind { GaussianFidelity, MatrixUhlmann };

std::string_view cost_kind_name(CostKind kind);
/// Accepts "gaussian", "gaussian-fidelity" or "matrix-uhlmann"; throws DomainError otherwise.
CostKind parse_cost_kind(std::string_view name);

/// Control error for the chosen cost, clamped at zero.
double control_error(CostKind kind, const CovarianceMatrix &target, const CovarianceMatrix &output);

/// R(angle) diag(e^{v+u}, e^{v-u}) R(angle)^T; physical whenever v >= 0.
CovarianceMatrix cov_from_uvphi(double u, double v, double angle);

/// Squeezed thermal covariance (2 nbar + 1) R(angle) diag(e^{2r}, e^{-2r}) R(angle)^T.
CovarianceMatrix squeezed_thermal(double nbar, double r, double angle);

struct GaussianControlSolution {
    CovarianceMatrix controller_cov;
    bool reachable = false;
    double error = 0;
    CostKind cost_kind = CostKind::GaussianFidelity;
    int iterations = 0;
    double starts_agreement = 0;
    std::vector<double> trace;
};

/// Optimal controller covariance. Takes the analytic inverse when it is physical, otherwise
/// minimizes the cost over (u, v, angle) with v >= 0 by reflection, from three starts
/// (vacuum, projected inverse, target). Throws OptimizerStalled on a restart gap > 1e-6.
GaussianControlSolution solve_gaussian_control(const GaussianChannelParam &param, const CovarianceMatrix &target,
                                               CostKind cost_kind = CostKind::GaussianFidelity);

/// Random target: angle ~ U[0, pi), r ~ U[0, r_max], nbar ~ U[0, nbar_max], drawn in that order.
CovarianceMatrix sample_gaussian_target(RngStream &rng, double r_max, double nbar_max);

}  // namespace fqc

#endif
