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

#ifndef FQC_QUBIT_CONTROL_H
#define FQC_QUBIT_CONTROL_H

#include <array>
#include <functional>
#include <vector>

#include "fqc/qstate.h"

namespace fqc {

/// Angles (theta_bar, phi_bar) of the control channel, both in [0, pi/4].
struct QubitChannelParams {
    double theta = 0;
    double phi = 0;

    /// Throws DomainError outside [0, pi/4]^2 (1e-12 slack for grid round-off).
    static QubitChannelParams checked(double theta, double phi);
    bool operator==(const QubitChannelParams &) const = default;
};

/// Kraus pair of the control channel:
/// A1 = diag(cos t, -cos p), A2 = [[0, sin p], [-sin t, 0]].
KrausPair control_kraus(const QubitChannelParams &params);

/// Quantum capacity of the two-Kraus family A1 = diag(cos t, cos p), A2 = [[0, sin p], [sin t, 0]].
///
/// Zero on the anti-degradable branch cos(2t) cos(2p) < 0; otherwise the single-letter
/// maximum over diagonal inputs diag(p, 1-p), located by a 1001-point scan followed by
/// golden-section refinement to 1e-9 in p.
double capacity_qubit_family(double theta, double phi);

/// Capacity of the control channel. Left-multiplying its Kraus pair by sigma_z, an output
/// unitary, yields the family above at the same angles, so the two capacities coincide.
double capacity_control_channel(const QubitChannelParams &params);

struct BallGridResult {
    double value = 0;
    std::array<double, 3> point{};
    int evaluations = 0;
};

/// Deterministic multi-resolution grid maximization over the closed unit ball.
///
/// Half of the budget goes to a uniform Cartesian grid clipped to the ball; the rest is
/// spent on 5x5x5 grids of halving spacing centred on the incumbent. Points falling
/// outside the ball are radially projected onto its surface.
BallGridResult ball_grid_maximize(const std::function<double(const std::array<double, 3> &)> &f, int n_grid);

/// Maximum coherent information S(output) - S(environment) over a Bloch-ball grid, where
/// the environment state is the Gram matrix G_ij = Tr(A_i rho A_j^dag).
/// Equals the quantum capacity for degradable channels.
double coherent_information_oracle(const KrausPair &k, int n_grid);

/// Raw algebraic solution of control_kraus(params)(rho) = target; may be unphysical.
struct AnalyticControl {
    double y = 0;
    cplx z = 0;

    bool physical() const { return is_physical_dm(y, z); }
    ComplexMat2 matrix() const;
};

/// Throws DegenerateChannel when |cos^2 t - sin^2 p| < 1e-12.
AnalyticControl analytic_control_state(const QubitChannelParams &params, const DensityMatrix &target);

struct ControlSolution {
    DensityMatrix controller = DensityMatrix::maximally_mixed();
    bool reachable = false;
    /// 1 - F(target, output).
    double error = 0;
    int iterations = 0;
    /// Largest pairwise error gap between optimizer restarts; 0 on the analytic branch.
    double starts_agreement = 0;
    /// Best error after each iteration of the winning restart.
    std::vector<double> trace;
};

/// Optimal controller for `target`.
///
/// Uses the analytic inverse when it is a state. Otherwise (or when the inverse is
/// degenerate) maximizes the fidelity over the Bloch ball with three simplex restarts
/// and throws OptimizerStalled if they disagree by more than 1e-6.
ControlSolution solve_qubit_control(const QubitChannelParams &params, const DensityMatrix &target);

}  // namespace fqc

#endif
