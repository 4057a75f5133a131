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

#ifndef FQC_TESTS_ORACLES_H
#define FQC_TESTS_ORACLES_H

// Reference computations used only by the tests. None of them call the solver paths
// they are compared against.

#include <array>
#include <functional>

#include "fqc/gaussian.h"
#include "fqc/qstate.h"

namespace fqc::oracle {

/// Squeezed thermal state parameters; covariance (2 nbar + 1) R(angle) diag(e^{2r}, e^{-2r}) R(angle)^T.
struct SqueezedThermal {
    double nbar = 0;
    double r = 0;
    double angle = 0;
};

/// Root fidelity of two squeezed thermal states computed on density matrices in a truncated
/// Fock basis (operators built in dimension `build_dim`, fidelity taken on the first `cutoff` levels).
double fock_fidelity(const SqueezedThermal &a, const SqueezedThermal &b, int cutoff = 60, int build_dim = 160);

/// |<psi|phi>| for pure states given by Bloch vectors on the unit sphere.
double pure_overlap(const std::array<double, 3> &a, const std::array<double, 3> &b);

/// -x log2 x - (1-x) log2 (1-x), written out directly.
double entropy_formula(double x);

struct GridMin {
    double value = 0;
    std::array<double, 3> point{};
};

/// Minimum of f(u, v, angle) over u in [-u_max, u_max], v in [0, v_max], angle in [0, pi):
/// a side^3 grid followed by 5x5x5 pattern search (v clamped at 0, angle periodic).
GridMin uvphi_grid_minimize(const std::function<double(double, double, double)> &f, double u_max, double v_max,
                            int side = 100, int refine_rounds = 400);

}  // namespace fqc::oracle

#endif
