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

#ifndef FQC_FIT_H
#define FQC_FIT_H

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace fqc {

/// Scaling models for y = -log2(eps) as a function of the capacity Q.
enum class ModelKind {
    Linear,  ///< (i)   a1 Q + a2
    Power,   ///< (ii)  b1 Q^b3 + b2
    Log,     ///< (iii) c1 log2(Q + c3) + c2
};

std::string_view model_name(ModelKind kind);
/// Accepts "i", "ii", "iii"; throws DomainError otherwise.
ModelKind parse_model(std::string_view name);
std::size_t model_arity(ModelKind kind);

/// Closed interval on y = -log2(eps).
struct Window {
    double lo = 0;
    double hi = 0;
    bool contains(double y) const { return y >= lo && y <= hi; }
};

struct FitPoint {
    double capacity = 0;
    double y = 0;
};

struct FitResult {
    ModelKind kind = ModelKind::Linear;
    /// (a1, a2), (b1, b2, b3) or (c1, c2, c3).
    std::vector<double> coefficients;
    double zeta = 0;
    std::optional<Window> window;
    std::size_t n_points_used = 0;
    double sse = 0;

    double evaluate(double capacity) const;
};

double model_value(ModelKind kind, std::span<const double> coefficients, double capacity);
double model_sse(ModelKind kind, std::span<const double> coefficients, std::span<const FitPoint> points);

/// Search interval of the nonlinear coefficient (b3 or c3).
inline constexpr double kPowerExponentMin = 0.1, kPowerExponentMax = 3.0;
inline constexpr double kLogShiftMin = 1e-6, kLogShiftMax = 10.0;

/// Least-squares fit over every point; zeta is evaluated on `window` when given.
///
/// Model (i) is solved in closed form. For (ii) and (iii) the nonlinear coefficient is
/// located by a scan plus golden-section search (tolerance 1e-8) with the two linear
/// coefficients profiled out, then all three are polished by damped Gauss-Newton.
/// Throws InsufficientData (fewer than 3 points, 4 for ii/iii) or SingularDesign.
FitResult fit_points(ModelKind kind, std::span<const FitPoint> points, std::optional<Window> window = std::nullopt);

/// ||M - y|| / ||y|| over the points whose y lies in `window`. Throws EmptyWindow.
double fitting_error_zeta(const FitResult &fit, std::span<const FitPoint> points,
                          std::optional<Window> window = std::nullopt);

/// Spearman rank correlation with average ranks for ties.
double spearman_rank_correlation(std::span<const double> a, std::span<const double> b);

/// Repetitions n, state-space dimension D and the control range-to-resolution ratio.
struct BoundParams {
    int n = 1;
    int dimension = 1;
    double ratio = 1;
};

/// Information carried by the control, n Q log2(1 + ratio).
double information_content(const BoundParams &bp, double capacity);

/// Information needed to land in an eps-ball, -D log2(eps).
double eps_ball_information(int dimension, double eps);

/// Lower bound on log2(eps): -(n Q / D) log2(1 + ratio).
double shannon_hartley_bound(const BoundParams &bp, double capacity);

}  // namespace fqc

#endif
