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

#ifndef FQC_SWEEP_H
#define FQC_SWEEP_H

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "fqc/fit.h"
#include "fqc/gaussian.h"
#include "fqc/qstate.h"
#include "fqc/qubit_control.h"

namespace fqc {

/// Errors below this are stored as this value, so that -log2 stays finite.
inline constexpr double kErrorFloor = 1e-12;

using SweepParams = std::variant<QubitChannelParams, GaussianChannelParam>;

/// Error statistics of one sweep grid point.
struct SweepRecord {
    SweepParams params;
    /// Capacity of the control channel; +infinity at q = 1.
    double capacity = 0;
    std::int64_t n_targets = 0;
    double frac_reachable = 0;
    /// Mean error over targets, floored at kErrorFloor.
    double mean_err = 0;
    double neglog2_mean_err = 0;
    /// Population standard deviation of -log2(eps) over targets (eps floored).
    double std_neglog2 = 0;
    double max_err = 0;
    std::uint64_t seed = 0;

    bool infinite_capacity() const { return !std::isfinite(capacity); }
    bool operator==(const SweepRecord &) const = default;
};

/// Aggregate per-target errors. Both spans are in target order.
void summarize_errors(std::span<const double> errors, std::span<const char> reachable, SweepRecord &out);

/// k pi / 24 for k = 1..6.
std::vector<double> default_qubit_angle_grid();
/// `steps` equally spaced points from lo to hi inclusive.
std::vector<double> linear_grid(double lo, double hi, int steps);

/// Worker count used when 0 is requested.
int default_thread_count();

struct QubitSweepConfig {
    std::vector<double> theta_grid = default_qubit_angle_grid();
    std::vector<double> phi_grid = default_qubit_angle_grid();
    std::int64_t n_targets = 1000;
    std::uint64_t seed = 42;
    TargetMeasure measure = TargetMeasure::HaarPure;
    int threads = 0;
};

/// One record per (theta, phi), theta-major. Target k of grid point g is drawn from
/// RngStream::derive(seed, g, k), so output does not depend on the thread count.
/// Solver failures are rethrown as SweepError naming the grid point.
std::vector<SweepRecord> run_qubit_sweep(const QubitSweepConfig &config);

struct GaussianSweepConfig {
    std::vector<double> q_grid = linear_grid(0.5, 3.0, 101);
    std::int64_t n_targets = 1000;
    std::uint64_t seed = 42;
    CostKind cost = CostKind::GaussianFidelity;
    double r_max = 1.0;
    double nbar_max = 1.0;
    int threads = 0;
};

std::vector<SweepRecord> run_gaussian_sweep(const GaussianSweepConfig &config);

enum class ErrorStatistic { Mean, Max };

/// How the records of a sweep were split when building fit points.
struct FitSelection {
    std::vector<FitPoint> points;
    /// Record index of each point.
    std::vector<std::size_t> indices;
    std::size_t clamped = 0;
    std::size_t infinite = 0;
};

/// Drops infinite-capacity rows and rows whose statistic sits at the error floor.
FitSelection select_fit_points(std::span<const SweepRecord> records, ErrorStatistic stat = ErrorStatistic::Mean);

FitResult fit_model(ModelKind kind, std::span<const SweepRecord> records, std::optional<Window> window = std::nullopt,
                    ErrorStatistic stat = ErrorStatistic::Mean);

}  // namespace fqc

#endif
