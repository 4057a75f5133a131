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

#include "fqc/sweep.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "fqc/errors.h"

namespace fqc {

namespace {

struct TargetOutcome {
    double error = 0;
    char reachable = 0;
};

/// Runs task(i) for i in [0, n) on `threads` workers. If tasks throw, the exception of the
/// lowest failing index is rethrown after all workers stop.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)> &task) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; i++) {
            task(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex mu;
    std::size_t first_bad = std::numeric_limits<std::size_t>::max();
    std::exception_ptr first_error;
    auto worker = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) {
                return;
            }
            try {
                task(i);
            } catch (...) {
                std::lock_guard lock(mu);
                if (i < first_bad) {
                    first_bad = i;
                    first_error = std::current_exception();
                }
                failed = true;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; t++) {
        pool.emplace_back(worker);
    }
    for (auto &t : pool) {
        t.join();
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
}

int resolve_threads(int requested) { return requested > 0 ? requested : default_thread_count(); }

}  // namespace

int default_thread_count() { return std::max(1u, std::thread::hardware_concurrency()); }

void summarize_errors(std::span<const double> errors, std::span<const char> reachable, SweepRecord &out) {
    std::size_t n = errors.size();
    out.n_targets = static_cast<std::int64_t>(n);
    double sum = 0, max_err = 0, sum_l = 0;
    std::size_t n_reach = 0;
    for (std::size_t i = 0; i < n; i++) {
        sum += errors[i];
        max_err = std::max(max_err, errors[i]);
        sum_l += -std::log2(std::max(errors[i], kErrorFloor));
        n_reach += reachable[i] ? 1 : 0;
    }
    double mean_l = sum_l / n;
    double var = 0;
    for (std::size_t i = 0; i < n; i++) {
        double d = -std::log2(std::max(errors[i], kErrorFloor)) - mean_l;
        var += d * d;
    }
    out.frac_reachable = static_cast<double>(n_reach) / n;
    out.mean_err = std::max(sum / n, kErrorFloor);
    out.neglog2_mean_err = -std::log2(out.mean_err);
    out.std_neglog2 = std::sqrt(var / n);
    out.max_err = std::max(max_err, kErrorFloor);
}

std::vector<double> default_qubit_angle_grid() {
    std::vector<double> g;
    for (int k = 1; k <= 6; k++) {
        g.push_back(k * M_PI / 24);
    }
    return g;
}

std::vector<double> linear_grid(double lo, double hi, int steps) {
    if (steps < 1) {
        throw DomainError("grid needs at least one step");
    }
    if (steps == 1) {
        return {lo};
    }
    std::vector<double> g(steps);
    for (int i = 0; i < steps; i++) {
        g[i] = lo + (hi - lo) * i / (steps - 1);
    }
    g.back() = hi;
    return g;
}

std::vector<SweepRecord> run_qubit_sweep(const QubitSweepConfig &config) {
    if (config.n_targets < 1) {
        throw DomainError("n_targets must be >= 1");
    }
    std::vector<QubitChannelParams> grid;
    for (double t : config.theta_grid) {
        for (double p : config.phi_grid) {
            grid.push_back(QubitChannelParams::checked(t, p));
        }
    }
    const std::size_t per = static_cast<std::size_t>(config.n_targets);
    std::vector<TargetOutcome> outcomes(grid.size() * per);
    parallel_for(outcomes.size(), resolve_threads(config.threads), [&](std::size_t i) {
        std::size_t g = i / per, k = i % per;
        RngStream rng = RngStream::derive(config.seed, g, k);
        DensityMatrix target = sample_qubit_target(rng, config.measure);
        try {
            ControlSolution s = solve_qubit_control(grid[g], target);
            outcomes[i] = {s.error, static_cast<char>(s.reachable)};
        } catch (const Error &e) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "qubit sweep failed at theta_bar=" << grid[g].theta << " phi_bar=" << grid[g].phi << " target "
                << k << ": " << e.what();
            throw SweepError(msg.str());
        }
    });

    std::vector<SweepRecord> records(grid.size());
    std::vector<double> errs(per);
    std::vector<char> reach(per);
    for (std::size_t g = 0; g < grid.size(); g++) {
        for (std::size_t k = 0; k < per; k++) {
            errs[k] = outcomes[g * per + k].error;
            reach[k] = outcomes[g * per + k].reachable;
        }
        SweepRecord &r = records[g];
        r.params = grid[g];
        r.capacity = capacity_control_channel(grid[g]);
        r.seed = config.seed;
        summarize_errors(errs, reach, r);
    }
    return records;
}

std::vector<SweepRecord> run_gaussian_sweep(const GaussianSweepConfig &config) {
    if (config.n_targets < 1) {
        throw DomainError("n_targets must be >= 1");
    }
    if (!(config.r_max >= 0) || !(config.nbar_max >= 0)) {
        throw DomainError("r_max and nbar_max must be >= 0");
    }
    std::vector<GaussianChannelParam> grid;
    for (double q : config.q_grid) {
        grid.push_back(GaussianChannelParam::checked(q));
    }
    const std::size_t per = static_cast<std::size_t>(config.n_targets);
    std::vector<TargetOutcome> outcomes(grid.size() * per);
    parallel_for(outcomes.size(), resolve_threads(config.threads), [&](std::size_t i) {
        std::size_t g = i / per, k = i % per;
        RngStream rng = RngStream::derive(config.seed, g, k);
        CovarianceMatrix target = sample_gaussian_target(rng, config.r_max, config.nbar_max);
        try {
            GaussianControlSolution s = solve_gaussian_control(grid[g], target, config.cost);
            outcomes[i] = {s.error, static_cast<char>(s.reachable)};
        } catch (const Error &e) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "gaussian sweep failed at q=" << grid[g].q << " target " << k << ": " << e.what();
            throw SweepError(msg.str());
        }
    });

    std::vector<SweepRecord> records(grid.size());
    std::vector<double> errs(per);
    std::vector<char> reach(per);
    for (std::size_t g = 0; g < grid.size(); g++) {
        for (std::size_t k = 0; k < per; k++) {
            errs[k] = outcomes[g * per + k].error;
            reach[k] = outcomes[g * per + k].reachable;
        }
        SweepRecord &r = records[g];
        r.params = grid[g];
        r.capacity = capacity_gaussian(grid[g]);
        r.seed = config.seed;
        summarize_errors(errs, reach, r);
    }
    return records;
}

FitSelection select_fit_points(std::span<const SweepRecord> records, ErrorStatistic stat) {
    FitSelection sel;
    for (std::size_t i = 0; i < records.size(); i++) {
        const auto &r = records[i];
        if (r.infinite_capacity()) {
            sel.infinite++;
            continue;
        }
        double err = stat == ErrorStatistic::Mean ? r.mean_err : r.max_err;
        if (err <= kErrorFloor) {
            sel.clamped++;
            continue;
        }
        sel.points.push_back({r.capacity, -std::log2(err)});
        sel.indices.push_back(i);
    }
    return sel;
}

FitResult fit_model(ModelKind kind, std::span<const SweepRecord> records, std::optional<Window> window,
                    ErrorStatistic stat) {
    FitSelection sel = select_fit_points(records, stat);
    return fit_points(kind, sel.points, window);
}

}  // namespace fqc
