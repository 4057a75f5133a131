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

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "fqc/errors.h"
#include "fqc/io.h"
#include "fqc/sweep.h"

using namespace fqc;

TEST_CASE("default grids") {
    auto g = default_qubit_angle_grid();
    REQUIRE(g.size() == 6);
    CHECK(g.front() == M_PI / 24);
    CHECK(std::abs(g.back() - M_PI / 4) < 1e-15);
    auto l = linear_grid(0.5, 3, 101);
    REQUIRE(l.size() == 101);
    CHECK(l.front() == 0.5);
    CHECK(l.back() == 3.0);
    CHECK(std::abs(l[20] - 1.0) < 1e-15);
}

TEST_CASE("error summary") {
    std::vector<double> errs{0, 0.25, 0.5};
    std::vector<char> reach{1, 0, 0};
    SweepRecord r;
    summarize_errors(errs, reach, r);
    CHECK(r.n_targets == 3);
    CHECK(std::abs(r.frac_reachable - 1.0 / 3) < 1e-15);
    CHECK(std::abs(r.mean_err - 0.25) < 1e-15);
    CHECK(std::abs(r.neglog2_mean_err - 2) < 1e-15);
    CHECK(r.max_err == 0.5);
    // -log2 of (1e-12, 0.25, 0.5) has mean m and population spread.
    double a = -std::log2(1e-12), m = (a + 2 + 1) / 3;
    double sd = std::sqrt(((a - m) * (a - m) + (2 - m) * (2 - m) + (1 - m) * (1 - m)) / 3);
    CHECK(std::abs(r.std_neglog2 - sd) < 1e-12);
}

TEST_CASE("unitary corner sweep") {
    QubitSweepConfig cfg;
    cfg.theta_grid = {0};
    cfg.phi_grid = {0};
    cfg.n_targets = 1;
    auto rec = run_qubit_sweep(cfg);
    REQUIRE(rec.size() == 1);
    CHECK(rec[0].frac_reachable == 1);
    CHECK(rec[0].mean_err == kErrorFloor);
}

TEST_CASE("small qubit sweep shape and invariants") {
    QubitSweepConfig cfg;
    cfg.n_targets = 20;
    auto rec = run_qubit_sweep(cfg);
    REQUIRE(rec.size() == 36);
    auto first = std::get<QubitChannelParams>(rec[0].params);
    auto second = std::get<QubitChannelParams>(rec[1].params);
    CHECK(first.theta == second.theta);  // theta-major
    for (const auto &r : rec) {
        CHECK(r.capacity >= 0);
        CHECK(r.capacity <= 1);
        CHECK(r.mean_err <= r.max_err);
        CHECK(r.n_targets == 20);
        CHECK(r.seed == 42);
    }
}

TEST_CASE("sweeps do not depend on the thread count") {
    QubitSweepConfig q;
    q.n_targets = 15;
    q.threads = 1;
    auto a = run_qubit_sweep(q);
    q.threads = 3;
    auto b = run_qubit_sweep(q);
    CHECK(a == b);

    GaussianSweepConfig g;
    g.q_grid = linear_grid(0.5, 3, 11);
    g.n_targets = 15;
    g.threads = 1;
    auto c = run_gaussian_sweep(g);
    g.threads = 4;
    CHECK(c == run_gaussian_sweep(g));
}

TEST_CASE("gaussian sweep rows") {
    GaussianSweepConfig g;
    g.n_targets = 50;
    g.q_grid = {0.5, 1.0, 2.0};
    auto rec = run_gaussian_sweep(g);
    REQUIRE(rec.size() == 3);
    CHECK(rec[0].capacity == 0);
    CHECK(rec[1].infinite_capacity());
    CHECK(rec[1].frac_reachable == 1);
    CHECK(std::abs(rec[2].capacity - 1) < 1e-12);
}

TEST_CASE("out of range grids are rejected") {
    QubitSweepConfig cfg;
    cfg.theta_grid = {2.0};
    cfg.phi_grid = {0.1};
    cfg.n_targets = 1;
    CHECK_THROWS_AS(run_qubit_sweep(cfg), DomainError);
}

TEST_CASE("fit point selection") {
    GaussianSweepConfig g;
    g.n_targets = 30;
    g.q_grid = linear_grid(0.5, 3, 26);
    auto rec = run_gaussian_sweep(g);
    auto sel = select_fit_points(rec);
    CHECK(sel.infinite == 1);
    CHECK(sel.points.size() + sel.clamped + sel.infinite == rec.size());
    for (size_t i = 0; i < sel.points.size(); i++) {
        CHECK(sel.points[i].capacity == rec[sel.indices[i]].capacity);
    }
    auto fit = fit_model(ModelKind::Linear, rec);
    CHECK(fit.n_points_used == sel.points.size());
}
