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

#include "doctest.h"
#include "fqc/errors.h"
#include "fqc/qstate.h"
#include "oracles.h"

using namespace fqc;

namespace {

KrausPair random_channel(RngStream &rng) {
    // Random isometry columns: normalise a random 4-vector pair via Gram-Schmidt.
    std::array<cplx, 4> c0, c1;
    for (auto &v : c0) {
        v = {rng.normal(), rng.normal()};
    }
    for (auto &v : c1) {
        v = {rng.normal(), rng.normal()};
    }
    auto dot = [](const std::array<cplx, 4> &a, const std::array<cplx, 4> &b) {
        cplx s = 0;
        for (int i = 0; i < 4; i++) {
            s += std::conj(a[i]) * b[i];
        }
        return s;
    };
    double n0 = std::sqrt(dot(c0, c0).real());
    for (auto &v : c0) {
        v /= n0;
    }
    cplx p = dot(c0, c1);
    for (int i = 0; i < 4; i++) {
        c1[i] -= p * c0[i];
    }
    double n1 = std::sqrt(dot(c1, c1).real());
    for (auto &v : c1) {
        v /= n1;
    }
    // Stacked [A1; A2] is the 4x2 isometry with columns c0, c1.
    KrausPair k;
    for (int r = 0; r < 2; r++) {
        k.a1(r, 0) = c0[r];
        k.a1(r, 1) = c1[r];
        k.a2(r, 0) = c0[r + 2];
        k.a2(r, 1) = c1[r + 2];
    }
    return k;
}

}  // namespace

TEST_CASE("state construction from parts") {
    auto mm = dm_from_parts(0.5, 0);
    CHECK(mm == DensityMatrix::maximally_mixed());
    CHECK_NOTHROW(dm_from_parts(0.7, 0.2));
    CHECK_THROWS_AS(dm_from_parts(0.5, 0.6), NotAState);
    CHECK_THROWS_AS(dm_from_parts(1.2, 0), NotAState);
}

TEST_CASE("physicality predicate") {
    CHECK(is_physical_dm(0.5, 0.5));
    CHECK_FALSE(is_physical_dm(1.0, 0.1));
    CHECK_FALSE(is_physical_dm(0.366, -0.5176));
    CHECK_FALSE(is_physical_dm(-0.1, 0));
}

TEST_CASE("kraus application") {
    auto rho = dm_from_parts(0.7, 0.2);
    auto same = apply_kraus(KrausPair::identity(), rho);
    CHECK(same.y() == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(std::abs(same.z() - cplx(0.2)) < 1e-15);

    KrausPair zflip{ComplexMat2::diag(1, -1), ComplexMat2{}};
    auto out = apply_kraus(zflip, rho);
    CHECK(std::abs(out.y() - 0.7) < 1e-15);
    CHECK(std::abs(out.z() - cplx(-0.2)) < 1e-15);

    KrausPair bad{ComplexMat2::identity(), ComplexMat2::identity()};
    CHECK_THROWS_AS(apply_kraus(bad, rho), ChannelNotTracePreserving);
}

TEST_CASE("random channels preserve trace and positivity") {
    RngStream rng(11);
    for (int i = 0; i < 10000; i++) {
        auto k = random_channel(rng);
        REQUIRE(k.completeness_defect() <= 1e-12);
        auto rho = hilbert_schmidt_qubit(rng);
        auto raw = apply_kraus_raw(k, rho.matrix());
        CHECK(std::abs(raw.trace() - cplx(1)) <= 1e-12);
        CHECK(hermitian_eigenvalues(raw)[0] >= -1e-12);
        CHECK_NOTHROW(apply_kraus(k, rho));
    }
}

TEST_CASE("fidelity examples") {
    auto rho = dm_from_parts(0.7, cplx(0.2, -0.1));
    CHECK(uhlmann_fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-12));
    auto zero = dm_from_parts(1, 0), one = dm_from_parts(0, 0);
    CHECK(uhlmann_fidelity(zero, one) == doctest::Approx(0.0));
    CHECK(std::abs(uhlmann_fidelity(DensityMatrix::maximally_mixed(), zero) - 1 / std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("fidelity is symmetric and bounded") {
    RngStream rng(5);
    for (int i = 0; i < 5000; i++) {
        auto a = hilbert_schmidt_qubit(rng);
        auto b = i % 2 ? haar_pure_qubit(rng) : hilbert_schmidt_qubit(rng);
        double f1 = uhlmann_fidelity(a, b), f2 = uhlmann_fidelity(b, a);
        CHECK(std::abs(f1 - f2) <= 1e-12);
        CHECK(f1 >= 0);
        CHECK(f1 <= 1);
    }
}

TEST_CASE("fidelity of pure states matches the overlap") {
    RngStream rng(8);
    for (int i = 0; i < 5000; i++) {
        auto a = haar_pure_qubit(rng), b = haar_pure_qubit(rng);
        CHECK(std::abs(uhlmann_fidelity(a, b) - oracle::pure_overlap(a.bloch(), b.bloch())) <= 1e-10);
    }
}

TEST_CASE("binary entropy") {
    CHECK(binary_entropy(0.5) == 1.0);
    CHECK(binary_entropy(0) == 0.0);
    CHECK(binary_entropy(1) == 0.0);
    CHECK(binary_entropy(0.11) == doctest::Approx(0.499915958164528).epsilon(1e-12));
    CHECK_THROWS_AS(binary_entropy(-0.1), DomainError);
    CHECK_THROWS_AS(binary_entropy(1.1), DomainError);
    for (int i = 0; i <= 1000; i++) {
        double x = i / 1000.0;
        CHECK(binary_entropy(x) == binary_entropy(1 - x));
        CHECK(std::abs(binary_entropy(x) - oracle::entropy_formula(x)) < 1e-14);
    }
}

TEST_CASE("haar pure sampler") {
    RngStream rng(1);
    std::array<double, 3> mean{};
    int up = 0;
    const int n = 100000;
    for (int i = 0; i < n; i++) {
        auto s = haar_pure_qubit(rng);
        auto b = s.bloch();
        double norm = std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
        CHECK(std::abs(norm - 1) <= 1e-12);
        CHECK(std::abs(s.det()) <= 1e-12);
        for (int k = 0; k < 3; k++) {
            mean[k] += b[k] / n;
        }
        up += b[2] > 0;
    }
    for (double m : mean) {
        CHECK(std::abs(m) < 0.02);
    }
    CHECK(std::abs(up / double(n) - 0.5) < 0.01);
}

TEST_CASE("equal seeds give identical draws") {
    RngStream a = RngStream::derive(42, 3, 9), b = RngStream::derive(42, 3, 9);
    for (int i = 0; i < 1000; i++) {
        CHECK(haar_pure_qubit(a) == haar_pure_qubit(b));
    }
    RngStream c = RngStream::derive(42, 3, 10);
    CHECK_FALSE(haar_pure_qubit(c) == haar_pure_qubit(b));
}

TEST_CASE("hilbert-schmidt sampler gives mixed states") {
    RngStream rng(3);
    double mean_r = 0;
    for (int i = 0; i < 20000; i++) {
        auto b = hilbert_schmidt_qubit(rng).bloch();
        mean_r += std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]) / 20000;
    }
    // Radial density 3 r^2 on the ball has mean 3/4.
    CHECK(std::abs(mean_r - 0.75) < 0.01);
}

TEST_CASE("closed-form square root") {
    RngStream rng(4);
    for (int i = 0; i < 1000; i++) {
        auto m = hilbert_schmidt_qubit(rng).matrix();
        auto s = sqrt_psd(m);
        CHECK((s * s - m).max_abs() < 1e-12);
    }
}
