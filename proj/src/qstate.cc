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

#include "fqc/qstate.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "fqc/errors.h"

namespace fqc {

ComplexMat2 ComplexMat2::identity() { return diag(1.0, 1.0); }

ComplexMat2 ComplexMat2::diag(cplx a, cplx b) {
    ComplexMat2 r;
    r(0, 0) = a;
    r(1, 1) = b;
    return r;
}

ComplexMat2 ComplexMat2::adjoint() const {
    ComplexMat2 r;
    r(0, 0) = std::conj(m[0]);
    r(0, 1) = std::conj(m[2]);
    r(1, 0) = std::conj(m[1]);
    r(1, 1) = std::conj(m[3]);
    return r;
}

double ComplexMat2::max_abs() const {
    double r = 0;
    for (const auto &v : m) {
        r = std::max(r, std::abs(v));
    }
    return r;
}

bool ComplexMat2::is_finite() const {
    return std::all_of(m.begin(), m.end(), [](cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

ComplexMat2 ComplexMat2::operator*(const ComplexMat2 &o) const {
    ComplexMat2 r;
    for (int i = 0; i < 2; i++) {
        for (int j = 0; j < 2; j++) {
            r(i, j) = (*this)(i, 0) * o(0, j) + (*this)(i, 1) * o(1, j);
        }
    }
    return r;
}

ComplexMat2 ComplexMat2::operator+(const ComplexMat2 &o) const {
    ComplexMat2 r;
    for (size_t k = 0; k < 4; k++) {
        r.m[k] = m[k] + o.m[k];
    }
    return r;
}

ComplexMat2 ComplexMat2::operator-(const ComplexMat2 &o) const {
    ComplexMat2 r;
    for (size_t k = 0; k < 4; k++) {
        r.m[k] = m[k] - o.m[k];
    }
    return r;
}

ComplexMat2 ComplexMat2::operator*(cplx s) const {
    ComplexMat2 r;
    for (size_t k = 0; k < 4; k++) {
        r.m[k] = m[k] * s;
    }
    return r;
}

std::array<double, 2> hermitian_eigenvalues(const ComplexMat2 &h) {
    double a = h(0, 0).real();
    double d = h(1, 1).real();
    cplx off = 0.5 * (h(0, 1) + std::conj(h(1, 0)));
    double mean = 0.5 * (a + d);
    double radius = std::hypot(0.5 * (a - d), std::abs(off));
    return {mean - radius, mean + radius};
}

ComplexMat2 sqrt_psd(const ComplexMat2 &h) {
    double s = std::sqrt(std::max(0.0, h.det().real()));
    double t = std::sqrt(std::max(0.0, h.trace().real() + 2.0 * s));
    if (t == 0.0) {
        return ComplexMat2{};
    }
    return (h + ComplexMat2::diag(s, s)) * (1.0 / t);
}

DensityMatrix DensityMatrix::from_parts(double y, cplx z) {
    if (!is_physical_dm(y, z)) {
        throw NotAState("not a density matrix: y=" + std::to_string(y) + " z=(" + std::to_string(z.real()) + "," +
                        std::to_string(z.imag()) + ")");
    }
    return DensityMatrix(y, z);
}

DensityMatrix DensityMatrix::from_bloch(const std::array<double, 3> &r) {
    double y = 0.5 * (1.0 + r[2]);
    cplx z(0.5 * r[0], -0.5 * r[1]);
    return from_parts(std::clamp(y, 0.0, 1.0), z);
}

ComplexMat2 DensityMatrix::matrix() const {
    ComplexMat2 r;
    r(0, 0) = y_;
    r(0, 1) = z_;
    r(1, 0) = std::conj(z_);
    r(1, 1) = 1.0 - y_;
    return r;
}

std::array<double, 3> DensityMatrix::bloch() const { return {2.0 * z_.real(), -2.0 * z_.imag(), 2.0 * y_ - 1.0}; }

bool is_physical_dm(double y, cplx z) {
    if (!std::isfinite(y) || !std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        return false;
    }
    if (y < 0.0 || y > 1.0) {
        return false;
    }
    return y * (1.0 - y) - std::norm(z) >= -kStateTolerance;
}

double KrausPair::completeness_defect() const {
    return (a1.adjoint() * a1 + a2.adjoint() * a2 - ComplexMat2::identity()).max_abs();
}

ComplexMat2 apply_kraus_raw(const KrausPair &k, const ComplexMat2 &rho) {
    return k.a1 * rho * k.a1.adjoint() + k.a2 * rho * k.a2.adjoint();
}

DensityMatrix apply_kraus(const KrausPair &k, const DensityMatrix &rho) {
    double defect = k.completeness_defect();
    if (!(defect <= kStateTolerance)) {
        throw ChannelNotTracePreserving("Kraus completeness violated by " + std::to_string(defect));
    }
    ComplexMat2 out = apply_kraus_raw(k, rho.matrix());
    // Hermitian part only; the map is Hermiticity preserving up to round-off.
    double y = out(0, 0).real();
    cplx z = 0.5 * (out(0, 1) + std::conj(out(1, 0)));
    return DensityMatrix::from_parts(std::clamp(y, 0.0, 1.0), z);
}

double uhlmann_fidelity(const DensityMatrix &rho, const DensityMatrix &sigma) {
    // For qubits F^2 = tr(rho sigma) + 2 sqrt(det rho det sigma). Unlike the square root of
    // sqrt(rho) sigma sqrt(rho) this stays accurate when either state is (nearly) pure.
    double overlap = rho.y() * sigma.y() + (1.0 - rho.y()) * (1.0 - sigma.y()) +
                     2.0 * (rho.z().real() * sigma.z().real() + rho.z().imag() * sigma.z().imag());
    double dets = std::max(0.0, rho.det()) * std::max(0.0, sigma.det());
    double f = std::sqrt(std::max(0.0, overlap + 2.0 * std::sqrt(dets)));
    if (f > 1.0 + 1e-9) {
        throw DomainError("fidelity exceeds 1 by more than 1e-9: " + std::to_string(f));
    }
    return std::clamp(f, 0.0, 1.0);
}

namespace {

double plogp(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

}  // namespace

double binary_entropy(double x) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw DomainError("binary entropy argument outside [0, 1]: " + std::to_string(x));
    }
    // Evaluating at the larger of the pair makes S(x) and S(1 - x) bit-identical.
    double hi = std::max(x, 1.0 - x);
    return plogp(1.0 - hi) + plogp(hi);
}

double von_neumann_entropy(const ComplexMat2 &h) {
    auto ev = hermitian_eigenvalues(h);
    return plogp(std::clamp(ev[0], 0.0, 1.0)) + plogp(std::clamp(ev[1], 0.0, 1.0));
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

RngStream RngStream::derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ (b * 0xD1B54A32D192ED03ULL));
    return RngStream(h);
}

double RngStream::uniform01() { return std::generate_canonical<double, 53>(engine_); }

double RngStream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

double RngStream::normal() {
    // Box-Muller, written out so that sequences do not depend on the standard library.
    double u1 = 1.0 - uniform01();
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

DensityMatrix haar_pure_qubit(RngStream &rng) {
    cplx a(rng.normal(), rng.normal());
    cplx b(rng.normal(), rng.normal());
    double n = std::norm(a) + std::norm(b);
    a /= std::sqrt(n);
    b /= std::sqrt(n);
    double y = std::norm(a);
    cplx z = a * std::conj(b);
    return DensityMatrix::from_parts(std::clamp(y, 0.0, 1.0), z);
}

DensityMatrix hilbert_schmidt_qubit(RngStream &rng) {
    ComplexMat2 g;
    for (auto &v : g.m) {
        v = cplx(rng.normal(), rng.normal());
    }
    ComplexMat2 w = g * g.adjoint();
    double tr = w.trace().real();
    return DensityMatrix::from_parts(std::clamp(w(0, 0).real() / tr, 0.0, 1.0), w(0, 1) / tr);
}

DensityMatrix sample_qubit_target(RngStream &rng, TargetMeasure measure) {
    return measure == TargetMeasure::HaarPure ? haar_pure_qubit(rng) : hilbert_schmidt_qubit(rng);
}

}  // namespace fqc
