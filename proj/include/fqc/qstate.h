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

#ifndef FQC_QSTATE_H
#define FQC_QSTATE_H

#include <array>
#include <complex>
#include <cstdint>
#include <random>

namespace fqc {

using cplx = std::complex<double>;

/// Slack allowed on positivity and trace checks of 2x2 states.
inline constexpr double kStateTolerance = 1e-12;

/// Dense 2x2 complex matrix, row-major.
struct ComplexMat2 {
    std::array<cplx, 4> m{};

    static ComplexMat2 identity();
    static ComplexMat2 diag(cplx a, cplx b);

    cplx &operator()(int row, int col) { return m[2 * row + col]; }
    const cplx &operator()(int row, int col) const { return m[2 * row + col]; }

    ComplexMat2 adjoint() const;
    cplx trace() const { return m[0] + m[3]; }
    cplx det() const { return m[0] * m[3] - m[1] * m[2]; }
    double max_abs() const;
    bool is_finite() const;

    ComplexMat2 operator*(const ComplexMat2 &o) const;
    ComplexMat2 operator+(const ComplexMat2 &o) const;
    ComplexMat2 operator-(const ComplexMat2 &o) const;
    ComplexMat2 operator*(cplx s) const;
};

/// Eigenvalues (ascending) of a Hermitian 2x2 matrix; the anti-Hermitian part is ignored.
std::array<double, 2> hermitian_eigenvalues(const ComplexMat2 &h);

/// Principal square root of a positive semidefinite Hermitian 2x2 matrix.
///
/// Uses sqrt(M) = (M + sqrt(det M) I) / sqrt(tr M + 2 sqrt(det M)); tiny negative
/// determinants from round-off are treated as zero.
ComplexMat2 sqrt_psd(const ComplexMat2 &h);

/// Qubit state [[y, z], [conj(z), 1 - y]].
///
/// Instances always satisfy 0 <= y <= 1 and y(1-y) - |z|^2 >= -kStateTolerance.
class DensityMatrix {
   public:
    /// Throws NotAState when the parts do not describe a state.
    static DensityMatrix from_parts(double y, cplx z);
    /// Bloch vector (x, y, z) with rho = (1 + r.sigma) / 2; throws NotAState if |r| > 1 + tol.
    static DensityMatrix from_bloch(const std::array<double, 3> &r);
    static DensityMatrix maximally_mixed() { return DensityMatrix(0.5, 0.0); }

    double y() const { return y_; }
    cplx z() const { return z_; }
    ComplexMat2 matrix() const;
    std::array<double, 3> bloch() const;
    /// y(1-y) - |z|^2, the determinant of the matrix.
    double det() const { return y_ * (1.0 - y_) - std::norm(z_); }

    bool operator==(const DensityMatrix &o) const = default;

   private:
    DensityMatrix(double y, cplx z) : y_(y), z_(z) {}
    double y_;
    cplx z_;
};

struct KrausPair {
    ComplexMat2 a1;
    ComplexMat2 a2;

    static KrausPair identity() { return {ComplexMat2::identity(), ComplexMat2{}}; }
    /// max-abs entry of a1^dag a1 + a2^dag a2 - 1.
    double completeness_defect() const;
};

bool is_physical_dm(double y, cplx z);

inline DensityMatrix dm_from_parts(double y, cplx z) { return DensityMatrix::from_parts(y, z); }

/// Output matrix of the channel without validation; used when the input is not a state.
ComplexMat2 apply_kraus_raw(const KrausPair &k, const ComplexMat2 &rho);

/// Throws ChannelNotTracePreserving if the pair is incomplete beyond 1e-12.
DensityMatrix apply_kraus(const KrausPair &k, const DensityMatrix &rho);

/// Root fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)), clamped to [0, 1].
double uhlmann_fidelity(const DensityMatrix &rho, const DensityMatrix &sigma);

/// Binary Shannon entropy in bits. Throws DomainError outside [0, 1].
double binary_entropy(double x);

/// Von Neumann entropy in bits of a Hermitian PSD 2x2 matrix of unit trace.
double von_neumann_entropy(const ComplexMat2 &h);

/// Deterministic random stream. Copies continue the same sequence independently.
class RngStream {
   public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    /// Independent substream keyed by (seed, a, b).
    static RngStream derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

    double uniform01();
    double uniform(double lo, double hi);
    double normal();

   private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Haar-random pure qubit state (uniform on the Bloch sphere surface).
DensityMatrix haar_pure_qubit(RngStream &rng);

/// Hilbert-Schmidt random mixed qubit state, rho = G G^dag / Tr(G G^dag) with G Ginibre.
DensityMatrix hilbert_schmidt_qubit(RngStream &rng);

enum class TargetMeasure { HaarPure, HilbertSchmidt };

DensityMatrix sample_qubit_target(RngStream &rng, TargetMeasure measure);

}  // namespace fqc

#endif
