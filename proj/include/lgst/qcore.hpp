// Copyright 2026 The lgst developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cmath>
#include <utility>

#include "lgst/eig.hpp"
#include "lgst/errors.hpp"
#include "lgst/matrix.hpp"

namespace lgst {

struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    double dot(const BlochVector& o) const { return x * o.x + y * o.y + z * o.z; }
    BlochVector operator-() const { return {-x, -y, -z}; }
};

inline ComplexMatrix pauli_x() {
    ComplexMatrix m(2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}

inline ComplexMatrix pauli_y() {
    ComplexMatrix m(2);
    m(0, 1) = cplx(0.0, -1.0);
    m(1, 0) = cplx(0.0, 1.0);
    return m;
}

inline ComplexMatrix pauli_z() {
    ComplexMatrix m(2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

/// v . sigma
inline ComplexMatrix pauli(const BlochVector& v) {
    ComplexMatrix m(2);
    m(0, 0) = cplx(v.z, 0.0);
    m(1, 1) = cplx(-v.z, 0.0);
    m(0, 1) = cplx(v.x, -v.y);
    m(1, 0) = cplx(v.x, v.y);
    return m;
}

/// Unit vector (sin a, 0, cos a) in the x-z plane.
inline BlochVector xz_direction(double angle) { return {std::sin(angle), 0.0, std::cos(angle)}; }

/// d x d positive unit-trace Hermitian matrix.
class DensityMatrix {
  public:
    explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
        if (!m_.square()) {
            throw std::invalid_argument("density matrix must be square");
        }
        if (!m_.is_hermitian(1e-10)) {
            throw std::invalid_argument("density matrix must be hermitian");
        }
        if (std::abs(m_.trace() - cplx(1.0, 0.0)) > 1e-10) {
            throw std::invalid_argument("density matrix must have unit trace");
        }
        const auto d = eigh(m_);
        if (d.eigenvalues.back() < -1e-10) {
            throw std::invalid_argument("density matrix must be positive semidefinite");
        }
    }

    static DensityMatrix maximally_mixed(std::size_t dim) {
        return DensityMatrix(ComplexMatrix::identity(dim) * cplx(1.0 / static_cast<double>(dim), 0.0));
    }

    const ComplexMatrix& matrix() const { return m_; }
    std::size_t dim() const { return m_.dim(); }

    /// Bloch vector r_k = Tr[rho sigma_k]; qubit states only.
    BlochVector bloch() const {
        if (dim() != 2) {
            throw std::invalid_argument("bloch(): state is not a qubit");
        }
        return {(m_ * pauli_x()).trace().real(), (m_ * pauli_y()).trace().real(),
                (m_ * pauli_z()).trace().real()};
    }

  private:
    ComplexMatrix m_;
};

/// rho = (I + n.sigma)/2
inline DensityMatrix bloch_to_density(const BlochVector& n) {
    if (n.norm() > 1.0 + 1e-12) {
        throw std::invalid_argument("bloch_to_density: |n| > 1 is not a state");
    }
    ComplexMatrix m = ComplexMatrix::identity(2) + pauli(n);
    return DensityMatrix(m * cplx(0.5, 0.0));
}

/// Two effects summing to the identity. Canonically represented by the
/// measurement operator M = effect0 - effect1 with effects (I +/- M)/2, so
/// constructing from effects, from the operator, or from a serialized
/// operator all land on identical matrices. The projective flag is detected
/// from the effects (E^2 = E within 1e-10).
class BinaryMeasurement {
  public:
    BinaryMeasurement(const ComplexMatrix& effect0, const ComplexMatrix& effect1) {
        if (!effect0.square() || effect0.rows() != effect1.rows() ||
            effect0.cols() != effect1.cols()) {
            throw std::invalid_argument("effects must be square matrices of one dimension");
        }
        if (max_abs_diff(effect0 + effect1, ComplexMatrix::identity(effect0.dim())) > 1e-12) {
            throw std::invalid_argument("effects must sum to the identity");
        }
        init(effect0 - effect1);
    }

    /// Effects (I +/- m)/2 of a dichotomic measurement operator m. Any
    /// Hermitian m with spectrum in [-1, 1] is accepted; eigenvalues +/-1
    /// give the projective case.
    static BinaryMeasurement from_observable(const ComplexMatrix& m) {
        BinaryMeasurement b;
        b.init(m);
        return b;
    }

    const ComplexMatrix& effect(int outcome) const { return e_.at(static_cast<std::size_t>(outcome)); }
    bool projective() const { return projective_; }
    std::size_t dim() const { return m_.dim(); }

    /// The measurement operator effect0 - effect1.
    const ComplexMatrix& observable() const { return m_; }

  private:
    BinaryMeasurement() = default;

    void init(ComplexMatrix m) {
        m_ = std::move(m);
        const ComplexMatrix id = ComplexMatrix::identity(m_.dim());
        e_ = {(id + m_) * cplx(0.5, 0.0), (id - m_) * cplx(0.5, 0.0)};
        projective_ = true;
        for (const auto& e : e_) {
            if (!e.is_hermitian(1e-10)) {
                throw std::invalid_argument("effects must be hermitian");
            }
            const auto d = eigh(e);
            if (d.eigenvalues.front() > 1.0 + 1e-12 || d.eigenvalues.back() < -1e-12) {
                throw std::invalid_argument("effect eigenvalues must lie in [0, 1]");
            }
            if (max_abs_diff(e * e, e) > 1e-10) {
                projective_ = false;
            }
        }
    }

    ComplexMatrix m_;
    std::array<ComplexMatrix, 2> e_;
    bool projective_ = false;
};

/// Projectors onto the +/- eigenspaces of a.sigma; outcome 0 is the +1
/// eigenvalue throughout.
inline BinaryMeasurement projective_measurement(const BlochVector& direction) {
    if (std::abs(direction.norm() - 1.0) > 1e-9) {
        throw std::invalid_argument("projective_measurement: direction must be a unit vector");
    }
    return BinaryMeasurement::from_observable(pauli(direction));
}

/// Biased two-outcome qubit POVM: effect_a = s*P_a + (1 +/- bias - s) I/2,
/// with +bias on outcome 0 and -bias on outcome 1 (the pairing completeness
/// forces).
inline BinaryMeasurement biased_effect_pair(const BlochVector& direction, double sharpness,
                                            double bias) {
    if (!(sharpness > 0.0) || sharpness > 1.0 + 1e-12) {
        throw std::invalid_argument("biased_effect_pair: sharpness must lie in (0, 1]");
    }
    if (std::abs(bias) + sharpness > 1.0 + 1e-12) {
        throw std::invalid_argument("biased_effect_pair: |bias| + sharpness > 1 breaks positivity");
    }
    // E0 - E1 = sharpness * (d.sigma) + bias * I; building through the shared
    // observable path keeps serialization round trips bit-identical
    const ComplexMatrix obs =
        pauli(direction) * cplx(sharpness, 0.0) + ComplexMatrix::identity(2) * cplx(bias, 0.0);
    return BinaryMeasurement::from_observable(obs);
}

/// Outcome probability and post-measurement state of the generalized Lueders
/// update: p = Tr[E rho], post = sqrt(E) rho sqrt(E) / p.
inline std::pair<double, DensityMatrix> luders_update(const DensityMatrix& state,
                                                      const ComplexMatrix& effect) {
    if (effect.dim() != state.dim()) {
        throw std::invalid_argument("luders_update: dimension mismatch");
    }
    const double p = (effect * state.matrix()).trace().real();
    if (p < 1e-14) {
        throw zero_probability_error("luders_update: outcome has zero probability");
    }
    const ComplexMatrix s = psd_sqrt(effect);
    ComplexMatrix post = s * state.matrix() * s;
    // normalizing by the branch's own trace (= p up to rounding) keeps the
    // post-state exactly unit trace even for barely-populated branches
    post *= cplx(1.0 / post.trace().real(), 0.0);
    return {p, DensityMatrix(post)};
}

/// Unnormalized branch state sqrt(E) rho sqrt(E). Vanishing branches come out
/// as (near-)zero matrices instead of erroring, which is the limit convention
/// the sequential statistics need.
inline ComplexMatrix luders_branch(const DensityMatrix& state, const BinaryMeasurement& m,
                                   int outcome) {
    const ComplexMatrix& e = m.effect(outcome);
    if (e.dim() != state.dim()) {
        throw std::invalid_argument("luders_branch: dimension mismatch");
    }
    const ComplexMatrix s = m.projective() ? e : psd_sqrt(e);
    return s * state.matrix() * s;
}

/// Parameters of the biased/unsharp POVM family: two sharpness values per
/// party, one bias per party, four measurement directions and an input state.
struct PovmParams {
    std::array<double, 2> sharpnessAlice{1.0, 1.0};
    std::array<double, 2> sharpnessBob{1.0, 1.0};
    double biasAlice = 0.0;
    double biasBob = 0.0;
    std::array<BlochVector, 4> directions{BlochVector{0, 0, 1}, BlochVector{1, 0, 0},
                                          BlochVector{0, 0, 1}, BlochVector{1, 0, 0}};
    BlochVector inputBloch{0.0, 0.0, 0.0};

    void validate() const {
        for (double s : sharpnessAlice) {
            if (!(s > 0.0) || std::abs(biasAlice) + s > 1.0 + 1e-12) {
                throw std::invalid_argument("povm params: |bias_a| + sharpness_a > 1");
            }
        }
        for (double s : sharpnessBob) {
            if (!(s > 0.0) || std::abs(biasBob) + s > 1.0 + 1e-12) {
                throw std::invalid_argument("povm params: |bias_b| + sharpness_b > 1");
            }
        }
    }
};

} // namespace lgst
