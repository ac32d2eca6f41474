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

#include <limits>
#include <vector>

#include "lgst/parallel.hpp"
#include "lgst/seqstats.hpp"

namespace lgst {

/// Slope of the fidelity bound; also the value the dephasing schedule and the
/// offset functions below are built around.
inline double robustness_slope() { return 0.5 * (1.0 + std::sqrt(2.0)); }

/// Qubit dephasing channel rho -> (1+xi)/2 rho + (1-xi)/2 G rho G. Unital,
/// trace preserving and self-adjoint, so it doubles as its own adjoint when
/// pulled back over measurement operators.
struct ExtractionChannel {
    double theta = 0.0;
    double xi = 1.0;
    ComplexMatrix axis; // G: the dephasing axis observable

    ComplexMatrix apply(const ComplexMatrix& m) const {
        return m * cplx(0.5 * (1.0 + xi), 0.0) + axis * m * axis * cplx(0.5 * (1.0 - xi), 0.0);
    }
    ComplexMatrix adjoint_apply(const ComplexMatrix& m) const { return apply(m); }
};

/// Dephasing channel with an explicit strength and axis.
inline ExtractionChannel dephasing_channel(double xi, ComplexMatrix axis, double theta = 0.0) {
    if (std::abs(xi) > 1.0 + 1e-12) {
        throw std::invalid_argument("dephasing_channel: strength must lie in [-1, 1]");
    }
    return ExtractionChannel{theta, xi, std::move(axis)};
}

namespace detail {

// second_branch selects the (pi/4, pi/2] definitions; used to evaluate both
// sides of the interval boundary.
inline ExtractionChannel schedule_channel(double theta, double s, bool second_branch) {
    const double xi = second_branch ? std::min(1.0, 2.0 * s * std::cos(theta))
                                    : std::min(1.0, 2.0 * s * std::sin(theta));
    return ExtractionChannel{theta, xi, second_branch ? pauli_x() : pauli_z()};
}

} // namespace detail

/// The dephasing schedule: xi = min(1, 2s sin(theta)) with a sigma_z axis on
/// [0, pi/4], xi = min(1, 2s cos(theta)) with a sigma_x axis on (pi/4, pi/2].
inline ExtractionChannel extraction_channel(double theta, double s) {
    if (theta < 0.0 || theta > M_PI / 2 + 1e-12) {
        throw std::invalid_argument("extraction_channel: theta must lie in [0, pi/2]");
    }
    return detail::schedule_channel(theta, s, theta > M_PI / 4);
}

/// W_ia = (-1)^a (P_B1 + (-1)^(i-1) P_B2)/2 for the planar pair
/// P_B1 = cos(theta) sigma_z + sin(theta) sigma_x,
/// P_B2 = cos(theta) sigma_z - sin(theta) sigma_x.
inline ComplexMatrix w_operator(int i, int a, double theta) {
    if (i < 1 || i > 2 || (a & ~1) != 0) {
        throw std::invalid_argument("w_operator: bad indices");
    }
    const double sign = a == 0 ? 1.0 : -1.0;
    if (i == 1) {
        return pauli_z() * cplx(sign * std::cos(theta), 0.0);
    }
    return pauli_x() * cplx(sign * std::sin(theta), 0.0);
}

/// Z_ib = (-1)^b (P_A1 + (-1)^(i-1) P_A2)/2 built from a projective qubit
/// Alice pair, P_Ai = P_0|Ai - P_1|Ai.
inline ComplexMatrix z_operator(int i, int b, const std::array<BinaryMeasurement, 2>& alice) {
    if (i < 1 || i > 2 || (b & ~1) != 0) {
        throw std::invalid_argument("z_operator: bad indices");
    }
    for (const auto& m : alice) {
        if (m.dim() != 2 || !m.projective()) {
            throw std::invalid_argument("z_operator: alice pair must be projective qubit measurements");
        }
    }
    const ComplexMatrix pa1 = alice[0].observable();
    const ComplexMatrix pa2 = alice[1].observable();
    const double sign = b == 0 ? 0.5 : -0.5;
    return (i == 1 ? pa1 + pa2 : pa1 - pa2) * cplx(sign, 0.0);
}

/// K_ia = adjoint channel applied to the ideal Alice projector P_a|Ai.
inline ComplexMatrix k_operator(int i, int a, const ExtractionChannel& channel) {
    if (i < 1 || i > 2 || (a & ~1) != 0) {
        throw std::invalid_argument("k_operator: bad indices");
    }
    const double sign = a == 0 ? 1.0 : -1.0;
    const ComplexMatrix ideal =
        (ComplexMatrix::identity(2) + (i == 1 ? pauli_z() : pauli_x()) * cplx(sign, 0.0)) *
        cplx(0.5, 0.0);
    return channel.adjoint_apply(ideal);
}

/// Offsets of the operator inequality, per interval; "even" pairs with the
/// i = 1 operators and "odd" with i = 2.
struct MuCoefficients {
    double muEven = 0.0;
    double muOdd = 0.0;
    double s = 0.0;
    double theta = 0.0;
};

namespace detail {

inline MuCoefficients mu_on_branch(double theta, double s, bool second_branch) {
    const double xi = second_branch ? std::min(1.0, 2.0 * s * std::cos(theta))
                                    : std::min(1.0, 2.0 * s * std::sin(theta));
    MuCoefficients mu;
    mu.s = s;
    mu.theta = theta;
    if (!second_branch) {
        mu.muEven = std::min(1.0 - s * std::cos(theta), s * std::cos(theta));
        mu.muOdd = std::min(0.5 + 0.5 * xi - s * std::sin(theta), 0.5 - 0.5 * xi + s * std::sin(theta));
    } else {
        mu.muOdd = std::min(1.0 - s * std::sin(theta), s * std::sin(theta));
        mu.muEven = std::min(0.5 + 0.5 * xi - s * std::cos(theta), 0.5 - 0.5 * xi + s * std::cos(theta));
    }
    return mu;
}

} // namespace detail

inline MuCoefficients mu_coefficients(double theta, double s) {
    if (theta < 0.0 || theta > M_PI / 2 + 1e-12) {
        throw std::invalid_argument("mu_coefficients: theta must lie in [0, pi/2]");
    }
    return detail::mu_on_branch(theta, s, theta > M_PI / 4);
}

enum class Side { alice, bob };

struct InequalityCertificate {
    double minEigenvalue = 0.0;
    double argminTheta = 0.0;
};

namespace detail {

// Bloch rotation by pi/4 about y: maps the ideal Alice frame (z, x) onto the
// ideal Bob frame ((z+x)/sqrt2, (x-z)/sqrt2). The Bob-side inequality is the
// Alice-side construction conjugated by this.
inline ComplexMatrix bob_frame_rotation() {
    ComplexMatrix u(2);
    const double c = std::cos(M_PI / 8);
    const double s = std::sin(M_PI / 8);
    u(0, 0) = c;
    u(0, 1) = -s;
    u(1, 0) = s;
    u(1, 1) = c;
    return u;
}

inline double min_eigenvalue_at(Side side, double s_slope, double theta, bool second_branch) {
    const double s_star = robustness_slope();
    const MuCoefficients mu = mu_on_branch(theta, s_star, second_branch);
    double worst = std::numeric_limits<double>::infinity();
    if (side == Side::alice) {
        const ExtractionChannel channel = schedule_channel(theta, s_star, second_branch);
        for (int i = 1; i <= 2; ++i) {
            for (int a = 0; a < 2; ++a) {
                const ComplexMatrix m = k_operator(i, a, channel) -
                                        w_operator(i, a, theta) * cplx(s_slope, 0.0) -
                                        ComplexMatrix::identity(2) *
                                            cplx(i == 1 ? mu.muEven : mu.muOdd, 0.0);
                worst = std::min(worst, eigh(m).eigenvalues.back());
            }
        }
        return worst;
    }
    const ComplexMatrix u = bob_frame_rotation();
    const ExtractionChannel base = schedule_channel(theta, s_star, second_branch);
    const ExtractionChannel channel{theta, base.xi, u * base.axis * u.adjoint()};
    const std::array<BinaryMeasurement, 2> alice_pair{
        BinaryMeasurement::from_observable(
            u * (pauli_z() * cplx(std::cos(theta), 0.0) + pauli_x() * cplx(std::sin(theta), 0.0)) *
            u.adjoint()),
        BinaryMeasurement::from_observable(
            u * (pauli_z() * cplx(std::cos(theta), 0.0) - pauli_x() * cplx(std::sin(theta), 0.0)) *
            u.adjoint())};
    for (int i = 1; i <= 2; ++i) {
        const ComplexMatrix ideal_bob = u * (i == 1 ? pauli_z() : pauli_x()) * u.adjoint();
        for (int b = 0; b < 2; ++b) {
            const ComplexMatrix projector =
                (ComplexMatrix::identity(2) + ideal_bob * cplx(b == 0 ? 1.0 : -1.0, 0.0)) *
                cplx(0.5, 0.0);
            const ComplexMatrix m = channel.adjoint_apply(projector) -
                                    z_operator(i, b, alice_pair) * cplx(s_slope, 0.0) -
                                    ComplexMatrix::identity(2) *
                                        cplx(i == 1 ? mu.muEven : mu.muOdd, 0.0);
            worst = std::min(worst, eigh(m).eigenvalues.back());
        }
    }
    return worst;
}

} // namespace detail

/// Sweeps theta over [0, pi/2] and reports the smallest eigenvalue of
/// K - s W - mu I (Alice side; Z replaces W on the Bob side) across all
/// settings and outcomes. The dephasing schedule and the mu offsets are the
/// fixed construction at slope (1+sqrt2)/2; the s argument is the candidate
/// slope being certified. Both branch definitions are evaluated at the
/// interval boundary pi/4.
inline InequalityCertificate check_operator_inequality(Side side, double s, int thetaGrid) {
    if (thetaGrid < 2) {
        throw std::invalid_argument("check_operator_inequality: grid needs at least 2 points");
    }
    const std::size_t n = static_cast<std::size_t>(thetaGrid);
    std::vector<double> minima(n + 2);
    std::vector<double> thetas(n + 2);
    parallel_for(n, [&](std::size_t k) {
        const double theta = (M_PI / 2) * static_cast<double>(k) / static_cast<double>(n - 1);
        thetas[k] = theta;
        minima[k] = detail::min_eigenvalue_at(side, s, theta, theta > M_PI / 4);
    });
    // interval boundary, both definitions
    thetas[n] = M_PI / 4;
    minima[n] = detail::min_eigenvalue_at(side, s, M_PI / 4, false);
    thetas[n + 1] = M_PI / 4;
    minima[n + 1] = detail::min_eigenvalue_at(side, s, M_PI / 4, true);

    InequalityCertificate cert{minima[0], thetas[0]};
    for (std::size_t k = 1; k < minima.size(); ++k) {
        if (minima[k] < cert.minEigenvalue) {
            cert.minEigenvalue = minima[k];
            cert.argminTheta = thetas[k];
        }
    }
    return cert;
}

/// Affine fidelity floor (1+sqrt2)/8 K4 + (2-sqrt2)/4 for K4 in the quantum
/// range.
inline double fidelity_lower_bound(double k4_value) {
    if (std::abs(k4_value) > 2.0 * std::sqrt(2.0) + 1e-12) {
        throw std::domain_error("fidelity_lower_bound: K4 outside the quantum range");
    }
    return 0.125 * (1.0 + std::sqrt(2.0)) * k4_value + 0.25 * (2.0 - std::sqrt(2.0));
}

/// Uhlmann fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)).
inline double uhlmann_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) {
        throw std::invalid_argument("uhlmann_fidelity: dimension mismatch");
    }
    const ComplexMatrix root = psd_sqrt(rho.matrix());
    const EigenDecomposition d = eigh(root * sigma.matrix() * root);
    double f = 0.0;
    for (double lambda : d.eigenvalues) {
        f += std::sqrt(std::max(lambda, 0.0));
    }
    return f;
}

/// Average fidelity of a (possibly noisy) Alice pair with the ideal settings
/// through an extraction channel: S = 1/4 sum_{i,a} Tr(L[E_a|Ai] P_ideal).
inline double measurement_fidelity(const std::array<BinaryMeasurement, 2>& alice,
                                   const ExtractionChannel& channel) {
    double total = 0.0;
    for (int i = 1; i <= 2; ++i) {
        const ComplexMatrix& axis = i == 1 ? pauli_z() : pauli_x();
        const BinaryMeasurement& m = alice[static_cast<std::size_t>(i - 1)];
        if (m.dim() != 2) {
            throw std::invalid_argument("measurement_fidelity: qubit measurements required");
        }
        for (int a = 0; a < 2; ++a) {
            const ComplexMatrix ideal =
                (ComplexMatrix::identity(2) + axis * cplx(a == 0 ? 1.0 : -1.0, 0.0)) * cplx(0.5, 0.0);
            total += (channel.apply(m.effect(a)) * ideal).trace().real();
        }
    }
    return total / 4.0;
}

inline std::array<BinaryMeasurement, 2> ideal_alice_pair() {
    return {projective_measurement({0, 0, 1}), projective_measurement({1, 0, 0})};
}

struct CurvePoint {
    double phi = 0.0;
    double k4 = 0.0;
    double fidelity = 0.0;
};

/// Parametric curve of K4 and average fidelity under sigma_z dephasing with
/// xi = tan(phi), phi in [0, pi/4]. Each point is checked against an
/// independent channel simulation (dephased A2 effects fed through the
/// sequential pipeline with the planar Bob pair, and the fidelity through
/// measurement_fidelity); the closed forms are returned.
inline std::vector<CurvePoint> dephasing_curve(int numPoints) {
    if (numPoints < 2) {
        throw std::invalid_argument("dephasing_curve: need at least 2 points");
    }
    std::vector<CurvePoint> points(static_cast<std::size_t>(numPoints));
    parallel_for(points.size(), [&](std::size_t k) {
        const double phi =
            (M_PI / 4) * static_cast<double>(k) / static_cast<double>(numPoints - 1);
        const double xi = std::tan(phi);
        const double closed_k4 = 2.0 * std::sqrt(1.0 + xi * xi);
        const double closed_f = 0.25 * (3.0 + xi);

        const ComplexMatrix id = ComplexMatrix::identity(2);
        const BinaryMeasurement dephased_a2((id + pauli_x() * cplx(xi, 0.0)) * cplx(0.5, 0.0),
                                            (id - pauli_x() * cplx(xi, 0.0)) * cplx(0.5, 0.0));
        const Scenario s(DensityMatrix::maximally_mixed(2),
                         {projective_measurement({0, 0, 1}), dephased_a2},
                         {projective_measurement({std::sin(phi), 0, std::cos(phi)}),
                          projective_measurement({std::sin(phi), 0, -std::cos(phi)})});
        const double simulated_k4 = k4(s);
        const double simulated_f =
            measurement_fidelity(ideal_alice_pair(), dephasing_channel(xi, pauli_z(), phi));
        if (std::abs(simulated_k4 - closed_k4) > 1e-9 || std::abs(simulated_f - closed_f) > 1e-9) {
            throw invariant_error("dephasing_curve: simulation disagrees with the closed forms");
        }
        points[k] = CurvePoint{phi, closed_k4, closed_f};
    });
    return points;
}

} // namespace lgst
