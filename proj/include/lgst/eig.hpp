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

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "lgst/matrix.hpp"

namespace lgst {

/// Eigenvalues in descending order; eigenvectors are the matching columns.
struct EigenDecomposition {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;
};

namespace detail {

// Closed-form decomposition of a 2x2 Hermitian matrix through its Pauli
// components M = alpha*I + v.sigma.
inline EigenDecomposition eigh_2x2(const ComplexMatrix& m) {
    const double alpha = 0.5 * (m(0, 0).real() + m(1, 1).real());
    const double vz = 0.5 * (m(0, 0).real() - m(1, 1).real());
    const double vx = m(0, 1).real();
    const double vy = -m(0, 1).imag();
    const double r = std::sqrt(vx * vx + vy * vy + vz * vz);

    EigenDecomposition d;
    d.eigenvalues = {alpha + r, alpha - r};
    d.eigenvectors = ComplexMatrix::identity(2);
    if (r < 1e-300) {
        return d; // multiple of the identity; any basis works
    }
    cplx u0;
    cplx u1;
    if (vz >= 0.0) {
        u0 = cplx(r + vz, 0.0);
        u1 = cplx(vx, vy);
    } else {
        u0 = cplx(vx, -vy);
        u1 = cplx(r - vz, 0.0);
    }
    const double n = std::sqrt(std::norm(u0) + std::norm(u1));
    u0 /= n;
    u1 /= n;
    d.eigenvectors(0, 0) = u0;
    d.eigenvectors(1, 0) = u1;
    // orthogonal partner for the - eigenvalue
    d.eigenvectors(0, 1) = -std::conj(u1);
    d.eigenvectors(1, 1) = std::conj(u0);
    return d;
}

inline double off_diagonal_norm(const ComplexMatrix& a) {
    double s = 0.0;
    const std::size_t n = a.dim();
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
            s += 2.0 * std::norm(a(p, q));
        }
    }
    return std::sqrt(s);
}

// Cyclic Jacobi sweeps with complex rotations.
inline EigenDecomposition eigh_jacobi(ComplexMatrix a, double off_tol) {
    const std::size_t n = a.dim();
    ComplexMatrix v = ComplexMatrix::identity(n);
    const double scale = std::max(1.0, a.frobenius_norm());
    constexpr int kMaxSweeps = 64;

    int sweep = 0;
    while (off_diagonal_norm(a) > off_tol * scale) {
        if (++sweep > kMaxSweeps) {
            throw std::runtime_error("eigh: jacobi iteration did not converge");
        }
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double abs_apq = std::abs(apq);
                if (abs_apq < 1e-300) {
                    continue;
                }
                const cplx phase = apq / abs_apq;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * abs_apq);
                // small-magnitude root of t^2 - 2 tau t - 1 = 0
                const double t =
                    (tau >= 0.0 ? -1.0 : 1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx up_q = -s * phase; // U(p,q)
                const cplx uq_p = s * std::conj(phase); // U(q,p)

                // columns: A <- A U, V <- V U
                for (std::size_t i = 0; i < n; ++i) {
                    const cplx aip = a(i, p);
                    const cplx aiq = a(i, q);
                    a(i, p) = aip * c + aiq * uq_p;
                    a(i, q) = aip * up_q + aiq * c;
                    const cplx vip = v(i, p);
                    const cplx viq = v(i, q);
                    v(i, p) = vip * c + viq * uq_p;
                    v(i, q) = vip * up_q + viq * c;
                }
                // rows: A <- U^dag A
                for (std::size_t j = 0; j < n; ++j) {
                    const cplx apj = a(p, j);
                    const cplx aqj = a(q, j);
                    a(p, j) = apj * c + aqj * std::conj(uq_p);
                    a(q, j) = apj * std::conj(up_q) + aqj * c;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
        }
    }

    EigenDecomposition d;
    d.eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        d.eigenvalues[i] = a(i, i).real();
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return d.eigenvalues[i] > d.eigenvalues[j];
    });
    EigenDecomposition sorted;
    sorted.eigenvalues.resize(n);
    sorted.eigenvectors = ComplexMatrix(n);
    for (std::size_t k = 0; k < n; ++k) {
        sorted.eigenvalues[k] = d.eigenvalues[order[k]];
        for (std::size_t i = 0; i < n; ++i) {
            sorted.eigenvectors(i, k) = v(i, order[k]);
        }
    }
    return sorted;
}

} // namespace detail

/// Hermitian eigendecomposition. 2x2 inputs use the closed-form Pauli
/// decomposition; larger dimensions run cyclic Jacobi sweeps until the
/// off-diagonal norm drops below off_tol (relative to the matrix scale).
inline EigenDecomposition eigh(const ComplexMatrix& m, double off_tol = 1e-13) {
    if (!m.square()) {
        throw std::invalid_argument("eigh: matrix is not square");
    }
    if (!m.is_hermitian(1e-10 * std::max(1.0, m.max_abs()))) {
        throw std::invalid_argument("eigh: matrix is not hermitian");
    }
    if (m.dim() == 1) {
        EigenDecomposition d;
        d.eigenvalues = {m(0, 0).real()};
        d.eigenvectors = ComplexMatrix::identity(1);
        return d;
    }
    // work on the hermitized matrix so tiny asymmetries cannot accumulate
    ComplexMatrix h = m;
    for (std::size_t i = 0; i < m.dim(); ++i) {
        for (std::size_t j = 0; j < m.dim(); ++j) {
            h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
        }
    }
    if (m.dim() == 2) {
        return detail::eigh_2x2(h);
    }
    return detail::eigh_jacobi(std::move(h), off_tol);
}

/// Rebuild sum_k f(lambda_k) |v_k><v_k| from a decomposition.
inline ComplexMatrix recompose(const EigenDecomposition& d, const std::vector<double>& values) {
    const std::size_t n = d.eigenvalues.size();
    ComplexMatrix m(n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            const cplx vik = d.eigenvectors(i, k) * values[k];
            if (vik == cplx(0.0, 0.0)) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                m(i, j) += vik * std::conj(d.eigenvectors(j, k));
            }
        }
    }
    return m;
}

/// Hermitian PSD square root. Eigenvalues in [-1e-10, 0) are clamped to 0;
/// anything more negative is rejected.
inline ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
    EigenDecomposition d;
    try {
        d = eigh(m);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("psd_sqrt: input is not a hermitian operator");
    }
    std::vector<double> roots(d.eigenvalues.size());
    for (std::size_t k = 0; k < d.eigenvalues.size(); ++k) {
        double lambda = d.eigenvalues[k];
        if (lambda < -1e-10) {
            throw std::invalid_argument("psd_sqrt: operator has a significantly negative eigenvalue");
        }
        roots[k] = std::sqrt(std::max(lambda, 0.0));
    }
    return recompose(d, roots);
}

/// Dichotomic observable with the same eigenbasis: eigenvalues replaced by
/// their signs (zero maps to +1).
inline ComplexMatrix sign_observable(const ComplexMatrix& m) {
    const EigenDecomposition d = eigh(m);
    std::vector<double> signs(d.eigenvalues.size());
    for (std::size_t k = 0; k < signs.size(); ++k) {
        signs[k] = d.eigenvalues[k] >= 0.0 ? 1.0 : -1.0;
    }
    return recompose(d, signs);
}

} // namespace lgst
