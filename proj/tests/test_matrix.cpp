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

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "lgst/eig.hpp"
#include "lgst/matrix.hpp"
#include "lgst/qcore.hpp"

using namespace lgst;

namespace {

ComplexMatrix random_hermitian(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = dist(rng);
        for (std::size_t j = i + 1; j < n; ++j) {
            const cplx v(dist(rng), dist(rng));
            m(i, j) = v;
            m(j, i) = std::conj(v);
        }
    }
    return m;
}

ComplexMatrix random_psd(std::size_t n, std::mt19937_64& rng) {
    const ComplexMatrix h = random_hermitian(n, rng);
    return h * h.adjoint();
}

} // namespace

TEST_CASE("direct sum stacks blocks in order") {
    const ComplexMatrix two_z = direct_sum({pauli_z(), pauli_z()});
    REQUIRE(two_z.dim() == 4);
    CHECK(two_z(0, 0) == cplx(1.0, 0.0));
    CHECK(two_z(1, 1) == cplx(-1.0, 0.0));
    CHECK(two_z(2, 2) == cplx(1.0, 0.0));
    CHECK(two_z(3, 3) == cplx(-1.0, 0.0));
    CHECK(two_z.frobenius_norm() == Catch::Approx(2.0));

    CHECK(max_abs_diff(direct_sum({pauli_x()}), pauli_x()) == 0.0);

    const ComplexMatrix zx = direct_sum({pauli_z(), pauli_x()});
    CHECK(zx(0, 0) == cplx(1.0, 0.0));
    CHECK(zx(1, 1) == cplx(-1.0, 0.0));
    CHECK(zx(2, 3) == cplx(1.0, 0.0));
    CHECK(zx(3, 2) == cplx(1.0, 0.0));
    CHECK(zx(2, 2) == cplx(0.0, 0.0));
    CHECK(zx(0, 2) == cplx(0.0, 0.0));

    CHECK_THROWS_AS(direct_sum(std::vector<ComplexMatrix>{}), std::invalid_argument);
}

TEST_CASE("kron of paulis") {
    const ComplexMatrix zx = kron(pauli_z(), pauli_x());
    CHECK(zx(0, 1) == cplx(1.0, 0.0));
    CHECK(zx(1, 0) == cplx(1.0, 0.0));
    CHECK(zx(2, 3) == cplx(-1.0, 0.0));
    CHECK(zx(3, 2) == cplx(-1.0, 0.0));
    CHECK(kron(ComplexMatrix::identity(2), ComplexMatrix::identity(3)).trace() == cplx(6.0, 0.0));
}

TEST_CASE("eigh solves random hermitian matrices") {
    std::mt19937_64 rng(42);
    for (std::size_t n : {2u, 3u, 4u, 8u, 16u}) {
        for (int rep = 0; rep < 20; ++rep) {
            const ComplexMatrix m = random_hermitian(n, rng);
            const EigenDecomposition d = eigh(m);
            REQUIRE(d.eigenvalues.size() == n);
            // descending order
            for (std::size_t k = 1; k < n; ++k) {
                CHECK(d.eigenvalues[k - 1] >= d.eigenvalues[k]);
            }
            // orthonormal columns
            CHECK(max_abs_diff(d.eigenvectors.adjoint() * d.eigenvectors,
                               ComplexMatrix::identity(n)) < 1e-12);
            // reconstruction
            CHECK(max_abs_diff(recompose(d, d.eigenvalues), m) < 1e-11);
        }
    }
}

TEST_CASE("eigh rejects non-hermitian input") {
    ComplexMatrix m(2);
    m(0, 1) = cplx(1.0, 0.0);
    CHECK_THROWS_AS(eigh(m), std::invalid_argument);
}

TEST_CASE("psd_sqrt on the stated cases") {
    const ComplexMatrix half = ComplexMatrix::identity(2) * cplx(0.5, 0.0);
    CHECK(max_abs_diff(psd_sqrt(half), ComplexMatrix::identity(2) * cplx(1.0 / std::sqrt(2.0), 0.0)) <
          1e-14);

    // projectors are idempotent
    const ComplexMatrix p = (ComplexMatrix::identity(2) + pauli_x()) * cplx(0.5, 0.0);
    CHECK(max_abs_diff(psd_sqrt(p), p) < 1e-14);

    ComplexMatrix diag(2);
    diag(0, 0) = 0.64;
    diag(1, 1) = 0.25;
    ComplexMatrix expected(2);
    expected(0, 0) = 0.8;
    expected(1, 1) = 0.5;
    CHECK(max_abs_diff(psd_sqrt(diag), expected) < 1e-14);
}

TEST_CASE("psd_sqrt squares back to the input") {
    std::mt19937_64 rng(7);
    for (std::size_t n : {2u, 4u}) {
        for (int rep = 0; rep < 50; ++rep) {
            const ComplexMatrix m = random_psd(n, rng);
            const ComplexMatrix s = psd_sqrt(m);
            CHECK(s.is_hermitian(1e-10));
            CHECK(max_abs_diff(s * s, m) < 1e-10 * std::max(1.0, m.max_abs()));
        }
    }
}

TEST_CASE("psd_sqrt rejects bad operators") {
    CHECK_THROWS_AS(psd_sqrt(-ComplexMatrix::identity(2)), std::invalid_argument);
    ComplexMatrix m(2);
    m(0, 1) = cplx(0.0, 3.0);
    m(1, 0) = cplx(0.0, 3.0); // not hermitian: conj mismatch
    CHECK_THROWS_AS(psd_sqrt(m), std::invalid_argument);
}

TEST_CASE("sign_observable squares to the identity") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        const ComplexMatrix m = random_hermitian(4, rng);
        const ComplexMatrix s = sign_observable(m);
        CHECK(max_abs_diff(s * s, ComplexMatrix::identity(4)) < 1e-12);
        CHECK(s.is_hermitian(1e-12));
    }
}
