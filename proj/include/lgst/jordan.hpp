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

#include <cstdint>
#include <random>
#include <vector>

#include "lgst/parallel.hpp"
#include "lgst/seqstats.hpp"

namespace lgst {

/// The four ideal 2x2 observables A1, A2, B1, B2 in block (qubit) form.
inline std::array<ComplexMatrix, 4> ideal_qubit_observables() {
    const cplx r(1.0 / std::sqrt(2.0), 0.0);
    return {pauli_z(), pauli_x(), (pauli_x() + pauli_z()) * r, (pauli_x() - pauli_z()) * r};
}

/// Block-diagonal scenario: weights p_m, per-block 2x2 dichotomic observables
/// for both parties, and per-block qubit states. The full-space objects are
/// the direct sums weighted by p_m.
struct BlockScenario {
    BlockScenario(std::vector<double> blockWeights,
                  std::vector<std::array<ComplexMatrix, 2>> alice,
                  std::vector<std::array<ComplexMatrix, 2>> bob, std::vector<DensityMatrix> states)
        : weights(std::move(blockWeights)), aliceBlocks(std::move(alice)),
          bobBlocks(std::move(bob)), blockStates(std::move(states)) {
        const std::size_t m = weights.size();
        if (m == 0 || aliceBlocks.size() != m || bobBlocks.size() != m || blockStates.size() != m) {
            throw std::invalid_argument("block scenario: inconsistent block counts");
        }
        double sum = 0.0;
        for (double w : weights) {
            if (w < -1e-12) {
                throw std::invalid_argument("block scenario: negative weight");
            }
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-12) {
            throw std::invalid_argument("block scenario: weights must sum to 1");
        }
        const auto check_block = [](const ComplexMatrix& m2) {
            if (m2.dim() != 2 || !m2.is_hermitian(1e-10) ||
                max_abs_diff(m2 * m2, ComplexMatrix::identity(2)) > 1e-10) {
                throw std::invalid_argument("block scenario: blocks must be 2x2 +/-1 observables");
            }
        };
        for (std::size_t k = 0; k < m; ++k) {
            check_block(aliceBlocks[k][0]);
            check_block(aliceBlocks[k][1]);
            check_block(bobBlocks[k][0]);
            check_block(bobBlocks[k][1]);
            if (blockStates[k].dim() != 2) {
                throw std::invalid_argument("block scenario: block states must be qubits");
            }
        }
    }

    std::size_t num_blocks() const { return weights.size(); }
    std::size_t dim() const { return 2 * weights.size(); }

    std::vector<double> weights;
    std::vector<std::array<ComplexMatrix, 2>> aliceBlocks;
    std::vector<std::array<ComplexMatrix, 2>> bobBlocks;
    std::vector<DensityMatrix> blockStates;
};

/// The canonical scenario of the block self-test: every block carries the
/// ideal settings, states are maximally mixed.
inline BlockScenario ideal_block_scenario(std::size_t numBlocks, const std::vector<double>& weights) {
    if (weights.size() != numBlocks) {
        throw std::invalid_argument("ideal_block_scenario: weight count mismatch");
    }
    const auto ideal = ideal_qubit_observables();
    std::vector<std::array<ComplexMatrix, 2>> alice(numBlocks, {ideal[0], ideal[1]});
    std::vector<std::array<ComplexMatrix, 2>> bob(numBlocks, {ideal[2], ideal[3]});
    std::vector<DensityMatrix> states(numBlocks, DensityMatrix::maximally_mixed(2));
    return BlockScenario(weights, std::move(alice), std::move(bob), std::move(states));
}

/// Assemble the direct-sum scenario on dimension 2M.
inline Scenario to_scenario(const BlockScenario& bs) {
    const std::size_t m = bs.num_blocks();
    std::vector<ComplexMatrix> a1(m);
    std::vector<ComplexMatrix> a2(m);
    std::vector<ComplexMatrix> b1(m);
    std::vector<ComplexMatrix> b2(m);
    std::vector<ComplexMatrix> rho(m);
    for (std::size_t k = 0; k < m; ++k) {
        a1[k] = bs.aliceBlocks[k][0];
        a2[k] = bs.aliceBlocks[k][1];
        b1[k] = bs.bobBlocks[k][0];
        b2[k] = bs.bobBlocks[k][1];
        rho[k] = bs.blockStates[k].matrix() * cplx(bs.weights[k], 0.0);
    }
    return Scenario(DensityMatrix(direct_sum(rho)),
                    {BinaryMeasurement::from_observable(direct_sum(a1)),
                     BinaryMeasurement::from_observable(direct_sum(a2))},
                    {BinaryMeasurement::from_observable(direct_sum(b1)),
                     BinaryMeasurement::from_observable(direct_sum(b2))});
}

/// K4 of a block scenario, computed both through the weighted per-block
/// correlator sum and through the full direct-sum pipeline. The two routes
/// must agree within 1e-10; the direct-sum value is returned.
inline double block_k4(const BlockScenario& bs) {
    double weighted = 0.0;
    for (std::size_t m = 0; m < bs.num_blocks(); ++m) {
        const Scenario block(bs.blockStates[m],
                             {BinaryMeasurement::from_observable(bs.aliceBlocks[m][0]),
                              BinaryMeasurement::from_observable(bs.aliceBlocks[m][1])},
                             {BinaryMeasurement::from_observable(bs.bobBlocks[m][0]),
                              BinaryMeasurement::from_observable(bs.bobBlocks[m][1])});
        weighted += bs.weights[m] * k4(block);
    }
    const double full = k4(to_scenario(bs));
    if (std::abs(weighted - full) > 1e-10) {
        throw invariant_error("block_k4: weighted and direct-sum routes disagree");
    }
    return full;
}

/// The ancilla-assisted basis map |2m> -> |0>|2m>, |2m+1> -> |1>|2m>,
/// stored as the (2d) x d matrix with orthonormal 0/1 columns (the ancilla
/// qubit prepared in |0> is folded into the column restriction). Output
/// indices are qubit-major: row q*d + j.
struct IsometryMap {
    std::size_t inputDim = 0;
    ComplexMatrix map;

    ComplexMatrix conjugate(const ComplexMatrix& m) const { return map * m * map.adjoint(); }
};

inline IsometryMap build_isometry(std::size_t d) {
    if (d < 2 || d % 2 != 0) {
        throw std::invalid_argument("build_isometry: dimension must be even and at least 2");
    }
    IsometryMap phi;
    phi.inputDim = d;
    phi.map = ComplexMatrix(2 * d, d);
    for (std::size_t m = 0; m < d / 2; ++m) {
        phi.map(0 * d + 2 * m, 2 * m) = 1.0;
        phi.map(1 * d + 2 * m, 2 * m + 1) = 1.0;
    }
    return phi;
}

/// Trace over the leading qubit factor of a (2d) x (2d) matrix.
inline ComplexMatrix partial_trace_qubit(const ComplexMatrix& m, std::size_t d) {
    ComplexMatrix out(d);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t jp = 0; jp < d; ++jp) {
            out(j, jp) = m(j, jp) + m(d + j, d + jp);
        }
    }
    return out;
}

struct ExtractionVerdict {
    double residualNorm = 0.0;
    DensityMatrix junkState;
    bool pass = false;
};

/// Checks the defining identity of the measurement self-test: the isometry
/// image of B_j applied to Alice's post-measurement state must equal the
/// ideal qubit object tensored with the junk state sum_m p_m |2m><2m|.
/// Requires the scenario in the canonical basis (every A1 block = sigma_z).
inline ExtractionVerdict verify_extraction(const BlockScenario& bs, int i, int a, int j,
                                           double tolerance) {
    if (i < 1 || i > 2 || j < 1 || j > 2 || (a & ~1) != 0) {
        throw std::invalid_argument("verify_extraction: bad indices");
    }
    for (const auto& blocks : bs.aliceBlocks) {
        if (max_abs_diff(blocks[0], pauli_z()) > 1e-8) {
            throw std::invalid_argument(
                "verify_extraction: scenario not in the canonical basis (conjugate first)");
        }
    }
    const std::size_t d = bs.dim();
    const Scenario full = to_scenario(bs);
    const auto [p, post] =
        luders_update(full.state, full.alice[static_cast<std::size_t>(i - 1)].effect(a));
    (void)p;

    const IsometryMap phi = build_isometry(d);
    const ComplexMatrix bj = full.bob[static_cast<std::size_t>(j - 1)].observable();
    const ComplexMatrix left = phi.conjugate(bj * post.matrix());

    const auto ideal = ideal_qubit_observables();
    ComplexMatrix psi(2, 1);
    if (i == 1) {
        psi(static_cast<std::size_t>(a), 0) = 1.0;
    } else {
        const double r = 1.0 / std::sqrt(2.0);
        psi(0, 0) = r;
        psi(1, 0) = a == 0 ? r : -r;
    }
    const ComplexMatrix qubit_part =
        ideal[static_cast<std::size_t>(1 + j)] * (psi * psi.adjoint());
    ComplexMatrix junk(d);
    for (std::size_t m = 0; m < bs.num_blocks(); ++m) {
        junk(2 * m, 2 * m) = bs.weights[m];
    }
    const ComplexMatrix right = kron(qubit_part, junk);

    ExtractionVerdict v{(left - right).frobenius_norm(),
                        DensityMatrix(partial_trace_qubit(phi.conjugate(post.matrix()), d)), false};
    v.pass = v.residualNorm <= tolerance;
    return v;
}

/// Largest entry outside the 2x2 diagonal blocks.
inline double off_block_mass(const ComplexMatrix& m) {
    double mass = 0.0;
    for (std::size_t i = 0; i < m.dim(); ++i) {
        for (std::size_t j = 0; j < m.dim(); ++j) {
            if (i / 2 != j / 2) {
                mass = std::max(mass, std::abs(m(i, j)));
            }
        }
    }
    return mass;
}

/// Conjugates a scenario into the basis where A1 = diag(+1,-1,+1,-1,...) and
/// the +/- eigenvectors are paired through A2's off-diagonal action (singular
/// vectors of the coupling block, largest singular value first, ties kept in
/// decomposition order). Returns the canonical scenario and the unitary U
/// such that canonical = U^dag original U.
inline std::pair<Scenario, ComplexMatrix> canonicalize_basis(const Scenario& s) {
    if (!s.alice[0].projective()) {
        throw std::invalid_argument("canonicalize_basis: A1 is not projective");
    }
    const ComplexMatrix a1 = s.alice[0].observable();
    const std::size_t d = a1.dim();
    const EigenDecomposition dec = eigh(a1);
    std::size_t plus = 0;
    for (double lambda : dec.eigenvalues) {
        if (lambda > 0.0) {
            ++plus;
        }
    }
    if (2 * plus != d) {
        throw std::invalid_argument(
            "canonicalize_basis: A1 eigenspaces cannot be paired (unequal dimensions)");
    }
    const std::size_t m = plus;

    ComplexMatrix up(d, m);
    ComplexMatrix um(d, m);
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t r = 0; r < d; ++r) {
            up(r, k) = dec.eigenvectors(r, k);
            um(r, k) = dec.eigenvectors(r, m + k);
        }
    }

    const ComplexMatrix a2 = s.alice[1].observable();
    const ComplexMatrix y = up.adjoint() * a2 * um;
    const EigenDecomposition svd = eigh(y.adjoint() * y); // descending sigma^2
    ComplexMatrix ucoef(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double sigma = std::sqrt(std::max(svd.eigenvalues[k], 0.0));
        if (sigma > 1e-8) {
            for (std::size_t r = 0; r < m; ++r) {
                cplx acc(0.0, 0.0);
                for (std::size_t c = 0; c < m; ++c) {
                    acc += y(r, c) * svd.eigenvectors(c, k);
                }
                ucoef(r, k) = acc / sigma;
            }
        } else {
            // A2 has no coupling along this pair: complete the basis with the
            // first coordinate direction not yet represented.
            for (std::size_t cand = 0; cand < m; ++cand) {
                std::vector<cplx> e(m, cplx(0.0, 0.0));
                e[cand] = 1.0;
                for (std::size_t prev = 0; prev < k; ++prev) {
                    cplx overlap(0.0, 0.0);
                    for (std::size_t r = 0; r < m; ++r) {
                        overlap += std::conj(ucoef(r, prev)) * e[r];
                    }
                    for (std::size_t r = 0; r < m; ++r) {
                        e[r] -= overlap * ucoef(r, prev);
                    }
                }
                double n2 = 0.0;
                for (const auto& v : e) {
                    n2 += std::norm(v);
                }
                if (n2 > 0.25) {
                    const double inv = 1.0 / std::sqrt(n2);
                    for (std::size_t r = 0; r < m; ++r) {
                        ucoef(r, k) = e[r] * inv;
                    }
                    break;
                }
            }
        }
    }

    ComplexMatrix u(d);
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t r = 0; r < d; ++r) {
            cplx colu(0.0, 0.0);
            cplx colv(0.0, 0.0);
            for (std::size_t c = 0; c < m; ++c) {
                colu += up(r, c) * ucoef(c, k);
                colv += um(r, c) * svd.eigenvectors(c, k);
            }
            u(r, 2 * k) = colu;
            u(r, 2 * k + 1) = colv;
        }
    }

    const auto conj_meas = [&u](const BinaryMeasurement& meas) {
        return BinaryMeasurement(u.adjoint() * meas.effect(0) * u,
                                 u.adjoint() * meas.effect(1) * u);
    };
    Scenario canonical(DensityMatrix(u.adjoint() * s.state.matrix() * u),
                       {conj_meas(s.alice[0]), conj_meas(s.alice[1])},
                       {conj_meas(s.bob[0]), conj_meas(s.bob[1])});
    return {std::move(canonical), std::move(u)};
}

struct ProjectiveOptimum {
    double bestK4 = 0.0;
    std::array<ComplexMatrix, 4> observables; // A1, A2, B1, B2
    int iterations = 0;
};

/// Maximizes K4 over arbitrary dichotomic observables in dimension d with the
/// maximally mixed input, by alternating closed-form ascent: for the mixed
/// state K4 = [Tr A1(B1-B2) + Tr A2(B1+B2)]/d, so each side's optimum given
/// the other is the sign-observable of the corresponding sum. Starts are
/// seeded random Hermitian sign patterns, which imposes no block structure
/// and samples every eigenvalue-multiplicity sector.
inline ProjectiveOptimum maximize_k4_projective(std::size_t d, int numStarts, std::uint64_t seed,
                                                int maxIterations = 200) {
    if (d < 2 || numStarts < 1) {
        throw std::invalid_argument("maximize_k4_projective: bad arguments");
    }
    const auto value_of = [d](const std::array<ComplexMatrix, 4>& o) {
        return ((o[0] * o[2]).trace().real() + (o[1] * o[2]).trace().real() +
                (o[1] * o[3]).trace().real() - (o[0] * o[3]).trace().real()) /
               static_cast<double>(d);
    };

    std::vector<ProjectiveOptimum> outcomes(static_cast<std::size_t>(numStarts));
    parallel_for(static_cast<std::size_t>(numStarts), [&](std::size_t start) {
        std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * (start + 1));
        std::normal_distribution<double> dist(0.0, 1.0);
        const auto random_observable = [&] {
            ComplexMatrix h(d);
            for (std::size_t i = 0; i < d; ++i) {
                h(i, i) = dist(rng);
                for (std::size_t j = i + 1; j < d; ++j) {
                    const cplx v(dist(rng), dist(rng));
                    h(i, j) = v;
                    h(j, i) = std::conj(v);
                }
            }
            return sign_observable(h);
        };
        std::array<ComplexMatrix, 4> o{random_observable(), random_observable(),
                                       random_observable(), random_observable()};
        double previous = -10.0;
        int it = 0;
        for (; it < maxIterations; ++it) {
            o[0] = sign_observable(o[2] - o[3]);
            o[1] = sign_observable(o[2] + o[3]);
            o[2] = sign_observable(o[0] + o[1]);
            o[3] = sign_observable(o[1] - o[0]);
            const double v = value_of(o);
            if (std::abs(v - previous) < 1e-15) {
                break;
            }
            previous = v;
        }
        outcomes[start] = ProjectiveOptimum{value_of(o), std::move(o), it};
    });

    std::size_t best = 0;
    int total = 0;
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
        total += outcomes[k].iterations;
        if (outcomes[k].bestK4 > outcomes[best].bestK4) {
            best = k;
        }
    }
    ProjectiveOptimum result = outcomes[best];
    result.iterations = total;
    return result;
}

} // namespace lgst
