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

#include <cmath>
#include <random>

#include "lgst/classical.hpp"
#include "lgst/seqstats.hpp"

using namespace lgst;

namespace {

const double kSqrt2 = std::sqrt(2.0);
const double kMaxK4 = 2.0 * kSqrt2;

std::mt19937_64 rng(2024);

BlochVector random_unit() {
    std::normal_distribution<double> dist(0.0, 1.0);
    BlochVector v{dist(rng), dist(rng), dist(rng)};
    const double n = v.norm();
    return {v.x / n, v.y / n, v.z / n};
}

BlochVector random_state_vector() {
    std::uniform_real_distribution<double> radius(0.0, 1.0);
    const BlochVector u = random_unit();
    const double r = radius(rng);
    return {r * u.x, r * u.y, r * u.z};
}

Scenario random_projective_scenario(const BlochVector& n) {
    return Scenario(bloch_to_density(n),
                    {projective_measurement(random_unit()), projective_measurement(random_unit())},
                    {projective_measurement(random_unit()), projective_measurement(random_unit())});
}

// closed form for projective qubit scenarios:
// P(a,b) = 1/4 (1 + (-1)^a a_i.n)(1 + (-1)^(a+b) a_i.b_j)
double closed_form_joint(const BlochVector& n, const BlochVector& ai, const BlochVector& bj, int a,
                         int b) {
    const double sa = a == 0 ? 1.0 : -1.0;
    const double sab = ((a + b) % 2) == 0 ? 1.0 : -1.0;
    return 0.25 * (1.0 + sa * ai.dot(n)) * (1.0 + sab * ai.dot(bj));
}

} // namespace

TEST_CASE("joint probabilities at the ideal settings") {
    const Scenario s = ideal_scenario();
    CHECK(joint_probability(s, 1, 1, 0, 0) == Catch::Approx(0.25 * (1.0 + 1.0 / kSqrt2)));

    const Scenario s2(bloch_to_density({0, 0, 1}),
                      {projective_measurement({0, 0, 1}), projective_measurement({0, 0, 1})},
                      {projective_measurement({1, 0, 0}), projective_measurement({1, 0, 0})});
    CHECK(joint_probability(s2, 1, 1, 0, 0) == Catch::Approx(0.5));

    // normalization over outcomes for every pair of settings
    for (int i = 1; i <= 2; ++i) {
        for (int j = 1; j <= 2; ++j) {
            double total = 0.0;
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    total += joint_probability(s, i, j, a, b);
                }
            }
            CHECK(total == Catch::Approx(1.0).margin(1e-12));
        }
    }

    CHECK_THROWS_AS(joint_probability(s, 0, 1, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(joint_probability(s, 1, 3, 0, 0), std::invalid_argument);
}

TEST_CASE("correlators") {
    const Scenario repeated(DensityMatrix::maximally_mixed(2),
                            {projective_measurement({0, 0, 1}), projective_measurement({0, 0, 1})},
                            {projective_measurement({0, 0, 1}), projective_measurement({0, 0, 1})});
    CHECK(correlator(repeated, 1, 1) == Catch::Approx(1.0));

    const double r = 1.0 / kSqrt2;
    const Scenario tilted(bloch_to_density(random_state_vector()),
                          {projective_measurement({0, 0, 1}), projective_measurement({0, 0, 1})},
                          {projective_measurement({r, 0, r}), projective_measurement({r, 0, r})});
    CHECK(correlator(tilted, 1, 1) == Catch::Approx(r));

    const Scenario unsharp(DensityMatrix::maximally_mixed(2),
                           {biased_effect_pair({0, 0, 1}, 0.5, 0.0),
                            biased_effect_pair({0, 0, 1}, 0.5, 0.0)},
                           {projective_measurement({0, 0, 1}), projective_measurement({0, 0, 1})});
    CHECK(correlator(unsharp, 1, 1) == Catch::Approx(0.5));
}

TEST_CASE("k4 reaches 2 sqrt 2 at the ideal settings for any input") {
    for (int rep = 0; rep < 100; ++rep) {
        const Scenario s = ideal_scenario(bloch_to_density(random_state_vector()));
        CHECK(k4(s) == Catch::Approx(kMaxK4).margin(1e-12));
    }
}

TEST_CASE("k4 of the all-sigma-z scenario is 2") {
    const BinaryMeasurement mz = projective_measurement({0, 0, 1});
    const Scenario s(DensityMatrix::maximally_mixed(2), {mz, mz}, {mz, mz});
    CHECK(k4(s) == Catch::Approx(2.0));
}

TEST_CASE("k4 under dephased A2 with the planar Bob pair") {
    // A2 dephased to xi*sigma_x with xi = tan(phi); Bob pair through the
    // maximal-violation settings at phi = pi/4.
    for (double phi : {0.0, 0.3, M_PI / 8, M_PI / 4}) {
        const double xi = std::tan(phi);
        const ComplexMatrix id = ComplexMatrix::identity(2);
        const BinaryMeasurement a2((id + pauli_x() * cplx(xi, 0.0)) * cplx(0.5, 0.0),
                                   (id - pauli_x() * cplx(xi, 0.0)) * cplx(0.5, 0.0));
        const Scenario s(DensityMatrix::maximally_mixed(2),
                         {projective_measurement({0, 0, 1}), a2},
                         {projective_measurement({std::sin(phi), 0, std::cos(phi)}),
                          projective_measurement({std::sin(phi), 0, -std::cos(phi)})});
        CHECK(k4(s) == Catch::Approx(2.0 * std::sqrt(1.0 + xi * xi)).margin(1e-12));
    }
}

TEST_CASE("nsit deviation") {
    CHECK(nsit_deviation(ideal_scenario()) == Catch::Approx(0.0).margin(1e-13));

    const Scenario tilted_input = ideal_scenario(bloch_to_density({1, 0, 0}));
    CHECK(nsit_deviation(tilted_input) == Catch::Approx(0.5 / kSqrt2));

    const BinaryMeasurement mz = projective_measurement({0, 0, 1});
    const Scenario repeated(bloch_to_density(random_state_vector()), {mz, mz}, {mz, mz});
    CHECK(nsit_deviation(repeated) == Catch::Approx(0.0).margin(1e-13));
}

TEST_CASE("predictability deviation") {
    CHECK(predictability_deviation(ideal_scenario()) ==
          Catch::Approx(0.25 * (1.0 + 1.0 / kSqrt2)));

    const BinaryMeasurement mz = projective_measurement({0, 0, 1});
    const Scenario det(bloch_to_density({0, 0, 1}), {mz, mz}, {mz, mz});
    CHECK(predictability_deviation(det) == Catch::Approx(0.0).margin(1e-13));

    for (int rep = 0; rep < 20; ++rep) {
        const double dev = predictability_deviation(random_projective_scenario(random_state_vector()));
        CHECK(dev >= 0.0);
        CHECK(dev <= 0.5);
    }
}

TEST_CASE("scenarios must live on one hilbert space") {
    const auto ideal4 = [] {
        return BinaryMeasurement::from_observable(direct_sum({pauli_z(), pauli_z()}));
    };
    CHECK_THROWS_AS(Scenario(DensityMatrix::maximally_mixed(2),
                             {projective_measurement({0, 0, 1}), projective_measurement({1, 0, 0})},
                             {ideal4(), ideal4()}),
                    std::invalid_argument);
}

TEST_CASE("full report ties the pieces together") {
    const CorrelationReport r = full_report(ideal_scenario());
    CHECK(r.k4 == Catch::Approx(kMaxK4).margin(1e-12));
    CHECK(r.nsitDeviation == Catch::Approx(0.0).margin(1e-13));
    CHECK(r.predictabilityDeviation > 0.0);
    CHECK(nsit_satisfied(r));
    CHECK(maximally_violating(r));
    CHECK(r.k4 == r.correlators[0][0] + r.correlators[1][0] + r.correlators[1][1] -
                      r.correlators[0][1]);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            double sum = 0.0;
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    sum += r.jointProbabilities[i][j][a][b];
                }
            }
            CHECK(sum == Catch::Approx(1.0).margin(1e-10));
        }
    }

    const BinaryMeasurement mz = projective_measurement({0, 0, 1});
    const CorrelationReport rc = full_report(Scenario(bloch_to_density({0, 0, 1}), {mz, mz}, {mz, mz}));
    CHECK(rc.k4 == Catch::Approx(2.0));
    CHECK(rc.predictabilityDeviation == Catch::Approx(0.0).margin(1e-13));
    CHECK(nsit_satisfied(rc));
    CHECK_FALSE(maximally_violating(rc));
}

TEST_CASE("pipeline matches the closed form on random projective scenarios") {
    for (int rep = 0; rep < 500; ++rep) {
        const BlochVector n = random_state_vector();
        const BlochVector a1 = random_unit();
        const BlochVector a2 = random_unit();
        const BlochVector b1 = random_unit();
        const BlochVector b2 = random_unit();
        const Scenario s(bloch_to_density(n),
                         {projective_measurement(a1), projective_measurement(a2)},
                         {projective_measurement(b1), projective_measurement(b2)});
        const std::array<BlochVector, 2> as{a1, a2};
        const std::array<BlochVector, 2> bs{b1, b2};
        for (int i = 1; i <= 2; ++i) {
            for (int j = 1; j <= 2; ++j) {
                for (int a = 0; a < 2; ++a) {
                    for (int b = 0; b < 2; ++b) {
                        const double expected = closed_form_joint(
                            n, as[static_cast<std::size_t>(i - 1)],
                            bs[static_cast<std::size_t>(j - 1)], a, b);
                        CHECK(joint_probability(s, i, j, a, b) ==
                              Catch::Approx(expected).margin(1e-12));
                    }
                }
            }
        }
    }
}

TEST_CASE("projective correlators depend only on the measurement geometry") {
    const BlochVector a1 = random_unit();
    const BlochVector a2 = random_unit();
    const BlochVector b1 = random_unit();
    const BlochVector b2 = random_unit();
    const std::array<BlochVector, 2> as{a1, a2};
    const std::array<BlochVector, 2> bs{b1, b2};
    for (int rep = 0; rep < 100; ++rep) {
        const Scenario s(bloch_to_density(random_state_vector()),
                         {projective_measurement(a1), projective_measurement(a2)},
                         {projective_measurement(b1), projective_measurement(b2)});
        for (int i = 1; i <= 2; ++i) {
            for (int j = 1; j <= 2; ++j) {
                CHECK(correlator(s, i, j) ==
                      Catch::Approx(as[static_cast<std::size_t>(i - 1)].dot(
                                        bs[static_cast<std::size_t>(j - 1)]))
                          .margin(1e-10));
            }
        }
    }
}

TEST_CASE("quantum k4 never exceeds 2 sqrt 2") {
    for (int rep = 0; rep < 300; ++rep) {
        const Scenario s = random_projective_scenario(random_state_vector());
        CHECK(k4(s) <= kMaxK4 + 1e-9);
    }
}

TEST_CASE("equality holds exactly on rotated ideal settings") {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    for (int rep = 0; rep < 50; ++rep) {
        // rotate the whole ideal configuration by a random angle about y
        const double t = angle(rng);
        const auto rot = [&](const BlochVector& v) {
            return BlochVector{v.x * std::cos(t) + v.z * std::sin(t), v.y,
                               -v.x * std::sin(t) + v.z * std::cos(t)};
        };
        const auto dirs = ideal_directions();
        const Scenario s(bloch_to_density(random_state_vector()),
                         {projective_measurement(rot(dirs[0])), projective_measurement(rot(dirs[1]))},
                         {projective_measurement(rot(dirs[2])), projective_measurement(rot(dirs[3]))});
        CHECK(k4(s) == Catch::Approx(kMaxK4).margin(1e-10));
        // the |a_i . b_j| = 1/sqrt(2) pattern
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                CHECK(std::abs(rot(dirs[static_cast<std::size_t>(i)])
                                   .dot(rot(dirs[static_cast<std::size_t>(2 + j)]))) ==
                      Catch::Approx(1.0 / kSqrt2).margin(1e-12));
            }
        }
    }
}

TEST_CASE("nsit and predictability together imply the classical bound") {
    // Deterministic tables obeying NSIT plus the arrow of time (Alice's
    // outcome cannot depend on Bob's later setting choice) are exactly the 16
    // factorized strategies; all of them satisfy K4 <= 2.
    int admissible = 0;
    for (int code = 0; code < 256; ++code) {
        // deterministic table: outcome pair (a_ij, b_ij) for each setting pair
        int a[2][2];
        int b[2][2];
        int bits = code;
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                a[i][j] = bits & 1;
                bits >>= 1;
                b[i][j] = bits & 1;
                bits >>= 1;
            }
        }
        const bool nsit = (b[0][0] == b[1][0]) && (b[0][1] == b[1][1]);
        const bool arrow = (a[0][0] == a[0][1]) && (a[1][0] == a[1][1]);
        if (!nsit || !arrow) {
            continue;
        }
        ++admissible;
        StatisticsTable t;
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::size_t j = 0; j < 2; ++j) {
                t.joint[i][j][static_cast<std::size_t>(a[i][j])][static_cast<std::size_t>(b[i][j])] =
                    1.0;
            }
        }
        const CorrelationReport r = report_from_table(t);
        CHECK(r.predictabilityDeviation == 0.0);
        CHECK(r.nsitDeviation == 0.0);
        CHECK(r.k4 <= 2.0 + 1e-9);
    }
    CHECK(admissible == 16);
}

TEST_CASE("report_from_table validates normalization") {
    StatisticsTable t;
    t.joint[0][0][0][0] = 0.6;
    t.joint[0][0][1][1] = 0.3; // block sums to 0.9
    t.joint[0][1][0][0] = 1.0;
    t.joint[1][0][0][0] = 1.0;
    t.joint[1][1][0][0] = 1.0;
    CHECK_THROWS_AS(report_from_table(t), invariant_error);
}
