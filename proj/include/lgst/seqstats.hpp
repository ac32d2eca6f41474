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

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

#include "lgst/errors.hpp"
#include "lgst/qcore.hpp"

namespace lgst {

/// Default tolerance for "NSIT holds" / "violation is maximal" style verdicts.
inline constexpr double kVerdictTolerance = 1e-7;

struct CorrelationReport;
inline bool nsit_satisfied(const CorrelationReport& r, double tolerance = kVerdictTolerance);
inline bool maximally_violating(const CorrelationReport& r, double tolerance = kVerdictTolerance);

/// An input state and the four measurements (A1, A2, B1, B2), all on one
/// Hilbert space. Alice measures first, Bob second.
struct Scenario {
    Scenario(DensityMatrix input, std::array<BinaryMeasurement, 2> aliceMeasurements,
             std::array<BinaryMeasurement, 2> bobMeasurements)
        : state(std::move(input)), alice(std::move(aliceMeasurements)),
          bob(std::move(bobMeasurements)) {
        for (const auto& m : alice) {
            if (m.dim() != state.dim()) {
                throw std::invalid_argument("scenario: measurement/state dimension mismatch");
            }
        }
        for (const auto& m : bob) {
            if (m.dim() != state.dim()) {
                throw std::invalid_argument("scenario: measurement/state dimension mismatch");
            }
        }
    }

    DensityMatrix state;
    std::array<BinaryMeasurement, 2> alice;
    std::array<BinaryMeasurement, 2> bob;
};

/// The four ideal measurement settings reaching K4 = 2*sqrt(2):
/// A1 = z, A2 = x, B1 = (x+z)/sqrt(2), B2 = (x-z)/sqrt(2).
inline std::array<BlochVector, 4> ideal_directions() {
    const double r = 1.0 / std::sqrt(2.0);
    return {BlochVector{0, 0, 1}, BlochVector{1, 0, 0}, BlochVector{r, 0, r},
            BlochVector{r, 0, -r}};
}

inline Scenario ideal_scenario(const DensityMatrix& input) {
    const auto d = ideal_directions();
    return Scenario(input, {projective_measurement(d[0]), projective_measurement(d[1])},
                    {projective_measurement(d[2]), projective_measurement(d[3])});
}

inline Scenario ideal_scenario() { return ideal_scenario(DensityMatrix::maximally_mixed(2)); }

namespace detail {

inline void check_setting(int i, int j) {
    if (i < 1 || i > 2 || j < 1 || j > 2) {
        throw std::invalid_argument("setting indices must be 1 or 2");
    }
}

inline void check_bit(int a, int b) {
    if ((a & ~1) != 0 || (b & ~1) != 0) {
        throw std::invalid_argument("outcomes must be bits");
    }
}

} // namespace detail

/// P(a, b | A_i, B_j) of measuring A_i first (outcome a) and B_j on the
/// Lueders post-measurement state (outcome b). Zero-probability first
/// branches contribute 0. Settings i, j are 1-based.
inline double joint_probability(const Scenario& s, int i, int j, int a, int b) {
    detail::check_setting(i, j);
    detail::check_bit(a, b);
    const ComplexMatrix branch = luders_branch(s.state, s.alice[static_cast<std::size_t>(i - 1)], a);
    const ComplexMatrix& eb = s.bob[static_cast<std::size_t>(j - 1)].effect(b);
    return (eb * branch).trace().real();
}

/// Two-time correlator C_ij = sum_{a,b} (-1)^(a xor b) P(a,b|A_i,B_j).
inline double correlator(const Scenario& s, int i, int j) {
    detail::check_setting(i, j);
    double c = 0.0;
    for (int a = 0; a < 2; ++a) {
        const ComplexMatrix branch =
            luders_branch(s.state, s.alice[static_cast<std::size_t>(i - 1)], a);
        const ComplexMatrix diff = s.bob[static_cast<std::size_t>(j - 1)].observable();
        const double sign = (a == 0) ? 1.0 : -1.0;
        c += sign * (diff * branch).trace().real();
    }
    return c;
}

/// K4 = C11 + C21 + C22 - C12.
inline double k4(const Scenario& s) {
    return correlator(s, 1, 1) + correlator(s, 2, 1) + correlator(s, 2, 2) - correlator(s, 1, 2);
}

/// Largest gap between Bob's undisturbed statistics and his statistics after
/// any of Alice's measurements: max_{j,b,i} |P(b|B_j) - sum_a P(a,b|A_i,B_j)|.
/// Zero (up to tolerance) iff no signalling in time holds.
inline double nsit_deviation(const Scenario& s) {
    double dev = 0.0;
    for (int j = 1; j <= 2; ++j) {
        for (int b = 0; b < 2; ++b) {
            const double undisturbed =
                (s.bob[static_cast<std::size_t>(j - 1)].effect(b) * s.state.matrix()).trace().real();
            for (int i = 1; i <= 2; ++i) {
                const double disturbed =
                    joint_probability(s, i, j, 0, b) + joint_probability(s, i, j, 1, b);
                dev = std::max(dev, std::abs(undisturbed - disturbed));
            }
        }
    }
    return dev;
}

/// max over (i,j,a,b) of min(P, 1-P): zero iff every joint probability is 0
/// or 1 (deterministic statistics).
inline double predictability_deviation(const Scenario& s) {
    double dev = 0.0;
    for (int i = 1; i <= 2; ++i) {
        for (int j = 1; j <= 2; ++j) {
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    const double p = joint_probability(s, i, j, a, b);
                    dev = std::max(dev, std::min(p, 1.0 - p));
                }
            }
        }
    }
    return dev;
}

/// Joint table indexed [i-1][j-1][a][b], plus the derived quantities.
struct CorrelationReport {
    std::array<std::array<std::array<std::array<double, 2>, 2>, 2>, 2> jointProbabilities{};
    std::array<std::array<double, 2>, 2> correlators{};
    double k4 = 0.0;
    double nsitDeviation = 0.0;
    double predictabilityDeviation = 0.0;
};

namespace detail {

inline CorrelationReport report_from_joint(
    const std::array<std::array<std::array<std::array<double, 2>, 2>, 2>, 2>& joint) {
    CorrelationReport r;
    r.jointProbabilities = joint;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            double c = 0.0;
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    const std::size_t ia = static_cast<std::size_t>(a);
                    const std::size_t ib = static_cast<std::size_t>(b);
                    const double p = joint[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][ia][ib];
                    c += ((a ^ b) == 0 ? 1.0 : -1.0) * p;
                    r.predictabilityDeviation =
                        std::max(r.predictabilityDeviation, std::min(p, 1.0 - p));
                }
            }
            r.correlators[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = c;
        }
    }
    r.k4 = r.correlators[0][0] + r.correlators[1][0] + r.correlators[1][1] - r.correlators[0][1];
    return r;
}

} // namespace detail

inline CorrelationReport full_report(const Scenario& s) {
    std::array<std::array<std::array<std::array<double, 2>, 2>, 2>, 2> joint{};
    for (int i = 0; i < 2; ++i) {
        for (int a = 0; a < 2; ++a) {
            const ComplexMatrix branch = luders_branch(s.state, s.alice[static_cast<std::size_t>(i)], a);
            for (int j = 0; j < 2; ++j) {
                for (int b = 0; b < 2; ++b) {
                    joint[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]
                         [static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
                             (s.bob[static_cast<std::size_t>(j)].effect(b) * branch).trace().real();
                }
            }
        }
    }
    CorrelationReport r = detail::report_from_joint(joint);
    r.nsitDeviation = nsit_deviation(s);
    return r;
}

inline bool nsit_satisfied(const CorrelationReport& r, double tolerance) {
    return r.nsitDeviation <= tolerance;
}

inline bool maximally_violating(const CorrelationReport& r, double tolerance) {
    return r.k4 >= 2.0 * std::sqrt(2.0) - tolerance;
}

/// Observed statistics with no quantum model behind them: the 16 joint
/// probabilities and, optionally, Bob's marginals taken with no earlier
/// measurement. Index order matches CorrelationReport.
struct StatisticsTable {
    std::array<std::array<std::array<std::array<double, 2>, 2>, 2>, 2> joint{};
    std::optional<std::array<std::array<double, 2>, 2>> marginalsNoAlice; // [j-1][b]
    double tolerance = 1e-6;
};

/// Device-independent report straight from a table. NSIT deviation uses the
/// no-measurement marginals when the table carries them; otherwise it falls
/// back to comparing Bob's marginals across Alice's two settings, which is
/// the part of NSIT visible in the joint table alone.
inline CorrelationReport report_from_table(const StatisticsTable& t) {
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            double sum = 0.0;
            for (std::size_t a = 0; a < 2; ++a) {
                for (std::size_t b = 0; b < 2; ++b) {
                    const double p = t.joint[i][j][a][b];
                    if (p < -t.tolerance || p > 1.0 + t.tolerance) {
                        throw invariant_error("statistics table: probability outside [0, 1]");
                    }
                    sum += p;
                }
            }
            if (std::abs(sum - 1.0) > t.tolerance) {
                throw invariant_error("statistics table: setting block is not normalized");
            }
        }
    }
    CorrelationReport r = detail::report_from_joint(t.joint);
    double dev = 0.0;
    for (std::size_t j = 0; j < 2; ++j) {
        for (std::size_t b = 0; b < 2; ++b) {
            std::array<double, 2> disturbed{};
            for (std::size_t i = 0; i < 2; ++i) {
                disturbed[i] = t.joint[i][j][0][b] + t.joint[i][j][1][b];
            }
            if (t.marginalsNoAlice) {
                for (std::size_t i = 0; i < 2; ++i) {
                    dev = std::max(dev, std::abs((*t.marginalsNoAlice)[j][b] - disturbed[i]));
                }
            } else {
                dev = std::max(dev, std::abs(disturbed[0] - disturbed[1]));
            }
        }
    }
    r.nsitDeviation = dev;
    return r;
}

} // namespace lgst
