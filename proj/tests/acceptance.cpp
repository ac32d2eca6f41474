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

// Acceptance suite: end-to-end checks of the library's headline claims, one
// pass/fail line per criterion, each with a wall-clock budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "lgst/lgst.hpp"

using namespace lgst;

namespace {

const double kSqrt2 = std::sqrt(2.0);
const double kMaxK4 = 2.0 * kSqrt2;

int failures = 0;

void criterion(int number, const std::string& name, double budget_seconds,
               const std::function<bool(std::string&)>& body) {
    std::string detail;
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > budget_seconds) {
        ok = false;
        detail += (detail.empty() ? "" : "; ") + std::string("over time budget");
    }
    std::printf("[%s] %d. %s (%.2fs%s%s)\n", ok ? "PASS" : "FAIL", number, name.c_str(), elapsed,
                detail.empty() ? "" : ": ", detail.c_str());
    std::fflush(stdout);
    if (!ok) {
        ++failures;
    }
}

BlochVector random_state_vector(std::mt19937_64& rng) {
    std::normal_distribution<double> norm(0.0, 1.0);
    std::uniform_real_distribution<double> radius(0.0, 1.0);
    BlochVector v{norm(rng), norm(rng), norm(rng)};
    const double r = radius(rng) / v.norm();
    return {v.x * r, v.y * r, v.z * r};
}

BlochVector random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> norm(0.0, 1.0);
    BlochVector v{norm(rng), norm(rng), norm(rng)};
    const double n = v.norm();
    return {v.x / n, v.y / n, v.z / n};
}

} // namespace

int main() {
    criterion(1, "maximal violation is 2*sqrt(2) for every input state", 1.0, [](std::string& why) {
        std::mt19937_64 rng(1);
        for (int rep = 0; rep < 100; ++rep) {
            const double value = k4(ideal_scenario(bloch_to_density(random_state_vector(rng))));
            if (std::abs(value - kMaxK4) > 1e-9) {
                why = "k4 = " + std::to_string(value);
                return false;
            }
        }
        return true;
    });

    criterion(2, "classical bound: 16 deterministic strategies max out at 2", 1.0,
              [](std::string& why) {
                  if (classical_maximum() != 2.0) {
                      why = "max != 2";
                      return false;
                  }
                  for (const auto& s : all_strategies()) {
                      const CorrelationReport r = report_from_table(lift_to_table(s));
                      if (r.nsitDeviation != 0.0 || r.predictabilityDeviation != 0.0) {
                          why = "a strategy signals or is unpredictable";
                          return false;
                      }
                  }
                  return true;
              });

    criterion(3, "pipeline equals the closed form on 10^4 projective scenarios", 5.0,
              [](std::string& why) {
                  std::mt19937_64 rng(3);
                  for (int rep = 0; rep < 10000; ++rep) {
                      const BlochVector n = random_state_vector(rng);
                      const BlochVector a1 = random_unit(rng);
                      const BlochVector a2 = random_unit(rng);
                      const BlochVector b1 = random_unit(rng);
                      const BlochVector b2 = random_unit(rng);
                      const Scenario s(bloch_to_density(n),
                                       {projective_measurement(a1), projective_measurement(a2)},
                                       {projective_measurement(b1), projective_measurement(b2)});
                      const std::array<BlochVector, 2> as{a1, a2};
                      const std::array<BlochVector, 2> bs{b1, b2};
                      for (int i = 1; i <= 2; ++i) {
                          for (int j = 1; j <= 2; ++j) {
                              for (int a = 0; a < 2; ++a) {
                                  for (int b = 0; b < 2; ++b) {
                                      const BlochVector& ai = as[static_cast<std::size_t>(i - 1)];
                                      const BlochVector& bj = bs[static_cast<std::size_t>(j - 1)];
                                      const double sa = a == 0 ? 1.0 : -1.0;
                                      const double sab = ((a + b) % 2) == 0 ? 1.0 : -1.0;
                                      const double closed = 0.25 * (1.0 + sa * ai.dot(n)) *
                                                            (1.0 + sab * ai.dot(bj));
                                      if (std::abs(joint_probability(s, i, j, a, b) - closed) >
                                          1e-12) {
                                          why = "joint probability off at rep " +
                                                std::to_string(rep);
                                          return false;
                                      }
                                  }
                              }
                          }
                      }
                  }
                  return true;
              });

    criterion(4, "POVM search: unconstrained 2*sqrt(2) sharp, capped 0.5 gives sqrt(2)", 120.0,
              [](std::string& why) {
                  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
                      OptimizationConfig config;
                      config.seed = seed;
                      const OptimizationResult r = maximize_k4(config);
                      if (std::abs(r.bestK4 - kMaxK4) > 1e-6) {
                          why = "seed " + std::to_string(seed) +
                                ": bestK4 = " + std::to_string(r.bestK4);
                          return false;
                      }
                      for (double s : r.bestParams.sharpnessAlice) {
                          if (std::abs(1.0 - s) > 1e-4) {
                              why = "alice sharpness off";
                              return false;
                          }
                      }
                      for (double s : r.bestParams.sharpnessBob) {
                          if (std::abs(1.0 - s) > 1e-4) {
                              why = "bob sharpness off";
                              return false;
                          }
                      }
                      if (std::abs(r.bestParams.biasAlice) > 1e-4 ||
                          std::abs(r.bestParams.biasBob) > 1e-4) {
                          why = "bias off";
                          return false;
                      }
                  }
                  OptimizationConfig capped;
                  capped.seed = 1;
                  capped.sharpnessCap = 0.5;
                  const OptimizationResult r = maximize_k4(capped);
                  if (std::abs(r.bestK4 - kSqrt2) > 1e-6) {
                      why = "capped bestK4 = " + std::to_string(r.bestK4);
                      return false;
                  }
                  return true;
              });

    criterion(5, "extraction residuals vanish on ideal blocks and flag perturbations", 10.0,
              [](std::string& why) {
                  std::mt19937_64 rng(5);
                  std::uniform_real_distribution<double> unif(0.05, 1.0);
                  for (std::size_t d : {2u, 4u, 6u, 8u}) {
                      const std::size_t blocks = d / 2;
                      for (int rep = 0; rep < 20; ++rep) {
                          std::vector<double> w(blocks);
                          double sum = 0.0;
                          for (double& v : w) {
                              v = unif(rng);
                              sum += v;
                          }
                          for (double& v : w) {
                              v /= sum;
                          }
                          const BlockScenario bs = ideal_block_scenario(blocks, w);
                          for (int i = 1; i <= 2; ++i) {
                              for (int a = 0; a < 2; ++a) {
                                  for (int j = 1; j <= 2; ++j) {
                                      const ExtractionVerdict v =
                                          verify_extraction(bs, i, a, j, 1e-10);
                                      if (!v.pass || v.residualNorm >= 1e-10) {
                                          why = "residual " + std::to_string(v.residualNorm) +
                                                " at d=" + std::to_string(d);
                                          return false;
                                      }
                                  }
                              }
                          }
                      }
                      // one Bob block rotated by 0.1 rad must fail visibly
                      const double angle = 0.1;
                      ComplexMatrix ry(2);
                      ry(0, 0) = std::cos(angle / 2);
                      ry(0, 1) = -std::sin(angle / 2);
                      ry(1, 0) = std::sin(angle / 2);
                      ry(1, 1) = std::cos(angle / 2);
                      const auto ideal = ideal_qubit_observables();
                      std::vector<std::array<ComplexMatrix, 2>> alice(blocks, {ideal[0], ideal[1]});
                      std::vector<std::array<ComplexMatrix, 2>> bob(blocks, {ideal[2], ideal[3]});
                      bob[0][0] = ry * bob[0][0] * ry.adjoint();
                      std::vector<double> w(blocks, 1.0 / static_cast<double>(blocks));
                      std::vector<DensityMatrix> states(blocks, DensityMatrix::maximally_mixed(2));
                      const BlockScenario perturbed(w, alice, bob, states);
                      double worst = 0.0;
                      for (int i = 1; i <= 2; ++i) {
                          for (int a = 0; a < 2; ++a) {
                              for (int j = 1; j <= 2; ++j) {
                                  worst = std::max(
                                      worst,
                                      verify_extraction(perturbed, i, a, j, 1e-10).residualNorm);
                              }
                          }
                      }
                      if (worst <= 0.01) {
                          why = "perturbation went unnoticed at d=" + std::to_string(d);
                          return false;
                      }
                  }
                  return true;
              });

    criterion(6, "fidelity bound endpoints are exact", 1.0, [](std::string& why) {
        if (fidelity_lower_bound(kMaxK4) != 1.0) {
            why = "F(2*sqrt2) != 1";
            return false;
        }
        if (fidelity_lower_bound(2.0) != 0.75) {
            why = "F(2) != 3/4";
            return false;
        }
        return true;
    });

    criterion(7, "operator inequality holds on a 10^4 sweep, both sides", 30.0,
              [](std::string& why) {
                  const double s_star = robustness_slope();
                  const InequalityCertificate alice =
                      check_operator_inequality(Side::alice, s_star, 10000);
                  if (alice.minEigenvalue < -1e-9) {
                      why = "alice min eig " + std::to_string(alice.minEigenvalue);
                      return false;
                  }
                  const InequalityCertificate bob =
                      check_operator_inequality(Side::bob, s_star, 10000);
                  if (bob.minEigenvalue < -1e-9) {
                      why = "bob min eig " + std::to_string(bob.minEigenvalue);
                      return false;
                  }
                  double min_avg = 1.0;
                  const int n = 10001; // odd so the grid hits pi/4 exactly
                  for (int k = 0; k < n; ++k) {
                      const double theta = (M_PI / 2) * k / (n - 1.0);
                      const MuCoefficients mu = mu_coefficients(theta, s_star);
                      min_avg = std::min(min_avg, 0.5 * (mu.muEven + mu.muOdd));
                  }
                  if (std::abs(min_avg - 0.25 * (2.0 - kSqrt2)) > 1e-9) {
                      why = "mu minimum " + std::to_string(min_avg);
                      return false;
                  }
                  return true;
              });

    criterion(8, "dephasing curve matches closed forms and dominates the bound", 2.0,
              [](std::string& why) {
                  // dephasing_curve itself cross-checks every point against the
                  // channel simulation at 1e-9 and throws on disagreement
                  const auto curve = dephasing_curve(100);
                  for (const CurvePoint& p : curve) {
                      if (p.fidelity - fidelity_lower_bound(p.k4) < -1e-9) {
                          why = "bound violated at phi = " + std::to_string(p.phi);
                          return false;
                      }
                  }
                  if (std::abs(curve.front().k4 - 2.0) > 1e-9 ||
                      std::abs(curve.front().fidelity - 0.75) > 1e-9 ||
                      std::abs(curve.back().k4 - kMaxK4) > 1e-9 ||
                      std::abs(curve.back().fidelity - 1.0) > 1e-9) {
                      why = "endpoints off";
                      return false;
                  }
                  return true;
              });

    criterion(9, "unstructured d=4 optimum reaches 2*sqrt(2) in 2x2 block form", 300.0,
              [](std::string& why) {
                  const ProjectiveOptimum opt = maximize_k4_projective(4, 24, 9);
                  if (std::abs(opt.bestK4 - kMaxK4) > 1e-6) {
                      why = "bestK4 = " + std::to_string(opt.bestK4);
                      return false;
                  }
                  const Scenario s(DensityMatrix::maximally_mixed(4),
                                   {BinaryMeasurement::from_observable(opt.observables[0]),
                                    BinaryMeasurement::from_observable(opt.observables[1])},
                                   {BinaryMeasurement::from_observable(opt.observables[2]),
                                    BinaryMeasurement::from_observable(opt.observables[3])});
                  const auto [canonical, u] = canonicalize_basis(s);
                  const double mass = std::max(
                      {off_block_mass(canonical.alice[0].observable()),
                       off_block_mass(canonical.alice[1].observable()),
                       off_block_mass(canonical.bob[0].observable()),
                       off_block_mass(canonical.bob[1].observable())});
                  if (mass > 1e-6) {
                      why = "off-block mass " + std::to_string(mass);
                      return false;
                  }
                  return true;
              });

    if (failures == 0) {
        std::printf("all acceptance criteria passed\n");
    } else {
        std::printf("%d acceptance criteria FAILED\n", failures);
    }
    return failures == 0 ? 0 : 1;
}
