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
#include <limits>
#include <numeric>
#include <optional>
#include <random>

#include "lgst/nelder_mead.hpp"
#include "lgst/parallel.hpp"
#include "lgst/seqstats.hpp"

namespace lgst {

/// K4 through the full square-root update pipeline on the biased/unsharp
/// POVM family.
inline double k4_povm(const PovmParams& params) {
    params.validate();
    const Scenario s(
        bloch_to_density(params.inputBloch),
        {biased_effect_pair(params.directions[0], params.sharpnessAlice[0], params.biasAlice),
         biased_effect_pair(params.directions[1], params.sharpnessAlice[1], params.biasAlice)},
        {biased_effect_pair(params.directions[2], params.sharpnessBob[0], params.biasBob),
         biased_effect_pair(params.directions[3], params.sharpnessBob[1], params.biasBob)});
    return k4(s);
}

struct OptimizationConfig {
    int gridResolution = 7;
    int refinementIterations = 4000;
    std::uint64_t seed = 1;
    std::optional<double> sharpnessCap;  // caps Alice's sharpness parameters
    std::optional<double> biasFloor;     // forces |bias| >= floor on both parties
    bool searchInput = false;            // default: maximally mixed input
    bool fullSphere = false;             // default: directions in the x-z plane
    int gridBudget = 4096;               // lattice points sampled in the coarse stage
    int simplexStarts = 8;
};

struct OptimizationResult {
    double bestK4 = 0.0;
    PovmParams bestParams;
    long iterations = 0;
    bool converged = false;
    std::uint64_t seed = 0;
};

namespace detail {

// Flat search-vector layout: 4 direction angles (+4 azimuths when fullSphere),
// lambda1 lambda2 mu1 mu2, gamma_a gamma_b (+3 input components when searched).
struct PovmSpace {
    explicit PovmSpace(const OptimizationConfig& cfg) : config(cfg) {
        if (config.sharpnessCap && !(*config.sharpnessCap > 0.0 && *config.sharpnessCap <= 1.0)) {
            throw std::invalid_argument("sharpness cap must lie in (0, 1]");
        }
        if (config.biasFloor && !(*config.biasFloor >= 0.0 && *config.biasFloor < 1.0)) {
            throw std::invalid_argument("bias floor must lie in [0, 1)");
        }
        numAngles = config.fullSphere ? 8 : 4;
        size = static_cast<std::size_t>(numAngles) + 6 + (config.searchInput ? 3 : 0);
    }

    std::size_t dimension() const { return size; }

    // clamps a raw vector into the feasible set, in place
    void project(std::vector<double>& p) const {
        const double floor_bias = config.biasFloor.value_or(0.0);
        const double cap_alice = std::min({1.0, config.sharpnessCap.value_or(1.0), 1.0 - floor_bias});
        const double cap_bob = std::min(1.0, 1.0 - floor_bias);
        const std::size_t L = static_cast<std::size_t>(numAngles);
        for (std::size_t k = 0; k < 2; ++k) {
            p[L + k] = std::clamp(p[L + k], kMinSharpness, cap_alice);
            p[L + 2 + k] = std::clamp(p[L + 2 + k], kMinSharpness, cap_bob);
        }
        const double ga_max = 1.0 - std::max(p[L], p[L + 1]);
        const double gb_max = 1.0 - std::max(p[L + 2], p[L + 3]);
        p[L + 4] = std::clamp(p[L + 4], -ga_max, ga_max);
        p[L + 5] = std::clamp(p[L + 5], -gb_max, gb_max);
        if (floor_bias > 0.0) {
            if (std::abs(p[L + 4]) < floor_bias) {
                p[L + 4] = p[L + 4] < 0.0 ? -floor_bias : floor_bias;
            }
            if (std::abs(p[L + 5]) < floor_bias) {
                p[L + 5] = p[L + 5] < 0.0 ? -floor_bias : floor_bias;
            }
        }
        if (config.searchInput) {
            double n2 = 0.0;
            for (std::size_t k = size - 3; k < size; ++k) {
                n2 += p[k] * p[k];
            }
            if (n2 > 1.0) {
                const double inv = 1.0 / std::sqrt(n2);
                for (std::size_t k = size - 3; k < size; ++k) {
                    p[k] *= inv;
                }
            }
        }
    }

    PovmParams to_params(const std::vector<double>& p) const {
        PovmParams out;
        const std::size_t L = static_cast<std::size_t>(numAngles);
        for (std::size_t d = 0; d < 4; ++d) {
            if (config.fullSphere) {
                const double theta = p[2 * d];
                const double phi = p[2 * d + 1];
                out.directions[d] = {std::sin(theta) * std::cos(phi),
                                     std::sin(theta) * std::sin(phi), std::cos(theta)};
            } else {
                out.directions[d] = xz_direction(p[d]);
            }
        }
        out.sharpnessAlice = {p[L], p[L + 1]};
        out.sharpnessBob = {p[L + 2], p[L + 3]};
        out.biasAlice = p[L + 4];
        out.biasBob = p[L + 5];
        out.inputBloch = config.searchInput
                             ? BlochVector{p[size - 3], p[size - 2], p[size - 1]}
                             : BlochVector{0.0, 0.0, 0.0};
        return out;
    }

    double evaluate(std::vector<double> p) const {
        project(p);
        return k4_povm(to_params(p));
    }

    std::vector<std::vector<double>> axes() const {
        const int res = config.gridResolution;
        std::vector<std::vector<double>> out;
        const auto linspace = [res](double lo, double hi, bool exclusive) {
            std::vector<double> v(static_cast<std::size_t>(res));
            const double span = hi - lo;
            const double denom = exclusive ? res : res - 1;
            for (int k = 0; k < res; ++k) {
                v[static_cast<std::size_t>(k)] = lo + span * k / denom;
            }
            return v;
        };
        for (int k = 0; k < numAngles; ++k) {
            out.push_back(linspace(0.0, 2.0 * M_PI, true));
        }
        for (int k = 0; k < 4; ++k) {
            out.push_back(linspace(1.0 / res, 1.0, false));
        }
        for (int k = 0; k < 2; ++k) {
            out.push_back(linspace(-0.5, 0.5, false));
        }
        if (config.searchInput) {
            for (int k = 0; k < 3; ++k) {
                out.push_back(linspace(-1.0, 1.0, false));
            }
        }
        return out;
    }

    OptimizationConfig config;
    int numAngles = 4;
    std::size_t size = 0;
    static constexpr double kMinSharpness = 1e-3;
};

} // namespace detail

/// Coarse seeded lattice sample over the POVM family followed by simplex
/// refinement from the best candidates. Deterministic for a fixed seed and
/// independent of the worker count.
inline OptimizationResult maximize_k4(const OptimizationConfig& config) {
    if (config.gridResolution < 3) {
        throw std::invalid_argument("maximize_k4: grid resolution must be at least 3");
    }
    const detail::PovmSpace space(config);
    const auto axes = space.axes();

    std::mt19937_64 rng(config.seed);
    const std::size_t budget = static_cast<std::size_t>(std::max(config.gridBudget, 1));
    std::vector<std::vector<double>> candidates(budget);
    for (auto& p : candidates) {
        p.resize(space.dimension());
        for (std::size_t k = 0; k < space.dimension(); ++k) {
            p[k] = axes[k][rng() % axes[k].size()];
        }
    }
    std::vector<double> values(budget);
    parallel_for(budget, [&](std::size_t i) { values[i] = space.evaluate(candidates[i]); });

    std::vector<std::size_t> order(budget);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (values[a] != values[b]) {
            return values[a] > values[b];
        }
        return candidates[a] < candidates[b]; // lowest lexicographic wins ties
    });

    std::vector<double> steps(space.dimension(), 0.25);
    const std::size_t L = static_cast<std::size_t>(space.numAngles);
    for (std::size_t k = 0; k < 4; ++k) {
        steps[L + k] = -0.1; // step sharpness toward the interior
    }
    steps[L + 4] = 0.1;
    steps[L + 5] = 0.1;
    if (config.searchInput) {
        for (std::size_t k = space.dimension() - 3; k < space.dimension(); ++k) {
            steps[k] = 0.3;
        }
    }

    const auto objective = [&space](const std::vector<double>& p) { return -space.evaluate(p); };
    const std::size_t starts =
        std::min<std::size_t>(static_cast<std::size_t>(std::max(config.simplexStarts, 1)), budget);

    struct RunOutcome {
        std::vector<double> point;
        double value = std::numeric_limits<double>::infinity();
        long iterations = 0;
        bool converged = false;
    };
    std::vector<RunOutcome> runs(starts);
    parallel_for(starts, [&](std::size_t s) {
        const NelderMeadResult first =
            nelder_mead(objective, candidates[order[s]], steps, config.refinementIterations);
        // restart with a tightened simplex to finish off boundary optima
        std::vector<double> fine_steps(steps);
        for (double& h : fine_steps) {
            h *= 0.05;
        }
        const NelderMeadResult second =
            nelder_mead(objective, first.point, fine_steps, config.refinementIterations);
        runs[s].point = second.point;
        runs[s].value = second.value;
        runs[s].iterations = first.iterations + second.iterations;
        runs[s].converged = second.converged;
    });

    OptimizationResult result;
    result.seed = config.seed;
    std::size_t winner = 0;
    for (std::size_t s = 0; s < starts; ++s) {
        result.iterations += runs[s].iterations;
        std::vector<double> projected = runs[s].point;
        space.project(projected);
        std::vector<double> best_projected = runs[winner].point;
        space.project(best_projected);
        if (runs[s].value < runs[winner].value ||
            (runs[s].value == runs[winner].value && projected < best_projected)) {
            winner = s;
        }
    }
    std::vector<double> best_point = runs[winner].point;
    space.project(best_point);
    result.bestK4 = -runs[winner].value;
    result.bestParams = space.to_params(best_point);
    result.converged = runs[winner].converged;
    return result;
}

/// Checks the sharp-projective signature of a (claimed) near-maximal result:
/// bestK4 within epsilon of 2 sqrt 2 must come with every sharpness within
/// sqrt(epsilon) of 1 and every bias within sqrt(epsilon) of 0.
inline bool certify_projectivity(const OptimizationResult& result, double epsilon) {
    if (result.bestK4 < 2.0 * std::sqrt(2.0) - epsilon) {
        return true;
    }
    const double slack = std::sqrt(epsilon);
    const PovmParams& p = result.bestParams;
    for (double s : p.sharpnessAlice) {
        if (std::abs(1.0 - s) > slack) {
            return false;
        }
    }
    for (double s : p.sharpnessBob) {
        if (std::abs(1.0 - s) > slack) {
            return false;
        }
    }
    return std::abs(p.biasAlice) <= slack && std::abs(p.biasBob) <= slack;
}

} // namespace lgst
