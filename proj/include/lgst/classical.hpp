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

#include "lgst/seqstats.hpp"

namespace lgst {

/// One deterministic predictable strategy: fixed outputs for each of the two
/// Alice settings and the two Bob settings. The 16 of these are the vertices
/// of the classical polytope for the four-setting scenario.
struct DeterministicStrategy {
    std::array<int, 2> aliceOutputs{0, 0};
    std::array<int, 2> bobOutputs{0, 0};
};

inline std::array<DeterministicStrategy, 16> all_strategies() {
    std::array<DeterministicStrategy, 16> out{};
    for (int k = 0; k < 16; ++k) {
        out[static_cast<std::size_t>(k)] = DeterministicStrategy{
            {(k >> 0) & 1, (k >> 1) & 1}, {(k >> 2) & 1, (k >> 3) & 1}};
    }
    return out;
}

/// K4 of the factorized deterministic distribution the strategy induces.
inline double strategy_k4(const DeterministicStrategy& s) {
    const auto term = [&](int i, int j) {
        const int parity = s.aliceOutputs[static_cast<std::size_t>(i)] ^
                           s.bobOutputs[static_cast<std::size_t>(j)];
        return parity == 0 ? 1.0 : -1.0;
    };
    return term(0, 0) + term(1, 0) + term(1, 1) - term(0, 1);
}

/// max over the 16 deterministic strategies; convex mixtures cannot exceed it,
/// so this is the classical bound for the scenario.
inline double classical_maximum() {
    double best = strategy_k4(all_strategies()[0]);
    for (const auto& s : all_strategies()) {
        best = std::max(best, strategy_k4(s));
    }
    return best;
}

/// Statistics table of a strategy, including Bob's no-earlier-measurement
/// marginals (which for a factorized strategy are just his fixed responses).
inline StatisticsTable lift_to_table(const DeterministicStrategy& s) {
    StatisticsTable t;
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            const std::size_t a = static_cast<std::size_t>(s.aliceOutputs[i]);
            const std::size_t b = static_cast<std::size_t>(s.bobOutputs[j]);
            t.joint[i][j][a][b] = 1.0;
        }
    }
    std::array<std::array<double, 2>, 2> marginals{};
    for (std::size_t j = 0; j < 2; ++j) {
        marginals[j][static_cast<std::size_t>(s.bobOutputs[j])] = 1.0;
    }
    t.marginalsNoAlice = marginals;
    return t;
}

} // namespace lgst
