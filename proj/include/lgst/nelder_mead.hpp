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
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace lgst {

struct NelderMeadResult {
    std::vector<double> point;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Downhill simplex minimization with the classic coefficients (reflection 1,
/// expansion 2, contraction 0.5, shrink 0.5). Stops when the simplex
/// max-coordinate diameter drops below diameter_tol or after max_iterations.
inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                    const std::vector<double>& start,
                                    const std::vector<double>& steps, int max_iterations,
                                    double diameter_tol = 1e-9) {
    const std::size_t n = start.size();
    std::vector<std::vector<double>> xs(n + 1, start);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i + 1][i] += steps[i];
    }
    std::vector<double> fs(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        fs[i] = f(xs[i]);
    }

    std::vector<std::size_t> order(n + 1);
    NelderMeadResult result;
    while (result.iterations < max_iterations) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
        const std::size_t best = order[0];
        const std::size_t worst = order[n];
        const std::size_t second_worst = order[n - 1];

        double diameter = 0.0;
        for (std::size_t i = 0; i <= n; ++i) {
            for (std::size_t k = 0; k < n; ++k) {
                diameter = std::max(diameter, std::abs(xs[i][k] - xs[best][k]));
            }
        }
        if (diameter < diameter_tol) {
            result.converged = true;
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) {
                continue;
            }
            for (std::size_t k = 0; k < n; ++k) {
                centroid[k] += xs[i][k];
            }
        }
        for (double& c : centroid) {
            c /= static_cast<double>(n);
        }

        std::vector<double> reflected(n);
        for (std::size_t k = 0; k < n; ++k) {
            reflected[k] = centroid[k] + (centroid[k] - xs[worst][k]);
        }
        const double fr = f(reflected);

        if (fr < fs[best]) {
            std::vector<double> expanded(n);
            for (std::size_t k = 0; k < n; ++k) {
                expanded[k] = centroid[k] + 2.0 * (centroid[k] - xs[worst][k]);
            }
            const double fe = f(expanded);
            if (fe < fr) {
                xs[worst] = std::move(expanded);
                fs[worst] = fe;
            } else {
                xs[worst] = std::move(reflected);
                fs[worst] = fr;
            }
        } else if (fr < fs[second_worst]) {
            xs[worst] = std::move(reflected);
            fs[worst] = fr;
        } else {
            std::vector<double> contracted(n);
            for (std::size_t k = 0; k < n; ++k) {
                contracted[k] = centroid[k] + 0.5 * (xs[worst][k] - centroid[k]);
            }
            const double fc = f(contracted);
            if (fc < fs[worst]) {
                xs[worst] = std::move(contracted);
                fs[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == best) {
                        continue;
                    }
                    for (std::size_t k = 0; k < n; ++k) {
                        xs[i][k] = xs[best][k] + 0.5 * (xs[i][k] - xs[best][k]);
                    }
                    fs[i] = f(xs[i]);
                }
            }
        }
        ++result.iterations;
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i <= n; ++i) {
        if (fs[i] < fs[best]) {
            best = i;
        }
    }
    result.point = xs[best];
    result.value = fs[best];
    return result;
}

} // namespace lgst
