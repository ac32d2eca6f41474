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

// Command-line surface for the Leggett-Garg self-testing toolkit.
//
// Exit codes: 0 success / certification pass, 1 certification fail,
// 2 usage or parse error, 3 data-invariant error.

#include <cmath>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lgst/io.hpp"
#include "lgst/lgst.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

using lgst::io::json;

int cmd_evaluate(const std::string& path, bool as_csv) {
    const json doc = lgst::io::load_json_file(path);
    const lgst::Scenario scenario = lgst::io::scenario_from_json(doc);
    const lgst::CorrelationReport report = lgst::full_report(scenario);
    if (as_csv) {
        std::cout << lgst::io::report_to_csv(report);
    } else {
        std::cout << lgst::io::report_to_json(report).dump(2) << "\n";
    }
    return kExitPass;
}

int cmd_certify(const std::string& path, double epsilon) {
    const json doc = lgst::io::load_json_file(path);
    lgst::CorrelationReport report;
    if (doc.contains("joint")) {
        report = lgst::report_from_table(lgst::io::statistics_from_json(doc));
    } else {
        report = lgst::full_report(lgst::io::scenario_from_json(doc));
    }
    const double max_k4 = 2.0 * std::sqrt(2.0);
    if (std::abs(report.k4) > max_k4 + 1e-9) {
        throw lgst::invariant_error("certify: K4 exceeds the quantum bound");
    }
    const bool pass = report.k4 >= max_k4 - epsilon && report.nsitDeviation <= epsilon;
    const json verdict{{"k4", report.k4},
                       {"nsitDeviation", report.nsitDeviation},
                       {"fidelityLowerBound",
                        lgst::fidelity_lower_bound(std::clamp(report.k4, -max_k4, max_k4))},
                       {"selfTestPass", pass},
                       {"exitCode", pass ? kExitPass : kExitFail}};
    std::cout << verdict.dump(2) << "\n";
    return pass ? kExitPass : kExitFail;
}

int cmd_optimize_povm(int grid, std::uint64_t seed, double cap_sharpness) {
    lgst::OptimizationConfig config;
    config.gridResolution = grid;
    config.seed = seed;
    if (cap_sharpness > 0.0) {
        config.sharpnessCap = cap_sharpness;
    }
    const lgst::OptimizationResult result = lgst::maximize_k4(config);
    std::cout << lgst::io::optimization_result_to_json(result).dump(2) << "\n";
    return kExitPass;
}

int cmd_robustness(int curve_points, bool check_inequality, const std::string& side, double slope,
                   bool as_json) {
    if (curve_points > 0) {
        const auto curve = lgst::dephasing_curve(curve_points);
        if (as_json) {
            std::cout << lgst::io::curve_to_json(curve).dump(2) << "\n";
        } else {
            std::cout << lgst::io::curve_to_csv(curve);
        }
    }
    if (check_inequality) {
        const lgst::Side which = side == "bob" ? lgst::Side::bob : lgst::Side::alice;
        const lgst::InequalityCertificate cert =
            lgst::check_operator_inequality(which, slope, 10000);
        const bool pass = cert.minEigenvalue >= -1e-9;
        const json out{{"side", side},
                       {"slope", slope},
                       {"minEigenvalue", cert.minEigenvalue},
                       {"argminTheta", cert.argminTheta},
                       {"pass", pass}};
        std::cout << out.dump(2) << "\n";
        return pass ? kExitPass : kExitFail;
    }
    return kExitPass;
}

int cmd_isometry_check(int blocks, const std::vector<double>& weights, double tolerance) {
    const lgst::BlockScenario bs =
        lgst::ideal_block_scenario(static_cast<std::size_t>(blocks), weights);
    json verdicts = json::array();
    bool all_pass = true;
    for (int i = 1; i <= 2; ++i) {
        for (int a = 0; a < 2; ++a) {
            for (int j = 1; j <= 2; ++j) {
                const lgst::ExtractionVerdict v = lgst::verify_extraction(bs, i, a, j, tolerance);
                all_pass = all_pass && v.pass;
                verdicts.push_back(json{{"i", i},
                                        {"a", a},
                                        {"j", j},
                                        {"residualNorm", v.residualNorm},
                                        {"pass", v.pass}});
            }
        }
    }
    const json out{{"verdicts", std::move(verdicts)}, {"allPass", all_pass}};
    std::cout << out.dump(2) << "\n";
    return all_pass ? kExitPass : kExitFail;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sequential-measurement self-testing toolkit (Leggett-Garg K4)"};
    app.require_subcommand(1);

    std::string scenario_path;
    bool evaluate_csv = false;
    bool evaluate_json = false;
    CLI::App* evaluate =
        app.add_subcommand("evaluate", "Report K4 and diagnostics of a scenario file");
    evaluate->add_option("scenario", scenario_path, "scenario JSON file")->required();
    evaluate->add_flag("--csv", evaluate_csv, "emit CSV");
    evaluate->add_flag("--json", evaluate_json, "emit JSON (default)");

    std::string certify_path;
    double epsilon = 1e-6;
    CLI::App* certify =
        app.add_subcommand("certify", "Self-testing verdict from a scenario or statistics file");
    certify->add_option("input", certify_path, "scenario or statistics JSON file")->required();
    certify->add_option("--epsilon", epsilon, "verdict tolerance (default 1e-6)");

    int grid = 7;
    std::uint64_t seed = 1;
    double cap_sharpness = 0.0;
    CLI::App* optimize =
        app.add_subcommand("optimize-povm", "Maximize K4 over the two-outcome POVM family");
    optimize->add_option("--grid", grid, "grid resolution per parameter (default 7, minimum 3)");
    optimize->add_option("--seed", seed, "random seed (default 1)");
    optimize->add_option("--cap-sharpness", cap_sharpness, "cap Alice's sharpness parameters");

    int curve_points = 0;
    bool check_inequality = false;
    std::string side = "alice";
    double slope = lgst::robustness_slope();
    bool robustness_json = false;
    CLI::App* robustness =
        app.add_subcommand("robustness", "Fidelity bound: noise curve and operator inequality");
    robustness->add_option("--curve-points", curve_points, "points of the dephasing curve (>= 2)");
    robustness->add_flag("--check-inequality", check_inequality, "sweep the operator inequality");
    robustness->add_option("--side", side, "alice or bob (default alice)")
        ->check(CLI::IsMember({"alice", "bob"}));
    robustness->add_option("--slope", slope, "candidate slope s (default (1+sqrt2)/2)");
    robustness->add_flag("--json", robustness_json, "emit the curve as JSON instead of CSV");

    int blocks = 1;
    std::string weights_text = "1";
    double tolerance = 1e-10;
    CLI::App* isometry = app.add_subcommand(
        "isometry-check", "Verify the extraction identity on ideal block scenarios");
    isometry->add_option("--blocks", blocks, "number of 2x2 blocks")->required();
    isometry->add_option("--weights", weights_text, "comma-separated block weights")->required();
    isometry->add_option("--tolerance", tolerance, "residual tolerance (default 1e-10)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() != 0) {
            std::cerr << e.what() << "\n";
            return kExitUsage;
        }
        return app.exit(e); // --help
    }

    try {
        if (*evaluate) {
            return cmd_evaluate(scenario_path, evaluate_csv && !evaluate_json);
        }
        if (*certify) {
            return cmd_certify(certify_path, epsilon);
        }
        if (*optimize) {
            if (grid < 3) {
                std::cerr << "optimize-povm: --grid must be at least 3\n";
                return kExitUsage;
            }
            if (optimize->count("--cap-sharpness") > 0 &&
                (cap_sharpness <= 0.0 || cap_sharpness > 1.0)) {
                std::cerr << "optimize-povm: --cap-sharpness must lie in (0, 1]\n";
                return kExitUsage;
            }
            return cmd_optimize_povm(grid, seed, cap_sharpness);
        }
        if (*robustness) {
            if (curve_points == 0 && !check_inequality) {
                std::cerr << "robustness: pass --curve-points and/or --check-inequality\n";
                return kExitUsage;
            }
            if (curve_points == 1 || curve_points < 0) {
                std::cerr << "robustness: --curve-points needs at least 2 points\n";
                return kExitUsage;
            }
            return cmd_robustness(curve_points, check_inequality, side, slope, robustness_json);
        }
        if (*isometry) {
            std::vector<double> weights;
            std::size_t pos = 0;
            try {
                while (pos < weights_text.size()) {
                    std::size_t used = 0;
                    weights.push_back(std::stod(weights_text.substr(pos), &used));
                    pos += used;
                    if (pos < weights_text.size()) {
                        if (weights_text[pos] != ',') {
                            throw std::invalid_argument("bad separator");
                        }
                        ++pos;
                    }
                }
            } catch (const std::exception&) {
                std::cerr << "isometry-check: --weights must be comma-separated numbers\n";
                return kExitUsage;
            }
            if (blocks < 1 || weights.size() != static_cast<std::size_t>(blocks)) {
                std::cerr << "isometry-check: --weights count must match --blocks\n";
                return kExitUsage;
            }
            double sum = 0.0;
            for (double w : weights) {
                sum += w;
            }
            if (sum > 1.0 + 1e-9 || sum < 1.0 - 1e-9) {
                std::cerr << "isometry-check: weights must sum to 1\n";
                return kExitUsage;
            }
            return cmd_isometry_check(blocks, weights, tolerance);
        }
    } catch (const json::parse_error& e) {
        std::cerr << e.what() << "\n"; // includes line and column
        return kExitUsage;
    } catch (const lgst::io::schema_error& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const lgst::invariant_error& e) {
        std::cerr << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
