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

#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "lgst/povmopt.hpp"
#include "lgst/robustness.hpp"
#include "lgst/seqstats.hpp"

namespace lgst::io {

using nlohmann::json;

/// Structurally broken input (wrong shape, missing keys, bad types). Parse
/// failures of the JSON text itself surface as nlohmann's parse_error, which
/// carries line and column.
struct schema_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw schema_error("cannot open file: " + path);
    }
    return json::parse(in); // throws json::parse_error with line/column info
}

/// Complex matrices travel as row-major nested lists of [re, im] pairs.
inline json matrix_to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) {
            row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline ComplexMatrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) {
        throw schema_error("matrix: expected a non-empty array of rows");
    }
    const std::size_t n = j.size();
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        const json& row = j[i];
        if (!row.is_array() || row.size() != n) {
            throw schema_error("matrix: rows must all have the matrix dimension");
        }
        for (std::size_t c = 0; c < n; ++c) {
            const json& entry = row[c];
            if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
                !entry[1].is_number()) {
                throw schema_error("matrix: entries must be [re, im] pairs");
            }
            m(i, c) = cplx(entry[0].get<double>(), entry[1].get<double>());
        }
    }
    return m;
}

inline BlochVector bloch_from_json(const json& j) {
    if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() ||
        !j[2].is_number()) {
        throw schema_error("bloch: expected [x, y, z]");
    }
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline DensityMatrix state_from_json(const json& j) {
    if (!j.is_object()) {
        throw schema_error("state: expected an object");
    }
    json matrix;
    BlochVector bloch;
    bool have_matrix = false;
    if (j.contains("bloch")) {
        bloch = bloch_from_json(j.at("bloch"));
    } else if (j.contains("matrix")) {
        matrix = j.at("matrix");
        have_matrix = true;
    } else {
        throw schema_error("state: needs a \"bloch\" or \"matrix\" key");
    }
    try {
        return have_matrix ? DensityMatrix(matrix_from_json(matrix)) : bloch_to_density(bloch);
    } catch (const schema_error&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw invariant_error(std::string("state: ") + e.what());
    }
}

inline BinaryMeasurement measurement_from_json(const json& j, const std::string& name) {
    if (!j.is_object()) {
        throw schema_error("measurement " + name + ": expected an object");
    }
    try {
        if (j.contains("bloch")) {
            return projective_measurement(bloch_from_json(j.at("bloch")));
        }
        if (j.contains("matrix")) {
            // the dichotomic measurement operator E0 - E1
            return BinaryMeasurement::from_observable(matrix_from_json(j.at("matrix")));
        }
        if (j.contains("povm")) {
            const json& p = j.at("povm");
            if (!p.is_object() || !p.contains("direction") || !p.contains("sharpness")) {
                throw schema_error("measurement " + name +
                                   ": povm needs direction and sharpness");
            }
            return biased_effect_pair(bloch_from_json(p.at("direction")),
                                      p.at("sharpness").get<double>(),
                                      p.value("bias", 0.0));
        }
    } catch (const schema_error&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw invariant_error("measurement " + name + ": " + e.what());
    }
    throw schema_error("measurement " + name + ": needs \"bloch\", \"matrix\" or \"povm\"");
}

inline Scenario scenario_from_json(const json& j) {
    if (!j.is_object() || !j.contains("state") || !j.contains("measurements")) {
        throw schema_error("scenario: needs \"state\" and \"measurements\"");
    }
    const json& meas = j.at("measurements");
    if (!meas.is_object() || meas.size() != 4 || !meas.contains("A1") || !meas.contains("A2") ||
        !meas.contains("B1") || !meas.contains("B2")) {
        throw schema_error("scenario: measurements must be exactly A1, A2, B1, B2");
    }
    DensityMatrix state = state_from_json(j.at("state"));
    std::array<BinaryMeasurement, 2> alice{measurement_from_json(meas.at("A1"), "A1"),
                                           measurement_from_json(meas.at("A2"), "A2")};
    std::array<BinaryMeasurement, 2> bob{measurement_from_json(meas.at("B1"), "B1"),
                                         measurement_from_json(meas.at("B2"), "B2")};
    try {
        return Scenario(std::move(state), std::move(alice), std::move(bob));
    } catch (const std::invalid_argument& e) {
        throw invariant_error(std::string("scenario: ") + e.what());
    }
}

/// Serialization that round-trips: the state matrix plus each measurement's
/// operator (E0 - E1), all with full double precision.
inline json scenario_to_json(const Scenario& s) {
    json out;
    out["state"] = {{"matrix", matrix_to_json(s.state.matrix())}};
    out["measurements"] = {{"A1", {{"matrix", matrix_to_json(s.alice[0].observable())}}},
                           {"A2", {{"matrix", matrix_to_json(s.alice[1].observable())}}},
                           {"B1", {{"matrix", matrix_to_json(s.bob[0].observable())}}},
                           {"B2", {{"matrix", matrix_to_json(s.bob[1].observable())}}}};
    return out;
}

inline StatisticsTable statistics_from_json(const json& j) {
    if (!j.is_object() || !j.contains("joint") || !j.at("joint").is_object()) {
        throw schema_error("statistics: needs a \"joint\" object keyed \"i,j,a,b\"");
    }
    StatisticsTable t;
    t.tolerance = j.value("tolerance", 1e-6);
    const json& joint = j.at("joint");
    for (int i = 1; i <= 2; ++i) {
        for (int jj = 1; jj <= 2; ++jj) {
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    const std::string key = std::to_string(i) + "," + std::to_string(jj) + "," +
                                            std::to_string(a) + "," + std::to_string(b);
                    if (!joint.contains(key) || !joint.at(key).is_number()) {
                        throw schema_error("statistics: missing joint probability \"" + key + "\"");
                    }
                    t.joint[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(jj - 1)]
                           [static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
                               joint.at(key).get<double>();
                }
            }
        }
    }
    if (j.contains("marginalsNoAlice")) {
        const json& marg = j.at("marginalsNoAlice");
        std::array<std::array<double, 2>, 2> m{};
        for (int jj = 1; jj <= 2; ++jj) {
            for (int b = 0; b < 2; ++b) {
                const std::string key = std::to_string(jj) + "," + std::to_string(b);
                if (!marg.contains(key) || !marg.at(key).is_number()) {
                    throw schema_error("statistics: missing marginal \"" + key + "\"");
                }
                m[static_cast<std::size_t>(jj - 1)][static_cast<std::size_t>(b)] =
                    marg.at(key).get<double>();
            }
        }
        t.marginalsNoAlice = m;
    }
    return t;
}

inline json report_to_json(const CorrelationReport& r) {
    json joint;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    const std::string key = std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                            "," + std::to_string(a) + "," + std::to_string(b);
                    joint[key] = r.jointProbabilities[static_cast<std::size_t>(i)]
                                                     [static_cast<std::size_t>(j)]
                                                     [static_cast<std::size_t>(a)]
                                                     [static_cast<std::size_t>(b)];
                }
            }
        }
    }
    return json{{"k4", r.k4},
                {"correlators",
                 {{"C11", r.correlators[0][0]},
                  {"C12", r.correlators[0][1]},
                  {"C21", r.correlators[1][0]},
                  {"C22", r.correlators[1][1]}}},
                {"jointProbabilities", std::move(joint)},
                {"nsitDeviation", r.nsitDeviation},
                {"predictabilityDeviation", r.predictabilityDeviation}};
}

inline std::string format_fixed9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9f", v);
    return buf;
}

inline std::string report_to_csv(const CorrelationReport& r) {
    std::string out = "quantity,value\n";
    out += "k4," + format_fixed9(r.k4) + "\n";
    out += "C11," + format_fixed9(r.correlators[0][0]) + "\n";
    out += "C12," + format_fixed9(r.correlators[0][1]) + "\n";
    out += "C21," + format_fixed9(r.correlators[1][0]) + "\n";
    out += "C22," + format_fixed9(r.correlators[1][1]) + "\n";
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    out += "joint_" + std::to_string(i + 1) + "_" + std::to_string(j + 1) + "_" +
                           std::to_string(a) + "_" + std::to_string(b) + "," +
                           format_fixed9(r.jointProbabilities[static_cast<std::size_t>(i)]
                                                             [static_cast<std::size_t>(j)]
                                                             [static_cast<std::size_t>(a)]
                                                             [static_cast<std::size_t>(b)]) +
                           "\n";
                }
            }
        }
    }
    out += "nsitDeviation," + format_fixed9(r.nsitDeviation) + "\n";
    out += "predictabilityDeviation," + format_fixed9(r.predictabilityDeviation) + "\n";
    return out;
}

inline json povm_params_to_json(const PovmParams& p) {
    const auto bloch = [](const BlochVector& v) { return json::array({v.x, v.y, v.z}); };
    return json{{"sharpnessAlice", {p.sharpnessAlice[0], p.sharpnessAlice[1]}},
                {"sharpnessBob", {p.sharpnessBob[0], p.sharpnessBob[1]}},
                {"biasAlice", p.biasAlice},
                {"biasBob", p.biasBob},
                {"directions",
                 {{"A1", bloch(p.directions[0])},
                  {"A2", bloch(p.directions[1])},
                  {"B1", bloch(p.directions[2])},
                  {"B2", bloch(p.directions[3])}}},
                {"inputBloch", bloch(p.inputBloch)}};
}

inline json optimization_result_to_json(const OptimizationResult& r) {
    return json{{"bestK4", r.bestK4},
                {"bestParams", povm_params_to_json(r.bestParams)},
                {"iterations", r.iterations},
                {"converged", r.converged},
                {"seed", r.seed}};
}

inline std::string curve_to_csv(const std::vector<CurvePoint>& curve) {
    std::string out = "phi,k4,fidelity,bound\n";
    for (const CurvePoint& p : curve) {
        out += format_fixed9(p.phi) + "," + format_fixed9(p.k4) + "," + format_fixed9(p.fidelity) +
               "," + format_fixed9(fidelity_lower_bound(p.k4)) + "\n";
    }
    return out;
}

inline json curve_to_json(const std::vector<CurvePoint>& curve) {
    json out = json::array();
    for (const CurvePoint& p : curve) {
        out.push_back(json{{"phi", p.phi},
                           {"k4", p.k4},
                           {"fidelity", p.fidelity},
                           {"bound", fidelity_lower_bound(p.k4)}});
    }
    return out;
}

} // namespace lgst::io
