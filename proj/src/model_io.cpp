// Copyright 2026 The trajlind authors
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

#include "trajlind/model_io.hpp"

#include <fstream>

namespace trajlind {

namespace {

CMat matrix_from_json(const nlohmann::json& j, Eigen::Index dim,
                      const std::string& what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != dim)
    throw ParseError(what + ": expected " + std::to_string(dim) + " rows");
  CMat m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    const auto& row = j[r];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim)
      throw ParseError(what + ": row " + std::to_string(r) + " has wrong length");
    for (Eigen::Index c = 0; c < dim; ++c) {
      const auto& entry = row[c];
      if (!entry.is_array() || entry.size() != 2 ||
          !entry[0].is_number() || !entry[1].is_number())
        throw ParseError(what + ": entry (" + std::to_string(r) + "," +
                         std::to_string(c) + ") must be a [re, im] pair");
      m(r, c) = Complex(entry[0].get<double>(), entry[1].get<double>());
    }
  }
  return m;
}

nlohmann::json matrix_to_json(const CMat& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

LindbladModel model_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("model: top level must be an object");
  if (!j.contains("n_qubits") || !j["n_qubits"].is_number_integer())
    throw ParseError("model: missing integer field \"n_qubits\"");
  const long n = j["n_qubits"].get<long>();
  if (n < 1 || n > 20) throw ParseError("model: n_qubits out of range [1, 20]");
  const Eigen::Index dim = Eigen::Index(1) << n;

  if (!j.contains("hamiltonian"))
    throw ParseError("model: missing field \"hamiltonian\"");
  CMat h = matrix_from_json(j["hamiltonian"], dim, "hamiltonian");
  const double herm = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-8)
    throw ParseError("model: hamiltonian is not Hermitian (max deviation " +
                     std::to_string(herm) + ")");
  h = 0.5 * (h + h.adjoint());

  std::vector<CMat> jumps;
  if (j.contains("jumps")) {
    if (!j["jumps"].is_array())
      throw ParseError("model: \"jumps\" must be an array of matrices");
    for (std::size_t k = 0; k < j["jumps"].size(); ++k)
      jumps.push_back(matrix_from_json(j["jumps"][k], dim,
                                       "jumps[" + std::to_string(k) + "]"));
  }
  return LindbladModel(std::move(h), std::move(jumps));
}

nlohmann::json model_to_json(const LindbladModel& model) {
  long n = 0;
  while ((Eigen::Index(1) << n) < model.dim) ++n;
  nlohmann::json j;
  j["n_qubits"] = n;
  j["hamiltonian"] = matrix_to_json(model.hamiltonian);
  j["jumps"] = nlohmann::json::array();
  for (const CMat& l : model.jumps) j["jumps"].push_back(matrix_to_json(l));
  return j;
}

LindbladModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("malformed JSON in " + path + ": " + e.what());
  }
  try {
    return model_from_json(j);
  } catch (const std::invalid_argument& e) {
    throw ParseError("invalid model in " + path + ": " + e.what());
  }
}

void save_model(const LindbladModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write model file: " + path);
  out << model_to_json(model).dump(2) << "\n";
}

}  // namespace trajlind
