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

#pragma once

#include <string>

#include <json.hpp>

#include "trajlind/lindblad.hpp"

namespace trajlind {

class ParseError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Model file schema:
///   {"n_qubits": n, "hamiltonian": Mat, "jumps": [Mat, ...]}
/// where Mat is a nested array of [re, im] pairs in row-major order.
/// Non-Hermitian Hamiltonians (beyond 1e-8) are rejected.
LindbladModel model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const LindbladModel& model);

LindbladModel load_model(const std::string& path);
void save_model(const LindbladModel& model, const std::string& path);

}  // namespace trajlind
