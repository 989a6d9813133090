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

#include <vector>

#include "trajlind/lindblad.hpp"
#include "trajlind/matcore.hpp"

namespace trajlind {

/// Unitary dilation U on ancilla (x) system whose top-left block, flagged
/// by the ancilla in |0>, equals A / alpha.
struct BlockEncoding {
  CMat unitary;
  double alpha = 0.0;
  int ancilla_qubits = 0;
  Eigen::Index encoded_dim = 0;
};

/// One-ancilla exact dilation via singular-value completion,
/// U = [[S, sqrt(I - S S')], [sqrt(I - S' S), -S']] with S = A / alpha.
/// Requires alpha >= ||A|| (up to 1e-12 slack).
BlockEncoding build_block_encoding(const CMat& a, double alpha);

/// Householder reflection on ceil(log2(m')) index qubits whose first
/// column is the normalized vector (alpha_1, ..., alpha_m,
/// sqrt(padded_weight), 0, ...). m' is m, plus one dummy slot when
/// padded_weight > 0, rounded up to a power of two.
CMat build_prep_oracle(const std::vector<double>& alphas, double padded_weight);

/// W = (sum_mu |mu><mu| (x) U(L_mu)) (B (x) I (x) I) on
/// index (x) ancilla (x) system. Index slots beyond the encoding list map
/// the ancilla |0> to an orthogonal state, so any dummy branch always
/// fails post-selection.
CMat build_w(const std::vector<BlockEncoding>& encodings, const CMat& prep);

/// Probability of finding the block-encoding ancilla in |0> after applying
/// w to |0>|0>(x)rho; equals Gamma / sum(alpha^2) for admissible models,
/// independent of rho. The register split (index_dim, ancilla_qubits,
/// system) must match the one w was built on.
double success_probability(const CMat& w, Eigen::Index index_dim,
                           int ancilla_qubits, const CMat& rho);

/// Jump gadget: W plus the amplitude-amplification iterate data needed to
/// apply the averaged jump channel deterministically.
struct JumpGadget {
  CMat prep_oracle;
  CMat select_unitary;
  CMat w_circuit;
  double p0 = 0.0;            // single-shot success probability after padding
  double theta = 0.0;         // arcsin(sqrt(p0))
  int iterations = 0;         // t with (2t+1) theta = pi/2
  double padded_weight = 0.0;
  Eigen::Index index_dim = 0;   // m'
  int ancilla_qubits = 0;
  Eigen::Index system_dim = 0;

  /// -W (I - 2 P1) W' (I - 2 P0), the amplification iterate.
  CMat iterate() const;
  /// iterate()^t W, the complete circuit.
  CMat full_circuit() const;
  /// Channel on the system register: ancillas in, ancillas traced out.
  SuperOp system_channel() const;
};

/// Builds block encodings with the given scales, selects the smallest
/// iterate count t with (2t+1) arcsin(sqrt(p0)) >= pi/2, and pads the
/// preparation oracle with a dummy branch so that equality holds exactly.
JumpGadget build_jump_gadget(const LindbladModel& model,
                             const std::vector<double>& alphas,
                             double tol = 1e-8);

/// Query/gate/ancilla counts, big-O arguments evaluated with all constants
/// set to one.
struct ResourceLedger {
  double jump_queries = 0.0;
  double hamiltonian_queries = 0.0;
  double gate_count = 0.0;
  int ancilla_count = 0;
};

ResourceLedger resource_ledger(double gamma, double total_time, double epsilon,
                               double alpha_h, const std::vector<double>& alphas,
                               int m, int a);

}  // namespace trajlind
