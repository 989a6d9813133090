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

#include "trajlind/matcore.hpp"

namespace trajlind {

/// Lindblad master equation data: Hamiltonian H plus jump operators
/// {L_mu}. An empty jump list means pure Hamiltonian dynamics.
struct LindbladModel {
  Eigen::Index dim = 0;
  CMat hamiltonian;
  std::vector<CMat> jumps;

  LindbladModel(CMat h, std::vector<CMat> ls);
};

/// Result of testing the admissibility constraint sum L'L = Gamma I.
/// gamma is the least-squares optimal multiple of the identity,
/// Tr(sum L'L) / dim; residual is measured in operator norm.
struct ConstraintReport {
  double gamma = 0.0;
  double residual = 0.0;
  bool admissible = false;
};

ConstraintReport check_constraint(const LindbladModel& model,
                                  double tol = 1e-8);

/// Superoperator of rho -> -i[H,rho] + sum(L rho L' - 1/2 {L'L, rho}).
SuperOp liouvillian(const LindbladModel& model);

/// H - (i/2) sum L'L. For admissible models this is H - (i Gamma / 2) I,
/// so pure-state norms decay as exp(-Gamma t) regardless of the state.
CMat effective_hamiltonian(const LindbladModel& model);

/// Jump-operator mixing L'_mu = sum_alpha u[mu][alpha] L_alpha; leaves the
/// Liouvillian and the admissibility residual unchanged.
LindbladModel unitary_mix(const LindbladModel& model, const CMat& u);

/// L'_mu = L_mu + a_mu I together with the compensating Hamiltonian shift
/// H' = H + (1/2i) sum(conj(a) L - a L') + b I; leaves the Liouvillian
/// unchanged but generally breaks admissibility.
LindbladModel inhomogeneous_transform(const LindbladModel& model,
                                      const std::vector<Complex>& a, double b);

struct ChannelForm {
  double gamma = 0.0;
  std::vector<CMat> kraus;  // K_mu = L_mu / sqrt(Gamma)
};

/// Splits an admissible model as -i ad_H + Gamma (R - Id) with R the CPTP
/// map whose Kraus operators are L_mu / sqrt(Gamma).
ChannelForm decompose_channel_form(const LindbladModel& model,
                                   double tol = 1e-8);

/// Generator induced on the second factor S of A kron S by
/// rho -> Tr_A[K(omega_A kron rho)], returned in admissible form with the
/// same Gamma as the input.
LindbladModel induced_subsystem_generator(const LindbladModel& model_k,
                                          const CMat& omega_a,
                                          double tol = 1e-8);

/// For a pure dissipator (H = 0, Gamma > 0) returns
/// Phi_t = (exp(t D) - exp(-t Gamma) Id) / (1 - exp(-t Gamma)),
/// which is CPTP.
SuperOp extract_phi(const LindbladModel& model_d, double t, double tol = 1e-8);

/// True iff {K_mu' K_nu} is linearly independent, i.e. the channel is an
/// extreme point of the CPTP set.
bool is_extreme_channel(const std::vector<CMat>& kraus,
                        double rank_tol = 1e-8);

}  // namespace trajlind
