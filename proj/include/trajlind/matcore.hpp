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

#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace trajlind {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

class ShapeError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Raised when an operation requires an admissible model (sum L'L = Gamma I)
// and the input is not.
class ConstraintError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool all_finite(const CMat& a);

CMat kron(const CMat& a, const CMat& b);

/// vec/unvec use the column-stacking convention throughout the project:
/// vec(A X B) = (B^T kron A) vec(X).
CVec vec(const CMat& a);
CMat unvec(const CVec& v, Eigen::Index rows, Eigen::Index cols);

/// Superoperator on a d-dimensional system, stored as a d^2 x d^2 matrix
/// acting on column-stacked density matrices.
struct SuperOp {
  Eigen::Index dim = 0;
  CMat matrix;

  SuperOp() = default;
  SuperOp(Eigen::Index d, CMat m);

  static SuperOp identity(Eigen::Index d);
  static SuperOp zero(Eigen::Index d);

  CMat apply(const CMat& rho) const;
};

/// Unnormalized Choi matrix J(Phi) = sum_ij Phi(|i><j|) kron |i><j|,
/// output factor first. For CPTP maps Tr J = dim and the partial trace
/// over the output factor is the identity.
struct ChoiMat {
  Eigen::Index dim = 0;
  CMat matrix;

  ChoiMat() = default;
  ChoiMat(Eigen::Index d, CMat m);
};

/// Largest singular value.
double op_norm(const CMat& a);

/// Sum of singular values, Tr sqrt(A'A).
double trace_norm(const CMat& a);

/// Matrix exponential (scaling-and-squaring). Unitary to ~1e-12 for
/// anti-Hermitian input at the dimensions used here (<= 256).
CMat expm(const CMat& a);

/// sum_mu conj(K_mu) kron K_mu; applying to vec(rho) gives
/// vec(sum K rho K').
SuperOp kraus_to_superop(const std::vector<CMat>& kraus);

ChoiMat superop_to_choi(const SuperOp& s);
SuperOp choi_to_superop(const ChoiMat& c);

/// Kraus decomposition of a completely positive map from the eigensystem
/// of its (Hermitized) Choi matrix; eigenvalues below tol are dropped.
std::vector<CMat> kraus_from_choi(const ChoiMat& c, double tol = 1e-12);

struct DiamondBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Rigorous interval for the diamond distance (1/2)||S1 - S2||_diamond:
/// (1/2)||dJ||_1 / d <= distance <= (1/2)||dJ||_1 with dJ the Choi of the
/// difference.
DiamondBounds diamond_distance_bounds(const SuperOp& s1, const SuperOp& s2);

enum class Keep { First, Second };

/// Partial trace of a (dim_a * dim_b)-dimensional operator; `keep` names
/// the factor that survives.
CMat partial_trace(const CMat& a, Eigen::Index dim_a, Eigen::Index dim_b,
                   Keep keep);

/// max_ij |Tr(Phi(E_ij)) - Tr(E_ij)| over basis matrices (0 for
/// trace-preserving maps).
double trace_preservation_residual(const SuperOp& s);

/// Smallest eigenvalue of the Hermitized Choi matrix (>= 0 up to round-off
/// for completely positive maps).
double choi_min_eigenvalue(const SuperOp& s);

}  // namespace trajlind
