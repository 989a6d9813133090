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

#include "trajlind/matcore.hpp"

#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace trajlind {

bool all_finite(const CMat& a) {
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const Complex z = a(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
  }
  return true;
}

CMat kron(const CMat& a, const CMat& b) {
  return Eigen::kroneckerProduct(a, b);
}

CVec vec(const CMat& a) {
  return Eigen::Map<const CVec>(a.data(), a.size());
}

CMat unvec(const CVec& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols) throw ShapeError("unvec: size mismatch");
  return Eigen::Map<const CMat>(v.data(), rows, cols);
}

SuperOp::SuperOp(Eigen::Index d, CMat m) : dim(d), matrix(std::move(m)) {
  if (dim <= 0 || matrix.rows() != dim * dim || matrix.cols() != dim * dim)
    throw ShapeError("SuperOp: matrix must be dim^2 x dim^2");
}

SuperOp SuperOp::identity(Eigen::Index d) {
  return SuperOp(d, CMat::Identity(d * d, d * d));
}

SuperOp SuperOp::zero(Eigen::Index d) {
  return SuperOp(d, CMat::Zero(d * d, d * d));
}

CMat SuperOp::apply(const CMat& rho) const {
  if (rho.rows() != dim || rho.cols() != dim)
    throw ShapeError("SuperOp::apply: operand dimension mismatch");
  return unvec(matrix * vec(rho), dim, dim);
}

ChoiMat::ChoiMat(Eigen::Index d, CMat m) : dim(d), matrix(std::move(m)) {
  if (dim <= 0 || matrix.rows() != dim * dim || matrix.cols() != dim * dim)
    throw ShapeError("ChoiMat: matrix must be dim^2 x dim^2");
}

double op_norm(const CMat& a) {
  if (a.size() == 0) throw ShapeError("op_norm: empty matrix");
  if (!all_finite(a)) throw std::invalid_argument("op_norm: non-finite entries");
  Eigen::JacobiSVD<CMat> svd(a);
  return svd.singularValues()(0);
}

double trace_norm(const CMat& a) {
  if (a.rows() != a.cols()) throw ShapeError("trace_norm: matrix must be square");
  if (!all_finite(a)) throw std::invalid_argument("trace_norm: non-finite entries");
  Eigen::JacobiSVD<CMat> svd(a);
  return svd.singularValues().sum();
}

CMat expm(const CMat& a) {
  if (a.rows() != a.cols()) throw ShapeError("expm: matrix must be square");
  if (!all_finite(a)) throw std::invalid_argument("expm: non-finite entries");
  return a.exp();
}

SuperOp kraus_to_superop(const std::vector<CMat>& kraus) {
  if (kraus.empty()) throw ShapeError("kraus_to_superop: empty Kraus set");
  const Eigen::Index d = kraus.front().rows();
  CMat s = CMat::Zero(d * d, d * d);
  for (const CMat& k : kraus) {
    if (k.rows() != d || k.cols() != d)
      throw ShapeError("kraus_to_superop: mixed Kraus dimensions");
    s += kron(k.conjugate(), k);
  }
  return SuperOp(d, std::move(s));
}

// superop <-> Choi is an index reshuffle (an involution):
// J[(a,i),(b,j)] = S[(b,a),(j,i)] with (x,y) = x*d + y.
ChoiMat superop_to_choi(const SuperOp& s) {
  const Eigen::Index d = s.dim;
  CMat j(d * d, d * d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index b = 0; b < d; ++b)
        for (Eigen::Index jj = 0; jj < d; ++jj)
          j(a * d + i, b * d + jj) = s.matrix(b * d + a, jj * d + i);
  return ChoiMat(d, std::move(j));
}

SuperOp choi_to_superop(const ChoiMat& c) {
  const Eigen::Index d = c.dim;
  CMat s(d * d, d * d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index b = 0; b < d; ++b)
        for (Eigen::Index jj = 0; jj < d; ++jj)
          s(b * d + a, jj * d + i) = c.matrix(a * d + i, b * d + jj);
  return SuperOp(d, std::move(s));
}

std::vector<CMat> kraus_from_choi(const ChoiMat& c, double tol) {
  const Eigen::Index d = c.dim;
  const CMat herm = 0.5 * (c.matrix + c.matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(herm);
  std::vector<CMat> kraus;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double lambda = es.eigenvalues()(k);
    if (lambda <= tol) continue;
    const CVec v = es.eigenvectors().col(k);
    // Choi eigenvectors flatten Kraus operators row-major: v[(a,i)] = K(a,i).
    CMat op(d, d);
    for (Eigen::Index a = 0; a < d; ++a)
      for (Eigen::Index i = 0; i < d; ++i) op(a, i) = v(a * d + i);
    kraus.push_back(std::sqrt(lambda) * op);
  }
  return kraus;
}

DiamondBounds diamond_distance_bounds(const SuperOp& s1, const SuperOp& s2) {
  if (s1.dim != s2.dim)
    throw ShapeError("diamond_distance_bounds: dimension mismatch");
  const ChoiMat dj = superop_to_choi(SuperOp(s1.dim, s1.matrix - s2.matrix));
  const double t = 0.5 * trace_norm(dj.matrix);
  return DiamondBounds{t / static_cast<double>(s1.dim), t};
}

CMat partial_trace(const CMat& a, Eigen::Index dim_a, Eigen::Index dim_b,
                   Keep keep) {
  if (a.rows() != a.cols() || a.rows() != dim_a * dim_b)
    throw ShapeError("partial_trace: dimension factorization mismatch");
  if (keep == Keep::First) {
    CMat out = CMat::Zero(dim_a, dim_a);
    for (Eigen::Index i = 0; i < dim_a; ++i)
      for (Eigen::Index j = 0; j < dim_a; ++j)
        for (Eigen::Index k = 0; k < dim_b; ++k)
          out(i, j) += a(i * dim_b + k, j * dim_b + k);
    return out;
  }
  CMat out = CMat::Zero(dim_b, dim_b);
  for (Eigen::Index i = 0; i < dim_b; ++i)
    for (Eigen::Index j = 0; j < dim_b; ++j)
      for (Eigen::Index k = 0; k < dim_a; ++k)
        out(i, j) += a(k * dim_b + i, k * dim_b + j);
  return out;
}

double trace_preservation_residual(const SuperOp& s) {
  const Eigen::Index d = s.dim;
  // Tr(Phi(X)) = Tr(X) for all X  <=>  S' vec(I) = vec(I).
  const CVec id_vec = vec(CMat::Identity(d, d));
  return (s.matrix.adjoint() * id_vec - id_vec).cwiseAbs().maxCoeff();
}

double choi_min_eigenvalue(const SuperOp& s) {
  const ChoiMat c = superop_to_choi(s);
  const CMat herm = 0.5 * (c.matrix + c.matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace trajlind
