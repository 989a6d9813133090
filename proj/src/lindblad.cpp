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

#include "trajlind/lindblad.hpp"

#include <cmath>
#include <string>

namespace trajlind {

namespace {

CMat jump_sum(const LindbladModel& model) {
  CMat s = CMat::Zero(model.dim, model.dim);
  for (const CMat& l : model.jumps) s += l.adjoint() * l;
  return s;
}

}  // namespace

LindbladModel::LindbladModel(CMat h, std::vector<CMat> ls)
    : dim(h.rows()), hamiltonian(std::move(h)), jumps(std::move(ls)) {
  if (dim <= 0 || hamiltonian.cols() != dim)
    throw ShapeError("LindbladModel: Hamiltonian must be square");
  if (!all_finite(hamiltonian))
    throw std::invalid_argument("LindbladModel: non-finite Hamiltonian");
  if ((hamiltonian - hamiltonian.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("LindbladModel: Hamiltonian is not Hermitian");
  for (const CMat& l : jumps) {
    if (l.rows() != dim || l.cols() != dim)
      throw ShapeError("LindbladModel: jump operator dimension mismatch");
    if (!all_finite(l))
      throw std::invalid_argument("LindbladModel: non-finite jump operator");
  }
}

ConstraintReport check_constraint(const LindbladModel& model, double tol) {
  ConstraintReport report;
  if (model.jumps.empty()) {
    report.admissible = true;
    return report;
  }
  const CMat s = jump_sum(model);
  report.gamma = s.trace().real() / static_cast<double>(model.dim);
  report.residual =
      op_norm(s - report.gamma * CMat::Identity(model.dim, model.dim));
  report.admissible = report.residual <= tol;
  return report;
}

SuperOp liouvillian(const LindbladModel& model) {
  const Eigen::Index d = model.dim;
  const CMat id = CMat::Identity(d, d);
  const Complex mi(0.0, -1.0);
  CMat s = mi * (kron(id, model.hamiltonian) -
                 kron(model.hamiltonian.transpose(), id));
  for (const CMat& l : model.jumps) {
    const CMat ldl = l.adjoint() * l;
    s += kron(l.conjugate(), l) -
         0.5 * (kron(id, ldl) + kron(ldl.transpose(), id));
  }
  return SuperOp(d, std::move(s));
}

CMat effective_hamiltonian(const LindbladModel& model) {
  return model.hamiltonian - Complex(0.0, 0.5) * jump_sum(model);
}

LindbladModel unitary_mix(const LindbladModel& model, const CMat& u) {
  const Eigen::Index m = static_cast<Eigen::Index>(model.jumps.size());
  if (u.rows() != m || u.cols() != m)
    throw ShapeError("unitary_mix: u must be m x m");
  if ((u.adjoint() * u - CMat::Identity(m, m)).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("unitary_mix: u is not unitary");
  std::vector<CMat> mixed;
  mixed.reserve(model.jumps.size());
  for (Eigen::Index mu = 0; mu < m; ++mu) {
    CMat l = CMat::Zero(model.dim, model.dim);
    for (Eigen::Index alpha = 0; alpha < m; ++alpha)
      l += u(mu, alpha) * model.jumps[alpha];
    mixed.push_back(std::move(l));
  }
  return LindbladModel(model.hamiltonian, std::move(mixed));
}

LindbladModel inhomogeneous_transform(const LindbladModel& model,
                                      const std::vector<Complex>& a,
                                      double b) {
  if (a.size() != model.jumps.size())
    throw ShapeError("inhomogeneous_transform: coefficient count mismatch");
  const CMat id = CMat::Identity(model.dim, model.dim);
  std::vector<CMat> shifted;
  shifted.reserve(model.jumps.size());
  CMat h = model.hamiltonian + b * id;
  const Complex half_over_i(0.0, -0.5);  // 1/(2i)
  for (std::size_t mu = 0; mu < a.size(); ++mu) {
    shifted.push_back(model.jumps[mu] + a[mu] * id);
    h += half_over_i * (std::conj(a[mu]) * model.jumps[mu] -
                        a[mu] * model.jumps[mu].adjoint());
  }
  return LindbladModel(std::move(h), std::move(shifted));
}

ChannelForm decompose_channel_form(const LindbladModel& model, double tol) {
  const ConstraintReport report = check_constraint(model, tol);
  if (!report.admissible)
    throw ConstraintError("decompose_channel_form: model is not admissible, residual " +
                          std::to_string(report.residual));
  ChannelForm form;
  form.gamma = report.gamma;
  if (report.gamma <= 0.0) return form;
  const double scale = 1.0 / std::sqrt(report.gamma);
  for (const CMat& l : model.jumps) form.kraus.push_back(scale * l);
  return form;
}

LindbladModel induced_subsystem_generator(const LindbladModel& model_k,
                                          const CMat& omega_a, double tol) {
  const Eigen::Index dim_a = omega_a.rows();
  if (omega_a.cols() != dim_a || dim_a <= 0 || model_k.dim % dim_a != 0)
    throw ShapeError("induced_subsystem_generator: omega_A does not factor the model");
  const Eigen::Index dim_s = model_k.dim / dim_a;

  if (std::abs(omega_a.trace().real() - 1.0) > 1e-8 ||
      std::abs(omega_a.trace().imag()) > 1e-8)
    throw std::invalid_argument("induced_subsystem_generator: omega_A must have unit trace");
  {
    Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (omega_a + omega_a.adjoint()),
                                           Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10 ||
        (omega_a - omega_a.adjoint()).cwiseAbs().maxCoeff() > 1e-8)
      throw std::invalid_argument("induced_subsystem_generator: omega_A must be a density matrix");
  }

  const ChannelForm form = decompose_channel_form(model_k, tol);

  // H_A is the unique operator with Tr(H_A rho) = Tr(H (omega_A kron rho)).
  const CMat id_s = CMat::Identity(dim_s, dim_s);
  CMat h_a = partial_trace(kron(omega_a, id_s) * model_k.hamiltonian, dim_a,
                           dim_s, Keep::Second);
  h_a = 0.5 * (h_a + h_a.adjoint());

  if (form.gamma <= 0.0) return LindbladModel(std::move(h_a), {});

  // R_A(rho) = Tr_A[R(omega_A kron rho)], assembled column by column.
  const SuperOp r_full = kraus_to_superop(form.kraus);
  CMat r_a_matrix(dim_s * dim_s, dim_s * dim_s);
  for (Eigen::Index j = 0; j < dim_s; ++j) {
    for (Eigen::Index i = 0; i < dim_s; ++i) {
      CMat basis = CMat::Zero(dim_s, dim_s);
      basis(i, j) = 1.0;
      const CMat image =
          partial_trace(r_full.apply(kron(omega_a, basis)), dim_a, dim_s,
                        Keep::Second);
      r_a_matrix.col(j * dim_s + i) = vec(image);
    }
  }
  const std::vector<CMat> kraus_a =
      kraus_from_choi(superop_to_choi(SuperOp(dim_s, std::move(r_a_matrix))));

  std::vector<CMat> jumps;
  const double root_gamma = std::sqrt(form.gamma);
  for (const CMat& k : kraus_a) jumps.push_back(root_gamma * k);
  return LindbladModel(std::move(h_a), std::move(jumps));
}

SuperOp extract_phi(const LindbladModel& model_d, double t, double tol) {
  if (op_norm(model_d.hamiltonian) > 1e-10)
    throw std::invalid_argument("extract_phi: model must have H = 0");
  const ConstraintReport report = check_constraint(model_d, tol);
  if (!report.admissible)
    throw ConstraintError("extract_phi: model is not admissible");
  if (t <= 0.0 || report.gamma <= 0.0)
    throw std::domain_error("extract_phi: requires t > 0 and Gamma > 0");
  const SuperOp gen = liouvillian(model_d);
  const double decay = std::exp(-t * report.gamma);
  const Eigen::Index d = model_d.dim;
  CMat phi = (expm(t * gen.matrix) - decay * CMat::Identity(d * d, d * d)) /
             (1.0 - decay);
  return SuperOp(d, std::move(phi));
}

bool is_extreme_channel(const std::vector<CMat>& kraus, double rank_tol) {
  if (kraus.empty()) throw std::invalid_argument("is_extreme_channel: empty Kraus set");
  const Eigen::Index d = kraus.front().rows();
  CMat sum = CMat::Zero(d, d);
  for (const CMat& k : kraus) {
    if (k.rows() != d || k.cols() != d)
      throw ShapeError("is_extreme_channel: mixed Kraus dimensions");
    sum += k.adjoint() * k;
  }
  if ((sum - CMat::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-8)
    throw std::invalid_argument("is_extreme_channel: Kraus set is not trace-preserving");

  const Eigen::Index m = static_cast<Eigen::Index>(kraus.size());
  CMat stacked(m * m, d * d);
  for (Eigen::Index mu = 0; mu < m; ++mu)
    for (Eigen::Index nu = 0; nu < m; ++nu)
      stacked.row(mu * m + nu) = vec(kraus[mu].adjoint() * kraus[nu]).transpose();
  Eigen::JacobiSVD<CMat> svd(stacked);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rank_tol * sv(0)) ++rank;
  return rank == m * m;
}

}  // namespace trajlind
