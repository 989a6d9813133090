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

#include "trajlind/gadgets.hpp"

#include <cmath>
#include <numbers>

namespace trajlind {

namespace {

Eigen::Index next_pow2(Eigen::Index n) {
  Eigen::Index p = 1;
  while (p < n) p <<= 1;
  return p;
}

// sqrt(I - S S') (or I - S' S) from the singular values of S, with tiny
// negative diagonal values clipped at zero.
CMat psd_sqrt_complement(const CMat& basis, const Eigen::VectorXd& sigma) {
  Eigen::VectorXd root(sigma.size());
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    const double rem = 1.0 - sigma(i) * sigma(i);
    if (rem < -1e-12)
      throw std::domain_error("build_block_encoding: alpha below operator norm");
    root(i) = std::sqrt(std::max(rem, 0.0));
  }
  return basis * root.asDiagonal() * basis.adjoint();
}

// On the ancilla register: X on the first qubit, identity elsewhere. Used
// for index slots without a block encoding so they never post-select.
CMat ancilla_flip(Eigen::Index anc_dim) {
  CMat f = CMat::Zero(anc_dim, anc_dim);
  const Eigen::Index half = anc_dim / 2;
  for (Eigen::Index i = 0; i < anc_dim; ++i) f(i ^ half, i) = 1.0;
  return f;
}

// sum_mu |mu><mu| (x) U(L_mu), with the flip unitary on index slots that
// carry no encoding.
CMat build_select(const std::vector<BlockEncoding>& encodings,
                  Eigen::Index index_dim) {
  const Eigen::Index d = encodings.front().encoded_dim;
  const Eigen::Index anc_dim = Eigen::Index(1)
                               << encodings.front().ancilla_qubits;
  const Eigen::Index block = anc_dim * d;
  CMat select = CMat::Zero(index_dim * block, index_dim * block);
  const CMat fail = kron(ancilla_flip(anc_dim), CMat::Identity(d, d));
  for (Eigen::Index mu = 0; mu < index_dim; ++mu) {
    const CMat& u = mu < static_cast<Eigen::Index>(encodings.size())
                        ? encodings[mu].unitary
                        : fail;
    select.block(mu * block, mu * block, block, block) = u;
  }
  return select;
}

}  // namespace

BlockEncoding build_block_encoding(const CMat& a, double alpha) {
  if (a.rows() != a.cols()) throw ShapeError("build_block_encoding: matrix must be square");
  if (alpha <= 0.0)
    throw std::domain_error("build_block_encoding: alpha must be positive");
  if (alpha < op_norm(a) - 1e-12)
    throw std::domain_error("build_block_encoding: alpha below operator norm");

  const Eigen::Index d = a.rows();
  const CMat s = a / alpha;
  Eigen::JacobiSVD<CMat> svd(s, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::VectorXd sigma = svd.singularValues();
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    sigma(i) = std::min(sigma(i), 1.0);

  CMat u(2 * d, 2 * d);
  u.topLeftCorner(d, d) = s;
  u.topRightCorner(d, d) = psd_sqrt_complement(svd.matrixU(), sigma);
  u.bottomLeftCorner(d, d) = psd_sqrt_complement(svd.matrixV(), sigma);
  u.bottomRightCorner(d, d) = -s.adjoint();

  BlockEncoding enc;
  enc.unitary = std::move(u);
  enc.alpha = alpha;
  enc.ancilla_qubits = 1;
  enc.encoded_dim = d;
  return enc;
}

CMat build_prep_oracle(const std::vector<double>& alphas,
                       double padded_weight) {
  if (padded_weight < 0.0)
    throw std::domain_error("build_prep_oracle: negative padded_weight");
  std::vector<double> weights(alphas);
  for (double w : weights)
    if (w < 0.0) throw std::domain_error("build_prep_oracle: negative alpha");
  if (padded_weight > 0.0) weights.push_back(std::sqrt(padded_weight));

  const Eigen::Index dim = next_pow2(static_cast<Eigen::Index>(
      std::max<std::size_t>(weights.size(), 1)));
  Eigen::VectorXd target = Eigen::VectorXd::Zero(dim);
  for (std::size_t i = 0; i < weights.size(); ++i) target(i) = weights[i];
  const double norm = target.norm();
  if (norm == 0.0) throw std::domain_error("build_prep_oracle: all weights are zero");
  target /= norm;

  // Householder reflection exchanging e0 and the target column.
  Eigen::VectorXd v = target;
  v(0) -= 1.0;
  const double vnorm2 = v.squaredNorm();
  Eigen::MatrixXd b = Eigen::MatrixXd::Identity(dim, dim);
  if (vnorm2 > 0.0) b -= (2.0 / vnorm2) * (v * v.transpose());
  return b.cast<Complex>();
}

CMat build_w(const std::vector<BlockEncoding>& encodings, const CMat& prep) {
  if (encodings.empty()) throw ShapeError("build_w: no block encodings");
  const Eigen::Index d = encodings.front().encoded_dim;
  const int a = encodings.front().ancilla_qubits;
  for (const BlockEncoding& enc : encodings)
    if (enc.encoded_dim != d || enc.ancilla_qubits != a)
      throw ShapeError("build_w: block encodings disagree on register sizes");
  const Eigen::Index anc_dim = Eigen::Index(1) << a;
  const Eigen::Index index_dim = prep.rows();
  if (prep.cols() != index_dim ||
      index_dim < static_cast<Eigen::Index>(encodings.size()))
    throw ShapeError("build_w: prep oracle does not cover the index register");

  const Eigen::Index block = anc_dim * d;
  return build_select(encodings, index_dim) *
         kron(prep, CMat::Identity(block, block));
}

double success_probability(const CMat& w, Eigen::Index index_dim,
                           int ancilla_qubits, const CMat& rho) {
  const Eigen::Index anc_dim = Eigen::Index(1) << ancilla_qubits;
  const Eigen::Index d = rho.rows();
  if (rho.cols() != d || w.rows() != index_dim * anc_dim * d ||
      w.cols() != w.rows())
    throw ShapeError("success_probability: register sizes do not match w");

  CMat zeros = CMat::Zero(index_dim * anc_dim, index_dim * anc_dim);
  zeros(0, 0) = 1.0;  // |0>_index (x) |0>_ancilla
  const CMat out = w * kron(zeros, rho) * w.adjoint();

  CMat anc0 = CMat::Zero(anc_dim, anc_dim);
  anc0(0, 0) = 1.0;
  const CMat proj = kron(CMat::Identity(index_dim, index_dim),
                         kron(anc0, CMat::Identity(d, d)));
  return (proj * out).trace().real();
}

CMat JumpGadget::iterate() const {
  const Eigen::Index anc_dim = Eigen::Index(1) << ancilla_qubits;
  const Eigen::Index total = index_dim * anc_dim * system_dim;
  CMat anc0 = CMat::Zero(anc_dim, anc_dim);
  anc0(0, 0) = 1.0;
  const CMat id_sys = CMat::Identity(system_dim, system_dim);

  const CMat p0 = kron(CMat::Identity(index_dim, index_dim), kron(anc0, id_sys));
  // W includes the preparation oracle, so the initial subspace the iterate
  // reflects about is index |0>, ancilla |0>. Conjugating through B (an
  // involution) this is the B|0><0|B' reflector seen between the select
  // stages.
  CMat idx0 = CMat::Zero(index_dim, index_dim);
  idx0(0, 0) = 1.0;
  const CMat p1 = kron(idx0, kron(anc0, id_sys));

  const CMat id = CMat::Identity(total, total);
  return -(w_circuit * (id - 2.0 * p1) * w_circuit.adjoint() * (id - 2.0 * p0));
}

CMat JumpGadget::full_circuit() const {
  CMat g = w_circuit;
  if (iterations > 0) {
    const CMat a = iterate();
    for (int j = 0; j < iterations; ++j) g = a * g;
  }
  return g;
}

SuperOp JumpGadget::system_channel() const {
  const Eigen::Index anc_dim = Eigen::Index(1) << ancilla_qubits;
  const Eigen::Index env = index_dim * anc_dim;
  const CMat g = full_circuit();
  CMat zeros = CMat::Zero(env, env);
  zeros(0, 0) = 1.0;

  const Eigen::Index d = system_dim;
  CMat s(d * d, d * d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      CMat basis = CMat::Zero(d, d);
      basis(i, j) = 1.0;
      const CMat image = g * kron(zeros, basis) * g.adjoint();
      s.col(j * d + i) = vec(partial_trace(image, env, d, Keep::Second));
    }
  }
  return SuperOp(d, std::move(s));
}

JumpGadget build_jump_gadget(const LindbladModel& model,
                             const std::vector<double>& alphas, double tol) {
  const ConstraintReport report = check_constraint(model, tol);
  if (!report.admissible)
    throw ConstraintError("build_jump_gadget: model is not admissible");
  if (model.jumps.empty() || report.gamma <= 0.0)
    throw std::domain_error("build_jump_gadget: model has no jump dynamics");
  if (alphas.size() != model.jumps.size())
    throw ShapeError("build_jump_gadget: one alpha per jump operator required");

  std::vector<BlockEncoding> encodings;
  double alpha_sq = 0.0;
  for (std::size_t mu = 0; mu < alphas.size(); ++mu) {
    encodings.push_back(build_block_encoding(model.jumps[mu], alphas[mu]));
    alpha_sq += alphas[mu] * alphas[mu];
  }

  const double pi = std::numbers::pi;
  double p_raw = report.gamma / alpha_sq;
  if (p_raw >= 1.0 - 1e-12) p_raw = 1.0;  // alpha^2 == Gamma up to round-off
  const double theta_raw = std::asin(std::sqrt(p_raw));
  int t = 0;
  if (theta_raw < pi / 2.0)
    t = static_cast<int>(std::ceil((pi / (2.0 * theta_raw) - 1.0) / 2.0 - 1e-12));

  // Snap the success probability down so (2t+1) theta = pi/2 exactly.
  const double p_target =
      t == 0 ? 1.0 : std::pow(std::sin(pi / (2.0 * (2 * t + 1))), 2);
  double padded_weight = std::max(report.gamma / p_target - alpha_sq, 0.0);
  if (padded_weight < 1e-12 * alpha_sq) padded_weight = 0.0;

  JumpGadget gadget;
  gadget.prep_oracle = build_prep_oracle(alphas, padded_weight);
  gadget.w_circuit = build_w(encodings, gadget.prep_oracle);
  gadget.padded_weight = padded_weight;
  gadget.p0 = report.gamma / (alpha_sq + padded_weight);
  gadget.theta = std::asin(std::min(std::sqrt(gadget.p0), 1.0));
  gadget.iterations = t;
  gadget.index_dim = gadget.prep_oracle.rows();
  gadget.ancilla_qubits = encodings.front().ancilla_qubits;
  gadget.system_dim = model.dim;
  gadget.select_unitary = build_select(encodings, gadget.index_dim);
  return gadget;
}

ResourceLedger resource_ledger(double gamma, double total_time, double epsilon,
                               double alpha_h, const std::vector<double>& alphas,
                               int m, int a) {
  if (total_time <= 0.0)
    throw std::domain_error("resource_ledger: total_time must be positive");
  if (epsilon <= 0.0 || epsilon >= 1.0)
    throw std::domain_error("resource_ledger: epsilon must lie in (0, 1)");
  if (gamma < 0.0 || alpha_h < 0.0 || m < 0 || a < 0)
    throw std::domain_error("resource_ledger: negative input");
  if (static_cast<int>(alphas.size()) != m)
    throw ShapeError("resource_ledger: one alpha per jump operator required");
  if (m > 0 && gamma <= 0.0)
    throw std::domain_error("resource_ledger: jumps present but gamma is zero");

  // log(x/eps) / log(e + log(x/eps) / x), the additive query profile.
  const auto log_factor = [epsilon](double x) {
    const double l = std::log(x / epsilon);
    if (l <= 0.0) return 0.0;
    return l / std::log(std::numbers::e + l / x);
  };

  ResourceLedger ledger;
  double alpha_sq = 0.0;
  for (double al : alphas) alpha_sq += al * al;
  const double gt = gamma * total_time;

  if (m > 0)
    ledger.jump_queries = std::sqrt(alpha_sq / gamma) * (gt + log_factor(gt));

  const double ht = (alpha_h + gamma) * total_time;
  if (ht > 0.0) {
    const double bracket = log_factor(ht);
    ledger.hamiltonian_queries = ht * bracket * bracket;
  }

  if (m > 0) {
    ledger.gate_count = (std::log2(static_cast<double>(m)) + a) *
                        std::sqrt(alpha_sq / gamma) *
                        ledger.hamiltonian_queries;
  } else {
    ledger.gate_count = a * ledger.hamiltonian_queries;
  }

  int log2m = 0;
  while ((1 << log2m) < std::max(m, 1)) ++log2m;
  ledger.ancilla_count = log2m + a;
  return ledger;
}

}  // namespace trajlind
