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

#include <doctest.h>

#include <fstream>

#include "test_support.hpp"
#include "trajlind/model_io.hpp"

using namespace trajlind;
using namespace trajlind::testing;

TEST_CASE("constraint check on stock models") {
  const ConstraintReport deph = check_constraint(dephasing_model(0.7));
  CHECK(deph.gamma == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(deph.residual < 1e-14);
  CHECK(deph.admissible);

  const ConstraintReport ad = check_constraint(amplitude_damping_model());
  CHECK(ad.gamma == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(ad.residual == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_FALSE(ad.admissible);

  const ConstraintReport dep = check_constraint(depolarizing_model(0.4));
  CHECK(dep.gamma == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(dep.residual < 1e-14);
  CHECK(dep.admissible);

  const ConstraintReport none =
      check_constraint(LindbladModel(CMat::Zero(2, 2), {}));
  CHECK(none.gamma == 0.0);
  CHECK(none.admissible);
}

TEST_CASE("liouvillian structure") {
  const SuperOp zero = liouvillian(LindbladModel(CMat::Zero(2, 2), {}));
  CHECK(zero.matrix.cwiseAbs().maxCoeff() < 1e-15);

  // |0><1| is an eigenvector of pure dephasing with eigenvalue -2 gamma.
  const SuperOp deph = liouvillian(dephasing_model(0.5));
  CMat e01 = CMat::Zero(2, 2);
  e01(0, 1) = 1.0;
  CHECK(max_abs_diff(deph.apply(e01), -1.0 * e01) < 1e-14);

  // The generator annihilates the trace and exp(tL) preserves it, even
  // outside the admissible class.
  RngStream rng(31, 0);
  const LindbladModel random_model = random_admissible_model(2, 2, 0.8, rng);
  const LindbladModel damping = amplitude_damping_model();
  for (const LindbladModel* model : {&random_model, &damping}) {
    const SuperOp gen = liouvillian(*model);
    const CVec id_vec = vec(CMat::Identity(2, 2));
    CHECK((gen.matrix.adjoint() * id_vec).cwiseAbs().maxCoeff() < 1e-12);
    for (double t : {0.1, 1.0, 5.0}) {
      const SuperOp prop(2, expm(t * gen.matrix));
      CHECK(trace_preservation_residual(prop) < 1e-10);
    }
  }
}

TEST_CASE("effective Hamiltonian and state-independent decay") {
  const CMat eff = effective_hamiltonian(dephasing_model(0.5));
  CHECK(max_abs_diff(eff, Complex(0.0, -0.25) * CMat::Identity(2, 2)) < 1e-14);

  RngStream rng(32, 0);
  const LindbladModel model = random_admissible_model(4, 3, 0.9, rng);
  const double gamma = check_constraint(model).gamma;
  const CMat h_eff = effective_hamiltonian(model);
  for (double tau : {0.1, 1.0}) {
    const CMat prop = expm(Complex(0, -tau) * h_eff);
    for (int trial = 0; trial < 20; ++trial) {
      const CVec psi = random_state(4, rng);
      CHECK(std::abs((prop * psi).squaredNorm() - std::exp(-gamma * tau)) <
            1e-10);
    }
  }

  // Outside the class the decay is state dependent: |0> is dark for
  // amplitude damping.
  const CMat ad_eff = effective_hamiltonian(amplitude_damping_model());
  CVec ket0 = CVec::Zero(2);
  ket0(0) = 1.0;
  CHECK(std::abs((expm(Complex(0, -3.0) * ad_eff) * ket0).norm() - 1.0) <
        1e-12);
}

TEST_CASE("unitary mixing of jump operators") {
  const LindbladModel pair = dephasing_pair_model();

  const LindbladModel same = unitary_mix(pair, CMat::Identity(2, 2));
  for (std::size_t mu = 0; mu < pair.jumps.size(); ++mu)
    CHECK(max_abs_diff(same.jumps[mu], pair.jumps[mu]) < 1e-15);

  CMat hadamard(2, 2);
  hadamard << 1, 1, 1, -1;
  hadamard /= std::sqrt(2.0);
  const LindbladModel mixed = unitary_mix(pair, hadamard);
  CHECK(max_abs_diff(liouvillian(mixed).matrix, liouvillian(pair).matrix) <
        1e-12);

  RngStream rng(33, 0);
  const LindbladModel model = random_admissible_model(2, 3, 0.7, rng);
  const LindbladModel rotated = unitary_mix(model, random_unitary(3, rng));
  CHECK(check_constraint(rotated).residual < 1e-12);

  CMat skew = CMat::Identity(2, 2);
  skew(0, 1) = 0.3;
  CHECK_THROWS_AS(unitary_mix(pair, skew), std::invalid_argument);
}

TEST_CASE("inhomogeneous transform preserves the Liouvillian") {
  const LindbladModel deph = dephasing_model(0.5);

  const LindbladModel same =
      inhomogeneous_transform(deph, {Complex(0, 0)}, 0.0);
  CHECK(max_abs_diff(same.hamiltonian, deph.hamiltonian) < 1e-15);
  CHECK(max_abs_diff(same.jumps[0], deph.jumps[0]) < 1e-15);

  const LindbladModel shifted =
      inhomogeneous_transform(deph, {Complex(0.0, 0.5)}, 0.0);
  CHECK(max_abs_diff(liouvillian(shifted).matrix, liouvillian(deph).matrix) <
        1e-12);

  CHECK_THROWS_AS(inhomogeneous_transform(deph, {}, 0.0), ShapeError);
}

TEST_CASE("Liouvillian invariance under 50 random transforms") {
  RngStream rng(34, 0);
  const LindbladModel model = random_admissible_model(2, 2, 0.6, rng);
  const CMat reference = liouvillian(model).matrix;
  for (int trial = 0; trial < 50; ++trial) {
    const LindbladModel mixed = unitary_mix(model, random_unitary(2, rng));
    std::vector<Complex> a = {Complex(rng.next_uniform() - 0.5,
                                      rng.next_uniform() - 0.5),
                              Complex(rng.next_uniform() - 0.5,
                                      rng.next_uniform() - 0.5)};
    const LindbladModel moved =
        inhomogeneous_transform(mixed, a, rng.next_uniform() - 0.5);
    CHECK(max_abs_diff(liouvillian(moved).matrix, reference) < 1e-10);
  }
}

TEST_CASE("no admissible representation of amplitude damping on the grid") {
  const LindbladModel ad = amplitude_damping_model();
  double best = 1e300;
  for (int i = 0; i <= 80; ++i) {
    for (int j = 0; j <= 80; ++j) {
      const Complex a(-2.0 + 0.05 * i, -2.0 + 0.05 * j);
      const ConstraintReport rep =
          check_constraint(inhomogeneous_transform(ad, {a}, 0.0));
      best = std::min(best, rep.residual);
    }
  }
  CHECK(best >= 0.1);
}

TEST_CASE("channel-form decomposition") {
  const ChannelForm deph = decompose_channel_form(dephasing_model(0.5));
  CHECK(deph.gamma == doctest::Approx(0.5));
  REQUIRE(deph.kraus.size() == 1);
  CHECK(max_abs_diff(deph.kraus[0], pauli_z()) < 1e-14);

  const ChannelForm dep = decompose_channel_form(depolarizing_model(0.4));
  CHECK(dep.gamma == doctest::Approx(0.6));
  const SuperOp r = kraus_to_superop(dep.kraus);
  for (Eigen::Index i = 0; i < 2; ++i) {
    for (Eigen::Index j = 0; j < 2; ++j) {
      CMat basis = CMat::Zero(2, 2);
      basis(i, j) = 1.0;
      const CMat expected =
          (2.0 * basis.trace() * CMat::Identity(2, 2) - basis) / 3.0;
      CHECK(max_abs_diff(r.apply(basis), expected) < 1e-13);
    }
  }

  const ChannelForm none =
      decompose_channel_form(LindbladModel(CMat::Zero(2, 2), {}));
  CHECK(none.gamma == 0.0);
  CHECK(none.kraus.empty());

  CHECK_THROWS_AS(decompose_channel_form(amplitude_damping_model()),
                  ConstraintError);
}

TEST_CASE("channel-form reconstruction of the Liouvillian") {
  RngStream rng(35, 0);
  for (int trial = 0; trial < 5; ++trial) {
    const LindbladModel model = random_admissible_model(2, 3, 1.2, rng);
    const ChannelForm form = decompose_channel_form(model);
    const CMat id = CMat::Identity(2, 2);
    const Complex mi(0, -1);
    const CMat commutator =
        mi * (kron(id, model.hamiltonian) -
              kron(model.hamiltonian.transpose(), id));
    const CMat rebuilt =
        commutator + form.gamma * (kraus_to_superop(form.kraus).matrix -
                                   CMat::Identity(4, 4));
    CHECK(max_abs_diff(rebuilt, liouvillian(model).matrix) < 1e-10);
  }
}

TEST_CASE("exp(tL) of admissible models is CPTP") {
  RngStream rng(36, 0);
  const LindbladModel model = random_admissible_model(2, 2, 0.5, rng);
  const SuperOp gen = liouvillian(model);
  for (double t : {0.1, 1.0, 5.0}) {
    const SuperOp prop(2, expm(t * gen.matrix));
    CHECK(trace_preservation_residual(prop) < 1e-10);
    CHECK(choi_min_eigenvalue(prop) > -1e-9);
  }
}

TEST_CASE("induced subsystem generator") {
  // K acts as dephasing on S with an identity A factor.
  const double gamma = 0.8;
  const CMat l = std::sqrt(gamma) * kron(CMat::Identity(2, 2), pauli_z());
  const LindbladModel k_local(CMat::Zero(4, 4), {l});
  RngStream rng(37, 0);
  const CMat omega = random_density(2, rng);
  const LindbladModel induced_local = induced_subsystem_generator(k_local, omega);
  CHECK(max_abs_diff(liouvillian(induced_local).matrix,
                     liouvillian(dephasing_model(gamma)).matrix) < 1e-10);

  // Random two-qubit K against the direct partial-trace oracle.
  const LindbladModel k_rand = random_admissible_model(4, 3, 0.9, rng);
  CMat omega0 = CMat::Zero(2, 2);
  omega0(0, 0) = 1.0;
  const LindbladModel induced = induced_subsystem_generator(k_rand, omega0);
  const SuperOp induced_gen = liouvillian(induced);
  const SuperOp k_gen = liouvillian(k_rand);
  for (Eigen::Index i = 0; i < 2; ++i) {
    for (Eigen::Index j = 0; j < 2; ++j) {
      CMat basis = CMat::Zero(2, 2);
      basis(i, j) = 1.0;
      const CMat via_k =
          partial_trace(k_gen.apply(kron(omega0, basis)), 2, 2, Keep::Second);
      CHECK(max_abs_diff(via_k, induced_gen.apply(basis)) < 1e-10);
    }
  }

  const ConstraintReport rep = check_constraint(induced);
  CHECK(rep.admissible);
  CHECK(rep.gamma == doctest::Approx(check_constraint(k_rand).gamma)
                         .epsilon(1e-10));

  CHECK_THROWS_AS(
      induced_subsystem_generator(
          LindbladModel(CMat::Zero(4, 4),
                        {kron(CMat::Identity(2, 2), amplitude_damping_model()
                                                        .jumps[0])}),
          omega0),
      ConstraintError);
  CHECK_THROWS_AS(induced_subsystem_generator(k_rand, CMat::Identity(2, 2)),
                  std::invalid_argument);
}

TEST_CASE("extract_phi yields a CPTP map") {
  const SuperOp phi = extract_phi(dephasing_model(1.0), 0.5);
  CHECK(choi_min_eigenvalue(phi) > -1e-9);
  CHECK(trace_preservation_residual(phi) < 1e-9);

  // Depolarizing closed form: exp(tD)(rho) = I/2 + exp(-4 G t / 3)(rho - I/2).
  const LindbladModel dep = depolarizing_model(0.4);
  const double gamma = check_constraint(dep).gamma;
  const SuperOp prop(2, expm(1.0 * liouvillian(dep).matrix));
  const double decay = std::exp(-4.0 * gamma / 3.0);
  for (Eigen::Index i = 0; i < 2; ++i) {
    for (Eigen::Index j = 0; j < 2; ++j) {
      CMat basis = CMat::Zero(2, 2);
      basis(i, j) = 1.0;
      const CMat expected = 0.5 * basis.trace() * CMat::Identity(2, 2) +
                            decay * (basis - 0.5 * basis.trace() *
                                                 CMat::Identity(2, 2));
      CHECK(max_abs_diff(prop.apply(basis), expected) < 1e-10);
    }
  }
  CHECK(choi_min_eigenvalue(extract_phi(dep, 1.0)) > -1e-9);

  // Small times approach the R channel of the channel-form decomposition.
  const SuperOp phi_small = extract_phi(dep, 1e-6);
  const SuperOp r = kraus_to_superop(decompose_channel_form(dep).kraus);
  CHECK(max_abs_diff(phi_small.matrix, r.matrix) < 1e-4);

  for (double t : {1e-3, 0.1, 1.0, 10.0}) {
    const SuperOp p = extract_phi(dephasing_model(0.3), t);
    CHECK(choi_min_eigenvalue(p) > -1e-9);
    CHECK(trace_preservation_residual(p) < 1e-9);
  }

  CHECK_THROWS_AS(extract_phi(dephasing_model(1.0), 0.0), std::domain_error);
  CHECK_THROWS_AS(extract_phi(LindbladModel(CMat::Zero(2, 2), {}), 1.0),
                  std::domain_error);
}

TEST_CASE("extreme-channel detection") {
  for (double p : {0.25, 0.5, 0.75}) {
    CMat k0 = CMat::Zero(2, 2);
    k0(0, 0) = 1.0;
    k0(1, 1) = std::sqrt(1.0 - p);
    CMat k1 = CMat::Zero(2, 2);
    k1(0, 1) = std::sqrt(p);
    CHECK(is_extreme_channel({k0, k1}));
  }

  CHECK(is_extreme_channel({CMat::Identity(2, 2)}));

  const double w = std::sqrt(0.5);
  CHECK_FALSE(is_extreme_channel({w * CMat::Identity(2, 2), w * pauli_z()}));

  CHECK_THROWS_AS(is_extreme_channel({0.5 * CMat::Identity(2, 2)}),
                  std::invalid_argument);
}

TEST_CASE("model JSON schema") {
  RngStream rng(38, 0);
  const LindbladModel model = random_admissible_model(2, 2, 0.4, rng);
  const nlohmann::json j = model_to_json(model);
  const LindbladModel back = model_from_json(j);
  CHECK(max_abs_diff(back.hamiltonian, model.hamiltonian) < 1e-15);
  REQUIRE(back.jumps.size() == model.jumps.size());
  for (std::size_t mu = 0; mu < back.jumps.size(); ++mu)
    CHECK(max_abs_diff(back.jumps[mu], model.jumps[mu]) < 1e-15);

  nlohmann::json skewed = j;
  skewed["hamiltonian"][0][1] = {1.0, 0.0};
  skewed["hamiltonian"][1][0] = {0.0, 0.0};
  CHECK_THROWS_AS(model_from_json(skewed), ParseError);

  nlohmann::json wrong_shape = j;
  wrong_shape["jumps"][0][0] = {{1.0, 0.0}};
  CHECK_THROWS_AS(model_from_json(wrong_shape), ParseError);

  CHECK_THROWS_AS(model_from_json(nlohmann::json::array()), ParseError);

  const std::string path = "trajlind_truncated_model.json";
  {
    std::ofstream out(path);
    out << "{\"n_qubits\": 1, \"hamiltonian\": [[";
  }
  CHECK_THROWS_AS(load_model(path), ParseError);
  std::remove(path.c_str());
}
