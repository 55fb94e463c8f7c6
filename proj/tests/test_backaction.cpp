// Copyright 2026 The qmeter Authors
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

#include "qmeter/backaction.hpp"
#include "qmeter/random.hpp"
#include "qmeter/scenarios.hpp"
#include "test_util.hpp"

#include <Eigen/Eigenvalues>

namespace qmeter {
namespace {

using namespace testing;

// sum_{i,f} |<f|M|i>|^2 (b_f - b_i)^2 / tr{M^dagger M} in a given eigenbasis.
double disturbance_double_sum(const Mat& m, const Mat& basis, const Eigen::VectorXd& values) {
  const Mat elements = basis.adjoint() * m * basis;
  double sum = 0;
  for (Index f = 0; f < values.size(); ++f) {
    for (Index i = 0; i < values.size(); ++i) {
      const double gap = values(f) - values(i);
      sum += std::norm(elements(f, i)) * gap * gap;
    }
  }
  return sum / m.squaredNorm();
}

Mat photon_absorber(Index n) {
  Mat m = Mat::Zero(n, n);
  m(0, 1) = 1;
  return m;
}

TEST(JointRetrodiction, PhotonAbsorber) {
  const auto n3 = eigendecompose(number_operator(3));
  const auto r = joint_retrodictive_state<double>(photon_absorber(3), n3, 0);
  ASSERT_TRUE(r.state.has_value());
  EXPECT_NEAR(std::abs((*r.state)(1)), 1.0, 1e-15);
  EXPECT_NEAR(r.weight, 1.0, 1e-15);
  EXPECT_ERROR_CODE(joint_retrodictive_state<double>(photon_absorber(3), n3, 1), ErrorCode::UnreachableSequence);
  EXPECT_EQ(joint_retrodictions<double>(photon_absorber(3), n3).size(), 1u);
}

TEST(JointRetrodiction, IdentityMeasurement) {
  CounterRng rng(31, 0);
  const Index d = 4;
  const auto b = eigendecompose(random_hermitian<double>(rng, d));
  const auto seqs = joint_retrodictions<double>(Mat::Identity(d, d), b);
  ASSERT_EQ(seqs.size(), static_cast<std::size_t>(d));
  for (const auto& r : seqs) {
    EXPECT_NEAR(r.weight, 1.0 / d, 1e-14);
    const Vec bf = b.eigenvectors().col(r.final_index);
    EXPECT_NEAR(std::abs(bf.dot(*r.state)), 1.0, 1e-12);
  }
}

TEST(JointRetrodiction, NormsAndWeights) {
  CounterRng rng(32, 0);
  for (int k = 0; k < 300; ++k) {
    const Index d = 2 + static_cast<Index>(rng.below(5));
    const Mat m = random_kraus_operator<double>(rng, d);
    const Mat h = k % 3 == 0 ? random_degenerate_hermitian<double>(rng, d) : random_hermitian<double>(rng, d);
    const auto b = eigendecompose(h);
    double total = 0;
    for (const auto& r : joint_retrodictions(m, b)) {
      total += r.weight;
      EXPECT_NEAR(r.statistical_matrix().trace().real(), 1.0, 1e-12);
      if (r.state) EXPECT_NEAR(r.state->norm(), 1.0, 1e-12);
    }
    EXPECT_NEAR(total, 1.0, 1e-10);
  }
}

TEST(JointEstimates, Examples) {
  const auto n3 = eigendecompose(number_operator(3));
  const auto r = joint_retrodictive_state<double>(photon_absorber(3), n3, 0);
  const auto e = joint_estimates(r, n3, n3);
  EXPECT_NEAR(e.estimate_a, 1.0, 1e-15);
  EXPECT_NEAR(e.error_a, 0.0, 1e-15);

  CounterRng rng(33, 0);
  const auto b = eigendecompose(random_hermitian<double>(rng, 3));
  for (const auto& s : joint_retrodictions<double>(Mat::Identity(3, 3), b)) {
    const auto je = joint_estimates(s, b, b);
    EXPECT_NEAR(je.estimate_b, s.final_value, 1e-12);
    EXPECT_NEAR(je.error_b, 0.0, 1e-12);
  }

  const Mat anchor = outer<double>(ket({1, 0}), y_plus());
  const auto sz = eigendecompose(pauli_z<double>());
  const auto sx = eigendecompose(pauli_x<double>());
  for (const auto& s : joint_retrodictions(anchor, sx)) {
    const auto je = joint_estimates(s, sz, sx);
    EXPECT_NEAR(je.estimate_a, 0.0, 1e-15);
    EXPECT_NEAR(je.error_a, 1.0, 1e-15);
  }
}

TEST(ConditionalDisturbance, Examples) {
  const auto n3 = eigendecompose(number_operator(3));
  const auto rec = conditional_disturbance<double>(photon_absorber(3), n3, 0);
  EXPECT_NEAR(rec.total, 1.0, 1e-15);
  EXPECT_NEAR(rec.random, 0.0, 1e-15);
  EXPECT_NEAR(rec.systematic, 1.0, 1e-15);

  CounterRng rng(34, 0);
  const auto b = eigendecompose(random_hermitian<double>(rng, 4));
  for (std::size_t f = 0; f < 4; ++f) {
    EXPECT_NEAR(conditional_disturbance<double>(Mat::Identity(4, 4), b, f).total, 0.0, 1e-12);
  }

  const BosonicSpace space(12);
  const auto grid = outcome_grid(-8, 19);
  const auto set = qnd_preset(space, 2.0, grid);
  const auto n = eigendecompose(number_operator(12));
  for (const auto& o : set.outcomes()) {
    for (const auto& r : joint_retrodictions(o.op, n)) {
      EXPECT_NEAR(conditional_disturbance(o.op, n, r.final_index).total, 0.0, 1e-12);
    }
  }
}

TEST(AveragedDisturbance, Examples) {
  EXPECT_NEAR(averaged_disturbance<double>(photon_absorber(3), eigendecompose(number_operator(3))).disturbance, 1.0,
              1e-15);
  const auto sx = eigendecompose(pauli_x<double>());
  const auto d = averaged_disturbance<double>(diag({1, 0}), sx);
  EXPECT_NEAR(d.disturbance, 2.0, 1e-14);
  EXPECT_NEAR(d.trace_form, 2.0, 1e-14);
  EXPECT_NEAR(disturbance_double_sum(diag({1, 0}), sx.eigenvectors(), sx.eigenvalues()), 2.0, 1e-14);
}

TEST(AveragedDisturbance, CommutingOperatorsDoNotDisturb) {
  CounterRng rng(35, 0);
  for (int k = 0; k < 200; ++k) {
    const Index d = 2 + static_cast<Index>(rng.below(5));
    const auto b = eigendecompose(random_hermitian<double>(rng, d));
    Vec diagonal(d);
    for (Index i = 0; i < d; ++i) diagonal(i) = cd(rng.normal(), rng.normal());
    const Mat m = b.eigenvectors() * diagonal.asDiagonal() * b.eigenvectors().adjoint();
    ASSERT_LE(max_abs(commutator(m, b.matrix())), 1e-10);
    EXPECT_LE(averaged_disturbance(m, b).disturbance, 1e-12);
  }
}

TEST(AveragedDisturbance, MatchesDoubleSumOracle) {
  CounterRng rng(36, 0);
  for (int k = 0; k < 500; ++k) {
    const Index d = 2 + static_cast<Index>(rng.below(5));
    const Mat m = random_kraus_operator<double>(rng, d);
    const Mat h = random_hermitian<double>(rng, d);
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    const double oracle = disturbance_double_sum(m, es.eigenvectors(), es.eigenvalues());
    const auto r = averaged_disturbance(m, eigendecompose(h));
    EXPECT_NEAR(r.disturbance, oracle, 1e-10 * (1 + oracle));
    EXPECT_NEAR(r.trace_form, oracle, 1e-10 * (1 + oracle));
    double avg = 0;
    for (const auto& rec : r.records) {
      EXPECT_NEAR(rec.total, rec.random + rec.systematic, 1e-10);
      avg += rec.weight * rec.total;
    }
    EXPECT_NEAR(avg, r.disturbance, 1e-10);
  }
}

TEST(AveragedDisturbance, DegenerateBasisIndependence) {
  CounterRng rng(37, 0);
  for (int k = 0; k < 200; ++k) {
    const Index d = 3 + static_cast<Index>(rng.below(4));
    const Mat m = random_kraus_operator<double>(rng, d);
    // Spectrum with a repeated value: first two eigenvalues coincide.
    Eigen::VectorXd values(d);
    for (Index i = 0; i < d; ++i) values(i) = static_cast<double>(i);
    values(1) = values(0);
    const Mat v = random_unitary<double>(rng, d);
    const Mat h = v * values.cast<cd>().asDiagonal() * v.adjoint();

    Mat remixed = v;
    remixed.leftCols(2) = v.leftCols(2) * random_unitary<double>(rng, 2);
    const double original = disturbance_double_sum(m, v, values);
    const double mixed = disturbance_double_sum(m, remixed, values);
    EXPECT_NEAR(original, mixed, 1e-10);

    const auto b = eigendecompose(Mat(0.5 * (h + h.adjoint())));
    EXPECT_EQ(b.eigenspaces().size(), static_cast<std::size_t>(d - 1));
    EXPECT_NEAR(averaged_disturbance(m, b).disturbance, original, 1e-10);
  }
}

TEST(Decomposition, Examples) {
  const auto n3 = eigendecompose(number_operator(3));
  EXPECT_LE(decomposition_check<double>(photon_absorber(3), n3, n3).reconstruction_error, 1e-15);

  CounterRng rng(38, 0);
  const auto b = eigendecompose(random_hermitian<double>(rng, 4));
  EXPECT_LE(decomposition_check<double>(Mat::Identity(4, 4), b, b).reconstruction_error, 1e-12);

  const Mat anchor = outer<double>(ket({1, 0}), y_plus());
  const auto r = decomposition_check(anchor, eigendecompose(pauli_z<double>()), eigendecompose(pauli_x<double>()));
  EXPECT_GE(r.gap, -1e-15);
  EXPECT_NEAR(r.gap, r.spread, 1e-12);
}

TEST(Decomposition, GapEqualsSpread) {
  CounterRng rng(39, 0);
  for (int k = 0; k < 500; ++k) {
    const Index d = 2 + static_cast<Index>(rng.below(5));
    const Mat m = random_kraus_operator<double>(rng, d);
    const auto a = eigendecompose(random_hermitian<double>(rng, d));
    const auto b = eigendecompose(k % 4 == 0 ? random_degenerate_hermitian<double>(rng, d)
                                             : random_hermitian<double>(rng, d));
    const auto r = decomposition_check(m, a, b);
    EXPECT_LE(r.reconstruction_error, 1e-10);
    EXPECT_GE(r.gap, -1e-10);
    EXPECT_NEAR(r.gap, r.spread, 1e-10);
  }
}

TEST(SequenceUncertainty, Examples) {
  const auto n3 = eigendecompose(number_operator(3));
  const auto s1 = sequence_uncertainty_check<double>(photon_absorber(3), n3, n3, 0);
  EXPECT_EQ(s1.bound, 0.0);
  EXPECT_TRUE(s1.satisfied);

  const auto sz = eigendecompose(pauli_z<double>());
  const auto sx = eigendecompose(pauli_x<double>());
  const Mat anchor = outer<double>(ket({1, 0}), y_plus());
  for (std::size_t f = 0; f < 2; ++f) {
    const auto s = sequence_uncertainty_check(anchor, sz, sx, f);
    EXPECT_NEAR(s.bound, 1.0, 1e-14);
    EXPECT_NEAR(s.disturbance, 2.0, 1e-14);
    EXPECT_TRUE(s.satisfied);
  }

  CounterRng rng(40, 0);
  const auto a = eigendecompose(random_hermitian<double>(rng, 3));
  const auto b = eigendecompose(random_hermitian<double>(rng, 3));
  for (std::size_t f = 0; f < 3; ++f) {
    const auto s = sequence_uncertainty_check<double>(Mat::Identity(3, 3), a, b, f);
    EXPECT_NEAR(s.estimates.error_b, 0.0, 1e-12);
    EXPECT_NEAR(s.disturbance, 0.0, 1e-12);
    EXPECT_NEAR(s.bound, 0.0, 1e-12);
  }
}

TEST(ResolutionDisturbance, Examples) {
  const BosonicSpace space(6);
  const auto ops = bosonic_operators<double>(space);
  const auto r1 = resolution_disturbance_check<double>(photon_absorber(6), eigendecompose(ops.number),
                                                       eigendecompose(ops.x));
  EXPECT_NEAR(r1.resolution, 0.0, 1e-15);
  EXPECT_NEAR(r1.bound, 0.0, 1e-15);
  EXPECT_TRUE(r1.satisfied);

  const auto sz = eigendecompose(pauli_z<double>());
  const auto sx = eigendecompose(pauli_x<double>());
  const auto r2 = resolution_disturbance_check<double>(outer<double>(ket({1, 0}), y_plus()), sz, sx);
  EXPECT_NEAR(r2.resolution, 1.0, 1e-14);
  EXPECT_NEAR(r2.disturbance, 2.0, 1e-14);
  EXPECT_NEAR(r2.bound, 1.0, 1e-14);
  EXPECT_TRUE(r2.satisfied);
  EXPECT_TRUE(r2.chain_satisfied);

  const auto r3 = resolution_disturbance_check<double>(std::sqrt(0.5) * Mat::Identity(2, 2), sz, sx);
  EXPECT_NEAR(r3.disturbance, 0.0, 1e-15);
  EXPECT_NEAR(r3.bound, 0.0, 1e-15);
  EXPECT_TRUE(r3.satisfied);
}

TEST(ResolutionDisturbance, UnreachableOutcome) {
  const auto sz = eigendecompose(pauli_z<double>());
  EXPECT_ERROR_CODE(resolution_disturbance_check<double>(Mat::Zero(2, 2), sz, sz), ErrorCode::UnreachableOutcome);
  EXPECT_ERROR_CODE(averaged_disturbance<double>(Mat::Zero(2, 2), sz), ErrorCode::UnreachableOutcome);
}

TEST(ResolutionDisturbance, RandomChain) {
  CounterRng rng(41, 0);
  for (Index d = 2; d <= 6; ++d) {
    for (int k = 0; k < 300; ++k) {
      const Mat m = random_kraus_operator<double>(rng, d);
      const auto a = eigendecompose(random_hermitian<double>(rng, d));
      const auto b = eigendecompose(random_hermitian<double>(rng, d));
      const auto r = resolution_disturbance_check(m, a, b);
      ASSERT_GE(r.slack, -1e-10);
      ASSERT_GE(r.intermediate_bound - r.bound, -1e-10);
      ASSERT_GE(r.averaged_joint_resolution * r.averaged_disturbance - r.intermediate_bound, -1e-10);
      ASSERT_GE(r.resolution, r.averaged_joint_resolution - 1e-10);
      ASSERT_TRUE(r.mixture.satisfied);
    }
  }
}

}  // namespace
}  // namespace qmeter
