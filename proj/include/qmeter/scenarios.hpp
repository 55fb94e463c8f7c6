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

// Worked measurement models: photon absorption, photon-number QND, coherent
// projection (classical teleportation limit), intercept-resend eavesdropping
// and measure-and-prepare cloning. Analytic numbers come from the measurement
// and backaction routines only.

#pragma once

#include "qmeter/backaction.hpp"
#include "qmeter/measurement.hpp"
#include "qmeter/operator_core.hpp"

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qmeter {

/// |0><1|, a partial set (the detector clicks on exactly one photon).
KrausSet<double> photon_detector_preset(const BosonicSpace& space);

/// Outcomes start, start + step, ... up to and including stop.
std::vector<double> outcome_grid(double start, double stop, double step = 1.0);

/// Photon-number QND measurement
///   M_m = sum_n M_m(n) |n><n|,  M_m(n) = exp(-(m - n)^2 / (4 sigma^2)) / sqrt(Z_n)
/// with Z_n = sum_m exp(-(m - n)^2 / (2 sigma^2)) over the grid, which makes the
/// set complete to rounding.
KrausSet<double> qnd_preset(const BosonicSpace& space, double pointer_sigma, std::span<const double> grid);

/// pi^{-1/2} |alpha><alpha| on the truncated space.
Matrix<double> coherent_projection(std::complex<double> alpha, const BosonicSpace& space,
                                   double tail_threshold = tol::kCoherentTail);

struct TeleportationReport {
  std::complex<double> alpha;
  std::complex<double> estimate;  // x_alpha + i y_alpha
  double resolution_x;
  double resolution_y;
  double disturbance_x;
  double disturbance_y;
  double tail_mass;
  ResolutionDisturbanceReport<double> x_vs_y;  // resolution of x, disturbance of y
  ResolutionDisturbanceReport<double> y_vs_x;
};

TeleportationReport classical_teleportation_preset(std::complex<double> alpha, const BosonicSpace& space,
                                                   double tail_threshold = tol::kCoherentTail);

/// Max deviation of sum_k h^2/pi |alpha_k><alpha_k| from 1 on the lowest
/// `check_levels` Fock levels, for a square alpha grid of half-width
/// `half_width` and spacing h. Only approximates the continuum completeness.
double teleportation_grid_deviation(const BosonicSpace& space, double half_width, double spacing,
                                    Index check_levels);

enum class ForwardStrategy {
  Resend,     // forward the post-measurement state M_m |psi> / norm
  Reprepare,  // forward a fixed state per outcome
};

struct EavesdropConfig {
  KrausSet<double> eve;
  HermitianObservable<double> a;
  HermitianObservable<double> b;
  std::string name_a = "A";
  std::string name_b = "B";
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  ForwardStrategy forward = ForwardStrategy::Resend;
  /// Reprepare only; defaults to the top eigenvector of each R_m.
  std::vector<Vector<double>> reprepare_states;
  unsigned threads = 1;
  double completeness_tol = tol::kCompleteness;
};

struct EmpiricalStat {
  std::uint64_t count = 0;
  double mean = 0;
  double std_error = 0;
};

struct OutcomeDisturbance {
  std::string outcome;
  double weight;    // tr{M^dagger M} / d, the outcome probability for a uniformly drawn eigenstate
  double analytic;  // Delta X_m^2 (NaN when the outcome is unreachable)
  EmpiricalStat empirical;
  bool agrees;  // |empirical - analytic| <= 3 standard errors
};

struct BasisDisturbance {
  std::string observable;
  double analytic;  // sum_m weight_m Delta X_m^2
  EmpiricalStat empirical;
  bool agrees;
  std::vector<OutcomeDisturbance> per_outcome;
};

struct EavesdropReport {
  std::uint64_t trials;
  std::uint64_t seed;
  ForwardStrategy forward;
  double completeness_deviation;
  BasisDisturbance basis_a;
  BasisDisturbance basis_b;
};

/// Monte Carlo intercept-resend attack. Each trial draws the basis (A or B)
/// and an eigenvector uniformly, samples Eve's outcome, forwards the state,
/// and lets Bob measure in the sent basis. Trials use independent counter
/// streams keyed by trial index and are reduced in index order, so reports
/// are bit-identical for a given seed regardless of thread count.
EavesdropReport eavesdrop_simulation(const EavesdropConfig& config);

/// |empirical - analytic| within 3 standard errors (exact match when the
/// standard error is 0, up to 1e-12).
bool within_three_sigma(const EmpiricalStat& stat, double analytic);

struct CloningOutcome {
  std::string outcome;
  EstimateReport<double> estimate_a;
  EstimateReport<double> estimate_b;
  double disturbance_a;  // per-clone error in A
  double disturbance_b;  // per-clone error in B
  ResolutionDisturbanceReport<double> a_vs_b;
};

struct CloningReport {
  double completeness_deviation;  // of sum |psi_m><psi_m|
  std::vector<CloningOutcome> outcomes;
};

/// Measure-and-prepare cloning with C_m = |psi_m><psi_m|. Every clone is
/// prepared in |psi_m>, so the error per clone is the disturbance of C_m
/// whatever the number of copies.
CloningReport cloning_error(std::span<const Vector<double>> states, const HermitianObservable<double>& a,
                            const HermitianObservable<double>& b);

struct FrontierPoint {
  double sigma;
  std::string outcome;
  double resolution;   // delta A_m^2
  double disturbance;  // Delta B_m^2
  double bound;
};

/// Resolution-disturbance pairs of the QND family over pointer widths, for
/// one outcome. A is the photon number and B the x quadrature.
std::vector<FrontierPoint> qnd_frontier(const BosonicSpace& space, std::span<const double> sigmas,
                                        std::span<const double> grid, double outcome);

}  // namespace qmeter
