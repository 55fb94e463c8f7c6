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

#include "qmeter/scenarios.hpp"

#include "qmeter/format.hpp"
#include "qmeter/parallel.hpp"
#include "qmeter/random.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace qmeter {

KrausSet<double> photon_detector_preset(const BosonicSpace& space) {
  const Index n = space.dim();
  Matrix<double> m = Matrix<double>::Zero(n, n);
  m(0, 1) = 1.0;
  return KrausSet<double>({{"n=1", m}}, /*declared_complete=*/false);
}

std::vector<double> outcome_grid(double start, double stop, double step) {
  if (!(step > 0) || !(stop >= start)) throw Error(ErrorCode::InvalidArgument, "outcome grid needs step > 0, stop >= start");
  std::vector<double> grid;
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  grid.reserve(count);
  for (std::size_t k = 0; k < count; ++k) grid.push_back(start + static_cast<double>(k) * step);
  return grid;
}

KrausSet<double> qnd_preset(const BosonicSpace& space, double pointer_sigma, std::span<const double> grid) {
  if (!(pointer_sigma > 0)) throw Error(ErrorCode::InvalidArgument, "pointer width must be positive");
  if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "outcome grid is empty");
  const Index n = space.dim();
  const double two_var = 2.0 * pointer_sigma * pointer_sigma;

  std::vector<double> norm(static_cast<std::size_t>(n), 0.0);
  for (Index k = 0; k < n; ++k) {
    double z = 0;
    for (double m : grid) z += std::exp(-(m - double(k)) * (m - double(k)) / two_var);
    if (!(z > std::numeric_limits<double>::min()) || !std::isfinite(z)) {
      throw Error(ErrorCode::CompletenessUnachievable,
                  "outcome grid carries no weight for photon number " + std::to_string(k));
    }
    norm[static_cast<std::size_t>(k)] = std::sqrt(z);
  }

  std::vector<Outcome<double>> outcomes;
  outcomes.reserve(grid.size());
  for (double m : grid) {
    Matrix<double> op = Matrix<double>::Zero(n, n);
    for (Index k = 0; k < n; ++k) {
      op(k, k) = std::exp(-(m - double(k)) * (m - double(k)) / (2.0 * two_var)) / norm[static_cast<std::size_t>(k)];
    }
    outcomes.push_back({format_number(m), std::move(op)});
  }
  return KrausSet<double>(std::move(outcomes), true);
}

Matrix<double> coherent_projection(std::complex<double> alpha, const BosonicSpace& space, double tail_threshold) {
  const auto cs = coherent_state<double>(alpha, space, tail_threshold);
  return cs.amplitudes * cs.amplitudes.adjoint() / std::sqrt(std::numbers::pi);
}

TeleportationReport classical_teleportation_preset(std::complex<double> alpha, const BosonicSpace& space,
                                                   double tail_threshold) {
  const auto cs = coherent_state<double>(alpha, space, tail_threshold);
  const Matrix<double> m = cs.amplitudes * cs.amplitudes.adjoint() / std::sqrt(std::numbers::pi);
  const auto ops = bosonic_operators<double>(space);
  const auto x = eigendecompose(ops.x);
  const auto y = eigendecompose(ops.y);

  const auto ex = optimal_estimate(m, x);
  const auto ey = optimal_estimate(m, y);
  TeleportationReport r;
  r.alpha = alpha;
  r.estimate = {ex.estimate, ey.estimate};
  r.resolution_x = ex.error;
  r.resolution_y = ey.error;
  r.disturbance_x = averaged_disturbance(m, x).disturbance;
  r.disturbance_y = averaged_disturbance(m, y).disturbance;
  r.tail_mass = cs.tail_mass;
  r.x_vs_y = resolution_disturbance_check(m, x, y);
  r.y_vs_x = resolution_disturbance_check(m, y, x);
  return r;
}

double teleportation_grid_deviation(const BosonicSpace& space, double half_width, double spacing, Index check_levels) {
  if (!(spacing > 0) || !(half_width > 0)) throw Error(ErrorCode::InvalidArgument, "grid needs positive spacing and width");
  check_levels = std::min(check_levels, space.dim());
  const auto steps = static_cast<int>(std::floor(half_width / spacing));
  const Index n = space.dim();
  Matrix<double> sum = Matrix<double>::Zero(n, n);
  for (int i = -steps; i <= steps; ++i) {
    for (int j = -steps; j <= steps; ++j) {
      const auto cs = coherent_state<double>({i * spacing, j * spacing}, space, 1.0);
      sum.noalias() += cs.amplitudes * cs.amplitudes.adjoint();
    }
  }
  sum *= spacing * spacing / std::numbers::pi;
  const Matrix<double> block = sum.topLeftCorner(check_levels, check_levels) -
                               Matrix<double>::Identity(check_levels, check_levels);
  return block.cwiseAbs().maxCoeff();
}

bool within_three_sigma(const EmpiricalStat& stat, double analytic) {
  if (stat.count == 0 || !std::isfinite(analytic)) return stat.count == 0;
  return std::abs(stat.mean - analytic) <= 3.0 * stat.std_error + 1e-12;
}

namespace {

// Per basis: transition tables for sampling.
struct BasisTables {
  RealVector<double> values;                       // eigenvalue per eigenvector
  Eigen::MatrixXd outcome_given_input;             // column i: cumulative over m
  std::vector<std::vector<Eigen::VectorXd>> final_given;  // [m][i] -> cumulative over f
};

template <typename Derived>
std::size_t sample_cumulative(const Eigen::DenseBase<Derived>& cumulative, double u) {
  const double total = cumulative(cumulative.size() - 1);
  const double target = u * total;
  for (Index k = 0; k < cumulative.size(); ++k) {
    if (target < cumulative(k)) return static_cast<std::size_t>(k);
  }
  // Rounding at the top end: last entry with positive mass.
  for (Index k = cumulative.size() - 1; k > 0; --k) {
    if (cumulative(k) > cumulative(k - 1)) return static_cast<std::size_t>(k);
  }
  return 0;
}

Eigen::VectorXd cumulative_of(const Eigen::VectorXd& p) {
  Eigen::VectorXd c(p.size());
  double acc = 0;
  for (Index k = 0; k < p.size(); ++k) c(k) = (acc += p(k));
  return c;
}

BasisTables build_tables(const EavesdropConfig& cfg, const HermitianObservable<double>& x,
                         const std::vector<Vector<double>>& reprepare) {
  const Index d = x.dim();
  const auto& v = x.eigenvectors();
  const std::size_t outcomes = cfg.eve.size();
  BasisTables t;
  t.values = x.grouped_values();
  t.outcome_given_input.resize(static_cast<Index>(outcomes), d);
  t.final_given.assign(outcomes, std::vector<Eigen::VectorXd>(static_cast<std::size_t>(d)));

  Eigen::MatrixXd p_out(outcomes, d);
  for (std::size_t m = 0; m < outcomes; ++m) {
    const Matrix<double> in_basis = v.adjoint() * cfg.eve[m].op * v;  // <f|M|i>
    const Eigen::MatrixXd trans = in_basis.cwiseAbs2();
    for (Index i = 0; i < d; ++i) {
      p_out(static_cast<Index>(m), i) = trans.col(i).sum();
      if (cfg.forward == ForwardStrategy::Resend) {
        t.final_given[m][static_cast<std::size_t>(i)] = cumulative_of(trans.col(i));
      } else {
        const Eigen::VectorXd pf = (v.adjoint() * reprepare[m]).cwiseAbs2();
        t.final_given[m][static_cast<std::size_t>(i)] = cumulative_of(pf);
      }
    }
  }
  for (Index i = 0; i < d; ++i) t.outcome_given_input.col(i) = cumulative_of(p_out.col(i));
  return t;
}

struct BlockSums {
  // [basis][outcome]
  std::vector<std::uint64_t> count;
  std::vector<double> sum;
  std::vector<double> sumsq;
};

EmpiricalStat make_stat(std::uint64_t n, double sum, double sumsq) {
  EmpiricalStat s;
  s.count = n;
  if (n == 0) return s;
  s.mean = sum / double(n);
  if (n > 1) {
    const double var = std::max(0.0, (sumsq - double(n) * s.mean * s.mean) / double(n - 1));
    s.std_error = std::sqrt(var / double(n));
  }
  return s;
}

// Disturbance of B when Eve forwards a fixed |psi_m> after outcome m:
//   sum_{i,f} <i|M^dagger M|i> |<f|psi_m>|^2 (B_f - B_i)^2 / tr{M^dagger M}.
double reprepare_disturbance(const Matrix<double>& m, const Vector<double>& psi, const HermitianObservable<double>& x) {
  const auto& v = x.eigenvectors();
  const auto& vals = x.grouped_values();
  const Eigen::VectorXd pin = (m * v).colwise().squaredNorm().transpose();
  const Eigen::VectorXd pf = (v.adjoint() * psi).cwiseAbs2();
  double sum = 0;
  for (Index i = 0; i < x.dim(); ++i) {
    for (Index f = 0; f < x.dim(); ++f) sum += pin(i) * pf(f) * (vals(f) - vals(i)) * (vals(f) - vals(i));
  }
  return sum / pin.sum();
}

}  // namespace

EavesdropReport eavesdrop_simulation(const EavesdropConfig& cfg) {
  if (cfg.trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
  const Index d = cfg.eve.dim();
  detail::require_same_dim(cfg.a.matrix(), cfg.eve[0].op, "observable A vs measurement");
  detail::require_same_dim(cfg.b.matrix(), cfg.eve[0].op, "observable B vs measurement");
  const auto completeness = validate_completeness(cfg.eve, cfg.completeness_tol);
  if (!completeness.pass) {
    throw Error(ErrorCode::IncompleteKrausSet,
                "eavesdropper's operators deviate from completeness by " + format_number(completeness.max_deviation));
  }
  const std::size_t outcomes = cfg.eve.size();

  std::vector<Vector<double>> reprepare = cfg.reprepare_states;
  if (cfg.forward == ForwardStrategy::Reprepare) {
    if (reprepare.empty()) {
      for (const auto& o : cfg.eve.outcomes()) {
        if (o.op.squaredNorm() < tol::kUnreachable) {
          reprepare.push_back(basis_ket<double>(d, 0));
          continue;
        }
        Eigen::SelfAdjointEigenSolver<Matrix<double>> es(o.op.adjoint() * o.op);
        reprepare.push_back(es.eigenvectors().col(d - 1));
      }
    }
    if (reprepare.size() != outcomes) throw Error(ErrorCode::InvalidArgument, "one reprepared state per outcome required");
    for (auto& s : reprepare) {
      if (s.size() != d || std::abs(s.norm() - 1.0) > tol::kState) {
        throw Error(ErrorCode::NonUnitState, "reprepared states must be unit vectors of the system dimension");
      }
    }
  }

  const HermitianObservable<double>* bases[2] = {&cfg.a, &cfg.b};
  const BasisTables tables[2] = {build_tables(cfg, cfg.a, reprepare), build_tables(cfg, cfg.b, reprepare)};

  constexpr std::uint64_t kBlock = 4096;
  const std::uint64_t blocks = (cfg.trials + kBlock - 1) / kBlock;
  const std::size_t slots = 2 * outcomes;
  std::vector<BlockSums> partial(blocks);

  parallel_for(static_cast<std::size_t>(blocks), cfg.threads, [&](std::size_t blk) {
    BlockSums& acc = partial[blk];
    acc.count.assign(slots, 0);
    acc.sum.assign(slots, 0.0);
    acc.sumsq.assign(slots, 0.0);
    const std::uint64_t begin = blk * kBlock;
    const std::uint64_t end = std::min(cfg.trials, begin + kBlock);
    for (std::uint64_t trial = begin; trial < end; ++trial) {
      CounterRng rng(cfg.seed, trial);
      const std::size_t basis = static_cast<std::size_t>(rng.below(2));
      const auto input = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(d)));
      const BasisTables& t = tables[basis];
      const std::size_t m = sample_cumulative(t.outcome_given_input.col(static_cast<Index>(input)), rng.uniform());
      const std::size_t f = sample_cumulative(t.final_given[m][input], rng.uniform());
      const double diff = t.values(static_cast<Index>(f)) - t.values(static_cast<Index>(input));
      const double sq = diff * diff;
      const std::size_t slot = basis * outcomes + m;
      acc.count[slot] += 1;
      acc.sum[slot] += sq;
      acc.sumsq[slot] += sq * sq;
    }
  });

  BlockSums total{std::vector<std::uint64_t>(slots, 0), std::vector<double>(slots, 0.0),
                  std::vector<double>(slots, 0.0)};
  for (const auto& p : partial) {
    for (std::size_t s = 0; s < slots; ++s) {
      total.count[s] += p.count[s];
      total.sum[s] += p.sum[s];
      total.sumsq[s] += p.sumsq[s];
    }
  }

  EavesdropReport report;
  report.trials = cfg.trials;
  report.seed = cfg.seed;
  report.forward = cfg.forward;
  report.completeness_deviation = completeness.max_deviation;
  BasisDisturbance* out[2] = {&report.basis_a, &report.basis_b};
  const std::string names[2] = {cfg.name_a, cfg.name_b};
  for (std::size_t basis = 0; basis < 2; ++basis) {
    BasisDisturbance& bd = *out[basis];
    bd.observable = names[basis];
    bd.analytic = 0;
    std::uint64_t n = 0;
    double sum = 0, sumsq = 0;
    for (std::size_t m = 0; m < outcomes; ++m) {
      const auto& op = cfg.eve[m].op;
      const std::size_t slot = basis * outcomes + m;
      OutcomeDisturbance od;
      od.outcome = cfg.eve[m].label;
      od.weight = op.squaredNorm() / double(d);
      od.analytic = std::numeric_limits<double>::quiet_NaN();
      if (op.squaredNorm() >= tol::kUnreachable) {
        od.analytic = cfg.forward == ForwardStrategy::Resend ? averaged_disturbance(op, *bases[basis]).disturbance
                                                             : reprepare_disturbance(op, reprepare[m], *bases[basis]);
        bd.analytic += od.weight * od.analytic;
      }
      od.empirical = make_stat(total.count[slot], total.sum[slot], total.sumsq[slot]);
      od.agrees = within_three_sigma(od.empirical, od.analytic);
      n += total.count[slot];
      sum += total.sum[slot];
      sumsq += total.sumsq[slot];
      bd.per_outcome.push_back(std::move(od));
    }
    bd.empirical = make_stat(n, sum, sumsq);
    bd.agrees = within_three_sigma(bd.empirical, bd.analytic);
  }
  return report;
}

CloningReport cloning_error(std::span<const Vector<double>> states, const HermitianObservable<double>& a,
                            const HermitianObservable<double>& b) {
  if (states.empty()) throw Error(ErrorCode::InvalidArgument, "no cloning states given");
  detail::require_same_dim(a.matrix(), b.matrix(), "observable A vs B");
  const Index d = a.dim();
  Matrix<double> resolution = Matrix<double>::Zero(d, d);
  CloningReport report;
  for (std::size_t k = 0; k < states.size(); ++k) {
    const auto& psi = states[k];
    if (psi.size() != d) throw Error(ErrorCode::DimensionMismatch, "cloning state dimension");
    if (std::abs(psi.norm() - 1.0) > tol::kState) {
      throw Error(ErrorCode::NonUnitState, "cloning state " + std::to_string(k) + " is not normalized");
    }
    const Matrix<double> c = psi * psi.adjoint();
    resolution += c;
    CloningOutcome o;
    o.outcome = std::to_string(k);
    o.estimate_a = optimal_estimate(c, a);
    o.estimate_b = optimal_estimate(c, b);
    o.disturbance_a = averaged_disturbance(c, a).disturbance;
    o.disturbance_b = averaged_disturbance(c, b).disturbance;
    o.a_vs_b = resolution_disturbance_check(c, a, b);
    report.outcomes.push_back(std::move(o));
  }
  report.completeness_deviation = detail::max_abs<double>(resolution - Matrix<double>::Identity(d, d));
  return report;
}

std::vector<FrontierPoint> qnd_frontier(const BosonicSpace& space, std::span<const double> sigmas,
                                        std::span<const double> grid, double outcome) {
  const auto ops = bosonic_operators<double>(space);
  const auto n = eigendecompose(ops.number);
  const auto x = eigendecompose(ops.x);
  std::vector<FrontierPoint> points;
  for (double sigma : sigmas) {
    const auto set = qnd_preset(space, sigma, grid);
    const auto& m = set.op(format_number(outcome));
    const auto rd = resolution_disturbance_check(m, n, x);
    points.push_back({sigma, format_number(outcome), rd.resolution, rd.disturbance, rd.bound});
  }
  return points;
}

}  // namespace qmeter
