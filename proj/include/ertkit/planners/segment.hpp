#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>

#include <Eigen/Core>

#include <ertkit/core.hpp>
#include <ertkit/errors.hpp>
#include <ertkit/rng.hpp>

namespace ertkit
{
/// Planner knobs. Defaults for p, omega and epsilon follow the published
/// planner defaults; delta defaults to 1% of the bounding-box diameter.
struct PlannerParams
{
  /// Goal-connect attempt probability (ERT only).
  double p = 0.05;
  /// Phase-span bounds of explore segments.
  double omega_min = 0.05;
  double omega_max = 0.1;
  /// Per-dimension malleability bound; empty means 5 in every dimension.
  Eigen::VectorXd epsilon;
  /// Validity-check resolution in Q; unset means World::DefaultDelta().
  std::optional<double> delta;
  double timeout = 2.0;
  uint64_t max_iterations = 1000000;
  uint64_t seed = 0;
  /// Wall-clock stop; off makes a run depend only on its seed.
  bool enforce_timeout = true;
  /// Prove edges collision-free between samples, not only at samples.
  bool certify_motions = true;
  /// RRTConnect extension step as a fraction of the space diameter.
  double rrt_step_fraction = 0.05;
  /// Keep trees and the mapped prior in the result (rendering, audits).
  bool keep_trees = false;

  static constexpr double kDefaultEpsilon = 5.0;

  Eigen::VectorXd EpsilonFor(const long n) const
  {
    if (epsilon.size() == 0)
    {
      return Eigen::VectorXd::Constant(n, kDefaultEpsilon);
    }
    if (epsilon.size() == 1 && n != 1)
    {
      return Eigen::VectorXd::Constant(n, epsilon[0]);
    }
    CheckDimensions(n, epsilon.size(), "PlannerParams::epsilon");
    return epsilon;
  }

  void Validate() const
  {
    if (!(p >= 0.0 && p <= 1.0))
    {
      Throw(ErrorCode::InvalidArgument, "p must lie in [0, 1]");
    }
    if (!(omega_min > 0.0 && omega_min <= omega_max && omega_max <= 1.0))
    {
      Throw(ErrorCode::InvalidArgument, "need 0 < omega_min <= omega_max <= 1");
    }
    if (epsilon.size() > 0 && !((epsilon.array() >= 0.0).all() && epsilon.allFinite()))
    {
      Throw(ErrorCode::InvalidArgument, "epsilon must be finite and >= 0");
    }
    if (delta && !(*delta > 0.0))
    {
      Throw(ErrorCode::InvalidArgument, "delta must be > 0");
    }
    if (!(timeout >= 0.0))
    {
      Throw(ErrorCode::InvalidArgument, "timeout must be >= 0");
    }
    if (!(rrt_step_fraction > 0.0))
    {
      Throw(ErrorCode::InvalidArgument, "rrt_step_fraction must be > 0");
    }
  }
};

/// Shear-and-shift morph: each state moves by rho * lambda + b, where rho
/// runs from 0 at the anchor to 1 at the far end. Phases are untouched.
inline MicroSegment MorphSegment(const MicroSegment& psi_d,
                                 const Eigen::VectorXd& lambda,
                                 const Eigen::VectorXd& b)
{
  const long n = psi_d.Dimension();
  CheckDimensions(n, lambda.size(), "MorphSegment(lambda)");
  CheckDimensions(n, b.size(), "MorphSegment(b)");
  MicroSegment psi = psi_d;
  const double anchor = psi_d.AnchorAlpha();
  const double span = psi_d.Span();
  for (auto& state : psi.MutableStates())
  {
    const double rho = std::abs(state.alpha - anchor) / span;
    state.q = state.q + rho * lambda + b;
  }
  return psi;
}

/// Draws the far phase of an explore segment, clamped to [0, 1].
inline double SampleSegmentEnd(const double alpha_init, const Direction direction,
                               const PlannerParams& params, Rng& rng)
{
  if (!(alpha_init >= 0.0 && alpha_init <= 1.0))
  {
    Throw(ErrorCode::PhaseOutOfRange, "alpha_init outside [0, 1]");
  }
  if ((direction == Direction::Forward && alpha_init >= 1.0)
      || (direction == Direction::Backward && alpha_init <= 0.0))
  {
    Throw(ErrorCode::DegenerateSpan, "no phase left in the requested direction");
  }
  const double span = rng.Uniform(params.omega_min, params.omega_max);
  if (direction == Direction::Forward)
  {
    return std::min(alpha_init + span, 1.0);
  }
  return std::max(0.0, alpha_init - span);
}

struct GeneratedSegment
{
  MicroSegment segment;
  PhasedState end;
  Eigen::VectorXd lambda;
  Eigen::VectorXd b;
};

/// Connect mode (target given): morph the prior slice between the two
/// phases so it starts at q_init and ends at q_targ. Explore mode: draw the
/// far phase, anchor at q_init and shear by a random lambda bounded by
/// epsilon * span. Both ends the morph is meant to hit are written back
/// exactly, so node configurations and segment endpoints compare equal.
inline GeneratedSegment GenerateSegment(const PhasedState& s_init,
                                        const std::optional<PhasedState>& s_targ,
                                        const PathExperience& xi_prime,
                                        const Direction direction,
                                        const PlannerParams& params, Rng& rng)
{
  const long n = xi_prime.Dimension();
  CheckDimensions(n, s_init.q.size(), "GenerateSegment(s_init)");
  const double alpha_init = s_init.alpha;
  if (!(alpha_init >= 0.0 && alpha_init <= 1.0))
  {
    Throw(ErrorCode::PhaseOutOfRange, "s_init phase outside [0, 1]");
  }

  double alpha_targ = 0.0;
  if (s_targ)
  {
    CheckDimensions(n, s_targ->q.size(), "GenerateSegment(s_targ)");
    alpha_targ = s_targ->alpha;
  }
  else
  {
    alpha_targ = SampleSegmentEnd(alpha_init, direction, params, rng);
  }

  const MicroSegment psi_d = ExtractSegment(xi_prime, alpha_init, alpha_targ);
  const Eigen::VectorXd b = s_init.q - psi_d.Front().q;
  Eigen::VectorXd lambda(n);
  if (s_targ)
  {
    lambda = s_targ->q - (psi_d.Back().q + b);
  }
  else
  {
    const Eigen::VectorXd bound = params.EpsilonFor(n) * psi_d.Span();
    for (long i = 0; i < n; i++)
    {
      lambda[i] = rng.Uniform(-bound[i], bound[i]);
    }
  }

  MicroSegment psi = MorphSegment(psi_d, lambda, b);
  auto& states = psi.MutableStates();
  states.front().q = s_init.q;
  if (s_targ)
  {
    states.back().q = s_targ->q;
  }
  PhasedState end = states.back();
  return {std::move(psi), std::move(end), std::move(lambda), b};
}
}  // namespace ertkit
