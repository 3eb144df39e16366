#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mcov/geometry.hpp"

namespace mcov::motion {

using Rng = std::mt19937_64;

struct BrownianParams {
  double sigma = 0.5;
  friend bool operator==(const BrownianParams&, const BrownianParams&) = default;
};

struct BilliardParams {
  double speed = 1.0;
  friend bool operator==(const BilliardParams&, const BilliardParams&) = default;
};

/// Self-propelled particles with a generalized Morse interaction, cut off at
/// `cutoff` (set to 2r so sensors interact iff their balls overlap).
struct DOrsognaParams {
  double alpha = 1.0;
  double beta = 1.0;
  double ca = 0.45;
  double cr = 0.5;
  double la = 1.0;
  double lr = 0.1;
  double mass = 1.0;
  double cutoff = 0.0;
  friend bool operator==(const DOrsognaParams&, const DOrsognaParams&) = default;
};

using ModelParams = std::variant<BrownianParams, BilliardParams, DOrsognaParams>;

/// "brownian", "billiard" or "dorsogna".
std::string model_tag(const ModelParams& params);

/// D = (1 + delta) S with S = [-0.5, 0.5]^2.
struct DomainSpec {
  double r = 0.1;
  double delta = 0.05;

  static DomainSpec for_radius(double r) { return {r, r / 2.0}; }
};

struct MotionState {
  double time = 0.0;
  std::size_t fence_count = 0;
  /// Fence sensors first (ids 0 .. fence_count-1), then mobile sensors.
  std::vector<Point2> positions;
  /// Mobile sensors only. Free-space coordinate whose mirror fold into S is
  /// the position (Brownian and billiard); equal to the position otherwise.
  std::vector<Point2> unfolded;
  /// Mobile sensors only. Billiard: free-space velocity, D'Orsogna: physical
  /// velocity. Empty for Brownian motion.
  std::vector<Point2> velocity;

  std::size_t mobile_count() const { return positions.size() - fence_count; }
};

/// Mirror fold of the real line onto [-0.5, 0.5].
double fold(double u);
/// True if the fold of u reverses orientation (odd number of reflections).
bool fold_flips(double u);
Point2 fold(Point2 u);

/// Evenly spaced sensors along the boundary of S with spacing 1/ceil(1/r),
/// corners included, counter-clockwise from (-0.5, -0.5).
std::vector<Point2> fence_positions(double r);

/// Throws InvalidRadius unless 0 < r < 0.5.
MotionState init_network(const DomainSpec& spec, int n_mobile, const ModelParams& params, Rng& rng);

/// One Euler-Maruyama step of driftless reflected Brownian motion.
MotionState brownian_step(const MotionState& state, const BrownianParams& params, double dt, Rng& rng);
/// Brownian step with a given standard increment per mobile sensor
/// (each coordinate ~ N(0, dt)).
MotionState brownian_step(const MotionState& state, const BrownianParams& params, double dt,
                          std::span<const Point2> increments);

MotionState billiard_step(const MotionState& state, const BilliardParams& params, double dt);
/// Physical heading of mobile sensor `i` (0-based among mobile sensors).
Point2 billiard_velocity(const MotionState& state, std::size_t i);

/// Radial component of the Morse force between two sensors at distance d;
/// positive means repulsive. Zero at or beyond the cutoff.
double morse_force(double d, const DOrsognaParams& params);
/// Sum of interaction forces on each mobile sensor.
std::vector<Point2> interaction_forces(std::span<const Point2> x, const DOrsognaParams& params);
/// One classical RK4 step followed by wall reflection.
MotionState dorsogna_step(const MotionState& state, const DOrsognaParams& params, double dt);

/// A pending motion over one interval; it can be realized whole or split in
/// two. For Brownian motion it carries the driving path at both ends of the
/// interval, relative to the start of the outermost step, so halves produced
/// by bisection end exactly where the undivided step would.
struct StepPlan {
  MotionState start;
  double dt = 0.0;
  std::vector<Point2> root_unfolded;
  std::vector<Point2> w_begin;
  std::vector<Point2> w_end;
};

class MotionModel {
 public:
  virtual ~MotionModel() = default;

  virtual StepPlan plan(const MotionState& state, double dt) = 0;
  virtual MotionState realize(const StepPlan& plan) const = 0;
  virtual std::pair<StepPlan, StepPlan> bisect(const StepPlan& plan) = 0;
};

/// Owns the stream of randomness for the stochastic models.
std::unique_ptr<MotionModel> make_model(const ModelParams& params, std::uint64_t seed);

/// Mobile positions prescribed as a function of time; fence fixed. Used for
/// hand-authored scenarios.
class ScriptedMotion final : public MotionModel {
 public:
  using Script = std::function<std::vector<Point2>(double)>;
  explicit ScriptedMotion(Script script) : script_(std::move(script)) {}

  StepPlan plan(const MotionState& state, double dt) override;
  MotionState realize(const StepPlan& plan) const override;
  std::pair<StepPlan, StepPlan> bisect(const StepPlan& plan) override;

 private:
  Script script_;
};

}  // namespace mcov::motion
