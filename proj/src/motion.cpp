#include "mcov/motion.hpp"

#include <cmath>
#include <string>

namespace mcov::motion {
namespace {

class BrownianModel final : public MotionModel {
 public:
  BrownianModel(BrownianParams params, std::uint64_t seed) : params_(params), rng_(seed) {}

  StepPlan plan(const MotionState& state, double dt) override {
    StepPlan p{state, dt, state.unfolded, {}, {}};
    p.w_begin.assign(state.mobile_count(), Point2{});
    p.w_end.resize(state.mobile_count());
    std::normal_distribution<double> normal(0.0, std::sqrt(dt));
    for (auto& w : p.w_end) w = {normal(rng_), normal(rng_)};
    return p;
  }

  MotionState realize(const StepPlan& p) const override {
    MotionState next = p.start;
    next.time = p.start.time + p.dt;
    for (std::size_t i = 0; i < next.mobile_count(); ++i) {
      next.unfolded[i] = p.root_unfolded[i] + params_.sigma * p.w_end[i];
      next.positions[next.fence_count + i] = fold(next.unfolded[i]);
    }
    return next;
  }

  // The increment is split evenly, so each sensor moves along a straight
  // line within a base step and bisection terminates.
  std::pair<StepPlan, StepPlan> bisect(const StepPlan& p) override {
    const double half = 0.5 * p.dt;
    std::vector<Point2> mid(p.w_end.size());
    for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = 0.5 * (p.w_begin[i] + p.w_end[i]);
    StepPlan first{p.start, half, p.root_unfolded, p.w_begin, mid};
    StepPlan second{realize(first), half, p.root_unfolded, mid, p.w_end};
    return {std::move(first), std::move(second)};
  }

 private:
  BrownianParams params_;
  Rng rng_;
};

class BilliardModel final : public MotionModel {
 public:
  explicit BilliardModel(BilliardParams params) : params_(params) {}

  StepPlan plan(const MotionState& state, double dt) override { return {state, dt, {}, {}, {}}; }
  MotionState realize(const StepPlan& p) const override { return billiard_step(p.start, params_, p.dt); }
  std::pair<StepPlan, StepPlan> bisect(const StepPlan& p) override {
    StepPlan first{p.start, 0.5 * p.dt, {}, {}, {}};
    StepPlan second{realize(first), 0.5 * p.dt, {}, {}, {}};
    return {std::move(first), std::move(second)};
  }

 private:
  BilliardParams params_;
};

class DOrsognaModel final : public MotionModel {
 public:
  explicit DOrsognaModel(DOrsognaParams params) : params_(params) {}

  StepPlan plan(const MotionState& state, double dt) override { return {state, dt, {}, {}, {}}; }
  MotionState realize(const StepPlan& p) const override { return dorsogna_step(p.start, params_, p.dt); }
  std::pair<StepPlan, StepPlan> bisect(const StepPlan& p) override {
    StepPlan first{p.start, 0.5 * p.dt, {}, {}, {}};
    StepPlan second{realize(first), 0.5 * p.dt, {}, {}, {}};
    return {std::move(first), std::move(second)};
  }

 private:
  DOrsognaParams params_;
};

struct Phase {
  std::vector<Point2> x;
  std::vector<Point2> v;
};

Phase derivative(const Phase& s, const DOrsognaParams& p) {
  Phase d{s.v, interaction_forces(s.x, p)};
  for (std::size_t k = 0; k < s.v.size(); ++k) {
    const double drive = p.alpha - p.beta * norm2(s.v[k]);
    d.v[k] = (1.0 / p.mass) * (drive * s.v[k] + d.v[k]);
  }
  return d;
}

Phase axpy(const Phase& s, double h, const Phase& d) {
  Phase out = s;
  for (std::size_t k = 0; k < s.x.size(); ++k) {
    out.x[k] = s.x[k] + h * d.x[k];
    out.v[k] = s.v[k] + h * d.v[k];
  }
  return out;
}

}  // namespace

std::string model_tag(const ModelParams& params) {
  struct Visitor {
    std::string operator()(const BrownianParams&) const { return "brownian"; }
    std::string operator()(const BilliardParams&) const { return "billiard"; }
    std::string operator()(const DOrsognaParams&) const { return "dorsogna"; }
  };
  return std::visit(Visitor{}, params);
}

double fold(double u) {
  double m = std::fmod(u + 0.5, 2.0);
  if (m < 0.0) m += 2.0;
  if (m > 1.0) m = 2.0 - m;
  return m - 0.5;
}

bool fold_flips(double u) {
  double m = std::fmod(u + 0.5, 2.0);
  if (m < 0.0) m += 2.0;
  return m > 1.0;
}

Point2 fold(Point2 u) { return {fold(u.x), fold(u.y)}; }

std::vector<Point2> fence_positions(double r) {
  const int per_side = static_cast<int>(std::ceil(1.0 / r - 1e-12));
  const double step = 1.0 / per_side;
  std::vector<Point2> out;
  out.reserve(4 * per_side);
  for (int k = 0; k < per_side; ++k) out.push_back({-0.5 + k * step, -0.5});
  for (int k = 0; k < per_side; ++k) out.push_back({0.5, -0.5 + k * step});
  for (int k = 0; k < per_side; ++k) out.push_back({0.5 - k * step, 0.5});
  for (int k = 0; k < per_side; ++k) out.push_back({-0.5, 0.5 - k * step});
  return out;
}

MotionState init_network(const DomainSpec& spec, int n_mobile, const ModelParams& params, Rng& rng) {
  if (!(spec.r > 0.0 && spec.r < 0.5)) {
    throw InvalidRadius("sensing radius " + std::to_string(spec.r) + " must lie in (0, 0.5)");
  }
  if (n_mobile < 0) throw RangeError("number of mobile sensors must be non-negative");

  MotionState s;
  s.positions = fence_positions(spec.r);
  s.fence_count = s.positions.size();

  // Collinear and cocircular fence sensors would be permanent Delaunay
  // degeneracies; nudge them once, far below any physical scale.
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (auto& p : s.positions) p = p + (1e-9 * spec.r) * Point2{unit(rng), unit(rng)};

  std::uniform_real_distribution<double> coord(-0.5, 0.5);
  for (int i = 0; i < n_mobile; ++i) {
    const double x = coord(rng);
    const double y = coord(rng);
    s.positions.push_back({x, y});
    s.unfolded.push_back({x, y});
  }

  const bool headed = !std::holds_alternative<BrownianParams>(params);
  if (headed) {
    const double speed =
        std::holds_alternative<BilliardParams>(params) ? std::get<BilliardParams>(params).speed : 1.0;
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    for (int i = 0; i < n_mobile; ++i) {
      const double theta = angle(rng);
      s.velocity.push_back({speed * std::cos(theta), speed * std::sin(theta)});
    }
  }
  return s;
}

MotionState brownian_step(const MotionState& state, const BrownianParams& params, double dt, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(dt));
  std::vector<Point2> inc(state.mobile_count());
  for (auto& w : inc) w = {normal(rng), normal(rng)};
  return brownian_step(state, params, dt, inc);
}

MotionState brownian_step(const MotionState& state, const BrownianParams& params, double dt,
                          std::span<const Point2> increments) {
  MotionState next = state;
  next.time += dt;
  for (std::size_t i = 0; i < next.mobile_count(); ++i) {
    next.unfolded[i] = next.unfolded[i] + params.sigma * increments[i];
    next.positions[next.fence_count + i] = fold(next.unfolded[i]);
  }
  return next;
}

MotionState billiard_step(const MotionState& state, const BilliardParams&, double dt) {
  MotionState next = state;
  next.time += dt;
  for (std::size_t i = 0; i < next.mobile_count(); ++i) {
    next.unfolded[i] = next.unfolded[i] + dt * next.velocity[i];
    next.positions[next.fence_count + i] = fold(next.unfolded[i]);
  }
  return next;
}

Point2 billiard_velocity(const MotionState& state, std::size_t i) {
  const Point2 u = state.unfolded[i];
  const Point2 v = state.velocity[i];
  return {fold_flips(u.x) ? -v.x : v.x, fold_flips(u.y) ? -v.y : v.y};
}

double morse_force(double d, const DOrsognaParams& p) {
  if (d >= p.cutoff) return 0.0;
  return (p.cr / p.lr) * std::exp(-d / p.lr) - (p.ca / p.la) * std::exp(-d / p.la);
}

std::vector<Point2> interaction_forces(std::span<const Point2> x, const DOrsognaParams& p) {
  std::vector<Point2> f(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    for (std::size_t m = k + 1; m < x.size(); ++m) {
      const Point2 diff = x[k] - x[m];
      const double d = norm(diff);
      if (d >= p.cutoff || d == 0.0) continue;
      const Point2 push = (morse_force(d, p) / d) * diff;
      f[k] = f[k] + push;
      f[m] = f[m] - push;
    }
  }
  return f;
}

MotionState dorsogna_step(const MotionState& state, const DOrsognaParams& params, double dt) {
  const std::size_t n = state.mobile_count();
  Phase s{std::vector<Point2>(state.positions.begin() + state.fence_count, state.positions.end()),
          state.velocity};

  const Phase k1 = derivative(s, params);
  const Phase k2 = derivative(axpy(s, 0.5 * dt, k1), params);
  const Phase k3 = derivative(axpy(s, 0.5 * dt, k2), params);
  const Phase k4 = derivative(axpy(s, dt, k3), params);

  MotionState next = state;
  next.time += dt;
  for (std::size_t k = 0; k < n; ++k) {
    Point2 x = s.x[k] + (dt / 6.0) * (k1.x[k] + 2.0 * k2.x[k] + 2.0 * k3.x[k] + k4.x[k]);
    Point2 v = s.v[k] + (dt / 6.0) * (k1.v[k] + 2.0 * k2.v[k] + 2.0 * k3.v[k] + k4.v[k]);
    if (fold_flips(x.x)) v.x = -v.x;
    if (fold_flips(x.y)) v.y = -v.y;
    x = fold(x);
    next.positions[next.fence_count + k] = x;
    next.unfolded[k] = x;
    next.velocity[k] = v;
  }
  return next;
}

std::unique_ptr<MotionModel> make_model(const ModelParams& params, std::uint64_t seed) {
  struct Visitor {
    std::uint64_t seed;
    std::unique_ptr<MotionModel> operator()(const BrownianParams& p) const {
      return std::make_unique<BrownianModel>(p, seed);
    }
    std::unique_ptr<MotionModel> operator()(const BilliardParams& p) const {
      return std::make_unique<BilliardModel>(p);
    }
    std::unique_ptr<MotionModel> operator()(const DOrsognaParams& p) const {
      return std::make_unique<DOrsognaModel>(p);
    }
  };
  return std::visit(Visitor{seed}, params);
}

StepPlan ScriptedMotion::plan(const MotionState& state, double dt) { return {state, dt, {}, {}, {}}; }

MotionState ScriptedMotion::realize(const StepPlan& p) const {
  MotionState next = p.start;
  next.time = p.start.time + p.dt;
  const auto mobile = script_(next.time);
  for (std::size_t i = 0; i < mobile.size() && i < next.mobile_count(); ++i) {
    next.positions[next.fence_count + i] = mobile[i];
    next.unfolded[i] = mobile[i];
  }
  return next;
}

std::pair<StepPlan, StepPlan> ScriptedMotion::bisect(const StepPlan& p) {
  StepPlan first{p.start, 0.5 * p.dt, {}, {}, {}};
  StepPlan second{realize(first), 0.5 * p.dt, {}, {}, {}};
  return {std::move(first), std::move(second)};
}

}  // namespace mcov::motion
