#include <algorithm>
#include <array>
#include <optional>

#include "mcov/evasion.hpp"

namespace mcov::evasion {
namespace {

template <class T>
std::size_t count_missing(const std::vector<T>& from, const std::vector<T>& in) {
  std::size_t n = 0;
  auto it = in.begin();
  for (const T& x : from) {
    it = std::lower_bound(it, in.end(), x);
    if (it == in.end() || *it != x) ++n;
  }
  return n;
}

// Verdict from simplex counts alone, before any boundary cycles are built:
// NoChange if the complexes agree, NonAtomic if no atomic transition has these
// counts, nothing otherwise. Only valid in connected mode, where the counts
// are taken over the whole complex.
std::optional<TransitionKind> quick_kind(const geometry::AlphaComplex& a, const geometry::AlphaComplex& b) {
  const std::array<std::size_t, 4> c{count_missing(b.edges, a.edges), count_missing(a.edges, b.edges),
                                     count_missing(b.triangles, a.triangles),
                                     count_missing(a.triangles, b.triangles)};
  static constexpr std::array<std::array<std::size_t, 4>, 8> kAllowed{{{0, 0, 0, 0},
                                                                       {1, 0, 0, 0},
                                                                       {0, 1, 0, 0},
                                                                       {0, 0, 1, 0},
                                                                       {0, 0, 0, 1},
                                                                       {1, 0, 1, 0},
                                                                       {0, 1, 0, 1},
                                                                       {1, 1, 2, 2}}};
  if (c == kAllowed[0] && a.vertices == b.vertices) return TransitionKind::NoChange;
  if (std::find(kAllowed.begin(), kAllowed.end(), c) == kAllowed.end()) return TransitionKind::NonAtomic;
  if (!changes_incident(a, b)) return TransitionKind::NonAtomic;
  return std::nullopt;
}

class Stepper {
 public:
  Stepper(StepOutcome& out, motion::MotionModel& model, const StepOptions& options)
      : out_(out), model_(model), options_(options) {}

  void run(motion::StepPlan plan) {
    motion::MotionState end = model_.realize(plan);
    const StateSnapshot& prev = out_.snapshot;
    auto complex = geometry::alpha_complex(end.positions, options_.r, options_.jitter_seed);

    std::optional<TransitionKind> quick;
    if (prev.mode == Mode::Connected) quick = quick_kind(prev.complex, complex);
    if (quick == TransitionKind::NonAtomic && plan.dt > options_.dt_min) {
      split(std::move(plan));
      return;
    }

    StateSnapshot next;
    if (quick == TransitionKind::NoChange) {
      // Same complex, same planar embedding, so the cycles carry over.
      next = prev;
      next.time = end.time;
      next.positions = end.positions;
      next.complex = std::move(complex);
    } else {
      next = make_snapshot(end.time, end.positions, std::move(complex), prev.fence, prev.mode);
    }
    const TransitionKind kind = quick ? *quick : classify_transition(prev, next);

    if (kind == TransitionKind::NonAtomic && plan.dt > options_.dt_min) {
      split(std::move(plan));
      return;
    }

    if (kind == TransitionKind::NoChange) {
      next.labelling = prev.labelling;
    } else if (kind == TransitionKind::NonAtomic) {
      ++out_.fallbacks;
      next.labelling = fallback_update(prev, next);
      out_.events.push_back(make_event(prev, next, kind));
    } else {
      next.labelling = prev.mode == Mode::PowerDown ? update_labelling_powerdown(prev, next, kind)
                                                    : update_labelling(prev, next);
      out_.events.push_back(make_event(prev, next, kind));
    }

    const bool was_clear = !evasion_possible(prev.labelling);
    out_.snapshot = std::move(next);
    out_.motion = std::move(end);
    const bool clear = !evasion_possible(out_.snapshot.labelling);
    if (clear && !was_clear && !out_.cleared_at) out_.cleared_at = out_.snapshot.time;
    if (options_.record_steps) out_.steps.push_back(accepted_step(out_.snapshot));
  }

 private:
  void split(motion::StepPlan plan) {
    ++out_.bisections;
    auto [first, second] = model_.bisect(plan);
    run(std::move(first));
    second.start = out_.motion;
    run(std::move(second));
  }

  StepOutcome& out_;
  motion::MotionModel& model_;
  const StepOptions& options_;
};

}  // namespace

StepOutcome adaptive_step(const StateSnapshot& state, const motion::MotionState& motion_state,
                          motion::MotionModel& model, double dt, const StepOptions& options) {
  StepOutcome out{state, motion_state, {}, {}, 0, 0, std::nullopt};
  Stepper(out, model, options).run(model.plan(motion_state, dt));
  return out;
}

}  // namespace mcov::evasion
