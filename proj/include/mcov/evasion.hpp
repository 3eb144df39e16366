#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mcov/geometry.hpp"
#include "mcov/motion.hpp"
#include "mcov/topology.hpp"

namespace mcov::evasion {

using topology::BoundaryCycle;

enum class Mode { Connected, PowerDown };

enum class TransitionKind {
  NoChange,
  AddEdge,
  RemoveEdge,
  Add2Simplex,
  Remove2Simplex,
  AddPair,
  RemovePair,
  DelaunayFlip,
  Disconnect,
  Reconnect,
  NonAtomic,
};

std::string_view to_string(TransitionKind kind);
std::optional<TransitionKind> kind_from_string(std::string_view name);
std::string_view to_string(Mode mode);
std::optional<Mode> mode_from_string(std::string_view name);

/// Set-difference counts between two snapshots: edges, triangles and
/// boundary cycles added and removed.
struct TransitionSignature {
  int edges_added = 0;
  int edges_removed = 0;
  int triangles_added = 0;
  int triangles_removed = 0;
  int cycles_added = 0;
  int cycles_removed = 0;

  friend auto operator<=>(const TransitionSignature&, const TransitionSignature&) = default;
};

TransitionKind classify_signature(const TransitionSignature& sig);

/// true = may contain an intruder.
using CycleLabelling = std::map<BoundaryCycle, bool>;

/// Contiguous id range reserved for the fence sensors.
struct FenceRange {
  SensorId first = 0;
  SensorId count = 0;

  bool contains(SensorId id) const { return id >= first && id - first < count; }
};

struct StateSnapshot {
  double time = 0.0;
  Mode mode = Mode::Connected;
  FenceRange fence;
  std::vector<Point2> positions;
  geometry::AlphaComplex complex;
  /// Every boundary cycle of the complex, vertex cycles included, sorted.
  std::vector<BoundaryCycle> cycles;
  /// Per sensor id: 1 if joined to some fence sensor by complex edges.
  std::vector<char> fence_component;
  /// The cycle traversing the unbounded face of the fence component.
  BoundaryCycle outer;
  /// Outer cycle of every connected component, sorted.
  std::vector<BoundaryCycle> component_outers;
  CycleLabelling labelling;

  bool fence_connected(const BoundaryCycle& c) const { return fence_component[c.darts.front().tail] != 0; }
};

/// Builds everything but the labelling.
StateSnapshot make_snapshot(double time, std::span<const Point2> positions, geometry::AlphaComplex complex,
                            FenceRange fence, Mode mode);
StateSnapshot make_snapshot(double time, std::span<const Point2> positions, double r, FenceRange fence,
                            Mode mode, std::uint64_t jitter_seed = 0);

/// The unique cycle of positive signed area (counter-clockwise traversal of
/// the unbounded face) among cycles visiting a fence sensor. Throws
/// NoFenceCycle if there are none or several.
BoundaryCycle identify_outer_cycle(std::span<const BoundaryCycle> cycles, std::span<const Point2> positions,
                                   std::optional<FenceRange> fence = std::nullopt);

/// A 3-dart cycle around a triangle of the complex that is not the outside of
/// its component.
bool bounds_two_simplex(const StateSnapshot& s, const BoundaryCycle& c);

/// Cycles that carry labels: all but the fence outer cycle, restricted to the
/// fence component in power-down mode.
std::vector<BoundaryCycle> label_domain(const StateSnapshot& s);

CycleLabelling initial_labelling(const StateSnapshot& s);

/// In power-down mode only simplices and cycles supported on sensors that are
/// fence-connected at either snapshot are compared.
TransitionSignature transition_signature(const StateSnapshot& prev, const StateSnapshot& next);
/// Signatures of paired events (AddPair, RemovePair, DelaunayFlip) only count
/// as atomic when each added or removed triangle has the added or removed edge
/// as a face.
TransitionKind classify_transition(const StateSnapshot& prev, const StateSnapshot& next);

/// True when every triangle in `next` but not `prev` contains an edge in `next`
/// but not `prev` (if there is any such edge), and likewise for removals.
/// `keep` restricts both sets.
bool changes_incident(const geometry::AlphaComplex& prev, const geometry::AlphaComplex& next,
                      const std::function<bool(SensorId)>& keep = {});

/// Serialized rule: persisting cycles keep their label, new cycles take the
/// OR over vanished cycles, then 2-simplex faces are cleared. Throws
/// MissingLabel if a persisting cycle has no prior label.
CycleLabelling update_labelling(const StateSnapshot& prev, const StateSnapshot& next);

/// Per-case rule for the seven connected-network atomic kinds. Throws
/// std::invalid_argument for any other kind.
CycleLabelling case_based_update(const StateSnapshot& prev, const StateSnapshot& next, TransitionKind kind);

/// Rule for networks whose components may leave and rejoin the fence
/// component; only fence-connected cycles are labelled.
CycleLabelling update_labelling_powerdown(const StateSnapshot& prev, const StateSnapshot& next,
                                          TransitionKind kind);

/// Used when bisection cannot isolate a single change. Labelled cycles that
/// persist keep their label; every other domain cycle takes the OR of all
/// labels that left the domain.
CycleLabelling fallback_update(const StateSnapshot& prev, const StateSnapshot& next);

bool evasion_possible(const CycleLabelling& labels);

struct ReebEvent {
  double time = 0.0;
  TransitionKind kind = TransitionKind::NoChange;
  std::vector<BoundaryCycle> parents;
  std::vector<BoundaryCycle> children;
  /// New or changed labels after the event.
  std::vector<std::pair<BoundaryCycle, bool>> labels;
  /// Persisting cycles whose label was dropped (left the fence component).
  std::vector<BoundaryCycle> dropped;
};

ReebEvent make_event(const StateSnapshot& prev, const StateSnapshot& next, TransitionKind kind);

nlohmann::json to_json(const ReebEvent& e);
ReebEvent event_from_json(const nlohmann::json& j);

/// Applies an event log to an initial labelling.
CycleLabelling replay(CycleLabelling labels, std::span<const ReebEvent> events);

/// One post-bisection sub-step as seen by the labelling.
struct AcceptedStep {
  double time = 0.0;
  std::vector<Point2> positions;
  /// Sensors taking part in coverage (all of them in connected mode).
  std::vector<char> active;
  bool evasion = false;
  /// Polygons traced by the cycles labelled true.
  std::vector<std::vector<Point2>> open_faces;
};

struct StepOptions {
  double r = 0.1;
  double dt_min = 0.01 / 1048576.0;
  std::uint64_t jitter_seed = 0;
  bool record_steps = false;
};

struct StepOutcome {
  StateSnapshot snapshot;
  motion::MotionState motion;
  std::vector<ReebEvent> events;
  std::vector<AcceptedStep> steps;
  int fallbacks = 0;
  int bisections = 0;
  /// Time of the first sub-step after which no label is true.
  std::optional<double> cleared_at;
};

/// Advances by dt, bisecting until every sub-step is atomic or dt_min is
/// reached.
StepOutcome adaptive_step(const StateSnapshot& state, const motion::MotionState& motion_state,
                          motion::MotionModel& model, double dt, const StepOptions& options);

AcceptedStep accepted_step(const StateSnapshot& s);

}  // namespace mcov::evasion
