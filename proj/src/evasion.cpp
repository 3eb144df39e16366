#include "mcov/evasion.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <stdexcept>

namespace mcov::evasion {
namespace {

struct KindName {
  TransitionKind kind;
  std::string_view name;
};

constexpr std::array<KindName, 11> kKindNames{{
    {TransitionKind::NoChange, "NoChange"},
    {TransitionKind::AddEdge, "AddEdge"},
    {TransitionKind::RemoveEdge, "RemoveEdge"},
    {TransitionKind::Add2Simplex, "Add2Simplex"},
    {TransitionKind::Remove2Simplex, "Remove2Simplex"},
    {TransitionKind::AddPair, "AddPair"},
    {TransitionKind::RemovePair, "RemovePair"},
    {TransitionKind::DelaunayFlip, "DelaunayFlip"},
    {TransitionKind::Disconnect, "Disconnect"},
    {TransitionKind::Reconnect, "Reconnect"},
    {TransitionKind::NonAtomic, "NonAtomic"},
}};

struct SignatureRow {
  TransitionSignature sig;
  TransitionKind kind;
};

constexpr std::array<SignatureRow, 10> kSignatureRows{{
    {{0, 0, 0, 0, 0, 0}, TransitionKind::NoChange},
    {{1, 0, 0, 0, 2, 1}, TransitionKind::AddEdge},
    {{0, 1, 0, 0, 1, 2}, TransitionKind::RemoveEdge},
    {{0, 0, 1, 0, 0, 0}, TransitionKind::Add2Simplex},
    {{0, 0, 0, 1, 0, 0}, TransitionKind::Remove2Simplex},
    {{1, 0, 1, 0, 2, 1}, TransitionKind::AddPair},
    {{0, 1, 0, 1, 1, 2}, TransitionKind::RemovePair},
    {{1, 1, 2, 2, 2, 2}, TransitionKind::DelaunayFlip},
    {{0, 1, 0, 0, 2, 1}, TransitionKind::Disconnect},
    {{1, 0, 0, 0, 1, 2}, TransitionKind::Reconnect},
}};

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

template <class T, class Keep>
int count_missing(const std::vector<T>& from, const std::vector<T>& in, Keep keep) {
  int n = 0;
  for (const T& x : from) {
    if (keep(x) && !std::binary_search(in.begin(), in.end(), x)) ++n;
  }
  return n;
}

template <class T>
std::vector<T> difference(const std::vector<T>& a, const std::vector<T>& b) {
  std::vector<T> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool contains(const std::vector<BoundaryCycle>& sorted, const BoundaryCycle& c) {
  return std::binary_search(sorted.begin(), sorted.end(), c);
}

bool label_of(const CycleLabelling& labels, const BoundaryCycle& c) {
  auto it = labels.find(c);
  return it != labels.end() && it->second;
}

bool any_label(const CycleLabelling& labels, const std::vector<BoundaryCycle>& cycles) {
  return std::any_of(cycles.begin(), cycles.end(), [&](const BoundaryCycle& c) { return label_of(labels, c); });
}

// Sensors fence-connected at either snapshot.
std::vector<char> union_support(const StateSnapshot& prev, const StateSnapshot& next) {
  std::vector<char> u(std::max(prev.fence_component.size(), next.fence_component.size()), 0);
  for (std::size_t i = 0; i < prev.fence_component.size(); ++i) u[i] |= prev.fence_component[i];
  for (std::size_t i = 0; i < next.fence_component.size(); ++i) u[i] |= next.fence_component[i];
  return u;
}

std::vector<BoundaryCycle> restricted_difference(const StateSnapshot& a, const StateSnapshot& b,
                                                 const std::vector<char>* support) {
  std::vector<BoundaryCycle> out;
  for (const auto& c : difference(a.cycles, b.cycles)) {
    if (!support || std::all_of(c.darts.begin(), c.darts.end(), [&](const topology::Dart& d) {
          return (*support)[d.tail] != 0;
        })) {
      out.push_back(c);
    }
  }
  return out;
}

void clear_two_simplices(const StateSnapshot& next, CycleLabelling& labels) {
  for (auto& [c, value] : labels) {
    if (value && bounds_two_simplex(next, c)) value = false;
  }
}

// Labels of domain cycles that persist and were labelled; the rest are
// returned in `unlabelled`.
CycleLabelling carry_persisting(const StateSnapshot& prev, const StateSnapshot& next,
                                std::vector<BoundaryCycle>& unlabelled) {
  CycleLabelling out;
  for (const auto& c : label_domain(next)) {
    auto it = prev.labelling.find(c);
    if (it != prev.labelling.end()) {
      out.emplace(c, it->second);
    } else {
      unlabelled.push_back(c);
    }
  }
  return out;
}

const BoundaryCycle& only(const std::vector<BoundaryCycle>& cycles, const char* what) {
  if (cycles.size() != 1) {
    throw std::logic_error(std::string("expected exactly one ") + what + " cycle, found " +
                           std::to_string(cycles.size()));
  }
  return cycles.front();
}

nlohmann::json cycle_json(const BoundaryCycle& c) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& d : c.darts) j.push_back({d.tail, d.head});
  return j;
}

BoundaryCycle cycle_from_json(const nlohmann::json& j) {
  BoundaryCycle c;
  for (const auto& d : j) c.darts.push_back({d.at(0).get<SensorId>(), d.at(1).get<SensorId>()});
  return c;
}

nlohmann::json cycles_json(const std::vector<BoundaryCycle>& cs) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& c : cs) j.push_back(cycle_json(c));
  return j;
}

std::vector<BoundaryCycle> cycles_from_json(const nlohmann::json& j) {
  std::vector<BoundaryCycle> out;
  for (const auto& c : j) out.push_back(cycle_from_json(c));
  return out;
}

}  // namespace

std::string_view to_string(TransitionKind kind) {
  for (const auto& k : kKindNames) {
    if (k.kind == kind) return k.name;
  }
  return "NonAtomic";
}

std::optional<TransitionKind> kind_from_string(std::string_view name) {
  for (const auto& k : kKindNames) {
    if (k.name == name) return k.kind;
  }
  return std::nullopt;
}

std::string_view to_string(Mode mode) { return mode == Mode::Connected ? "connected" : "power_down"; }

std::optional<Mode> mode_from_string(std::string_view name) {
  if (name == "connected") return Mode::Connected;
  if (name == "power_down") return Mode::PowerDown;
  return std::nullopt;
}

TransitionKind classify_signature(const TransitionSignature& sig) {
  for (const auto& row : kSignatureRows) {
    if (row.sig == sig) return row.kind;
  }
  return TransitionKind::NonAtomic;
}

StateSnapshot make_snapshot(double time, std::span<const Point2> positions, geometry::AlphaComplex complex,
                            FenceRange fence, Mode mode) {
  StateSnapshot s;
  s.time = time;
  s.mode = mode;
  s.fence = fence;
  s.positions.assign(positions.begin(), positions.end());
  s.complex = std::move(complex);

  const auto rotation = geometry::rotation_data(s.positions, s.complex);
  const auto fat = topology::build_fat_graph(s.complex.edges, rotation);
  s.cycles = topology::boundary_cycles(fat);

  const std::size_t n = rotation.size();
  UnionFind uf(n);
  for (const auto& e : s.complex.edges) uf.unite(e[0], e[1]);
  std::vector<char> fence_root(n, 0);
  for (SensorId id = fence.first; id < fence.first + fence.count && id < n; ++id) fence_root[uf.find(id)] = 1;
  s.fence_component.resize(n);
  for (std::size_t v = 0; v < n; ++v) s.fence_component[v] = fence_root[uf.find(v)];

  // Each component's outside is its largest-area cycle.
  std::vector<std::size_t> best(n, s.cycles.size());
  std::vector<double> best_area(n, 0.0);
  for (std::size_t i = 0; i < s.cycles.size(); ++i) {
    const std::size_t root = uf.find(s.cycles[i].darts.front().tail);
    const double area = topology::signed_area(s.cycles[i], s.positions);
    if (best[root] == s.cycles.size() || area > best_area[root]) {
      best[root] = i;
      best_area[root] = area;
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (best[v] != s.cycles.size()) s.component_outers.push_back(s.cycles[best[v]]);
  }
  std::sort(s.component_outers.begin(), s.component_outers.end());

  s.outer = identify_outer_cycle(s.cycles, s.positions, fence);
  return s;
}

StateSnapshot make_snapshot(double time, std::span<const Point2> positions, double r, FenceRange fence,
                            Mode mode, std::uint64_t jitter_seed) {
  return make_snapshot(time, positions, geometry::alpha_complex(positions, r, jitter_seed), fence, mode);
}

BoundaryCycle identify_outer_cycle(std::span<const BoundaryCycle> cycles, std::span<const Point2> positions,
                                   std::optional<FenceRange> fence) {
  const BoundaryCycle* found = nullptr;
  int count = 0;
  for (const auto& c : cycles) {
    if (fence && std::none_of(c.darts.begin(), c.darts.end(),
                              [&](const topology::Dart& d) { return fence->contains(d.tail); })) {
      continue;
    }
    if (topology::signed_area(c, positions) > 1e-12) {
      found = &c;
      ++count;
    }
  }
  if (count != 1) {
    throw NoFenceCycle("expected one counter-clockwise cycle around the fence, found " + std::to_string(count));
  }
  return *found;
}

bool bounds_two_simplex(const StateSnapshot& s, const BoundaryCycle& c) {
  if (c.darts.size() != 3) return false;
  const SensorId a = c.darts[0].tail, b = c.darts[1].tail, d = c.darts[2].tail;
  if (a == b || b == d || a == d) return false;
  return s.complex.has_triangle(a, b, d) && !contains(s.component_outers, c);
}

std::vector<BoundaryCycle> label_domain(const StateSnapshot& s) {
  std::vector<BoundaryCycle> out;
  for (const auto& c : s.cycles) {
    if (c == s.outer) continue;
    if (s.mode == Mode::PowerDown && !s.fence_connected(c)) continue;
    out.push_back(c);
  }
  return out;
}

CycleLabelling initial_labelling(const StateSnapshot& s) {
  CycleLabelling labels;
  for (const auto& c : label_domain(s)) labels.emplace(c, !bounds_two_simplex(s, c));
  return labels;
}

TransitionSignature transition_signature(const StateSnapshot& prev, const StateSnapshot& next) {
  const bool restrict = prev.mode == Mode::PowerDown;
  const std::vector<char> u = restrict ? union_support(prev, next) : std::vector<char>{};
  auto keep_edge = [&](const geometry::Edge& e) { return !restrict || (u[e[0]] && u[e[1]]); };
  auto keep_tri = [&](const geometry::Triangle& t) { return !restrict || (u[t[0]] && u[t[1]] && u[t[2]]); };
  auto keep_cycle = [&](const BoundaryCycle& c) {
    return !restrict ||
           std::all_of(c.darts.begin(), c.darts.end(), [&](const topology::Dart& d) { return u[d.tail] != 0; });
  };

  TransitionSignature sig;
  sig.edges_added = count_missing(next.complex.edges, prev.complex.edges, keep_edge);
  sig.edges_removed = count_missing(prev.complex.edges, next.complex.edges, keep_edge);
  sig.triangles_added = count_missing(next.complex.triangles, prev.complex.triangles, keep_tri);
  sig.triangles_removed = count_missing(prev.complex.triangles, next.complex.triangles, keep_tri);
  sig.cycles_added = count_missing(next.cycles, prev.cycles, keep_cycle);
  sig.cycles_removed = count_missing(prev.cycles, next.cycles, keep_cycle);
  return sig;
}

bool changes_incident(const geometry::AlphaComplex& prev, const geometry::AlphaComplex& next,
                      const std::function<bool(SensorId)>& keep) {
  auto kept = [&](auto simplex) {
    return !keep || std::all_of(simplex.begin(), simplex.end(), [&](SensorId v) { return keep(v); });
  };
  auto check = [&](const geometry::AlphaComplex& from, const geometry::AlphaComplex& to) {
    std::vector<geometry::Edge> edges;
    for (const auto& e : difference(to.edges, from.edges)) {
      if (kept(e)) edges.push_back(e);
    }
    if (edges.empty()) return true;
    for (const auto& t : difference(to.triangles, from.triangles)) {
      if (!kept(t)) continue;
      const bool has = std::any_of(edges.begin(), edges.end(), [&](const geometry::Edge& e) {
        return std::count(t.begin(), t.end(), e[0]) && std::count(t.begin(), t.end(), e[1]);
      });
      if (!has) return false;
    }
    return true;
  };
  return check(prev, next) && check(next, prev);
}

TransitionKind classify_transition(const StateSnapshot& prev, const StateSnapshot& next) {
  const TransitionKind kind = classify_signature(transition_signature(prev, next));
  if (kind != TransitionKind::AddPair && kind != TransitionKind::RemovePair && kind != TransitionKind::DelaunayFlip) {
    return kind;
  }
  std::function<bool(SensorId)> keep;
  if (prev.mode == Mode::PowerDown) {
    const auto u = union_support(prev, next);
    keep = [u](SensorId v) { return u[v] != 0; };
  }
  return changes_incident(prev.complex, next.complex, keep) ? kind : TransitionKind::NonAtomic;
}

CycleLabelling update_labelling(const StateSnapshot& prev, const StateSnapshot& next) {
  const bool merged = any_label(prev.labelling, difference(prev.cycles, next.cycles));
  CycleLabelling out;
  for (const auto& c : label_domain(next)) {
    if (contains(prev.cycles, c)) {
      auto it = prev.labelling.find(c);
      if (it == prev.labelling.end()) throw MissingLabel("persisting boundary cycle has no label");
      out.emplace(c, it->second);
    } else {
      out.emplace(c, merged);
    }
  }
  clear_two_simplices(next, out);
  return out;
}

CycleLabelling case_based_update(const StateSnapshot& prev, const StateSnapshot& next, TransitionKind kind) {
  std::vector<BoundaryCycle> fresh;
  CycleLabelling out = carry_persisting(prev, next, fresh);
  for (const auto& c : fresh) {
    if (contains(prev.cycles, c)) throw MissingLabel("persisting boundary cycle has no label");
  }
  const auto removed = difference(prev.cycles, next.cycles);
  const auto added = difference(next.cycles, prev.cycles);
  auto in_domain = [&](const BoundaryCycle& c) { return c != next.outer; };

  switch (kind) {
    case TransitionKind::AddEdge: {
      const bool inherited = label_of(prev.labelling, only(removed, "removed"));
      for (const auto& b : added) {
        if (in_domain(b)) out[b] = inherited;
      }
      break;
    }
    case TransitionKind::RemoveEdge:
    case TransitionKind::RemovePair: {
      const auto& b = only(added, "added");
      if (in_domain(b)) out[b] = any_label(prev.labelling, removed);
      break;
    }
    case TransitionKind::Add2Simplex: {
      const auto tris = difference(next.complex.triangles, prev.complex.triangles);
      if (tris.size() != 1) throw std::logic_error("expected exactly one new triangle");
      for (auto& [c, value] : out) {
        if (c.vertices() == std::vector<SensorId>(tris[0].begin(), tris[0].end()) && bounds_two_simplex(next, c)) {
          value = false;
        }
      }
      break;
    }
    case TransitionKind::Remove2Simplex:
      break;
    case TransitionKind::AddPair: {
      const bool inherited = label_of(prev.labelling, only(removed, "removed"));
      for (const auto& b : added) {
        if (in_domain(b)) out[b] = bounds_two_simplex(next, b) ? false : inherited;
      }
      break;
    }
    case TransitionKind::DelaunayFlip:
      for (const auto& b : added) {
        if (in_domain(b)) out[b] = false;
      }
      break;
    default:
      throw std::invalid_argument("case-based update does not handle " + std::string(to_string(kind)));
  }
  return out;
}

CycleLabelling update_labelling_powerdown(const StateSnapshot& prev, const StateSnapshot& next,
                                          TransitionKind kind) {
  std::vector<BoundaryCycle> unlabelled;
  CycleLabelling out = carry_persisting(prev, next, unlabelled);
  const auto removed = difference(prev.cycles, next.cycles);

  switch (kind) {
    case TransitionKind::Reconnect: {
      std::vector<BoundaryCycle> vanished_fence;
      for (const auto& c : removed) {
        if (prev.fence_connected(c)) vanished_fence.push_back(c);
      }
      const bool merged = any_label(prev.labelling, vanished_fence);
      for (const auto& c : unlabelled) out.emplace(c, merged);
      break;
    }
    case TransitionKind::Disconnect: {
      bool cut_off = false;
      for (const auto& c : next.cycles) {
        if (!next.fence_connected(c)) cut_off = cut_off || label_of(prev.labelling, c);
      }
      const bool merged = cut_off || any_label(prev.labelling, removed);
      for (const auto& c : unlabelled) out.emplace(c, merged);
      break;
    }
    default: {
      const bool merged = any_label(prev.labelling, removed);
      for (const auto& c : unlabelled) out.emplace(c, merged);
      break;
    }
  }
  clear_two_simplices(next, out);
  return out;
}

CycleLabelling fallback_update(const StateSnapshot& prev, const StateSnapshot& next) {
  std::vector<BoundaryCycle> unlabelled;
  CycleLabelling out = carry_persisting(prev, next, unlabelled);
  bool left = false;
  for (const auto& [c, value] : prev.labelling) {
    if (value && !out.contains(c)) left = true;
  }
  for (const auto& c : unlabelled) out.emplace(c, left);
  clear_two_simplices(next, out);
  return out;
}

bool evasion_possible(const CycleLabelling& labels) {
  return std::any_of(labels.begin(), labels.end(), [](const auto& kv) { return kv.second; });
}

ReebEvent make_event(const StateSnapshot& prev, const StateSnapshot& next, TransitionKind kind) {
  ReebEvent e;
  e.time = next.time;
  e.kind = kind;
  const std::vector<char> u = union_support(prev, next);
  const std::vector<char>* support = prev.mode == Mode::PowerDown ? &u : nullptr;
  e.parents = restricted_difference(prev, next, support);
  e.children = restricted_difference(next, prev, support);
  for (const auto& [c, value] : next.labelling) {
    auto it = prev.labelling.find(c);
    if (it == prev.labelling.end() || it->second != value) e.labels.emplace_back(c, value);
  }
  for (const auto& [c, value] : prev.labelling) {
    if (!next.labelling.contains(c) && !contains(e.parents, c)) e.dropped.push_back(c);
  }
  return e;
}

nlohmann::json to_json(const ReebEvent& e) {
  nlohmann::json labels = nlohmann::json::array();
  for (const auto& [c, value] : e.labels) labels.push_back({cycle_json(c), value});
  nlohmann::json j{{"t", e.time},
                   {"kind", std::string(to_string(e.kind))},
                   {"parents", cycles_json(e.parents)},
                   {"children", cycles_json(e.children)},
                   {"labels", labels}};
  if (!e.dropped.empty()) j["dropped"] = cycles_json(e.dropped);
  return j;
}

ReebEvent event_from_json(const nlohmann::json& j) {
  ReebEvent e;
  e.time = j.at("t").get<double>();
  const auto kind = kind_from_string(j.at("kind").get<std::string>());
  if (!kind) throw SchemaError("/kind", "unknown transition kind");
  e.kind = *kind;
  e.parents = cycles_from_json(j.at("parents"));
  e.children = cycles_from_json(j.at("children"));
  for (const auto& entry : j.at("labels")) {
    e.labels.emplace_back(cycle_from_json(entry.at(0)), entry.at(1).get<bool>());
  }
  if (j.contains("dropped")) e.dropped = cycles_from_json(j.at("dropped"));
  return e;
}

CycleLabelling replay(CycleLabelling labels, std::span<const ReebEvent> events) {
  for (const auto& e : events) {
    for (const auto& c : e.parents) labels.erase(c);
    for (const auto& c : e.dropped) labels.erase(c);
    for (const auto& [c, value] : e.labels) labels[c] = value;
  }
  return labels;
}

AcceptedStep accepted_step(const StateSnapshot& s) {
  AcceptedStep step;
  step.time = s.time;
  step.positions = s.positions;
  step.active = s.mode == Mode::Connected ? std::vector<char>(s.positions.size(), 1) : s.fence_component;
  step.evasion = evasion_possible(s.labelling);
  for (const auto& [c, value] : s.labelling) {
    if (!value) continue;
    auto& poly = step.open_faces.emplace_back();
    for (const auto& d : c.darts) poly.push_back(s.positions[d.tail]);
  }
  return step;
}

}  // namespace mcov::evasion
