#pragma once

#include <set>
#include <string>
#include <vector>

#include "ocata.hpp"
#include "plant.hpp"
#include "rational.hpp"

namespace mitl {

// ---------------------------------------------------------------------------
// Region equivalence over the joint granularity of controller, plant and
// monitor automaton: all constants live on the grid 1/den, values above cmax
// are indistinguishable.

struct RegionCtx {
  long long den = 1;       // joint grid denominator
  long long cmax_num = 0;  // maximal relevant constant, scaled by den
  std::vector<std::string> ctrl_clocks, plant_clocks;
  Rat cmax() const { return Rat(cmax_num, den); }
};

RegionCtx joint_granularity(const Granularity& mu, const Sts& plant, const Ocata& A);

struct Region {
  enum Kind { Point, Open, Above } kind = Point;
  long long alpha = 0;  // scaled by den; Open means (alpha, alpha+1); unused for Above
  friend bool operator==(const Region&, const Region&) = default;
  friend auto operator<=>(const Region& a, const Region& b) {
    long long ra = 2 * a.alpha + (a.kind == Open), rb = 2 * b.alpha + (b.kind == Open);
    if (auto c = (a.kind == Above) <=> (b.kind == Above); c != 0) return c;
    return ra <=> rb;
  }
};

Region region_of(const RegionCtx& ctx, const Rat& v);
std::string region_str(const RegionCtx& ctx, const Region& r);

// ---------------------------------------------------------------------------
// Region words: one letter per class of equal fractional part (on the scaled
// grid), the integral class first. Entries name either a clock or one
// endpoint of an indexed interval of a monitor location.

struct RegionEntry {
  enum Tag { Clock, IvlLo, IvlHi } tag = Clock;
  std::string clock;       // Tag::Clock
  int loc = -1, copy = 0;  // interval tags; copy is 1-based per location
  Region reg;
  friend bool operator==(const RegionEntry&, const RegionEntry&) = default;
  friend auto operator<=>(const RegionEntry&, const RegionEntry&) = default;
};

using RegionLetter = std::set<RegionEntry>;
using RegionWord = std::vector<RegionLetter>;

struct NodeLabel {
  int q = 0;                       // plant location
  std::set<RegionWord> words;      // one word per tracked tuple
  friend bool operator==(const NodeLabel&, const NodeLabel&) = default;
  friend bool operator<(const NodeLabel& a, const NodeLabel& b) {
    if (a.q != b.q) return a.q < b.q;
    return a.words < b.words;
  }
};

std::string label_key(const RegionCtx& ctx, const Sts& plant, const Ocata& A,
                      const NodeLabel& label);

// ---------------------------------------------------------------------------
// Concrete joint configurations

struct JointTuple {
  Valuation ctrl, plant;
  IntervalConfig cfg;
  friend bool operator==(const JointTuple&, const JointTuple&) = default;
  friend bool operator<(const JointTuple& a, const JointTuple& b) {
    if (a.ctrl != b.ctrl) return a.ctrl < b.ctrl;
    if (a.plant != b.plant) return a.plant < b.plant;
    return a.cfg < b.cfg;
  }
};

struct JointConfig {
  int q = 0;
  std::set<JointTuple> tuples;
};

JointConfig initial_config(const RegionCtx& ctx, const Sts& plant, const Ocata& A);

NodeLabel abstract_config(const RegionCtx& ctx, const JointConfig& gamma);
/// Canonical concrete configuration with abstract_config(result) == label.
/// Throws std::runtime_error on malformed labels.
JointConfig representative(const RegionCtx& ctx, const NodeLabel& label);

// ---------------------------------------------------------------------------
// Lifted successor relation

struct SuccRecord {
  SymbolicLetter letter;   // (action, controller cell & plant guard, controller resets)
  Guard cell;              // just the controller-observable cell of the guard
  size_t plant_trans = 0;  // index into plant.trans
  NodeLabel next;
  Rat earliest;            // least enabling delay from the canonical representative
};

/// One record per symbolic letter with a nonempty successor configuration.
/// Deterministically ordered.
std::vector<SuccRecord> successors(const NodeLabel& label, const Sts& plant,
                                   const Ocata& A, const Granularity& mu,
                                   const RegionCtx& ctx, long long M);

/// Same, from an explicit concrete configuration; the resulting
/// (letter, next-label) pairs depend only on abstract_config(gamma).
std::vector<SuccRecord> successors_from(const JointConfig& gamma, const Sts& plant,
                                        const Ocata& A, const Granularity& mu,
                                        const RegionCtx& ctx, long long M);

}  // namespace mitl
