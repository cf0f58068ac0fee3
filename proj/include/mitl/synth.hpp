#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "regions.hpp"

namespace mitl {

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Game graph over node labels. Nodes with an already-seen label are shared
// instead of re-expanded: the winning status of a position depends only on
// its label, so a repeat continues as the earlier node.

/// One available symbolic letter, stored compactly: the guard is the atomic
/// cell conjoined with the plant guard, both recovered via edge_letter.
struct SynthEdge {
  int cell = 0;         // index into SynthTree::cells
  int plant_trans = 0;  // index into the plant's transition list
  unsigned resets = 0;  // bitmask over the controller clocks
  Rat earliest;         // earliest enabling delay among the tracked valuations
};

struct SynthNode {
  NodeLabel label;
  std::vector<SynthEdge> letters;  // available symbolic letters
  std::vector<int> child;          // aligned with letters
  bool losing = false;             // plant and monitor accept simultaneously
};

struct SynthTree {
  Sts plant;
  FormulaPtr spec;
  Ocata monitor;  // for the negated specification
  Granularity mu;
  RegionCtx ctx;
  long long M = 1;
  std::vector<Guard> cells;      // atomic cells over controller and plant clocks
  std::vector<SynthNode> nodes;  // index 0 is the root (exempt from losing:
                                 // the empty word is always allowed)
};

SymbolicLetter edge_letter(const SynthTree& tree, const SynthEdge& e);
std::set<std::string> edge_resets(const SynthTree& tree, const SynthEdge& e);

struct BuildOptions {
  size_t node_budget = 1000000;
  long long merge_override = 0;
  int threads = 1;
};

SynthTree build_tree(const Sts& plant, const FormulaPtr& phi, const Granularity& mu,
                     const BuildOptions& opts = {});

bool losing_label(const Sts& plant, const Ocata& monitor, const NodeLabel& label);

// ---------------------------------------------------------------------------
// Valid action sets and the safety game

using ActionSet = std::vector<size_t>;  // indices into SynthNode::letters, sorted

/// All minimal subsets satisfying the validity conditions: members have
/// successors; a proposal forces cover of environment letters fireable no
/// later; silence forces cover of every fireable environment letter.
std::vector<ActionSet> enumerate_valid_action_sets(const SynthTree& tree, int node);

struct Strategy {
  std::map<int, ActionSet> choice;  // winning nodes only
};

struct SolveResult {
  bool winning = false;
  std::optional<Strategy> strategy;
};

SolveResult solve(const SynthTree& tree);

// ---------------------------------------------------------------------------
// Controller extraction and bounded closed-loop verification

Sts extract_controller(const SynthTree& tree, const Strategy& strategy,
                       const Granularity& mu);

/// Words consistent with controller T and the plant, enumerated at region
/// resolution, up to `depth` events. Always contains the empty word.
std::vector<TimedWord> closed_loop_words(const Sts& T, const Sts& plant, int depth);

struct VerifyResult {
  bool ok = true;
  std::optional<TimedWord> counterexample;
};

VerifyResult verify_controller(const Sts& T, const Sts& plant, const FormulaPtr& phi,
                               int depth);

}  // namespace mitl
