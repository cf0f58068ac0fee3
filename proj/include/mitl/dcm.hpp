#pragma once

#include <string>
#include <vector>

#include "logic.hpp"
#include "plant.hpp"

namespace mitl {

// ---------------------------------------------------------------------------
// Deterministic channel machines: a finite control with one fifo channel.

struct DcmTransition {
  int from;
  std::string msg;
  bool write;  // msg! when true, msg? otherwise
  int to;
  friend bool operator==(const DcmTransition&, const DcmTransition&) = default;
};

struct ChannelMachine {
  std::vector<std::string> states;
  int initial = 0;
  int halt = 0;
  std::vector<std::string> messages;
  std::vector<DcmTransition> trans;

  int state_index(const std::string& name) const;  // -1 when absent
  std::string action_name(const DcmTransition& t) const;  // "m!" / "m?"
};

/// Determinism: one transition per (source, action); a write is the only
/// outgoing transition of its source; the halting state has no outgoing
/// transition and is the only such state. Throws std::invalid_argument.
void validate_dcm(const ChannelMachine& S);

ChannelMachine parse_dcm(const std::string& text);  // validates
std::string print_dcm(const ChannelMachine& S);

// ---------------------------------------------------------------------------
// Simulation. A machine either halts, blocks on a read, or runs forever.

struct DcmOutcome {
  enum class Kind { Halted, Blocked, RunningBeyondBound };
  Kind kind = Kind::RunningBeyondBound;
  int steps = 0;
  int blocked_state = -1;    // Kind::Blocked only
  long long max_occupancy = 0;  // peak number of messages in the channel
  std::vector<int> visited;     // states along the run, actions.size() + 1
  std::vector<size_t> actions;  // indices into ChannelMachine::trans
};

DcmOutcome simulate(const ChannelMachine& S, int max_steps);

// ---------------------------------------------------------------------------
// Reduction to realisability: a formula pair whose realisability status
// mirrors the halting behaviour of the machine.

struct OmegaEncoding {
  std::vector<std::string> sigma_c, sigma_e;
  std::vector<FormulaPtr> phis, psis;  // the seven conjuncts of each side
  FormulaPtr psi_back;                 // every read is matched by a write 1 t.u. earlier
  FormulaPtr psi_fwd_fst, psi_fwd;     // every write is consumed 1 t.u. later
  FormulaPtr phi, psi;                 // environment / controller conjunctions
  FormulaPtr omega;        // phi -> psi
  FormulaPtr omega_live;   // phi -> psi and never reaching the halting state
};

OmegaEncoding encode_omega(const ChannelMachine& S);

/// Plant-based variant: the alternation and zero-delay conditions move into a
/// one-clock plant, leaving only the channel-timing formulas.
struct PlantEncoding {
  Sts plant;
  FormulaPtr psi0;       // allows halting runs
  FormulaPtr psi0_live;  // does not
};

/// Requires the initial state to start with a write (and not be the halting
/// state); throws std::invalid_argument otherwise.
PlantEncoding encode_plant(const ChannelMachine& S);

// ---------------------------------------------------------------------------
// Plays: timed words over the encode_omega alphabet that claim to encode a
// prefix of the computation. Four independently reported conditions.

struct PlayReport {
  bool c1 = true;  // action sequence respects the transition relation
  bool c2 = true;  // states at zero delay, write/read times pairwise distinct
  bool c3 = true;  // each read exactly 1 t.u. after a matching write
  bool c4 = true;  // each write consumed exactly 1 t.u. later when applicable
  bool all() const { return c1 && c2 && c3 && c4; }
};

PlayReport validate_play(const ChannelMachine& S, const TimedWord& sigma);

}  // namespace mitl
