#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "logic.hpp"
#include "rational.hpp"

namespace mitl {

// ---------------------------------------------------------------------------
// Transition terms over locations of a one-clock alternating automaton

enum class TKind { True, False, Loc, Reset, Cmp, And, Or };
enum class CmpOp { Lt, Le, Eq, Ge, Gt };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  TKind kind;
  int loc = -1;          // Loc
  CmpOp op = CmpOp::Eq;  // Cmp
  long long c = 0;       // Cmp, a natural
  TermPtr a, b;          // Reset uses a; And/Or use both
};

TermPtr t_true();
TermPtr t_false();
TermPtr t_loc(int loc);
TermPtr t_reset(TermPtr sub);
TermPtr t_cmp(CmpOp op, long long c);
TermPtr t_and(TermPtr a, TermPtr b);  // simplifies units
TermPtr t_or(TermPtr a, TermPtr b);

bool cmp_sat(CmpOp op, long long c, const Rat& v);
std::string print_term(const Term& t, const std::vector<std::string>& loc_names);

// ---------------------------------------------------------------------------
// Automaton

struct Ocata {
  std::vector<std::string> loc_names;
  int initial = 0;
  std::vector<bool> finals;
  std::vector<std::string> alphabet;
  std::map<std::pair<int, std::string>, TermPtr> delta;
  long long max_const = 0;

  const TermPtr& delta_at(int loc, const std::string& letter) const;
  std::string dump() const;  // labeled-graph debug listing
};

/// Builds the automaton for the language of `phi` (put into negation normal
/// form internally). Rejects formulas with singular intervals.
Ocata translate(const FormulaPtr& phi, const std::vector<std::string>& alphabet);

// ---------------------------------------------------------------------------
// Classical semantics: configurations are sets of (location, clock value)

using ClassicalState = std::pair<int, Rat>;
using ClassicalConfig = std::vector<ClassicalState>;  // sorted, duplicate-free

bool config_accepting(const Ocata& A, const ClassicalConfig& c);
std::vector<ClassicalConfig> step_classical(const Ocata& A, const ClassicalConfig& c,
                                            const Rat& t, const std::string& a);
bool accepts_classical(const Ocata& A, const TimedWord& sigma);

// ---------------------------------------------------------------------------
// Interval semantics with bounded merging

struct IntervalPair {
  int loc;
  Rat lo, hi;  // closed endpoints, lo <= hi
  friend bool operator==(const IntervalPair& a, const IntervalPair& b) {
    return a.loc == b.loc && a.lo == b.lo && a.hi == b.hi;
  }
  friend bool operator<(const IntervalPair& a, const IntervalPair& b) {
    if (a.loc != b.loc) return a.loc < b.loc;
    if (a.lo != b.lo) return a.lo < b.lo;
    return a.hi < b.hi;
  }
};

using IntervalConfig = std::vector<IntervalPair>;  // sorted

bool interval_config_accepting(const Ocata& A, const IntervalConfig& c);
/// All successors after delay t and letter a, with at most M intervals per
/// location. Merging of a freshly spawned copy with its neighbour is offered
/// as an extra successor even below the bound.
std::vector<IntervalConfig> step_interval(const Ocata& A, const IntervalConfig& c,
                                          const Rat& t, const std::string& a,
                                          long long M);
bool accepts_interval(const Ocata& A, const TimedWord& sigma, long long M);

/// Default per-location interval bound; `override_bound` > 0 wins.
long long merge_bound(const FormulaPtr& phi, long long override_bound = 0);

}  // namespace mitl
