#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "logic.hpp"
#include "rational.hpp"

namespace mitl {

using Valuation = std::map<std::string, Rat>;

Valuation zero_valuation(const std::vector<std::string>& clocks);
Valuation shift(const Valuation& v, const Rat& t);
Valuation reset(const Valuation& v, const std::set<std::string>& r);

// ---------------------------------------------------------------------------
// Guards: conjunctions of x ~ c atoms

enum class GCmp { Lt, Le, Eq, Ge, Gt };

struct GuardAtom {
  std::string clock;
  GCmp op;
  Rat c;
  friend bool operator==(const GuardAtom&, const GuardAtom&) = default;
  friend auto operator<=>(const GuardAtom& a, const GuardAtom& b) {
    if (auto c1 = a.clock <=> b.clock; c1 != 0) return c1;
    if (auto c2 = a.op <=> b.op; c2 != 0) return c2;
    long long l = a.c.num * b.c.den, r = b.c.num * a.c.den;
    return l <=> r;
  }
};

struct Guard {
  std::vector<GuardAtom> atoms;  // empty conjunction is `true`
  friend bool operator==(const Guard&, const Guard&) = default;
  friend auto operator<=>(const Guard&, const Guard&) = default;
};

bool guard_sat(const Guard& g, const Valuation& v);
std::string print_guard(const Guard& g);
Guard parse_guard(const std::string& text);  // "x<=1 & y>0"; "" is true
Guard guard_and(const Guard& a, const Guard& b);
/// Is some valuation (non-negative, per-clock independent) a model of both?
bool jointly_satisfiable(const Guard& a, const Guard& b);

// A one-dimensional set of delays; hi ignored when hi_inf.
struct DelayInterval {
  Rat lo, hi;
  bool lo_closed = true, hi_closed = true, hi_inf = false;
  bool nonempty() const {
    if (hi_inf) return true;
    return lo < hi || (lo == hi && lo_closed && hi_closed);
  }
  bool contains(const Rat& t) const;
};

/// Delays t >= 0 with v+t satisfying g (a conjunction gives one interval).
std::optional<DelayInterval> guard_delays(const Guard& g, const Valuation& v);

// ---------------------------------------------------------------------------
// Granularities and symbolic transition systems

struct Granularity {
  std::vector<std::string> clocks;
  long long m = 1;  // constants are multiples of 1/m ...
  long long K = 0;  // ... with numerator at most K
};

/// The pairwise-disjoint, jointly-covering guard cells of the granularity:
/// per clock x = alpha/m, alpha/m < x < (alpha+1)/m, x > K/m; products across clocks.
std::vector<Guard> atomic_guards(const Granularity& mu);

struct SymbolicLetter {
  std::string action;
  Guard guard;
  std::set<std::string> resets;
  friend bool operator==(const SymbolicLetter&, const SymbolicLetter&) = default;
  friend auto operator<=>(const SymbolicLetter&, const SymbolicLetter&) = default;
};

struct Transition {
  int from;
  SymbolicLetter letter;
  int to;
};

struct Sts {
  std::vector<std::string> locs;
  int initial = 0;
  std::vector<bool> finals;
  std::vector<Transition> trans;
  std::vector<std::string> sigma_c, sigma_e;  // controllable / environment split
  std::vector<std::string> clocks;

  int loc_index(const std::string& name) const;
  bool is_controllable(const std::string& action) const;
  bool in_alphabet(const std::string& action) const;
  std::vector<std::string> alphabet() const;  // controllable then environment
};

bool is_time_deterministic(const Sts& T);

/// Deterministic simulation from (initial, zeros); empty on a blocked step.
std::optional<std::pair<int, Valuation>> run(const Sts& T, const TimedWord& sigma);
bool membership(const Sts& T, const TimedWord& sigma);

/// Per outgoing transition with a nonempty delay set: (transition index, delays).
std::vector<std::pair<size_t, DelayInterval>> enabled(const Sts& T, int loc,
                                                      const Valuation& v);

// ---------------------------------------------------------------------------
// Text format (same for plants and controllers)

Sts parse_sts(const std::string& text);
std::string print_sts(const Sts& T);

/// Plant well-formedness: time-determinism and the everywhere-non-blocking
/// requirement (checked at guard-cell resolution). Throws on violation.
void validate_plant(const Sts& P);

}  // namespace mitl
