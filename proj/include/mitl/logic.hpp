#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "rational.hpp"

namespace mitl {

// ---------------------------------------------------------------------------
// Timed words

struct TimedWord {
  // (letter, absolute timestamp), timestamps non-decreasing.
  std::vector<std::pair<std::string, Rat>> events;

  bool empty() const { return events.empty(); }
  size_t size() const { return events.size(); }
  void check() const;  // throws std::invalid_argument on decreasing timestamps
  std::string str() const;
};

/// One event per line, "letter@3/4" (or "letter@1", "letter@0.5").
/// Blank lines and lines starting with '#' are skipped.
TimedWord parse_timed_word(const std::string& text);

// ---------------------------------------------------------------------------
// Intervals

struct Interval {
  long long lo = 0;
  long long hi = -1;  // -1 encodes +infinity
  bool lo_closed = true;
  bool hi_closed = false;

  static Interval full() { return Interval{}; }

  bool unbounded() const { return hi < 0; }
  bool nonempty() const {
    if (unbounded()) return true;
    return lo < hi || (lo == hi && lo_closed && hi_closed);
  }
  bool singular() const { return !unbounded() && lo == hi; }
  bool contains_zero() const { return lo == 0 && lo_closed; }
  bool is_full() const { return lo == 0 && lo_closed && unbounded(); }
  bool contains(const Rat& v) const;

  std::string str() const;
  friend bool operator==(const Interval& a, const Interval& b) {
    return a.lo == b.lo && a.hi == b.hi && a.lo_closed == b.lo_closed &&
           a.hi_closed == b.hi_closed;
  }
};

// ---------------------------------------------------------------------------
// Formulas

enum class FKind {
  True,
  False,
  Atom,
  Not,
  And,
  Or,
  Until,      // strict: witness strictly after the current position
  DualUntil,  // dual of Until
  Next,
  Finally,
  Globally,
  WeakUntil,     // non-strict
  WeakFinally,   // non-strict
  WeakGlobally,  // non-strict
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  FKind kind;
  std::string atom;     // FKind::Atom only
  Interval ivl;         // temporal kinds only
  FormulaPtr lhs, rhs;  // rhs empty for unary kinds
};

FormulaPtr f_true();
FormulaPtr f_false();
FormulaPtr f_atom(const std::string& name);
FormulaPtr f_not(FormulaPtr a);
FormulaPtr f_and(FormulaPtr a, FormulaPtr b);
FormulaPtr f_or(FormulaPtr a, FormulaPtr b);
FormulaPtr f_imp(FormulaPtr a, FormulaPtr b);  // sugar: ~a | b
FormulaPtr f_until(FormulaPtr a, FormulaPtr b, Interval ivl = Interval::full());
FormulaPtr f_dual_until(FormulaPtr a, FormulaPtr b, Interval ivl = Interval::full());
FormulaPtr f_next(FormulaPtr a, Interval ivl = Interval::full());
FormulaPtr f_finally(FormulaPtr a, Interval ivl = Interval::full());
FormulaPtr f_globally(FormulaPtr a, Interval ivl = Interval::full());
FormulaPtr f_wuntil(FormulaPtr a, FormulaPtr b, Interval ivl = Interval::full());
FormulaPtr f_wfinally(FormulaPtr a, Interval ivl = Interval::full());
FormulaPtr f_wglobally(FormulaPtr a, Interval ivl = Interval::full());

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b);

/// Minimal-parenthesis ASCII form; parse_formula round-trips it.
std::string print_formula(const FormulaPtr& f);

struct ParseError : std::runtime_error {
  size_t position;
  ParseError(const std::string& msg, size_t pos)
      : std::runtime_error(msg + " (at offset " + std::to_string(pos) + ")"),
        position(pos) {}
};

/// Grammar: atoms are identifiers; `~` not, `&`, `|`, `->`; modalities
/// U, uU, X, F, G, wU, wF, wG with optional interval suffix [l,u] (l,u)
/// [l,u) (l,u], `inf` for +infinity; omitted interval means [0,inf).
/// If `alphabet` is non-empty, atoms outside it are rejected.
FormulaPtr parse_formula(const std::string& text,
                         const std::set<std::string>& alphabet = {});

std::set<std::string> formula_atoms(const FormulaPtr& f);
size_t subformula_count(const FormulaPtr& f);
/// Largest finite interval endpoint appearing in the formula (0 if none).
long long max_constant(const FormulaPtr& f);

/// Negation normal form: only And/Or/Until/DualUntil/True/False/Atom/~Atom
/// remain; derived operators are expanded by their definitions.
FormulaPtr to_nnf(const FormulaPtr& f);

/// (sigma,1) |= f with strict semantics for U; empty word is false.
bool evaluate(const TimedWord& sigma, const FormulaPtr& f);
/// (sigma,i) |= f with 1-based position i.
bool evaluate_at(const TimedWord& sigma, const FormulaPtr& f, size_t i);

struct FragmentReport {
  bool mitl = false;        // no singular intervals
  bool open_mitl = false;   // NNF: U_I with I open or inf=0 right-open; dual closed
  bool closed_mitl = false; // negation of an open formula
  bool u0inf = false;       // intervals unbounded or left endpoint 0
  bool finf = false;        // only F/G modalities with unbounded intervals
  bool ns = false;          // only the non-strict operator variants appear
  bool safety_mtl = false;  // NNF: every until bounded
  bool coflat_mtl = false;  // NNF: unbounded U => rhs untimed; unbounded dual => lhs untimed
};

FragmentReport classify_fragment(const FormulaPtr& f);

}  // namespace mitl
