#include "mitl/logic.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace mitl {

// ---------------------------------------------------------------------------
// Timed words

void TimedWord::check() const {
  for (size_t i = 0; i + 1 < events.size(); ++i)
    if (events[i + 1].second < events[i].second)
      throw std::invalid_argument("timed word: decreasing timestamps");
  for (auto& [l, t] : events)
    if (t < Rat(0)) throw std::invalid_argument("timed word: negative timestamp");
}

std::string TimedWord::str() const {
  std::string out;
  for (auto& [l, t] : events) {
    if (!out.empty()) out += " ";
    out += "(" + l + "," + t.str() + ")";
  }
  return out.empty() ? "<empty>" : out;
}

TimedWord parse_timed_word(const std::string& text) {
  TimedWord w;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    size_t e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    if (line.empty() || line[0] == '#') continue;
    auto at = line.find('@');
    if (at == std::string::npos)
      throw std::invalid_argument("timed word line missing '@': " + line);
    w.events.emplace_back(line.substr(0, at), parse_rat(line.substr(at + 1)));
  }
  w.check();
  return w;
}

// ---------------------------------------------------------------------------
// Intervals

bool Interval::contains(const Rat& v) const {
  Rat l(lo);
  if (v < l || (v == l && !lo_closed)) return false;
  if (unbounded()) return true;
  Rat h(hi);
  if (v > h || (v == h && !hi_closed)) return false;
  return true;
}

std::string Interval::str() const {
  std::string out;
  out += lo_closed ? '[' : '(';
  out += std::to_string(lo);
  out += ',';
  out += unbounded() ? "inf" : std::to_string(hi);
  out += hi_closed ? ']' : ')';
  return out;
}

// ---------------------------------------------------------------------------
// Constructors

static FormulaPtr mk(FKind k, std::string atom, Interval ivl, FormulaPtr l,
                     FormulaPtr r) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->atom = std::move(atom);
  f->ivl = ivl;
  f->lhs = std::move(l);
  f->rhs = std::move(r);
  return f;
}

static void check_ivl(const Interval& ivl) {
  if (!ivl.nonempty()) throw std::invalid_argument("empty interval " + ivl.str());
}

FormulaPtr f_true() { return mk(FKind::True, "", {}, nullptr, nullptr); }
FormulaPtr f_false() { return mk(FKind::False, "", {}, nullptr, nullptr); }
FormulaPtr f_atom(const std::string& name) {
  return mk(FKind::Atom, name, {}, nullptr, nullptr);
}
FormulaPtr f_not(FormulaPtr a) { return mk(FKind::Not, "", {}, std::move(a), nullptr); }
FormulaPtr f_and(FormulaPtr a, FormulaPtr b) {
  return mk(FKind::And, "", {}, std::move(a), std::move(b));
}
FormulaPtr f_or(FormulaPtr a, FormulaPtr b) {
  return mk(FKind::Or, "", {}, std::move(a), std::move(b));
}
FormulaPtr f_imp(FormulaPtr a, FormulaPtr b) {
  return f_or(f_not(std::move(a)), std::move(b));
}
FormulaPtr f_until(FormulaPtr a, FormulaPtr b, Interval ivl) {
  check_ivl(ivl);
  return mk(FKind::Until, "", ivl, std::move(a), std::move(b));
}
FormulaPtr f_dual_until(FormulaPtr a, FormulaPtr b, Interval ivl) {
  check_ivl(ivl);
  return mk(FKind::DualUntil, "", ivl, std::move(a), std::move(b));
}
FormulaPtr f_next(FormulaPtr a, Interval ivl) {
  check_ivl(ivl);
  return mk(FKind::Next, "", ivl, std::move(a), nullptr);
}
FormulaPtr f_finally(FormulaPtr a, Interval ivl) {
  check_ivl(ivl);
  return mk(FKind::Finally, "", ivl, std::move(a), nullptr);
}
FormulaPtr f_globally(FormulaPtr a, Interval ivl) {
  check_ivl(ivl);
  return mk(FKind::Globally, "", ivl, std::move(a), nullptr);
}
FormulaPtr f_wuntil(FormulaPtr a, FormulaPtr b, Interval ivl) {
  check_ivl(ivl);
  return mk(FKind::WeakUntil, "", ivl, std::move(a), std::move(b));
}
FormulaPtr f_wfinally(FormulaPtr a, Interval ivl) {
  check_ivl(ivl);
  return mk(FKind::WeakFinally, "", ivl, std::move(a), nullptr);
}
FormulaPtr f_wglobally(FormulaPtr a, Interval ivl) {
  check_ivl(ivl);
  return mk(FKind::WeakGlobally, "", ivl, std::move(a), nullptr);
}

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->atom != b->atom || !(a->ivl == b->ivl)) return false;
  return formula_equal(a->lhs, b->lhs) && formula_equal(a->rhs, b->rhs);
}

// ---------------------------------------------------------------------------
// Printer

static bool is_temporal(FKind k) {
  switch (k) {
    case FKind::Until:
    case FKind::DualUntil:
    case FKind::Next:
    case FKind::Finally:
    case FKind::Globally:
    case FKind::WeakUntil:
    case FKind::WeakFinally:
    case FKind::WeakGlobally:
      return true;
    default:
      return false;
  }
}

static bool is_binary_temporal(FKind k) {
  return k == FKind::Until || k == FKind::DualUntil || k == FKind::WeakUntil;
}

// precedence: | = 1, & = 2, binary temporal = 3, unary = 4, atoms = 5
static int prec(FKind k) {
  switch (k) {
    case FKind::Or:
      return 1;
    case FKind::And:
      return 2;
    case FKind::Until:
    case FKind::DualUntil:
    case FKind::WeakUntil:
      return 3;
    case FKind::Not:
    case FKind::Next:
    case FKind::Finally:
    case FKind::Globally:
    case FKind::WeakFinally:
    case FKind::WeakGlobally:
      return 4;
    default:
      return 5;
  }
}

static std::string modality_name(FKind k) {
  switch (k) {
    case FKind::Until:
      return "U";
    case FKind::DualUntil:
      return "uU";
    case FKind::Next:
      return "X";
    case FKind::Finally:
      return "F";
    case FKind::Globally:
      return "G";
    case FKind::WeakUntil:
      return "wU";
    case FKind::WeakFinally:
      return "wF";
    case FKind::WeakGlobally:
      return "wG";
    default:
      return "?";
  }
}

static void print_rec(const FormulaPtr& f, std::string& out);

static void print_child(const FormulaPtr& c, int parent_prec, bool needs_paren_eq,
                        std::string& out) {
  int p = prec(c->kind);
  bool paren = p < parent_prec || (needs_paren_eq && p == parent_prec);
  if (paren) out += '(';
  print_rec(c, out);
  if (paren) out += ')';
}

static void print_rec(const FormulaPtr& f, std::string& out) {
  switch (f->kind) {
    case FKind::True:
      out += "true";
      return;
    case FKind::False:
      out += "false";
      return;
    case FKind::Atom:
      out += f->atom;
      return;
    case FKind::Not:
      out += '~';
      print_child(f->lhs, 4, false, out);
      return;
    case FKind::And:
    case FKind::Or: {
      int p = prec(f->kind);
      print_child(f->lhs, p, false, out);
      out += f->kind == FKind::And ? " & " : " | ";
      print_child(f->rhs, p, true, out);  // left-assoc parse
      return;
    }
    default:
      break;
  }
  std::string mod = modality_name(f->kind);
  if (!f->ivl.is_full()) mod += f->ivl.str();
  if (is_binary_temporal(f->kind)) {
    print_child(f->lhs, 3, true, out);  // right-assoc parse
    out += ' ' + mod + ' ';
    print_child(f->rhs, 3, false, out);
  } else {
    out += mod + ' ';
    print_child(f->lhs, 4, false, out);
  }
}

std::string print_formula(const FormulaPtr& f) {
  std::string out;
  print_rec(f, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok { Ident, Num, Not, And, Or, Imp, LPar, RPar, LBrk, RBrk, Comma, End };

struct Token {
  Tok kind;
  std::string text;
  size_t pos;
};

struct Lexer {
  std::vector<Token> toks;
  size_t idx = 0;

  explicit Lexer(const std::string& s) {
    size_t i = 0;
    while (i < s.size()) {
      char c = s[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      size_t start = i;
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        size_t j = i;
        while (j < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
          ++j;
        if (j < s.size() && (s[j] == '!' || s[j] == '?')) ++j;  // message atoms
        toks.push_back({Tok::Ident, s.substr(i, j - i), start});
        i = j;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        size_t j = i;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        toks.push_back({Tok::Num, s.substr(i, j - i), start});
        i = j;
      } else if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') {
        toks.push_back({Tok::Imp, "->", start});
        i += 2;
      } else {
        Tok k;
        switch (c) {
          case '~': k = Tok::Not; break;
          case '&': k = Tok::And; break;
          case '|': k = Tok::Or; break;
          case '(': k = Tok::LPar; break;
          case ')': k = Tok::RPar; break;
          case '[': k = Tok::LBrk; break;
          case ']': k = Tok::RBrk; break;
          case ',': k = Tok::Comma; break;
          default:
            throw ParseError(std::string("unexpected character '") + c + "'", i);
        }
        toks.push_back({k, std::string(1, c), start});
        ++i;
      }
    }
    toks.push_back({Tok::End, "", s.size()});
  }

  const Token& peek(size_t ahead = 0) const {
    size_t j = idx + ahead;
    return j < toks.size() ? toks[j] : toks.back();
  }
  Token next() { return toks[idx < toks.size() - 1 ? idx++ : idx]; }
  void expect(Tok k, const std::string& what) {
    if (peek().kind != k) throw ParseError("expected " + what, peek().pos);
    next();
  }
};

const std::set<std::string> kModalities = {"U", "uU", "X", "F", "G", "wU", "wF", "wG"};

struct Parser {
  Lexer lex;
  const std::set<std::string>& alphabet;

  Parser(const std::string& s, const std::set<std::string>& al)
      : lex(s), alphabet(al) {}

  bool interval_follows() const {
    const Token& t = lex.peek();
    if (t.kind == Tok::LBrk) return true;
    // '(' starts an interval only when followed by a number and a comma
    return t.kind == Tok::LPar && lex.peek(1).kind == Tok::Num &&
           lex.peek(2).kind == Tok::Comma;
  }

  Interval parse_interval() {
    Interval ivl;
    Token open = lex.next();
    ivl.lo_closed = open.kind == Tok::LBrk;
    if (lex.peek().kind != Tok::Num)
      throw ParseError("expected interval lower bound", lex.peek().pos);
    ivl.lo = std::stoll(lex.next().text);
    lex.expect(Tok::Comma, "','");
    if (lex.peek().kind == Tok::Num) {
      ivl.hi = std::stoll(lex.next().text);
    } else if (lex.peek().kind == Tok::Ident && lex.peek().text == "inf") {
      lex.next();
      ivl.hi = -1;
    } else {
      throw ParseError("expected interval upper bound or 'inf'", lex.peek().pos);
    }
    Token close = lex.next();
    if (close.kind != Tok::RBrk && close.kind != Tok::RPar)
      throw ParseError("expected ')' or ']'", close.pos);
    ivl.hi_closed = close.kind == Tok::RBrk;
    if (ivl.unbounded() && ivl.hi_closed)
      throw ParseError("[l,inf] must be right-open", close.pos);
    if (!ivl.nonempty()) throw ParseError("empty interval " + ivl.str(), open.pos);
    return ivl;
  }

  Interval maybe_interval() {
    if (interval_follows()) return parse_interval();
    return Interval::full();
  }

  FormulaPtr parse_imp() {
    FormulaPtr l = parse_or();
    if (lex.peek().kind == Tok::Imp) {
      lex.next();
      return f_imp(l, parse_imp());
    }
    return l;
  }

  FormulaPtr parse_or() {
    FormulaPtr l = parse_and();
    while (lex.peek().kind == Tok::Or) {
      lex.next();
      l = f_or(l, parse_and());
    }
    return l;
  }

  FormulaPtr parse_and() {
    FormulaPtr l = parse_until();
    while (lex.peek().kind == Tok::And) {
      lex.next();
      l = f_and(l, parse_until());
    }
    return l;
  }

  FormulaPtr parse_until() {
    FormulaPtr l = parse_unary();
    const Token& t = lex.peek();
    if (t.kind == Tok::Ident && (t.text == "U" || t.text == "uU" || t.text == "wU")) {
      std::string op = lex.next().text;
      Interval ivl = maybe_interval();
      FormulaPtr r = parse_until();  // right-associative
      if (op == "U") return f_until(l, r, ivl);
      if (op == "uU") return f_dual_until(l, r, ivl);
      return f_wuntil(l, r, ivl);
    }
    return l;
  }

  FormulaPtr parse_unary() {
    const Token& t = lex.peek();
    if (t.kind == Tok::Not) {
      lex.next();
      return f_not(parse_unary());
    }
    if (t.kind == Tok::LPar) {
      lex.next();
      FormulaPtr f = parse_imp();
      lex.expect(Tok::RPar, "')'");
      return f;
    }
    if (t.kind != Tok::Ident)
      throw ParseError("expected formula", t.pos);
    if (t.text == "true") {
      lex.next();
      return f_true();
    }
    if (t.text == "false") {
      lex.next();
      return f_false();
    }
    if (t.text == "X" || t.text == "F" || t.text == "G" || t.text == "wF" ||
        t.text == "wG") {
      std::string op = lex.next().text;
      Interval ivl = maybe_interval();
      FormulaPtr a = parse_unary();
      if (op == "X") return f_next(a, ivl);
      if (op == "F") return f_finally(a, ivl);
      if (op == "G") return f_globally(a, ivl);
      if (op == "wF") return f_wfinally(a, ivl);
      return f_wglobally(a, ivl);
    }
    if (kModalities.count(t.text))
      throw ParseError("modality '" + t.text + "' used as atom", t.pos);
    Token a = lex.next();
    if (!alphabet.empty() && !alphabet.count(a.text))
      throw ParseError("unknown atom '" + a.text + "'", a.pos);
    return f_atom(a.text);
  }
};

}  // namespace

FormulaPtr parse_formula(const std::string& text, const std::set<std::string>& alphabet) {
  Parser p(text, alphabet);
  FormulaPtr f = p.parse_imp();
  if (p.lex.peek().kind != Tok::End)
    throw ParseError("trailing input", p.lex.peek().pos);
  return f;
}

// ---------------------------------------------------------------------------
// Structural queries

static void collect_atoms(const FormulaPtr& f, std::set<std::string>& out) {
  if (!f) return;
  if (f->kind == FKind::Atom) out.insert(f->atom);
  collect_atoms(f->lhs, out);
  collect_atoms(f->rhs, out);
}

std::set<std::string> formula_atoms(const FormulaPtr& f) {
  std::set<std::string> out;
  collect_atoms(f, out);
  return out;
}

size_t subformula_count(const FormulaPtr& f) {
  if (!f) return 0;
  return 1 + subformula_count(f->lhs) + subformula_count(f->rhs);
}

long long max_constant(const FormulaPtr& f) {
  if (!f) return 0;
  long long c = 0;
  if (is_temporal(f->kind)) {
    c = std::max(c, f->ivl.lo);
    if (!f->ivl.unbounded()) c = std::max(c, f->ivl.hi);
  }
  return std::max({c, max_constant(f->lhs), max_constant(f->rhs)});
}

// ---------------------------------------------------------------------------
// Negation normal form

// One-level expansion of a derived operator into the core connectives.
static FormulaPtr expand_derived(const FormulaPtr& f) {
  switch (f->kind) {
    case FKind::Next:
      return f_until(f_false(), f->lhs, f->ivl);
    case FKind::Finally:
      return f_until(f_true(), f->lhs, f->ivl);
    case FKind::Globally:
      return f_not(f_until(f_true(), f_not(f->lhs), f->ivl));
    case FKind::WeakUntil: {
      FormulaPtr u = f_until(f->lhs, f->rhs, f->ivl);
      FormulaPtr core = f_and(f->lhs, u);
      return f->ivl.contains_zero() ? f_or(f->rhs, core) : core;
    }
    case FKind::WeakFinally: {
      FormulaPtr u = f_until(f_true(), f->lhs, f->ivl);
      return f->ivl.contains_zero() ? f_or(f->lhs, u) : u;
    }
    case FKind::WeakGlobally:
      return f_not(expand_derived(f_wfinally(f_not(f->lhs), f->ivl)));
    default:
      return f;
  }
}

static FormulaPtr nnf_rec(const FormulaPtr& f, bool neg) {
  switch (f->kind) {
    case FKind::True:
      return neg ? f_false() : f_true();
    case FKind::False:
      return neg ? f_true() : f_false();
    case FKind::Atom:
      return neg ? f_not(f) : f;
    case FKind::Not:
      return nnf_rec(f->lhs, !neg);
    case FKind::And:
      return neg ? f_or(nnf_rec(f->lhs, true), nnf_rec(f->rhs, true))
                 : f_and(nnf_rec(f->lhs, false), nnf_rec(f->rhs, false));
    case FKind::Or:
      return neg ? f_and(nnf_rec(f->lhs, true), nnf_rec(f->rhs, true))
                 : f_or(nnf_rec(f->lhs, false), nnf_rec(f->rhs, false));
    case FKind::Until:
      return neg ? f_dual_until(nnf_rec(f->lhs, true), nnf_rec(f->rhs, true), f->ivl)
                 : f_until(nnf_rec(f->lhs, false), nnf_rec(f->rhs, false), f->ivl);
    case FKind::DualUntil:
      return neg ? f_until(nnf_rec(f->lhs, true), nnf_rec(f->rhs, true), f->ivl)
                 : f_dual_until(nnf_rec(f->lhs, false), nnf_rec(f->rhs, false), f->ivl);
    default:
      return nnf_rec(expand_derived(f), neg);
  }
}

FormulaPtr to_nnf(const FormulaPtr& f) { return nnf_rec(f, false); }

// ---------------------------------------------------------------------------
// Evaluation

bool evaluate_at(const TimedWord& s, const FormulaPtr& f, size_t i) {
  size_t n = s.size();
  auto delta_in = [&](size_t j) {
    return f->ivl.contains(s.events[j - 1].second - s.events[i - 1].second);
  };
  switch (f->kind) {
    case FKind::True:
      return true;
    case FKind::False:
      return false;
    case FKind::Atom:
      return s.events[i - 1].first == f->atom;
    case FKind::Not:
      return !evaluate_at(s, f->lhs, i);
    case FKind::And:
      return evaluate_at(s, f->lhs, i) && evaluate_at(s, f->rhs, i);
    case FKind::Or:
      return evaluate_at(s, f->lhs, i) || evaluate_at(s, f->rhs, i);
    case FKind::Until: {
      for (size_t j = i + 1; j <= n; ++j) {
        if (delta_in(j) && evaluate_at(s, f->rhs, j)) return true;
        if (!evaluate_at(s, f->lhs, j)) return false;
      }
      return false;
    }
    case FKind::DualUntil: {
      // for all j>i with tau_j-tau_i in I: phi2 at j, or phi1 at some k in (i,j)
      bool seen_lhs = false;
      for (size_t j = i + 1; j <= n; ++j) {
        if (delta_in(j) && !evaluate_at(s, f->rhs, j) && !seen_lhs) return false;
        if (evaluate_at(s, f->lhs, j)) seen_lhs = true;
      }
      return true;
    }
    case FKind::Next:
      return i + 1 <= n && delta_in(i + 1) && evaluate_at(s, f->lhs, i + 1);
    case FKind::Finally: {
      for (size_t j = i + 1; j <= n; ++j)
        if (delta_in(j) && evaluate_at(s, f->lhs, j)) return true;
      return false;
    }
    case FKind::Globally: {
      for (size_t j = i + 1; j <= n; ++j)
        if (delta_in(j) && !evaluate_at(s, f->lhs, j)) return false;
      return true;
    }
    case FKind::WeakUntil: {
      if (f->ivl.contains_zero() && evaluate_at(s, f->rhs, i)) return true;
      return evaluate_at(s, f->lhs, i) &&
             evaluate_at(s, f_until(f->lhs, f->rhs, f->ivl), i);
    }
    case FKind::WeakFinally: {
      if (f->ivl.contains_zero() && evaluate_at(s, f->lhs, i)) return true;
      return evaluate_at(s, f_finally(f->lhs, f->ivl), i);
    }
    case FKind::WeakGlobally: {
      if (f->ivl.contains_zero() && !evaluate_at(s, f->lhs, i)) return false;
      return evaluate_at(s, f_globally(f->lhs, f->ivl), i);
    }
  }
  return false;
}

bool evaluate(const TimedWord& sigma, const FormulaPtr& f) {
  if (sigma.empty()) return false;
  return evaluate_at(sigma, f, 1);
}

// ---------------------------------------------------------------------------
// Fragment classification

namespace {

bool untimed(const FormulaPtr& f) {
  if (!f) return true;
  if (is_temporal(f->kind) && !f->ivl.is_full()) return false;
  return untimed(f->lhs) && untimed(f->rhs);
}

bool no_singular(const FormulaPtr& f) {
  if (!f) return true;
  if (is_temporal(f->kind) && f->ivl.singular()) return false;
  return no_singular(f->lhs) && no_singular(f->rhs);
}

// open fragment conditions on an NNF formula
bool open_frag(const FormulaPtr& f) {
  if (!f) return true;
  if (f->kind == FKind::Until) {
    bool right_open = f->ivl.unbounded() || !f->ivl.hi_closed;
    if (!(right_open && (!f->ivl.lo_closed || f->ivl.lo == 0))) return false;
  } else if (f->kind == FKind::DualUntil) {
    bool closed = f->ivl.lo_closed && (f->ivl.unbounded() || f->ivl.hi_closed);
    if (!closed) return false;
  }
  return open_frag(f->lhs) && open_frag(f->rhs);
}

bool u0inf_ok(const FormulaPtr& f) {
  if (!f) return true;
  if (is_temporal(f->kind) && !f->ivl.unbounded() && f->ivl.lo != 0) return false;
  return u0inf_ok(f->lhs) && u0inf_ok(f->rhs);
}

bool finf_ok(const FormulaPtr& f) {
  if (!f) return true;
  switch (f->kind) {
    case FKind::Until:
    case FKind::DualUntil:
    case FKind::WeakUntil:
    case FKind::Next:
      return false;
    case FKind::Finally:
    case FKind::Globally:
    case FKind::WeakFinally:
    case FKind::WeakGlobally:
      if (!f->ivl.unbounded()) return false;
      break;
    default:
      break;
  }
  return finf_ok(f->lhs) && finf_ok(f->rhs);
}

bool ns_ok(const FormulaPtr& f) {
  if (!f) return true;
  switch (f->kind) {
    case FKind::Until:
    case FKind::DualUntil:
    case FKind::Next:
    case FKind::Finally:
    case FKind::Globally:
      return false;
    default:
      break;
  }
  return ns_ok(f->lhs) && ns_ok(f->rhs);
}

bool safety_ok(const FormulaPtr& f) {
  if (!f) return true;
  if (f->kind == FKind::Until && f->ivl.unbounded()) return false;
  return safety_ok(f->lhs) && safety_ok(f->rhs);
}

bool coflat_ok(const FormulaPtr& f) {
  if (!f) return true;
  if (f->kind == FKind::Until && f->ivl.unbounded() && !untimed(f->rhs)) return false;
  if (f->kind == FKind::DualUntil && f->ivl.unbounded() && !untimed(f->lhs))
    return false;
  return coflat_ok(f->lhs) && coflat_ok(f->rhs);
}

}  // namespace

FragmentReport classify_fragment(const FormulaPtr& f) {
  FragmentReport r;
  FormulaPtr nnf = to_nnf(f);
  FormulaPtr neg_nnf = to_nnf(f_not(f));
  r.mitl = no_singular(nnf);
  r.open_mitl = r.mitl && open_frag(nnf);
  r.closed_mitl = r.mitl && open_frag(neg_nnf);
  r.u0inf = u0inf_ok(f);
  r.finf = finf_ok(f);
  r.ns = ns_ok(f);
  r.safety_mtl = safety_ok(nnf);
  r.coflat_mtl = coflat_ok(nnf);
  return r;
}

}  // namespace mitl
