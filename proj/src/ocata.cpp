#include "mitl/ocata.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace mitl {

// ---------------------------------------------------------------------------
// Terms

static TermPtr mk_term(TKind k) {
  auto t = std::make_shared<Term>();
  t->kind = k;
  return t;
}

TermPtr t_true() {
  static TermPtr t = mk_term(TKind::True);
  return t;
}
TermPtr t_false() {
  static TermPtr t = mk_term(TKind::False);
  return t;
}
TermPtr t_loc(int loc) {
  auto t = mk_term(TKind::Loc);
  auto m = std::const_pointer_cast<Term>(t);
  m->loc = loc;
  return t;
}
TermPtr t_reset(TermPtr sub) {
  if (sub->kind == TKind::True || sub->kind == TKind::False) return sub;
  auto t = mk_term(TKind::Reset);
  std::const_pointer_cast<Term>(t)->a = std::move(sub);
  return t;
}
TermPtr t_cmp(CmpOp op, long long c) {
  auto t = mk_term(TKind::Cmp);
  auto m = std::const_pointer_cast<Term>(t);
  m->op = op;
  m->c = c;
  return t;
}
TermPtr t_and(TermPtr a, TermPtr b) {
  if (a->kind == TKind::False || b->kind == TKind::False) return t_false();
  if (a->kind == TKind::True) return b;
  if (b->kind == TKind::True) return a;
  auto t = mk_term(TKind::And);
  auto m = std::const_pointer_cast<Term>(t);
  m->a = std::move(a);
  m->b = std::move(b);
  return t;
}
TermPtr t_or(TermPtr a, TermPtr b) {
  if (a->kind == TKind::True || b->kind == TKind::True) return t_true();
  if (a->kind == TKind::False) return b;
  if (b->kind == TKind::False) return a;
  auto t = mk_term(TKind::Or);
  auto m = std::const_pointer_cast<Term>(t);
  m->a = std::move(a);
  m->b = std::move(b);
  return t;
}

bool cmp_sat(CmpOp op, long long c, const Rat& v) {
  Rat rc(c);
  switch (op) {
    case CmpOp::Lt: return v < rc;
    case CmpOp::Le: return v <= rc;
    case CmpOp::Eq: return v == rc;
    case CmpOp::Ge: return v >= rc;
    case CmpOp::Gt: return v > rc;
  }
  return false;
}

static const char* cmp_str(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Eq: return "=";
    case CmpOp::Ge: return ">=";
    case CmpOp::Gt: return ">";
  }
  return "?";
}

std::string print_term(const Term& t, const std::vector<std::string>& loc_names) {
  switch (t.kind) {
    case TKind::True: return "true";
    case TKind::False: return "false";
    case TKind::Loc: return loc_names[t.loc];
    case TKind::Reset: return "x." + print_term(*t.a, loc_names);
    case TKind::Cmp: return std::string("x") + cmp_str(t.op) + std::to_string(t.c);
    case TKind::And:
      return "(" + print_term(*t.a, loc_names) + " & " + print_term(*t.b, loc_names) +
             ")";
    case TKind::Or:
      return "(" + print_term(*t.a, loc_names) + " | " + print_term(*t.b, loc_names) +
             ")";
  }
  return "?";
}

const TermPtr& Ocata::delta_at(int loc, const std::string& letter) const {
  auto it = delta.find({loc, letter});
  if (it == delta.end()) throw std::logic_error("delta not total");
  return it->second;
}

std::string Ocata::dump() const {
  std::string out = "initial " + loc_names[initial] + "\nfinal";
  for (size_t i = 0; i < loc_names.size(); ++i)
    if (finals[i]) out += " " + loc_names[i];
  out += "\n";
  for (auto& [key, term] : delta)
    out += loc_names[key.first] + " -" + key.second + "-> " +
           print_term(*term, loc_names) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Translation from negation normal form

namespace {

struct Builder {
  Ocata A;
  std::map<std::string, int> loc_of;                  // printed formula -> location
  std::vector<FormulaPtr> pending;                    // locations awaiting delta

  // interval membership term over the copy clock
  static TermPtr in_ivl(const Interval& I) {
    TermPtr t = t_true();
    if (!(I.lo == 0 && I.lo_closed))
      t = t_and(t, t_cmp(I.lo_closed ? CmpOp::Ge : CmpOp::Gt, I.lo));
    if (!I.unbounded())
      t = t_and(t, t_cmp(I.hi_closed ? CmpOp::Le : CmpOp::Lt, I.hi));
    return t;
  }
  static TermPtr out_ivl(const Interval& I) {
    TermPtr t = t_false();
    if (!(I.lo == 0 && I.lo_closed))
      t = t_or(t, t_cmp(I.lo_closed ? CmpOp::Lt : CmpOp::Le, I.lo));
    if (!I.unbounded())
      t = t_or(t, t_cmp(I.hi_closed ? CmpOp::Gt : CmpOp::Ge, I.hi));
    return t;
  }

  int location_for(const FormulaPtr& f) {
    std::string key = print_formula(f);
    auto it = loc_of.find(key);
    if (it != loc_of.end()) return it->second;
    int idx = static_cast<int>(A.loc_names.size());
    A.loc_names.push_back("l" + std::to_string(idx));
    A.finals.push_back(f->kind == FKind::DualUntil);  // pending duals are satisfied
    loc_of.emplace(key, idx);
    pending.push_back(f);
    return idx;
  }

  // Obligation spawned by requiring `f` to hold at the position being read,
  // given that the letter read is `a`.
  TermPtr entry(const FormulaPtr& f, const std::string& a) {
    switch (f->kind) {
      case FKind::True: return t_true();
      case FKind::False: return t_false();
      case FKind::Atom: return f->atom == a ? t_true() : t_false();
      case FKind::Not: return f->lhs->atom == a ? t_false() : t_true();
      case FKind::And: return t_and(entry(f->lhs, a), entry(f->rhs, a));
      case FKind::Or: return t_or(entry(f->lhs, a), entry(f->rhs, a));
      case FKind::Until:
      case FKind::DualUntil: return t_reset(t_loc(location_for(f)));
      default: throw std::invalid_argument("translate: formula not in normal form");
    }
  }

  TermPtr delta_for(const FormulaPtr& f, const std::string& a) {
    if (f->kind == FKind::Until)
      return t_or(t_and(in_ivl(f->ivl), entry(f->rhs, a)),
                  t_and(entry(f->lhs, a), t_loc(location_for(f))));
    // dual until: inside the interval the right argument must hold, unless a
    // left-argument position released the obligation
    return t_and(t_or(out_ivl(f->ivl), entry(f->rhs, a)),
                 t_or(entry(f->lhs, a), t_loc(location_for(f))));
  }
};

// does the formula hold on the empty suffix (no further positions)?
bool eps_holds(const FormulaPtr& f) {
  switch (f->kind) {
    case FKind::True: return true;
    case FKind::False: return false;
    case FKind::Atom: return false;   // no current position to witness
    case FKind::Not: return true;
    case FKind::And: return eps_holds(f->lhs) && eps_holds(f->rhs);
    case FKind::Or: return eps_holds(f->lhs) || eps_holds(f->rhs);
    case FKind::Until: return false;
    case FKind::DualUntil: return true;
    default: return false;
  }
}

void check_mitl(const FormulaPtr& f) {
  if (!f) return;
  if ((f->kind == FKind::Until || f->kind == FKind::DualUntil) && f->ivl.singular())
    throw std::invalid_argument("translate: singular interval " + f->ivl.str());
  check_mitl(f->lhs);
  check_mitl(f->rhs);
}

long long term_max_const(const TermPtr& t) {
  if (!t) return 0;
  long long c = t->kind == TKind::Cmp ? t->c : 0;
  return std::max({c, term_max_const(t->a), term_max_const(t->b)});
}

}  // namespace

Ocata translate(const FormulaPtr& phi, const std::vector<std::string>& alphabet) {
  FormulaPtr nnf = to_nnf(phi);
  check_mitl(nnf);
  Builder b;
  b.A.alphabet = alphabet;
  b.A.loc_names.push_back("init");
  b.A.finals.push_back(eps_holds(nnf));
  b.A.initial = 0;
  for (const auto& a : alphabet) b.A.delta[{0, a}] = b.entry(nnf, a);
  while (!b.pending.empty()) {
    FormulaPtr f = b.pending.back();
    b.pending.pop_back();
    int loc = b.loc_of.at(print_formula(f));
    for (const auto& a : alphabet)
      if (!b.A.delta.count({loc, a})) b.A.delta[{loc, a}] = b.delta_for(f, a);
  }
  for (auto& [key, t] : b.A.delta)
    b.A.max_const = std::max(b.A.max_const, term_max_const(t));
  return b.A;
}

// ---------------------------------------------------------------------------
// Classical semantics

bool config_accepting(const Ocata& A, const ClassicalConfig& c) {
  for (auto& [loc, v] : c)
    if (!A.finals[loc]) return false;
  return true;
}

namespace {

// keep only set-inclusion-minimal entries (entries are sorted vectors)
template <typename C>
std::vector<C> prune_minimal(std::vector<C> models) {
  std::sort(models.begin(), models.end());
  models.erase(std::unique(models.begin(), models.end()), models.end());
  std::vector<C> out;
  for (size_t i = 0; i < models.size(); ++i) {
    bool dominated = false;
    for (size_t j = 0; j < models.size() && !dominated; ++j) {
      if (i == j) continue;
      if (models[j].size() <= models[i].size() &&
          std::includes(models[i].begin(), models[i].end(), models[j].begin(),
                        models[j].end()) &&
          models[j] != models[i])
        dominated = true;
    }
    if (!dominated) out.push_back(models[i]);
  }
  return out;
}

template <typename C>
C merge_sorted(const C& a, const C& b) {
  C out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<ClassicalConfig> minimal_models(const TermPtr& t, const Rat& v) {
  switch (t->kind) {
    case TKind::True: return {{}};
    case TKind::False: return {};
    case TKind::Loc: return {{{t->loc, v}}};
    case TKind::Reset: return minimal_models(t->a, Rat(0));
    case TKind::Cmp: return cmp_sat(t->op, t->c, v) ? std::vector<ClassicalConfig>{{}}
                                                    : std::vector<ClassicalConfig>{};
    case TKind::Or: {
      auto ms = minimal_models(t->a, v);
      auto nb = minimal_models(t->b, v);
      ms.insert(ms.end(), nb.begin(), nb.end());
      return prune_minimal(ms);
    }
    case TKind::And: {
      auto ma = minimal_models(t->a, v);
      auto mb = minimal_models(t->b, v);
      std::vector<ClassicalConfig> out;
      for (auto& x : ma)
        for (auto& y : mb) out.push_back(merge_sorted(x, y));
      return prune_minimal(out);
    }
  }
  return {};
}

}  // namespace

std::vector<ClassicalConfig> step_classical(const Ocata& A, const ClassicalConfig& c,
                                            const Rat& t, const std::string& a) {
  std::vector<ClassicalConfig> acc = {{}};
  for (auto& [loc, v] : c) {
    auto models = minimal_models(A.delta_at(loc, a), v + t);
    std::vector<ClassicalConfig> next;
    for (auto& base : acc)
      for (auto& m : models) next.push_back(merge_sorted(base, m));
    acc = prune_minimal(next);
    if (acc.empty()) break;
  }
  return acc;
}

bool accepts_classical(const Ocata& A, const TimedWord& sigma) {
  std::vector<ClassicalConfig> configs = {{{A.initial, Rat(0)}}};
  Rat prev(0);
  for (auto& [letter, tau] : sigma.events) {
    Rat d = tau - prev;
    prev = tau;
    std::vector<ClassicalConfig> next;
    for (auto& c : configs) {
      auto succ = step_classical(A, c, d, letter);
      next.insert(next.end(), succ.begin(), succ.end());
    }
    configs = prune_minimal(next);
    if (configs.empty()) return false;
  }
  for (auto& c : configs)
    if (config_accepting(A, c)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Interval semantics

bool interval_config_accepting(const Ocata& A, const IntervalConfig& c) {
  for (auto& p : c)
    if (!A.finals[p.loc]) return false;
  return true;
}

namespace {

struct IEnt {
  int loc;
  Rat lo, hi;
  bool born;  // spawned by a reset on this step
  friend bool operator<(const IEnt& a, const IEnt& b) {
    if (a.loc != b.loc) return a.loc < b.loc;
    if (a.lo != b.lo) return a.lo < b.lo;
    if (a.hi != b.hi) return a.hi < b.hi;
    return a.born < b.born;
  }
  friend bool operator==(const IEnt& a, const IEnt& b) {
    return a.loc == b.loc && a.lo == b.lo && a.hi == b.hi && a.born == b.born;
  }
};

using IModel = std::vector<IEnt>;  // sorted

bool cmp_sat_interval(CmpOp op, long long c, const Rat& lo, const Rat& hi) {
  // the whole interval must satisfy the constraint
  return cmp_sat(op, c, lo) && cmp_sat(op, c, hi) &&
         (op != CmpOp::Eq || lo == hi);
}

std::vector<IModel> minimal_models_ivl(const TermPtr& t, const Rat& lo, const Rat& hi) {
  switch (t->kind) {
    case TKind::True: return {{}};
    case TKind::False: return {};
    case TKind::Loc: return {{{t->loc, lo, hi, false}}};
    case TKind::Reset: {
      auto ms = minimal_models_ivl(t->a, Rat(0), Rat(0));
      for (auto& m : ms)
        for (auto& e : m)
          if (e.lo == Rat(0) && e.hi == Rat(0)) e.born = true;
      return ms;
    }
    case TKind::Cmp:
      return cmp_sat_interval(t->op, t->c, lo, hi) ? std::vector<IModel>{{}}
                                                   : std::vector<IModel>{};
    case TKind::Or: {
      auto ms = minimal_models_ivl(t->a, lo, hi);
      auto nb = minimal_models_ivl(t->b, lo, hi);
      ms.insert(ms.end(), nb.begin(), nb.end());
      return prune_minimal(ms);
    }
    case TKind::And: {
      auto ma = minimal_models_ivl(t->a, lo, hi);
      auto mb = minimal_models_ivl(t->b, lo, hi);
      std::vector<IModel> out;
      for (auto& x : ma)
        for (auto& y : mb) out.push_back(merge_sorted(x, y));
      return prune_minimal(out);
    }
  }
  return {};
}

// Union overlapping or touching same-location intervals (mandatory: the
// configuration invariant wants them pairwise disjoint).
std::vector<IEnt> normalize_loc(std::vector<IEnt> v) {
  std::sort(v.begin(), v.end(),
            [](const IEnt& a, const IEnt& b) { return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi); });
  std::vector<IEnt> out;
  for (auto& e : v) {
    if (!out.empty() && e.lo <= out.back().hi) {
      out.back().hi = std::max(out.back().hi, e.hi, [](const Rat& x, const Rat& y) { return x < y; });
      out.back().born = out.back().born && e.born;
    } else {
      out.push_back(e);
    }
  }
  return out;
}

// all ways to split `v` (sorted, disjoint) into exactly `blocks` consecutive
// groups; each group becomes its hull interval
void partitions_rec(const std::vector<IEnt>& v, size_t idx, long long blocks,
                    std::vector<IEnt>& cur, std::vector<std::vector<IEnt>>& out) {
  size_t n = v.size();
  if (idx == n) {
    if (blocks == 0) out.push_back(cur);
    return;
  }
  if (blocks == 0) return;
  // group v[idx..j] into one block; leave enough elements for the rest
  for (size_t j = idx; j < n && static_cast<long long>(n - j - 1) >= blocks - 1; ++j) {
    IEnt hull{v[idx].loc, v[idx].lo, v[j].hi, false};
    cur.push_back(hull);
    partitions_rec(v, j + 1, blocks - 1, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<IEnt>> bound_variants(const std::vector<IEnt>& v, long long M) {
  std::vector<std::vector<IEnt>> out;
  if (static_cast<long long>(v.size()) <= M) {
    out.push_back(v);
    // optional merge of a freshly spawned copy with its neighbour
    for (size_t i = 0; i < v.size(); ++i) {
      if (!v[i].born) continue;
      if (i + 1 < v.size()) {
        auto w = v;
        w[i].hi = w[i + 1].hi;
        w[i].born = false;
        w.erase(w.begin() + i + 1);
        out.push_back(w);
      } else if (i > 0) {
        auto w = v;
        w[i - 1].hi = w[i].hi;
        w.erase(w.begin() + i);
        out.push_back(w);
      }
    }
    return out;
  }
  std::vector<IEnt> cur;
  partitions_rec(v, 0, M, cur, out);
  return out;
}

}  // namespace

std::vector<IntervalConfig> step_interval(const Ocata& A, const IntervalConfig& c,
                                          const Rat& t, const std::string& a,
                                          long long M) {
  if (M < 1) throw std::invalid_argument("step_interval: M must be >= 1");
  // combine minimal models across all pairs of the configuration
  std::vector<IModel> acc = {{}};
  for (auto& p : c) {
    auto models = minimal_models_ivl(A.delta_at(p.loc, a), p.lo + t, p.hi + t);
    std::vector<IModel> next;
    for (auto& base : acc)
      for (auto& m : models) next.push_back(merge_sorted(base, m));
    acc = prune_minimal(next);
    if (acc.empty()) return {};
  }

  std::set<IntervalConfig> results;
  for (auto& model : acc) {
    // group by location, normalize, expand merge variants per location
    std::map<int, std::vector<IEnt>> by_loc;
    for (auto& e : model) by_loc[e.loc].push_back(e);
    std::vector<std::vector<std::vector<IEnt>>> choices;
    for (auto& [loc, v] : by_loc) choices.push_back(bound_variants(normalize_loc(v), M));
    // cartesian product over locations
    std::vector<size_t> pick(choices.size(), 0);
    while (true) {
      IntervalConfig cfg;
      for (size_t i = 0; i < choices.size(); ++i)
        for (auto& e : choices[i][pick[i]]) cfg.push_back({e.loc, e.lo, e.hi});
      std::sort(cfg.begin(), cfg.end());
      results.insert(cfg);
      size_t i = 0;
      for (; i < pick.size(); ++i) {
        if (++pick[i] < choices[i].size()) break;
        pick[i] = 0;
      }
      if (i == pick.size()) break;
    }
  }
  return {results.begin(), results.end()};
}

bool accepts_interval(const Ocata& A, const TimedWord& sigma, long long M) {
  std::set<IntervalConfig> configs = {{{A.initial, Rat(0), Rat(0)}}};
  Rat prev(0);
  for (auto& [letter, tau] : sigma.events) {
    Rat d = tau - prev;
    prev = tau;
    std::set<IntervalConfig> next;
    for (auto& c : configs)
      for (auto& s : step_interval(A, c, d, letter, M)) next.insert(s);
    configs = std::move(next);
    if (configs.empty()) return false;
  }
  for (auto& c : configs)
    if (interval_config_accepting(A, c)) return true;
  return false;
}

// ---------------------------------------------------------------------------

namespace {
void count_timed_locs(const FormulaPtr& f, std::set<std::string>& seen) {
  if (!f) return;
  if ((f->kind == FKind::Until || f->kind == FKind::DualUntil) && !f->ivl.is_full())
    seen.insert(print_formula(f));
  count_timed_locs(f->lhs, seen);
  count_timed_locs(f->rhs, seen);
}
}  // namespace

long long merge_bound(const FormulaPtr& phi, long long override_bound) {
  if (override_bound > 0) return override_bound;
  FormulaPtr nnf = to_nnf(phi);
  std::set<std::string> timed;
  count_timed_locs(nnf, timed);
  long long cmax = max_constant(nnf);
  long long m = static_cast<long long>(timed.size()) * (cmax + 1);
  return std::max<long long>(1, m);
}

}  // namespace mitl
