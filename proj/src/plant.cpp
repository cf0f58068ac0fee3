#include "mitl/plant.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mitl {

Valuation zero_valuation(const std::vector<std::string>& clocks) {
  Valuation v;
  for (auto& c : clocks) v[c] = Rat(0);
  return v;
}

Valuation shift(const Valuation& v, const Rat& t) {
  Valuation out = v;
  for (auto& [c, x] : out) x = x + t;
  return out;
}

Valuation reset(const Valuation& v, const std::set<std::string>& r) {
  Valuation out = v;
  for (auto& c : r) out[c] = Rat(0);
  return out;
}

// ---------------------------------------------------------------------------
// Guards

static bool atom_sat(GCmp op, const Rat& val, const Rat& c) {
  switch (op) {
    case GCmp::Lt: return val < c;
    case GCmp::Le: return val <= c;
    case GCmp::Eq: return val == c;
    case GCmp::Ge: return val >= c;
    case GCmp::Gt: return val > c;
  }
  return false;
}

bool guard_sat(const Guard& g, const Valuation& v) {
  for (auto& a : g.atoms) {
    auto it = v.find(a.clock);
    if (it == v.end()) throw std::invalid_argument("guard mentions unknown clock " + a.clock);
    if (!atom_sat(a.op, it->second, a.c)) return false;
  }
  return true;
}

static const char* gcmp_str(GCmp op) {
  switch (op) {
    case GCmp::Lt: return "<";
    case GCmp::Le: return "<=";
    case GCmp::Eq: return "=";
    case GCmp::Ge: return ">=";
    case GCmp::Gt: return ">";
  }
  return "?";
}

std::string print_guard(const Guard& g) {
  std::string out;
  for (auto& a : g.atoms) {
    if (!out.empty()) out += " & ";
    out += a.clock + gcmp_str(a.op) + a.c.str();
  }
  return out;
}

Guard parse_guard(const std::string& text) {
  Guard g;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, '&')) {
    size_t b = part.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    size_t e = part.find_last_not_of(" \t");
    part = part.substr(b, e - b + 1);
    size_t op_pos = part.find_first_of("<>=");
    if (op_pos == std::string::npos)
      throw std::invalid_argument("bad guard atom: " + part);
    GuardAtom a;
    a.clock = part.substr(0, op_pos);
    while (!a.clock.empty() && a.clock.back() == ' ') a.clock.pop_back();
    size_t rest = op_pos;
    if (part[op_pos] == '<')
      a.op = part[op_pos + 1] == '=' ? (rest += 2, GCmp::Le) : (rest += 1, GCmp::Lt);
    else if (part[op_pos] == '>')
      a.op = part[op_pos + 1] == '=' ? (rest += 2, GCmp::Ge) : (rest += 1, GCmp::Gt);
    else
      a.op = (rest += 1, GCmp::Eq);
    std::string num = part.substr(rest);
    size_t nb = num.find_first_not_of(" \t");
    if (nb == std::string::npos) throw std::invalid_argument("bad guard atom: " + part);
    a.c = parse_rat(num.substr(nb));
    if (a.c < Rat(0)) throw std::invalid_argument("negative guard constant: " + part);
    g.atoms.push_back(a);
  }
  return g;
}

Guard guard_and(const Guard& a, const Guard& b) {
  Guard g = a;
  g.atoms.insert(g.atoms.end(), b.atoms.begin(), b.atoms.end());
  return g;
}

// value interval a single clock is allowed to take by a conjunction of atoms
namespace {
struct VarRange {
  Rat lo{0}, hi{0};
  bool lo_closed = true, hi_closed = true, hi_inf = true;
  bool nonempty() const {
    if (hi_inf) return true;
    return lo < hi || (lo == hi && lo_closed && hi_closed);
  }
  void add(GCmp op, const Rat& c) {
    switch (op) {
      case GCmp::Lt: tighten_hi(c, false); break;
      case GCmp::Le: tighten_hi(c, true); break;
      case GCmp::Eq: tighten_lo(c, true); tighten_hi(c, true); break;
      case GCmp::Ge: tighten_lo(c, true); break;
      case GCmp::Gt: tighten_lo(c, false); break;
    }
  }
  void tighten_lo(const Rat& c, bool closed) {
    if (c > lo || (c == lo && lo_closed && !closed)) {
      lo = c;
      lo_closed = closed;
    }
  }
  void tighten_hi(const Rat& c, bool closed) {
    if (hi_inf || c < hi || (c == hi && hi_closed && !closed)) {
      hi = c;
      hi_closed = closed;
      hi_inf = false;
    }
  }
};
}  // namespace

bool jointly_satisfiable(const Guard& a, const Guard& b) {
  std::map<std::string, VarRange> ranges;
  for (const Guard* g : {&a, &b})
    for (auto& at : g->atoms) ranges[at.clock].add(at.op, at.c);
  for (auto& [c, r] : ranges)
    if (!r.nonempty()) return false;
  return true;
}

bool DelayInterval::contains(const Rat& t) const {
  if (t < lo || (t == lo && !lo_closed)) return false;
  if (hi_inf) return true;
  if (t > hi || (t == hi && !hi_closed)) return false;
  return true;
}

std::optional<DelayInterval> guard_delays(const Guard& g, const Valuation& v) {
  VarRange r;  // range for the delay t
  for (auto& a : g.atoms) {
    auto it = v.find(a.clock);
    if (it == v.end()) throw std::invalid_argument("guard mentions unknown clock " + a.clock);
    Rat bound = a.c - it->second;  // v(x)+t ~ c  <=>  t ~ c-v(x)
    switch (a.op) {
      case GCmp::Lt:
        if (bound <= Rat(0)) return std::nullopt;
        r.tighten_hi(bound, false);
        break;
      case GCmp::Le:
        if (bound < Rat(0)) return std::nullopt;
        r.tighten_hi(bound, true);
        break;
      case GCmp::Eq:
        if (bound < Rat(0)) return std::nullopt;
        r.tighten_lo(bound, true);
        r.tighten_hi(bound, true);
        break;
      case GCmp::Ge:
        if (bound > Rat(0)) r.tighten_lo(bound, true);
        break;
      case GCmp::Gt:
        if (bound >= Rat(0)) r.tighten_lo(bound, false);
        break;
    }
  }
  if (!r.nonempty()) return std::nullopt;
  DelayInterval d;
  d.lo = r.lo;
  d.lo_closed = r.lo_closed;
  d.hi = r.hi;
  d.hi_closed = r.hi_closed;
  d.hi_inf = r.hi_inf;
  return d;
}

// ---------------------------------------------------------------------------
// Atomic guards of a granularity

std::vector<Guard> atomic_guards(const Granularity& mu) {
  std::vector<Guard> cells = {Guard{}};
  for (auto& clock : mu.clocks) {
    std::vector<Guard> atoms;
    for (long long alpha = 0; alpha <= mu.K; ++alpha) {
      Guard eq;
      eq.atoms.push_back({clock, GCmp::Eq, Rat(alpha, mu.m)});
      atoms.push_back(eq);
      if (alpha < mu.K) {
        Guard open;
        open.atoms.push_back({clock, GCmp::Gt, Rat(alpha, mu.m)});
        open.atoms.push_back({clock, GCmp::Lt, Rat(alpha + 1, mu.m)});
        atoms.push_back(open);
      }
    }
    Guard unb;
    unb.atoms.push_back({clock, GCmp::Gt, Rat(mu.K, mu.m)});
    atoms.push_back(unb);

    std::vector<Guard> next;
    for (auto& base : cells)
      for (auto& a : atoms) next.push_back(guard_and(base, a));
    cells = std::move(next);
  }
  return cells;
}

// ---------------------------------------------------------------------------
// STS

int Sts::loc_index(const std::string& name) const {
  for (size_t i = 0; i < locs.size(); ++i)
    if (locs[i] == name) return static_cast<int>(i);
  throw std::invalid_argument("unknown location " + name);
}

bool Sts::is_controllable(const std::string& action) const {
  return std::find(sigma_c.begin(), sigma_c.end(), action) != sigma_c.end();
}

bool Sts::in_alphabet(const std::string& action) const {
  return is_controllable(action) ||
         std::find(sigma_e.begin(), sigma_e.end(), action) != sigma_e.end();
}

std::vector<std::string> Sts::alphabet() const {
  std::vector<std::string> out = sigma_c;
  out.insert(out.end(), sigma_e.begin(), sigma_e.end());
  return out;
}

bool is_time_deterministic(const Sts& T) {
  for (size_t i = 0; i < T.trans.size(); ++i)
    for (size_t j = i + 1; j < T.trans.size(); ++j) {
      const Transition& a = T.trans[i];
      const Transition& b = T.trans[j];
      if (a.from != b.from || a.letter.action != b.letter.action) continue;
      if (jointly_satisfiable(a.letter.guard, b.letter.guard)) return false;
    }
  return true;
}

std::optional<std::pair<int, Valuation>> run(const Sts& T, const TimedWord& sigma) {
  int loc = T.initial;
  Valuation v = zero_valuation(T.clocks);
  Rat prev(0);
  for (auto& [letter, tau] : sigma.events) {
    Rat d = tau - prev;
    prev = tau;
    Valuation moved = shift(v, d);
    const Transition* hit = nullptr;
    for (auto& tr : T.trans) {
      if (tr.from != loc || tr.letter.action != letter) continue;
      if (guard_sat(tr.letter.guard, moved)) {
        hit = &tr;
        break;  // unique by time-determinism
      }
    }
    if (!hit) return std::nullopt;
    loc = hit->to;
    v = reset(moved, hit->letter.resets);
  }
  return std::make_pair(loc, v);
}

bool membership(const Sts& T, const TimedWord& sigma) {
  auto r = run(T, sigma);
  return r && T.finals[r->first];
}

std::vector<std::pair<size_t, DelayInterval>> enabled(const Sts& T, int loc,
                                                      const Valuation& v) {
  std::vector<std::pair<size_t, DelayInterval>> out;
  for (size_t i = 0; i < T.trans.size(); ++i) {
    if (T.trans[i].from != loc) continue;
    if (auto d = guard_delays(T.trans[i].letter.guard, v)) out.emplace_back(i, *d);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    size_t b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    size_t e = item.find_last_not_of(" \t");
    out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Sts parse_sts(const std::string& text) {
  Sts T;
  std::map<std::string, int> loc_of;
  std::string initial_name;
  std::vector<std::string> final_names;
  struct RawTrans {
    std::string from, action, guard, resets, to;
  };
  std::vector<RawTrans> raw;

  auto intern = [&](const std::string& name) {
    auto it = loc_of.find(name);
    if (it != loc_of.end()) return it->second;
    int idx = static_cast<int>(T.locs.size());
    T.locs.push_back(name);
    loc_of.emplace(name, idx);
    return idx;
  };

  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("alphabet", 0) == 0) {
      std::string rest = trim(line.substr(8));
      auto semi = rest.find(';');
      std::string cpart = semi == std::string::npos ? rest : trim(rest.substr(0, semi));
      std::string epart = semi == std::string::npos ? "" : trim(rest.substr(semi + 1));
      for (auto* part : {&cpart, &epart}) {
        if (part->empty()) continue;
        bool ctrl = (*part)[0] == 'C';
        auto colon = part->find(':');
        if (colon == std::string::npos)
          throw std::invalid_argument("bad alphabet line: " + line);
        auto items = split_list(part->substr(colon + 1));
        (ctrl ? T.sigma_c : T.sigma_e) = items;
      }
    } else if (line.rfind("clocks", 0) == 0) {
      T.clocks = split_list(line.substr(6));
    } else if (line.rfind("initial", 0) == 0) {
      initial_name = trim(line.substr(7));
    } else if (line.rfind("final", 0) == 0) {
      final_names = split_list(line.substr(5));
    } else if (line.find("->") != std::string::npos) {
      // q0 -a[x<=1]/reset x-> q1
      auto dash = line.find(" -");
      auto arrow = line.rfind("->");
      if (dash == std::string::npos || arrow == std::string::npos || arrow <= dash)
        throw std::invalid_argument("bad transition line: " + line);
      RawTrans t;
      t.from = trim(line.substr(0, dash));
      std::string mid = line.substr(dash + 2, arrow - dash - 2);
      t.to = trim(line.substr(arrow + 2));
      auto slash = mid.find('/');
      std::string head = slash == std::string::npos ? mid : mid.substr(0, slash);
      if (slash != std::string::npos) {
        std::string rpart = trim(mid.substr(slash + 1));
        if (rpart.rfind("reset", 0) != 0)
          throw std::invalid_argument("bad reset clause: " + line);
        t.resets = trim(rpart.substr(5));
      }
      auto lbr = head.find('[');
      if (lbr != std::string::npos) {
        auto rbr = head.rfind(']');
        if (rbr == std::string::npos || rbr < lbr)
          throw std::invalid_argument("unbalanced guard brackets: " + line);
        t.guard = head.substr(lbr + 1, rbr - lbr - 1);
        t.action = trim(head.substr(0, lbr));
      } else {
        t.action = trim(head);
      }
      raw.push_back(t);
    } else {
      throw std::invalid_argument("unrecognized line: " + line);
    }
  }

  if (initial_name.empty()) throw std::invalid_argument("missing initial line");
  intern(initial_name);
  for (auto& t : raw) {
    intern(t.from);
    intern(t.to);
  }
  T.initial = loc_of.at(initial_name);
  T.finals.assign(T.locs.size(), final_names.empty());
  for (auto& f : final_names) T.finals[intern(f)] = true;
  if (T.finals.size() != T.locs.size())
    throw std::invalid_argument("final location not otherwise mentioned");

  for (auto& t : raw) {
    Transition tr;
    tr.from = loc_of.at(t.from);
    tr.to = loc_of.at(t.to);
    tr.letter.action = t.action;
    if (!T.in_alphabet(t.action))
      throw std::invalid_argument("action outside alphabet: " + t.action);
    tr.letter.guard = parse_guard(t.guard);
    for (auto& c : split_list(t.resets)) {
      if (std::find(T.clocks.begin(), T.clocks.end(), c) == T.clocks.end())
        throw std::invalid_argument("reset of unknown clock: " + c);
      tr.letter.resets.insert(c);
    }
    // guards may observe clocks owned elsewhere (a controller reading plant
    // clocks); only plants are required to be self-contained, see validate_plant
    T.trans.push_back(tr);
  }
  return T;
}

std::string print_sts(const Sts& T) {
  std::ostringstream out;
  out << "alphabet C:";
  for (size_t i = 0; i < T.sigma_c.size(); ++i) out << (i ? "," : " ") << T.sigma_c[i];
  out << "; E:";
  for (size_t i = 0; i < T.sigma_e.size(); ++i) out << (i ? "," : " ") << T.sigma_e[i];
  out << "\n";
  if (!T.clocks.empty()) {
    out << "clocks ";
    for (size_t i = 0; i < T.clocks.size(); ++i) out << (i ? "," : "") << T.clocks[i];
    out << "\n";
  }
  out << "initial " << T.locs[T.initial] << "\nfinal ";
  bool first = true;
  for (size_t i = 0; i < T.locs.size(); ++i)
    if (T.finals[i]) {
      if (!first) out << ",";
      out << T.locs[i];
      first = false;
    }
  out << "\n";
  for (auto& t : T.trans) {
    out << T.locs[t.from] << " -" << t.letter.action;
    if (!t.letter.guard.atoms.empty()) out << "[" << print_guard(t.letter.guard) << "]";
    if (!t.letter.resets.empty()) {
      out << "/reset ";
      bool f2 = true;
      for (auto& c : t.letter.resets) {
        if (!f2) out << ",";
        out << c;
        f2 = false;
      }
    }
    out << "-> " << T.locs[t.to] << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Plant validation

void validate_plant(const Sts& P) {
  for (auto& t : P.trans)
    for (auto& a : t.letter.guard.atoms)
      if (std::find(P.clocks.begin(), P.clocks.end(), a.clock) == P.clocks.end())
        throw std::invalid_argument("guard on unknown clock: " + a.clock);
  if (!is_time_deterministic(P))
    throw std::invalid_argument("plant is not time-deterministic");
  // Non-blocking: from every reachable configuration some timed action must be
  // enabled. Reachability is explored at region resolution; valuations are
  // canonicalised (values beyond the largest constant pinned, fractional parts
  // evenly respaced) so the search is finite.
  long long den = 1;
  Rat cmax(0);
  for (auto& t : P.trans)
    for (auto& a : t.letter.guard.atoms) {
      den = std::lcm(den, a.c.den);
      cmax = std::max(cmax, a.c);
    }
  long long top = (cmax * Rat(den)).num;

  auto canon = [&](const Valuation& v) {
    std::set<Rat> fracs;
    for (auto& [c, val] : v) {
      Rat s = val * Rat(den);
      if (s > Rat(top)) continue;
      Rat f = s - Rat(s.floor());
      if (f != Rat(0)) fracs.insert(f);
    }
    std::map<Rat, Rat> remap;
    long long p = (long long)fracs.size(), i = 0;
    for (auto& f : fracs) remap[f] = Rat(++i, p + 1);
    Valuation out;
    for (auto& [c, val] : v) {
      Rat s = val * Rat(den);
      if (s > Rat(top)) {
        out[c] = Rat(top + den, den);
        continue;
      }
      Rat f = s - Rat(s.floor());
      out[c] = (Rat(s.floor()) + (f == Rat(0) ? Rat(0) : remap[f])) / Rat(den);
    }
    return out;
  };

  auto delays = [&](const Valuation& v) {
    std::set<Rat> ts = {Rat(0)};
    for (auto& [c, val] : v) {
      Rat s = val * Rat(den);
      long long k = s.floor();
      if (Rat(k) < s) ++k;
      for (; k <= top; ++k) ts.insert(Rat(k, den) - val);
    }
    std::vector<Rat> sorted(ts.begin(), ts.end());
    std::vector<Rat> out;
    for (size_t i = 0; i < sorted.size(); ++i) {
      out.push_back(sorted[i]);
      if (i + 1 < sorted.size()) out.push_back((sorted[i] + sorted[i + 1]) / Rat(2));
    }
    out.push_back(sorted.back() + Rat(1));
    return out;
  };

  std::set<std::pair<int, Valuation>> seen;
  std::vector<std::pair<int, Valuation>> todo = {{P.initial, zero_valuation(P.clocks)}};
  seen.insert(todo[0]);
  while (!todo.empty()) {
    auto [loc, v] = todo.back();
    todo.pop_back();
    if (enabled(P, loc, v).empty())
      throw std::invalid_argument("plant blocks in location " + P.locs[loc]);
    for (auto& t : delays(v)) {
      Valuation moved = shift(v, t);
      for (auto& tr : P.trans) {
        if (tr.from != loc || !guard_sat(tr.letter.guard, moved)) continue;
        std::pair<int, Valuation> next{tr.to, canon(reset(moved, tr.letter.resets))};
        if (seen.insert(next).second) todo.push_back(next);
      }
    }
  }
}

}  // namespace mitl
