#include "mitl/regions.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mitl {

// ---------------------------------------------------------------------------
// Joint granularity

RegionCtx joint_granularity(const Granularity& mu, const Sts& plant, const Ocata& A) {
  RegionCtx ctx;
  ctx.ctrl_clocks = mu.clocks;
  ctx.plant_clocks = plant.clocks;
  for (auto& x : mu.clocks)
    for (auto& y : plant.clocks)
      if (x == y) throw std::runtime_error("controller clock shadows plant clock: " + x);

  long long den = mu.clocks.empty() ? 1 : mu.m;
  Rat cmax(0);
  if (!mu.clocks.empty()) cmax = std::max(cmax, Rat(mu.K, mu.m));
  for (auto& tr : plant.trans)
    for (auto& atom : tr.letter.guard.atoms) {
      den = std::lcm(den, atom.c.den);
      cmax = std::max(cmax, atom.c);
    }
  cmax = std::max(cmax, Rat(A.max_const));
  ctx.den = den;
  ctx.cmax_num = cmax.num * (den / cmax.den);
  return ctx;
}

Region region_of(const RegionCtx& ctx, const Rat& v) {
  Rat s = v * Rat(ctx.den);
  if (s > Rat(ctx.cmax_num)) return {Region::Above, 0};
  long long fl = s.floor();
  if (Rat(fl) == s) return {Region::Point, fl};
  return {Region::Open, fl};
}

std::string region_str(const RegionCtx& ctx, const Region& r) {
  switch (r.kind) {
    case Region::Point:
      return Rat(r.alpha, ctx.den).str();
    case Region::Open:
      return "(" + Rat(r.alpha, ctx.den).str() + "," + Rat(r.alpha + 1, ctx.den).str() + ")";
    default:
      return ">" + Rat(ctx.cmax_num, ctx.den).str();
  }
}

// ---------------------------------------------------------------------------
// Abstraction

static Rat fract_class(const RegionCtx& ctx, const Rat& v) {
  Rat s = v * Rat(ctx.den);
  if (s > Rat(ctx.cmax_num)) return Rat(0);  // values above cmax act as integral
  return s - Rat(s.floor());
}

static RegionWord wordreg(const RegionCtx& ctx, const JointTuple& eta) {
  struct Raw {
    RegionEntry e;
    Rat v;
  };
  std::vector<Raw> raws;
  for (auto& [c, v] : eta.ctrl) raws.push_back({{RegionEntry::Clock, c, -1, 0, {}}, v});
  for (auto& [c, v] : eta.plant) raws.push_back({{RegionEntry::Clock, c, -1, 0, {}}, v});
  IntervalConfig cfg = eta.cfg;
  std::sort(cfg.begin(), cfg.end());
  std::map<int, int> copies;
  for (auto& ip : cfg) {
    int k = ++copies[ip.loc];
    raws.push_back({{RegionEntry::IvlLo, "", ip.loc, k, {}}, ip.lo});
    raws.push_back({{RegionEntry::IvlHi, "", ip.loc, k, {}}, ip.hi});
  }
  std::map<Rat, RegionLetter> classes;
  for (auto& r : raws) {
    RegionEntry e = r.e;
    e.reg = region_of(ctx, r.v);
    classes[fract_class(ctx, r.v)].insert(e);
  }
  RegionWord w;
  for (auto& [f, letter] : classes) w.push_back(letter);
  return w;
}

NodeLabel abstract_config(const RegionCtx& ctx, const JointConfig& gamma) {
  NodeLabel label;
  label.q = gamma.q;
  for (auto& eta : gamma.tuples) label.words.insert(wordreg(ctx, eta));
  return label;
}

// ---------------------------------------------------------------------------
// Canonical representative

static bool integral_letter(const RegionLetter& letter) {
  for (auto& e : letter)
    if (e.reg.kind == Region::Open) return false;
  return true;
}

static JointTuple tuple_of_word(const RegionCtx& ctx, const RegionWord& w) {
  int p = 0;
  for (auto& letter : w)
    if (!integral_letter(letter)) ++p;

  JointTuple eta;
  std::map<std::pair<int, int>, std::pair<std::optional<Rat>, std::optional<Rat>>> ivls;
  int fidx = 0;
  for (size_t i = 0; i < w.size(); ++i) {
    const RegionLetter& letter = w[i];
    if (letter.empty()) throw std::runtime_error("malformed label: empty letter");
    bool integral = integral_letter(letter);
    if (integral && i > 0)
      throw std::runtime_error("malformed label: integral class not first");
    Rat frac(0);
    if (!integral) frac = Rat(++fidx, p + 1);
    for (auto& e : letter) {
      Rat val;
      switch (e.reg.kind) {
        case Region::Point:
          val = Rat(e.reg.alpha, ctx.den);
          break;
        case Region::Open:
          if (integral) throw std::runtime_error("malformed label: mixed letter");
          val = (Rat(e.reg.alpha) + frac) / Rat(ctx.den);
          break;
        default:
          val = Rat(ctx.cmax_num + ctx.den, ctx.den);  // cmax + 1
      }
      if (e.reg.kind != Region::Open && !integral)
        throw std::runtime_error("malformed label: mixed letter");
      if (e.tag == RegionEntry::Clock) {
        bool is_ctrl = std::count(ctx.ctrl_clocks.begin(), ctx.ctrl_clocks.end(), e.clock);
        bool is_plant = std::count(ctx.plant_clocks.begin(), ctx.plant_clocks.end(), e.clock);
        if (!is_ctrl && !is_plant)
          throw std::runtime_error("malformed label: unknown clock " + e.clock);
        auto& target = is_ctrl ? eta.ctrl : eta.plant;
        if (!target.emplace(e.clock, val).second)
          throw std::runtime_error("malformed label: duplicate clock " + e.clock);
      } else {
        auto& slot = ivls[{e.loc, e.copy}];
        auto& end = (e.tag == RegionEntry::IvlLo) ? slot.first : slot.second;
        if (end) throw std::runtime_error("malformed label: duplicate interval endpoint");
        end = val;
      }
    }
  }
  for (auto& c : ctx.ctrl_clocks)
    if (!eta.ctrl.count(c)) throw std::runtime_error("malformed label: missing clock " + c);
  for (auto& c : ctx.plant_clocks)
    if (!eta.plant.count(c)) throw std::runtime_error("malformed label: missing clock " + c);
  for (auto& [key, lohi] : ivls) {
    if (!lohi.first || !lohi.second)
      throw std::runtime_error("malformed label: half interval");
    if (*lohi.first > *lohi.second)
      throw std::runtime_error("malformed label: interval endpoints out of order");
    eta.cfg.push_back({key.first, *lohi.first, *lohi.second});
  }
  std::sort(eta.cfg.begin(), eta.cfg.end());
  return eta;
}

JointConfig representative(const RegionCtx& ctx, const NodeLabel& label) {
  JointConfig gamma;
  gamma.q = label.q;
  for (auto& w : label.words) gamma.tuples.insert(tuple_of_word(ctx, w));
  return gamma;
}

JointConfig initial_config(const RegionCtx& ctx, const Sts& plant, const Ocata& A) {
  JointTuple eta;
  eta.ctrl = zero_valuation(ctx.ctrl_clocks);
  eta.plant = zero_valuation(ctx.plant_clocks);
  eta.cfg.push_back({A.initial, Rat(0), Rat(0)});
  return {plant.initial, {eta}};
}

// ---------------------------------------------------------------------------
// Serialization

std::string label_key(const RegionCtx& ctx, const Sts& plant, const Ocata& A,
                      const NodeLabel& label) {
  std::ostringstream os;
  os << plant.locs[label.q];
  for (auto& w : label.words) {
    os << " |";
    for (auto& letter : w) {
      os << " {";
      bool first = true;
      for (auto& e : letter) {
        if (!first) os << ",";
        first = false;
        if (e.tag == RegionEntry::Clock)
          os << e.clock;
        else
          os << A.loc_names[e.loc] << "#" << e.copy
             << (e.tag == RegionEntry::IvlLo ? ".lo" : ".hi");
        os << ":" << region_str(ctx, e.reg);
      }
      os << "}";
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Lifted successors

static std::vector<Rat> delay_candidates(const RegionCtx& ctx, const JointTuple& eta) {
  std::set<Rat> vals;
  for (auto& [c, v] : eta.ctrl) vals.insert(v);
  for (auto& [c, v] : eta.plant) vals.insert(v);
  for (auto& ip : eta.cfg) {
    vals.insert(ip.lo);
    vals.insert(ip.hi);
  }
  std::set<Rat> ts = {Rat(0)};
  for (auto& v : vals) {
    Rat s = v * Rat(ctx.den);
    long long k = s.floor();
    if (Rat(k) < s) ++k;
    for (; k <= ctx.cmax_num; ++k) ts.insert(Rat(k, ctx.den) - v);
  }
  std::vector<Rat> sorted(ts.begin(), ts.end());
  std::vector<Rat> out;
  for (size_t i = 0; i < sorted.size(); ++i) {
    out.push_back(sorted[i]);
    if (i + 1 < sorted.size()) out.push_back((sorted[i] + sorted[i + 1]) / Rat(2));
  }
  out.push_back(sorted.back() + Rat(1));
  return out;
}

static std::vector<std::set<std::string>> reset_subsets(const std::vector<std::string>& xs) {
  std::vector<std::set<std::string>> out;
  for (size_t mask = 0; mask < (size_t{1} << xs.size()); ++mask) {
    std::set<std::string> r;
    for (size_t i = 0; i < xs.size(); ++i)
      if (mask & (size_t{1} << i)) r.insert(xs[i]);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<SuccRecord> successors(const NodeLabel& label, const Sts& plant,
                                   const Ocata& A, const Granularity& mu,
                                   const RegionCtx& ctx, long long M) {
  return successors_from(representative(ctx, label), plant, A, mu, ctx, M);
}

std::vector<SuccRecord> successors_from(const JointConfig& gamma, const Sts& plant,
                                        const Ocata& A, const Granularity& mu,
                                        const RegionCtx& ctx, long long M) {
  Granularity observable{mu.clocks, mu.m, mu.K};  // all clocks the controller sees
  observable.clocks.insert(observable.clocks.end(), plant.clocks.begin(),
                           plant.clocks.end());
  auto cells = atomic_guards(observable);
  auto resets = reset_subsets(mu.clocks);

  // accumulated at region resolution right away: the many concrete delays
  // hitting the same region collapse before they can pile up
  struct Acc {
    std::set<RegionWord> words;
    std::optional<Rat> earliest;
  };
  std::map<std::tuple<size_t, size_t, size_t>, Acc> acc;

  for (auto& eta : gamma.tuples) {
    std::map<std::pair<Rat, std::string>, std::vector<IntervalConfig>> step_cache;
    for (auto& t : delay_candidates(ctx, eta)) {
      Valuation c2 = shift(eta.ctrl, t), p2 = shift(eta.plant, t);
      Valuation merged = c2;
      merged.insert(p2.begin(), p2.end());
      for (size_t ti = 0; ti < plant.trans.size(); ++ti) {
        const Transition& tr = plant.trans[ti];
        if (tr.from != gamma.q) continue;
        if (!guard_sat(tr.letter.guard, merged)) continue;
        auto it = step_cache.find({t, tr.letter.action});
        if (it == step_cache.end())
          it = step_cache
                   .emplace(std::pair<Rat, std::string>{t, tr.letter.action},
                            step_interval(A, eta.cfg, t, tr.letter.action, M))
                   .first;
        const auto& succs = it->second;
        if (succs.empty()) continue;  // the monitor run dies: nothing to track
        for (size_t gi = 0; gi < cells.size(); ++gi) {
          if (!guard_sat(cells[gi], merged)) continue;
          for (size_t ri = 0; ri < resets.size(); ++ri) {
            Acc& a = acc[{ti, gi, ri}];
            for (auto& C : succs) {
              JointTuple out;
              out.ctrl = reset(c2, resets[ri]);
              out.plant = reset(p2, tr.letter.resets);
              out.cfg = C;
              a.words.insert(wordreg(ctx, out));
            }
            if (!a.earliest || t < *a.earliest) a.earliest = t;
          }
        }
      }
    }
  }

  std::vector<SuccRecord> out;
  for (auto& [key, a] : acc) {
    auto [ti, gi, ri] = key;
    SuccRecord rec;
    rec.letter.action = plant.trans[ti].letter.action;
    rec.letter.guard = guard_and(cells[gi], plant.trans[ti].letter.guard);
    rec.cell = cells[gi];
    rec.letter.resets = resets[ri];
    rec.plant_trans = ti;
    rec.next = NodeLabel{plant.trans[ti].to, std::move(a.words)};
    rec.earliest = *a.earliest;
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace mitl
