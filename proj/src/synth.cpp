#include "mitl/synth.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

namespace mitl {

// ---------------------------------------------------------------------------
// Game graph construction

bool losing_label(const Sts& plant, const Ocata& monitor, const NodeLabel& label) {
  if (!plant.finals[label.q]) return false;
  for (auto& w : label.words) {
    bool all_final = true;
    for (auto& letter : w)
      for (auto& e : letter)
        if (e.tag != RegionEntry::Clock && !monitor.finals[e.loc]) all_final = false;
    if (all_final) return true;  // includes an empty monitor part
  }
  return false;
}

std::set<std::string> edge_resets(const SynthTree& tree, const SynthEdge& e) {
  std::set<std::string> out;
  for (size_t i = 0; i < tree.mu.clocks.size(); ++i)
    if (e.resets & (1u << i)) out.insert(tree.mu.clocks[i]);
  return out;
}

SymbolicLetter edge_letter(const SynthTree& tree, const SynthEdge& e) {
  const Transition& pt = tree.plant.trans[e.plant_trans];
  return {pt.letter.action, guard_and(tree.cells[e.cell], pt.letter.guard),
          edge_resets(tree, e)};
}

SynthTree build_tree(const Sts& plant, const FormulaPtr& phi, const Granularity& mu,
                     const BuildOptions& opts) {
  validate_plant(plant);
  SynthTree tree;
  tree.plant = plant;
  tree.spec = phi;
  FormulaPtr neg = f_not(phi);
  tree.monitor = translate(neg, plant.alphabet());
  tree.mu = mu;
  tree.ctx = joint_granularity(mu, plant, tree.monitor);
  tree.M = merge_bound(neg, opts.merge_override);

  Granularity observable{mu.clocks, mu.m, mu.K};
  for (auto& c : plant.clocks) observable.clocks.push_back(c);
  tree.cells = atomic_guards(observable);
  std::map<Guard, int> cell_idx;
  for (size_t i = 0; i < tree.cells.size(); ++i) cell_idx.emplace(tree.cells[i], (int)i);
  auto reset_mask = [&](const std::set<std::string>& rs) {
    unsigned mask = 0;
    for (size_t i = 0; i < mu.clocks.size(); ++i)
      if (rs.count(mu.clocks[i])) mask |= 1u << i;
    return mask;
  };

  NodeLabel root =
      abstract_config(tree.ctx, initial_config(tree.ctx, plant, tree.monitor));
  // The root stays out of the interning set: the empty word is always allowed,
  // so the initial position is never losing, but a revisit of the same label
  // along a play must still be checked.
  tree.nodes.push_back({root, {}, {}, false});
  auto by_label = [&tree](int a, int b) { return tree.nodes[a].label < tree.nodes[b].label; };
  std::set<int, decltype(by_label)> interned(by_label);
  std::deque<int> todo = {0};
  size_t expanded = 0, next_check = 1024;
  while (!todo.empty()) {
    int u = todo.front();
    todo.pop_front();
    if (tree.nodes[u].losing) continue;
    // Unexpanded nodes behave like safe deadlocks, which over-approximates
    // the controller's power: once the root is losing on the partial graph,
    // it stays losing, so construction can stop early.
    if (++expanded >= next_check) {
      next_check = expanded + expanded / 2 + 1024;
      if (!solve(tree).winning) return tree;
    }
    auto succ =
        successors(tree.nodes[u].label, plant, tree.monitor, mu, tree.ctx, tree.M);
    for (auto& rec : succ) {
      int v = (int)tree.nodes.size();
      tree.nodes.push_back({std::move(rec.next), {}, {}, false});
      auto [it, fresh] = interned.insert(v);
      if (!fresh) {
        tree.nodes.pop_back();
        v = *it;
      } else {
        if ((size_t)v > opts.node_budget)
          throw BudgetExceeded("node budget exceeded while unfolding the game");
        tree.nodes[v].losing = losing_label(plant, tree.monitor, tree.nodes[v].label);
        todo.push_back(v);
      }
      tree.nodes[u].letters.push_back({cell_idx.at(rec.cell), rec.plant_trans,
                                       reset_mask(rec.letter.resets), rec.earliest});
      tree.nodes[u].child.push_back(v);
    }
  }
  return tree;
}

// ---------------------------------------------------------------------------
// Valid action sets

std::vector<ActionSet> enumerate_valid_action_sets(const SynthTree& tree, int node) {
  const SynthNode& n = tree.nodes[node];
  if (n.letters.empty()) return {};
  struct Group {
    std::vector<size_t> members;  // same (action, guard), different resets
    Rat earliest;
  };
  std::map<std::pair<std::string, Guard>, Group> env;
  std::vector<size_t> ctrl;
  for (size_t i = 0; i < n.letters.size(); ++i) {
    const SynthEdge& e = n.letters[i];
    SymbolicLetter letter = edge_letter(tree, e);
    if (tree.plant.is_controllable(letter.action)) {
      ctrl.push_back(i);
    } else {
      auto [it, fresh] =
          env.try_emplace({letter.action, letter.guard}, Group{{}, e.earliest});
      it->second.members.push_back(i);
      if (e.earliest < it->second.earliest) it->second.earliest = e.earliest;
    }
  }

  auto products = [](const std::vector<const Group*>& groups,
                     const ActionSet& seed) {
    std::vector<ActionSet> out = {seed};
    for (const Group* g : groups) {
      std::vector<ActionSet> next;
      for (auto& partial : out)
        for (size_t m : g->members) {
          ActionSet a = partial;
          a.push_back(m);
          next.push_back(std::move(a));
        }
      out = std::move(next);
      if (out.size() > 100000)
        throw std::runtime_error("action-set enumeration blow-up");
    }
    for (auto& a : out) std::sort(a.begin(), a.end());
    return out;
  };

  std::set<ActionSet> result;
  // stay silent: cover every fireable environment letter
  std::vector<const Group*> all_groups;
  for (auto& [key, g] : env) all_groups.push_back(&g);
  for (auto& a : products(all_groups, {})) result.insert(a);
  // propose one controllable letter: cover environment letters fireable no later
  for (size_t c : ctrl) {
    std::vector<const Group*> before;
    for (auto& [key, g] : env)
      if (g.earliest <= n.letters[c].earliest) before.push_back(&g);
    for (auto& a : products(before, {c})) result.insert(a);
  }
  return {result.begin(), result.end()};
}

// ---------------------------------------------------------------------------
// Backward induction as a greatest fixpoint on the shared graph

SolveResult solve(const SynthTree& tree) {
  size_t n = tree.nodes.size();
  std::vector<char> win(n);
  for (size_t i = 0; i < n; ++i) win[i] = !tree.nodes[i].losing;

  // The valid action sets of a node are products of independent per-group
  // choices, so a set with all-winning children exists exactly when each
  // required group has a winning member; no need to enumerate the product.
  struct NodeView {
    std::vector<std::vector<size_t>> groups;  // env members per (action, guard)
    std::vector<Rat> group_earliest;
    std::vector<size_t> ctrl;
  };
  std::vector<std::optional<NodeView>> views(n);
  auto view = [&](size_t i) -> const NodeView& {
    if (!views[i]) {
      NodeView v;
      std::map<std::pair<std::string, Guard>, size_t> idx;
      const SynthNode& node = tree.nodes[i];
      for (size_t j = 0; j < node.letters.size(); ++j) {
        SymbolicLetter letter = edge_letter(tree, node.letters[j]);
        if (tree.plant.is_controllable(letter.action)) {
          v.ctrl.push_back(j);
          continue;
        }
        auto [it, fresh] = idx.try_emplace({letter.action, letter.guard}, v.groups.size());
        if (fresh) {
          v.groups.emplace_back();
          v.group_earliest.push_back(node.letters[j].earliest);
        }
        v.groups[it->second].push_back(j);
        v.group_earliest[it->second] =
            std::min(v.group_earliest[it->second], node.letters[j].earliest);
      }
      views[i] = std::move(v);
    }
    return *views[i];
  };
  auto pick = [&](size_t i) -> std::optional<ActionSet> {
    const NodeView& v = view(i);
    auto cover = [&](const std::optional<Rat>& proposal) -> std::optional<ActionSet> {
      ActionSet a;
      for (size_t g = 0; g < v.groups.size(); ++g) {
        if (proposal && !(v.group_earliest[g] <= *proposal)) continue;
        bool found = false;
        for (size_t j : v.groups[g])
          if (win[tree.nodes[i].child[j]]) {
            a.push_back(j);
            found = true;
            break;
          }
        if (!found) return std::nullopt;
      }
      return a;
    };
    if (auto a = cover(std::nullopt)) {  // stay silent
      std::sort(a->begin(), a->end());
      return a;
    }
    for (size_t c : v.ctrl) {
      if (!win[tree.nodes[i].child[c]]) continue;
      if (auto a = cover(tree.nodes[i].letters[c].earliest)) {
        a->push_back(c);
        std::sort(a->begin(), a->end());
        return a;
      }
    }
    return std::nullopt;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < n; ++i) {
      if (!win[i] || tree.nodes[i].letters.empty()) continue;
      if (!pick(i)) {
        win[i] = false;
        changed = true;
      }
    }
  }
  SolveResult res;
  res.winning = win[0];
  if (res.winning) {
    Strategy s;
    for (size_t i = 0; i < n; ++i)
      if (win[i] && !tree.nodes[i].letters.empty())
        if (auto a = pick(i)) s.choice[(int)i] = *a;
    res.strategy = std::move(s);
  }
  return res;
}

// ---------------------------------------------------------------------------
// Controller extraction

Sts extract_controller(const SynthTree& tree, const Strategy& strategy,
                       const Granularity& mu) {
  Sts T;
  T.clocks = mu.clocks;
  T.sigma_c = tree.plant.sigma_c;
  T.sigma_e = tree.plant.sigma_e;
  std::map<int, int> loc_of;
  std::deque<int> todo = {0};
  loc_of[0] = 0;
  T.locs.push_back("c0");
  while (!todo.empty()) {
    int u = todo.front();
    todo.pop_front();
    auto it = strategy.choice.find(u);
    if (it == strategy.choice.end()) continue;
    for (size_t j : it->second) {
      int v = tree.nodes[u].child[j];
      if (!loc_of.count(v)) {
        loc_of[v] = (int)T.locs.size();
        T.locs.push_back("c" + std::to_string(T.locs.size()));
        todo.push_back(v);
      }
      const SynthEdge& e = tree.nodes[u].letters[j];
      // the plant transition's own guard is dropped: the atomic cell already
      // pins every observable clock
      Transition tr{loc_of[u],
                    {tree.plant.trans[e.plant_trans].letter.action, tree.cells[e.cell],
                     edge_resets(tree, e)},
                    loc_of[v]};
      bool dup = false;
      for (auto& have : T.trans)
        dup = dup || (have.from == tr.from && have.to == tr.to &&
                      have.letter == tr.letter);
      if (!dup) T.trans.push_back(tr);
    }
  }
  T.initial = 0;
  T.finals.assign(T.locs.size(), true);
  return T;
}

// ---------------------------------------------------------------------------
// Closed-loop enumeration at region resolution

namespace {

struct LoopGrid {
  long long den = 1;
  Rat cmax{0};
};

LoopGrid loop_grid(const Sts& T, const Sts& P) {
  LoopGrid g;
  for (const Sts* s : {&T, &P})
    for (auto& tr : s->trans)
      for (auto& atom : tr.letter.guard.atoms) {
        g.den = std::lcm(g.den, atom.c.den);
        g.cmax = std::max(g.cmax, atom.c);
      }
  return g;
}

std::vector<Rat> grid_delays(const LoopGrid& g, const std::vector<Rat>& values) {
  std::set<Rat> ts = {Rat(0)};
  long long top = (g.cmax * Rat(g.den)).num;
  for (auto& v : values) {
    Rat s = v * Rat(g.den);
    long long k = s.floor();
    if (Rat(k) < s) ++k;
    for (; k <= top; ++k) ts.insert(Rat(k, g.den) - v);
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

struct LoopState {
  int q;          // plant location
  Valuation vp;   // plant clocks
  bool sync;      // controller still tracking the word
  int s = 0;      // controller location, when sync
  Valuation vc;   // controller clocks, when sync
  Rat now{0};
};

}  // namespace

std::vector<TimedWord> closed_loop_words(const Sts& T, const Sts& P, int depth) {
  LoopGrid grid = loop_grid(T, P);
  std::set<std::vector<std::pair<std::string, Rat>>> words = {{}};
  std::deque<std::pair<LoopState, TimedWord>> todo;
  todo.push_back({{P.initial, zero_valuation(P.clocks), true, T.initial,
                   zero_valuation(T.clocks), Rat(0)},
                  {}});

  auto plant_fire = [&](const LoopState& st, const Rat& t, const std::string& a)
      -> std::optional<std::pair<int, Valuation>> {
    Valuation moved = shift(st.vp, t);
    for (auto& tr : P.trans)
      if (tr.from == st.q && tr.letter.action == a) {
        Valuation merged = moved;
        if (st.sync) {
          Valuation mc = shift(st.vc, t);
          merged.insert(mc.begin(), mc.end());
        }
        if (guard_sat(tr.letter.guard, merged))
          return std::pair<int, Valuation>{tr.to, reset(moved, tr.letter.resets)};
      }
    return std::nullopt;
  };

  while (!todo.empty()) {
    auto [st, w] = todo.front();
    todo.pop_front();
    if ((int)w.events.size() >= depth) continue;

    auto push = [&](const Rat& t, const std::string& a, int q2, Valuation vp2,
                    bool sync2, int s2, Valuation vc2) {
      TimedWord w2 = w;
      w2.events.emplace_back(a, st.now + t);
      if (!words.insert(w2.events).second) return;
      todo.push_back({{q2, std::move(vp2), sync2, s2, std::move(vc2), st.now + t},
                      std::move(w2)});
    };

    std::vector<Rat> values;
    for (auto& [c, v] : st.vp) values.push_back(v);
    if (st.sync)
      for (auto& [c, v] : st.vc) values.push_back(v);
    std::vector<Rat> cands = grid_delays(grid, values);

    // a detached controller constrains nothing: every plant future is allowed
    if (!st.sync) {
      for (auto& t : cands) {
        Valuation moved = shift(st.vp, t);
        for (auto& tr : P.trans)
          if (tr.from == st.q && guard_sat(tr.letter.guard, moved))
            push(t, tr.letter.action, tr.to, reset(moved, tr.letter.resets), false, 0, {});
      }
      continue;
    }

    // controller proposals: controllable, enabled in both machines
    struct Proposal {
      Rat t;
      const Transition* ct;
    };
    std::vector<Proposal> proposals;
    for (auto& t : cands) {
      Valuation merged = shift(st.vc, t);
      Valuation mp = shift(st.vp, t);
      merged.insert(mp.begin(), mp.end());
      for (auto& tr : T.trans) {
        if (tr.from != st.s || !P.is_controllable(tr.letter.action)) continue;
        if (!guard_sat(tr.letter.guard, merged)) continue;
        if (!plant_fire(st, t, tr.letter.action)) continue;
        proposals.push_back({t, &tr});
      }
    }

    auto env_step = [&](const Rat& t, const std::string& a) {
      auto pf = plant_fire(st, t, a);
      if (!pf) return;
      // the controller follows when it has a matching transition
      Valuation merged = shift(st.vc, t);
      Valuation mp = shift(st.vp, t);
      merged.insert(mp.begin(), mp.end());
      for (auto& tr : T.trans)
        if (tr.from == st.s && tr.letter.action == a &&
            guard_sat(tr.letter.guard, merged)) {
          push(t, a, pf->first, pf->second, true, tr.to,
               reset(shift(st.vc, t), tr.letter.resets));
          return;
        }
      push(t, a, pf->first, pf->second, false, 0, {});
    };

    if (!proposals.empty()) {
      Rat tmax = proposals[0].t;
      for (auto& p : proposals) tmax = std::max(tmax, p.t);
      for (auto& p : proposals) {
        auto pf = plant_fire(st, p.t, p.ct->letter.action);
        push(p.t, p.ct->letter.action, pf->first, pf->second, true, p.ct->to,
             reset(shift(st.vc, p.t), p.ct->letter.resets));
      }
      for (auto& t : cands)
        if (t <= tmax)
          for (auto& a : P.sigma_e) env_step(t, a);
      continue;
    }

    bool env_any = false;
    for (auto& t : cands)
      for (auto& a : P.sigma_e)
        if (plant_fire(st, t, a)) env_any = true;
    if (env_any) {
      for (auto& t : cands)
        for (auto& a : P.sigma_e) env_step(t, a);
      continue;
    }

    // neither a viable proposal nor an environment action: the controller has
    // lost its grip and every plant future is allowed
    for (auto& t : cands) {
      Valuation moved = shift(st.vp, t);
      for (auto& tr : P.trans)
        if (tr.from == st.q && guard_sat(tr.letter.guard, moved))
          push(t, tr.letter.action, tr.to, reset(moved, tr.letter.resets), false, 0, {});
    }
  }

  std::vector<TimedWord> out;
  for (auto& evs : words) out.push_back(TimedWord{evs});
  return out;
}

VerifyResult verify_controller(const Sts& T, const Sts& P, const FormulaPtr& phi,
                               int depth) {
  for (auto& w : closed_loop_words(T, P, depth)) {
    if (w.empty() || !membership(P, w)) continue;
    if (!evaluate(w, phi)) return {false, w};
  }
  return {true, std::nullopt};
}

}  // namespace mitl
