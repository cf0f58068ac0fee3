#include "mitl/dcm.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mitl {

namespace {

const std::set<std::string> kReservedNames = {
    "CheckL", "CheckR", "Lose", "Win", "NilE", "NilC", "Nil", "Halt", "End"};

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

FormulaPtr disj(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) return f_false();
  FormulaPtr out = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) out = f_or(out, fs[i]);
  return out;
}

FormulaPtr conj(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) return f_true();
  FormulaPtr out = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) out = f_and(out, fs[i]);
  return out;
}

const Interval kLe1{0, 1, true, true};
const Interval kGe1{1, -1, true, false};
const Interval kLt1{0, 1, true, false};
const Interval kGt1{1, -1, false, false};
const Interval kGt0{0, -1, false, false};

}  // namespace

int ChannelMachine::state_index(const std::string& name) const {
  for (size_t i = 0; i < states.size(); ++i)
    if (states[i] == name) return (int)i;
  return -1;
}

std::string ChannelMachine::action_name(const DcmTransition& t) const {
  return t.msg + (t.write ? "!" : "?");
}

void validate_dcm(const ChannelMachine& S) {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("dcm: " + msg); };
  if (S.states.empty()) fail("no states");
  if (S.initial < 0 || S.initial >= (int)S.states.size()) fail("bad initial state");
  if (S.halt < 0 || S.halt >= (int)S.states.size()) fail("bad halting state");
  std::set<std::string> seen;
  for (auto& s : S.states) {
    if (kReservedNames.count(s)) fail("reserved state name " + s);
    if (!seen.insert(s).second) fail("duplicate state " + s);
  }
  seen.clear();
  for (auto& m : S.messages) {
    if (kReservedNames.count(m)) fail("reserved message name " + m);
    if (!seen.insert(m).second) fail("duplicate message " + m);
  }
  std::set<std::pair<int, std::string>> keys;
  std::vector<int> outgoing(S.states.size(), 0);
  std::vector<bool> has_write(S.states.size(), false);
  for (auto& t : S.trans) {
    if (t.from < 0 || t.from >= (int)S.states.size() || t.to < 0 ||
        t.to >= (int)S.states.size())
      fail("transition endpoint out of range");
    if (std::find(S.messages.begin(), S.messages.end(), t.msg) == S.messages.end())
      fail("unknown message " + t.msg);
    if (!keys.insert({t.from, S.action_name(t)}).second)
      fail("two transitions from " + S.states[t.from] + " on " + S.action_name(t));
    ++outgoing[t.from];
    if (t.write) has_write[t.from] = true;
  }
  for (size_t q = 0; q < S.states.size(); ++q) {
    if ((int)q == S.halt) {
      if (outgoing[q] > 0) fail("halting state has an outgoing transition");
    } else {
      if (outgoing[q] == 0) fail("state " + S.states[q] + " has no outgoing transition");
      if (has_write[q] && outgoing[q] > 1)
        fail("write from " + S.states[q] + " is not the only outgoing transition");
    }
  }
}

ChannelMachine parse_dcm(const std::string& text) {
  ChannelMachine S;
  std::string s_initial, s_halt;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw std::invalid_argument("dcm line " + std::to_string(lineno) + ": " + msg);
  };
  struct RawTrans {
    std::string from, action, to;
  };
  std::vector<RawTrans> raw;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = split_ws(line);
    if (toks.empty() || toks[0][0] == '#') continue;
    if (toks[0] == "states") {
      S.states.assign(toks.begin() + 1, toks.end());
    } else if (toks[0] == "initial") {
      if (toks.size() != 2) fail("expected one initial state");
      s_initial = toks[1];
    } else if (toks[0] == "halt") {
      if (toks.size() != 2) fail("expected one halting state");
      s_halt = toks[1];
    } else if (toks[0] == "messages") {
      S.messages.assign(toks.begin() + 1, toks.end());
    } else if (toks.size() == 3 && toks[1].size() > 3 &&
               toks[1].substr(0, 1) == "-" &&
               toks[1].substr(toks[1].size() - 2) == "->") {
      raw.push_back({toks[0], toks[1].substr(1, toks[1].size() - 3), toks[2]});
    } else {
      fail("unrecognised line: " + line);
    }
  }
  if (s_initial.empty()) throw std::invalid_argument("dcm: missing initial state");
  if (s_halt.empty()) throw std::invalid_argument("dcm: missing halting state");
  S.initial = S.state_index(s_initial);
  S.halt = S.state_index(s_halt);
  if (S.initial < 0) throw std::invalid_argument("dcm: unknown initial " + s_initial);
  if (S.halt < 0) throw std::invalid_argument("dcm: unknown halting " + s_halt);
  for (auto& r : raw) {
    DcmTransition t;
    t.from = S.state_index(r.from);
    t.to = S.state_index(r.to);
    if (t.from < 0) throw std::invalid_argument("dcm: unknown state " + r.from);
    if (t.to < 0) throw std::invalid_argument("dcm: unknown state " + r.to);
    if (r.action.size() < 2) throw std::invalid_argument("dcm: bad action " + r.action);
    char dir = r.action.back();
    if (dir != '!' && dir != '?')
      throw std::invalid_argument("dcm: action must end in ! or ?: " + r.action);
    t.msg = r.action.substr(0, r.action.size() - 1);
    t.write = dir == '!';
    S.trans.push_back(t);
  }
  validate_dcm(S);
  return S;
}

std::string print_dcm(const ChannelMachine& S) {
  std::ostringstream out;
  out << "states";
  for (auto& s : S.states) out << " " << s;
  out << "\ninitial " << S.states[S.initial] << "\nhalt " << S.states[S.halt]
      << "\nmessages";
  for (auto& m : S.messages) out << " " << m;
  out << "\n";
  for (auto& t : S.trans)
    out << S.states[t.from] << " -" << S.action_name(t) << "-> " << S.states[t.to]
        << "\n";
  return out.str();
}

DcmOutcome simulate(const ChannelMachine& S, int max_steps) {
  DcmOutcome out;
  std::deque<std::string> channel;
  int s = S.initial;
  out.visited.push_back(s);
  while (true) {
    if (s == S.halt) {
      out.kind = DcmOutcome::Kind::Halted;
      return out;
    }
    if (out.steps >= max_steps) {
      out.kind = DcmOutcome::Kind::RunningBeyondBound;
      return out;
    }
    size_t chosen = S.trans.size();
    for (size_t i = 0; i < S.trans.size(); ++i) {
      const auto& t = S.trans[i];
      if (t.from != s) continue;
      if (t.write || (!channel.empty() && channel.front() == t.msg)) {
        chosen = i;
        break;
      }
    }
    if (chosen == S.trans.size()) {
      out.kind = DcmOutcome::Kind::Blocked;
      out.blocked_state = s;
      return out;
    }
    const auto& t = S.trans[chosen];
    if (t.write)
      channel.push_back(t.msg);
    else
      channel.pop_front();
    out.max_occupancy = std::max(out.max_occupancy, (long long)channel.size());
    s = t.to;
    ++out.steps;
    out.visited.push_back(s);
    out.actions.push_back(chosen);
  }
}

// ---------------------------------------------------------------------------
// Formula encoding

namespace {

struct OmegaParts {
  FormulaPtr phi_e, phi_c, phi_s, phi_w, phi_r, phi_wr;
};

OmegaParts omega_parts(const ChannelMachine& S, const std::vector<std::string>& sigma_e,
                       const std::vector<std::string>& sigma_c) {
  OmegaParts p;
  std::vector<FormulaPtr> es, cs, ss, ws, rs;
  for (auto& e : sigma_e) es.push_back(f_atom(e));
  for (auto& c : sigma_c) cs.push_back(f_atom(c));
  for (auto& s : S.states) ss.push_back(f_atom(s));
  for (auto& m : S.messages) ws.push_back(f_atom(m + "!"));
  for (auto& m : S.messages) rs.push_back(f_atom(m + "?"));
  p.phi_e = disj(es);
  p.phi_c = disj(cs);
  p.phi_s = disj(ss);
  p.phi_w = disj(ws);
  p.phi_r = disj(rs);
  p.phi_wr = f_or(p.phi_w, p.phi_r);
  return p;
}

/// Every read followed by `check` sits exactly 1 t.u. after a matching write:
/// some write sees it both within 1 t.u. and at least 1 t.u. away.
FormulaPtr matched_read(const ChannelMachine& S, const std::string& check) {
  std::vector<FormulaPtr> ds;
  for (auto& m : S.messages) {
    FormulaPtr flagged = f_and(f_atom(m + "?"), f_next(f_atom(check)));
    ds.push_back(f_wfinally(f_and(f_and(f_atom(m + "!"), f_wfinally(flagged, kLe1)),
                                  f_wfinally(flagged, kGe1))));
  }
  return disj(ds);
}

}  // namespace

OmegaEncoding encode_omega(const ChannelMachine& S) {
  validate_dcm(S);
  OmegaEncoding enc;
  enc.sigma_e = S.states;
  for (auto& e : {"CheckL", "CheckR", "Lose", "NilE"}) enc.sigma_e.push_back(e);
  for (auto& m : S.messages) {
    enc.sigma_c.push_back(m + "!");
    enc.sigma_c.push_back(m + "?");
  }
  for (auto& c : {"Win", "NilC"}) enc.sigma_c.push_back(c);

  OmegaParts p = omega_parts(S, enc.sigma_e, enc.sigma_c);
  FormulaPtr s0 = f_atom(S.states[S.initial]);
  FormulaPtr halt = f_atom(S.states[S.halt]);
  FormulaPtr nil_c = f_atom("NilC"), nil_e = f_atom("NilE");
  FormulaPtr check_l = f_atom("CheckL"), check_r = f_atom("CheckR");

  // the play starts at the initial state and strictly alternates
  enc.phis.push_back(f_not(f_wuntil(nil_c, f_and(p.phi_e, f_not(s0)))));
  enc.psis.push_back(f_not(f_wuntil(nil_c, f_and(p.phi_c, f_not(nil_c)))));
  enc.phis.push_back(f_not(f_wfinally(f_and(p.phi_e, f_next(p.phi_e, kLe1)))));
  enc.psis.push_back(f_not(f_wfinally(f_and(p.phi_c, f_next(p.phi_c, kLe1)))));
  enc.phis.push_back(f_not(f_wfinally(f_and(p.phi_wr, f_next(f_atom("Win"))))));
  enc.psis.push_back(f_not(f_wfinally(
      f_and(f_and(p.phi_s, f_not(halt)), f_next(f_atom("Lose"))))));

  // both players follow the transition relation
  std::vector<FormulaPtr> c4_env;
  for (auto& t : S.trans)
    for (auto& b : enc.sigma_e) {
      if (b == S.states[t.to] || b == "CheckL" || b == "CheckR") continue;
      c4_env.push_back(f_not(f_wfinally(
          f_and(f_and(f_atom(S.states[t.from]), f_next(f_atom(S.action_name(t)))),
                f_next(f_next(f_atom(b)))))));
    }
  enc.phis.push_back(conj(c4_env));
  std::vector<FormulaPtr> c4_ctrl;
  for (size_t q = 0; q < S.states.size(); ++q) {
    if ((int)q == S.halt) continue;
    for (auto& m : S.messages)
      for (bool write : {true, false}) {
        bool present = false;
        for (auto& t : S.trans)
          present = present || (t.from == (int)q && t.msg == m && t.write == write);
        if (present) continue;
        c4_ctrl.push_back(f_not(f_wfinally(f_and(
            f_atom(S.states[q]), f_next(f_atom(m + (write ? "!" : "?")))))));
      }
  }
  enc.psis.push_back(conj(c4_ctrl));

  // after the encoding ends, only Nil actions remain
  FormulaPtr ended = f_or(f_or(f_or(f_or(halt, check_l), check_r), f_atom("Lose")),
                          f_atom("Win"));
  enc.phis.push_back(f_not(
      f_wfinally(f_and(ended, f_finally(f_and(p.phi_e, f_not(nil_e)))))));
  enc.psis.push_back(f_not(
      f_wfinally(f_and(ended, f_finally(f_and(p.phi_c, f_not(nil_c)))))));

  // environment replies instantly, controller waits a positive delay
  enc.phis.push_back(f_not(f_wfinally(f_and(p.phi_wr, f_next(p.phi_e, kGt0)))));
  enc.psis.push_back(f_wglobally(
      f_imp(f_and(f_and(p.phi_s, f_not(halt)), f_next(p.phi_wr)),
            f_next(p.phi_wr, kGt0))));

  // channel discipline, checkable by the environment
  enc.psi_back = matched_read(S, "CheckL");
  FormulaPtr th0 = f_and(p.phi_wr, f_next(check_r));
  FormulaPtr th1 = f_and(f_and(p.phi_wr, f_next(p.phi_s)), f_next(f_next(th0)));
  enc.psi_fwd_fst = f_wfinally(
      f_and(f_and(p.phi_w, f_wfinally(th1, kLt1)), f_wfinally(th0, kGe1)));
  enc.psi_fwd = f_and(
      f_not(f_wfinally(
          f_and(f_and(p.phi_w, f_wfinally(th1, kLt1)), f_wfinally(th0, kGt1)))),
      matched_read(S, "CheckR"));
  std::vector<FormulaPtr> no_check;
  for (auto& m : S.messages)
    no_check.push_back(f_not(f_wfinally(f_and(f_atom(m + "!"), f_next(check_l)))));
  enc.phis.push_back(conj(no_check));
  enc.psis.push_back(f_and(
      f_imp(f_wfinally(check_l), enc.psi_back),
      f_imp(f_and(f_wfinally(check_r), enc.psi_fwd_fst), enc.psi_fwd)));

  enc.phi = conj(enc.phis);
  enc.psi = conj(enc.psis);
  enc.omega = f_imp(enc.phi, enc.psi);
  enc.omega_live = f_imp(enc.phi, f_and(enc.psi, f_globally(f_not(halt))));
  return enc;
}

PlantEncoding encode_plant(const ChannelMachine& S) {
  validate_dcm(S);
  if (S.initial == S.halt)
    throw std::invalid_argument("dcm: initial state must differ from halting state");
  bool starts_write = false;
  for (auto& t : S.trans) starts_write = starts_write || (t.from == S.initial && t.write);
  if (!starts_write)
    throw std::invalid_argument("dcm: initial state must have an outgoing write");

  PlantEncoding enc;
  Sts& P = enc.plant;
  P.locs = S.states;
  for (size_t i = 0; i < S.trans.size(); ++i) P.locs.push_back("d" + std::to_string(i));
  P.initial = S.initial;
  P.finals.assign(P.locs.size(), false);
  P.finals[S.halt] = true;
  for (auto& m : S.messages) {
    P.sigma_c.push_back(m + "!");
    P.sigma_c.push_back(m + "?");
  }
  P.sigma_e = {"CheckL", "CheckR", "Nil", "Halt", "End"};
  P.clocks = {"x"};

  Guard pos, zero;
  pos.atoms.push_back({"x", GCmp::Gt, Rat(0)});
  zero.atoms.push_back({"x", GCmp::Eq, Rat(0)});
  std::set<std::string> rx = {"x"};
  auto edge = [&](int from, const std::string& a, const Guard& g, int to) {
    P.trans.push_back({from, {a, g, rx}, to});
  };
  for (size_t i = 0; i < S.trans.size(); ++i) {
    const auto& t = S.trans[i];
    int mid = (int)(S.states.size() + i);
    edge(t.from, S.action_name(t), pos, mid);
    if (t.to == S.halt)
      edge(mid, "Halt", zero, S.halt);
    else
      edge(mid, "Nil", zero, t.to);
    if (!t.write) edge(mid, "CheckL", zero, S.halt);
    edge(mid, "CheckR", zero, S.halt);
  }
  edge(S.halt, "End", Guard{}, S.halt);

  std::vector<std::string> dummy_e = {"CheckL", "CheckR", "Nil", "Halt", "End"};
  OmegaParts p = omega_parts(S, dummy_e, P.sigma_c);
  FormulaPtr check_r = f_atom("CheckR");
  FormulaPtr nil = f_atom("Nil");
  // with the plant forcing alternation, "next action" becomes an untimed
  // until over the padding letters
  FormulaPtr th0 = f_and(p.phi_wr, f_wuntil(p.phi_wr, check_r));
  FormulaPtr th1 = f_and(p.phi_wr,
                         f_wuntil(p.phi_wr, f_and(nil, f_wuntil(nil, th0))));
  FormulaPtr fwd_fst = f_wfinally(
      f_and(f_and(p.phi_w, f_wfinally(th1, kLt1)), f_wfinally(th0, kGe1)));
  FormulaPtr fwd = f_and(
      f_not(f_wfinally(
          f_and(f_and(p.phi_w, f_wfinally(th1, kLt1)), f_wfinally(th0, kGt1)))),
      matched_read(S, "CheckR"));
  enc.psi0_live = f_or(f_or(matched_read(S, "CheckL"),
                            f_and(f_wfinally(check_r), f_not(fwd_fst))),
                       fwd);
  enc.psi0 = f_or(enc.psi0_live, f_wfinally(f_atom("Halt")));
  return enc;
}

// ---------------------------------------------------------------------------
// Play validation

PlayReport validate_play(const ChannelMachine& S, const TimedWord& sigma) {
  PlayReport r;
  const auto& ev = sigma.events;
  size_t n = ev.size();
  // classify a letter as (message, is-write) when it is a channel action
  auto wr_of = [&](const std::string& a) -> std::optional<std::pair<std::string, bool>> {
    if (a.size() < 2 || (a.back() != '!' && a.back() != '?')) return std::nullopt;
    std::string m = a.substr(0, a.size() - 1);
    if (std::find(S.messages.begin(), S.messages.end(), m) == S.messages.end())
      return std::nullopt;
    return std::make_pair(m, a.back() == '!');
  };

  // C1: NilC* s0 a0 s1 a1 ... with each (s_i, a_i, s_{i+1}) a transition
  size_t i = 0;
  while (i < n && ev[i].first == "NilC") ++i;
  if (i < n) {
    if (ev[i].first != S.states[S.initial]) {
      r.c1 = false;
    } else {
      int cur = S.initial;
      ++i;
      while (i < n && r.c1) {
        size_t chosen = S.trans.size();
        for (size_t t = 0; t < S.trans.size(); ++t)
          if (S.trans[t].from == cur && S.action_name(S.trans[t]) == ev[i].first)
            chosen = t;
        if (chosen == S.trans.size()) {
          r.c1 = false;
          break;
        }
        cur = S.trans[chosen].to;
        ++i;
        if (i < n) {
          if (ev[i].first != S.states[cur]) {
            r.c1 = false;
            break;
          }
          ++i;
        }
      }
    }
  }

  // C2: states arrive with zero delay; write/read timestamps are distinct
  std::optional<Rat> last_wr;
  for (size_t k = 0; k < n; ++k) {
    if (S.state_index(ev[k].first) >= 0 && k > 0 && ev[k].second != ev[k - 1].second)
      r.c2 = false;
    if (wr_of(ev[k].first)) {
      if (last_wr && !(*last_wr < ev[k].second)) r.c2 = false;
      last_wr = ev[k].second;
    }
  }

  // C3 and C4: reads sit exactly 1 t.u. after their writes, and vice versa
  for (size_t k = 0; k < n; ++k) {
    auto a = wr_of(ev[k].first);
    if (!a) continue;
    auto& [msg, write] = *a;
    if (!write) {
      bool matched = false;
      for (size_t j = 0; j < k; ++j)
        matched = matched ||
                  (ev[j].first == msg + "!" && ev[j].second == ev[k].second - Rat(1));
      if (!matched) r.c3 = false;
    } else {
      bool later = false, consumed = false;
      for (size_t j = k + 1; j < n; ++j) {
        if (ev[j].second >= ev[k].second + Rat(1)) later = true;
        if (ev[j].first == msg + "?" && ev[j].second == ev[k].second + Rat(1))
          consumed = true;
      }
      if (later && !consumed) r.c4 = false;
    }
  }
  return r;
}

}  // namespace mitl
