#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <deque>

#include "mitl/dcm.hpp"
#include "support.hpp"

using namespace mitl;

static const char* kTwoStep =
    "states s0 s1 shalt\n"
    "initial s0\n"
    "halt shalt\n"
    "messages m\n"
    "s0 -m!-> s1\n"
    "s1 -m?-> shalt\n";

// two messages in flight: exercises fifo order in the encoding
static const char* kFifo =
    "states s0 s1 s2 s3 shalt\n"
    "initial s0\n"
    "halt shalt\n"
    "messages a b\n"
    "s0 -a!-> s1\n"
    "s1 -b!-> s2\n"
    "s2 -a?-> s3\n"
    "s3 -b?-> shalt\n";

static const char* kTwoPhase =
    "states s0 s1 s2 s3 shalt\n"
    "initial s0\n"
    "halt shalt\n"
    "messages m n\n"
    "s0 -m!-> s1\n"
    "s1 -m?-> s2\n"
    "s2 -n!-> s3\n"
    "s3 -n?-> shalt\n";

TEST_CASE("machine file round trip and validation") {
  ChannelMachine S = parse_dcm(kTwoStep);
  CHECK(S.states.size() == 3);
  CHECK(S.messages == std::vector<std::string>{"m"});
  CHECK(S.trans.size() == 2);
  CHECK(S.trans[0].write);
  CHECK_FALSE(S.trans[1].write);
  CHECK(print_dcm(parse_dcm(print_dcm(S))) == print_dcm(S));

  // write must be the only outgoing transition
  CHECK_THROWS(parse_dcm(
      "states s0 shalt\ninitial s0\nhalt shalt\nmessages m\n"
      "s0 -m!-> shalt\ns0 -m?-> shalt\n"));
  // one transition per source and action
  CHECK_THROWS(parse_dcm(
      "states s0 s1 shalt\ninitial s0\nhalt shalt\nmessages m\n"
      "s0 -m?-> s1\ns0 -m?-> shalt\ns1 -m!-> shalt\n"));
  // the halting state has no outgoing transition
  CHECK_THROWS(parse_dcm(
      "states s0 shalt\ninitial s0\nhalt shalt\nmessages m\n"
      "s0 -m!-> shalt\nshalt -m!-> s0\n"));
  // and is the only dead end
  CHECK_THROWS(parse_dcm(
      "states s0 s1 shalt\ninitial s0\nhalt shalt\nmessages m\n"
      "s0 -m!-> s1\n"));
  CHECK_THROWS(parse_dcm(
      "states s0 shalt\ninitial s0\nhalt shalt\nmessages m\n"
      "s0 -k!-> shalt\n"));  // unknown message
  CHECK_THROWS(parse_dcm(
      "states s0 Nil shalt\ninitial s0\nhalt shalt\nmessages m\n"
      "s0 -m!-> Nil\nNil -m?-> shalt\n"));  // reserved state name
}

TEST_CASE("simulation outcomes") {
  DcmOutcome halted = simulate(parse_dcm(kTwoStep), 100);
  CHECK(halted.kind == DcmOutcome::Kind::Halted);
  CHECK(halted.steps == 2);
  CHECK(halted.max_occupancy == 1);
  CHECK(halted.visited == std::vector<int>{0, 1, 2});

  ChannelMachine loop = parse_dcm(
      "states s0 shalt\ninitial s0\nhalt shalt\nmessages m\ns0 -m!-> s0\n");
  DcmOutcome running = simulate(loop, 50);
  CHECK(running.kind == DcmOutcome::Kind::RunningBeyondBound);
  CHECK(running.steps == 50);
  CHECK(running.max_occupancy == 50);  // the channel just grows

  ChannelMachine stuck = parse_dcm(
      "states s0 shalt\ninitial s0\nhalt shalt\nmessages m\ns0 -m?-> shalt\n");
  DcmOutcome blocked = simulate(stuck, 50);
  CHECK(blocked.kind == DcmOutcome::Kind::Blocked);
  CHECK(blocked.blocked_state == 0);
  CHECK(blocked.steps == 0);

  DcmOutcome fifo = simulate(parse_dcm(kFifo), 100);
  CHECK(fifo.kind == DcmOutcome::Kind::Halted);
  CHECK(fifo.steps == 4);
  CHECK(fifo.max_occupancy == 2);

  // mismatched head also blocks: the machine wants b but a is at the head
  ChannelMachine mism = parse_dcm(
      "states s0 s1 shalt\ninitial s0\nhalt shalt\nmessages a b\n"
      "s0 -a!-> s1\ns1 -b?-> shalt\n");
  DcmOutcome bad = simulate(mism, 50);
  CHECK(bad.kind == DcmOutcome::Kind::Blocked);
  CHECK(bad.blocked_state == 1);
  CHECK(bad.steps == 1);
}

TEST_CASE("simulation is deterministic") {
  for (const char* text : {kTwoStep, kFifo, kTwoPhase}) {
    ChannelMachine S = parse_dcm(text);
    DcmOutcome a = simulate(S, 64), b = simulate(S, 64);
    CHECK(a.kind == b.kind);
    CHECK(a.visited == b.visited);
    CHECK(a.actions == b.actions);
  }
}

// left-associated disjunction, mirroring the encoder's building order
static FormulaPtr disj(const std::vector<std::string>& atoms) {
  FormulaPtr out = f_atom(atoms[0]);
  for (size_t i = 1; i < atoms.size(); ++i) out = f_or(out, f_atom(atoms[i]));
  return out;
}

TEST_CASE("formula encoding structure") {
  ChannelMachine S = parse_dcm(kTwoStep);
  OmegaEncoding enc = encode_omega(S);
  REQUIRE(enc.phis.size() == 7);
  REQUIRE(enc.psis.size() == 7);
  CHECK(enc.sigma_e ==
        std::vector<std::string>{"s0", "s1", "shalt", "CheckL", "CheckR", "Lose", "NilE"});
  CHECK(enc.sigma_c == std::vector<std::string>{"m!", "m?", "Win", "NilC"});

  // with one message, a write or read must be answered with zero delay
  FormulaPtr phi_e = disj(enc.sigma_e);
  FormulaPtr phi_wr = f_or(f_atom("m!"), f_atom("m?"));
  Interval gt0{0, -1, false, false};
  CHECK(formula_equal(enc.phis[5],
                      f_not(f_wfinally(f_and(phi_wr, f_next(phi_e, gt0))))));

  CHECK(formula_equal(
      enc.psis[6],
      f_and(f_imp(f_wfinally(f_atom("CheckL")), enc.psi_back),
            f_imp(f_and(f_wfinally(f_atom("CheckR")), enc.psi_fwd_fst),
                  enc.psi_fwd))));

  CHECK(formula_equal(enc.omega, f_imp(enc.phi, enc.psi)));
  CHECK(formula_equal(
      enc.omega_live,
      f_imp(enc.phi, f_and(enc.psi, f_globally(f_not(f_atom("shalt")))))));

  for (auto& f : {enc.omega, enc.omega_live}) {
    FragmentReport rep = classify_fragment(f);
    CHECK(rep.mitl);  // no singular intervals anywhere in the encoding
  }
}

TEST_CASE("plant encoding") {
  ChannelMachine S = parse_dcm(kTwoStep);
  PlantEncoding enc = encode_plant(S);
  const Sts& P = enc.plant;
  CHECK(P.locs.size() == 5);  // three states plus one waypoint per transition
  CHECK(P.locs[P.initial] == "s0");
  CHECK(P.finals[P.loc_index("shalt")]);
  CHECK(P.sigma_c == std::vector<std::string>{"m!", "m?"});
  CHECK(P.sigma_e ==
        std::vector<std::string>{"CheckL", "CheckR", "Nil", "Halt", "End"});

  auto has_edge = [&](const char* from, const char* act, const char* guard,
                      const char* to) {
    for (auto& t : P.trans)
      if (t.from == P.loc_index(from) && t.to == P.loc_index(to) &&
          t.letter.action == act && print_guard(t.letter.guard) == guard &&
          t.letter.resets == std::set<std::string>{"x"})
        return true;
    return false;
  };
  CHECK(has_edge("s0", "m!", "x>0", "d0"));
  CHECK(has_edge("d0", "Nil", "x=0", "s1"));
  CHECK(has_edge("s1", "m?", "x>0", "d1"));
  CHECK(has_edge("d1", "Halt", "x=0", "shalt"));
  CHECK(has_edge("d1", "CheckL", "x=0", "shalt"));  // reads can be challenged
  CHECK_FALSE(has_edge("d0", "CheckL", "x=0", "shalt"));  // writes cannot
  CHECK(has_edge("d0", "CheckR", "x=0", "shalt"));
  CHECK(has_edge("d1", "CheckR", "x=0", "shalt"));
  bool end_loop = false;
  for (auto& t : P.trans)
    end_loop = end_loop || (t.from == P.loc_index("shalt") &&
                            t.to == P.loc_index("shalt") && t.letter.action == "End" &&
                            t.letter.guard.atoms.empty());
  CHECK(end_loop);

  CHECK(is_time_deterministic(P));
  CHECK_NOTHROW(validate_plant(P));
  for (const char* text : {kFifo, kTwoPhase}) {
    PlantEncoding e = encode_plant(parse_dcm(text));
    CHECK(is_time_deterministic(e.plant));
    CHECK_NOTHROW(validate_plant(e.plant));
    CHECK(formula_equal(e.psi0, f_or(e.psi0_live, f_wfinally(f_atom("Halt")))));
  }

  // the initial state must open with a write
  CHECK_THROWS(encode_plant(parse_dcm(
      "states s0 shalt\ninitial s0\nhalt shalt\nmessages m\ns0 -m?-> shalt\n")));
}

TEST_CASE("play validation") {
  ChannelMachine S = parse_dcm(kTwoStep);
  TimedWord good = tw({{"s0", Rat(0)},
                       {"m!", Rat(1, 2)},
                       {"s1", Rat(1, 2)},
                       {"m?", Rat(3, 2)},
                       {"shalt", Rat(3, 2)}});
  PlayReport ok = validate_play(S, good);
  CHECK(ok.c1);
  CHECK(ok.c2);
  CHECK(ok.c3);
  CHECK(ok.c4);
  CHECK(ok.all());

  TimedWord early = tw({{"s0", Rat(0)},
                        {"m!", Rat(1, 2)},
                        {"s1", Rat(1, 2)},
                        {"m?", Rat(7, 5)},
                        {"shalt", Rat(7, 5)}});
  PlayReport bad = validate_play(S, early);
  CHECK(bad.c1);
  CHECK(bad.c2);
  CHECK_FALSE(bad.c3);

  CHECK(validate_play(S, TimedWord{}).all());

  // leading controller padding is allowed
  TimedWord padded = tw({{"NilC", Rat(0)}, {"s0", Rat(1)}, {"m!", Rat(3, 2)}});
  CHECK(validate_play(S, padded).c1);

  // wrong transition order breaks the sequencing condition
  TimedWord wrong = tw({{"s0", Rat(0)}, {"m?", Rat(1, 2)}});
  CHECK_FALSE(validate_play(S, wrong).c1);
  TimedWord wrong2 = tw({{"s1", Rat(0)}, {"m?", Rat(1, 2)}});
  CHECK_FALSE(validate_play(S, wrong2).c1);

  // delayed state arrival breaks the zero-delay condition
  TimedWord late_state =
      tw({{"s0", Rat(0)}, {"m!", Rat(1, 2)}, {"s1", Rat(3, 4)}});
  CHECK_FALSE(validate_play(S, late_state).c2);

  // an unconsumed write one time unit before later activity breaks C4
  TimedWord unread = tw({{"s0", Rat(0)},
                         {"m!", Rat(1, 2)},
                         {"s1", Rat(1, 2)},
                         {"m!", Rat(2)}});
  CHECK_FALSE(validate_play(S, unread).c4);
}

// faithful timing of a halting run: states at zero delay, each read exactly
// one time unit after its write, writes squeezed before the next forced read
static TimedWord faithful_play(const ChannelMachine& S, const DcmOutcome& out) {
  TimedWord w;
  Rat now(0);
  w.events.emplace_back(S.states[out.visited[0]], now);
  std::deque<Rat> pending;
  for (size_t k = 0; k < out.actions.size(); ++k) {
    const DcmTransition& t = S.trans[out.actions[k]];
    Rat at;
    if (t.write) {
      Rat upper = pending.empty() ? now + Rat(1) : pending.front() + Rat(1);
      at = now + (upper - now) / Rat(2);
      pending.push_back(at);
    } else {
      at = pending.front() + Rat(1);
      pending.pop_front();
    }
    w.events.emplace_back(S.action_name(t), at);
    w.events.emplace_back(S.states[t.to], at);
    now = at;
  }
  w.check();
  return w;
}

TEST_CASE("faithful plays satisfy the encoding; perturbed reads falsify it") {
  for (const char* text : {kTwoStep, kFifo, kTwoPhase}) {
    ChannelMachine S = parse_dcm(text);
    DcmOutcome out = simulate(S, 8);
    REQUIRE(out.kind == DcmOutcome::Kind::Halted);
    TimedWord play = faithful_play(S, out);
    CHECK(validate_play(S, play).all());

    OmegaEncoding enc = encode_omega(S);
    CHECK(evaluate(play, enc.phi));
    CHECK(evaluate(play, enc.psi));
    CHECK(evaluate(play, enc.omega));

    int perturbed = 0;
    for (size_t k = 0; k < play.events.size(); ++k) {
      if (play.events[k].first.back() != '?') continue;
      for (int sign : {1, -1}) {
        Rat at = play.events[k].second + Rat(sign, 10);
        if (k > 0 && !(play.events[k - 1].second < at)) continue;
        TimedWord cheat;
        cheat.events.assign(play.events.begin(), play.events.begin() + k);
        cheat.events.emplace_back(play.events[k].first, at);
        cheat.events.emplace_back("CheckL", at);
        cheat.check();
        ++perturbed;
        CHECK_FALSE(evaluate(cheat, enc.psi_back));
        CHECK_FALSE(evaluate(cheat, enc.psis[6]));
        CHECK_FALSE(evaluate(cheat, enc.psi));
      }
    }
    CHECK(perturbed >= 2);
  }
}
