#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <random>
#include <set>

#include "mitl/plant.hpp"
#include "support.hpp"

using namespace mitl;

static std::string slurp(const std::string& name) {
  std::ifstream in(std::string(ASSET_DIR) + "/" + name);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

TEST_CASE("atomic guard enumeration") {
  CHECK(atomic_guards({{"z"}, 1, 1}).size() == 4);
  CHECK(atomic_guards({{"x"}, 2, 3}).size() == 8);
  auto none = atomic_guards({{}, 1, 0});
  REQUIRE(none.size() == 1);
  CHECK(none[0].atoms.empty());
  CHECK(atomic_guards({{"x", "y"}, 1, 1}).size() == 16);
}

TEST_CASE("atomic guards partition the valuation space") {
  Granularity mu{{"x", "y"}, 2, 3};
  auto cells = atomic_guards(mu);
  std::mt19937 rng(41);
  std::uniform_int_distribution<int> num(0, 16);
  for (int i = 0; i < 300; ++i) {
    Valuation v = {{"x", Rat(num(rng), 4)}, {"y", Rat(num(rng), 4)}};
    int hits = 0;
    for (auto& g : cells) hits += guard_sat(g, v);
    CHECK(hits == 1);
  }
}

TEST_CASE("plant file round trip") {
  Sts P = parse_sts(slurp("plant_blocks.txt"));
  CHECK(P.locs.size() == 3);
  CHECK(P.trans.size() == 8);
  CHECK(P.sigma_c == std::vector<std::string>{"b"});
  CHECK(P.sigma_e == std::vector<std::string>{"a"});
  CHECK(P.finals[P.loc_index("q0")]);
  CHECK(P.finals[P.loc_index("q2")]);
  CHECK_FALSE(P.finals[P.loc_index("q1")]);
  Sts Q = parse_sts(print_sts(P));
  CHECK(print_sts(Q) == print_sts(P));
  CHECK_NOTHROW(validate_plant(P));

  Sts C = parse_sts(slurp("controller_reset_first.txt"));
  CHECK(is_time_deterministic(C));
}

TEST_CASE("time determinism") {
  CHECK(is_time_deterministic(parse_sts(slurp("plant_blocks.txt"))));
  CHECK(is_time_deterministic(parse_sts(slurp("plant_trivial.txt"))));
  Sts bad = parse_sts(
      "alphabet C: a; E: b\nclocks x\ninitial q0\nfinal q0\n"
      "q0 -a[x<=1]-> q0\nq0 -a[x>=1]-> q0\nq0 -b-> q0\n");
  CHECK_FALSE(is_time_deterministic(bad));  // overlap at x=1
}

TEST_CASE("runs and membership on the block plant") {
  Sts P = parse_sts(slurp("plant_blocks.txt"));
  auto r1 = run(P, tw({{"a", Rat(0)}, {"a", Rat(1, 2)}, {"b", Rat(1, 2)}}));
  REQUIRE(r1);
  CHECK(P.locs[r1->first] == "q0");
  CHECK(r1->second.at("x") == Rat(0));

  auto r2 = run(P, tw({{"a", Rat(0)}, {"a", Rat(3, 2)}}));
  REQUIRE(r2);
  CHECK(P.locs[r2->first] == "q2");
  CHECK(r2->second.at("x") == Rat(0));

  auto r3 = run(P, TimedWord{});
  REQUIRE(r3);
  CHECK(r3->first == P.initial);

  CHECK(membership(P, tw({{"a", Rat(0)}, {"a", Rat(1, 2)}, {"b", Rat(1, 2)}})));
  CHECK_FALSE(membership(P, tw({{"a", Rat(0)}})));
  CHECK(membership(P, TimedWord{}));
}

TEST_CASE("enabled delay sets") {
  Sts C = parse_sts(slurp("controller_reset_first.txt"));
  int l1 = C.loc_index("l1");
  Valuation v = {{"z", Rat(3, 10)}};
  bool saw_b = false;
  for (auto& [idx, d] : enabled(C, l1, v)) {
    if (C.trans[idx].letter.action != "b") continue;
    saw_b = true;
    CHECK(d.lo == Rat(7, 10));
    CHECK(d.hi == Rat(7, 10));
    CHECK(d.contains(Rat(7, 10)));
    CHECK_FALSE(d.contains(Rat(1, 2)));
  }
  CHECK(saw_b);

  Guard top;
  auto dt = guard_delays(top, v);
  REQUIRE(dt);
  CHECK(dt->hi_inf);
  CHECK(dt->contains(Rat(100)));

  Guard lt1;
  lt1.atoms.push_back({"z", GCmp::Lt, Rat(1)});
  CHECK_FALSE(guard_delays(lt1, {{"z", Rat(2)}}).has_value());
}

TEST_CASE("enabled is consistent with guard satisfaction") {
  Sts P = parse_sts(slurp("plant_blocks.txt"));
  std::mt19937 rng(43);
  std::uniform_int_distribution<int> num(0, 12), loc(0, 2);
  for (int i = 0; i < 300; ++i) {
    int q = loc(rng);
    Valuation v = {{"x", Rat(num(rng), 4)}};
    Rat t(num(rng), 4);
    auto en = enabled(P, q, v);
    for (size_t idx = 0; idx < P.trans.size(); ++idx) {
      if (P.trans[idx].from != q) continue;
      bool sat = guard_sat(P.trans[idx].letter.guard, shift(v, t));
      bool listed = false;
      for (auto& [j, d] : en)
        if (j == idx && d.contains(t)) listed = true;
      CHECK(listed == sat);
    }
  }
}

// the block-structure description of the plant language, written directly
static bool blocks_predicate(const TimedWord& w) {
  if (w.empty()) return true;
  bool in_block = false, fresh = false;
  Rat block_start(0);
  for (auto& [letter, tau] : w.events) {
    if (letter == "b") {
      in_block = false;
      fresh = false;
    } else if (!in_block) {
      in_block = true;
      block_start = tau;
      fresh = false;
    } else if (tau - block_start <= Rat(1)) {
      fresh = false;
    } else {
      block_start = tau;  // new block, gap > 1 from the previous block start
      fresh = true;
    }
  }
  return w.events.back().first == "b" || fresh;
}

TEST_CASE("block plant language matches its description") {
  Sts P = parse_sts(slurp("plant_blocks.txt"));
  std::mt19937 rng(47);
  for (int i = 0; i < 500; ++i) {
    TimedWord w = random_word(rng, 6);
    CHECK(membership(P, w) == blocks_predicate(w));
  }
}

// set-based non-deterministic interpreter, used as an oracle for run/membership
static bool brute_membership(const Sts& T, const TimedWord& w) {
  std::vector<std::pair<int, Valuation>> states = {{T.initial, zero_valuation(T.clocks)}};
  Rat prev(0);
  for (auto& [letter, tau] : w.events) {
    Rat d = tau - prev;
    prev = tau;
    std::vector<std::pair<int, Valuation>> next;
    for (auto& [loc, v] : states) {
      Valuation moved = shift(v, d);
      for (auto& tr : T.trans)
        if (tr.from == loc && tr.letter.action == letter &&
            guard_sat(tr.letter.guard, moved))
          next.emplace_back(tr.to, reset(moved, tr.letter.resets));
    }
    states = std::move(next);
    if (states.empty()) return false;
  }
  for (auto& [loc, v] : states)
    if (T.finals[loc]) return true;
  return false;
}

static Sts random_deterministic_ta(std::mt19937& rng) {
  Sts T;
  std::uniform_int_distribution<int> nloc(1, 4);
  int n = nloc(rng);
  for (int i = 0; i < n; ++i) T.locs.push_back("p" + std::to_string(i));
  T.initial = 0;
  T.finals.resize(n);
  for (int i = 0; i < n; ++i) T.finals[i] = rng() % 2;
  T.sigma_c = {"b"};
  T.sigma_e = {"a"};
  T.clocks = {"x"};
  auto cells = atomic_guards({{"x"}, 1, 1});
  std::uniform_int_distribution<int> tgt(0, n - 1);
  for (int q = 0; q < n; ++q)
    for (const char* act : {"a", "b"})
      for (auto& cell : cells) {
        if (rng() % 10 < 3) continue;
        Transition tr;
        tr.from = q;
        tr.to = tgt(rng);
        tr.letter.action = act;
        tr.letter.guard = cell;  // distinct cells are disjoint: time-determinism
        if (rng() % 2) tr.letter.resets.insert("x");
        T.trans.push_back(tr);
      }
  return T;
}

TEST_CASE("run agrees with a brute-force interpreter") {
  std::mt19937 rng(53);
  for (int i = 0; i < 40; ++i) {
    Sts T = random_deterministic_ta(rng);
    REQUIRE(is_time_deterministic(T));
    for (int j = 0; j < 25; ++j) {
      TimedWord w = random_word(rng, 5);
      CHECK(membership(T, w) == brute_membership(T, w));
    }
  }
}

TEST_CASE("plant validation rejects blocking plants") {
  // q1 is always entered with x > 1, where its only guard can never hold again
  Sts blocking = parse_sts(
      "alphabet C: a; E: b\nclocks x\ninitial q0\nfinal q0\n"
      "q0 -a[x>1]-> q1\nq1 -a[x<1]-> q1\n");
  CHECK_THROWS(validate_plant(blocking));

  Sts overlap = parse_sts(
      "alphabet C: a; E: b\nclocks x\ninitial q0\nfinal q0\n"
      "q0 -a[x<=1]-> q0\nq0 -a[x>=1]-> q0\n");
  CHECK_THROWS(validate_plant(overlap));

  // x = 0 guards are fine when each entry to the location resets x
  Sts tight = parse_sts(
      "alphabet C: a; E: b\nclocks x\ninitial q0\nfinal q0\n"
      "q0 -a[x>0]/reset x-> q1\nq1 -b[x=0]/reset x-> q0\n");
  CHECK_NOTHROW(validate_plant(tight));
}

TEST_CASE("parser diagnostics") {
  CHECK_THROWS(parse_sts("initial q0\nq0 -zap-> q0\n"));          // missing alphabet
  CHECK_THROWS(parse_sts("alphabet C: a; E: b\nq0 -a-> q0\n"));   // missing initial
  // an undeclared guard clock is fine for a controller (it may observe plant
  // clocks) but makes the system invalid as a plant
  Sts foreign = parse_sts(
      "alphabet C: a; E: b\ninitial q0\nfinal q0\nq0 -a[y<1]-> q0\n");
  CHECK_THROWS(validate_plant(foreign));
}
