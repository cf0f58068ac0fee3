#pragma once

#include <initializer_list>
#include <random>

#include "mitl/logic.hpp"

// shared corpus generators for the oracle-equivalence suites

inline mitl::TimedWord tw(
    std::initializer_list<std::pair<const char*, mitl::Rat>> evs) {
  mitl::TimedWord w;
  for (auto& [l, t] : evs) w.events.emplace_back(l, t);
  w.check();
  return w;
}

inline mitl::FormulaPtr random_formula(std::mt19937& rng, int depth) {
  using namespace mitl;
  std::uniform_int_distribution<int> pick(0, depth == 0 ? 3 : 11);
  auto ivl = [&]() {
    Interval I;
    std::uniform_int_distribution<int> c(0, 2), k(0, 3);
    I.lo = c(rng);
    int up = c(rng);
    switch (k(rng)) {
      case 0: I.hi = -1; I.lo_closed = true; I.hi_closed = false; break;
      case 1: I.hi = I.lo + up + 1; I.lo_closed = true; I.hi_closed = true; break;
      case 2: I.hi = I.lo + up + 1; I.lo_closed = false; I.hi_closed = false; break;
      default: I.hi = I.lo + up + 1; I.lo_closed = true; I.hi_closed = false; break;
    }
    if (I.hi > 2) {  // keep constants <= 2
      I.hi = -1;
      I.hi_closed = false;
    }
    return I;
  };
  auto sub = [&]() { return random_formula(rng, depth - 1); };
  switch (pick(rng)) {
    case 0: return f_atom("a");
    case 1: return f_atom("b");
    case 2: return f_true();
    case 3: return rng() % 2 ? f_atom("a") : f_atom("b");
    case 4: return f_not(sub());
    case 5: return f_and(sub(), sub());
    case 6: return f_or(sub(), sub());
    case 7: return f_until(sub(), sub(), ivl());
    case 8: return f_dual_until(sub(), sub(), ivl());
    case 9: return f_wuntil(sub(), sub(), ivl());
    case 10: return f_wfinally(sub(), ivl());
    default: return f_wglobally(sub(), ivl());
  }
}

inline mitl::TimedWord random_word(std::mt19937& rng, int maxlen) {
  std::uniform_int_distribution<int> len(1, maxlen), num(0, 12), letter(0, 1);
  mitl::TimedWord w;
  int n = len(rng);
  mitl::Rat t(0);
  for (int i = 0; i < n; ++i) {
    t = t + mitl::Rat(num(rng), 4);
    w.events.emplace_back(letter(rng) ? "a" : "b", t);
  }
  return w;
}
