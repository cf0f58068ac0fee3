#include "mitl/bench.hpp"

#include <stdexcept>

namespace mitl {

SchedInstance sched_instance(int T, int n, int clocks) {
  if (T < 1 || n < 1 || clocks < 0)
    throw std::invalid_argument("sched_instance: need T, n >= 1 and clocks >= 0");

  SchedInstance inst;
  Sts& P = inst.plant;
  P.locs = {"idle", "pend"};
  P.initial = 0;
  P.finals = {true, false};  // a word ending on an unassigned job is not a plant word
  for (int i = 1; i <= n; ++i) P.sigma_c.push_back("assign" + std::to_string(i));
  P.sigma_e = {"job", "late"};
  P.clocks = {"y"};

  Guard sep, overdue;
  sep.atoms.push_back({"y", GCmp::Ge, Rat(1)});     // one time unit between jobs
  overdue.atoms.push_back({"y", GCmp::Gt, Rat(1)});  // the deadline has passed
  P.trans.push_back({0, {"job", sep, {"y"}}, 1});
  for (int i = 1; i <= n; ++i)
    P.trans.push_back({1, {"assign" + std::to_string(i), Guard{}, {}}, 0});
  P.trans.push_back({1, {"late", overdue, {}}, 0});

  std::vector<FormulaPtr> assigns;
  for (int i = 1; i <= n; ++i) assigns.push_back(f_atom("assign" + std::to_string(i)));
  FormulaPtr any_assign = assigns[0];
  for (size_t i = 1; i < assigns.size(); ++i) any_assign = f_or(any_assign, assigns[i]);

  Interval within_one{0, 1, true, true};
  Interval busy{0, T, true, false};
  FormulaPtr spec =
      f_wglobally(f_imp(f_atom("job"), f_wfinally(any_assign, within_one)));
  for (auto& a : assigns)
    spec = f_and(spec, f_wglobally(f_imp(a, f_not(f_finally(a, busy)))));
  inst.spec = spec;

  for (int i = 1; i <= clocks; ++i) inst.mu.clocks.push_back("z" + std::to_string(i));
  inst.mu.m = 1;
  inst.mu.K = T + 1;
  return inst;
}

}  // namespace mitl
