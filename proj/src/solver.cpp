#include "bqltl/solver.hpp"

#include <algorithm>
#include <stdexcept>

#include "bqltl/errors.hpp"
#include "bqltl/games.hpp"
#include "bqltl/tree_automata.hpp"
#include "bqltl/word_automata.hpp"

namespace bqltl {

void StageLog::note(std::string name, int size) {
  auto now = std::chrono::steady_clock::now();
  if (start_ == std::chrono::steady_clock::time_point{}) start_ = last_ = now;
  StageRecord r;
  r.name = std::move(name);
  r.size = size;
  r.seconds = std::chrono::duration<double>(now - last_).count();
  last_ = now;
  stages.push_back(std::move(r));
  if (time_cap_seconds > 0 &&
      std::chrono::duration<double>(now - start_).count() > time_cap_seconds)
    throw ResourceError("time budget", stages.back().name);
}

namespace {

VarSet universal_vars(const std::vector<QuantBlock>& prefix) {
  VarSet u;
  for (const auto& b : prefix)
    if (!b.exists) u = vs_union(u, b.vars);
  return u;
}

VarSet existential_vars(const std::vector<QuantBlock>& prefix) {
  VarSet e;
  for (const auto& b : prefix)
    if (b.exists) e = vs_union(e, b.vars);
  return e;
}

VarSet prefix_vars(const std::vector<QuantBlock>& prefix) {
  return vs_union(universal_vars(prefix), existential_vars(prefix));
}

std::uint32_t restrict_letter(const VarSet& from, std::uint32_t idx, const VarSet& to) {
  Letter full = letter_set(from, idx);
  Letter out;
  for (const auto& v : full)
    if (vs_contains(to, v)) out.insert(v);
  return letter_index(to, out);
}

}  // namespace

QuantifiedFormula close_formula(const QuantifiedFormula& f) {
  VarSet free = free_vars(f);
  if (free.empty()) return f;
  QuantifiedFormula g = f;
  if (!g.prefix.empty() && g.prefix.front().exists)
    g.prefix.front().vars = vs_union(g.prefix.front().vars, free);
  else
    g.prefix.insert(g.prefix.begin(), QuantBlock{true, free});
  return g;
}

// --------------------------------------------------------------------------
// Classic semantics
// --------------------------------------------------------------------------

Verdict solve_classic(const QuantifiedFormula& f0, const Budgets& budgets,
                      StageLog* log) {
  StageLog local;
  if (!log) log = &local;
  log->time_cap_seconds = std::max(log->time_cap_seconds, budgets.time_cap_seconds);

  QuantifiedFormula f = close_formula(f0);
  Nbw a = ltl_to_nbw(f.matrix, prefix_vars(f.prefix));
  log->note("matrix automaton", a.num_states);

  Verdict v;
  for (std::size_t i = f.prefix.size(); i-- > 0;) {
    const auto& b = f.prefix[i];
    if (b.exists) {
      if (i == 0) {
        // emptiness before the last projection yields the witness lasso
        auto e = emptiness(a);
        v.status = e.empty ? Status::Unsat : Status::Sat;
        if (!e.empty) v.witness_lasso = e.witness;
        return v;
      }
      a = prune(project_exists(a, b.vars));
    } else {
      a = complement(a, budgets.state_cap);
      log->note("complement", a.num_states);
      a = prune(project_exists(a, b.vars));
      a = complement(a, budgets.state_cap);
      log->note("complement", a.num_states);
    }
    log->note("block eliminated", a.num_states);
  }
  v.status = emptiness(a).empty ? Status::Unsat : Status::Sat;
  return v;
}

// --------------------------------------------------------------------------
// Behavioral semantics
// --------------------------------------------------------------------------

namespace {

// Folds a machine for the outermost existential block into the arena: the
// product tracks the tree node feeding the block's letter to the automaton.
Dpw fold_tree(const Dpw& d, const RegularTree& theta, int state_cap) {
  Dpw out;
  out.alphabet_vars = vs_diff(d.alphabet_vars, theta.label_vars);
  out.num_letters = letter_count(out.alphabet_vars);
  long long size = (long long)d.num_states * theta.num_states;
  if (state_cap > 0 && size > state_cap)
    throw ResourceError("machine folding", std::to_string(size) + " states");
  out.num_states = int(size);
  out.initial = d.initial * theta.num_states + theta.initial;
  out.delta.assign(out.num_states, std::vector<int>(out.num_letters));
  out.color.resize(out.num_states);
  for (int q = 0; q < d.num_states; ++q)
    for (int mem = 0; mem < theta.num_states; ++mem) {
      int s = q * theta.num_states + mem;
      out.color[s] = d.color[q];
      for (std::uint32_t l = 0; l < out.num_letters; ++l) {
        int mem2 = theta.next[mem][restrict_letter(out.alphabet_vars, l,
                                                   theta.dir_vars)];
        Letter full = letter_set(out.alphabet_vars, l);
        for (const auto& v : letter_set(theta.label_vars, theta.label[mem2]))
          full.insert(v);
        int q2 = d.delta[q][letter_index(d.alphabet_vars, full)];
        out.delta[s][l] = q2 * theta.num_states + mem2;
      }
    }
  return out;
}

struct PeelResult {
  bool sat = false;
  MealyFamily family;
  std::optional<RegularTree> outer_tree;
};

// Innermost-first peeling over the existential blocks of `prefix`, then
// recursion with the extracted outermost machine folded into the arena.
PeelResult peel(const std::vector<QuantBlock>& prefix, const Dpw& d,
                const Budgets& budgets, StageLog* log, bool top_level) {
  std::vector<std::size_t> ex;
  for (std::size_t i = 0; i < prefix.size(); ++i)
    if (prefix[i].exists) ex.push_back(i);
  if (ex.empty()) return {true, {}, std::nullopt};  // arena already universal

  VarSet univ = universal_vars(prefix);
  TreeAutomaton a = build_synthesis_apt(d, univ, existential_vars(prefix));
  log->note("synthesis automaton", a.num_states);

  VarSet inner_dep = dep(prefix, ex.back(), {});
  if (inner_dep != univ) {
    a = change(a, {}, inner_dep);
    log->note("direction restriction", a.num_states);
  }
  for (std::size_t j = ex.size(); j-- > 1;) {
    a = ndet(a, budgets.state_cap);
    log->note("alternation removal", a.num_states);
    a = change(a, prefix[ex[j]].vars, dep(prefix, ex[j - 1], {}));
    log->note("block peeled", a.num_states);
  }

  auto e = apt_emptiness(a, budgets.state_cap);
  log->note("pipeline emptiness", a.num_states);
  if (e.empty) {
    if (!top_level)
      throw std::logic_error("peel: extracted machine has no extension");
    return {false, {}, std::nullopt};
  }

  RegularTree theta = *e.witness;
  std::vector<QuantBlock> rest = prefix;
  rest.erase(rest.begin() + ex.front());
  auto sub = peel(rest, fold_tree(d, theta, budgets.state_cap), budgets, log,
                  /*top_level=*/false);
  PeelResult r;
  r.sat = true;
  r.family.push_back(mealy_from_tree(theta));
  r.family.insert(r.family.end(), sub.family.begin(), sub.family.end());
  r.outer_tree = std::move(theta);
  return r;
}

void check_witness(const MealyFamily& family, const QuantifiedFormula& f,
                   Mode mode) {
  if (!check_conformance(family, f.prefix, mode))
    throw std::logic_error("solver produced a non-conformant machine family");
  if (!validate(family, f.matrix, f.prefix).ok)
    throw std::logic_error("solver produced an invalid machine family");
}

}  // namespace

Verdict solve_behavioral(const QuantifiedFormula& f0, const Budgets& budgets,
                         StageLog* log) {
  StageLog local;
  if (!log) log = &local;
  log->time_cap_seconds = std::max(log->time_cap_seconds, budgets.time_cap_seconds);

  QuantifiedFormula f = close_formula(f0);
  auto cls = classify(f);

  if (cls.tag != FragmentTag::General) {
    // Pi0 / Sigma0 / Sigma1 coincide with the classic semantics; a leading
    // existential witness lasso becomes a zero-visibility machine.
    Verdict v = solve_classic(f, budgets, log);
    if (v.status == Status::Sat) {
      MealyFamily fam;
      if (!f.prefix.empty() && f.prefix.front().exists) {
        if (!v.witness_lasso)
          throw std::logic_error("classic Sat without a leading witness");
        fam.push_back(constant_mealy(*v.witness_lasso));
      }
      check_witness(fam, f, Mode::Behavioral);
      v.family = std::move(fam);
    }
    return v;
  }

  Dpw d = nbw_to_dpw(ltl_to_nbw(f.matrix, prefix_vars(f.prefix)),
                     budgets.state_cap);
  log->note("matrix arena", d.num_states);

  if (f.prefix.size() == 2 && !f.prefix.front().exists) {
    // one dependency step: decide directly on the synthesis automaton
    auto a = build_synthesis_apt(d, f.prefix[0].vars, f.prefix[1].vars);
    auto e = apt_emptiness(a, budgets.state_cap);
    log->note("synthesis emptiness", a.num_states);
    Verdict v;
    v.status = e.empty ? Status::Unsat : Status::Sat;
    if (!e.empty) {
      v.tree = e.witness;
      MealyFamily fam{mealy_from_tree(*e.witness)};
      check_witness(fam, f, Mode::Behavioral);
      v.family = std::move(fam);
    }
    return v;
  }

  auto r = peel(f.prefix, d, budgets, log, /*top_level=*/true);
  Verdict v;
  v.status = r.sat ? Status::Sat : Status::Unsat;
  if (r.sat) {
    check_witness(r.family, f, Mode::Behavioral);
    v.family = std::move(r.family);
    v.tree = std::move(r.outer_tree);
  }
  return v;
}

// --------------------------------------------------------------------------
// Weak-behavioral semantics
// --------------------------------------------------------------------------

namespace {

// Repackages the Even team's positional strategy as machines whose memory is
// the arena state; earlier blocks' letters are reconstructed in prefix order.
MealyFamily wb_family(const MultiParityGame& m, const TeamStrategy& ts,
                      const std::vector<QuantBlock>& prefix) {
  VarSet univ = universal_vars(prefix);
  int n = m.arena.num_states;

  // packed letter bits of blocks 0..upto given the universal assignment
  auto packed_upto = [&](int q, const Letter& uvals, std::size_t upto) {
    std::uint32_t packed = 0;
    for (std::size_t i = 0; i <= upto; ++i) {
      std::uint32_t a = 0;
      if (m.blocks[i].exists) {
        a = ts.choice[i][(std::size_t(q) << m.shift[i]) + packed];
      } else {
        for (std::size_t j = 0; j < m.blocks[i].vars.size(); ++j)
          if (uvals.count(m.blocks[i].vars[j])) a |= std::uint32_t(1) << j;
      }
      packed |= a << m.shift[i];
    }
    return packed;
  };

  MealyFamily fam;
  for (std::size_t b = 0; b < prefix.size(); ++b) {
    if (!prefix[b].exists) continue;
    MealySkolem ms;
    ms.block = prefix[b].vars;
    ms.inputs = univ;
    ms.dep_now = dep(prefix, b, {});
    ms.memory = n;
    ms.initial = m.arena.initial;
    std::size_t ni = letter_count(ms.inputs);
    std::size_t ndep = letter_count(ms.dep_now);
    ms.update.assign(n, std::vector<int>(ni));
    ms.output.assign(n, std::vector<std::uint32_t>(ndep));
    for (int q = 0; q < n; ++q) {
      for (std::uint32_t dl = 0; dl < ndep; ++dl) {
        std::uint32_t packed = packed_upto(q, letter_set(ms.dep_now, dl), b);
        std::uint32_t local = (packed >> m.shift[b]) & m.mask[b];
        Letter yl;
        for (std::size_t j = 0; j < ms.block.size(); ++j)
          if (local & (std::uint32_t(1) << j)) yl.insert(ms.block[j]);
        ms.output[q][dl] = letter_index(ms.block, yl);
      }
      for (std::uint32_t ul = 0; ul < ni; ++ul) {
        std::uint32_t packed =
            packed_upto(q, letter_set(ms.inputs, ul), prefix.size() - 1);
        std::uint32_t al = 0;
        for (std::size_t i = 0; i < m.blocks.size(); ++i)
          for (std::size_t j = 0; j < m.bit[i].size(); ++j)
            if (packed & (std::uint32_t(1) << (m.shift[i] + int(j))))
              al |= std::uint32_t(1) << m.bit[i][j];
        ms.update[q][ul] = m.arena.delta[q][al];
      }
    }
    fam.push_back(std::move(ms));
  }
  return fam;
}

}  // namespace

Verdict solve_weak_behavioral(const QuantifiedFormula& f0, const Budgets& budgets,
                              StageLog* log) {
  StageLog local;
  if (!log) log = &local;
  log->time_cap_seconds = std::max(log->time_cap_seconds, budgets.time_cap_seconds);

  QuantifiedFormula f = close_formula(f0);
  Dpw d = nbw_to_dpw(ltl_to_nbw(f.matrix, prefix_vars(f.prefix)),
                     budgets.state_cap);
  log->note("matrix arena", d.num_states);

  auto m = build_multi_game(d, f.prefix);
  auto sg = sequentialize(m);
  log->note("round game", int(sg.game.pos.size()));
  auto sol = zielonka_solve(sg.game);

  Verdict v;
  if (sol.winner[sg.initial] != 0) {
    v.status = Status::Unsat;
    return v;
  }
  v.status = Status::Sat;
  auto ts = extract_team_strategy(m, sg, sol);
  if (!ts) throw std::logic_error("winning position without a team strategy");
  MealyFamily fam = wb_family(m, *ts, f.prefix);
  check_witness(fam, f, Mode::WeakBehavioral);
  v.family = std::move(fam);
  return v;
}

// --------------------------------------------------------------------------
// Entry point and cross-checking
// --------------------------------------------------------------------------

SolveReport solve(const SolveRequest& req) {
  SolveReport rep;
  StageLog log;
  log.time_cap_seconds = req.budgets.time_cap_seconds;
  switch (req.semantics) {
    case Semantics::Classic:
      rep.verdict = solve_classic(req.formula, req.budgets, &log);
      break;
    case Semantics::Behavioral:
      rep.verdict = solve_behavioral(req.formula, req.budgets, &log);
      break;
    case Semantics::WeakBehavioral:
      rep.verdict = solve_weak_behavioral(req.formula, req.budgets, &log);
      break;
  }
  rep.stages = std::move(log.stages);
  return rep;
}

CrossCheckReport cross_check(const QuantifiedFormula& f0, const Budgets& budgets,
                             bool run_oracle) {
  QuantifiedFormula f = close_formula(f0);
  CrossCheckReport rep;
  auto& bad = rep.violations;

  Verdict vc, vb, vw;
  auto guard = [&](Status& slot, auto&& fn) {
    try {
      slot = fn();
    } catch (const ResourceError&) {
      slot = Status::Unknown;
    }
  };
  guard(rep.classic, [&] { return (vc = solve_classic(f, budgets)).status; });
  guard(rep.classic_negation,
        [&] { return solve_classic(negate(f), budgets).status; });
  guard(rep.behavioral,
        [&] { return (vb = solve_behavioral(f, budgets)).status; });
  guard(rep.weak_behavioral,
        [&] { return (vw = solve_weak_behavioral(f, budgets)).status; });

  auto known = [](Status s) { return s != Status::Unknown; };

  if (known(rep.classic) && known(rep.classic_negation) &&
      (rep.classic == Status::Sat) == (rep.classic_negation == Status::Sat))
    bad.push_back("determinacy: formula and negation agree classically");
  if (rep.behavioral == Status::Sat && rep.classic == Status::Unsat)
    bad.push_back("lattice: behavioral Sat but classic Unsat");
  if (rep.behavioral == Status::Sat && rep.weak_behavioral == Status::Unsat)
    bad.push_back("lattice: behavioral Sat but weak-behavioral Unsat");
  if (classify(f).tag != FragmentTag::General && known(rep.classic) &&
      known(rep.behavioral) && rep.classic != rep.behavioral)
    bad.push_back("fragment: behavioral differs from classic");
  if (f.prefix.size() == 2 && !f.prefix.front().exists &&
      known(rep.behavioral) && known(rep.weak_behavioral) &&
      rep.behavioral != rep.weak_behavioral)
    bad.push_back("single step: behavioral differs from weak-behavioral");

  if (vc.status == Status::Sat && f.prefix.size() == 1 && f.prefix[0].exists &&
      vc.witness_lasso && !eval_ltl(f.matrix, *vc.witness_lasso, 0))
    bad.push_back("witness: classic lasso falsifies the matrix");
  if (vb.status == Status::Sat &&
      (!vb.family || !check_conformance(*vb.family, f.prefix, Mode::Behavioral) ||
       !validate(*vb.family, f.matrix, f.prefix).ok))
    bad.push_back("witness: behavioral family missing or invalid");
  if (vw.status == Status::Sat &&
      (!vw.family ||
       !check_conformance(*vw.family, f.prefix, Mode::WeakBehavioral) ||
       !validate(*vw.family, f.matrix, f.prefix).ok))
    bad.push_back("witness: weak-behavioral family missing or invalid");

  if (run_oracle) {
    auto oracle = [&](Mode mode) -> std::optional<Status> {
      try {
        return enumerate_oracle(f, mode, budgets.oracle_memory_bound).status;
      } catch (const ResourceError&) {
        return Status::Unknown;
      }
    };
    rep.oracle_behavioral = oracle(Mode::Behavioral);
    rep.oracle_weak_behavioral = oracle(Mode::WeakBehavioral);
    auto agree = [&](std::optional<Status> o, Status s, const char* name) {
      if (!o || *o == Status::Unknown || s == Status::Unknown) return;
      if (*o != s) bad.push_back(std::string("oracle: disagrees with ") + name);
    };
    agree(rep.oracle_behavioral, rep.behavioral, "the behavioral solver");
    agree(rep.oracle_weak_behavioral, rep.weak_behavioral,
          "the weak-behavioral solver");
  }
  return rep;
}

}  // namespace bqltl
