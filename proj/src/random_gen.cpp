#include "bqltl/random_gen.hpp"

#include <string>

namespace bqltl {

MatrixPtr random_matrix(std::mt19937& rng, const VarSet& vars, int max_size) {
  if (max_size <= 1 || vars.empty()) {
    if (vars.empty()) return rng() % 2 ? mk_true() : mk_false();
    return mk_atom(vars[rng() % vars.size()]);
  }
  switch (rng() % 10) {
    case 0: return mk_atom(vars[rng() % vars.size()]);
    case 1: return mk_not(random_matrix(rng, vars, max_size - 1));
    case 2: return mk_next(random_matrix(rng, vars, max_size - 1));
    case 3: return mk_eventually(random_matrix(rng, vars, max_size - 1));
    case 4: return mk_globally(random_matrix(rng, vars, max_size - 1));
    case 5:
      return mk_and(random_matrix(rng, vars, max_size / 2),
                    random_matrix(rng, vars, max_size / 2));
    case 6:
      return mk_or(random_matrix(rng, vars, max_size / 2),
                   random_matrix(rng, vars, max_size / 2));
    case 7:
      return mk_until(random_matrix(rng, vars, max_size / 2),
                      random_matrix(rng, vars, max_size / 2));
    case 8:
      return mk_release(random_matrix(rng, vars, max_size / 2),
                        random_matrix(rng, vars, max_size / 2));
    default:
      return mk_iff(random_matrix(rng, vars, max_size / 2),
                    random_matrix(rng, vars, max_size / 2));
  }
}

static MatrixPtr mention_all(std::mt19937& rng, MatrixPtr m, const VarSet& vars) {
  // Conjoin a tautology touching any variable the random draw missed so the
  // formula's universe is exactly `vars`.
  VarSet used = matrix_vars(m);
  for (const auto& v : vars)
    if (!vs_contains(used, v))
      m = mk_and(m, mk_or(mk_atom(v), mk_not(mk_atom(v))));
  return m;
}

QuantifiedFormula random_formula(std::mt19937& rng, int max_blocks,
                                 int max_vars_per_block, int max_matrix_size) {
  int blocks = 1 + int(rng() % std::max(1, max_blocks));
  std::vector<bool> kinds;
  bool kind = rng() % 2;
  for (int i = 0; i < blocks; ++i) {
    kinds.push_back(kind);
    kind = !kind;
  }
  int vpb = 1 + int(rng() % std::max(1, max_vars_per_block));
  return random_formula_shaped(rng, kinds, vpb, max_matrix_size);
}

QuantifiedFormula random_formula_shaped(std::mt19937& rng,
                                        const std::vector<bool>& kinds,
                                        int vars_per_block,
                                        int max_matrix_size) {
  QuantifiedFormula f;
  VarSet all;
  int counter = 0;
  for (bool exists : kinds) {
    QuantBlock b;
    b.exists = exists;
    for (int v = 0; v < vars_per_block; ++v) {
      std::string name = (exists ? "y" : "x") + std::to_string(counter++);
      b.vars.push_back(name);
    }
    b.vars = vs_make(b.vars);
    all = vs_union(all, b.vars);
    if (!f.prefix.empty() && f.prefix.back().exists == exists)
      f.prefix.back().vars = vs_union(f.prefix.back().vars, b.vars);
    else
      f.prefix.push_back(std::move(b));
  }
  f.matrix = mention_all(rng, random_matrix(rng, all, max_matrix_size), all);
  return f;
}

LassoTrace random_lasso(std::mt19937& rng, const VarSet& universe,
                        std::size_t max_stem, std::size_t max_loop) {
  std::size_t sl = rng() % (max_stem + 1);
  std::size_t ll = 1 + rng() % max_loop;
  auto rand_letter = [&] {
    Letter l;
    for (const auto& v : universe)
      if (rng() % 2) l.insert(v);
    return l;
  };
  std::vector<Letter> stem, loop;
  for (std::size_t i = 0; i < sl; ++i) stem.push_back(rand_letter());
  for (std::size_t i = 0; i < ll; ++i) loop.push_back(rand_letter());
  return LassoTrace{universe, std::move(stem), std::move(loop)};
}

}  // namespace bqltl
