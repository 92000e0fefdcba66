// Shared generators for the randomized suites.  These wrap the library's
// seeded generators so unit tests and the acceptance harness sample the same
// distributions.

#pragma once

#include <random>

#include "bqltl/formula.hpp"
#include "bqltl/random_gen.hpp"
#include "bqltl/trace.hpp"

namespace bqltl::test {

inline MatrixPtr random_matrix(std::mt19937& rng, const VarSet& vars,
                               int max_size) {
  return bqltl::random_matrix(rng, vars, max_size);
}

inline QuantifiedFormula random_formula(std::mt19937& rng, int max_blocks,
                                        int max_vars_per_block, int max_size) {
  return bqltl::random_formula(rng, max_blocks, max_vars_per_block, max_size);
}

inline LassoTrace random_lasso(std::mt19937& rng, const VarSet& universe,
                               std::size_t max_stem, std::size_t max_loop) {
  return bqltl::random_lasso(rng, universe, max_stem, max_loop);
}

}  // namespace bqltl::test
