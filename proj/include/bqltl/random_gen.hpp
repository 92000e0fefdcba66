// Seeded random generation of matrices, prefixes, and lassos.  Used by the
// `suite` command and by the randomized test suites; fully deterministic for
// a fixed seed.

#pragma once

#include <random>

#include "bqltl/formula.hpp"
#include "bqltl/trace.hpp"

namespace bqltl {

// Random matrix over `vars` with at most `max_size` operator/leaf nodes.
MatrixPtr random_matrix(std::mt19937& rng, const VarSet& vars, int max_size);

// Random closed formula: up to `max_blocks` quantifier blocks of up to
// `max_vars_per_block` fresh variables each, matrix mentioning every bound
// variable at least once where possible.
QuantifiedFormula random_formula(std::mt19937& rng, int max_blocks,
                                 int max_vars_per_block, int max_matrix_size);

// Random closed formula with a fixed prefix shape; kinds[i] true = exists.
QuantifiedFormula random_formula_shaped(std::mt19937& rng,
                                        const std::vector<bool>& kinds,
                                        int vars_per_block,
                                        int max_matrix_size);

LassoTrace random_lasso(std::mt19937& rng, const VarSet& universe,
                        std::size_t max_stem, std::size_t max_loop);

}  // namespace bqltl
