// ============================================================================
// formula.hpp — prenex QLTL abstract syntax, parser, and structural analysis
// ============================================================================
//
// A formula is a quantifier prefix (blocks of E/A over variable sets) applied
// to a quantifier-free LTL matrix.  Everything here is an immutable value;
// matrices are shared_ptr DAGs built once and never mutated.

#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace bqltl {

// --------------------------------------------------------------------------
// Variable sets: sorted, duplicate-free vectors of identifiers.
// --------------------------------------------------------------------------

using VarSet = std::vector<std::string>;

VarSet vs_make(std::vector<std::string> names);
bool vs_contains(const VarSet& s, const std::string& v);
VarSet vs_union(const VarSet& a, const VarSet& b);
VarSet vs_intersect(const VarSet& a, const VarSet& b);
VarSet vs_diff(const VarSet& a, const VarSet& b);
bool vs_disjoint(const VarSet& a, const VarSet& b);
bool vs_subset(const VarSet& a, const VarSet& b);  // a ⊆ b

// --------------------------------------------------------------------------
// Quantifier-free LTL matrix.
// --------------------------------------------------------------------------

enum class MOp {
  Atom,
  True,
  False,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Next,
  Until,
  Release,
  Eventually,
  Globally
};

struct Matrix;
using MatrixPtr = std::shared_ptr<const Matrix>;

struct Matrix {
  MOp op;
  std::string var;    // Atom only
  MatrixPtr lhs;      // unary operand / left operand
  MatrixPtr rhs;      // right operand of binary ops
};

MatrixPtr mk_atom(const std::string& name);
MatrixPtr mk_true();
MatrixPtr mk_false();
MatrixPtr mk_not(MatrixPtr m);
MatrixPtr mk_and(MatrixPtr a, MatrixPtr b);
MatrixPtr mk_or(MatrixPtr a, MatrixPtr b);
MatrixPtr mk_implies(MatrixPtr a, MatrixPtr b);
MatrixPtr mk_iff(MatrixPtr a, MatrixPtr b);
MatrixPtr mk_next(MatrixPtr m);
MatrixPtr mk_until(MatrixPtr a, MatrixPtr b);
MatrixPtr mk_release(MatrixPtr a, MatrixPtr b);
MatrixPtr mk_eventually(MatrixPtr m);
MatrixPtr mk_globally(MatrixPtr m);

bool matrix_equal(const MatrixPtr& a, const MatrixPtr& b);
VarSet matrix_vars(const MatrixPtr& m);
int matrix_size(const MatrixPtr& m);  // node count

// Negation normal form: negations pushed to atoms, F/G/->/<-> expanded into
// the U/R/&/| core.  Language-equivalent to the input.
MatrixPtr to_nnf(const MatrixPtr& m);

// --------------------------------------------------------------------------
// Quantifier prefix.
// --------------------------------------------------------------------------

struct QuantBlock {
  bool exists = true;  // false: universal
  VarSet vars;         // nonempty, pairwise disjoint across the prefix
};

struct QuantifiedFormula {
  std::vector<QuantBlock> prefix;  // normalized: adjacent blocks alternate
  MatrixPtr matrix;
};

// Fragment classification (drives the solver fast paths).
enum class FragmentTag { Pi0, Sigma0, Sigma1, General };

struct FragmentClass {
  FragmentTag tag = FragmentTag::General;
  // Number of E-blocks with a nonempty A-block somewhere to their left; this
  // is the length of the tree-automata peeling pipeline.
  int block_count = 0;
};

VarSet free_vars(const QuantifiedFormula& f);
VarSet bound_vars(const QuantifiedFormula& f);
VarSet all_vars(const QuantifiedFormula& f);
bool is_closed(const QuantifiedFormula& f);

// Dual prefix, negated matrix.
QuantifiedFormula negate(const QuantifiedFormula& f);

FragmentClass classify(const QuantifiedFormula& f);

// Dep^F(block): F plus all universally quantified variables strictly to the
// left of `block` in the prefix.  Throws if the block is not existential.
VarSet dep(const std::vector<QuantBlock>& prefix, std::size_t block_index,
           const VarSet& f);

// --------------------------------------------------------------------------
// Parsing and printing.
// --------------------------------------------------------------------------

struct ParseError : std::runtime_error {
  int line;
  int col;
  ParseError(const std::string& what, int line_, int col_)
      : std::runtime_error(what + " (line " + std::to_string(line_) +
                           ", col " + std::to_string(col_) + ")"),
        line(line_),
        col(col_) {}
};

// Grammar:  formula := block* matrix
//           block   := ("E"|"A") "{" var ("," var)* "}"
// Operators: true false ! & | -> <-> X F G U R, '#' comments to end of line.
// Adjacent same-kind blocks are merged; non-prenex input is rejected.
QuantifiedFormula parse(const std::string& text);

std::string print(const MatrixPtr& m);
std::string print(const QuantifiedFormula& f);

}  // namespace bqltl
