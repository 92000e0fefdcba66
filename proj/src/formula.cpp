#include "bqltl/formula.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace bqltl {

// --------------------------------------------------------------------------
// VarSet helpers
// --------------------------------------------------------------------------

VarSet vs_make(std::vector<std::string> names) {
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  return names;
}

bool vs_contains(const VarSet& s, const std::string& v) {
  return std::binary_search(s.begin(), s.end(), v);
}

VarSet vs_union(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return out;
}

VarSet vs_intersect(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

VarSet vs_diff(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return out;
}

bool vs_disjoint(const VarSet& a, const VarSet& b) {
  return vs_intersect(a, b).empty();
}

bool vs_subset(const VarSet& a, const VarSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// --------------------------------------------------------------------------
// Matrix construction
// --------------------------------------------------------------------------

static MatrixPtr mk(MOp op, std::string var, MatrixPtr l, MatrixPtr r) {
  auto m = std::make_shared<Matrix>();
  m->op = op;
  m->var = std::move(var);
  m->lhs = std::move(l);
  m->rhs = std::move(r);
  return m;
}

MatrixPtr mk_atom(const std::string& name) { return mk(MOp::Atom, name, nullptr, nullptr); }
MatrixPtr mk_true() { return mk(MOp::True, "", nullptr, nullptr); }
MatrixPtr mk_false() { return mk(MOp::False, "", nullptr, nullptr); }
MatrixPtr mk_not(MatrixPtr m) { return mk(MOp::Not, "", std::move(m), nullptr); }
MatrixPtr mk_and(MatrixPtr a, MatrixPtr b) { return mk(MOp::And, "", std::move(a), std::move(b)); }
MatrixPtr mk_or(MatrixPtr a, MatrixPtr b) { return mk(MOp::Or, "", std::move(a), std::move(b)); }
MatrixPtr mk_implies(MatrixPtr a, MatrixPtr b) { return mk(MOp::Implies, "", std::move(a), std::move(b)); }
MatrixPtr mk_iff(MatrixPtr a, MatrixPtr b) { return mk(MOp::Iff, "", std::move(a), std::move(b)); }
MatrixPtr mk_next(MatrixPtr m) { return mk(MOp::Next, "", std::move(m), nullptr); }
MatrixPtr mk_until(MatrixPtr a, MatrixPtr b) { return mk(MOp::Until, "", std::move(a), std::move(b)); }
MatrixPtr mk_release(MatrixPtr a, MatrixPtr b) { return mk(MOp::Release, "", std::move(a), std::move(b)); }
MatrixPtr mk_eventually(MatrixPtr m) { return mk(MOp::Eventually, "", std::move(m), nullptr); }
MatrixPtr mk_globally(MatrixPtr m) { return mk(MOp::Globally, "", std::move(m), nullptr); }

bool matrix_equal(const MatrixPtr& a, const MatrixPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->op != b->op || a->var != b->var) return false;
  return matrix_equal(a->lhs, b->lhs) && matrix_equal(a->rhs, b->rhs);
}

static void collect_vars(const MatrixPtr& m, std::set<std::string>& out) {
  if (!m) return;
  if (m->op == MOp::Atom) out.insert(m->var);
  collect_vars(m->lhs, out);
  collect_vars(m->rhs, out);
}

VarSet matrix_vars(const MatrixPtr& m) {
  std::set<std::string> s;
  collect_vars(m, s);
  return VarSet(s.begin(), s.end());
}

int matrix_size(const MatrixPtr& m) {
  if (!m) return 0;
  return 1 + matrix_size(m->lhs) + matrix_size(m->rhs);
}

// --------------------------------------------------------------------------
// NNF
// --------------------------------------------------------------------------

static MatrixPtr nnf(const MatrixPtr& m, bool neg);

static MatrixPtr nnf_expand(const MatrixPtr& m, bool neg) {
  switch (m->op) {
    case MOp::Eventually:  // F p == true U p
      return nnf(mk_until(mk_true(), m->lhs), neg);
    case MOp::Globally:  // G p == false R p
      return nnf(mk_release(mk_false(), m->lhs), neg);
    case MOp::Implies:
      return nnf(mk_or(mk_not(m->lhs), m->rhs), neg);
    case MOp::Iff:
      return nnf(mk_or(mk_and(m->lhs, m->rhs), mk_and(mk_not(m->lhs), mk_not(m->rhs))), neg);
    default:
      throw std::logic_error("nnf_expand: core operator");
  }
}

static MatrixPtr nnf(const MatrixPtr& m, bool neg) {
  switch (m->op) {
    case MOp::Atom:
      return neg ? mk_not(m) : m;
    case MOp::True:
      return neg ? mk_false() : mk_true();
    case MOp::False:
      return neg ? mk_true() : mk_false();
    case MOp::Not:
      return nnf(m->lhs, !neg);
    case MOp::And:
      return neg ? mk_or(nnf(m->lhs, true), nnf(m->rhs, true))
                 : mk_and(nnf(m->lhs, false), nnf(m->rhs, false));
    case MOp::Or:
      return neg ? mk_and(nnf(m->lhs, true), nnf(m->rhs, true))
                 : mk_or(nnf(m->lhs, false), nnf(m->rhs, false));
    case MOp::Next:
      return mk_next(nnf(m->lhs, neg));
    case MOp::Until:
      return neg ? mk_release(nnf(m->lhs, true), nnf(m->rhs, true))
                 : mk_until(nnf(m->lhs, false), nnf(m->rhs, false));
    case MOp::Release:
      return neg ? mk_until(nnf(m->lhs, true), nnf(m->rhs, true))
                 : mk_release(nnf(m->lhs, false), nnf(m->rhs, false));
    case MOp::Eventually:
    case MOp::Globally:
    case MOp::Implies:
    case MOp::Iff:
      return nnf_expand(m, neg);
  }
  throw std::logic_error("nnf: unreachable");
}

MatrixPtr to_nnf(const MatrixPtr& m) { return nnf(m, false); }

// --------------------------------------------------------------------------
// Prefix analysis
// --------------------------------------------------------------------------

VarSet bound_vars(const QuantifiedFormula& f) {
  VarSet out;
  for (const auto& b : f.prefix) out = vs_union(out, b.vars);
  return out;
}

VarSet free_vars(const QuantifiedFormula& f) {
  return vs_diff(matrix_vars(f.matrix), bound_vars(f));
}

VarSet all_vars(const QuantifiedFormula& f) {
  return vs_union(matrix_vars(f.matrix), bound_vars(f));
}

bool is_closed(const QuantifiedFormula& f) { return free_vars(f).empty(); }

QuantifiedFormula negate(const QuantifiedFormula& f) {
  QuantifiedFormula out;
  out.prefix = f.prefix;
  for (auto& b : out.prefix) b.exists = !b.exists;
  out.matrix = mk_not(f.matrix);
  return out;
}

FragmentClass classify(const QuantifiedFormula& f) {
  FragmentClass c;
  bool saw_forall = false;
  for (const auto& b : f.prefix) {
    if (b.exists) {
      if (saw_forall) ++c.block_count;
    } else {
      saw_forall = true;
    }
  }
  bool any_exists = false, any_forall = false;
  for (const auto& b : f.prefix) (b.exists ? any_exists : any_forall) = true;
  if (!any_exists) {
    c.tag = any_forall ? FragmentTag::Pi0 : FragmentTag::Sigma0;
  } else if (!any_forall) {
    c.tag = FragmentTag::Sigma0;
  } else if (f.prefix.size() == 2 && f.prefix[0].exists && !f.prefix[1].exists) {
    c.tag = FragmentTag::Sigma1;
  } else {
    c.tag = FragmentTag::General;
  }
  return c;
}

VarSet dep(const std::vector<QuantBlock>& prefix, std::size_t block_index,
           const VarSet& f) {
  if (block_index >= prefix.size() || !prefix[block_index].exists)
    throw std::invalid_argument("dep: block is not existential");
  VarSet out = f;
  for (std::size_t i = 0; i < block_index; ++i)
    if (!prefix[i].exists) out = vs_union(out, prefix[i].vars);
  return out;
}

// --------------------------------------------------------------------------
// Lexer
// --------------------------------------------------------------------------

namespace {

enum class Tok {
  Ident,   // [a-z][a-zA-Z0-9_]*  (not a keyword)
  KwTrue,
  KwFalse,
  Exists,  // E
  Forall,  // A
  OpX,
  OpF,
  OpG,
  OpU,
  OpR,
  Not,
  And,
  Or,
  Implies,
  Iff,
  LBrace,
  RBrace,
  LParen,
  RParen,
  Comma,
  End
};

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) { advance(); }

  const Token& peek() const { return cur_; }

  Token next() {
    Token t = cur_;
    advance();
    return t;
  }

 private:
  void advance() {
    skip_ws();
    cur_.line = line_;
    cur_.col = col_;
    if (pos_ >= s_.size()) {
      cur_.kind = Tok::End;
      cur_.text.clear();
      return;
    }
    char c = s_[pos_];
    if (std::islower(static_cast<unsigned char>(c))) {
      std::string id;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        id += take();
      cur_.text = id;
      if (id == "true")
        cur_.kind = Tok::KwTrue;
      else if (id == "false")
        cur_.kind = Tok::KwFalse;
      else
        cur_.kind = Tok::Ident;
      return;
    }
    if (std::isupper(static_cast<unsigned char>(c))) {
      std::string id;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        id += take();
      cur_.text = id;
      if (id == "E") cur_.kind = Tok::Exists;
      else if (id == "A") cur_.kind = Tok::Forall;
      else if (id == "X") cur_.kind = Tok::OpX;
      else if (id == "F") cur_.kind = Tok::OpF;
      else if (id == "G") cur_.kind = Tok::OpG;
      else if (id == "U") cur_.kind = Tok::OpU;
      else if (id == "R") cur_.kind = Tok::OpR;
      else
        throw ParseError("unknown keyword '" + id + "'", cur_.line, cur_.col);
      return;
    }
    take();
    switch (c) {
      case '{': cur_.kind = Tok::LBrace; return;
      case '}': cur_.kind = Tok::RBrace; return;
      case '(': cur_.kind = Tok::LParen; return;
      case ')': cur_.kind = Tok::RParen; return;
      case ',': cur_.kind = Tok::Comma; return;
      case '!': cur_.kind = Tok::Not; return;
      case '&': cur_.kind = Tok::And; return;
      case '|': cur_.kind = Tok::Or; return;
      case '-':
        if (pos_ < s_.size() && s_[pos_] == '>') {
          take();
          cur_.kind = Tok::Implies;
          return;
        }
        throw ParseError("expected '->'", cur_.line, cur_.col);
      case '<':
        if (pos_ + 1 < s_.size() && s_[pos_] == '-' && s_[pos_ + 1] == '>') {
          take();
          take();
          cur_.kind = Tok::Iff;
          return;
        }
        throw ParseError("expected '<->'", cur_.line, cur_.col);
      default:
        throw ParseError(std::string("unexpected character '") + c + "'",
                         cur_.line, cur_.col);
    }
  }

  void skip_ws() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') take();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        take();
      } else {
        break;
      }
    }
  }

  char take() {
    char c = s_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token cur_;
};

// Recursive descent over the precedence tower (tightest first):
//   {!, X, F, G}  >  U = R (right)  >  &  >  |  >  ->  >  <-> (right)
class Parser {
 public:
  explicit Parser(const std::string& s) : lex_(s) {}

  QuantifiedFormula parse_formula() {
    QuantifiedFormula f;
    std::set<std::string> bound;
    while (lex_.peek().kind == Tok::Exists || lex_.peek().kind == Tok::Forall) {
      Token t = lex_.next();
      QuantBlock b;
      b.exists = (t.kind == Tok::Exists);
      expect(Tok::LBrace, "'{'");
      for (;;) {
        Token v = expect(Tok::Ident, "variable");
        if (!bound.insert(v.text).second)
          throw ParseError("variable '" + v.text + "' is already bound", v.line, v.col);
        b.vars.push_back(v.text);
        if (lex_.peek().kind != Tok::Comma) break;
        lex_.next();
      }
      expect(Tok::RBrace, "'}'");
      b.vars = vs_make(std::move(b.vars));
      if (!f.prefix.empty() && f.prefix.back().exists == b.exists)
        f.prefix.back().vars = vs_union(f.prefix.back().vars, b.vars);
      else
        f.prefix.push_back(std::move(b));
    }
    f.matrix = parse_iff();
    if (lex_.peek().kind != Tok::End)
      throw ParseError("trailing input after formula", lex_.peek().line, lex_.peek().col);
    return f;
  }

 private:
  MatrixPtr parse_iff() {
    MatrixPtr l = parse_implies();
    if (lex_.peek().kind == Tok::Iff) {
      lex_.next();
      return mk_iff(l, parse_iff());
    }
    return l;
  }

  MatrixPtr parse_implies() {
    MatrixPtr l = parse_or();
    if (lex_.peek().kind == Tok::Implies) {
      lex_.next();
      return mk_implies(l, parse_implies());
    }
    return l;
  }

  MatrixPtr parse_or() {
    MatrixPtr l = parse_and();
    if (lex_.peek().kind == Tok::Or) {
      lex_.next();
      return mk_or(l, parse_or());
    }
    return l;
  }

  MatrixPtr parse_and() {
    MatrixPtr l = parse_until();
    if (lex_.peek().kind == Tok::And) {
      lex_.next();
      return mk_and(l, parse_and());
    }
    return l;
  }

  MatrixPtr parse_until() {
    MatrixPtr l = parse_unary();
    Tok k = lex_.peek().kind;
    if (k == Tok::OpU || k == Tok::OpR) {
      lex_.next();
      MatrixPtr r = parse_until();  // right-associative
      return k == Tok::OpU ? mk_until(l, r) : mk_release(l, r);
    }
    return l;
  }

  MatrixPtr parse_unary() {
    Token t = lex_.peek();
    switch (t.kind) {
      case Tok::Not: lex_.next(); return mk_not(parse_unary());
      case Tok::OpX: lex_.next(); return mk_next(parse_unary());
      case Tok::OpF: lex_.next(); return mk_eventually(parse_unary());
      case Tok::OpG: lex_.next(); return mk_globally(parse_unary());
      case Tok::KwTrue: lex_.next(); return mk_true();
      case Tok::KwFalse: lex_.next(); return mk_false();
      case Tok::Ident: lex_.next(); return mk_atom(t.text);
      case Tok::LParen: {
        lex_.next();
        MatrixPtr m = parse_iff();
        expect(Tok::RParen, "')'");
        return m;
      }
      case Tok::Exists:
      case Tok::Forall:
        throw ParseError("quantifier inside matrix: input must be prenex",
                         t.line, t.col);
      default:
        throw ParseError("expected a formula", t.line, t.col);
    }
  }

  Token expect(Tok k, const std::string& what) {
    Token t = lex_.next();
    if (t.kind != k)
      throw ParseError("expected " + what, t.line, t.col);
    return t;
  }

  Lexer lex_;
};

}  // namespace

QuantifiedFormula parse(const std::string& text) {
  return Parser(text).parse_formula();
}

// --------------------------------------------------------------------------
// Printing (minimal parentheses; must round-trip through parse)
// --------------------------------------------------------------------------

namespace {

// Precedence levels, loosest first.
int prec(MOp op) {
  switch (op) {
    case MOp::Iff: return 0;
    case MOp::Implies: return 1;
    case MOp::Or: return 2;
    case MOp::And: return 3;
    case MOp::Until:
    case MOp::Release: return 4;
    default: return 5;  // unary and leaves
  }
}

void pr(const MatrixPtr& m, int parent_prec, std::string& out) {
  int p = prec(m->op);
  bool paren = p < parent_prec;
  if (paren) out += '(';
  switch (m->op) {
    case MOp::Atom: out += m->var; break;
    case MOp::True: out += "true"; break;
    case MOp::False: out += "false"; break;
    case MOp::Not: out += '!'; pr(m->lhs, 5, out); break;
    case MOp::Next: out += "X "; pr(m->lhs, 5, out); break;
    case MOp::Eventually: out += "F "; pr(m->lhs, 5, out); break;
    case MOp::Globally: out += "G "; pr(m->lhs, 5, out); break;
    case MOp::And: pr(m->lhs, p + 1, out); out += " & "; pr(m->rhs, p, out); break;
    case MOp::Or: pr(m->lhs, p + 1, out); out += " | "; pr(m->rhs, p, out); break;
    case MOp::Implies: pr(m->lhs, p + 1, out); out += " -> "; pr(m->rhs, p, out); break;
    case MOp::Iff: pr(m->lhs, p + 1, out); out += " <-> "; pr(m->rhs, p, out); break;
    case MOp::Until: pr(m->lhs, p + 1, out); out += " U "; pr(m->rhs, p, out); break;
    case MOp::Release: pr(m->lhs, p + 1, out); out += " R "; pr(m->rhs, p, out); break;
  }
  if (paren) out += ')';
}

}  // namespace

std::string print(const MatrixPtr& m) {
  std::string out;
  pr(m, 0, out);
  return out;
}

std::string print(const QuantifiedFormula& f) {
  std::string out;
  for (const auto& b : f.prefix) {
    out += b.exists ? "E{" : "A{";
    for (std::size_t i = 0; i < b.vars.size(); ++i) {
      if (i) out += ',';
      out += b.vars[i];
    }
    out += "} ";
  }
  out += '(';
  out += print(f.matrix);
  out += ')';
  return out;
}

}  // namespace bqltl
