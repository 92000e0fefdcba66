#include "bqltl/trace.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace bqltl {

LassoTrace make_lasso(VarSet universe, std::vector<Letter> stem,
                      std::vector<Letter> loop) {
  if (loop.empty()) throw std::invalid_argument("lasso loop must be nonempty");
  LassoTrace pi{std::move(universe), std::move(stem), std::move(loop)};
  for (const auto* part : {&pi.stem, &pi.loop})
    for (const auto& l : *part)
      for (const auto& v : l)
        if (!vs_contains(pi.universe, v))
          throw std::invalid_argument("lasso letter mentions '" + v +
                                      "' outside the universe");
  return pi;
}

std::size_t normalize_position(const LassoTrace& pi, std::size_t i) {
  if (i < pi.stem.size()) return i;
  return pi.stem.size() + (i - pi.stem.size()) % pi.loop.size();
}

const Letter& letter(const LassoTrace& pi, std::size_t i) {
  std::size_t p = normalize_position(pi, i);
  return p < pi.stem.size() ? pi.stem[p] : pi.loop[p - pi.stem.size()];
}

static Letter filter(const Letter& l, const VarSet& keep) {
  Letter out;
  for (const auto& v : l)
    if (vs_contains(keep, v)) out.insert(v);
  return out;
}

LassoTrace project(const LassoTrace& pi, const VarSet& keep) {
  LassoTrace out;
  out.universe = vs_intersect(pi.universe, keep);
  for (const auto& l : pi.stem) out.stem.push_back(filter(l, out.universe));
  for (const auto& l : pi.loop) out.loop.push_back(filter(l, out.universe));
  return out;
}

LassoTrace project_out(const LassoTrace& pi, const VarSet& drop) {
  return project(pi, vs_diff(pi.universe, drop));
}

LassoTrace combine(const LassoTrace& a, const LassoTrace& b) {
  if (!vs_disjoint(a.universe, b.universe))
    throw std::invalid_argument("combine: overlapping universes");
  LassoTrace out;
  out.universe = vs_union(a.universe, b.universe);
  std::size_t stem = std::max(a.stem.size(), b.stem.size());
  std::size_t loop = std::lcm(a.loop.size(), b.loop.size());
  for (std::size_t i = 0; i < stem; ++i) {
    Letter l = letter(a, i);
    const Letter& r = letter(b, i);
    l.insert(r.begin(), r.end());
    out.stem.push_back(std::move(l));
  }
  for (std::size_t i = stem; i < stem + loop; ++i) {
    Letter l = letter(a, i);
    const Letter& r = letter(b, i);
    l.insert(r.begin(), r.end());
    out.loop.push_back(std::move(l));
  }
  return out;
}

LassoTrace rotate_loop(const LassoTrace& pi, std::size_t k) {
  LassoTrace out = pi;
  std::size_t n = pi.loop.size();
  for (std::size_t i = 0; i < n; ++i) out.loop[i] = pi.loop[(i + k) % n];
  return out;
}

bool lasso_equal(const LassoTrace& a, const LassoTrace& b) {
  return a.universe == b.universe && a.stem == b.stem && a.loop == b.loop;
}

// --------------------------------------------------------------------------
// Evaluation
// --------------------------------------------------------------------------

namespace {

struct Evaluator {
  const LassoTrace& pi;
  std::size_t horizon;  // scan bound for eventualities
  std::map<std::pair<const Matrix*, std::size_t>, bool> memo;

  explicit Evaluator(const LassoTrace& p)
      : pi(p), horizon(p.stem.size() + 2 * p.loop.size()) {}

  bool eval(const MatrixPtr& m, std::size_t i) {
    i = normalize_position(pi, i);
    auto key = std::make_pair(m.get(), i);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    bool v = compute(m, i);
    memo[key] = v;
    return v;
  }

  bool compute(const MatrixPtr& m, std::size_t i) {
    switch (m->op) {
      case MOp::Atom: {
        if (!vs_contains(pi.universe, m->var))
          throw std::invalid_argument("eval_ltl: unknown variable '" + m->var + "'");
        return letter(pi, i).count(m->var) != 0;
      }
      case MOp::True: return true;
      case MOp::False: return false;
      case MOp::Not: return !eval(m->lhs, i);
      case MOp::And: return eval(m->lhs, i) && eval(m->rhs, i);
      case MOp::Or: return eval(m->lhs, i) || eval(m->rhs, i);
      case MOp::Implies: return !eval(m->lhs, i) || eval(m->rhs, i);
      case MOp::Iff: return eval(m->lhs, i) == eval(m->rhs, i);
      case MOp::Next: return eval(m->lhs, i + 1);
      case MOp::Until: {
        for (std::size_t j = i; j <= i + horizon; ++j) {
          if (eval(m->rhs, j)) return true;
          if (!eval(m->lhs, j)) return false;
        }
        return false;  // lhs holds on every reachable position, rhs on none
      }
      case MOp::Release: {
        for (std::size_t j = i; j <= i + horizon; ++j) {
          if (!eval(m->rhs, j)) return false;
          if (eval(m->lhs, j)) return true;
        }
        return true;
      }
      case MOp::Eventually: {
        for (std::size_t j = i; j <= i + horizon; ++j)
          if (eval(m->lhs, j)) return true;
        return false;
      }
      case MOp::Globally: {
        for (std::size_t j = i; j <= i + horizon; ++j)
          if (!eval(m->lhs, j)) return false;
        return true;
      }
    }
    throw std::logic_error("eval: unreachable");
  }
};

}  // namespace

bool eval_ltl(const MatrixPtr& m, const LassoTrace& pi, std::size_t i) {
  Evaluator ev(pi);
  return ev.eval(m, i);
}

// --------------------------------------------------------------------------
// Enumeration
// --------------------------------------------------------------------------

static Letter nth_letter(const VarSet& universe, std::size_t bits) {
  Letter l;
  for (std::size_t i = 0; i < universe.size(); ++i)
    if (bits & (std::size_t(1) << i)) l.insert(universe[i]);
  return l;
}

std::vector<LassoTrace> enumerate_lassos(const VarSet& universe,
                                         std::size_t max_stem,
                                         std::size_t max_loop) {
  std::size_t letters = std::size_t(1) << universe.size();
  std::vector<LassoTrace> out;
  for (std::size_t sl = 0; sl <= max_stem; ++sl) {
    for (std::size_t ll = 1; ll <= max_loop; ++ll) {
      std::size_t total = sl + ll;
      std::size_t combos = 1;
      for (std::size_t i = 0; i < total; ++i) combos *= letters;
      for (std::size_t c = 0; c < combos; ++c) {
        std::vector<Letter> stem, loop;
        std::size_t rest = c;
        for (std::size_t i = 0; i < sl; ++i) {
          stem.push_back(nth_letter(universe, rest % letters));
          rest /= letters;
        }
        for (std::size_t i = 0; i < ll; ++i) {
          loop.push_back(nth_letter(universe, rest % letters));
          rest /= letters;
        }
        out.push_back(LassoTrace{universe, std::move(stem), std::move(loop)});
      }
    }
  }
  return out;
}

// --------------------------------------------------------------------------
// JSON
// --------------------------------------------------------------------------

std::string lasso_to_json(const LassoTrace& pi) {
  nlohmann::json j;
  j["universe"] = pi.universe;
  auto dump = [](const std::vector<Letter>& part) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& l : part) arr.push_back(std::vector<std::string>(l.begin(), l.end()));
    return arr;
  };
  j["stem"] = dump(pi.stem);
  j["loop"] = dump(pi.loop);
  return j.dump();
}

LassoTrace lasso_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  VarSet universe = vs_make(j.at("universe").get<std::vector<std::string>>());
  auto load = [](const nlohmann::json& arr) {
    std::vector<Letter> part;
    for (const auto& l : arr) {
      Letter letter;
      for (const auto& v : l) letter.insert(v.get<std::string>());
      part.push_back(std::move(letter));
    }
    return part;
  };
  return make_lasso(universe, load(j.at("stem")), load(j.at("loop")));
}

}  // namespace bqltl
