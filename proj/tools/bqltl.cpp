// Command-line front end: satisfiability checks, the enumeration oracle,
// planning-shaped generators, randomized property suites, witness
// re-validation, and automaton exports.
//
// Exit codes: 0 Sat / success, 1 Unsat / property failure, 2 inconclusive or
// resource limit, 3 usage or parse error.

#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bqltl/errors.hpp"
#include "bqltl/random_gen.hpp"
#include "bqltl/solver.hpp"
#include "bqltl/word_automata.hpp"

using namespace bqltl;

namespace {

constexpr int kExitSat = 0;
constexpr int kExitUnsat = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitUsage = 3;

// Inline text unless the argument names an existing file.
std::string slurp(const std::string& arg) {
  std::ifstream in(arg);
  if (!in.good()) return arg;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Semantics parse_semantics(const std::string& s) {
  if (s == "classic") return Semantics::Classic;
  if (s == "behavioral") return Semantics::Behavioral;
  if (s == "weak") return Semantics::WeakBehavioral;
  throw CLI::ValidationError("--sem", "expected classic|behavioral|weak");
}

std::string family_to_json(const MealyFamily& fam) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& m : fam) arr.push_back(nlohmann::json::parse(mealy_to_json(m)));
  return arr.dump(2);
}

std::string mealy_to_dot(const MealySkolem& m, std::size_t index) {
  std::ostringstream out;
  out << "digraph machine" << index << " {\n  rankdir=LR;\n";
  std::size_t ndep = letter_count(m.dep_now);
  for (int s = 0; s < m.memory; ++s) {
    out << "  m" << s << " [shape=" << (s == m.initial ? "doublecircle" : "circle")
        << " label=\"" << s;
    for (std::uint32_t d = 0; d < ndep; ++d) {
      out << "\\n";
      for (const auto& v : letter_set(m.dep_now, d)) out << v << " ";
      out << "-> ";
      for (const auto& v : letter_set(m.block, m.output[s][d])) out << v << " ";
    }
    out << "\"];\n";
  }
  std::size_t ni = letter_count(m.inputs);
  for (int s = 0; s < m.memory; ++s)
    for (std::uint32_t a = 0; a < ni; ++a) {
      out << "  m" << s << " -> m" << m.update[s][a] << " [label=\"";
      Letter l = letter_set(m.inputs, a);
      if (l.empty()) out << "*";
      for (const auto& v : l) out << v << " ";
      out << "\"];\n";
    }
  out << "}\n";
  return out.str();
}

void print_witness(const Verdict& v, const std::string& format) {
  if (v.family) {
    if (format == "json") {
      std::cout << family_to_json(*v.family) << "\n";
    } else {
      for (std::size_t i = 0; i < v.family->size(); ++i)
        std::cout << mealy_to_dot((*v.family)[i], i);
    }
  } else if (v.witness_lasso) {
    if (format == "json") {
      std::cout << lasso_to_json(*v.witness_lasso) << "\n";
    } else {
      const auto& pi = *v.witness_lasso;
      std::cout << "digraph lasso {\n  rankdir=LR;\n";
      for (std::size_t i = 0; i < pi.num_positions(); ++i) {
        std::cout << "  p" << i << " [label=\"";
        for (const auto& var : letter(pi, i)) std::cout << var << " ";
        std::cout << "\"];\n";
        std::size_t j = i + 1 < pi.num_positions() ? i + 1 : pi.period_start();
        std::cout << "  p" << i << " -> p" << j << ";\n";
      }
      std::cout << "}\n";
    }
  }
}

int cmd_check(const std::string& input, const std::string& sem,
              const std::string& witness, const Budgets& budgets) {
  auto f = parse(slurp(input));
  SolveRequest req{f, parse_semantics(sem), budgets};
  auto rep = solve(req);
  std::cout << (rep.verdict.status == Status::Sat ? "Sat" : "Unsat") << "\n";
  if (!witness.empty() && rep.verdict.status == Status::Sat)
    print_witness(rep.verdict, witness);
  return rep.verdict.status == Status::Sat ? kExitSat : kExitUnsat;
}

int cmd_oracle(const std::string& input, const std::string& sem, int memory,
               long long cap) {
  auto f = close_formula(parse(slurp(input)));
  Mode mode = parse_semantics(sem) == Semantics::WeakBehavioral
                  ? Mode::WeakBehavioral
                  : Mode::Behavioral;
  auto v = enumerate_oracle(f, mode, memory, cap);
  switch (v.status) {
    case Status::Sat:
      std::cout << "Sat\n" << family_to_json(*v.family) << "\n";
      return kExitSat;
    case Status::Unsat:
      std::cout << "Unsat\n";
      return kExitUnsat;
    default:
      std::cout << "Unknown within memory bound " << memory << "\n";
      return kExitUnknown;
  }
}

int cmd_gen(const std::string& kind, const std::string& input, VarSet y,
            VarSet x1, VarSet x2) {
  auto parsed = parse(slurp(input));
  if (!parsed.prefix.empty())
    throw std::invalid_argument("gen: expected a quantifier-free goal matrix");
  VarSet vars = matrix_vars(parsed.matrix);
  if (!vs_subset(y, vars) || y.empty())
    throw std::invalid_argument("gen: outputs must be a nonempty subset of the matrix variables");

  QuantifiedFormula f;
  f.matrix = parsed.matrix;
  VarSet rest = vs_diff(vars, y);
  if (kind == "conformant") {
    f.prefix.push_back({true, y});
    if (!rest.empty()) f.prefix.push_back({false, rest});
  } else if (kind == "fond") {
    if (!rest.empty()) f.prefix.push_back({false, rest});
    f.prefix.push_back({true, y});
  } else {  // pond
    if (x1.empty() || x2.empty() || !vs_disjoint(x1, x2) ||
        vs_union(vs_union(x1, x2), y) != vars)
      throw std::invalid_argument("gen: --x1/--y/--x2 must partition the matrix variables");
    f.prefix = {{false, x1}, {true, y}, {false, x2}};
  }
  std::cout << print(f) << "\n";
  return kExitSat;
}

int cmd_validate(const std::string& witness_path, const std::string& input) {
  auto f = close_formula(parse(slurp(input)));
  std::string text = slurp(witness_path);
  auto j = nlohmann::json::parse(text);

  MealyFamily fam;
  if (j.is_array()) {
    for (const auto& item : j) fam.push_back(mealy_from_json(item.dump()));
  } else if (j.contains("block")) {
    fam.push_back(mealy_from_json(text));
  } else {
    // classic lasso witness: replay it as a zero-visibility machine
    fam.push_back(constant_mealy(lasso_from_json(text)));
  }
  auto r = validate(fam, f.matrix, f.prefix);
  if (r.ok) {
    std::cout << "Valid\n";
    return kExitSat;
  }
  std::cout << "Invalid\n";
  if (r.counterexample) std::cout << lasso_to_json(*r.counterexample) << "\n";
  return kExitUnsat;
}

int cmd_export(const std::string& input, const std::string& kind,
               const std::string& format, const Budgets& budgets) {
  auto f = close_formula(parse(slurp(input)));
  VarSet vars;
  for (const auto& b : f.prefix) vars = vs_union(vars, b.vars);
  Nbw a = ltl_to_nbw(f.matrix, vars);
  if (kind == "dpw") {
    Dpw d = nbw_to_dpw(a, budgets.state_cap);
    std::cout << (format == "dot" ? dpw_to_dot(d) : dpw_to_json(d)) << "\n";
  } else {
    std::cout << (format == "dot" ? nbw_to_dot(a) : nbw_to_json(a)) << "\n";
  }
  return kExitSat;
}

struct PropResult {
  int pass = 0, total = 0, skipped = 0;
  std::vector<std::string> failures;
};

int cmd_suite(unsigned seed, int n, std::vector<std::string> props,
              const Budgets& budgets) {
  if (props.empty())
    props = {"determinacy", "lattice", "fragment-collapse", "coincidence"};
  nlohmann::json summary;
  summary["seed"] = seed;
  bool all_ok = true;

  for (const auto& prop : props) {
    std::mt19937 rng(seed);
    PropResult r;
    for (int i = 0; i < n; ++i) {
      ++r.total;
      try {
        if (prop == "determinacy") {
          auto f = random_formula(rng, 2, 2, 8);
          bool pos = solve_classic(f, budgets).status == Status::Sat;
          bool neg = solve_classic(negate(f), budgets).status == Status::Sat;
          if (pos != neg) ++r.pass;
          else r.failures.push_back(print(f));
        } else if (prop == "lattice") {
          auto f = random_formula(rng, 2, 2, 8);
          auto rep = cross_check(f, budgets);
          if (rep.violations.empty()) ++r.pass;
          else r.failures.push_back(print(f) + ": " + rep.violations.front());
        } else if (prop == "fragment-collapse") {
          std::vector<std::vector<bool>> shapes = {{true}, {false}, {true, false}};
          auto f = random_formula_shaped(rng, shapes[i % 3], 1, 8);
          if (solve_behavioral(f, budgets).status ==
              solve_classic(f, budgets).status)
            ++r.pass;
          else r.failures.push_back(print(f));
        } else if (prop == "coincidence") {
          auto f = random_formula_shaped(rng, {false, true}, 1, 8);
          if (solve_behavioral(f, budgets).status ==
              solve_weak_behavioral(f, budgets).status)
            ++r.pass;
          else r.failures.push_back(print(f));
        } else {
          throw CLI::ValidationError("--props", "unknown property " + prop);
        }
      } catch (const ResourceError&) {
        ++r.skipped;
        ++r.pass;  // resource-limited cases are inconclusive, not failures
      }
    }
    summary["properties"][prop] = {{"pass", r.pass},
                                   {"total", r.total},
                                   {"skipped", r.skipped},
                                   {"failures", r.failures}};
    if (r.pass != r.total) all_ok = false;
  }
  std::cout << summary.dump(2) << "\n";
  return all_ok ? kExitSat : kExitUnsat;
}

VarSet split_list(const std::string& s) {
  VarSet out;
  std::istringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"satisfiability of quantified temporal formulas under classic, "
               "behavioral, and weak-behavioral semantics"};
  app.require_subcommand(1);

  std::string input, sem = "classic", witness, kind, format = "dot";
  std::string witness_path, y_list, x1_list, x2_list;
  Budgets budgets;
  int memory = 2;
  long long oracle_cap = 300000;
  unsigned seed = 0;
  int n = 20;
  std::vector<std::string> props;

  auto add_budgets = [&](CLI::App* c) {
    c->add_option("--state-cap", budgets.state_cap, "automaton state budget")
        ->check(CLI::PositiveNumber);
    c->add_option("--timeout", budgets.time_cap_seconds, "wall-clock budget in seconds")
        ->check(CLI::PositiveNumber);
  };

  auto* check = app.add_subcommand("check", "decide satisfiability");
  check->add_option("formula", input, "formula text or file")->required();
  check->add_option("--sem", sem, "classic|behavioral|weak");
  check->add_option("--witness", witness, "print the witness as json|dot")
      ->check(CLI::IsMember({"json", "dot"}));
  add_budgets(check);

  auto* oracle = app.add_subcommand("oracle", "bounded machine enumeration");
  oracle->add_option("formula", input)->required();
  oracle->add_option("--sem", sem, "behavioral|weak");
  oracle->add_option("--memory", memory, "memory bound per machine")
      ->check(CLI::PositiveNumber);
  oracle->add_option("--cap", oracle_cap, "candidate family budget")
      ->check(CLI::PositiveNumber);

  auto* gen = app.add_subcommand("gen", "wrap a goal matrix in a planning prefix");
  gen->add_option("matrix", input, "goal matrix text or file")->required();
  gen->add_option("--kind", kind, "conformant|fond|pond")
      ->required()
      ->check(CLI::IsMember({"conformant", "fond", "pond"}));
  gen->add_option("--y", y_list, "output variables, comma separated")->required();
  gen->add_option("--x1", x1_list, "early inputs (pond)");
  gen->add_option("--x2", x2_list, "late inputs (pond)");

  auto* suite = app.add_subcommand("suite", "randomized property suites");
  suite->add_option("--seed", seed, "generator seed");
  suite->add_option("--n", n, "cases per property")->check(CLI::PositiveNumber);
  suite->add_option("--props", props, "subset of properties")->delimiter(',');
  suite->add_option("--memory", budgets.oracle_memory_bound)->check(CLI::PositiveNumber);
  add_budgets(suite);

  auto* val = app.add_subcommand("validate", "re-check an emitted witness");
  val->add_option("witness", witness_path, "witness JSON text or file")->required();
  val->add_option("formula", input)->required();

  auto* exp = app.add_subcommand("export-automaton", "emit the matrix automaton");
  exp->add_option("formula", input)->required();
  exp->add_option("--kind", kind, "nbw|dpw")->check(CLI::IsMember({"nbw", "dpw"}));
  exp->add_option("--format", format, "dot|json")->check(CLI::IsMember({"dot", "json"}));
  add_budgets(exp);

  try {
    app.parse(argc, argv);
    if (check->parsed()) return cmd_check(input, sem, witness, budgets);
    if (oracle->parsed()) return cmd_oracle(input, sem, memory, oracle_cap);
    if (gen->parsed())
      return cmd_gen(kind, input, split_list(y_list), split_list(x1_list),
                     split_list(x2_list));
    if (suite->parsed()) return cmd_suite(seed, n, props, budgets);
    if (val->parsed()) return cmd_validate(witness_path, input);
    if (exp->parsed()) return cmd_export(input, kind, format, budgets);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;  // --help and friends are not errors
  } catch (const ResourceError& e) {
    std::cerr << e.what() << "\n";
    return kExitUnknown;
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitUnknown;
  }
  return kExitUsage;
}
