#pragma once

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "strongeq/strongeq.hpp"

namespace strongeq::cli {

enum ExitStatus : int {
  kSuccess = 0,
  kNegative = 1,
  kUsage = 2,
  kGuard = 3,
};

// Reports the tuple count above which `verify` insists on --long-running.
inline constexpr double kLongRunTupleThreshold = 1e9;

struct NamedCondition {
  const char* name;
  TupleShape shape;
  bool needs_canonical;
  std::function<bool(std::span<const Rule>)> predicate;
};

inline const std::vector<NamedCondition>& condition_registry() {
  static const std::vector<NamedCondition> registry = {
      {"cond_0_1_0", {0, 1, 0}, false, [](std::span<const Rule> t) { return cond_0_1_0(t[0]); }},
      {"cond_1_1_0", {1, 1, 0}, false,
       [](std::span<const Rule> t) { return cond_1_1_0(t[0], t[1]); }},
      {"s_implies", {1, 1, 0}, false, [](std::span<const Rule> t) { return s_implies(t[0], t[1]); }},
      {"cond_0_1_1", {0, 1, 1}, false,
       [](std::span<const Rule> t) { return cond_0_1_1(t[0], t[1]); }},
      {"cond_2_1_0", {2, 1, 0}, true,
       [](std::span<const Rule> t) { return cond_2_1_0(t[0], t[1], t[2]); }},
      {"cond_0_2_1", {0, 2, 1}, true,
       [](std::span<const Rule> t) { return cond_0_2_1(t[0], t[1], t[2]); }},
      {"cond_0_2_2", {0, 2, 2}, true,
       [](std::span<const Rule> t) { return cond_0_2_2(t[0], t[1], t[2], t[3]); }},
  };
  return registry;
}

inline const NamedCondition* find_condition(const std::string& name) {
  for (const auto& c : condition_registry()) {
    if (name == c.name) return &c;
  }
  return nullptr;
}

inline std::string format_set(AtomSet s, const SymbolTable& table) {
  std::string out = "{";
  bool first = true;
  bits::for_each(s, [&](Atom a) {
    if (!first) out += ", ";
    out += table.name(a);
    first = false;
  });
  return out + "}";
}

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

inline Program load_program(const std::string& path, SymbolTable& table) {
  const auto text = read_file(path);
  try {
    return parse_program(text, table);
  } catch (const ParseError& e) {
    throw ParseError(e.kind(), e.line(), e.column(), path + ":" + e.what());
  }
}

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

inline int cmd_answersets(const std::string& path, bool json, std::size_t max_atoms, Streams io) {
  SymbolTable table;
  const Program p = load_program(path, table);
  const auto sets = answer_sets(p, max_atoms);
  if (json) {
    nlohmann::json arr = nlohmann::json::array();
    for (auto s : sets) arr.push_back(table.names(s));
    io.out << arr.dump() << '\n';
  } else {
    for (auto s : sets) io.out << format_set(s, table) << '\n';
    if (sets.empty()) io.err << "no answer sets\n";
  }
  return kSuccess;
}

inline int cmd_check_se(const std::string& path1, const std::string& path2, bool json,
                        std::size_t max_atoms, Streams io) {
  SymbolTable table;
  const Program p1 = load_program(path1, table);
  const Program p2 = load_program(path2, table);
  const SEVerdict v = strongly_equivalent(p1, p2, max_atoms);
  if (json) {
    nlohmann::json j{{"strongly_equivalent", v.equivalent}};
    j["countermodel"] = v.countermodel ? to_json(*v.countermodel, table) : nlohmann::json(nullptr);
    io.out << j.dump() << '\n';
  } else if (v.equivalent) {
    io.out << "strongly equivalent\n";
  } else {
    io.out << "NOT strongly equivalent\n"
           << "countermodel: X = " << format_set(v.countermodel->x, table)
           << ", Y = " << format_set(v.countermodel->y, table) << '\n';
  }
  return v.equivalent ? kSuccess : kNegative;
}

struct SimplifyArgs {
  std::string path;
  std::string out_path;
  std::string trace_path;
  bool verify = false;
  bool json = false;
  std::size_t max_atoms = kOracleMaxAtoms;
};

inline int cmd_simplify(const SimplifyArgs& args, Streams io) {
  SymbolTable table;
  const Program p = load_program(args.path, table);
  if (args.verify && bits::size(p.atoms()) > args.max_atoms) {
    throw GuardError("simplify --verify: program has " + std::to_string(bits::size(p.atoms())) +
                     " atoms, limit is " + std::to_string(args.max_atoms));
  }
  const auto result = simplify(p);
  const std::string text = format_program(result.program, table);
  if (!args.out_path.empty()) {
    write_file(args.out_path, text);
  } else if (!args.json) {
    io.out << text;
  }
  if (!args.trace_path.empty()) write_file(args.trace_path, trace_to_json_lines(result.trace, table));

  bool verified = true;
  if (args.verify) verified = verify_simplification(p, result.program, args.max_atoms);
  if (args.json) {
    nlohmann::json rules = nlohmann::json::array();
    for (const auto& r : result.program) rules.push_back(format_rule(r, table));
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& s : result.trace) steps.push_back(to_json(s, table));
    nlohmann::json j{{"program", rules}, {"trace", steps}};
    if (args.verify) j["verified"] = verified;
    io.out << j.dump() << '\n';
  }
  if (!verified) {
    io.err << "verification failed: output is not strongly equivalent to the input\n";
    return kNegative;
  }
  return kSuccess;
}

struct VerifyArgs {
  std::vector<std::size_t> shape;
  std::size_t atoms = 3;
  std::string condition;
  bool canonical = false;
  bool modulo_iso = false;
  bool long_running = false;
  bool json = false;
  std::size_t jobs = 1;
  std::string report_path;
};

inline double estimated_tuples(std::size_t atoms, bool canonical, std::size_t arity) {
  const double per_atom = canonical ? 4.0 : 8.0;
  double rules = 1.0;
  for (std::size_t i = 0; i < atoms; ++i) rules *= per_atom;
  rules -= 1.0;
  double total = 1.0;
  for (std::size_t i = 0; i < arity; ++i) total *= rules;
  return total;
}

inline int cmd_verify(const VerifyArgs& args, Streams io) {
  const NamedCondition* cond = find_condition(args.condition);
  if (cond == nullptr) throw UsageError("unknown condition '" + args.condition + "'");
  if (args.shape.size() != 3) throw UsageError("--shape expects k,m,n");
  const TupleShape shape{args.shape[0], args.shape[1], args.shape[2]};
  if (!(shape == cond->shape)) {
    throw UsageError(std::string(cond->name) + " applies to shape " +
                     std::to_string(cond->shape.k) + "," + std::to_string(cond->shape.m) + "," +
                     std::to_string(cond->shape.n));
  }
  if (cond->needs_canonical && !args.canonical) {
    throw UsageError(std::string(cond->name) + " is stated for canonical rules; pass --canonical");
  }
  if (args.atoms > kEnumerateMaxAtoms) {
    throw GuardError("--atoms is limited to " + std::to_string(kEnumerateMaxAtoms));
  }
  if (!args.long_running &&
      estimated_tuples(args.atoms, args.canonical, shape.arity()) > kLongRunTupleThreshold) {
    throw GuardError("this enumeration exceeds 1e9 tuples; pass --long-running to run it anyway");
  }
  const auto report = test_conjecture(shape, args.atoms, cond->predicate,
                                      {args.canonical, args.modulo_iso}, args.jobs);
  const auto table = enumeration_symbols(args.atoms);
  const auto j = to_json(report, table);
  if (!args.report_path.empty()) write_file(args.report_path, j.dump(2) + "\n");
  if (args.json) {
    io.out << j.dump() << '\n';
  } else {
    io.out << cond->name << " on shape " << shape.k << "," << shape.m << "," << shape.n
           << " over " << args.atoms << " atoms: " << report.total << " tuples, "
           << report.se_positive << " strongly equivalent, " << report.condition_positive
           << " satisfy the condition, " << report.mismatch_count << " mismatches ("
           << report.elapsed.count() << " ms)\n";
    for (std::size_t i = 0; i < std::min<std::size_t>(report.mismatches.size(), 10); ++i) {
      const auto& mm = report.mismatches[i];
      io.out << "  mismatch:";
      for (const auto& r : mm.tuple) io.out << " [" << format_rule(r, table) << "]";
      io.out << " oracle=" << (mm.oracle ? "true" : "false")
             << " cond=" << (mm.condition ? "true" : "false") << '\n';
    }
  }
  return report.agrees() ? kSuccess : kNegative;
}

// Entry point shared by the binary and the tests. args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Strong equivalence of ground disjunctive logic programs", "strongeq"};
  app.require_subcommand(1);

  std::size_t max_atoms = 0;
  bool json = false;

  std::string as_path;
  auto* as = app.add_subcommand("answersets", "List the answer sets of a program");
  as->add_option("file", as_path, "Program file")->required();
  as->add_flag("--json", json, "Emit JSON");
  as->add_option("--max-atoms", max_atoms, "Atom guard (default 20)");

  std::string se_a, se_b;
  auto* se = app.add_subcommand("check-se", "Decide strong equivalence of two programs");
  se->add_option("file1", se_a, "First program")->required();
  se->add_option("file2", se_b, "Second program")->required();
  se->add_flag("--json", json, "Emit JSON");
  se->add_option("--max-atoms", max_atoms, "Atom guard (default 24)");

  SimplifyArgs sa;
  auto* simp = app.add_subcommand("simplify", "Simplify a program preserving strong equivalence");
  simp->add_option("file", sa.path, "Program file")->required();
  simp->add_option("--out", sa.out_path, "Write the simplified program here instead of stdout");
  simp->add_option("--trace", sa.trace_path, "Write the rewrite trace as JSON lines");
  simp->add_flag("--verify", sa.verify, "Check the result against the input with the oracle");
  simp->add_flag("--json", json, "Emit JSON");
  simp->add_option("--max-atoms", max_atoms, "Atom guard for --verify (default 24)");

  VerifyArgs va;
  va.jobs = std::max(1U, std::thread::hardware_concurrency());
  auto* ver = app.add_subcommand("verify", "Test a condition against the oracle exhaustively");
  ver->add_option("--shape", va.shape, "k,m,n")->required()->delimiter(',')->expected(3);
  ver->add_option("--atoms", va.atoms, "Language size (at most 7)")->required();
  ver->add_option("--condition", va.condition, "Condition name")->required();
  ver->add_flag("--canonical", va.canonical, "Enumerate canonical rules only");
  ver->add_flag("--modulo-iso", va.modulo_iso, "One tuple per isomorphism class");
  ver->add_option("--jobs", va.jobs, "Worker threads (default: all cores)");
  ver->add_option("--report", va.report_path, "Write the JSON report here");
  ver->add_flag("--long-running", va.long_running, "Allow enumerations above 1e9 tuples");
  ver->add_flag("--json", json, "Emit JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  const Streams io{out, err};
  try {
    if (as->parsed()) return cmd_answersets(as_path, json, max_atoms ? max_atoms : kAnswerSetMaxAtoms, io);
    if (se->parsed()) return cmd_check_se(se_a, se_b, json, max_atoms ? max_atoms : kOracleMaxAtoms, io);
    if (simp->parsed()) {
      sa.json = json;
      if (max_atoms) sa.max_atoms = max_atoms;
      return cmd_simplify(sa, io);
    }
    if (ver->parsed()) {
      va.json = json;
      return cmd_verify(va, io);
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const GuardError& e) {
    err << "guard exceeded: " << e.what() << '\n';
    return kGuard;
  }
  return kUsage;
}

}  // namespace strongeq::cli
