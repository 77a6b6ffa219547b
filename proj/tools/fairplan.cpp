#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fairplan/automata.hpp"
#include "fairplan/error.hpp"
#include "fairplan/hardgen.hpp"
#include "fairplan/planner.hpp"

using namespace fairplan;

namespace {

enum Exit { kOk = 0, kNegative = 1, kParse = 2, kCapacity = 3, kInternal = 4 };

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << text;
}

nlohmann::json read_json(const std::string& path) {
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("'" + path + "' is not JSON: " + e.what());
  }
}

std::string dump(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

/// The goal flag holds either formula text or the path of a file containing it.
Formula read_goal(const std::string& goal, Dialect dialect) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(goal, ec)) return parse_formula(read_file(goal), dialect);
  return parse_formula(goal, dialect);
}

Dialect parse_dialect(const std::string& text) {
  if (text == "ltl") return Dialect::Ltl;
  if (text == "ltlf") return Dialect::Ltlf;
  throw ValidationError("unknown dialect '" + text + "'");
}

std::string show(const Lasso& w, const Vocabulary& v) {
  std::string out = "prefix";
  for (Letter l : w.prefix) out += " " + v.format(l);
  out += " loop";
  for (Letter l : w.loop) out += " " + v.format(l);
  return out;
}

struct Options {
  std::string domain;
  std::string goal;
  std::string dialect = "ltl";
  std::string fairness = "state-action";
  std::string mode = "sound";
  std::string out;
  bool auto_sink = false;
  std::size_t bound = 8;
  std::uint64_t seed = 1;
  std::size_t max_states = kDefaultMaxStates;
  std::string policy;
  std::string target = "drw";
  std::string tm;
  std::string input;
  int n = 1;
  std::string out_domain;
  std::string out_goal;
};

Domain load(const Options& o) { return load_domain_file(o.domain, {o.auto_sink, false}); }

int cmd_solve(const Options& o) {
  const Domain d = load(o);
  const Dialect dialect = parse_dialect(o.dialect);
  PlanRequest req{parse_fairness(o.fairness), parse_mode(o.mode), dialect, o.max_states};
  const PlanResult r = plan(d, read_goal(o.goal, dialect), req);
  if (r.diagnostic) std::cout << "DIAGNOSTIC: naive-product reduction, not a sound answer\n";
  std::cout << "result: " << (r.sat ? "SAT" : "UNSAT") << "\n"
            << "fairness: " << to_string(req.fairness) << "\n"
            << "mode: " << to_string(req.mode) << "\n"
            << "dialect: " << to_string(dialect) << "\n"
            << "automaton: " << r.automaton_states << " states, " << r.automaton_pairs << " pairs\n"
            << "game: " << r.game_vertices << " vertices\n";
  if (r.policy) {
    std::cout << "policy memory: " << r.policy->memory_size() << "\n";
    if (!o.out.empty()) {
      write_file(o.out, dump(policy_to_json(*r.policy, d)));
      std::cout << "policy: " << o.out << "\n";
    }
  }
  return r.sat ? kOk : kNegative;
}

int cmd_verify(const Options& o) {
  const Domain d = load(o);
  const Dialect dialect = parse_dialect(o.dialect);
  const Fairness fairness = parse_fairness(o.fairness);
  const PolicyMachine policy = policy_from_json(read_json(o.policy), d);
  const VerifyReport r = verify(d, policy, read_goal(o.goal, dialect), dialect, fairness, o.bound, o.max_states);
  std::cout << "result: " << (r.pass ? "PASS" : "FAIL") << "\n"
            << "fairness: " << to_string(fairness) << "\n";
  if (fairness == Fairness::Stochastic) {
    std::cout << "bound: none (end-component audit)\n";
  } else {
    std::cout << "bound: " << o.bound << "\n"
              << "lassos checked: " << r.lassos_checked << "\n";
  }
  if (r.witness) {
    std::cout << "witness: " << show(*r.witness, d.vocabulary()) << "\n";
    if (!o.out.empty()) {
      write_file(o.out, dump(lasso_to_json(*r.witness, d.vocabulary())));
      std::cout << "witness file: " << o.out << "\n";
    }
  }
  return r.pass ? kOk : kNegative;
}

int cmd_translate(const Options& o) {
  const Dialect dialect = parse_dialect(o.dialect);
  const Formula phi = read_goal(o.goal, dialect);
  std::optional<Domain> d;
  if (!o.domain.empty()) d = load(o);
  const Alphabet alphabet = d ? Alphabet::of_domain(*d) : Alphabet::of_formula(phi);
  nlohmann::json doc;
  if (o.target == "dfw") {
    if (dialect != Dialect::Ltlf) throw ValidationError("target dfw needs dialect ltlf");
    doc = to_json(d ? ltlf_to_dfw_on(phi, *d, o.max_states) : ltlf_to_dfw(phi, alphabet, o.max_states));
  } else if (o.target == "nbw") {
    if (dialect != Dialect::Ltl) throw ValidationError("target nbw needs dialect ltl");
    doc = to_json(ltl_to_nbw(phi, alphabet, o.max_states));
  } else if (o.target == "drw") {
    doc = to_json(d ? goal_to_drw(phi, dialect, *d, o.max_states) : goal_to_drw(phi, dialect, alphabet, o.max_states));
  } else {
    throw ValidationError("unknown target '" + o.target + "'");
  }
  if (o.out.empty()) {
    std::cout << dump(doc);
  } else {
    write_file(o.out, dump(doc));
  }
  return kOk;
}

int cmd_gen_hard(const Options& o) {
  const AlternatingTM m = load_atm_file(o.tm);
  const HardInstance h = gen_instance(m, o.input, o.n);
  if (!o.out_domain.empty()) write_file(o.out_domain, dump(domain_to_json(h.domain)));
  if (!o.out_goal.empty()) write_file(o.out_goal, h.goal.to_string() + "\n");
  std::cout << "n: " << h.n << "\n"
            << "symbol width: " << h.m << "\n"
            << "dialect: " << to_string(h.dialect) << "\n"
            << "domain: " << h.domain.num_states() << " states, " << h.domain.transitions().size() << " transitions\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FOND planning under fairness"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* c) {
    c->add_option("--max-states", o.max_states, "automaton state budget");
    c->add_option("--seed", o.seed, "seed for randomized choices");
  };
  auto goal = [&](CLI::App* c, bool domain_required) {
    auto* opt = c->add_option("--domain", o.domain, "domain file");
    if (domain_required) opt->required();
    c->add_option("--goal", o.goal, "formula text or file")->required();
    c->add_option("--dialect", o.dialect, "ltl or ltlf")->check(CLI::IsMember({"ltl", "ltlf"}));
    c->add_flag("--auto-sink", o.auto_sink, "give dead-end states a dummy action into a sink");
  };
  const auto fairness = CLI::IsMember({"none", "stochastic", "state-action"});

  auto* solve = app.add_subcommand("solve", "decide a planning problem and extract a policy");
  goal(solve, true);
  solve->add_option("--fairness", o.fairness)->check(fairness);
  solve->add_option("--mode", o.mode)->check(CLI::IsMember({"sound", "naive-product"}));
  solve->add_option("--out", o.out, "policy file");
  common(solve);

  auto* ver = app.add_subcommand("verify", "audit a policy on bounded lassos");
  goal(ver, true);
  ver->add_option("--policy", o.policy, "policy file")->required();
  ver->add_option("--fairness", o.fairness)->check(fairness);
  ver->add_option("--bound", o.bound, "largest prefix and loop length");
  ver->add_option("--out", o.out, "witness file");
  common(ver);

  auto* tr = app.add_subcommand("translate", "dump the automaton of a formula");
  goal(tr, false);
  tr->add_option("--target", o.target)->check(CLI::IsMember({"dfw", "nbw", "drw"}));
  tr->add_option("--out", o.out, "automaton file");
  common(tr);

  auto* gen = app.add_subcommand("gen-hard", "domain and goal simulating an alternating machine");
  gen->add_option("--tm", o.tm, "machine file")->required();
  gen->add_option("--input", o.input, "input word");
  gen->add_option("--n", o.n, "tape has 2^n cells");
  gen->add_option("--out-domain", o.out_domain);
  gen->add_option("--out-goal", o.out_goal);
  common(gen);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }
  try {
    if (*solve) return cmd_solve(o);
    if (*ver) return cmd_verify(o);
    if (*tr) return cmd_translate(o);
    return cmd_gen_hard(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::Parse:
      case ErrorKind::Validation: return kParse;
      case ErrorKind::Capacity: return kCapacity;
      case ErrorKind::Invariant: return kInternal;
    }
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
  }
  return kInternal;
}
