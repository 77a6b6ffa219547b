#include <doctest.h>

#include <cmath>
#include <map>
#include <regex>
#include <set>

#include "detail/nnf.hpp"
#include "fairplan/automata.hpp"
#include "fairplan/error.hpp"
#include "fairplan/hardgen.hpp"
#include "fairplan/planner.hpp"
#include "fairplan/semantics.hpp"
#include "support/oracles.hpp"
#include "support/random.hpp"

using namespace fairplan;
using namespace fairplan::testing;

namespace {

AlternatingTM machine(const std::string& name) { return load_atm_file(fixture(name)); }

/// One character per trace letter: C letters c, T bits t, K bits k, # #' #'' as
/// # a b, bottom z.
char letter_class(const Domain& d, StateId s) {
  const auto& v = d.vocabulary();
  const Letter l = d.state(s);
  auto has = [&](const char* name) { return (l >> *v.index(name)) & 1; };
  if (has("bot")) return 'z';
  if (has("hash")) return '#';
  if (has("hash1")) return 'a';
  if (has("hash2")) return 'b';
  if (has("seg_t")) return 't';
  if (has("seg_k")) return 'k';
  return 'c';
}

/// Prefixes of C0 (# T #' C #'' K)* # bot*, with agent T blocks possibly
/// empty, environment T blocks nonempty and K blocks of exactly n bits.
std::regex prefix_language(int n) {
  const std::string k = "k{" + std::to_string(n) + "}";
  const std::string kp = "k{0," + std::to_string(n) + "}";
  const std::string r = "#t*ac*b" + k;
  const std::string s = "#t+ac*b" + k;
  const std::string rp = "#t*(ac*(b" + kp + ")?)?";
  const std::string sp = "#t*|#t+ac*(b" + kp + ")?";
  return std::regex("c*(" + r + s + ")*(" + rp + "|" + r + "(" + sp + ")|(" + r + ")?#z*)?");
}

Letter word_letter(const Vocabulary& v, std::initializer_list<const char*> names) {
  Letter l = 0;
  for (const char* n : names) l |= Letter{1} << *v.index(n);
  return l;
}

std::size_t dag_size(const Formula& f, const Domain& d) {
  detail::NnfDag dag(d.vocabulary(), Dialect::Ltlf);
  dag.build(f);
  return dag.size();
}

}  // namespace

TEST_CASE("machine files") {
  const auto m = machine("atm_branch.json");
  CHECK(m.existential == std::vector<std::string>{"q0"});
  CHECK(m.transitions.size() == 2);
  CHECK(atm_to_json(atm_from_json(atm_to_json(m))) == atm_to_json(m));
  CHECK(m.states().size() == 3);

  auto doc = atm_to_json(m);
  doc["format"] = "fairplan-atm/0";
  CHECK_THROWS_AS(atm_from_json(doc), ValidationError);
}

TEST_CASE("machine validation") {
  const auto base = machine("atm_universal_accept.json");
  CHECK_NOTHROW(base.validate());

  auto m = base;
  m.transitions.push_back({"qa", "0", "q1", "0", 'N'});
  CHECK_THROWS_AS(m.validate(), ValidationError);  // halting source

  m = base;
  m.transitions[0].to = "q0";
  CHECK_THROWS_AS(m.validate(), ValidationError);  // modes do not alternate

  m = base;
  std::erase_if(m.transitions, [](const AtmTransition& t) { return t.from == "q1" && t.read == "0"; });
  CHECK_THROWS_AS(m.validate(), ValidationError);  // universal state stuck on 0

  m = base;
  m.blank = "#";
  CHECK_THROWS_AS(m.validate(), ValidationError);

  m = base;
  m.initial = "q1";
  CHECK_THROWS_AS(m.validate(), ValidationError);

  m = base;
  for (int i = 0; i < 7; ++i) m.existential.push_back("e" + std::to_string(i));
  CHECK_THROWS_AS(m.validate(), ValidationError);
}

TEST_CASE("generated domain structure") {
  for (int n = 1; n <= kHardMaxN; ++n) {
    const Domain d = gen_domain(n);
    const auto& v = d.vocabulary();
    for (std::size_t s = 0; s < d.num_states(); ++s) {
      int letters = 0;
      for (const auto& l : kHardLetters) letters += static_cast<int>((d.state(static_cast<StateId>(s)) >> *v.index(l)) & 1);
      CHECK(letters == 1);
      CHECK_FALSE(d.applicable(static_cast<StateId>(s)).empty());
    }
    // Bottom is absorbing.
    for (std::size_t s = 0; s < d.num_states(); ++s) {
      if (letter_class(d, static_cast<StateId>(s)) != 'z') continue;
      for (ActionId a : d.applicable(static_cast<StateId>(s))) {
        for (StateId t : d.successors(static_cast<StateId>(s), a)) CHECK(t == static_cast<StateId>(s));
      }
    }
  }
  CHECK_THROWS_AS(gen_domain(0), CapacityError);
  CHECK_THROWS_AS(gen_domain(kHardMaxN + 1), CapacityError);
}

TEST_CASE("domain does not depend on the machine or the input") {
  const auto a = gen_instance(machine("atm_accept.json"), "0", 2);
  const auto b = gen_instance(machine("atm_universal_reject.json"), "00", 2);
  CHECK(domain_to_json(a.domain).dump() == domain_to_json(b.domain).dump());
  CHECK(domain_to_json(a.domain).dump() == domain_to_json(gen_domain(2)).dump());
  CHECK_FALSE(a.goal == b.goal);
}

TEST_CASE("every 20-step trace for n = 1 and n = 2 has the block shape") {
  for (int n : {1, 2}) {
    const Domain d = gen_domain(n);
    const std::regex shape = prefix_language(n);
    // Words over letter classes, with the domain states they can end in.
    std::map<std::string, std::set<StateId>> layer{{std::string(1, letter_class(d, d.initial())), {d.initial()}}};
    std::size_t checked = 0;
    for (int step = 1; step < 20; ++step) {
      std::map<std::string, std::set<StateId>> next;
      for (const auto& [word, states] : layer) {
        for (StateId s : states) {
          for (ActionId a : d.applicable(s)) {
            for (StateId t : d.successors(s, a)) next[word + letter_class(d, t)].insert(t);
          }
        }
      }
      layer = std::move(next);
      for (const auto& [word, states] : layer) {
        CHECK_MESSAGE(std::regex_match(word, shape), word);
        ++checked;
      }
    }
    CHECK(checked > 1000);
    // The oracle itself rejects malformed words.
    CHECK_FALSE(std::regex_match(std::string("cc#ac#"), shape));
    CHECK_FALSE(std::regex_match(std::string("c#ab") + std::string(static_cast<std::size_t>(n) + 1, 'k'), shape));
    CHECK_FALSE(std::regex_match(std::string("c#zc"), shape));
  }
}

TEST_CASE("join") {
  const auto p = Formula::atom("p");
  const auto q = Formula::atom("q");
  CHECK(join(p, q, 1) == Formula::until(Formula::lnot(p), Formula::land(p, Formula::next(q))));
  CHECK(join(p, q, 2) == join(p, join(p, q, 1), 1));
  CHECK(join(p, q, 3) == join(p, join(p, q, 2), 1));
}

TEST_CASE("challenge on handcrafted words") {
  const Domain d = gen_domain(1);
  const auto& v = d.vocabulary();
  // % 0 $ 0000 % 1 $ 0000 #'' K # bot bot bot
  auto word = [&](const char* k) {
    FiniteTrace t;
    for (auto names : std::vector<std::initializer_list<const char*>>{
             {"pct"}, {"b0"}, {"dol"}, {"b0"}, {"b0"}, {"b0"}, {"b0"}, {"pct"}, {"b1"}, {"dol"}, {"b0"},
             {"b0"}, {"b0"}, {"b0"}, {"hash2"}, {k}, {"hash"}, {"bot"}, {"bot"}, {"bot"}}) {
      t.letters.push_back(word_letter(v, names));
    }
    return t;
  };
  const Formula cha = challenge_here(1, 1);
  CHECK(word("b1").letters.size() == 20);
  CHECK(eval_ltlf_finite(word("b1"), cha, v));
  CHECK_FALSE(eval_ltlf_finite(word("b0"), cha, v));
  // Two hops need a second #''.
  CHECK_FALSE(eval_ltlf_finite(word("b1"), challenge_here(1, 2), v));
}

TEST_CASE("goal size grows linearly in n") {
  for (const char* name : {"atm_accept.json", "atm_universal_accept.json"}) {
    const auto m = machine(name);
    std::vector<double> size;
    for (int n = 1; n <= 3; ++n) size.push_back(static_cast<double>(dag_size(gen_goal(m, "0", n), gen_domain(n))));
    const double d1 = size[1] - size[0];
    const double d2 = size[2] - size[1];
    CHECK(d1 > 0);
    CHECK(d2 > 0);
    CHECK(std::abs(d2 - d1) <= 0.1 * d1);
  }
}

TEST_CASE("goal atoms all belong to the domain") {
  const auto h = gen_instance(machine("atm_universal_reject.json"), "0", 2);
  for (const auto& a : h.goal.atoms()) CHECK_MESSAGE(h.domain.vocabulary().index(a).has_value(), a);
  const auto parts = gen_goal_parts(machine("atm_universal_reject.json"), "0", 2);
  CHECK(parts.goal == Formula::implies(parts.env, parts.agent));
  CHECK(parts.goal == h.goal);
}

TEST_CASE("the environment assumption holds on every domain trace") {
  const auto m = machine("atm_universal_accept.json");
  const auto parts = gen_goal_parts(m, "0", 1);
  const Domain d = gen_domain(1);
  const DFW env = ltlf_to_dfw_on(parts.env, d);
  const Alphabet& al = env.alphabet;
  std::set<std::pair<StateId, int>> seen{{d.initial(), env.initial}};
  std::vector<std::pair<StateId, int>> work(seen.begin(), seen.end());
  while (!work.empty()) {
    const auto [s, q] = work.back();
    work.pop_back();
    for (ActionId a : d.applicable(s)) {
      const int r = env.next(q, al.index(d.letter(s, a)));
      REQUIRE(env.accepting[r]);
      for (StateId t : d.successors(s, a))
        if (seen.insert({t, r}).second) work.push_back({t, r});
    }
  }
  // Independent check with the semantics on random traces.
  Rng rng(5);
  for (int i = 0; i < 40; ++i) {
    const Lasso w = random_domain_lasso(rng, d, 30, 6);
    FiniteTrace t;
    for (std::size_t k = 0; k < 36; ++k) {
      t.letters.push_back(w.at(k));
      if (k % 7 == 6) CHECK(eval_ltlf_finite(t, parts.env, d.vocabulary()));
    }
  }
}

TEST_CASE("agent conjuncts reject a trace that stops at once") {
  const auto parts = gen_goal_parts(machine("atm_accept.json"), "0", 1);
  const Domain d = gen_domain(1);
  const auto& v = d.vocabulary();
  FiniteTrace t;
  t.letters = {word_letter(v, {"pct", "first", "do_hash"}), word_letter(v, {"hash", "odd", "do_bot"}),
               word_letter(v, {"bot", "wait"})};
  CHECK_FALSE(eval_ltlf_finite(t, parts.conf, v));
  CHECK_FALSE(eval_ltlf_finite(t, parts.acc, v));
  CHECK_FALSE(eval_ltlf_finite(t, parts.goal, v));
}

TEST_CASE("planner answer equals machine acceptance") {
  const std::vector<std::pair<const char*, bool>> cases = {{"atm_accept.json", true},
                                                           {"atm_reject.json", false},
                                                           {"atm_branch.json", true},
                                                           {"atm_universal_accept.json", true},
                                                           {"atm_universal_reject.json", false}};
  for (const auto& [name, accepts] : cases) {
    const auto h = gen_instance(machine(name), "0", 1);
    for (Fairness f : {Fairness::None, Fairness::Stochastic, Fairness::StateAction}) {
      const auto r = plan(h.domain, h.goal, {f, Mode::Sound, Dialect::Ltlf});
      CHECK_MESSAGE(r.sat == accepts, name << " " << to_string(f));
      CHECK(r.policy.has_value() == accepts);
    }
  }
}

TEST_CASE("generation guards") {
  const auto m = machine("atm_accept.json");
  CHECK_THROWS_AS(gen_goal(m, "0", 0), CapacityError);
  CHECK_THROWS_AS(gen_goal(m, "000", 1), ValidationError);  // does not fit 2 cells
  CHECK_THROWS_AS(gen_goal(m, "2", 1), ValidationError);    // not a tape letter
  CHECK(symbol_width(m) == 4);
}
