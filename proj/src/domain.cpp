#include "fairplan/domain.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <queue>
#include <set>

#include "fairplan/error.hpp"

namespace fairplan {

namespace {

std::vector<std::string> concat(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::string> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

constexpr const char* kSinkFluent = "_sink";
constexpr const char* kDummyAction = "_dummy";

}  // namespace

Domain::Domain(std::vector<std::string> fluents, std::vector<std::string> action_vars,
               std::vector<Letter> states, std::vector<Letter> actions, StateId initial,
               std::vector<Transition> transitions, Options options)
    : fluents_(std::move(fluents)),
      action_vars_(std::move(action_vars)),
      states_(std::move(states)),
      actions_(std::move(actions)),
      initial_(initial),
      transitions_(std::move(transitions)) {
  for (const auto& f : fluents_) {
    if (std::find(action_vars_.begin(), action_vars_.end(), f) != action_vars_.end()) {
      throw ValidationError("proposition '" + f + "' is both a fluent and an action variable");
    }
  }
  if (states_.empty()) throw ValidationError("domain has no states");
  if (initial_ < 0 || static_cast<std::size_t>(initial_) >= states_.size()) {
    throw ValidationError("initial state out of range");
  }
  for (const auto& t : transitions_) {
    if (t.from < 0 || t.to < 0 || static_cast<std::size_t>(t.from) >= states_.size() ||
        static_cast<std::size_t>(t.to) >= states_.size() || t.action < 0 ||
        static_cast<std::size_t>(t.action) >= actions_.size()) {
      throw ValidationError("transition endpoint out of range");
    }
  }

  if (options.auto_sink) {
    std::vector<char> has_action(states_.size(), 0);
    for (const auto& t : transitions_) has_action[t.from] = 1;
    if (std::find(has_action.begin(), has_action.end(), 0) != has_action.end()) {
      const Letter sink_bit = Letter{1} << fluents_.size();
      fluents_.push_back(kSinkFluent);
      // Shift action letters past the new fluent bit.
      for (auto& a : actions_) a <<= 1;
      const Letter dummy_bit = Letter{1} << (fluents_.size() + action_vars_.size());
      action_vars_.push_back(kDummyAction);
      const auto sink = static_cast<StateId>(states_.size());
      states_.push_back(sink_bit);
      const auto dummy = static_cast<ActionId>(actions_.size());
      actions_.push_back(dummy_bit);
      for (std::size_t s = 0; s < has_action.size(); ++s) {
        if (!has_action[s]) transitions_.push_back({static_cast<StateId>(s), dummy, sink});
      }
      transitions_.push_back({sink, dummy, sink});
    }
  }

  vocab_ = Vocabulary(concat(fluents_, action_vars_));
  fluent_mask_ = fluents_.size() == 64 ? ~Letter{0} : (Letter{1} << fluents_.size()) - 1;
  for (auto s : states_) {
    if (s & ~fluent_mask_) throw ValidationError("state uses a non-fluent proposition");
  }
  for (auto a : actions_) {
    if (a & fluent_mask_) throw ValidationError("action uses a fluent");
  }
  {
    auto sorted = states_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw ValidationError("duplicate state");
    }
    sorted = actions_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw ValidationError("duplicate action");
    }
  }
  std::sort(transitions_.begin(), transitions_.end());
  transitions_.erase(std::unique(transitions_.begin(), transitions_.end()), transitions_.end());

  if (options.reachable_only) {
    std::vector<std::vector<StateId>> out(states_.size());
    for (const auto& t : transitions_) out[t.from].push_back(t.to);
    std::vector<int> remap(states_.size(), -1);
    std::vector<StateId> order{initial_};
    remap[initial_] = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (StateId t : out[order[i]]) {
        if (remap[t] < 0) {
          remap[t] = static_cast<int>(order.size());
          order.push_back(t);
        }
      }
    }
    // Keep the original relative order of the surviving states.
    std::sort(order.begin(), order.end());
    for (std::size_t i = 0; i < order.size(); ++i) remap[order[i]] = static_cast<int>(i);
    std::vector<Letter> kept;
    for (StateId s : order) kept.push_back(states_[s]);
    std::vector<Transition> kept_tr;
    for (const auto& t : transitions_) {
      if (remap[t.from] >= 0) kept_tr.push_back({remap[t.from], t.action, remap[t.to]});
    }
    states_ = std::move(kept);
    transitions_ = std::move(kept_tr);
    initial_ = remap[initial_];
  }
  index();
  for (std::size_t s = 0; s < states_.size(); ++s) {
    if (applicable_[s].empty()) {
      throw ValidationError("state " + describe_state(static_cast<StateId>(s)) +
                            " has no applicable action");
    }
  }
}

void Domain::index() {
  succ_.assign(states_.size() * actions_.size(), {});
  applicable_.assign(states_.size(), {});
  for (const auto& t : transitions_) {
    auto& v = succ_[static_cast<std::size_t>(t.from) * actions_.size() + t.action];
    if (v.empty()) applicable_[t.from].push_back(t.action);
    v.push_back(t.to);
  }
  for (auto& a : applicable_) std::sort(a.begin(), a.end());
}

bool Domain::has_transition(StateId s, ActionId a, StateId t) const {
  const auto& v = successors(s, a);
  return std::binary_search(v.begin(), v.end(), t);
}

std::vector<Letter> Domain::realizable_letters() const {
  std::vector<Letter> out;
  for (std::size_t s = 0; s < states_.size(); ++s) {
    for (ActionId a : applicable_[s]) out.push_back(letter(static_cast<StateId>(s), a));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int Domain::find_state(Letter fluents) const {
  auto it = std::find(states_.begin(), states_.end(), fluents);
  return it == states_.end() ? -1 : static_cast<int>(it - states_.begin());
}

int Domain::find_action(Letter vars) const {
  auto it = std::find(actions_.begin(), actions_.end(), vars);
  return it == actions_.end() ? -1 : static_cast<int>(it - actions_.begin());
}

std::pair<StateId, ActionId> Domain::decode(Letter letter) const {
  const int s = find_state(letter & fluent_mask_);
  const int a = find_action(letter & ~fluent_mask_);
  if (s < 0 || a < 0 || successors(s, a).empty()) return {-1, -1};
  return {s, a};
}

// ---------------------------------------------------------------------------
// Documents

namespace {

std::vector<std::string> string_list(const nlohmann::json& j, const char* what) {
  if (!j.is_array()) throw ValidationError(std::string(what) + " must be an array");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw ValidationError(std::string(what) + " must contain strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

Letter letter_of(const Vocabulary& vocab, const nlohmann::json& j, Letter allowed, const char* what) {
  const Letter l = vocab.letter(string_list(j, what));
  if (l & ~allowed) throw ValidationError(std::string(what) + " mixes fluents and action variables");
  return l;
}

void check_format(const nlohmann::json& doc, const char* expected) {
  if (!doc.is_object()) throw ValidationError("document must be a JSON object");
  if (!doc.contains("format") || doc["format"] != expected) {
    throw ValidationError(std::string("expected \"format\": \"") + expected + "\"");
  }
}

nlohmann::json props_json(const Vocabulary& vocab, Letter l) { return vocab.props(l); }

}  // namespace

Domain load_domain(const nlohmann::json& doc, Domain::Options options) {
  check_format(doc, kDomainFormat);
  for (const char* key : {"fluents", "action_vars", "init", "states", "actions", "transitions"}) {
    if (!doc.contains(key)) throw ValidationError(std::string("missing field '") + key + "'");
  }
  auto fluents = string_list(doc["fluents"], "fluents");
  auto action_vars = string_list(doc["action_vars"], "action_vars");
  for (const auto& f : fluents) {
    if (std::find(action_vars.begin(), action_vars.end(), f) != action_vars.end()) {
      throw ValidationError("proposition '" + f + "' is both a fluent and an action variable");
    }
  }
  const Vocabulary vocab(concat(fluents, action_vars));
  const Letter fmask = (Letter{1} << fluents.size()) - 1;
  const Letter amask = ~fmask;

  std::vector<Letter> states;
  for (const auto& s : doc["states"]) states.push_back(letter_of(vocab, s, fmask, "state"));
  std::vector<Letter> actions;
  for (const auto& a : doc["actions"]) actions.push_back(letter_of(vocab, a, amask, "action"));

  auto state_id = [&](const nlohmann::json& j) {
    const Letter l = letter_of(vocab, j, fmask, "state");
    auto it = std::find(states.begin(), states.end(), l);
    if (it == states.end()) throw ValidationError("undeclared state " + vocab.format(l));
    return static_cast<StateId>(it - states.begin());
  };
  auto action_id = [&](const nlohmann::json& j) {
    const Letter l = letter_of(vocab, j, amask, "action");
    auto it = std::find(actions.begin(), actions.end(), l);
    if (it == actions.end()) throw ValidationError("undeclared action " + vocab.format(l));
    return static_cast<ActionId>(it - actions.begin());
  };

  const StateId init = state_id(doc["init"]);
  std::vector<Transition> transitions;
  for (const auto& t : doc["transitions"]) {
    if (!t.contains("from") || !t.contains("act") || !t.contains("to") || !t["to"].is_array()) {
      throw ValidationError("transition needs from/act/to");
    }
    const StateId from = state_id(t["from"]);
    const ActionId act = action_id(t["act"]);
    if (t["to"].empty()) throw ValidationError("transition with no successor");
    for (const auto& to : t["to"]) transitions.push_back({from, act, state_id(to)});
  }
  return Domain(std::move(fluents), std::move(action_vars), std::move(states), std::move(actions),
                init, std::move(transitions), options);
}

Domain load_domain_file(const std::string& path, Domain::Options options) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON in '") + path + "': " + e.what(), e.byte);
  }
  return load_domain(doc, options);
}

nlohmann::json domain_to_json(const Domain& d) {
  const auto& v = d.vocabulary();
  nlohmann::json doc;
  doc["format"] = kDomainFormat;
  doc["fluents"] = d.fluents();
  doc["action_vars"] = d.action_vars();
  doc["init"] = props_json(v, d.state(d.initial()));
  doc["states"] = nlohmann::json::array();
  for (std::size_t s = 0; s < d.num_states(); ++s) doc["states"].push_back(props_json(v, d.state(s)));
  doc["actions"] = nlohmann::json::array();
  for (std::size_t a = 0; a < d.num_actions(); ++a) doc["actions"].push_back(props_json(v, d.action(a)));
  doc["transitions"] = nlohmann::json::array();
  for (std::size_t s = 0; s < d.num_states(); ++s) {
    for (ActionId a : d.applicable(static_cast<StateId>(s))) {
      nlohmann::json t;
      t["from"] = props_json(v, d.state(s));
      t["act"] = props_json(v, d.action(a));
      t["to"] = nlohmann::json::array();
      for (StateId to : d.successors(static_cast<StateId>(s), a)) t["to"].push_back(props_json(v, d.state(to)));
      doc["transitions"].push_back(std::move(t));
    }
  }
  return doc;
}

// ---------------------------------------------------------------------------
// Traces and fairness

bool is_domain_lasso(const Lasso& w, const Domain& d) {
  if (w.loop.empty()) return false;
  const std::size_t n = w.length();
  std::vector<std::pair<StateId, ActionId>> steps(n);
  for (std::size_t i = 0; i < n; ++i) {
    steps[i] = d.decode(w.at(i));
    if (steps[i].first < 0) return false;
  }
  if (steps[0].first != d.initial()) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const auto [s, a] = steps[i];
    if (!d.has_transition(s, a, steps[w.next(i)].first)) return false;
  }
  return true;
}

bool is_state_action_fair(const Lasso& w, const Domain& d) {
  if (!is_domain_lasso(w, d)) throw ValidationError("word is not a trace of the domain");
  std::set<std::pair<StateId, ActionId>> pairs;
  std::set<Transition> steps;
  const std::size_t begin = w.prefix.size();
  for (std::size_t i = begin; i < w.length(); ++i) {
    const auto [s, a] = d.decode(w.at(i));
    const StateId t = d.decode(w.at(w.next(i))).first;
    pairs.insert({s, a});
    steps.insert({s, a, t});
  }
  for (const auto& [s, a] : pairs) {
    for (StateId t : d.successors(s, a)) {
      if (!steps.count({s, a, t})) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Policies

PolicyMachine::PolicyMachine(std::size_t memory_size, std::size_t num_states, int initial_memory)
    : memory_size_(memory_size),
      num_states_(num_states),
      initial_(initial_memory),
      out_(memory_size * num_states, -1),
      upd_(memory_size * num_states, -1) {
  if (memory_size == 0) throw ValidationError("policy needs at least one memory state");
  if (initial_memory < 0 || static_cast<std::size_t>(initial_memory) >= memory_size) {
    throw ValidationError("initial memory out of range");
  }
}

void PolicyMachine::set(int memory, StateId s, ActionId action, int next_memory) {
  if (memory < 0 || static_cast<std::size_t>(memory) >= memory_size_ || next_memory < 0 ||
      static_cast<std::size_t>(next_memory) >= memory_size_) {
    throw ValidationError("policy memory index out of range");
  }
  if (s < 0 || static_cast<std::size_t>(s) >= num_states_) throw ValidationError("policy state out of range");
  out_[slot(memory, s)] = action;
  upd_[slot(memory, s)] = next_memory;
}

void validate_policy(const PolicyMachine& p, const Domain& d) {
  if (p.num_states() != d.num_states()) throw ValidationError("policy/domain state count mismatch");
  std::set<std::pair<int, StateId>> seen{{p.initial_memory(), d.initial()}};
  std::vector<std::pair<int, StateId>> stack{{p.initial_memory(), d.initial()}};
  while (!stack.empty()) {
    auto [m, s] = stack.back();
    stack.pop_back();
    if (!p.defined(m, s)) {
      throw ValidationError("policy undefined at memory " + std::to_string(m) + ", state " +
                            d.describe_state(s));
    }
    const ActionId a = p.output(m, s);
    if (a < 0 || static_cast<std::size_t>(a) >= d.num_actions() || d.successors(s, a).empty()) {
      throw ValidationError("policy chooses an inapplicable action in " + d.describe_state(s));
    }
    for (StateId t : d.successors(s, a)) {
      if (seen.insert({p.update(m, s), t}).second) stack.push_back({p.update(m, s), t});
    }
  }
}

nlohmann::json policy_to_json(const PolicyMachine& p, const Domain& d) {
  const auto& v = d.vocabulary();
  nlohmann::json doc;
  doc["format"] = kPolicyFormat;
  doc["memory"] = p.memory_size();
  doc["init"] = p.initial_memory();
  doc["step"] = nlohmann::json::array();
  for (std::size_t m = 0; m < p.memory_size(); ++m) {
    for (std::size_t s = 0; s < d.num_states(); ++s) {
      const int mi = static_cast<int>(m);
      const auto si = static_cast<StateId>(s);
      if (!p.defined(mi, si)) continue;
      nlohmann::json e;
      e["mem"] = mi;
      e["state"] = props_json(v, d.state(si));
      e["act"] = props_json(v, d.action(p.output(mi, si)));
      e["next_mem"] = p.update(mi, si);
      doc["step"].push_back(std::move(e));
    }
  }
  return doc;
}

PolicyMachine policy_from_json(const nlohmann::json& doc, const Domain& d) {
  check_format(doc, kPolicyFormat);
  if (!doc.contains("memory") || !doc.contains("init") || !doc.contains("step")) {
    throw ValidationError("policy needs memory/init/step");
  }
  PolicyMachine p(doc["memory"].get<std::size_t>(), d.num_states(), doc["init"].get<int>());
  const auto& v = d.vocabulary();
  for (const auto& e : doc["step"]) {
    const int s = d.find_state(letter_of(v, e.at("state"), d.fluent_mask(), "state"));
    const int a = d.find_action(letter_of(v, e.at("act"), ~d.fluent_mask(), "action"));
    if (s < 0) throw ValidationError("policy mentions an undeclared state");
    if (a < 0) throw ValidationError("policy mentions an undeclared action");
    p.set(e.at("mem").get<int>(), s, a, e.at("next_mem").get<int>());
  }
  validate_policy(p, d);
  return p;
}

Lasso run_policy(const Domain& d, const PolicyMachine& p, const SuccessorSelector& sel) {
  struct Config {
    StateId s;
    int mem;
    int sel;
    auto operator<=>(const Config&) const = default;
  };
  std::map<Config, std::size_t> seen;
  std::vector<Letter> letters;
  Config c{d.initial(), p.initial_memory(), sel.initial_state};
  while (true) {
    if (auto it = seen.find(c); it != seen.end()) {
      Lasso out;
      out.prefix.assign(letters.begin(), letters.begin() + static_cast<std::ptrdiff_t>(it->second));
      out.loop.assign(letters.begin() + static_cast<std::ptrdiff_t>(it->second), letters.end());
      return out;
    }
    seen.emplace(c, letters.size());
    if (!p.defined(c.mem, c.s)) throw ValidationError("policy undefined on a reachable configuration");
    const ActionId a = p.output(c.mem, c.s);
    letters.push_back(d.letter(c.s, a));
    const auto [next, next_sel] = sel.choose(c.s, a, c.sel);
    if (!d.has_transition(c.s, a, next)) throw ValidationError("selector returned a non-successor");
    c = Config{next, p.update(c.mem, c.s), next_sel};
  }
}

nlohmann::json lasso_to_json(const Lasso& w, const Vocabulary& v) {
  nlohmann::json doc;
  doc["format"] = kLassoFormat;
  doc["prefix"] = nlohmann::json::array();
  for (Letter l : w.prefix) doc["prefix"].push_back(props_json(v, l));
  doc["loop"] = nlohmann::json::array();
  for (Letter l : w.loop) doc["loop"].push_back(props_json(v, l));
  return doc;
}

Lasso lasso_from_json(const nlohmann::json& doc, const Vocabulary& v) {
  check_format(doc, kLassoFormat);
  Lasso w;
  for (const auto& l : doc.at("prefix")) w.prefix.push_back(v.letter(string_list(l, "letter")));
  for (const auto& l : doc.at("loop")) w.loop.push_back(v.letter(string_list(l, "letter")));
  if (w.loop.empty()) throw ValidationError("lasso loop must be nonempty");
  return w;
}

}  // namespace fairplan
