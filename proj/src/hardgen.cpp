#include "fairplan/hardgen.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>

#include "fairplan/error.hpp"

namespace fairplan {

namespace {

using F = Formula;

F at(const char* name) { return F::atom(name); }
F weak_next(const F& f) { return F::lnot(F::next(F::lnot(f))); }

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

std::string text(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_string()) throw ValidationError(std::string("ATM field '") + key + "' must be a string");
  return doc[key].get<std::string>();
}

std::vector<std::string> texts(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_array()) throw ValidationError(std::string("ATM field '") + key + "' must be an array");
  std::vector<std::string> out;
  for (const auto& e : doc[key]) {
    if (!e.is_string()) throw ValidationError(std::string("ATM field '") + key + "' must list strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

}  // namespace

std::vector<std::string> AlternatingTM::states() const {
  std::vector<std::string> q = existential;
  q.insert(q.end(), universal.begin(), universal.end());
  q.push_back(accept);
  q.push_back(reject);
  return q;
}

bool AlternatingTM::is_existential(const std::string& q) const { return contains(existential, q); }
bool AlternatingTM::is_universal(const std::string& q) const { return contains(universal, q); }

void AlternatingTM::validate() const {
  const auto q = states();
  if (q.size() > kHardMaxStates) throw ValidationError("ATM has more than 8 states");
  if (std::set<std::string>(q.begin(), q.end()).size() != q.size()) throw ValidationError("ATM state names must be distinct");
  if (alphabet.empty()) throw ValidationError("ATM tape alphabet is empty");
  if (std::set<std::string>(alphabet.begin(), alphabet.end()).size() != alphabet.size()) {
    throw ValidationError("ATM tape letters must be distinct");
  }
  for (const auto& l : alphabet) {
    if (l.size() != 1) throw ValidationError("ATM tape letters must be single characters");
  }
  if (!contains(alphabet, blank)) throw ValidationError("ATM blank is not a tape letter");
  if (!is_existential(initial)) throw ValidationError("ATM initial state must be existential");
  for (const auto& t : transitions) {
    if (!is_existential(t.from) && !is_universal(t.from)) {
      throw ValidationError("ATM transition leaves halting or unknown state '" + t.from + "'");
    }
    if (!contains(q, t.to)) throw ValidationError("ATM transition enters unknown state '" + t.to + "'");
    if (!contains(alphabet, t.read) || !contains(alphabet, t.write)) throw ValidationError("ATM transition uses unknown tape letter");
    if (t.move != 'L' && t.move != 'R' && t.move != 'N') throw ValidationError("ATM move must be L, R or N");
    const bool halting = t.to == accept || t.to == reject;
    if (!halting && is_existential(t.from) == is_existential(t.to)) {
      throw ValidationError("ATM modes must alternate: " + t.from + " -> " + t.to);
    }
  }
  for (const auto& u : universal) {
    for (const auto& l : alphabet) {
      const bool any = std::any_of(transitions.begin(), transitions.end(),
                                   [&](const AtmTransition& t) { return t.from == u && t.read == l; });
      if (!any) throw ValidationError("ATM universal state '" + u + "' is stuck on '" + l + "'");
    }
  }
}

AlternatingTM atm_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("format") || doc["format"] != kAtmFormat) {
    throw ValidationError(std::string("ATM document must have format ") + kAtmFormat);
  }
  AlternatingTM m;
  m.existential = texts(doc, "existential");
  m.universal = texts(doc, "universal");
  m.accept = text(doc, "accept");
  m.reject = text(doc, "reject");
  m.initial = text(doc, "initial");
  m.alphabet = texts(doc, "alphabet");
  m.blank = text(doc, "blank");
  if (!doc.contains("transitions") || !doc["transitions"].is_array()) throw ValidationError("ATM transitions must be an array");
  for (const auto& e : doc["transitions"]) {
    if (!e.is_object()) throw ValidationError("ATM transition must be an object");
    AtmTransition t{text(e, "from"), text(e, "read"), text(e, "to"), text(e, "write"), 'N'};
    const std::string mv = text(e, "move");
    if (mv.size() != 1) throw ValidationError("ATM move must be L, R or N");
    t.move = mv[0];
    m.transitions.push_back(t);
  }
  m.validate();
  return m;
}

nlohmann::json atm_to_json(const AlternatingTM& m) {
  nlohmann::json doc;
  doc["format"] = kAtmFormat;
  doc["existential"] = m.existential;
  doc["universal"] = m.universal;
  doc["accept"] = m.accept;
  doc["reject"] = m.reject;
  doc["initial"] = m.initial;
  doc["alphabet"] = m.alphabet;
  doc["blank"] = m.blank;
  doc["transitions"] = nlohmann::json::array();
  for (const auto& t : m.transitions) {
    doc["transitions"].push_back({{"from", t.from}, {"read", t.read}, {"to", t.to}, {"write", t.write}, {"move", std::string(1, t.move)}});
  }
  return doc;
}

AlternatingTM load_atm_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  try {
    return atm_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON in '") + path + "': " + e.what(), e.byte);
  }
}

// ---------------------------------------------------------------- domain

namespace {

enum Sym { B0, B1, PCT, DOL, HASH, HASH1, HASH2, BOT, NUM_SYMS };
enum Seg { SegC, SegT, SegK, SegNone };

struct Key {
  int sym;
  int seg;
  bool odd;
  bool first;
  int pos = 0;  // 1..n inside K
  auto operator<=>(const Key&) const = default;
};

}  // namespace

Domain gen_domain(int n) {
  if (n < 1 || n > kHardMaxN) throw CapacityError("gen-hard supports 1 <= n <= 4");
  std::vector<std::string> fluents = kHardLetters;
  fluents.insert(fluents.end(), {"first", "odd", "seg_t", "seg_k"});
  for (int i = 2; i <= n; ++i) fluents.push_back("kpos" + std::to_string(i));
  std::vector<std::string> action_vars;
  for (const auto& l : kHardLetters) action_vars.push_back("do_" + l);
  action_vars.push_back("wait");
  const std::size_t nf = fluents.size();
  const ActionId wait = NUM_SYMS;

  std::vector<Key> keys;
  auto add = [&](int sym, int seg, bool odd, bool first, int pos = 0) { keys.push_back({sym, seg, odd, first, pos}); };
  for (int s : {B0, B1, PCT, DOL}) {
    add(s, SegC, false, true);
    add(s, SegC, false, false);
    add(s, SegC, true, false);
  }
  for (int s : {B0, B1})
    for (bool odd : {false, true}) {
      add(s, SegT, odd, false);
      for (int i = 1; i <= n; ++i) add(s, SegK, odd, false, i);
    }
  for (int s : {HASH, HASH1, HASH2})
    for (bool odd : {false, true}) add(s, SegNone, odd, false);
  add(BOT, SegNone, false, false);
  std::sort(keys.begin(), keys.end());
  std::map<Key, StateId> id;
  std::vector<Letter> states;
  for (const auto& k : keys) {
    id[k] = static_cast<StateId>(states.size());
    Letter l = Letter{1} << k.sym;
    if (k.first) l |= Letter{1} << 8;
    if (k.odd) l |= Letter{1} << 9;
    if (k.seg == SegT) l |= Letter{1} << 10;
    if (k.seg == SegK) l |= Letter{1} << 11;
    if (k.pos >= 2) l |= Letter{1} << (10 + k.pos);
    states.push_back(l);
  }
  std::vector<Letter> actions;
  for (std::size_t a = 0; a < action_vars.size(); ++a) actions.push_back(Letter{1} << (nf + a));

  std::vector<Transition> tr;
  auto edge = [&](const Key& from, ActionId a, const Key& to) { tr.push_back({id.at(from), a, id.at(to)}); };
  // The environment picks a bit; the agent closes the block.
  auto env_bit = [&](const Key& from, int seg, bool odd, int pos = 0) {
    edge(from, wait, {B0, seg, odd, false, pos});
    edge(from, wait, {B1, seg, odd, false, pos});
  };
  for (const auto& k : keys) {
    switch (k.seg) {
      case SegC:
        for (int s : {B0, B1, PCT, DOL}) edge(k, s, {s, SegC, k.odd, k.first});
        if (k.first) edge(k, HASH, {HASH, SegNone, true, false});
        else edge(k, HASH2, {HASH2, SegNone, k.odd, false});
        break;
      case SegT:
        if (k.odd) {
          for (int s : {B0, B1}) edge(k, s, {s, SegT, true, false});
        } else {
          env_bit(k, SegT, false);
        }
        edge(k, HASH1, {HASH1, SegNone, k.odd, false});
        break;
      case SegK:
        if (k.pos < n) env_bit(k, SegK, k.odd, k.pos + 1);
        else edge(k, HASH, {HASH, SegNone, !k.odd, false});
        break;
      default:
        if (k.sym == HASH) {
          edge(k, BOT, {BOT, SegNone, false, false});
          if (k.odd) {
            for (int s : {B0, B1}) edge(k, s, {s, SegT, true, false});
            edge(k, HASH1, {HASH1, SegNone, true, false});
          } else {
            env_bit(k, SegT, false);
          }
        } else if (k.sym == HASH1) {
          for (int s : {B0, B1, PCT, DOL}) edge(k, s, {s, SegC, k.odd, false});
          edge(k, HASH2, {HASH2, SegNone, k.odd, false});
        } else if (k.sym == HASH2) {
          env_bit(k, SegK, k.odd, 1);
        } else {
          edge(k, wait, k);
        }
    }
  }
  std::sort(tr.begin(), tr.end());
  tr.erase(std::unique(tr.begin(), tr.end()), tr.end());
  return Domain(fluents, action_vars, states, actions, id.at({PCT, SegC, false, true}), tr);
}

// ---------------------------------------------------------------- goal

int symbol_width(const AlternatingTM& m) {
  const std::size_t symbols = m.alphabet.size() * (1 + m.states().size());
  int w = std::bit_width(symbols - 1) + 1;
  while ((std::size_t{1} << w) < m.transitions.size()) ++w;
  return w;
}

F join(const F& phi1, const F& phi2, int k) {
  F inner = F::until(F::lnot(phi1), F::land(phi1, F::next(phi2)));
  return k <= 1 ? inner : join(phi1, join(phi1, phi2, k - 1), 1);
}

namespace {

F bit() { return F::lor(at("b0"), at("b1")); }
F end_of_conf() { return F::lor(at("hash"), at("hash2")); }

/// phi1 joined k times without leaving the current configuration.
F scan(const F& phi1, const F& phi2, int k) {
  const F avoid = F::land(F::lnot(phi1), F::lnot(end_of_conf()));
  F inner = F::until(avoid, F::land(phi1, F::next(phi2)));
  return k <= 1 ? inner : scan(phi1, scan(phi1, phi2, k - 1), 1);
}

/// The m-bit word of `code`, most significant bit first, then `rest`.
F word(std::size_t code, int m, const F& rest) {
  F f = rest;
  for (int i = 0; i < m; ++i) {
    const F b = (code >> i) & 1 ? at("b1") : at("b0");
    f = i == 0 && rest.op() == F::Op::True ? b : F::land(b, F::next(f));
  }
  return f;
}
F word(std::size_t code, int m) { return word(code, m, F::tt()); }

F any_bits(int k, const F& rest, bool weak) {
  F f = rest;
  for (int i = 0; i < k; ++i) f = F::land(bit(), weak ? weak_next(f) : F::next(f));
  return f;
}

F iff(const F& a, const F& b) { return F::land(F::implies(a, b), F::implies(b, a)); }

/// Tape content of one cell: a letter, or a letter under the head.
struct Cell {
  int letter;
  int state = -1;
  bool operator==(const Cell&) const = default;
};

class Encoder {
 public:
  Encoder(const AlternatingTM& m, int n) : m_(m), n_(n), w_(symbol_width(m)), q_(m.states()) {
    for (std::size_t l = 0; l < m.alphabet.size(); ++l) {
      cells_.push_back({static_cast<int>(l)});
      for (std::size_t q = 0; q < q_.size(); ++q) cells_.push_back({static_cast<int>(l), static_cast<int>(q)});
    }
  }

  int width() const { return w_; }
  const std::vector<Cell>& cells() const { return cells_; }

  std::size_t code(const Cell& c) const {
    if (c.state < 0) return static_cast<std::size_t>(c.letter);
    return (std::size_t{1} << (w_ - 1)) + static_cast<std::size_t>(c.letter) * q_.size() + static_cast<std::size_t>(c.state);
  }
  int letter(const std::string& l) const {
    return static_cast<int>(std::find(m_.alphabet.begin(), m_.alphabet.end(), l) - m_.alphabet.begin());
  }
  int state(const std::string& q) const { return static_cast<int>(std::find(q_.begin(), q_.end(), q) - q_.begin()); }

  /// Transitions (by index) that apply to a head cell.
  std::vector<std::size_t> applicable(const Cell& c) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < m_.transitions.size(); ++i) {
      const auto& t = m_.transitions[i];
      if (letter(t.read) == c.letter && state(t.from) == c.state) out.push_back(i);
    }
    return out;
  }

  /// Transition selected by a T code: the code itself when it applies,
  /// otherwise the first applicable transition.
  static std::size_t select(const std::vector<std::size_t>& ok, std::size_t code) {
    return std::find(ok.begin(), ok.end(), code) != ok.end() ? code : ok.front();
  }

  /// New content of the middle cell after transition t; x or z empty at the tape ends.
  Cell image(const std::optional<Cell>& x, const Cell& y, const std::optional<Cell>& z, std::size_t ti) const {
    const auto& t = m_.transitions[ti];
    const int q2 = state(t.to);
    if (y.state >= 0) {
      const int l2 = letter(t.write);
      const bool stays = t.move == 'N' || (t.move == 'L' && !x) || (t.move == 'R' && !z);
      return stays ? Cell{l2, q2} : Cell{l2};
    }
    if (x && x->state >= 0 && t.move == 'R') return {y.letter, q2};
    if (z && z->state >= 0 && t.move == 'L') return {y.letter, q2};
    return y;
  }

  /// Reads an m-bit code at the current position, one branch per bit, and
  /// continues with leaf(code) right after it.
  F decode(const std::function<F(std::size_t)>& leaf) const {
    std::function<F(int, std::size_t)> rec = [&](int depth, std::size_t prefix) -> F {
      if (depth == w_) return leaf(prefix);
      return F::lor(F::land(at("b0"), F::next(rec(depth + 1, prefix << 1))),
                    F::land(at("b1"), F::next(rec(depth + 1, prefix << 1 | 1))));
    };
    return rec(0, 0);
  }

  std::optional<Cell> cell_of(std::size_t code) const {
    for (const auto& c : cells_)
      if (this->code(c) == code) return c;
    return std::nullopt;
  }

  /// Next block symbol within the configuration, decoded.
  F next_symbol(const std::function<F(const Cell&)>& leaf) const {
    return scan(at("dol"), decode([&](std::size_t code) {
      const auto c = cell_of(code);
      return c ? leaf(*c) : F::tt();
    }), 1);
  }

  F transition(const std::function<F(std::size_t)>& leaf) const {
    return join(at("hash"), decode(leaf), 1);
  }

  F image_is(const Cell& c) const {
    F match = F::tt();
    for (int i = 0; i < n_; ++i) {
      for (const char* b : {"b0", "b1"}) {
        const F here = F::next_n(at(b), static_cast<std::size_t>(i));
        match = F::land(match, iff(here, join(at("hash2"), here, 1)));
      }
    }
    const F check = F::implies(F::land(at("pct"), F::next(match)),
                               F::next_n(word(code(c), w_), static_cast<std::size_t>(n_ + 2)));
    return join(at("hash1"), F::until(check, at("hash2")), 1);
  }

  /// Window (x, y, z) constraint: the challenged middle cell y must become
  /// the image under the chosen transition.
  F window(const std::optional<Cell>& x, const Cell& y, const std::optional<Cell>& z) const {
    std::vector<Cell> heads;
    for (const auto& c : {x, std::optional<Cell>(y), z})
      if (c && c->state >= 0) heads.push_back(*c);
    if (heads.size() > 1) return F::tt();
    if (heads.empty()) return image_is(y);
    const auto ok = applicable(heads[0]);
    if (ok.empty()) return F::ff();
    return transition([&](std::size_t code) { return image_is(image(x, y, z, select(ok, code))); });
  }

  /// Anchored right after the symbol of y: z is the following block or the tape end.
  F after_middle(const std::optional<Cell>& x, const Cell& y) const {
    return F::lor(F::land(at("pct"), next_symbol([&](const Cell& z) { return window(x, y, z); })),
                  F::land(F::lnot(at("pct")), window(x, y, std::nullopt)));
  }

  /// Challenge constraints anchored at the first symbol bit of a block.
  F interior_windows(int hops) const {
    F match = F::tt();
    for (int i = 0; i < n_; ++i) {
      for (const char* b : {"b0", "b1"}) {
        const F here = F::next_n(at(b), static_cast<std::size_t>(i));
        match = F::land(match, iff(here, join(at("hash2"), here, hops)));
      }
    }
    const F challenged = scan(at("pct"), match, 1);
    const F body = decode([&](std::size_t code) {
      const auto x = cell_of(code);
      if (!x) return F::tt();
      return next_symbol([&](const Cell& y) { return after_middle(*x, y); });
    });
    return F::implies(challenged, body);
  }

  /// Challenge of block 0, anchored at its %.
  F left_windows(int hops) const {
    F zero = F::tt();
    for (int i = n_ - 1; i >= 0; --i) zero = i == n_ - 1 ? at("b0") : F::land(at("b0"), F::next(zero));
    const F challenged = F::land(at("pct"), join(at("hash2"), zero, hops));
    return F::implies(challenged, next_symbol([&](const Cell& y) {
      return next_symbol([&](const Cell& z) { return window(std::nullopt, y, z); });
    }));
  }

  F head_here() const { return F::land(at("pct"), F::next_n(at("b1"), static_cast<std::size_t>(n_ + 2))); }

  F conf() const {
    const std::size_t d = static_cast<std::size_t>(n_ + w_ + 2);
    F after_symbol = F::lor(at("pct"), end_of_conf());
    const F shape = F::implies(at("pct"), F::next(any_bits(n_, F::land(at("dol"), F::next(any_bits(w_, after_symbol, false))), false)));
    const F symbol = F::next_n(decode([&](std::size_t code) { return cell_of(code) ? F::tt() : F::ff(); }),
                               static_cast<std::size_t>(n_ + 2));

    // lower[j]: bits j+1..n of this block are all 1.
    std::vector<F> lower(static_cast<std::size_t>(n_) + 1, F::tt());
    for (int j = n_ - 1; j >= 1; --j) {
      const F b = F::next_n(at("b1"), static_cast<std::size_t>(j + 1));
      lower[j] = j == n_ - 1 ? b : F::land(b, lower[j + 1]);
    }
    std::vector<F> counter;
    std::vector<F> last;
    for (int j = 1; j <= n_; ++j) {
      const F mine = F::next_n(at("b1"), static_cast<std::size_t>(j));
      const F next_one = F::next_n(at("b1"), j + d);
      const F next_zero = F::next_n(at("b0"), j + d);
      counter.push_back(F::land(F::implies(lower[j], iff(mine, next_zero)), F::implies(F::lnot(lower[j]), iff(mine, next_one))));
      last.push_back(mine);
    }
    const F step = F::implies(F::next_n(at("pct"), d), F::conjunction(counter));
    const F final_block = iff(F::next_n(end_of_conf(), d), F::conjunction(last));
    const F per_position = F::land(shape, F::implies(at("pct"), F::conjunction({symbol, step, final_block})));

    std::vector<F> zero;
    for (int j = 1; j <= n_; ++j) zero.push_back(F::next_n(at("b0"), static_cast<std::size_t>(j)));
    const F not_head = F::lnot(head_here());
    const F one_head = F::until(F::land(not_head, F::lnot(end_of_conf())),
                                F::land(head_here(), F::next(F::until(not_head, end_of_conf()))));
    return F::conjunction({at("pct"), F::conjunction(zero), F::until(per_position, end_of_conf()), one_head});
  }

  F init(const std::string& input) const {
    const std::size_t d = static_cast<std::size_t>(n_ + w_ + 2);
    const std::size_t len = std::max<std::size_t>(1, input.size());
    if (len > (std::size_t{1} << n_)) throw ValidationError("input does not fit in 2^n cells");
    std::vector<F> parts{conf()};
    const int blank = letter(m_.blank);
    for (std::size_t j = 0; j < len; ++j) {
      int l = blank;
      if (j < input.size()) {
        l = letter(std::string(1, input[j]));
        if (l == static_cast<int>(m_.alphabet.size())) throw ValidationError("input symbol '" + std::string(1, input[j]) + "' is not a tape letter");
      }
      const Cell c = j == 0 ? Cell{l, state(m_.initial)} : Cell{l};
      parts.push_back(F::next_n(word(code(c), w_), j * d + static_cast<std::size_t>(n_ + 2)));
    }
    const F blank_block = F::implies(at("pct"), F::next_n(word(code(Cell{blank}), w_), static_cast<std::size_t>(n_ + 2)));
    parts.push_back(F::next_n(F::until(blank_block, end_of_conf()), len * d));
    return F::conjunction(parts);
  }

  /// Transition segments after configurations of the given parity.
  /// Agent transitions out of even configurations.
  F tran() const {
    const F body = decode([&](std::size_t code) {
      const auto c = cell_of(code);
      if (!c || c->state < 0) return F::tt();
      std::vector<F> options{at("bot")};
      for (std::size_t ti : applicable(*c)) options.push_back(word(ti, w_, at("hash1")));
      return join(at("hash"), F::disjunction(options), 1);
    });
    // The first head of each configuration.
    const F head_symbol = F::land(at("dol"), F::next(at("b1")));
    const F avoid = F::land(F::lnot(head_symbol), F::lnot(end_of_conf()));
    const F locate = F::lor(F::until(avoid, F::lor(end_of_conf(), F::land(head_symbol, F::next(body)))), F::always(avoid));
    const F start = F::land(at("pct"), F::lnot(at("odd")));
    return F::land(F::implies(start, locate), F::always(F::implies(F::land(at("hash1"), F::next(start)), F::next(locate))));
  }

  /// Environment T blocks, closed by the agent, carry exactly m bits.
  F t_width() const {
    return F::always(F::implies(F::land(at("hash"), F::lnot(at("odd"))), F::next(F::lor(at("bot"), any_bits(w_, at("hash1"), false)))));
  }

  F num() const { return F::always(F::implies(at("hash2"), weak_next(any_bits(n_, at("hash"), true)))); }

  F acc() const {
    const int qa = state(m_.accept);
    const int qr = state(m_.reject);
    const F reached = F::eventually(F::land(at("pct"), next_symbol([&](const Cell& c) { return c.state == qa ? F::tt() : F::ff(); })));
    const F halt = F::always(F::implies(at("pct"), next_symbol([&](const Cell& c) {
      if (c.state == qa) return join(at("hash"), at("bot"), 1);
      return c.state == qr ? F::ff() : F::tt();
    })));
    return F::conjunction({reached, halt, F::eventually(at("bot"))});
  }

 private:
  const AlternatingTM& m_;
  int n_;
  int w_;
  std::vector<std::string> q_;
  std::vector<Cell> cells_;
};

}  // namespace

F challenge_here(int n, int hops) {
  F match = F::tt();
  for (int i = 0; i < n; ++i) {
    for (const char* b : {"b0", "b1"}) {
      const F here = F::next_n(at(b), static_cast<std::size_t>(i));
      match = F::land(match, iff(here, join(at("hash2"), here, hops)));
    }
  }
  return F::land(at("pct"), scan(at("pct"), match, 2));
}

HardGoal gen_goal_parts(const AlternatingTM& machine, const std::string& input, int n) {
  if (n < 1 || n > kHardMaxN) throw CapacityError("gen-hard supports 1 <= n <= 4");
  machine.validate();
  const Encoder enc(machine, n);
  HardGoal g;
  g.conf = F::land(enc.init(input), F::always(F::implies(at("hash1"), F::next(enc.conf()))));
  g.tran_odd = F::land(enc.tran(), enc.t_width());
  // Every m-bit code selects an applicable transition, so the environment
  // cannot break its transition assumption.
  g.tran_even = F::tt();
  g.num = enc.num();
  g.acc = enc.acc();
  g.chal1 = F::land(enc.left_windows(1),
                    F::always(F::implies(F::land(at("first"), at("dol")), F::next(enc.interior_windows(1)))));
  g.chal2 = F::land(F::always(F::implies(at("hash1"), F::next(enc.left_windows(2)))),
                    F::always(F::implies(F::land(F::lnot(at("first")), at("dol")), F::next(enc.interior_windows(2)))));
  g.env = F::land(g.num, g.tran_even);
  g.agent = F::conjunction({g.conf, g.tran_odd, F::land(g.chal1, g.chal2), g.acc});
  g.goal = F::implies(g.env, g.agent);
  return g;
}

F gen_goal(const AlternatingTM& machine, const std::string& input, int n) { return gen_goal_parts(machine, input, n).goal; }

HardInstance gen_instance(const AlternatingTM& machine, const std::string& input, int n) {
  HardInstance h{gen_domain(n), gen_goal(machine, input, n), Dialect::Ltlf, n, symbol_width(machine)};
  return h;
}

}  // namespace fairplan
