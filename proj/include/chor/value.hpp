#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>

#include "chor/names.hpp"

namespace chor {

// Content of a single memory cell. `Err` is an ordinary storable value that
// results from ill-typed evaluation.
class Value {
 public:
  enum class Kind : std::uint8_t { Int, Bool, Err };

  Value() : Value(integer(0)) {}

  static Value integer(std::int64_t i) { return Value(Repr{i}); }
  static Value boolean(bool b) { return Value(Repr{b}); }
  static Value error() { return Value(Repr{ErrTag{}}); }

  Kind kind() const { return static_cast<Kind>(repr_.index()); }
  bool is_int() const { return kind() == Kind::Int; }
  bool is_bool() const { return kind() == Kind::Bool; }
  bool is_err() const { return kind() == Kind::Err; }

  std::int64_t as_int() const { return std::get<std::int64_t>(repr_); }
  bool as_bool() const { return std::get<bool>(repr_); }

  std::string to_string() const;

  friend bool operator==(const Value&, const Value&) = default;
  friend bool operator<(const Value& a, const Value& b) { return a.repr_ < b.repr_; }

 private:
  struct ErrTag {
    friend bool operator==(ErrTag, ErrTag) { return true; }
    friend bool operator<(ErrTag, ErrTag) { return false; }
  };
  using Repr = std::variant<std::int64_t, bool, ErrTag>;
  explicit Value(Repr r) : repr_(r) {}
  Repr repr_;
};

class UnknownProcess : public std::runtime_error {
 public:
  explicit UnknownProcess(const ProcessName& p)
      : std::runtime_error("unknown process '" + p.str() + "'"), process(p) {}
  ProcessName process;
};

// Total map from the processes of a program to their memory cell.
class GlobalState {
 public:
  GlobalState() = default;
  explicit GlobalState(std::map<ProcessName, Value> cells) : cells_(std::move(cells)) {}

  // Every process in `procs` starts with `init`.
  static GlobalState uniform(const ProcessSet& procs, Value init);

  bool contains(const ProcessName& p) const { return cells_.count(p) != 0; }
  const Value& at(const ProcessName& p) const;

  // Copy of this state with p's cell replaced by v. Throws UnknownProcess.
  GlobalState updated(const ProcessName& p, Value v) const;

  // Adds p (no-op if present).
  void ensure(const ProcessName& p, Value init);

  const std::map<ProcessName, Value>& cells() const { return cells_; }

  std::string to_string() const;

  friend bool operator==(const GlobalState&, const GlobalState&) = default;

 private:
  std::map<ProcessName, Value> cells_;
};

inline GlobalState update_state(const GlobalState& s, const ProcessName& p, Value v) {
  return s.updated(p, v);
}

}  // namespace chor
