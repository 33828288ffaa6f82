#include "chor/value.hpp"

#include <sstream>

namespace chor {

std::string Value::to_string() const {
  switch (kind()) {
    case Kind::Int:
      return std::to_string(as_int());
    case Kind::Bool:
      return as_bool() ? "true" : "false";
    case Kind::Err:
      return "err";
  }
  return "err";
}

GlobalState GlobalState::uniform(const ProcessSet& procs, Value init) {
  std::map<ProcessName, Value> cells;
  for (const auto& p : procs) cells.emplace(p, init);
  return GlobalState(std::move(cells));
}

const Value& GlobalState::at(const ProcessName& p) const {
  auto it = cells_.find(p);
  if (it == cells_.end()) throw UnknownProcess(p);
  return it->second;
}

GlobalState GlobalState::updated(const ProcessName& p, Value v) const {
  if (!contains(p)) throw UnknownProcess(p);
  GlobalState next = *this;
  next.cells_[p] = v;
  return next;
}

void GlobalState::ensure(const ProcessName& p, Value init) { cells_.emplace(p, init); }

std::string GlobalState::to_string() const {
  std::ostringstream out;
  out << '{';
  bool first = true;
  for (const auto& [p, v] : cells_) {
    if (!first) out << ", ";
    first = false;
    out << p.str() << '=' << v.to_string();
  }
  out << '}';
  return out.str();
}

}  // namespace chor
