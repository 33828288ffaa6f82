#pragma once

#include <compare>
#include <cstdint>
#include <set>
#include <string>
#include <utility>

namespace chor {

// Name of a process (p, q, r, ...). Ordered lexicographically.
class ProcessName {
 public:
  ProcessName() = default;
  explicit ProcessName(std::string id) : id_(std::move(id)) {}

  const std::string& str() const { return id_; }

  friend auto operator<=>(const ProcessName&, const ProcessName&) = default;
  friend bool operator==(const ProcessName&, const ProcessName&) = default;

 private:
  std::string id_;
};

using ProcessSet = std::set<ProcessName>;

// Recursion variable bound by `def X = ... in ...`.
class RecVar {
 public:
  RecVar() = default;
  explicit RecVar(std::string id) : id_(std::move(id)) {}

  const std::string& str() const { return id_; }

  friend auto operator<=>(const RecVar&, const RecVar&) = default;
  friend bool operator==(const RecVar&, const RecVar&) = default;

 private:
  std::string id_;
};

// Links a runtime send to its matching runtime receive. Rendered as #k.
struct Tag {
  std::uint64_t id = 0;

  friend auto operator<=>(const Tag&, const Tag&) = default;
  friend bool operator==(const Tag&, const Tag&) = default;
};

// Monotonic source of globally fresh tags. Confined to one execution.
class TagSupply {
 public:
  TagSupply() = default;
  explicit TagSupply(std::uint64_t first) : next_(first) {}

  Tag fresh() { return Tag{next_++}; }

  // Ensures every tag issued from now on is strictly greater than `seen`.
  void observe(Tag seen) {
    if (seen.id >= next_) next_ = seen.id + 1;
  }

  std::uint64_t peek() const { return next_; }

 private:
  std::uint64_t next_ = 0;
};

}  // namespace chor
