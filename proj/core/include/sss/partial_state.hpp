#pragma once

// Partial spin assignments.  A PartialState is an element of {+1, -1, free}^m
// and identifies the subcube of full states that agree with it on every
// assigned coordinate.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sss {

using Spin = std::int8_t;                 // strictly +1 or -1
using SpinState = std::vector<Spin>;      // length m

class PartialState {
 public:
  PartialState() = default;
  explicit PartialState(int m) : v_(static_cast<std::size_t>(m), 0) {}

  int size() const { return static_cast<int>(v_.size()); }
  bool assigned(int i) const { return v_[static_cast<std::size_t>(i)] != 0; }
  Spin get(int i) const { return v_[static_cast<std::size_t>(i)]; }

  void set(int i, Spin s) {
    if (s != 1 && s != -1) throw std::invalid_argument("spin must be +1 or -1");
    v_[static_cast<std::size_t>(i)] = s;
  }
  void clear(int i) { v_[static_cast<std::size_t>(i)] = 0; }

  int num_assigned() const {
    int n = 0;
    for (Spin s : v_) n += (s != 0);
    return n;
  }
  int num_free() const { return size() - num_assigned(); }
  bool complete() const {
    for (Spin s : v_)
      if (s == 0) return false;
    return true;
  }

  // Does the full state y lie in this subcube?
  bool matches(const SpinState& y) const {
    if (y.size() != v_.size())
      throw std::invalid_argument("state/pattern length mismatch");
    for (std::size_t i = 0; i < v_.size(); ++i)
      if (v_[i] != 0 && v_[i] != y[i]) return false;
    return true;
  }

  SpinState as_state() const {
    if (!complete())
      throw std::logic_error("partial state is not a full state");
    return SpinState(v_.begin(), v_.end());
  }

  // '+', '-', '.' per site, e.g. "+.-" for m=3.
  std::string to_string() const {
    std::string s;
    s.reserve(v_.size());
    for (Spin x : v_) s.push_back(x > 0 ? '+' : (x < 0 ? '-' : '.'));
    return s;
  }

  friend bool operator==(const PartialState&, const PartialState&) = default;

 private:
  std::vector<Spin> v_;
};

inline std::string state_to_string(const SpinState& y) {
  std::string s;
  s.reserve(y.size());
  for (Spin x : y) s.push_back(x > 0 ? '+' : '-');
  return s;
}

inline SpinState state_from_string(const std::string& s) {
  SpinState y;
  y.reserve(s.size());
  for (char c : s) {
    if (c == '+')
      y.push_back(1);
    else if (c == '-')
      y.push_back(-1);
    else
      throw std::invalid_argument("bad spin character in state string");
  }
  return y;
}

}  // namespace sss
