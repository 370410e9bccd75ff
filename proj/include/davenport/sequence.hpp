#pragma once

#include <algorithm>
#include <cassert>
#include <initializer_list>
#include <numeric>
#include <string>
#include <vector>

#include "davenport/error.hpp"

namespace davenport {

// A finite sequence over a group, i.e. an unordered multiset of element
// indices, stored as a multiplicity vector of length n (the group order).
class Sequence {
 public:
  Sequence() = default;
  explicit Sequence(int universe) : mult_(universe, 0) {}

  static Sequence of(int universe, std::initializer_list<int> elems) {
    Sequence s(universe);
    for (int g : elems) s.add(g);
    return s;
  }

  static Sequence from_elements(int universe, const std::vector<int>& elems) {
    Sequence s(universe);
    for (int g : elems) s.add(g);
    return s;
  }

  // g^[k]
  static Sequence power(int universe, int g, int k) {
    Sequence s(universe);
    s.add(g, k);
    return s;
  }

  int universe_size() const { return static_cast<int>(mult_.size()); }
  int length() const { return length_; }
  bool empty() const { return length_ == 0; }

  int multiplicity(int g) const {
    assert(g >= 0 && g < universe_size());
    return mult_[g];
  }

  // h(S): the largest multiplicity of any element.
  int max_multiplicity() const {
    return mult_.empty() ? 0 : *std::max_element(mult_.begin(), mult_.end());
  }

  std::vector<int> support() const {
    std::vector<int> out;
    for (int g = 0; g < universe_size(); ++g)
      if (mult_[g] > 0) out.push_back(g);
    return out;
  }

  // Ascending element list with repetition, e.g. {1,1,3}.
  std::vector<int> expanded() const {
    std::vector<int> out;
    out.reserve(static_cast<size_t>(length_));
    for (int g = 0; g < universe_size(); ++g)
      for (int k = 0; k < mult_[g]; ++k) out.push_back(g);
    return out;
  }

  void add(int g, int k = 1) {
    assert(g >= 0 && g < universe_size() && k >= 0);
    mult_[g] += k;
    length_ += k;
  }

  void remove(int g, int k = 1) {
    assert(g >= 0 && g < universe_size() && mult_[g] >= k);
    mult_[g] -= k;
    length_ -= k;
  }

  // T | S: is *this a sub-multiset of s?
  bool divides(const Sequence& s) const {
    assert(universe_size() == s.universe_size());
    for (int g = 0; g < universe_size(); ++g)
      if (mult_[g] > s.mult_[g]) return false;
    return true;
  }

  // S·T
  Sequence concat(const Sequence& t) const {
    assert(universe_size() == t.universe_size());
    Sequence out = *this;
    for (int g = 0; g < universe_size(); ++g) out.add(g, t.mult_[g]);
    return out;
  }

  // S·T^[-1]; requires T | S.
  Sequence minus(const Sequence& t) const {
    assert(t.divides(*this));
    Sequence out = *this;
    for (int g = 0; g < universe_size(); ++g) out.remove(g, t.mult_[g]);
    return out;
  }

  // Componentwise minimum of multiplicities.
  Sequence gcd_with(const Sequence& t) const {
    assert(universe_size() == t.universe_size());
    Sequence out(universe_size());
    for (int g = 0; g < universe_size(); ++g)
      out.add(g, std::min(mult_[g], t.mult_[g]));
    return out;
  }

  bool operator==(const Sequence& o) const { return mult_ == o.mult_; }
  bool operator!=(const Sequence& o) const { return !(*this == o); }

  const std::vector<int>& multiplicities() const { return mult_; }

  // Canonical literal: ascending element indices, e.g. "[1,1,3]"; "[]" when
  // empty.
  std::string to_literal() const {
    std::string s = "[";
    bool first = true;
    for (int g : expanded()) {
      if (!first) s += ',';
      s += std::to_string(g);
      first = false;
    }
    s += ']';
    return s;
  }

  // Parses "[1,1,3]" (whitespace tolerated). Throws ParseError on malformed
  // text or an element index outside [0, universe).
  static Sequence parse_literal(int universe, const std::string& text);

 private:
  std::vector<int> mult_;
  int length_ = 0;
};

}  // namespace davenport
