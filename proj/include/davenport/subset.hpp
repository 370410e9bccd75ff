#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace davenport {

// Dense subset of the element indices [0, n) of one fixed group.
// Membership lives in a bit vector; the popcount is cached lazily.
class GroupSubset {
 public:
  GroupSubset() = default;
  explicit GroupSubset(int universe)
      : n_(universe), w_((universe + 63) / 64, 0) {}

  static GroupSubset single(int universe, int g) {
    GroupSubset s(universe);
    s.add(g);
    return s;
  }

  static GroupSubset of(int universe, std::initializer_list<int> elems) {
    GroupSubset s(universe);
    for (int g : elems) s.add(g);
    return s;
  }

  static GroupSubset full(int universe) {
    GroupSubset s(universe);
    for (int g = 0; g < universe; ++g) s.add(g);
    return s;
  }

  int universe_size() const { return n_; }

  bool test(int g) const {
    assert(g >= 0 && g < n_);
    return (w_[static_cast<size_t>(g) >> 6] >> (g & 63)) & 1u;
  }

  void add(int g) {
    assert(g >= 0 && g < n_);
    w_[static_cast<size_t>(g) >> 6] |= uint64_t(1) << (g & 63);
    dirty_ = true;
  }

  void remove(int g) {
    assert(g >= 0 && g < n_);
    w_[static_cast<size_t>(g) >> 6] &= ~(uint64_t(1) << (g & 63));
    dirty_ = true;
  }

  // Cached cardinality; recomputed only after a mutation.
  int size() const {
    if (dirty_) {
      int c = 0;
      for (uint64_t w : w_) c += std::popcount(w);
      card_ = c;
      dirty_ = false;
    }
    return card_;
  }

  bool empty() const { return size() == 0; }

  GroupSubset& operator|=(const GroupSubset& o) {
    assert(n_ == o.n_);
    for (size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    dirty_ = true;
    return *this;
  }

  GroupSubset& operator&=(const GroupSubset& o) {
    assert(n_ == o.n_);
    for (size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    dirty_ = true;
    return *this;
  }

  bool operator==(const GroupSubset& o) const {
    return n_ == o.n_ && w_ == o.w_;
  }
  bool operator!=(const GroupSubset& o) const { return !(*this == o); }

  bool subset_of(const GroupSubset& o) const {
    assert(n_ == o.n_);
    for (size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }

  bool intersects(const GroupSubset& o) const {
    assert(n_ == o.n_);
    for (size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & o.w_[i]) return true;
    return false;
  }

  template <class F>
  void for_each(F f) const {
    for (size_t i = 0; i < w_.size(); ++i) {
      uint64_t m = w_[i];
      while (m) {
        f(static_cast<int>(i * 64) + std::countr_zero(m));
        m &= m - 1;
      }
    }
  }

  std::vector<int> elements() const {
    std::vector<int> out;
    out.reserve(static_cast<size_t>(size()));
    for_each([&](int g) { out.push_back(g); });
    return out;
  }

  // "{0,2,4}" -- ascending element indices.
  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for_each([&](int g) {
      if (!first) s += ',';
      s += std::to_string(g);
      first = false;
    });
    s += '}';
    return s;
  }

 private:
  int n_ = 0;
  std::vector<uint64_t> w_;
  mutable int card_ = 0;
  mutable bool dirty_ = false;
};

}  // namespace davenport
