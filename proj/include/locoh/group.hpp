#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "locoh/error.hpp"
#include "locoh/fp.hpp"

namespace locoh {

inline constexpr std::size_t kDefaultOrderCap = 1000;
// Orders up to this get a precomputed multiplication table.
inline constexpr std::size_t kMultTableCap = 256;

// Bijection of {0..d-1}.  (a*b)(x) = a(b(x)): the right factor acts first,
// matching matrix composition once elements become matrices.
class Permutation {
 public:
  explicit Permutation(std::vector<u32> images) : images_(std::move(images)) {
    std::vector<bool> seen(images_.size(), false);
    for (u32 v : images_) {
      if (v >= images_.size() || seen[v])
        throw Error("permutation images are not a bijection");
      seen[v] = true;
    }
  }

  static Permutation identity(std::size_t degree) {
    std::vector<u32> im(degree);
    for (std::size_t i = 0; i < degree; ++i) im[i] = u32(i);
    return Permutation(std::move(im));
  }

  // Cycle notation on 0-based points, e.g. "(0 1 2)(3 4)".  Points may be
  // separated by spaces or commas.  degree 0 means "1 + largest point".
  static Permutation from_cycles(const std::string& text, std::size_t degree = 0) {
    std::vector<std::vector<u32>> cycles;
    std::size_t i = 0;
    const auto skip_ws = [&] {
      while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == ','))
        ++i;
    };
    skip_ws();
    std::size_t max_point = 0;
    bool any_point = false;
    while (i < text.size()) {
      if (text[i] != '(') throw Error("cycle notation: expected '(' in \"" + text + "\"");
      ++i;
      std::vector<u32> cyc;
      skip_ws();
      while (i < text.size() && text[i] != ')') {
        if (text[i] < '0' || text[i] > '9')
          throw Error("cycle notation: expected a point in \"" + text + "\"");
        u32 v = 0;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9')
          v = v * 10 + u32(text[i++] - '0');
        cyc.push_back(v);
        max_point = std::max<std::size_t>(max_point, v);
        any_point = true;
        skip_ws();
      }
      if (i == text.size()) throw Error("cycle notation: unclosed '(' in \"" + text + "\"");
      ++i;
      cycles.push_back(std::move(cyc));
      skip_ws();
    }
    std::size_t d = degree ? degree : (any_point ? max_point + 1 : 1);
    if (any_point && max_point >= d)
      throw Error("cycle notation: point exceeds degree in \"" + text + "\"");
    std::vector<u32> im(d);
    for (std::size_t k = 0; k < d; ++k) im[k] = u32(k);
    std::vector<bool> used(d, false);
    for (const auto& cyc : cycles)
      for (std::size_t k = 0; k < cyc.size(); ++k) {
        const u32 from = cyc[k];
        if (used[from]) throw Error("cycle notation: repeated point in \"" + text + "\"");
        used[from] = true;
        im[from] = cyc[(k + 1) % cyc.size()];
      }
    return Permutation(std::move(im));
  }

  std::size_t degree() const { return images_.size(); }
  u32 operator()(u32 x) const { return images_[x]; }
  const std::vector<u32>& images() const { return images_; }

  Permutation operator*(const Permutation& o) const {
    if (degree() != o.degree()) throw Error("permutation degrees differ");
    std::vector<u32> im(degree());
    for (std::size_t x = 0; x < degree(); ++x) im[x] = images_[o.images_[x]];
    return Permutation(std::move(im));
  }

  Permutation inverse() const {
    std::vector<u32> im(degree());
    for (std::size_t x = 0; x < degree(); ++x) im[images_[x]] = u32(x);
    return Permutation(std::move(im));
  }

  bool is_identity() const {
    for (std::size_t x = 0; x < degree(); ++x)
      if (images_[x] != x) return false;
    return true;
  }

  bool operator==(const Permutation& o) const { return images_ == o.images_; }
  bool operator!=(const Permutation& o) const { return !(*this == o); }

 private:
  std::vector<u32> images_;
};

// Finite permutation group as an indexed element table.  Index 0 is the
// identity; the rest follow closure discovery order, so indexing is a pure
// function of the generator list.  Immutable once built.
class FiniteGroup {
 public:
  static FiniteGroup from_generators(std::vector<Permutation> gens,
                                     std::size_t order_cap = kDefaultOrderCap) {
    return FiniteGroup(std::move(gens), order_cap);
  }

  // Rotation of n points; n = 1 degenerates to the trivial group.
  static FiniteGroup cyclic(std::size_t n, std::size_t order_cap = kDefaultOrderCap) {
    require_positive(n);
    std::vector<u32> im(n);
    for (std::size_t i = 0; i < n; ++i) im[i] = u32((i + 1) % n);
    return from_generators({Permutation(std::move(im))}, order_cap);
  }

  // Symmetries of the n-gon, order 2n.  n <= 2 has no faithful action on n
  // points, so those cases use 2 and 4 points instead.
  static FiniteGroup dihedral(std::size_t n, std::size_t order_cap = kDefaultOrderCap) {
    require_positive(n);
    if (n == 1) return from_generators({Permutation::from_cycles("(0 1)")}, order_cap);
    if (n == 2)
      return from_generators(
          {Permutation::from_cycles("(0 1)", 4), Permutation::from_cycles("(2 3)", 4)},
          order_cap);
    std::vector<u32> rot(n), ref(n);
    for (std::size_t i = 0; i < n; ++i) {
      rot[i] = u32((i + 1) % n);
      ref[i] = u32((n - i) % n);
    }
    return from_generators({Permutation(std::move(rot)), Permutation(std::move(ref))},
                           order_cap);
  }

  static FiniteGroup symmetric(std::size_t n, std::size_t order_cap = kDefaultOrderCap) {
    require_positive(n);
    if (n == 1) return from_generators({Permutation::identity(1)}, order_cap);
    std::vector<u32> cyc(n);
    for (std::size_t i = 0; i < n; ++i) cyc[i] = u32((i + 1) % n);
    return from_generators(
        {Permutation::from_cycles("(0 1)", n), Permutation(std::move(cyc))}, order_cap);
  }

  std::size_t order() const { return elements_.size(); }
  std::size_t degree() const { return elements_[0].degree(); }
  u32 identity_index() const { return 0; }
  const Permutation& element(u32 i) const { return elements_.at(i); }
  const std::vector<Permutation>& generators() const { return gens_; }

  u32 mult(u32 i, u32 j) const {
    if (i >= order() || j >= order()) throw Error("group multiplication: index out of range");
    if (!table_.empty()) return table_[i * order() + j];
    const auto it = index_.find((elements_[i] * elements_[j]).images());
    return it->second;
  }

  u32 inv(u32 i) const { return inv_.at(i); }

  std::optional<u32> index_of(const Permutation& p) const {
    const auto it = index_.find(p.images());
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  // Generator indices whose left-to-right product is element i; empty for
  // the identity.  Module actions evaluate elements through these words.
  const std::vector<u32>& word(u32 i) const { return words_.at(i); }

  bool operator==(const FiniteGroup& o) const { return elements_ == o.elements_; }
  bool operator!=(const FiniteGroup& o) const { return !(*this == o); }

 private:
  static void require_positive(std::size_t n) {
    if (n < 1) throw Error("named group size must be at least 1");
  }

  FiniteGroup(std::vector<Permutation> gens, std::size_t order_cap) : gens_(std::move(gens)) {
    const std::size_t degree = gens_.empty() ? 1 : gens_[0].degree();
    for (const auto& g : gens_)
      if (g.degree() != degree) throw Error("generators act on different domains");
    elements_.push_back(Permutation::identity(degree));
    words_.push_back({});
    index_.emplace(elements_[0].images(), 0);
    for (std::size_t cur = 0; cur < elements_.size(); ++cur)
      for (std::size_t gi = 0; gi < gens_.size(); ++gi) {
        Permutation next = elements_[cur] * gens_[gi];
        if (index_.count(next.images())) continue;
        if (elements_.size() >= order_cap)
          throw CapError("group closure exceeds order cap " + std::to_string(order_cap));
        index_.emplace(next.images(), u32(elements_.size()));
        auto w = words_[cur];
        w.push_back(u32(gi));
        words_.push_back(std::move(w));
        elements_.push_back(std::move(next));
      }
    inv_.resize(order());
    for (u32 i = 0; i < order(); ++i) inv_[i] = *index_of(elements_[i].inverse());
    if (order() <= kMultTableCap) {
      table_.resize(order() * order());
      for (u32 i = 0; i < order(); ++i)
        for (u32 j = 0; j < order(); ++j)
          table_[i * order() + j] = u16(*index_of(elements_[i] * elements_[j]));
    }
  }

  std::vector<Permutation> gens_;
  std::vector<Permutation> elements_;
  std::vector<std::vector<u32>> words_;
  std::map<std::vector<u32>, u32> index_;
  std::vector<u32> inv_;
  std::vector<u16> table_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

inline GroupPtr share(FiniteGroup g) { return std::make_shared<const FiniteGroup>(std::move(g)); }

inline bool same_group(const GroupPtr& a, const GroupPtr& b) {
  return a == b || *a == *b;
}

inline GroupPtr named_group(const std::string& kind, std::size_t n,
                            std::size_t order_cap = kDefaultOrderCap) {
  if (kind == "cyclic") return share(FiniteGroup::cyclic(n, order_cap));
  if (kind == "dihedral") return share(FiniteGroup::dihedral(n, order_cap));
  if (kind == "symmetric") return share(FiniteGroup::symmetric(n, order_cap));
  throw Error("unknown group kind \"" + kind + "\"");
}

// Injective homomorphism sub -> sup recorded as an index map, verified
// multiplicative on all pairs at construction.
class SubgroupEmbedding {
 public:
  static SubgroupEmbedding embed(const std::vector<Permutation>& sub_gens, GroupPtr sup) {
    for (const auto& g : sub_gens)
      if (!sup->index_of(g))
        throw Error("subgroup generator is not an element of the containing group");
    auto sub = share(FiniteGroup::from_generators(sub_gens, sup->order()));
    return from_groups(std::move(sub), std::move(sup));
  }

  // Match elements of an independently built subgroup by their permutations.
  static SubgroupEmbedding from_groups(GroupPtr sub, GroupPtr sup) {
    if (sub->degree() != sup->degree())
      throw Error("subgroup embedding: groups act on different domains");
    std::vector<u32> map(sub->order());
    for (u32 i = 0; i < sub->order(); ++i) {
      const auto idx = sup->index_of(sub->element(i));
      if (!idx) throw Error("subgroup embedding: element missing from the containing group");
      map[i] = *idx;
    }
    return SubgroupEmbedding(std::move(sub), std::move(sup), std::move(map));
  }

  static SubgroupEmbedding identity(GroupPtr g) {
    std::vector<u32> map(g->order());
    for (u32 i = 0; i < g->order(); ++i) map[i] = i;
    return SubgroupEmbedding(g, g, std::move(map));
  }

  // Composition along a chain: this (A -> B) followed by next (B -> C).
  SubgroupEmbedding then(const SubgroupEmbedding& next) const {
    if (!same_group(sup_, next.sub_))
      throw Error("embedding composition: middle groups differ");
    std::vector<u32> map(sub_->order());
    for (u32 i = 0; i < sub_->order(); ++i) map[i] = next.map_[map_[i]];
    return SubgroupEmbedding(sub_, next.sup_, std::move(map));
  }

  const GroupPtr& sub() const { return sub_; }
  const GroupPtr& sup() const { return sup_; }
  u32 map(u32 i) const { return map_.at(i); }
  const std::vector<u32>& index_map() const { return map_; }

 private:
  SubgroupEmbedding(GroupPtr sub, GroupPtr sup, std::vector<u32> map)
      : sub_(std::move(sub)), sup_(std::move(sup)), map_(std::move(map)) {
    std::vector<bool> seen(sup_->order(), false);
    for (u32 v : map_) {
      if (seen[v]) throw Error("subgroup embedding: index map is not injective");
      seen[v] = true;
    }
    for (u32 i = 0; i < sub_->order(); ++i)
      for (u32 j = 0; j < sub_->order(); ++j)
        if (map_[sub_->mult(i, j)] != sup_->mult(map_[i], map_[j]))
          throw Error("subgroup embedding: index map is not multiplicative");
  }

  GroupPtr sub_;
  GroupPtr sup_;
  std::vector<u32> map_;
};

}  // namespace locoh
