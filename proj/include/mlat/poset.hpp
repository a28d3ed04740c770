#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mlat/error.hpp"

namespace mlat {

using Mask = std::uint64_t;
inline constexpr std::size_t kMaxCarrier = 64;

namespace bits {
constexpr Mask bit(std::size_t i) { return Mask{1} << i; }
constexpr Mask all(std::size_t n) { return n >= 64 ? ~Mask{0} : bit(n) - 1; }
constexpr bool has(Mask m, std::size_t i) { return (m >> i) & 1u; }
constexpr bool subset(Mask a, Mask b) { return (a & ~b) == 0; }
constexpr std::size_t count(Mask m) { return static_cast<std::size_t>(std::popcount(m)); }
constexpr std::size_t lowest(Mask m) { return static_cast<std::size_t>(std::countr_zero(m)); }

template <class F>
void for_each(Mask m, F&& f) {
  while (m) {
    f(lowest(m));
    m &= m - 1;
  }
}

inline std::vector<std::size_t> to_vector(Mask m) {
  std::vector<std::size_t> out;
  for_each(m, [&](std::size_t i) { out.push_back(i); });
  return out;
}
}  // namespace bits

inline void require_carrier(std::size_t n) {
  if (n > kMaxCarrier)
    throw ResourceError("carrier of " + std::to_string(n) + " elements exceeds the limit of " +
                        std::to_string(kMaxCarrier));
}

inline std::vector<std::string> default_names(std::size_t n, const std::string& prefix = "x") {
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

/// Subset of a fixed finite carrier {0, ..., carrier-1}.
class ElementSet {
 public:
  ElementSet() = default;
  ElementSet(std::size_t carrier, Mask members) : carrier_(carrier), mask_(members & bits::all(carrier)) {
    require_carrier(carrier);
  }
  static ElementSet empty(std::size_t carrier) { return {carrier, 0}; }
  static ElementSet full(std::size_t carrier) { return {carrier, bits::all(carrier)}; }
  static ElementSet of(std::size_t carrier, std::initializer_list<std::size_t> xs) {
    Mask m = 0;
    for (auto x : xs) m |= bits::bit(x);
    return {carrier, m};
  }

  std::size_t carrier() const { return carrier_; }
  Mask mask() const { return mask_; }
  std::size_t size() const { return bits::count(mask_); }
  bool is_empty() const { return mask_ == 0; }
  bool contains(std::size_t x) const { return x < carrier_ && bits::has(mask_, x); }
  void insert(std::size_t x) {
    if (x >= carrier_) throw StructuralError("element index outside carrier");
    mask_ |= bits::bit(x);
  }
  std::vector<std::size_t> elements() const { return bits::to_vector(mask_); }

  bool subset_of(const ElementSet& o) const {
    same(o);
    return bits::subset(mask_, o.mask_);
  }
  ElementSet complement() const { return {carrier_, ~mask_}; }
  ElementSet operator|(const ElementSet& o) const { return same(o), ElementSet{carrier_, mask_ | o.mask_}; }
  ElementSet operator&(const ElementSet& o) const { return same(o), ElementSet{carrier_, mask_ & o.mask_}; }
  ElementSet operator-(const ElementSet& o) const { return same(o), ElementSet{carrier_, mask_ & ~o.mask_}; }
  bool operator==(const ElementSet& o) const = default;
  auto operator<=>(const ElementSet& o) const = default;

 private:
  void same(const ElementSet& o) const {
    if (carrier_ != o.carrier_) throw StructuralError("operands live on different carriers");
  }
  std::size_t carrier_ = 0;
  Mask mask_ = 0;
};

/// Binary relation on {0..n-1}; rows[x] is the set of y with (x,y) in the relation.
struct BinRelation {
  std::size_t n = 0;
  std::vector<Mask> rows;

  static BinRelation identity(std::size_t n) {
    BinRelation r{n, std::vector<Mask>(n)};
    for (std::size_t i = 0; i < n; ++i) r.rows[i] = bits::bit(i);
    return r;
  }
  static BinRelation full(std::size_t n) { return {n, std::vector<Mask>(n, bits::all(n))}; }

  bool contains(std::size_t x, std::size_t y) const { return bits::has(rows[x], y); }
  Mask image(Mask s) const {
    Mask out = 0;
    bits::for_each(s, [&](std::size_t x) { out |= rows[x]; });
    return out;
  }
  bool subset_of(const BinRelation& o) const {
    for (std::size_t i = 0; i < n; ++i)
      if (!bits::subset(rows[i], o.rows[i])) return false;
    return true;
  }
  BinRelation converse() const {
    BinRelation r{n, std::vector<Mask>(n)};
    for (std::size_t x = 0; x < n; ++x)
      bits::for_each(rows[x], [&](std::size_t y) { r.rows[y] |= bits::bit(x); });
    return r;
  }
  bool is_reflexive() const {
    for (std::size_t i = 0; i < n; ++i)
      if (!contains(i, i)) return false;
    return true;
  }
  bool is_symmetric() const { return *this == converse(); }
  bool is_transitive() const {
    for (std::size_t x = 0; x < n; ++x)
      if (!bits::subset(image(rows[x]), rows[x])) return false;
    return true;
  }
  bool is_antisymmetric() const {
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = x + 1; y < n; ++y)
        if (contains(x, y) && contains(y, x)) return false;
    return true;
  }
  bool operator==(const BinRelation&) const = default;
};

/// Relational product: (x,y) in compose(r, t) iff some z has (x,z) in t and (z,y) in r.
/// The right operand acts first.
inline BinRelation compose(const BinRelation& r, const BinRelation& t) {
  if (r.n != t.n) throw StructuralError("composing relations on different carriers");
  BinRelation out{t.n, std::vector<Mask>(t.n)};
  for (std::size_t x = 0; x < t.n; ++x) out.rows[x] = r.image(t.rows[x]);
  return out;
}

/// Equivalence relation stored as its canonical partition: blocks ordered by least member.
class EquivRelation {
 public:
  EquivRelation() = default;

  static EquivRelation identity(std::size_t n) {
    std::vector<std::size_t> labels(n);
    std::iota(labels.begin(), labels.end(), 0);
    return from_labels(labels);
  }
  static EquivRelation full(std::size_t n) { return from_labels(std::vector<std::size_t>(n, 0)); }

  /// Any labelling; elements with equal labels share a block.
  static EquivRelation from_labels(std::span<const std::size_t> labels) {
    require_carrier(labels.size());
    EquivRelation e;
    e.n_ = labels.size();
    e.block_of_.assign(e.n_, 0);
    std::vector<std::pair<std::size_t, std::size_t>> seen;  // label -> block
    for (std::size_t x = 0; x < e.n_; ++x) {
      auto it = std::find_if(seen.begin(), seen.end(), [&](auto& p) { return p.first == labels[x]; });
      std::size_t b;
      if (it == seen.end()) {
        b = e.blocks_.size();
        seen.emplace_back(labels[x], b);
        e.blocks_.push_back(0);
      } else {
        b = it->second;
      }
      e.blocks_[b] |= bits::bit(x);
      e.block_of_[x] = b;
    }
    return e;
  }

  /// Blocks must be non-empty, pairwise disjoint and cover {0..n-1}.
  static EquivRelation from_blocks(std::size_t n, std::span<const Mask> blocks) {
    require_carrier(n);
    std::vector<std::size_t> labels(n, SIZE_MAX);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (blocks[b] == 0) throw StructuralError("empty equivalence class");
      if (!bits::subset(blocks[b], bits::all(n))) throw StructuralError("class member outside carrier");
      bits::for_each(blocks[b], [&](std::size_t x) {
        if (labels[x] != SIZE_MAX) throw StructuralError("classes overlap");
        labels[x] = b;
      });
    }
    for (auto l : labels)
      if (l == SIZE_MAX) throw StructuralError("classes do not cover the carrier");
    return from_labels(labels);
  }

  static EquivRelation from_relation(const BinRelation& r) {
    if (!r.is_reflexive() || !r.is_symmetric() || !r.is_transitive())
      throw StructuralError("relation is not an equivalence");
    std::vector<std::size_t> labels(r.n);
    for (std::size_t x = 0; x < r.n; ++x) labels[x] = bits::lowest(r.rows[x]);
    return from_labels(labels);
  }

  std::size_t size() const { return n_; }
  std::size_t block_count() const { return blocks_.size(); }
  const std::vector<Mask>& blocks() const { return blocks_; }
  std::size_t block_of(std::size_t x) const { return block_of_[x]; }
  Mask class_of(std::size_t x) const { return blocks_[block_of_[x]]; }
  bool related(std::size_t x, std::size_t y) const { return block_of_[x] == block_of_[y]; }
  Mask image(Mask s) const {
    Mask out = 0;
    for (Mask b : blocks_)
      if (b & s) out |= b;
    return out;
  }
  bool is_identity() const { return blocks_.size() == n_; }
  bool is_full() const { return blocks_.size() <= 1; }
  /// Every block of *this lies inside a block of `coarser`.
  bool refines(const EquivRelation& coarser) const {
    if (n_ != coarser.n_) throw StructuralError("partitions of different carriers");
    for (Mask b : blocks_)
      if (!bits::subset(b, coarser.class_of(bits::lowest(b)))) return false;
    return true;
  }
  BinRelation to_relation() const {
    BinRelation r{n_, std::vector<Mask>(n_)};
    for (std::size_t x = 0; x < n_; ++x) r.rows[x] = class_of(x);
    return r;
  }
  bool operator==(const EquivRelation& o) const { return n_ == o.n_ && blocks_ == o.blocks_; }

 private:
  std::size_t n_ = 0;
  std::vector<Mask> blocks_;
  std::vector<std::size_t> block_of_;
};

/// Visits every partition of {0..n-1} once, in restricted-growth-string order.
template <class F>
void for_each_partition(std::size_t n, F&& f) {
  require_carrier(n);
  if (n == 0) {
    f(EquivRelation::identity(0));
    return;
  }
  std::vector<std::size_t> a(n, 0), mx(n, 0);  // mx[i] = max(a[0..i-1])
  for (;;) {
    f(EquivRelation::from_labels(a));
    std::size_t i = n - 1;
    while (i > 0 && a[i] == mx[i] + 1) --i;
    if (i == 0) return;
    ++a[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      a[j] = 0;
      mx[j] = std::max(mx[j - 1], a[j - 1]);
    }
  }
}

inline std::vector<EquivRelation> all_partitions(std::size_t n) {
  std::vector<EquivRelation> out;
  for_each_partition(n, [&](const EquivRelation& e) { out.push_back(e); });
  return out;
}

/// Finite partial order. Stores, for each element, the masks of its up-set and down-set.
class FinitePoset {
 public:
  FinitePoset() : names_(std::make_shared<std::vector<std::string>>()) {}

  /// Reflexive-transitive closure of the generator pairs (a, b) meaning a <= b.
  /// Throws OrderCycleError when the closure identifies distinct elements.
  static FinitePoset from_pairs(std::vector<std::string> names,
                                std::span<const std::pair<std::string, std::string>> pairs) {
    std::vector<std::pair<std::size_t, std::size_t>> idx;
    idx.reserve(pairs.size());
    auto lookup = [&](const std::string& s) {
      auto it = std::find(names.begin(), names.end(), s);
      if (it == names.end()) throw StructuralError("unknown element '" + s + "' in order pair");
      return static_cast<std::size_t>(it - names.begin());
    };
    for (auto& [a, b] : pairs) idx.emplace_back(lookup(a), lookup(b));
    return from_index_pairs(std::move(names), idx);
  }

  static FinitePoset from_index_pairs(std::vector<std::string> names,
                                      std::span<const std::pair<std::size_t, std::size_t>> pairs) {
    const std::size_t n = names.size();
    require_carrier(n);
    check_names(names);
    std::vector<Mask> gen(n, 0);
    for (auto [a, b] : pairs) {
      if (a >= n || b >= n) throw StructuralError("order pair outside carrier");
      gen[a] |= bits::bit(b);
    }
    std::vector<Mask> up(n);
    for (std::size_t i = 0; i < n; ++i) up[i] = gen[i] | bits::bit(i);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        if (bits::has(up[i], k)) up[i] |= up[k];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (bits::has(up[i], j) && bits::has(up[j], i)) {
          auto cyc = find_cycle(gen, i, j, names);
          std::string msg = "order has a cycle through distinct elements:";
          for (std::size_t k = 0; k < cyc.size(); ++k) msg += (k ? " <= " : " ") + cyc[k];
          throw OrderCycleError(msg, std::move(cyc));
        }
    return from_up_masks_unchecked(std::move(names), std::move(up));
  }

  /// `up[i]` must be the up-set of i in a partial order; verified.
  static FinitePoset from_up_masks(std::vector<std::string> names, std::vector<Mask> up) {
    require_carrier(names.size());
    check_names(names);
    if (up.size() != names.size()) throw StructuralError("up-set table has wrong length");
    BinRelation r{names.size(), up};
    if (!r.is_reflexive() || !r.is_transitive() || !r.is_antisymmetric())
      throw StructuralError("up-set table does not describe a partial order");
    return from_up_masks_unchecked(std::move(names), std::move(up));
  }

  static FinitePoset chain(std::size_t n, std::vector<std::string> names = {}) {
    if (names.empty()) names = default_names(n);
    std::vector<Mask> up(n);
    for (std::size_t i = 0; i < n; ++i) up[i] = bits::all(n) & ~bits::all(i);
    return from_up_masks(std::move(names), std::move(up));
  }
  static FinitePoset antichain(std::size_t n, std::vector<std::string> names = {}) {
    if (names.empty()) names = default_names(n);
    std::vector<Mask> up(n);
    for (std::size_t i = 0; i < n; ++i) up[i] = bits::bit(i);
    return from_up_masks(std::move(names), std::move(up));
  }

  std::size_t size() const { return up_.size(); }
  const std::string& name(std::size_t i) const { return (*names_)[i]; }
  const std::vector<std::string>& names() const { return *names_; }
  std::optional<std::size_t> index_of(const std::string& s) const {
    auto it = std::find(names_->begin(), names_->end(), s);
    if (it == names_->end()) return std::nullopt;
    return static_cast<std::size_t>(it - names_->begin());
  }

  bool leq(std::size_t a, std::size_t b) const { return bits::has(up_[a], b); }
  Mask up(std::size_t a) const { return up_[a]; }
  Mask down(std::size_t a) const { return down_[a]; }
  Mask all() const { return bits::all(size()); }

  /// [S): smallest increasing superset.
  Mask up_closure(Mask s) const {
    Mask out = 0;
    bits::for_each(s, [&](std::size_t x) { out |= up_[x]; });
    return out;
  }
  /// (S]: smallest decreasing superset.
  Mask down_closure(Mask s) const {
    Mask out = 0;
    bits::for_each(s, [&](std::size_t x) { out |= down_[x]; });
    return out;
  }
  ElementSet up_set(const ElementSet& s) const { return {size(), up_closure(carrier_mask(s))}; }
  ElementSet down_set(const ElementSet& s) const { return {size(), down_closure(carrier_mask(s))}; }
  bool is_increasing(Mask s) const { return up_closure(s) == s; }
  bool is_decreasing(Mask s) const { return down_closure(s) == s; }

  Mask minimal(Mask s) const {
    Mask out = 0;
    bits::for_each(s, [&](std::size_t x) {
      if ((down_[x] & s) == bits::bit(x)) out |= bits::bit(x);
    });
    return out;
  }
  Mask maximal(Mask s) const {
    Mask out = 0;
    bits::for_each(s, [&](std::size_t x) {
      if ((up_[x] & s) == bits::bit(x)) out |= bits::bit(x);
    });
    return out;
  }
  /// Minimal and maximal elements of S.
  std::pair<ElementSet, ElementSet> extremes(const ElementSet& s) const {
    Mask m = carrier_mask(s);
    return {ElementSet{size(), minimal(m)}, ElementSet{size(), maximal(m)}};
  }

  /// All increasing subsets, sorted by mask value (so the empty set comes first).
  std::vector<Mask> all_up_sets() const {
    std::vector<Mask> out;
    // Decide elements in order of decreasing down-set size: an element can be excluded only
    // if no element below it was included, and must be included if one was.
    std::vector<std::size_t> order(size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](auto a, auto b) { return bits::count(down_[a]) < bits::count(down_[b]); });
    std::function<void(std::size_t, Mask)> rec = [&](std::size_t k, Mask cur) {
      if (k == order.size()) {
        out.push_back(cur);
        return;
      }
      std::size_t x = order[k];
      Mask below = down_[x] & ~bits::bit(x);
      if (below & cur) {
        rec(k + 1, cur | bits::bit(x));
        return;
      }
      rec(k + 1, cur);
      rec(k + 1, cur | bits::bit(x));
    };
    rec(0, 0);
    std::sort(out.begin(), out.end());
    return out;
  }

  BinRelation leq_relation() const { return {size(), up_}; }

  std::vector<std::pair<std::size_t, std::size_t>> covers() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < size(); ++a)
      bits::for_each(up_[a] & ~bits::bit(a), [&](std::size_t b) {
        Mask between = up_[a] & down_[b] & ~bits::bit(a) & ~bits::bit(b);
        if (!between) out.emplace_back(a, b);
      });
    return out;
  }

  bool operator==(const FinitePoset& o) const { return up_ == o.up_ && names() == o.names(); }

 private:
  static void check_names(const std::vector<std::string>& names) {
    auto sorted = names;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw StructuralError("duplicate element name");
  }

  static FinitePoset from_up_masks_unchecked(std::vector<std::string> names, std::vector<Mask> up) {
    FinitePoset p;
    p.names_ = std::make_shared<const std::vector<std::string>>(std::move(names));
    p.down_.assign(up.size(), 0);
    for (std::size_t i = 0; i < up.size(); ++i)
      bits::for_each(up[i], [&](std::size_t j) { p.down_[j] |= bits::bit(i); });
    p.up_ = std::move(up);
    return p;
  }

  // Path i -> ... -> j -> ... -> i in the generator graph, as names.
  static std::vector<std::string> find_cycle(const std::vector<Mask>& gen, std::size_t i, std::size_t j,
                                             const std::vector<std::string>& names) {
    auto path = [&](std::size_t from, std::size_t to) {
      std::vector<std::size_t> prev(gen.size(), SIZE_MAX);
      std::vector<std::size_t> queue{from};
      prev[from] = from;
      for (std::size_t q = 0; q < queue.size(); ++q) {
        std::size_t x = queue[q];
        if (x == to) break;
        bits::for_each(gen[x], [&](std::size_t y) {
          if (prev[y] == SIZE_MAX) {
            prev[y] = x;
            queue.push_back(y);
          }
        });
      }
      std::vector<std::size_t> p;
      for (std::size_t x = to; x != from; x = prev[x]) p.push_back(x);
      std::reverse(p.begin(), p.end());
      return p;
    };
    std::vector<std::string> out{names[i]};
    for (auto x : path(i, j)) out.push_back(names[x]);
    for (auto x : path(j, i)) out.push_back(names[x]);
    return out;
  }

  Mask carrier_mask(const ElementSet& s) const {
    if (s.carrier() != size()) throw StructuralError("set does not live on this poset's carrier");
    return s.mask();
  }

  std::shared_ptr<const std::vector<std::string>> names_;
  std::vector<Mask> up_, down_;
};

/// Visits every partial order on {0..n-1} (labelled, so isomorphic copies are repeated).
/// Each unordered pair is independently incomparable, below or above; transitive choices are kept.
template <class F>
void for_each_labeled_poset(std::size_t n, F&& f, std::vector<std::string> names = {}) {
  if (n > 6) throw ResourceError("labelled poset enumeration is limited to 6 points");
  if (names.empty()) names = default_names(n, "p");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  std::vector<int> state(pairs.size(), 0);
  auto shared = std::make_shared<const std::vector<std::string>>(names);
  for (;;) {
    std::vector<Mask> up(n);
    for (std::size_t i = 0; i < n; ++i) up[i] = bits::bit(i);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      auto [i, j] = pairs[k];
      if (state[k] == 1) up[i] |= bits::bit(j);
      if (state[k] == 2) up[j] |= bits::bit(i);
    }
    bool transitive = true;
    for (std::size_t i = 0; i < n && transitive; ++i)
      bits::for_each(up[i], [&](std::size_t j) {
        if (!bits::subset(up[j], up[i])) transitive = false;
      });
    if (transitive) f(FinitePoset::from_up_masks(*shared, up));
    std::size_t k = 0;
    while (k < state.size() && state[k] == 2) state[k++] = 0;
    if (k == state.size()) return;
    ++state[k];
  }
}

inline std::vector<FinitePoset> all_labeled_posets(std::size_t n) {
  std::vector<FinitePoset> out;
  for_each_labeled_poset(n, [&](const FinitePoset& p) { out.push_back(p); });
  return out;
}

}  // namespace mlat
