#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace interpcat {

// Ground-set size limit for enumeration, overridable with INTERPCAT_MAX_ELEMENTS.
inline std::size_t default_partition_limit() {
  if (const char* env = std::getenv("INTERPCAT_MAX_ELEMENTS")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return 12;
}

namespace detail {

// Relabels so that labels appear in order of first occurrence.
inline std::pair<std::vector<std::uint32_t>, std::size_t> canonical_labels(const std::vector<std::size_t>& raw) {
  std::map<std::size_t, std::uint32_t> seen;
  std::vector<std::uint32_t> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto [it, inserted] = seen.emplace(raw[i], static_cast<std::uint32_t>(seen.size()));
    out[i] = it->second;
  }
  return {out, seen.size()};
}

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> parent;
};

}  // namespace detail

// Set partition of {0..n-1} stored as a restricted growth string.
class SetPartition {
 public:
  SetPartition() = default;

  // Any labelling is accepted and canonicalized.
  static SetPartition from_labels(const std::vector<std::size_t>& raw) {
    SetPartition p;
    auto [labels, count] = detail::canonical_labels(raw);
    p.labels_ = std::move(labels);
    p.blocks_ = count;
    return p;
  }

  static SetPartition from_blocks(std::size_t n, const std::vector<std::vector<std::size_t>>& blocks) {
    std::vector<std::size_t> raw(n, SIZE_MAX);
    for (std::size_t b = 0; b < blocks.size(); ++b)
      for (auto x : blocks[b]) {
        if (x >= n || raw[x] != SIZE_MAX) throw ArgumentError("blocks do not partition the ground set");
        raw[x] = b;
      }
    for (auto x : raw)
      if (x == SIZE_MAX) throw ArgumentError("blocks do not cover the ground set");
    return from_labels(raw);
  }

  std::size_t size() const { return labels_.size(); }
  std::size_t block_count() const { return blocks_; }
  std::size_t label(std::size_t i) const { return labels_[i]; }
  const std::vector<std::uint32_t>& labels() const { return labels_; }

  std::vector<std::vector<std::size_t>> blocks() const {
    std::vector<std::vector<std::size_t>> out(blocks_);
    for (std::size_t i = 0; i < labels_.size(); ++i) out[labels_[i]].push_back(i);
    return out;
  }

  std::string to_string() const {
    std::string s;
    for (const auto& b : blocks()) {
      s += '{';
      for (std::size_t k = 0; k < b.size(); ++k) {
        if (k) s += ',';
        s += std::to_string(b[k]);
      }
      s += '}';
    }
    return s;
  }

  friend bool operator==(const SetPartition&, const SetPartition&) = default;
  friend auto operator<=>(const SetPartition& a, const SetPartition& b) { return a.labels_ <=> b.labels_; }

 private:
  std::vector<std::uint32_t> labels_;
  std::size_t blocks_ = 0;
};

// q refines p (every block of q lies inside a block of p).
inline bool coarser_or_equal(const SetPartition& p, const SetPartition& q) {
  if (p.size() != q.size()) throw ArgumentError("partitions of different ground sets");
  std::vector<std::size_t> image(q.block_count(), SIZE_MAX);
  for (std::size_t i = 0; i < q.size(); ++i) {
    auto& slot = image[q.label(i)];
    if (slot == SIZE_MAX)
      slot = p.label(i);
    else if (slot != p.label(i))
      return false;
  }
  return true;
}

// Blocks are the nonempty intersections of blocks of p and q.
inline SetPartition common_refinement(const SetPartition& p, const SetPartition& q) {
  if (p.size() != q.size()) throw ArgumentError("partitions of different ground sets");
  std::vector<std::size_t> raw(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) raw[i] = p.label(i) * (q.block_count() + 1) + q.label(i);
  return SetPartition::from_labels(raw);
}

// Finest partition coarser than both.
inline SetPartition common_coarsening(const SetPartition& p, const SetPartition& q) {
  if (p.size() != q.size()) throw ArgumentError("partitions of different ground sets");
  detail::UnionFind uf(p.size());
  std::vector<std::size_t> first_p(p.block_count(), SIZE_MAX), first_q(q.block_count(), SIZE_MAX);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (first_p[p.label(i)] == SIZE_MAX) first_p[p.label(i)] = i;
    uf.unite(i, first_p[p.label(i)]);
    if (first_q[q.label(i)] == SIZE_MAX) first_q[q.label(i)] = i;
    uf.unite(i, first_q[q.label(i)]);
  }
  std::vector<std::size_t> raw(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) raw[i] = uf.find(i);
  return SetPartition::from_labels(raw);
}

// Partition of the disjoint union of finite sets (factors) that meets every factor at most
// once per block. Elements are numbered factor by factor.
class Recollement {
 public:
  Recollement() = default;

  static Recollement from_labels(std::vector<std::size_t> sizes, const std::vector<std::size_t>& raw) {
    Recollement r;
    r.sizes_ = std::move(sizes);
    std::size_t total = 0;
    for (auto s : r.sizes_) total += s;
    if (raw.size() != total) throw ArgumentError("label count does not match factor sizes");
    r.part_ = SetPartition::from_labels(raw);
    if (!r.injective()) throw ArgumentError("partition is not injective on every factor");
    return r;
  }

  static Recollement from_partition(std::vector<std::size_t> sizes, SetPartition p) {
    Recollement r;
    r.sizes_ = std::move(sizes);
    std::size_t total = 0;
    for (auto s : r.sizes_) total += s;
    if (p.size() != total) throw ArgumentError("partition size does not match factor sizes");
    r.part_ = std::move(p);
    if (!r.injective()) throw ArgumentError("partition is not injective on every factor");
    return r;
  }

  const std::vector<std::size_t>& sizes() const { return sizes_; }
  std::size_t factor_count() const { return sizes_.size(); }
  std::size_t size() const { return part_.size(); }
  std::size_t block_count() const { return part_.block_count(); }
  std::size_t label(std::size_t global) const { return part_.label(global); }
  const SetPartition& partition() const { return part_; }

  std::size_t offset(std::size_t factor) const {
    std::size_t o = 0;
    for (std::size_t f = 0; f < factor; ++f) o += sizes_[f];
    return o;
  }
  std::size_t factor_of(std::size_t global) const {
    std::size_t f = 0;
    while (global >= sizes_[f]) global -= sizes_[f++];
    return f;
  }

  std::vector<std::vector<std::size_t>> blocks() const { return part_.blocks(); }

  std::vector<std::size_t> block_sizes() const {
    std::vector<std::size_t> out(block_count());
    for (std::size_t i = 0; i < size(); ++i) ++out[label(i)];
    return out;
  }

  std::string to_string() const {
    std::string s;
    for (const auto& b : blocks()) {
      s += '{';
      for (std::size_t k = 0; k < b.size(); ++k) {
        if (k) s += ',';
        std::size_t f = factor_of(b[k]);
        s += std::to_string(f) + ":" + std::to_string(b[k] - offset(f));
      }
      s += '}';
    }
    return s;
  }

  friend bool operator==(const Recollement&, const Recollement&) = default;
  friend auto operator<=>(const Recollement& a, const Recollement& b) {
    if (auto c = a.sizes_ <=> b.sizes_; c != 0) return c;
    return a.part_ <=> b.part_;
  }

 private:
  bool injective() const {
    std::size_t g = 0;
    std::vector<char> used;
    for (auto s : sizes_) {
      used.assign(part_.block_count(), 0);
      for (std::size_t i = 0; i < s; ++i, ++g) {
        if (used[part_.label(g)]) return false;
        used[part_.label(g)] = 1;
      }
    }
    return true;
  }

  std::vector<std::size_t> sizes_;
  SetPartition part_;
};

namespace detail {

inline void check_limit(std::size_t n, std::size_t limit) {
  if (n > limit)
    throw ResourceError("enumeration over " + std::to_string(n) + " elements exceeds the limit of " +
                        std::to_string(limit));
}

inline void enumerate_rgs(const std::vector<std::size_t>& factor_of, std::size_t pos, std::vector<std::size_t>& cur,
                          std::vector<std::uint64_t>& block_mask, std::vector<std::vector<std::size_t>>& out) {
  if (pos == factor_of.size()) {
    out.push_back(cur);
    return;
  }
  std::uint64_t bit = std::uint64_t{1} << (factor_of[pos] % 64);
  for (std::size_t b = 0; b <= block_mask.size(); ++b) {
    if (b < block_mask.size()) {
      if (block_mask[b] & bit) continue;
      block_mask[b] |= bit;
    } else {
      block_mask.push_back(bit);
    }
    cur[pos] = b;
    enumerate_rgs(factor_of, pos + 1, cur, block_mask, out);
    if (b + 1 == block_mask.size() && block_mask[b] == bit)
      block_mask.pop_back();
    else
      block_mask[b] &= ~bit;
  }
}

}  // namespace detail

// All partitions of {0..n-1}, lexicographic in restricted growth string order.
inline std::vector<SetPartition> enumerate_partitions(std::size_t n, std::size_t limit = default_partition_limit()) {
  detail::check_limit(n, limit);
  std::vector<std::size_t> factor_of(n);
  std::iota(factor_of.begin(), factor_of.end(), 0);  // distinct factors: no constraint
  std::vector<std::vector<std::size_t>> raw;
  std::vector<std::size_t> cur(n);
  std::vector<std::uint64_t> masks;
  if (n > 64) throw ResourceError("partition enumeration is limited to 64 elements");
  detail::enumerate_rgs(factor_of, 0, cur, masks, raw);
  std::vector<SetPartition> out;
  out.reserve(raw.size());
  for (auto& l : raw) out.push_back(SetPartition::from_labels(l));
  return out;
}

// All recollements of the given factors, lexicographic in restricted growth string order.
inline std::vector<Recollement> enumerate_recollements(const std::vector<std::size_t>& sizes,
                                                       std::size_t limit = default_partition_limit()) {
  std::size_t n = 0;
  for (auto s : sizes) n += s;
  detail::check_limit(n, limit);
  if (sizes.size() > 64) throw ResourceError("at most 64 factors are supported");
  std::vector<std::size_t> factor_of;
  for (std::size_t f = 0; f < sizes.size(); ++f) factor_of.insert(factor_of.end(), sizes[f], f);
  std::vector<std::vector<std::size_t>> raw;
  std::vector<std::size_t> cur(n);
  std::vector<std::uint64_t> masks;
  detail::enumerate_rgs(factor_of, 0, cur, masks, raw);
  std::vector<Recollement> out;
  out.reserve(raw.size());
  for (auto& l : raw) out.push_back(Recollement::from_labels(sizes, l));
  return out;
}

// Memoized variant; the returned reference stays valid for the life of the process.
inline const std::vector<Recollement>& recollements(const std::vector<std::size_t>& sizes) {
  static std::mutex mu;
  static std::map<std::pair<std::vector<std::size_t>, std::size_t>, std::vector<Recollement>> cache;
  std::size_t limit = default_partition_limit();
  std::lock_guard lock(mu);
  auto key = std::make_pair(sizes, limit);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, enumerate_recollements(sizes, limit)).first;
  return it->second;
}

// Restriction to a list of factors (in the listed order). Also returns, for every block of r,
// the label of its trace in the restriction, or nullopt when the block misses those factors.
struct Restriction {
  Recollement result;
  std::vector<std::optional<std::size_t>> block_map;
};

inline Restriction restrict_to(const Recollement& r, const std::vector<std::size_t>& factors) {
  std::vector<std::size_t> sizes, raw;
  for (auto f : factors) {
    if (f >= r.factor_count()) throw ArgumentError("factor index out of range");
    sizes.push_back(r.sizes()[f]);
    std::size_t o = r.offset(f);
    for (std::size_t i = 0; i < r.sizes()[f]; ++i) raw.push_back(r.label(o + i));
  }
  Restriction out;
  out.result = Recollement::from_labels(sizes, raw);
  out.block_map.assign(r.block_count(), std::nullopt);
  for (std::size_t k = 0; k < raw.size(); ++k) out.block_map[raw[k]] = out.result.label(k);
  return out;
}

inline std::vector<std::size_t> factor_range(std::size_t begin, std::size_t end) {
  std::vector<std::size_t> v(end - begin);
  std::iota(v.begin(), v.end(), begin);
  return v;
}

namespace detail {

// Joins r (on factors A then M) and s (on factors M then C) into a labelling of A, M, C.
inline std::optional<Recollement> closure_impl(const Recollement& r, const Recollement& s, std::size_t mid) {
  if (mid > r.factor_count() || mid > s.factor_count()) throw ArgumentError("shared factor count out of range");
  std::size_t a = r.factor_count() - mid;
  for (std::size_t k = 0; k < mid; ++k)
    if (r.sizes()[a + k] != s.sizes()[k]) throw ArgumentError("recollements do not share the middle factors");
  std::vector<std::size_t> sizes(r.sizes().begin(), r.sizes().end());
  sizes.insert(sizes.end(), s.sizes().begin() + mid, s.sizes().end());
  std::size_t n_r = r.size(), n = n_r + s.size() - s.offset(mid);
  std::size_t a_len = r.offset(a);
  UnionFind uf(n);
  std::vector<std::size_t> rep_r(r.block_count(), SIZE_MAX), rep_s(s.block_count(), SIZE_MAX);
  for (std::size_t i = 0; i < n_r; ++i) {
    auto& rep = rep_r[r.label(i)];
    if (rep == SIZE_MAX) rep = i;
    uf.unite(i, rep);
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::size_t global = a_len + i;
    auto& rep = rep_s[s.label(i)];
    if (rep == SIZE_MAX) rep = global;
    uf.unite(global, rep);
  }
  std::vector<std::size_t> raw(n);
  for (std::size_t i = 0; i < n; ++i) raw[i] = uf.find(i);
  std::optional<Recollement> u;
  try {
    u = Recollement::from_labels(sizes, raw);
  } catch (const ArgumentError&) {
    return std::nullopt;
  }
  // With several middle factors the join can glue blocks that r or s keep apart.
  if (mid > 1) {
    if (!(restrict_to(*u, factor_range(0, r.factor_count())).result == r)) return std::nullopt;
    if (!(restrict_to(*u, factor_range(a, sizes.size())).result == s)) return std::nullopt;
  }
  return u;
}

}  // namespace detail

// Finest partition of A,M,C generated by r and s; nullopt when no partition restricts to both.
inline std::optional<Recollement> generated_closure(const Recollement& r, const Recollement& s,
                                                    std::size_t mid_factors = 1) {
  return detail::closure_impl(r, s, mid_factors);
}

namespace detail {

inline void matchings(std::size_t i, const std::vector<std::size_t>& left, const std::vector<std::size_t>& right,
                      std::vector<char>& used, std::vector<std::pair<std::size_t, std::size_t>>& cur,
                      std::vector<std::vector<std::pair<std::size_t, std::size_t>>>& out) {
  if (i == left.size()) {
    out.push_back(cur);
    return;
  }
  matchings(i + 1, left, right, used, cur, out);
  for (std::size_t j = 0; j < right.size(); ++j) {
    if (used[j]) continue;
    used[j] = 1;
    cur.emplace_back(left[i], right[j]);
    matchings(i + 1, left, right, used, cur, out);
    cur.pop_back();
    used[j] = 0;
  }
}

}  // namespace detail

// Every partial matching between two label lists.
inline std::vector<std::vector<std::pair<std::size_t, std::size_t>>> partial_matchings(
    const std::vector<std::size_t>& left, const std::vector<std::size_t>& right) {
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> out;
  std::vector<char> used(right.size(), 0);
  std::vector<std::pair<std::size_t, std::size_t>> cur;
  detail::matchings(0, left, right, used, cur, out);
  return out;
}

// Merges the listed block pairs of r.
inline Recollement merge_blocks(const Recollement& r, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  std::vector<std::size_t> target(r.block_count());
  std::iota(target.begin(), target.end(), 0);
  for (auto [x, y] : pairs) target[y] = x;
  std::vector<std::size_t> raw(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) raw[i] = target[r.label(i)];
  return Recollement::from_labels(r.sizes(), raw);
}

// Recollements u of A,M,C with restriction r to A,M and s to M,C; sorted.
inline std::vector<Recollement> enumerate_compose_fibers(const Recollement& r, const Recollement& s,
                                                         std::size_t mid_factors = 1) {
  auto closure = generated_closure(r, s, mid_factors);
  if (!closure) return {};
  std::size_t a = r.factor_count() - mid_factors;
  std::size_t a_end = r.offset(a);                    // end of A elements
  std::size_t am_end = r.size();                      // end of M elements
  std::vector<char> touches_a(closure->block_count(), 0), touches_m(closure->block_count(), 0),
      touches_c(closure->block_count(), 0);
  for (std::size_t i = 0; i < closure->size(); ++i) {
    auto b = closure->label(i);
    (i < a_end ? touches_a : i < am_end ? touches_m : touches_c)[b] = 1;
  }
  std::vector<std::size_t> a_only, c_only;
  for (std::size_t b = 0; b < closure->block_count(); ++b) {
    if (touches_m[b]) continue;
    if (touches_a[b] && !touches_c[b]) a_only.push_back(b);
    if (touches_c[b] && !touches_a[b]) c_only.push_back(b);
  }
  std::vector<Recollement> out;
  for (const auto& m : partial_matchings(a_only, c_only)) out.push_back(merge_blocks(*closure, m));
  std::sort(out.begin(), out.end());
  return out;
}

// Recollements u of the factors (A, C, B, D) restricting to r on (A, B) and s on (C, D).
// r_source and s_source give the number of source factors of r and s.
inline std::vector<Recollement> enumerate_tensor_fibers(const Recollement& r, std::size_t r_source,
                                                        const Recollement& s, std::size_t s_source) {
  if (r_source > r.factor_count() || s_source > s.factor_count()) throw ArgumentError("source factor count too large");
  std::vector<std::size_t> sizes;
  std::vector<std::size_t> raw;
  auto append = [&](const Recollement& x, std::size_t f_begin, std::size_t f_end, std::size_t shift) {
    for (std::size_t f = f_begin; f < f_end; ++f) {
      sizes.push_back(x.sizes()[f]);
      std::size_t o = x.offset(f);
      for (std::size_t i = 0; i < x.sizes()[f]; ++i) raw.push_back(x.label(o + i) + shift);
    }
  };
  std::size_t shift = r.block_count();
  append(r, 0, r_source, 0);
  append(s, 0, s_source, shift);
  append(r, r_source, r.factor_count(), 0);
  append(s, s_source, s.factor_count(), shift);
  // Labels are kept raw here so that r-blocks are 0..#r-1 and s-blocks #r..#r+#s-1.
  std::vector<std::size_t> left(r.block_count()), right(s.block_count());
  std::iota(left.begin(), left.end(), 0);
  std::iota(right.begin(), right.end(), shift);
  std::vector<Recollement> out;
  for (const auto& m : partial_matchings(left, right)) {
    std::vector<std::size_t> merged = raw;
    std::vector<std::size_t> target(shift + s.block_count());
    std::iota(target.begin(), target.end(), 0);
    for (auto [x, y] : m) target[y] = x;
    for (auto& l : merged) l = target[l];
    out.push_back(Recollement::from_labels(sizes, merged));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Moebius function of the recollement poset between s <= r on two factors.
inline long mobius(const Recollement& s, const Recollement& r) {
  if (s.sizes() != r.sizes()) throw ArgumentError("recollements on different factors");
  if (s.factor_count() > 2)
    throw ArgumentError("the Moebius formula is only available for recollements of at most two factors");
  if (!coarser_or_equal(s.partition(), r.partition())) return 0;
  return ((r.block_count() - s.block_count()) % 2 == 0) ? 1 : -1;
}

}  // namespace interpcat
