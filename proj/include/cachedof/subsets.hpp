// Subsets of [K] = {1..K}, binomials, lexicographic enumeration and the
// order-preserving complement bijection.
#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cachedof/errors.hpp"

namespace cachedof {

/// C(n, k); zero when k < 0, n < 0 or k > n. Throws on 64-bit overflow.
inline std::uint64_t binomial(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned __int128>(n - k + i) / static_cast<unsigned __int128>(i);
    if (r > ~std::uint64_t{0}) throw out_of_range("binomial coefficient overflows 64 bits");
  }
  return static_cast<std::uint64_t>(r);
}

/// A subset of [ground_size], members sorted ascending and 1-based.
class SubsetId {
 public:
  SubsetId() = default;
  SubsetId(int ground_size, std::vector<int> members) : ground_(ground_size), members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    if (std::adjacent_find(members_.begin(), members_.end()) != members_.end())
      throw domain_error("subset has repeated members");
    if (!members_.empty() && (members_.front() < 1 || members_.back() > ground_))
      throw domain_error("subset member outside [" + std::to_string(ground_) + "]");
  }

  int ground_size() const noexcept { return ground_; }
  const std::vector<int>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }

  bool contains(int x) const { return std::binary_search(members_.begin(), members_.end(), x); }

  bool includes(const SubsetId& other) const {
    return std::includes(members_.begin(), members_.end(), other.members_.begin(), other.members_.end());
  }

  /// Zero-based position of a member (number of smaller members).
  std::size_t position_of(int x) const {
    auto it = std::lower_bound(members_.begin(), members_.end(), x);
    if (it == members_.end() || *it != x) throw index_out_of_range(std::to_string(x) + " is not a member");
    return static_cast<std::size_t>(it - members_.begin());
  }

  SubsetId without(int x) const {
    std::vector<int> m;
    for (int v : members_)
      if (v != x) m.push_back(v);
    return {ground_, std::move(m)};
  }

  SubsetId with(int x) const {
    std::vector<int> m = members_;
    if (!contains(x)) m.push_back(x);
    return {ground_, std::move(m)};
  }

  SubsetId minus(const SubsetId& other) const {
    std::vector<int> m;
    std::set_difference(members_.begin(), members_.end(), other.members_.begin(), other.members_.end(),
                        std::back_inserter(m));
    return {ground_, std::move(m)};
  }

  SubsetId unite(const SubsetId& other) const {
    std::vector<int> m;
    std::set_union(members_.begin(), members_.end(), other.members_.begin(), other.members_.end(),
                   std::back_inserter(m));
    return {std::max(ground_, other.ground_), std::move(m)};
  }

  std::string to_string() const {
    std::string s = "{";
    for (std::size_t i = 0; i < members_.size(); ++i) s += (i ? "," : "") + std::to_string(members_[i]);
    return s + "}";
  }

  // Equality is set equality; the ground size is bookkeeping.
  bool operator==(const SubsetId& o) const { return members_ == o.members_; }
  auto operator<=>(const SubsetId& o) const { return members_ <=> o.members_; }

 private:
  int ground_ = 0;
  std::vector<int> members_;
};

/// All C(K, t) t-subsets of [K] in lexicographic order of their sorted member lists.
inline std::vector<SubsetId> enumerate_subsets(int K, int t) {
  if (K < 0 || t < 0 || t > K) throw domain_error("cannot choose " + std::to_string(t) + " of " + std::to_string(K));
  std::vector<SubsetId> out;
  out.reserve(binomial(K, t));
  std::vector<int> cur(static_cast<std::size_t>(t));
  for (int i = 0; i < t; ++i) cur[i] = i + 1;
  while (true) {
    out.emplace_back(K, cur);
    int i = t - 1;
    while (i >= 0 && cur[i] == K - t + i + 1) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < t; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

/// Subsets of a given subset (as member lists drawn from it), lexicographic.
inline std::vector<SubsetId> enumerate_subsets_of(const SubsetId& base, int t) {
  std::vector<SubsetId> out;
  for (const SubsetId& local : enumerate_subsets(static_cast<int>(base.size()), t)) {
    std::vector<int> m;
    for (int i : local.members()) m.push_back(base.members()[static_cast<std::size_t>(i - 1)]);
    out.emplace_back(base.ground_size(), std::move(m));
  }
  return out;
}

/// The idx-th smallest element of [K] \ U (idx is 1-based).
inline int complement_bijection(int K, const SubsetId& U, int idx) {
  if (idx < 1 || idx > K - static_cast<int>(U.size()))
    throw index_out_of_range("index " + std::to_string(idx) + " outside [" + std::to_string(K - static_cast<int>(U.size())) + "]");
  int seen = 0;
  for (int x = 1; x <= K; ++x) {
    if (U.contains(x)) continue;
    if (++seen == idx) return x;
  }
  throw index_out_of_range("complement exhausted");
}

/// Image of a subset of [K - |U|] under the bijection.
inline SubsetId complement_image(int K, const SubsetId& U, const SubsetId& indices) {
  std::vector<int> m;
  for (int i : indices.members()) m.push_back(complement_bijection(K, U, i));
  return {K, std::move(m)};
}

/// Preimage of a subset V of [K] \ U: the indices whose images are V.
inline SubsetId complement_preimage(int K, const SubsetId& U, const SubsetId& V) {
  std::vector<int> m;
  for (int v : V.members()) {
    if (U.contains(v) || v < 1 || v > K) throw index_out_of_range(std::to_string(v) + " is not in the complement");
    int rank = 0;
    for (int x = 1; x <= v; ++x)
      if (!U.contains(x)) ++rank;
    m.push_back(rank);
  }
  return {K - static_cast<int>(U.size()), std::move(m)};
}

/// Lookup from subset to its position in an enumeration.
class SubsetIndex {
 public:
  SubsetIndex() = default;
  explicit SubsetIndex(std::vector<SubsetId> subsets) : subsets_(std::move(subsets)) {
    for (std::size_t i = 0; i < subsets_.size(); ++i) rank_.emplace(subsets_[i], i);
  }

  std::size_t size() const noexcept { return subsets_.size(); }
  const SubsetId& at(std::size_t i) const { return subsets_.at(i); }
  const std::vector<SubsetId>& all() const noexcept { return subsets_; }

  std::size_t rank(const SubsetId& s) const {
    auto it = rank_.find(s);
    if (it == rank_.end()) throw index_out_of_range("subset " + s.to_string() + " not enumerated");
    return it->second;
  }

 private:
  std::vector<SubsetId> subsets_;
  std::map<SubsetId, std::size_t> rank_;
};

}  // namespace cachedof
