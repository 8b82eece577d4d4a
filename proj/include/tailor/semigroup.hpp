#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <memory>
#include <ostream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "tailor/errors.hpp"

namespace tailor {

inline constexpr std::uint64_t kTupleEnumerationCap = 10'000'000;

// A finite semigroup with a distinguished absorbing zero, given by its
// multiplication table.
class FiniteSemigroup {
 public:
  FiniteSemigroup(int n, int zero_index, std::vector<std::int32_t> table,
                  std::vector<std::string> labels = {})
      : n_(n), zero_(zero_index), table_(std::move(table)), labels_(std::move(labels)) {
    if (n_ <= 0 || zero_ < 0 || zero_ >= n_)
      raise(ErrorCode::InvalidInput, "bad semigroup size or zero index");
    if (table_.size() != static_cast<size_t>(n_) * n_)
      raise(ErrorCode::InvalidInput, "multiplication table has wrong size");
    for (auto v : table_)
      if (v < 0 || v >= n_) raise(ErrorCode::InvalidInput, "table entry out of range");
    for (int a = 0; a < n_; ++a)
      if (product(a, zero_) != zero_ || product(zero_, a) != zero_)
        raise(ErrorCode::InvalidInput, "zero element is not absorbing");
    if (labels_.empty()) {
      labels_.reserve(n_);
      for (int i = 0; i < n_; ++i)
        labels_.push_back(i == zero_ ? "0" : "e" + std::to_string(i));
    }
    if (labels_.size() != static_cast<size_t>(n_))
      raise(ErrorCode::InvalidInput, "label count mismatch");
    partners_.resize(n_);
    for (int a = 0; a < n_; ++a) {
      if (a == zero_) continue;
      for (int b = 0; b < n_; ++b)
        if (b != zero_ && product(a, b) != zero_) partners_[a].push_back(b);
    }
  }

  int size() const { return n_; }
  int zero_index() const { return zero_; }
  int product(int a, int b) const { return table_[static_cast<size_t>(a) * n_ + b]; }
  const std::string& label(int i) const { return labels_[i]; }
  const std::vector<std::int32_t>& table() const { return table_; }

  // Nonzero right partners of a: all b with ab != 0.
  const std::vector<std::int32_t>& right_partners(int a) const { return partners_[a]; }

  std::vector<std::int32_t> nonzero_elements() const {
    std::vector<std::int32_t> out;
    out.reserve(n_ - 1);
    for (int i = 0; i < n_; ++i)
      if (i != zero_) out.push_back(i);
    return out;
  }

  struct AssociativityCheck {
    bool ok = true;
    std::array<int, 3> witness{0, 0, 0};
  };

  // Exhaustive for n <= 64, deterministically sampled above.
  AssociativityCheck check_associative(std::uint64_t sample_count = 200'000) const {
    AssociativityCheck out;
    auto test = [&](int a, int b, int c) {
      if (product(product(a, b), c) != product(a, product(b, c))) {
        out.ok = false;
        out.witness = {a, b, c};
        return false;
      }
      return true;
    };
    if (n_ <= 64) {
      for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b)
          for (int c = 0; c < n_; ++c)
            if (!test(a, b, c)) return out;
      return out;
    }
    std::mt19937_64 rng(0x7a117eULL);
    std::uniform_int_distribution<int> pick(0, n_ - 1);
    for (std::uint64_t i = 0; i < sample_count; ++i)
      if (!test(pick(rng), pick(rng), pick(rng))) return out;
    return out;
  }

  // Text format: first line "n zero_index", then n rows of n indices.
  static FiniteSemigroup read_table_text(std::istream& in) {
    int n = 0, zero = -1;
    if (!(in >> n >> zero)) raise(ErrorCode::InvalidInput, "bad table header");
    if (n <= 0 || n > 100000) raise(ErrorCode::InvalidInput, "bad table size");
    std::vector<std::int32_t> table(static_cast<size_t>(n) * n);
    for (auto& v : table)
      if (!(in >> v)) raise(ErrorCode::InvalidInput, "truncated multiplication table");
    return FiniteSemigroup(n, zero, std::move(table));
  }

  void write_table_text(std::ostream& out) const {
    out << n_ << ' ' << zero_ << '\n';
    for (int a = 0; a < n_; ++a) {
      for (int b = 0; b < n_; ++b) out << product(a, b) << (b + 1 == n_ ? '\n' : ' ');
    }
  }

 private:
  int n_;
  int zero_;
  std::vector<std::int32_t> table_;
  std::vector<std::string> labels_;
  std::vector<std::vector<std::int32_t>> partners_;
};

using SemigroupPtr = std::shared_ptr<const FiniteSemigroup>;

struct Subsemigroup {
  SemigroupPtr semigroup;
  std::vector<std::int32_t> to_parent;  // sub index -> parent index
};

// Builds the subsemigroup on a subset of elements; the subset must be closed
// under the parent product (the zero is adjoined automatically).
inline Subsemigroup make_subsemigroup(const FiniteSemigroup& parent,
                                      std::vector<std::int32_t> subset) {
  bool has_zero = false;
  for (auto v : subset) {
    if (v < 0 || v >= parent.size()) raise(ErrorCode::InvalidInput, "subset index out of range");
    if (v == parent.zero_index()) has_zero = true;
  }
  if (!has_zero) subset.push_back(parent.zero_index());
  std::vector<int> to_sub(parent.size(), -1);
  for (size_t i = 0; i < subset.size(); ++i) {
    if (to_sub[subset[i]] != -1) raise(ErrorCode::InvalidInput, "duplicate subset element");
    to_sub[subset[i]] = static_cast<int>(i);
  }
  int m = static_cast<int>(subset.size());
  std::vector<std::int32_t> table(static_cast<size_t>(m) * m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      int p = parent.product(subset[a], subset[b]);
      if (to_sub[p] == -1)
        raise(ErrorCode::NotASubsemigroup, "subset not closed under the product");
      table[static_cast<size_t>(a) * m + b] = to_sub[p];
    }
  }
  std::vector<std::string> labels;
  labels.reserve(m);
  for (auto v : subset) labels.push_back(parent.label(v));
  auto sg = std::make_shared<FiniteSemigroup>(m, to_sub[parent.zero_index()],
                                              std::move(table), std::move(labels));
  return Subsemigroup{sg, std::move(subset)};
}

// Visits every arity-k tuple of nonzero elements whose full product is
// nonzero, in lexicographic order. fn(tuple, product).
template <class Fn>
inline void for_each_nonzero_tuple(const FiniteSemigroup& sg, int arity, Fn&& fn,
                                   std::uint64_t cap = kTupleEnumerationCap) {
  if (arity < 1) raise(ErrorCode::InvalidInput, "arity must be >= 1");
  std::vector<std::int32_t> tuple(arity);
  std::uint64_t count = 0;
  auto rec = [&](auto&& self, int pos, int prefix) -> void {
    if (pos == arity) {
      if (++count > cap) raise(ErrorCode::TooManyTuples, "tuple enumeration cap exceeded");
      fn(static_cast<const std::vector<std::int32_t>&>(tuple), prefix);
      return;
    }
    if (pos == 0) {
      for (int a : sg.nonzero_elements()) {
        tuple[0] = a;
        self(self, 1, a);
      }
    } else {
      for (int b : sg.right_partners(prefix)) {
        tuple[pos] = b;
        self(self, pos + 1, sg.product(prefix, b));
      }
    }
  };
  rec(rec, 0, sg.zero_index());
}

}  // namespace tailor
