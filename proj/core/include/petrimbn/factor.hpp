#pragma once

// Sum-product factors over wires. A factor maps assignments of its wires
// (ascending wire ids, the first wire as the most significant key bit) to
// non-negative reals. Tables are dense or a sorted list of nonzeros.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "petrimbn/bitmatrix.hpp"

namespace pmbn {

/// Hard cap on the entries of a single table.
inline constexpr std::size_t kFactorEntryLimit = std::size_t{1} << 26;
inline constexpr std::size_t kFactorWireLimit = 62;

class Factor {
 public:
  using Entry = std::pair<Bits, double>;

  /// The constant 1 over no wires.
  Factor() : dense_{1.0} {}
  static Factor scalar(double value);
  static Factor dense(std::vector<std::size_t> wires, std::vector<double> values);
  /// Wires need not be sorted; entries are keyed in the given wire order.
  /// Duplicate keys are summed and zeros dropped.
  static Factor sparse(std::vector<std::size_t> wires, std::vector<Entry> entries);

  const std::vector<std::size_t>& wires() const { return wires_; }
  std::size_t arity() const { return wires_.size(); }
  bool is_sparse() const { return sparse_; }
  bool contains(std::size_t wire) const;
  double value(Bits key) const;
  std::size_t nonzeros() const;
  /// Only meaningful for arity 0.
  double scalar_value() const { return value(0); }

  template <class F>
  void for_each_nonzero(F&& fn) const {
    if (sparse_) {
      for (const Entry& e : entries_) fn(e.first, e.second);
    } else {
      for (Bits k = 0; k < dense_.size(); ++k)
        if (dense_[k] != 0.0) fn(k, dense_[k]);
    }
  }

  /// Fixes `wire` to `bit` and removes it.
  Factor restrict(std::size_t wire, bool bit) const;
  /// Replaces every wire by rep[wire]; entries whose merged wires disagree are dropped.
  Factor rename(const std::vector<std::size_t>& rep) const;
  /// Removes wires along which the table is constant (relative tolerance).
  Factor drop_vacuous(double rel_tol = 1e-13) const;
  /// Dense or sparse, whichever is smaller.
  Factor compacted() const;

 private:
  std::vector<std::size_t> wires_;
  bool sparse_ = false;
  std::vector<double> dense_;
  std::vector<Entry> entries_;  // sorted by key, nonzero values
};

/// Product of `factors` with `sum_wires` summed out.
Factor multiply_and_sum_out(std::span<const Factor* const> factors, const std::vector<std::size_t>& sum_wires);

}  // namespace pmbn
