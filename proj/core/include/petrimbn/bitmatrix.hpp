#pragma once

// Typed (sub-)stochastic matrices indexed by bitstrings.
//
// A matrix of type n -> m has 2^m rows and 2^n columns; entry (x | y) is the
// probability of output bitstring x given input bitstring y. Bitstrings are
// packed into integers with the first wire as the most significant bit.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pmbn {

using Bits = std::uint64_t;

/// Column sums may exceed one by at most this much.
inline constexpr double kStochasticTolerance = 1e-9;
/// Tolerance for algebraic identities between exact dyadic matrices.
inline constexpr double kIdentityTolerance = 1e-12;
/// Probability mass at or below this value counts as zero evidence.
inline constexpr double kEvidenceTolerance = 1e-15;

inline constexpr unsigned kMaxArity = 31;

constexpr Bits state_count(unsigned arity) { return Bits{1} << arity; }

/// Bit of wire `index` (0-based, most significant first) in a string of `arity` wires.
constexpr bool bit_at(Bits value, unsigned arity, unsigned index) {
  return ((value >> (arity - 1 - index)) & 1U) != 0;
}

std::string to_bitstring(Bits value, unsigned arity);
Bits parse_bitstring(std::string_view text);

class Matrix {
 public:
  enum class Storage { Dense, Diagonal, Sparse };

  struct Entry {
    Bits row;
    Bits col;
    double value;
  };

  /// The 1x1 matrix (1), i.e. id_0.
  Matrix();

  /// Row-major values: values[row * 2^in + col].
  static Matrix dense(unsigned in_arity, unsigned out_arity, std::vector<double> values);
  static Matrix diagonal(unsigned arity, std::vector<double> diag);
  /// Duplicate coordinates are summed. Storage is chosen from the fill ratio.
  static Matrix from_entries(unsigned in_arity, unsigned out_arity, std::vector<Entry> entries);
  /// Column vector of type 0 -> k; the length must be a power of two.
  static Matrix column_vector(std::vector<double> values);

  template <class F>
  static Matrix generate(unsigned in_arity, unsigned out_arity, F&& fn) {
    std::vector<double> values(state_count(in_arity) * state_count(out_arity));
    for (Bits x = 0; x < state_count(out_arity); ++x)
      for (Bits y = 0; y < state_count(in_arity); ++y)
        values[x * state_count(in_arity) + y] = fn(x, y);
    return dense(in_arity, out_arity, std::move(values));
  }

  unsigned in_arity() const { return in_; }
  unsigned out_arity() const { return out_; }
  Bits rows() const { return state_count(out_); }
  Bits cols() const { return state_count(in_); }
  Storage storage() const { return storage_; }
  bool is_diagonal() const { return storage_ == Storage::Diagonal; }

  double at(Bits row, Bits col) const;
  std::size_t nonzeros() const;
  double column_sum(Bits col) const;

  bool is_stochastic(double eps = kStochasticTolerance) const;
  bool is_substochastic(double eps = kStochasticTolerance) const;
  /// Exactly one entry (within tol of 1) in every column, all others within tol of 0.
  bool is_point_mass_column(Bits col, double tol, Bits* row = nullptr) const;

  /// Calls fn(row, value) for the stored nonzeros of column `col`.
  template <class F>
  void for_each_in_column(Bits col, F&& fn) const {
    switch (storage_) {
      case Storage::Dense:
        for (Bits x = 0; x < rows(); ++x) {
          double v = values_[x * cols() + col];
          if (v != 0.0) fn(x, v);
        }
        break;
      case Storage::Diagonal:
        if (values_[col] != 0.0) fn(col, values_[col]);
        break;
      case Storage::Sparse:
        for (std::size_t k = col_start_[col]; k < col_start_[col + 1]; ++k) fn(rows_[k], values_[k]);
        break;
    }
  }

  /// Calls fn(row, col, value) for every stored nonzero.
  template <class F>
  void for_each_nonzero(F&& fn) const {
    for (Bits y = 0; y < cols(); ++y) for_each_in_column(y, [&](Bits x, double v) { fn(x, y, v); });
  }

  /// Dense copy in row-major order; throws TooLarge beyond 2^26 entries.
  std::vector<double> to_dense() const;

 private:
  void check() const;

  unsigned in_ = 0;
  unsigned out_ = 0;
  Storage storage_ = Storage::Dense;
  std::vector<double> values_;
  std::vector<std::size_t> col_start_;
  std::vector<Bits> rows_;
};

bool approx_equal(const Matrix& a, const Matrix& b, double tol);

/// Sequential composition P;Q = Q * P.
Matrix compose(const Matrix& first, const Matrix& second);
/// Kronecker product; the first operand occupies the high-order bits.
Matrix tensor(const Matrix& left, const Matrix& right);
/// Tensor of a sequence, left to right; the empty tensor is id_0.
Matrix tensor_all(std::span<const Matrix> factors);

enum class ConstantKind { Identity, Duplicate, Swap, Terminate };

/// The CC-structured PROP constants: id_n, the duplicator, swaps and the terminator.
/// Swap with arity n yields sigma_{n,n}; Duplicate/Swap/Terminate require n >= 1.
Matrix constant(ConstantKind kind, unsigned n);
Matrix identity(unsigned n);
/// Duplicator n -> 2n (copies the whole input string).
Matrix duplicate(unsigned n);
/// sigma_{n,m}: n+m -> m+n, exchanges the first n wires with the last m.
Matrix swap(unsigned n, unsigned m);
/// Terminator n -> 0, the all-ones row.
Matrix terminate(unsigned n);

/// A sub-probability vector: a matrix of type 0 -> k.
class ProbVector {
 public:
  ProbVector() = default;
  explicit ProbVector(Matrix column);
  explicit ProbVector(std::vector<double> values);

  unsigned arity() const { return column_.out_arity(); }
  Bits size() const { return column_.rows(); }
  double operator[](Bits x) const { return column_.at(x, 0); }
  double mass() const;
  bool normalized(double eps = kStochasticTolerance) const;
  const Matrix& matrix() const { return column_; }
  std::vector<double> values() const;

 private:
  Matrix column_{Matrix::column_vector({1.0})};
};

/// Divides by the total mass; throws InconsistentEvidence when the mass is (numerically) zero.
ProbVector normalize(const ProbVector& p);

/// Text dump: "n m", then 2^m rows of 2^n reals, rows and columns in descending bitstring order.
void write_matrix(std::ostream& os, const Matrix& m);
Matrix read_matrix(std::istream& is);

}  // namespace pmbn
