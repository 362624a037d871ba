#include "petrimbn/bitmatrix.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "petrimbn/error.hpp"

namespace pmbn {

namespace {

constexpr Bits kDenseLimit = Bits{1} << 26;

void require_arity(unsigned arity) {
  if (arity > kMaxArity) throw TooLarge("matrix arity " + std::to_string(arity) + " exceeds " + std::to_string(kMaxArity));
}

std::string format_real(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

}  // namespace

std::string to_bitstring(Bits value, unsigned arity) {
  std::string s(arity, '0');
  for (unsigned i = 0; i < arity; ++i)
    if (bit_at(value, arity, i)) s[i] = '1';
  return s;
}

Bits parse_bitstring(std::string_view text) {
  if (text.size() > 64) throw ParseError("bitstring longer than 64 bits");
  Bits v = 0;
  for (char c : text) {
    if (c != '0' && c != '1') throw ParseError("bitstring contains '" + std::string(1, c) + "'");
    v = (v << 1) | static_cast<Bits>(c == '1');
  }
  return v;
}

Matrix::Matrix() : values_{1.0} {}

Matrix Matrix::dense(unsigned in_arity, unsigned out_arity, std::vector<double> values) {
  require_arity(in_arity);
  require_arity(out_arity);
  if (in_arity + out_arity > 26) throw TooLarge("dense matrix of type " + std::to_string(in_arity) + "->" + std::to_string(out_arity));
  if (values.size() != state_count(in_arity) * state_count(out_arity))
    throw InvalidMatrix("dense matrix needs " + std::to_string(state_count(in_arity) * state_count(out_arity)) +
                        " entries, got " + std::to_string(values.size()));
  Matrix m;
  m.in_ = in_arity;
  m.out_ = out_arity;
  m.storage_ = Storage::Dense;
  m.values_ = std::move(values);
  m.check();
  return m;
}

Matrix Matrix::diagonal(unsigned arity, std::vector<double> diag) {
  require_arity(arity);
  if (diag.size() != state_count(arity)) throw InvalidMatrix("diagonal needs " + std::to_string(state_count(arity)) + " entries");
  Matrix m;
  m.in_ = arity;
  m.out_ = arity;
  m.storage_ = Storage::Diagonal;
  m.values_ = std::move(diag);
  m.check();
  return m;
}

Matrix Matrix::from_entries(unsigned in_arity, unsigned out_arity, std::vector<Entry> entries) {
  require_arity(in_arity);
  require_arity(out_arity);
  const Bits rows = state_count(out_arity);
  const Bits cols = state_count(in_arity);
  for (const Entry& e : entries)
    if (e.row >= rows || e.col >= cols) throw InvalidMatrix("entry coordinate out of range");
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.col != b.col ? a.col < b.col : a.row < b.row; });
  std::vector<Entry> merged;
  merged.reserve(entries.size());
  for (const Entry& e : entries) {
    if (!merged.empty() && merged.back().row == e.row && merged.back().col == e.col)
      merged.back().value += e.value;
    else
      merged.push_back(e);
  }
  std::erase_if(merged, [](const Entry& e) { return e.value == 0.0; });

  const unsigned total_bits = in_arity + out_arity;
  const bool small = total_bits <= 12;
  const bool filled = total_bits <= 26 && merged.size() * 4 >= state_count(total_bits);
  if (small || filled) {
    std::vector<double> values(state_count(total_bits), 0.0);
    for (const Entry& e : merged) values[e.row * cols + e.col] = e.value;
    return dense(in_arity, out_arity, std::move(values));
  }
  Matrix m;
  m.in_ = in_arity;
  m.out_ = out_arity;
  m.storage_ = Storage::Sparse;
  m.col_start_.assign(cols + 1, 0);
  m.rows_.reserve(merged.size());
  m.values_.clear();
  m.values_.reserve(merged.size());
  for (const Entry& e : merged) {
    ++m.col_start_[e.col + 1];
    m.rows_.push_back(e.row);
    m.values_.push_back(e.value);
  }
  for (Bits c = 0; c < cols; ++c) m.col_start_[c + 1] += m.col_start_[c];
  m.check();
  return m;
}

Matrix Matrix::column_vector(std::vector<double> values) {
  unsigned k = 0;
  while (state_count(k) < values.size()) ++k;
  if (state_count(k) != values.size()) throw InvalidMatrix("vector length " + std::to_string(values.size()) + " is not a power of two");
  return dense(0, k, std::move(values));
}

void Matrix::check() const {
  for (double v : values_) {
    if (!(v >= 0.0) || v > 1.0 + kStochasticTolerance)
      throw InvalidMatrix("entry " + format_real(v) + " outside [0,1]");
  }
  for (Bits y = 0; y < cols(); ++y) {
    double s = column_sum(y);
    if (s > 1.0 + kStochasticTolerance)
      throw InvalidMatrix("column " + std::to_string(y) + " sums to " + format_real(s) + " > 1");
  }
}

double Matrix::at(Bits row, Bits col) const {
  switch (storage_) {
    case Storage::Dense:
      return values_[row * cols() + col];
    case Storage::Diagonal:
      return row == col ? values_[col] : 0.0;
    case Storage::Sparse: {
      auto first = rows_.begin() + static_cast<std::ptrdiff_t>(col_start_[col]);
      auto last = rows_.begin() + static_cast<std::ptrdiff_t>(col_start_[col + 1]);
      auto it = std::lower_bound(first, last, row);
      if (it == last || *it != row) return 0.0;
      return values_[static_cast<std::size_t>(it - rows_.begin())];
    }
  }
  return 0.0;
}

std::size_t Matrix::nonzeros() const {
  if (storage_ == Storage::Sparse) return values_.size();
  return static_cast<std::size_t>(std::count_if(values_.begin(), values_.end(), [](double v) { return v != 0.0; }));
}

double Matrix::column_sum(Bits col) const {
  double s = 0.0;
  for_each_in_column(col, [&](Bits, double v) { s += v; });
  return s;
}

bool Matrix::is_stochastic(double eps) const {
  for (Bits y = 0; y < cols(); ++y)
    if (std::abs(column_sum(y) - 1.0) > eps) return false;
  return true;
}

bool Matrix::is_substochastic(double eps) const {
  for (Bits y = 0; y < cols(); ++y)
    if (column_sum(y) > 1.0 + eps) return false;
  return true;
}

bool Matrix::is_point_mass_column(Bits col, double tol, Bits* row) const {
  int ones = 0;
  bool ok = true;
  Bits where = 0;
  for_each_in_column(col, [&](Bits x, double v) {
    if (std::abs(v - 1.0) <= tol) {
      ++ones;
      where = x;
    } else if (std::abs(v) > tol) {
      ok = false;
    }
  });
  if (!ok || ones != 1) return false;
  if (row != nullptr) *row = where;
  return true;
}

std::vector<double> Matrix::to_dense() const {
  if (in_ + out_ > 26) throw TooLarge("dense copy of a " + std::to_string(in_) + "->" + std::to_string(out_) + " matrix");
  std::vector<double> out(rows() * cols(), 0.0);
  for_each_nonzero([&](Bits x, Bits y, double v) { out[x * cols() + y] = v; });
  return out;
}

bool approx_equal(const Matrix& a, const Matrix& b, double tol) {
  if (a.in_arity() != b.in_arity() || a.out_arity() != b.out_arity()) return false;
  bool ok = true;
  a.for_each_nonzero([&](Bits x, Bits y, double v) {
    if (std::abs(v - b.at(x, y)) > tol) ok = false;
  });
  b.for_each_nonzero([&](Bits x, Bits y, double v) {
    if (std::abs(v - a.at(x, y)) > tol) ok = false;
  });
  return ok;
}

Matrix compose(const Matrix& first, const Matrix& second) {
  if (first.out_arity() != second.in_arity())
    throw TypeMismatch("cannot compose " + std::to_string(first.in_arity()) + "->" + std::to_string(first.out_arity()) +
                       " with " + std::to_string(second.in_arity()) + "->" + std::to_string(second.out_arity()));
  if (first.is_diagonal() && second.is_diagonal()) {
    std::vector<double> d(first.cols());
    for (Bits i = 0; i < first.cols(); ++i) d[i] = first.at(i, i) * second.at(i, i);
    return Matrix::diagonal(first.in_arity(), std::move(d));
  }
  std::vector<Matrix::Entry> entries;
  const bool dense_acc = second.out_arity() <= 16;
  std::vector<double> acc(dense_acc ? second.rows() : 0, 0.0);
  std::vector<Bits> touched;
  std::unordered_map<Bits, double> sparse_acc;
  for (Bits y = 0; y < first.cols(); ++y) {
    first.for_each_in_column(y, [&](Bits z, double p) {
      second.for_each_in_column(z, [&](Bits x, double q) {
        if (dense_acc) {
          if (acc[x] == 0.0) touched.push_back(x);
          acc[x] += p * q;
        } else {
          sparse_acc[x] += p * q;
        }
      });
    });
    if (dense_acc) {
      for (Bits x : touched) {
        entries.push_back({x, y, acc[x]});
        acc[x] = 0.0;
      }
      touched.clear();
    } else {
      for (auto [x, v] : sparse_acc) entries.push_back({x, y, v});
      sparse_acc.clear();
    }
  }
  return Matrix::from_entries(first.in_arity(), second.out_arity(), std::move(entries));
}

Matrix tensor(const Matrix& left, const Matrix& right) {
  const unsigned in = left.in_arity() + right.in_arity();
  const unsigned out = left.out_arity() + right.out_arity();
  if (in > kMaxArity || out > kMaxArity) throw TooLarge("tensor product exceeds the maximal arity");
  if (left.is_diagonal() && right.is_diagonal()) {
    std::vector<double> d(state_count(in));
    for (Bits a = 0; a < left.cols(); ++a)
      for (Bits b = 0; b < right.cols(); ++b) d[(a << right.in_arity()) | b] = left.at(a, a) * right.at(b, b);
    return Matrix::diagonal(in, std::move(d));
  }
  std::vector<Matrix::Entry> entries;
  entries.reserve(left.nonzeros() * right.nonzeros());
  left.for_each_nonzero([&](Bits x1, Bits y1, double p) {
    right.for_each_nonzero([&](Bits x2, Bits y2, double q) {
      entries.push_back({(x1 << right.out_arity()) | x2, (y1 << right.in_arity()) | y2, p * q});
    });
  });
  return Matrix::from_entries(in, out, std::move(entries));
}

Matrix tensor_all(std::span<const Matrix> factors) {
  Matrix acc;
  for (const Matrix& m : factors) acc = tensor(acc, m);
  return acc;
}

Matrix identity(unsigned n) { return Matrix::diagonal(n, std::vector<double>(state_count(n), 1.0)); }

Matrix terminate(unsigned n) { return Matrix::dense(n, 0, std::vector<double>(state_count(n), 1.0)); }

Matrix swap(unsigned n, unsigned m) {
  // sigma_{n,0} = sigma_{0,n} = id_n
  if (n == 0 || m == 0) return identity(n + m);
  if (n == 1 && m == 1) {
    return Matrix::dense(2, 2, {1, 0, 0, 0,  //
                                0, 0, 1, 0,  //
                                0, 1, 0, 0,  //
                                0, 0, 0, 1});
  }
  if (m == 1) {
    // sigma_{n,1} = (id (x) sigma_{n-1,1}) ; (sigma (x) id_{n-1})
    return compose(tensor(identity(1), swap(n - 1, 1)), tensor(swap(1, 1), identity(n - 1)));
  }
  // sigma_{n,m} = (sigma_{n,m-1} (x) id_1) ; (id_{m-1} (x) sigma_{n,1})
  return compose(tensor(swap(n, m - 1), identity(1)), tensor(identity(m - 1), swap(n, 1)));
}

Matrix duplicate(unsigned n) {
  if (n == 0) throw InvalidArity("duplicator needs arity >= 1");
  // rows 00, 01, 10, 11
  const Matrix base = Matrix::dense(1, 2, {1, 0,
                                           0, 0,
                                           0, 0,
                                           0, 1});
  if (n == 1) return base;
  // nabla_{n} = (nabla_{n-1} (x) nabla) ; (id_{n-1} (x) sigma_{n-1,1} (x) id)
  const Matrix wiring = tensor(tensor(identity(n - 1), swap(n - 1, 1)), identity(1));
  return compose(tensor(duplicate(n - 1), base), wiring);
}

Matrix constant(ConstantKind kind, unsigned n) {
  switch (kind) {
    case ConstantKind::Identity:
      return identity(n);
    case ConstantKind::Duplicate:
      return duplicate(n);
    case ConstantKind::Swap:
      if (n == 0) throw InvalidArity("swap needs arity >= 1");
      return swap(n, n);
    case ConstantKind::Terminate:
      if (n == 0) throw InvalidArity("terminator needs arity >= 1");
      return terminate(n);
  }
  throw InvalidArity("unknown constant");
}

ProbVector::ProbVector(Matrix column) : column_(std::move(column)) {
  if (column_.in_arity() != 0) throw TypeMismatch("a probability vector has input arity 0");
}

ProbVector::ProbVector(std::vector<double> values) : column_(Matrix::column_vector(std::move(values))) {}

double ProbVector::mass() const {
  return column_.column_sum(0);
}

bool ProbVector::normalized(double eps) const { return std::abs(mass() - 1.0) <= eps; }

std::vector<double> ProbVector::values() const {
  std::vector<double> v(size(), 0.0);
  column_.for_each_in_column(0, [&](Bits x, double p) { v[x] = p; });
  return v;
}

ProbVector normalize(const ProbVector& p) {
  const double total = p.mass();
  if (!(total > kEvidenceTolerance)) throw InconsistentEvidence("cannot normalize a vector of mass " + format_real(total));
  std::vector<Matrix::Entry> entries;
  p.matrix().for_each_in_column(0, [&](Bits x, double v) { entries.push_back({x, 0, v / total}); });
  return ProbVector(Matrix::from_entries(0, p.arity(), std::move(entries)));
}

void write_matrix(std::ostream& os, const Matrix& m) {
  if (m.in_arity() + m.out_arity() > 24) throw TooLarge("matrix too large to dump");
  os << m.in_arity() << ' ' << m.out_arity() << '\n';
  for (Bits r = m.rows(); r-- > 0;) {
    for (Bits c = m.cols(); c-- > 0;) {
      os << format_real(m.at(r, c));
      if (c != 0) os << ' ';
    }
    os << '\n';
  }
}

Matrix read_matrix(std::istream& is) {
  unsigned n = 0;
  unsigned m = 0;
  if (!(is >> n >> m)) throw ParseError("matrix dump: expected header 'n m'");
  if (n + m > 24) throw TooLarge("matrix dump too large");
  const Bits rows = state_count(m);
  const Bits cols = state_count(n);
  std::vector<double> values(rows * cols);
  for (Bits r = rows; r-- > 0;)
    for (Bits c = cols; c-- > 0;)
      if (!(is >> values[r * cols + c]))
        throw ParseError("matrix dump: missing entry at row " + std::to_string(rows - r) + ", column " +
                         std::to_string(cols - c));
  return Matrix::dense(n, m, std::move(values));
}

}  // namespace pmbn
