#include "discocat/matrix.hpp"

#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <utility>

#include "discocat/error.hpp"

namespace discocat {

std::size_t shape_product(std::span<const std::size_t> shape) {
  std::size_t p = 1;
  for (std::size_t d : shape) p *= d;
  return p;
}

std::size_t checked_product(std::span<const std::size_t> shape,
                            std::size_t budget) {
  std::size_t p = 1;
  for (std::size_t d : shape) {
    if (d != 0 && p > budget / d) {
      throw BudgetExceeded(d > 0 && p > std::numeric_limits<std::size_t>::max() / d
                               ? std::numeric_limits<std::size_t>::max()
                               : p * d,
                           budget);
    }
    p *= d;
  }
  return p;
}

std::string shape_to_string(std::span<const std::size_t> shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(shape[i]);
  }
  return out + "]";
}

namespace {

void check_factors(const Shape& shape) {
  for (std::size_t d : shape) {
    if (d == 0) throw DimensionMismatch("factor dimensions must be positive");
  }
}

std::size_t checked_size(std::size_t rows, std::size_t cols,
                         std::size_t budget) {
  if (rows != 0 && cols > budget / rows) {
    const bool overflow = cols > std::numeric_limits<std::size_t>::max() / rows;
    throw BudgetExceeded(
        overflow ? std::numeric_limits<std::size_t>::max() : rows * cols,
        budget);
  }
  return rows * cols;
}

void require_same_semiring(const Matrix& f, const Matrix& g, const char* op) {
  if (f.semiring() != g.semiring()) {
    throw SemiringMismatch(std::string(op) + ": semiring " +
                           std::string(to_string(f.semiring())) + " vs " +
                           std::string(to_string(g.semiring())));
  }
}

std::string describe(const Matrix& m) {
  return shape_to_string(m.dom()) + "->" + shape_to_string(m.cod());
}

Shape concat(const Shape& a, const Shape& b) {
  Shape out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

Matrix::Matrix(Semiring semiring, Shape dom, Shape cod, std::size_t budget)
    : semiring_(semiring), dom_(std::move(dom)), cod_(std::move(cod)) {
  check_factors(dom_);
  check_factors(cod_);
  cols_ = checked_product(dom_, budget);
  rows_ = checked_product(cod_, budget);
  entries_.assign(checked_size(rows_, cols_, budget), zero(semiring_));
}

Matrix::Matrix(Semiring semiring, Shape dom, Shape cod,
               std::vector<Scalar> entries)
    : semiring_(semiring),
      dom_(std::move(dom)),
      cod_(std::move(cod)),
      entries_(std::move(entries)) {
  check_factors(dom_);
  check_factors(cod_);
  cols_ = checked_product(dom_, std::numeric_limits<std::size_t>::max());
  rows_ = checked_product(cod_, std::numeric_limits<std::size_t>::max());
  if (entries_.size() != rows_ * cols_) {
    throw DimensionMismatch("entry count " + std::to_string(entries_.size()) +
                            " does not match shape " +
                            shape_to_string(dom_) + "->" +
                            shape_to_string(cod_));
  }
  for (Scalar x : entries_) {
    if (!is_valid(semiring_, x)) {
      throw InvalidArgument("entry " + std::to_string(x) +
                            " is not valid in the " +
                            std::string(to_string(semiring_)) + " semiring");
    }
  }
}

Matrix Matrix::reshaped(Shape dom, Shape cod) const {
  if (shape_product(dom) != cols_ || shape_product(cod) != rows_) {
    throw DimensionMismatch("cannot reshape " + describe(*this) + " to " +
                            shape_to_string(dom) + "->" +
                            shape_to_string(cod));
  }
  Matrix out = *this;
  out.dom_ = std::move(dom);
  out.cod_ = std::move(cod);
  return out;
}

bool Matrix::approx_equal(const Matrix& other, double rel_tol) const {
  if (semiring_ != other.semiring_ || rows_ != other.rows_ ||
      cols_ != other.cols_) {
    return false;
  }
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!scalars_equal(semiring_, entries_[i], other.entries_[i], rel_tol)) {
      return false;
    }
  }
  return true;
}

bool operator==(const Matrix& a, const Matrix& b) {
  return a.semiring_ == b.semiring_ && a.rows_ == b.rows_ &&
         a.cols_ == b.cols_ && a.entries_ == b.entries_;
}

std::ostream& operator<<(std::ostream& os, const Matrix& m) {
  return os << pretty(m);
}

std::string pretty(const Matrix& m, std::size_t max_rows,
                   std::size_t max_cols) {
  std::ostringstream os;
  os << "Matrix<" << to_string(m.semiring()) << "> "
     << shape_to_string(m.dom()) << " -> " << shape_to_string(m.cod()) << " ("
     << m.rows() << "x" << m.cols() << ")\n";
  const std::size_t nr = std::min(m.rows(), max_rows);
  const std::size_t nc = std::min(m.cols(), max_cols);
  for (std::size_t r = 0; r < nr; ++r) {
    os << "  ";
    for (std::size_t c = 0; c < nc; ++c) {
      os << std::setw(8) << std::setprecision(4) << m.at(r, c) << ' ';
    }
    if (nc < m.cols()) os << "...";
    os << '\n';
  }
  if (nr < m.rows()) os << "  ...\n";
  return os.str();
}

Matrix identity(std::size_t n, Semiring s) { return identity(Shape{n}, s); }

Matrix identity(Shape factors, Semiring s, std::size_t budget) {
  Shape cod = factors;
  Matrix out(s, std::move(factors), std::move(cod), budget);
  std::vector<Scalar> e(out.entries().begin(), out.entries().end());
  for (std::size_t i = 0; i < out.rows(); ++i) e[i * out.cols() + i] = one(s);
  return Matrix(s, out.dom(), out.cod(), std::move(e));
}

Matrix scalar(Scalar value, Semiring s) {
  return Matrix(s, {}, {}, std::vector<Scalar>{value});
}

Matrix zeros(Shape dom, Shape cod, Semiring s) {
  return Matrix(s, std::move(dom), std::move(cod));
}

Matrix one_hot_state(std::size_t i, std::size_t n, Semiring s) {
  if (i >= n) {
    throw IndexOutOfRange("one-hot index " + std::to_string(i) +
                          " out of range for dimension " + std::to_string(n));
  }
  std::vector<Scalar> e(n, zero(s));
  e[i] = one(s);
  return Matrix(s, {}, {n}, std::move(e));
}

Matrix one_hot_effect(std::size_t i, std::size_t n, Semiring s) {
  if (i >= n) {
    throw IndexOutOfRange("one-hot index " + std::to_string(i) +
                          " out of range for dimension " + std::to_string(n));
  }
  std::vector<Scalar> e(n, zero(s));
  e[i] = one(s);
  return Matrix(s, {n}, {}, std::move(e));
}

Matrix state(std::vector<Scalar> entries, Semiring s) {
  const std::size_t n = entries.size();
  return Matrix(s, {}, {n}, std::move(entries));
}

Matrix effect(std::vector<Scalar> entries, Semiring s) {
  const std::size_t n = entries.size();
  return Matrix(s, {n}, {}, std::move(entries));
}

Matrix spider(std::size_t inputs, std::size_t outputs, std::size_t n,
              Semiring s, std::size_t budget) {
  if (n == 0) throw DimensionMismatch("spider dimension must be positive");
  Shape dom(inputs, n);
  Shape cod(outputs, n);
  Matrix shell(s, dom, cod, budget);
  std::vector<Scalar> e(shell.entries().begin(), shell.entries().end());
  // The diagonal index i...i in base n is i * (1 + n + ... + n^(k-1)).
  auto repunit = [n](std::size_t k) {
    std::size_t r = 0;
    for (std::size_t j = 0; j < k; ++j) r = r * n + 1;
    return r;
  };
  const std::size_t row_step = repunit(outputs);
  const std::size_t col_step = repunit(inputs);
  for (std::size_t i = 0; i < n; ++i) {
    // With no legs every i lands on the single entry: sum_i 1.
    Scalar& entry = e[(i * row_step) * shell.cols() + i * col_step];
    entry = add(s, entry, one(s));
  }
  return Matrix(s, std::move(dom), std::move(cod), std::move(e));
}

Matrix cup(std::size_t n, Semiring s) { return spider(2, 0, n, s); }
Matrix cap(std::size_t n, Semiring s) { return spider(0, 2, n, s); }

Matrix swap(std::size_t m, std::size_t n, Semiring s, std::size_t budget) {
  Matrix shell(s, {m, n}, {n, m}, budget);
  std::vector<Scalar> e(shell.entries().begin(), shell.entries().end());
  const std::size_t cols = m * n;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      e[(j * m + i) * cols + (i * n + j)] = one(s);
    }
  }
  return Matrix(s, {m, n}, {n, m}, std::move(e));
}

Matrix compose(const Matrix& f, const Matrix& g, std::size_t budget) {
  require_same_semiring(f, g, "compose");
  if (f.rows() != g.cols()) {
    throw DimensionMismatch("compose: codomain of " + describe(f) +
                            " does not match domain of " + describe(g));
  }
  const Semiring s = f.semiring();
  const std::size_t rows = g.rows();
  const std::size_t cols = f.cols();
  const std::size_t inner = f.rows();
  std::vector<Scalar> e(checked_size(rows, cols, budget), zero(s));
  // Fixed summation order over the inner index keeps results reproducible.
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t k = 0; k < inner; ++k) {
      const Scalar gk = g.at(r, k);
      if (gk == 0.0) continue;
      for (std::size_t c = 0; c < cols; ++c) {
        Scalar& acc = e[r * cols + c];
        acc = add(s, acc, mul(s, gk, f.at(k, c)));
      }
    }
  }
  return Matrix(s, f.dom(), g.cod(), std::move(e));
}

Matrix compose_all(std::span<const Matrix> chain, std::size_t budget) {
  if (chain.empty()) throw InvalidArgument("compose_all: empty chain");
  Matrix acc = chain.front();
  for (std::size_t i = 1; i < chain.size(); ++i) {
    acc = compose(acc, chain[i], budget);
  }
  return acc;
}

Matrix tensor(const Matrix& f, const Matrix& g, std::size_t budget) {
  require_same_semiring(f, g, "tensor");
  const Semiring s = f.semiring();
  const std::size_t rows = checked_size(f.rows(), g.rows(), budget);
  const std::size_t cols = checked_size(f.cols(), g.cols(), budget);
  std::vector<Scalar> e(checked_size(rows, cols, budget), zero(s));
  for (std::size_t r1 = 0; r1 < f.rows(); ++r1) {
    for (std::size_t c1 = 0; c1 < f.cols(); ++c1) {
      const Scalar a = f.at(r1, c1);
      if (a == 0.0) continue;
      for (std::size_t r2 = 0; r2 < g.rows(); ++r2) {
        const std::size_t row = r1 * g.rows() + r2;
        for (std::size_t c2 = 0; c2 < g.cols(); ++c2) {
          e[row * cols + c1 * g.cols() + c2] = mul(s, a, g.at(r2, c2));
        }
      }
    }
  }
  return Matrix(s, concat(f.dom(), g.dom()), concat(f.cod(), g.cod()),
                std::move(e));
}

Matrix tensor_all(std::span<const Matrix> factors, std::size_t budget) {
  if (factors.empty()) throw InvalidArgument("tensor_all: no factors");
  Matrix acc = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) {
    acc = tensor(acc, factors[i], budget);
  }
  return acc;
}

Matrix add(const Matrix& f, const Matrix& g) {
  require_same_semiring(f, g, "add");
  if (f.rows() != g.rows() || f.cols() != g.cols()) {
    throw DimensionMismatch("add: shape " + describe(f) + " vs " +
                            describe(g));
  }
  const Semiring s = f.semiring();
  std::vector<Scalar> e(f.entries().size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    e[i] = add(s, f.entries()[i], g.entries()[i]);
  }
  return Matrix(s, f.dom(), f.cod(), std::move(e));
}

Matrix transpose(const Matrix& m) {
  std::vector<Scalar> e(m.entries().size());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      e[c * m.rows() + r] = m.at(r, c);
    }
  }
  return Matrix(m.semiring(), {m.rows()}, {m.cols()}, std::move(e));
}

Matrix transpose_via_cups(const Matrix& m, std::size_t budget) {
  const Semiring s = m.semiring();
  const std::size_t in = m.cols();
  const std::size_t out = m.rows();
  const Matrix flat = m.reshaped({in}, {out});
  const Matrix bend = tensor(cap(in, s), identity(out, s), budget);
  const Matrix box =
      tensor(tensor(identity(in, s), flat, budget), identity(out, s), budget);
  const Matrix close = tensor(identity(in, s), cup(out, s), budget);
  const Matrix chain[] = {bend, box, close};
  return compose_all(chain, budget).reshaped({out}, {in});
}

Scalar scalar_value(const Matrix& m) {
  if (!m.is_scalar()) {
    throw DimensionMismatch("scalar_value: matrix " + describe(m) +
                            " is not 1->1");
  }
  return m.entries()[0];
}

}  // namespace discocat
