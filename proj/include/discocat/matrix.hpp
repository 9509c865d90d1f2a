#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "discocat/semiring.hpp"

namespace discocat {

/// Default cap on the number of scalars a single Matrix may hold (2^26).
inline constexpr std::size_t kDefaultBudget = std::size_t{1} << 26;

using Shape = std::vector<std::size_t>;

/// Product of factor dimensions; the empty shape has product 1.
std::size_t shape_product(std::span<const std::size_t> shape);

/// Product that throws BudgetExceeded instead of overflowing or exceeding
/// `budget`.
std::size_t checked_product(std::span<const std::size_t> shape,
                            std::size_t budget = kDefaultBudget);

std::string shape_to_string(std::span<const std::size_t> shape);

/// A semiring-valued matrix `dom -> cod`, an arrow of Mat(S).
///
/// Storage is dense and row-major over (cod index, dom index): the entry for
/// output row `r` and input column `c` lives at `r * cols() + c`. The factor
/// lists only document the wires; composition checks products alone, so
/// `n (x) (n (x) n)` and `(n (x) n) (x) n` compose freely. Multi-factor
/// indices are mixed-radix with the first factor most significant.
///
/// Instances are immutable values.
class Matrix {
 public:
  /// Zero matrix of the given shape.
  Matrix(Semiring semiring, Shape dom, Shape cod,
         std::size_t budget = kDefaultBudget);

  /// Takes ownership of `entries`, which must hold rows()*cols() values that
  /// are valid for `semiring`.
  Matrix(Semiring semiring, Shape dom, Shape cod, std::vector<Scalar> entries);

  Semiring semiring() const noexcept { return semiring_; }
  const Shape& dom() const noexcept { return dom_; }
  const Shape& cod() const noexcept { return cod_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::span<const Scalar> entries() const noexcept { return entries_; }

  Scalar at(std::size_t row, std::size_t col) const {
    return entries_[row * cols_ + col];
  }

  bool is_scalar() const noexcept { return rows_ == 1 && cols_ == 1; }
  bool is_state() const noexcept { return cols_ == 1; }
  bool is_effect() const noexcept { return rows_ == 1; }

  /// Same matrix with different factor bookkeeping (products must agree).
  Matrix reshaped(Shape dom, Shape cod) const;

  /// Shape and semiring equal; entries equal under scalars_equal.
  bool approx_equal(const Matrix& other,
                    double rel_tol = kDefaultRelTol) const;

  /// Exact entrywise equality including shapes.
  friend bool operator==(const Matrix& a, const Matrix& b);

 private:
  Semiring semiring_;
  Shape dom_;
  Shape cod_;
  std::size_t rows_ = 1;
  std::size_t cols_ = 1;
  std::vector<Scalar> entries_;
};

std::ostream& operator<<(std::ostream& os, const Matrix& m);

/// Debug rendering: dom/cod factor lists plus at most `max_rows` x `max_cols`
/// entries.
std::string pretty(const Matrix& m, std::size_t max_rows = 8,
                   std::size_t max_cols = 8);

// --- Constructors --------------------------------------------------------

Matrix identity(std::size_t n, Semiring s);
/// Identity on a multi-factor wire bundle.
Matrix identity(Shape factors, Semiring s, std::size_t budget = kDefaultBudget);
Matrix scalar(Scalar value, Semiring s);
Matrix zeros(Shape dom, Shape cod, Semiring s);

/// |e_i> : 1 -> n.
Matrix one_hot_state(std::size_t i, std::size_t n, Semiring s);
/// <e_i| : n -> 1.
Matrix one_hot_effect(std::size_t i, std::size_t n, Semiring s);

/// Column vector `1 -> n` with the given entries.
Matrix state(std::vector<Scalar> entries, Semiring s);
/// Row vector `n -> 1` with the given entries.
Matrix effect(std::vector<Scalar> entries, Semiring s);

/// Kronecker delta sum_i |e_i>^{(x)b} <e_i|^{(x)a} : n^a -> n^b.
Matrix spider(std::size_t inputs, std::size_t outputs, std::size_t n,
              Semiring s, std::size_t budget = kDefaultBudget);
/// spider(2, 0, n).
Matrix cup(std::size_t n, Semiring s);
/// spider(0, 2, n).
Matrix cap(std::size_t n, Semiring s);

/// Symmetry m (x) n -> n (x) m.
Matrix swap(std::size_t m, std::size_t n, Semiring s,
            std::size_t budget = kDefaultBudget);

// --- Operations ----------------------------------------------------------

/// g . f (apply f, then g).
Matrix compose(const Matrix& f, const Matrix& g,
               std::size_t budget = kDefaultBudget);

/// Composes left to right: compose_all({f1, f2, f3}) = f3 . f2 . f1.
Matrix compose_all(std::span<const Matrix> chain,
                   std::size_t budget = kDefaultBudget);

/// Kronecker product f (x) g.
Matrix tensor(const Matrix& f, const Matrix& g,
              std::size_t budget = kDefaultBudget);

Matrix tensor_all(std::span<const Matrix> factors,
                  std::size_t budget = kDefaultBudget);

Matrix add(const Matrix& f, const Matrix& g);

/// Entrywise index swap. Factor lists collapse to [rows] and [cols].
Matrix transpose(const Matrix& m);

/// (id_m (x) cup_n)(id_m (x) M (x) id_n)(cap_m (x) id_n) for M : m -> n.
Matrix transpose_via_cups(const Matrix& m, std::size_t budget = kDefaultBudget);

/// The single entry of a 1 -> 1 matrix.
Scalar scalar_value(const Matrix& m);

}  // namespace discocat
