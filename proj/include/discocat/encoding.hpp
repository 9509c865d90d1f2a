#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "discocat/knowledge_base.hpp"
#include "discocat/matrix.hpp"

namespace discocat {

/// The distributional encoding E : |E| -> n. Column e is the noun-space
/// vector of entity e.
class EncodingMatrix {
 public:
  /// `matrix` must be |E| -> n with valid entries for its semiring.
  explicit EncodingMatrix(Matrix matrix);

  const Matrix& matrix() const noexcept { return matrix_; }
  Semiring semiring() const noexcept { return matrix_.semiring(); }
  std::size_t dim() const noexcept { return matrix_.rows(); }
  std::size_t num_entities() const noexcept { return matrix_.cols(); }

  /// Column e, contiguous.
  std::span<const Scalar> column(std::size_t e) const;
  /// E|e> : 1 -> n.
  Matrix encode(std::size_t e) const;

 private:
  Matrix matrix_;
  std::vector<Scalar> columns_;  // column-major copy of matrix_
};

/// R : |R| -> n (x) n. Column v holds sum over (s, v, o) in K of
/// E|s> (x) E|o>.
class VerbMatrix {
 public:
  explicit VerbMatrix(Matrix matrix);

  const Matrix& matrix() const noexcept { return matrix_; }
  Semiring semiring() const noexcept { return matrix_.semiring(); }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t num_relations() const noexcept { return matrix_.cols(); }

  /// Column v reshaped to an n x n row-major block: block(v)[i * n + j] is
  /// the weight of subject coordinate i against object coordinate j.
  std::span<const Scalar> block(std::size_t v) const;
  /// R|v> : 1 -> n (x) n.
  Matrix encode(std::size_t v) const;

 private:
  Matrix matrix_;
  std::size_t dim_;
  std::vector<Scalar> blocks_;
};

/// Reads `entity<TAB>c1,c2,...,cn` lines. Every vocabulary entity must be
/// covered exactly once and every row must have the same length.
EncodingMatrix parse_embeddings(std::istream& in, const Vocabulary& vocab,
                                Semiring s = Semiring::kReal);
EncodingMatrix load_embeddings(const std::filesystem::path& path,
                               const Vocabulary& vocab,
                               Semiring s = Semiring::kReal);

/// n = |E| and E = identity.
EncodingMatrix identity_encoding(const Vocabulary& vocab, Semiring s);

/// Accumulates one E|s> (x) E|o> outer product per stored triple, in
/// insertion order.
VerbMatrix build_verb_matrix(const EncodingMatrix& enc,
                             const KnowledgeGraph& kg,
                             const Vocabulary& vocab);

/// <e1| E^T E |e2>.
Scalar similarity(const EncodingMatrix& enc, std::size_t e1, std::size_t e2);

struct NormalizedEncoding {
  EncodingMatrix encoding;
  /// Entities whose column was all zero and was left unchanged.
  std::vector<std::size_t> zero_columns;
};

/// Divides each nonzero column by its entry sum. Nonneg-real only.
NormalizedEncoding normalize_l1(const EncodingMatrix& enc);

}  // namespace discocat
