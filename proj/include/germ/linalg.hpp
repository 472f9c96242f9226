#pragma once

// Exact linear algebra on coefficient vectors: reduced row echelon bases,
// membership with coordinates, kernels, intersections.

#include <optional>
#include <vector>

#include "germ/exactfield.hpp"

namespace germ {

using Vec = std::vector<FieldElem>;

Vec zero_vec(const Field& f, std::size_t dim);
bool is_zero_vec(const Vec& v);
Vec add_vec(const Vec& a, const Vec& b);
Vec sub_vec(const Vec& a, const Vec& b);
Vec scale_vec(const Vec& a, const FieldElem& c);
/// a += c * b
void axpy(Vec& a, const FieldElem& c, const Vec& b);

/// Row-reduced basis of a subspace of F^dim. Rows are kept sorted by pivot.
class SubspaceBasis {
 public:
  SubspaceBasis() = default;
  SubspaceBasis(Field f, std::size_t dim);
  static SubspaceBasis span(const Field& f, std::size_t dim, const std::vector<Vec>& gens);

  const Field& field() const { return field_; }
  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return rows_.size(); }
  const std::vector<Vec>& rows() const { return rows_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  /// Inserts v; returns false when v was already in the span.
  bool add(const Vec& v);
  /// v minus its projection along the rows (zero on pivot columns).
  Vec reduce(const Vec& v) const;
  bool contains(const Vec& v) const;
  /// Coordinates of v in the rows when v lies in the span.
  std::optional<Vec> membership(const Vec& v) const;
  bool contains(const SubspaceBasis& other) const;
  bool operator==(const SubspaceBasis& other) const;

  SubspaceBasis intersect(const SubspaceBasis& other) const;
  SubspaceBasis sum(const SubspaceBasis& other) const;
  /// The same subspace with coefficients in ext.top().
  SubspaceBasis base_change(const Extension& ext) const;

 private:
  Field field_;
  std::size_t dim_ = 0;
  std::vector<Vec> rows_;
  std::vector<std::size_t> pivots_;
};

/// Gaussian elimination that remembers how each row was built from the
/// inserted generators. Used for kernels and for solving in terms of a
/// generating family.
class TrackedElimination {
 public:
  TrackedElimination(Field f, std::size_t dim, std::size_t generators);

  /// Inserts generator number `index`; returns its kernel relation when it
  /// is dependent on earlier generators.
  std::optional<Vec> insert(std::size_t index, const Vec& v);
  /// Coefficients c with sum c_i gen_i = target, if any.
  std::optional<Vec> solve(const Vec& target) const;
  std::size_t rank() const { return rows_.size(); }

 private:
  Field field_;
  std::size_t dim_, ngen_;
  std::vector<Vec> rows_, combos_;
  std::vector<std::size_t> pivots_;
};

/// Basis of {c : sum c_i gens_i = 0}.
std::vector<Vec> kernel(const Field& f, std::size_t dim, const std::vector<Vec>& gens);
/// Some c with sum c_i gens_i = target.
std::optional<Vec> solve_combination(const Field& f, std::size_t dim, const std::vector<Vec>& gens,
                                     const Vec& target);

}  // namespace germ
