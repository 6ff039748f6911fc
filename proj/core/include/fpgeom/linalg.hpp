#pragma once

// Row-reduction, rank, kernels and affine solvers over F_p. Vectors are
// horizontal; a system "A x = b" dots each row of A with the unknown x.

#include <cstddef>
#include <optional>
#include <vector>

#include "fpgeom/field.hpp"

namespace fpgeom {

class FpMatrix {
 public:
  FpMatrix() = default;
  FpMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static FpMatrix identity(std::size_t n);
  static FpMatrix from_rows(const std::vector<FpVec>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  fp_t& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  fp_t at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  FpVec row(std::size_t r) const {
    return FpVec(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_);
  }
  void set_row(std::size_t r, const FpVec& v);
  void append_row(const FpVec& v);

  bool operator==(const FpMatrix& o) const noexcept {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<fp_t> data_;
};

fp_t dot(const FieldContext& ctx, const FpVec& a, const FpVec& b);
FpVec add(const FieldContext& ctx, const FpVec& a, const FpVec& b);
FpVec sub(const FieldContext& ctx, const FpVec& a, const FpVec& b);
FpVec scale(const FieldContext& ctx, fp_t c, const FpVec& a);
// v * A for a horizontal vector v.
FpVec row_times_matrix(const FieldContext& ctx, const FpVec& v,
                       const FpMatrix& a);
FpMatrix transpose(const FpMatrix& a);
bool is_zero(const FpVec& v);

struct RrefResult {
  FpMatrix rref;
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_cols;  // strictly increasing
};

// Unique reduced row echelon form; pivots scan columns left to right.
RrefResult rref(const FieldContext& ctx, FpMatrix m);

std::size_t rank(const FieldContext& ctx, const FpMatrix& m);

// Basis of {x : (row_i . x) = 0 for every row of m}; deterministic
// free-column parametrization of the RREF.
std::vector<FpVec> kernel_basis(const FieldContext& ctx, const FpMatrix& m);

struct AffineSolution {
  FpVec particular;
  std::vector<FpVec> kernel;  // independent; solution set = particular + span
};

// Solves (row_i . x) = b_i; nullopt when inconsistent.
std::optional<AffineSolution> solve_affine(const FieldContext& ctx,
                                           const FpMatrix& a, const FpVec& b);

// Rows spanning {y : y . v = 0 for all v in the row space of basis}.
std::vector<FpVec> annihilator(const FieldContext& ctx,
                               const std::vector<FpVec>& basis,
                               std::size_t ambient_dim);

// Basis of the intersection of two row spaces inside F_p^ambient.
std::vector<FpVec> subspace_intersection(const FieldContext& ctx,
                                         const std::vector<FpVec>& a,
                                         const std::vector<FpVec>& b,
                                         std::size_t ambient_dim);

bool subspace_contains(const FieldContext& ctx, const std::vector<FpVec>& basis,
                       const FpVec& v);

}  // namespace fpgeom
