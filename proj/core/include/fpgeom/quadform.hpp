#pragma once

// Quadratic forms M(n) = (nA).n + n.u + v over F_p^d: evaluation, perp
// spaces, rank under restriction to affine subspaces, isotropy, and exact
// fiberwise enumeration of quadrics with affine and shift constraints.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "fpgeom/field.hpp"
#include "fpgeom/linalg.hpp"

namespace fpgeom {

class QuadraticForm {
 public:
  QuadraticForm(FieldContext ctx, FpMatrix a, FpVec u, fp_t v);

  static QuadraticForm homogeneous(FieldContext ctx, FpMatrix a);
  // The dot-product form |x|^2 on F_p^d.
  static QuadraticForm dot_square(FieldContext ctx, std::size_t d);

  const FieldContext& ctx() const noexcept { return ctx_; }
  std::size_t dimension() const noexcept { return u_.size(); }
  const FpMatrix& matrix() const noexcept { return a_; }
  const FpVec& linear() const noexcept { return u_; }
  fp_t constant() const noexcept { return v_; }

  bool is_pure() const { return is_zero(u_); }
  bool is_homogeneous() const { return is_pure() && v_ == 0; }
  std::size_t rank() const;  // rank of A
  bool is_nondegenerate() const { return rank() == dimension(); }

  fp_t operator()(const FpVec& n) const;  // throws DimensionMismatch

  QuadraticForm minus_constant(fp_t r) const;  // M - r
  QuadraticForm shifted(const FpVec& h) const;  // M(. + h)

 private:
  FieldContext ctx_;
  FpMatrix a_;
  FpVec u_;
  fp_t v_;
};

fp_t eval_form(const QuadraticForm& m, const FpVec& n);

struct AffineSubspace {
  std::vector<FpVec> basis;  // independent rows spanning V
  FpVec offset;              // c

  static AffineSubspace validated(const FieldContext& ctx,
                                  std::vector<FpVec> basis, FpVec offset);
  static AffineSubspace full(std::size_t d);
};

// {n : (mA).n = 0 for all m in V}, as a basis.
std::vector<FpVec> perp_subspace(const QuadraticForm& m,
                                 const std::vector<FpVec>& v_basis);

// rank(M) or, with a restriction V+c, dim(V) - dim(V `intersect` V^perp_M).
std::size_t form_rank(const QuadraticForm& m,
                      const std::optional<AffineSubspace>& restriction = {});

bool is_isotropic(const QuadraticForm& m, const std::vector<FpVec>& v_basis);

struct QuadricConstraints {
  std::optional<AffineSubspace> space;  // V + c
  std::vector<FpVec> shifts;            // h_1..h_t
};

// Visits every n with M(n) = r, n in V+c, and M(n + h_i) = r for each
// shift. The shift and subspace conditions reduce to affine-linear
// equations; the one quadratic condition is solved per fiber in the last
// free parameter. Returns the count.
std::uint64_t quadric_scan(const QuadraticForm& m, fp_t r,
                           const QuadricConstraints& cons,
                           const std::function<void(const FpVec&)>& visit);

std::uint64_t quadric_count(const QuadraticForm& m, fp_t r,
                            const QuadricConstraints& cons = {},
                            std::size_t threads = 1);

// Lexicographically sorted point list.
std::vector<FpVec> quadric_points(const QuadraticForm& m, fp_t r,
                                  const QuadricConstraints& cons = {},
                                  std::size_t threads = 1);

// Low-level fiber solver: visits {n : alpha (nA).n + w.n + c = 0 and
// (row_i . n) = rhs_i}. Backs the per-stage fibers of the variety scanner.
std::uint64_t quadratic_affine_scan(const FieldContext& ctx, const FpMatrix& a,
                                    fp_t alpha, const FpVec& w, fp_t c,
                                    const std::vector<FpVec>& lin_rows,
                                    const FpVec& lin_rhs,
                                    const std::function<void(const FpVec&)>& visit);

}  // namespace fpgeom
