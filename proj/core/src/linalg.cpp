#include "fpgeom/linalg.hpp"

namespace fpgeom {

FpMatrix FpMatrix::identity(std::size_t n) {
  FpMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

FpMatrix FpMatrix::from_rows(const std::vector<FpVec>& rows) {
  if (rows.empty()) return FpMatrix();
  FpMatrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) m.set_row(r, rows[r]);
  return m;
}

void FpMatrix::set_row(std::size_t r, const FpVec& v) {
  if (v.size() != cols_) throw DimensionMismatch("FpMatrix::set_row");
  std::copy(v.begin(), v.end(), data_.begin() + r * cols_);
}

void FpMatrix::append_row(const FpVec& v) {
  if (rows_ == 0 && cols_ == 0) cols_ = v.size();
  if (v.size() != cols_) throw DimensionMismatch("FpMatrix::append_row");
  data_.insert(data_.end(), v.begin(), v.end());
  ++rows_;
}

fp_t dot(const FieldContext& ctx, const FpVec& a, const FpVec& b) {
  if (a.size() != b.size()) throw DimensionMismatch("dot: length mismatch");
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc += std::uint64_t(a[i]) * b[i] % ctx.p();
  }
  return fp_t(acc % ctx.p());
}

FpVec add(const FieldContext& ctx, const FpVec& a, const FpVec& b) {
  if (a.size() != b.size()) throw DimensionMismatch("add: length mismatch");
  FpVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = ctx.add(a[i], b[i]);
  return out;
}

FpVec sub(const FieldContext& ctx, const FpVec& a, const FpVec& b) {
  if (a.size() != b.size()) throw DimensionMismatch("sub: length mismatch");
  FpVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = ctx.sub(a[i], b[i]);
  return out;
}

FpVec scale(const FieldContext& ctx, fp_t c, const FpVec& a) {
  FpVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = ctx.mul(c, a[i]);
  return out;
}

FpVec row_times_matrix(const FieldContext& ctx, const FpVec& v,
                       const FpMatrix& a) {
  if (v.size() != a.rows()) throw DimensionMismatch("row_times_matrix");
  FpVec out(a.cols(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (v[i] == 0) continue;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      out[j] = ctx.add(out[j], ctx.mul(v[i], a.at(i, j)));
    }
  }
  return out;
}

FpMatrix transpose(const FpMatrix& a) {
  FpMatrix t(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) t.at(c, r) = a.at(r, c);
  }
  return t;
}

bool is_zero(const FpVec& v) {
  for (fp_t x : v) {
    if (x != 0) return false;
  }
  return true;
}

RrefResult rref(const FieldContext& ctx, FpMatrix m) {
  RrefResult out;
  std::size_t lead = 0;
  for (std::size_t col = 0; col < m.cols() && lead < m.rows(); ++col) {
    std::size_t pivot = lead;
    while (pivot < m.rows() && m.at(pivot, col) == 0) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != lead) {
      for (std::size_t c = 0; c < m.cols(); ++c) {
        std::swap(m.at(pivot, c), m.at(lead, c));
      }
    }
    fp_t scale = ctx.inv(m.at(lead, col));
    for (std::size_t c = col; c < m.cols(); ++c) {
      m.at(lead, c) = ctx.mul(m.at(lead, c), scale);
    }
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == lead || m.at(r, col) == 0) continue;
      fp_t f = m.at(r, col);
      for (std::size_t c = col; c < m.cols(); ++c) {
        m.at(r, c) = ctx.sub(m.at(r, c), ctx.mul(f, m.at(lead, c)));
      }
    }
    out.pivot_cols.push_back(col);
    ++lead;
  }
  out.rank = out.pivot_cols.size();
  out.rref = std::move(m);
  return out;
}

std::size_t rank(const FieldContext& ctx, const FpMatrix& m) {
  return rref(ctx, m).rank;
}

std::vector<FpVec> kernel_basis(const FieldContext& ctx, const FpMatrix& m) {
  const std::size_t n = m.cols();
  RrefResult r = rref(ctx, m);
  std::vector<bool> is_pivot(n, false);
  for (std::size_t c : r.pivot_cols) is_pivot[c] = true;
  std::vector<FpVec> basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    FpVec v(n, 0);
    v[free] = 1;
    for (std::size_t i = 0; i < r.rank; ++i) {
      v[r.pivot_cols[i]] = ctx.neg(r.rref.at(i, free));
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<AffineSolution> solve_affine(const FieldContext& ctx,
                                           const FpMatrix& a, const FpVec& b) {
  if (b.size() != a.rows()) throw DimensionMismatch("solve_affine: rhs size");
  FpMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) aug.at(r, c) = a.at(r, c);
    aug.at(r, a.cols()) = b[r];
  }
  RrefResult red = rref(ctx, aug);
  for (std::size_t c : red.pivot_cols) {
    if (c == a.cols()) return std::nullopt;  // pivot in the rhs column
  }
  AffineSolution sol;
  sol.particular.assign(a.cols(), 0);
  for (std::size_t i = 0; i < red.rank; ++i) {
    sol.particular[red.pivot_cols[i]] = red.rref.at(i, a.cols());
  }
  // Kernel of the coefficient part, ignoring the rhs column.
  FpMatrix coeff(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) coeff.at(r, c) = a.at(r, c);
  }
  sol.kernel = kernel_basis(ctx, coeff);
  return sol;
}

std::vector<FpVec> annihilator(const FieldContext& ctx,
                               const std::vector<FpVec>& basis,
                               std::size_t ambient_dim) {
  if (basis.empty()) {
    std::vector<FpVec> full;
    for (std::size_t i = 0; i < ambient_dim; ++i) {
      FpVec e(ambient_dim, 0);
      e[i] = 1;
      full.push_back(std::move(e));
    }
    return full;
  }
  return kernel_basis(ctx, FpMatrix::from_rows(basis));
}

std::vector<FpVec> subspace_intersection(const FieldContext& ctx,
                                         const std::vector<FpVec>& a,
                                         const std::vector<FpVec>& b,
                                         std::size_t ambient_dim) {
  std::vector<FpVec> rows = annihilator(ctx, a, ambient_dim);
  std::vector<FpVec> rows_b = annihilator(ctx, b, ambient_dim);
  rows.insert(rows.end(), rows_b.begin(), rows_b.end());
  if (rows.empty()) return annihilator(ctx, {}, ambient_dim);  // whole space
  return kernel_basis(ctx, FpMatrix::from_rows(rows));
}

bool subspace_contains(const FieldContext& ctx, const std::vector<FpVec>& basis,
                       const FpVec& v) {
  if (is_zero(v)) return true;
  if (basis.empty()) return false;
  FpMatrix m = FpMatrix::from_rows(basis);
  std::size_t base_rank = rank(ctx, m);
  m.append_row(v);
  return rank(ctx, m) == base_rank;
}

}  // namespace fpgeom
