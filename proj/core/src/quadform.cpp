#include "fpgeom/quadform.hpp"

#include <algorithm>

#include "fpgeom/parallel.hpp"

namespace fpgeom {

QuadraticForm::QuadraticForm(FieldContext ctx, FpMatrix a, FpVec u, fp_t v)
    : ctx_(ctx), a_(std::move(a)), u_(std::move(u)), v_(v % ctx.p()) {
  const std::size_t d = u_.size();
  if (a_.rows() != d || a_.cols() != d) {
    throw DimensionMismatch("QuadraticForm: matrix/linear size mismatch");
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      if (a_.at(i, j) != a_.at(j, i)) {
        throw Error("QuadraticForm: associated matrix must be symmetric");
      }
    }
  }
}

QuadraticForm QuadraticForm::homogeneous(FieldContext ctx, FpMatrix a) {
  FpVec u(a.rows(), 0);
  return QuadraticForm(ctx, std::move(a), std::move(u), 0);
}

QuadraticForm QuadraticForm::dot_square(FieldContext ctx, std::size_t d) {
  return homogeneous(ctx, FpMatrix::identity(d));
}

std::size_t QuadraticForm::rank() const { return fpgeom::rank(ctx_, a_); }

fp_t QuadraticForm::operator()(const FpVec& n) const {
  if (n.size() != dimension()) throw DimensionMismatch("eval_form");
  FpVec na = row_times_matrix(ctx_, n, a_);
  return ctx_.add(dot(ctx_, na, n), ctx_.add(dot(ctx_, n, u_), v_));
}

QuadraticForm QuadraticForm::minus_constant(fp_t r) const {
  return QuadraticForm(ctx_, a_, u_, ctx_.sub(v_, r % ctx_.p()));
}

QuadraticForm QuadraticForm::shifted(const FpVec& h) const {
  if (h.size() != dimension()) throw DimensionMismatch("shifted");
  // M(n + h) = (nA).n + n.(2hA + u) + M(h)
  FpVec ha = row_times_matrix(ctx_, h, a_);
  FpVec u2(dimension());
  for (std::size_t i = 0; i < dimension(); ++i) {
    u2[i] = ctx_.add(u_[i], ctx_.mul(2 % ctx_.p(), ha[i]));
  }
  return QuadraticForm(ctx_, a_, std::move(u2), (*this)(h));
}

fp_t eval_form(const QuadraticForm& m, const FpVec& n) { return m(n); }

AffineSubspace AffineSubspace::validated(const FieldContext& ctx,
                                         std::vector<FpVec> basis,
                                         FpVec offset) {
  if (!basis.empty()) {
    if (rank(ctx, FpMatrix::from_rows(basis)) != basis.size()) {
      throw Error("AffineSubspace: basis rows are dependent");
    }
    for (const auto& b : basis) {
      if (b.size() != offset.size()) {
        throw DimensionMismatch("AffineSubspace: basis/offset dimension");
      }
    }
  }
  return AffineSubspace{std::move(basis), std::move(offset)};
}

AffineSubspace AffineSubspace::full(std::size_t d) {
  AffineSubspace s;
  s.offset.assign(d, 0);
  for (std::size_t i = 0; i < d; ++i) {
    FpVec e(d, 0);
    e[i] = 1;
    s.basis.push_back(std::move(e));
  }
  return s;
}

std::vector<FpVec> perp_subspace(const QuadraticForm& m,
                                 const std::vector<FpVec>& v_basis) {
  const FieldContext& ctx = m.ctx();
  if (v_basis.empty()) return annihilator(ctx, {}, m.dimension());
  std::vector<FpVec> rows;
  rows.reserve(v_basis.size());
  for (const auto& v : v_basis) {
    rows.push_back(row_times_matrix(ctx, v, m.matrix()));
  }
  return kernel_basis(ctx, FpMatrix::from_rows(rows));
}

std::size_t form_rank(const QuadraticForm& m,
                      const std::optional<AffineSubspace>& restriction) {
  if (!restriction) return m.rank();
  const FieldContext& ctx = m.ctx();
  const auto& v = restriction->basis;
  std::vector<FpVec> perp = perp_subspace(m, v);
  std::vector<FpVec> meet =
      subspace_intersection(ctx, v, perp, m.dimension());
  return v.size() - meet.size();
}

bool is_isotropic(const QuadraticForm& m, const std::vector<FpVec>& v_basis) {
  if (v_basis.empty()) return false;
  std::vector<FpVec> perp = perp_subspace(m, v_basis);
  return !subspace_intersection(m.ctx(), v_basis, perp, m.dimension()).empty();
}

namespace {

// The constraint set reduced to free parameters: points are
// n0 + sum_j t_j w_j, and the residual quadratic condition is
// Q(t) = sum_{j,l} q[j][l] t_j t_l + sum_j lin[j] t_j + c0 = 0
// with q symmetric over all ordered pairs.
struct ParamQuadric {
  FpVec n0;
  std::vector<FpVec> w;
  std::vector<FpVec> q;
  FpVec lin;
  fp_t c0 = 0;
};

std::optional<ParamQuadric> reduce_constraints(const QuadraticForm& m, fp_t r,
                                               const QuadricConstraints& cons) {
  const FieldContext& ctx = m.ctx();
  const std::size_t d = m.dimension();
  std::vector<FpVec> rows;
  FpVec rhs;
  if (cons.space) {
    std::vector<FpVec> ann = annihilator(ctx, cons.space->basis, d);
    for (const auto& a : ann) {
      rows.push_back(a);
      rhs.push_back(dot(ctx, a, cons.space->offset));
    }
  }
  const fp_t two = 2 % ctx.p();
  for (const auto& h : cons.shifts) {
    if (h.size() != d) throw DimensionMismatch("quadric shift dimension");
    // M(n+h) = M(n) forces 2(hA).n = -((hA).h + u.h).
    FpVec ha = row_times_matrix(ctx, h, m.matrix());
    FpVec row = scale(ctx, two, ha);
    fp_t c = ctx.add(dot(ctx, ha, h), dot(ctx, m.linear(), h));
    rows.push_back(std::move(row));
    rhs.push_back(ctx.neg(c));
  }

  ParamQuadric pq;
  if (rows.empty()) {
    pq.n0.assign(d, 0);
    for (std::size_t i = 0; i < d; ++i) {
      FpVec e(d, 0);
      e[i] = 1;
      pq.w.push_back(std::move(e));
    }
  } else {
    auto sol = solve_affine(ctx, FpMatrix::from_rows(rows), rhs);
    if (!sol) return std::nullopt;
    pq.n0 = std::move(sol->particular);
    pq.w = std::move(sol->kernel);
  }
  const std::size_t mdim = pq.w.size();
  pq.q.assign(mdim, FpVec(mdim, 0));
  std::vector<FpVec> wa(mdim);
  for (std::size_t j = 0; j < mdim; ++j) {
    wa[j] = row_times_matrix(ctx, pq.w[j], m.matrix());
  }
  for (std::size_t j = 0; j < mdim; ++j) {
    for (std::size_t l = j; l < mdim; ++l) {
      fp_t v = dot(ctx, wa[j], pq.w[l]);
      pq.q[j][l] = v;
      pq.q[l][j] = v;
    }
  }
  FpVec n0a = row_times_matrix(ctx, pq.n0, m.matrix());
  pq.lin.assign(mdim, 0);
  for (std::size_t j = 0; j < mdim; ++j) {
    pq.lin[j] = ctx.add(ctx.mul(two, dot(ctx, n0a, pq.w[j])),
                        dot(ctx, m.linear(), pq.w[j]));
  }
  pq.c0 = ctx.sub(m(pq.n0), r % ctx.p());
  return pq;
}

// Roots of a x^2 + b x + c over F_p, ascending. Returns all of F_p as
// count p with the sentinel flag.
struct FiberRoots {
  fp_t roots[2] = {0, 0};
  int count = 0;
  bool whole_line = false;
};

FiberRoots solve_fiber(const FieldContext& ctx, fp_t a, fp_t b, fp_t c) {
  FiberRoots out;
  if (a == 0) {
    if (b == 0) {
      out.whole_line = (c == 0);
      return out;
    }
    out.roots[out.count++] = ctx.mul(ctx.neg(c), ctx.inv(b));
    return out;
  }
  const fp_t disc =
      ctx.sub(ctx.mul(b, b), ctx.mul(ctx.mul(4 % ctx.p(), a), c));
  auto root = ctx.sqrt(disc);
  if (!root) return out;
  const fp_t inv2a = ctx.inv(ctx.mul(2 % ctx.p(), a));
  if (*root == 0) {
    out.roots[out.count++] = ctx.mul(ctx.neg(b), inv2a);
    return out;
  }
  fp_t r1 = ctx.mul(ctx.sub(*root, b), inv2a);
  fp_t r2 = ctx.mul(ctx.neg(ctx.add(*root, b)), inv2a);
  if (r1 > r2) std::swap(r1, r2);
  out.roots[out.count++] = r1;
  out.roots[out.count++] = r2;
  return out;
}

std::uint64_t scan_params(const FieldContext& ctx, const ParamQuadric& pq,
                          fp_t first_lo, fp_t first_hi,
                          const std::function<void(const FpVec&)>& visit) {
  const fp_t p = ctx.p();
  const std::size_t mdim = pq.w.size();
  std::uint64_t count = 0;
  FpVec point = pq.n0;
  auto emit = [&](const FpVec& t) {
    point = pq.n0;
    for (std::size_t j = 0; j < mdim; ++j) {
      if (t[j] == 0) continue;
      for (std::size_t c = 0; c < point.size(); ++c) {
        point[c] = ctx.add(point[c], ctx.mul(t[j], pq.w[j][c]));
      }
    }
    ++count;
    if (visit) visit(point);
  };

  if (mdim == 0) {
    if (pq.c0 == 0 && first_lo == 0) emit({});
    return count;
  }

  const std::size_t np = mdim - 1;  // prefix length
  if (np > 0 && first_lo >= first_hi) return 0;
  FpVec t(mdim, 0);
  bool done = false;
  if (np > 0) t[0] = first_lo;
  while (!done) {
    // Q restricted to the fiber in the last parameter.
    fp_t a = pq.q[np][np];
    fp_t b = pq.lin[np];
    fp_t c = pq.c0;
    for (std::size_t j = 0; j < np; ++j) {
      if (t[j] == 0) continue;
      b = ctx.add(b, ctx.mul(ctx.mul(2 % p, pq.q[j][np]), t[j]));
      c = ctx.add(c, ctx.mul(pq.lin[j], t[j]));
      c = ctx.add(c, ctx.mul(ctx.mul(pq.q[j][j], t[j]), t[j]));
      for (std::size_t l = j + 1; l < np; ++l) {
        c = ctx.add(c, ctx.mul(ctx.mul(ctx.mul(2 % p, pq.q[j][l]), t[j]), t[l]));
      }
    }
    FiberRoots roots = solve_fiber(ctx, a, b, c);
    if (roots.whole_line) {
      for (fp_t s = 0; s < p; ++s) {
        t[np] = s;
        emit(t);
      }
    } else {
      for (int i = 0; i < roots.count; ++i) {
        t[np] = roots.roots[i];
        emit(t);
      }
    }
    t[np] = 0;
    if (np == 0) break;
    // Odometer over the prefix; the first coordinate walks [first_lo, first_hi).
    std::size_t pos = np;
    while (pos > 0) {
      --pos;
      fp_t limit = (pos == 0) ? first_hi : p;
      if (++t[pos] < limit) break;
      t[pos] = (pos == 0) ? first_hi : 0;
      if (pos == 0) done = true;
    }
    if (t[0] >= first_hi && np > 0) done = true;
  }
  return count;
}

}  // namespace

std::uint64_t quadric_scan(const QuadraticForm& m, fp_t r,
                           const QuadricConstraints& cons,
                           const std::function<void(const FpVec&)>& visit) {
  auto pq = reduce_constraints(m, r, cons);
  if (!pq) return 0;
  const fp_t hi = pq->w.size() > 1 ? m.ctx().p() : 1;
  return scan_params(m.ctx(), *pq, 0, hi, visit);
}

std::uint64_t quadric_count(const QuadraticForm& m, fp_t r,
                            const QuadricConstraints& cons,
                            std::size_t threads) {
  auto pq = reduce_constraints(m, r, cons);
  if (!pq) return 0;
  const FieldContext& ctx = m.ctx();
  if (pq->w.size() <= 1 || threads <= 1) {
    const fp_t hi = pq->w.size() > 1 ? ctx.p() : 1;
    return scan_params(ctx, *pq, 0, hi, nullptr);
  }
  auto ranges = block_ranges(ctx.p());
  std::vector<std::uint64_t> partial(ranges.size(), 0);
  parallel_blocks(ranges.size(), threads, [&](std::size_t b) {
    partial[b] = scan_params(ctx, *pq, fp_t(ranges[b].first),
                             fp_t(ranges[b].second), nullptr);
  });
  std::uint64_t total = 0;
  for (std::uint64_t c : partial) total += c;
  return total;
}

std::uint64_t quadratic_affine_scan(const FieldContext& ctx, const FpMatrix& a,
                                    fp_t alpha, const FpVec& w, fp_t c,
                                    const std::vector<FpVec>& lin_rows,
                                    const FpVec& lin_rhs,
                                    const std::function<void(const FpVec&)>& visit) {
  const std::size_t d = a.rows();
  ParamQuadric pq;
  if (lin_rows.empty()) {
    pq.n0.assign(d, 0);
    for (std::size_t i = 0; i < d; ++i) {
      FpVec e(d, 0);
      e[i] = 1;
      pq.w.push_back(std::move(e));
    }
  } else {
    auto sol = solve_affine(ctx, FpMatrix::from_rows(lin_rows), lin_rhs);
    if (!sol) return 0;
    pq.n0 = std::move(sol->particular);
    pq.w = std::move(sol->kernel);
  }
  const std::size_t mdim = pq.w.size();
  const fp_t two = 2 % ctx.p();
  pq.q.assign(mdim, FpVec(mdim, 0));
  std::vector<FpVec> wa(mdim);
  for (std::size_t j = 0; j < mdim; ++j) {
    wa[j] = row_times_matrix(ctx, pq.w[j], a);
  }
  for (std::size_t j = 0; j < mdim; ++j) {
    for (std::size_t l = j; l < mdim; ++l) {
      fp_t v = ctx.mul(alpha, dot(ctx, wa[j], pq.w[l]));
      pq.q[j][l] = v;
      pq.q[l][j] = v;
    }
  }
  FpVec n0a = row_times_matrix(ctx, pq.n0, a);
  pq.lin.assign(mdim, 0);
  for (std::size_t j = 0; j < mdim; ++j) {
    pq.lin[j] = ctx.add(ctx.mul(ctx.mul(two, alpha), dot(ctx, n0a, pq.w[j])),
                        dot(ctx, w, pq.w[j]));
  }
  pq.c0 = ctx.add(ctx.mul(alpha, dot(ctx, n0a, pq.n0)),
                  ctx.add(dot(ctx, w, pq.n0), c % ctx.p()));
  const fp_t hi = mdim > 1 ? ctx.p() : 1;
  return scan_params(ctx, pq, 0, hi, visit);
}

std::vector<FpVec> quadric_points(const QuadraticForm& m, fp_t r,
                                  const QuadricConstraints& cons,
                                  std::size_t threads) {
  auto pq = reduce_constraints(m, r, cons);
  std::vector<FpVec> out;
  if (!pq) return out;
  const FieldContext& ctx = m.ctx();
  if (pq->w.size() <= 1 || threads <= 1) {
    const fp_t hi = pq->w.size() > 1 ? ctx.p() : 1;
    scan_params(ctx, *pq, 0, hi, [&](const FpVec& n) { out.push_back(n); });
  } else {
    auto ranges = block_ranges(ctx.p());
    std::vector<std::vector<FpVec>> partial(ranges.size());
    parallel_blocks(ranges.size(), threads, [&](std::size_t b) {
      scan_params(ctx, *pq, fp_t(ranges[b].first), fp_t(ranges[b].second),
                  [&](const FpVec& n) { partial[b].push_back(n); });
    });
    for (auto& block : partial) {
      out.insert(out.end(), std::make_move_iterator(block.begin()),
                 std::make_move_iterator(block.end()));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace fpgeom
