#include "fpgeom/congruence.hpp"

#include <algorithm>

#include "fpgeom/parallel.hpp"

namespace fpgeom {

std::optional<SphereWitness> find_sphere(const QuadraticForm& m,
                                         const Configuration& x) {
  if (!m.is_homogeneous()) throw Error("find_sphere: M must be homogeneous");
  const FieldContext& ctx = m.ctx();
  const std::size_t d = m.dimension();
  if (x.dim() != d) throw DimensionMismatch("find_sphere");
  const fp_t two = 2 % ctx.p();
  FpMatrix sys(x.size() - 1, d);
  FpVec rhs(x.size() - 1, 0);
  for (std::size_t j = 1; j < x.size(); ++j) {
    FpVec diff = sub(ctx, x.points[j], x.points[0]);
    FpVec row = scale(ctx, two, row_times_matrix(ctx, diff, m.matrix()));
    sys.set_row(j - 1, row);
    rhs[j - 1] = ctx.sub(m(x.points[j]), m(x.points[0]));
  }
  auto sol = (x.size() == 1)
                 ? std::optional<AffineSolution>(AffineSolution{FpVec(d, 0), {}})
                 : solve_affine(ctx, sys, rhs);
  if (!sol) return std::nullopt;
  SphereWitness w;
  w.center = sol->particular;
  w.radius = m(sub(ctx, x.points[0], w.center));
  for (const auto& pt : x.points) {
    if (m(sub(ctx, pt, w.center)) != w.radius) return std::nullopt;
  }
  return w;
}

bool lmp_criterion(const QuadraticForm& m, const Configuration& x) {
  if (!m.is_homogeneous() || !m.is_nondegenerate()) {
    throw Error("lmp_criterion: M must be non-degenerate homogeneous");
  }
  const FieldContext& ctx = m.ctx();
  const std::size_t d = m.dimension(), nj = x.size();
  FpMatrix sys(d + 1, nj);
  for (std::size_t j = 0; j < nj; ++j) {
    sys.at(0, j) = 1;
    for (std::size_t c = 0; c < d; ++c) sys.at(1 + c, j) = x.points[j][c];
  }
  FpVec values(nj);
  for (std::size_t j = 0; j < nj; ++j) values[j] = m(x.points[j]);
  for (const FpVec& c : kernel_basis(ctx, sys)) {
    if (dot(ctx, c, values) != 0) return false;
    // The u-perturbation term sum_j c_j (x_j . u) vanishes for kernel
    // vectors; checked against the standard basis.
    FpVec combo(d, 0);
    for (std::size_t j = 0; j < nj; ++j) {
      for (std::size_t t = 0; t < d; ++t) {
        combo[t] = ctx.add(combo[t], ctx.mul(c[j], x.points[j][t]));
      }
    }
    if (!is_zero(combo)) return false;
  }
  return true;
}

namespace {

bool isometric_on(const QuadraticForm& m, const Configuration& x,
                  const Configuration& y,
                  const std::vector<std::size_t>& idx) {
  const FieldContext& ctx = m.ctx();
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      FpVec dx = sub(ctx, x.points[idx[a]], x.points[idx[b]]);
      FpVec dy = sub(ctx, y.points[idx[a]], y.points[idx[b]]);
      if (m(dx) != m(dy)) return false;
    }
  }
  return true;
}

std::size_t span_dim(const Configuration& x) {
  std::vector<FpVec> rows;
  for (std::size_t j = 1; j < x.size(); ++j) {
    rows.push_back(sub(x.ctx, x.points[j], x.points[0]));
  }
  if (rows.empty()) return 0;
  return rank(x.ctx, FpMatrix::from_rows(rows));
}

}  // namespace

PairClassification classify_pair(const QuadraticForm& m, const Configuration& x,
                                 const Configuration& y) {
  if (x.size() != y.size()) {
    throw SizeMismatch("classify_pair: |X| != |Y|");
  }
  if (!m.is_homogeneous() || !m.is_nondegenerate()) {
    throw Error("classify_pair: M must be non-degenerate homogeneous");
  }
  const FieldContext& ctx = m.ctx();
  PairClassification out;

  std::vector<std::size_t> all(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) all[i] = i;
  out.isometric = isometric_on(m, x, y, all);

  ConfigurationAnalysis analysis = analyze_configuration(x);
  for (const auto& g : analysis.generating_sets) {
    bool ok = isometric_on(m, x, y, g.index_set);
    if (ok) {
      std::vector<FpVec> ytuple;
      for (std::size_t i : g.index_set) ytuple.push_back(y.points[i]);
      for (std::size_t j = 0; j < y.size() && ok; ++j) {
        ok = (apply_generating_map(ctx, g, j, ytuple) == y.points[j]);
      }
    }
    out.generating_sets.push_back(g.index_set);
    out.almost_congruent.push_back(ok);
  }

  // Decided without constructing the isometry: almost congruent w.r.t.
  // the canonical set plus equal difference-span dimensions.
  out.congruent = out.almost_congruent.front() && span_dim(x) == span_dim(y);
  return out;
}

std::optional<IsometryWitness> isometry_oracle(const QuadraticForm& m,
                                               const Configuration& x,
                                               const Configuration& y,
                                               const IsometryLimits& limits) {
  if (x.size() != y.size()) throw SizeMismatch("isometry_oracle");
  const FieldContext& ctx = m.ctx();
  const std::size_t d = m.dimension();
  const fp_t p = ctx.p();
  long double total_ld = 1;
  for (std::size_t i = 0; i < d * d; ++i) total_ld *= p;
  if (total_ld > static_cast<long double>(limits.max_candidates)) {
    throw LimitExceeded("isometry_oracle: p^(d^2) exceeds the budget");
  }
  const std::uint64_t total = static_cast<std::uint64_t>(total_ld);

  auto decode = [&](std::uint64_t index) {
    FpMatrix u(d, d);
    for (std::size_t cell = d * d; cell > 0; --cell) {
      u.at((cell - 1) / d, (cell - 1) % d) = fp_t(index % p);
      index /= p;
    }
    return u;
  };
  auto check = [&](const FpMatrix& u) -> std::optional<FpVec> {
    // U A U^T = A, entrywise.
    for (std::size_t i = 0; i < d; ++i) {
      FpVec ra = row_times_matrix(ctx, u.row(i), m.matrix());
      for (std::size_t j = i; j < d; ++j) {
        if (dot(ctx, ra, u.row(j)) != m.matrix().at(i, j)) return std::nullopt;
      }
    }
    FpVec z = sub(ctx, y.points[0], row_times_matrix(ctx, x.points[0], u));
    for (std::size_t j = 0; j < x.size(); ++j) {
      FpVec img = add(ctx, z, row_times_matrix(ctx, x.points[j], u));
      if (img != y.points[j]) return std::nullopt;
    }
    return z;
  };

  // First witness in lexicographic order: the per-block minima are merged
  // by taking the least index.
  auto ranges = block_ranges(total, 256);
  std::vector<std::uint64_t> found(ranges.size(), UINT64_MAX);
  parallel_blocks(ranges.size(), std::max<std::size_t>(1, limits.threads),
                  [&](std::size_t b) {
                    for (std::uint64_t i = ranges[b].first;
                         i < ranges[b].second; ++i) {
                      if (check(decode(i))) {
                        found[b] = i;
                        return;
                      }
                    }
                  });
  for (std::uint64_t idx : found) {
    if (idx != UINT64_MAX) {
      FpMatrix u = decode(idx);
      IsometryWitness w;
      w.shift = *check(u);
      w.u = std::move(u);
      return w;
    }
  }
  return std::nullopt;
}

}  // namespace fpgeom
