#include "fpgeom/gowers.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "fpgeom/parallel.hpp"

namespace fpgeom {

namespace {

std::uint64_t pow_u64(std::uint64_t base, std::size_t e) {
  std::uint64_t out = 1;
  while (e--) out *= base;
  return out;
}

bool encodable(fp_t p, std::size_t d) {
  long double v = 1;
  for (std::size_t i = 0; i < d; ++i) {
    v *= p;
    if (v > 9e18L) return false;
  }
  return true;
}

}  // namespace

SphereGrid::SphereGrid(QuadraticForm m, fp_t r)
    : form_(std::move(m)), r_(r % form_.ctx().p()) {
  if (!encodable(ctx().p(), dim())) {
    throw Error("SphereGrid: p^d too large to index");
  }
  quadric_scan(form_, r_, {}, [&](const FpVec& n) { points_.push_back(n); });
  std::sort(points_.begin(), points_.end());
  index_.assign(pow_u64(ctx().p(), dim()), UINT32_MAX);
  for (std::size_t i = 0; i < points_.size(); ++i) {
    index_[encode(points_[i])] = std::uint32_t(i);
  }
}

std::uint64_t SphereGrid::encode(const FpVec& n) const {
  std::uint64_t code = 0;
  for (fp_t x : n) code = code * ctx().p() + x;
  return code;
}

std::optional<std::size_t> SphereGrid::index_of(const FpVec& n) const {
  std::uint32_t i = index_[encode(n)];
  if (i == UINT32_MAX) return std::nullopt;
  return std::size_t(i);
}

ComplexGrid::ComplexGrid(std::shared_ptr<const SphereGrid> grid,
                         std::vector<std::complex<double>> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_ || values_.size() != grid_->size()) {
    throw DimensionMismatch("ComplexGrid: one value per sphere point");
  }
}

ComplexGrid ComplexGrid::constant(std::shared_ptr<const SphereGrid> grid,
                                  std::complex<double> z) {
  std::vector<std::complex<double>> values(grid->size(), z);
  return ComplexGrid(std::move(grid), std::move(values));
}

double ComplexGrid::max_abs() const {
  double m = 0;
  for (const auto& z : values_) m = std::max(m, std::abs(z));
  return m;
}

std::vector<BoxTuple> box_set(const std::vector<FpVec>& omega, std::size_t s,
                              const FieldContext& ctx, std::uint64_t budget) {
  std::vector<BoxTuple> out;
  if (omega.empty()) return out;
  const std::size_t d = omega.front().size();
  if (s == 0) {
    for (const auto& n : omega) out.push_back(BoxTuple{n, {}});
    return out;
  }
  if (!encodable(ctx.p(), d)) throw Error("box_set: p^d too large");
  if (!encodable(ctx.p(), d * s)) {
    throw BudgetExceeded("box_set: difference space too large to scan");
  }
  std::unordered_set<std::uint64_t> members;
  auto encode = [&](const FpVec& n) {
    std::uint64_t code = 0;
    for (fp_t x : n) code = code * ctx.p() + x;
    return code;
  };
  for (const auto& n : omega) members.insert(encode(n));

  const std::uint64_t hcount = pow_u64(ctx.p(), d * s);
  if (std::uint64_t(omega.size()) > budget / std::max<std::uint64_t>(1, hcount)) {
    throw BudgetExceeded("box_set: scan too large");
  }
  std::vector<FpVec> hs(s, FpVec(d, 0));
  FpVec corner(d);
  for (const auto& n : omega) {
    for (auto& h : hs) std::fill(h.begin(), h.end(), 0);
    for (std::uint64_t idx = 0; idx < hcount; ++idx) {
      bool ok = true;
      for (std::uint32_t eps = 1; eps < (1u << s) && ok; ++eps) {
        corner = n;
        for (std::size_t m = 0; m < s; ++m) {
          if (eps & (1u << m)) corner = add(ctx, corner, hs[m]);
        }
        ok = members.count(encode(corner)) > 0;
      }
      if (ok) out.push_back(BoxTuple{n, hs});
      // odometer over the concatenated h coordinates
      for (std::size_t pos = d * s; pos-- > 0;) {
        fp_t& cell = hs[pos / d][pos % d];
        if (++cell < ctx.p()) break;
        cell = 0;
      }
    }
  }
  return out;
}

bool box_sphere_membership(const QuadraticForm& m, fp_t r,
                           const std::optional<AffineSubspace>& space,
                           const BoxTuple& tuple) {
  const FieldContext& ctx = m.ctx();
  if (space) {
    FpVec rel = sub(ctx, tuple.base, space->offset);
    if (!subspace_contains(ctx, space->basis, rel)) return false;
    for (const auto& h : tuple.diffs) {
      if (!subspace_contains(ctx, space->basis, h)) return false;
    }
  }
  if (m(tuple.base) != r % ctx.p()) return false;
  for (const auto& h : tuple.diffs) {
    if (m(add(ctx, tuple.base, h)) != r % ctx.p()) return false;
  }
  for (std::size_t i = 0; i < tuple.diffs.size(); ++i) {
    FpVec ha = row_times_matrix(ctx, tuple.diffs[i], m.matrix());
    for (std::size_t j = 0; j < tuple.diffs.size(); ++j) {
      if (i != j && dot(ctx, ha, tuple.diffs[j]) != 0) return false;
    }
  }
  return true;
}

namespace {

// Difference tuples h_1..h_s with h_i in V and (h_i A) . h_j = 0 pairwise,
// visited depth-first; at each leaf the base points come from the shifted
// quadric intersection.
void scan_h_tuples(const QuadraticForm& m, fp_t r,
                   const std::optional<AffineSubspace>& space, std::size_t s,
                   std::vector<FpVec>& hs, std::uint64_t& work,
                   std::uint64_t budget,
                   const std::function<void(const std::vector<FpVec>&)>& leaf) {
  const FieldContext& ctx = m.ctx();
  const std::size_t d = m.dimension();
  if (hs.size() == s) {
    leaf(hs);
    return;
  }
  std::vector<FpVec> rows;
  FpVec rhs;
  if (space) {
    for (const auto& a : annihilator(ctx, space->basis, d)) {
      rows.push_back(a);
      rhs.push_back(0);
    }
  }
  for (const auto& h : hs) {
    rows.push_back(row_times_matrix(ctx, h, m.matrix()));
    rhs.push_back(0);
  }
  FpVec zero(d, 0);
  quadratic_affine_scan(ctx, m.matrix(), 0, zero, 0, rows, rhs,
                        [&](const FpVec& h) {
                          if (++work > budget) {
                            throw BudgetExceeded("box enumeration budget");
                          }
                          hs.push_back(h);
                          scan_h_tuples(m, r, space, s, hs, work, budget, leaf);
                          hs.pop_back();
                        });
}

}  // namespace

std::vector<BoxTuple> box_set_sphere(const QuadraticForm& m, fp_t r,
                                     const std::optional<AffineSubspace>& space,
                                     std::size_t s, std::uint64_t budget) {
  std::vector<BoxTuple> out;
  std::vector<FpVec> hs;
  std::uint64_t work = 0;
  scan_h_tuples(m, r, space, s, hs, work, budget,
                [&](const std::vector<FpVec>& diffs) {
                  QuadricConstraints cons;
                  cons.space = space;
                  cons.shifts = diffs;
                  quadric_scan(m, r, cons, [&](const FpVec& n) {
                    out.push_back(BoxTuple{n, diffs});
                  });
                });
  return out;
}

namespace {

GowersResult finish(const QuadraticForm& m, std::size_t s, std::uint64_t count,
                    std::complex<double> total) {
  GowersResult out;
  out.box_count = count;
  if (count == 0) throw EmptyBoxSet("gowers_norm: Box_s is empty");
  const double avg = std::abs(total) / double(count);
  out.norm = std::pow(avg, 1.0 / double(std::uint64_t(1) << s));
  const std::size_t d = m.dimension();
  long double ref = 1;
  const long long expo = (long long)(s + 1) * (long long)d -
                         ((long long)s * (s + 1) / 2 + 1);
  for (long long i = 0; i < expo; ++i) ref *= m.ctx().p();
  out.reference_count = ref;
  out.count_ratio_deviation = std::abs(double((long double)count / ref - 1.0L));
  out.counting_hypothesis_met = m.rank() >= s * s + s + 3;
  return out;
}

}  // namespace

GowersResult gowers_norm(const ComplexGrid& f, std::size_t s,
                         const GowersOptions& opt) {
  if (s == 0) throw Error("gowers_norm: s must be at least 1");
  const SphereGrid& grid = f.grid();
  const QuadraticForm& m = grid.form();
  const FieldContext& ctx = grid.ctx();
  const fp_t r = grid.radius();

  if (grid.size() == 0) throw EmptyBoxSet("gowers_norm: empty sphere");

  if (s == 1) {
    // Box_1 splits into independent endpoints: the average is |E f|^2.
    ComplexSum sum;
    for (std::size_t i = 0; i < grid.size(); ++i) sum.add(f.at(i));
    const std::complex<double> total = sum.value();
    const std::uint64_t count =
        std::uint64_t(grid.size()) * std::uint64_t(grid.size());
    return finish(m, s, count, total * std::conj(total));
  }

  const std::uint64_t cells = pow_u64(ctx.p(), grid.dim());
  if (s == 2 && cells <= (std::uint64_t(1) << 26)) {
    // Substituting the corners a = n, b = n+h1, c = n+h2 turns the Box_2
    // sum into a sum over b+c = a+e of split convolutions.
    std::vector<std::complex<double>> conv_conj(cells, 0.0), conv_plain(cells, 0.0);
    std::vector<std::uint64_t> cnt(cells, 0);
    const std::size_t n = grid.size();
    for (std::size_t i = 0; i < n; ++i) {
      const FpVec& a = grid.point(i);
      for (std::size_t j = 0; j < n; ++j) {
        const std::uint64_t cell = grid.encode(add(ctx, a, grid.point(j)));
        conv_conj[cell] += std::conj(f.at(i)) * std::conj(f.at(j));
        conv_plain[cell] += f.at(i) * f.at(j);
        ++cnt[cell];
      }
    }
    ComplexSum sum;
    std::uint64_t count = 0;
    for (std::uint64_t cell = 0; cell < cells; ++cell) {
      if (cnt[cell] == 0) continue;
      sum.add(conv_conj[cell] * conv_plain[cell]);
      count += cnt[cell] * cnt[cell];
    }
    return finish(m, s, count, sum.value());
  }

  // General route: stream the box set through the orthogonal-differences
  // characterization, blocked over the first difference for determinism.
  std::vector<FpVec> first;
  {
    std::vector<FpVec> hs;
    std::uint64_t probe_work = 0;
    scan_h_tuples(m, r, {}, 1, hs, probe_work, opt.budget,
                  [&](const std::vector<FpVec>& diffs) {
                    first.push_back(diffs.front());
                  });
  }
  auto ranges = block_ranges(first.size());
  std::vector<ComplexSum> partial(ranges.size());
  std::vector<std::uint64_t> partial_count(ranges.size(), 0);
  const std::uint64_t per_block_budget = opt.budget;
  parallel_blocks(ranges.size(), opt.threads, [&](std::size_t blk) {
    std::uint64_t work = 0;
    for (std::size_t fi = ranges[blk].first; fi < ranges[blk].second; ++fi) {
      std::vector<FpVec> hs{first[fi]};
      scan_h_tuples(
          m, r, {}, s, hs, work, per_block_budget,
          [&](const std::vector<FpVec>& diffs) {
            QuadricConstraints cons;
            cons.shifts = diffs;
            quadric_scan(m, r, cons, [&](const FpVec& n) {
              std::complex<double> prod = 1.0;
              FpVec corner(n.size());
              for (std::uint32_t eps = 0; eps < (1u << s); ++eps) {
                corner = n;
                int bits = 0;
                for (std::size_t t = 0; t < s; ++t) {
                  if (eps & (1u << t)) {
                    corner = add(ctx, corner, diffs[t]);
                    ++bits;
                  }
                }
                auto idx = grid.index_of(corner);
                if (!idx) throw Error("gowers_norm: corner off the sphere");
                std::complex<double> val = f.at(*idx);
                prod *= (bits % 2 == 1) ? std::conj(val) : val;
              }
              partial[blk].add(prod);
              ++partial_count[blk];
            });
          });
    }
  });
  ComplexSum sum;
  std::uint64_t count = 0;
  for (std::size_t b = 0; b < partial.size(); ++b) {
    sum.add(partial[b].value());
    count += partial_count[b];
  }
  return finish(m, s, count, sum.value());
}

}  // namespace fpgeom
