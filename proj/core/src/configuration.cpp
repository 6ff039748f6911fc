#include "fpgeom/configuration.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>

namespace fpgeom {

Configuration::Configuration(FieldContext c, std::vector<FpVec> pts)
    : ctx(c), points(std::move(pts)) {
  if (points.empty()) throw Error("Configuration: at least one point");
  for (const auto& pt : points) {
    if (pt.size() != points.front().size()) {
      throw DimensionMismatch("Configuration: points of unequal dimension");
    }
    for (fp_t x : pt) {
      if (x >= ctx.p()) throw Error("Configuration: entry out of range");
    }
  }
}

FpVec apply_generating_map(const FieldContext& ctx, const GeneratingData& data,
                           std::size_t j, const std::vector<FpVec>& tuple) {
  if (tuple.size() != data.index_set.size()) {
    throw DimensionMismatch("apply_generating_map: tuple indexed by I");
  }
  if (j >= data.constants.cols()) {
    throw std::out_of_range("apply_generating_map: index outside J");
  }
  FpVec out(tuple.front().size(), 0);
  for (std::size_t pos = 0; pos < tuple.size(); ++pos) {
    const fp_t b = data.constants.at(pos, j);
    if (b == 0) continue;
    for (std::size_t c = 0; c < out.size(); ++c) {
      out[c] = ctx.add(out[c], ctx.mul(b, tuple[pos][c]));
    }
  }
  return out;
}

std::vector<FpVec> apply_generating_tuple(const FieldContext& ctx,
                                          const GeneratingData& data,
                                          const std::vector<FpVec>& tuple) {
  std::vector<FpVec> out;
  out.reserve(data.constants.cols());
  for (std::size_t j = 0; j < data.constants.cols(); ++j) {
    out.push_back(apply_generating_map(ctx, data, j, tuple));
  }
  return out;
}

namespace {

// Difference span rank with respect to base point x_{i0}.
std::size_t diff_rank(const Configuration& x, const std::vector<std::size_t>& idx,
                      std::size_t i0) {
  std::vector<FpVec> rows;
  for (std::size_t i : idx) {
    if (i == i0) continue;
    rows.push_back(sub(x.ctx, x.points[i], x.points[i0]));
  }
  if (rows.empty()) return 0;
  return rank(x.ctx, FpMatrix::from_rows(rows));
}

// Unique normalized constants for one generating set: for each j solve
// [ones; stacked x_i columns] b = [1; x_j].
GeneratingData solve_constants(const Configuration& x,
                               std::vector<std::size_t> index_set) {
  const FieldContext& ctx = x.ctx;
  const std::size_t d = x.dim(), kk = index_set.size(), nj = x.size();
  FpMatrix sys(d + 1, kk);
  for (std::size_t pos = 0; pos < kk; ++pos) {
    sys.at(0, pos) = 1;
    for (std::size_t c = 0; c < d; ++c) {
      sys.at(1 + c, pos) = x.points[index_set[pos]][c];
    }
  }
  GeneratingData data;
  data.index_set = std::move(index_set);
  data.constants = FpMatrix(kk, nj);
  for (std::size_t j = 0; j < nj; ++j) {
    FpVec rhs(d + 1, 0);
    rhs[0] = 1;
    for (std::size_t c = 0; c < d; ++c) rhs[1 + c] = x.points[j][c];
    auto sol = solve_affine(ctx, sys, rhs);
    if (!sol || !sol->kernel.empty()) {
      throw Error("generating constants: system not uniquely solvable");
    }
    for (std::size_t pos = 0; pos < kk; ++pos) {
      data.constants.at(pos, j) = sol->particular[pos];
      std::size_t lift = std::size_t(std::llabs(ctx.signed_lift(sol->particular[pos])));
      data.max_lift = std::max(data.max_lift, lift);
    }
  }
  return data;
}

void subsets_of_size(std::size_t n, std::size_t k,
                     const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> pick(k);
  for (std::size_t i = 0; i < k; ++i) pick[i] = i;
  if (k > n) return;
  for (;;) {
    f(pick);
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (pick[i] != i + n - k) {
        ++pick[i];
        for (std::size_t j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
        break;
      }
      if (i == 0) return;
    }
  }
}

}  // namespace

ConfigurationAnalysis analyze_configuration(const Configuration& x) {
  ConfigurationAnalysis out;
  std::vector<std::size_t> all(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) all[i] = i;
  out.k = diff_rank(x, all, 0);
  out.s = x.size() - out.k;
  subsets_of_size(x.size(), out.k + 1, [&](const std::vector<std::size_t>& idx) {
    if (diff_rank(x, idx, idx.front()) == out.k) {
      out.generating_sets.push_back(solve_constants(x, idx));
    }
  });
  if (out.generating_sets.empty()) {
    throw Error("analyze_configuration: no generating set found");
  }
  out.complexity = out.generating_sets.front().max_lift;
  for (const auto& g : out.generating_sets) {
    out.complexity = std::min(out.complexity, g.max_lift);
  }
  out.complexity = std::max<std::size_t>(out.complexity, 1);
  return out;
}

const GeneratingData& canonical_generating_set(const ConfigurationAnalysis& a) {
  return a.generating_sets.front();
}

const GeneratingData& generating_set_containing(const ConfigurationAnalysis& a,
                                                std::size_t j) {
  for (const auto& g : a.generating_sets) {
    if (std::find(g.index_set.begin(), g.index_set.end(), j) !=
        g.index_set.end()) {
      return g;
    }
  }
  throw NotGenerating("no generating set contains the requested index");
}

RationalSubspace power_span(const RationalSubspace& v, std::size_t power) {
  if (power == 0) throw Error("power_span: power must be positive");
  if (power == 1) {
    RationalSubspace out = v;
    out.basis = int_row_reduce(out.basis);
    return out;
  }
  // Coordinate-wise products are multilinear, so products of basis vectors
  // with repetition span the power space.
  RationalSubspace out;
  out.ambient = v.ambient;
  std::vector<std::size_t> pick(power, 0);
  const std::size_t nb = v.basis.size();
  if (nb == 0) return out;
  for (;;) {
    IntVec prod = v.basis[pick[0]];
    for (std::size_t i = 1; i < power; ++i) {
      prod = int_coordinatewise_product(prod, v.basis[pick[i]]);
    }
    out.basis.push_back(std::move(prod));
    // next multiset (non-decreasing tuple)
    std::size_t i = power;
    while (i > 0) {
      --i;
      if (pick[i] + 1 < nb) {
        ++pick[i];
        for (std::size_t j = i + 1; j < power; ++j) pick[j] = pick[i];
        break;
      }
      if (i == 0) {
        out.basis = int_row_reduce(out.basis);
        return out;
      }
    }
  }
}

namespace {

IntRows signed_lift_rows(const FieldContext& ctx, const GeneratingData& g) {
  const std::size_t nj = g.constants.cols();
  IntRows rows(g.index_set.size(), IntVec(nj, 0));
  for (std::size_t pos = 0; pos < g.index_set.size(); ++pos) {
    for (std::size_t j = 0; j < nj; ++j) {
      rows[pos][j] = ctx.signed_lift(g.constants.at(pos, j));
    }
  }
  // Exact normalization of the lifted constants; fails when p is too small
  // relative to the configuration complexity.
  for (std::size_t j = 0; j < nj; ++j) {
    long long sum = 0;
    for (std::size_t pos = 0; pos < g.index_set.size(); ++pos) {
      sum += rows[pos][j];
    }
    if (sum != 1) {
      throw LiftAmbiguous(
          "generating constants do not lift canonically at this p");
    }
  }
  return rows;
}

}  // namespace

RationalSpans rational_spans(const Configuration& x) {
  return rational_spans(x, analyze_configuration(x));
}

RationalSpans rational_spans(const Configuration& x,
                             const ConfigurationAnalysis& analysis) {
  const FieldContext& ctx = x.ctx;
  const std::size_t nj = x.size();
  RationalSpans out;
  const GeneratingData& canon = canonical_generating_set(analysis);
  out.v_x.ambient = nj;
  out.v_x.basis = int_row_reduce(signed_lift_rows(ctx, canon));

  const std::size_t max_power = std::max<std::size_t>(1, analysis.s - 1);
  for (std::size_t i = 1; i <= max_power; ++i) {
    out.powers.push_back(power_span(out.v_x, i));
  }

  for (std::size_t i = 0; i < nj; ++i) {
    const GeneratingData& g = generating_set_containing(analysis, i);
    IntRows lifted = signed_lift_rows(ctx, g);
    // b~' drops the i-th coordinate.
    auto drop_i = [&](const IntVec& row) {
      IntVec v;
      v.reserve(nj - 1);
      for (std::size_t j = 0; j < nj; ++j) {
        if (j != i) v.push_back(row[j]);
      }
      return v;
    };
    RationalSpans::Product prod;
    prod.i = i;
    prod.space.ambient = 2 * nj - 1;
    for (std::size_t pos = 0; pos < g.index_set.size(); ++pos) {
      const std::size_t ii = g.index_set[pos];
      IntVec tail = drop_i(lifted[pos]);
      if (ii == i) {
        IntVec v;
        v.push_back(lifted[pos][i]);
        v.insert(v.end(), tail.begin(), tail.end());
        v.insert(v.end(), tail.begin(), tail.end());
        prod.space.basis.push_back(std::move(v));
      } else {
        IntVec vplus, vminus;
        vplus.push_back(lifted[pos][i]);
        vplus.insert(vplus.end(), tail.begin(), tail.end());
        vplus.insert(vplus.end(), nj - 1, 0);
        vminus.push_back(lifted[pos][i]);
        vminus.insert(vminus.end(), nj - 1, 0);
        vminus.insert(vminus.end(), tail.begin(), tail.end());
        prod.space.basis.push_back(std::move(vplus));
        prod.space.basis.push_back(std::move(vminus));
      }
    }
    prod.space.basis = int_row_reduce(prod.space.basis);
    for (std::size_t pw = 1; pw <= max_power; ++pw) {
      prod.powers.push_back(power_span(prod.space, pw));
    }
    out.products.push_back(std::move(prod));
  }
  return out;
}

}  // namespace fpgeom
