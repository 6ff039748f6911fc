#pragma once

// Independent brute-force oracles for the test suites. Everything here
// recomputes results by exhaustive enumeration or direct expansion and
// must stay independent of the implementation paths it checks.

#include <complex>
#include <cstdint>
#include <functional>
#include <set>
#include <vector>

#include "fpgeom/linalg.hpp"
#include "fpgeom/quadform.hpp"

namespace fpgeom::oracle {

// All vectors of F_p^d in lexicographic order.
inline std::vector<FpVec> all_vectors(const FieldContext& ctx, std::size_t d) {
  std::vector<FpVec> out;
  FpVec v(d, 0);
  for (;;) {
    out.push_back(v);
    std::size_t pos = d;
    while (pos > 0) {
      --pos;
      if (++v[pos] < ctx.p()) break;
      v[pos] = 0;
      if (pos == 0) return out;
    }
    if (d == 0) return out;
  }
}

// Rank as the size of a maximal independent row subset, found by
// exhaustive subset search (independent of rref).
inline std::size_t subset_rank(const FieldContext& ctx, const FpMatrix& m) {
  std::vector<FpVec> rows;
  for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(m.row(r));
  std::size_t best = 0;
  const std::size_t n = rows.size();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<FpVec> pick;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) pick.push_back(rows[i]);
    }
    if (pick.size() <= best || pick.empty()) continue;
    // Independence by exhaustive combination scan.
    bool independent = true;
    for (const FpVec& coeff : all_vectors(ctx, pick.size())) {
      if (is_zero(coeff)) continue;
      FpVec combo(m.cols(), 0);
      for (std::size_t i = 0; i < pick.size(); ++i) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
          combo[c] = ctx.add(combo[c], ctx.mul(coeff[i], pick[i][c]));
        }
      }
      if (is_zero(combo)) {
        independent = false;
        break;
      }
    }
    if (independent) best = pick.size();
  }
  return best;
}

// Term-by-term expansion of (nA).n + n.u + v.
inline fp_t expanded_eval(const FieldContext& ctx, const FpMatrix& a,
                          const FpVec& u, fp_t v, const FpVec& n) {
  fp_t acc = v % ctx.p();
  for (std::size_t i = 0; i < n.size(); ++i) {
    for (std::size_t j = 0; j < n.size(); ++j) {
      acc = ctx.add(acc, ctx.mul(ctx.mul(a.at(i, j), n[i]), n[j]));
    }
    acc = ctx.add(acc, ctx.mul(u[i], n[i]));
  }
  return acc;
}

// {n : M(n) = r} by full scan, with optional membership predicate.
inline std::vector<FpVec> quadric_scan_oracle(
    const QuadraticForm& m, fp_t r,
    const std::function<bool(const FpVec&)>& keep = nullptr) {
  std::vector<FpVec> out;
  for (const FpVec& n : all_vectors(m.ctx(), m.dimension())) {
    if (m(n) == r % m.ctx().p() && (!keep || keep(n))) out.push_back(n);
  }
  return out;
}

// Exhaustive solution set of (row_i . x) = b_i over F_p^cols.
inline std::vector<FpVec> affine_solutions_oracle(const FieldContext& ctx,
                                                  const FpMatrix& a,
                                                  const FpVec& b) {
  std::vector<FpVec> out;
  for (const FpVec& x : all_vectors(ctx, a.cols())) {
    bool ok = true;
    for (std::size_t r = 0; r < a.rows() && ok; ++r) {
      ok = dot(ctx, a.row(r), x) == b[r];
    }
    if (ok) out.push_back(x);
  }
  return out;
}

// All 2^s corners land in the member set.
inline bool corner_membership(const FieldContext& ctx,
                              const std::set<FpVec>& members, const FpVec& base,
                              const std::vector<FpVec>& diffs) {
  const std::size_t s = diffs.size();
  for (std::uint32_t eps = 0; eps < (1u << s); ++eps) {
    FpVec corner = base;
    for (std::size_t t = 0; t < s; ++t) {
      if (eps & (1u << t)) corner = add(ctx, corner, diffs[t]);
    }
    if (!members.count(corner)) return false;
  }
  return true;
}

// Deterministic pseudo-random residue stream for test inputs.
inline fp_t mix_residue(const FieldContext& ctx, std::uint64_t& state) {
  state = state * 6364136223846793005ull + 1442695040888963407ull;
  return fp_t((state >> 33) % ctx.p());
}

inline FpVec random_vec(const FieldContext& ctx, std::size_t d,
                        std::uint64_t& state) {
  FpVec v(d);
  for (auto& x : v) x = mix_residue(ctx, state);
  return v;
}

inline FpMatrix random_symmetric(const FieldContext& ctx, std::size_t d,
                                 std::uint64_t& state) {
  FpMatrix a(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      fp_t v = mix_residue(ctx, state);
      a.at(i, j) = v;
      a.at(j, i) = v;
    }
  }
  return a;
}

}  // namespace fpgeom::oracle
