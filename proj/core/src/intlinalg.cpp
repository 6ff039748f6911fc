#include "fpgeom/intlinalg.hpp"

#include <numeric>

namespace fpgeom {

namespace {

using i128 = __int128;

long long checked(i128 v) {
  if (v > i128(INT64_MAX) / 2 || v < i128(INT64_MIN) / 2) {
    throw Error("integer linear algebra: entry overflow");
  }
  return static_cast<long long>(v);
}

void normalize_row(IntVec& row) {
  long long g = 0;
  for (long long x : row) g = std::gcd(g, x < 0 ? -x : x);
  if (g <= 1) {
    // keep sign convention below
  } else {
    for (long long& x : row) x /= g;
  }
  for (long long x : row) {
    if (x != 0) {
      if (x < 0) {
        for (long long& y : row) y = -y;
      }
      break;
    }
  }
}

}  // namespace

IntRows int_row_reduce(IntRows rows) {
  if (rows.empty()) return rows;
  const std::size_t cols = rows.front().size();
  std::size_t lead = 0;
  for (std::size_t col = 0; col < cols && lead < rows.size(); ++col) {
    std::size_t pivot = lead;
    while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[lead]);
    normalize_row(rows[lead]);
    const long long pv = rows[lead][col];
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == lead || rows[r][col] == 0) continue;
      const long long f = rows[r][col];
      for (std::size_t c = 0; c < cols; ++c) {
        rows[r][c] = checked(i128(rows[r][c]) * pv - i128(rows[lead][c]) * f);
      }
      normalize_row(rows[r]);
    }
    ++lead;
  }
  IntRows out;
  for (auto& r : rows) {
    bool zero = true;
    for (long long x : r) {
      if (x != 0) {
        zero = false;
        break;
      }
    }
    if (!zero) out.push_back(std::move(r));
  }
  return out;
}

std::size_t int_rank(const IntRows& rows) { return int_row_reduce(rows).size(); }

bool int_span_contains(const IntRows& basis, const IntVec& v) {
  bool zero = true;
  for (long long x : v) {
    if (x != 0) zero = false;
  }
  if (zero) return true;
  IntRows stacked = basis;
  stacked.push_back(v);
  return int_rank(stacked) == int_rank(basis);
}

bool int_spans_equal(const IntRows& a, const IntRows& b) {
  IntRows stacked = a;
  stacked.insert(stacked.end(), b.begin(), b.end());
  const std::size_t ra = int_rank(a), rb = int_rank(b);
  return ra == rb && int_rank(stacked) == ra;
}

IntRows int_kernel(const IntRows& rows, std::size_t cols) {
  IntRows red = int_row_reduce(rows);
  std::vector<long long> pivot_of_col(cols, -1);
  std::vector<std::size_t> pivot_col(red.size());
  for (std::size_t r = 0; r < red.size(); ++r) {
    std::size_t c = 0;
    while (c < cols && red[r][c] == 0) ++c;
    pivot_col[r] = c;
    pivot_of_col[c] = static_cast<long long>(r);
  }
  IntRows out;
  for (std::size_t free = 0; free < cols; ++free) {
    if (pivot_of_col[free] >= 0) continue;
    // x_free = L, x_pivot = -(entry at free column) * L / pivot; scale by
    // the lcm of the pivots to stay integral.
    i128 lcm = 1;
    for (std::size_t r = 0; r < red.size(); ++r) {
      long long pv = red[r][pivot_col[r]];
      lcm = lcm / std::gcd(checked(lcm), pv < 0 ? -pv : pv) * (pv < 0 ? -pv : pv);
    }
    IntVec v(cols, 0);
    v[free] = checked(lcm);
    for (std::size_t r = 0; r < red.size(); ++r) {
      const long long pv = red[r][pivot_col[r]];
      v[pivot_col[r]] = checked(-i128(red[r][free]) * lcm / pv);
    }
    normalize_row(v);
    out.push_back(std::move(v));
  }
  return out;
}

IntVec int_coordinatewise_product(const IntVec& a, const IntVec& b) {
  if (a.size() != b.size()) throw DimensionMismatch("coordinatewise product");
  IntVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = checked(i128(a[i]) * b[i]);
  return out;
}

}  // namespace fpgeom
