#pragma once

// Exact integer linear algebra (fraction-free elimination) for rational
// subspaces of R^t given by integer spanning vectors.

#include <cstdint>
#include <vector>

#include "fpgeom/field.hpp"

namespace fpgeom {

using IntVec = std::vector<long long>;
using IntRows = std::vector<IntVec>;

// Row echelon reduction over Q with integer rows (Bareiss-style clearing);
// returns the nonzero rows. The row space over Q is preserved.
IntRows int_row_reduce(IntRows rows);

std::size_t int_rank(const IntRows& rows);

bool int_span_contains(const IntRows& basis, const IntVec& v);

bool int_spans_equal(const IntRows& a, const IntRows& b);

// Integer rows spanning {x in Q^cols : (row . x) = 0 for every row}.
IntRows int_kernel(const IntRows& rows, std::size_t cols);

IntVec int_coordinatewise_product(const IntVec& a, const IntVec& b);

}  // namespace fpgeom
