#pragma once

// Configurations X in F_p^d: span dimension, generating sets with their
// normalized constants and maps, configuration complexity, and the lifted
// rational spans V_X with coordinate-wise power flags.

#include <cstddef>
#include <vector>

#include "fpgeom/field.hpp"
#include "fpgeom/intlinalg.hpp"
#include "fpgeom/linalg.hpp"

namespace fpgeom {

struct Configuration {
  FieldContext ctx;
  std::vector<FpVec> points;  // ordered; index set J = {0, ..., |X|-1}

  Configuration(FieldContext c, std::vector<FpVec> pts);
  std::size_t size() const noexcept { return points.size(); }
  std::size_t dim() const noexcept {
    return points.empty() ? 0 : points.front().size();
  }
};

// Constants b_{I,i,j} for one generating set I, stored as a (k+1) x |J|
// grid indexed by position within I. Normalization: b_{I,i,j} = delta_{i,j}
// on I, rows of the j-column sum to 1, and x_j = sum_i b_{I,i,j} x_i.
struct GeneratingData {
  std::vector<std::size_t> index_set;  // I, ascending
  FpMatrix constants;                  // constants.at(pos_of_i, j) = b_{I,i,j}
  std::size_t max_lift = 0;            // max |signed lift| over all constants
};

// L_{I,j} applied to a tuple indexed by I.
FpVec apply_generating_map(const FieldContext& ctx, const GeneratingData& data,
                           std::size_t j, const std::vector<FpVec>& tuple);

// The full map L_I: tuple over I -> tuple over J.
std::vector<FpVec> apply_generating_tuple(const FieldContext& ctx,
                                          const GeneratingData& data,
                                          const std::vector<FpVec>& tuple);

struct ConfigurationAnalysis {
  std::size_t k = 0;  // dim span(X - X)
  std::size_t s = 0;  // |X| - k
  std::vector<GeneratingData> generating_sets;  // lex order of index sets
  std::size_t complexity = 0;  // min over I of max |signed lift|
};

// Enumerates all generating sets (every one has size k+1) and solves the
// normalized linear system for the constants. The lexicographically least
// index set is the canonical choice, at position 0.
ConfigurationAnalysis analyze_configuration(const Configuration& x);

const GeneratingData& canonical_generating_set(const ConfigurationAnalysis& a);

// First generating set containing index j (one always exists).
const GeneratingData& generating_set_containing(const ConfigurationAnalysis& a,
                                                std::size_t j);

struct RationalSubspace {
  std::size_t ambient = 0;
  IntRows basis;  // Q-independent integer rows
  std::size_t dim() const noexcept { return basis.size(); }
};

// Span of the i-fold coordinate-wise products of elements of v.
RationalSubspace power_span(const RationalSubspace& v, std::size_t power);

struct RationalSpans {
  RationalSubspace v_x;                    // inside R^{k+s}
  std::vector<RationalSubspace> powers;    // V^{[1]}, ..., V^{[max(1,s-1)]}
  struct Product {
    std::size_t i = 0;                     // distinguished coordinate
    RationalSubspace space;                // V_X x_i V_X in R^{2(k+s)-1}
    std::vector<RationalSubspace> powers;
  };
  std::vector<Product> products;           // one per coordinate i in J
};

// Signed integer lifts of the generating constants; requires the lifted
// rows to satisfy the exact normalization sum_i b~_{I,i,j} = 1 (throws
// LiftAmbiguous otherwise, i.e. when p is too small for the complexity).
RationalSpans rational_spans(const Configuration& x);
RationalSpans rational_spans(const Configuration& x,
                             const ConfigurationAnalysis& analysis);

}  // namespace fpgeom
