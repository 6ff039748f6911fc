#pragma once

// Quadratic-form input for the CLI: a degree-2 monomial expression such as
// "x0^2 + 2*x0*x1 - x2^2 + 3" or an explicit symmetric-matrix JSON file.

#include <string>

#include "fpgeom/quadform.hpp"

namespace fpgeom::cli {

// Accepts "dot" for the dot-product form |x|^2.
QuadraticForm parse_form_expression(const std::string& expr,
                                    const FieldContext& ctx, std::size_t d);

// {"a": [[...], ...], "u": [...], "v": ...}; "u"/"v" optional.
QuadraticForm parse_form_file(const std::string& text, const FieldContext& ctx,
                              std::size_t d);

}  // namespace fpgeom::cli
