#pragma once

// File formats: configurations (JSON or plain text), configuration pairs,
// M-families (coefficient blocks in serialization order), and sphere
// functions (JSON or CSV). JSON work is confined to the implementation.

#include <string>
#include <utility>

#include "fpgeom/configuration.hpp"
#include "fpgeom/gowers.hpp"
#include "fpgeom/msets.hpp"

namespace fpgeom {

// {"p": ..., "d": ..., "points": [[...], ...]}; order-significant.
Configuration configuration_from_json(const std::string& text);
std::string configuration_to_json(const Configuration& x);

// First line "p d", then one row of d residues per point.
Configuration configuration_from_text(const std::string& text);

// Sniffs JSON vs plain text.
Configuration parse_configuration(const std::string& text);
Configuration load_configuration(const std::string& path);

// {"p", "d", "x": [[...]], "y": [[...]]}.
std::pair<Configuration, Configuration> pair_from_json(const std::string& text);
std::pair<Configuration, Configuration> load_pair(const std::string& path);

// {"p", "d", "k", "a": [[...]], "functions": [{"vm": [...]}, ...]} with
// coefficients in serialization order.
std::string family_to_json(const MFamily& fam);
MFamily family_from_json(const std::string& text);

// {"points": [{"point": [...], "re": ..., "im": ...}, ...]}; every sphere
// point must be present, off-sphere points are rejected.
ComplexGrid grid_from_json(std::shared_ptr<const SphereGrid> grid,
                           const std::string& text);
// CSV rows: d residues, re, im.
ComplexGrid grid_from_csv(std::shared_ptr<const SphereGrid> grid,
                          const std::string& text);
std::string grid_to_json(const ComplexGrid& f);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& data);

}  // namespace fpgeom
