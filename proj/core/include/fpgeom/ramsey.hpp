#pragma once

// Spherical multiple averages over Omega, relative self-product averages,
// the empirical von-Neumann gate, density-Ramsey experiments, and the
// dimension threshold d0.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fpgeom/configuration.hpp"
#include "fpgeom/gowers.hpp"
#include "fpgeom/msets.hpp"

namespace fpgeom {

// Enumerated Omega for one (M, r, X), stored as sphere indices of the full
// J-tuples; built once and reused across function tuples.
class OmegaTable {
 public:
  OmegaTable(const QuadraticForm& m, fp_t r, const Configuration& x,
             const VarietyOptions& opt = {});

  const std::shared_ptr<const SphereGrid>& shared_grid() const noexcept {
    return grid_;
  }
  const SphereGrid& grid() const noexcept { return *grid_; }
  const ConfigurationAnalysis& analysis() const noexcept { return analysis_; }
  std::size_t tuple_len() const noexcept { return tuple_len_; }
  std::uint64_t size() const noexcept { return flat_.size() / tuple_len_; }
  std::uint32_t at(std::uint64_t tuple, std::size_t j) const {
    return flat_[tuple * tuple_len_ + j];
  }

 private:
  std::shared_ptr<const SphereGrid> grid_;
  ConfigurationAnalysis analysis_;
  std::size_t tuple_len_;
  std::vector<std::uint32_t> flat_;
};

struct AverageOptions {
  std::uint64_t budget = 400000000;
  std::size_t threads = 1;
};

// E over Omega of f_0(x_0) ... f_{k+s-1}(x_{k+s-1}), computed fiberwise
// through Omega_I and the generating map. Throws EmptyOmega-like Error on
// an empty Omega.
std::complex<double> spherical_average(const OmegaTable& table,
                                       const std::vector<ComplexGrid>& fs,
                                       const AverageOptions& opt = {});

std::complex<double> spherical_average(const QuadraticForm& m, fp_t r,
                                       const Configuration& x,
                                       const std::vector<ComplexGrid>& fs,
                                       const AverageOptions& opt = {});

// E over Omega x_i Omega of f_i(x_i) prod_j f_j(x_j^+) conj f_j(x_j^-).
// Evaluated on two routes -- the direct product enumeration and the
// grouped-by-x_i rewrite -- which must agree; disagreement is an internal
// error.
std::complex<double> relative_average(const QuadraticForm& m, fp_t r,
                                      const Configuration& x, std::size_t i,
                                      const std::vector<ComplexGrid>& fs,
                                      const AverageOptions& opt = {});

struct VonNeumannReport {
  double lhs = 0;      // |spherical average|
  double u_norm = 0;   // Gowers norm of f_0
  double slack = 0;    // lhs - u_norm
  std::size_t norm_order = 0;
  double slack_budget = 0;
  bool pass = false;
  bool below_threshold = true;  // d < d0(k, s): empirical gate only
};

// The inequality check is an empirical gate with a configurable slack
// budget; the asymptotic error term carries unquantified constants, so
// desk-scale runs are consistency checks only. Inputs must be bounded
// by 1.
VonNeumannReport von_neumann_report(const OmegaTable& table,
                                    const std::vector<ComplexGrid>& fs,
                                    std::size_t norm_order,
                                    double slack_budget = 0.25,
                                    const AverageOptions& opt = {});

struct DensitySpec {
  // Explicit subset of the sphere, or Bernoulli(epsilon) random sets.
  std::optional<std::vector<FpVec>> explicit_set;
  double epsilon = 0.5;
  std::size_t trials = 20;
  std::uint64_t seed = 1;
};

struct ExperimentReport {
  std::string schema_version = "1";
  fp_t p = 0;
  std::size_t d = 0, k = 0, s = 0, config_size = 0;
  double epsilon = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  bool explicit_set = false;

  std::uint64_t sphere_size = 0;
  std::uint64_t omega_count = 0;
  std::vector<std::uint64_t> counts;    // per trial
  std::vector<double> densities;        // counts / |Omega|
  double mean_density = 0;
  double std_error = 0;
  double reference_density = 0;         // epsilon^{|X|}
  double slack = 0;                     // |mean - reference|
  double slack_allowance = 0;           // 3 * std_error
  bool heuristic_applicable = false;
  bool heuristic_pass = false;

  long long sphere_exponent = 0;   // (k+1)d - (k+1)(k+2)/2
  long long ambient_exponent = 0;  // (k+1)d - (k+1)k/2
  double unordered_estimate = 0;   // ordered count / |X|!, informational

  long long d0 = 0;
  bool below_threshold = true;
  std::string disclaimer;
};

// Counts ordered almost-M-congruent copies (tuples of Omega with every
// coordinate in E), normalized by |Omega|. Throws NotOnSphere when an
// explicit E leaves the sphere.
ExperimentReport density_experiment(const OmegaTable& table,
                                    const DensitySpec& spec,
                                    const AverageOptions& opt = {});

// d0 = max{(2s+12)(15s+423), 4k^2+12k+7}.
long long dimension_threshold(long long k, long long s);

}  // namespace fpgeom
