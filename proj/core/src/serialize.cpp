#include "fpgeom/serialize.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fpgeom {

namespace {

using nlohmann::json;

json parse(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    throw Error(std::string("invalid JSON in ") + what);
  }
  return j;
}

std::vector<FpVec> read_points(const json& arr, const FieldContext& ctx,
                               std::size_t d) {
  std::vector<FpVec> points;
  for (const auto& row : arr) {
    FpVec pt;
    for (const auto& cell : row) {
      pt.push_back(ctx.reduce_int(cell.get<long long>()));
    }
    if (pt.size() != d) {
      throw DimensionMismatch("configuration row of wrong dimension");
    }
    points.push_back(std::move(pt));
  }
  return points;
}

}  // namespace

Configuration configuration_from_json(const std::string& text) {
  json j = parse(text, "configuration");
  FieldContext ctx(j.at("p").get<fp_t>());
  std::size_t d = j.at("d").get<std::size_t>();
  return Configuration(ctx, read_points(j.at("points"), ctx, d));
}

std::string configuration_to_json(const Configuration& x) {
  json j;
  j["p"] = x.ctx.p();
  j["d"] = x.dim();
  j["points"] = json::array();
  for (const auto& pt : x.points) j["points"].push_back(pt);
  return j.dump(2) + "\n";
}

Configuration configuration_from_text(const std::string& text) {
  std::istringstream in(text);
  long long p = 0, d = 0;
  if (!(in >> p >> d) || p < 3 || d < 1) {
    throw Error("configuration text: expected header 'p d'");
  }
  FieldContext ctx{fp_t(p)};
  std::vector<FpVec> points;
  long long cell = 0;
  FpVec current;
  while (in >> cell) {
    current.push_back(ctx.reduce_int(cell));
    if (current.size() == std::size_t(d)) {
      points.push_back(current);
      current.clear();
    }
  }
  if (!current.empty()) {
    throw Error("configuration text: trailing partial row");
  }
  return Configuration(ctx, std::move(points));
}

Configuration parse_configuration(const std::string& text) {
  for (char c : text) {
    if (c == ' ' || c == '\n' || c == '\t' || c == '\r') continue;
    if (c == '{') return configuration_from_json(text);
    break;
  }
  return configuration_from_text(text);
}

Configuration load_configuration(const std::string& path) {
  return parse_configuration(read_file(path));
}

std::pair<Configuration, Configuration> pair_from_json(const std::string& text) {
  json j = parse(text, "configuration pair");
  FieldContext ctx(j.at("p").get<fp_t>());
  std::size_t d = j.at("d").get<std::size_t>();
  return {Configuration(ctx, read_points(j.at("x"), ctx, d)),
          Configuration(ctx, read_points(j.at("y"), ctx, d))};
}

std::pair<Configuration, Configuration> load_pair(const std::string& path) {
  return pair_from_json(read_file(path));
}

std::string family_to_json(const MFamily& fam) {
  json j;
  j["p"] = fam.ctx().p();
  j["d"] = fam.block_dim();
  j["k"] = fam.arity();
  j["a"] = json::array();
  for (std::size_t rr = 0; rr < fam.block_dim(); ++rr) {
    j["a"].push_back(fam.shared_matrix()->row(rr));
  }
  j["functions"] = json::array();
  for (const auto& f : fam.functions()) {
    json fn;
    fn["vm"] = f.vm_vector();
    j["functions"].push_back(std::move(fn));
  }
  return j.dump(2) + "\n";
}

MFamily family_from_json(const std::string& text) {
  json j = parse(text, "family");
  FieldContext ctx(j.at("p").get<fp_t>());
  const std::size_t d = j.at("d").get<std::size_t>();
  const std::size_t k = j.at("k").get<std::size_t>();
  FpMatrix a(d, d);
  const auto& rows = j.at("a");
  if (rows.size() != d) throw DimensionMismatch("family matrix rows");
  for (std::size_t rr = 0; rr < d; ++rr) {
    const auto& row = rows[rr];
    if (row.size() != d) throw DimensionMismatch("family matrix cols");
    for (std::size_t cc = 0; cc < d; ++cc) {
      a.at(rr, cc) = ctx.reduce_int(row[cc].get<long long>());
    }
  }
  auto shared = std::make_shared<const FpMatrix>(std::move(a));
  MFamily fam(ctx, shared, k);
  for (const auto& fn : j.at("functions")) {
    FpVec vm;
    for (const auto& cell : fn.at("vm")) {
      vm.push_back(ctx.reduce_int(cell.get<long long>()));
    }
    fam.push_back(MQuadraticFunction::from_vm(ctx, shared, k, vm));
  }
  return fam;
}

namespace {

ComplexGrid build_grid(std::shared_ptr<const SphereGrid> grid,
                       std::vector<char>& seen,
                       std::vector<std::complex<double>>& values) {
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) {
      throw Error("sphere function: missing value for a sphere point");
    }
  }
  return ComplexGrid(std::move(grid), std::move(values));
}

}  // namespace

ComplexGrid grid_from_json(std::shared_ptr<const SphereGrid> grid,
                           const std::string& text) {
  json j = parse(text, "sphere function");
  std::vector<std::complex<double>> values(grid->size(), 0.0);
  std::vector<char> seen(grid->size(), 0);
  for (const auto& entry : j.at("points")) {
    FpVec pt;
    for (const auto& cell : entry.at("point")) {
      pt.push_back(grid->ctx().reduce_int(cell.get<long long>()));
    }
    auto idx = grid->index_of(pt);
    if (!idx) throw NotOnSphere("sphere function: point off the sphere");
    values[*idx] = {entry.at("re").get<double>(), entry.at("im").get<double>()};
    seen[*idx] = 1;
  }
  return build_grid(std::move(grid), seen, values);
}

ComplexGrid grid_from_csv(std::shared_ptr<const SphereGrid> grid,
                          const std::string& text) {
  std::vector<std::complex<double>> values(grid->size(), 0.0);
  std::vector<char> seen(grid->size(), 0);
  std::istringstream in(text);
  std::string line;
  const std::size_t d = grid->dim();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    for (char& c : line) {
      if (c == ',') c = ' ';
    }
    std::istringstream cells(line);
    FpVec pt;
    for (std::size_t i = 0; i < d; ++i) {
      long long v;
      if (!(cells >> v)) throw Error("sphere function CSV: short row");
      pt.push_back(grid->ctx().reduce_int(v));
    }
    double re, im;
    if (!(cells >> re >> im)) throw Error("sphere function CSV: short row");
    auto idx = grid->index_of(pt);
    if (!idx) throw NotOnSphere("sphere function: point off the sphere");
    values[*idx] = {re, im};
    seen[*idx] = 1;
  }
  return build_grid(std::move(grid), seen, values);
}

std::string grid_to_json(const ComplexGrid& f) {
  json j;
  j["points"] = json::array();
  for (std::size_t i = 0; i < f.grid().size(); ++i) {
    json entry;
    entry["point"] = f.grid().point(i);
    entry["re"] = f.at(i).real();
    entry["im"] = f.at(i).imag();
    j["points"].push_back(std::move(entry));
  }
  return j.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path);
  out << data;
}

}  // namespace fpgeom
