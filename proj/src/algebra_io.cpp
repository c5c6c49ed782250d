#include "cqd/algebra_io.hpp"

#include <fstream>

#include <json.hpp>

#include "cqd/errors.hpp"

namespace cqd::algebra {

using nlohmann::json;

AlgebraDocument load_algebra_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("algebra fixture: cannot open " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ValidationError("algebra fixture: bad JSON in " + path.string() + ": " + e.what());
  }

  if (!doc.contains("dim") || !doc["dim"].is_number_integer())
    throw ValidationError("algebra fixture: missing integer field 'dim'");
  const int dim = doc["dim"].get<int>();

  std::vector<StructureConstants::Triplet> triplets;
  if (doc.contains("c")) {
    if (!doc["c"].is_array()) throw ValidationError("algebra fixture: 'c' must be an array");
    for (const auto& row : doc["c"]) {
      if (!row.is_array() || row.size() != 4)
        throw ValidationError("algebra fixture: 'c' entries must be [a,b,k,value]");
      triplets.push_back({row[0].get<int>(), row[1].get<int>(), row[2].get<int>(),
                          row[3].get<double>()});
    }
  }
  auto sc = StructureConstants::from_triplets(dim, triplets);

  std::optional<MatrixRepresentation> rep;
  if (doc.contains("generators")) {
    if (!doc.contains("dim_hilbert"))
      throw ValidationError("algebra fixture: 'generators' requires 'dim_hilbert'");
    const int m = doc["dim_hilbert"].get<int>();
    if (m <= 0) throw ValidationError("algebra fixture: dim_hilbert must be positive");
    const auto& gens = doc["generators"];
    if (!gens.is_array() || static_cast<int>(gens.size()) != dim)
      throw ValidationError("algebra fixture: need one generator per algebra dimension");
    std::vector<Eigen::MatrixXcd> matrices;
    for (const auto& g : gens) {
      if (!g.is_array() || static_cast<int>(g.size()) != m * m)
        throw ValidationError("algebra fixture: generator must have dim_hilbert^2 entries");
      Eigen::MatrixXcd mat(m, m);
      for (int i = 0; i < m * m; ++i) {
        const auto& z = g[i];
        if (!z.is_array() || z.size() != 2)
          throw ValidationError("algebra fixture: matrix entries must be [re, im]");
        mat(i / m, i % m) = {z[0].get<double>(), z[1].get<double>()};
      }
      matrices.push_back(std::move(mat));
    }
    rep.emplace(std::move(matrices));
  }

  return {std::move(sc), std::move(rep)};
}

void save_algebra_document(const std::filesystem::path& path, const StructureConstants& sc,
                           const MatrixRepresentation* rep) {
  json doc;
  doc["dim"] = sc.dim();
  json clist = json::array();
  for (const auto& t : sc.triplets()) clist.push_back({t.a, t.b, t.k, t.value});
  doc["c"] = clist;
  if (rep) {
    doc["dim_hilbert"] = rep->hilbert_dim();
    json gens = json::array();
    for (int a = 0; a < rep->algebra_dim(); ++a) {
      json flat = json::array();
      const auto& g = rep->generator(a);
      for (int i = 0; i < g.rows(); ++i)
        for (int j = 0; j < g.cols(); ++j)
          flat.push_back({g(i, j).real(), g(i, j).imag()});
      gens.push_back(std::move(flat));
    }
    doc["generators"] = gens;
  }
  std::ofstream out(path);
  if (!out) throw ValidationError("algebra fixture: cannot write " + path.string());
  out << doc.dump(1) << "\n";
}

}  // namespace cqd::algebra
