#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "cqd/algebra.hpp"

namespace cqd::algebra {

// JSON document layout:
//   {
//     "dim": n,
//     "c": [[a, b, k, value], ...],            sparse triplet list, 0-based
//     "dim_hilbert": m,                        optional, with "generators"
//     "generators": [ [[re, im], ...], ... ]   optional, row-major m*m each
//   }
struct AlgebraDocument {
  StructureConstants constants;
  std::optional<MatrixRepresentation> representation;
};

AlgebraDocument load_algebra_document(const std::filesystem::path& path);

void save_algebra_document(const std::filesystem::path& path,
                           const StructureConstants& sc,
                           const MatrixRepresentation* rep = nullptr);

}  // namespace cqd::algebra
