// Regenerates the JSON algebra fixtures under data/.
#include <cstdio>
#include <filesystem>

#include "cqd/algebra.hpp"
#include "cqd/algebra_io.hpp"
#include "cqd/rotor.hpp"

int main(int argc, char** argv) {
  const std::filesystem::path out_dir = argc > 1 ? argv[1] : "data";
  std::filesystem::create_directories(out_dir);

  using namespace cqd::algebra;

  save_algebra_document(out_dir / "so3.json", so3_structure_constants());
  save_algebra_document(out_dir / "r6.json", abelian_structure_constants(6));
  save_algebra_document(out_dir / "rma.json", cqd::rotor::rma_structure_constants());

  const auto spin1 = spin1_representation();
  save_algebra_document(out_dir / "spin1.json", so3_structure_constants(), &spin1);

  std::printf("fixtures written to %s\n", out_dir.string().c_str());
  return 0;
}
