#include <CLI11.hpp>
#include <iostream>

#include "pcd/errors.hpp"
#include "pcd/harness/obj_io.hpp"
#include "pcd/harness/shapes.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Write a generated test mesh as OBJ"};
  std::string kind = "bunny", out;
  std::uint64_t seed = 7;
  int subdivisions = 4;
  app.add_option("--kind", kind, "bunny|cube|sphere")->check(CLI::IsMember({"bunny", "cube", "sphere"}));
  app.add_option("--seed", seed, "bump seed (bunny)");
  app.add_option("--subdivisions", subdivisions, "icosphere subdivisions (bunny)")->check(CLI::Range(0, 7));
  app.add_option("--out", out, "output path")->required();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    const pcd::TriMesh m = kind == "bunny" ? pcd::harness::lumpy_mesh(seed, subdivisions)
                                           : pcd::harness::resolve_mesh("builtin:" + kind);
    pcd::harness::save_obj(out, m);
    std::cout << "wrote " << m.size() << " triangles to " << out << '\n';
  } catch (const pcd::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
