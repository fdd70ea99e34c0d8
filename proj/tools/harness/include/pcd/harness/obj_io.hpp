#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>

#include "pcd/mesh.hpp"

namespace pcd::harness {

struct ObjLoadStats {
  std::size_t raw_vertices = 0;
  std::size_t welded_vertices = 0;  ///< vertices left after merging within the weld tolerance
  std::size_t dropped_degenerate = 0;
};

/// Wavefront OBJ positions and faces (polygons are fanned; normals, texture
/// coordinates and groups are ignored). Vertices within `weld_tol` are merged and
/// zero-area triangles dropped. Throws kParseError naming the line, kIoError, kEmptyMesh.
TriMesh load_obj(const std::string& path, ObjLoadStats* stats = nullptr, double weld_tol = 1e-9);
TriMesh read_obj(std::istream& in, const std::string& source_name, ObjLoadStats* stats = nullptr,
                 double weld_tol = 1e-9);

void write_obj(std::ostream& out, const TriMesh& mesh);
void save_obj(const std::string& path, const TriMesh& mesh);

}  // namespace pcd::harness
