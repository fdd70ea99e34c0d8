#include "pcd/harness/obj_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "pcd/errors.hpp"

namespace pcd::harness {
namespace {

[[noreturn]] void parse_fail(const std::string& source, std::size_t line, const std::string& msg) {
  throw Error(ErrorCode::kParseError, source + ":" + std::to_string(line) + ": " + msg);
}

// Merges positions closer than tol using a uniform grid with cell size tol.
class Welder {
 public:
  explicit Welder(double tol) : tol_(tol) {}

  std::uint32_t add(const Vec3& p, std::vector<Vec3>& out) {
    if (tol_ <= 0.0) {
      out.push_back(p);
      return static_cast<std::uint32_t>(out.size() - 1);
    }
    const std::int64_t cx = cell(p.x), cy = cell(p.y), cz = cell(p.z);
    for (std::int64_t dx = -1; dx <= 1; ++dx)
      for (std::int64_t dy = -1; dy <= 1; ++dy)
        for (std::int64_t dz = -1; dz <= 1; ++dz) {
          auto range = grid_.equal_range(key(cx + dx, cy + dy, cz + dz));
          for (auto it = range.first; it != range.second; ++it)
            if (norm(out[it->second] - p) <= tol_) return it->second;
        }
    out.push_back(p);
    const auto idx = static_cast<std::uint32_t>(out.size() - 1);
    grid_.emplace(key(cx, cy, cz), idx);
    return idx;
  }

 private:
  std::int64_t cell(double v) const { return static_cast<std::int64_t>(std::floor(v / tol_)); }
  static std::uint64_t key(std::int64_t x, std::int64_t y, std::int64_t z) {
    auto h = [](std::int64_t v) { return static_cast<std::uint64_t>(v) * 0x9e3779b97f4a7c15ULL; };
    return h(x) ^ (h(y) >> 1) ^ (h(z) << 1) ^ (static_cast<std::uint64_t>(z) * 0xbf58476d1ce4e5b9ULL);
  }

  double tol_;
  std::unordered_multimap<std::uint64_t, std::uint32_t> grid_;
};

bool parse_double(std::string_view s, double& v) {
  // std::from_chars for double is available in GCC 11.
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  return r.ec == std::errc() && r.ptr == s.data() + s.size() && std::isfinite(v);
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

TriMesh read_obj(std::istream& in, const std::string& source, ObjLoadStats* stats, double weld_tol) {
  std::vector<Vec3> raw;
  std::vector<std::pair<std::array<long, 3>, std::size_t>> raw_tris;  // with source line
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const auto tokens = split_ws(std::string_view(line).substr(0, hash));
    if (tokens.empty()) continue;
    if (tokens[0] == "v") {
      if (tokens.size() < 4) parse_fail(source, line_no, "vertex needs three coordinates");
      Vec3 p;
      for (int k = 0; k < 3; ++k)
        if (!parse_double(tokens[k + 1], p[k])) parse_fail(source, line_no, "bad vertex coordinate");
      raw.push_back(p);
    } else if (tokens[0] == "f") {
      if (tokens.size() < 4) parse_fail(source, line_no, "face needs at least three vertices");
      std::vector<long> idx;
      for (std::size_t k = 1; k < tokens.size(); ++k) {
        const std::string_view t = tokens[k].substr(0, tokens[k].find('/'));
        long v = 0;
        const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
        if (r.ec != std::errc() || r.ptr != t.data() + t.size() || v == 0)
          parse_fail(source, line_no, "bad face index '" + std::string(tokens[k]) + "'");
        // Negative indices count back from the most recent vertex.
        const long resolved = v > 0 ? v - 1 : static_cast<long>(raw.size()) + v;
        if (resolved < 0 || resolved >= static_cast<long>(raw.size()))
          parse_fail(source, line_no, "face index out of range");
        idx.push_back(resolved);
      }
      for (std::size_t k = 1; k + 1 < idx.size(); ++k) raw_tris.push_back({{idx[0], idx[k], idx[k + 1]}, line_no});
    }
  }
  if (in.bad()) throw Error(ErrorCode::kIoError, "read failure on " + source);

  TriMesh mesh;
  Welder welder(weld_tol);
  std::vector<std::uint32_t> remap(raw.size(), UINT32_MAX);
  std::size_t dropped = 0;
  for (const auto& [t, ln] : raw_tris) {
    Triangle tri;
    for (int k = 0; k < 3; ++k) {
      auto& r = remap[static_cast<std::size_t>(t[k])];
      if (r == UINT32_MAX) r = welder.add(raw[static_cast<std::size_t>(t[k])], mesh.vertices);
      tri[k] = r;
    }
    const auto& v = mesh.vertices;
    const double area2 = norm(cross(v[tri[1]] - v[tri[0]], v[tri[2]] - v[tri[0]]));
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] || area2 == 0.0) {
      ++dropped;
      continue;
    }
    mesh.triangles.push_back(tri);
  }
  if (stats) {
    stats->raw_vertices = raw.size();
    stats->welded_vertices = mesh.vertices.size();
    stats->dropped_degenerate = dropped;
  }
  if (mesh.triangles.empty()) throw Error(ErrorCode::kEmptyMesh, source + ": no usable triangles");
  return mesh;
}

TriMesh load_obj(const std::string& path, ObjLoadStats* stats, double weld_tol) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  return read_obj(in, path, stats, weld_tol);
}

void write_obj(std::ostream& out, const TriMesh& mesh) {
  char buf[96];
  for (const Vec3& v : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v.x, v.y, v.z);
    out << buf;
  }
  for (const Triangle& t : mesh.triangles) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

void save_obj(const std::string& path, const TriMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  write_obj(out, mesh);
  if (!out) throw Error(ErrorCode::kIoError, "write failure on " + path);
}

}  // namespace pcd::harness
