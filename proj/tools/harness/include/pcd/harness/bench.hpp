#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "pcd/bvh.hpp"
#include "pcd/geometry.hpp"
#include "pcd/mesh.hpp"

namespace pcd::harness {

/// Translation of B along +x such that the minimum surface distance to A equals
/// `distance` (within `tol`), found by bisection. The meshes must touch or overlap at
/// zero offset. Throws kNonConvergence after 100 steps.
Isometry place_at_separation(const TriMesh& a, const TriMesh& b, double distance, double tol = 1e-7);

/// A positional-error spec: isotropic sigma, or per-axis standard deviations along
/// the axes of random_rotation(seed).
struct SigmaSpec {
  Vec3 std_devs;
  bool isotropic = true;

  static SigmaSpec iso(double s) { return {{s, s, s}, true}; }
  static SigmaSpec axes(const Vec3& s) { return {s, false}; }
  GaussianError error(std::uint64_t orientation_seed) const;
  std::string label() const;
};

struct BenchmarkConfig {
  std::string mesh_a = "builtin:bunny";
  std::string mesh_b = "builtin:bunny";
  bool normalize = true;  ///< longest bounding-box edge scaled to 1 m
  std::vector<double> distances{0.01, 0.05};
  std::vector<SigmaSpec> sigmas{SigmaSpec::iso(0.01), SigmaSpec::iso(0.03), SigmaSpec::iso(0.05)};
  std::vector<std::uint64_t> seeds{1};  ///< covariance orientation seeds
  std::vector<BvType> bv_types{std::begin(kAllBvTypes), std::end(kAllBvTypes)};
  double confidence = 0.99;
  std::uint32_t leaf_capacity = 4;
  std::uint64_t mc_samples = 10000;
  std::uint32_t aabb_frames = 100;
  std::uint64_t frame_seed = 1;
  bool timings = true;  ///< false writes zero timings so that output is reproducible
  unsigned threads = 0;
  std::string output;
  std::string format = "csv";
};

/// Parses a JSON document; missing fields keep their defaults. Throws kConfigError.
BenchmarkConfig parse_config(const std::string& json_text);
BenchmarkConfig load_config(const std::string& path);
void validate(const BenchmarkConfig& config);

struct BenchmarkRecord {
  std::string pair;
  BvType bv_type = BvType::kAabb;
  double distance = 0.0;
  std::string sigma;
  std::uint64_t seed = 0;
  std::uint32_t frames = 1;  ///< frames averaged into this row (AABB only)
  double bve = 0.0;
  double cp = 0.0;
  double mc = 0.0;
  double mc_se = 0.0;
  double build_ms = 0.0;
  double query_ms = 0.0;
  double mc_ms = 0.0;
  std::uint64_t nodes_visited = 0;
  std::uint64_t leaf_pairs = 0;
  bool sound = false;  ///< cp >= mc - 3 se
  std::string error;
  bool numeric_error = false;
};

/// Every (distance, sigma, seed, bv_type) combination, in that nesting order. The
/// Monte Carlo reference is shared by all volume types of a combination. Per-row
/// errors are recorded in the row; `on_record` sees each row as it completes.
std::vector<BenchmarkRecord> run_benchmark(const BenchmarkConfig& config,
                                           const std::function<void(const BenchmarkRecord&)>& on_record = {});

std::string csv_header();
std::string csv_row(const BenchmarkRecord& r);
void write_csv(std::ostream& out, const std::vector<BenchmarkRecord>& records);
/// Rows per volume type, one column group per distance, averaged over sigmas and seeds.
void write_table(std::ostream& out, const std::vector<BenchmarkRecord>& records);

}  // namespace pcd::harness
