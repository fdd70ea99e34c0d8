#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "pcd/errors.hpp"
#include "pcd/harness/bench.hpp"
#include "pcd/harness/shapes.hpp"
#include "pcd/query.hpp"

namespace {

using namespace pcd;
using namespace pcd::harness;

struct Options {
  std::string config, mesh_a = "builtin:bunny", mesh_b = "builtin:bunny", bv = "convex", sigma = "0.03";
  std::string out, format = "csv";
  std::uint64_t sigma_axes_seed = 1, seed = 1, samples = 10000;
  double distance = 0.05, delta = 0.99;
  std::uint32_t leaf_capacity = 4;
  bool raw_scale = false;
};

SigmaSpec parse_sigma(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kConfigError, "bad --sigma value '" + text + "'");
    }
  }
  for (double s : v)
    if (!(s > 0.0)) throw Error(ErrorCode::kConfigError, "--sigma entries must be positive");
  if (v.size() == 1) return SigmaSpec::iso(v[0]);
  if (v.size() == 3) return SigmaSpec::axes({v[0], v[1], v[2]});
  throw Error(ErrorCode::kConfigError, "--sigma takes one value or three comma-separated values");
}

struct Scene {
  TriMesh a, b_placed;
};

Scene load_scene(const Options& o) {
  TriMesh a = resolve_mesh(o.mesh_a), b = resolve_mesh(o.mesh_b);
  if (!o.raw_scale) {
    a = normalize_mesh(a);
    b = normalize_mesh(b);
  }
  const Isometry pose = place_at_separation(a, b, o.distance);
  return {a, b.transformed(pose)};
}

int cmd_pcd(const Options& o) {
  const SigmaSpec sigma = parse_sigma(o.sigma);
  const BvType type = parse_bv_type(o.bv);
  const Scene s = load_scene(o);
  const BvhTree ta = build_bvh(s.a, type, o.leaf_capacity);
  const BvhTree tb = build_bvh(s.b_placed, type, o.leaf_capacity);
  const PcdResult r = general_pcd({ta, tb, sigma.error(o.sigma_axes_seed), o.delta});
  std::printf("bv=%s distance=%g sigma=%s cp=%.6g root=%.6g nodes_visited=%llu leaf_pairs=%llu time_ms=%.3f\n",
              to_string(type), o.distance, sigma.label().c_str(), r.probability_upper, r.root_bound,
              static_cast<unsigned long long>(r.nodes_visited),
              static_cast<unsigned long long>(r.leaf_pairs_evaluated),
              std::chrono::duration<double, std::milli>(r.elapsed).count());
  return 0;
}

int cmd_mc(const Options& o) {
  const SigmaSpec sigma = parse_sigma(o.sigma);
  const Scene s = load_scene(o);
  const McEstimate m = monte_carlo_probability(s.a, s.b_placed, sigma.error(o.sigma_axes_seed), o.samples, o.seed);
  std::printf("distance=%g sigma=%s samples=%llu estimate=%.6g std_error=%.6g\n", o.distance, sigma.label().c_str(),
              static_cast<unsigned long long>(m.samples), m.estimate, m.std_error);
  return 0;
}

int cmd_bve(const Options& o) {
  TriMesh a = resolve_mesh(o.mesh_a);
  if (!o.raw_scale) a = normalize_mesh(a);
  std::vector<BvType> types;
  if (o.bv == "all") {
    types.assign(std::begin(kAllBvTypes), std::end(kAllBvTypes));
  } else {
    types.push_back(parse_bv_type(o.bv));
  }
  for (BvType t : types) {
    const BvhTree tree = build_bvh(a, t, o.leaf_capacity);
    std::printf("bv=%s leaf_capacity=%u leaves=%zu bve=%.6g\n", to_string(t), o.leaf_capacity, tree.leaf_count(),
                bve(tree));
  }
  return 0;
}

int cmd_bench(const Options& o, bool format_given, bool out_given) {
  BenchmarkConfig c = o.config.empty() ? BenchmarkConfig{} : load_config(o.config);
  if (format_given) c.format = o.format;
  if (out_given) c.output = o.out;
  validate(c);

  std::ofstream file;
  if (!c.output.empty()) {
    file.open(c.output);
    if (!file) throw Error(ErrorCode::kIoError, "cannot write " + c.output);
  }
  std::ostream& out = c.output.empty() ? std::cout : file;
  const bool csv = c.format == "csv";
  if (csv) out << csv_header() << '\n' << std::flush;
  int status = 0;
  const auto records = run_benchmark(c, [&](const BenchmarkRecord& r) {
    if (csv) out << csv_row(r) << '\n' << std::flush;
    if (!r.error.empty()) {
      std::cerr << "row failed: " << csv_row(r) << '\n';
      status = std::max(status, r.numeric_error ? 3 : 2);
    }
  });
  if (!csv) write_table(out, records);
  if (!out) throw Error(ErrorCode::kIoError, "failed to write benchmark output");
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probabilistic collision bounds between triangle meshes under Gaussian positional error"};
  app.require_subcommand(1);
  Options o;

  auto add_scene = [&](CLI::App* sub) {
    sub->add_option("--mesh-a", o.mesh_a, "OBJ path or builtin:bunny|cube|sphere")->capture_default_str();
    sub->add_option("--mesh-b", o.mesh_b, "OBJ path or builtin:bunny|cube|sphere")->capture_default_str();
    sub->add_option("--sigma", o.sigma, "isotropic sigma, or sx,sy,sz along random axes (m)")->capture_default_str();
    sub->add_option("--sigma-axes-seed", o.sigma_axes_seed, "seed of the random covariance axes")->capture_default_str();
    sub->add_option("--distance", o.distance, "minimum surface distance between the meshes (m)")->capture_default_str();
    sub->add_flag("--raw-scale", o.raw_scale, "skip normalizing meshes to a 1 m bounding box");
  };

  auto* pcd_cmd = app.add_subcommand("pcd", "upper bound on the collision probability of one pair");
  add_scene(pcd_cmd);
  pcd_cmd->add_option("--bv", o.bv, "sphere|aabb|obb|kdop26|convex")->capture_default_str();
  pcd_cmd->add_option("--delta", o.delta, "confidence level")->capture_default_str();
  pcd_cmd->add_option("--leaf-capacity", o.leaf_capacity, "triangles per leaf")->capture_default_str();

  auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo estimate of the collision probability");
  add_scene(mc_cmd);
  mc_cmd->add_option("--samples", o.samples, "number of samples")->capture_default_str();
  mc_cmd->add_option("--seed", o.seed, "sampling seed")->capture_default_str();

  auto* bench_cmd = app.add_subcommand("bench", "run a benchmark matrix from a JSON config");
  bench_cmd->add_option("--config", o.config, "JSON config (defaults apply when omitted)");
  auto* out_opt = bench_cmd->add_option("--out", o.out, "output file (stdout when omitted)");
  auto* fmt_opt = bench_cmd->add_option("--format", o.format, "csv|table")->check(CLI::IsMember({"csv", "table"}));

  auto* bve_cmd = app.add_subcommand("bve", "bounding volume approximation error of a mesh");
  bve_cmd->add_option("--mesh-a", o.mesh_a, "OBJ path or builtin:bunny|cube|sphere")->capture_default_str();
  bve_cmd->add_option("--bv", o.bv, "sphere|aabb|obb|kdop26|convex|all")->capture_default_str();
  bve_cmd->add_option("--leaf-capacity", o.leaf_capacity, "triangles per leaf")->capture_default_str();
  bve_cmd->add_flag("--raw-scale", o.raw_scale, "skip normalizing the mesh to a 1 m bounding box");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*pcd_cmd) return cmd_pcd(o);
    if (*mc_cmd) return cmd_mc(o);
    if (*bench_cmd) return cmd_bench(o, fmt_opt->count() > 0, out_opt->count() > 0);
    if (*bve_cmd) return cmd_bve(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_numeric_failure(e.code()) ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
