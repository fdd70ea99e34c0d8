#include "pcd/harness/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "pcd/errors.hpp"
#include "pcd/harness/shapes.hpp"
#include "pcd/query.hpp"
#include "pcd/rng.hpp"

namespace pcd::harness {

Isometry place_at_separation(const TriMesh& a, const TriMesh& b, double distance, double tol) {
  if (!(distance > 0.0)) throw Error(ErrorCode::kInvalidArgument, "separation must be positive");
  const MeshCollider collider(a, b);
  auto gap = [&](double s) { return collider.distance(Isometry(), Isometry::translation_only({s, 0.0, 0.0})); };
  double lo = 0.0;
  if (gap(lo) >= distance)
    throw Error(ErrorCode::kInvalidArgument, "meshes are already farther apart than the target at zero offset");
  // Beyond this offset B lies entirely past A along x by at least `distance`.
  double hi = a.bounds().max.x - b.bounds().min.x + distance;
  for (int step = 0; step < 100; ++step) {
    const double mid = 0.5 * (lo + hi);
    const double g = gap(mid);
    if (std::abs(g - distance) <= tol) return Isometry::translation_only({mid, 0.0, 0.0});
    (g < distance ? lo : hi) = mid;
  }
  throw Error(ErrorCode::kNonConvergence, "separation bisection did not converge");
}

GaussianError SigmaSpec::error(std::uint64_t orientation_seed) const {
  if (isotropic) return GaussianError::isotropic(std_devs.x);
  return GaussianError::axes(std_devs, random_rotation(orientation_seed));
}

namespace {

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

using nlohmann::json;

[[noreturn]] void config_fail(const std::string& msg) { throw Error(ErrorCode::kConfigError, msg); }

double as_number(const json& j, const std::string& key) {
  if (!j.is_number()) config_fail("'" + key + "' must be a number");
  return j.get<double>();
}

std::uint64_t as_count(const json& j, const std::string& key) {
  if (!j.is_number_integer() || j.get<long long>() < 0) config_fail("'" + key + "' must be a non-negative integer");
  return j.get<std::uint64_t>();
}

}  // namespace

std::string SigmaSpec::label() const {
  if (isotropic) return fmt6(std_devs.x);
  return fmt6(std_devs.x) + "/" + fmt6(std_devs.y) + "/" + fmt6(std_devs.z);
}

BenchmarkConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    config_fail(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) config_fail("config must be a JSON object");
  BenchmarkConfig c;
  for (const auto& [key, val] : doc.items()) {
    if (key == "mesh_a" || key == "mesh_b" || key == "output" || key == "format") {
      if (!val.is_string()) config_fail("'" + key + "' must be a string");
      (key == "mesh_a" ? c.mesh_a : key == "mesh_b" ? c.mesh_b : key == "output" ? c.output : c.format) =
          val.get<std::string>();
    } else if (key == "normalize" || key == "timings") {
      if (!val.is_boolean()) config_fail("'" + key + "' must be a boolean");
      (key == "normalize" ? c.normalize : c.timings) = val.get<bool>();
    } else if (key == "distances") {
      if (!val.is_array()) config_fail("'distances' must be an array");
      c.distances.clear();
      for (const auto& d : val) c.distances.push_back(as_number(d, key));
    } else if (key == "sigmas") {
      if (!val.is_array()) config_fail("'sigmas' must be an array");
      c.sigmas.clear();
      for (const auto& s : val) {
        if (s.is_array()) {
          if (s.size() != 3) config_fail("axis sigmas need three entries");
          c.sigmas.push_back(SigmaSpec::axes({as_number(s[0], key), as_number(s[1], key), as_number(s[2], key)}));
        } else {
          c.sigmas.push_back(SigmaSpec::iso(as_number(s, key)));
        }
      }
    } else if (key == "seeds") {
      if (!val.is_array()) config_fail("'seeds' must be an array");
      c.seeds.clear();
      for (const auto& s : val) c.seeds.push_back(as_count(s, key));
    } else if (key == "bv_types") {
      if (!val.is_array()) config_fail("'bv_types' must be an array");
      c.bv_types.clear();
      for (const auto& s : val) {
        if (!s.is_string()) config_fail("'bv_types' entries must be strings");
        try {
          c.bv_types.push_back(parse_bv_type(s.get<std::string>()));
        } catch (const Error& e) {
          config_fail(e.what());
        }
      }
    } else if (key == "confidence" || key == "delta") {
      c.confidence = as_number(val, key);
    } else if (key == "leaf_capacity") {
      c.leaf_capacity = static_cast<std::uint32_t>(as_count(val, key));
    } else if (key == "mc_samples") {
      c.mc_samples = as_count(val, key);
    } else if (key == "aabb_frames") {
      c.aabb_frames = static_cast<std::uint32_t>(as_count(val, key));
    } else if (key == "frame_seed") {
      c.frame_seed = as_count(val, key);
    } else if (key == "threads") {
      c.threads = static_cast<unsigned>(as_count(val, key));
    } else {
      config_fail("unknown key '" + key + "'");
    }
  }
  validate(c);
  return c;
}

BenchmarkConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const BenchmarkConfig& c) {
  if (c.distances.empty() || c.sigmas.empty() || c.seeds.empty() || c.bv_types.empty())
    config_fail("distances, sigmas, seeds and bv_types must be nonempty");
  for (double d : c.distances)
    if (!(d > 0.0) || !std::isfinite(d)) config_fail("distances must be positive");
  for (const SigmaSpec& s : c.sigmas)
    for (int k = 0; k < 3; ++k)
      if (!(s.std_devs[k] > 0.0) || !std::isfinite(s.std_devs[k])) config_fail("sigmas must be positive");
  if (c.mc_samples < 100) config_fail("mc_samples must be at least 100");
  if (!(c.confidence > 0.0 && c.confidence < 1.0)) config_fail("confidence must lie in (0, 1)");
  if (c.leaf_capacity == 0) config_fail("leaf_capacity must be positive");
  if (c.format != "csv" && c.format != "table") config_fail("format must be csv or table");
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct TreePair {
  BvhTree a, b;
  Mat3 rotation = Mat3::identity();
  double build_ms = 0.0;
};

TreePair build_pair(const TriMesh& a, const TriMesh& b, BvType type, std::uint32_t leaf, const Mat3& rot) {
  const auto t0 = Clock::now();
  const Isometry frame(rot, {});
  TreePair p{build_bvh(a.transformed(frame), type, leaf), build_bvh(b.transformed(frame), type, leaf), rot, 0.0};
  p.build_ms = ms_since(t0);
  return p;
}

}  // namespace

std::vector<BenchmarkRecord> run_benchmark(const BenchmarkConfig& config,
                                           const std::function<void(const BenchmarkRecord&)>& on_record) {
  validate(config);
  TriMesh a = resolve_mesh(config.mesh_a);
  TriMesh b = resolve_mesh(config.mesh_b);
  if (config.normalize) {
    a = normalize_mesh(a);
    b = normalize_mesh(b);
  }
  const std::string pair = mesh_label(config.mesh_a) + "-" + mesh_label(config.mesh_b);
  const double time_scale = config.timings ? 1.0 : 0.0;

  std::vector<BenchmarkRecord> out;
  auto emit = [&](BenchmarkRecord r) {
    r.build_ms *= time_scale;
    r.query_ms *= time_scale;
    r.mc_ms *= time_scale;
    if (on_record) on_record(r);
    out.push_back(std::move(r));
  };

  for (std::size_t di = 0; di < config.distances.size(); ++di) {
    const double distance = config.distances[di];
    std::optional<TriMesh> b_placed;
    std::string placement_error;
    bool placement_numeric = false;
    try {
      b_placed = b.transformed(place_at_separation(a, b, distance));
    } catch (const Error& e) {
      placement_error = e.what();
      placement_numeric = is_numeric_failure(e.code());
    }
    std::map<BvType, std::vector<TreePair>> trees;
    auto trees_for = [&](BvType type) -> const std::vector<TreePair>& {
      auto it = trees.find(type);
      if (it != trees.end()) return it->second;
      std::vector<TreePair> frames;
      if (type == BvType::kAabb && config.aabb_frames > 0) {
        for (std::uint32_t f = 0; f < config.aabb_frames; ++f) {
          frames.push_back(build_pair(a, *b_placed, type, config.leaf_capacity,
                                      random_rotation(mix64(config.frame_seed) + f)));
        }
      } else {
        frames.push_back(build_pair(a, *b_placed, type, config.leaf_capacity, Mat3::identity()));
      }
      return trees.emplace(type, std::move(frames)).first->second;
    };
    std::optional<MeshCollider> collider;
    if (b_placed) collider.emplace(a, *b_placed);

    for (std::size_t si = 0; si < config.sigmas.size(); ++si) {
      for (std::uint64_t seed : config.seeds) {
        BenchmarkRecord base;
        base.pair = pair;
        base.distance = distance;
        base.sigma = config.sigmas[si].label();
        base.seed = seed;
        McEstimate mc;
        std::string row_error = placement_error;
        bool row_numeric = placement_numeric;
        std::optional<GaussianError> err;
        if (row_error.empty()) {
          try {
            err = config.sigmas[si].error(seed);
            const auto t0 = Clock::now();
            const std::uint64_t mc_seed = mix64(seed) ^ mix64((di << 32) + si + 1);
            mc = monte_carlo_probability(
                [&](const Vec3& e) { return collider->collide(Isometry::translation_only(e), Isometry()); }, *err,
                config.mc_samples, mc_seed, config.threads);
            base.mc_ms = ms_since(t0);
          } catch (const Error& e) {
            row_error = e.what();
            row_numeric = is_numeric_failure(e.code());
          }
        }
        base.mc = mc.estimate;
        base.mc_se = mc.std_error;

        for (BvType type : config.bv_types) {
          BenchmarkRecord r = base;
          r.bv_type = type;
          if (!row_error.empty()) {
            r.error = row_error;
            r.numeric_error = row_numeric;
            r.cp = r.bve = std::nan("");
            emit(std::move(r));
            continue;
          }
          try {
            const auto& frames = trees_for(type);
            double cp = 0.0, bve_sum = 0.0, build = 0.0, query = 0.0;
            std::uint64_t nodes = 0, leaves = 0;
            for (const TreePair& tp : frames) {
              const Mat3& q = tp.rotation;
              const GaussianError e(q * err->mean(), q * err->covariance() * q.transposed());
              const PcdResult res = general_pcd({tp.a, tp.b, e, config.confidence});
              cp += res.probability_upper;
              query += std::chrono::duration<double, std::milli>(res.elapsed).count();
              nodes += res.nodes_visited;
              leaves += res.leaf_pairs_evaluated;
              bve_sum += bve(tp.a);
              build += tp.build_ms;
            }
            const double n = static_cast<double>(frames.size());
            r.frames = static_cast<std::uint32_t>(frames.size());
            r.cp = cp / n;
            r.bve = bve_sum / n;
            r.build_ms = build / n;
            r.query_ms = query / n;
            r.nodes_visited = nodes / frames.size();
            r.leaf_pairs = leaves / frames.size();
            r.sound = r.cp >= r.mc - 3.0 * r.mc_se;
          } catch (const Error& e) {
            r.error = e.what();
            r.numeric_error = is_numeric_failure(e.code());
            r.cp = r.bve = std::nan("");
          }
          emit(std::move(r));
        }
      }
    }
  }
  return out;
}

std::string csv_header() {
  return "pair,bv_type,distance,sigma,seed,frames,bve,cp,mc,mc_se,build_ms,query_ms,mc_ms,nodes_visited,"
         "leaf_pairs,sound,error";
}

std::string csv_row(const BenchmarkRecord& r) {
  std::string error = r.error;
  std::replace(error.begin(), error.end(), ',', ';');
  std::replace(error.begin(), error.end(), '\n', ' ');
  std::ostringstream s;
  s << r.pair << ',' << to_string(r.bv_type) << ',' << fmt6(r.distance) << ',' << r.sigma << ',' << r.seed << ','
    << r.frames << ',' << fmt6(r.bve) << ',' << fmt6(r.cp) << ',' << fmt6(r.mc) << ',' << fmt6(r.mc_se) << ','
    << fmt6(r.build_ms) << ',' << fmt6(r.query_ms) << ',' << fmt6(r.mc_ms) << ',' << r.nodes_visited << ','
    << r.leaf_pairs << ',' << (r.sound ? 1 : 0) << ',' << error;
  return s.str();
}

void write_csv(std::ostream& out, const std::vector<BenchmarkRecord>& records) {
  out << csv_header() << '\n';
  for (const auto& r : records) out << csv_row(r) << '\n';
  if (!out) throw Error(ErrorCode::kIoError, "failed to write CSV output");
}

void write_table(std::ostream& out, const std::vector<BenchmarkRecord>& records) {
  std::vector<double> distances;
  std::vector<BvType> types;
  for (const auto& r : records) {
    if (std::find(distances.begin(), distances.end(), r.distance) == distances.end()) distances.push_back(r.distance);
    if (std::find(types.begin(), types.end(), r.bv_type) == types.end()) types.push_back(r.bv_type);
  }
  struct Acc {
    double bve = 0, cp = 0, ms = 0;
    int n = 0;
  };
  std::map<std::pair<double, BvType>, Acc> acc;
  std::map<double, Acc> mc;
  std::map<std::tuple<double, std::string, std::uint64_t>, bool> mc_seen;
  for (const auto& r : records) {
    if (!r.error.empty()) continue;
    Acc& a = acc[{r.distance, r.bv_type}];
    a.bve += r.bve;
    a.cp += r.cp;
    a.ms += r.query_ms;
    ++a.n;
    if (!mc_seen[{r.distance, r.sigma, r.seed}]) {
      mc_seen[{r.distance, r.sigma, r.seed}] = true;
      mc[r.distance].cp += r.mc;
      mc[r.distance].ms += r.mc_ms;
      ++mc[r.distance].n;
    }
  }
  char buf[128];
  std::string line = "            ";
  std::string head = "BV          ";
  for (double d : distances) {
    std::snprintf(buf, sizeof buf, "| %-30s", ("distance " + fmt6(d) + " m").c_str());
    line += buf;
    std::snprintf(buf, sizeof buf, "| %8s %9s %10s ", "BVE", "CP (%)", "time (ms)");
    head += buf;
  }
  out << line << '\n' << head << '\n';
  for (BvType t : types) {
    std::snprintf(buf, sizeof buf, "%-12s", to_string(t));
    out << buf;
    for (double d : distances) {
      const Acc& a = acc[{d, t}];
      if (a.n == 0) {
        std::snprintf(buf, sizeof buf, "| %8s %9s %10s ", "-", "-", "-");
      } else {
        std::snprintf(buf, sizeof buf, "| %8.3f %9.3f %10.3f ", a.bve / a.n, 100.0 * a.cp / a.n, a.ms / a.n);
      }
      out << buf;
    }
    out << '\n';
  }
  out << "monte carlo ";
  for (double d : distances) {
    const Acc& a = mc[d];
    if (a.n == 0) {
      std::snprintf(buf, sizeof buf, "| %8s %9s %10s ", "-", "-", "-");
    } else {
      std::snprintf(buf, sizeof buf, "| %8s %9.3f %10.3f ", "-", 100.0 * a.cp / a.n, a.ms / a.n);
    }
    out << buf;
  }
  out << '\n';
}

}  // namespace pcd::harness
