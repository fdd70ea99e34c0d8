#include "pcd/query.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

#include "pcd/errors.hpp"
#include "pcd/prob_bound.hpp"
#include "pcd/rng.hpp"
#include "pcd/tri_tri.hpp"

namespace pcd {
namespace {

class Traversal {
 public:
  explicit Traversal(const PcdQuery& q) : q_(q) {}

  double visit(std::int32_t ia, std::int32_t ib, PcdResult& out) {
    const BvhNode& a = q_.tree_a.nodes[ia];
    const BvhNode& b = q_.tree_b.nodes[ib];
    ++out.nodes_visited;
    const double p =
        convex_pcd(to_convex_shape(a.bv), to_convex_shape(b.bv), q_.error).probability_upper;
    if (out.nodes_visited == 1) out.root_bound = p;
    const bool leaves = a.is_leaf() && b.is_leaf();
    if (leaves) ++out.leaf_pairs_evaluated;
    if (p < 1.0 - q_.confidence || leaves) return p;
    const bool split_a = !a.is_leaf() && (b.is_leaf() || a.volume >= b.volume);
    if (split_a) return visit(a.left, ib, out) + visit(a.right, ib, out);
    return visit(ia, b.left, out) + visit(ia, b.right, out);
  }

 private:
  const PcdQuery& q_;
};

// Axis-aligned box around `box` mapped through `pose`.
Aabb transform_box(const Aabb& box, const Isometry& pose) {
  const Vec3 c = pose.apply(box.center());
  const Vec3 h = box.extent() * 0.5;
  const Mat3& r = pose.rotation();
  Vec3 e;
  for (int i = 0; i < 3; ++i) e[i] = std::abs(r(i, 0)) * h.x + std::abs(r(i, 1)) * h.y + std::abs(r(i, 2)) * h.z;
  return {c - e, c + e};
}

double box_distance(const Aabb& a, const Aabb& b) {
  Vec3 gap;
  for (int i = 0; i < 3; ++i) gap[i] = std::max({0.0, a.min[i] - b.max[i], b.min[i] - a.max[i]});
  return norm(gap);
}

Tri posed_triangle(const TriMesh& m, std::uint32_t i, const Isometry& pose) {
  const auto t = m.triangle(i);
  return {pose.apply(t[0]), pose.apply(t[1]), pose.apply(t[2])};
}

}  // namespace

PcdResult general_pcd(const PcdQuery& query) {
  if (!(query.confidence > 0.0 && query.confidence < 1.0))
    throw Error(ErrorCode::kInvalidArgument, "confidence must lie in (0, 1)");
  if (query.tree_a.nodes.empty() || query.tree_b.nodes.empty())
    throw Error(ErrorCode::kEmptyMesh, "query on an empty hierarchy");
  const auto start = std::chrono::steady_clock::now();
  PcdResult out;
  Traversal t(query);
  out.probability_upper = std::clamp(t.visit(0, 0, out), 0.0, 1.0);
  out.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start);
  return out;
}

MeshCollider::MeshCollider(const TriMesh& a, const TriMesh& b, std::uint32_t leaf_capacity)
    : a_(build_bvh(a, BvType::kAabb, leaf_capacity)), b_(build_bvh(b, BvType::kAabb, leaf_capacity)) {}

bool MeshCollider::collide(const Isometry& pose_a, const Isometry& pose_b) const {
  // Work in A's frame.
  const Isometry b_in_a = pose_a.inverse() * pose_b;
  std::vector<std::pair<std::int32_t, std::int32_t>> stack{{0, 0}};
  while (!stack.empty()) {
    const auto [ia, ib] = stack.back();
    stack.pop_back();
    const BvhNode& na = a_.nodes[ia];
    const BvhNode& nb = b_.nodes[ib];
    if (!std::get<Aabb>(na.bv).overlaps(transform_box(std::get<Aabb>(nb.bv), b_in_a))) continue;
    if (na.is_leaf() && nb.is_leaf()) {
      for (std::uint32_t tb : b_.triangles_of(nb)) {
        const Tri t2 = posed_triangle(b_.mesh, tb, b_in_a);
        for (std::uint32_t ta : a_.triangles_of(na)) {
          if (tri_tri_intersect(a_.mesh.triangle(ta), t2)) return true;
        }
      }
      continue;
    }
    if (!na.is_leaf() && (nb.is_leaf() || na.volume >= nb.volume)) {
      stack.push_back({na.right, ib});
      stack.push_back({na.left, ib});
    } else {
      stack.push_back({ia, nb.right});
      stack.push_back({ia, nb.left});
    }
  }
  return false;
}

double MeshCollider::distance(const Isometry& pose_a, const Isometry& pose_b) const {
  const Isometry b_in_a = pose_a.inverse() * pose_b;
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::pair<std::int32_t, std::int32_t>> stack{{0, 0}};
  while (!stack.empty()) {
    const auto [ia, ib] = stack.back();
    stack.pop_back();
    const BvhNode& na = a_.nodes[ia];
    const BvhNode& nb = b_.nodes[ib];
    if (box_distance(std::get<Aabb>(na.bv), transform_box(std::get<Aabb>(nb.bv), b_in_a)) >= best) continue;
    if (na.is_leaf() && nb.is_leaf()) {
      for (std::uint32_t tb : b_.triangles_of(nb)) {
        const Tri t2 = posed_triangle(b_.mesh, tb, b_in_a);
        for (std::uint32_t ta : a_.triangles_of(na)) {
          best = std::min(best, tri_tri_distance(a_.mesh.triangle(ta), t2));
          if (best == 0.0) return 0.0;
        }
      }
      continue;
    }
    // Visit the nearer child first so the bound tightens early.
    std::pair<std::int32_t, std::int32_t> c1, c2;
    if (!na.is_leaf() && (nb.is_leaf() || na.volume >= nb.volume)) {
      c1 = {na.left, ib};
      c2 = {na.right, ib};
    } else {
      c1 = {ia, nb.left};
      c2 = {ia, nb.right};
    }
    auto dist = [&](const std::pair<std::int32_t, std::int32_t>& c) {
      return box_distance(std::get<Aabb>(a_.nodes[c.first].bv),
                          transform_box(std::get<Aabb>(b_.nodes[c.second].bv), b_in_a));
    };
    if (dist(c1) < dist(c2)) std::swap(c1, c2);
    stack.push_back(c1);
    stack.push_back(c2);
  }
  return best;
}

bool exact_collide(const TriMesh& a, const Isometry& pose_a, const TriMesh& b, const Isometry& pose_b) {
  return MeshCollider(a, b).collide(pose_a, pose_b);
}

double mesh_distance(const TriMesh& a, const Isometry& pose_a, const TriMesh& b, const Isometry& pose_b) {
  return MeshCollider(a, b).distance(pose_a, pose_b);
}

McEstimate monte_carlo_probability(const std::function<bool(const Vec3&)>& collides,
                                   const GaussianError& error, std::uint64_t n_samples,
                                   std::uint64_t seed, unsigned threads) {
  if (n_samples < 100) throw Error(ErrorCode::kInvalidArgument, "Monte Carlo needs at least 100 samples");
  const Mat3 l = cholesky(error.covariance());
  const Vec3 mean = error.mean();
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, n_samples));

  std::vector<std::uint64_t> hits(threads, 0);
  std::atomic<bool> failed{false};
  std::exception_ptr failure;
  auto work = [&](unsigned w) {
    try {
      const std::uint64_t lo = n_samples * w / threads, hi = n_samples * (w + 1) / threads;
      std::uint64_t h = 0;
      for (std::uint64_t i = lo; i < hi; ++i) {
        CounterRng rng(seed, i);
        if (collides(mean + l * rng.next_normal3())) ++h;
      }
      hits[w] = h;
    } catch (...) {
      if (!failed.exchange(true)) failure = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  McEstimate r;
  r.samples = n_samples;
  for (std::uint64_t h : hits) r.hits += h;
  r.estimate = static_cast<double>(r.hits) / static_cast<double>(n_samples);
  r.std_error = std::sqrt(r.estimate * (1.0 - r.estimate) / static_cast<double>(n_samples));
  return r;
}

McEstimate monte_carlo_probability(const TriMesh& a, const TriMesh& b, const GaussianError& error,
                                   std::uint64_t n_samples, std::uint64_t seed, unsigned threads) {
  const MeshCollider collider(a, b);
  return monte_carlo_probability(
      [&](const Vec3& e) { return collider.collide(Isometry::translation_only(e), Isometry()); }, error,
      n_samples, seed, threads);
}

}  // namespace pcd
