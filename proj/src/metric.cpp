#include "clgd/metric.hpp"

#include <cmath>
#include <stdexcept>

#include "clgd/parallel.hpp"

namespace clgd {
namespace {

double sign(double x) { return (x > 0.0) ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

void check_params(const ClgdParams& params) {
  if (params.k < 1) {
    throw std::invalid_argument("k must be at least 1");
  }
  if (!(params.epsilon > 0.0)) {
    throw std::invalid_argument("epsilon must be positive");
  }
  if (params.beta < 0.0) {
    throw std::invalid_argument("beta must be non-negative");
  }
}

// w_k = 1 / max(dist_k^2, eps); returns the weight total.
double fill_weights(const std::vector<double>& distances, double epsilon,
                    std::vector<double>& weights) {
  weights.resize(distances.size());
  double total = 0.0;
  for (std::size_t i = 0; i < distances.size(); ++i) {
    const double d2 = distances[i] * distances[i];
    weights[i] = 1.0 / std::max(d2, epsilon);
    total += weights[i];
  }
  return total;
}

// Weighted average over an already-found neighborhood; one canonical
// formulation so every caller rounds identically.
DirectionalDistance weighted_g(const Vec3& query, const PointCloud& cloud,
                               const Neighborhood& nb,
                               const std::vector<double>& weights,
                               double weight_total) {
  double f_sum = 0.0;
  Vec3 v_sum = Vec3::Zero();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const Vec3& p = cloud[nb.indices[i]];
    f_sum += weights[i] * nb.distances[i];
    v_sum += weights[i] * (query - p);
  }
  DirectionalDistance g;
  g.f = f_sum / weight_total;
  g.v = v_sum / weight_total;
  return g;
}

struct RankContribution {
  uint32_t point = 0;
  Vec3 grad = Vec3::Zero();
};

// Per-reference scratch shared by the value and gradient paths.
struct RefScratch {
  Neighborhood nb_selected;
  Neighborhood nb_other;
  std::vector<double> weights;
};

constexpr std::size_t kRefBlock = 256;

}  // namespace

DirectionalDistance directional_distance(const Vec3& query,
                                         const SpatialIndex& index, int k,
                                         std::span<const double> weights,
                                         double epsilon) {
  if (k < 1) {
    throw std::invalid_argument("k must be at least 1");
  }
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("epsilon must be positive");
  }
  if (!weights.empty() && weights.size() != static_cast<std::size_t>(k)) {
    throw std::invalid_argument(
        "supplied weight count does not match k: " +
        std::to_string(weights.size()) + " vs " + std::to_string(k));
  }
  thread_local Neighborhood nb;
  thread_local std::vector<double> own;
  index.knn_into(query, k, nb);
  if (weights.empty()) {
    const double total = fill_weights(nb.distances, epsilon, own);
    return weighted_g(query, index.cloud(), nb, own, total);
  }
  own.assign(weights.begin(), weights.end());
  double total = 0.0;
  for (double w : own) total += w;
  if (!(total > 0.0)) {
    throw std::invalid_argument("supplied weights must have a positive sum");
  }
  return weighted_g(query, index.cloud(), nb, own, total);
}

ClgdReport clgd_distance(const SpatialIndex& selected_index,
                         const SpatialIndex& other_index,
                         const ReferenceSet& refs, const ClgdParams& params) {
  check_params(params);
  if (refs.points.empty()) {
    throw std::invalid_argument("reference set is empty");
  }
  if (!refs.seeded_by(selected_index.cloud())) {
    throw std::invalid_argument(
        "reference set was not generated from the selected cloud");
  }
  const std::size_t m = refs.size();
  ClgdReport report;
  report.per_reference.resize(m);
  report.scores.resize(m);

  std::vector<double> block_sums(block_count(m, kRefBlock), 0.0);
  parallel_blocks(m, kRefBlock,
                  [&](std::size_t begin, std::size_t end, std::size_t block) {
    thread_local RefScratch scratch;
    double sum = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      const Vec3& q = refs.points[i];
      selected_index.knn_into(q, params.k, scratch.nb_selected);
      other_index.knn_into(q, params.k, scratch.nb_other);
      const double total = fill_weights(scratch.nb_selected.distances,
                                        params.epsilon, scratch.weights);
      const DirectionalDistance g_sel = weighted_g(
          q, selected_index.cloud(), scratch.nb_selected, scratch.weights,
          total);
      const DirectionalDistance g_oth = weighted_g(
          q, other_index.cloud(), scratch.nb_other, scratch.weights, total);
      const double d = std::abs(g_sel.f - g_oth.f) +
                       (g_sel.v - g_oth.v).cwiseAbs().sum();
      const double s = std::exp(-params.beta * d);
      report.per_reference[i] = d;
      report.scores[i] = s;
      sum += s * d;
    }
    block_sums[block] = sum;
  });

  double total = 0.0;
  for (double s : block_sums) total += s;
  report.value = total / static_cast<double>(m);
  return report;
}

ClgdReport clgd_distance(const PointCloud& p1, const PointCloud& p2,
                         const ReferenceSet& refs, const ClgdParams& params) {
  p1.validate();
  p2.validate();
  const bool from_p1 = refs.seeded_by(p1);
  const bool from_p2 = refs.seeded_by(p2);
  if (!from_p1 && !from_p2) {
    throw std::invalid_argument(
        "reference set was not generated from either input cloud");
  }
  const PointCloud& selected = from_p1 ? p1 : p2;
  const PointCloud& other = from_p1 ? p2 : p1;
  SpatialIndex selected_index(selected);
  SpatialIndex other_index(other);
  return clgd_distance(selected_index, other_index, refs, params);
}

ClgdGradient clgd_gradient(const SpatialIndex& static_index,
                           const SpatialIndex& moving_index,
                           const ReferenceSet& refs, const ClgdParams& params) {
  check_params(params);
  if (refs.points.empty()) {
    throw std::invalid_argument("reference set is empty");
  }
  if (!refs.seeded_by(static_index.cloud())) {
    throw std::invalid_argument(
        "gradient requires references seeded from the static cloud");
  }
  const std::size_t m = refs.size();
  const std::size_t k = static_cast<std::size_t>(params.k);
  const double inv_m = 1.0 / static_cast<double>(m);

  // Pass 1: per-reference contributions, written to disjoint slots so the
  // parallel schedule cannot affect the result.
  std::vector<RankContribution> contribs(m * k);
  std::vector<double> block_sums(block_count(m, kRefBlock), 0.0);
  parallel_blocks(m, kRefBlock,
                  [&](std::size_t begin, std::size_t end, std::size_t block) {
    thread_local RefScratch scratch;
    double sum = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      const Vec3& q = refs.points[i];
      static_index.knn_into(q, params.k, scratch.nb_selected);
      moving_index.knn_into(q, params.k, scratch.nb_other);
      const double total = fill_weights(scratch.nb_selected.distances,
                                        params.epsilon, scratch.weights);
      const DirectionalDistance g_static = weighted_g(
          q, static_index.cloud(), scratch.nb_selected, scratch.weights,
          total);
      const DirectionalDistance g_moving = weighted_g(
          q, moving_index.cloud(), scratch.nb_other, scratch.weights, total);
      const double df = g_static.f - g_moving.f;
      const Vec3 dv = g_static.v - g_moving.v;
      const double d = std::abs(df) + dv.cwiseAbs().sum();
      const double s = std::exp(-params.beta * d);
      sum += s * d;

      const double sf = sign(df);
      const Vec3 sv(sign(dv.x()), sign(dv.y()), sign(dv.z()));
      const double coef = s * inv_m;
      for (std::size_t r = 0; r < k; ++r) {
        RankContribution& out = contribs[i * k + r];
        out.point = scratch.nb_other.indices[r];
        const double wn = scratch.weights[r] / total;
        Vec3 u = Vec3::Zero();
        const double dist = scratch.nb_other.distances[r];
        if (dist > 0.0) {
          u = (q - moving_index.cloud()[out.point]) / dist;
        }
        out.grad = coef * wn * (sf * u + sv);
      }
    }
    block_sums[block] = sum;
  });

  ClgdGradient result;
  double total = 0.0;
  for (double s : block_sums) total += s;
  result.value = total * inv_m;

  // Pass 2: sequential scatter in reference order.
  result.gradient.assign(moving_index.size(), Vec3::Zero());
  for (const RankContribution& c : contribs) {
    result.gradient[c.point] += c.grad;
  }
  return result;
}

ClgdGradient clgd_gradient(const PointCloud& static_cloud,
                           const PointCloud& moving_cloud,
                           const ReferenceSet& refs, const ClgdParams& params) {
  static_cloud.validate();
  moving_cloud.validate();
  SpatialIndex static_index(static_cloud);
  SpatialIndex moving_index(moving_cloud);
  return clgd_gradient(static_index, moving_index, refs, params);
}

ClgdReport clgd_distance_auto(const PointCloud& a, const PointCloud& b,
                              const ClgdParams& params) {
  check_params(params);
  const PointCloud* other = params.reference.include_other ? &b : nullptr;
  const ReferenceSet refs = generate_references(a, other, params.reference);
  return clgd_distance(a, b, refs, params);
}

double clgd_symmetric(const PointCloud& a, const PointCloud& b,
                      const ClgdParams& params) {
  const double forward = clgd_distance_auto(a, b, params).value;
  const double backward = clgd_distance_auto(b, a, params).value;
  return 0.5 * (forward + backward);
}

}  // namespace clgd
