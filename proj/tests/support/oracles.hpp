#pragma once

// Reference implementations used only as test oracles. They are written
// directly from the definitions and share no code with the library beyond
// plain data types and the documented seed derivation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "stepal/learner.hpp"
#include "stepal/seed.hpp"
#include "stepal/wkmeans.hpp"

namespace stepal::oracle {

inline double sqdist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

// Minimum of Σ w‖x − c‖² over all k^n assignments, centers = weighted cluster means.
inline double exhaustive_optimum(const std::vector<WeightedPoint>& pts, std::size_t k) {
  const std::size_t n = pts.size();
  const std::size_t dim = pts.front().vector.size();
  std::vector<std::size_t> label(n, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<std::vector<double>> sum(k, std::vector<double>(dim, 0.0));
    std::vector<double> mass(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      mass[label[i]] += pts[i].weight;
      for (std::size_t d = 0; d < dim; ++d) sum[label[i]][d] += pts[i].weight * pts[i].vector[d];
    }
    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& s = sum[label[i]];
      for (std::size_t d = 0; d < dim; ++d) {
        const double c = s[d] / mass[label[i]];
        obj += pts[i].weight * (pts[i].vector[d] - c) * (pts[i].vector[d] - c);
      }
    }
    best = std::min(best, obj);
    std::size_t pos = 0;
    while (pos < n && ++label[pos] == k) label[pos++] = 0;
    if (pos == n) break;
  }
  return best;
}

// Plain (unweighted) k-means with k-means++ seeding. Draw protocol per restart r:
// mt19937_64(derive_seed(seed, {r})), one U[0,1) per center, pick the first point
// whose running score sum exceeds u·total (score 1, then squared distance).
inline double unweighted_kmeans_objective(const std::vector<std::vector<double>>& x, std::size_t k,
                                          std::uint64_t seed, std::size_t restarts, std::size_t max_iter,
                                          double tol) {
  const std::size_t n = x.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < restarts; ++r) {
    std::mt19937_64 rng(derive_seed(seed, {r}));
    auto pick = [&](const std::vector<double>& score) -> std::size_t {
      double total = 0.0;
      for (double s : score) total += s;
      const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      double run = 0.0;
      std::size_t last = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (score[i] <= 0.0) continue;
        run += score[i];
        last = i;
        if (run > u * total) return i;
      }
      return last;
    };
    std::vector<std::vector<double>> c;
    c.push_back(x[pick(std::vector<double>(n, 1.0))]);
    while (c.size() < k) {
      std::vector<double> d2(n);
      for (std::size_t i = 0; i < n; ++i) {
        d2[i] = std::numeric_limits<double>::infinity();
        for (const auto& cc : c) d2[i] = std::min(d2[i], sqdist(x[i], cc));
      }
      c.push_back(x[pick(d2)]);
    }

    std::vector<std::size_t> a(n);
    auto assign = [&] {
      double obj = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t b = 0;
        for (std::size_t j = 1; j < k; ++j) {
          if (sqdist(x[i], c[j]) < sqdist(x[i], c[b])) b = j;
        }
        a[i] = b;
        obj += sqdist(x[i], c[b]);
      }
      return obj;
    };
    double obj = assign();
    for (std::size_t it = 0; it < max_iter; ++it) {
      std::vector<std::size_t> cnt(k, 0);
      std::vector<std::vector<double>> s(k, std::vector<double>(x[0].size(), 0.0));
      for (std::size_t i = 0; i < n; ++i) {
        ++cnt[a[i]];
        for (std::size_t d = 0; d < x[0].size(); ++d) s[a[i]][d] += x[i][d];
      }
      for (std::size_t j = 0; j < k; ++j) {
        if (cnt[j] == 0) continue;
        for (std::size_t d = 0; d < x[0].size(); ++d) c[j][d] = s[j][d] / static_cast<double>(cnt[j]);
      }
      for (std::size_t j = 0; j < k; ++j) {
        if (cnt[j] != 0) continue;
        std::size_t far = n;
        double far_d = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (cnt[a[i]] < 2) continue;
          const double d = sqdist(x[i], c[a[i]]);
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        if (far == n) continue;
        --cnt[a[far]];
        a[far] = j;
        cnt[j] = 1;
        c[j] = x[far];
      }
      const double next = assign();
      const double improvement = obj - next;
      obj = next;
      if (obj <= 0.0 || improvement <= tol * (obj + improvement)) break;
    }
    best = std::min(best, obj);
  }
  return best;
}

// Mean softmax cross-entropy plus (l2/2)‖W‖², straight from the definition.
inline double naive_loss(std::span<const double> W, std::span<const double> b, std::size_t C, std::size_t D,
                         const TrainingSet& data, double l2) {
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto x = data.row(i);
    std::vector<double> z(C);
    for (std::size_t c = 0; c < C; ++c) {
      z[c] = b[c];
      for (std::size_t d = 0; d < D; ++d) z[c] += W[c * D + d] * x[d];
    }
    const double m = *std::max_element(z.begin(), z.end());
    double s = 0.0;
    for (double v : z) s += std::exp(v - m);
    total += -(z[data.labels[i]] - m - std::log(s));
  }
  double reg = 0.0;
  for (double w : W) reg += w * w;
  return total / static_cast<double>(data.size()) + 0.5 * l2 * reg;
}

// Max relative error between the library's analytic gradient and central
// differences of naive_loss.
inline double finite_difference_error(const LinearModel& model, const TrainingSet& data, double l2,
                                      double h = 1e-5) {
  const std::size_t C = model.step_count();
  const std::size_t D = model.feature_dim();
  const LossGradient g = loss_and_gradient(model, data, l2);
  std::vector<double> W(model.weights().begin(), model.weights().end());
  std::vector<double> b(model.bias().begin(), model.bias().end());
  double worst = 0.0;
  auto rel = [](double a, double n) { return std::abs(a - n) / std::max({std::abs(a), std::abs(n), 1e-6}); };
  for (std::size_t i = 0; i < W.size(); ++i) {
    const double keep = W[i];
    W[i] = keep + h;
    const double up = naive_loss(W, b, C, D, data, l2);
    W[i] = keep - h;
    const double down = naive_loss(W, b, C, D, data, l2);
    W[i] = keep;
    worst = std::max(worst, rel(g.grad_weights[i], (up - down) / (2 * h)));
  }
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double keep = b[i];
    b[i] = keep + h;
    const double up = naive_loss(W, b, C, D, data, l2);
    b[i] = keep - h;
    const double down = naive_loss(W, b, C, D, data, l2);
    b[i] = keep;
    worst = std::max(worst, rel(g.grad_bias[i], (up - down) / (2 * h)));
  }
  return worst;
}

}  // namespace stepal::oracle
