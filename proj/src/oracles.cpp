#include "asg/oracles.hpp"

#include "asg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>

namespace asg {

void GridSpec::validate() const {
  if (resolution < 2) throw InputError("grid resolution must be >= 2");
}

namespace {

void simplex_compositions(int parts, int remaining, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (parts == 1) {
    cur.push_back(remaining);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int k = 0; k <= remaining; ++k) {
    cur.push_back(k);
    simplex_compositions(parts - 1, remaining - k, cur, out);
    cur.pop_back();
  }
}

std::vector<Vec> grid_of(const ConvexSet& set, int res) {
  return std::visit(
      [&](const auto& shape) -> std::vector<Vec> {
        using T = std::decay_t<decltype(shape)>;
        std::vector<Vec> pts;
        if constexpr (std::is_same_v<T, Box>) {
          const auto n = shape.lower.size();
          std::vector<int> idx(static_cast<std::size_t>(n), 0);
          for (;;) {
            Vec p(n);
            for (Eigen::Index i = 0; i < n; ++i) {
              p[i] = shape.lower[i] + (shape.upper[i] - shape.lower[i]) * idx[static_cast<std::size_t>(i)] / res;
            }
            pts.push_back(p);
            Eigen::Index i = 0;
            for (; i < n; ++i) {
              if (++idx[static_cast<std::size_t>(i)] <= res) break;
              idx[static_cast<std::size_t>(i)] = 0;
            }
            if (i == n) break;
          }
        } else if constexpr (std::is_same_v<T, ScaledSimplex>) {
          std::vector<std::vector<int>> comps;
          std::vector<int> cur;
          simplex_compositions(shape.dim, res, cur, comps);
          for (const auto& c : comps) {
            Vec p(shape.dim);
            for (int i = 0; i < shape.dim; ++i) p[i] = shape.total * c[static_cast<std::size_t>(i)] / res;
            pts.push_back(p);
          }
        } else {
          pts.push_back(Vec(0));
          for (const ConvexSet& f : shape.factors) {
            const auto sub = grid_of(f, res);
            std::vector<Vec> next;
            next.reserve(pts.size() * sub.size());
            for (const Vec& a : pts) {
              for (const Vec& b : sub) {
                Vec p(a.size() + b.size());
                p << a, b;
                next.push_back(std::move(p));
              }
            }
            pts = std::move(next);
          }
        }
        return pts;
      },
      set.shape());
}

}  // namespace

std::vector<Vec> grid_points(const ConvexSet& set, const GridSpec& grid) {
  grid.validate();
  if (set.dim() > 3) throw UnsupportedError("grid oracles support dimension <= 3");
  return grid_of(set, grid.resolution);
}

Vec brute_point_projection(const ConvexSet& set, const Vec& v, const GridSpec& grid) {
  if (v.size() != set.dim()) throw InputError("brute_point_projection: dimension mismatch");
  const auto pts = grid_points(set, grid);
  const Vec* best = &pts.front();
  double best_d = std::numeric_limits<double>::infinity();
  for (const Vec& p : pts) {
    const double d = (p - v).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = &p;
    }
  }
  return *best;
}

namespace {

// Block layout of a set: (offset, dim, shape) of every box / simplex leaf.
void leaves(const ConvexSet& set, Eigen::Index offset, std::vector<std::pair<Eigen::Index, const ConvexSet*>>& out) {
  if (const auto* p = std::get_if<Product>(&set.shape())) {
    for (const ConvexSet& f : p->factors) {
      leaves(f, offset, out);
      offset += f.dim();
    }
  } else {
    out.emplace_back(offset, &set);
  }
}

// Feasible direction test straight from the constraint description: sign
// conditions on active bounds, zero sum on simplex blocks.
bool in_tangent_cone(const std::vector<std::pair<Eigen::Index, const ConvexSet*>>& parts, const Vec& x, const Vec& w,
                     double tol) {
  for (const auto& [off, leaf] : parts) {
    const int n = leaf->dim();
    if (const auto* b = std::get_if<Box>(&leaf->shape())) {
      for (int i = 0; i < n; ++i) {
        const double xi = x[off + i];
        if (xi <= b->lower[i] + tol && w[off + i] < 0.0) return false;
        if (xi >= b->upper[i] - tol && w[off + i] > 0.0) return false;
      }
    } else {
      if (std::abs(w.segment(off, n).sum()) > 1e-12 * std::max(1.0, w.norm())) return false;
      for (int i = 0; i < n; ++i) {
        if (x[off + i] <= tol && w[off + i] < 0.0) return false;
      }
    }
  }
  return true;
}

}  // namespace

Vec brute_projection(const ConvexSet& set, const Vec& x, const Vec& v, const GridSpec& grid) {
  if (v.size() != set.dim() || x.size() != set.dim()) throw InputError("brute_projection: dimension mismatch");
  grid.validate();
  if (set.dim() > 3) throw UnsupportedError("grid oracles support dimension <= 3");
  std::vector<std::pair<Eigen::Index, const ConvexSet*>> parts;
  leaves(set, 0, parts);
  const auto n = v.size();
  const double span = std::max(v.norm(), 1e-300);
  const int res = grid.resolution;

  // Candidates on a grid of [-|v|, |v|]^n; the last coordinate of each
  // simplex block is replaced so the block sums to zero.
  Vec best = Vec::Zero(n);
  double best_d = v.squaredNorm();
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  Vec w(n);
  for (;;) {
    for (Eigen::Index i = 0; i < n; ++i) w[i] = span * (2.0 * idx[static_cast<std::size_t>(i)] / res - 1.0);
    for (const auto& [off, leaf] : parts) {
      if (std::holds_alternative<ScaledSimplex>(leaf->shape())) {
        const int m = leaf->dim();
        w[off + m - 1] = -w.segment(off, m - 1).sum();
      }
    }
    if (in_tangent_cone(parts, x, w, kMembershipTol)) {
      const double d = (w - v).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = w;
      }
    }
    Eigen::Index i = 0;
    for (; i < n; ++i) {
      if (++idx[static_cast<std::size_t>(i)] <= res) break;
      idx[static_cast<std::size_t>(i)] = 0;
    }
    if (i == n) break;
  }
  return best;
}

RowVec finite_diff_gradient(const std::function<double(const Vec&)>& fn, const Vec& x, double h_fd) {
  if (!(h_fd > 0.0)) throw InputError("finite_diff_gradient: step must be positive");
  RowVec g(x.size());
  Vec p = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    p[i] = x[i] + h_fd;
    const double up = fn(p);
    p[i] = x[i] - h_fd;
    const double down = fn(p);
    p[i] = x[i];
    g[i] = (up - down) / (2.0 * h_fd);
  }
  return g;
}

StackelbergResult grid_stackelberg(const std::function<std::vector<Vec>(int)>& grid_at,
                                   const std::function<double(const Vec&, const Vec&)>& cost,
                                   const BestResponseSetFn& best_responses, const GridSpec& grid, double epsilon,
                                   double slack_per_spacing) {
  grid.validate();
  if (!(epsilon >= 0.0)) throw InputError("grid_stackelberg: epsilon must be >= 0");
  auto worst = [&](const Vec& r) {
    double w = -std::numeric_limits<double>::infinity();
    for (const Vec& a : best_responses(r)) w = std::max(w, cost(r, a));
    return w;
  };
  auto search = [&](int res, Vec& arg, long& count) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec& r : grid_at(res)) {
      const double v = worst(r);
      ++count;
      // Strict comparison keeps the first minimiser in grid order.
      if (v < best) {
        best = v;
        arg = r;
      }
    }
    return best;
  };

  StackelbergResult out;
  out.epsilon = epsilon;
  out.j_star = search(grid.resolution, out.r_star, out.grid_points);
  Vec fine_arg;
  long fine_count = 0;
  out.j_refined = search(2 * grid.resolution, fine_arg, fine_count);
  out.slack = slack_per_spacing / grid.resolution;
  out.is_epsilon_action = out.j_star <= out.j_refined + epsilon + out.slack;
  return out;
}

namespace ddos {

std::vector<Vec> best_response_set(const Vec& r, const DdosScenario& sc, double tol) {
  const int k = sc.flooded_links();
  const int n = sc.links;
  std::vector<Vec> patterns;
  std::vector<bool> pick(static_cast<std::size_t>(n), false);
  std::fill(pick.begin(), pick.begin() + std::min(k, n), true);
  // prev_permutation walks the subsets in lexicographic order of the mask.
  do {
    Vec a = Vec::Zero(n);
    for (int l = 0; l < n; ++l) {
      if (pick[static_cast<std::size_t>(l)]) a[l] = sc.c0;
    }
    patterns.push_back(a);
  } while (std::prev_permutation(pick.begin(), pick.end()));

  double best = std::numeric_limits<double>::infinity();
  for (const Vec& a : patterns) best = std::min(best, attacker_cost(a, r, sc));
  std::vector<Vec> out;
  for (const Vec& a : patterns) {
    if (attacker_cost(a, r, sc) <= best + tol) out.push_back(a);
  }
  return out;
}

std::vector<Vec> leader_grid(const DdosScenario& sc, int resolution) {
  const double upper = std::min(sc.c0, sc.r_total);
  const int free_dims = sc.links - 1;
  std::vector<Vec> pts;
  if (free_dims == 0) {
    pts.push_back(Vec::Constant(1, sc.r_total));
    return pts;
  }
  std::vector<int> idx(static_cast<std::size_t>(free_dims), 0);
  const double tol = 1e-12;
  for (;;) {
    Vec r(sc.links);
    double partial = 0.0;
    for (int k = 0; k < free_dims; ++k) {
      r[k] = upper * idx[static_cast<std::size_t>(k)] / resolution;
      partial += r[k];
    }
    const double last = sc.r_total - partial;
    if (last >= -tol && last <= sc.c0 + tol) {
      r[sc.links - 1] = std::clamp(last, 0.0, sc.c0);
      pts.push_back(r);
    }
    int k = 0;
    for (; k < free_dims; ++k) {
      if (++idx[static_cast<std::size_t>(k)] <= resolution) break;
      idx[static_cast<std::size_t>(k)] = 0;
    }
    if (k == free_dims) break;
  }
  return pts;
}

double worst_case_cost(const Vec& r, const DdosScenario& sc) {
  double w = -std::numeric_limits<double>::infinity();
  for (const Vec& a : best_response_set(r, sc)) w = std::max(w, router_cost(r, a, sc));
  return w;
}

StackelbergResult grid_stackelberg(const DdosScenario& sc, const GridSpec& grid, double epsilon) {
  sc.validate();
  const double upper = std::min(sc.c0, sc.r_total);
  // Moving the free coordinates by one spacing moves the last one by at most
  // (L-1) spacings, so J changes by at most 2 (L-1) spacings.
  const double modulus = 2.0 * std::max(sc.links - 1, 0) * upper;
  return asg::grid_stackelberg([&](int res) { return leader_grid(sc, res); },
                               [&](const Vec& r, const Vec& a) { return router_cost(r, a, sc); },
                               [&](const Vec& r) { return best_response_set(r, sc); }, grid, epsilon, modulus);
}

}  // namespace ddos

}  // namespace asg
