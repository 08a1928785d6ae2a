#include "asg/convex_set.hpp"

#include "asg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

namespace asg {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_dim(const ConvexSet& set, const Vec& v, const char* what) {
  if (v.size() != set.dim()) {
    throw InputError(std::string(what) + ": expected dimension " + std::to_string(set.dim()) +
                     ", got " + std::to_string(v.size()));
  }
}

// Tangent cone of {sum w = total, w >= 0} at x: {sum w = 0, w_i >= 0 for active i}.
// The projection has the form w_i = v_i - mu (free), max(v_i - mu, 0) (active),
// with mu fixed by sum w = 0; the sum is monotone in mu so a sorted sweep is exact.
Vec simplex_tangent_projection(const Vec& x, const Vec& v, double tol) {
  const auto n = v.size();
  std::vector<double> active;
  double free_sum = 0.0;
  long free_count = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (x[i] <= tol) {
      active.push_back(v[i]);
    } else {
      free_sum += v[i];
      ++free_count;
    }
  }
  if (free_count == 0) {
    return Vec::Zero(n);
  }
  std::sort(active.begin(), active.end(), std::greater<>());
  double num = free_sum;
  long den = free_count;
  double mu = num / static_cast<double>(den);
  for (double a : active) {
    if (a <= mu) break;
    num += a;
    ++den;
    mu = num / static_cast<double>(den);
  }
  Vec w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    w[i] = x[i] <= tol ? std::max(v[i] - mu, 0.0) : v[i] - mu;
  }
  return w;
}

Vec box_tangent_projection(const Box& box, const Vec& x, const Vec& v, double tol) {
  Vec w = v;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const bool at_lower = x[i] <= box.lower[i] + tol;
    const bool at_upper = x[i] >= box.upper[i] - tol;
    if (at_lower && at_upper) {
      w[i] = 0.0;
    } else if (at_lower) {
      w[i] = std::max(v[i], 0.0);
    } else if (at_upper) {
      w[i] = std::min(v[i], 0.0);
    }
  }
  return w;
}

}  // namespace

Vec project_onto_simplex(const Vec& v, double total) {
  const auto n = v.size();
  if (total <= 0.0) return Vec::Zero(n);
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double tau = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    cumsum += u[k];
    const double candidate = (cumsum - total) / static_cast<double>(k + 1);
    if (u[k] - candidate > 0.0) tau = candidate;
  }
  return (v.array() - tau).max(0.0).matrix();
}

ConvexSet::ConvexSet() : ConvexSet(Box{Vec(0), Vec(0)}) {}

ConvexSet::ConvexSet(Variant shape) : shape_(std::make_shared<const Variant>(std::move(shape))) {
  dim_ = std::visit(Overloaded{
                        [](const Box& b) { return static_cast<int>(b.lower.size()); },
                        [](const ScaledSimplex& s) { return s.dim; },
                        [](const Product& p) {
                          int d = 0;
                          for (const auto& f : p.factors) d += f.dim();
                          return d;
                        },
                    },
                    *shape_);
}

ConvexSet ConvexSet::box(Vec lower, Vec upper) {
  if (lower.size() != upper.size()) throw InputError("box: bound dimensions differ");
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (!(lower[i] <= upper[i])) throw InputError("box: lower bound exceeds upper bound");
  }
  return ConvexSet(Box{std::move(lower), std::move(upper)});
}

ConvexSet ConvexSet::uniform_box(int dim, double lower, double upper) {
  return box(Vec::Constant(dim, lower), Vec::Constant(dim, upper));
}

ConvexSet ConvexSet::simplex(double total, int dim) {
  if (!(total >= 0.0)) throw InputError("simplex: total must be non-negative");
  if (dim < 1) throw InputError("simplex: dimension must be positive");
  return ConvexSet(ScaledSimplex{total, dim});
}

ConvexSet ConvexSet::product(std::vector<ConvexSet> factors) {
  if (factors.empty()) throw InputError("product: no factors");
  return ConvexSet(Product{std::move(factors)});
}

Vec ConvexSet::project_point(const Vec& v) const {
  check_dim(*this, v, "project_point");
  return std::visit(Overloaded{
                        [&](const Box& b) -> Vec { return v.cwiseMax(b.lower).cwiseMin(b.upper); },
                        [&](const ScaledSimplex& s) -> Vec { return project_onto_simplex(v, s.total); },
                        [&](const Product& p) -> Vec {
                          Vec out(v.size());
                          Eigen::Index off = 0;
                          for (const auto& f : p.factors) {
                            out.segment(off, f.dim()) = f.project_point(v.segment(off, f.dim()));
                            off += f.dim();
                          }
                          return out;
                        },
                    },
                    *shape_);
}

Vec ConvexSet::project_tangent_cone(const Vec& x, const Vec& v, double tol) const {
  check_dim(*this, x, "project_tangent_cone(x)");
  check_dim(*this, v, "project_tangent_cone(v)");
  if (!contains(x, std::max(tol, kMembershipTol))) {
    throw PreconditionError("project_tangent_cone: base point lies outside the set");
  }
  return std::visit(Overloaded{
                        [&](const Box& b) -> Vec { return box_tangent_projection(b, x, v, tol); },
                        [&](const ScaledSimplex&) -> Vec { return simplex_tangent_projection(x, v, tol); },
                        [&](const Product& p) -> Vec {
                          Vec out(v.size());
                          Eigen::Index off = 0;
                          for (const auto& f : p.factors) {
                            out.segment(off, f.dim()) = f.project_tangent_cone(
                                x.segment(off, f.dim()), v.segment(off, f.dim()), tol);
                            off += f.dim();
                          }
                          return out;
                        },
                    },
                    *shape_);
}

double ConvexSet::distance(const Vec& x) const { return (x - project_point(x)).norm(); }

bool ConvexSet::contains(const Vec& x, double tol) const {
  if (x.size() != dim_) return false;
  if (!x.allFinite()) return false;
  return distance(x) <= tol;
}

double ConvexSet::diameter() const {
  return std::visit(Overloaded{
                        [](const Box& b) { return (b.upper - b.lower).norm(); },
                        [](const ScaledSimplex& s) { return s.dim >= 2 ? s.total * std::sqrt(2.0) : 0.0; },
                        [](const Product& p) {
                          double sq = 0.0;
                          for (const auto& f : p.factors) sq += f.diameter() * f.diameter();
                          return std::sqrt(sq);
                        },
                    },
                    *shape_);
}

}  // namespace asg
