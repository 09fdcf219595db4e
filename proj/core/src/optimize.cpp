#include "odmr/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "odmr/errors.hpp"

namespace odmr {

SimplexResult nelder_mead(const Objective& f, std::vector<double> x0,
                          std::span<const double> steps, const SimplexOptions& options) {
  const std::size_t dim = x0.size();
  if (steps.size() != dim) throw ConfigError("simplex steps must match the dimension");

  SimplexResult result;
  auto eval = [&](const std::vector<double>& x) {
    ++result.evaluations;
    return f(x);
  };

  if (dim == 0) {
    result.value = eval(x0);
    result.x = std::move(x0);
    result.converged = true;
    return result;
  }

  std::vector<std::vector<double>> verts(dim + 1, x0);
  for (std::size_t i = 0; i < dim; ++i) verts[i + 1][i] += steps[i];
  std::vector<double> values(dim + 1);
  for (std::size_t i = 0; i <= dim; ++i) values[i] = eval(verts[i]);

  std::vector<std::size_t> order(dim + 1);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<std::vector<double>> v2;
    std::vector<double> f2;
    for (std::size_t i : order) {
      v2.push_back(std::move(verts[i]));
      f2.push_back(values[i]);
    }
    verts = std::move(v2);
    values = std::move(f2);
  };
  auto diameter = [&] {
    double d = 0.0;
    for (std::size_t i = 1; i <= dim; ++i) {
      for (std::size_t k = 0; k < dim; ++k) d = std::max(d, std::abs(verts[i][k] - verts[0][k]));
    }
    return d;
  };
  auto blend = [&](const std::vector<double>& centroid, const std::vector<double>& worst,
                   double t) {
    std::vector<double> p(dim);
    for (std::size_t k = 0; k < dim; ++k) p[k] = centroid[k] + t * (worst[k] - centroid[k]);
    return p;
  };

  sort_simplex();
  while (result.iterations < options.max_iterations) {
    if (diameter() < options.tolerance) {
      result.converged = true;
      break;
    }
    ++result.iterations;

    std::vector<double> centroid(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t k = 0; k < dim; ++k) centroid[k] += verts[i][k] / static_cast<double>(dim);
    }
    const auto& worst = verts[dim];

    const auto reflected = blend(centroid, worst, -1.0);
    const double fr = eval(reflected);
    if (fr < values[0]) {
      const auto expanded = blend(centroid, worst, -2.0);
      const double fe = eval(expanded);
      if (fe < fr) {
        verts[dim] = expanded;
        values[dim] = fe;
      } else {
        verts[dim] = reflected;
        values[dim] = fr;
      }
    } else if (fr < values[dim - 1]) {
      verts[dim] = reflected;
      values[dim] = fr;
    } else {
      const bool outside = fr < values[dim];
      const auto contracted = blend(centroid, worst, outside ? -0.5 : 0.5);
      const double fc = eval(contracted);
      if (fc < (outside ? fr : values[dim])) {
        verts[dim] = contracted;
        values[dim] = fc;
      } else {
        for (std::size_t i = 1; i <= dim; ++i) {
          for (std::size_t k = 0; k < dim; ++k) {
            verts[i][k] = verts[0][k] + 0.5 * (verts[i][k] - verts[0][k]);
          }
          values[i] = eval(verts[i]);
        }
      }
    }
    sort_simplex();
  }
  if (!result.converged && diameter() < options.tolerance) result.converged = true;
  result.x = verts[0];
  result.value = values[0];
  return result;
}

}  // namespace odmr
