#include "escat/quadrature.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace escat {

namespace {

GaussRule compute_rule(int n) {
  // Newton iteration on Legendre polynomials, standard Golub-free variant.
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

} // namespace

const GaussRule &gauss_rule(int n) {
  static std::map<int, GaussRule> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
  return it->second;
}

Complex integrate_gauss(const std::function<Complex(double)> &f, double a, double b,
                        int order) {
  const GaussRule &rule = gauss_rule(order);
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  Complex sum = 0;
  for (size_t i = 0; i < rule.nodes.size(); ++i)
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

Complex integrate_adaptive(const std::function<Complex(double)> &f, double a, double b,
                           double tol, int order, int max_doublings) {
  int panels = 1;
  Complex prev = integrate_gauss(f, a, b, order);
  for (int d = 0; d < max_doublings; ++d) {
    panels *= 2;
    Complex cur = 0;
    double w = (b - a) / panels;
    for (int p = 0; p < panels; ++p)
      cur += integrate_gauss(f, a + p * w, a + (p + 1) * w, order);
    double scale = std::max(std::abs(cur), 1e-300);
    if (std::abs(cur - prev) <= tol * scale) return cur;
    prev = cur;
  }
  return prev;
}

Complex integrate_graded(const std::function<Complex(double)> &f, double a, double b,
                         double layer, int order, double max_width) {
  if (b <= a) return 0;
  layer = std::min(std::max(layer, (b - a) * 1e-8), b - a);
  Complex sum = 0;
  double lo = a, width = layer;
  while (lo < b) {
    double w = std::min(width, max_width);
    double hi = std::min(lo + w, b);
    sum += integrate_gauss(f, lo, hi, order);
    lo = hi;
    width *= 2.0;
  }
  return sum;
}

Complex integrate_sector_polar(const std::function<Complex(double, double)> &f,
                               double r0, double r1, double t0, double t1,
                               double layer, double tol, double max_width) {
  auto radial = [&](double theta) {
    return integrate_graded([&](double r) { return f(r, theta) * r; }, r0, r1, layer,
                            16, max_width);
  };
  return integrate_adaptive(radial, t0, t1, tol);
}

} // namespace escat
