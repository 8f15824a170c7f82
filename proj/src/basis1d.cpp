#include "korn/basis1d.hpp"

#include <cmath>

#include "korn/util.hpp"

namespace korn {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Cheb1D cheb_lobatto(int n, double a, double b) {
  if (n < 2) throw ResolutionError("chebyshev grid needs at least 2 nodes");
  if (!(b > a)) throw ConfigError("chebyshev interval must have b > a");
  const int N = n - 1;  // polynomial degree
  Cheb1D out;
  out.x.resize(n);
  out.w.resize(n);
  out.D.resize(n, n);

  // Reference nodes on [-1,1], descending in cos, stored ascending.
  Eigen::VectorXd xr(n);
  for (int j = 0; j <= N; ++j) xr[j] = -std::cos(kPi * j / N);

  // Differentiation matrix on the reference nodes (negative sum trick for
  // the diagonal keeps rows exact on constants).
  Eigen::MatrixXd D(n, n);
  auto c = [&](int i) { return (i == 0 || i == N) ? 2.0 : 1.0; };
  for (int i = 0; i <= N; ++i) {
    double rowsum = 0.0;
    for (int j = 0; j <= N; ++j) {
      if (i == j) continue;
      double sgn = (((i + j) % 2) == 0) ? 1.0 : -1.0;
      D(i, j) = (c(i) / c(j)) * sgn / (xr[i] - xr[j]);
      rowsum += D(i, j);
    }
    D(i, i) = -rowsum;
  }

  // Clenshaw-Curtis weights on the reference nodes. Standard cosine-sum
  // formula; weights are symmetric so node ordering does not matter.
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  if (N == 1) {
    w[0] = w[1] = 1.0;
  } else {
    double wend = (N % 2 == 0) ? 1.0 / (N * N - 1.0) : 1.0 / (N * N);
    w[0] = wend;
    w[N] = wend;
    for (int i = 1; i < N; ++i) {
      double theta = kPi * i / N;
      double v = 1.0;
      int kmax = N / 2;
      for (int k = 1; k <= kmax; ++k) {
        double bk = (2 * k == N) ? 1.0 : 2.0;
        v -= bk * std::cos(2.0 * k * theta) / (4.0 * k * k - 1.0);
      }
      w[i] = 2.0 * v / N;
    }
  }

  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  out.x = (xr.array() * half + mid).matrix();
  out.x[0] = a;  // endpoint-exact (trace checks compare against exactly 0)
  out.x[N] = b;
  out.w = w * half;
  out.D = D / half;
  return out;
}

Trig1D trig_periodic(int n) {
  if (n < 4 || n % 2 != 0) {
    throw ResolutionError("periodic grid needs an even node count >= 4");
  }
  Trig1D out;
  out.x.resize(n);
  out.w = Eigen::VectorXd::Constant(n, 2.0 * kPi / n);
  out.D = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) out.x[j] = 2.0 * kPi * j / n;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      int k = i - j;
      double sgn = (k % 2 == 0) ? 1.0 : -1.0;
      out.D(i, j) = 0.5 * sgn / std::tan(0.5 * (out.x[i] - out.x[j]));
    }
  }
  return out;
}

Quad1D gauss_legendre(int n, double a, double b) {
  if (n < 1) throw ConfigError("gauss rule needs n >= 1");
  Quad1D out;
  out.x.resize(n);
  out.w.resize(n);
  // Newton on P_n with the three-term recurrence; cosine initial guesses.
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      if (n == 1) {
        p1 = x;
      }
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      // p1 = P_n(x), p0 = P_{n-1}(x)
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    out.x[n - 1 - i] = x;
    out.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  out.x = (out.x.array() * half + mid).matrix();
  out.w *= half;
  return out;
}

}  // namespace korn
