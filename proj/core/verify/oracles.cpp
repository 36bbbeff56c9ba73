#include "oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

namespace pzp::verify {
namespace {

// Roots of cosh(k) cos(k) = 1, the clamped-clamped beam frequencies.
long double beam_root(int m) {
  long double k = (m + 0.5L) * M_PIl;
  for (int it = 0; it < 60; ++it) {
    const long double f = coshl(k) * cosl(k) - 1.0L;
    const long double fp = sinhl(k) * cosl(k) - coshl(k) * sinl(k);
    k -= f / fp;
  }
  return k;
}

// Clamped-clamped beam eigenfunction on [0,1]. Direct evaluation of the
// cosh/sinh combination cancels catastrophically past the midpoint, so the
// right half is evaluated by reflecting the left half with mode parity
// (-1)^(m+1). Everything stays in long double.
struct Beam {
  long double k, g;
  int m;
  long double raw(long double x) const {
    return coshl(k * x) - cosl(k * x) - g * (sinhl(k * x) - sinl(k * x));
  }
  long double raw1(long double x) const {
    return k * (sinhl(k * x) + sinl(k * x) - g * (coshl(k * x) - cosl(k * x)));
  }
  long double raw2(long double x) const {
    return k * k * (coshl(k * x) + cosl(k * x) - g * (sinhl(k * x) + sinl(k * x)));
  }
  long double sgn() const { return (m % 2) ? 1.0L : -1.0L; }
  long double val(long double x) const { return x <= 0.5L ? raw(x) : sgn() * raw(1 - x); }
  long double d1(long double x) const { return x <= 0.5L ? raw1(x) : -sgn() * raw1(1 - x); }
  long double d2(long double x) const { return x <= 0.5L ? raw2(x) : sgn() * raw2(1 - x); }
};

}  // namespace

double clamped_plate_series_coefficient(int modes) {
  const int N = modes;
  std::vector<Beam> B(N);
  for (int m = 0; m < N; ++m) {
    const long double k = beam_root(m + 1);
    B[m] = {k, (coshl(k) - cosl(k)) / (sinhl(k) - sinl(k)), m + 1};
  }

  // 1D mode integrals by composite Gauss; the modes are smooth but highly
  // oscillatory at N=13, 600 cells of 5 points is far past saturation.
  const int nc = 600, ng = 5;
  static const long double gx[5] = {-0.906179845938664L, -0.538469310105683L, 0.0L,
                                    0.538469310105683L, 0.906179845938664L};
  static const long double gw[5] = {0.236926885056189L, 0.478628670499366L,
                                    0.568888888888889L, 0.478628670499366L,
                                    0.236926885056189L};
  Eigen::MatrixXd I0(N, N), I1(N, N), I2(N, N);
  Eigen::VectorXd Iv(N);
  I0.setZero();
  I1.setZero();
  I2.setZero();
  Iv.setZero();
  const long double h = 1.0L / nc;
  for (int c = 0; c < nc; ++c) {
    for (int q = 0; q < ng; ++q) {
      const long double x = (c + 0.5L + 0.5L * gx[q]) * h;
      const long double w = 0.5L * h * gw[q];
      std::vector<long double> v(N), d1(N), d2(N);
      for (int m = 0; m < N; ++m) {
        v[m] = B[m].val(x);
        d1[m] = B[m].d1(x);
        d2[m] = B[m].d2(x);
      }
      for (int m = 0; m < N; ++m) {
        Iv[m] += static_cast<double>(w * v[m]);
        for (int p = 0; p < N; ++p) {
          I0(m, p) += static_cast<double>(w * v[m] * v[p]);
          I1(m, p) += static_cast<double>(w * d1[m] * d1[p]);
          I2(m, p) += static_cast<double>(w * d2[m] * d2[p]);
        }
      }
    }
  }

  // Galerkin system for the unit-load biharmonic problem on the tensor basis.
  const int nd = N * N;
  Eigen::MatrixXd A(nd, nd);
  Eigen::VectorXd b(nd);
  for (int m = 0; m < N; ++m) {
    for (int n = 0; n < N; ++n) {
      const int r = m * N + n;
      b[r] = Iv[m] * Iv[n];
      for (int p = 0; p < N; ++p)
        for (int s = 0; s < N; ++s)
          A(r, p * N + s) =
              I2(m, p) * I0(n, s) + 2 * I1(m, p) * I1(n, s) + I0(m, p) * I2(n, s);
    }
  }
  const Eigen::VectorXd coef = A.ldlt().solve(b);

  double wc = 0;
  for (int m = 0; m < N; ++m)
    for (int n = 0; n < N; ++n)
      wc += coef[m * N + n] * static_cast<double>(B[m].val(0.5L) * B[n].val(0.5L));
  return wc;
}

Mat10 dense_condense_oracle(const Mat10& GT, const std::vector<int>& elim) {
  std::vector<int> keep;
  for (int i = 0; i < 10; ++i)
    if (std::find(elim.begin(), elim.end(), i) == elim.end()) keep.push_back(i);
  const int nk = static_cast<int>(keep.size());
  const int ne = static_cast<int>(elim.size());

  Eigen::MatrixXd Akk(nk, nk), Ake(nk, ne), Aek(ne, nk), Aee(ne, ne);
  for (int i = 0; i < nk; ++i)
    for (int j = 0; j < nk; ++j) Akk(i, j) = GT(keep[i], keep[j]);
  for (int i = 0; i < nk; ++i)
    for (int j = 0; j < ne; ++j) Ake(i, j) = GT(keep[i], elim[j]);
  for (int i = 0; i < ne; ++i)
    for (int j = 0; j < nk; ++j) Aek(i, j) = GT(elim[i], keep[j]);
  for (int i = 0; i < ne; ++i)
    for (int j = 0; j < ne; ++j) Aee(i, j) = GT(elim[i], elim[j]);

  const Eigen::MatrixXd S = Akk - Ake * Aee.fullPivLu().solve(Aek);

  Mat10 out = Mat10::Zero();
  for (int i = 0; i < nk; ++i)
    for (int j = 0; j < nk; ++j) out(keep[i], keep[j]) = S(i, j);
  return out;
}

}  // namespace pzp::verify
