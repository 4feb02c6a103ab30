#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "latgauss/gaussian.hpp"
#include "oracle.hpp"

using namespace lg;

namespace {

Lattice zn(int n) { return Lattice::from_basis_columns(RatMat::identity(n)); }

RatVec rv(std::initializer_list<Rat> xs) { return RatVec(xs); }

// frozen from the 1-d direct-summation oracle (|k| <= 40, long double,
// independently recomputed in TEST_CASE "oracle self-consistency")
constexpr double kRhoZ = 1.0864348112133080;        // rho(Z)
constexpr double kRhoZHalf = 0.9135791381561168;    // rho(Z + 1/2)
constexpr double kRho2ZHalf = 0.4567895690780584;   // rho(2Z + 1/2)
constexpr double kFZHalf = 0.8408964152537145;      // f_Z(1/2)
constexpr double kFZHalfS2 = 0.9999860507278669;    // f_{Z,2}(1/2)
constexpr double kRhoSqrt2_2Z = 1.0037348854877391;   // rho_sqrt2(2Z)
constexpr double kRhoSqrt2_2Z1 = 0.4157606025960270;  // rho_sqrt2(2Z + 1)

}  // namespace

TEST_CASE("oracle self-consistency") {
  CHECK(std::abs(static_cast<double>(oracle::rho_1d(0.0L)) - kRhoZ) < 1e-15);
  CHECK(std::abs(static_cast<double>(oracle::rho_1d(0.5L)) - kRhoZHalf) < 1e-15);
  CHECK(std::abs(static_cast<double>(oracle::rho_1d(0.5L) / oracle::rho_1d(0.0L)) - kFZHalf) < 1e-15);
  CHECK(std::abs(static_cast<double>(oracle::rho_1d(0.5L, 4.0L) / oracle::rho_1d(0.0L, 4.0L)) - kFZHalfS2) <
        1e-15);
  // rho_sqrt2(2Z + c) = sum over even/odd integers of exp(-pi k^2 / 2)
  long double even = 0, odd = 0;
  for (int k = -40; k <= 40; ++k) {
    long double t = std::exp(-static_cast<long double>(M_PI) * k * k / 2.0L);
    if (k % 2 == 0) even += t;
    else odd += t;
  }
  CHECK(std::abs(static_cast<double>(even) - kRhoSqrt2_2Z) < 1e-15);
  CHECK(std::abs(static_cast<double>(odd) - kRhoSqrt2_2Z1) < 1e-15);
}

TEST_CASE("rho_point") {
  GaussianParam s1 = GaussianParam::scalar(1.0);
  CHECK(rho_point({0.0, 0.0}, s1) == 1.0);
  CHECK(rho_point({1.0}, s1) == doctest::Approx(std::exp(-M_PI)).epsilon(1e-15));

  RatMat sig(2, 2);
  sig.at(0, 0) = 1;
  sig.at(1, 1) = 4;
  GaussianParam pm = GaussianParam::matrix(sig);
  CHECK(rho_point({1.0, 1.0}, pm) == doctest::Approx(std::exp(-5.0 * M_PI / 4.0)).epsilon(1e-14));
}

TEST_CASE("gaussian parameter validation") {
  CHECK_THROWS(GaussianParam::scalar(0.0));
  CHECK_THROWS(GaussianParam::scalar(-1.0));
  RatMat bad(2, 2);
  bad.at(0, 0) = 1;
  bad.at(0, 1) = Rat(1, 2);
  bad.at(1, 0) = Rat(1, 4);  // asymmetric far beyond 1e-12
  bad.at(1, 1) = 1;
  CHECK_THROWS(GaussianParam::matrix(bad));
  RatMat notpd(2, 2);
  notpd.at(0, 0) = 1;
  notpd.at(0, 1) = 2;
  notpd.at(1, 0) = 2;
  notpd.at(1, 1) = 1;
  CHECK_THROWS(GaussianParam::matrix(notpd));
}

TEST_CASE("mass against the 1-d oracles") {
  GaussianParam s1 = GaussianParam::scalar(1.0);

  CertifiedValue m0 = mass(Coset(zn(1), rv({Rat(0)})), s1, 1e-12);
  CHECK(m0.err <= 1e-12);
  CHECK(std::abs(m0.value - kRhoZ) <= m0.err + 1e-15);
  CHECK(!m0.warning);

  CertifiedValue mh = mass(Coset(zn(1), rv({Rat(1, 2)})), s1, 1e-12);
  CHECK(mh.err <= 1e-12);
  CHECK(std::abs(mh.value - kRhoZHalf) <= mh.err + 1e-15);

  // 2Z as a standalone lattice, shift 1/2: exactly half of rho(Z + 1/2)
  RatMat two(1, 1);
  two.at(0, 0) = 2;
  CertifiedValue m2 = mass(Coset(Lattice::from_basis_columns(two), rv({Rat(1, 2)})), s1, 1e-12);
  CHECK(m2.err <= 1e-12);
  CHECK(std::abs(m2.value - kRho2ZHalf) <= m2.err + 1e-15);
}

TEST_CASE("mass of Z^2 factorizes") {
  GaussianParam s1 = GaussianParam::scalar(1.0);
  CertifiedValue m = mass(Coset(zn(2), rv({Rat(1, 2), Rat(1, 2)})), s1, 1e-12);
  CHECK(std::abs(m.value - kRhoZHalf * kRhoZHalf) <= m.err + 1e-14);
}

TEST_CASE("periodic gaussian") {
  GaussianParam s1 = GaussianParam::scalar(1.0);
  Lattice z1 = zn(1);

  // x in L: exactly 1 with zero error
  CertifiedValue f0 = periodic_gaussian(z1, s1, rv({Rat(3)}), 1e-10);
  CHECK(f0.value == 1.0);
  CHECK(f0.err == 0.0);

  CertifiedValue fh = periodic_gaussian(z1, s1, rv({Rat(1, 2)}), 1e-10);
  CHECK(fh.err <= 1e-10);
  CHECK(std::abs(fh.value - kFZHalf) <= fh.err + 1e-15);

  CertifiedValue fh2 = periodic_gaussian(z1, GaussianParam::scalar(2.0), rv({Rat(1, 2)}), 1e-10);
  CHECK(std::abs(fh2.value - kFZHalfS2) <= fh2.err + 1e-15);
  CHECK(fh2.value > fh.value);  // monotone in s
}

TEST_CASE("dual mass agrees with the alternating oracle and with mass") {
  GaussianParam s1 = GaussianParam::scalar(1.0);
  Lattice z1 = zn(1);

  CertifiedValue d0 = dual_mass(Coset(z1, rv({Rat(0)})), s1, 1e-12);
  CHECK(std::abs(d0.value - kRhoZ) <= d0.err + 1e-15);

  CertifiedValue dh = dual_mass(Coset(z1, rv({Rat(1, 2)})), s1, 1e-12);
  CHECK(dh.err <= 1e-12);
  CHECK(std::abs(dh.value - static_cast<double>(oracle::alternating_dual_1d(0.5L))) <= dh.err + 1e-15);
  CHECK(std::abs(dh.value - kRhoZHalf) <= dh.err + 2e-12);

  CertifiedValue d2 = dual_mass(Coset(zn(2), rv({Rat(1, 2), Rat(1, 2)})), s1, 1e-12);
  CHECK(std::abs(d2.value - kRhoZHalf * kRhoZHalf) <= d2.err + 2e-12);

  RatMat sig(1, 1);
  sig.at(0, 0) = 2;
  CHECK_THROWS(dual_mass(Coset(z1, rv({Rat(0)})), GaussianParam::matrix(sig), 1e-10));
}

TEST_CASE("poisson agreement on random instances") {
  std::mt19937_64 rng(555);
  std::uniform_int_distribution<long> entry(-5, 5);
  std::uniform_int_distribution<long> numer(0, 15);
  std::uniform_real_distribution<double> spick(0.5, 4.0);
  for (int n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 12; ++trial) {
      RatMat rows(n, n);
      Rat det;
      do {
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) rows.at(i, j) = Rat(entry(rng));
        det = rows.determinant();
      } while (det == 0);
      Lattice L = make_lattice(rows);
      RatVec u(n);
      for (int i = 0; i < n; ++i) u[i] = frac(numer(rng), 16);
      RatVec x = L.basis() * u;
      GaussianParam p = GaussianParam::scalar(spick(rng));
      CertifiedValue a = mass(Coset(L, x), p, 1e-10);
      CertifiedValue b = dual_mass(Coset(L, x), p, 1e-10);
      CHECK(std::abs(a.value - b.value) <= a.err + b.err);
    }
  }
}

TEST_CASE("mass symmetry under negating the shift") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<long> entry(-5, 5);
  std::uniform_int_distribution<long> numer(1, 15);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 1 + static_cast<int>(rng() % 3);
    RatMat rows(n, n);
    Rat det;
    do {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) rows.at(i, j) = Rat(entry(rng));
      det = rows.determinant();
    } while (det == 0);
    Lattice L = make_lattice(rows);
    RatVec x(n), mx(n);
    for (int i = 0; i < n; ++i) {
      x[i] = frac(numer(rng), 16);
      mx[i] = -x[i];
    }
    GaussianParam p = GaussianParam::scalar(1.0);
    CertifiedValue a = mass(Coset(L, x), p, 1e-10);
    CertifiedValue b = mass(Coset(L, mx), p, 1e-10);
    CHECK(std::abs(a.value - b.value) <= 2 * std::max(a.err, b.err));
  }
}

TEST_CASE("radius never grows when eps loosens") {
  Lattice L = zn(2);
  GaussianParam p = GaussianParam::scalar(1.5);
  Evaluator ev(L, p);
  RatVec x = rv({Rat(1, 4), Rat(1, 8)});
  double prev = 1e300;
  for (double eps : {1e-14, 1e-12, 1e-10, 1e-8, 1e-6, 1e-4, 1e-2}) {
    CertifiedValue m = ev.mass(x, eps);
    CHECK(m.radius <= prev);
    prev = m.radius;
  }
}

TEST_CASE("periodicity of the periodic gaussian") {
  std::mt19937_64 rng(31337);
  std::uniform_int_distribution<long> entry(-4, 4);
  std::uniform_int_distribution<long> numer(1, 15);
  std::uniform_int_distribution<long> zshift(-3, 3);
  for (int trial = 0; trial < 8; ++trial) {
    int n = 1 + static_cast<int>(rng() % 3);
    RatMat rows(n, n);
    Rat det;
    do {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) rows.at(i, j) = Rat(entry(rng));
      det = rows.determinant();
    } while (det == 0);
    Lattice L = make_lattice(rows);
    RatVec u(n);
    for (int i = 0; i < n; ++i) u[i] = frac(numer(rng), 16);
    RatVec x = L.basis() * u;
    RatVec z(n);
    for (int i = 0; i < n; ++i) z[i] = Rat(zshift(rng));
    RatVec xv = x;
    RatVec bz = L.basis() * z;
    for (int i = 0; i < n; ++i) xv[i] += bz[i];
    GaussianParam p = GaussianParam::scalar(1.0);
    CertifiedValue a = periodic_gaussian(L, p, x, 1e-10);
    CertifiedValue b = periodic_gaussian(L, p, xv, 1e-10);
    CHECK(std::abs(a.value - b.value) <= 2 * std::max(a.err, b.err));
  }
}

TEST_CASE("matrix form agrees with the whitened reduction") {
  std::mt19937_64 rng(2718);
  std::uniform_int_distribution<long> entry(-3, 3);
  std::uniform_int_distribution<long> numer(1, 15);
  for (int trial = 0; trial < 6; ++trial) {
    int n = 1 + static_cast<int>(rng() % 2);
    RatMat rows(n, n);
    Rat det;
    do {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) rows.at(i, j) = Rat(entry(rng));
      det = rows.determinant();
    } while (det == 0);
    Lattice L = make_lattice(rows);
    // random SPD sigma = A^T A + I with small integer A
    RatMat A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A.at(i, j) = Rat(entry(rng));
    RatMat sigma = A.transpose() * A + RatMat::identity(n);
    GaussianParam pm = GaussianParam::matrix(sigma);
    RatVec u(n);
    for (int i = 0; i < n; ++i) u[i] = frac(numer(rng), 16);
    RatVec x = L.basis() * u;

    CertifiedValue direct = periodic_gaussian(L, pm, x, 1e-8);

    // f_{L,Sigma}(x) = f_{Sigma^{-1/2} L}(Sigma^{-1/2} x)
    const Eigen::MatrixXd& W = pm.sigma_inv_sqrt();
    RatMat wb(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double acc = 0;
        for (int k = 0; k < n; ++k) acc += W(i, k) * rat_to_double(L.basis().at(k, j));
        wb.at(i, j) = rat_from_double(acc);
      }
    Lattice Lw = Lattice::from_basis_columns(wb);
    std::vector<double> xd = rat_vec_to_doubles(x);
    RatVec xw(n);
    for (int i = 0; i < n; ++i) {
      double acc = 0;
      for (int k = 0; k < n; ++k) acc += W(i, k) * xd[k];
      xw[i] = rat_from_double(acc);
    }
    CertifiedValue red = periodic_gaussian(Lw, GaussianParam::scalar(1.0), xw, 1e-8);
    CHECK(std::abs(direct.value - red.value) <= 2 * (direct.err + red.err) + 1e-9);
  }
}

TEST_CASE("cosine moments worked cases") {
  Lattice z1 = zn(1);
  auto m00 = cosine_moments(z1, rv({Rat(0)}), rv({Rat(0)}), 1e-10);
  CHECK(std::abs(m00.cos_x.value - 1.0) <= m00.cos_x.err + 1e-15);
  CHECK(std::abs(m00.cos_cos.value - 1.0) <= m00.cos_cos.err + 1e-15);
  CHECK(std::abs(m00.sin_sin.value) <= m00.sin_sin.err + 1e-15);

  auto mh = cosine_moments(z1, rv({Rat(1, 2)}), rv({Rat(1, 2)}), 1e-10);
  // E[cos(pi w)] over D_Z equals f_Z(1/2): Z is self-dual
  CHECK(std::abs(mh.cos_x.value - kFZHalf) <= mh.cos_x.err + 1e-14);
  // sin(pi k) vanishes termwise
  CHECK(std::abs(mh.sin_sin.value) <= mh.sin_sin.err + 1e-15);
  // E[cos cos] = E[cos^2(pi w)] = 1 termwise on integers
  CHECK(std::abs(mh.cos_cos.value - 1.0) <= mh.cos_cos.err + 1e-14);
}

TEST_CASE("theta split identity worked cases") {
  Lattice z1 = zn(1);
  auto rep = theta_split_identity(z1, rv({Rat(0)}), rv({Rat(0)}), 1e-10);
  CHECK(std::abs(rep.lhs.value - kRhoZ * kRhoZ) <= rep.lhs.err + 1e-14);
  REQUIRE(rep.per_coset.size() == 2);
  double even = kRhoSqrt2_2Z, odd = kRhoSqrt2_2Z1;
  double a0 = rep.per_coset[0].first.value;
  // coset order starts at c = 0
  CHECK(std::abs(a0 - even) <= rep.per_coset[0].first.err + 1e-14);
  CHECK(std::abs(rep.per_coset[1].first.value - odd) <= rep.per_coset[1].first.err + 1e-14);
  CHECK(std::abs(rep.rhs.value - (even * even + odd * odd)) <= rep.rhs.err + 1e-13);
  CHECK(std::abs(rep.lhs.value - rep.rhs.value) <= rep.lhs.err + rep.rhs.err);

  auto rep2 = theta_split_identity(zn(2), rv({Rat(0), Rat(0)}), rv({Rat(0), Rat(0)}), 1e-10);
  REQUIRE(rep2.per_coset.size() == 4);
  double z4 = kRhoZ * kRhoZ * kRhoZ * kRhoZ;
  CHECK(std::abs(rep2.lhs.value - z4) <= rep2.lhs.err + 1e-13);
  CHECK(std::abs(rep2.rhs.value - z4) <= rep2.rhs.err + 1e-13);

  auto repq = theta_split_identity(z1, rv({Rat(1, 4)}), rv({Rat(1, 4)}), 1e-10);
  CHECK(std::abs(repq.lhs.value - repq.rhs.value) <= repq.lhs.err + repq.rhs.err);
  double rq = static_cast<double>(oracle::rho_1d(0.25L));
  CHECK(std::abs(repq.lhs.value - rq * rq) <= repq.lhs.err + 1e-13);
}

TEST_CASE("theta split identity on random instances") {
  std::mt19937_64 rng(8080);
  std::uniform_int_distribution<long> entry(-5, 5);
  std::uniform_int_distribution<long> numer(0, 15);
  for (int n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 8; ++trial) {
      RatMat rows(n, n);
      Rat det;
      do {
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) rows.at(i, j) = Rat(entry(rng));
        det = rows.determinant();
      } while (det == 0);
      Lattice L = make_lattice(rows);
      RatVec ux(n), uy(n);
      for (int i = 0; i < n; ++i) {
        ux[i] = frac(numer(rng), 16);
        uy[i] = frac(numer(rng), 16);
      }
      RatVec x = L.basis() * ux, y = L.basis() * uy;
      auto rep = theta_split_identity(L, x, y, 1e-10);
      CHECK(std::abs(rep.lhs.value - rep.rhs.value) <= rep.lhs.err + rep.rhs.err);
    }
  }
}

TEST_CASE("certified quotient requires positive denominator") {
  CertifiedValue num{1.0, 0.1, 1.0, false};
  CertifiedValue den{0.05, 0.1, 1.0, false};
  CHECK_THROWS(certified_quotient(num, den));
}
