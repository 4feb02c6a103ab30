#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "latgauss/lattice.hpp"
#include "oracle.hpp"

using namespace lg;

namespace {

RatMat rows2(long a, long b, long c, long d) {
  RatMat m(2, 2);
  m.at(0, 0) = a;
  m.at(0, 1) = b;
  m.at(1, 0) = c;
  m.at(1, 1) = d;
  return m;
}

Lattice zn(int n) { return Lattice::from_basis_columns(RatMat::identity(n)); }

IMat imat2(long a, long b, long c, long d) {
  IMat m(2, 2);
  m.at(0, 0) = a;
  m.at(0, 1) = b;
  m.at(1, 0) = c;
  m.at(1, 1) = d;
  return m;
}

IMat iscalar(long v) {
  IMat m(1, 1);
  m.at(0, 0) = v;
  return m;
}

// set equality of two lattices given as SublatticeReps of the same parent
bool same_lattice_set(const Lattice& A, const Lattice& B) {
  RatMat X = A.basis_inv() * B.basis();
  RatMat Y = B.basis_inv() * A.basis();
  for (int i = 0; i < X.rows(); ++i)
    for (int j = 0; j < X.cols(); ++j) {
      if (X.at(i, j).get_den() != 1) return false;
      if (Y.at(i, j).get_den() != 1) return false;
    }
  return true;
}

}  // namespace

TEST_CASE("make_lattice basics") {
  Lattice id2 = make_lattice(RatMat::identity(2));
  CHECK(id2.det_abs() == Rat(1));
  CHECK(id2.gram() == RatMat::identity(2));

  // the lattice spanned by (1,1) and (1,-1)
  Lattice fig = make_lattice(rows2(1, 1, 1, -1));
  CHECK(fig.det_abs() == Rat(2));

  CHECK_THROWS_AS(make_lattice(rows2(1, 0, 2, 0)), SingularBasis);
}

TEST_CASE("lattice membership is exact") {
  Lattice fig = make_lattice(rows2(1, 1, 1, -1));
  CHECK(fig.contains({Rat(2), Rat(0)}));
  CHECK(fig.contains({Rat(1), Rat(1)}));
  CHECK(fig.contains({Rat(0), Rat(2)}));
  CHECK(!fig.contains({Rat(1), Rat(0)}));
  CHECK(!fig.contains({Rat(1, 2), Rat(1, 2)}));
}

TEST_CASE("dual lattice") {
  Lattice z3 = zn(3);
  Lattice z3d = dual(z3);
  CHECK(z3d.basis() == RatMat::identity(3));

  RatMat d(2, 2);
  d.at(0, 0) = 2;
  d.at(1, 1) = 1;
  Lattice L = Lattice::from_basis_columns(d);
  Lattice Ld = dual(L);
  CHECK(Ld.basis().at(0, 0) == Rat(1, 2));
  CHECK(Ld.basis().at(1, 1) == Rat(1));

  Lattice fig = make_lattice(rows2(1, 1, 1, -1));
  CHECK(dual(fig).det_abs() == Rat(1, 2));

  // dual(dual(L)) generates the same point set
  for (const auto& L2 : {z3, L, fig}) {
    CHECK(same_lattice_set(L2, dual(dual(L2))));
  }
}

TEST_CASE("sublattice representation") {
  Lattice z1 = zn(1);
  SublatticeRep twoZ = sublattice(z1, iscalar(2));
  CHECK(twoZ.index() == 2);

  Lattice z2 = zn(2);
  SublatticeRep s4 = sublattice(z2, imat2(2, 0, 0, 2));
  CHECK(s4.index() == 4);
  SublatticeRep s3 = sublattice(z2, imat2(1, 0, 0, 3));
  CHECK(s3.index() == 3);

  CHECK_THROWS_AS(sublattice(z2, imat2(1, 1, 1, 1)), SingularCoefficients);
}

TEST_CASE("intersection of sublattices") {
  Lattice z1 = zn(1);
  SublatticeRep m = sublattice(z1, iscalar(2));
  SublatticeRep nn = sublattice(z1, iscalar(3));
  SublatticeRep isect = intersect(m, nn);
  CHECK(isect.index() == 6);

  SublatticeRep same = intersect(m, m);
  CHECK(same.index() == 2);

  Lattice z2 = zn(2);
  SublatticeRep a = sublattice(z2, imat2(1, 0, 0, 2));
  SublatticeRep b = sublattice(z2, imat2(2, 0, 0, 1));
  SublatticeRep c = intersect(a, b);
  CHECK(c.index() == 4);
  CHECK(same_lattice_set(c.as_lattice(), sublattice(z2, imat2(2, 0, 0, 2)).as_lattice()));

  Lattice other = make_lattice(rows2(1, 1, 1, -1));
  CHECK_THROWS_AS(intersect(a, sublattice(other, imat2(2, 0, 0, 2))), ParentMismatch);
}

TEST_CASE("intersection: every basis vector lies in both, index divides product") {
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<long> entry(-3, 3);
  for (int n = 1; n <= 4; ++n) {
    Lattice L = zn(n);
    for (int trial = 0; trial < 30; ++trial) {
      IMat X(n, n), Y(n, n);
      do {
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) X.at(i, j) = entry(rng);
      } while (X.determinant() == 0);
      do {
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) Y.at(i, j) = entry(rng);
      } while (Y.determinant() == 0);
      SublatticeRep M = sublattice(L, X), N = sublattice(L, Y);
      SublatticeRep I = intersect(M, N);
      for (int col = 0; col < n; ++col) {
        RatVec v(n);
        for (int i = 0; i < n; ++i) v[i] = I.as_lattice().basis().at(i, col);
        CHECK(M.as_lattice().contains(v));
        CHECK(N.as_lattice().contains(v));
      }
      Int prod = M.index() * N.index();
      CHECK(prod % I.index() == 0);
      // commutativity up to lattice-set equality
      SublatticeRep I2 = intersect(N, M);
      CHECK(same_lattice_set(I.as_lattice(), I2.as_lattice()));
    }
  }
}

TEST_CASE("intersection associativity on random triples") {
  std::mt19937_64 rng(777);
  std::uniform_int_distribution<long> entry(-2, 2);
  for (int n = 1; n <= 3; ++n) {
    Lattice L = zn(n);
    auto rand_sub = [&]() {
      IMat X(n, n);
      do {
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) X.at(i, j) = entry(rng);
      } while (X.determinant() == 0);
      return sublattice(L, X);
    };
    for (int trial = 0; trial < 15; ++trial) {
      auto A = rand_sub(), B = rand_sub(), C = rand_sub();
      auto left = intersect(intersect(A, B), C);
      auto right = intersect(A, intersect(B, C));
      CHECK(same_lattice_set(left.as_lattice(), right.as_lattice()));
    }
  }
}

TEST_CASE("quotient representatives match the worked cases") {
  Lattice z1 = zn(1);
  auto q3 = quotient_reps(z1, sublattice(z1, iscalar(3)));
  REQUIRE(q3.reps.size() == 3);
  CHECK(q3.reps[0][0] == Rat(0));
  CHECK(q3.reps[1][0] == Rat(1));
  CHECK(q3.reps[2][0] == Rat(2));

  Lattice z2 = zn(2);
  auto q4 = quotient_reps(z2, sublattice(z2, imat2(2, 0, 0, 2)));
  REQUIRE(q4.reps.size() == 4);
  CHECK(q4.reps[0] == RatVec{Rat(0), Rat(0)});
  CHECK(q4.reps[1] == RatVec{Rat(1), Rat(0)});
  CHECK(q4.reps[2] == RatVec{Rat(0), Rat(1)});
  CHECK(q4.reps[3] == RatVec{Rat(1), Rat(1)});

  auto q13 = quotient_reps(z2, sublattice(z2, imat2(1, 0, 0, 3)));
  REQUIRE(q13.reps.size() == 3);
  CHECK(q13.reps[0] == RatVec{Rat(0), Rat(0)});
  CHECK(q13.reps[1] == RatVec{Rat(0), Rat(1)});
  CHECK(q13.reps[2] == RatVec{Rat(0), Rat(2)});
}

TEST_CASE("quotient representatives: exact coverage and distinctness") {
  std::mt19937_64 rng(424242);
  std::uniform_int_distribution<long> entry(-3, 3);
  std::uniform_int_distribution<long> pt(-20, 20);
  for (int n = 1; n <= 3; ++n) {
    Lattice L = zn(n);
    for (int trial = 0; trial < 10; ++trial) {
      IMat X(n, n);
      Int det;
      do {
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) X.at(i, j) = entry(rng);
        det = X.determinant();
      } while (det == 0 || abs(det) > 24);
      SublatticeRep M = sublattice(L, X);
      auto q = quotient_reps(L, M);
      REQUIRE(Int(static_cast<long>(q.reps.size())) == M.index());

      // every representative is a lattice point
      for (const auto& r : q.reps) CHECK(L.contains(r));

      // pairwise inequivalent mod M (exact)
      for (size_t a = 0; a < q.reps.size(); ++a)
        for (size_t b = a + 1; b < q.reps.size(); ++b) {
          RatVec diff(n);
          for (int i = 0; i < n; ++i) diff[i] = q.reps[a][i] - q.reps[b][i];
          CHECK(!M.as_lattice().contains(diff));
        }

      // random lattice points reduce to the representative classes,
      // covering each class
      int npoints = M.index() <= 12 ? 1000 : 150;
      std::vector<int> hits(q.reps.size(), 0);
      for (int k = 0; k < npoints; ++k) {
        RatVec p(n);
        for (int i = 0; i < n; ++i) p[i] = Rat(pt(rng));
        int found = -1;
        for (size_t r = 0; r < q.reps.size(); ++r) {
          RatVec diff(n);
          for (int i = 0; i < n; ++i) diff[i] = p[i] - q.reps[r][i];
          if (M.as_lattice().contains(diff)) {
            CHECK(found == -1);  // exactly one class
            found = static_cast<int>(r);
          }
        }
        REQUIRE(found >= 0);
        hits[found]++;
      }
      if (M.index() <= 16) {
        for (int h : hits) CHECK(h > 0);
      }
    }
  }
}

TEST_CASE("enumerate_points worked cases") {
  Lattice z2 = zn(2);
  Coset c0(z2, {Rat(0), Rat(0)});
  auto p1 = enumerate_points(c0, 1.0);
  CHECK(p1.points.size() == 5);  // 0, +-e1, +-e2; boundary included
  auto p15 = enumerate_points(c0, 1.5);
  CHECK(p15.points.size() == 9);

  Lattice z1 = zn(1);
  Coset ch(z1, {Rat(1, 2)});
  auto ph = enumerate_points(ch, 2.0);
  REQUIRE(ph.points.size() == 4);
  std::multiset<double> got(
      {ph.points[0][0], ph.points[1][0], ph.points[2][0], ph.points[3][0]});
  std::multiset<double> want({-1.5, -0.5, 0.5, 1.5});
  CHECK(got == want);
}

TEST_CASE("enumerate_points equals brute force on random instances") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<long> entry(-4, 4);
  std::uniform_int_distribution<long> numer(0, 7);
  std::uniform_real_distribution<double> rad(0.5, 3.0);
  for (int n = 1; n <= 4; ++n) {
    for (int trial = 0; trial < 8; ++trial) {
      RatMat rows(n, n);
      RatVec x(n);
      double R;
      while (true) {
        Rat det;
        do {
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) rows.at(i, j) = Rat(entry(rng));
          det = rows.determinant();
        } while (det == 0);
        for (int i = 0; i < n; ++i) x[i] = frac(numer(rng), 8);
        R = rad(rng);
        // keep the reference scan affordable
        if (oracle::brute_box_size(rows.transpose(), x, R) < 2e5) break;
      }
      Lattice L = make_lattice(rows);
      auto mine = enumerate_points(Coset(L, x), R);
      auto brute = oracle::coset_points_brute(L.basis(), x, rat_from_double(R));
      REQUIRE(mine.points.size() == brute.size());
      // match as exact multisets of rational points
      std::multiset<std::vector<std::string>> a, b;
      for (const auto& coeffs : mine.coefficients) {
        RatVec w(x);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) w[i] += L.basis().at(i, j) * Rat(static_cast<long>(coeffs[j]));
        std::vector<std::string> key;
        for (const auto& v : w) key.push_back(rat_to_string(v));
        a.insert(key);
      }
      for (const auto& w : brute) {
        std::vector<std::string> key;
        for (const auto& v : w) key.push_back(rat_to_string(v));
        b.insert(key);
      }
      CHECK(a == b);
    }
  }
}

TEST_CASE("enumeration budget") {
  Lattice z3 = zn(3);
  Coset c(z3, {Rat(0), Rat(0), Rat(0)});
  CHECK_THROWS_AS(enumerate_points(c, 50.0, 1000), BudgetExceeded);
}

TEST_CASE("enumeration tie rule includes exact boundary") {
  // radius exactly 2: the points (+-2, 0), (0, +-2) at exact norm 2 are in
  Lattice z2 = zn(2);
  auto pts = enumerate_points(Coset(z2, {Rat(0), Rat(0)}), 2.0);
  CHECK(pts.points.size() == 13);  // 9 with norm <= sqrt(2), plus 4 at norm exactly 2
}
