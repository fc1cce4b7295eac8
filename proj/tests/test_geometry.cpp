#include "frames.hpp"
#include "random_expr.hpp"
#include "srheat/error.hpp"
#include "srheat/geometry.hpp"

#include <doctest.h>

#include <cmath>

using namespace srheat;
using srheat::testing::generic_frame;
using srheat::testing::quadratic_frame;

namespace {

Eigen::Vector3d at(const VectorField &X, const Point &q) { return X.at(q); }

// ω(X) = det[f1, f2, X] / det[f1, f2, [f2, f1]] evaluated numerically.
double omega(const Frame &F, const VectorField &X, const Point &q) {
  Eigen::Matrix3d num, den;
  num << at(F.f1(), q), at(F.f2(), q), at(X, q);
  den << at(F.f1(), q), at(F.f2(), q), at(lie_bracket(F.f2(), F.f1()), q);
  return num.determinant() / den.determinant();
}

// Closed forms for the quadratic normal form, γ = ax² + bxy + cy².
struct QuadraticOracle {
  double a, b, c;
  double g(const Point &p) const { return a * p.x() * p.x() + b * p.x() * p.y() + c * p.y() * p.y(); }
  double gx(const Point &p) const { return 2 * a * p.x() + b * p.y(); }
  double gy(const Point &p) const { return b * p.x() + 2 * c * p.y(); }
  Eigen::Vector3d reeb(const Point &p) const {
    const double G = g(p), k = 1 + 2 * G;
    return {-2 * gy(p) / k, 2 * gx(p) / k, 2 * G * (1 + G) / k - k};
  }
  double c12_1(const Point &p) const { return 2 * gy(p) / (1 + 2 * g(p)); }
  double c12_2(const Point &p) const { return -2 * gx(p) / (1 + 2 * g(p)); }
  // c_{0i}^j = −2/(1+2γ)² · c̃_{0i}^j
  std::array<double, 4> c0(const Point &p) const {
    const double k = 1 + 2 * g(p), s = -2 / (k * k);
    const double X = gx(p), Y = gy(p);
    return {s * (k * b - 2 * Y * X), s * (-k * 2 * a + 2 * X * X), s * (k * 2 * c - 2 * Y * Y),
            s * (-k * b + 2 * Y * X)};
  }
};

} // namespace

TEST_CASE("lie bracket") {
  const Frame H = heisenberg_frame();
  const VectorField b = lie_bracket(H.f1(), H.f2());
  CHECK(b.cx.is_constant(0.0));
  CHECK(b.cy.is_constant(0.0));
  CHECK(b.cw.is_constant(1.0));

  const VectorField X{parse("x*y"), parse("sin(w)"), parse("y^2")};
  const VectorField XX = lie_bracket(X, X);
  CHECK(XX.at(Point(0.3, 1.2, -0.7)).norm() == 0.0);

  const VectorField xdy{parse("0"), parse("x"), parse("0")};
  const VectorField ydx{parse("y"), parse("0"), parse("0")};
  const VectorField r = lie_bracket(xdy, ydx);
  const Point q(0.3, -0.8, 2.0);
  CHECK((r.at(q) - Eigen::Vector3d(0.3, 0.8, 0)).norm() < 1e-15);
}

TEST_CASE("reeb field") {
  const Frame H = heisenberg_frame();
  // [f̂2, f̂1] = −∂w; the Reeb field is ∂w up to the orientation sign.
  const Eigen::Vector3d f0 = H.reeb().at(Point(0.4, 1.0, -2.0));
  CHECK(std::abs(std::abs(f0.z()) - 1.0) < 1e-15);
  CHECK(f0.head<2>().norm() == 0.0);

  SUBCASE("quadratic model against the closed-form kernel of dω") {
    const QuadraticOracle o{1.0, -0.7, 0.4};
    const Frame F = quadratic_frame(o.a, o.b, o.c);
    CHECK((F.reeb().at(Point::Zero()) - Eigen::Vector3d(0, 0, -1)).norm() < 1e-15);
    testing::RandomExpr gen(11);
    for (int i = 0; i < 50; ++i) {
      const Point q = gen.point(0.5);
      CHECK((F.reeb().at(q) - o.reeb(q)).norm() < 1e-12);
    }
  }

  SUBCASE("γ = x² at the origin") {
    const Frame F = quadratic_frame(1, 0, 0);
    CHECK((F.reeb().at(Point::Zero()) - Eigen::Vector3d(0, 0, -1)).norm() < 1e-15);
  }

  SUBCASE("defining identities on a generic frame") {
    const Frame F = generic_frame();
    testing::RandomExpr gen(12);
    for (int i = 0; i < 30; ++i) {
      const Point q = gen.point(0.4);
      CHECK(omega(F, F.reeb(), q) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::abs(omega(F, lie_bracket(F.reeb(), F.f1()), q)) < 1e-10);
      CHECK(std::abs(omega(F, lie_bracket(F.reeb(), F.f2()), q)) < 1e-10);
    }
  }
}

TEST_CASE("structure constants") {
  SUBCASE("heisenberg: all zero") {
    const Frame H = heisenberg_frame();
    for (const Point &q : {Point(0, 0, 0), Point(1, -2, 3), Point(-0.5, 0.25, 7)}) {
      const StructureConstants c = structure_constants(H, q);
      for (double v : {c.c01_1, c.c01_2, c.c02_1, c.c02_2, c.c12_1, c.c12_2,
                       c.d_c12_1_along_f2, c.d_c12_2_along_f1})
        CHECK(v == 0.0);
    }
  }

  SUBCASE("quadratic model against the closed forms") {
    const QuadraticOracle o{0.8, 1.3, -0.6};
    const Frame F = quadratic_frame(o.a, o.b, o.c);
    testing::RandomExpr gen(21);
    for (int i = 0; i < 50; ++i) {
      const Point q = i == 0 ? Point::Zero() : gen.point(0.5);
      const StructureConstants c = structure_constants(F, q);
      const auto c0 = o.c0(q);
      CHECK(c.c12_1 == doctest::Approx(o.c12_1(q)).epsilon(1e-12).scale(1));
      CHECK(c.c12_2 == doctest::Approx(o.c12_2(q)).epsilon(1e-12).scale(1));
      CHECK(c.c01_1 == doctest::Approx(c0[0]).epsilon(1e-11).scale(1));
      CHECK(c.c01_2 == doctest::Approx(c0[1]).epsilon(1e-11).scale(1));
      CHECK(c.c02_1 == doctest::Approx(c0[2]).epsilon(1e-11).scale(1));
      CHECK(c.c02_2 == doctest::Approx(c0[3]).epsilon(1e-11).scale(1));
    }
    const StructureConstants c = structure_constants(F, Point::Zero());
    CHECK(c.c12_1 == 0.0);
    CHECK(c.c12_2 == 0.0);
    // f2(2γ_y/(1+2γ)) = 2γ_yy = 4c and f1(−2γ_x/(1+2γ)) = −2γ_xx = −4a at 0
    CHECK(c.d_c12_1_along_f2 == doctest::Approx(4 * o.c));
    CHECK(c.d_c12_2_along_f1 == doctest::Approx(-4 * o.a));
  }

  SUBCASE("implicit derivatives match the symbolic route and finite differences") {
    const Frame F = generic_frame();
    const Expr d1 = F.f2().apply(F.c12_1());
    const Expr d2 = F.f1().apply(F.c12_2());
    testing::RandomExpr gen(22);
    for (int i = 0; i < 30; ++i) {
      const Point q = gen.point(0.4);
      const StructureConstants c = structure_constants(F, q);
      CHECK(c.d_c12_1_along_f2 == doctest::Approx(eval(d1, q)).epsilon(1e-10).scale(1));
      CHECK(c.d_c12_2_along_f1 == doctest::Approx(eval(d2, q)).epsilon(1e-10).scale(1));
      // finite difference of the numeric solve along the flow direction
      const double h = 1e-5;
      const Eigen::Vector3d f2 = F.f2().at(q);
      const double fd = (structure_constants(F, q + h * f2).c12_1 -
                         structure_constants(F, q - h * f2).c12_1) / (2 * h);
      CHECK(c.d_c12_1_along_f2 == doctest::Approx(fd).epsilon(1e-6).scale(1));
    }
  }

  SUBCASE("reconstruction of [f2,f1]") {
    const Frame F = generic_frame();
    testing::RandomExpr gen(23);
    for (int i = 0; i < 30; ++i) {
      const Point q = gen.point(0.4);
      const StructureConstants c = structure_constants(F, q);
      const Eigen::Vector3d r = lie_bracket(F.f2(), F.f1()).at(q) - c.c12_1 * F.f1().at(q) -
                                c.c12_2 * F.f2().at(q) - F.reeb().at(q);
      CHECK(r.norm() < 1e-9);
    }
  }

  SUBCASE("rotation by a non-constant angle follows the transformation rule") {
    const Frame F = quadratic_frame(0.5, 1.0, -0.3);
    const Expr theta = parse("0.3*x + 0.7*y - 0.2*w");
    const Frame R = rotate_frame(F, theta);
    testing::RandomExpr gen(24);
    for (int i = 0; i < 20; ++i) {
      const Point q = gen.point(0.5);
      const StructureConstants c = structure_constants(F, q);
      const StructureConstants r = structure_constants(R, q);
      const double th = eval(theta, q);
      // [f̃1, f̃2] = [f1, f2] − f1(θ) f1 − f2(θ) f2, re-expressed in the rotated frame
      const double u1 = c.c12_1 + eval(F.f1().apply(theta), q);
      const double u2 = c.c12_2 + eval(F.f2().apply(theta), q);
      const double e1 = std::cos(th) * u1 + std::sin(th) * u2;
      const double e2 = -std::sin(th) * u1 + std::cos(th) * u2;
      CHECK(r.c12_1 == doctest::Approx(e1).epsilon(1e-11).scale(1));
      CHECK(r.c12_2 == doctest::Approx(e2).epsilon(1e-11).scale(1));
    }
  }

  SUBCASE("degenerate frames are rejected") {
    const Frame flat({parse("1"), parse("0"), parse("0")}, {parse("0"), parse("1"), parse("0")});
    CHECK_THROWS_AS(structure_constants(flat, Point::Zero()), DegenerateFrameError);
    // contact except on the plane x = 0
    const Frame fold({parse("1"), parse("0"), parse("0")}, {parse("0"), parse("1"), parse("x^2/2")});
    CHECK_THROWS_AS(chi(fold, Point(0, 0.3, 0.1)), DegenerateFrameError);
    CHECK_NOTHROW(chi(fold, Point(1, 0.3, 0.1)));
    try {
      fold.check_contact(Point(0, 0, 0));
    } catch (const DegenerateFrameError &e) {
      CHECK(std::isinf(e.condition_number()));
    }
  }
}

TEST_CASE("invariants") {
  const Frame H = heisenberg_frame();
  CHECK(chi(H, Point(1, 2, 3)) == 0.0);
  CHECK(kappa(H, Point(1, 2, 3)) == 0.0);

  SUBCASE("chi of the quadratic model") {
    for (auto [a, b, c] : {std::array<double, 3>{1, 0, 1}, {1, 2, 3}, {0, 5, 0}, {-1, 1, 2}}) {
      const double expected = 2 * std::sqrt(b * b + (c - a) * (c - a));
      CHECK(chi(quadratic_frame(a, b, c), Point::Zero()) == doctest::Approx(expected).epsilon(1e-12));
    }
    CHECK(chi(quadratic_frame(1, 2, 3), Point::Zero()) == doctest::Approx(4 * std::sqrt(2.0)));
  }

  SUBCASE("kappa of the quadratic model against its defining formula") {
    // Evaluate the definition of κ on the closed-form structure constants,
    // differentiating c¹₁₂, c²₁₂ symbolically in the test.
    for (auto [a, b, c] : {std::array<double, 3>{1, 0, 1}, {1, 2, 3}, {0, 5, 0}, {-1, 1, 2}}) {
      const std::string g = srheat::testing::gamma_text(a, b, c);
      const Expr c1 = parse("2*(" + std::to_string(b) + "*x + 2*" + std::to_string(c) +
                            "*y)/(1 + 2*" + g + ")");
      const Expr c2 = parse("-2*(2*" + std::to_string(a) + "*x + " + std::to_string(b) +
                            "*y)/(1 + 2*" + g + ")");
      const Frame F = quadratic_frame(a, b, c);
      const QuadraticOracle o{a, b, c};
      for (const Point &q : {Point(0, 0, 0), Point(0.2, -0.1, 0.3)}) {
        const auto c0 = o.c0(q);
        const double expected = eval(F.f2().apply(c1), q) - eval(F.f1().apply(c2), q) -
                                std::pow(eval(c1, q), 2) - std::pow(eval(c2, q), 2) +
                                0.5 * (c0[1] - c0[2]);
        CHECK(kappa(F, q) == doctest::Approx(expected).epsilon(1e-10).scale(1));
      }
      // at the origin the definition evaluates to 4(a+c) + 2(a+c)
      CHECK(kappa(F, Point::Zero()) == doctest::Approx(6 * (a + c)).epsilon(1e-12).scale(1));
    }
  }

  SUBCASE("chi is non-negative and both invariants are rotation invariant") {
    const Frame F = generic_frame();
    const Frame R = rotate_frame(F, parse("0.3*x + 0.7*y - 0.2*w"));
    testing::RandomExpr gen(31);
    for (int i = 0; i < 30; ++i) {
      const Point q = gen.point(0.4);
      const Invariants a = invariants(F, q), b = invariants(R, q);
      CHECK(a.chi >= 0);
      CHECK(std::abs(a.chi - b.chi) < 1e-8);
      CHECK(std::abs(a.kappa - b.kappa) < 1e-8);
    }
  }

  SUBCASE("chi clamps rounding noise and rejects inconsistent data") {
    StructureConstants c;
    c.c01_1 = 1e-7;
    c.c02_2 = 1e-7; // −det C = −1e-14
    CHECK(chi(c) == 0.0);
    c.c01_1 = c.c02_2 = 0.1;
    CHECK_THROWS_AS(chi(c), InconsistentFrameError);
  }
}

TEST_CASE("sub-Laplacian") {
  const Frame H = heisenberg_frame();
  CHECK(sublaplacian_apply(H, parse("x^2 + y^2"), Point(0.3, -2, 5)) == doctest::Approx(4.0));
  CHECK(sublaplacian_apply(generic_frame(), parse("7"), Point(0.1, 0.1, 0.1)) == 0.0);

  SUBCASE("rotation invariance on random test functions") {
    const Frame F = quadratic_frame(0.7, -0.4, 1.1);
    const Frame R = rotate_frame(F, parse("0.3*x + 0.7*y - 0.2*w"));
    testing::RandomExpr gen(41);
    int done = 0;
    while (done < 100) {
      const Expr phi = gen(3);
      const Point q = gen.point(0.5);
      double a, b;
      try {
        a = sublaplacian_apply(F, phi, q);
        b = sublaplacian_apply(R, phi, q);
      } catch (const DomainError &) {
        continue;
      }
      ++done;
      CHECK(std::abs(a - b) < 1e-8 * std::max(1.0, std::abs(a)));
    }
  }

  SUBCASE("homogeneity of degree two") {
    const Frame F = generic_frame();
    const Expr phi = parse("sin(x)*y + w^2*cos(y) + x*w");
    const Point q(0.2, -0.3, 0.1);
    const double base = sublaplacian_apply(F, phi, q);
    for (double lambda : {0.5, 2.0, 3.0}) {
      const double scaled = sublaplacian_apply(scale_frame(F, lambda), phi, q);
      CHECK(std::abs(scaled - lambda * lambda * base) < 1e-10 * std::max(1.0, std::abs(base)));
    }
  }

  SUBCASE("jet form agrees with the symbolic form") {
    const Frame F = generic_frame();
    const Expr phi = parse("exp(x - y)*cos(w) + x^3*y");
    testing::RandomExpr gen(42);
    for (int i = 0; i < 10; ++i) {
      const Point q = gen.point(0.4);
      Jet j;
      j.value = eval(phi, q);
      for (int a = 0; a < 3; ++a) {
        const Expr da = differentiate(phi, kAllVars[a]);
        j.gradient[a] = eval(da, q);
        for (int b = 0; b < 3; ++b) j.hessian(a, b) = eval(differentiate(da, kAllVars[b]), q);
      }
      CHECK(sublaplacian_apply(F, j, q) ==
            doctest::Approx(sublaplacian_apply(F, phi, q)).epsilon(1e-12));
    }
  }
}

TEST_CASE("divergence") {
  const Frame H = heisenberg_frame();
  CHECK(divergence(H, H.f1(), Point(1, 2, 3)) == 0.0);
  CHECK(divergence(H, H.f2(), Point(1, 2, 3)) == 0.0);

  const Frame F = generic_frame();
  const Expr a = parse("1 + x*sin(y) + w^2");
  const VectorField X{parse("y"), parse("x*w"), parse("cos(x)")};
  testing::RandomExpr gen(51);
  for (int i = 0; i < 20; ++i) {
    const Point q = gen.point(0.4);
    const StructureConstants c = structure_constants(F, q);
    CHECK(divergence(F, F.f1(), q) == doctest::Approx(c.c12_2).epsilon(1e-11).scale(1));
    CHECK(divergence(F, F.f2(), q) == doctest::Approx(-c.c12_1).epsilon(1e-11).scale(1));
    const double lhs = divergence(F, a * X, q);
    const double rhs = eval(X.apply(a), q) + eval(a, q) * divergence(F, X, q);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11).scale(1));
  }

  // Δφ = div ∇φ
  const Expr phi = parse("x*y^2 + sin(w)");
  const Point q(0.1, 0.2, -0.3);
  CHECK(divergence(F, horizontal_gradient(F, phi), q) ==
        doctest::Approx(sublaplacian_apply(F, phi, q)).epsilon(1e-11));
}

TEST_CASE("horizontal gradient") {
  const Frame H = heisenberg_frame();
  const VectorField g0 = horizontal_gradient(H, parse("5"));
  for (int k = 0; k < 3; ++k) CHECK(g0[k].is_constant(0.0));
  const VectorField gx = horizontal_gradient(H, parse("x"));
  const Point q(0.7, -1.1, 2);
  CHECK((gx.at(q) - H.f1().at(q)).norm() < 1e-15);

  const Frame F = generic_frame();
  const Expr phi = parse("x*w + cos(y)");
  testing::RandomExpr gen(61);
  for (int i = 0; i < 20; ++i) {
    const Point p = gen.point(0.4);
    Eigen::Matrix<double, 3, 2> B;
    B << F.f1().at(p), F.f2().at(p);
    const Eigen::Vector2d coords = B.colPivHouseholderQr().solve(horizontal_gradient(F, phi).at(p));
    CHECK(coords[0] == doctest::Approx(eval(F.f1().apply(phi), p)).epsilon(1e-12).scale(1));
  }
}

TEST_CASE("frame rotation") {
  const Frame F = generic_frame();
  const Point q(0.1, 0.2, 0.3);
  const Frame R0 = rotate_frame(F, parse("0"));
  CHECK((R0.f1().at(q) - F.f1().at(q)).norm() == 0.0);
  CHECK((R0.f2().at(q) - F.f2().at(q)).norm() == 0.0);
  const Frame R90 = rotate_frame(F, parse("pi/2"));
  CHECK((R90.f1().at(q) - F.f2().at(q)).norm() < 1e-15);
  CHECK((R90.f2().at(q) + F.f1().at(q)).norm() < 1e-15);
}

TEST_CASE("epsilon approximation") {
  const Frame H = heisenberg_frame();
  const Point q(0.3, -0.6, 0.9);
  for (double eps : {1.0, 0.5, 0.01}) {
    const Frame He = epsilon_approximation(H, eps);
    CHECK((He.f1().at(q) - H.f1().at(q)).norm() < 1e-15);
    CHECK((He.f2().at(q) - H.f2().at(q)).norm() < 1e-15);
  }

  const Frame F = quadratic_frame(1, 0.5, -0.5);
  // sup over the unit box of |f1^ε − f̂1| decays like ε²
  std::vector<double> sup;
  for (double eps : {0.1, 0.05, 0.025}) {
    const VectorField d = epsilon_approximation(F.f1(), eps) - H.f1();
    double m = 0;
    for (double x = -1; x <= 1; x += 0.25)
      for (double y = -1; y <= 1; y += 0.25)
        for (double w = -1; w <= 1; w += 0.5) m = std::max(m, d.at(Point(x, y, w)).norm());
    sup.push_back(m);
  }
  CHECK(std::log2(sup[0] / sup[1]) == doctest::Approx(2.0).epsilon(0.01));
  CHECK(std::log2(sup[1] / sup[2]) == doctest::Approx(2.0).epsilon(0.01));

  // brackets transform as [f1^ε, f2^ε] = ε² δ_{1/ε*}[f1, f2]
  const Frame G = generic_frame();
  for (double eps : {0.5, 0.1}) {
    const VectorField lhs =
        lie_bracket(epsilon_approximation(G.f1(), eps), epsilon_approximation(G.f2(), eps));
    const VectorField rhs = dilate_field(lie_bracket(G.f1(), G.f2()), eps, 2);
    testing::RandomExpr gen(71);
    for (int i = 0; i < 20; ++i) {
      const Point p = gen.point(1.0);
      CHECK((lhs.at(p) - rhs.at(p)).norm() < 1e-10 * std::max(1.0, rhs.at(p).norm()));
    }
  }
}

TEST_CASE("nilpotent approximation") {
  const Frame H = heisenberg_frame();
  const Frame F = quadratic_frame(1, 2, 3);
  const Point q(0.4, -0.2, 1.5);
  const Frame N = nilpotent_approximation(F);
  CHECK((N.f1().at(q) - H.f1().at(q)).norm() < 1e-15);
  CHECK((N.f2().at(q) - H.f2().at(q)).norm() < 1e-15);
  const Frame NN = nilpotent_approximation(N);
  CHECK((NN.f1().at(q) - N.f1().at(q)).norm() == 0.0);

  const VectorField heavy{parse("x"), parse("y*x + w"), parse("x^2 + w")};
  const VectorField z = nilpotent_approximation(heavy);
  for (int k = 0; k < 3; ++k) CHECK(z[k].is_constant(0.0));

  // non-polynomial coefficients are Taylor-expanded at the origin
  const VectorField t{parse("cos(x)"), parse("sin(y)"), parse("-sin(y)/2 + x*w")};
  const VectorField tn = nilpotent_approximation(t);
  CHECK((tn.at(q) - Eigen::Vector3d(1, 0, 0.1)).norm() < 1e-15);
}
