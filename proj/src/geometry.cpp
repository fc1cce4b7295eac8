#include "srheat/geometry.hpp"
#include "srheat/error.hpp"

#include <cmath>
#include <mutex>
#include <sstream>

namespace srheat {

Eigen::Vector3d VectorField::at(const Point &q) const {
  return {eval(cx, q), eval(cy, q), eval(cw, q)};
}

Expr VectorField::apply(const Expr &phi) const {
  Expr out;
  for (int j = 0; j < 3; ++j) {
    if ((*this)[j].is_constant(0.0)) continue;
    out = out + (*this)[j] * differentiate(phi, kAllVars[j]);
  }
  return out;
}

VectorField operator+(const VectorField &a, const VectorField &b) {
  return {a.cx + b.cx, a.cy + b.cy, a.cw + b.cw};
}
VectorField operator-(const VectorField &a, const VectorField &b) {
  return {a.cx - b.cx, a.cy - b.cy, a.cw - b.cw};
}
VectorField operator-(const VectorField &a) { return {-a.cx, -a.cy, -a.cw}; }
VectorField operator*(const Expr &s, const VectorField &a) {
  return {s * a.cx, s * a.cy, s * a.cw};
}
VectorField operator*(double s, const VectorField &a) { return Expr::constant(s) * a; }

VectorField lie_bracket(const VectorField &X, const VectorField &Y) {
  VectorField out;
  for (int k = 0; k < 3; ++k) out[k] = X.apply(Y[k]) - Y.apply(X[k]);
  return out;
}

VectorField dilate_field(const VectorField &X, double eps, int order) {
  if (!(eps > 0)) throw UsageError("dilation factor must be positive");
  const Expr ex = Expr::constant(eps);
  const std::array<Expr, 3> delta = {ex * Expr::variable(Var::x), ex * Expr::variable(Var::y),
                                     Expr::constant(eps * eps) * Expr::variable(Var::w)};
  const double s = std::pow(eps, order);
  return {Expr::constant(s / eps) * substitute(X.cx, delta),
          Expr::constant(s / eps) * substitute(X.cy, delta),
          Expr::constant(s / (eps * eps)) * substitute(X.cw, delta)};
}

VectorField epsilon_approximation(const VectorField &X, double eps) {
  return dilate_field(X, eps, 1);
}

VectorField nilpotent_approximation(const VectorField &X) {
  const Point origin = Point::Zero();
  const double wx = eval(differentiate(X.cw, Var::x), origin);
  const double wy = eval(differentiate(X.cw, Var::y), origin);
  return {Expr::constant(eval(X.cx, origin)), Expr::constant(eval(X.cy, origin)),
          wx * Expr::variable(Var::x) + wy * Expr::variable(Var::y)};
}

// ---------------------------------------------------------------------------

namespace {

Expr det3(const VectorField &a, const VectorField &b, const VectorField &c) {
  return a.cx * (b.cy * c.cw - b.cw * c.cy) - a.cy * (b.cx * c.cw - b.cw * c.cx) +
         a.cw * (b.cx * c.cy - b.cy * c.cx);
}

VectorField partial(const VectorField &X, Var v) {
  return {differentiate(X.cx, v), differentiate(X.cy, v), differentiate(X.cw, v)};
}

double condition_1(const Eigen::Matrix3d &M) {
  const double det = M.determinant();
  if (det == 0.0 || !std::isfinite(det)) return std::numeric_limits<double>::infinity();
  const Eigen::Matrix3d inv = M.inverse();
  const double c = M.cwiseAbs().colwise().sum().maxCoeff() *
                   inv.cwiseAbs().colwise().sum().maxCoeff();
  return std::isfinite(c) ? c : std::numeric_limits<double>::infinity();
}

[[noreturn]] void throw_degenerate(const Point &q, double cond) {
  std::ostringstream os;
  os << "frame is not contact at (" << q.x() << ", " << q.y() << ", " << q.z()
     << "): condition number " << cond;
  throw DegenerateFrameError(os.str(), cond);
}

} // namespace

struct Frame::Derived {
  VectorField v;  // [f2, f1]
  VectorField f0;
  Expr c12_1, c12_2;

  CompiledField f1, f2, f0c, vc, b01, b02, drift;
  // d_A[j][col]: ∂_j of the columns (f1, f2, f0); d_v[j]: ∂_j of [f2, f1].
  std::array<std::array<CompiledField, 3>, 3> d_A;
  std::array<CompiledField, 3> d_v;
  // f1, f2, v and the drift in one program, for the path simulator
  CompiledExpr horizontal;
};

struct Frame::Cache {
  std::once_flag once;
  std::unique_ptr<Derived> derived;
};

Frame::Frame(VectorField f1, VectorField f2)
    : f1_(std::move(f1)), f2_(std::move(f2)), cache_(std::make_shared<Cache>()) {}

const Frame::Derived &Frame::derived() const {
  std::call_once(cache_->once, [this] {
    auto d = std::make_unique<Derived>();
    d->v = lie_bracket(f2_, f1_);
    const Expr D = det3(f1_, f2_, d->v);
    const Expr alpha = det3(f1_, f2_, lie_bracket(d->v, f2_)) / D;
    const Expr beta = -det3(f1_, f2_, lie_bracket(d->v, f1_)) / D;
    d->f0 = d->v + alpha * f1_ + beta * f2_;
    d->c12_1 = -alpha;
    d->c12_2 = -beta;

    d->f1 = CompiledField(f1_);
    d->f2 = CompiledField(f2_);
    d->f0c = CompiledField(d->f0);
    d->vc = CompiledField(d->v);
    d->b01 = CompiledField(lie_bracket(f1_, d->f0));
    d->b02 = CompiledField(lie_bracket(f2_, d->f0));
    d->drift = CompiledField(d->c12_2 * f1_ - d->c12_1 * f2_);
    for (int j = 0; j < 3; ++j) {
      const Var var = kAllVars[j];
      d->d_A[j][0] = CompiledField(partial(f1_, var));
      d->d_A[j][1] = CompiledField(partial(f2_, var));
      d->d_A[j][2] = CompiledField(partial(d->f0, var));
      d->d_v[j] = CompiledField(partial(d->v, var));
    }
    const VectorField drift = d->c12_2 * f1_ - d->c12_1 * f2_;
    d->horizontal = CompiledExpr(std::vector<Expr>{
        f1_.cx, f1_.cy, f1_.cw, f2_.cx, f2_.cy, f2_.cw, d->v.cx, d->v.cy, d->v.cw, drift.cx,
        drift.cy, drift.cw});
    cache_->derived = std::move(d);
  });
  return *cache_->derived;
}

const VectorField &Frame::reeb() const { return derived().f0; }
const Expr &Frame::c12_1() const { return derived().c12_1; }
const Expr &Frame::c12_2() const { return derived().c12_2; }

double Frame::condition(const Point &q) const {
  const Derived &d = derived();
  Eigen::Matrix3d M;
  M.col(0) = d.f1(q);
  M.col(1) = d.f2(q);
  M.col(2) = -d.vc(q);
  return condition_1(M);
}

void Frame::check_contact(const Point &q) const {
  const double c = condition(q);
  if (!(c <= kMaxFrameCondition)) throw_degenerate(q, c);
}

void Frame::horizontal_at(const Point &q, Eigen::Vector3d &f1, Eigen::Vector3d &f2,
                          Eigen::Vector3d &drift) const {
  double out[12];
  derived().horizontal.evaluate(q, out);
  f1 = {out[0], out[1], out[2]};
  f2 = {out[3], out[4], out[5]};
  Eigen::Matrix3d M;
  M << f1, f2, Eigen::Vector3d(out[6], out[7], out[8]);
  const double c = condition_1(M);
  if (!(c <= kMaxFrameCondition)) throw_degenerate(q, c);
  drift = {out[9], out[10], out[11]};
}

Frame heisenberg_frame() {
  const Expr x = Expr::variable(Var::x), y = Expr::variable(Var::y);
  return Frame({Expr::constant(1), Expr(), -0.5 * y}, {Expr(), Expr::constant(1), 0.5 * x});
}

Frame scale_frame(const Frame &F, double lambda) {
  return Frame(lambda * F.f1(), lambda * F.f2());
}

Frame rotate_frame(const Frame &F, const Expr &theta) {
  const Expr c = cos(theta), s = sin(theta);
  return Frame(c * F.f1() + s * F.f2(), -s * F.f1() + c * F.f2());
}

Frame epsilon_approximation(const Frame &F, double eps) {
  return Frame(epsilon_approximation(F.f1(), eps), epsilon_approximation(F.f2(), eps));
}

Frame nilpotent_approximation(const Frame &F) {
  return Frame(nilpotent_approximation(F.f1()), nilpotent_approximation(F.f2()));
}

// ---------------------------------------------------------------------------

namespace {

Eigen::Matrix3d basis_at(const Frame::Derived &d, const Point &q) {
  Eigen::Matrix3d A;
  A << d.f1(q), d.f2(q), d.f0c(q);
  return A;
}

} // namespace

StructureConstants structure_constants(const Frame &F, const Point &q) {
  F.check_contact(q);
  const Frame::Derived &d = F.derived();
  const Eigen::Matrix3d A = basis_at(d, q);
  const Eigen::PartialPivLU<Eigen::Matrix3d> lu(A);

  const Eigen::Vector3d c01 = lu.solve(d.b01(q));
  const Eigen::Vector3d c02 = lu.solve(d.b02(q));
  const Eigen::Vector3d c12 = lu.solve(d.vc(q));

  // A c = b  =>  ∂_j c = A⁻¹ (∂_j b − (∂_j A) c)
  Eigen::Matrix3d grad; // column j: ∂_j c12
  for (int j = 0; j < 3; ++j) {
    Eigen::Matrix3d dA;
    dA << d.d_A[j][0](q), d.d_A[j][1](q), d.d_A[j][2](q);
    grad.col(j) = lu.solve(d.d_v[j](q) - dA * c12);
  }
  const Eigen::Vector3d f1 = A.col(0), f2 = A.col(1);

  StructureConstants c;
  c.c01_1 = c01[0];
  c.c01_2 = c01[1];
  c.c02_1 = c02[0];
  c.c02_2 = c02[1];
  c.c12_1 = c12[0];
  c.c12_2 = c12[1];
  c.d_c12_1_along_f2 = grad.row(0).dot(f2);
  c.d_c12_2_along_f1 = grad.row(1).dot(f1);
  return c;
}

double chi(const StructureConstants &c) {
  const double off = 0.5 * (c.c01_2 + c.c02_1);
  const double m = -(c.c01_1 * c.c02_2 - off * off);
  if (m > 0) return std::sqrt(m);
  if (m == 0) return 0.0; // also turns −0 into +0
  // -det C = c¹₀₁² + off² for an exactly consistent frame (c²₀₂ = −c¹₀₁), so a
  // negative value can only come from rounding; scale the tolerance accordingly.
  const double scale = std::max({1.0, c.c01_1 * c.c01_1, c.c02_2 * c.c02_2, off * off});
  if (m < -1e-9 * scale) {
    std::ostringstream os;
    os << "-det C = " << m << " is negative: structure constants are inconsistent";
    throw InconsistentFrameError(os.str());
  }
  return 0.0;
}

double chi(const Frame &F, const Point &q) { return chi(structure_constants(F, q)); }

double kappa(const StructureConstants &c) {
  return c.d_c12_1_along_f2 - c.d_c12_2_along_f1 - c.c12_1 * c.c12_1 - c.c12_2 * c.c12_2 +
         0.5 * (c.c01_2 - c.c02_1);
}

double kappa(const Frame &F, const Point &q) { return kappa(structure_constants(F, q)); }

Invariants invariants(const Frame &F, const Point &q) {
  const StructureConstants c = structure_constants(F, q);
  return {chi(c), kappa(c)};
}

Expr sublaplacian(const Frame &F, const Expr &phi) {
  const Expr d1 = F.f1().apply(phi);
  const Expr d2 = F.f2().apply(phi);
  return F.f1().apply(d1) + F.f2().apply(d2) + F.c12_2() * d1 - F.c12_1() * d2;
}

double sublaplacian_apply(const Frame &F, const Expr &phi, const Point &q) {
  F.check_contact(q);
  return eval(sublaplacian(F, phi), q);
}

double sublaplacian_apply(const Frame &F, const Jet &phi, const Point &q) {
  F.check_contact(q);
  const Frame::Derived &d = F.derived();
  const Eigen::Vector3d f[2] = {d.f1(q), d.f2(q)};
  double out = d.drift(q).dot(phi.gradient);
  for (int i = 0; i < 2; ++i) {
    // f_i(f_i φ) = f_iᵀ H f_i + (J_i f_i)·∇φ, J_i the Jacobian of f_i
    Eigen::Vector3d Jf = Eigen::Vector3d::Zero();
    for (int j = 0; j < 3; ++j) Jf += f[i][j] * d.d_A[j][i](q);
    out += f[i].dot(phi.hessian * f[i]) + Jf.dot(phi.gradient);
  }
  return out;
}

double divergence(const Frame &F, const VectorField &X, const Point &q) {
  F.check_contact(q);
  const Frame::Derived &d = F.derived();
  const Eigen::PartialPivLU<Eigen::Matrix3d> lu(basis_at(d, q));
  const VectorField *basis[3] = {&F.f1(), &F.f2(), &d.f0};
  double out = 0;
  for (int i = 0; i < 3; ++i) out += lu.solve(lie_bracket(*basis[i], X).at(q))[i];
  return out;
}

VectorField horizontal_gradient(const Frame &F, const Expr &phi) {
  return F.f1().apply(phi) * F.f1() + F.f2().apply(phi) * F.f2();
}

} // namespace srheat
