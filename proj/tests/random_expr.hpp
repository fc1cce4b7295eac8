#pragma once

#include "srheat/expr.hpp"

#include <random>

namespace srheat::testing {

// Random expressions built from operations that stay finite on moderate
// boxes: no division by anything that can vanish, no sqrt/log of signed
// quantities.
class RandomExpr {
public:
  explicit RandomExpr(std::uint64_t seed) : rng_(seed) {}

  Expr operator()(int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 11);
    switch (pick(rng_)) {
    case 0: return Expr::constant(std::round(uniform(-3, 3) * 100) / 100);
    case 1: return Expr::variable(kAllVars[std::uniform_int_distribution<int>(0, 2)(rng_)]);
    case 2: return (*this)(depth - 1) + (*this)(depth - 1);
    case 3: return (*this)(depth - 1) - (*this)(depth - 1);
    case 4: return (*this)(depth - 1) * (*this)(depth - 1);
    case 5: return (*this)(depth - 1) / (1.5 + sin((*this)(depth - 1)));
    case 6: return pow((*this)(depth - 1), std::uniform_int_distribution<int>(2, 3)(rng_));
    case 7: return sin((*this)(depth - 1));
    case 8: return cos((*this)(depth - 1));
    case 9: return tanh((*this)(depth - 1));
    case 10: return -(*this)(depth - 1);
    default: return sqrt(1.0 + pow((*this)(depth - 1), 2));
    }
  }

  Point point(double r = 1.0) { return Point(uniform(-r, r), uniform(-r, r), uniform(-r, r)); }

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }

  std::mt19937_64 &engine() { return rng_; }

private:
  std::mt19937_64 rng_;
};

} // namespace srheat::testing
