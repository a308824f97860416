#pragma once

#include "tcmdp/density.hpp"
#include "tcmdp/empirical_measure.hpp"
#include "tcmdp/quadrature.hpp"

namespace tcmdp {

//! psi(c1, c2) = (sqrt(c2) - sqrt(c1)) / (sqrt(2) sqrt(c1 + c2)), psi(0, 0) = 0.
//! Throws DomainError on negative input.
double psi(double c1, double c2);

//! phi(x, y) = (sqrt(y) - sqrt(x)) / (2 sqrt(x + y)). Exposed for reference;
//! psi is the kernel used by t_functional.
double phi(double x, double y);

//! 1/2 int (sqrt f1 - sqrt f2)^2 d lambda_n.
double hellinger_sq(const Density& f1, const Density& f2, const EmpiricalMeasure& m);

//! The three pieces of T(f1, f2).
//!   a: (1/n) sum_i psi(f1, f2) at the observed 4-tuples
//!   b: int sqrt((f1 + f2) / 2) (sqrt f2 - sqrt f1) d lambda_n
//!   c: int (f1 - f2) d lambda_n
struct TComponents {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    //! a + (b + c) / 2, see t_functional.
    double total() const { return a + 0.5 * (b + c); }
};

TComponents t_components(const Density& f1, const Density& f2, const EmpiricalMeasure& m);

//! T(f1, f2) = a + (b + c) / 2. With the halved Hellinger loss this scaling
//! keeps the deterministic bound checked by check_mb_eb_bound exact.
double t_functional(const Density& f1, const Density& f2, const EmpiricalMeasure& m);

//! int (sqrt f1 - sqrt f2)^2 over [0,1]^4 under the product rule.
double l2_sqrt_distance_sq(const Density& f1, const Density& f2, const ProductQuadrature& q);

struct BoundCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

//! lhs = int psi(f1, f2)^2 s d lambda_n, rhs = 3 [H^2(s, f1) + H^2(s, f2)].
BoundCheck check_bernstein_var_bound(const Density& s, const Density& f1, const Density& f2,
                                     const EmpiricalMeasure& m, double slack = 1e-10);

//! lhs = (1 - 1/sqrt2) H^2(s, f2) + T(f1, f2),
//! rhs = (1 + 1/sqrt2) H^2(s, f1) + (1/n) sum_i Z_i, where Z_i centres
//! psi(f1, f2) at sample i by its conditional mean under true_s.
//! The bound is an algebraic identity plus Jensen when s and true_s agree.
BoundCheck check_mb_eb_bound(const Density& s, const Density& f1, const Density& f2,
                             const EmpiricalMeasure& m, const Density& true_s,
                             double slack = 1e-10);

} // namespace tcmdp
