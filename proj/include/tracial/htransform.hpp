#pragma once

#include <complex>

#include "tracial/function_spec.hpp"
#include "tracial/pencil.hpp"

namespace tracial::htransform {

using Complex = std::complex<double>;

/// H(f)(x) = ∫₀¹ (1 - t)/t f(xt) dt. Closed forms:
///   |t|^p       -> |x|^p / (p(p+1))
///   t_+^(k-1)   -> x_+^(k-1) / (k(k-1))
///   e^(ct) - 1  -> Ein(cx) - (e^(cx) - 1)/(cx) + 1,   Ein(z) = ∫₀^z (e^s - 1)/s ds
/// Tables go through quadrature. Throws NonIntegrable for an uncertified f.
double h_apply(const FunctionSpec& f, double x);

/// The quadrature route for every kind; used to cross-check the closed forms.
double h_apply_quadrature(const FunctionSpec& f, double x);

/// g(x) = ∫₀¹ (e^(ixt) - 1)(1 - t)/t dt. Series for |x| <= 1, quadrature beyond.
Complex g_eval(double x);

/// tr g(xA + yB).
Complex big_g(const pencil::HermitianPair& pair, double x, double y);

/// ∫_{|t|<M} log|1 - λ/t| dt in closed form; the arctan terms vanish when Im λ = 0.
double i1_closed(Complex lambda, double m);
/// The same integral by graded Gauss-Legendre quadrature.
double i1_quadrature(Complex lambda, double m);
/// i1_closed - π|Im λ|.
double e1(Complex lambda, double m);

/// ∫_{|t|<M} log|1 - t/λ| dt/t = sign(λ) J(M/|λ|) with J evaluated by
/// quadrature. Throws ZeroLambda for λ = 0.
double i2_closed(double lambda, double m);
/// i2_closed + (π²/2) sign λ.
double e2(double lambda, double m);

}  // namespace tracial::htransform
