#ifndef HELMFCI_POLYSOLVE_SCHEME_HPP
#define HELMFCI_POLYSOLVE_SCHEME_HPP

#include <vector>
#include "helmfci/core/vector.hpp"
#include "helmfci/spectrum/box.hpp"

namespace helmfci
{

inline constexpr int kMaxPolyDegree = 30;

//
// Truncated exponential p(lambda) = sum_{j=0}^{q} (-i delta (lambda - z0))^j / j! and the
// residual polynomial R(lambda) = p(lambda) / p(z) of the fixed-point iteration.
//
struct PolyScheme
{
  int q = 1;
  double delta = 0.0;
  Complex z0;
  Complex z;
  double nu = 1.0;  // max of |R| over the sampled box boundary
  SpectralBox box;
  int predicted_mvs = -1;  // q * sweeps to reach the tuning target, -1 if nu >= 1

  double nu_per_matvec() const;
};

// Horner evaluation of the truncated exponential.
Complex taylor_exp(int q, double delta, Complex z0, Complex lambda);

// Throws ConfigurationError if p(z) vanishes or q is out of range.
Complex residual_poly_eval(const PolyScheme &scheme, Complex lambda);

// max over samples of |p(lambda) / p(z)|.
double scheme_rate(int q, double delta, Complex z0, Complex z, const std::vector<Complex> &samples);

// Taylor center (b1 + b2) / 2 + i Im(z).
Complex default_center(const SpectralBox &box, Complex z);

// q * ceil(ln(target) / ln(nu)); -1 if nu >= 1.
int predicted_matvecs(int q, double nu, double target);

struct TuneOptions
{
  int q_max = 5;
  double target = 1e-2;        // residual reduction used for predicted_mvs
  int boundary_samples = 1024;
  int scan_points = 400;       // coarse scan of |delta| over (0, 8 / width]
  double delta_step = 0.0;     // > 0 restricts delta to multiples of the step
};

// Best delta for a fixed q; nu may be >= 1 when no delta contracts. delta carries the sign
// that makes delta Im(lambda - z0) < 0 on the box: negative for shifts below it.
PolyScheme tune_fixed_q(const SpectralBox &box, Complex z, int q, const TuneOptions &options = {});

// One tuned scheme per q = 1..q_max.
std::vector<PolyScheme> tune_all(const SpectralBox &box, Complex z, const TuneOptions &options = {});

// Scheme with minimal nu^(1/q). Throws ConfigurationError if the shift lies in the
// strip -depth <= Im(z) <= 0 or if no q gives nu < 1.
PolyScheme tune_scheme(const SpectralBox &box, Complex z, const TuneOptions &options = {});

// Optimal stationary Richardson step for a rectangle.
struct RichardsonParam
{
  Complex p_star;
  double rate = 1.0;
  Complex alpha1, alpha2;
  bool fallback = false;  // closed form not applicable; p_star from direct minimization
};

// Closed form needs Im(z) outside [-depth, 0] and z inside the circumcircle of the box.
bool richardson_closed_form_applies(const SpectralBox &box, Complex z);
RichardsonParam richardson_optimal(const SpectralBox &box, Complex z);

// max over the four vertices of |1 - (lambda - z) p|.
double richardson_rate(const SpectralBox &box, Complex z, Complex p);

}  // namespace helmfci

#endif  // HELMFCI_POLYSOLVE_SCHEME_HPP
