#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sqg/besov.hpp"
#include "sqg/littlewood_paley.hpp"

namespace sqg {

/// How the p/2 power of a block is formed before Lambda^a is applied.
///   Signed:  |g|^{p/2-1} g   (p = 2 gives g itself)
///   Modulus: |g|^{p/2}
/// On the torus Lambda^a discards the zero mode, which for the modulus form is
/// the bulk of |g|^{p/2}; the signed form is the one whose p = 2 case reduces to
/// Plancherel. At a = 1 both forms have the same gradient norm.
enum class PowerForm { Signed, Modulus };

PowerForm parse_power_form(const std::string& name);
std::string to_string(PowerForm form);

/// Pointwise power of g in the given form (computed in physical space, so the
/// result is not band-limited).
RealField power_field(const RealField& g, double p, PowerForm form);

/// lower = upper = the shared scale 2^{2aj/p} ||Delta_j f||_p, middle = the
/// fractional-derivative quantity. All zero when Delta_j f = 0.
struct Triple {
  double lower = 0.0;
  double middle = 0.0;
  double upper = 0.0;

  double ratio() const { return lower > 0.0 ? middle / lower : 0.0; }
};

/// With g = Delta_j theta:
///   A = p int Lambda^{2a} g |g|^{p-2} g dx
///   B = 2 ||Lambda^a (power of g)||_2^2
///   C = 2 c^p 2^{2aj} ||g||_p^p
/// where c is a lower Bernstein constant (min of BernsteinProbe ratios), so that
/// B >= C is the squared, p-th power form of the lower Bernstein bound.
struct DissipationChain {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

/// Power spectrum of a field collapsed onto lattice shells (|xi|^2, sum of |c|^2).
struct Shells {
  double area = 0.0;  ///< period^2
  std::vector<std::pair<double, double>> entries;

  /// ||Lambda^a f||_2^2; the zero mode counts only at a = 0.
  double weighted(double a) const;
};

/// Holds Delta_j f so that many (p, a) pairs can be probed without recomputing it.
class BernsteinProbe {
 public:
  BernsteinProbe(const RealField& f, int j, const DyadicFamily& fam);

  int j() const { return j_; }
  const RealField& block_field() const { return block_; }
  bool vanishes() const { return vanishes_; }

  /// middle = ||Lambda^a (power of Delta_j f)||_2^{2/p}.
  Triple bernstein(double p, double a, PowerForm form = PowerForm::Signed);
  /// middle = ||grad (power of Delta_j f)||_2^{2/p}, per component; requires p > 2.
  Triple gradient_form(double p, PowerForm form = PowerForm::Signed);
  /// The chain of dissipation_chain below, with f in the role of theta.
  DissipationChain dissipation(double p, double a, double c_bernstein, PowerForm form = PowerForm::Signed);

 private:
  struct Power {
    SpectralField spectrum;
    Shells shells;
  };
  const Power& power(double p, PowerForm form);
  double block_norm(double p);

  int j_;
  SpectralField spectrum_;
  RealField block_;
  bool vanishes_ = false;
  std::map<std::pair<double, int>, Power> powers_;
  std::map<double, RealField> weights_;  // |g|^{p-2} g, keyed by p
  std::map<double, RealField> lifted_;   // Lambda^{2a} g, keyed by a
  std::map<double, double> norms_;       // ||g||_p
};

/// Rejects p < 2 and a outside [0, 1].
Triple bernstein_triple(const RealField& f, int j, double p, double a, const DyadicFamily& fam,
                        PowerForm form = PowerForm::Signed);
/// Rejects p <= 2.
Triple prop31_triple(const RealField& f, int j, double p, const DyadicFamily& fam,
                     PowerForm form = PowerForm::Signed);

/// lhs = int |f|^{p-2} f Lambda^s f dx, rhs = (2/p) ||Lambda^{s/2} (power of f)||_2^2.
struct PositivityGap {
  double lhs = 0.0;
  double rhs = 0.0;

  double gap() const { return lhs - rhs; }
  double scale() const;
};

/// Requires s in [0, 2] and p >= 2.
PositivityGap positivity_gap(const RealField& f, double s, double p, PowerForm form = PowerForm::Signed);

DissipationChain dissipation_chain(const RealField& theta, int j, double p, double a, const DyadicFamily& fam,
                                   double c_bernstein, PowerForm form = PowerForm::Signed);

/// Exponents of the composition estimate for |z|^p.
struct CompositionParams {
  double p = 2.0;
  double s = 0.5;
  double ell = 2.0;
  double r = 4.0;
  double m = 4.0;

  /// Requires 1/ell = 1/r + (p-1)/m, 1 < ell <= r < inf, 1 < m < inf,
  /// 0 <= s < min(p, 2), p >= 1.
  void validate() const;
};

/// ||(|z|^p minus its mean)||_{Bdot^s_{ell,2}} / (||z||_{Bdot^0_{m,2}}^{p-1} ||z||_{Bdot^s_{r,2}}); 0/0 = 0.
double composition_ratio(const RealField& z, const CompositionParams& params, const DyadicFamily& fam);

struct VectorField {
  RealField first;
  RealField second;
};

/// Physical velocity R^perp theta.
VectorField velocity_field(const RealField& theta);

/// u . grad Delta_j v - Delta_j (u . grad v), with dealiased products.
/// Throws std::invalid_argument when u is not divergence-free.
RealField commutator(const VectorField& u, const RealField& v, int j, const DyadicFamily& fam,
                     DealiasRule rule = DealiasRule::TwoThirds);

/// Static form of the commutator bound at sigma = 2/p + 1 - 2 alpha:
///   || 2^{j sigma} ||[u, Delta_j].grad v||_p ||_{l^q}
///   / ( ||u||_{Bdot^{2/p+1-alpha}_{p,q}} ||v||_{Bdot^{2/p+1-alpha}_{p,q}} )
/// with u = R^perp theta and ||u|| the sum over components; 0/0 = 0.
double commutator_ratio(const RealField& theta, const RealField& v, double p, double q, double alpha,
                        const DyadicFamily& fam, DealiasRule rule = DealiasRule::TwoThirds);

/// ||uv||_{B^s_{p,q}} / (||u||_p ||v||_{B^{2/p+s}_{p,q}} + ||v||_p ||u||_{B^{2/p+s}_{p,q}}),
/// inhomogeneous norms, dealiased product; 0/0 = 0. Requires s > -2/p and p >= 2.
double product_ratio_A1(const RealField& u, const RealField& v, double s, double p, double q,
                        const DyadicFamily& fam, DealiasRule rule = DealiasRule::TwoThirds);

/// lhs / rhs with 0/0 = 0 and x/0 = inf.
double safe_ratio(double lhs, double rhs);

struct RatioSample {
  std::vector<double> params;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

/// Per-sample rows of one inequality plus the empirical constants. Samples with
/// lhs = rhs = 0 are kept in the table but excluded from c_emp / C_emp.
struct RatioReport {
  std::string name;
  std::vector<std::string> param_names;
  std::vector<RatioSample> samples;

  void add(std::vector<double> params, double lhs, double rhs);
  /// Smallest ratio over non-degenerate samples (0 if there are none).
  double c_emp() const;
  /// Largest ratio over non-degenerate samples (0 if there are none).
  double C_emp() const;
};

/// CSV: header "<param names...>,lhs,rhs,ratio", one row per sample, 17 significant digits.
void write_csv(std::ostream& os, const RatioReport& report);

}  // namespace sqg
