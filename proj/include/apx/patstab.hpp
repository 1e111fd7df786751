#pragma once

#include "apx/numkit.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace apx {

enum class PdeModel { FisherKolmogorov, KuramotoSivashinsky, Nls };

struct Dispersion {
  PdeModel model = PdeModel::KuramotoSivashinsky;
  double mu = 1.0;
  double u0 = 0.0;  // FK base state
  double A = 1.0;   // NLS carrier amplitude
};

// FK: mu - k^2 - 3 u0^2; KS: k^2 - mu k^4; NLS: Re sqrt(mu k^2 A^2 - k^4 / 4)
double growth_rate(const Dispersion& d, double k);

struct Band {
  bool unstable = false;
  double k_max = 0.0;
  double k_lo = 0.0;
  double k_hi = 0.0;  // may be +inf when every wavenumber grows
};

Band kmax_band(const Dispersion& d);

enum class InstabilityType { TypeIs, TypeIIo, TypeIIIo, TypeIIIs };

InstabilityType classify_instability(double k0, double omega0);
const char* to_string(InstabilityType t);

struct SolitonParams {
  double eta = 1.0;
  double xi = 0.0;
  double x0 = 0.0;
  double phi0 = 0.0;
};

cplx soliton_value(const SolitonParams& p, double x);

enum class IcKind { NoisyUniform, CwPlusNoise, Soliton };

struct InitialCondition {
  IcKind kind = IcKind::NoisyUniform;
  double level = 0.0;      // uniform value or CW amplitude
  double noise = 1e-3;     // per-mode Fourier amplitude
  bool broadband = false;  // seed every bin instead of the unstable band only
  SolitonParams soliton;
};

struct SimConfig {
  PdeModel model = PdeModel::KuramotoSivashinsky;
  double mu = 1.0;
  double eps = 0.0;    // NLS perturbation strength
  double gamma = 0.0;  // NLS damping, F = -i gamma u
  double L = 16 * M_PI;
  int n = 256;
  double t_end = 10.0;
  double dt = 1e-3;
  double record_dt = 0.5;
  std::uint64_t seed = 12345;
  InitialCondition ic;
  bool keep_fields = false;
};

struct FieldState {
  double L;
  int n;
  CVec values;
  double t;
};

// Bin j holds wavenumber j 2 pi / L, j = 0..n/2; amplitude is the rms of the
// +k and -k Fourier coefficients.
struct SpectrumSeries {
  Vec k;
  std::vector<double> t;
  std::vector<Vec> amp;
};

struct SimResult {
  SpectrumSeries spectrum;
  std::vector<double> peak;  // max |u| at each record
  std::vector<double> mass;  // int |u|^2 dx at each record
  std::vector<FieldState> fields;
  FieldState final_state;
};

Vec domain_nodes(double L, int n);

CVec initial_field(const SimConfig& cfg);

SimResult simulate(const SimConfig& cfg);

struct DominantK {
  double k_hat = 0.0;
  int bin = -1;
  Vec slopes;  // NaN where the bin never carried energy
  bool unreliable = false;
};

// Least-squares log-amplitude slopes over records with t in [t0, t1].
DominantK measure_dominant_k(const SpectrumSeries& s, double t0, double t1, bool exclude_zero,
                             double saturation = -1.0);

// Last record time at which the largest non-carrier bin stays below `cap`.
double linear_stage_end(const SpectrumSeries& s, double cap, bool exclude_zero);

struct DecayFit {
  double rate;
  double ratio;  // peak(t_end) / peak(0)
  double theory_rate;
};

DecayFit soliton_decay_experiment(double gamma, double eps, double t_end, double L = 16 * M_PI,
                                  int n = 1024, double dt = 1e-3);

// Slow flow of the soliton parameters under NLS + eps F; F receives u and u_x.
using NlsForcing = std::function<cplx(cplx u, cplx ux)>;

struct SolitonRates {
  double deta, dx0, dxi, dphi0;
};

SolitonRates soliton_slow_flow(const SolitonParams& p, const NlsForcing& F, double zeta_max = 30.0,
                               int panels = 4096);

enum class LinOp { Lplus, Lminus };

struct LpmSpectrum {
  std::vector<double> discrete;  // above -1 + margin, descending
  double continuum_edge;         // largest eigenvalue at or below -1 + margin
};

LpmSpectrum lpm_spectrum(LinOp op, double halfwidth, int n, double margin = 1e-2);

// Grid application of L on interior nodes with zero Dirichlet data.
Vec apply_lpm(LinOp op, double halfwidth, int n, const RealFn& f);

double envelope_residual(double rho, const std::vector<double>& xi, double amplitude_scale = 1.0);

struct OpoThreshold {
  cplx critical;
  double magnitude;
  cplx pump;         // V = S / (alpha + i Delta2)
  bool trivial_stable;
};

OpoThreshold opo_threshold(double alpha, double delta1, double delta2, cplx pump_S = cplx(0.0));

}  // namespace apx
