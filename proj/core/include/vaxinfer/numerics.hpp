#pragma once

#include <cstdint>
#include <utility>

namespace vaxinfer::numerics {

/// Seeded, streamed pseudo-random generator (PCG64 XSL-RR).
///
/// The (seed, stream) pair fully determines the draw sequence; the same
/// pair reproduces it bit for bit on every run. Distinct streams select
/// distinct increments of the underlying LCG, giving non-overlapping
/// sequences for parallel chains and replications.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();

  /// Uniform double in [0, 1), 53 random bits.
  double uniform();

  /// Uniform double in (0, 1), safe as a log() argument.
  double uniform_pos();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  unsigned __int128 state_;
  unsigned __int128 inc_;
  std::uint64_t seed_;
  std::uint64_t stream_;
};

/// ln Gamma(x) for x > 0 (Lanczos, g = 7, 9 coefficients).
/// Throws std::domain_error for x <= 0.
double ln_gamma(double x);

/// ln B(r, s) = ln Gamma(r) + ln Gamma(s) - ln Gamma(r + s), r, s > 0.
double ln_beta(double r, double s);

/// Regularized incomplete beta I_x(r, s), continued fraction with the
/// symmetry switch at x > (r+1)/(r+s+2). Monotone non-decreasing in x.
double reg_inc_beta(double x, double r, double s);

/// Inverse of reg_inc_beta in x for p in (0, 1): |I_x(r,s) - p| < 1e-9.
double beta_quantile(double p, double r, double s);

namespace detail {
/// Standard normal draw (Marsaglia polar method, no cached spare).
double sample_normal(Rng& rng);
/// Gamma(shape, 1) draw via Marsaglia-Tsang, boosted for shape < 1.
double sample_gamma(Rng& rng, double shape);
}  // namespace detail

/// Beta(r, s) draw as a ratio of two gamma variates; valid for shapes < 1.
double sample_beta(Rng& rng, double r, double s);

/// Binomial(n, p) draw: CDF inversion for n*min(p,1-p) < 30, BTPE
/// (triangle/parallelogram/exponential acceptance with squeeze) otherwise.
std::int64_t sample_binomial(Rng& rng, std::int64_t n, double p);

}  // namespace vaxinfer::numerics
