#include "vaxinfer/numerics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace vaxinfer::numerics {

namespace {

constexpr std::uint64_t kSplitMixGamma = 0x9e3779b97f4a7c15ULL;

std::uint64_t splitmix64(std::uint64_t& x) {
  x += kSplitMixGamma;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr unsigned __int128 pcg_mult() {
  return (static_cast<unsigned __int128>(0x2360ed051fc65da4ULL) << 64) |
         0x4385df649fccf645ULL;
}

std::uint64_t rotr64(std::uint64_t v, unsigned rot) {
  return (v >> rot) | (v << ((64u - rot) & 63u));
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
  std::uint64_t sm = seed;
  const unsigned __int128 initstate =
      (static_cast<unsigned __int128>(splitmix64(sm)) << 64) | splitmix64(sm);
  std::uint64_t st = stream;
  const unsigned __int128 initseq =
      (static_cast<unsigned __int128>(splitmix64(st)) << 64) | splitmix64(st);
  inc_ = (initseq << 1) | 1;
  state_ = 0;
  state_ = state_ * pcg_mult() + inc_;
  state_ += initstate;
  state_ = state_ * pcg_mult() + inc_;
}

std::uint64_t Rng::next_u64() {
  const unsigned __int128 old = state_;
  state_ = old * pcg_mult() + inc_;
  const auto rot = static_cast<unsigned>(old >> 122);
  const auto xored =
      static_cast<std::uint64_t>(old >> 64) ^ static_cast<std::uint64_t>(old);
  return rotr64(xored, rot);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform_pos() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double ln_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("ln_gamma: argument must be positive");
  // Lanczos approximation, g = 7, 9 coefficients.
  static const double kCoef[9] = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  constexpr double kHalfLog2Pi = 0.91893853320467274178;  // ln(2*pi)/2

  if (x < 0.5) {
    // Reflection keeps the series argument >= 0.5.
    return std::log(M_PI / std::sin(M_PI * x)) - ln_gamma(1.0 - x);
  }
  const double z = x - 1.0;
  double sum = kCoef[0];
  for (int i = 1; i < 9; ++i) sum += kCoef[i] / (z + i);
  const double t = z + 7.5;
  return kHalfLog2Pi + (z + 0.5) * std::log(t) - t + std::log(sum);
}

double ln_beta(double r, double s) {
  if (!(r > 0.0) || !(s > 0.0))
    throw std::domain_error("ln_beta: shapes must be positive");
  return ln_gamma(r) + ln_gamma(s) - ln_gamma(r + s);
}

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cont_frac(double a, double b, double x) {
  constexpr int kMaxIter = 400;
  constexpr double kEps = 3e-16;
  const double tiny = std::numeric_limits<double>::min() / kEps;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) <= kEps) break;
  }
  return h;
}

}  // namespace

double reg_inc_beta(double x, double r, double s) {
  if (!(r > 0.0) || !(s > 0.0))
    throw std::domain_error("reg_inc_beta: shapes must be positive");
  if (!(x >= 0.0 && x <= 1.0))
    throw std::domain_error("reg_inc_beta: x must lie in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;

  const double ln_front =
      r * std::log(x) + s * std::log1p(-x) - ln_beta(r, s);
  if (x < (r + 1.0) / (r + s + 2.0)) {
    return std::exp(ln_front) * beta_cont_frac(r, s, x) / r;
  }
  return 1.0 - std::exp(ln_front) * beta_cont_frac(s, r, 1.0 - x) / s;
}

double beta_quantile(double p, double r, double s) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("beta_quantile: p must lie in (0, 1)");
  if (!(r > 0.0) || !(s > 0.0))
    throw std::domain_error("beta_quantile: shapes must be positive");

  const double lnb = ln_beta(r, s);
  double lo = 0.0, hi = 1.0;
  double x = r / (r + s);
  for (int it = 0; it < 200; ++it) {
    const double f = reg_inc_beta(x, r, s) - p;
    if (std::fabs(f) < 1e-12) return x;
    if (f > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    // Newton step on the CDF, bisection fallback when it leaves the bracket.
    double next = 0.0;
    bool newton_ok = false;
    if (x > 0.0 && x < 1.0) {
      const double dens =
          std::exp((r - 1.0) * std::log(x) + (s - 1.0) * std::log1p(-x) - lnb);
      if (dens > 0.0 && std::isfinite(dens)) {
        next = x - f / dens;
        newton_ok = next > lo && next < hi;
      }
    }
    x = newton_ok ? next : 0.5 * (lo + hi);
    if (hi - lo < 1e-16) break;
  }
  return x;
}

namespace detail {

double sample_normal(Rng& rng) {
  for (;;) {
    const double u = 2.0 * rng.uniform() - 1.0;
    const double v = 2.0 * rng.uniform() - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) {
      return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }
}

double sample_gamma(Rng& rng, double shape) {
  if (!(shape > 0.0))
    throw std::domain_error("sample_gamma: shape must be positive");
  if (shape < 1.0) {
    // Boost trick: Gamma(a) = Gamma(a+1) * U^(1/a).
    const double g = sample_gamma(rng, shape + 1.0);
    return g * std::pow(rng.uniform_pos(), 1.0 / shape);
  }
  // Marsaglia-Tsang squeeze.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = sample_normal(rng);
    const double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    const double v = t * t * t;
    const double u = rng.uniform_pos();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace detail

double sample_beta(Rng& rng, double r, double s) {
  if (!(r > 0.0) || !(s > 0.0))
    throw std::domain_error("sample_beta: shapes must be positive");
  for (;;) {
    const double x = detail::sample_gamma(rng, r);
    const double y = detail::sample_gamma(rng, s);
    if (x + y > 0.0) return x / (x + y);
  }
}

namespace {

// CDF inversion along the recurrence P(k+1)/P(k) = (n-k)/(k+1) * q/(1-q).
std::int64_t binomial_inversion(Rng& rng, std::int64_t n, double q) {
  const double s = q / (1.0 - q);
  double f = std::exp(static_cast<double>(n) * std::log1p(-q));
  double u = rng.uniform();
  std::int64_t k = 0;
  while (u > f && k < n) {
    u -= f;
    ++k;
    f *= s * static_cast<double>(n - k + 1) / static_cast<double>(k);
  }
  return k;
}

// BTPE: triangle / parallelogram / exponential-tail envelope with a
// squeeze and an exact Stirling-corrected acceptance test.
std::int64_t binomial_btpe(Rng& rng, std::int64_t n, double pp) {
  const double q1 = 1.0 - pp;
  const double fm = n * pp + pp;
  const auto m = static_cast<std::int64_t>(fm);
  const double npq = n * pp * q1;

  const double p1 = std::floor(2.195 * std::sqrt(npq) - 4.6 * q1) + 0.5;
  const double xm = m + 0.5;
  const double xl = xm - p1;
  const double xr = xm + p1;
  const double c = 0.134 + 20.5 / (15.3 + m);
  double a = (fm - xl) / (fm - xl * pp);
  const double laml = a * (1.0 + 0.5 * a);
  a = (xr - fm) / (xr * q1);
  const double lamr = a * (1.0 + 0.5 * a);
  const double p2 = p1 * (1.0 + 2.0 * c);
  const double p3 = p2 + c / laml;
  const double p4 = p3 + c / lamr;

  for (;;) {
    const double u = rng.uniform() * p4;
    double v = rng.uniform_pos();
    std::int64_t y;

    if (u <= p1) {
      y = static_cast<std::int64_t>(xm - p1 * v + u);
      return y;
    }
    if (u <= p2) {
      const double x = xl + (u - p1) / c;
      v = v * c + 1.0 - std::fabs(m - x + 0.5) / p1;
      if (v > 1.0 || v <= 0.0) continue;
      y = static_cast<std::int64_t>(x);
    } else if (u <= p3) {
      y = static_cast<std::int64_t>(xl + std::log(v) / laml);
      if (y < 0) continue;
      v = v * (u - p2) * laml;
    } else {
      y = static_cast<std::int64_t>(xr - std::log(v) / lamr);
      if (y > n) continue;
      v = v * (u - p3) * lamr;
    }

    const std::int64_t k = std::llabs(y - m);
    if (k <= 20 || k >= npq / 2.0 - 1.0) {
      // Direct pmf ratio by recurrence.
      const double s = pp / q1;
      const double aa = s * (n + 1);
      double big_f = 1.0;
      if (m < y) {
        for (std::int64_t i = m + 1; i <= y; ++i) big_f *= (aa / i - s);
      } else if (m > y) {
        for (std::int64_t i = y + 1; i <= m; ++i) big_f /= (aa / i - s);
      }
      if (v <= big_f) return y;
      continue;
    }

    const double rho =
        (k / npq) * ((k * (k / 3.0 + 0.625) + 0.16666666666666666) / npq + 0.5);
    const double t = -k * k / (2.0 * npq);
    const double big_a = std::log(v);
    if (big_a < t - rho) return y;
    if (big_a > t + rho) continue;

    const double x1 = y + 1;
    const double f1 = m + 1;
    const double z = n + 1 - m;
    const double w = n - y + 1;
    const double x2 = x1 * x1;
    const double f2 = f1 * f1;
    const double z2 = z * z;
    const double w2 = w * w;
    // Exact log pmf ratio, Stirling series to 1/x^9.
    const double bound =
        xm * std::log(f1 / x1) + (n - m + 0.5) * std::log(z / w) +
        (y - m) * std::log(w * pp / (x1 * q1)) +
        (13860.0 - (462.0 - (132.0 - (99.0 - 140.0 / f2) / f2) / f2) / f2) / f1 /
            166320.0 +
        (13860.0 - (462.0 - (132.0 - (99.0 - 140.0 / z2) / z2) / z2) / z2) / z /
            166320.0 +
        (13860.0 - (462.0 - (132.0 - (99.0 - 140.0 / x2) / x2) / x2) / x2) / x1 /
            166320.0 +
        (13860.0 - (462.0 - (132.0 - (99.0 - 140.0 / w2) / w2) / w2) / w2) / w /
            166320.0;
    if (big_a <= bound) return y;
  }
}

}  // namespace

std::int64_t sample_binomial(Rng& rng, std::int64_t n, double p) {
  if (n < 0) throw std::domain_error("sample_binomial: n must be non-negative");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("sample_binomial: p must lie in [0, 1]");
  if (n == 0 || p == 0.0) return 0;
  if (p == 1.0) return n;

  const bool flipped = p > 0.5;
  const double q = flipped ? 1.0 - p : p;
  const std::int64_t k =
      (n * q < 30.0) ? binomial_inversion(rng, n, q) : binomial_btpe(rng, n, q);
  return flipped ? n - k : k;
}

}  // namespace vaxinfer::numerics
