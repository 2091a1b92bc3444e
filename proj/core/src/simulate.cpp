#include "gbm_cutoff/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <tuple>

#include "gbm_cutoff/error.hpp"

namespace gbm {

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::exact_commutative: return "exact_commutative";
    case Scheme::exact_first_order: return "exact_first_order";
    case Scheme::euler_maruyama: return "euler_maruyama";
    case Scheme::magnus_truncated: return "magnus_truncated";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  for (Scheme s : {Scheme::exact_commutative, Scheme::exact_first_order, Scheme::euler_maruyama,
                   Scheme::magnus_truncated}) {
    if (name == to_string(s)) return s;
  }
  fail("bad_scheme", "unknown scheme '" + std::string(name) + "'");
}

std::mt19937_64 path_generator(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    0x6a09e667u};
  return std::mt19937_64(seq);
}

namespace {

long step_count(double t, double dt) {
  if (!(t > 0.0)) fail("invalid_argument", "t must be positive");
  if (!(dt > 0.0) || dt > t * (1.0 + 1e-12)) fail("invalid_argument", "need 0 < dt <= t");
  const double ratio = t / dt;
  const long n = std::lround(ratio);
  if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-9 * ratio) {
    fail("invalid_argument", "t / dt must be an integer");
  }
  return n;
}

double bracket_scale(const MatrixD& a, const MatrixD& b) {
  return (1.0 + a.norm()) * (1.0 + b.norm());
}

void require_commuting(const GBMSystem& sys) {
  if (commutator(sys.A, sys.B).norm() > sys.tol * bracket_scale(sys.A, sys.B)) {
    fail("representation_invalid", "exact_commutative needs [A,B] = O");
  }
}

MatrixD require_first_order(const GBMSystem& sys) {
  MatrixD c = commutator(sys.B, sys.A);
  const double scale = bracket_scale(sys.A, sys.B);
  if (commutator(sys.A, c).norm() > sys.tol * scale * (1.0 + sys.A.norm()) ||
      commutator(sys.B, c).norm() > sys.tol * scale * (1.0 + sys.B.norm())) {
    fail("representation_invalid", "exact_first_order needs [A,C] = [B,C] = O");
  }
  return c;
}

std::pair<double, double> draw_pair(std::mt19937_64& gen, double t) {
  std::normal_distribution<double> normal;
  const double z1 = normal(gen);
  const double z2 = normal(gen);
  const double w = std::sqrt(t) * z1;
  const double integral = 0.5 * t * std::sqrt(t) * z1 + std::sqrt(t * t * t / 12.0) * z2;
  return {w, integral};
}

Vec first_order_sample(const GBMSystem& sys, const Eigen::MatrixXd& c, double t,
                       std::uint64_t seed, std::uint64_t index) {
  auto gen = path_generator(seed, index);
  const auto [w, integral] = draw_pair(gen, t);
  const Eigen::MatrixXd y = t * sys.A.mat() + w * sys.B.mat() + (0.5 * t * w - integral) * c;
  return expm(y) * sys.x;
}

Vec commutative_sample(const GBMSystem& sys, double t, std::uint64_t seed, std::uint64_t index) {
  auto gen = path_generator(seed, index);
  std::normal_distribution<double> normal;
  const double w = std::sqrt(t) * normal(gen);
  return expm(t * sys.A.mat() + w * sys.B.mat()) * sys.x;
}

struct EulerStepper {
  Eigen::MatrixXd propagator;  // I + (A + B^2/2) dt
  Eigen::MatrixXd noise;       // B
  double sqrt_dt;
  long steps;

  EulerStepper(const GBMSystem& sys, double t, double dt)
      : propagator(Eigen::MatrixXd::Identity(sys.dim(), sys.dim()) +
                   (sys.A.mat() + 0.5 * sys.B.mat() * sys.B.mat()) * dt),
        noise(sys.B.mat()),
        sqrt_dt(std::sqrt(dt)),
        steps(step_count(t, dt)) {}

  Vec run(const Vec& x0, std::uint64_t seed, std::uint64_t index) const {
    auto gen = path_generator(seed, index);
    std::normal_distribution<double> normal;
    if (x0.size() == 1) {
      const double p = propagator(0, 0);
      const double b = noise(0, 0);
      double x = x0(0);
      for (long k = 0; k < steps; ++k) x = p * x + b * x * (sqrt_dt * normal(gen));
      return Vec::Constant(1, x);
    }
    Vec x = x0;
    Vec next(x.size());
    Vec bx(x.size());
    for (long k = 0; k < steps; ++k) {
      const double dw = sqrt_dt * normal(gen);
      next.noalias() = propagator * x;
      bx.noalias() = noise * x;
      next += dw * bx;
      x.swap(next);
    }
    return x;
  }
};

// Sum with Neumaier compensation on leaves and pairwise combination above.
double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 256) {
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = sum + v[i];
      if (std::abs(sum) >= std::abs(v[i])) {
        comp += (sum - t) + v[i];
      } else {
        comp += (v[i] - t) + sum;
      }
      sum = t;
    }
    return sum + comp;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

void parallel_for(long n, unsigned threads, const std::function<void(long, long)>& body) {
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (workers == 1) {
    body(0, n);
    return;
  }
  std::vector<std::thread> pool;
  const long chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const long lo = static_cast<long>(w) * chunk;
    const long hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(body, lo, hi);
  }
  for (auto& th : pool) th.join();
}

}  // namespace

BrownianPath BrownianPath::sample(double t, double dt, std::uint64_t seed, std::uint64_t index) {
  const long n = step_count(t, dt);
  auto gen = path_generator(seed, index);
  std::normal_distribution<double> normal;
  BrownianPath path;
  path.dt = dt;
  path.increments.resize(static_cast<std::size_t>(n));
  const double sqrt_dt = std::sqrt(dt);
  for (auto& inc : path.increments) inc = sqrt_dt * normal(gen);
  return path;
}

PathFunctionals BrownianPath::functionals(long steps) const {
  const auto n = steps < 0 ? static_cast<long>(increments.size()) : steps;
  if (n > static_cast<long>(increments.size())) fail("path_too_short", "path does not cover t");
  PathFunctionals f;
  double w = 0.0;
  for (long k = 0; k < n; ++k) {
    const double s = dt * static_cast<double>(k);
    f.int_W += w * dt;
    f.int_W2 += w * w * dt;
    f.int_sW += s * w * dt;
    w += increments[static_cast<std::size_t>(k)];
  }
  f.W = w;
  return f;
}

std::pair<double, double> sample_gaussian_pair(double t, std::uint64_t seed, std::uint64_t index) {
  if (!(t > 0.0)) fail("invalid_argument", "t must be positive");
  auto gen = path_generator(seed, index);
  return draw_pair(gen, t);
}

Vec sample_exact_first_order(const GBMSystem& sys, double t, std::uint64_t seed,
                             std::uint64_t index) {
  if (!(t > 0.0)) fail("invalid_argument", "t must be positive");
  const MatrixD c = require_first_order(sys);
  return first_order_sample(sys, c.mat(), t, seed, index);
}

Vec sample_exact_commutative(const GBMSystem& sys, double t, std::uint64_t seed,
                             std::uint64_t index) {
  if (!(t > 0.0)) fail("invalid_argument", "t must be positive");
  require_commuting(sys);
  return commutative_sample(sys, t, seed, index);
}

Vec euler_maruyama(const GBMSystem& sys, double t, double dt, std::uint64_t seed,
                   std::uint64_t index) {
  return EulerStepper(sys, t, dt).run(sys.x, seed, index);
}

namespace {

long path_steps_for(const BrownianPath& path, double t) {
  if (t == 0.0) return 0;
  return step_count(t, path.dt);
}

}  // namespace

MatrixD magnus_exponent(const GBMSystem& sys, const BrownianPath& path, double t) {
  if (!(t >= 0.0)) fail("invalid_argument", "t must be non-negative");
  const PathFunctionals f = path.functionals(path_steps_for(path, t));
  const Eigen::MatrixXd& a = sys.A.mat();
  const Eigen::MatrixXd& b = sys.B.mat();
  const Eigen::MatrixXd b2 = b * b;
  const Eigen::MatrixXd m = a + 0.5 * b2;
  auto bracket = [](const Eigen::MatrixXd& u, const Eigen::MatrixXd& v) -> Eigen::MatrixXd {
    return u * v - v * u;
  };
  const Eigen::MatrixXd mb = bracket(m, b);
  Eigen::MatrixXd y = m * t + b * f.W + bracket(b, m) * (0.5 * t * f.W - f.int_W) - 0.5 * b2 * t;
  y += bracket(mb, b) * (0.5 * f.int_W2 - 0.5 * f.W * f.int_W + 0.5 * t * f.W * f.W);
  y += bracket(mb, m) * (f.int_sW - 0.5 * t * f.int_W - t * t * f.W / 12.0);
  return MatrixD(std::move(y));
}

MatrixD first_order_exponent(const GBMSystem& sys, const BrownianPath& path, double t) {
  if (!(t >= 0.0)) fail("invalid_argument", "t must be non-negative");
  const PathFunctionals f = path.functionals(path_steps_for(path, t));
  const MatrixD c = commutator(sys.B, sys.A);
  return MatrixD(t * sys.A.mat() + f.W * sys.B.mat() + (0.5 * t * f.W - f.int_W) * c.mat());
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GBM_CUTOFF_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap > 0) hw = std::min(hw, static_cast<unsigned>(cap));
  }
  return hw;
}

std::pair<double, double> mean_and_std_error(const std::vector<double>& values) {
  const std::size_t n = values.size();
  if (n < 2) fail("invalid_argument", "need at least two samples");
  const double mean = pairwise_sum(values.data(), n) / static_cast<double>(n);
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = (values[i] - mean) * (values[i] - mean);
  const double var = pairwise_sum(sq.data(), n) / static_cast<double>(n - 1);
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

MCEstimate estimate_mean_square(const GBMSystem& sys, double t, Scheme scheme,
                                const MCOptions& opts) {
  if (opts.n_paths < 100) fail("invalid_argument", "n_paths must be at least 100");
  if (!(t >= 0.0)) fail("invalid_argument", "t must be non-negative");
  MCEstimate out;
  out.n_paths = opts.n_paths;
  out.seed = opts.seed;
  out.scheme = scheme;
  if (t == 0.0) {
    out.value = sys.x.squaredNorm();
    return out;
  }

  std::function<Vec(std::uint64_t)> sample;
  std::optional<EulerStepper> stepper;
  std::optional<MatrixD> c;
  switch (scheme) {
    case Scheme::exact_commutative:
      require_commuting(sys);
      sample = [&](std::uint64_t i) { return commutative_sample(sys, t, opts.seed, i); };
      break;
    case Scheme::exact_first_order:
      c = require_first_order(sys);
      sample = [&](std::uint64_t i) { return first_order_sample(sys, c->mat(), t, opts.seed, i); };
      break;
    case Scheme::euler_maruyama:
      stepper.emplace(sys, t, opts.dt);
      sample = [&](std::uint64_t i) { return stepper->run(sys.x, opts.seed, i); };
      break;
    case Scheme::magnus_truncated:
      step_count(t, opts.dt);
      sample = [&](std::uint64_t i) {
        const BrownianPath path = BrownianPath::sample(t, opts.dt, opts.seed, i);
        return Vec(expm(magnus_exponent(sys, path, t).mat()) * sys.x);
      };
      break;
  }

  std::vector<double> values(static_cast<std::size_t>(opts.n_paths));
  parallel_for(opts.n_paths, resolve_threads(opts.threads), [&](long lo, long hi) {
    for (long i = lo; i < hi; ++i) {
      values[static_cast<std::size_t>(i)] = sample(static_cast<std::uint64_t>(i)).squaredNorm();
    }
  });
  std::tie(out.value, out.std_error) = mean_and_std_error(values);
  return out;
}

MatrixEstimate estimate_gaussian_exponential(const MatrixD& bhat, const MatrixD& chat, double t,
                                             const MCOptions& opts) {
  require_same_dim(bhat, chat);
  if (opts.n_paths < 100) fail("invalid_argument", "n_paths must be at least 100");
  if (!(t > 0.0)) fail("invalid_argument", "t must be positive");
  const Eigen::Index d = bhat.dim();
  const auto n = static_cast<std::size_t>(opts.n_paths);
  std::vector<Eigen::MatrixXd> draws(n);
  parallel_for(opts.n_paths, resolve_threads(opts.threads), [&](long lo, long hi) {
    for (long i = lo; i < hi; ++i) {
      const auto [w, integral] = sample_gaussian_pair(t, opts.seed, static_cast<std::uint64_t>(i));
      draws[static_cast<std::size_t>(i)] = expm(w * bhat.mat() - integral * chat.mat());
    }
  });

  MatrixEstimate out{Eigen::MatrixXd(d, d), Eigen::MatrixXd(d, d), opts.n_paths};
  std::vector<double> entry(n);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      for (std::size_t k = 0; k < n; ++k) entry[k] = draws[k](i, j);
      std::tie(out.mean(i, j), out.std_error(i, j)) = mean_and_std_error(entry);
    }
  }
  return out;
}

}  // namespace gbm
