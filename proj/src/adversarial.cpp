/* Copyright 2026 The Spanbreaker Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License. */

#include "spanbreaker/adversarial.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "spanbreaker/kernels.hpp"

namespace spanbreaker {
namespace {

std::string fmt_params(std::initializer_list<std::pair<const char*, double>> kv) {
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& [k, v] : kv) {
    os << (first ? "" : ",") << k << '=' << v;
    first = false;
  }
  return os.str();
}

void check_smooth_pair(double L, double sigma) {
  if (!(sigma > 0.0) || !(L > sigma) || !std::isfinite(L))
    throw std::invalid_argument("instance requires L > sigma > 0");
}

// (1/2) <x, A x> - x_1 without forming A x.
double chain_energy(std::span<const double> x) {
  double quad = 0.0;
  const std::size_t d = x.size();
  for (std::size_t j = 0; j < d; ++j) quad += x[j] * x[j];
  for (std::size_t j = 0; j + 1 < d; ++j) quad -= x[j] * x[j + 1];
  return quad - x[0];
}

}  // namespace

// -- chain ----------------------------------------------------------------

ChainProblem::ChainProblem(double L, double sigma, std::size_t d, Regularizer psi)
    : FiniteSumProblem(
          [&] {
            check_smooth_pair(L, sigma);
            if (d < 2) throw std::invalid_argument("chain needs d >= 2");
            return Constants{1, d, sigma, Vector{L}, L, sigma};
          }(),
          psi),
      L_(L),
      sigma_(sigma),
      scale_((L - sigma) / 4.0) {
  finalize_windows();
  if (psi.is_none()) {
    Vector x = solve_shifted_tridiagonal(d, 4.0 / (L / sigma - 1.0));
    set_minimizer(std::move(x));
  }
}

void ChainProblem::local_gradient(std::size_t, std::span<const double> x,
                                  std::span<double> out) const {
  kernels::tridiag_apply(x, out);
  out[0] -= 1.0;
  for (double& v : out) v *= scale_;
}

double ChainProblem::local_value(std::size_t, std::span<const double> x) const {
  return scale_ * chain_energy(x);
}

double ChainProblem::smooth_value(std::span<const double> x) const {
  return scale_ * chain_energy(x) + 0.5 * sigma_ * kernels::sq_norm(x);
}

bool ChainProblem::hessian_apply(std::span<const double> v, std::span<double> out) const {
  kernels::tridiag_apply(v, out);
  kernels::axpby(sigma_, v, scale_, out);
  return true;
}

std::string ChainProblem::descriptor() const {
  return "chain(" +
         fmt_params({{"L", L_}, {"sigma", sigma_}, {"d", double(dimension())}}) +
         ",psi=" + regularizer().describe() + ")";
}

// -- blocks ---------------------------------------------------------------

BlockProblem::BlockProblem(std::size_t n, double L, double sigma, std::size_t block_dim)
    : FiniteSumProblem(
          [&] {
            check_smooth_pair(L, sigma);
            if (n < 1) throw std::invalid_argument("block instance needs n >= 1");
            if (block_dim < 2) throw std::invalid_argument("block instance needs d_b >= 2");
            const double nd = static_cast<double>(n);
            return Constants{n,
                             n * block_dim,
                             nd * sigma,
                             Vector(n, nd * L),
                             (L - sigma) + nd * sigma,
                             nd * sigma};
          }(),
          Regularizer::none()),
      block_dim_(block_dim),
      L_(L),
      sigma_(sigma),
      scale_((L - sigma) / 4.0) {
  finalize_windows();
  const Vector block =
      solve_shifted_tridiagonal(block_dim, 4.0 * static_cast<double>(n) / (L / sigma - 1.0));
  Vector x(dimension());
  for (std::size_t i = 0; i < n; ++i)
    std::copy(block.begin(), block.end(), x.begin() + static_cast<std::ptrdiff_t>(i * block_dim));
  set_minimizer(std::move(x));
}

void BlockProblem::local_gradient(std::size_t i, std::span<const double> x,
                                  std::span<double> out) const {
  const auto xi = x.subspan(i * block_dim_, block_dim_);
  kernels::tridiag_apply(xi, out);
  out[0] -= 1.0;
  const double s = static_cast<double>(components()) * scale_;
  for (double& v : out) v *= s;
}

double BlockProblem::local_value(std::size_t i, std::span<const double> x) const {
  return static_cast<double>(components()) * scale_ *
         chain_energy(x.subspan(i * block_dim_, block_dim_));
}

double BlockProblem::smooth_value(std::span<const double> x) const {
  double s = 0.0;
  for (std::size_t i = 0; i < components(); ++i)
    s += chain_energy(x.subspan(i * block_dim_, block_dim_));
  return scale_ * s + 0.5 * ridge() * kernels::sq_norm(x);
}

bool BlockProblem::hessian_apply(std::span<const double> v, std::span<double> out) const {
  for (std::size_t i = 0; i < components(); ++i)
    kernels::tridiag_apply(v.subspan(i * block_dim_, block_dim_),
                           out.subspan(i * block_dim_, block_dim_));
  kernels::axpby(ridge(), v, scale_, out);
  return true;
}

std::string BlockProblem::descriptor() const {
  return "block(" +
         fmt_params({{"n", double(components())},
                     {"L", L_},
                     {"sigma", sigma_},
                     {"d_b", double(block_dim_)}}) +
         ")";
}

// -- dense quadratic sums -------------------------------------------------

struct QuadraticSum::Spectral {
  Vector lipschitz;
  Vector min_eig;
  double smoothness = 0.0;
  double mu = 0.0;
  Vector mean_a;
  Vector mean_b;
};

std::shared_ptr<const QuadraticSum> QuadraticSum::create(Data data, Regularizer psi,
                                                         std::string descriptor) {
  const std::size_t n = data.n;
  const std::size_t d = data.d;
  if (n < 1 || d < 1) throw std::invalid_argument("quadratic sum needs n, d >= 1");
  if (data.a.size() != n * d * d || data.b.size() != n * d)
    throw std::invalid_argument("quadratic sum data has wrong size");

  using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Spectral s;
  s.mean_a.assign(d * d, 0.0);
  s.mean_b.assign(d, 0.0);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::Map<const Mat> ai(data.a.data() + i * d * d, static_cast<Eigen::Index>(d),
                             static_cast<Eigen::Index>(d));
    if (!ai.isApprox(ai.transpose(), 1e-12) && ai.norm() > 0.0)
      throw std::invalid_argument("quadratic components must be symmetric");
    Eigen::SelfAdjointEigenSolver<Mat> es(ai, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    const double spectral = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
    // A zero component is 0-smooth; keep a positive constant for sampling.
    s.lipschitz.push_back(spectral > 0.0 ? spectral : std::numeric_limits<double>::min());
    s.min_eig.push_back(ev(0));
    for (std::size_t k = 0; k < d * d; ++k) s.mean_a[k] += inv_n * data.a[i * d * d + k];
    for (std::size_t k = 0; k < d; ++k) s.mean_b[k] += inv_n * data.b[i * d + k];
  }
  Eigen::Map<const Mat> abar(s.mean_a.data(), static_cast<Eigen::Index>(d),
                             static_cast<Eigen::Index>(d));
  Eigen::SelfAdjointEigenSolver<Mat> es(abar, Eigen::EigenvaluesOnly);
  s.mu = es.eigenvalues()(0);
  s.smoothness = es.eigenvalues()(static_cast<Eigen::Index>(d) - 1);
  if (!(s.mu > 0.0))
    throw std::invalid_argument("average Hessian must be positive definite");
  return std::shared_ptr<const QuadraticSum>(
      new QuadraticSum(std::move(data), s, psi, std::move(descriptor)));
}

QuadraticSum::QuadraticSum(Data data, const Spectral& s, Regularizer psi,
                           std::string descriptor)
    : FiniteSumProblem(Constants{data.n, data.d, 0.0, s.lipschitz, s.smoothness, s.mu},
                       psi),
      data_(std::move(data)),
      mean_a_(s.mean_a),
      mean_b_(s.mean_b),
      min_eig_(s.min_eig),
      descriptor_(std::move(descriptor)) {
  nonconvex_ = std::any_of(min_eig_.begin(), min_eig_.end(), [](double e) { return e < 0.0; });
  finalize_windows();
  if (psi.is_none()) {
    using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const auto d = static_cast<Eigen::Index>(data_.d);
    Eigen::Map<const Mat> abar(mean_a_.data(), d, d);
    Eigen::Map<const Eigen::VectorXd> bbar(mean_b_.data(), d);
    const Eigen::VectorXd xs = abar.llt().solve(-bbar);
    set_minimizer(Vector(xs.data(), xs.data() + d));
  }
}

void QuadraticSum::local_gradient(std::size_t i, std::span<const double> x,
                                  std::span<double> out) const {
  const std::size_t d = data_.d;
  const double* a = data_.a.data() + i * d * d;
  const double* b = data_.b.data() + i * d;
  for (std::size_t r = 0; r < d; ++r)
    out[r] = kernels::dot({a + r * d, d}, x) + b[r];
}

double QuadraticSum::local_value(std::size_t i, std::span<const double> x) const {
  const std::size_t d = data_.d;
  const double* a = data_.a.data() + i * d * d;
  const double* b = data_.b.data() + i * d;
  double v = 0.0;
  for (std::size_t r = 0; r < d; ++r)
    v += x[r] * (0.5 * kernels::dot({a + r * d, d}, x) + b[r]);
  return v;
}

double QuadraticSum::smooth_value(std::span<const double> x) const {
  const std::size_t d = data_.d;
  double v = 0.0;
  for (std::size_t r = 0; r < d; ++r)
    v += x[r] * (0.5 * kernels::dot({mean_a_.data() + r * d, d}, x) + mean_b_[r]);
  return v;
}

bool QuadraticSum::hessian_apply(std::span<const double> v, std::span<double> out) const {
  const std::size_t d = data_.d;
  for (std::size_t r = 0; r < d; ++r) out[r] = kernels::dot({mean_a_.data() + r * d, d}, v);
  return true;
}

// -- SDCA -----------------------------------------------------------------

StructuredColumns::StructuredColumns(std::size_t n, double c)
    : n_(n), c_(c), n2_(static_cast<double>(n) * static_cast<double>(n)) {}

double StructuredColumns::dot(std::size_t i, std::span<const double> x) const {
  double s = 0.0;
  for (double v : x) s += v;
  return c_ * (n2_ * x[i] + s);
}

void StructuredColumns::axpy(std::size_t i, double a, std::span<double> x) const {
  const double ac = a * c_;
  for (double& v : x) v += ac;
  x[i] += ac * n2_;
}

double StructuredColumns::sq_norm(std::size_t) const {
  const double nd = static_cast<double>(n_);
  return c_ * c_ * ((n2_ + 1.0) * (n2_ + 1.0) + nd - 1.0);
}

DenseColumns::DenseColumns(std::size_t n, std::size_t d, Vector columns)
    : n_(n), d_(d), y_(std::move(columns)) {
  if (y_.size() != n * d) throw std::invalid_argument("column data has wrong size");
}

double DenseColumns::dot(std::size_t i, std::span<const double> x) const {
  return kernels::dot({y_.data() + i * d_, d_}, x);
}

void DenseColumns::axpy(std::size_t i, double a, std::span<double> x) const {
  kernels::axpy(a, {y_.data() + i * d_, d_}, x);
}

double DenseColumns::sq_norm(std::size_t i) const {
  return kernels::sq_norm({y_.data() + i * d_, d_});
}

namespace {

Vector primal_lipschitz(const SdcaColumns& cols, double lambda) {
  Vector l(cols.count());
  for (std::size_t i = 0; i < cols.count(); ++i) l[i] = cols.sq_norm(i) + lambda;
  return l;
}

}  // namespace

SdcaPrimal::SdcaPrimal(std::shared_ptr<const SdcaColumns> columns, double lambda,
                       double smoothness, std::string descriptor)
    : FiniteSumProblem(Constants{columns->count(), columns->dimension(), lambda,
                                 primal_lipschitz(*columns, lambda), smoothness, lambda},
                       Regularizer::none()),
      columns_(std::move(columns)),
      descriptor_(std::move(descriptor)) {
  finalize_windows();
  set_minimizer(Vector(dimension(), 0.0));
}

void SdcaPrimal::local_gradient(std::size_t i, std::span<const double> x,
                                std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  columns_->axpy(i, columns_->dot(i, x), out);
}

double SdcaPrimal::local_value(std::size_t i, std::span<const double> x) const {
  const double t = columns_->dot(i, x);
  return 0.5 * t * t;
}

bool SdcaPrimal::hessian_apply(std::span<const double> v, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  const double inv_n = 1.0 / static_cast<double>(components());
  for (std::size_t i = 0; i < components(); ++i)
    columns_->axpy(i, inv_n * columns_->dot(i, v), out);
  kernels::axpy(ridge(), v, out);
  return true;
}

SdcaInstance make_sdca_instance(std::size_t n, std::size_t d, Vector columns,
                                double lambda, SdcaLoss loss) {
  if (!(lambda > 0.0)) throw std::invalid_argument("SDCA needs lambda > 0");
  auto cols = std::make_shared<DenseColumns>(n, d, std::move(columns));
  double mean_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean_sq += cols->sq_norm(i) / static_cast<double>(n);
  SdcaInstance inst;
  inst.columns = cols;
  inst.primal = std::make_shared<SdcaPrimal>(cols, lambda, mean_sq + lambda, "sdca_dense");
  inst.lambda = lambda;
  inst.loss = loss;
  return inst;
}

// -- generators -----------------------------------------------------------

std::shared_ptr<const ChainProblem> nesterov_chain(double L, double sigma, std::size_t d) {
  return std::make_shared<ChainProblem>(L, sigma, d);
}

std::shared_ptr<const BlockProblem> block_adversarial(std::size_t n, double L,
                                                      double sigma,
                                                      std::size_t block_dim) {
  return std::make_shared<BlockProblem>(n, L, sigma, block_dim);
}

SdcaInstance sdca_adversarial(std::size_t n, double L, double mu) {
  if (n <= 2) throw std::invalid_argument("SDCA instance requires n > 2");
  if (!(mu > 0.0) || !(L > mu)) throw std::invalid_argument("SDCA instance requires L > mu > 0");
  const double nd = static_cast<double>(n);
  const double c = std::sqrt((L - mu) / (nd * nd * nd * nd + 2.0 * nd * nd + nd));
  SdcaInstance inst;
  auto cols = std::make_shared<StructuredColumns>(n, c);
  inst.columns = cols;
  // Largest eigenvalue of (1/n) Y^2 + mu I is c^2 (n^2 + n)^2 / n + mu.
  const double smooth = c * c * (nd * nd + nd) * (nd * nd + nd) / nd + mu;
  inst.primal = std::make_shared<SdcaPrimal>(
      cols, mu, smooth, "sdca(" + fmt_params({{"n", nd}, {"L", L}, {"mu", mu}}) + ")");
  inst.lambda = mu;
  inst.n = n;
  inst.L = L;
  inst.mu = mu;
  inst.c = c;
  return inst;
}

std::shared_ptr<const QuadraticSum> nonconvex_quadratic_sum(std::size_t n, std::size_t d,
                                                            double mu, double L,
                                                            double spread,
                                                            std::uint64_t seed) {
  if (!(mu > 0.0) || !(L > mu)) throw std::invalid_argument("ncvx instance requires L > mu > 0");
  if (!(spread >= 0.0)) throw std::invalid_argument("ncvx instance requires spread >= 0");
  if (n < 1 || d < 1) throw std::invalid_argument("ncvx instance needs n, d >= 1");

  using Mat = Eigen::MatrixXd;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto di = static_cast<Eigen::Index>(d);
  auto gaussian = [&](Eigen::Index r, Eigen::Index c) {
    Mat m(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
      for (Eigen::Index k = 0; k < r; ++k) m(k, j) = normal(rng);
    return m;
  };

  // Abar = Q diag(lambda) Q^T with log-spaced lambda from mu to L.
  const Mat q = gaussian(di, di).householderQr().householderQ();
  Eigen::VectorXd lambda(di);
  for (Eigen::Index k = 0; k < di; ++k) {
    const double t = d == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(d - 1);
    lambda(k) = mu * std::pow(L / mu, t);
  }
  if (d == 1) lambda(0) = mu;
  Mat abar = q * lambda.asDiagonal() * q.transpose();
  abar = 0.5 * (abar + abar.transpose());

  std::vector<Mat> delta(n, Mat::Zero(di, di));
  if (spread > 0.0 && n > 1) {
    Mat sum = Mat::Zero(di, di);
    for (auto& g : delta) {
      const Mat r = gaussian(di, di);
      g = 0.5 * (r + r.transpose());
      sum += g;
    }
    sum /= static_cast<double>(n);
    double worst = 0.0;
    for (auto& g : delta) {
      g -= sum;
      Eigen::SelfAdjointEigenSolver<Mat> es(g, Eigen::EigenvaluesOnly);
      worst = std::max({worst, std::abs(es.eigenvalues()(0)),
                        std::abs(es.eigenvalues()(di - 1))});
    }
    if (worst > 0.0)
      for (auto& g : delta) g *= spread / worst;
  }

  const Eigen::VectorXd bbar = gaussian(di, 1);
  std::vector<Eigen::VectorXd> pert(n, Eigen::VectorXd::Zero(di));
  if (n > 1) {
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(di);
    for (auto& p : pert) {
      p = gaussian(di, 1);
      mean += p;
    }
    mean /= static_cast<double>(n);
    for (auto& p : pert) p -= mean;
  }

  QuadraticSum::Data data;
  data.n = n;
  data.d = d;
  data.a.resize(n * d * d);
  data.b.resize(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    const Mat ai = abar + delta[i];
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c)
        data.a[i * d * d + r * d + c] =
            0.5 * (ai(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) +
                   ai(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(r)));
      data.b[i * d + r] = bbar(static_cast<Eigen::Index>(r)) +
                          pert[i](static_cast<Eigen::Index>(r));
    }
  }
  std::ostringstream os;
  os << "ncvx(" << fmt_params({{"n", double(n)}, {"d", double(d)}, {"mu", mu}, {"L", L},
                               {"spread", spread}})
     << ",seed=" << seed << ")";
  return QuadraticSum::create(std::move(data), Regularizer::none(), os.str());
}

// -- closed forms ---------------------------------------------------------

double chain_ratio(double kappa) {
  if (!(kappa >= 1.0)) throw std::invalid_argument("kappa must be >= 1");
  const double s = std::sqrt(kappa);
  return (s - 1.0) / (s + 1.0);
}

Vector chain_minimizer(double kappa, std::size_t d) {
  const double q = chain_ratio(kappa);
  Vector x(d);
  double p = 1.0;
  for (std::size_t j = 0; j < d; ++j) {
    p *= q;
    x[j] = p;
  }
  return x;
}

double block_ratio(std::size_t n, double kappa) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (!(kappa >= 1.0)) throw std::invalid_argument("kappa must be >= 1");
  const double s = std::sqrt((kappa - 1.0) / static_cast<double>(n) + 1.0);
  return (s - 1.0) / (s + 1.0);
}

Vector block_minimizer(std::size_t n, double kappa, std::size_t block_dim) {
  const double q = block_ratio(n, kappa);
  Vector x(block_dim);
  double p = 1.0;
  for (std::size_t j = 0; j < block_dim; ++j) {
    p *= q;
    x[j] = p;
  }
  return x;
}

Vector solve_shifted_tridiagonal(std::size_t d, double shift) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  // Thomas algorithm on diag = 2 + shift, off-diagonals = -1, rhs = e_1.
  const double diag = 2.0 + shift;
  Vector cp(d), dp(d);
  cp[0] = -1.0 / diag;
  dp[0] = 1.0 / diag;
  for (std::size_t j = 1; j < d; ++j) {
    const double denom = diag + cp[j - 1];
    cp[j] = -1.0 / denom;
    dp[j] = dp[j - 1] / denom;
  }
  Vector x(d);
  x[d - 1] = dp[d - 1];
  for (std::size_t j = d - 1; j-- > 0;) x[j] = dp[j] - cp[j] * x[j + 1];
  return x;
}

std::size_t last_nonzero(std::span<const double> x) {
  for (std::size_t j = x.size(); j > 0; --j)
    if (x[j - 1] != 0.0) return j;
  return 0;
}

std::vector<std::size_t> block_supports(std::span<const double> x, std::size_t block_dim) {
  if (block_dim == 0 || x.size() % block_dim != 0)
    throw std::invalid_argument("vector length is not a multiple of the block size");
  std::vector<std::size_t> out(x.size() / block_dim);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = last_nonzero(x.subspan(i * block_dim, block_dim));
  return out;
}

double span_floor(std::size_t n, double kappa, std::uint64_t k) {
  const double q = block_ratio(n, kappa);
  const double base = 1.0 - (1.0 - q * q) / static_cast<double>(n);
  return std::pow(base, static_cast<double>(k));
}

double sdca_coupling(std::size_t n, double L, double mu) {
  if (n <= 2) throw std::invalid_argument("SDCA instance requires n > 2");
  if (!(mu > 0.0) || !(L > mu)) throw std::invalid_argument("SDCA instance requires L > mu > 0");
  const double nd = static_cast<double>(n);
  const double c2 = (L - mu) / (nd * nd * nd * nd + 2.0 * nd * nd + nd);
  return (c2 + 2.0 * c2 * nd) / (c2 * nd * nd * nd + 2.0 * c2 * nd + c2 + mu);
}

double sdca_theta(std::size_t n, double L, double mu) {
  const double r = sdca_coupling(n, L, mu);
  const double nd = static_cast<double>(n);
  return (1.0 - 1.0 / nd) - r * (nd - 1.0) / nd;
}

}  // namespace spanbreaker
