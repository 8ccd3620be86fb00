#include "mtsf/gaussian_field.hpp"

#include <fftw3.h>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <random>
#include <stdexcept>

namespace mtsf {

namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::size_t next_smooth(std::size_t n) {
  for (;; ++n) {
    std::size_t m = n;
    for (std::size_t p : {2u, 3u, 5u}) {
      while (m % p == 0) m /= p;
    }
    if (m == 1) return n;
  }
}

struct ComplexBuffer {
  explicit ComplexBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {
    if (!data) throw std::bad_alloc();
  }
  ~ComplexBuffer() { fftw_free(data); }
  ComplexBuffer(const ComplexBuffer&) = delete;
  ComplexBuffer& operator=(const ComplexBuffer&) = delete;
  fftw_complex* data;
};

fftw_plan make_plan(const std::vector<std::size_t>& dims, fftw_complex* buf) {
  std::vector<int> n(dims.begin(), dims.end());
  std::lock_guard lock(planner_mutex());
  fftw_plan plan = fftw_plan_dft(static_cast<int>(n.size()), n.data(), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  if (!plan) throw std::runtime_error("GaussianFieldSampler: FFTW planning failed");
  return plan;
}

void destroy_plan(fftw_plan plan) {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

std::size_t product(const std::vector<std::size_t>& v) {
  std::size_t p = 1;
  for (std::size_t x : v) p *= x;
  return p;
}

}  // namespace

struct GaussianFieldSampler::Fft {
  explicit Fft(const std::vector<std::size_t>& dims) : total(product(dims)) {
    ComplexBuffer scratch(total);
    plan = make_plan(dims, scratch.data);
  }
  ~Fft() { destroy_plan(plan); }
  std::size_t total;
  fftw_plan plan;
};

GaussianFieldSampler::GaussianFieldSampler(std::function<double(double)> covariance, std::vector<std::size_t> shape,
                                           double h, FieldMethod method)
    : GaussianFieldSampler(std::move(covariance), shape, std::vector<double>(shape.size(), h), method) {}

GaussianFieldSampler::GaussianFieldSampler(std::function<double(double)> covariance, std::vector<std::size_t> shape,
                                           std::vector<double> spacing, FieldMethod method)
    : shape_(std::move(shape)), h_(std::move(spacing)), method_(method) {
  if (shape_.empty()) throw std::invalid_argument("GaussianFieldSampler: empty grid shape");
  if (h_.size() != shape_.size()) throw std::invalid_argument("GaussianFieldSampler: spacing/shape dimension mismatch");
  for (std::size_t n : shape_) {
    if (n == 0) throw std::invalid_argument("GaussianFieldSampler: grid extents must be positive");
  }
  for (double h : h_) {
    if (!(h > 0.0)) throw std::invalid_argument("GaussianFieldSampler: grid spacing must be positive");
  }
  const std::size_t d = shape_.size();

  if (method_ == FieldMethod::cholesky) {
    const std::size_t n = size();
    if (n > 20000) throw std::invalid_argument("GaussianFieldSampler: grid too large for the dense Cholesky method");
    std::vector<std::vector<double>> pos(n, std::vector<double>(d));
    for (std::size_t flat = 0; flat < n; ++flat) {
      std::size_t rest = flat;
      for (std::size_t s = d; s-- > 0;) {
        pos[flat][s] = h_[s] * static_cast<double>(rest % shape_[s]);
        rest /= shape_[s];
      }
    }
    Eigen::MatrixXd cov(n, n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b <= a; ++b) {
        double dist2 = 0.0;
        for (std::size_t s = 0; s < d; ++s) dist2 += (pos[a][s] - pos[b][s]) * (pos[a][s] - pos[b][s]);
        cov(a, b) = cov(b, a) = covariance(std::sqrt(dist2));
      }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    double jitter = 1e-12 * std::max(1.0, cov.diagonal().maxCoeff());
    while (llt.info() != Eigen::Success) {
      cov.diagonal().array() += jitter;
      llt.compute(cov);
      jitter *= 10.0;
    }
    Eigen::MatrixXd L = llt.matrixL();
    cholesky_.assign(L.data(), L.data() + L.size());
    return;
  }

  // Circulant embedding: wrap the covariance on a torus at least twice the
  // grid; enlarge the torus while the embedding is noticeably indefinite.
  torus_.resize(d);
  for (std::size_t s = 0; s < d; ++s) torus_[s] = next_smooth(std::max<std::size_t>(2 * shape_[s], 2));
  for (int attempt = 0;; ++attempt) {
    const std::size_t total = product(torus_);
    ComplexBuffer buf(total);
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::size_t rest = flat;
      double dist2 = 0.0;
      for (std::size_t s = d; s-- > 0;) {
        const std::size_t j = rest % torus_[s];
        rest /= torus_[s];
        const double lag = h_[s] * static_cast<double>(std::min(j, torus_[s] - j));
        dist2 += lag * lag;
      }
      buf.data[flat][0] = covariance(std::sqrt(dist2));
      buf.data[flat][1] = 0.0;
    }
    fftw_plan plan = make_plan(torus_, buf.data);
    fftw_execute(plan);
    destroy_plan(plan);

    double max_eig = 0.0, min_eig = 0.0;
    for (std::size_t k = 0; k < total; ++k) {
      max_eig = std::max(max_eig, buf.data[k][0]);
      min_eig = std::min(min_eig, buf.data[k][0]);
    }
    if (min_eig < -1e-8 * max_eig && attempt < 3 && 2 * total <= (std::size_t{1} << 24)) {
      for (auto& m : torus_) m = next_smooth(2 * m);
      continue;
    }
    double negative = 0.0, absolute = 0.0;
    sqrt_eigen_.resize(total);
    for (std::size_t k = 0; k < total; ++k) {
      const double lam = buf.data[k][0];
      absolute += std::abs(lam);
      if (lam < 0.0) negative -= lam;
      sqrt_eigen_[k] = std::sqrt(std::max(lam, 0.0) / static_cast<double>(total));
    }
    clipped_fraction_ = absolute > 0.0 ? negative / absolute : 0.0;
    break;
  }
  fft_ = std::make_unique<Fft>(torus_);
}

GaussianFieldSampler::~GaussianFieldSampler() = default;
GaussianFieldSampler::GaussianFieldSampler(GaussianFieldSampler&&) noexcept = default;
GaussianFieldSampler& GaussianFieldSampler::operator=(GaussianFieldSampler&&) noexcept = default;

std::size_t GaussianFieldSampler::size() const { return product(shape_); }

std::vector<double> GaussianFieldSampler::sample(Philox& rng) const {
  std::normal_distribution<double> normal;
  const std::size_t n = size();
  std::vector<double> out(n);

  if (method_ == FieldMethod::cholesky) {
    Eigen::VectorXd z(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = normal(rng);
    const Eigen::Map<const Eigen::MatrixXd> L(cholesky_.data(), static_cast<Eigen::Index>(n),
                                              static_cast<Eigen::Index>(n));
    const Eigen::VectorXd x = L.triangularView<Eigen::Lower>() * z;
    std::copy(x.data(), x.data() + n, out.begin());
    return out;
  }

  const std::size_t total = fft_->total;
  ComplexBuffer buf(total);
  for (std::size_t k = 0; k < total; ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    buf.data[k][0] = sqrt_eigen_[k] * re;
    buf.data[k][1] = sqrt_eigen_[k] * im;
  }
  fftw_execute_dft(fft_->plan, buf.data, buf.data);

  const std::size_t d = shape_.size();
  for (std::size_t flat = 0; flat < n; ++flat) {
    std::size_t rest = flat;
    std::size_t torus_flat = 0;
    std::size_t stride = 1;
    for (std::size_t s = d; s-- > 0;) {
      torus_flat += (rest % shape_[s]) * stride;
      rest /= shape_[s];
      stride *= torus_[s];
    }
    out[flat] = buf.data[torus_flat][0];
  }
  return out;
}

}  // namespace mtsf
