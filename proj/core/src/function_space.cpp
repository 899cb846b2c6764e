#include "rwam/function_space.hpp"

#include <algorithm>
#include <complex>
#include <numbers>
#include <sstream>

#include "rwam/error.hpp"

namespace rwam {

std::string_view to_string(Family f) noexcept {
  switch (f) {
    case Family::jacobi: return "jacobi";
    case Family::exponential: return "exponential";
    case Family::custom: return "custom";
  }
  return "unknown";
}

namespace {

constexpr Eigen::Index kChunk = 4096;

// out[g] += prod_j tables[j][g_j] over a tensor grid, last axis fastest.
void accumulate_product(const TensorGrid& grid, const std::vector<const double*>& tables, double* out) {
  const int d = grid.dim();
  const std::size_t nl = static_cast<std::size_t>(grid.points_on_axis(d - 1));
  const std::size_t outer = grid.size() / nl;
  const double* last = tables[d - 1];
  std::vector<int> idx(d > 1 ? d - 1 : 1, 0);
  for (std::size_t o = 0; o < outer; ++o) {
    double f = 1.0;
    for (int j = 0; j + 1 < d; ++j) f *= tables[j][idx[j]];
    double* row = out + o * nl;
    for (std::size_t l = 0; l < nl; ++l) row[l] += f * last[l];
    for (int j = d - 2; j >= 0; --j) {
      if (++idx[j] < grid.points_on_axis(j)) break;
      idx[j] = 0;
    }
  }
}

PointSet rows(const PointSet& p, Eigen::Index start, Eigen::Index count) { return p.middleRows(start, count); }

}  // namespace

FunctionSpace::FunctionSpace(Box domain, BaseMeasure measure, std::size_t size, int level)
    : domain_(std::move(domain)), measure_(measure), size_(size), level_(level) {
  require(size_ >= 1, ErrorKind::precondition, "space must have dimension >= 1");
}

Eigen::MatrixXd FunctionSpace::eval_real(const PointSet& points) const {
  require(!is_complex(), ErrorKind::unsupported, "real evaluation of a complex-valued space");
  domain_.check_points(points);
  return eval_real_impl(points);
}

Eigen::MatrixXcd FunctionSpace::eval(const PointSet& points) const {
  domain_.check_points(points);
  if (is_complex()) return eval_complex_impl(points);
  return eval_real_impl(points).cast<std::complex<double>>();
}

RealGradient FunctionSpace::eval_grad_real(const PointSet& points) const {
  require(!is_complex(), ErrorKind::unsupported, "real gradient of a complex-valued space");
  require(has_gradient(), ErrorKind::unsupported, description() + " has no derivative rule");
  domain_.check_points(points);
  return grad_real_impl(points);
}

ComplexGradient FunctionSpace::eval_grad(const PointSet& points) const {
  require(has_gradient(), ErrorKind::unsupported, description() + " has no derivative rule");
  domain_.check_points(points);
  if (is_complex()) return grad_complex_impl(points);
  RealGradient g = grad_real_impl(points);
  ComplexGradient out;
  out.reserve(g.size());
  for (const auto& m : g) out.push_back(m.cast<std::complex<double>>());
  return out;
}

Eigen::MatrixXcd FunctionSpace::eval_weighted(const PointSet& points) const {
  Eigen::MatrixXcd v = eval(points);
  const Eigen::VectorXd k = v.rowwise().squaredNorm();
  for (Eigen::Index m = 0; m < v.rows(); ++m) v.row(m) *= std::sqrt(static_cast<double>(size_) / k[m]);
  return v;
}

Eigen::VectorXd FunctionSpace::kernel_diag(const PointSet& points) const {
  if (is_complex()) return eval(points).rowwise().squaredNorm();
  return eval_real(points).rowwise().squaredNorm();
}

Eigen::VectorXd FunctionSpace::christoffel(const PointSet& points) const {
  return kernel_diag(points).cwiseInverse() * static_cast<double>(size_);
}

Eigen::VectorXd FunctionSpace::grad_norm_sq(const PointSet& points) const {
  Eigen::VectorXd r = Eigen::VectorXd::Zero(points.rows());
  if (is_complex()) {
    for (const auto& g : eval_grad(points)) r += g.rowwise().squaredNorm();
  } else {
    for (const auto& g : eval_grad_real(points)) r += g.rowwise().squaredNorm();
  }
  return r;
}

void FunctionSpace::profile_on_grid(const TensorGrid& grid, Eigen::VectorXd& kernel, Eigen::VectorXd& grad_sq) const {
  const PointSet all = grid.points();
  const Eigen::Index total = all.rows();
  kernel.resize(total);
  grad_sq = Eigen::VectorXd::Zero(total);
  for (Eigen::Index s = 0; s < total; s += kChunk) {
    const Eigen::Index c = std::min(kChunk, total - s);
    const PointSet p = rows(all, s, c);
    kernel.segment(s, c) = kernel_diag(p);
    if (has_gradient()) grad_sq.segment(s, c) = grad_norm_sq(p);
  }
}

Eigen::MatrixXd FunctionSpace::eval_real_impl(const PointSet&) const {
  fail(ErrorKind::unsupported, "real evaluation not available for " + description());
}

Eigen::MatrixXcd FunctionSpace::eval_complex_impl(const PointSet& points) const {
  return eval_real_impl(points).cast<std::complex<double>>();
}

RealGradient FunctionSpace::grad_real_impl(const PointSet&) const {
  fail(ErrorKind::unsupported, "real gradient not available for " + description());
}

ComplexGradient FunctionSpace::grad_complex_impl(const PointSet&) const {
  fail(ErrorKind::unsupported, "complex gradient not available for " + description());
}

// ---------------------------------------------------------------------------
// Tensor Jacobi

TensorJacobiSpace::TensorJacobiSpace(Box domain, IndexSet indices, double alpha, double beta)
    : FunctionSpace(std::move(domain), BaseMeasure{alpha, beta}, indices.size(), indices.level()),
      indices_(std::move(indices)),
      rec_(alpha, beta, std::max(indices_.max_axis_degree(), 0)) {
  require(indices_.dim() == dim(), ErrorKind::precondition, "index set dimension differs from the domain");
}

std::string TensorJacobiSpace::description() const {
  std::ostringstream os;
  os << "tensor-jacobi(" << alpha() << "," << beta() << ") d=" << dim() << " N=" << size();
  return os.str();
}

double TensorJacobiSpace::to_reference(int axis, double x) const noexcept {
  const double y = 2.0 * (x - domain().lower(axis)) / domain().width(axis) - 1.0;
  return std::clamp(y, -1.0, 1.0);
}

Eigen::MatrixXd TensorJacobiSpace::eval_real_impl(const PointSet& points) const {
  const int d = dim(), deg = rec_.max_degree();
  const std::size_t n = size();
  Eigen::MatrixXd out(points.rows(), static_cast<Eigen::Index>(n));
  std::vector<std::vector<double>> p(d, std::vector<double>(deg + 1));
  for (Eigen::Index m = 0; m < points.rows(); ++m) {
    for (int j = 0; j < d; ++j) rec_.eval(to_reference(j, points(m, j)), p[j]);
    for (std::size_t i = 0; i < n; ++i) {
      const MultiIndex& a = indices_[i];
      double v = 1.0;
      for (int j = 0; j < d; ++j) v *= p[j][a[j]];
      out(m, static_cast<Eigen::Index>(i)) = v;
    }
  }
  return out;
}

RealGradient TensorJacobiSpace::grad_real_impl(const PointSet& points) const {
  const int d = dim(), deg = rec_.max_degree();
  const std::size_t n = size();
  RealGradient out(d, Eigen::MatrixXd(points.rows(), static_cast<Eigen::Index>(n)));
  std::vector<std::vector<double>> p(d, std::vector<double>(deg + 1)), dp(d, std::vector<double>(deg + 1));
  for (Eigen::Index m = 0; m < points.rows(); ++m) {
    for (int j = 0; j < d; ++j) rec_.eval(to_reference(j, points(m, j)), p[j], dp[j]);
    for (std::size_t i = 0; i < n; ++i) {
      const MultiIndex& a = indices_[i];
      for (int k = 0; k < d; ++k) {
        double v = 2.0 / domain().width(k) * dp[k][a[k]];
        for (int j = 0; j < d; ++j)
          if (j != k) v *= p[j][a[j]];
        out[k](m, static_cast<Eigen::Index>(i)) = v;
      }
    }
  }
  return out;
}

void TensorJacobiSpace::profile_on_grid(const TensorGrid& grid, Eigen::VectorXd& kernel,
                                        Eigen::VectorXd& grad_sq) const {
  const int d = dim(), deg = rec_.max_degree();
  // sq[j][k] holds p_k(y)^2 along axis j, dsq[j][k] holds (dp_k/dx)^2.
  std::vector<std::vector<std::vector<double>>> sq(d), dsq(d);
  std::vector<double> p(deg + 1), dp(deg + 1);
  for (int j = 0; j < d; ++j) {
    const int nj = grid.points_on_axis(j);
    const double scale = 2.0 / domain().width(j);
    sq[j].assign(deg + 1, std::vector<double>(nj));
    dsq[j].assign(deg + 1, std::vector<double>(nj));
    for (int g = 0; g < nj; ++g) {
      rec_.eval(to_reference(j, grid.axis(j)[g]), p, dp);
      for (int k = 0; k <= deg; ++k) {
        sq[j][k][g] = p[k] * p[k];
        dsq[j][k][g] = scale * scale * dp[k] * dp[k];
      }
    }
  }
  kernel = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid.size()));
  grad_sq = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid.size()));
  std::vector<const double*> tabs(d);
  for (std::size_t i = 0; i < size(); ++i) {
    const MultiIndex& a = indices_[i];
    for (int j = 0; j < d; ++j) tabs[j] = sq[j][a[j]].data();
    accumulate_product(grid, tabs, kernel.data());
    for (int k = 0; k < d; ++k) {
      if (a[k] == 0) continue;
      for (int j = 0; j < d; ++j) tabs[j] = (j == k ? dsq[j][a[j]] : sq[j][a[j]]).data();
      accumulate_product(grid, tabs, grad_sq.data());
    }
  }
}

std::optional<double> TensorJacobiSpace::exact_kernel_max() const {
  // With max(alpha, beta) >= -1/2 every |p_k| peaks at the same endpoint.
  if (std::max(alpha(), beta()) < -0.5) return std::nullopt;
  const double y = alpha() >= beta() ? 1.0 : -1.0;
  std::vector<double> p(rec_.max_degree() + 1);
  rec_.eval(y, p);
  double k = 0.0;
  for (const auto& a : indices_.indices()) {
    double v = 1.0;
    for (int e : a) v *= p[e] * p[e];
    k += v;
  }
  return k;
}

Quadrature TensorJacobiSpace::reference_quadrature() const {
  return tensor_gauss_jacobi(domain(), alpha(), beta(), indices_.max_axis_degree() + 1);
}

// ---------------------------------------------------------------------------
// Complex exponentials

ExponentialSpace::ExponentialSpace(Box domain, std::vector<std::vector<int>> frequencies, int level)
    : FunctionSpace(std::move(domain), BaseMeasure{}, frequencies.size(), level), freqs_(std::move(frequencies)) {
  const double two_pi = 2.0 * std::numbers::pi;
  for (const auto& f : freqs_) {
    require(static_cast<int>(f.size()) == dim(), ErrorKind::precondition, "frequency dimension differs from domain");
    for (int j = 0; j < dim(); ++j) {
      const double c = two_pi * f[j] / this->domain().width(j);
      grad_sq_ += c * c;
    }
  }
  auto sorted = freqs_;
  std::sort(sorted.begin(), sorted.end());
  require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), ErrorKind::precondition,
          "duplicate frequency");
}

std::string ExponentialSpace::description() const {
  std::ostringstream os;
  os << "exponential d=" << dim() << " N=" << size();
  return os.str();
}

Eigen::MatrixXcd ExponentialSpace::eval_complex_impl(const PointSet& points) const {
  const double two_pi = 2.0 * std::numbers::pi;
  Eigen::MatrixXcd out(points.rows(), static_cast<Eigen::Index>(size()));
  for (Eigen::Index m = 0; m < points.rows(); ++m) {
    for (std::size_t i = 0; i < size(); ++i) {
      double phase = 0.0;
      for (int j = 0; j < dim(); ++j)
        phase += freqs_[i][j] * (points(m, j) - domain().lower(j)) / domain().width(j);
      out(m, static_cast<Eigen::Index>(i)) = std::polar(1.0, two_pi * phase);
    }
  }
  return out;
}

ComplexGradient ExponentialSpace::grad_complex_impl(const PointSet& points) const {
  const double two_pi = 2.0 * std::numbers::pi;
  const Eigen::MatrixXcd v = eval_complex_impl(points);
  ComplexGradient out(dim(), Eigen::MatrixXcd(points.rows(), static_cast<Eigen::Index>(size())));
  for (int k = 0; k < dim(); ++k)
    for (std::size_t i = 0; i < size(); ++i) {
      const std::complex<double> c(0.0, two_pi * freqs_[i][k] / domain().width(k));
      out[k].col(static_cast<Eigen::Index>(i)) = c * v.col(static_cast<Eigen::Index>(i));
    }
  return out;
}

void ExponentialSpace::profile_on_grid(const TensorGrid& grid, Eigen::VectorXd& kernel,
                                       Eigen::VectorXd& grad_sq) const {
  kernel = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(grid.size()), static_cast<double>(size()));
  grad_sq = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(grid.size()), grad_sq_);
}

Quadrature ExponentialSpace::reference_quadrature() const {
  int fmax = 0;
  for (const auto& f : freqs_)
    for (int e : f) fmax = std::max(fmax, std::abs(e));
  return tensor_trapezoid(domain(), 2 * fmax + 1);
}

std::vector<std::vector<int>> cube_frequencies(int n, int d) {
  require(n >= 0 && d >= 1, ErrorKind::precondition, "frequency cube needs n >= 0, d >= 1");
  std::vector<std::vector<int>> out;
  std::vector<int> f(d, -n);
  for (;;) {
    out.push_back(f);
    int j = d - 1;
    while (j >= 0 && f[j] == n) f[j--] = -n;
    if (j < 0) break;
    ++f[j];
  }
  auto maxnorm = [](const std::vector<int>& v) {
    int m = 0;
    for (int e : v) m = std::max(m, std::abs(e));
    return m;
  };
  std::stable_sort(out.begin(), out.end(),
                   [&](const auto& a, const auto& b) { return maxnorm(a) < maxnorm(b); });
  return out;
}

// ---------------------------------------------------------------------------
// Custom spaces

CustomSpace::CustomSpace(Box domain, BaseMeasure measure, std::vector<RawFunction> raw,
                         std::vector<RawGradient> raw_grad, Quadrature quadrature, Eigen::MatrixXd coeffs, int level,
                         std::string name)
    : FunctionSpace(std::move(domain), measure, static_cast<std::size_t>(coeffs.cols()), level),
      raw_(std::move(raw)),
      raw_grad_(std::move(raw_grad)),
      quad_(std::move(quadrature)),
      coeffs_(std::move(coeffs)),
      name_(std::move(name)) {
  require(static_cast<Eigen::Index>(raw_.size()) == coeffs_.rows(), ErrorKind::shape,
          "coefficient rows differ from raw function count");
  require(raw_grad_.empty() || raw_grad_.size() == raw_.size(), ErrorKind::shape,
          "raw gradient count differs from raw function count");
}

namespace {

Eigen::MatrixXd raw_values(const std::vector<RawFunction>& raw, const PointSet& points) {
  Eigen::MatrixXd out(points.rows(), static_cast<Eigen::Index>(raw.size()));
  std::vector<double> x(points.cols());
  for (Eigen::Index m = 0; m < points.rows(); ++m) {
    for (Eigen::Index j = 0; j < points.cols(); ++j) x[j] = points(m, j);
    for (std::size_t k = 0; k < raw.size(); ++k) out(m, static_cast<Eigen::Index>(k)) = raw[k](x);
  }
  return out;
}

}  // namespace

Eigen::MatrixXd CustomSpace::eval_real_impl(const PointSet& points) const { return raw_values(raw_, points) * coeffs_; }

RealGradient CustomSpace::grad_real_impl(const PointSet& points) const {
  const int d = dim();
  RealGradient raw(d, Eigen::MatrixXd(points.rows(), static_cast<Eigen::Index>(raw_grad_.size())));
  std::vector<double> x(d), g(d);
  for (Eigen::Index m = 0; m < points.rows(); ++m) {
    for (int j = 0; j < d; ++j) x[j] = points(m, j);
    for (std::size_t k = 0; k < raw_grad_.size(); ++k) {
      raw_grad_[k](x, g);
      for (int j = 0; j < d; ++j) raw[j](m, static_cast<Eigen::Index>(k)) = g[j];
    }
  }
  for (auto& r : raw) r = r * coeffs_;
  return raw;
}

std::shared_ptr<const CustomSpace> orthonormalize_custom(const Box& domain, const BaseMeasure& measure,
                                                         std::vector<RawFunction> raw,
                                                         std::vector<RawGradient> raw_grad,
                                                         const Quadrature& quadrature, int level, std::string name) {
  require(!raw.empty(), ErrorKind::precondition, "no raw functions supplied");
  require(quadrature.nodes.cols() == domain.dim(), ErrorKind::shape, "quadrature dimension differs from domain");
  const Eigen::Index k = static_cast<Eigen::Index>(raw.size());
  const Eigen::VectorXd sw = quadrature.weights.cwiseSqrt();
  Eigen::MatrixXd q = sw.asDiagonal() * raw_values(raw, quadrature.nodes);
  Eigen::MatrixXd c = Eigen::MatrixXd::Identity(k, k);
  double max_norm = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) max_norm = std::max(max_norm, q.col(i).norm());
  for (Eigen::Index i = 0; i < k; ++i) {
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index j = 0; j < i; ++j) {
        const double r = q.col(j).dot(q.col(i));
        q.col(i) -= r * q.col(j);
        c.col(i) -= r * c.col(j);
      }
    }
    const double nrm = q.col(i).norm();
    if (!(nrm > 1e-10 * max_norm))
      fail(ErrorKind::rank, "raw function " + std::to_string(i) + " is numerically dependent on its predecessors");
    q.col(i) /= nrm;
    c.col(i) /= nrm;
  }
  return std::make_shared<const CustomSpace>(domain, measure, std::move(raw), std::move(raw_grad), quadrature,
                                             std::move(c), level, std::move(name));
}

// ---------------------------------------------------------------------------
// Factories

std::shared_ptr<const TensorJacobiSpace> tensor_jacobi_space(const Box& box, int n, double alpha, double beta) {
  return std::make_shared<const TensorJacobiSpace>(box, total_degree_set(n, box.dim()), alpha, beta);
}

std::shared_ptr<const TensorJacobiSpace> tensor_chebyshev_space(const Box& box, int n) {
  return tensor_jacobi_space(box, n, -0.5, -0.5);
}

std::shared_ptr<const TensorJacobiSpace> tensor_legendre_space(const Box& box, int n) {
  return tensor_jacobi_space(box, n, 0.0, 0.0);
}

std::shared_ptr<const ExponentialSpace> exponential_space(const Box& box, int n) {
  return std::make_shared<const ExponentialSpace>(box, cube_frequencies(n, box.dim()), n);
}

std::shared_ptr<const CustomSpace> custom_monomial_space(const Box& box, int n, double alpha, double beta) {
  const IndexSet set = total_degree_set(n, box.dim());
  const int d = box.dim();
  std::vector<RawFunction> raw;
  std::vector<RawGradient> grad;
  auto ref = [box](int j, double x) { return 2.0 * (x - box.lower(j)) / box.width(j) - 1.0; };
  for (const auto& a : set.indices()) {
    raw.emplace_back([a, ref, d](std::span<const double> x) {
      double v = 1.0;
      for (int j = 0; j < d; ++j) v *= std::pow(ref(j, x[j]), a[j]);
      return v;
    });
    grad.emplace_back([a, ref, d, box](std::span<const double> x, std::span<double> g) {
      for (int k = 0; k < d; ++k) {
        double v = a[k] == 0 ? 0.0 : a[k] * std::pow(ref(k, x[k]), a[k] - 1) * 2.0 / box.width(k);
        for (int j = 0; j < d; ++j)
          if (j != k) v *= std::pow(ref(j, x[j]), a[j]);
        g[k] = v;
      }
    });
  }
  std::ostringstream name;
  name << "custom-monomial d=" << d << " N=" << set.size();
  return orthonormalize_custom(box, BaseMeasure{alpha, beta}, std::move(raw), std::move(grad),
                               tensor_gauss_jacobi(box, alpha, beta, n + 1), n, name.str());
}

Box SpaceSpec::box() const {
  require(dim >= 1, ErrorKind::config, "space.d must be >= 1");
  if (lower.empty() && upper.empty()) return family == "exponential" ? Box::unit_cube(dim) : Box::symmetric(dim);
  require(static_cast<int>(lower.size()) == dim && static_cast<int>(upper.size()) == dim, ErrorKind::config,
          "space.lower and space.upper must have d entries");
  try {
    return Box(lower, upper);
  } catch (const Error& e) {
    fail(ErrorKind::config, e.what());
  }
}

SpacePtr make_space(const SpaceSpec& spec, int n) {
  const Box box = spec.box();
  require(n >= 0, ErrorKind::config, "level must be >= 0");
  if (spec.family == "exponential") {
    require(spec.indices.empty(), ErrorKind::config, "explicit index lists are not supported for exponentials");
    return exponential_space(box, n);
  }
  double alpha = spec.alpha, beta = spec.beta;
  if (spec.family == "chebyshev") {
    alpha = beta = -0.5;
  } else if (spec.family == "legendre") {
    alpha = beta = 0.0;
  } else if (spec.family == "custom-monomial") {
    return custom_monomial_space(box, n, alpha, beta);
  } else if (spec.family != "jacobi") {
    fail(ErrorKind::config, "space.family: unknown family '" + spec.family + "'");
  }
  if (!spec.indices.empty()) return std::make_shared<const TensorJacobiSpace>(box, IndexSet(spec.indices, n), alpha, beta);
  return tensor_jacobi_space(box, n, alpha, beta);
}

}  // namespace rwam
