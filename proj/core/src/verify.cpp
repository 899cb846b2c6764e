#include "rwam/verify.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "rwam/error.hpp"
#include "rwam/lp.hpp"
#include "rwam/rng.hpp"

namespace rwam {

namespace {

template <typename Matrix>
GramResult gram_of(const Matrix& A) {
  require(A.rows() >= A.cols(), ErrorKind::shape,
          "design matrix has " + std::to_string(A.rows()) + " rows, fewer than N = " + std::to_string(A.cols()));
  Eigen::HouseholderQR<Matrix> qr(A);
  const Matrix R = qr.matrixQR().topRows(A.cols()).template triangularView<Eigen::Upper>();
  Eigen::JacobiSVD<Matrix> svd(R);
  const auto& s = svd.singularValues();
  GramResult g;
  g.sigma_max = s[0];
  g.sigma_min = s[s.size() - 1];
  g.deviation = std::max(std::abs(g.sigma_max * g.sigma_max - 1.0), std::abs(g.sigma_min * g.sigma_min - 1.0));
  return g;
}

template <typename Matrix>
void scale_rows(Matrix& A, bool weighted) {
  const double n = static_cast<double>(A.cols());
  const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(A.rows()));
  for (Eigen::Index m = 0; m < A.rows(); ++m) {
    double s = inv_sqrt_m;
    if (weighted) s *= std::sqrt(n / A.row(m).squaredNorm());
    A.row(m) *= s;
  }
}

// Standard normal by Box-Muller on the portable uniform stream.
double normal(Rng& rng) {
  const double u1 = rng.uniform_open(), u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

GramResult gram_deviation_of(const Eigen::MatrixXcd& A) { return gram_of(A); }

Eigen::MatrixXcd design_matrix(const FunctionSpace& space, const PointSet& points, bool weighted) {
  require(static_cast<std::size_t>(points.rows()) >= space.size(), ErrorKind::shape,
          "mesh has M = " + std::to_string(points.rows()) + " points, fewer than N = " + std::to_string(space.size()));
  Eigen::MatrixXcd A = space.eval(points);
  scale_rows(A, weighted);
  return A;
}

GramResult gram_deviation(const FunctionSpace& space, const PointSet& points, bool weighted) {
  require(static_cast<std::size_t>(points.rows()) >= space.size(), ErrorKind::shape,
          "mesh has M = " + std::to_string(points.rows()) + " points, fewer than N = " + std::to_string(space.size()));
  if (space.is_complex()) return gram_of(design_matrix(space, points, weighted));
  Eigen::MatrixXd A = space.eval_real(points);
  scale_rows(A, weighted);
  return gram_of(A);
}

L2Equivalence l2_equivalence_check(const FunctionSpace& space, const PointSet& points, bool weighted, double delta,
                                   int trials, std::uint64_t seed) {
  const Eigen::MatrixXcd A = design_matrix(space, points, weighted);
  const Eigen::MatrixXcd G = A.adjoint() * A;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);
  L2Equivalence out;
  out.eig_min = es.eigenvalues()[0];
  out.eig_max = es.eigenvalues()[es.eigenvalues().size() - 1];
  auto ratio = [&](const Eigen::VectorXcd& u) { return (u.adjoint() * G * u)(0, 0).real() / u.squaredNorm(); };
  out.eigvec_min_ratio = ratio(es.eigenvectors().col(0));
  out.eigvec_max_ratio = ratio(es.eigenvectors().col(es.eigenvectors().cols() - 1));
  out.min_ratio = out.eigvec_min_ratio;
  out.max_ratio = out.eigvec_max_ratio;
  Rng rng(seed);
  const Eigen::Index n = A.cols();
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXcd u(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double re = normal(rng);
      const double im = space.is_complex() ? normal(rng) : 0.0;
      u[i] = {re, im};
    }
    const double r = ratio(u);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  if (trials > 0) {
    out.min_ratio = lo;
    out.max_ratio = hi;
  }
  const double tol = 1e-12;
  out.pass = std::min(out.min_ratio, out.eigvec_min_ratio) >= 1.0 - delta - tol &&
             std::max(out.max_ratio, out.eigvec_max_ratio) <= 1.0 + delta + tol;
  return out;
}

PointSet snake_points(const TensorGrid& grid) {
  const int d = grid.dim();
  PointSet out(static_cast<Eigen::Index>(grid.size()), d);
  std::vector<int> idx;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    grid.unflatten(g, idx);
    // Reverse axis j whenever the natural position of the prefix is odd.
    std::size_t prefix = 0;
    for (int j = 0; j < d; ++j) {
      const int n = grid.points_on_axis(j);
      const int r = (prefix % 2 == 1) ? n - 1 - idx[j] : idx[j];
      out(static_cast<Eigen::Index>(g), j) = grid.axis(j)[r];
      prefix = prefix * static_cast<std::size_t>(n) + static_cast<std::size_t>(idx[j]);
    }
  }
  return out;
}

SupRatio sup_ratio_constant(const FunctionSpace& space, const PointSet& mesh, const PointSet& eval_points,
                            double K_mu, bool include_mesh) {
  const Eigen::Index n = static_cast<Eigen::Index>(space.size());
  require(mesh.rows() >= 1, ErrorKind::shape, "empty mesh");
  const PointSet& pts = eval_points;
  SupRatio out;
  out.lp_points = static_cast<std::size_t>(pts.rows());
  const Eigen::MatrixXcd E = space.eval(mesh);

  if (E.rows() >= n) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(E.transpose());
    Eigen::MatrixXcd sub(n, n);
    for (Eigen::Index k = 0; k < n; ++k) sub.row(k) = E.row(qr.colsPermutation().indices()[k]);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sub);
    out.sigma_min = svd.singularValues()[n - 1];
  }
  out.cheap_bound = out.sigma_min > 0.0 ? K_mu * std::sqrt(static_cast<double>(n)) / out.sigma_min
                                        : std::numeric_limits<double>::infinity();

  Eigen::MatrixXd B;
  Eigen::MatrixXd Phi;
  if (space.is_complex()) {
    constexpr int kAngles = 8;
    out.polygon_factor = 1.0 / std::cos(std::numbers::pi / (2 * kAngles));
    B.resize(E.rows() * kAngles, 2 * n);
    for (Eigen::Index m = 0; m < E.rows(); ++m) {
      for (int j = 0; j < kAngles; ++j) {
        const std::complex<double> rot = std::polar(1.0, -j * std::numbers::pi / kAngles);
        const Eigen::RowVectorXcd z = rot * E.row(m);
        B.block(m * kAngles + j, 0, 1, n) = z.real();
        B.block(m * kAngles + j, n, 1, n) = -z.imag();
      }
    }
    const Eigen::MatrixXcd V = space.eval(pts);
    Phi.resize(V.rows(), 2 * n);
    Phi.leftCols(n) = V.real();
    Phi.rightCols(n) = -V.imag();
  } else {
    B = E.real();
    Phi = space.eval_real(pts);
  }

  SupNormLP lp(B);
  if (!lp.determining()) {
    out.bounded = false;
    out.C_hat = std::numeric_limits<double>::infinity();
    out.certificate = lp.certificate();
    return out;
  }
  out.C_hat = -std::numeric_limits<double>::infinity();
  for (Eigen::Index g = 0; g < Phi.rows(); ++g) {
    // Points whose dual bound cannot beat the running max are skipped.
    if (g > 0 && lp.upper_bound(Phi.row(g).transpose()) <= out.C_hat) continue;
    const auto sol = lp.solve(Phi.row(g).transpose());
    out.pivots += sol.pivots;
    if (sol.value > out.C_hat) {
      out.C_hat = sol.value;
      out.argmax = pts.row(g).transpose();
    }
  }
  if (include_mesh && !(out.C_hat >= 1.0)) {
    out.C_hat = 1.0;
    out.argmax = mesh.row(0).transpose();
  }
  return out;
}

AlternantResult alternant_check(const FunctionSpace& space, const PointSet& points) {
  require(static_cast<std::size_t>(points.rows()) == space.size(), ErrorKind::shape,
          "alternant needs exactly N = " + std::to_string(space.size()) + " points");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(space.eval(points));
  const auto& s = svd.singularValues();
  AlternantResult out;
  out.sigma_max = s[0];
  out.sigma_min = s[s.size() - 1];
  out.nonsingular = out.sigma_min > 1e-12 * out.sigma_max;
  return out;
}

HaarResult haar_failure_experiment(int M, std::size_t trials, std::uint64_t seed) {
  require(M >= 1, ErrorKind::precondition, "M must be >= 1");
  require(trials >= 1, ErrorKind::precondition, "trials must be >= 1");
  Rng rng(seed);
  HaarResult out;
  out.M = M;
  out.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    bool vanishes = true;
    for (int m = 0; m < M; ++m) vanishes = (rng.uniform() > 0.5) && vanishes;
    out.failures += vanishes ? 1 : 0;
  }
  out.rate = static_cast<double>(out.failures) / static_cast<double>(trials);
  out.expected = std::ldexp(1.0, -M);
  out.sigma = std::sqrt(out.expected * (1.0 - out.expected) / static_cast<double>(trials));
  return out;
}

bool VerificationReport::all_pass() const {
  for (const auto& [k, v] : passes)
    if (!v) return false;
  return true;
}

VerificationReport verify_mesh(const Mesh& mesh, const FunctionSpace& space, const KernelProfile& profile,
                               const VerifyOptions& options) {
  if (mesh.N != 0 && mesh.N != space.size())
    fail(ErrorKind::consistency, "mesh was built for N = " + std::to_string(mesh.N) + ", space has N = " +
                                     std::to_string(space.size()));
  space.domain().check_points(mesh.points);
  VerificationReport rep;
  rep.strategy = std::string(to_string(mesh.strategy));
  rep.level = space.level();
  rep.N = space.size();
  rep.M = mesh.M();
  rep.weighted = mesh.strategy == Strategy::muv_wam;
  rep.delta_target = options.delta;
  const GramResult g = gram_deviation(space, mesh.points, rep.weighted);
  rep.gram_deviation = g.deviation;
  rep.sigma_min = g.sigma_min;
  const bool am = mesh.strategy == Strategy::uniform_am || mesh.strategy == Strategy::nu_am;
  if (!am) rep.passes["gram"] = g.deviation <= options.delta;
  rep.C_bound_l2 = std::sqrt(profile.K_upper() / (1.0 - options.delta));
  if (rep.weighted) rep.C_bound_l2 *= std::sqrt(static_cast<double>(rep.N));
  if (options.compute_c_hat) {
    const TensorGrid grid = resolve_grid(space.domain(), options.lp_grid, profile.R_mu);
    const SupRatio s = sup_ratio_constant(space, mesh.points, snake_points(grid), profile.K_upper());
    rep.C_hat = s.C_hat;
    rep.C_cheap = s.cheap_bound;
    rep.polygon_factor = s.polygon_factor;
    rep.hR = grid.covering_radius() * profile.R_mu;
    rep.lp_points = static_cast<double>(s.lp_points);
    const double lower = s.C_hat / s.polygon_factor;
    rep.passes["c_hat_at_least_one"] = s.C_hat >= 1.0 - 1e-9;
    rep.passes["cheap_bound"] = lower <= s.cheap_bound + 1e-8;
    if (g.deviation <= options.delta) rep.passes["sandwich"] = lower <= (1.0 + rep.hR) * rep.C_bound_l2;
    if (am) rep.passes["am_constant"] = s.C_hat <= options.k / (options.k - 2.0);
  }
  return rep;
}

std::string format_report(const VerificationReport& r) {
  std::ostringstream os;
  os.precision(12);
  os << "strategy=" << r.strategy << "\n"
     << "level=" << r.level << "\n"
     << "N=" << r.N << "\n"
     << "M=" << r.M << "\n"
     << "weighted=" << (r.weighted ? "true" : "false") << "\n"
     << "gram_deviation=" << r.gram_deviation << "\n"
     << "delta_target=" << r.delta_target << "\n"
     << "sigma_min=" << r.sigma_min << "\n"
     << "C_hat=" << r.C_hat << "\n"
     << "C_cheap=" << r.C_cheap << "\n"
     << "C_bound_l2=" << r.C_bound_l2 << "\n"
     << "polygon_factor=" << r.polygon_factor << "\n"
     << "hR=" << r.hR << "\n"
     << "lp_points=" << r.lp_points << "\n";
  for (const auto& [k, v] : r.passes) os << "pass." << k << "=" << (v ? "true" : "false") << "\n";
  return os.str();
}

}  // namespace rwam
