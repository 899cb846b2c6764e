#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>

#include <Eigen/Core>

#include "rwam/function_space.hpp"
#include "rwam/kernel.hpp"
#include "rwam/meshgen.hpp"

namespace rwam {

struct GramResult {
  double deviation = 0.0;  // max |sigma_i^2 - 1| = spectral norm of A*A - I
  double sigma_min = 0.0;  // of the scaled design matrix A
  double sigma_max = 0.0;
};

/// Deviation of an already scaled design matrix (rows x N).
GramResult gram_deviation_of(const Eigen::MatrixXcd& A);

/// A_{m,i} = v_i(x_m) / sqrt(M), rows scaled by sqrt(lambda(x_m)) when
/// weighted. Throws a shape error when M < N.
Eigen::MatrixXcd design_matrix(const FunctionSpace& space, const PointSet& points, bool weighted);
GramResult gram_deviation(const FunctionSpace& space, const PointSet& points, bool weighted);

struct L2Equivalence {
  bool pass = false;
  double min_ratio = 0.0;  // min over trials of |v|^2_A / |v|^2_mu
  double max_ratio = 0.0;
  double eig_min = 0.0;  // extremes of A*A
  double eig_max = 0.0;
  /// Ratios at the extreme eigenvectors (equal eig_min / eig_max).
  double eigvec_min_ratio = 0.0;
  double eigvec_max_ratio = 0.0;
};

/// Checks (1 - delta) <= |v|^2_A / |v|^2_mu <= (1 + delta) for `trials`
/// random unit coefficient vectors and at the extreme eigenvectors.
L2Equivalence l2_equivalence_check(const FunctionSpace& space, const PointSet& points, bool weighted, double delta,
                                   int trials, std::uint64_t seed);

struct SupRatio {
  double C_hat = 0.0;  // LP value; +inf when the mesh is not determining
  bool bounded = true;
  Eigen::VectorXd argmax;       // evaluation point attaining C_hat
  Eigen::VectorXd certificate;  // null coefficient vector when unbounded
  double polygon_factor = 1.0;  // complex spaces: C_true >= C_hat / factor
  double sigma_min = 0.0;       // of the selected N-point alternant
  double cheap_bound = 0.0;     // K_mu sqrt(N) / sigma_min
  std::size_t lp_points = 0;
  long pivots = 0;
};

/// Largest over eval points x of max |v(x)| subject to |v| <= 1 on the
/// mesh. Complex spaces replace the unit disk by the circumscribing
/// 16-gon. `K_mu` is only used for the cheap bound. With `include_mesh` the
/// mesh counts as part of the evaluation set; every LP value there is at
/// most 1 and the constant is at least 1, so C_hat is floored at 1.
SupRatio sup_ratio_constant(const FunctionSpace& space, const PointSet& mesh, const PointSet& eval_points,
                            double K_mu, bool include_mesh = true);

/// Grid points in boustrophedon order (neighbours are adjacent).
PointSet snake_points(const TensorGrid& grid);

struct AlternantResult {
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  bool nonsingular = false;  // sigma_min > 1e-12 sigma_max
};
AlternantResult alternant_check(const FunctionSpace& space, const PointSet& points);

struct HaarResult {
  int M = 0;
  std::size_t trials = 0;
  std::size_t failures = 0;
  double rate = 0.0;
  double expected = 0.0;  // 2^-M
  double sigma = 0.0;     // binomial standard deviation of the rate
};

/// Fraction of trials in which M uniform draws on [0, 1] all avoid
/// [0, 1/2], so the indicator of [0, 1/2] vanishes on the mesh.
HaarResult haar_failure_experiment(int M, std::size_t trials, std::uint64_t seed);

struct VerifyOptions {
  double delta = 0.5;
  bool compute_c_hat = true;
  GridSpec lp_grid{0.05, std::size_t{1} << 14, 65, {}};
  int l2_trials = 100;
  std::uint64_t seed = 0;
  double k = 3.0;  // AM strategies: C_hat target k / (k - 2)
};

struct VerificationReport {
  std::string strategy;
  int level = 0;
  std::size_t N = 0;
  std::size_t M = 0;
  bool weighted = false;
  double gram_deviation = 0.0;
  double delta_target = 0.0;
  double sigma_min = 0.0;
  double C_hat = 0.0;
  double C_cheap = 0.0;
  double C_bound_l2 = 0.0;
  double polygon_factor = 1.0;
  double hR = 0.0;       // achieved h R_mu of the C_hat grid
  double lp_points = 0;  // evaluation points used
  std::map<std::string, bool> passes;

  bool all_pass() const;
};

/// Runs every applicable check on one mesh. Weighted Gramians are used for
/// muV meshes. AM meshes are judged by the sup constant; their Gram
/// deviation is reported without a pass entry. C_bound_l2 is
/// sqrt(K/(1-delta)), times sqrt(N) when weighted.
VerificationReport verify_mesh(const Mesh& mesh, const FunctionSpace& space, const KernelProfile& profile,
                               const VerifyOptions& options = {});

/// key=value text rendering.
std::string format_report(const VerificationReport& report);

}  // namespace rwam
