#include "rwam/measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "rwam/error.hpp"
#include "rwam/rng.hpp"

namespace rwam {

std::string_view to_string(MeasureKind k) noexcept {
  switch (k) {
    case MeasureKind::base_mu: return "base-mu";
    case MeasureKind::induced_muV: return "induced-muV";
    case MeasureKind::gradient_nu: return "gradient-nu";
  }
  return "unknown";
}

namespace {

std::shared_ptr<const TabulatedJacobiQuantile> quantile_table(double alpha, double beta) {
  static std::mutex mu;
  static std::map<std::pair<double, double>, std::shared_ptr<const TabulatedJacobiQuantile>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{alpha, beta}];
  if (!slot) slot = std::make_shared<const TabulatedJacobiQuantile>(alpha, beta);
  return slot;
}

// Univariate draw from the Jacobi probability measure on [-1, 1].
class ReferenceDraw {
 public:
  explicit ReferenceDraw(const BaseMeasure& m)
      : uniform_(m.is_uniform()), table_(uniform_ ? nullptr : quantile_table(m.alpha, m.beta)) {}
  double operator()(Rng& rng) const {
    const double u = rng.uniform();
    return uniform_ ? 2.0 * u - 1.0 : (*table_)(u);
  }

 private:
  bool uniform_;
  std::shared_ptr<const TabulatedJacobiQuantile> table_;
};

double to_box(const Box& box, int j, double y) {
  return std::clamp(box.lower(j) + 0.5 * (y + 1.0) * box.width(j), box.lower(j), box.upper(j));
}

std::string location(const PointSet& p, Eigen::Index m) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index j = 0; j < p.cols(); ++j) os << (j ? ", " : "") << p(m, j);
  os << ")";
  return os.str();
}

}  // namespace

SampleRun sample_mu(const FunctionSpace& space, std::size_t count, std::uint64_t seed) {
  require(count >= 1, ErrorKind::precondition, "sample count must be >= 1");
  const Box& box = space.domain();
  const ReferenceDraw draw(space.measure());
  Rng rng(seed);
  SampleRun run;
  run.points.resize(static_cast<Eigen::Index>(count), box.dim());
  for (Eigen::Index m = 0; m < run.points.rows(); ++m)
    for (int j = 0; j < box.dim(); ++j) run.points(m, j) = to_box(box, j, draw(rng));
  run.diagnostics = {count, count};
  return run;
}

// ---------------------------------------------------------------------------

InducedSampler::InducedSampler(SpacePtr space, const GridSpec& grid) : space_(std::move(space)) {
  require(space_ != nullptr, ErrorKind::precondition, "null space");
  if (space_->family() == Family::exponential) return;
  tensor_ = dynamic_cast<const TensorJacobiSpace*>(space_.get());
  if (tensor_) {
    const JacobiRecurrence& rec = tensor_->recurrence();
    const int deg = rec.max_degree();
    axis_env_.assign(deg + 1, 0.0);
    std::vector<double> p(deg + 1);
    const int n = 8192;
    for (int g = 0; g <= n; ++g) {
      rec.eval(-1.0 + 2.0 * g / n, p);
      for (int k = 0; k <= deg; ++k) axis_env_[k] = std::max(axis_env_[k], p[k] * p[k]);
    }
    for (auto& e : axis_env_) e *= kEnvelopeSafety;
    axis_env_[0] = 1.0;
    return;
  }
  GridSpec g = grid;
  g.max_points = std::min<std::size_t>(g.max_points, std::size_t{1} << 16);
  const KernelProfile prof = kernel_profile(*space_, g);
  const PointSet pts = prof.grid.points();
  env_.assign(space_->size(), 0.0);
  for (Eigen::Index s = 0; s < pts.rows(); s += 4096) {
    const Eigen::Index c = std::min<Eigen::Index>(4096, pts.rows() - s);
    const Eigen::MatrixXd v = space_->eval(pts.middleRows(s, c)).cwiseAbs2();
    for (Eigen::Index i = 0; i < v.cols(); ++i) env_[i] = std::max(env_[i], v.col(i).maxCoeff());
  }
  for (auto& e : env_) e *= kEnvelopeSafety;
}

double InducedSampler::envelope(std::size_t i) const {
  if (space_->family() == Family::exponential) return 1.0;
  if (tensor_) {
    double e = 1.0;
    for (int k : tensor_->index_set()[i]) e *= axis_env_[k];
    return e;
  }
  return env_[i];
}

SampleRun InducedSampler::sample(std::size_t count, std::uint64_t seed) {
  require(count >= 1, ErrorKind::precondition, "sample count must be >= 1");
  if (space_->family() == Family::exponential) return sample_mu(*space_, count, seed);
  const Box& box = space_->domain();
  const int d = box.dim();
  const std::size_t n = space_->size();
  const ReferenceDraw draw(space_->measure());
  Rng rng(seed);
  SampleRun run;
  run.points.resize(static_cast<Eigen::Index>(count), d);
  auto& diag = run.diagnostics;

  if (tensor_) {
    const JacobiRecurrence& rec = tensor_->recurrence();
    std::vector<double> p(rec.max_degree() + 1);
    for (Eigen::Index m = 0; m < run.points.rows(); ++m) {
      const MultiIndex& a = tensor_->index_set()[rng.below(n)];
      for (int j = 0; j < d; ++j) {
        const int k = a[j];
        for (;;) {
          const double y = draw(rng);
          const double u = rng.uniform();
          ++diag.proposals;
          double val = 1.0;
          if (k > 0) {
            rec.eval(y, std::span<double>(p.data(), k + 1));
            val = p[k] * p[k];
            if (val > axis_env_[k]) {
              axis_env_[k] = kEnvelopeSafety * val;
              std::ostringstream os;
              os << "ratio " << val << " exceeds the degree-" << k << " envelope at reference coordinate " << y;
              fail(ErrorKind::envelope, os.str());
            }
            if (u * axis_env_[k] >= val) continue;
          }
          ++diag.accepts;
          run.points(m, j) = to_box(box, j, y);
          break;
        }
      }
    }
    return run;
  }

  PointSet x(1, d);
  for (Eigen::Index m = 0; m < run.points.rows(); ++m) {
    const std::size_t i = rng.below(n);
    for (;;) {
      for (int j = 0; j < d; ++j) x(0, j) = to_box(box, j, draw(rng));
      const double u = rng.uniform();
      ++diag.proposals;
      const double val = std::norm(space_->eval(x)(0, static_cast<Eigen::Index>(i)));
      if (val > env_[i]) {
        env_[i] = kEnvelopeSafety * val;
        fail(ErrorKind::envelope, "ratio " + std::to_string(val) + " exceeds the envelope of basis element " +
                                      std::to_string(i) + " at " + location(x, 0));
      }
      if (u * env_[i] < val) break;
    }
    ++diag.accepts;
    run.points.row(m) = x.row(0);
  }
  return run;
}

SampleRun sample_induced(SpacePtr space, std::size_t count, std::uint64_t seed) {
  InducedSampler s(std::move(space));
  return s.sample(count, seed);
}

// ---------------------------------------------------------------------------

NuSampler::NuSampler(SpacePtr space, const KernelProfile& profile) : space_(std::move(space)) {
  require(space_ != nullptr, ErrorKind::precondition, "null space");
  require(space_->has_gradient(), ErrorKind::unsupported, "gradient-weighted sampling needs gradients");
  require(profile.R_mu > 0.0 && profile.R_min >= 1e-12 * profile.R_mu, ErrorKind::precondition,
          "R(x) is not strictly positive on the evaluation grid");
  // A constant R means nu is uniform; mark it with a zero envelope.
  if (profile.R_mu - profile.R_min > 1e-12 * profile.R_mu)
    env_ = kEnvelopeSafety * std::pow(profile.R_mu, space_->dim());
}

SampleRun NuSampler::sample(std::size_t count, std::uint64_t seed) {
  require(count >= 1, ErrorKind::precondition, "sample count must be >= 1");
  const Box& box = space_->domain();
  const int d = box.dim();
  Rng rng(seed);
  SampleRun run;
  run.points.resize(static_cast<Eigen::Index>(count), d);
  auto& diag = run.diagnostics;
  if (env_ == 0.0) {
    for (Eigen::Index m = 0; m < run.points.rows(); ++m)
      for (int j = 0; j < d; ++j) run.points(m, j) = rng.uniform(box.lower(j), box.upper(j));
    diag = {count, count};
    return run;
  }
  constexpr Eigen::Index kBatch = 1024;
  constexpr std::uint64_t kWindow = 100000;
  std::uint64_t win_prop = 0, win_acc = 0;
  PointSet batch(kBatch, d);
  std::vector<double> u(kBatch);
  Eigen::Index filled = 0;
  while (filled < run.points.rows()) {
    for (Eigen::Index b = 0; b < kBatch; ++b) {
      for (int j = 0; j < d; ++j) batch(b, j) = rng.uniform(box.lower(j), box.upper(j));
      u[b] = rng.uniform();
    }
    const Eigen::VectorXd r2 = space_->grad_norm_sq(batch);
    for (Eigen::Index b = 0; b < kBatch && filled < run.points.rows(); ++b) {
      const double val = std::pow(std::max(r2[b], 0.0), 0.5 * d);
      ++diag.proposals;
      ++win_prop;
      if (val > env_) {
        env_ = kEnvelopeSafety * val;
        fail(ErrorKind::envelope, "R^d = " + std::to_string(val) + " exceeds the envelope at " + location(batch, b));
      }
      if (u[b] * env_ < val) {
        ++diag.accepts;
        ++win_acc;
        run.points.row(filled++) = batch.row(b);
      }
      if (win_prop == kWindow) {
        if (static_cast<double>(win_acc) < 1e-4 * static_cast<double>(kWindow))
          fail(ErrorKind::efficiency,
               "acceptance rate below 1e-4 over 1e5 proposals; review the envelope or the domain");
        win_prop = win_acc = 0;
      }
    }
  }
  return run;
}

SampleRun sample_nu(SpacePtr space, std::size_t count, std::uint64_t seed, const GridSpec& grid) {
  const KernelProfile prof = kernel_profile(*space, grid);
  NuSampler s(std::move(space), prof);
  return s.sample(count, seed);
}

}  // namespace rwam
