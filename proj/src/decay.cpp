#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "primesim/impact_stats.hpp"

namespace primesim::impact {

DecayKernel decay_regression(std::span<const AdjustedSample> samples, double delta, std::size_t max_lag,
                             Backend backend) {
  if (samples.empty()) throw std::invalid_argument("decay_regression: no samples");
  if (!std::is_sorted(samples.begin(), samples.end(),
                      [](const AdjustedSample& a, const AdjustedSample& b) { return a.window < b.window; })) {
    throw std::invalid_argument("decay_regression: samples must be ordered by window");
  }

  // Dense series over the window grid; gaps are windows without a usable sample.
  const std::int64_t first = samples.front().window;
  const auto span = static_cast<std::size_t>(samples.back().window - first + 1);
  std::vector<double> x(span, 0.0), y(span, 0.0);
  std::vector<bool> usable(span, false);
  for (const auto& s : samples) {
    const auto t = static_cast<std::size_t>(s.window - first);
    x[t] = signed_power(s.q, delta);
    y[t] = s.y;
    usable[t] = true;
  }

  std::vector<std::size_t> rows;
  std::size_t run = 0, in_long_runs = 0;
  for (std::size_t t = 0; t < span; ++t) {
    run = usable[t] ? run + 1 : 0;
    if (run > max_lag) {
      rows.push_back(t);
      // A run first qualifies at length K+1, which brings its first K samples with it.
      in_long_runs += run == max_lag + 1 ? max_lag + 1 : 1;
    }
  }
  if (in_long_runs < 10 * max_lag) {
    throw std::invalid_argument("decay_regression: need at least 10*K consecutive usable samples");
  }

  const kernels::LaggedGram normal = kernels::lagged_gram(x, y, max_lag, rows, backend);
  const auto p = static_cast<Eigen::Index>(max_lag + 1);
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> gram(
      normal.gram.data(), p, p);
  const Eigen::Map<const Eigen::VectorXd> rhs(normal.rhs.data(), p);

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  const double condition = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(condition <= kMaxCondition)) {
    std::ostringstream msg;
    msg << "decay_regression: rank-deficient design (condition number " << condition << ", limit " << kMaxCondition
        << ")";
    throw NumericalError(msg.str());
  }

  const Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  const Eigen::VectorXd beta = ldlt.solve(rhs);
  const Eigen::MatrixXd inverse = ldlt.solve(Eigen::MatrixXd::Identity(p, p));

  double rss = 0.0;
  for (std::size_t t : rows) {
    double fitted = 0.0;
    for (Eigen::Index k = 0; k < p; ++k) fitted += beta[k] * x[t - static_cast<std::size_t>(k)];
    rss += (y[t] - fitted) * (y[t] - fitted);
  }
  const double dof = static_cast<double>(rows.size()) - static_cast<double>(p);
  const double sigma2 = dof > 0 ? rss / dof : std::numeric_limits<double>::quiet_NaN();

  DecayKernel out;
  out.condition = condition;
  out.rows = rows.size();
  out.beta.resize(static_cast<std::size_t>(p));
  out.cumulative.resize(static_cast<std::size_t>(p));
  out.std_error.resize(static_cast<std::size_t>(p));
  double cum = 0.0;
  for (Eigen::Index k = 0; k < p; ++k) {
    const auto i = static_cast<std::size_t>(k);
    out.beta[i] = beta[k];
    cum += beta[k];
    out.cumulative[i] = cum;
    out.std_error[i] = std::sqrt(std::max(0.0, sigma2 * inverse(k, k)));
  }
  return out;
}

}  // namespace primesim::impact
