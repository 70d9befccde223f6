#include "followme/svr.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "followme/errors.hpp"

namespace followme {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTau = 1e-12;  // curvature floor for degenerate pairs

/// Lazily evaluated, capacity-capped cache of base-kernel rows K(x_i, .).
class KernelRowCache {
 public:
  KernelRowCache(const Eigen::MatrixXd& inputs, KernelKind kind, double gamma,
                 std::size_t max_rows)
      : inputs_(inputs), kind_(kind), gamma_(gamma), max_rows_(max_rows),
        rows_(static_cast<std::size_t>(inputs.rows())),
        age_(static_cast<std::size_t>(inputs.rows()), 0) {
    if (kind_ == KernelKind::kRbf) {
      sq_norms_ = inputs.rowwise().squaredNorm();
    }
  }

  const Eigen::VectorXd& row(Eigen::Index i) {
    auto& slot = rows_[static_cast<std::size_t>(i)];
    if (slot.size() == 0) {
      compute_row(i, slot);
      ++cached_;
      if (cached_ > max_rows_) evict_oldest();
    }
    age_[static_cast<std::size_t>(i)] = ++clock_;
    return slot;
  }

 private:
  void compute_row(Eigen::Index i, Eigen::VectorXd& out) const {
    if (kind_ == KernelKind::kLinear) {
      out = inputs_ * inputs_.row(i).transpose();
    } else {
      const Eigen::VectorXd dots = inputs_ * inputs_.row(i).transpose();
      out = (-gamma_ *
             (sq_norms_.array() - 2.0 * dots.array() + sq_norms_[i]).max(0.0))
                .exp();
    }
  }

  void evict_oldest() {
    // Drop the least recently touched quarter in one sweep.
    std::vector<std::pair<std::uint64_t, std::size_t>> live;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (rows_[r].size() != 0) live.emplace_back(age_[r], r);
    }
    std::sort(live.begin(), live.end());
    const std::size_t drop = live.size() / 4 + 1;
    for (std::size_t k = 0; k < drop && k < live.size(); ++k) {
      rows_[live[k].second].resize(0);
      --cached_;
    }
  }

  const Eigen::MatrixXd& inputs_;
  KernelKind kind_;
  double gamma_;
  std::size_t max_rows_;
  Eigen::VectorXd sq_norms_;
  std::vector<Eigen::VectorXd> rows_;
  std::vector<std::uint64_t> age_;
  std::uint64_t clock_ = 0;
  std::size_t cached_ = 0;
};

/// SMO over the doubled variable set of the epsilon-SVR dual:
///   min 1/2 a^T Q a + p^T a,  s.t. s^T a = 0, 0 <= a <= C,
/// with variables a_k (k < n: alpha_k, sign +1, p_k = eps - y_k;
/// k >= n: alpha*_k, sign -1, p_k = eps + y_k) and Q_kl = s_k s_l K_kl.
class SmoSolver {
 public:
  SmoSolver(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
            const SvrHyper& hyper, double gamma)
      : n_(inputs.rows()), hyper_(hyper),
        cache_(inputs, hyper.kernel, gamma,
               std::max<std::size_t>(64, (256ULL << 20) / 8 / std::max<Eigen::Index>(n_, 1))) {
    alpha_ = Eigen::VectorXd::Zero(2 * n_);
    grad_.resize(2 * n_);
    grad_.head(n_) = Eigen::VectorXd::Constant(n_, hyper.epsilon) - targets;
    grad_.tail(n_) = Eigen::VectorXd::Constant(n_, hyper.epsilon) + targets;
    diag_.resize(n_);
    for (Eigen::Index i = 0; i < n_; ++i) {
      diag_[i] = hyper.kernel == KernelKind::kRbf ? 1.0 : cache_.row(i)[i];
    }
  }

  double sign(Eigen::Index k) const { return k < n_ ? 1.0 : -1.0; }
  Eigen::Index base(Eigen::Index k) const { return k < n_ ? k : k - n_; }

  // -s_k * grad_k, the quantity whose spread over the feasible directions
  // measures KKT violation.
  double violation(Eigen::Index k) const { return -sign(k) * grad_[k]; }

  bool in_up_set(Eigen::Index k) const {
    return k < n_ ? alpha_[k] < hyper_.C : alpha_[k] > 0.0;
  }
  bool in_low_set(Eigen::Index k) const {
    return k < n_ ? alpha_[k] > 0.0 : alpha_[k] < hyper_.C;
  }

  void solve(double* final_gap, long* iterations, bool* converged) {
    const Eigen::Index m = 2 * n_;
    long iter = 0;
    double gap = kInf;
    while (iter < hyper_.max_iter) {
      Eigen::Index i = -1, j = -1;
      double up_max = -kInf, low_min = kInf;
      for (Eigen::Index k = 0; k < m; ++k) {
        if (in_up_set(k) && violation(k) > up_max) {
          up_max = violation(k);
          i = k;
        }
        if (in_low_set(k) && violation(k) < low_min) {
          low_min = violation(k);
          j = k;
        }
      }
      gap = up_max - low_min;
      if (i < 0 || j < 0 || gap <= hyper_.tol) break;
      update_pair(i, j);
      ++iter;
    }
    if (final_gap) *final_gap = gap;
    if (iterations) *iterations = iter;
    if (converged) *converged = gap <= hyper_.tol;
  }

  /// beta_i = alpha_i - alpha*_i, the expansion coefficients of f.
  Eigen::VectorXd beta() const { return alpha_.head(n_) - alpha_.tail(n_); }

  /// Constraint multiplier: f(x) = sum beta K + bias with bias = -rho.
  double bias() const {
    double ub = kInf, lb = -kInf, sum_free = 0.0;
    Eigen::Index n_free = 0;
    for (Eigen::Index k = 0; k < 2 * n_; ++k) {
      const double yg = sign(k) * grad_[k];
      if (alpha_[k] >= hyper_.C) {
        if (sign(k) < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
      } else if (alpha_[k] <= 0.0) {
        if (sign(k) > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
      } else {
        ++n_free;
        sum_free += yg;
      }
    }
    const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;
    return -rho;
  }

 private:
  double q_entry(const Eigen::VectorXd& krow_base_i, Eigen::Index i, Eigen::Index k) const {
    return sign(i) * sign(k) * krow_base_i[base(k)];
  }

  void update_pair(Eigen::Index i, Eigen::Index j) {
    const Eigen::VectorXd& ki = cache_.row(base(i));
    const Eigen::VectorXd& kj = cache_.row(base(j));
    const double si = sign(i), sj = sign(j);
    const double qii = diag_[base(i)];
    const double qjj = diag_[base(j)];
    const double qij = si * sj * ki[base(j)];

    const double old_ai = alpha_[i], old_aj = alpha_[j];
    if (si != sj) {
      double quad = qii + qjj + 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad_[i] - grad_[j]) / quad;
      const double diff = alpha_[i] - alpha_[j];
      alpha_[i] += delta;
      alpha_[j] += delta;
      if (diff > 0.0 && alpha_[j] < 0.0) {
        alpha_[j] = 0.0;
        alpha_[i] = diff;
      } else if (diff <= 0.0 && alpha_[i] < 0.0) {
        alpha_[i] = 0.0;
        alpha_[j] = -diff;
      }
      if (diff > 0.0 && alpha_[i] > hyper_.C) {
        alpha_[i] = hyper_.C;
        alpha_[j] = hyper_.C - diff;
      } else if (diff <= 0.0 && alpha_[j] > hyper_.C) {
        alpha_[j] = hyper_.C;
        alpha_[i] = hyper_.C + diff;
      }
    } else {
      double quad = qii + qjj - 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad_[i] - grad_[j]) / quad;
      const double sum = alpha_[i] + alpha_[j];
      alpha_[i] -= delta;
      alpha_[j] += delta;
      if (sum > hyper_.C && alpha_[i] > hyper_.C) {
        alpha_[i] = hyper_.C;
        alpha_[j] = sum - hyper_.C;
      } else if (sum <= hyper_.C && alpha_[j] < 0.0) {
        alpha_[j] = 0.0;
        alpha_[i] = sum;
      }
      if (sum > hyper_.C && alpha_[j] > hyper_.C) {
        alpha_[j] = hyper_.C;
        alpha_[i] = sum - hyper_.C;
      } else if (sum <= hyper_.C && alpha_[i] < 0.0) {
        alpha_[i] = 0.0;
        alpha_[j] = sum;
      }
    }

    const double dai = alpha_[i] - old_ai;
    const double daj = alpha_[j] - old_aj;
    if (dai == 0.0 && daj == 0.0) return;
    // grad_k += Q_ki * dai + Q_kj * daj over the doubled index set
    for (Eigen::Index k = 0; k < n_; ++k) {
      const double gi_term = si * ki[k] * dai + sj * kj[k] * daj;
      grad_[k] += gi_term;        // sign(k) = +1
      grad_[n_ + k] -= gi_term;   // sign(k) = -1
    }
  }

  Eigen::Index n_;
  SvrHyper hyper_;
  KernelRowCache cache_;
  Eigen::VectorXd alpha_;
  Eigen::VectorXd grad_;
  Eigen::VectorXd diag_;
};

}  // namespace

double kernel_eval(KernelKind kind, double gamma, const Eigen::VectorXd& a,
                   const Eigen::VectorXd& b) {
  if (kind == KernelKind::kLinear) return a.dot(b);
  return std::exp(-gamma * (a - b).squaredNorm());
}

SvrParams svr_train(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                    const SvrHyper& hyper, SvrTrainInfo* info) {
  const Eigen::Index n = inputs.rows();
  if (n < 2) {
    throw InsufficientData("svr_train: need at least 2 samples");
  }
  if (targets.rows() != n || targets.cols() != 2) {
    throw ShapeMismatch("svr_train: targets must be n x 2");
  }
  SvrParams params;
  params.input_dim = static_cast<int>(inputs.cols());
  params.hyper = hyper;
  if (params.hyper.gamma <= 0.0) {
    params.hyper.gamma = 1.0 / static_cast<double>(inputs.cols());
  }

  for (int out = 0; out < 2; ++out) {
    SmoSolver solver(inputs, targets.col(out), params.hyper, params.hyper.gamma);
    double gap = 0.0;
    long iters = 0;
    bool converged = false;
    solver.solve(&gap, &iters, &converged);
    if (info) {
      info->kkt_gap[out] = gap;
      info->iterations[out] = iters;
      info->converged[out] = converged;
    }

    const Eigen::VectorXd beta = solver.beta();
    Eigen::Index n_sv = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (beta[i] != 0.0) ++n_sv;
    }
    SvrOutputModel& model = params.outputs[static_cast<std::size_t>(out)];
    model.support_vectors.resize(n_sv, inputs.cols());
    model.coeffs.resize(n_sv);
    Eigen::Index row = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (beta[i] != 0.0) {
        model.support_vectors.row(row) = inputs.row(i);
        model.coeffs[row] = beta[i];
        ++row;
      }
    }
    model.bias = solver.bias();
  }
  return params;
}

Eigen::Vector2d svr_predict(const SvrParams& params, const Eigen::VectorXd& x) {
  if (x.size() != params.input_dim) {
    throw ShapeMismatch("svr_predict: feature dimension mismatch");
  }
  Eigen::Vector2d y;
  for (int out = 0; out < 2; ++out) {
    const SvrOutputModel& model = params.outputs[static_cast<std::size_t>(out)];
    double acc = model.bias;
    if (model.coeffs.size() > 0) {
      if (params.hyper.kernel == KernelKind::kLinear) {
        acc += model.coeffs.dot(model.support_vectors * x);
      } else {
        const Eigen::VectorXd d2 =
            (model.support_vectors.rowwise() - x.transpose()).rowwise().squaredNorm();
        acc += model.coeffs.dot((-params.hyper.gamma * d2.array()).exp().matrix());
      }
    }
    y[out] = acc;
  }
  return y;
}

}  // namespace followme
