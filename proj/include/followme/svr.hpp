#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>

namespace followme {

enum class KernelKind { kRbf, kLinear };

struct SvrHyper {
  KernelKind kernel = KernelKind::kRbf;
  double gamma = 0.0;  // 0 -> 1/feature_dim
  double C = 10.0;
  double epsilon = 0.01;
  double tol = 1e-3;        // KKT duality-gap stopping tolerance
  long max_iter = 2000000;  // hard safety cap on SMO pair updates
};

/// Epsilon-SVR for one output dimension: f(x) = sum_i coeff_i K(sv_i, x) + bias.
struct SvrOutputModel {
  Eigen::MatrixXd support_vectors;  // n_sv x feature_dim
  Eigen::VectorXd coeffs;           // n_sv, in [-C, C]
  double bias = 0.0;
};

/// Two independent epsilon-SVRs sharing features: outputs (v, omega).
struct SvrParams {
  int input_dim = 0;
  SvrHyper hyper;
  std::array<SvrOutputModel, 2> outputs;
};

struct SvrTrainInfo {
  std::array<double, 2> kkt_gap{};   // final max-violating-pair gap per output
  std::array<long, 2> iterations{};
  std::array<bool, 2> converged{};
};

/// Train one epsilon-SVR per output dimension with an SMO dual solver
/// (maximal-violating-pair working set selection) to the configured KKT
/// tolerance. Rows of `inputs` are samples; `targets` is n x 2.
SvrParams svr_train(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                    const SvrHyper& hyper, SvrTrainInfo* info = nullptr);

Eigen::Vector2d svr_predict(const SvrParams& params, const Eigen::VectorXd& x);

double kernel_eval(KernelKind kind, double gamma, const Eigen::VectorXd& a,
                   const Eigen::VectorXd& b);

}  // namespace followme
