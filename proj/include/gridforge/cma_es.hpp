#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "gridforge/rng.hpp"

namespace gridforge {

// Covariance matrix adaptation evolution strategy with weighted
// recombination, rank-1 and rank-mu covariance updates and cumulative
// step-size adaptation. Maximizing: `order` passed to tell() lists
// sample indices best first. Eigendecomposition is lazy; the factors
// are part of the serialized state so resumed runs stay bit-identical.
class CmaEs {
public:
    CmaEs(int dimension, int batch_size, double sigma0,
          Eigen::VectorXd mean0);

    // batch_size samples: mean + sigma * B * diag(D) * z.
    std::vector<Eigen::VectorXd> ask(Rng& rng);

    // solutions must be the vectors returned by the matching ask(), in
    // ask order; order ranks their indices best first. all_tied marks a
    // batch with no ranking information: the mean stays put and only
    // the path decay runs.
    void tell(const std::vector<Eigen::VectorXd>& solutions,
              const std::vector<int>& order, bool all_tied = false);

    // True when the sampler can no longer make progress (degenerate
    // covariance spectrum or a step size out of numeric range).
    bool needs_restart() const;

    // Reset to the given mean with the initial step size and an
    // identity covariance.
    void reset(Eigen::VectorXd new_mean);

    const Eigen::VectorXd& mean() const { return mean_; }
    double step_size() const { return sigma_; }
    int dimension() const { return n_; }
    int batch_size() const { return lambda_; }
    long long generation() const { return generation_; }
    const Eigen::MatrixXd& covariance() const { return cov_; }

    // Test support: replace the covariance (and its factors) directly.
    void set_covariance(const Eigen::MatrixXd& cov);

    std::string to_json() const;
    static CmaEs from_json(const std::string& text);

private:
    void decompose();

    int n_ = 0;
    int lambda_ = 0;
    int mu_ = 0;
    double sigma0_ = 0.2;
    double sigma_ = 0.2;
    Eigen::VectorXd weights_;
    double mu_eff_ = 0.0;
    double cc_ = 0.0, cs_ = 0.0, c1_ = 0.0, cmu_ = 0.0, damps_ = 0.0;
    double chi_n_ = 0.0;
    int eigen_interval_ = 1;

    Eigen::VectorXd mean_;
    Eigen::MatrixXd cov_;
    Eigen::MatrixXd eigen_basis_;   // B
    Eigen::VectorXd eigen_scale_;   // D (sqrt of eigenvalues)
    Eigen::VectorXd path_sigma_;
    Eigen::VectorXd path_cov_;
    long long generation_ = 0;
    int gens_since_eigen_ = 0;
    bool degenerate_ = false;
};

// x1 + sigma_iso*N(0,I) + sigma_line*N(0,1)*(x2-x1), the directional
// crossover used by the MAP-Elites variation operator.
std::vector<float> iso_line_variation(const std::vector<float>& x1,
                                      const std::vector<float>& x2,
                                      double sigma_iso, double sigma_line,
                                      Rng& rng);

}  // namespace gridforge
