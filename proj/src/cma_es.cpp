#include "gridforge/cma_es.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "gridforge/errors.hpp"
#include "json.hpp"

namespace gridforge {

namespace {

const char kB64Alphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string b64_encode(const void* data, size_t bytes) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::string out;
    out.reserve((bytes + 2) / 3 * 4);
    size_t i = 0;
    for (; i + 3 <= bytes; i += 3) {
        unsigned v = p[i] << 16 | p[i + 1] << 8 | p[i + 2];
        out += kB64Alphabet[v >> 18];
        out += kB64Alphabet[v >> 12 & 63];
        out += kB64Alphabet[v >> 6 & 63];
        out += kB64Alphabet[v & 63];
    }
    if (i < bytes) {
        unsigned v = p[i] << 16 | (i + 1 < bytes ? p[i + 1] << 8 : 0);
        out += kB64Alphabet[v >> 18];
        out += kB64Alphabet[v >> 12 & 63];
        out += i + 1 < bytes ? kB64Alphabet[v >> 6 & 63] : '=';
        out += '=';
    }
    return out;
}

std::vector<unsigned char> b64_decode(const std::string& s) {
    auto value_of = [](char c) -> int {
        if (c >= 'A' && c <= 'Z') return c - 'A';
        if (c >= 'a' && c <= 'z') return c - 'a' + 26;
        if (c >= '0' && c <= '9') return c - '0' + 52;
        if (c == '+') return 62;
        if (c == '/') return 63;
        return -1;
    };
    if (s.size() % 4 != 0)
        throw Error(ErrorCode::Io, "bad base64 length");
    std::vector<unsigned char> out;
    out.reserve(s.size() / 4 * 3);
    for (size_t i = 0; i < s.size(); i += 4) {
        int pad = 0;
        unsigned v = 0;
        for (int k = 0; k < 4; ++k) {
            char c = s[i + k];
            if (c == '=') {
                ++pad;
                v <<= 6;
            } else {
                int d = value_of(c);
                if (d < 0 || pad > 0)
                    throw Error(ErrorCode::Io, "bad base64 payload");
                v = v << 6 | static_cast<unsigned>(d);
            }
        }
        out.push_back(static_cast<unsigned char>(v >> 16));
        if (pad < 2) out.push_back(static_cast<unsigned char>(v >> 8 & 255));
        if (pad < 1) out.push_back(static_cast<unsigned char>(v & 255));
    }
    return out;
}

std::string encode_matrix(const Eigen::MatrixXd& m) {
    return b64_encode(m.data(), sizeof(double) * static_cast<size_t>(m.size()));
}

Eigen::MatrixXd decode_matrix(const std::string& s, int rows, int cols) {
    auto bytes = b64_decode(s);
    if (bytes.size() != sizeof(double) * static_cast<size_t>(rows) * cols)
        throw Error(ErrorCode::Io, "matrix payload size mismatch");
    Eigen::MatrixXd m(rows, cols);
    std::memcpy(m.data(), bytes.data(), bytes.size());
    return m;
}

}  // namespace

CmaEs::CmaEs(int dimension, int batch_size, double sigma0, Eigen::VectorXd mean0)
    : n_(dimension), lambda_(batch_size), sigma0_(sigma0), sigma_(sigma0) {
    if (n_ < 1) throw Error(ErrorCode::ConfigInvalid, "dimension must be positive");
    if (lambda_ < 2)
        throw Error(ErrorCode::ConfigInvalid, "batch size must be at least 2");
    if (!(sigma0 > 0.0))
        throw Error(ErrorCode::ConfigInvalid, "step size must be positive");
    if (mean0.size() != n_)
        throw Error(ErrorCode::DimensionMismatch, "mean length mismatch");

    mu_ = lambda_ / 2;
    weights_ = Eigen::VectorXd(mu_);
    for (int i = 0; i < mu_; ++i)
        weights_(i) = std::log((lambda_ + 1) / 2.0) - std::log(i + 1.0);
    weights_ /= weights_.sum();
    mu_eff_ = 1.0 / weights_.squaredNorm();

    double n = n_;
    cc_ = (4.0 + mu_eff_ / n) / (n + 4.0 + 2.0 * mu_eff_ / n);
    cs_ = (mu_eff_ + 2.0) / (n + mu_eff_ + 5.0);
    c1_ = 2.0 / ((n + 1.3) * (n + 1.3) + mu_eff_);
    cmu_ = std::min(1.0 - c1_, 2.0 * (mu_eff_ - 2.0 + 1.0 / mu_eff_) /
                                   ((n + 2.0) * (n + 2.0) + mu_eff_));
    damps_ = 1.0 + 2.0 * std::max(0.0, std::sqrt((mu_eff_ - 1.0) / (n + 1.0)) - 1.0) +
             cs_;
    chi_n_ = std::sqrt(n) * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));
    eigen_interval_ =
        std::max(1, static_cast<int>(1.0 / ((c1_ + cmu_) * n * 10.0)));

    mean_ = std::move(mean0);
    cov_ = Eigen::MatrixXd::Identity(n_, n_);
    eigen_basis_ = Eigen::MatrixXd::Identity(n_, n_);
    eigen_scale_ = Eigen::VectorXd::Ones(n_);
    path_sigma_ = Eigen::VectorXd::Zero(n_);
    path_cov_ = Eigen::VectorXd::Zero(n_);
}

std::vector<Eigen::VectorXd> CmaEs::ask(Rng& rng) {
    std::vector<Eigen::VectorXd> out;
    out.reserve(static_cast<size_t>(lambda_));
    for (int s = 0; s < lambda_; ++s) {
        Eigen::VectorXd z(n_);
        for (int k = 0; k < n_; ++k) z(k) = rng.normal();
        out.push_back(mean_ +
                      sigma_ * (eigen_basis_ *
                                (eigen_scale_.array() * z.array()).matrix()));
    }
    return out;
}

void CmaEs::tell(const std::vector<Eigen::VectorXd>& solutions,
                 const std::vector<int>& order, bool all_tied) {
    if (static_cast<int>(solutions.size()) != lambda_ ||
        static_cast<int>(order.size()) != lambda_)
        throw Error(ErrorCode::DimensionMismatch,
                    "tell needs exactly one batch of solutions");
    std::vector<char> seen(static_cast<size_t>(lambda_), 0);
    for (int idx : order) {
        if (idx < 0 || idx >= lambda_ || seen[static_cast<size_t>(idx)])
            throw Error(ErrorCode::ConfigInvalid,
                        "ranking is not a permutation of the batch");
        seen[static_cast<size_t>(idx)] = 1;
    }
    for (const auto& x : solutions) {
        if (x.size() != n_)
            throw Error(ErrorCode::DimensionMismatch, "solution length mismatch");
        if (!x.allFinite())
            throw Error(ErrorCode::NumericalFailure,
                        "non-finite solution passed to tell");
    }

    const Eigen::VectorXd old_mean = mean_;
    if (!all_tied) {
        Eigen::VectorXd new_mean = Eigen::VectorXd::Zero(n_);
        for (int i = 0; i < mu_; ++i)
            new_mean += weights_(i) * solutions[static_cast<size_t>(order[i])];
        mean_ = new_mean;
    }
    Eigen::VectorXd y_w = (mean_ - old_mean) / sigma_;

    // C^(-1/2) * y_w through the cached factors
    Eigen::VectorXd tmp = eigen_basis_.transpose() * y_w;
    tmp.array() /= eigen_scale_.array();
    Eigen::VectorXd c_inv_sqrt_yw = eigen_basis_ * tmp;

    path_sigma_ = (1.0 - cs_) * path_sigma_ +
                  std::sqrt(cs_ * (2.0 - cs_) * mu_eff_) * c_inv_sqrt_yw;

    double ps_norm = path_sigma_.norm();
    double expected = std::sqrt(
        1.0 - std::pow(1.0 - cs_, 2.0 * static_cast<double>(generation_ + 1)));
    bool h_sigma = ps_norm / expected < (1.4 + 2.0 / (n_ + 1.0)) * chi_n_;

    path_cov_ = (1.0 - cc_) * path_cov_;
    if (h_sigma)
        path_cov_ += std::sqrt(cc_ * (2.0 - cc_) * mu_eff_) * y_w;

    if (!all_tied) {
        Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(n_, n_);
        for (int i = 0; i < mu_; ++i) {
            Eigen::VectorXd y =
                (solutions[static_cast<size_t>(order[i])] - old_mean) / sigma_;
            rank_mu.noalias() += weights_(i) * y * y.transpose();
        }
        double delta_h = (1.0 - (h_sigma ? 1.0 : 0.0)) * cc_ * (2.0 - cc_);
        cov_ = (1.0 - c1_ - cmu_) * cov_ +
               c1_ * (path_cov_ * path_cov_.transpose() + delta_h * cov_) +
               cmu_ * rank_mu;
        cov_ = 0.5 * (cov_ + cov_.transpose()).eval();
    }

    sigma_ *= std::exp(cs_ / damps_ * (ps_norm / chi_n_ - 1.0));
    ++generation_;
    ++gens_since_eigen_;
    if (gens_since_eigen_ >= eigen_interval_) decompose();
    if (!std::isfinite(sigma_) || sigma_ < 1e-18 || sigma_ > 1e12)
        degenerate_ = true;
}

void CmaEs::decompose() {
    gens_since_eigen_ = 0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov_);
    if (solver.info() != Eigen::Success) {
        degenerate_ = true;
        return;
    }
    Eigen::VectorXd evals = solver.eigenvalues();
    double lo = evals.minCoeff(), hi = evals.maxCoeff();
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo <= 0.0 ||
        hi / lo > 1e14)
        degenerate_ = true;
    eigen_basis_ = solver.eigenvectors();
    eigen_scale_ = evals.cwiseMax(1e-30).cwiseSqrt();
}

bool CmaEs::needs_restart() const { return degenerate_; }

void CmaEs::reset(Eigen::VectorXd new_mean) {
    if (new_mean.size() != n_)
        throw Error(ErrorCode::DimensionMismatch, "mean length mismatch");
    mean_ = std::move(new_mean);
    sigma_ = sigma0_;
    cov_ = Eigen::MatrixXd::Identity(n_, n_);
    eigen_basis_ = Eigen::MatrixXd::Identity(n_, n_);
    eigen_scale_ = Eigen::VectorXd::Ones(n_);
    path_sigma_.setZero();
    path_cov_.setZero();
    generation_ = 0;
    gens_since_eigen_ = 0;
    degenerate_ = false;
}

void CmaEs::set_covariance(const Eigen::MatrixXd& cov) {
    if (cov.rows() != n_ || cov.cols() != n_)
        throw Error(ErrorCode::DimensionMismatch, "covariance shape mismatch");
    cov_ = 0.5 * (cov + cov.transpose());
    decompose();
}

std::string CmaEs::to_json() const {
    nlohmann::json j;
    j["format"] = "cma-state";
    j["version"] = 1;
    j["dimension"] = n_;
    j["batch_size"] = lambda_;
    j["sigma0"] = sigma0_;
    j["sigma"] = sigma_;
    j["generation"] = generation_;
    j["gens_since_eigen"] = gens_since_eigen_;
    j["degenerate"] = degenerate_;
    j["mean"] = std::vector<double>(mean_.data(), mean_.data() + n_);
    j["path_sigma"] =
        std::vector<double>(path_sigma_.data(), path_sigma_.data() + n_);
    j["path_cov"] = std::vector<double>(path_cov_.data(), path_cov_.data() + n_);
    j["eigen_scale"] =
        std::vector<double>(eigen_scale_.data(), eigen_scale_.data() + n_);
    j["cov"] = encode_matrix(cov_);
    j["eigen_basis"] = encode_matrix(eigen_basis_);
    return j.dump();
}

CmaEs CmaEs::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Io, std::string("bad cma state: ") + e.what());
    }
    if (j.value("format", "") != "cma-state" || j.value("version", 0) != 1)
        throw Error(ErrorCode::Io, "not a cma state record");
    int n = j.at("dimension").get<int>();
    auto mean = j.at("mean").get<std::vector<double>>();
    if (static_cast<int>(mean.size()) != n)
        throw Error(ErrorCode::Io, "cma state mean length mismatch");
    CmaEs cma(n, j.at("batch_size").get<int>(), j.at("sigma0").get<double>(),
              Eigen::Map<Eigen::VectorXd>(mean.data(), n));
    cma.sigma_ = j.at("sigma").get<double>();
    cma.generation_ = j.at("generation").get<long long>();
    cma.gens_since_eigen_ = j.at("gens_since_eigen").get<int>();
    cma.degenerate_ = j.at("degenerate").get<bool>();
    auto load_vec = [&](const char* key) {
        auto v = j.at(key).get<std::vector<double>>();
        if (static_cast<int>(v.size()) != n)
            throw Error(ErrorCode::Io, "cma state vector length mismatch");
        return Eigen::Map<Eigen::VectorXd>(v.data(), n).eval();
    };
    cma.path_sigma_ = load_vec("path_sigma");
    cma.path_cov_ = load_vec("path_cov");
    cma.eigen_scale_ = load_vec("eigen_scale");
    cma.cov_ = decode_matrix(j.at("cov").get<std::string>(), n, n);
    cma.eigen_basis_ = decode_matrix(j.at("eigen_basis").get<std::string>(), n, n);
    return cma;
}

std::vector<float> iso_line_variation(const std::vector<float>& x1,
                                      const std::vector<float>& x2,
                                      double sigma_iso, double sigma_line,
                                      Rng& rng) {
    if (x1.size() != x2.size())
        throw Error(ErrorCode::DimensionMismatch,
                    "iso+line parents differ in length");
    std::vector<float> out(x1.size());
    double line = rng.normal();
    for (size_t k = 0; k < x1.size(); ++k) {
        double v = static_cast<double>(x1[k]) + sigma_iso * rng.normal() +
                   sigma_line * line *
                       (static_cast<double>(x2[k]) - static_cast<double>(x1[k]));
        out[k] = static_cast<float>(v);
    }
    return out;
}

}  // namespace gridforge
