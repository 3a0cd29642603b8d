#include "evmhunt/distill.hpp"

#include "evmhunt/error.hpp"

#include <cmath>

namespace evmhunt {

namespace {

constexpr double kEps = 1e-12;

double activate(double x, NeuronActivation act) {
    return act == NeuronActivation::Tanh ? std::tanh(x) : x;
}

double activate_grad(double x, NeuronActivation act) {
    if (act == NeuronActivation::Identity) return 1.0;
    double t = std::tanh(x);
    return 1.0 - t * t;
}

} // namespace

NeuronParams NeuronParams::init(int n, int out_dim, int in_dim, Rng& rng,
                                NeuronActivation act) {
    if (n < 1) throw DataError("neuron distillation requires N >= 1");
    NeuronParams p;
    p.activation = act;
    double r = 1.0 / std::sqrt(static_cast<double>(in_dim));
    for (int j = 0; j < n; ++j) {
        Eigen::MatrixXd w(out_dim, in_dim);
        Eigen::VectorXd b(out_dim);
        for (Eigen::Index a = 0; a < w.rows(); ++a)
            for (Eigen::Index c = 0; c < w.cols(); ++c) w(a, c) = rng.uniform(-r, r);
        for (Eigen::Index a = 0; a < b.size(); ++a) b[a] = rng.uniform(-r, r);
        p.w.push_back(std::move(w));
        p.b.push_back(std::move(b));
    }
    return p;
}

NeuronGrads NeuronGrads::zeros(const NeuronParams& params) {
    NeuronGrads g;
    for (int j = 0; j < params.count(); ++j) {
        g.w.push_back(Eigen::MatrixXd::Zero(params.w[static_cast<size_t>(j)].rows(),
                                            params.w[static_cast<size_t>(j)].cols()));
        g.b.push_back(Eigen::VectorXd::Zero(params.b[static_cast<size_t>(j)].size()));
    }
    return g;
}

void NeuronGrads::add_scaled(const NeuronGrads& other, double scale) {
    for (size_t j = 0; j < w.size(); ++j) {
        w[j] += scale * other.w[j];
        b[j] += scale * other.b[j];
    }
}

Eigen::VectorXd nd_forward(const Eigen::VectorXd& h_sc, const NeuronParams& params,
                           NeuronCache* cache) {
    if (params.count() < 1) throw DataError("nd_forward: no neurons");
    if (params.w[0].cols() != h_sc.size())
        throw DataError("nd_forward: source feature dim mismatch");
    NeuronCache local;
    NeuronCache& c = cache ? *cache : local;
    c.pre.clear();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(params.w[0].rows());
    for (int j = 0; j < params.count(); ++j) {
        Eigen::VectorXd pre = params.w[static_cast<size_t>(j)] * h_sc +
                              params.b[static_cast<size_t>(j)];
        out += pre.unaryExpr([&](double x) { return activate(x, params.activation); });
        c.pre.push_back(std::move(pre));
    }
    return out / static_cast<double>(params.count());
}

void nd_backward(const Eigen::VectorXd& d_out, const Eigen::VectorXd& h_sc,
                 const NeuronParams& params, const NeuronCache& cache, NeuronGrads& grads) {
    double inv_n = 1.0 / static_cast<double>(params.count());
    for (int j = 0; j < params.count(); ++j) {
        Eigen::VectorXd d_pre =
            inv_n * d_out.cwiseProduct(cache.pre[static_cast<size_t>(j)].unaryExpr(
                        [&](double x) { return activate_grad(x, params.activation); }));
        grads.w[static_cast<size_t>(j)] += d_pre * h_sc.transpose();
        grads.b[static_cast<size_t>(j)] += d_pre;
    }
}

double pre_loss(double y, double ground_truth) {
    double yc = std::min(1.0 - kEps, std::max(kEps, y));
    return -(ground_truth * std::log(yc) + (1.0 - ground_truth) * std::log(1.0 - yc));
}

double pre_loss(std::span<const double> y, std::span<const double> ground_truth) {
    if (y.size() != ground_truth.size() || y.empty())
        throw DataError("pre_loss: batch size mismatch or empty");
    double total = 0.0;
    for (size_t i = 0; i < y.size(); ++i) total += pre_loss(y[i], ground_truth[i]);
    return total / static_cast<double>(y.size());
}

double pre_loss_grad(double y, double ground_truth) {
    double yc = std::min(1.0 - kEps, std::max(kEps, y));
    return -(ground_truth / yc - (1.0 - ground_truth) / (1.0 - yc));
}

Eigen::VectorXd softmax(const Eigen::VectorXd& v) {
    Eigen::VectorXd ex = (v.array() - v.maxCoeff()).exp();
    return ex / ex.sum();
}

double msl_loss(const Eigen::VectorXd& h_t, const Eigen::VectorXd& h_s) {
    if (h_t.size() != h_s.size() || h_t.size() == 0)
        throw DataError("msl_loss: dim mismatch or empty");
    Eigen::VectorXd p_t = softmax(h_t);
    double m = h_s.maxCoeff();
    double lse = std::log((h_s.array() - m).exp().sum());
    Eigen::VectorXd log_p_s = (h_s.array() - m - lse).matrix();
    return -p_t.dot(log_p_s);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> msl_loss_backward(const Eigen::VectorXd& h_t,
                                                              const Eigen::VectorXd& h_s) {
    Eigen::VectorXd p_t = softmax(h_t);
    Eigen::VectorXd p_s = softmax(h_s);
    Eigen::VectorXd log_p_s = p_s.array().max(kEps).log();
    // d/dh_s of -p_t . log softmax(h_s)
    Eigen::VectorXd d_s = p_s - p_t;
    // d/dh_t through softmax(h_t): p_t_k * (sum_i p_t_i log p_s_i - log p_s_k)
    double mean_log = p_t.dot(log_p_s);
    Eigen::VectorXd d_t = p_t.cwiseProduct(
        Eigen::VectorXd::Constant(p_t.size(), mean_log) - log_p_s);
    return {d_t, d_s};
}

void LossConfig::validate() const {
    if (alpha < 0 || beta < 0) throw DataError("loss config: alpha and beta must be >= 0");
    if (alpha == 0 && beta == 0) throw DataError("loss config: alpha and beta cannot both be 0");
}

double mk_loss(double l_msl, double l_pre, const LossConfig& config) {
    config.validate();
    return config.alpha * l_msl + config.beta * l_pre;
}

double feature_mse_baseline(const Eigen::VectorXd& h_t, const Eigen::VectorXd& h_s) {
    if (h_t.size() != h_s.size() || h_t.size() == 0)
        throw DataError("feature_mse_baseline: dim mismatch or empty");
    return (h_t - h_s).squaredNorm() / static_cast<double>(h_t.size());
}

} // namespace evmhunt
