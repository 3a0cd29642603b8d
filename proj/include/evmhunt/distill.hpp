#pragma once

#include "evmhunt/rng.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace evmhunt {

// Externally produced source-code feature vector for one contract.
struct SourceFeature {
    std::string id;
    Eigen::VectorXd values; // D_s
};

enum class NeuronActivation { Tanh, Identity };

// N affine maps D_s -> D_g sharing an activation; their average is the
// missing-semantic target h_g^T.
struct NeuronParams {
    std::vector<Eigen::MatrixXd> w; // N of D_g x D_s
    std::vector<Eigen::VectorXd> b; // N of D_g
    NeuronActivation activation = NeuronActivation::Tanh;

    int count() const { return static_cast<int>(w.size()); }
    static NeuronParams init(int n, int out_dim, int in_dim, Rng& rng,
                             NeuronActivation act = NeuronActivation::Tanh);
};

struct NeuronGrads {
    std::vector<Eigen::MatrixXd> w;
    std::vector<Eigen::VectorXd> b;

    static NeuronGrads zeros(const NeuronParams& params);
    void add_scaled(const NeuronGrads& other, double scale);
};

struct NeuronCache {
    std::vector<Eigen::VectorXd> pre; // per neuron pre-activation
};

Eigen::VectorXd nd_forward(const Eigen::VectorXd& h_sc, const NeuronParams& params,
                           NeuronCache* cache = nullptr);

void nd_backward(const Eigen::VectorXd& d_out, const Eigen::VectorXd& h_sc,
                 const NeuronParams& params, const NeuronCache& cache, NeuronGrads& grads);

// Binary cross entropy; predictions clamped to [eps, 1-eps], eps = 1e-12.
double pre_loss(double y, double ground_truth);
double pre_loss(std::span<const double> y, std::span<const double> ground_truth);
double pre_loss_grad(double y, double ground_truth); // d/dy for one sample

// Cross entropy between softmax(h_T) and softmax(h_S).
double msl_loss(const Eigen::VectorXd& h_t, const Eigen::VectorXd& h_s);
// Gradients flow into both sides: first = d/dh_t, second = d/dh_s.
std::pair<Eigen::VectorXd, Eigen::VectorXd> msl_loss_backward(const Eigen::VectorXd& h_t,
                                                              const Eigen::VectorXd& h_s);

struct LossConfig {
    double alpha = 0.01;
    double beta = 1.0;

    double delta() const { return alpha / beta; }
    void validate() const;
};

double mk_loss(double l_msl, double l_pre, const LossConfig& config);

// Plain feature MSE, the simple distillation baseline for ablations.
double feature_mse_baseline(const Eigen::VectorXd& h_t, const Eigen::VectorXd& h_s);

Eigen::VectorXd softmax(const Eigen::VectorXd& v);

} // namespace evmhunt
