#pragma once

#include "evmhunt/rng.hpp"

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace evmhunt {

// ---------------------------------------------------------------------------
// Instruction sequence extractor: Bi-LSTM over block embeddings followed by
// a linear projection of the concatenated direction states.
// ---------------------------------------------------------------------------

struct IseorConfig {
    int input_dim = 64;  // block embedding dim
    int hidden_dim = 64; // per-direction LSTM state
    int output_dim = 64; // sequence feature dim, must match ScoreConfig.feature_dim
};

// Gate rows stacked [input; forget; cell; output], each hidden_dim tall.
struct LstmDirParams {
    Eigen::MatrixXd w_x; // 4H x E
    Eigen::MatrixXd w_h; // 4H x H
    Eigen::VectorXd bias; // 4H
};

struct IseorParams {
    IseorConfig config;
    LstmDirParams fwd, bwd;
    Eigen::MatrixXd w_proj; // D x 2H
    Eigen::VectorXd b_proj; // D

    static IseorParams init(const IseorConfig& config, Rng& rng);
};

struct LstmDirCache {
    Eigen::MatrixXd inputs;  // E x n (in scan order)
    Eigen::MatrixXd gates;   // 4H x n, post-activation
    Eigen::MatrixXd cells;   // H x (n+1), cells.col(0) = c_0 = 0
    Eigen::MatrixXd hiddens; // H x (n+1)
    Eigen::MatrixXd tanh_c;  // H x n
};

struct IseorCache {
    LstmDirCache fwd, bwd;
    Eigen::MatrixXd concat; // 2H x n, per original node order
};

struct IseorGrads {
    LstmDirParams fwd, bwd;
    Eigen::MatrixXd w_proj;
    Eigen::VectorXd b_proj;

    static IseorGrads zeros(const IseorConfig& config);
    void add_scaled(const IseorGrads& other, double scale);
};

// Rows of the result are the per-node sequence features h^S.
Eigen::MatrixXd iseor_forward(const Eigen::MatrixXd& block_emb, const IseorParams& params,
                              IseorCache* cache = nullptr);

// d_out is n x D; returns input gradient (n x E) when input_grad is set.
void iseor_backward(const Eigen::MatrixXd& d_out, const IseorParams& params,
                    const IseorCache& cache, IseorGrads& grads,
                    Eigen::MatrixXd* input_grad = nullptr);

// MSE noise loss between score features and sequence features: mean over
// nodes of the squared row difference.
double noise_loss(const Eigen::MatrixXd& h_p, const Eigen::MatrixXd& h_s);
Eigen::MatrixXd noise_loss_backward(const Eigen::MatrixXd& h_p, const Eigen::MatrixXd& h_s);

// ---------------------------------------------------------------------------
// Graph feature extractor: one multi-head GAT layer over the CFG with self
// loops, average pooling, and an MLP classifier head.
// ---------------------------------------------------------------------------

struct GatConfig {
    int input_dim = 64; // D, matches iseor output
    int head_dim = 16;  // D_h
    int heads = 4;      // K; graph feature dim D_g = head_dim * heads
    double neg_slope = 0.2;
    int mlp_hidden = 32;

    int graph_dim() const { return head_dim * heads; }
};

struct GatHeadParams {
    Eigen::MatrixXd w;     // D_h x D
    Eigen::VectorXd a_src; // D_h, applied to the sending node
    Eigen::VectorXd a_dst; // D_h, applied to the receiving node
};

struct GfeorParams {
    GatConfig config;
    std::vector<GatHeadParams> heads;
    Eigen::MatrixXd mlp_w1; // hidden x D_g
    Eigen::VectorXd mlp_b1; // hidden
    Eigen::RowVectorXd mlp_w2; // 1 x hidden
    double mlp_b2 = 0.0;

    static GfeorParams init(const GatConfig& config, Rng& rng);
};

struct GatHeadCache {
    Eigen::MatrixXd z;                       // n x D_h, projected nodes
    std::vector<Eigen::VectorXd> alpha;      // per node: weights over in-nbrs
    std::vector<Eigen::VectorXd> logits_raw; // pre-LeakyReLU logits
    Eigen::MatrixXd agg;                     // n x D_h, pre-ELU
};

struct GfeorCache {
    std::vector<std::vector<int>> in_nbrs; // sorted, self loop included
    std::vector<GatHeadCache> heads;
    Eigen::MatrixXd node_out; // n x D_g, post-ELU concat
    Eigen::VectorXd pooled;   // D_g
    // MLP
    Eigen::VectorXd hidden_pre, hidden_act;
    double logit = 0.0;
    double y = 0.0;
};

struct GfeorGrads {
    std::vector<GatHeadParams> heads;
    Eigen::MatrixXd mlp_w1;
    Eigen::VectorXd mlp_b1;
    Eigen::RowVectorXd mlp_w2;
    double mlp_b2 = 0.0;

    static GfeorGrads zeros(const GatConfig& config);
    void add_scaled(const GfeorGrads& other, double scale);
};

// Graph feature h_g: GAT heads concatenated then averaged over nodes.
// Throws on an empty graph.
Eigen::VectorXd gfeor_forward(const Eigen::MatrixXd& h_s,
                              const std::vector<std::pair<int, int>>& edges,
                              const GfeorParams& params, GfeorCache* cache = nullptr);

// Backward through pooling and attention; d_hg is D_g. Optionally returns
// the gradient w.r.t. the input features h_s.
void gfeor_backward(const Eigen::VectorXd& d_hg, const Eigen::MatrixXd& h_s,
                    const GfeorParams& params, const GfeorCache& cache, GfeorGrads& grads,
                    Eigen::MatrixXd* input_grad = nullptr);

double predict(const Eigen::VectorXd& h_g, const GfeorParams& params,
               GfeorCache* cache = nullptr);

// d_logit backprop through the MLP head; returns gradient w.r.t. h_g.
Eigen::VectorXd predict_backward(double d_logit, const Eigen::VectorXd& h_g,
                                 const GfeorParams& params, const GfeorCache& cache,
                                 GfeorGrads& grads);

} // namespace evmhunt
