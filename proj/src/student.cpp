#include "evmhunt/student.hpp"

#include "evmhunt/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace evmhunt {

namespace {

void fill_uniform(Eigen::MatrixXd& m, double r, Rng& rng) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.uniform(-r, r);
}

void fill_uniform(Eigen::VectorXd& v, double r, Rng& rng) {
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.uniform(-r, r);
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

} // namespace

// ---------------------------------------------------------------------------
// ISEor
// ---------------------------------------------------------------------------

IseorParams IseorParams::init(const IseorConfig& config, Rng& rng) {
    IseorParams p;
    p.config = config;
    const int e = config.input_dim, h = config.hidden_dim, d = config.output_dim;
    double rx = 1.0 / std::sqrt(static_cast<double>(e));
    double rh = 1.0 / std::sqrt(static_cast<double>(h));
    for (LstmDirParams* dir : {&p.fwd, &p.bwd}) {
        dir->w_x.resize(4 * h, e);
        dir->w_h.resize(4 * h, h);
        dir->bias.resize(4 * h);
        fill_uniform(dir->w_x, rx, rng);
        fill_uniform(dir->w_h, rh, rng);
        fill_uniform(dir->bias, rh, rng);
    }
    p.w_proj.resize(d, 2 * h);
    p.b_proj.resize(d);
    double rp = 1.0 / std::sqrt(static_cast<double>(2 * h));
    fill_uniform(p.w_proj, rp, rng);
    fill_uniform(p.b_proj, rp, rng);
    return p;
}

IseorGrads IseorGrads::zeros(const IseorConfig& config) {
    IseorGrads g;
    const int e = config.input_dim, h = config.hidden_dim, d = config.output_dim;
    for (LstmDirParams* dir : {&g.fwd, &g.bwd}) {
        dir->w_x = Eigen::MatrixXd::Zero(4 * h, e);
        dir->w_h = Eigen::MatrixXd::Zero(4 * h, h);
        dir->bias = Eigen::VectorXd::Zero(4 * h);
    }
    g.w_proj = Eigen::MatrixXd::Zero(d, 2 * h);
    g.b_proj = Eigen::VectorXd::Zero(d);
    return g;
}

void IseorGrads::add_scaled(const IseorGrads& other, double scale) {
    fwd.w_x += scale * other.fwd.w_x;
    fwd.w_h += scale * other.fwd.w_h;
    fwd.bias += scale * other.fwd.bias;
    bwd.w_x += scale * other.bwd.w_x;
    bwd.w_h += scale * other.bwd.w_h;
    bwd.bias += scale * other.bwd.bias;
    w_proj += scale * other.w_proj;
    b_proj += scale * other.b_proj;
}

namespace {

// One direction over inputs in scan order (E x n). Returns hiddens via cache.
void lstm_scan(const Eigen::MatrixXd& inputs, const LstmDirParams& p, int hidden_dim,
               LstmDirCache& cache) {
    const auto n = inputs.cols();
    const int h = hidden_dim;
    cache.inputs = inputs;
    cache.gates.resize(4 * h, n);
    cache.cells = Eigen::MatrixXd::Zero(h, n + 1);
    cache.hiddens = Eigen::MatrixXd::Zero(h, n + 1);
    cache.tanh_c.resize(h, n);
    for (Eigen::Index t = 0; t < n; ++t) {
        Eigen::VectorXd z = p.w_x * inputs.col(t) + p.w_h * cache.hiddens.col(t) + p.bias;
        auto gi = cache.gates.col(t).segment(0, h);
        auto gf = cache.gates.col(t).segment(h, h);
        auto gg = cache.gates.col(t).segment(2 * h, h);
        auto go = cache.gates.col(t).segment(3 * h, h);
        gi = z.segment(0, h).unaryExpr([](double x) { return sigmoid(x); });
        gf = z.segment(h, h).unaryExpr([](double x) { return sigmoid(x); });
        gg = z.segment(2 * h, h).unaryExpr([](double x) { return std::tanh(x); });
        go = z.segment(3 * h, h).unaryExpr([](double x) { return sigmoid(x); });
        cache.cells.col(t + 1) =
            gf.cwiseProduct(cache.cells.col(t)) + gi.cwiseProduct(gg);
        cache.tanh_c.col(t) = cache.cells.col(t + 1).array().tanh();
        cache.hiddens.col(t + 1) = go.cwiseProduct(cache.tanh_c.col(t));
    }
}

// BPTT for one direction; d_hiddens is H x n (in scan order).
void lstm_backward(const Eigen::MatrixXd& d_hiddens, const LstmDirParams& p,
                   const LstmDirCache& cache, int hidden_dim, LstmDirParams& grads,
                   Eigen::MatrixXd* d_inputs) {
    const auto n = d_hiddens.cols();
    const int h = hidden_dim;
    Eigen::VectorXd dh_rec = Eigen::VectorXd::Zero(h);
    Eigen::VectorXd dc = Eigen::VectorXd::Zero(h);
    Eigen::VectorXd dz(4 * h);
    for (Eigen::Index t = n - 1; t >= 0; --t) {
        auto gi = cache.gates.col(t).segment(0, h);
        auto gf = cache.gates.col(t).segment(h, h);
        auto gg = cache.gates.col(t).segment(2 * h, h);
        auto go = cache.gates.col(t).segment(3 * h, h);
        Eigen::VectorXd dh = d_hiddens.col(t) + dh_rec;
        Eigen::VectorXd d_go = dh.cwiseProduct(cache.tanh_c.col(t));
        dc += dh.cwiseProduct(go).cwiseProduct(
            (1.0 - cache.tanh_c.col(t).array().square()).matrix());
        Eigen::VectorXd d_gi = dc.cwiseProduct(gg);
        Eigen::VectorXd d_gg = dc.cwiseProduct(gi);
        Eigen::VectorXd d_gf = dc.cwiseProduct(cache.cells.col(t));
        dz.segment(0, h) = d_gi.array() * gi.array() * (1.0 - gi.array());
        dz.segment(h, h) = d_gf.array() * gf.array() * (1.0 - gf.array());
        dz.segment(2 * h, h) = d_gg.array() * (1.0 - gg.array().square());
        dz.segment(3 * h, h) = d_go.array() * go.array() * (1.0 - go.array());
        grads.w_x += dz * cache.inputs.col(t).transpose();
        grads.w_h += dz * cache.hiddens.col(t).transpose();
        grads.bias += dz;
        dh_rec = p.w_h.transpose() * dz;
        dc = dc.cwiseProduct(gf);
        if (d_inputs) d_inputs->col(t) = p.w_x.transpose() * dz;
    }
}

} // namespace

Eigen::MatrixXd iseor_forward(const Eigen::MatrixXd& block_emb, const IseorParams& params,
                              IseorCache* cache) {
    const auto n = block_emb.rows();
    const int h = params.config.hidden_dim;
    const int d = params.config.output_dim;
    if (block_emb.cols() != params.config.input_dim)
        throw DataError("iseor_forward: input dim mismatch");
    if (n == 0) return Eigen::MatrixXd(0, d);

    IseorCache local;
    IseorCache& c = cache ? *cache : local;
    Eigen::MatrixXd x = block_emb.transpose(); // E x n
    lstm_scan(x, params.fwd, h, c.fwd);
    lstm_scan(x.rowwise().reverse(), params.bwd, h, c.bwd);

    c.concat.resize(2 * h, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        c.concat.col(i).segment(0, h) = c.fwd.hiddens.col(i + 1);
        c.concat.col(i).segment(h, h) = c.bwd.hiddens.col(n - i); // reversed scan
    }
    Eigen::MatrixXd out(n, d);
    for (Eigen::Index i = 0; i < n; ++i)
        out.row(i) = (params.w_proj * c.concat.col(i) + params.b_proj).transpose();
    return out;
}

void iseor_backward(const Eigen::MatrixXd& d_out, const IseorParams& params,
                    const IseorCache& cache, IseorGrads& grads, Eigen::MatrixXd* input_grad) {
    const auto n = d_out.rows();
    const int h = params.config.hidden_dim;
    Eigen::MatrixXd d_concat(2 * h, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::VectorXd d_row = d_out.row(i).transpose();
        grads.w_proj += d_row * cache.concat.col(i).transpose();
        grads.b_proj += d_row;
        d_concat.col(i) = params.w_proj.transpose() * d_row;
    }
    Eigen::MatrixXd d_fwd = d_concat.topRows(h);
    Eigen::MatrixXd d_bwd(h, n);
    for (Eigen::Index i = 0; i < n; ++i) d_bwd.col(n - 1 - i) = d_concat.col(i).segment(h, h);

    Eigen::MatrixXd dx_fwd, dx_bwd;
    if (input_grad) {
        dx_fwd.resize(params.config.input_dim, n);
        dx_bwd.resize(params.config.input_dim, n);
    }
    lstm_backward(d_fwd, params.fwd, cache.fwd, h, grads.fwd, input_grad ? &dx_fwd : nullptr);
    lstm_backward(d_bwd, params.bwd, cache.bwd, h, grads.bwd, input_grad ? &dx_bwd : nullptr);
    if (input_grad) {
        *input_grad = dx_fwd.transpose();
        for (Eigen::Index i = 0; i < n; ++i)
            input_grad->row(i) += dx_bwd.col(n - 1 - i).transpose();
    }
}

double noise_loss(const Eigen::MatrixXd& h_p, const Eigen::MatrixXd& h_s) {
    if (h_p.rows() != h_s.rows() || h_p.cols() != h_s.cols())
        throw DataError("noise_loss: shape mismatch");
    if (h_p.rows() == 0) return 0.0;
    return (h_p - h_s).array().square().sum() / static_cast<double>(h_p.rows());
}

Eigen::MatrixXd noise_loss_backward(const Eigen::MatrixXd& h_p, const Eigen::MatrixXd& h_s) {
    if (h_p.rows() != h_s.rows() || h_p.cols() != h_s.cols())
        throw DataError("noise_loss: shape mismatch");
    return 2.0 / static_cast<double>(h_p.rows()) * (h_s - h_p);
}

// ---------------------------------------------------------------------------
// GFEor
// ---------------------------------------------------------------------------

GfeorParams GfeorParams::init(const GatConfig& config, Rng& rng) {
    GfeorParams p;
    p.config = config;
    double rw = 1.0 / std::sqrt(static_cast<double>(config.input_dim));
    double ra = 1.0 / std::sqrt(static_cast<double>(config.head_dim));
    p.heads.resize(static_cast<size_t>(config.heads));
    for (auto& head : p.heads) {
        head.w.resize(config.head_dim, config.input_dim);
        head.a_src.resize(config.head_dim);
        head.a_dst.resize(config.head_dim);
        fill_uniform(head.w, rw, rng);
        fill_uniform(head.a_src, ra, rng);
        fill_uniform(head.a_dst, ra, rng);
    }
    double r1 = 1.0 / std::sqrt(static_cast<double>(config.graph_dim()));
    double r2 = 1.0 / std::sqrt(static_cast<double>(config.mlp_hidden));
    p.mlp_w1.resize(config.mlp_hidden, config.graph_dim());
    p.mlp_b1.resize(config.mlp_hidden);
    fill_uniform(p.mlp_w1, r1, rng);
    fill_uniform(p.mlp_b1, r1, rng);
    p.mlp_w2.resize(config.mlp_hidden);
    for (Eigen::Index i = 0; i < p.mlp_w2.size(); ++i) p.mlp_w2[i] = rng.uniform(-r2, r2);
    p.mlp_b2 = rng.uniform(-r2, r2);
    return p;
}

GfeorGrads GfeorGrads::zeros(const GatConfig& config) {
    GfeorGrads g;
    g.heads.resize(static_cast<size_t>(config.heads));
    for (auto& head : g.heads) {
        head.w = Eigen::MatrixXd::Zero(config.head_dim, config.input_dim);
        head.a_src = Eigen::VectorXd::Zero(config.head_dim);
        head.a_dst = Eigen::VectorXd::Zero(config.head_dim);
    }
    g.mlp_w1 = Eigen::MatrixXd::Zero(config.mlp_hidden, config.graph_dim());
    g.mlp_b1 = Eigen::VectorXd::Zero(config.mlp_hidden);
    g.mlp_w2 = Eigen::RowVectorXd::Zero(config.mlp_hidden);
    g.mlp_b2 = 0.0;
    return g;
}

void GfeorGrads::add_scaled(const GfeorGrads& other, double scale) {
    for (size_t k = 0; k < heads.size(); ++k) {
        heads[k].w += scale * other.heads[k].w;
        heads[k].a_src += scale * other.heads[k].a_src;
        heads[k].a_dst += scale * other.heads[k].a_dst;
    }
    mlp_w1 += scale * other.mlp_w1;
    mlp_b1 += scale * other.mlp_b1;
    mlp_w2 += scale * other.mlp_w2;
    mlp_b2 += scale * other.mlp_b2;
}

namespace {

inline double leaky_relu(double x, double slope) { return x > 0 ? x : slope * x; }
inline double leaky_relu_grad(double x, double slope) { return x > 0 ? 1.0 : slope; }
inline double elu(double x) { return x > 0 ? x : std::expm1(x); }
inline double elu_grad(double x) { return x > 0 ? 1.0 : std::exp(x); }

std::vector<std::vector<int>> in_neighbourhoods(Eigen::Index n,
                                                const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::set<int>> sets(static_cast<size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) sets[static_cast<size_t>(i)].insert(static_cast<int>(i));
    for (const auto& [from, to] : edges) {
        if (from < 0 || to < 0 || from >= n || to >= n)
            throw DataError("gfeor_forward: edge endpoint out of range");
        sets[static_cast<size_t>(to)].insert(from);
    }
    std::vector<std::vector<int>> out(static_cast<size_t>(n));
    for (size_t i = 0; i < sets.size(); ++i) out[i].assign(sets[i].begin(), sets[i].end());
    return out;
}

} // namespace

Eigen::VectorXd gfeor_forward(const Eigen::MatrixXd& h_s,
                              const std::vector<std::pair<int, int>>& edges,
                              const GfeorParams& params, GfeorCache* cache) {
    const auto n = h_s.rows();
    if (n == 0) throw DataError("gfeor_forward: empty graph");
    if (h_s.cols() != params.config.input_dim)
        throw DataError("gfeor_forward: input dim mismatch");
    const int dh = params.config.head_dim;
    const int heads = params.config.heads;
    const double slope = params.config.neg_slope;

    GfeorCache local;
    GfeorCache& c = cache ? *cache : local;
    c.in_nbrs = in_neighbourhoods(n, edges);
    c.heads.assign(static_cast<size_t>(heads), GatHeadCache{});
    c.node_out.resize(n, params.config.graph_dim());

    for (int k = 0; k < heads; ++k) {
        const auto& hp = params.heads[static_cast<size_t>(k)];
        auto& hc = c.heads[static_cast<size_t>(k)];
        hc.z = h_s * hp.w.transpose(); // n x D_h
        Eigen::VectorXd src_score = hc.z * hp.a_src;
        Eigen::VectorXd dst_score = hc.z * hp.a_dst;
        hc.alpha.resize(static_cast<size_t>(n));
        hc.logits_raw.resize(static_cast<size_t>(n));
        hc.agg.resize(n, dh);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto& nbrs = c.in_nbrs[static_cast<size_t>(i)];
            Eigen::VectorXd raw(static_cast<Eigen::Index>(nbrs.size()));
            for (size_t m = 0; m < nbrs.size(); ++m)
                raw[static_cast<Eigen::Index>(m)] = dst_score[i] + src_score[nbrs[m]];
            hc.logits_raw[static_cast<size_t>(i)] = raw;
            Eigen::VectorXd act =
                raw.unaryExpr([&](double x) { return leaky_relu(x, slope); });
            Eigen::VectorXd ex = (act.array() - act.maxCoeff()).exp();
            Eigen::VectorXd alpha = ex / ex.sum();
            hc.alpha[static_cast<size_t>(i)] = alpha;
            Eigen::RowVectorXd agg = Eigen::RowVectorXd::Zero(dh);
            for (size_t m = 0; m < nbrs.size(); ++m)
                agg += alpha[static_cast<Eigen::Index>(m)] * hc.z.row(nbrs[m]);
            hc.agg.row(i) = agg;
        }
        c.node_out.block(0, k * dh, n, dh) =
            hc.agg.unaryExpr([](double x) { return elu(x); });
    }
    c.pooled = c.node_out.colwise().mean().transpose();
    return c.pooled;
}

void gfeor_backward(const Eigen::VectorXd& d_hg, const Eigen::MatrixXd& h_s,
                    const GfeorParams& params, const GfeorCache& cache, GfeorGrads& grads,
                    Eigen::MatrixXd* input_grad) {
    const auto n = h_s.rows();
    const int dh = params.config.head_dim;
    const double slope = params.config.neg_slope;
    if (input_grad) input_grad->setZero(n, params.config.input_dim);

    for (int k = 0; k < params.config.heads; ++k) {
        const auto& hp = params.heads[static_cast<size_t>(k)];
        const auto& hc = cache.heads[static_cast<size_t>(k)];
        auto& hg = grads.heads[static_cast<size_t>(k)];
        // Pooling spreads the slice gradient uniformly over nodes.
        Eigen::RowVectorXd d_slice =
            d_hg.segment(k * dh, dh).transpose() / static_cast<double>(n);
        Eigen::MatrixXd d_z = Eigen::MatrixXd::Zero(n, dh);
        Eigen::VectorXd d_src_score = Eigen::VectorXd::Zero(n);
        Eigen::VectorXd d_dst_score = Eigen::VectorXd::Zero(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto& nbrs = cache.in_nbrs[static_cast<size_t>(i)];
            const auto& alpha = hc.alpha[static_cast<size_t>(i)];
            const auto& raw = hc.logits_raw[static_cast<size_t>(i)];
            Eigen::RowVectorXd d_agg =
                d_slice.cwiseProduct(hc.agg.row(i).unaryExpr([](double x) { return elu_grad(x); }));
            // alpha-weighted sum: gradient into weights and into z rows
            Eigen::VectorXd d_alpha(static_cast<Eigen::Index>(nbrs.size()));
            for (size_t m = 0; m < nbrs.size(); ++m) {
                d_alpha[static_cast<Eigen::Index>(m)] = d_agg.dot(hc.z.row(nbrs[m]));
                d_z.row(nbrs[m]) += alpha[static_cast<Eigen::Index>(m)] * d_agg;
            }
            // softmax
            double inner = alpha.dot(d_alpha);
            Eigen::VectorXd d_act = alpha.cwiseProduct(
                d_alpha - Eigen::VectorXd::Constant(alpha.size(), inner));
            for (size_t m = 0; m < nbrs.size(); ++m) {
                double d_raw = d_act[static_cast<Eigen::Index>(m)] *
                               leaky_relu_grad(raw[static_cast<Eigen::Index>(m)], slope);
                d_dst_score[i] += d_raw;
                d_src_score[nbrs[m]] += d_raw;
            }
        }
        hg.a_src += hc.z.transpose() * d_src_score;
        hg.a_dst += hc.z.transpose() * d_dst_score;
        d_z += d_src_score * hp.a_src.transpose() + d_dst_score * hp.a_dst.transpose();
        hg.w += d_z.transpose() * h_s;
        if (input_grad) *input_grad += d_z * hp.w;
    }
}

double predict(const Eigen::VectorXd& h_g, const GfeorParams& params, GfeorCache* cache) {
    GfeorCache local;
    GfeorCache& c = cache ? *cache : local;
    c.hidden_pre = params.mlp_w1 * h_g + params.mlp_b1;
    c.hidden_act = c.hidden_pre.array().tanh();
    c.logit = params.mlp_w2.dot(c.hidden_act) + params.mlp_b2;
    c.y = sigmoid(c.logit);
    return c.y;
}

Eigen::VectorXd predict_backward(double d_logit, const Eigen::VectorXd& h_g,
                                 const GfeorParams& params, const GfeorCache& cache,
                                 GfeorGrads& grads) {
    grads.mlp_w2 += d_logit * cache.hidden_act.transpose();
    grads.mlp_b2 += d_logit;
    Eigen::VectorXd d_hidden =
        d_logit * params.mlp_w2.transpose().cwiseProduct(
                      (1.0 - cache.hidden_act.array().square()).matrix());
    grads.mlp_w1 += d_hidden * h_g.transpose();
    grads.mlp_b1 += d_hidden;
    return params.mlp_w1.transpose() * d_hidden;
}

} // namespace evmhunt
