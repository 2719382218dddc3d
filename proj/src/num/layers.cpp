#include "num/layers.hpp"

#include <cmath>
#include <stdexcept>

namespace hicd::num {

Vec matvec(const Matrix& w, const Vec& x) {
  if (static_cast<int>(x.size()) != w.cols)
    throw std::invalid_argument("matvec: shape mismatch");
  Vec y(w.rows, 0.0);
  for (int r = 0; r < w.rows; ++r) {
    const double* row = &w.a[static_cast<size_t>(r) * w.cols];
    double acc = 0.0;
    for (int c = 0; c < w.cols; ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
  return y;
}

Vec matvec_transposed(const Matrix& w, const Vec& dy) {
  if (static_cast<int>(dy.size()) != w.rows)
    throw std::invalid_argument("matvec_transposed: shape mismatch");
  Vec dx(w.cols, 0.0);
  for (int r = 0; r < w.rows; ++r) {
    const double* row = &w.a[static_cast<size_t>(r) * w.cols];
    double g = dy[r];
    if (g == 0.0) continue;
    for (int c = 0; c < w.cols; ++c) dx[c] += row[c] * g;
  }
  return dx;
}

void add_outer(Matrix& dw, const Vec& dy, const Vec& x) {
  if (dw.rows != static_cast<int>(dy.size()) || dw.cols != static_cast<int>(x.size()))
    throw std::invalid_argument("add_outer: shape mismatch");
  for (int r = 0; r < dw.rows; ++r) {
    double g = dy[r];
    if (g == 0.0) continue;
    double* row = &dw.a[static_cast<size_t>(r) * dw.cols];
    for (int c = 0; c < dw.cols; ++c) row[c] += g * x[c];
  }
}

Vec linear(const Matrix& w, const Vec& x, const Matrix& b) {
  Vec y = matvec(w, x);
  if (b.size() != 0) {
    if (b.rows != w.rows) throw std::invalid_argument("linear: bias shape mismatch");
    for (int r = 0; r < w.rows; ++r) y[r] += b(r, 0);
  }
  return y;
}

Vec linear_backward(const Matrix& w, const Vec& x, const Vec& dy, Matrix& dw, Matrix& db) {
  add_outer(dw, dy, x);
  if (db.size() != 0)
    for (int r = 0; r < db.rows; ++r) db(r, 0) += dy[r];
  return matvec_transposed(w, dy);
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

Vec tanh_vec(const Vec& z) {
  Vec y(z.size());
  for (size_t i = 0; i < z.size(); ++i) y[i] = std::tanh(z[i]);
  return y;
}

Vec tanh_backward(const Vec& y, const Vec& dy) {
  Vec dz(y.size());
  for (size_t i = 0; i < y.size(); ++i) dz[i] = (1.0 - y[i] * y[i]) * dy[i];
  return dz;
}

Vec softmax(const Vec& z) {
  if (z.empty()) throw std::invalid_argument("softmax: empty input");
  double m = z[0];
  for (double v : z) m = std::max(m, v);
  Vec p(z.size());
  double sum = 0.0;
  for (size_t i = 0; i < z.size(); ++i) {
    p[i] = std::exp(z[i] - m);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

Vec log_softmax(const Vec& z) {
  if (z.empty()) throw std::invalid_argument("log_softmax: empty input");
  double m = z[0];
  for (double v : z) m = std::max(m, v);
  double sum = 0.0;
  for (double v : z) sum += std::exp(v - m);
  double lse = m + std::log(sum);
  Vec lp(z.size());
  for (size_t i = 0; i < z.size(); ++i) lp[i] = z[i] - lse;
  return lp;
}

Vec softmax_backward(const Vec& probs, const Vec& dprobs) {
  if (probs.size() != dprobs.size())
    throw std::invalid_argument("softmax_backward: shape mismatch");
  double dot = 0.0;
  for (size_t i = 0; i < probs.size(); ++i) dot += probs[i] * dprobs[i];
  Vec dz(probs.size());
  for (size_t i = 0; i < probs.size(); ++i) dz[i] = probs[i] * (dprobs[i] - dot);
  return dz;
}

Vec mean_of(const std::vector<Vec>& xs) {
  if (xs.empty()) throw std::invalid_argument("mean_of: empty sequence");
  Vec m(xs[0].size(), 0.0);
  for (const Vec& x : xs)
    for (size_t i = 0; i < m.size(); ++i) m[i] += x[i];
  for (double& v : m) v /= static_cast<double>(xs.size());
  return m;
}

Vec weighted_sum(const std::vector<Vec>& xs, const Vec& w) {
  if (xs.size() != w.size()) throw std::invalid_argument("weighted_sum: length mismatch");
  if (xs.empty()) throw std::invalid_argument("weighted_sum: empty sequence");
  Vec y(xs[0].size(), 0.0);
  for (size_t t = 0; t < xs.size(); ++t)
    for (size_t i = 0; i < y.size(); ++i) y[i] += w[t] * xs[t][i];
  return y;
}

Vec concat(const Vec& a, const Vec& b) {
  Vec y;
  y.reserve(a.size() + b.size());
  y.insert(y.end(), a.begin(), a.end());
  y.insert(y.end(), b.begin(), b.end());
  return y;
}

// ---- LSTM --------------------------------------------------------------

void LstmCellParams::init(int d_in, int d_h, Rng& rng, double forget_bias) {
  input_size = d_in;
  hidden_size = d_h;
  w_ih = Matrix(4 * d_h, d_in);
  w_hh = Matrix(4 * d_h, d_h);
  b = Matrix(4 * d_h, 1);
  init_uniform(w_ih, d_in, rng);
  init_uniform(w_hh, d_h, rng);
  // Forget-gate bias starts at `forget_bias`, everything else at zero.
  for (int i = 0; i < d_h; ++i) b(d_h + i, 0) = forget_bias;
}

std::vector<ParamRef> LstmCellParams::refs(const std::string& prefix) {
  return {{prefix + ".w_ih", &w_ih}, {prefix + ".w_hh", &w_hh}, {prefix + ".b", &b}};
}

void LstmCellGrads::init_like(const LstmCellParams& p) {
  w_ih = Matrix(p.w_ih.rows, p.w_ih.cols);
  w_hh = Matrix(p.w_hh.rows, p.w_hh.cols);
  b = Matrix(p.b.rows, p.b.cols);
}

void LstmCellGrads::zero() {
  w_ih.zero();
  w_hh.zero();
  b.zero();
}

std::vector<ParamRef> LstmCellGrads::refs(const std::string& prefix) {
  return {{prefix + ".w_ih", &w_ih}, {prefix + ".w_hh", &w_hh}, {prefix + ".b", &b}};
}

void lstm_step(const LstmCellParams& p, const Vec& x, const Vec& h_prev, const Vec& c_prev,
               Vec& h_out, Vec& c_out, LstmStepCache* cache) {
  const int h = p.hidden_size;
  if (static_cast<int>(x.size()) != p.input_size || static_cast<int>(h_prev.size()) != h ||
      static_cast<int>(c_prev.size()) != h)
    throw std::invalid_argument("lstm_step: shape mismatch");

  Vec z = matvec(p.w_ih, x);
  Vec zh = matvec(p.w_hh, h_prev);
  for (int i = 0; i < 4 * h; ++i) z[i] += zh[i] + p.b(i, 0);

  Vec gi(h), gf(h), gg(h), go(h);
  for (int i = 0; i < h; ++i) {
    gi[i] = sigmoid(z[i]);
    gf[i] = sigmoid(z[h + i]);
    gg[i] = std::tanh(z[2 * h + i]);
    go[i] = sigmoid(z[3 * h + i]);
  }

  c_out.assign(h, 0.0);
  h_out.assign(h, 0.0);
  Vec tc(h);
  for (int i = 0; i < h; ++i) {
    c_out[i] = gf[i] * c_prev[i] + gi[i] * gg[i];
    tc[i] = std::tanh(c_out[i]);
    h_out[i] = go[i] * tc[i];
  }

  if (cache) {
    cache->x = x;
    cache->h_prev = h_prev;
    cache->c_prev = c_prev;
    cache->gi = std::move(gi);
    cache->gf = std::move(gf);
    cache->gg = std::move(gg);
    cache->go = std::move(go);
    cache->c = c_out;
    cache->tanh_c = std::move(tc);
  }
}

void lstm_step_backward(const LstmCellParams& p, const LstmStepCache& cache, const Vec& dh,
                        const Vec& dc_in, LstmCellGrads& grads, Vec& dx, Vec& dh_prev,
                        Vec& dc_prev) {
  const int h = p.hidden_size;
  if (cache.x.empty() && p.input_size != 0)
    throw std::invalid_argument("lstm_step_backward: missing cached forward state");

  Vec dz(4 * h, 0.0);
  Vec dc(h);
  for (int i = 0; i < h; ++i) {
    double go = cache.go[i];
    double tc = cache.tanh_c[i];
    // h = go * tanh(c)
    double d_go = dh[i] * tc;
    dc[i] = dc_in[i] + dh[i] * go * (1.0 - tc * tc);
    dz[3 * h + i] = d_go * go * (1.0 - go);
  }
  dc_prev.assign(h, 0.0);
  for (int i = 0; i < h; ++i) {
    double gi = cache.gi[i], gf = cache.gf[i], gg = cache.gg[i];
    double d_gi = dc[i] * gg;
    double d_gf = dc[i] * cache.c_prev[i];
    double d_gg = dc[i] * gi;
    dc_prev[i] = dc[i] * gf;
    dz[i] = d_gi * gi * (1.0 - gi);
    dz[h + i] = d_gf * gf * (1.0 - gf);
    dz[2 * h + i] = d_gg * (1.0 - gg * gg);
  }

  add_outer(grads.w_ih, dz, cache.x);
  add_outer(grads.w_hh, dz, cache.h_prev);
  for (int i = 0; i < 4 * h; ++i) grads.b(i, 0) += dz[i];

  dx = matvec_transposed(p.w_ih, dz);
  dh_prev = matvec_transposed(p.w_hh, dz);
}

LstmTrace lstm_run(const LstmCellParams& p, const std::vector<Vec>& inputs) {
  LstmTrace trace;
  trace.steps.resize(inputs.size());
  trace.h.resize(inputs.size());
  Vec h(p.hidden_size, 0.0), c(p.hidden_size, 0.0);
  for (size_t t = 0; t < inputs.size(); ++t) {
    Vec h_next, c_next;
    lstm_step(p, inputs[t], h, c, h_next, c_next, &trace.steps[t]);
    trace.h[t] = h_next;
    h = std::move(h_next);
    c = std::move(c_next);
  }
  return trace;
}

void lstm_backward(const LstmCellParams& p, const LstmTrace& trace,
                   const std::vector<Vec>& dh_per_step, LstmCellGrads& grads,
                   std::vector<Vec>* dx) {
  const size_t T = trace.steps.size();
  if (dh_per_step.size() != T)
    throw std::invalid_argument("lstm_backward: upstream gradient length mismatch");
  if (dx) dx->assign(T, Vec());

  Vec dh_next(p.hidden_size, 0.0), dc_next(p.hidden_size, 0.0);
  for (size_t ti = T; ti-- > 0;) {
    Vec dh = dh_per_step[ti];
    if (dh.empty()) dh.assign(p.hidden_size, 0.0);
    for (int i = 0; i < p.hidden_size; ++i) dh[i] += dh_next[i];

    Vec dxi, dh_prev, dc_prev;
    lstm_step_backward(p, trace.steps[ti], dh, dc_next, grads, dxi, dh_prev, dc_prev);
    if (dx) (*dx)[ti] = std::move(dxi);
    dh_next = std::move(dh_prev);
    dc_next = std::move(dc_prev);
  }
}

}  // namespace hicd::num
