#pragma once

#include <vector>

#include "num/tensor.hpp"

namespace hicd::num {

// ---- dense primitives -------------------------------------------------

// y = W x + b. b may be empty.
Vec linear(const Matrix& w, const Vec& x, const Matrix& b);
// dW += dy x^T, db += dy, returns dx = W^T dy.
Vec linear_backward(const Matrix& w, const Vec& x, const Vec& dy, Matrix& dw, Matrix& db);

Vec matvec(const Matrix& w, const Vec& x);
Vec matvec_transposed(const Matrix& w, const Vec& dy);
void add_outer(Matrix& dw, const Vec& dy, const Vec& x);

double sigmoid(double z);

Vec tanh_vec(const Vec& z);
// dz given y = tanh(z) and dy.
Vec tanh_backward(const Vec& y, const Vec& dy);

// Numerically stable softmax / log-softmax (max subtraction).
Vec softmax(const Vec& z);
Vec log_softmax(const Vec& z);
// dz = (diag(p) - p p^T) dp for p = softmax(z).
Vec softmax_backward(const Vec& probs, const Vec& dprobs);

// ---- reductions over a sequence of equally sized vectors --------------

Vec mean_of(const std::vector<Vec>& xs);           // empty -> caller decides
Vec weighted_sum(const std::vector<Vec>& xs, const Vec& w);
Vec concat(const Vec& a, const Vec& b);

// ---- LSTM cell ---------------------------------------------------------

// One cell's parameters with the four gate blocks packed row-wise in the
// order (input, forget, candidate, output): w_ih is (4h x d_in), w_hh is
// (4h x h), b is (4h x 1).
struct LstmCellParams {
  int input_size = 0;
  int hidden_size = 0;
  Matrix w_ih;
  Matrix w_hh;
  Matrix b;

  void init(int d_in, int d_h, Rng& rng, double forget_bias = 1.0);
  std::vector<ParamRef> refs(const std::string& prefix);
  bool empty() const { return hidden_size == 0; }
};

struct LstmCellGrads {
  Matrix w_ih, w_hh, b;
  void init_like(const LstmCellParams& p);
  void zero();
  std::vector<ParamRef> refs(const std::string& prefix);
};

struct LstmStepCache {
  Vec x, h_prev, c_prev;
  Vec gi, gf, gg, go;  // post-activation gates
  Vec c, tanh_c;
};

// Standard cell: sigmoid gates, tanh candidate and output squashing.
// Returns (h, c); fills cache when non-null.
void lstm_step(const LstmCellParams& p, const Vec& x, const Vec& h_prev, const Vec& c_prev,
               Vec& h_out, Vec& c_out, LstmStepCache* cache);

// Backward through one step. dh/dc are the gradients flowing into this
// step's outputs; dx, dh_prev, dc_prev come out; parameter grads accumulate.
void lstm_step_backward(const LstmCellParams& p, const LstmStepCache& cache, const Vec& dh,
                        const Vec& dc, LstmCellGrads& grads, Vec& dx, Vec& dh_prev, Vec& dc_prev);

struct LstmTrace {
  std::vector<LstmStepCache> steps;
  std::vector<Vec> h;  // h[t], t = 0..T-1
};

// Runs the cell over `inputs` from zero initial state.
LstmTrace lstm_run(const LstmCellParams& p, const std::vector<Vec>& inputs);

// Full-length BPTT. dh_per_step[t] is the upstream gradient injected at
// h[t] (from whatever consumed it); dx, when non-null, receives per-step
// input gradients.
void lstm_backward(const LstmCellParams& p, const LstmTrace& trace,
                   const std::vector<Vec>& dh_per_step, LstmCellGrads& grads,
                   std::vector<Vec>* dx);

}  // namespace hicd::num
