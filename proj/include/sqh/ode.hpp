#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>

namespace sqh {

inline double ipow(double x, int e) {
  double out = 1.0;
  double base = x;
  int k = e;
  while (k > 0) {
    if (k & 1) out *= base;
    base *= base;
    k >>= 1;
  }
  return out;
}

struct StepControl {
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  double max_step = 0.0;  // 0 = unlimited
  std::size_t max_steps = 4'000'000;
  double blowup_norm = 1e6;
};

enum class IntegrateStatus { Ok, StepLimit, Blowup };

template <std::size_t N>
using State = std::array<double, N>;

// Dormand-Prince 5(4) embedded pair with the classic quartic continuous
// extension. RHS signature: void(const State<N>&, State<N>&).
template <std::size_t N, class RHS>
class Dopri5 {
 public:
  Dopri5(RHS rhs, StepControl ctrl) : f_(std::move(rhs)), ctrl_(ctrl) {}

  void start(double t0, const State<N>& y0) {
    t0_ = t1_ = t0;
    y0_ = y1_ = y0;
    f_(y1_, k_[0]);
    h_ = 0.0;
    steps_ = 0;
    status_ = IntegrateStatus::Ok;
  }

  double t_begin() const { return t0_; }
  double t_end() const { return t1_; }
  const State<N>& y_begin() const { return y0_; }
  const State<N>& y_end() const { return y1_; }
  const State<N>& f_end() const { return k_[0]; }
  IntegrateStatus status() const { return status_; }
  std::size_t steps() const { return steps_; }

  // Takes one accepted step toward t_limit, never past it. Returns false
  // when t_limit has been reached or the integration cannot continue.
  bool advance(double t_limit) {
    if (status_ != IntegrateStatus::Ok) return false;
    const double dir = t_limit > t1_ ? 1.0 : -1.0;
    double remaining = (t_limit - t1_) * dir;
    if (remaining <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t1_)))
      return false;
    if (h_ == 0.0) h_ = initial_step(t_limit) * dir;
    if (h_ * dir <= 0.0) h_ = -h_;

    for (;;) {
      if (++steps_ > ctrl_.max_steps) {
        status_ = IntegrateStatus::StepLimit;
        return false;
      }
      double h = h_;
      if (ctrl_.max_step > 0.0 && std::abs(h) > ctrl_.max_step) h = ctrl_.max_step * dir;
      bool clipped = false;
      if (std::abs(h) >= remaining) {
        h = t_limit - t1_;
        clipped = true;
      }
      if (std::abs(h) < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t1_))) {
        status_ = IntegrateStatus::StepLimit;  // step size underflow
        return false;
      }

      State<N> y_new, err;
      attempt(h, y_new, err);

      double err_norm = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        const double scale = ctrl_.abs_tol +
                             ctrl_.rel_tol * std::max(std::abs(y1_[i]), std::abs(y_new[i]));
        const double r = err[i] / scale;
        err_norm += r * r;
      }
      err_norm = std::sqrt(err_norm / N);

      if (!std::isfinite(err_norm)) {
        h_ = h * 0.2;
        continue;
      }
      if (err_norm <= 1.0 || std::abs(h) <= min_step()) {
        accept(h, y_new);
        if (!clipped) {
          double factor = err_norm > 0.0 ? 0.9 * std::pow(err_norm, -0.2) : 10.0;
          h_ = h * std::min(10.0, std::max(0.2, factor));
        }
        const double ninf = norm_inf(y1_);
        if (!std::isfinite(ninf) || ninf > ctrl_.blowup_norm) status_ = IntegrateStatus::Blowup;
        return true;
      }
      h_ = h * std::max(0.2, 0.9 * std::pow(err_norm, -0.2));
    }
  }

  // Continuous extension, valid for t in [t_begin, t_end] of the last step.
  State<N> dense(double t) const {
    const double h = t1_ - t0_;
    const double theta = h != 0.0 ? (t - t0_) / h : 0.0;
    const double theta1 = 1.0 - theta;
    State<N> out;
    for (std::size_t i = 0; i < N; ++i)
      out[i] = rcont1_[i] +
               theta * (rcont2_[i] + theta1 * (rcont3_[i] + theta * (rcont4_[i] + theta1 * rcont5_[i])));
    return out;
  }

  void rhs(const State<N>& y, State<N>& dydt) const { f_(y, dydt); }

 private:
  static double norm_inf(const State<N>& y) {
    double out = 0.0;
    for (double v : y) out = std::max(out, std::abs(v));
    return out;
  }

  double min_step() const {
    return 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t1_));
  }

  double initial_step(double t_limit) const {
    const double span = std::abs(t_limit - t1_);
    double scale = ctrl_.abs_tol;
    double fnorm = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      scale = std::max(scale, std::abs(y1_[i]));
      fnorm = std::max(fnorm, std::abs(k_[0][i]));
    }
    double h = fnorm > 0.0 ? 0.01 * scale / fnorm : 1e-6 * span;
    if (h <= 0.0 || !std::isfinite(h)) h = 1e-6 * span;
    return std::min(h, span);
  }

  void attempt(double h, State<N>& y_new, State<N>& err) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                            a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    State<N> tmp;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y1_[i] + h * a21 * k_[0][i];
    f_(tmp, k_[1]);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y1_[i] + h * (a31 * k_[0][i] + a32 * k_[1][i]);
    f_(tmp, k_[2]);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y1_[i] + h * (a41 * k_[0][i] + a42 * k_[1][i] + a43 * k_[2][i]);
    f_(tmp, k_[3]);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y1_[i] + h * (a51 * k_[0][i] + a52 * k_[1][i] + a53 * k_[2][i] + a54 * k_[3][i]);
    f_(tmp, k_[4]);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y1_[i] +
               h * (a61 * k_[0][i] + a62 * k_[1][i] + a63 * k_[2][i] + a64 * k_[3][i] + a65 * k_[4][i]);
    f_(tmp, k_[5]);
    for (std::size_t i = 0; i < N; ++i)
      y_new[i] = y1_[i] +
                 h * (a71 * k_[0][i] + a73 * k_[2][i] + a74 * k_[3][i] + a75 * k_[4][i] + a76 * k_[5][i]);
    f_(y_new, k_[6]);
    for (std::size_t i = 0; i < N; ++i)
      err[i] = h * (e1 * k_[0][i] + e3 * k_[2][i] + e4 * k_[3][i] + e5 * k_[4][i] + e6 * k_[5][i] +
                    e7 * k_[6][i]);
  }

  void accept(double h, const State<N>& y_new) {
    static constexpr double d1 = -12715105075.0 / 11282082432.0;
    static constexpr double d3 = 87487479700.0 / 32700410799.0;
    static constexpr double d4 = -10690763975.0 / 1880347072.0;
    static constexpr double d5 = 701980252875.0 / 199316789632.0;
    static constexpr double d6 = -1453857185.0 / 822651844.0;
    static constexpr double d7 = 69997945.0 / 29380423.0;

    for (std::size_t i = 0; i < N; ++i) {
      const double ydiff = y_new[i] - y1_[i];
      const double bspl = h * k_[0][i] - ydiff;
      rcont1_[i] = y1_[i];
      rcont2_[i] = ydiff;
      rcont3_[i] = bspl;
      rcont4_[i] = ydiff - h * k_[6][i] - bspl;
      rcont5_[i] = h * (d1 * k_[0][i] + d3 * k_[2][i] + d4 * k_[3][i] + d5 * k_[4][i] +
                        d6 * k_[5][i] + d7 * k_[6][i]);
    }
    t0_ = t1_;
    y0_ = y1_;
    t1_ += h;
    y1_ = y_new;
    k_[0] = k_[6];  // first-same-as-last
  }

  RHS f_;
  StepControl ctrl_;
  double t0_ = 0, t1_ = 0, h_ = 0;
  State<N> y0_{}, y1_{};
  std::array<State<N>, 7> k_{};
  State<N> rcont1_{}, rcont2_{}, rcont3_{}, rcont4_{}, rcont5_{};
  std::size_t steps_ = 0;
  IntegrateStatus status_ = IntegrateStatus::Ok;
};

}  // namespace sqh
