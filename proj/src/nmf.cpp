#include <cmath>

#include "netsig/decomposition.hpp"
#include "netsig/error.hpp"
#include "netsig/rng.hpp"

namespace netsig {
namespace {

void validate(const NmfConfig& cfg) {
  if (cfg.k < 1) throw InvalidArgument("NMF pattern count K must be >= 1");
  if (!(cfg.gamma >= 0.0)) throw InvalidArgument("smoothness weight gamma must be >= 0");
  if (!(cfg.floor > 0.0)) throw InvalidArgument("NMF floor must be > 0");
  if (!(cfg.beta >= 0.0 && cfg.beta <= 2.0)) throw InvalidArgument("beta must lie in [0, 2]");
  if (cfg.gamma > 0.0 && cfg.beta != 0.0)
    throw InvalidArgument("temporal smoothing is only available for beta = 0 (Itakura-Saito)");
}

// y^(beta - 2) and y^(beta - 1) without pow() for the common cases.
Eigen::ArrayXXd power_minus2(const Eigen::ArrayXXd& y, double beta) {
  if (beta == 0.0) return y.square().inverse();
  if (beta == 1.0) return y.inverse();
  if (beta == 2.0) return Eigen::ArrayXXd::Ones(y.rows(), y.cols());
  return y.pow(beta - 2.0);
}

Eigen::ArrayXXd power_minus1(const Eigen::ArrayXXd& y, double beta) {
  if (beta == 0.0) return y.inverse();
  if (beta == 1.0) return Eigen::ArrayXXd::Ones(y.rows(), y.cols());
  if (beta == 2.0) return y;
  return y.pow(beta - 1.0);
}

// MM exponent for the beta-divergence multiplicative updates.
double mm_exponent(double beta) { return beta < 1.0 ? 1.0 / (2.0 - beta) : 1.0; }

void check_finite(const Eigen::MatrixXd& m, std::size_t iter, const char* what) {
  if (!m.allFinite()) throw NumericFailure(iter, std::string("non-finite value in ") + what);
}

// Columns of W to unit sum, scale pushed into the rows of H. WH and the
// (scale-invariant) smoothness penalty are unchanged.
void normalize(Eigen::MatrixXd& w, Eigen::MatrixXd& h) {
  for (Eigen::Index k = 0; k < w.cols(); ++k) {
    const double s = w.col(k).sum();
    if (s <= 0.0) continue;
    w.col(k) /= s;
    h.row(k) *= s;
  }
}

// Smooth IS activation update. For each (k, t) the fit term is majorized by
// a h + b / h around the current H; the penalty couples neighbors in t and is
// minimized exactly, one coordinate at a time with h_{t-1} already updated.
void update_h_smooth(Eigen::MatrixXd& h, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double gamma) {
  const Eigen::Index len = h.cols();
  for (Eigen::Index k = 0; k < h.rows(); ++k) {
    if (len == 1) {
      h(k, 0) = std::sqrt(b(k, 0) / a(k, 0));
      continue;
    }
    for (Eigen::Index t = 0; t < len; ++t) {
      const double ak = a(k, t);
      const double bk = b(k, t);
      if (t == 0) {
        // (a + g/h1) h + b/h - g log h
        const double coef = ak + gamma / h(k, 1);
        h(k, t) = (gamma + std::sqrt(gamma * gamma + 4.0 * coef * bk)) / (2.0 * coef);
      } else if (t == len - 1) {
        // a h + (b + g h_{T-2}) / h + g log h
        const double num = bk + gamma * h(k, t - 1);
        h(k, t) = 2.0 * num / (gamma + std::sqrt(gamma * gamma + 4.0 * ak * num));
      } else {
        // (a + g/h_{t+1}) h + (b + g h_{t-1}) / h
        h(k, t) = std::sqrt((bk + gamma * h(k, t - 1)) / (ak + gamma / h(k, t + 1)));
      }
    }
  }
}

}  // namespace

double beta_divergence(const Eigen::ArrayXXd& x, const Eigen::ArrayXXd& y, double beta) {
  if (beta == 0.0) {
    const Eigen::ArrayXXd r = x / y;
    return (r - r.log() - 1.0).sum();
  }
  if (beta == 1.0) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const double xi = x(i, j), yi = y(i, j);
        s += (xi > 0.0 ? xi * std::log(xi / yi) : 0.0) - xi + yi;
      }
    return s;
  }
  return ((x.pow(beta) + (beta - 1.0) * y.pow(beta) - beta * x * y.pow(beta - 1.0)) / (beta * (beta - 1.0))).sum();
}

double nmf_objective(const Eigen::MatrixXd& v, const Eigen::MatrixXd& w, const Eigen::MatrixXd& h, double eps,
                     double beta, double gamma) {
  const Eigen::ArrayXXd y = (w * h).array() + eps;
  double obj = beta_divergence(v.array(), y, beta);
  if (gamma > 0.0 && h.cols() > 1) {
    const auto len = h.cols() - 1;
    obj += gamma * beta_divergence(h.leftCols(len).array(), h.rightCols(len).array(), 0.0);
  }
  return obj;
}

NmfInput stack_spectra(const TemporalSpectra& spec) {
  NmfInput out;
  out.c_len = spec.c_len;
  out.f_len = spec.f_len;
  const auto rows = static_cast<Eigen::Index>(spec.c_len * spec.f_len);
  out.v.resize(rows, static_cast<Eigen::Index>(spec.t_len()));
  for (std::size_t t = 0; t < spec.t_len(); ++t) {
    const auto& s = spec.steps[t];
    if (static_cast<std::size_t>(s.coeffs.rows()) != spec.c_len || static_cast<std::size_t>(s.coeffs.cols()) != spec.f_len)
      throw InvalidArgument("spectrum shape differs at t = " + std::to_string(t));
    for (std::size_t f = 0; f < spec.f_len; ++f)
      for (std::size_t c = 0; c < spec.c_len; ++c)
        out.v(static_cast<Eigen::Index>(out.row(c, f)), static_cast<Eigen::Index>(t)) =
            std::norm(s.coeffs(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(f)));
  }
  const double mean = out.v.size() > 0 ? out.v.mean() : 0.0;
  out.eps = mean > 0.0 ? kStackFloor * mean : kStackFloor;
  out.v.array() += out.eps;
  return out;
}

NmfResult nmf_decompose(const NmfInput& input, const NmfConfig& cfg) { return nmf_decompose(input.v, cfg); }

NmfResult nmf_decompose(const Eigen::MatrixXd& v, const NmfConfig& cfg) {
  validate(cfg);
  if (v.size() == 0) throw InvalidArgument("NMF input is empty");
  if (!v.allFinite() || (v.array() < 0.0).any()) throw InvalidArgument("NMF input must be finite and nonnegative");
  if (cfg.beta < 1.0 && (v.array() <= 0.0).any())
    throw InvalidArgument("NMF input must be strictly positive for beta < 1 (floor it first)");

  const Eigen::Index rows = v.rows();
  const Eigen::Index len = v.cols();
  const auto k = static_cast<Eigen::Index>(cfg.k);
  const double mean_v = v.mean();
  const double eps = cfg.floor * (mean_v > 0.0 ? mean_v : 1.0);
  const double beta = cfg.beta;
  const double expo = mm_exponent(beta);

  // Uniform (0.5, 1.5) start, W then H, each filled row by row.
  Rng rng(cfg.seed);
  NmfResult res;
  res.w.resize(rows, k);
  res.h.resize(k, len);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < k; ++j) res.w(i, j) = rng.uniform(0.5, 1.5);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < len; ++j) res.h(i, j) = rng.uniform(0.5, 1.5);
  const double scale = std::sqrt(mean_v / (res.w * res.h).mean());
  res.w *= scale;
  res.h *= scale;
  normalize(res.w, res.h);

  auto& w = res.w;
  auto& h = res.h;
  res.objective_trace.push_back(nmf_objective(v, w, h, eps, beta, cfg.gamma));

  for (std::size_t iter = 1; iter <= cfg.max_iters; ++iter) {
    // Activations.
    Eigen::ArrayXXd y = (w * h).array() + eps;
    {
      const Eigen::MatrixXd num = w.transpose() * (v.array() * power_minus2(y, beta)).matrix();
      const Eigen::MatrixXd den = w.transpose() * power_minus1(y, beta).matrix();
      if (cfg.gamma > 0.0) {
        const Eigen::MatrixXd b = (h.array().square() * num.array()).matrix();
        update_h_smooth(h, den, b, cfg.gamma);
      } else {
        h.array() *= expo == 1.0 ? (num.array() / den.array()).eval() : (num.array() / den.array()).pow(expo).eval();
      }
    }
    check_finite(h, iter, "activations");

    // Patterns.
    y = (w * h).array() + eps;
    {
      const Eigen::MatrixXd num = (v.array() * power_minus2(y, beta)).matrix() * h.transpose();
      const Eigen::MatrixXd den = power_minus1(y, beta).matrix() * h.transpose();
      w.array() *= expo == 1.0 ? (num.array() / den.array()).eval() : (num.array() / den.array()).pow(expo).eval();
    }
    check_finite(w, iter, "patterns");
    normalize(w, h);

    const double obj = nmf_objective(v, w, h, eps, beta, cfg.gamma);
    if (!std::isfinite(obj)) throw NumericFailure(iter, "non-finite objective");
    res.objective_trace.push_back(obj);
    res.iterations = iter;

    if (iter >= kStopWindow && cfg.tol > 0.0) {
      const double before = res.objective_trace[iter - kStopWindow];
      const double drop = before == 0.0 ? 0.0 : (before - obj) / std::abs(before);
      if (drop < cfg.tol) {
        res.converged = true;
        break;
      }
    }
  }
  return res;
}

}  // namespace netsig
