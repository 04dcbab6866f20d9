#include "solver/ipm_backend.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace sigbell::solver::detail {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kStepFraction = 0.99;
constexpr double kStaticReg = 1e-13;

// Cholesky with symmetric diagonal equilibration; the late-stage reduced
// systems have diagonals spanning many orders of magnitude and plain LLT
// loses the small pivots.
struct ScaledLlt {
  Eigen::VectorXd scale;
  Eigen::LLT<Eigen::MatrixXd> llt;

  bool compute(const Eigen::MatrixXd& m) {
    const int n = static_cast<int>(m.rows());
    // Columns absent from every cone row have zero diagonal; floor the
    // scaling at a problem-relative level and let the regularizer carry
    // them (refinement restores the exact system).
    const double floor = 1e-12 * std::max(1.0, m.diagonal().maxCoeff());
    scale.resize(n);
    for (int i = 0; i < n; ++i) scale[i] = 1.0 / std::sqrt(std::max(m(i, i), floor));
    Eigen::MatrixXd scaled = scale.asDiagonal() * m * scale.asDiagonal();
    scaled.diagonal().array() += kStaticReg;
    llt.compute(scaled);
    return llt.info() == Eigen::Success;
  }
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
    return scale.asDiagonal() * llt.solve((scale.asDiagonal() * rhs).eval());
  }
  Eigen::MatrixXd solve_matrix(const Eigen::MatrixXd& rhs) const {
    return scale.asDiagonal() * llt.solve((scale.asDiagonal() * rhs).eval());
  }
};
}  // namespace

int svec_dim(int d) { return d * (d + 1) / 2; }

int ConeSpec::svec_len() const {
  int len = 0;
  for (int d : psd_dims) len += svec_dim(d);
  return len;
}

int ConeSpec::order() const {
  int deg = nonneg_dim;
  for (int d : psd_dims) deg += d;
  return deg;
}

Eigen::VectorXd svec(const Eigen::MatrixXd& m) {
  const int d = static_cast<int>(m.rows());
  Eigen::VectorXd v(svec_dim(d));
  int k = 0;
  for (int j = 0; j < d; ++j) {
    v[k++] = m(j, j);
    for (int i = j + 1; i < d; ++i) v[k++] = kSqrt2 * 0.5 * (m(i, j) + m(j, i));
  }
  return v;
}

Eigen::MatrixXd smat(const Eigen::VectorXd& v, int d) {
  Eigen::MatrixXd m(d, d);
  int k = 0;
  for (int j = 0; j < d; ++j) {
    m(j, j) = v[k++];
    for (int i = j + 1; i < d; ++i) {
      const double value = v[k++] / kSqrt2;
      m(i, j) = value;
      m(j, i) = value;
    }
  }
  return m;
}

namespace {

struct BlockRef {
  bool psd = false;
  int offset = 0;  // within the proper-cone segment
  int len = 0;     // svec length (or count for nonneg)
  int dim = 0;     // matrix side (psd only)
};

// Nesterov-Todd scaling for the proper cones. Nonnegative entries scale
// diagonally; each PSD block scales by the congruence X -> R' X R with
// R' Z R = R^{-1} S R^{-T} = diag(lambda).
struct Scaling {
  Eigen::ArrayXd w_nonneg;       // sqrt(s/z)
  Eigen::ArrayXd lambda_nonneg;  // sqrt(s*z)
  struct PsdScale {
    Eigen::MatrixXd r;
    Eigen::MatrixXd r_inv;
    Eigen::MatrixXd wm;      // R R'
    Eigen::MatrixXd wm_inv;  // (R R')^{-1}
    Eigen::VectorXd lambda;
  };
  std::vector<PsdScale> psd;
};

std::vector<BlockRef> make_blocks(const ConeSpec& cone) {
  std::vector<BlockRef> blocks;
  int offset = 0;
  if (cone.nonneg_dim > 0) {
    blocks.push_back({false, 0, cone.nonneg_dim, 0});
    offset += cone.nonneg_dim;
  }
  for (int d : cone.psd_dims) {
    blocks.push_back({true, offset, svec_dim(d), d});
    offset += svec_dim(d);
  }
  return blocks;
}

double min_cone_eig(const std::vector<BlockRef>& blocks, const Eigen::VectorXd& v) {
  double mn = std::numeric_limits<double>::infinity();
  for (const auto& blk : blocks) {
    if (!blk.psd) {
      mn = std::min(mn, v.segment(blk.offset, blk.len).minCoeff());
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
          smat(v.segment(blk.offset, blk.len), blk.dim), Eigen::EigenvaluesOnly);
      mn = std::min(mn, es.eigenvalues().minCoeff());
    }
  }
  return mn;
}

// v += (1 + max(0, -lambda_min(v))) * e, landing strictly inside the cone.
void shift_into_cone(const std::vector<BlockRef>& blocks, Eigen::VectorXd& v) {
  if (blocks.empty()) return;
  const double mn = min_cone_eig(blocks, v);
  const double shift = 1.0 + std::max(0.0, -mn);
  for (const auto& blk : blocks) {
    if (!blk.psd) {
      v.segment(blk.offset, blk.len).array() += shift;
    } else {
      int k = blk.offset;
      for (int j = 0; j < blk.dim; ++j) {
        v[k] += shift;
        k += blk.dim - j;
      }
    }
  }
}

bool compute_scaling(const std::vector<BlockRef>& blocks, const Eigen::VectorXd& s,
                     const Eigen::VectorXd& z, Scaling& scal) {
  std::size_t pi = 0;
  for (const auto& blk : blocks) {
    if (!blk.psd) {
      const Eigen::ArrayXd sv = s.segment(blk.offset, blk.len).array();
      const Eigen::ArrayXd zv = z.segment(blk.offset, blk.len).array();
      if (sv.minCoeff() <= 0.0 || zv.minCoeff() <= 0.0) return false;
      scal.w_nonneg = (sv / zv).sqrt();
      scal.lambda_nonneg = (sv * zv).sqrt();
    } else {
      const Eigen::MatrixXd sm = smat(s.segment(blk.offset, blk.len), blk.dim);
      const Eigen::MatrixXd zm = smat(z.segment(blk.offset, blk.len), blk.dim);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_s(sm), es_z(zm);
      if (es_s.eigenvalues().minCoeff() <= 0.0 || es_z.eigenvalues().minCoeff() <= 0.0)
        return false;
      const Eigen::VectorXd ds = es_s.eigenvalues().cwiseSqrt();
      const Eigen::VectorXd dz = es_z.eigenvalues().cwiseSqrt();
      const Eigen::MatrixXd a = ds.asDiagonal() * es_s.eigenvectors().transpose() *
                                es_z.eigenvectors() * dz.asDiagonal();
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const Eigen::VectorXd sigma = svd.singularValues();
      if (sigma.minCoeff() <= 0.0) return false;
      const Eigen::ArrayXd inv_sqrt_sigma = sigma.array().sqrt().inverse();
      auto& ps = scal.psd[pi++];
      ps.r = es_s.eigenvectors() * ds.asDiagonal() * svd.matrixU() *
             inv_sqrt_sigma.matrix().asDiagonal();
      ps.r_inv = ps.r.inverse();
      ps.wm = ps.r * ps.r.transpose();
      ps.wm_inv = ps.r_inv.transpose() * ps.r_inv;
      ps.lambda = sigma;
    }
  }
  return true;
}

}  // namespace

ConicResult solve_conic(const ConicData& data, const Settings& settings) {
  const int n = static_cast<int>(data.c.size());
  const int m = static_cast<int>(data.h.size());
  const int p = data.cone.zero_dim;
  const int q = m - p;
  const auto blocks = make_blocks(data.cone);
  const double degree = std::max(1, data.cone.order());

  ConicResult res;

  Eigen::VectorXd s_prop = Eigen::VectorXd::Zero(q);
  Eigen::VectorXd z_prop = Eigen::VectorXd::Zero(q);
  shift_into_cone(blocks, s_prop);
  shift_into_cone(blocks, z_prop);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd z_eq = Eigen::VectorXd::Zero(p);

  const Eigen::MatrixXd& G = data.G;
  const auto G_eq = G.topRows(p);
  const auto G_prop = G.bottomRows(q);

  Scaling scal;
  scal.psd.resize(data.cone.psd_dims.size());

  const double h_norm = 1.0 + data.h.norm();
  const double c_norm = 1.0 + data.c.norm();

  Eigen::MatrixXd reduced;        // unregularized G_p' H^{-1} G_p
  ScaledLlt reduced_llt;  // factorization of the equilibrated copy
  Eigen::MatrixXd schur;
  ScaledLlt schur_llt;
  Eigen::MatrixXd hinv_g;

  auto apply_hinv = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd out(q);
    std::size_t pi = 0;
    for (const auto& blk : blocks) {
      if (!blk.psd) {
        out.segment(blk.offset, blk.len) =
            (v.segment(blk.offset, blk.len).array() / scal.w_nonneg.square()).matrix();
      } else {
        const auto& ps = scal.psd[pi++];
        const Eigen::MatrixXd vm = smat(v.segment(blk.offset, blk.len), blk.dim);
        out.segment(blk.offset, blk.len) = svec(ps.wm_inv * vm * ps.wm_inv);
      }
    }
    return out;
  };
  auto apply_h = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd out(q);
    std::size_t pi = 0;
    for (const auto& blk : blocks) {
      if (!blk.psd) {
        out.segment(blk.offset, blk.len) =
            (v.segment(blk.offset, blk.len).array() * scal.w_nonneg.square()).matrix();
      } else {
        const auto& ps = scal.psd[pi++];
        const Eigen::MatrixXd vm = smat(v.segment(blk.offset, blk.len), blk.dim);
        out.segment(blk.offset, blk.len) = svec(ps.wm * vm * ps.wm);
      }
    }
    return out;
  };

  // ds~ = R^{-1} dS R^{-T}, dz~ = R' dZ R (diagonal scalings on nonneg).
  auto to_scaled_s = [&](const Eigen::VectorXd& ds) {
    Eigen::VectorXd out(q);
    std::size_t pi = 0;
    for (const auto& blk : blocks) {
      if (!blk.psd) {
        out.segment(blk.offset, blk.len) =
            (ds.segment(blk.offset, blk.len).array() / scal.w_nonneg).matrix();
      } else {
        const auto& ps = scal.psd[pi++];
        const Eigen::MatrixXd vm = smat(ds.segment(blk.offset, blk.len), blk.dim);
        out.segment(blk.offset, blk.len) = svec(ps.r_inv * vm * ps.r_inv.transpose());
      }
    }
    return out;
  };
  auto to_scaled_z = [&](const Eigen::VectorXd& dz) {
    Eigen::VectorXd out(q);
    std::size_t pi = 0;
    for (const auto& blk : blocks) {
      if (!blk.psd) {
        out.segment(blk.offset, blk.len) =
            (dz.segment(blk.offset, blk.len).array() * scal.w_nonneg).matrix();
      } else {
        const auto& ps = scal.psd[pi++];
        const Eigen::MatrixXd vm = smat(dz.segment(blk.offset, blk.len), blk.dim);
        out.segment(blk.offset, blk.len) = svec(ps.r.transpose() * vm * ps.r);
      }
    }
    return out;
  };

  // Largest t with Lambda + t * dv_scaled staying in the cone.
  auto max_step_scaled = [&](const Eigen::VectorXd& dv_scaled) {
    double step = std::numeric_limits<double>::infinity();
    std::size_t pi = 0;
    for (const auto& blk : blocks) {
      if (!blk.psd) {
        for (int i = 0; i < blk.len; ++i) {
          const double rate = dv_scaled[blk.offset + i] / scal.lambda_nonneg[i];
          if (rate < 0.0) step = std::min(step, -1.0 / rate);
        }
      } else {
        const auto& ps = scal.psd[pi++];
        const Eigen::VectorXd inv_sqrt = ps.lambda.cwiseSqrt().cwiseInverse();
        const Eigen::MatrixXd dm = smat(dv_scaled.segment(blk.offset, blk.len), blk.dim);
        const Eigen::MatrixXd scaled = inv_sqrt.asDiagonal() * dm * inv_sqrt.asDiagonal();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(scaled, Eigen::EigenvaluesOnly);
        const double mn = es.eigenvalues().minCoeff();
        if (mn < 0.0) step = std::min(step, -1.0 / mn);
      }
    }
    return step;
  };

  // Converts a scaled-space target d into s-space: R d R' (or w*d).
  auto from_scaled_target = [&](const Eigen::VectorXd& d_scaled) {
    Eigen::VectorXd out(q);
    std::size_t pi = 0;
    for (const auto& blk : blocks) {
      if (!blk.psd) {
        out.segment(blk.offset, blk.len) =
            (d_scaled.segment(blk.offset, blk.len).array() * scal.w_nonneg).matrix();
      } else {
        const auto& ps = scal.psd[pi++];
        const Eigen::MatrixXd dm = smat(d_scaled.segment(blk.offset, blk.len), blk.dim);
        out.segment(blk.offset, blk.len) = svec(ps.r * dm * ps.r.transpose());
      }
    }
    return out;
  };

  // One pass through the reduced factorization of
  //   [0     G_eq'  G_p' ] [dw  ]   [bx  ]
  //   [G_eq  0      0    ] [dzeq] = [bz_e]
  //   [G_p   0      -H   ] [dzp ]   [bz_p]
  auto solve_once = [&](const Eigen::VectorXd& bx, const Eigen::VectorXd& bz_eq,
                        const Eigen::VectorXd& bz_prop, Eigen::VectorXd& dw,
                        Eigen::VectorXd& dz_eq_out, Eigen::VectorXd& dz_prop_out) {
    const Eigen::VectorXd rhs1 = bx + G_prop.transpose() * apply_hinv(bz_prop);
    const Eigen::VectorXd t1 = reduced_llt.solve(rhs1);
    if (p > 0) {
      dz_eq_out = schur_llt.solve(G_eq * t1 - bz_eq);
      dw = t1 - reduced_llt.solve(G_eq.transpose() * dz_eq_out);
    } else {
      dz_eq_out.resize(0);
      dw = t1;
    }
    dz_prop_out = apply_hinv(G_prop * dw - bz_prop);
  };

  // Full solve with iterative refinement against the unreduced KKT system;
  // this keeps the dual residual from drifting once the scaling becomes
  // extremely ill-conditioned near convergence.
  auto kkt_solve = [&](const Eigen::VectorXd& bx, const Eigen::VectorXd& bz_eq,
                       const Eigen::VectorXd& bz_prop, Eigen::VectorXd& dw,
                       Eigen::VectorXd& dz_eq_out, Eigen::VectorXd& dz_prop_out) {
    solve_once(bx, bz_eq, bz_prop, dw, dz_eq_out, dz_prop_out);
    const double scale = 1.0 + std::max({bx.lpNorm<Eigen::Infinity>(),
                                         p > 0 ? bz_eq.lpNorm<Eigen::Infinity>() : 0.0,
                                         bz_prop.lpNorm<Eigen::Infinity>()});
    double prev = std::numeric_limits<double>::infinity();
    Eigen::VectorXd ew(n), eeq(p), ep(q);
    for (int round = 0; round < 6; ++round) {
      Eigen::VectorXd r1 = bx - G_prop.transpose() * dz_prop_out;
      if (p > 0) r1 -= G_eq.transpose() * dz_eq_out;
      const Eigen::VectorXd r2 = p > 0 ? (bz_eq - G_eq * dw).eval() : Eigen::VectorXd();
      const Eigen::VectorXd r3 = bz_prop - G_prop * dw + apply_h(dz_prop_out);
      const double resid = std::max({r1.lpNorm<Eigen::Infinity>(),
                                     p > 0 ? r2.lpNorm<Eigen::Infinity>() : 0.0,
                                     r3.lpNorm<Eigen::Infinity>()});
      if (resid < 1e-15 * scale || resid >= 0.5 * prev) break;
      prev = resid;
      solve_once(r1, r2, r3, ew, eeq, ep);
      dw += ew;
      if (p > 0) dz_eq_out += eeq;
      dz_prop_out += ep;
    }
  };

  double best_merit = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < settings.max_iter; ++iter) {
    res.iterations = iter;
    Eigen::VectorXd s_full = Eigen::VectorXd::Zero(m);
    s_full.tail(q) = s_prop;
    Eigen::VectorXd z_full(m);
    z_full.head(p) = z_eq;
    z_full.tail(q) = z_prop;

    const Eigen::VectorXd rz = G * w + s_full - data.h;
    const Eigen::VectorXd rx = data.c + G.transpose() * z_full;
    const double gap = q > 0 ? s_prop.dot(z_prop) : 0.0;
    const double pobj = data.c.dot(w);
    const double dobj = -data.h.dot(z_full);
    const double pres = rz.norm() / h_norm;
    const double dres = rx.norm() / c_norm;
    const double rel_gap = gap / std::max(1.0, std::abs(pobj));

    // Later iterations can trade residual accuracy for gap; keep the best
    // iterate seen so a final stall still reports the strongest point.
    const double merit = std::max({pres, dres, std::min(gap, rel_gap)});
    if (merit < best_merit) {
      best_merit = merit;
      res.w = w;
      res.s = s_full;
      res.z = z_full;
      res.primal_obj = pobj;
      res.dual_obj = dobj;
      res.gap = gap;
      res.rel_gap = rel_gap;
      res.primal_resid = pres;
      res.dual_resid = dres;
    }

    if (settings.verbosity >= 2)
      std::fprintf(stderr, "ipm %3d pobj % .8e dobj % .8e gap %.3e pres %.3e dres %.3e\n", iter,
                   pobj, dobj, gap, pres, dres);

    if (pres <= settings.feas_tol && dres <= settings.feas_tol &&
        (gap <= settings.gap_tol || rel_gap <= settings.gap_tol)) {
      res.w = w;
      res.s = s_full;
      res.z = z_full;
      res.primal_obj = pobj;
      res.dual_obj = dobj;
      res.gap = gap;
      res.rel_gap = rel_gap;
      res.primal_resid = pres;
      res.dual_resid = dres;
      res.status = Status::Optimal;
      return res;
    }

    if (q == 0) {
      res.status = Status::NumericalFailure;
      return res;
    }

    if (!compute_scaling(blocks, s_prop, z_prop, scal)) {
      res.status = Status::NumericalFailure;
      return res;
    }
    const double mu = gap / degree;

    hinv_g.resize(q, n);
    for (int j = 0; j < n; ++j) hinv_g.col(j) = apply_hinv(G_prop.col(j));
    reduced = G_prop.transpose() * hinv_g;
    reduced = 0.5 * (reduced + reduced.transpose());
    if (!reduced_llt.compute(reduced)) {
      res.status = Status::NumericalFailure;
      return res;
    }
    if (p > 0) {
      const Eigen::MatrixXd minv_geqt =
          reduced_llt.solve_matrix(Eigen::MatrixXd(G_eq.transpose()));
      schur = G_eq * minv_geqt;
      schur = 0.5 * (schur + schur.transpose());
      if (!schur_llt.compute(schur)) {
        res.status = Status::NumericalFailure;
        return res;
      }
    }

    Eigen::VectorXd lambda_vec(q);
    {
      std::size_t pi = 0;
      for (const auto& blk : blocks) {
        if (!blk.psd) {
          lambda_vec.segment(blk.offset, blk.len) = scal.lambda_nonneg.matrix();
        } else {
          const auto& ps = scal.psd[pi++];
          lambda_vec.segment(blk.offset, blk.len) =
              svec(Eigen::MatrixXd(ps.lambda.asDiagonal()));
        }
      }
    }

    // Predictor.
    Eigen::VectorXd dw_a(n), dzeq_a(p), dzp_a(q);
    kkt_solve(-rx, -rz.head(p), -rz.tail(q) + from_scaled_target(lambda_vec), dw_a, dzeq_a,
              dzp_a);
    const Eigen::VectorXd dsp_a = -rz.tail(q) - G_prop * dw_a;

    const Eigen::VectorXd dsa_scaled = to_scaled_s(dsp_a);
    const Eigen::VectorXd dza_scaled = to_scaled_z(dzp_a);
    const double step_aff =
        std::min({1.0, max_step_scaled(dsa_scaled), max_step_scaled(dza_scaled)});
    const double gap_aff = (s_prop + step_aff * dsp_a).dot(z_prop + step_aff * dzp_a);
    const double sigma = std::clamp(std::pow(std::max(0.0, gap_aff / gap), 3.0), 0.0, 1.0);

    // Corrector target d = lambda \ (lambda o lambda + dsa~ o dza~ - sigma mu e).
    Eigen::VectorXd d_combined(q);
    {
      std::size_t pi = 0;
      for (const auto& blk : blocks) {
        if (!blk.psd) {
          for (int i = 0; i < blk.len; ++i) {
            const double l = scal.lambda_nonneg[i];
            const double corr = dsa_scaled[blk.offset + i] * dza_scaled[blk.offset + i];
            d_combined[blk.offset + i] = (l * l + corr - sigma * mu) / l;
          }
        } else {
          const auto& ps = scal.psd[pi++];
          const Eigen::MatrixXd dsm = smat(dsa_scaled.segment(blk.offset, blk.len), blk.dim);
          const Eigen::MatrixXd dzm = smat(dza_scaled.segment(blk.offset, blk.len), blk.dim);
          Eigen::MatrixXd target = 0.5 * (dsm * dzm + dzm * dsm);
          for (int i = 0; i < blk.dim; ++i)
            target(i, i) += ps.lambda[i] * ps.lambda[i] - sigma * mu;
          Eigen::MatrixXd divided(blk.dim, blk.dim);
          for (int r = 0; r < blk.dim; ++r)
            for (int col = 0; col < blk.dim; ++col)
              divided(r, col) = 2.0 * target(r, col) / (ps.lambda[r] + ps.lambda[col]);
          d_combined.segment(blk.offset, blk.len) = svec(divided);
        }
      }
    }

    Eigen::VectorXd dw(n), dzeq(p), dzp(q);
    kkt_solve(-rx, -rz.head(p), -rz.tail(q) + from_scaled_target(d_combined), dw, dzeq, dzp);
    const Eigen::VectorXd dsp = -rz.tail(q) - G_prop * dw;

    const double step_max =
        std::min({max_step_scaled(to_scaled_s(dsp)), max_step_scaled(to_scaled_z(dzp))});
    const double step = std::min(1.0, kStepFraction * step_max);
    if (settings.verbosity >= 2)
      std::fprintf(stderr, "    sigma %.3e step_aff %.3e step %.3e\n", sigma, step_aff, step);
    if (!std::isfinite(step) || step < 1e-13) break;

    w += step * dw;
    z_eq += step * dzeq;
    z_prop += step * dzp;
    s_prop += step * dsp;
  }

  // Stalled: the strongest iterate may still satisfy the tolerances.
  res.status = (res.primal_resid <= settings.feas_tol && res.dual_resid <= settings.feas_tol &&
                (res.gap <= settings.gap_tol || res.rel_gap <= settings.gap_tol))
                   ? Status::Optimal
                   : Status::NumericalFailure;
  return res;
}

}  // namespace sigbell::solver::detail
