#pragma once

#include <chrono>
#include <exception>
#include <limits>
#include <string>
#include <vector>

#include "cgks/evolution/ghost.hpp"
#include "cgks/flux/gks_flux.hpp"
#include "cgks/recon/reconstructor.hpp"

namespace cgks {

/// Evolved degrees of freedom: cell averages, cell-averaged slopes, DF factor.
struct FlowState {
  std::vector<Conserved> mean;
  std::vector<ConservedGrad> slope;
  std::vector<double> alpha;
  double time = 0.0;
  long step = 0;

  static FlowState uniform(Index cells, const Conserved& w) {
    FlowState s;
    s.mean.assign(cells, w);
    s.slope.assign(cells, ConservedGrad::Zero());
    s.alpha.assign(cells, 1.0);
    return s;
  }
};

struct SolverOptions {
  double gamma = 1.4;
  CollisionModel collision;
  ReconOptions recon;
  bool df = true;
  double cfl = 0.5;
  /// Update slopes after stage 1 from the half-step point states as well.
  bool mid_stage_slopes = false;
};

/// Time-derivative data of one stage: L and dL/dt per cell.
struct StageResidual {
  std::vector<Conserved> L, Lt;
};

struct StageTimers {
  double reconstruction = 0.0;
  double sweep = 0.0;  // polynomial construction only, part of reconstruction
  double flux = 0.0;
  double update = 0.0;
  long reconstructions = 0;
};

/// Two-stage fourth-order combinations for dW/dt = L(W).
inline Conserved s2o4_midstate(const Conserved& w, const Conserved& l1, const Conserved& lt1, double dt) {
  return w + 0.5 * dt * l1 + 0.125 * dt * dt * lt1;
}
inline Conserved s2o4_final(const Conserved& w, const Conserved& l1, const Conserved& lt1, const Conserved& lt2,
                            double dt) {
  return w + dt * l1 + dt * dt / 6.0 * (lt1 + 2.0 * lt2);
}

class Solver {
 public:
  Solver(const Mesh& mesh, SolverOptions opt)
      : mesh_(mesh), opt_(opt), recon_(mesh, opt.recon) {
    for (const Face& f : mesh_.faces) {
      if (!f.is_boundary()) continue;
      const BoundaryPatch& p = mesh_.patches.at(f.patch);
      if (p.kind == PatchKind::Unset || p.kind == PatchKind::Periodic)
        throw MeshError("boundary patch '" + p.name + "' has no usable boundary kind (" + to_string(p.kind) + ")");
    }
    frames_.reserve(mesh_.faces.size());
    for (const Face& f : mesh_.faces) frames_.push_back(FaceFrame::from_normal(f.normal));
    const std::size_t npts = 4 * mesh_.faces.size();
    pt0_.assign(npts, Conserved::Zero());
    pt1_.assign(npts, Conserved::Zero());
    pth_.assign(npts, Conserved::Zero());
    face_full_.assign(mesh_.faces.size(), Conserved::Zero());
    face_half_.assign(mesh_.faces.size(), Conserved::Zero());
    face_alpha_.assign(mesh_.faces.size(), 1.0);
  }

  const Mesh& mesh() const { return mesh_; }
  const SolverOptions& options() const { return opt_; }
  const Reconstructor& reconstructor() const { return recon_; }
  const std::vector<QuadPoly>& polys() const { return polys_; }
  const StageTimers& timers() const { return timers_; }
  /// Cells whose reconstruction was reduced to the cell mean in the last sweep.
  long limited_cells() const { return limited_; }

  /// Builds the limited polynomial of every cell from the given DOFs.
  void reconstruct(const std::vector<Conserved>& mean, const std::vector<ConservedGrad>& slope,
                   const std::vector<double>& alpha, std::vector<Conserved>* omega2 = nullptr) {
    const auto t0 = clock::now();
    ghost_means(mean);
    const auto ts = clock::now();
    recon_.sweep({mean, slope, ghost_mean_, alpha}, polys_, omega2);
    timers_.sweep += seconds_since(ts);
    ++timers_.reconstructions;
    limited_ = 0;
    const Index nc = mesh_.num_cells();
#pragma omp parallel for schedule(static) reduction(+ : limited_)
    for (Index c = 0; c < nc; ++c)
      if (!face_points_physical(c)) {
        polys_[c] = QuadPoly::constant(mean[c]);
        ++limited_;
      }
    timers_.reconstruction += seconds_since(t0);
  }

  /// Face fluxes of the current polynomials over [0, dt] and the stage
  /// derivatives. Also records point states and face DF factors.
  void residual(double dt, StageResidual& out) {
    const auto t0 = clock::now();
    const Index nf = mesh_.num_faces();
    const CollisionModel model = opt_.collision;
    std::exception_ptr error;
    Index error_face = nf;
#pragma omp parallel for schedule(dynamic, 64)
    for (Index fi = 0; fi < nf; ++fi) {
      try {
        face_flux(fi, dt, model);
      } catch (...) {
#pragma omp critical(cgks_flux_error)
        if (fi < error_face) {
          error_face = fi;
          error = std::current_exception();
        }
      }
    }
    if (error) std::rethrow_exception(error);
    timers_.flux += seconds_since(t0);

    const auto t1 = clock::now();
    const Index nc = mesh_.num_cells();
    out.L.resize(nc);
    out.Lt.resize(nc);
#pragma omp parallel for schedule(static)
    for (Index c = 0; c < nc; ++c) {
      const Cell& cell = mesh_.cells[c];
      Conserved full = Conserved::Zero(), half = Conserved::Zero();
      for (int i = 0; i < cell.num_faces; ++i) {
        const double s = cell.face_sign[i];
        full -= s * face_full_[cell.faces[i]];
        half -= s * face_half_[cell.faces[i]];
      }
      full /= cell.volume;
      half /= cell.volume;
      const auto [l0, lt] = flux_linear_fit(full, half, dt);
      out.L[c] = l0;
      out.Lt[c] = lt;
    }
    timers_.update += seconds_since(t1);
  }

  /// Cell-averaged slopes from point states on every face (divergence theorem).
  std::vector<ConservedGrad> slopes_from_points(const std::vector<Conserved>& pts) const {
    const Index nc = mesh_.num_cells();
    std::vector<ConservedGrad> out(nc);
#pragma omp parallel for schedule(static)
    for (Index c = 0; c < nc; ++c) {
      const Cell& cell = mesh_.cells[c];
      ConservedGrad g = ConservedGrad::Zero();
      for (int i = 0; i < cell.num_faces; ++i) {
        const Index fi = cell.faces[i];
        const Face& f = mesh_.faces[fi];
        for (int k = 0; k < f.num_points; ++k)
          g.noalias() += (cell.face_sign[i] * f.dS[k]) * pts[4 * fi + k].transpose();
      }
      out[c] = g / cell.volume;
    }
    return out;
  }

  /// Slopes at the new time level, scaled by the cell DF factors (empty means 1).
  std::vector<ConservedGrad> update_slopes(const std::vector<Conserved>& pts, const std::vector<double>& alpha) const {
    std::vector<ConservedGrad> g = slopes_from_points(pts);
    if (!alpha.empty())
      for (std::size_t c = 0; c < g.size(); ++c) g[c] *= alpha[c];
    return g;
  }

  /// DF factor per cell from the face factors of the last residual.
  std::vector<double> cell_alpha() const {
    std::vector<double> a(mesh_.num_cells(), 1.0);
    for (Index c = 0; c < mesh_.num_cells(); ++c) {
      const Cell& cell = mesh_.cells[c];
      for (int i = 0; i < cell.num_faces; ++i) a[c] *= face_alpha_[cell.faces[i]];
    }
    return a;
  }

  /// One two-stage fourth-order step. Throws SolverError on a non-physical average.
  void s2o4_step(FlowState& st, double dt) {
    if (st.alpha.empty()) st.alpha.assign(mesh_.num_cells(), 1.0);
    time_ = st.time;
    const Index nc = mesh_.num_cells();

    reconstruct(st.mean, st.slope, st.alpha);
    residual(dt, r1_);
    const std::vector<Conserved> p0_stage1 = pt0_;
    std::vector<Conserved> mid(nc);
    for (Index c = 0; c < nc; ++c) {
      mid[c] = s2o4_midstate(st.mean[c], r1_.L[c], r1_.Lt[c], dt);
      if (!is_physical(mid[c], opt_.gamma))
        throw SolverError("non-physical intermediate average in cell " + std::to_string(c), c, st.time + 0.5 * dt);
    }

    if (opt_.mid_stage_slopes) {
      std::vector<ConservedGrad> mid_slope = slopes_from_points(pth_);
      reconstruct(mid, mid_slope, st.alpha);
    } else {
      reconstruct(mid, st.slope, st.alpha);
    }
    residual(dt, r2_);

    const auto t0 = clock::now();
    std::vector<Conserved> next(nc);
    for (Index c = 0; c < nc; ++c) {
      next[c] = s2o4_final(st.mean[c], r1_.L[c], r1_.Lt[c], r2_.Lt[c], dt);
      if (!is_physical(next[c], opt_.gamma))
        throw SolverError("non-physical average in cell " + std::to_string(c), c, st.time + dt);
    }
    // point states at t^{n+1}: start value plus the midpoint increment of stage 2
    std::vector<Conserved> pts(pt0_.size());
    for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = p0_stage1[i] + (pt1_[i] - pt0_[i]);
    if (opt_.df) st.alpha = cell_alpha();
    std::vector<ConservedGrad> slope = update_slopes(pts, opt_.df ? st.alpha : std::vector<double>{});
    st.mean = std::move(next);
    st.slope = std::move(slope);
    st.time += dt;
    ++st.step;
    timers_.update += seconds_since(t0);
  }

  /// Stable time step from the convective and viscous spectral radii.
  double compute_dt(const FlowState& st) const {
    double dt = std::numeric_limits<double>::infinity();
    for (Index c = 0; c < mesh_.num_cells(); ++c) {
      const Cell& cell = mesh_.cells[c];
      const Conserved& w = st.mean[c];
      const Vec3 u = velocity(w);
      double un = 0.0;
      for (int i = 0; i < cell.num_faces; ++i) un = std::max(un, std::abs(u.dot(mesh_.faces[cell.faces[i]].normal)));
      const double h = cell.volume / cell.surface_area;
      const double speed = un + sound_speed(w, opt_.gamma) + 2.0 * opt_.collision.mu / (w[0] * h);
      dt = std::min(dt, opt_.cfl * h / speed);
    }
    return dt;
  }

  /// Point states of the last residual at t = 0 and t = dt (face-major, 4 slots per face).
  const std::vector<Conserved>& point_states_start() const { return pt0_; }
  const std::vector<Conserved>& point_states_end() const { return pt1_; }
  const std::vector<double>& face_alpha() const { return face_alpha_; }
  /// Time-integrated flux over [0, dt] of the last residual, per face along its stored normal.
  const std::vector<Conserved>& face_integrals() const { return face_full_; }
  const StageResidual& stage1() const { return r1_; }
  const StageResidual& stage2() const { return r2_; }

 private:
  using clock = std::chrono::steady_clock;
  static double seconds_since(clock::time_point t) {
    return std::chrono::duration<double>(clock::now() - t).count();
  }

  void ghost_means(const std::vector<Conserved>& mean) {
    ghost_mean_.resize(mesh_.faces.size());
    for (Index fi = 0; fi < mesh_.num_faces(); ++fi) {
      const Face& f = mesh_.faces[fi];
      if (!f.is_boundary()) continue;
      const BoundaryPatch& p = mesh_.patches[f.patch];
      ghost_mean_[fi] = ghost_state(p.kind, mean[f.owner], ConservedGrad::Zero(), f.normal, p.freestream, opt_.gamma).w;
    }
  }

  bool face_points_physical(Index c) const {
    const Cell& cell = mesh_.cells[c];
    for (int i = 0; i < cell.num_faces; ++i) {
      const Face& f = mesh_.faces[cell.faces[i]];
      const Vec3 shift = cell.face_sign[i] < 0 ? Vec3(-f.neighbor_offset) : Vec3::Zero();
      for (int k = 0; k < f.num_points; ++k) {
        const BasisRow phi = basis_at(cell, f.points[k] + shift).phi;
        const Conserved w = (phi * polys_[c].a).transpose();
        if (!is_physical(w, opt_.gamma)) return false;
      }
    }
    return true;
  }

  void face_flux(Index fi, double dt, const CollisionModel& model) {
    const Face& f = mesh_.faces[fi];
    const FaceFrame& fr = frames_[fi];
    const Cell& co = mesh_.cells[f.owner];
    Conserved full = Conserved::Zero(), half = Conserved::Zero();
    double alpha = 1.0;
    for (int k = 0; k < f.num_points; ++k) {
      const Vec3& x = f.points[k];
      const PolyValue l = eval_poly(polys_[f.owner], co, x);
      PolyValue r;
      if (!f.is_boundary()) {
        r = eval_poly(polys_[f.neighbor], mesh_.cells[f.neighbor], x - f.neighbor_offset);
      } else {
        const BoundaryPatch& p = mesh_.patches[f.patch];
        const GhostState g = ghost_state(p.kind, l.value, l.grad, f.normal, p.freestream, opt_.gamma);
        r = {g.w, g.g};
      }
      InterfaceInput in;
      in.wl = fr.to_local(l.value);
      in.wr = fr.to_local(r.value);
      in.gl = fr.to_local(l.grad);
      in.gr = fr.to_local(r.grad);
      in.dt = dt;
      in.gamma = opt_.gamma;
      in.model = model;
      FluxSample s;
      try {
        s = gks_flux_point(in);
      } catch (const NonPhysicalState& e) {
        throw SolverError(std::string(e.what()) + " at face " + std::to_string(fi) + " point " + std::to_string(k),
                          f.owner, time_);
      }
      const double w = f.weights[k] * f.area;
      full += w * fr.to_global(s.full);
      half += w * fr.to_global(s.half);
      pt0_[4 * fi + k] = fr.to_global(s.point0);
      pt1_[4 * fi + k] = fr.to_global(s.point);
      pth_[4 * fi + k] = fr.to_global(s.point_half);
      if (opt_.df) alpha *= df_factor(l.value, r.value, f.normal, opt_.gamma);
    }
    face_full_[fi] = full;
    face_half_[fi] = half;
    face_alpha_[fi] = alpha;
  }

  const Mesh& mesh_;
  SolverOptions opt_;
  Reconstructor recon_;
  std::vector<FaceFrame> frames_;
  std::vector<QuadPoly> polys_;
  std::vector<Conserved> ghost_mean_;
  std::vector<Conserved> pt0_, pt1_, pth_;
  std::vector<Conserved> face_full_, face_half_;
  std::vector<double> face_alpha_;
  StageResidual r1_, r2_;
  StageTimers timers_;
  long limited_ = 0;
  double time_ = 0.0;
};

}  // namespace cgks
