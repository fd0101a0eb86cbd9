#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgks/recon/limiting.hpp"
#include "cgks/recon/original.hpp"

namespace cgks {

enum class ReconPath { TwoStep, Original };

inline const char* to_string(ReconPath p) { return p == ReconPath::TwoStep ? "two_step" : "original"; }

inline ReconPath recon_path_from_string(const std::string& s) {
  if (s == "two_step" || s == "two-step") return ReconPath::TwoStep;
  if (s == "original") return ReconPath::Original;
  throw std::invalid_argument("unknown reconstruction path '" + s + "'");
}

struct ReconOptions {
  ReconPath path = ReconPath::TwoStep;
  bool weno = true;  // false: linear weights, R = p2
  QuadMatch match = QuadMatch::Symmetric;
};

/// Per-cell outcome bits.
enum ReconFlag : std::uint8_t {
  kReconOk = 0,
  kSubStencil = 1,      // boundary cell, Green-Gauss p1 only
  kLsFallback = 2,      // singular 3x3 system, Green-Gauss p1 used
  kUnconstrained = 4,   // rank-deficient constraints in the original path
};

struct ReconInput {
  const std::vector<Conserved>& mean;
  const std::vector<ConservedGrad>& slope;
  const std::vector<Conserved>& ghost_mean;  // per face; empty means "copy the cell mean"
  const std::vector<double>& alpha;          // per cell; empty means 1
};

class Reconstructor {
 public:
  Reconstructor(const Mesh& mesh, ReconOptions opt) : mesh_(mesh), opt_(opt), flags_(mesh.num_cells(), kReconOk) {
    if (opt_.path == ReconPath::Original) build_operators();
  }

  const ReconOptions& options() const { return opt_; }
  const std::vector<std::uint8_t>& flags() const { return flags_; }

  /// Persistent reals held by reconstruction matrices (zero for the two-step path).
  std::size_t matrix_reals() const { return g_data_.size(); }
  std::size_t matrix_count() const { return g_count_; }

  void sweep(const ReconInput& in, std::vector<QuadPoly>& out, std::vector<Conserved>* omega2 = nullptr) {
    const Index nc = mesh_.num_cells();
    out.resize(nc);
    if (omega2) omega2->assign(nc, Conserved::Constant(0.5));
#pragma omp parallel for schedule(static)
    for (Index c = 0; c < nc; ++c) out[c] = reconstruct_cell(c, in, omega2 ? &(*omega2)[c] : nullptr);
  }

  QuadPoly reconstruct_cell(Index c, const ReconInput& in, Conserved* omega2 = nullptr) {
    const double alpha = in.alpha.empty() ? 1.0 : in.alpha[c];
    const Conserved& w0 = in.mean[c];
    std::uint8_t flag = kReconOk;
    auto p1 = [&] { return QuadPoly::linear(w0, green_gauss_gradient(mesh_, c, in.mean, in.ghost_mean, alpha)); };

    if (!full_[c]) {
      flags_[c] = kSubStencil;
      return p1();
    }
    const bool need_geometry = opt_.path == ReconPath::TwoStep || opt_.weno;
    Stencil s;
    if (need_geometry) {
      s = make_stencil(mesh_, c);
    } else {
      const Cell& cell = mesh_.cells[c];
      for (int i = 0; i < cell.num_faces; ++i) s.cell[s.n++] = mesh_.neighbor(c, i).cell;
    }
    const StencilValues v = gather(s, c, in.mean, in.slope);

    QuadPoly p2;
    if (opt_.path == ReconPath::TwoStep) {
      if (!two_step_reconstruct(s, v, p2, opt_.match)) {
        flags_[c] = kLsFallback;
        return p1();
      }
    } else {
      const auto G = Eigen::Map<const Eigen::Matrix<double, 9, Eigen::Dynamic>>(g_data_.data() + g_offset_[c], 9,
                                                                               4 * s.n);
      p2 = original_hweno_reconstruct(G, s.n, v);
      if (g_unconstrained_[c]) flag |= kUnconstrained;
    }
    flags_[c] = flag;
    if (!opt_.weno) return p2;

    const QuadPoly lin = p1();
    const Cell& cell = mesh_.cells[c];
    Conserved beta1 = smoothness_indicator(lin, cell);
    if (const auto g = linear_ls_fit(s, w0, v.mean))
      beta1 = beta1.cwiseMin(smoothness_indicator(QuadPoly::linear(w0, *g), cell));
    const Conserved beta2 = smoothness_indicator(p2, cell);
    return weno_combine(p2, lin, beta2, beta1, w0, omega2);
  }

 private:
  void build_operators() {
    const Index nc = mesh_.num_cells();
    g_offset_.assign(nc, 0);
    g_unconstrained_.assign(nc, 0);
    for (Index c = 0; c < nc; ++c) {
      if (!full_[c]) continue;
      const Stencil s = make_stencil(mesh_, c);
      const OriginalOperator op = build_original_operator(s);
      g_offset_[c] = g_data_.size();
      g_data_.insert(g_data_.end(), op.G.data(), op.G.data() + op.G.size());
      g_unconstrained_[c] = !op.constrained;
      ++g_count_;
    }
    g_data_.shrink_to_fit();
  }

  std::vector<char> full_stencil_flags() const {
    std::vector<char> f(mesh_.num_cells());
    for (Index c = 0; c < mesh_.num_cells(); ++c) f[c] = mesh_.has_full_stencil(c);
    return f;
  }

  const Mesh& mesh_;
  ReconOptions opt_;
  std::vector<std::uint8_t> flags_;
  std::vector<char> full_ = full_stencil_flags();
  std::vector<double> g_data_;
  std::vector<std::size_t> g_offset_;
  std::vector<char> g_unconstrained_;
  std::size_t g_count_ = 0;
};

/// Persistent reconstruction storage, counted from the live containers.
struct MemoryLedger {
  std::size_t cells = 0;
  std::size_t moment_reals = 0;
  std::size_t coefficient_reals = 0;
  std::size_t df_reals = 0;
  std::size_t matrix_reals = 0;
  std::size_t matrices = 0;

  std::size_t total() const { return moment_reals + coefficient_reals + df_reals + matrix_reals; }
  double per_cell() const { return cells ? static_cast<double>(total()) / cells : 0.0; }
};

inline MemoryLedger memory_ledger(const Mesh& mesh, const Reconstructor& recon, const std::vector<QuadPoly>& polys,
                                  const std::vector<double>& alpha) {
  MemoryLedger l;
  l.cells = mesh.cells.size();
  for (const Cell& c : mesh.cells) l.moment_reals += c.moments.size();
  for (const QuadPoly& p : polys) l.coefficient_reals += p.a.size();
  l.df_reals = alpha.size();
  l.matrix_reals = recon.matrix_reals();
  l.matrices = recon.matrix_count();
  return l;
}

}  // namespace cgks
