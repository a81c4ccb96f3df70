#include "fourmg/multigrid.hpp"

#include "fourmg/kernels.hpp"
#include "fourmg/rng.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace fourmg {

LevelChain build_level_chain(const ProblemSpec& spec, int coarse_level, int fine_level) {
  if (coarse_level < 0 || coarse_level > fine_level)
    throw std::invalid_argument("build_level_chain: need 0 <= coarse_level <= fine_level");
  LevelChain chain;
  auto mesh = std::make_shared<Mesh>(build_lshape_mesh(coarse_level));
  TransferMap transfer; // empty for the coarsest level
  for (int level = coarse_level; level <= fine_level; ++level) {
    auto data = std::make_shared<MGLevelData>();
    data->level = level;
    data->sys = std::make_shared<DiscreteSystem>(build_system(mesh, spec.bc, spec.a, spec.b));
    if (data->sys->n() == 0)
      throw std::invalid_argument("build_level_chain: level " + std::to_string(level) +
                                  " has no free DOFs");
    if (!chain.empty()) {
      const DofMap& coarse_dofs = chain.back()->sys->dofs;
      const DofMap& fine_dofs = data->sys->dofs;
      TripletBuilder tb(fine_dofs.n_free, coarse_dofs.n_free);
      for (int fv = 0; fv < static_cast<int>(transfer.fine_to_coarse.size()); ++fv) {
        int fi = fine_dofs.index_of[fv];
        if (fi < 0) continue;
        const TransferEntry& e = transfer.fine_to_coarse[fv];
        int c0 = coarse_dofs.index_of[e.p0];
        if (c0 >= 0 && e.w0 != 0.0) tb.add(fi, c0, e.w0);
        if (e.p1 >= 0) {
          int c1 = coarse_dofs.index_of[e.p1];
          if (c1 >= 0 && e.w1 != 0.0) tb.add(fi, c1, e.w1);
        }
      }
      data->P = tb.build();
      data->R = data->P.transpose();
    }
    chain.push_back(std::move(data));
    if (level < fine_level) {
      auto [fine_mesh, map] = refine_uniform(*mesh);
      mesh = std::make_shared<Mesh>(std::move(fine_mesh));
      transfer = std::move(map);
    }
  }
  return chain;
}

MGHierarchy build_hierarchy(const LevelChain& chain, double tau, BlockVariant target,
                            const SmootherConfig& smoother, CycleType cycle, int pre,
                            int post) {
  if (chain.empty()) throw std::invalid_argument("build_hierarchy: empty level chain");
  if (pre < 0 || post < 0 || pre + post == 0)
    throw std::invalid_argument("build_hierarchy: need pre + post >= 1");
  if (smoother.kind == SmootherConfig::Kind::Distributive && target != BlockVariant::B &&
      target != BlockVariant::Btilde)
    throw std::invalid_argument("build_hierarchy: distributive smoother needs target B or Btilde");

  MGHierarchy h;
  h.smoother = smoother;
  h.cycle = cycle;
  h.pre = pre;
  h.post = post;
  h.tau = tau;
  h.target = target;
  h.levels.reserve(chain.size());
  for (const auto& data : chain) {
    MGLevelSystem L;
    L.data = data;
    L.problem = DiscreteProblem{data->sys, tau};
    L.op = build_block(L.problem, target);
    L.pb = invert_point_blocks(L.op);
    if (smoother.kind == SmootherConfig::Kind::Distributive)
      L.schur_diag = schur_diagonal(L.problem);
    h.levels.push_back(std::move(L));
  }
  h.coarse_lu = DenseLU::factor(h.levels.front().op.densify());
  return h;
}

MGWork MGWork::create(const MGHierarchy& h) {
  MGWork w;
  w.lv.resize(h.levels.size());
  for (std::size_t l = 0; l < h.levels.size(); ++l) {
    const std::size_t m = 2 * static_cast<std::size_t>(h.levels[l].op.n);
    w.lv[l].x.assign(m, 0.0);
    w.lv[l].rhs.assign(m, 0.0);
    w.lv[l].r.assign(m, 0.0);
  }
  w.tmp.assign(2 * static_cast<std::size_t>(h.fine_n()), 0.0);
  return w;
}

namespace {

void smooth_once(const MGHierarchy& h, int l, MGWork& w) {
  const MGLevelSystem& L = h.levels[l];
  switch (h.smoother.kind) {
    case SmootherConfig::Kind::CollectiveGS:
      collective_gs_sweep(L.op, L.pb, w.lv[l].x, w.lv[l].rhs, &L.data->sys->gs_order);
      break;
    case SmootherConfig::Kind::CollectiveJacobi:
      collective_jacobi_sweep(L.op, L.pb, w.lv[l].x, w.lv[l].rhs, h.smoother.theta, w.tmp);
      break;
    case SmootherConfig::Kind::Distributive:
      distributive_sweep(L.problem, h.target, L.op, L.schur_diag, w.lv[l].x, w.lv[l].rhs,
                         h.smoother, w.dgs);
      break;
  }
}

void cycle_level(const MGHierarchy& h, int l, MGWork& w) {
  if (l == 0) {
    w.lv[0].x = w.lv[0].rhs;
    h.coarse_lu.solve_inplace(w.lv[0].x.data(), 1);
    return;
  }
  const MGLevelSystem& L = h.levels[l];
  const int nf = L.op.n;
  const int nc = h.levels[l - 1].op.n;

  for (int s = 0; s < h.pre; ++s) smooth_once(h, l, w);

  L.op.residual(w.lv[l].rhs.data(), w.lv[l].x.data(), w.lv[l].r.data());
  kernels::spmv(L.data->R, w.lv[l].r.data(), w.lv[l - 1].rhs.data());
  kernels::spmv(L.data->R, w.lv[l].r.data() + nf, w.lv[l - 1].rhs.data() + nc);
  kernels::fill(2 * static_cast<std::size_t>(nc), 0.0, w.lv[l - 1].x.data());

  cycle_level(h, l - 1, w);
  if (h.cycle == CycleType::W && l - 1 > 0) cycle_level(h, l - 1, w);

  kernels::spmv_acc(L.data->P, 1.0, w.lv[l - 1].x.data(), w.lv[l].x.data());
  kernels::spmv_acc(L.data->P, 1.0, w.lv[l - 1].x.data() + nc, w.lv[l].x.data() + nf);

  for (int s = 0; s < h.post; ++s) smooth_once(h, l, w);
}

} // namespace

void mg_cycle_inplace(const MGHierarchy& h, MGWork& work) {
  cycle_level(h, static_cast<int>(h.levels.size()) - 1, work);
}

Vec mg_cycle(const MGHierarchy& h, const Vec& rhs, const Vec& x) {
  const std::size_t m = 2 * static_cast<std::size_t>(h.fine_n());
  if (rhs.size() != m || x.size() != m)
    throw std::invalid_argument("mg_cycle: dimension mismatch");
  MGWork w = MGWork::create(h);
  w.lv.back().rhs = rhs;
  w.lv.back().x = x;
  mg_cycle_inplace(h, w);
  return w.lv.back().x;
}

void mg_precondition(const MGHierarchy& h, MGWork& work, const Vec& r, Vec& out) {
  work.lv.back().rhs = r;
  kernels::fill(work.lv.back().x.size(), 0.0, work.lv.back().x.data());
  mg_cycle_inplace(h, work);
  out = work.lv.back().x;
}

SolveReport mg_solve(const MGHierarchy& h, const Vec& rhs, double tol, int maxit,
                     std::uint64_t seed, Vec* solution) {
  if (!(tol > 0.0)) throw std::invalid_argument("mg_solve: tol must be positive");
  const std::size_t m = 2 * static_cast<std::size_t>(h.fine_n());
  if (rhs.size() != m) throw std::invalid_argument("mg_solve: dimension mismatch");

  const auto t0 = std::chrono::steady_clock::now();
  MGWork w = MGWork::create(h);
  w.lv.back().rhs = rhs;
  w.lv.back().x = random_vector(m, seed);

  const BlockOperator& op = h.fine_op();
  Vec r(m);
  op.residual(rhs.data(), w.lv.back().x.data(), r.data());
  const double r0 = kernels::nrm2(m, r.data());

  SolveReport rep;
  rep.residuals.push_back(r0);
  if (r0 == 0.0) {
    rep.converged = true;
    rep.conv_factor = 0.0;
  } else {
    for (int k = 1; k <= maxit; ++k) {
      mg_cycle_inplace(h, w);
      op.residual(rhs.data(), w.lv.back().x.data(), r.data());
      const double rk = kernels::nrm2(m, r.data());
      rep.residuals.push_back(rk);
      rep.iterations = k;
      if (rk / r0 < tol) {
        rep.converged = true;
        break;
      }
    }
    if (rep.iterations > 0)
      rep.conv_factor = std::pow(rep.residuals.back() / r0, 1.0 / rep.iterations);
  }
  rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
  if (solution) *solution = w.lv.back().x;
  return rep;
}

} // namespace fourmg
