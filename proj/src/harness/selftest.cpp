#include "mixedlab/harness/selftest.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

#include "mixedlab/harness/config.hpp"
#include "mixedlab/quadrature.hpp"
#include "mixedlab/spectral.hpp"

namespace mixedlab::harness {

namespace {

struct CheckFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(bool ok, const std::string& what) {
  if (!ok) throw CheckFailed(what);
}

MeshPtr unit_mesh(int n, TagScheme scheme = TagScheme::AllBoundary) {
  return std::make_shared<const Mesh>(tag_boundary(build_unit_square_mesh(n), scheme));
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

std::string mesh_group() {
  for (int n = 1; n <= 4; ++n) {
    const Mesh m = build_unit_square_mesh(n);
    check(m.num_vertices() - m.num_edges() + m.num_cells() == 1, "Euler relation fails at n=" + std::to_string(n));
    check(static_cast<int>(m.boundary_facets.size()) == 4 * n, "boundary edge count at n=" + std::to_string(n));
    double area = 0.0;
    for (int c = 0; c < m.num_cells(); ++c) area += m.cell_area(c);
    check(std::abs(area - 1.0) < 1e-14, "cell areas do not sum to 1");
  }
  const MeshPtr split = unit_mesh(4, TagScheme::BiotSplit);
  const auto gu = split->facets_with_tag(BoundaryTag::GammaU);
  const auto gs = split->facets_with_tag(BoundaryTag::GammaSigma);
  check(gu.size() == 8 && gs.size() == 8, "displacement/traction split does not halve the boundary");
  return "Euler counts n=1..4, boundary split";
}

Eigen::Vector2d eval_vector(const FunctionSpace& s, const Eigen::VectorXd& coef, int cell, const Barycentric& b,
                            double& div) {
  const BasisTable t = evaluate_basis(s.family(), s.mesh(), cell, b);
  const auto dofs = s.cell_dofs(cell);
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  div = 0.0;
  for (std::size_t i = 0; i < dofs.size(); ++i) {
    v += coef(dofs[i]) * t.vector_values[i];
    div += coef(dofs[i]) * t.divergences[i];
  }
  return v;
}

std::string elements_group() {
  for (Family f : {Family::RT0, Family::BDM1, Family::RT1}) {
    const FunctionSpace s = make_space(unit_mesh(3), f);
    const Mesh& mesh = s.mesh();
    Eigen::VectorXd v(s.dof_count());
    for (int i = 0; i < v.size(); ++i) v(i) = std::sin(1.0 + 7.0 * i);
    // Normal traces agree across interior edges.
    for (int e = 0; e < mesh.num_edges(); ++e) {
      if (mesh.is_boundary_edge(e)) continue;
      const Point a = mesh.vertices[mesh.edges[e][0]], b = mesh.vertices[mesh.edges[e][1]];
      const Point nrm = mesh.edge_normal(e);
      for (double t : {0.2, 0.7}) {
        const Point x{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
        double flux[2], d;
        for (int side = 0; side < 2; ++side) {
          const int c = mesh.edge_cells[e][side];
          const Eigen::Vector2d val = eval_vector(s, v, c, cell_geometry(mesh, c).barycentric(x), d);
          flux[side] = val.x() * nrm.x + val.y() * nrm.y;
        }
        check(std::abs(flux[0] - flux[1]) <= 1e-12, to_string(f) + " normal trace jumps on edge " + std::to_string(e));
      }
    }
    // The divergence is constant (RT0, BDM1) or linear (RT1) on each cell.
    const auto& rule = triangle_rule();
    for (int c = 0; c < mesh.num_cells(); ++c) {
      double d0, d1, d2, dq;
      eval_vector(s, v, c, {1, 0, 0}, d0);
      eval_vector(s, v, c, {0, 1, 0}, d1);
      eval_vector(s, v, c, {0, 0, 1}, d2);
      for (const auto& q : rule.points) {
        eval_vector(s, v, c, q, dq);
        const double expect = f == Family::RT1 ? q[0] * d0 + q[1] * d1 + q[2] * d2 : d0;
        check(std::abs(dq - expect) <= 1e-12 * std::max(1.0, std::abs(dq)), to_string(f) + " divergence leaves its range");
      }
    }
  }
  return "normal-trace continuity and divergence inclusion at 1e-12 for RT0, BDM1, RT1";
}

std::string symmetry_group(Fault fault) {
  const MeshPtr mesh = unit_mesh(3);
  double worst = 0.0;
  for (Family f : {Family::P0, Family::P1, Family::P1dg, Family::P2vec, Family::RT0, Family::BDM1, Family::RT1}) {
    SparseMatrix m = mass(make_space(mesh, f));
    if (fault == Fault::MassAsymmetry && f == Family::RT0) m.coeffRef(0, 1) += 1e-3;
    const double d = symmetry_defect(m);
    worst = std::max(worst, d);
    check(d <= 1e-12, to_string(f) + " mass matrix asymmetric (defect " + format_number(d) + ")");
    check(min_eigenvalue(Eigen::MatrixXd(m)) > 0.0, to_string(f) + " mass matrix not positive definite");
  }
  return "mass matrices symmetric and SPD for seven families";
}

std::string forms_group() {
  const MeshPtr mesh = unit_mesh(3);
  const FunctionSpace p0 = make_space(mesh, Family::P0);
  const auto kernel = [](const SparseMatrix& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(a), Eigen::EigenvaluesOnly);
    const Eigen::VectorXd ev = es.eigenvalues();
    const double tol = 1e-10 * ev.cwiseAbs().maxCoeff();
    return static_cast<int>((ev.array().abs() < tol).count());
  };
  check(kernel(dg_laplacian(p0, {})) == 1, "Laplacian without Dirichlet facets has kernel dimension != 1");
  check(kernel(dg_laplacian(p0, mesh->boundary_facets)) == 0, "Dirichlet Laplacian is singular");
  check(kernel(mean_projection(p0)) == p0.dof_count() - 1, "mean projection rank != 1");
  for (Family f : {Family::RT0, Family::BDM1}) {
    const FunctionSpace v = make_space(mesh, f);
    const SparseMatrix d = div_coupling(v, p0);
    const Eigen::MatrixXd mq = Eigen::MatrixXd(mass(p0));
    const Eigen::MatrixXd via_mass = Eigen::MatrixXd(d).transpose() * mq.llt().solve(Eigen::MatrixXd(d));
    check((Eigen::MatrixXd(divdiv(v)) - via_mass).cwiseAbs().maxCoeff() <= 1e-10, to_string(f) + " divdiv mismatch");
  }
  return "Laplacian kernel 1 / 0, mean projection rank 1, divdiv = D^T M^-1 D";
}

std::vector<std::pair<ProblemSpec, PrecondKind>> small_cases() {
  auto ps = [](ProblemKind k, ElementCombo c, int n, ParameterSet p = {}) { return ProblemSpec{k, c, n, p}; };
  ParameterSet biot;
  biot.K = 1e-4;
  biot.alpha = 0.5;
  biot.lambda = 1e4;
  biot.c = 1e-2;
  ParameterSet weak;
  weak.alpha = 1e-4;
  weak.K = 1e-6;
  return {{ps(ProblemKind::PoissonDirichlet, ElementCombo::RT0_P0, 4, weak), PrecondKind::DarcyB},
          {ps(ProblemKind::PoissonDirichlet, ElementCombo::BDM1_P0, 3), PrecondKind::DarcyVV},
          {ps(ProblemKind::PoissonNeumann, ElementCombo::RT1_P1dg, 2), PrecondKind::NeumannB},
          {ps(ProblemKind::PoissonNeumannK, ElementCombo::RT0_P0, 3, weak), PrecondKind::NeumannBK},
          {ps(ProblemKind::Biot, ElementCombo::P2_RT0_P0_P0, 2, biot), PrecondKind::BiotB},
          {ps(ProblemKind::Biot, ElementCombo::P2_RT0_P0_P0, 2, biot), PrecondKind::BiotB1},
          {ps(ProblemKind::Biot, ElementCombo::P2_RT0_P0_P0, 2, biot), PrecondKind::BiotB2},
          {ps(ProblemKind::Biot, ElementCombo::P2_RT0_P0_P0, 2, biot), PrecondKind::BiotB3},
          {ps(ProblemKind::Biot, ElementCombo::P2_RT0_P0_P0, 2, biot), PrecondKind::BiotB4},
          {ps(ProblemKind::Herrmann, ElementCombo::P2_P1, 3), PrecondKind::HerrmannBH}};
}

PrecondSpec spec_of(PrecondKind k) {
  PrecondSpec s;
  s.kind = k;
  return s;
}

std::string systems_group() {
  for (const auto& [s, k] : small_cases()) {
    const BlockMatrix a = assemble_system(s);
    check(symmetry_defect(a.assemble()) <= 1e-12, to_string(s.kind) + " system asymmetric");
    const Preconditioner p = assemble_preconditioner(spec_of(k), s);
    for (const NormBlock& b : p.blocks()) {
      check(min_eigenvalue(b.materialize()) > 0.0, to_string(k) + " block " + b.name() + " not SPD");
    }
  }
  return "systems symmetric, every norm block SPD";
}

std::string spectral_group() {
  double worst = 0.0;
  for (const auto& [s, k] : small_cases()) {
    const BlockMatrix a = assemble_system(s);
    const Preconditioner p = assemble_preconditioner(spec_of(k), s);
    const double c = preconditioned_spectrum(a, p).cond;
    // Independent path: generalized problem A x = mu P^{-1} x.
    Eigen::MatrixXd pinv = p.materialize().inverse();
    pinv = 0.5 * (pinv + pinv.transpose());
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a.dense(), pinv, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd mu = es.eigenvalues().cwiseAbs();
    const double ref = mu.maxCoeff() / mu.minCoeff();
    worst = std::max(worst, std::abs(c - ref) / ref);
    check(std::abs(c - ref) <= 1e-8 * ref, to_string(k) + " eigensolver disagrees with generalized oracle");
    const double ce = preconditioned_spectrum(a, assemble_preconditioner(spec_of(PrecondKind::ExactInverse), s)).cond;
    check(std::abs(ce - 1.0) <= 1e-8, to_string(s.kind) + " exact inverse cond " + format_number(ce));
  }
  ParameterSet p;
  const ProblemSpec vv{ProblemKind::PoissonDirichlet, ElementCombo::RT0_P0, 4, p};
  const double c = preconditioned_spectrum(assemble_system(vv), assemble_preconditioner(spec_of(PrecondKind::DarcyVV), vv)).cond;
  check(std::abs(c - 2.0) <= 0.1, "darcy_VV at K=1, alpha=1, n=4 gives " + format_number(c));
  return "eigensolver vs oracle (worst " + format_number(worst) + "), exact inverse cond 1, darcy_VV 2.00";
}

std::string minres_group() {
  ParameterSet p;
  p.K = 1e-4;
  p.alpha = 0.5;
  p.c = 0.5;
  p.tau = 0.1;
  const ProblemSpec s{ProblemKind::Biot, ElementCombo::P2_RT0_P0_P0, 4, p};
  const BlockMatrix a = assemble_system(s);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(a.rows());
  b.tail(a.sizes.back()).setConstant(-p.tau / 32.0);
  const MinresResult r = minres(a.assemble(), assemble_preconditioner(spec_of(PrecondKind::BiotB), s), b);
  check(r.converged, "MinRes did not converge");
  for (std::size_t k = 1; k < r.residuals.size(); ++k) {
    check(r.residuals[k] <= r.residuals[k - 1] * (1.0 + 1e-12), "MinRes residual increased at step " + std::to_string(k));
  }
  const MinresResult e = minres(a.assemble(), assemble_preconditioner(spec_of(PrecondKind::ExactInverse), s), b);
  check(e.converged && e.iterations <= 2, "exact preconditioner took " + std::to_string(e.iterations) + " steps");
  return "monotone residuals (" + std::to_string(r.iterations) + " steps), exact preconditioner in " +
         std::to_string(e.iterations);
}

}  // namespace

Fault parse_fault(const std::string& name) {
  if (name.empty() || name == "none") return Fault::None;
  if (name == "mass-asymmetry") return Fault::MassAsymmetry;
  throw ConfigError("unknown fault '" + name + "' (known: none mass-asymmetry)");
}

std::vector<SelftestGroup> run_selftest(Fault fault) {
  const std::vector<std::pair<std::string, std::function<std::string()>>> groups = {
      {"mesh", mesh_group},
      {"elements", elements_group},
      {"symmetry", [fault] { return symmetry_group(fault); }},
      {"forms", forms_group},
      {"systems", systems_group},
      {"spectral", spectral_group},
      {"minres", minres_group}};
  std::vector<SelftestGroup> out;
  for (const auto& [name, run] : groups) {
    SelftestGroup g;
    g.name = name;
    try {
      g.detail = run();
      g.pass = true;
    } catch (const std::exception& e) {
      g.detail = e.what();
    }
    out.push_back(std::move(g));
  }
  return out;
}

bool write_selftest(std::ostream& out, const std::vector<SelftestGroup>& groups) {
  bool all = true;
  for (const auto& g : groups) {
    out << (g.pass ? "PASS " : "FAIL ") << g.name << ": " << g.detail << "\n";
    all = all && g.pass;
  }
  out << (all ? "selftest passed" : "selftest FAILED") << "\n";
  return all;
}

}  // namespace mixedlab::harness
