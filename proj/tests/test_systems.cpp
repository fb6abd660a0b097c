#include <gtest/gtest.h>

#include <random>

#include "dense_oracles.hpp"
#include "mixedlab/spectral.hpp"

using namespace mixedlab;

namespace {

ProblemSpec problem(ProblemKind kind, ElementCombo combo, int n, ParameterSet p = {}) {
  return ProblemSpec{kind, combo, n, p};
}

ProblemSpec biot(int n, double K, double alpha, double lambda, double c) {
  ParameterSet p;
  p.K = K;
  p.alpha = alpha;
  p.lambda = lambda;
  p.c = c;
  return problem(ProblemKind::Biot, ElementCombo::P2_RT0_P0_P0, n, p);
}

double cond(const ProblemSpec& s, PrecondKind kind) {
  PrecondSpec ps;
  ps.kind = kind;
  return preconditioned_spectrum(assemble_system(s), assemble_preconditioner(ps, s)).cond;
}

}  // namespace

TEST(Parameters, Validation) {
  ParameterSet p;
  EXPECT_NO_THROW(p.validate());
  p.alpha = 100.0;
  EXPECT_NO_THROW(p.validate());
  EXPECT_THROW(p.validate_biot(), std::invalid_argument);
  p = {};
  p.K = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.c = -1e-3;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.mu = std::nan("");
  EXPECT_THROW(p.validate(), std::invalid_argument);
  EXPECT_EQ(ParameterSet{}.tau, 1.0);
}

TEST(Parameters, NamesRoundTrip) {
  for (auto k : {ProblemKind::PoissonDirichlet, ProblemKind::PoissonNeumann, ProblemKind::PoissonNeumannK,
                 ProblemKind::Biot, ProblemKind::Herrmann}) {
    EXPECT_EQ(parse_problem_kind(to_string(k)), k);
  }
  for (auto c : {ElementCombo::RT0_P0, ElementCombo::BDM1_P0, ElementCombo::RT1_P1dg,
                 ElementCombo::P2_RT0_P0_P0, ElementCombo::P2_P1}) {
    EXPECT_EQ(parse_element_combo(to_string(c)), c);
  }
  EXPECT_EQ(parse_precond_kind("biot_B3"), PrecondKind::BiotB3);
  EXPECT_THROW(parse_precond_kind("jacobi"), std::invalid_argument);
  EXPECT_THROW(parse_problem_kind("stokes"), std::invalid_argument);
}

TEST(Systems, IncompatibleComboIsRejected) {
  EXPECT_THROW(assemble_system(problem(ProblemKind::Biot, ElementCombo::RT0_P0, 2)), std::invalid_argument);
  EXPECT_THROW(assemble_system(problem(ProblemKind::Herrmann, ElementCombo::P2_RT0_P0_P0, 2)),
               std::invalid_argument);
  EXPECT_THROW(assemble_system(problem(ProblemKind::PoissonDirichlet, ElementCombo::P2_P1, 2)),
               std::invalid_argument);
  PrecondSpec ps;
  ps.kind = PrecondKind::BiotB;
  EXPECT_THROW(assemble_preconditioner(ps, problem(ProblemKind::Herrmann, ElementCombo::P2_P1, 2)),
               std::invalid_argument);
}

TEST(Systems, BlockShapes) {
  const BlockMatrix b = assemble_system(biot(4, 1.0, 0.5, 1.0, 0.0));
  ASSERT_EQ(b.num_fields(), 4);
  EXPECT_EQ(b.fields, (std::vector<std::string>{"u", "q", "pT", "p"}));
  // P2vec: 162 minus 2 x 18 clamped nodes; RT0: 56 minus 8 normal traces on x = 0, 1.
  EXPECT_EQ(b.sizes, (std::vector<int>{126, 48, 32, 32}));
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      EXPECT_EQ(b.block(i, j).rows(), b.sizes[i]);
      EXPECT_EQ(b.block(i, j).cols(), b.sizes[j]);
    }
  }
  const BlockMatrix n = assemble_system(problem(ProblemKind::PoissonNeumann, ElementCombo::RT0_P0, 4));
  EXPECT_EQ(n.sizes, (std::vector<int>{40, 32}));
  const BlockMatrix h = assemble_system(problem(ProblemKind::Herrmann, ElementCombo::P2_P1, 4));
  EXPECT_EQ(h.sizes, (std::vector<int>{98, 25}));
}

TEST(Systems, DarcyWithoutPerturbationHasZeroCorner) {
  ParameterSet p;
  p.alpha = 0.0;
  p.K = 1e-4;
  const BlockMatrix b = assemble_system(problem(ProblemKind::PoissonDirichlet, ElementCombo::RT0_P0, 4, p));
  EXPECT_EQ(max_abs(b.block(1, 1)), 0.0);
}

TEST(Systems, NeumannAlphaOneUsesPlainMass) {
  ParameterSet p;
  p.alpha = 1.0;
  const auto s = problem(ProblemKind::PoissonNeumann, ElementCombo::BDM1_P0, 3, p);
  const BlockMatrix b = assemble_system(s);
  const auto d = discretization(s.kind, s.combo, s.n);
  EXPECT_EQ(max_abs(b.block(1, 1) + d->form("M_p")), 0.0);
}

TEST(Systems, AllMonolithicMatricesAreSymmetric) {
  std::vector<ProblemSpec> specs = {
      biot(4, 1e-8, 1.0, 1e16, 0.0), biot(2, 1.0, 0.5, 1.0, 1.0),
      problem(ProblemKind::PoissonDirichlet, ElementCombo::RT1_P1dg, 3),
      problem(ProblemKind::PoissonNeumannK, ElementCombo::BDM1_P0, 3),
      problem(ProblemKind::Herrmann, ElementCombo::P2_P1, 3)};
  for (const auto& s : specs) {
    const SparseMatrix a = assemble_system(s).assemble();
    EXPECT_LE(symmetry_defect(a), 1e-12) << to_string(s.kind);
  }
}

TEST(Systems, DiscretizationCacheIsShared) {
  const auto a = discretization(ProblemKind::PoissonNeumann, ElementCombo::RT0_P0, 3);
  const auto b = discretization(ProblemKind::PoissonNeumannK, ElementCombo::RT0_P0, 3);
  const auto c = discretization(ProblemKind::PoissonDirichlet, ElementCombo::RT0_P0, 3);
  EXPECT_EQ(a.get(), b.get());
  EXPECT_NE(a.get(), c.get());
  EXPECT_THROW(a->form("no_such_form"), std::out_of_range);
}

struct PrecondCase {
  ProblemSpec problem;
  PrecondKind kind;
};


std::vector<PrecondCase> precond_cases() {
  std::vector<PrecondCase> out;
  for (double K : {1e-8, 1.0, 1e4}) {
    for (double alpha : {0.0, 1e-4, 1.0}) {
      ParameterSet p;
      p.K = K;
      p.alpha = alpha;
      for (auto combo : {ElementCombo::RT0_P0, ElementCombo::RT1_P1dg}) {
        out.push_back({problem(ProblemKind::PoissonDirichlet, combo, 3, p), PrecondKind::DarcyB});
        out.push_back({problem(ProblemKind::PoissonDirichlet, combo, 3, p), PrecondKind::DarcyVV});
        out.push_back({problem(ProblemKind::PoissonNeumann, combo, 3, p), PrecondKind::NeumannB});
        out.push_back({problem(ProblemKind::PoissonNeumannK, combo, 3, p), PrecondKind::NeumannBK});
      }
    }
  }
  for (double K : {1e-12, 1.0}) {
    for (double lambda : {1.0, 1e16}) {
      for (auto kind : {PrecondKind::BiotB, PrecondKind::BiotB1, PrecondKind::BiotB2, PrecondKind::BiotB3,
                        PrecondKind::BiotB4}) {
        out.push_back({biot(2, K, 1.0, lambda, 0.0), kind});
        out.push_back({biot(2, K, 0.0, lambda, 1e-4), kind});
      }
    }
  }
  for (double mu : {1e-6, 1.0, 1e10}) {
    ParameterSet p;
    p.mu = mu;
    out.push_back({problem(ProblemKind::Herrmann, ElementCombo::P2_P1, 3, p), PrecondKind::HerrmannBH});
  }
  return out;
}

TEST(NormBlocksAreSPD, DenseOracle) {
  for (const auto& c : precond_cases()) {
    PrecondSpec ps;
    ps.kind = c.kind;
    const Preconditioner p = assemble_preconditioner(ps, c.problem);
    for (const NormBlock& b : p.blocks()) {
      const Eigen::MatrixXd m = b.materialize();
      const Eigen::VectorXd ev = oracle::dense_eigenvalues(m);
      EXPECT_GT(ev.minCoeff(), 0.0) << to_string(c.kind) << " block " << b.name() << " "
                                    << describe({c.problem, ps});
    }
  }
}

TEST(Preconditioner, RandomQuadraticFormsArePositive) {
  std::mt19937 rng(3);
  std::normal_distribution<double> g;
  PrecondSpec ps;
  ps.kind = PrecondKind::BiotB;
  const Preconditioner p = assemble_preconditioner(ps, biot(3, 1e-4, 0.5, 1e4, 1e-2));
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd x(p.rows());
    for (int i = 0; i < x.size(); ++i) x(i) = g(rng);
    EXPECT_GT(x.dot(p.apply(x)), 0.0);
  }
  const Eigen::MatrixXd dense = p.materialize();
  Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(p.rows(), -1.0, 2.0);
  EXPECT_LE((dense * x - p.apply(x)).norm(), 1e-10 * (dense * x).norm());
}

TEST(Preconditioner, HerrmannPressureBlockOnConstants) {
  ParameterSet p;
  p.mu = 3.0;
  p.lambda = 7.0;
  const auto s = problem(ProblemKind::Herrmann, ElementCombo::P2_P1, 4, p);
  PrecondSpec ps;
  ps.kind = PrecondKind::HerrmannBH;
  const Preconditioner pre = assemble_preconditioner(ps, s);
  const auto d = discretization(s.kind, s.combo, s.n);
  const SparseMatrix* np = nullptr;
  for (const auto& [name, m] : pre.norm_matrices) {
    if (name == "p") np = &m;
  }
  ASSERT_NE(np, nullptr);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(np->rows());
  const Eigen::VectorXd expected = (1.0 / p.lambda) * (d->form("M_p") * one);
  EXPECT_LE((*np * one - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Preconditioner, BiotPressureCoefficientDeterminant) {
  for (double mu : {1e-6, 1.0, 1e6}) {
    for (double lambda : {1e-3, 1.0, 1e16}) {
      for (double alpha : {0.0, 0.5, 1.0}) {
        for (double c : {0.0, 1e-4, 1.0}) {
          const double a = 1.0 / mu + 1.0 / lambda, b = alpha / lambda, d = 1.0 + c + alpha * alpha / lambda;
          EXPECT_GT(a * d - b * b, 0.0);
        }
      }
    }
  }
}

TEST(Preconditioner, SingularNeumannLaplacianIsNamed) {
  const auto d = discretization(ProblemKind::PoissonNeumann, ElementCombo::RT0_P0, 4);
  NormBlock b("p", 0, static_cast<int>(d->form("L_p").rows()));
  try {
    b.add_inverse(d->form("L_p"));
    FAIL() << "singular Laplacian was accepted";
  } catch (const SingularBlockError& e) {
    EXPECT_EQ(e.block(), "p");
    EXPECT_NE(std::string(e.what()).find("'p'"), std::string::npos);
  }
  // With the projection companion the block is regular.
  NormBlock ok("p", 0, static_cast<int>(d->form("L_p").rows()));
  EXPECT_NO_THROW(ok.add_inverse(d->form("L_p") + d->form("Pi_p")));
  // Weak but regular blocks from the sweep extremes are accepted.
  const auto bd = discretization(ProblemKind::Biot, ElementCombo::P2_RT0_P0_P0, 8);
  NormBlock weak("p", 0, static_cast<int>(bd->form("L_p").rows()));
  EXPECT_NO_THROW(weak.add_inverse(1e-12 * bd->form("L_p")));
}

TEST(Preconditioner, ExactInverseHasUnitCondition) {
  std::vector<ProblemSpec> specs = {biot(2, 1e-8, 1.0, 1e8, 0.0), biot(3, 1e-12, 1.0, 1e16, 0.0),
                                    problem(ProblemKind::PoissonDirichlet, ElementCombo::BDM1_P0, 3),
                                    problem(ProblemKind::Herrmann, ElementCombo::P2_P1, 3)};
  for (const auto& s : specs) {
    EXPECT_NEAR(cond(s, PrecondKind::ExactInverse), 1.0, 1e-8) << to_string(s.kind);
  }
}

TEST(Systems, PressureSignFlipLeavesConditionUnchanged) {
  for (const auto& c : {PrecondCase{biot(3, 1e-4, 0.5, 1e4, 1e-2), PrecondKind::BiotB},
                        PrecondCase{problem(ProblemKind::PoissonDirichlet, ElementCombo::RT0_P0, 4),
                                    PrecondKind::DarcyB}}) {
    PrecondSpec ps;
    ps.kind = c.kind;
    const BlockMatrix a = assemble_system(c.problem);
    BlockMatrix flipped = a;
    const int nf = a.num_fields();
    const int first_pressure = nf == 4 ? 2 : 1;
    for (int i = 0; i < nf; ++i) {
      for (int j = 0; j < nf; ++j) {
        if ((i >= first_pressure) != (j >= first_pressure)) flipped.block(i, j) = -a.block(i, j);
      }
    }
    const Preconditioner p = assemble_preconditioner(ps, c.problem);
    EXPECT_NEAR(preconditioned_spectrum(a, p).cond, preconditioned_spectrum(flipped, p).cond,
                1e-8 * preconditioned_spectrum(a, p).cond);
  }
}

void expect_mesh_robust(PrecondKind kind) {
  ParameterSet p;
  p.alpha = 0.0;
  for (double K : {1e-6, 1.0, 1e6}) {
    p.K = K;
    const double c8 = cond(problem(ProblemKind::PoissonDirichlet, ElementCombo::RT0_P0, 8, p), kind);
    const double c16 = cond(problem(ProblemKind::PoissonDirichlet, ElementCombo::RT0_P0, 16, p), kind);
    EXPECT_LE(std::abs(c16 / c8 - 1.0), 0.05) << "K=" << K << " cond " << c8 << " -> " << c16;
  }
}

TEST(Systems, DarcyVVMeshRobustWithoutPerturbation) { expect_mesh_robust(PrecondKind::DarcyVV); }
TEST(Systems, DarcyBMeshRobustWithoutPerturbation) { expect_mesh_robust(PrecondKind::DarcyB); }

TEST(Systems, BiotIncompressibleLimitStaysBounded) {
  PrecondSpec ps;
  ps.kind = PrecondKind::BiotB;
  for (double K : {1e-12, 1.0}) {
    const auto s = biot(4, K, 1.0, 1e16, 0.0);
    const Preconditioner p = assemble_preconditioner(ps, s);
    const auto r = preconditioned_spectrum(assemble_system(s), p);
    EXPECT_EQ(r.zero_eigenvalues, 0);
    EXPECT_LE(r.cond, 10.0);
  }
}
