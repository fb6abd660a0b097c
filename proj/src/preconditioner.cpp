#include "mixedlab/preconditioner.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace mixedlab {

namespace {

// Pivots below this fraction of the matching diagonal entry mark the block as
// numerically singular. Semidefinite forms such as the Neumann DG Laplacian
// leave a last pivot at roundoff level, far below this threshold, while the
// weakest legitimate blocks in the sweeps stay several orders above it.
constexpr double kPivotTolerance = 1e-13;

struct NamedPrecond {
  const char* name;
  PrecondKind kind;
};
constexpr NamedPrecond kPrecondNames[] = {
    {"darcy_B", PrecondKind::DarcyB},       {"darcy_VV", PrecondKind::DarcyVV},
    {"neumann_B", PrecondKind::NeumannB},   {"neumann_B_K", PrecondKind::NeumannBK},
    {"biot_B", PrecondKind::BiotB},         {"biot_B1", PrecondKind::BiotB1},
    {"biot_B2", PrecondKind::BiotB2},       {"biot_B3", PrecondKind::BiotB3},
    {"biot_B4", PrecondKind::BiotB4},       {"herrmann_BH", PrecondKind::HerrmannBH},
    {"exact_inverse", PrecondKind::ExactInverse},
};

SparseMatrix block2(const SparseMatrix& a, const SparseMatrix& b, const SparseMatrix& c,
                    const SparseMatrix& d) {
  BlockMatrix m;
  m.fields = {"0", "1"};
  m.sizes = {static_cast<int>(a.rows()), static_cast<int>(d.rows())};
  m.blocks = {a, b, c, d};
  return m.assemble();
}

}  // namespace

std::string to_string(PrecondKind kind) {
  for (const auto& e : kPrecondNames) {
    if (e.kind == kind) return e.name;
  }
  return "unknown";
}

PrecondKind parse_precond_kind(const std::string& name) {
  for (const auto& e : kPrecondNames) {
    if (name == e.name) return e.kind;
  }
  throw std::invalid_argument("unknown preconditioner '" + name + "'");
}

bool compatible(PrecondKind precond, ProblemKind problem) {
  switch (precond) {
    case PrecondKind::DarcyB:
    case PrecondKind::DarcyVV:
      return problem == ProblemKind::PoissonDirichlet;
    case PrecondKind::NeumannB:
      return problem == ProblemKind::PoissonNeumann;
    case PrecondKind::NeumannBK:
      return problem == ProblemKind::PoissonNeumann || problem == ProblemKind::PoissonNeumannK;
    case PrecondKind::BiotB:
    case PrecondKind::BiotB1:
    case PrecondKind::BiotB2:
    case PrecondKind::BiotB3:
    case PrecondKind::BiotB4:
      return problem == ProblemKind::Biot;
    case PrecondKind::HerrmannBH:
      return problem == ProblemKind::Herrmann;
    case PrecondKind::ExactInverse:
      return true;
  }
  return false;
}

void NormBlock::add_inverse(const SparseMatrix& norm) {
  const std::string where = "norm block '" + name_ + "' summand " + std::to_string(summands() + 1);
  if (norm.rows() != size_ || norm.cols() != size_) {
    throw std::invalid_argument(where + " has the wrong shape");
  }
  auto f = std::make_shared<SparseFactor>(norm);
  if (f->info() != Eigen::Success) throw SingularBlockError(name_, where + " could not be factored");
  SparseMatrix permuted(size_, size_);
  permuted = norm.twistedBy(f->permutationP());
  const Eigen::VectorXd d = f->vectorD();
  for (int i = 0; i < size_; ++i) {
    const double aii = permuted.coeff(i, i);
    if (!(d(i) > kPivotTolerance * aii) || !(aii > 0.0)) {
      throw SingularBlockError(name_, where + " is not positive definite (pivot " + std::to_string(i) +
                                          " of " + std::to_string(size_) + ")");
    }
  }
  sparse_.push_back(std::move(f));
}

void NormBlock::add_dense_inverse(const Eigen::MatrixXd& norm) {
  const std::string where = "norm block '" + name_ + "' summand " + std::to_string(summands() + 1);
  auto f = std::make_shared<Eigen::LLT<Eigen::MatrixXd>>(norm);
  if (f->info() != Eigen::Success) throw SingularBlockError(name_, where + " is not positive definite");
  const Eigen::MatrixXd& l = f->matrixLLT();
  for (int i = 0; i < size_; ++i) {
    if (!(l(i, i) * l(i, i) > kPivotTolerance * norm(i, i))) {
      throw SingularBlockError(name_, where + " is not positive definite");
    }
  }
  dense_.push_back(std::move(f));
}

void NormBlock::set_dense_action(Eigen::MatrixXd action) {
  action_ = std::make_shared<const Eigen::MatrixXd>(std::move(action));
}

Eigen::VectorXd NormBlock::apply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(size_);
  for (const auto& f : sparse_) y += f->solve(x);
  for (const auto& f : dense_) y += f->solve(x);
  if (action_) y += *action_ * x;
  return y;
}

Eigen::MatrixXd NormBlock::materialize() const {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(size_, size_);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(size_, size_);
  for (const auto& f : sparse_) out += f->solve(id);
  for (const auto& f : dense_) out += f->solve(id);
  if (action_) out += *action_;
  // Solves are symmetric only up to roundoff.
  return 0.5 * (out + out.transpose());
}

Preconditioner::Preconditioner(std::vector<NormBlock> blocks) : blocks_(std::move(blocks)) {
  for (const auto& b : blocks_) {
    if (b.offset() != rows_) throw std::invalid_argument("norm blocks must tile the system");
    rows_ += b.size();
  }
}

Eigen::VectorXd Preconditioner::apply(const Eigen::VectorXd& x) const {
  if (x.size() != rows_) throw std::invalid_argument("preconditioner applied to a vector of the wrong size");
  Eigen::VectorXd y(rows_);
  for (const auto& b : blocks_) y.segment(b.offset(), b.size()) = b.apply(x.segment(b.offset(), b.size()));
  return y;
}

Eigen::MatrixXd Preconditioner::materialize() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows_, rows_);
  for (const auto& b : blocks_) out.block(b.offset(), b.offset(), b.size(), b.size()) = b.materialize();
  return out;
}

Eigen::MatrixXd absolute_inverse(const Eigen::MatrixXd& a) {
  // Symmetric row scaling first: D |D A D|^{-1} D A is similar to sign(D A D),
  // so the spectrum stays at +-1 while the eigensolve sees a well-scaled matrix.
  Eigen::VectorXd d(a.rows());
  for (int i = 0; i < a.rows(); ++i) {
    const double r = a.row(i).cwiseAbs().maxCoeff();
    if (!(r > 0.0)) throw SingularBlockError("system", "system matrix has a zero row");
    d(i) = 1.0 / std::sqrt(r);
  }
  const Eigen::MatrixXd s = d.asDiagonal() * a * d.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double cut = 1e-14 * ev.cwiseAbs().maxCoeff();
  for (int i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) <= cut) throw SingularBlockError("system", "system matrix is singular");
  }
  const Eigen::MatrixXd& v = es.eigenvectors();
  Eigen::MatrixXd out = d.asDiagonal() * (v * ev.cwiseAbs().cwiseInverse().asDiagonal() * v.transpose()) *
                        d.asDiagonal();
  return 0.5 * (out + out.transpose());
}

Eigen::MatrixXd absolute_inverse(const Eigen::MatrixXd& a, const Eigen::MatrixXd& metric) {
  const Eigen::LLT<Eigen::MatrixXd> llt(metric);
  if (llt.info() != Eigen::Success) throw SingularBlockError("system", "metric is not positive definite");
  const Eigen::MatrixXd l = llt.matrixL();
  Eigen::MatrixXd b = l.transpose() * a * l;
  b = 0.5 * (b + b.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double cut = 1e-14 * ev.cwiseAbs().maxCoeff();
  for (int i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) <= cut) throw SingularBlockError("system", "system matrix is singular");
  }
  const Eigen::MatrixXd lv = l * es.eigenvectors();
  Eigen::MatrixXd out = lv * ev.cwiseAbs().cwiseInverse().asDiagonal() * lv.transpose();
  return 0.5 * (out + out.transpose());
}

Preconditioner assemble_preconditioner(const PrecondSpec& spec, const ProblemSpec& problem) {
  problem.validate();
  return assemble_preconditioner(spec, problem,
                                 *discretization(problem.kind, problem.combo, problem.n, spec.facet_size));
}

Preconditioner assemble_preconditioner(const PrecondSpec& spec, const ProblemSpec& problem,
                                       const Discretization& d) {
  problem.validate();
  if (!compatible(spec.kind, problem.kind)) {
    throw std::invalid_argument("preconditioner " + to_string(spec.kind) + " does not apply to " +
                                to_string(problem.kind));
  }
  const ParameterSet& p = problem.params;
  std::vector<NormBlock> blocks;
  std::vector<std::pair<std::string, SparseMatrix>> norms;
  int offset = 0;
  auto open = [&](const std::string& name, int size) -> NormBlock& {
    blocks.emplace_back(name, offset, size);
    offset += size;
    return blocks.back();
  };
  auto single = [&](const std::string& name, const SparseMatrix& n) {
    open(name, static_cast<int>(n.rows())).add_inverse(n);
    norms.emplace_back(name, n);
  };
  auto sum_of_inverses = [&](const std::string& name, const SparseMatrix& n1, const SparseMatrix& n2) {
    NormBlock& b = open(name, static_cast<int>(n1.rows()));
    b.add_inverse(n1);
    b.add_inverse(n2);
    norms.emplace_back(name + "_1", n1);
    norms.emplace_back(name + "_2", n2);
  };

  switch (spec.kind) {
    case PrecondKind::DarcyB: {
      const SparseMatrix& m = d.form("M_p");
      single("q", (1.0 / p.K) * d.form("M_q") + d.form("divdiv_q"));
      sum_of_inverses("p", (1.0 + p.alpha) * m, p.alpha * m + p.K * d.form("L_p"));
      break;
    }
    case PrecondKind::DarcyVV:
      single("q", (1.0 / p.K) * (d.form("M_q") + d.form("divdiv_q")));
      single("p", (p.K + p.alpha) * d.form("M_p"));
      break;
    case PrecondKind::NeumannB:
      single("q", d.form("M_q") + d.form("divdiv_q"));
      single("p", (1.0 + p.alpha) * d.form("M_p"));
      break;
    case PrecondKind::NeumannBK: {
      const SparseMatrix base = p.alpha * d.form("M_p") + (1.0 - p.alpha) * d.form("Pi_p");
      single("q", (1.0 / p.K) * d.form("M_q") + d.form("divdiv_q"));
      sum_of_inverses("p", base + d.form("M_p"), base + p.K * d.form("L_p"));
      break;
    }
    case PrecondKind::BiotB:
    case PrecondKind::BiotB1:
    case PrecondKind::BiotB2:
    case PrecondKind::BiotB3:
    case PrecondKind::BiotB4: {
      const double tk = p.tau * p.K;
      const double l = 1.0 / p.lambda;
      const SparseMatrix& mpt = d.form("M_pT");
      const SparseMatrix& mp = d.form("M_p");
      const SparseMatrix& x = d.form("M_pTp");
      const SparseMatrix xt = SparseMatrix(x.transpose());
      single("u", 2.0 * p.mu * d.form("A_u"));
      if (spec.kind == PrecondKind::BiotB || spec.kind == PrecondKind::BiotB1 ||
          spec.kind == PrecondKind::BiotB3) {
        single("q", (1.0 / tk) * d.form("M_q") + d.form("divdiv_q"));
      } else {
        single("q", (1.0 / tk) * (d.form("M_q") + d.form("divdiv_q")));
      }
      const double cc = p.c + p.alpha * p.alpha * l;
      switch (spec.kind) {
        case PrecondKind::BiotB: {
          const SparseMatrix top = (1.0 / p.mu + l) * mpt;
          const SparseMatrix off = (p.alpha * l) * x;
          const SparseMatrix offt = (p.alpha * l) * xt;
          sum_of_inverses("pT,p", block2(top, off, offt, (1.0 + cc) * mp),
                          block2(top, off, offt, tk * d.form("L_p") + cc * mp));
          break;
        }
        case PrecondKind::BiotB1:
          single("pT", (1.0 / p.mu) * mpt);
          single("p", mp);
          break;
        case PrecondKind::BiotB2:
          single("pT", (1.0 / p.mu) * mpt);
          single("p", tk * mp);
          break;
        case PrecondKind::BiotB3: {
          single("pT", (1.0 / p.mu) * mpt);
          const SparseMatrix lap = tk * d.form("L_p");
          if (spec.b3_form == B3Form::InverseSum) {
            sum_of_inverses("p", mp, lap);
          } else {
            // M + M (K L)^{-1} M, formed densely at desk scale.
            const Eigen::SimplicialLDLT<SparseMatrix> lf(lap);
            if (lf.info() != Eigen::Success) throw SingularBlockError("p", "norm block 'p' Laplacian failed");
            const Eigen::MatrixXd md = Eigen::MatrixXd(mp);
            const Eigen::MatrixXd solved = lf.solve(md);
            Eigen::MatrixXd n4 = md + md * solved;
            n4 = 0.5 * (n4 + n4.transpose());
            open("p", static_cast<int>(mp.rows())).add_dense_inverse(n4);
            norms.emplace_back("p_mass", mp);
            norms.emplace_back("p_laplacian", lap);
          }
          break;
        }
        case PrecondKind::BiotB4:
          single("pT,p", block2((1.0 / p.mu + l) * mpt, (p.alpha * l) * x, (p.alpha * l) * xt,
                                (tk + cc) * mp));
          break;
        default:
          break;
      }
      break;
    }
    case PrecondKind::HerrmannBH: {
      single("u", 2.0 * p.mu * d.form("A_u"));
      const SparseMatrix& m = d.form("M_p");
      single("p", (1.0 / p.mu) * (m - d.form("Pi_p")) + (1.0 / p.lambda) * m);
      break;
    }
    case PrecondKind::ExactInverse: {
      // Built in the inner product of the family's robust preconditioner, which
      // keeps the eigensolve well conditioned at extreme parameters.
      PrecondSpec base = spec;
      switch (problem.kind) {
        case ProblemKind::PoissonDirichlet: base.kind = PrecondKind::DarcyB; break;
        case ProblemKind::PoissonNeumann: base.kind = PrecondKind::NeumannB; break;
        case ProblemKind::PoissonNeumannK: base.kind = PrecondKind::NeumannBK; break;
        case ProblemKind::Biot: base.kind = PrecondKind::BiotB; break;
        case ProblemKind::Herrmann: base.kind = PrecondKind::HerrmannBH; break;
      }
      const Eigen::MatrixXd metric = assemble_preconditioner(base, problem, d).materialize();
      const BlockMatrix a = assemble_system(problem, d);
      open("system", a.rows()).set_dense_action(absolute_inverse(a.dense(), metric));
      break;
    }
  }
  Preconditioner out(std::move(blocks));
  out.norm_matrices = std::move(norms);
  return out;
}

}  // namespace mixedlab
