#pragma once

#include <Eigen/SparseCholesky>

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "mixedlab/systems.hpp"

namespace mixedlab {

enum class PrecondKind {
  DarcyB,
  DarcyVV,
  NeumannB,
  NeumannBK,
  BiotB,
  BiotB1,
  BiotB2,
  BiotB3,
  BiotB4,
  HerrmannBH,
  ExactInverse,
};

std::string to_string(PrecondKind kind);
PrecondKind parse_precond_kind(const std::string& name);
bool compatible(PrecondKind precond, ProblemKind problem);

/// How the fluid-pressure block of biot_B3 is discretized.
enum class B3Form {
  RieszComposition,  ///< norm matrix M + M (K L)^{-1} M, applied through its inverse
  InverseSum,        ///< action M^{-1} + (K L)^{-1}
};

struct PrecondSpec {
  PrecondKind kind = PrecondKind::DarcyB;
  FacetSize facet_size = FacetSize::CellDiameter;
  B3Form b3_form = B3Form::InverseSum;
};

/// Raised when a norm block is not positive definite. `block()` names it.
class SingularBlockError : public std::runtime_error {
 public:
  SingularBlockError(std::string block, const std::string& what)
      : std::runtime_error(what), block_(std::move(block)) {}
  const std::string& block() const { return block_; }

 private:
  std::string block_;
};

/// One diagonal block of the preconditioner covering consecutive fields.
/// Its action is the sum of the inverses of the listed SPD matrices, or an
/// explicit dense matrix.
class NormBlock {
 public:
  NormBlock(std::string name, int offset, int size) : name_(std::move(name)), offset_(offset), size_(size) {}

  /// Adds N^{-1} to the action. N is factored immediately.
  void add_inverse(const SparseMatrix& norm);
  void add_dense_inverse(const Eigen::MatrixXd& norm);
  void set_dense_action(Eigen::MatrixXd action);

  const std::string& name() const { return name_; }
  int offset() const { return offset_; }
  int size() const { return size_; }
  int summands() const { return static_cast<int>(sparse_.size() + dense_.size()); }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  /// Dense matrix of the action, one solve per identity column.
  Eigen::MatrixXd materialize() const;

 private:
  using SparseFactor = Eigen::SimplicialLDLT<SparseMatrix>;
  std::string name_;
  int offset_;
  int size_;
  std::vector<std::shared_ptr<const SparseFactor>> sparse_;
  std::vector<std::shared_ptr<const Eigen::LLT<Eigen::MatrixXd>>> dense_;
  std::shared_ptr<const Eigen::MatrixXd> action_;
};

/// Block-diagonal SPD operator P. Immutable once assembled, so concurrent
/// application is safe.
class Preconditioner {
 public:
  Preconditioner() = default;
  explicit Preconditioner(std::vector<NormBlock> blocks);

  int rows() const { return rows_; }
  const std::vector<NormBlock>& blocks() const { return blocks_; }
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd materialize() const;

  /// Norm matrices behind each block, kept for export. Sum-of-inverse blocks
  /// contribute every summand.
  std::vector<std::pair<std::string, SparseMatrix>> norm_matrices;

 private:
  std::vector<NormBlock> blocks_;
  int rows_ = 0;
};

/// Throws std::invalid_argument for an incompatible pair and
/// SingularBlockError when a norm block fails to factor.
Preconditioner assemble_preconditioner(const PrecondSpec& spec, const ProblemSpec& problem);
Preconditioner assemble_preconditioner(const PrecondSpec& spec, const ProblemSpec& problem,
                                       const Discretization& disc);

/// D |D A D|^{-1} D for a symmetric nonsingular A, with D the inverse square
/// roots of the row maxima. Equals |A|^{-1} when A is already balanced; in
/// every case P A has eigenvalues exactly +-1.
Eigen::MatrixXd absolute_inverse(const Eigen::MatrixXd& a);
/// L |L^T A L|^{-1} L^T with metric = L L^T, i.e. |A|^{-1} measured in the
/// metric's inner product. P A again has eigenvalues exactly +-1.
Eigen::MatrixXd absolute_inverse(const Eigen::MatrixXd& a, const Eigen::MatrixXd& metric);

}  // namespace mixedlab
