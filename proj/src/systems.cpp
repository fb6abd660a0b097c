#include "mixedlab/systems.hpp"

#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace mixedlab {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

SparseMatrix zeros(int r, int c) { return SparseMatrix(r, c); }

SparseMatrix transpose(const SparseMatrix& a) { return SparseMatrix(a.transpose()); }

struct NamedKind {
  const char* name;
  ProblemKind kind;
};
constexpr NamedKind kProblemNames[] = {
    {"poisson_dirichlet", ProblemKind::PoissonDirichlet},
    {"poisson_neumann", ProblemKind::PoissonNeumann},
    {"poisson_neumann_K", ProblemKind::PoissonNeumannK},
    {"biot", ProblemKind::Biot},
    {"herrmann", ProblemKind::Herrmann},
};

struct NamedCombo {
  const char* name;
  ElementCombo combo;
};
constexpr NamedCombo kComboNames[] = {
    {"RT0_P0", ElementCombo::RT0_P0},
    {"BDM1_P0", ElementCombo::BDM1_P0},
    {"RT1_P1dg", ElementCombo::RT1_P1dg},
    {"P2_RT0_P0_P0", ElementCombo::P2_RT0_P0_P0},
    {"P2_P1", ElementCombo::P2_P1},
};

enum class Family3 { Poisson, Biot, Herrmann };

Family3 problem_family(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::Biot:
      return Family3::Biot;
    case ProblemKind::Herrmann:
      return Family3::Herrmann;
    default:
      return Family3::Poisson;
  }
}

std::pair<Family, Family> poisson_pair(ElementCombo combo) {
  switch (combo) {
    case ElementCombo::RT0_P0:
      return {Family::RT0, Family::P0};
    case ElementCombo::BDM1_P0:
      return {Family::BDM1, Family::P0};
    case ElementCombo::RT1_P1dg:
      return {Family::RT1, Family::P1dg};
    default:
      throw std::invalid_argument("not a Poisson element combo: " + to_string(combo));
  }
}

// Adds one field: the space, its constrained DOFs and the reduced size.
void add_field(Discretization& d, const std::string& name, FunctionSpace space) {
  d.fields.push_back(name);
  d.constrained.push_back(space.constrained_dofs());
  d.sizes.push_back(space.dof_count() - static_cast<int>(space.constrained_dofs().size()));
  d.spaces.push_back(std::move(space));
}

void build_poisson(Discretization& d, ProblemKind kind) {
  const bool dirichlet = kind == ProblemKind::PoissonDirichlet;
  d.mesh = std::make_shared<const Mesh>(tag_boundary(build_unit_square_mesh(d.n), TagScheme::AllBoundary));
  const auto [flux, pressure] = poisson_pair(d.combo);
  // Pressure conditions are natural for the flux; flux conditions are essential.
  add_field(d, "q", make_space(d.mesh, flux,
                               dirichlet ? std::nullopt : std::optional(BoundaryTag::AllBoundary)));
  add_field(d, "p", make_space(d.mesh, pressure));
  const FunctionSpace& q = d.spaces[0];
  const FunctionSpace& p = d.spaces[1];
  const auto& cq = d.constrained[0];
  d.forms["M_q"] = eliminate(mass(q), cq);
  d.forms["divdiv_q"] = eliminate(divdiv(q), cq);
  d.forms["D"] = eliminate(div_coupling(q, p), {}, cq);
  d.forms["M_p"] = mass(p);
  d.forms["Pi_p"] = mean_projection(p);
  const std::vector<int> dirichlet_facets = dirichlet ? d.mesh->boundary_facets : std::vector<int>{};
  d.forms["L_p"] = dg_laplacian(p, dirichlet_facets, 1.0, d.facet_size);
}

void build_biot(Discretization& d) {
  d.mesh = std::make_shared<const Mesh>(tag_boundary(build_unit_square_mesh(d.n), TagScheme::BiotSplit));
  add_field(d, "u", make_space(d.mesh, Family::P2vec, BoundaryTag::GammaU));
  add_field(d, "q", make_space(d.mesh, Family::RT0, BoundaryTag::GammaU));
  add_field(d, "pT", make_space(d.mesh, Family::P0));
  add_field(d, "p", make_space(d.mesh, Family::P0));
  const auto& u = d.spaces[0];
  const auto& q = d.spaces[1];
  const auto& pt = d.spaces[2];
  const auto& p = d.spaces[3];
  const auto& cu = d.constrained[0];
  const auto& cq = d.constrained[1];
  d.forms["A_u"] = eliminate(strain_stiffness(u, 1.0), cu);
  d.forms["M_q"] = eliminate(mass(q), cq);
  d.forms["divdiv_q"] = eliminate(divdiv(q), cq);
  d.forms["D_u"] = eliminate(div_coupling(u, pt), {}, cu);
  d.forms["D_q"] = eliminate(div_coupling(q, p), {}, cq);
  d.forms["M_pT"] = mass(pt);
  d.forms["M_p"] = mass(p);
  d.forms["M_pTp"] = cross_mass(pt, p);
  d.forms["L_p"] = dg_laplacian(p, d.mesh->facets_with_tag(BoundaryTag::GammaSigma), 1.0, d.facet_size);
}

void build_herrmann(Discretization& d) {
  d.mesh = std::make_shared<const Mesh>(tag_boundary(build_unit_square_mesh(d.n), TagScheme::AllBoundary));
  add_field(d, "u", make_space(d.mesh, Family::P2vec, BoundaryTag::AllBoundary));
  add_field(d, "p", make_space(d.mesh, Family::P1));
  const auto& cu = d.constrained[0];
  d.forms["A_u"] = eliminate(strain_stiffness(d.spaces[0], 1.0), cu);
  d.forms["D_u"] = eliminate(div_coupling(d.spaces[0], d.spaces[1]), {}, cu);
  d.forms["M_p"] = mass(d.spaces[1]);
  d.forms["Pi_p"] = mean_projection(d.spaces[1]);
}

std::shared_ptr<Discretization> build_discretization(ProblemKind kind, ElementCombo combo, int n,
                                                     FacetSize facet_size) {
  require(compatible(kind, combo),
          "element combo " + to_string(combo) + " is not compatible with " + to_string(kind));
  require(n >= 1, "mesh subdivisions must be positive");
  auto d = std::make_shared<Discretization>();
  d->combo = combo;
  d->n = n;
  d->facet_size = facet_size;
  switch (problem_family(kind)) {
    case Family3::Poisson:
      build_poisson(*d, kind);
      break;
    case Family3::Biot:
      build_biot(*d);
      break;
    case Family3::Herrmann:
      build_herrmann(*d);
      break;
  }
  return d;
}

BlockMatrix empty_blocks(const Discretization& d) {
  BlockMatrix b;
  b.fields = d.fields;
  b.sizes = d.sizes;
  const int nf = b.num_fields();
  b.blocks.resize(static_cast<std::size_t>(nf) * nf);
  for (int i = 0; i < nf; ++i) {
    for (int j = 0; j < nf; ++j) b.block(i, j) = zeros(b.sizes[i], b.sizes[j]);
  }
  return b;
}

}  // namespace

void ParameterSet::validate() const {
  require(positive(mu), "mu must be positive");
  require(positive(lambda), "lambda must be positive");
  require(positive(K), "K must be positive");
  require(positive(tau), "tau must be positive");
  require(std::isfinite(c) && c >= 0.0, "storage capacity c must be non-negative");
  require(std::isfinite(alpha) && alpha >= 0.0, "alpha must be non-negative");
}

void ParameterSet::validate_biot() const {
  validate();
  require(alpha <= 1.0, "Biot-Willis coefficient alpha must lie in [0, 1]");
}

std::string to_string(ProblemKind kind) {
  for (const auto& e : kProblemNames) {
    if (e.kind == kind) return e.name;
  }
  return "unknown";
}

std::string to_string(ElementCombo combo) {
  for (const auto& e : kComboNames) {
    if (e.combo == combo) return e.name;
  }
  return "unknown";
}

ProblemKind parse_problem_kind(const std::string& name) {
  for (const auto& e : kProblemNames) {
    if (name == e.name) return e.kind;
  }
  throw std::invalid_argument("unknown problem kind '" + name + "'");
}

ElementCombo parse_element_combo(const std::string& name) {
  for (const auto& e : kComboNames) {
    if (name == e.name) return e.combo;
  }
  throw std::invalid_argument("unknown element combo '" + name + "'");
}

bool compatible(ProblemKind kind, ElementCombo combo) {
  switch (problem_family(kind)) {
    case Family3::Poisson:
      return combo == ElementCombo::RT0_P0 || combo == ElementCombo::BDM1_P0 ||
             combo == ElementCombo::RT1_P1dg;
    case Family3::Biot:
      return combo == ElementCombo::P2_RT0_P0_P0;
    case Family3::Herrmann:
      return combo == ElementCombo::P2_P1;
  }
  return false;
}

void ProblemSpec::validate() const {
  require(n >= 1, "mesh subdivisions must be positive");
  require(compatible(kind, combo),
          "element combo " + to_string(combo) + " is not compatible with " + to_string(kind));
  if (kind == ProblemKind::Biot) {
    params.validate_biot();
  } else {
    params.validate();
  }
  if (kind == ProblemKind::PoissonNeumann || kind == ProblemKind::PoissonNeumannK) {
    require(params.alpha <= 1.0, "the Neumann formulation requires alpha in [0, 1]");
  }
}

int BlockMatrix::offset(int field) const {
  int off = 0;
  for (int i = 0; i < field; ++i) off += sizes[i];
  return off;
}

int BlockMatrix::rows() const { return offset(num_fields()); }

SparseMatrix BlockMatrix::assemble() const {
  Triplets trip;
  for (int i = 0; i < num_fields(); ++i) {
    const int ro = offset(i);
    for (int j = 0; j < num_fields(); ++j) {
      const int co = offset(j);
      const SparseMatrix& b = block(i, j);
      for (int k = 0; k < b.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(b, k); it; ++it) {
          trip.emplace_back(ro + it.row(), co + it.col(), it.value());
        }
      }
    }
  }
  SparseMatrix out(rows(), rows());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

Eigen::MatrixXd BlockMatrix::dense() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows(), rows());
  for (int i = 0; i < num_fields(); ++i) {
    for (int j = 0; j < num_fields(); ++j) {
      if (block(i, j).nonZeros() > 0) out.block(offset(i), offset(j), sizes[i], sizes[j]) = block(i, j);
    }
  }
  return out;
}

const SparseMatrix& Discretization::form(const std::string& name) const {
  const auto it = forms.find(name);
  if (it == forms.end()) throw std::out_of_range("discretization has no form '" + name + "'");
  return it->second;
}

namespace {

struct CacheKey {
  Family3 family;
  bool dirichlet;
  ElementCombo combo;
  int n;
  FacetSize facet_size;
  auto operator<=>(const CacheKey&) const = default;
};

std::mutex cache_mutex;
std::map<CacheKey, DiscretizationPtr> cache;

}  // namespace

DiscretizationPtr discretization(ProblemKind kind, ElementCombo combo, int n, FacetSize facet_size) {
  const CacheKey key{problem_family(kind), kind == ProblemKind::PoissonDirichlet, combo, n, facet_size};
  std::lock_guard lock(cache_mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  DiscretizationPtr d = build_discretization(kind, combo, n, facet_size);
  cache.emplace(key, d);
  return d;
}

void clear_discretization_cache() {
  std::lock_guard lock(cache_mutex);
  cache.clear();
}

BlockMatrix assemble_system(const ProblemSpec& spec) {
  spec.validate();
  return assemble_system(spec, *discretization(spec.kind, spec.combo, spec.n));
}

BlockMatrix assemble_system(const ProblemSpec& spec, const Discretization& d) {
  spec.validate();
  const ParameterSet& p = spec.params;
  BlockMatrix b = empty_blocks(d);
  switch (spec.kind) {
    case ProblemKind::PoissonDirichlet:
    case ProblemKind::PoissonNeumann:
    case ProblemKind::PoissonNeumannK: {
      const double kinv = spec.kind == ProblemKind::PoissonNeumann ? 1.0 : 1.0 / p.K;
      b.block(0, 0) = kinv * d.form("M_q");
      b.block(1, 0) = d.form("D");
      b.block(0, 1) = transpose(d.form("D"));
      if (spec.kind == ProblemKind::PoissonDirichlet) {
        b.block(1, 1) = -p.alpha * d.form("M_p");
      } else {
        b.block(1, 1) = -(p.alpha * d.form("M_p") + (1.0 - p.alpha) * d.form("Pi_p"));
      }
      break;
    }
    case ProblemKind::Biot: {
      const double l = 1.0 / p.lambda;
      b.block(0, 0) = 2.0 * p.mu * d.form("A_u");
      b.block(1, 1) = (1.0 / (p.tau * p.K)) * d.form("M_q");
      b.block(2, 0) = d.form("D_u");
      b.block(0, 2) = transpose(d.form("D_u"));
      b.block(3, 1) = -d.form("D_q");
      b.block(1, 3) = -transpose(d.form("D_q"));
      b.block(2, 2) = -l * d.form("M_pT");
      b.block(2, 3) = -(p.alpha * l) * d.form("M_pTp");
      b.block(3, 2) = transpose(b.block(2, 3));
      b.block(3, 3) = -(p.c + p.alpha * p.alpha * l) * d.form("M_p");
      break;
    }
    case ProblemKind::Herrmann: {
      b.block(0, 0) = 2.0 * p.mu * d.form("A_u");
      b.block(1, 0) = d.form("D_u");
      b.block(0, 1) = transpose(d.form("D_u"));
      b.block(1, 1) = -(1.0 / p.lambda) * d.form("M_p");
      break;
    }
  }
  return b;
}

}  // namespace mixedlab
