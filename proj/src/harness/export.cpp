#include "mixedlab/harness/export.hpp"

#include <fstream>

namespace mixedlab::harness {

namespace fs = std::filesystem;

std::vector<SweepPoint> default_export_points() {
  const std::pair<ProblemKind, PrecondKind> cases[] = {
      {ProblemKind::PoissonDirichlet, PrecondKind::DarcyB},
      {ProblemKind::PoissonNeumann, PrecondKind::NeumannB},
      {ProblemKind::PoissonNeumannK, PrecondKind::NeumannBK},
      {ProblemKind::Biot, PrecondKind::BiotB},
      {ProblemKind::Herrmann, PrecondKind::HerrmannBH}};
  std::vector<SweepPoint> out;
  for (const auto& [kind, pk] : cases) {
    ProblemSpec s;
    s.kind = kind;
    s.combo = kind == ProblemKind::Biot       ? ElementCombo::P2_RT0_P0_P0
              : kind == ProblemKind::Herrmann ? ElementCombo::P2_P1
                                              : ElementCombo::RT0_P0;
    s.n = 4;
    if (kind == ProblemKind::Biot) s.params.alpha = 0.5;
    PrecondSpec ps;
    ps.kind = pk;
    out.push_back({s, ps});
  }
  return out;
}

std::vector<std::string> export_matrices(const fs::path& dir, const std::vector<SweepPoint>& points) {
  std::vector<std::string> files;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create '" + dir.string() + "': " + ec.message());

  int index = 0;
  for (const SweepPoint& pt : points) {
    const std::string name = std::to_string(index++) + "_" + to_string(pt.problem.kind) + "_" +
                             to_string(pt.problem.combo) + "_n" + std::to_string(pt.problem.n);
    const fs::path sub = dir / name;
    fs::create_directories(sub);
    const BlockMatrix a = assemble_system(pt.problem);
    const Preconditioner p = assemble_preconditioner(pt.precond, pt.problem);

    auto put = [&](const std::string& file, const SparseMatrix& m) {
      write_matrix_market(m, (sub / file).string());
      files.push_back((fs::path(name) / file).string());
    };
    put("system.mtx", a.assemble());
    for (int i = 0; i < a.num_fields(); ++i) {
      for (int j = 0; j < a.num_fields(); ++j) {
        if (a.block(i, j).nonZeros() > 0) put("block_" + a.fields[i] + "_" + a.fields[j] + ".mtx", a.block(i, j));
      }
    }
    for (const auto& [norm_name, m] : p.norm_matrices) {
      std::string safe = norm_name;
      for (char& ch : safe) {
        if (ch == ',') ch = '_';
      }
      put("norm_" + safe + ".mtx", m);
    }

    std::ofstream man(sub / "manifest.txt");
    const ParameterSet& q = pt.problem.params;
    man << "problem " << to_string(pt.problem.kind) << "\n"
        << "element " << to_string(pt.problem.combo) << "\n"
        << "precond " << to_string(pt.precond.kind) << "\n"
        << "n " << pt.problem.n << "\n"
        << "parameters K=" << format_number(q.K) << " alpha=" << format_number(q.alpha)
        << " lambda=" << format_number(q.lambda) << " c=" << format_number(q.c) << " mu=" << format_number(q.mu)
        << " tau=" << format_number(q.tau) << "\n"
        << "layout symmetric [[A, B^T], [B, -C]], essential DOFs eliminated\n"
        << "fields";
    for (int i = 0; i < a.num_fields(); ++i) man << " " << a.fields[i];
    man << "\n";
    for (int i = 0; i < a.num_fields(); ++i) {
      man << "field " << a.fields[i] << " offset " << a.offset(i) << " size " << a.sizes[i] << "\n";
    }
    for (const NormBlock& b : p.blocks()) {
      man << "norm_block " << b.name() << " offset " << b.offset() << " size " << b.size() << " summands "
          << b.summands() << "\n";
    }
    files.push_back((fs::path(name) / "manifest.txt").string());
  }
  return files;
}

}  // namespace mixedlab::harness
