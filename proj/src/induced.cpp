#include "dirac/induced.hpp"

#include <random>
#include <string>

#include "dirac/errors.hpp"

namespace dirac {

DistributionField::DistributionField(Index n, Index m, Fn fn)
    : n_(n), m_(m), fn_(std::move(fn)) {
  if (n_ <= 0) throw DimensionMismatch("DistributionField: config dimension must be positive");
  if (m_ < 0) throw DimensionMismatch("DistributionField: negative row count");
}

DistributionField DistributionField::unconstrained(Index n) {
  DistributionField f(n, 0, [n](const Vector&) { return Matrix(0, n); });
  f.affine_ = std::vector<AffineRow>{};
  return f;
}

DistributionField DistributionField::constant(const Matrix& rows) {
  const Index n = rows.cols();
  std::vector<AffineRow> affine;
  for (Index k = 0; k < rows.rows(); ++k) {
    affine.push_back({rows.row(k).transpose(), Matrix::Zero(n, n)});
  }
  DistributionField f(n, rows.rows(), [rows](const Vector&) { return rows; });
  f.affine_ = std::move(affine);
  return f;
}

DistributionField DistributionField::affine(Index n, std::vector<AffineRow> rows) {
  for (const auto& r : rows) {
    if (r.constant.size() != n || r.linear_in_q.rows() != n || r.linear_in_q.cols() != n) {
      throw DimensionMismatch("affine row: expected constant of length " + std::to_string(n) +
                              " and " + std::to_string(n) + "x" + std::to_string(n) +
                              " linear part");
    }
  }
  const Index m = static_cast<Index>(rows.size());
  DistributionField f(n, m, [n, rows](const Vector& q) {
    Matrix w(static_cast<Index>(rows.size()), n);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      w.row(static_cast<Index>(k)) = (rows[k].constant + rows[k].linear_in_q * q).transpose();
    }
    return w;
  });
  f.affine_ = std::move(rows);
  return f;
}

DistributionField DistributionField::custom(Index n, Index m, Fn fn) {
  return DistributionField(n, m, std::move(fn));
}

Matrix DistributionField::omega(const Vector& q) const {
  if (q.size() != n_) {
    throw DimensionMismatch("omega: q has length " + std::to_string(q.size()) +
                            ", expected " + std::to_string(n_));
  }
  Matrix w = fn_(q);
  if (w.rows() != m_ || w.cols() != n_) {
    throw DimensionMismatch("omega: coefficient function returned " +
                            std::to_string(w.rows()) + "x" + std::to_string(w.cols()) +
                            ", expected " + std::to_string(m_) + "x" + std::to_string(n_));
  }
  return w;
}

InterconnectionSpec::InterconnectionSpec(std::vector<DistributionField> subsystems,
                                         DistributionField coupling)
    : subsystems_(std::move(subsystems)), coupling_(std::move(coupling)) {
  if (subsystems_.empty()) throw DimensionMismatch("InterconnectionSpec: no subsystems");
  Index off = 0;
  for (const auto& s : subsystems_) {
    offsets_.push_back(off);
    off += s.config_dim();
  }
  if (off != coupling_.config_dim()) {
    throw DimensionMismatch("InterconnectionSpec: subsystem dimensions sum to " +
                            std::to_string(off) + " but coupling lives on R^" +
                            std::to_string(coupling_.config_dim()));
  }
}

Index InterconnectionSpec::subsystem_rows() const {
  Index m = 0;
  for (const auto& s : subsystems_) m += s.rows();
  return m;
}

Index InterconnectionSpec::total_rows() const { return subsystem_rows() + coupling_.rows(); }

Matrix InterconnectionSpec::stacked_constraints(const Vector& q) const {
  const Index n = config_dim();
  if (q.size() != n) {
    throw DimensionMismatch("stacked_constraints: q has length " + std::to_string(q.size()) +
                            ", expected " + std::to_string(n));
  }
  Matrix w = Matrix::Zero(total_rows(), n);
  Index row = 0;
  for (std::size_t i = 0; i < subsystems_.size(); ++i) {
    const auto& s = subsystems_[i];
    w.block(row, offsets_[i], s.rows(), s.config_dim()) =
        s.omega(q.segment(offsets_[i], s.config_dim()));
    row += s.rows();
  }
  w.bottomRows(coupling_.rows()) = coupling_.omega(q);
  return w;
}

Subspace lift_rows(const Matrix& omega) {
  const Index n = omega.cols();
  Matrix rows = Matrix::Zero(omega.rows(), 2 * n);
  rows.leftCols(n) = omega;
  return Subspace::kernel(rows);
}

Subspace lift_to_cotangent(const DistributionField& d, const Vector& q, const Vector& p) {
  if (p.size() != d.config_dim()) {
    throw DimensionMismatch("lift_to_cotangent: p has length " + std::to_string(p.size()) +
                            ", expected " + std::to_string(d.config_dim()));
  }
  return lift_rows(d.omega(q));
}

LinearDirac induced_dirac_at(const DistributionField& d, const Vector& q, const Vector& p) {
  const Index n = d.config_dim();
  if (p.size() != n) {
    throw DimensionMismatch("induced_dirac_at: p has length " + std::to_string(p.size()) +
                            ", expected " + std::to_string(n));
  }
  const Subspace delta = Subspace::kernel(d.omega(q));
  const Matrix eta = annihilator(delta).basis();
  const Matrix& u = delta.basis();
  // Ambient layout ((qdot, pdot), (beta, w)), each block of length n.
  Matrix cols = Matrix::Zero(4 * n, u.cols() + n + eta.cols());
  cols.block(0, 0, n, u.cols()) = u;
  cols.block(3 * n, 0, n, u.cols()) = u;
  cols.block(n, u.cols(), n, n).setIdentity();
  cols.block(2 * n, u.cols(), n, n) = -Matrix::Identity(n, n);
  cols.block(2 * n, u.cols() + n, n, eta.cols()) = eta;
  return LinearDirac(2 * n, Subspace::span(cols));
}

LinearDirac interconnection_dirac_at(const DistributionField& coupling, const Vector& q,
                                     const Vector& p) {
  const Index n = coupling.config_dim();
  return from_form_and_distribution(
      {lift_to_cotangent(coupling, q, p), Matrix::Zero(2 * n, 2 * n)});
}

LinearDirac interconnect_at(const InterconnectionSpec& spec, const Vector& q, const Vector& p) {
  const Index n = spec.config_dim();
  if (q.size() != n || p.size() != n) {
    throw DimensionMismatch("interconnect_at: expected q and p of length " + std::to_string(n));
  }
  const auto& subs = spec.subsystems();
  std::optional<LinearDirac> sum;
  // Local layout (q_1, p_1, q_2, p_2, ...) mapped into global (q, p).
  Matrix perm = Matrix::Zero(2 * n, 2 * n);
  Index local = 0;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    const Index off = spec.offset(i), ni = subs[i].config_dim();
    LinearDirac di = induced_dirac_at(subs[i], q.segment(off, ni), p.segment(off, ni));
    sum = sum ? direct_sum(*sum, di) : di;
    for (Index j = 0; j < ni; ++j) {
      perm(off + j, local + j) = 1.0;
      perm(n + off + j, local + ni + j) = 1.0;
    }
    local += 2 * ni;
  }
  const LinearDirac product = subs.size() == 1 ? *sum : pushforward(*sum, perm);
  return bowtie(product, interconnection_dirac_at(spec.coupling(), q, p));
}

LinearDirac interconnect_reference_at(const InterconnectionSpec& spec, const Vector& q,
                                      const Vector& p) {
  const Index n = spec.config_dim();
  if (p.size() != n) {
    throw DimensionMismatch("interconnect_reference_at: p has length " +
                            std::to_string(p.size()) + ", expected " + std::to_string(n));
  }
  return from_form_and_distribution(
      {lift_rows(spec.stacked_constraints(q)), canonical_form(n)});
}

RankReport check_constant_rank(const InterconnectionSpec& spec, std::uint64_t seed, int count,
                               double scale) {
  RankReport report;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-scale, scale);
  const Index n = spec.config_dim();
  for (int k = 0; k < count; ++k) {
    Vector x(2 * n);
    for (Index i = 0; i < 2 * n; ++i) x(i) = unif(rng);
    const Vector q = x.head(n), p = x.tail(n);
    report.points.push_back(x);
    report.constraint_ranks.push_back(numeric_rank(spec.stacked_constraints(q)));
    report.structure_dims.push_back(interconnect_at(spec, q, p).subspace().dim());
  }
  for (std::size_t k = 1; k < report.points.size(); ++k) {
    if (report.constraint_ranks[k] != report.constraint_ranks[0] ||
        report.structure_dims[k] != report.structure_dims[0]) {
      report.constant = false;
    }
  }
  return report;
}

}  // namespace dirac
