// SPDX-FileCopyrightText: (c) 2026 The vtalign Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "vtalign/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "vtalign/error.hpp"
#include "vtalign/evaluation.hpp"

namespace vtalign {

namespace {

void require_assignment_shape(const ProblemInstance& instance, const Eigen::MatrixXd& y,
                              const char* what) {
  require(y.rows() == instance.j_total() && y.cols() == instance.i_total(),
          ErrorKind::ShapeMismatch,
          std::string(what) + " is " + std::to_string(y.rows()) + "x" +
              std::to_string(y.cols()) + ", expected " +
              std::to_string(instance.j_total()) + "x" + std::to_string(instance.i_total()));
}

double inv_i(const ProblemInstance& instance) {
  return 1.0 / static_cast<double>(instance.kernel.i_total);
}

// Objective pieces shared with the gradient and the line search.
struct Evaluation {
  Eigen::MatrixXd psi_y;    // E x I
  Eigen::MatrixXd psi_y_q;  // E x I
  Eigen::VectorXd excess;   // Y1 - mu
};

Evaluation evaluate(const ProblemInstance& instance, const RelaxedAssignment& y) {
  Evaluation e;
  e.psi_y = instance.psi * y;
  e.psi_y_q = e.psi_y * instance.kernel.q_matrix;
  e.excess = y.rowwise().sum() - instance.priors.mu;
  return e;
}

double objective_from(const ProblemInstance& instance, const RelaxedAssignment& y,
                      const Evaluation& e) {
  const double q = 0.5 * inv_i(instance) * e.psi_y.cwiseProduct(e.psi_y_q).sum();
  const double r = 0.5 * instance.priors.duration_weight() * e.excess.squaredNorm();
  const double l = band_penalty(y, instance.y_c, instance.priors.alpha);
  return q + r + l;
}

Eigen::MatrixXd gradient_from(const ProblemInstance& instance, const Evaluation& e) {
  Eigen::MatrixXd g = inv_i(instance) * (instance.psi.transpose() * e.psi_y_q);
  const double w = instance.priors.duration_weight();
  if (w != 0.0) g.colwise() += w * e.excess;
  if (instance.priors.alpha != 0.0) g += instance.priors.alpha * instance.y_c;
  return g;
}

// Second derivative of the objective along `direction`.
double curvature(const ProblemInstance& instance, const Eigen::MatrixXd& direction) {
  const Eigen::MatrixXd psi_d = instance.psi * direction;
  const double quad = inv_i(instance) * psi_d.cwiseProduct(psi_d * instance.kernel.q_matrix).sum();
  const double dur = instance.priors.duration_weight() * direction.rowwise().sum().squaredNorm();
  return quad + dur;
}

// Minimizer over [0, max_step] of slope * gamma + curv * gamma^2 / 2.
double step_from(double slope, double curv, double max_step = 1.0) {
  if (curv <= 1e-14) return slope < 0.0 ? max_step : 0.0;
  return std::clamp(-slope / curv, 0.0, max_step);
}

}  // namespace

std::vector<std::optional<CellMask>> ProblemInstance::masks() const {
  std::vector<std::optional<CellMask>> out;
  out.reserve(streams.size());
  for (const auto& s : streams) out.push_back(s.mask);
  return out;
}

ProblemInstance build_instance(std::vector<StreamData> streams, double lambda,
                               PriorConfig priors, double kappa) {
  require(!streams.empty(), ErrorKind::InvalidArgument, "problem needs at least one stream");
  require(std::isfinite(kappa) && kappa >= 0.0, ErrorKind::InvalidArgument,
          "kappa must be a non-negative real");

  ProblemInstance inst;
  const auto d = streams.front().phi.rows();
  const auto e = streams.front().psi.rows();
  for (const auto& s : streams) {
    const std::string where = "stream '" + s.id + "': ";
    require(s.phi.rows() == d, ErrorKind::ShapeMismatch,
            where + "video feature dimension " + std::to_string(s.phi.rows()) +
                " differs from " + std::to_string(d));
    require(s.psi.rows() == e, ErrorKind::ShapeMismatch,
            where + "text feature dimension " + std::to_string(s.psi.rows()) +
                " differs from " + std::to_string(e));
    require(s.psi.cols() <= s.phi.cols(), ErrorKind::Infeasible,
            where + "no alignment path: " + std::to_string(s.psi.cols()) +
                " text elements for " + std::to_string(s.phi.cols()) + " intervals");
    require_finite(s.phi, "phi");
    require_finite(s.psi, "psi");
    if (s.mask) {
      require(s.mask->rows() == s.psi.cols() && s.mask->cols() == s.phi.cols(),
              ErrorKind::ShapeMismatch, where + "mask shape does not match the stream");
      require(mask_feasible(*s.mask), ErrorKind::Infeasible,
              where + "no alignment path avoids the forbidden cells");
    }
    require(s.mu.size() == 0 || s.mu.size() == s.psi.cols(), ErrorKind::ShapeMismatch,
            where + "mu must have one entry per text element");
    inst.layout.add_stream(static_cast<int>(s.phi.cols()), static_cast<int>(s.psi.cols()));
  }

  inst.phi.resize(d, inst.layout.i_total());
  inst.psi.resize(e, inst.layout.j_total());
  priors.mu.resize(inst.layout.j_total());
  inst.y_c = Eigen::MatrixXd::Zero(inst.layout.j_total(), inst.layout.i_total());
  for (std::size_t n = 0; n < streams.size(); ++n) {
    const StreamBlock& b = inst.layout.blocks()[n];
    const StreamData& s = streams[n];
    inst.phi.middleCols(b.i_offset, b.i_count) = s.phi;
    inst.psi.middleCols(b.j_offset, b.j_count) = s.psi;
    priors.mu.segment(b.j_offset, b.j_count) =
        s.mu.size() ? s.mu
                    : uniform_mu(b.j_count, static_cast<double>(b.i_count) / b.j_count);
    inst.y_c.block(b.j_offset, b.i_offset, b.j_count, b.i_count) =
        band_indicator(b.j_count, b.i_count, priors.beta).y_c;
  }
  priors.validate();

  inst.kernel = compute_q(inst.phi, lambda);
  inst.priors = std::move(priors);
  inst.streams = std::move(streams);
  inst.kappa = kappa;
  return inst;
}

double objective(const ProblemInstance& instance, const RelaxedAssignment& y) {
  require_assignment_shape(instance, y, "assignment");
  return objective_from(instance, y, evaluate(instance, y));
}

Eigen::MatrixXd gradient(const ProblemInstance& instance, const RelaxedAssignment& y) {
  require_assignment_shape(instance, y, "assignment");
  return gradient_from(instance, evaluate(instance, y));
}

double exact_line_search(const ProblemInstance& instance, const RelaxedAssignment& y,
                         const Eigen::MatrixXd& direction) {
  require_assignment_shape(instance, y, "assignment");
  require_assignment_shape(instance, direction, "direction");
  const double slope = gradient(instance, y).cwiseProduct(direction).sum();
  return step_from(slope, curvature(instance, direction));
}

std::vector<AlignmentPath> default_init(const ProblemInstance& instance) {
  std::vector<AlignmentPath> init;
  init.reserve(instance.streams.size());
  for (std::size_t n = 0; n < instance.streams.size(); ++n) {
    const StreamBlock& b = instance.layout.blocks()[n];
    AlignmentPath diag = diagonal_path(b.i_count, b.j_count);
    const auto& mask = instance.streams[n].mask;
    if (mask && !path_respects(diag, *mask)) {
      // Nearest feasible vertex to the diagonal.
      diag = minimize_linear(-path_to_matrix(diag), &*mask).path;
    }
    init.push_back(std::move(diag));
  }
  return init;
}

namespace {

// One stream path in the support of the iterate, with the pieces of its
// Gram row that do not change while it stays active.
struct Atom {
  std::size_t stream = 0;
  AlignmentPath path;
  double weight = 0.0;
  Eigen::MatrixXd psi_v;    // E x I_n, Psi V restricted to the stream's columns
  Eigen::MatrixXd psi_v_q;  // E x I_total
  double linear = 0.0;      // alpha <Y_c, V> - w <mu, V1>
};

double path_product(const Eigen::MatrixXd& g, const AlignmentPath& path, const StreamBlock& b) {
  double total = 0.0;
  for (int i = 0; i < b.i_count; ++i) total += g(b.j_offset + path[i], b.i_offset + i);
  return total;
}

void add_path(Eigen::MatrixXd& m, const AlignmentPath& path, const StreamBlock& b, double w) {
  for (int i = 0; i < b.i_count; ++i) m(b.j_offset + path[i], b.i_offset + i) += w;
}

// Convex weights over paths of every stream (one simplex per stream), plus
// the Hessian of the objective in those weights:
//   H_kl = (1/I) <Psi V_k Q, Psi V_l> + w <V_k 1, V_l 1>.
class ActiveSet {
 public:
  explicit ActiveSet(const ProblemInstance& instance)
      : instance_(&instance), blocks_(&instance.layout.blocks()) {}

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::vector<Atom>& atoms() { return atoms_; }

  void add(std::size_t stream, const AlignmentPath& path, double weight) {
    auto [it, inserted] = index_.try_emplace(key(stream, path), atoms_.size());
    if (inserted) append(stream, path);
    atoms_[it->second].weight += weight;
  }

  void scale(double factor) {
    for (auto& a : atoms_) a.weight *= factor;
  }

  // Drops atoms whose weight fell to zero.
  void prune() {
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < atoms_.size(); ++k) {
      if (atoms_[k].weight > 0.0) keep.push_back(k);
    }
    if (keep.size() == atoms_.size()) return;
    Eigen::MatrixXd h(keep.size(), keep.size());
    std::vector<Atom> kept;
    for (std::size_t a = 0; a < keep.size(); ++a) {
      for (std::size_t b = 0; b < keep.size(); ++b) h(a, b) = hessian_(keep[a], keep[b]);
      kept.push_back(std::move(atoms_[keep[a]]));
    }
    hessian_ = std::move(h);
    atoms_ = std::move(kept);
    index_.clear();
    for (std::size_t k = 0; k < atoms_.size(); ++k) {
      index_.emplace(key(atoms_[k].stream, atoms_[k].path), k);
    }
  }

  Eigen::MatrixXd iterate() const {
    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(instance_->j_total(), instance_->i_total());
    for (const auto& a : atoms_) add_path(y, a.path, (*blocks_)[a.stream], a.weight);
    return y;
  }

  /// Minimizes the objective over the convex hull of the active paths
  /// (Wolfe-style active set: solve on the affine hull, then step back to
  /// the boundary and drop an atom while a weight is negative). Leaves the
  /// weights untouched if the affine subproblem is unbounded.
  void reoptimize() {
    for (std::size_t round = 0; round <= atoms_.size() + 1 && !atoms_.empty(); ++round) {
      const Eigen::VectorXd u = affine_minimizer();
      if (u.size() == 0) return;
      const auto m = static_cast<Eigen::Index>(atoms_.size());

      double theta = 1.0;
      std::size_t blocking = atoms_.size();
      for (Eigen::Index k = 0; k < m; ++k) {
        if (u(k) >= 0.0) continue;
        const double w = atoms_[k].weight;
        const double t = w / (w - u(k));
        if (t < theta) {
          theta = t;
          blocking = static_cast<std::size_t>(k);
        }
      }
      for (Eigen::Index k = 0; k < m; ++k) {
        atoms_[k].weight += theta * (u(k) - atoms_[k].weight);
        if (atoms_[k].weight < 0.0) atoms_[k].weight = 0.0;
      }
      if (blocking == atoms_.size()) {
        prune();
        return;
      }
      atoms_[blocking].weight = 0.0;
      prune();
    }
  }

 private:
  /// Minimizer of the quadratic on {sum of weights = 1 per stream}, in
  /// coordinates relative to one reference atom per stream; the reduced
  /// Hessian is semidefinite, so tiny pivots are treated as zero. Returns an
  /// empty vector when the quadratic is unbounded below on that set.
  Eigen::VectorXd affine_minimizer() const {
    const auto m = static_cast<Eigen::Index>(atoms_.size());
    std::vector<Eigen::Index> ref(blocks_->size(), -1);
    for (Eigen::Index k = 0; k < m; ++k) {
      auto& r = ref[atoms_[k].stream];
      if (r < 0 || atoms_[k].weight > atoms_[r].weight) r = k;
    }
    std::vector<Eigen::Index> free;
    for (Eigen::Index k = 0; k < m; ++k) {
      if (ref[atoms_[k].stream] != k) free.push_back(k);
    }
    Eigen::VectorXd base = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd linear(m);
    for (Eigen::Index k = 0; k < m; ++k) linear(k) = atoms_[k].linear;
    for (const auto r : ref) {
      if (r >= 0) base(r) = 1.0;
    }
    const auto f = static_cast<Eigen::Index>(free.size());
    if (f == 0) return base;

    // Column k of N is e_k - e_ref(k); reduced system N^T H N z = -N^T (H base + c).
    const Eigen::VectorXd g0 = hessian_ * base + linear;
    Eigen::MatrixXd reduced(f, f);
    Eigen::VectorXd rhs(f);
    for (Eigen::Index a = 0; a < f; ++a) {
      const Eigen::Index ka = free[a];
      const Eigen::Index ra = ref[atoms_[ka].stream];
      rhs(a) = -(g0(ka) - g0(ra));
      for (Eigen::Index b = 0; b <= a; ++b) {
        const Eigen::Index kb = free[b];
        const Eigen::Index rb = ref[atoms_[kb].stream];
        reduced(a, b) = reduced(b, a) =
            hessian_(ka, kb) - hessian_(ka, rb) - hessian_(ra, kb) + hessian_(ra, rb);
      }
    }
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(reduced);
    const Eigen::VectorXd d = ldlt.vectorD();
    const double cutoff = 1e-13 * std::max(d.cwiseAbs().maxCoeff(), 1e-300);
    Eigen::VectorXd z = ldlt.transpositionsP() * rhs;
    ldlt.matrixL().solveInPlace(z);
    for (Eigen::Index i = 0; i < f; ++i) z(i) = d(i) > cutoff ? z(i) / d(i) : 0.0;
    ldlt.matrixU().solveInPlace(z);
    z = ldlt.transpositionsP().transpose() * z;
    if ((reduced * z - rhs).norm() > 1e-8 * (1.0 + rhs.norm())) return {};

    Eigen::VectorXd u = base;
    for (Eigen::Index a = 0; a < f; ++a) {
      u(free[a]) += z(a);
      u(ref[atoms_[free[a]].stream]) -= z(a);
    }
    return u;
  }

  static std::vector<int> key(std::size_t stream, const AlignmentPath& path) {
    std::vector<int> k{static_cast<int>(stream)};
    k.insert(k.end(), path.assignment().begin(), path.assignment().end());
    return k;
  }

  void append(std::size_t stream, const AlignmentPath& path) {
    const StreamBlock& b = (*blocks_)[stream];
    Atom a;
    a.stream = stream;
    a.path = path;
    a.psi_v.resize(instance_->psi.rows(), b.i_count);
    for (int i = 0; i < b.i_count; ++i) a.psi_v.col(i) = instance_->psi.col(b.j_offset + path[i]);
    a.psi_v_q = a.psi_v * instance_->kernel.q_matrix.middleRows(b.i_offset, b.i_count);
    const double w = instance_->priors.duration_weight();
    const Eigen::VectorXd rows = path_to_matrix(path).rowwise().sum();
    a.linear = instance_->priors.alpha * path_product(instance_->y_c, path, b) -
               w * instance_->priors.mu.segment(b.j_offset, b.j_count).dot(rows);

    const auto m = static_cast<Eigen::Index>(atoms_.size());
    hessian_.conservativeResize(m + 1, m + 1);
    const double inv = 1.0 / static_cast<double>(instance_->kernel.i_total);
    for (Eigen::Index k = 0; k <= m; ++k) {
      const Atom& other = k < m ? atoms_[k] : a;
      const StreamBlock& ob = (*blocks_)[other.stream];
      double h = inv * a.psi_v_q.middleCols(ob.i_offset, ob.i_count).cwiseProduct(other.psi_v).sum();
      if (w != 0.0 && other.stream == stream) {
        h += w * rows.dot(path_to_matrix(other.path).rowwise().sum());
      }
      hessian_(m, k) = hessian_(k, m) = h;
    }
    atoms_.push_back(std::move(a));
  }

  const ProblemInstance* instance_;
  const std::vector<StreamBlock>* blocks_;
  std::vector<Atom> atoms_;
  Eigen::MatrixXd hessian_;
  std::map<std::vector<int>, std::size_t> index_;
};

}  // namespace

SolveResult solve(const ProblemInstance& instance, const SolveOptions& options) {
  require(options.max_iter >= 0, ErrorKind::InvalidArgument, "max_iter must be >= 0");
  require(options.gap_tol >= 0.0, ErrorKind::InvalidArgument, "gap_tol must be >= 0");

  std::vector<AlignmentPath> init = options.init.empty() ? default_init(instance) : options.init;
  require(init.size() == instance.streams.size(), ErrorKind::ShapeMismatch,
          "one initial path per stream is required");
  for (std::size_t n = 0; n < init.size(); ++n) {
    const auto& mask = instance.streams[n].mask;
    require(!mask || path_respects(init[n], *mask), ErrorKind::Infeasible,
            "initial path of stream '" + instance.streams[n].id + "' hits a forbidden cell");
  }

  SolveResult result;
  result.y_relaxed = paths_to_matrix(init, instance.layout);
  RelaxedAssignment& y = result.y_relaxed;
  const auto& blocks = instance.layout.blocks();
  const std::size_t streams = init.size();
  ActiveSet active(instance);
  for (std::size_t n = 0; n < streams; ++n) active.add(n, init[n], 1.0);
  const auto masks = instance.masks();

  const auto classic_step = [&](const std::vector<AlignmentPath>& target,
                                const Eigen::MatrixXd& vertex, double gap, int t) {
    const Eigen::MatrixXd direction = vertex - y;
    const double curv = curvature(instance, direction);
    const double gamma = std::isfinite(curv) ? step_from(-gap, curv) : 2.0 / (t + 2.0);
    y += gamma * direction;
    active.scale(1.0 - gamma);
    for (std::size_t n = 0; n < streams; ++n) active.add(n, target[n], gamma);
    active.prune();
  };

  // Pairwise over the product of stream polytopes: every stream moves weight
  // from its worst active path to its LMO path, with one common step capped
  // by the smallest weight moved. Returns false when no step was taken.
  const auto pairwise_step = [&](const Eigen::MatrixXd& g, const std::vector<AlignmentPath>& lmo) {
    std::vector<std::size_t> away(streams, 0);
    std::vector<double> worst(streams, -std::numeric_limits<double>::infinity());
    const auto& atoms = active.atoms();
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      const std::size_t n = atoms[k].stream;
      const double p = path_product(g, atoms[k].path, blocks[n]);
      if (p > worst[n]) {
        worst[n] = p;
        away[n] = k;
      }
    }
    Eigen::MatrixXd direction = Eigen::MatrixXd::Zero(y.rows(), y.cols());
    std::vector<bool> moving(streams, false);
    double slope = 0.0;
    double max_step = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < streams; ++n) {
      const double s = path_product(g, lmo[n], blocks[n]) - worst[n];
      if (s >= 0.0) continue;
      moving[n] = true;
      slope += s;
      max_step = std::min(max_step, atoms[away[n]].weight);
      add_path(direction, lmo[n], blocks[n], 1.0);
      add_path(direction, atoms[away[n]].path, blocks[n], -1.0);
    }
    if (slope >= 0.0) return false;
    const double gamma = step_from(slope, curvature(instance, direction), max_step);
    if (!(gamma > 0.0)) return false;
    y += gamma * direction;
    for (std::size_t n = 0; n < streams; ++n) {
      if (!moving[n]) continue;
      auto& a = active.atoms()[away[n]];
      a.weight = gamma >= a.weight ? 0.0 : a.weight - gamma;
      active.add(n, lmo[n], gamma);
    }
    active.prune();
    return true;
  };

  for (int t = 0;; ++t) {
    const Evaluation e = evaluate(instance, y);
    const double value = objective_from(instance, y, e);
    require(std::isfinite(value), ErrorKind::NonFinite,
            "objective is not finite at iteration " + std::to_string(t));
    const Eigen::MatrixXd g = gradient_from(instance, e);
    const BlockMinimum fw = lmo_blocks(g, instance.layout, masks);
    const RelaxedAssignment fw_vertex = paths_to_matrix(fw.paths, instance.layout);
    const double gap = g.cwiseProduct(y - fw_vertex).sum();

    result.objective_trace.push_back(value);
    result.gap_trace.push_back(gap);
    result.iterations = t;
    if (gap <= options.gap_tol) {
      result.converged = true;
      break;
    }
    if (t == options.max_iter) break;

    if (options.step_rule == StepRule::Classic) {
      classic_step(fw.paths, fw_vertex, gap, t);
      continue;
    }
    if (!pairwise_step(g, fw.paths)) classic_step(fw.paths, fw_vertex, gap, t);
    if (options.step_rule == StepRule::Corrective) {
      // Discard a correction that roundoff made worse.
      ActiveSet before = active;
      active.reoptimize();
      const Eigen::MatrixXd corrected = active.iterate();
      if (objective_from(instance, corrected, evaluate(instance, corrected)) <=
          objective_from(instance, y, evaluate(instance, y))) {
        y = corrected;
      } else {
        active = std::move(before);
      }
    }
  }

  result.active_vertices = active.atoms().size();
  result.w_star = fit_model(instance.psi, y, instance.phi, instance.kernel.lambda);
  return result;
}

}  // namespace vtalign
