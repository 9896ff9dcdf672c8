#include "absnorm/space.hpp"

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <variant>

#include "absnorm/errors.hpp"

namespace absnorm {

struct PSpaceRep {
  double p;
  bool max_norm;
  int dim;
};
struct PolyhedralRep {
  std::vector<Vector> functionals;
  int dim;
};
struct SumRep {
  FiniteSpace left;
  FiniteSpace right;
  AbsoluteNorm F;
};
struct MappedRep {
  FiniteSpace inner;
  Vector inverse;
};

struct FiniteSpace::Impl {
  std::variant<PSpaceRep, PolyhedralRep, SumRep, MappedRep> rep;
  int dim;
};

namespace {

double eval_p(const PSpaceRep& rep, std::span<const double> x) {
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  if (rep.max_norm || scale == 0.0) return scale;
  if (rep.p == 1.0) {
    double sum = 0.0;
    for (double v : x) sum += std::abs(v);
    return sum;
  }
  if (rep.p == 2.0) {
    double sum = 0.0;
    for (double v : x) sum += (v / scale) * (v / scale);
    return scale * std::sqrt(sum);
  }
  double sum = 0.0;
  for (double v : x) sum += std::pow(std::abs(v) / scale, rep.p);
  return scale * std::pow(sum, 1.0 / rep.p);
}

double eval_polyhedral(const PolyhedralRep& rep, std::span<const double> x) {
  double best = 0.0;
  for (const Vector& f : rep.functionals) {
    double dot = 0.0;
    for (int i = 0; i < rep.dim; ++i) dot += f[i] * x[i];
    best = std::max(best, std::abs(dot));
  }
  return best;
}

double eval(const FiniteSpace::Impl& impl, std::span<const double> x);

double eval_mapped(const MappedRep& rep, int dim, std::span<const double> x) {
  auto apply = [&](std::span<double> out) {
    for (int i = 0; i < dim; ++i) {
      double acc = 0.0;
      for (int j = 0; j < dim; ++j) acc += rep.inverse[i * dim + j] * x[j];
      out[i] = acc;
    }
    return rep.inner.norm(out);
  };
  if (dim <= 16) {
    std::array<double, 16> buffer{};
    return apply(std::span<double>(buffer.data(), dim));
  }
  Vector buffer(dim);
  return apply(buffer);
}

double eval(const FiniteSpace::Impl& impl, std::span<const double> x) {
  return std::visit(
      [&](const auto& rep) -> double {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, PSpaceRep>) {
          return eval_p(rep, x);
        } else if constexpr (std::is_same_v<T, PolyhedralRep>) {
          return eval_polyhedral(rep, x);
        } else if constexpr (std::is_same_v<T, SumRep>) {
          const int k = rep.left.dim();
          return rep.F(rep.left.norm(x.subspan(0, k)), rep.right.norm(x.subspan(k)));
        } else {
          return eval_mapped(rep, impl.dim, x);
        }
      },
      impl.rep);
}

int matrix_rank(const std::vector<Vector>& rows, int dim) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < dim; ++j) m(static_cast<Eigen::Index>(i), j) = rows[i][j];
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  lu.setThreshold(1e-12);
  return static_cast<int>(lu.rank());
}

}  // namespace

FiniteSpace FiniteSpace::p(double p, int dim) {
  if (dim < 1) throw Error(ErrorCode::kInvalidArgument, "dim must be positive");
  if (std::isnan(p) || p < 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "p must be >= 1, got " + std::to_string(p));
  }
  const bool max_norm = std::isinf(p);
  return FiniteSpace(std::make_shared<const Impl>(Impl{PSpaceRep{p, max_norm, dim}, dim}));
}

FiniteSpace FiniteSpace::polyhedral(std::vector<Vector> functionals) {
  if (functionals.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "polyhedral space needs functionals");
  }
  const int dim = static_cast<int>(functionals.front().size());
  if (dim < 1) throw Error(ErrorCode::kInvalidArgument, "empty functional");
  for (std::size_t i = 0; i < functionals.size(); ++i) {
    if (static_cast<int>(functionals[i].size()) != dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "functional " + std::to_string(i) + " has length " +
                      std::to_string(functionals[i].size()) + ", expected " +
                      std::to_string(dim));
    }
    for (double v : functionals[i]) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "functional " + std::to_string(i) + " is not finite");
      }
    }
  }
  if (matrix_rank(functionals, dim) < dim) {
    throw Error(ErrorCode::kInvalidNorm,
                "functionals do not span R^" + std::to_string(dim) +
                    "; the gauge vanishes on a nonzero vector");
  }
  return FiniteSpace(
      std::make_shared<const Impl>(Impl{PolyhedralRep{std::move(functionals), dim}, dim}));
}

FiniteSpace FiniteSpace::sum(const FiniteSpace& left, const FiniteSpace& right,
                             const AbsoluteNorm& F) {
  const int dim = left.dim() + right.dim();
  return FiniteSpace(std::make_shared<const Impl>(Impl{SumRep{left, right, F}, dim}));
}

FiniteSpace FiniteSpace::mapped(const FiniteSpace& inner, Vector inverse) {
  const int dim = inner.dim();
  if (static_cast<int>(inverse.size()) != dim * dim) {
    throw Error(ErrorCode::kDimensionMismatch,
                "map must be " + std::to_string(dim) + "x" + std::to_string(dim));
  }
  std::vector<Vector> rows(dim, Vector(dim));
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      if (!std::isfinite(inverse[i * dim + j])) {
        throw Error(ErrorCode::kInvalidArgument, "map entry is not finite");
      }
      rows[i][j] = inverse[i * dim + j];
    }
  }
  if (matrix_rank(rows, dim) < dim) {
    throw Error(ErrorCode::kSingularMatrix, "map is singular");
  }
  return FiniteSpace(
      std::make_shared<const Impl>(Impl{MappedRep{inner, std::move(inverse)}, dim}));
}

FiniteSpace::Kind FiniteSpace::kind() const {
  return static_cast<Kind>(impl_->rep.index());
}

int FiniteSpace::dim() const { return impl_->dim; }

double FiniteSpace::norm(std::span<const double> x) const { return eval(*impl_, x); }

double FiniteSpace::exponent() const {
  const auto* rep = std::get_if<PSpaceRep>(&impl_->rep);
  if (!rep) throw Error(ErrorCode::kInvalidArgument, "not a p-space");
  return rep->max_norm ? std::numeric_limits<double>::infinity() : rep->p;
}

const std::vector<Vector>& FiniteSpace::functionals() const {
  const auto* rep = std::get_if<PolyhedralRep>(&impl_->rep);
  if (!rep) throw Error(ErrorCode::kInvalidArgument, "not a polyhedral space");
  return rep->functionals;
}

const FiniteSpace& FiniteSpace::left() const {
  const auto* rep = std::get_if<SumRep>(&impl_->rep);
  if (!rep) throw Error(ErrorCode::kInvalidArgument, "not a sum space");
  return rep->left;
}

const FiniteSpace& FiniteSpace::right() const {
  const auto* rep = std::get_if<SumRep>(&impl_->rep);
  if (!rep) throw Error(ErrorCode::kInvalidArgument, "not a sum space");
  return rep->right;
}

const AbsoluteNorm& FiniteSpace::outer() const {
  const auto* rep = std::get_if<SumRep>(&impl_->rep);
  if (!rep) throw Error(ErrorCode::kInvalidArgument, "not a sum space");
  return rep->F;
}

const FiniteSpace& FiniteSpace::inner() const {
  const auto* rep = std::get_if<MappedRep>(&impl_->rep);
  if (!rep) throw Error(ErrorCode::kInvalidArgument, "not a mapped space");
  return rep->inner;
}

const Vector& FiniteSpace::inverse() const {
  const auto* rep = std::get_if<MappedRep>(&impl_->rep);
  if (!rep) throw Error(ErrorCode::kInvalidArgument, "not a mapped space");
  return rep->inverse;
}

double norm(const FiniteSpace& space, std::span<const double> x) {
  if (static_cast<int>(x.size()) != space.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "vector has length " + std::to_string(x.size()) + ", space has dim " +
                    std::to_string(space.dim()));
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "vector is not finite");
  }
  return space.norm(x);
}

}  // namespace absnorm
