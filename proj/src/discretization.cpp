#include "yamabe/discretization.hpp"

#include "yamabe/errors.hpp"
#include "yamabe/quadrature.hpp"
#include "yamabe/special_functions.hpp"

#include <cmath>
#include <string>

namespace yamabe {

void validate_coefficients(const RadialManifold& m, const CoefficientField& c) {
  if (!(c.a.min_on(m.r_min(), m.r_max()) > 0.0)) throw ValidationError("coefficient a must be positive on the domain");
  if (!(c.f.min_on(m.r_min(), m.r_max()) > 0.0)) throw ValidationError("coefficient f must be positive on the domain");
}

void validate_center_maximum(const RadialManifold& m, const CoefficientField& c) {
  if (!m.is_ball()) throw ValidationError("concentration point r = 0 requires a ball");
  const double f0 = c.f(0.0);
  if (c.f.max_on(0.0, m.r_max()) > f0 * (1.0 + 1e-14)) {
    throw ValidationError("f must attain its maximum over the domain at the center");
  }
}

RadialMesh::RadialMesh(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 9) throw ValidationError("mesh needs at least 8 elements");
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (!(nodes_[i] > nodes_[i - 1])) throw ValidationError("mesh nodes must be strictly increasing");
  }
}

RadialMesh RadialMesh::uniform(double r_min, double r_max, int elements) {
  if (elements < 8) throw ValidationError("mesh needs at least 8 elements, got " + std::to_string(elements));
  std::vector<double> nodes(static_cast<std::size_t>(elements) + 1);
  const double h = (r_max - r_min) / elements;
  for (int i = 0; i <= elements; ++i) nodes[static_cast<std::size_t>(i)] = r_min + h * i;
  nodes.back() = r_max;
  return RadialMesh(std::move(nodes));
}

RadialMesh RadialMesh::graded(double r_min, double r_max, int elements, double ratio) {
  if (elements < 8) throw ValidationError("mesh needs at least 8 elements, got " + std::to_string(elements));
  if (!(ratio > 0.0)) throw ValidationError("grading ratio must be positive");
  if (ratio == 1.0) return uniform(r_min, r_max, elements);
  const double g = std::pow(ratio, 1.0 / (elements - 1));
  // h_k = h0 g^k, Σ h_k = length
  const double h0 = (r_max - r_min) * (g - 1.0) / (std::pow(g, elements) - 1.0);
  std::vector<double> nodes(static_cast<std::size_t>(elements) + 1);
  nodes[0] = r_min;
  double h = h0;
  for (std::size_t i = 1; i < nodes.size(); ++i, h *= g) nodes[i] = nodes[i - 1] + h;
  nodes.back() = r_max;
  return RadialMesh(std::move(nodes));
}

Vector DiscreteProblem::embed(const Vector& interior_values) const {
  Vector full = Vector::Zero(node_count());
  full.segment(first_interior, interior_count) = interior_values;
  return full;
}

bool DiscreteProblem::zero_on_boundary(const Vector& w) const {
  for (int i : boundary_dofs) {
    if (w(i) != 0.0) return false;
  }
  return true;
}

DiscreteProblem assemble(const RadialManifold& m, const CoefficientField& c, const RadialMesh& mesh) {
  validate_coefficients(m, c);
  if (std::abs(mesh[0] - m.r_min()) > 1e-12 * m.r_max() ||
      std::abs(mesh[mesh.elements()] - m.r_max()) > 1e-12 * m.r_max()) {
    throw ValidationError("mesh must span [r_min, r_max]");
  }

  const int nodes = mesh.node_count();
  DiscreteProblem p{m, c, mesh, Tridiagonal(nodes), Tridiagonal(nodes), Tridiagonal(nodes), Tridiagonal(nodes),
                    Vector::Zero(nodes), Vector::Zero(nodes), {}, 0, 0};

  const double omega = sphere_volume(m.dimension() - 1);
  const int dim = m.dimension();
  for (int e = 0; e < mesh.elements(); ++e) {
    const double lo = mesh[e];
    const double hi = mesh[e + 1];
    const double h = hi - lo;
    double ka = 0, kg = 0, bll = 0, blr = 0, brr = 0, mll = 0, mlr = 0, mrr = 0, ml = 0, mr = 0;
    quadrature::for_each_gauss_node<5>(lo, hi, [&](double r, double wq) {
      const double rho = wq * omega * std::pow(sn_kappa(m.kappa(), r), dim - 1);
      const double phl = (hi - r) / h;
      const double phr = (r - lo) / h;
      const double bv = c.b(r);
      ka += c.a(r) * rho;
      kg += rho;
      bll += bv * rho * phl * phl;
      blr += bv * rho * phl * phr;
      brr += bv * rho * phr * phr;
      mll += rho * phl * phl;
      mlr += rho * phl * phr;
      mrr += rho * phr * phr;
      ml += rho * phl;
      mr += rho * phr;
    });
    const double inv_h2 = 1.0 / (h * h);
    p.stiffness.diag(e) += ka * inv_h2;
    p.stiffness.diag(e + 1) += ka * inv_h2;
    p.stiffness.off(e) -= ka * inv_h2;
    p.gradient.diag(e) += kg * inv_h2;
    p.gradient.diag(e + 1) += kg * inv_h2;
    p.gradient.off(e) -= kg * inv_h2;
    p.mass_b.diag(e) += bll;
    p.mass_b.diag(e + 1) += brr;
    p.mass_b.off(e) += blr;
    p.mass.diag(e) += mll;
    p.mass.diag(e + 1) += mrr;
    p.mass.off(e) += mlr;
    p.lumped(e) += ml;
    p.lumped(e + 1) += mr;
  }
  for (int i = 0; i < nodes; ++i) p.weight_f(i) = c.f(mesh[i]) * p.lumped(i);

  if (m.is_ball()) {
    p.boundary_dofs = {nodes - 1};
    p.first_interior = 0;
    p.interior_count = nodes - 1;
  } else {
    p.boundary_dofs = {0, nodes - 1};
    p.first_interior = 1;
    p.interior_count = nodes - 2;
  }
  return p;
}

double quadratic_form(const DiscreteProblem& p, const Vector& u) {
  return bilinear(p.stiffness, u, u) + bilinear(p.mass_b, u, u);
}

double energy(const DiscreteProblem& p, const Vector& w) {
  if (w.size() != p.node_count()) throw DomainError("nodal vector has the wrong length");
  if (!p.zero_on_boundary(w)) throw DomainError("energy: w must vanish on the boundary");
  return quadratic_form(p, w);
}

void check_exponent(const RadialManifold& m, double q) {
  const double crit = critical_exponent(m.dimension());
  if (!(q > 2.0 && q <= crit * (1.0 + 1e-15))) {
    throw DomainError("exponent q=" + std::to_string(q) + " outside (2, 2n/(n-2)]");
  }
}

double lq_integral(const DiscreteProblem& p, const Vector& u, double q) {
  return (p.lumped.array() * u.array().abs().pow(q)).sum();
}

double constraint_value(const DiscreteProblem& p, const Vector& w, const Vector& h, double q) {
  check_exponent(p.manifold, q);
  return (p.weight_f.array() * (w + h).array().abs().pow(q)).sum();
}

}  // namespace yamabe
