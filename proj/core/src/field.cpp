#include "qlg/field.hpp"

#include "qlg/errors.hpp"
#include "qlg/grid.hpp"

namespace qlg {

void GridSpec::validate() const {
  if (nx < 4 || ny < 4 || nz < 4)
    throw ConfigError("grid extents must be at least 4, got " + std::to_string(nx) + "x" +
                      std::to_string(ny) + "x" + std::to_string(nz));
}

SpinorField SpinorField::zeros(const GridSpec& g) {
  SpinorField f;
  f.grid = g;
  f.data.assign(2 * g.sites(), cplx(0.0, 0.0));
  return f;
}

ScalarField ScalarField::zeros(const GridSpec& g) {
  ScalarField f;
  f.grid = g;
  f.data.assign(g.sites(), cplx(0.0, 0.0));
  return f;
}

RealField RealField::zeros(const GridSpec& g) {
  RealField f;
  f.grid = g;
  f.data.assign(g.sites(), 0.0);
  return f;
}

Vec3Field Vec3Field::zeros(const GridSpec& g) {
  Vec3Field f;
  f.grid = g;
  for (auto& c : f.comp) c.assign(g.sites(), 0.0);
  return f;
}

ScalarField order_parameter(const SpinorField& f) {
  ScalarField phi;
  phi.grid = f.grid;
  const std::size_t n = f.grid.sites();
  phi.data.resize(n);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(n); ++i)
    phi.data[i] = f.data[2 * i] + f.data[2 * i + 1];
  return phi;
}

double norm2(const SpinorField& f) {
  const auto* d = f.data.data();
  return chunked_sum(f.grid.sites(),
                     [d](std::size_t i) { return std::norm(d[2 * i]) + std::norm(d[2 * i + 1]); });
}

double norm2(const ScalarField& f) {
  const auto* d = f.data.data();
  return chunked_sum(f.grid.sites(), [d](std::size_t i) { return std::norm(d[i]); });
}

} // namespace qlg
