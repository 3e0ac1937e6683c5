#include "torsion/radial.hpp"

#include <cmath>

namespace torsion {

std::vector<double> Grid::geometric_nodes(double R, int n, double min_fraction) {
  std::vector<double> nodes;
  nodes.reserve(static_cast<std::size_t>(n));
  const double lo = std::log(min_fraction);
  for (int k = 0; k < n; ++k) {
    const double t = (n == 1) ? 1.0 : static_cast<double>(k) / (n - 1);
    nodes.push_back(R * std::exp(lo * (1.0 - t)));
  }
  nodes.back() = R;
  return nodes;
}

std::vector<double> Grid::uniform_nodes(double a, double b, int n) {
  std::vector<double> nodes;
  nodes.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double t = (n == 1) ? 0.0 : static_cast<double>(k) / (n - 1);
    nodes.push_back(a + (b - a) * t);
  }
  if (n > 1) nodes.back() = b;
  return nodes;
}

Grid Grid::sample(const std::function<double(double)>& f,
                  std::vector<double> nodes) {
  Grid g;
  g.values.reserve(nodes.size());
  for (double r : nodes) g.values.push_back(f(r));
  g.nodes = std::move(nodes);
  g.validate();
  return g;
}

void Grid::validate() const {
  if (nodes.size() < 2) fail(ErrorCode::DomainError, "grid needs >= 2 nodes");
  if (nodes.size() != values.size())
    fail(ErrorCode::DomainError, "grid nodes/values size mismatch");
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (!(nodes[i] > nodes[i - 1]))
      fail(ErrorCode::DomainError, "grid nodes not strictly increasing");
}

}  // namespace torsion
