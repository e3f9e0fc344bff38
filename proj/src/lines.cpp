#include "polite/lines.hpp"

#include <cmath>

#include "polite/error.hpp"
#include "polite/lie.hpp"

namespace polite::lines {

double OrientedLine::constraint_residual() const {
  return std::max(std::abs(u.norm() - 1.0), std::abs(u.dot(m)));
}

double OrientedLine::distance(const OrientedLine& other) const {
  return std::max((u - other.u).cwiseAbs().maxCoeff(), (m - other.m).cwiseAbs().maxCoeff());
}

nlohmann::json OrientedLine::to_json() const {
  return {{"u", std::vector<double>(u.data(), u.data() + u.size())},
          {"m", std::vector<double>(m.data(), m.data() + m.size())}};
}

OrientedLine OrientedLine::from_json(const nlohmann::json& doc) {
  const auto uv = doc.at("u").get<std::vector<double>>();
  const auto mv = doc.at("m").get<std::vector<double>>();
  if (uv.size() != mv.size()) throw DomainError("line u and m must have equal length");
  OrientedLine l{Eigen::Map<const Eigen::VectorXd>(uv.data(), static_cast<Eigen::Index>(uv.size())),
                 Eigen::Map<const Eigen::VectorXd>(mv.data(), static_cast<Eigen::Index>(mv.size()))};
  if (l.constraint_residual() > 1e-12) throw DomainError("line violates |u| = 1, u . m = 0");
  return l;
}

OrientedLine reduce_line(const Eigen::VectorXd& q, const Eigen::VectorXd& p) {
  if (q.size() != p.size()) throw DomainError("reduce_line: q and p differ in dimension");
  if (std::abs(p.norm() - 1.0) > kLevelSetTolerance) {
    throw DomainError("reduce_line: p is not on the level set |p| = 1");
  }
  OrientedLine l;
  l.u = p;
  l.m = q - q.dot(p) * p;
  return l;
}

OrientedLine act_se_n(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const OrientedLine& line) {
  const Eigen::Index n = line.u.size();
  if (a.rows() != n || a.cols() != n || b.size() != n) throw DomainError("act_se_n: dimension mismatch");
  const double orth = (a.transpose() * a - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (orth > kOrthogonalityTolerance) throw DomainError("act_se_n: A is not orthogonal");
  OrientedLine out;
  out.u = a * line.u;
  const Eigen::VectorXd point = a * line.m + b;
  out.m = point - point.dot(out.u) * out.u;
  return out;
}

std::vector<StabilizerSample> stabilizer_witness(const OrientedLine& line,
                                                 const std::vector<double>& grid) {
  const Eigen::Index n = line.u.size();
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  std::vector<StabilizerSample> out;
  for (double s : grid) {
    StabilizerSample smp;
    smp.s = s;
    smp.translation = s * line.u;
    smp.residual = act_se_n(eye, smp.translation, line).distance(line);
    out.push_back(std::move(smp));
  }
  return out;
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd> axis_rotation(const OrientedLine& line,
                                                          const Eigen::VectorXd& w1,
                                                          const Eigen::VectorXd& w2, double angle) {
  const Eigen::Index n = line.u.size();
  const double c = std::cos(angle), s = std::sin(angle);
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) +
                      (c - 1.0) * (w1 * w1.transpose() + w2 * w2.transpose()) +
                      s * (w2 * w1.transpose() - w1 * w2.transpose());
  Eigen::VectorXd b = line.m - a * line.m;
  return {a, b};
}

int quotient_chart_rank(const Eigen::VectorXd& q, const Eigen::VectorXd& p, double h) {
  const Eigen::Index n = q.size();
  // Chart on the level set: (q, p) -> (q + dq, normalize(p + dp)).
  auto image = [&](const Eigen::VectorXd& d) {
    const Eigen::VectorXd qq = q + d.head(n);
    const Eigen::VectorXd pp = (p + d.tail(n)).normalized();
    const OrientedLine l = reduce_line(qq, pp);
    Eigen::VectorXd out(2 * n);
    out << l.u, l.m;
    return out;
  };
  Eigen::MatrixXd jac(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < 2 * n; ++i) {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(2 * n);
    d[i] = h;
    jac.col(i) = (image(d) - image(-d)) / (2.0 * h);
  }
  return lie::numeric_rank(jac, 1e-6);
}

}  // namespace polite::lines
