#include <doctest.h>

#include <cmath>

#include "toroflow/geometry.hpp"
#include "toroflow/sampling.hpp"

using namespace toroflow;

namespace {

ChartFamily sin2_chart(double eps) {
  return ChartFamily::f_perturbed(1.0, 1.0, eps, FSpec::sin2());
}

std::vector<ChartFamily> all_families() {
  std::vector<ChartFamily> v;
  v.push_back(ChartFamily::axisymmetric(1.0, 1.0));
  v.push_back(sin2_chart(0.3));
  v.push_back(ChartFamily::f_perturbed(1.0, 1.0, 0.7, FSpec::sin2of3()));
  v.push_back(ChartFamily::general_cc1(1.0, 1.0, 0.5, 0.05, 0.005,
                                       FSpec::sin2of3(), DzGPair::example()));
  return v;
}

DomainSpec shell_for(const ChartFamily& chart) {
  return chart.kind() == ChartKind::GeneralCC1 ? DomainSpec{0.8, 0.95}
                                               : DomainSpec{0.6, 0.95};
}

}  // namespace

TEST_CASE("jet evaluation requires psi strictly below psi0") {
  const ChartFamily chart = ChartFamily::axisymmetric(1.0, 1.0);
  CHECK_THROWS_AS(jet_eval(chart, {1.0, 0.0, 0.0}), std::domain_error);
  CHECK_NOTHROW(jet_eval(chart, {1.0 - 1e-9, 0.0, 0.0}));
}

TEST_CASE("theta tangent column matches the hand-coded row") {
  const ChartFamily chart = sin2_chart(0.3);
  const Coords c{0.95, kTwoPi / 8, kTwoPi / 6};
  const Jet2 jet = jet_eval(chart, c);
  // for the planar-offset family the deltas are theta-independent, so the
  // theta column is (-s sin t cos z, -s sin t sin z, s cos t)
  const double s = std::sqrt(1.0 - c.psi);
  CHECK(jet.d1(0, kTheta) ==
        doctest::Approx(-s * std::sin(c.theta) * std::cos(c.zeta))
            .epsilon(1e-15));
  CHECK(jet.d1(1, kTheta) ==
        doctest::Approx(-s * std::sin(c.theta) * std::sin(c.zeta))
            .epsilon(1e-15));
  CHECK(jet.d1(2, kTheta) ==
        doctest::Approx(s * std::cos(c.theta)).epsilon(1e-15));
}

TEST_CASE("second derivatives are exactly symmetric") {
  for (const ChartFamily& chart : all_families()) {
    for (const Coords& c : sample_shell(chart, shell_for(chart), 10, 11, 0.02)) {
      const Jet2 jet = jet_eval(chart, c);
      for (int a = 0; a < 3; ++a)
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            CHECK(jet.d2[a](i, j) == jet.d2[a](j, i));
    }
  }
}

TEST_CASE("metric values and symmetry") {
  const ChartFamily chart = ChartFamily::axisymmetric(1.0, 1.0);
  SUBCASE("orthogonality of zeta to the poloidal plane") {
    for (const Coords& c : sample_shell(chart, {0.6, 0.95}, 20, 5, 0.02)) {
      const MetricAtPoint m = metric_at(chart, c);
      CHECK(std::abs(m.g(kTheta, kZeta)) < 1e-15);
      CHECK(std::abs(m.g(kPsi, kZeta)) < 1e-15);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(m.g(i, j) == m.g(j, i));
    }
  }
  SUBCASE("poloidal speed squared is psi0 - psi") {
    const MetricAtPoint m = metric_at(chart, {0.95, 0.0, 0.0});
    CHECK(m.g(kTheta, kTheta) == doctest::Approx(0.05).epsilon(1e-14));
  }
}

TEST_CASE("metric derivatives match finite differences") {
  const ChartFamily chart = sin2_chart(0.3);
  const double h = 1e-5;
  for (const Coords& c : sample_shell(chart, {0.6, 0.95}, 15, 21, 0.05)) {
    const MetricAtPoint m = metric_at(chart, c);
    for (int k = 0; k < 3; ++k) {
      auto shifted = [&](double t) {
        Coords q = c;
        (k == 0 ? q.psi : (k == 1 ? q.theta : q.zeta)) = t;
        return metric_at(chart, q).g;
      };
      const double t0 = (k == 0 ? c.psi : (k == 1 ? c.theta : c.zeta));
      const Eigen::Matrix3d fd =
          (-shifted(t0 + 2 * h) + 8 * shifted(t0 + h) - 8 * shifted(t0 - h) +
           shifted(t0 - 2 * h)) /
          (12 * h);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          const double scale = std::max(1.0, std::abs(m.dg[k](i, j)));
          CHECK(std::abs(m.dg[k](i, j) - fd(i, j)) / scale < 1e-7);
        }
    }
  }
}

TEST_CASE("christoffel symbols") {
  SUBCASE("euclidean metric gives vanishing symbols") {
    MetricAtPoint m;
    m.g = Eigen::Matrix3d::Identity();
    for (auto& d : m.dg) d.setZero();
    const auto [first, second] = christoffel(m);
    for (int i = 0; i < 3; ++i) {
      CHECK(first.G[i].norm() == 0.0);
      CHECK(second.G[i].norm() == 0.0);
    }
  }
  SUBCASE("singular metric is rejected") {
    MetricAtPoint m;
    m.g = Eigen::Vector3d(1.0, 1.0, 0.0).asDiagonal();
    for (auto& d : m.dg) d.setZero();
    CHECK_THROWS_AS(christoffel(m), std::domain_error);
  }
  SUBCASE("embedding identity against the jet") {
    for (const ChartFamily& chart : all_families()) {
      for (const Coords& c :
           sample_shell(chart, shell_for(chart), 25, 31, 0.05)) {
        const Jet2 jet = jet_eval(chart, c);
        const auto [first, second] = christoffel(metric_from_jet(jet));
        for (int k = 0; k < 3; ++k)
          for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
              double dot = 0.0;
              for (int a = 0; a < 3; ++a)
                dot += jet.d2[a](i, j) * jet.d1(a, k);
              const double scale = std::max(1.0, std::abs(dot));
              CHECK(std::abs(first.G[k](i, j) - dot) / scale < 1e-10);
            }
      }
    }
  }
  SUBCASE("axisymmetric poloidal pair") {
    const auto m = metric_at(ChartFamily::axisymmetric(1.0, 1.0), {0.95, 0.0, 0.0});
    const auto [first, second] = christoffel(m);
    CHECK(first.G[kPsi](kTheta, kTheta) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(first.G[kTheta](kPsi, kTheta) ==
          doctest::Approx(-0.5).epsilon(1e-13));
    CHECK(first.G[kPsi](kTheta, kTheta) - first.G[kTheta](kPsi, kTheta) ==
          doctest::Approx(1.0).epsilon(1e-13));
    // second kind stays symmetric in its lower pair
    for (int i = 0; i < 3; ++i)
      CHECK((second.G[i] - second.G[i].transpose()).norm() < 1e-13);
  }
}

TEST_CASE("jacobian determinant consistency") {
  SUBCASE("det g equals the squared determinant") {
    for (const ChartFamily& chart : all_families()) {
      for (const Coords& c :
           sample_shell(chart, shell_for(chart), 30, 41, 0.2)) {
        const Jet2 jet = jet_eval(chart, c);
        const double detg = metric_from_jet(jet).g.determinant();
        const double detd = jet.d1.determinant();
        CHECK(std::abs(detg - detd * detd) / (detd * detd) < 1e-12);
      }
    }
  }
  SUBCASE("numeric value checks the closed form and the domain") {
    const ChartFamily chart = sin2_chart(0.8);
    const Coords inside{0.95, 0.0, 0.0};
    CHECK(jacobian_det(chart, inside) ==
          doctest::Approx(jacobian_det_closed_form(chart, inside))
              .epsilon(1e-12));
    CHECK_THROWS_AS(jacobian_det(chart, Coords{0.0, kTwoPi / 2, kTwoPi / 4}),
                    std::domain_error);
  }
}

TEST_CASE("positive definiteness") {
  CHECK(is_positive_definite(Eigen::Matrix3d::Identity()));
  Eigen::Matrix3d neg = Eigen::Matrix3d::Identity();
  neg(2, 2) = -1e-3;
  CHECK_FALSE(is_positive_definite(neg));
  for (const ChartFamily& chart : all_families())
    for (const Coords& c : sample_shell(chart, shell_for(chart), 15, 51, 0.02))
      CHECK(is_positive_definite(metric_at(chart, c).g));
}

TEST_CASE("dual basis inverts the tangent frame") {
  const ChartFamily chart = sin2_chart(0.3);
  const Jet2 jet = jet_eval(chart, {0.85, 1.1, 2.6});
  const Eigen::Matrix3d prod = dual_basis(jet) * jet.d1;
  CHECK((prod - Eigen::Matrix3d::Identity()).norm() < 1e-13);
}
