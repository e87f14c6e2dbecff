#include <Eigen/Dense>
#include <cmath>

#include "doctest.h"
#include "swcca/penalties.hpp"
#include "swcca/projections.hpp"
#include "swcca/rng.hpp"

using namespace swcca;

namespace {

SwccaProblem lasso_problem(int seed, double lu, double lv, double lw) {
  RandomStream xs(seed, 10), ys(seed, 11);
  return SwccaProblem{DataMatrix(xs.normal_matrix(8, 6)), DataMatrix(ys.normal_matrix(8, 5)),
                      Lasso{lu}, Lasso{lv}, Lasso{lw}};
}

std::vector<std::vector<Eigen::Index>> singleton_groups(Eigen::Index len) {
  std::vector<std::vector<Eigen::Index>> groups;
  for (Eigen::Index i = 0; i < len; ++i) groups.push_back({i});
  return groups;
}

// Plain normalization power iteration with the same update order and
// initialization streams; the lambda = 0 reference.
void reference_power_sweeps(const SwccaProblem& problem, std::uint64_t seed, int sweeps,
                            Eigen::VectorXd& u, Eigen::VectorXd& v, Eigen::VectorXd& w) {
  RandomStream su(seed, 0), sv(seed, 1), sw(seed, 2);
  u = su.normal_vector(problem.X.p());
  u /= u.norm();
  v = sv.normal_vector(problem.Y.p());
  v /= v.norm();
  w = sw.normal_vector(problem.X.n());
  w /= w.norm();
  for (int t = 0; t < sweeps; ++t) {
    u = problem.X.values().transpose() * ((problem.Y.values() * v).cwiseProduct(w));
    u /= u.norm();
    v = problem.Y.values().transpose() * ((problem.X.values() * u).cwiseProduct(w));
    v /= v.norm();
    w = (problem.X.values() * u).cwiseProduct(problem.Y.values() * v);
    w /= w.norm();
  }
}

}  // namespace

TEST_CASE("fit_l1 with zero lambdas is plain normalization power iteration") {
  SwccaProblem problem = lasso_problem(1, 0.0, 0.0, 0.0);
  SolverConfig config;
  config.seed = 1;
  for (int sweeps : {1, 2, 4, 7}) {
    config.max_iters = sweeps;
    const SwccaFit result = fit_l1(problem, config);
    Eigen::VectorXd u, v, w;
    reference_power_sweeps(problem, 1, sweeps, u, v, w);
    CHECK((result.u.entries() - u).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((result.v.entries() - v).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((result.w.entries() - w).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("fit_l1 with a huge lambda degenerates before any sweep finishes") {
  // Initialization projects the random draw through the same operator, so a
  // lambda above every |z| dies at sweep 0; an init that survives dies at the
  // first u-update instead. Both surface as ZeroProjection.
  SwccaProblem problem = lasso_problem(2, 1e6, 0.1, 0.1);
  SolverConfig config;
  config.seed = 2;
  try {
    fit_l1(problem, config);
    FAIL("expected ZeroProjection");
  } catch (const ZeroProjection& e) {
    CHECK(e.iteration() <= 1);
  }

  // Supply a surviving u0 by hand (entries large enough to outlive lambda at
  // init) and make only the sweep's z_u shrink to nothing.
  SwccaProblem mixed = lasso_problem(3, 0.0, 0.1, 0.1);
  const double z_cap = 10.0 * (mixed.X.values().cwiseAbs().sum() *
                               mixed.Y.values().cwiseAbs().sum());
  mixed.penalty_u = Lasso{z_cap};
  SolverConfig supplied;
  supplied.init = InitPolicy::kSupplied;
  supplied.u0 = Eigen::VectorXd::Constant(6, 2.0 * z_cap);
  RandomStream rng(3, 9);
  supplied.v0 = rng.normal_vector(5);
  supplied.w0 = rng.normal_vector(8);
  try {
    fit_l1(mixed, supplied);
    FAIL("expected ZeroProjection");
  } catch (const ZeroProjection& e) {
    CHECK(e.iteration() == 1);
    CHECK(std::string(e.what()).find("u-update") != std::string::npos);
  }
}

TEST_CASE("single soft-threshold update matches grid search on the sphere") {
  // Fixed z in R^3, lambda = 0.4: compare the closed-form update against a
  // dense grid over the unit sphere maximizing u.z - lambda*||u||_1.
  Eigen::VectorXd z(3);
  z << 1.2, -0.7, 0.25;
  const double lambda = 0.4;
  const CanonicalVector closed = soft_threshold_project(z, lambda);

  double best_value = -1e300;
  Eigen::VectorXd best_u(3);
  const int grid = 600;
  for (int i = 0; i <= grid; ++i) {
    const double theta = M_PI * i / grid;
    for (int j = 0; j < 2 * grid; ++j) {
      const double phi = M_PI * j / grid;
      Eigen::VectorXd u(3);
      u << std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
          std::cos(theta);
      const double value = u.dot(z) - lambda * u.lpNorm<1>();
      if (value > best_value) {
        best_value = value;
        best_u = u;
      }
    }
  }
  const double closed_value =
      closed.entries().dot(z) - lambda * closed.entries().lpNorm<1>();
  CHECK(closed_value >= best_value - 1e-6);
  // Angular agreement within the grid resolution.
  const double cosine = closed.entries().dot(best_u);
  CHECK(std::acos(std::min(1.0, cosine)) < 1e-2);
}

TEST_CASE("penalized objective trace is monotone for fit_l1") {
  for (int seed = 0; seed < 10; ++seed) {
    SwccaProblem problem = lasso_problem(seed + 10, 0.3, 0.2, 0.25);
    SolverConfig config;
    config.seed = static_cast<std::uint64_t>(seed);
    const SwccaFit result = fit_l1(problem, config);
    for (std::size_t i = 1; i < result.objective_trace.size(); ++i)
      CHECK(result.objective_trace[i] >= result.objective_trace[i - 1] - 1e-9);
    CHECK(std::abs(result.u.entries().norm() - 1.0) < 1e-9);
    CHECK(std::abs(result.v.entries().norm() - 1.0) < 1e-9);
    CHECK(std::abs(result.w.entries().norm() - 1.0) < 1e-9);
  }
}

TEST_CASE("larger lambda weakly decreases first-iterate cardinality") {
  SwccaProblem base = lasso_problem(30, 0.0, 0.1, 0.1);
  Eigen::Index prev_card = base.X.p() + 1;
  for (double lambda : {0.0, 0.2, 0.5, 1.0, 2.0}) {
    SwccaProblem problem = base;
    problem.penalty_u = Lasso{lambda};
    SolverConfig config;
    config.seed = 30;
    config.max_iters = 1;
    try {
      const SwccaFit result = fit_l1(problem, config);
      CHECK(result.u.cardinality() <= prev_card);
      prev_card = result.u.cardinality();
    } catch (const ZeroProjection&) {
      prev_card = 0;  // total shrinkage; still monotone
    }
  }
}

TEST_CASE("fit_group with singleton groups equals fit_l1") {
  for (int seed = 0; seed < 5; ++seed) {
    SwccaProblem l1 = lasso_problem(seed + 40, 0.3, 0.25, 0.2);
    SwccaProblem grouped = l1;
    grouped.penalty_u = GroupLasso{0.3, singleton_groups(6)};
    grouped.penalty_v = GroupLasso{0.25, singleton_groups(5)};
    grouped.penalty_w = GroupLasso{0.2, singleton_groups(8)};
    SolverConfig config;
    config.seed = static_cast<std::uint64_t>(seed + 40);
    const SwccaFit a = fit_l1(l1, config);
    const SwccaFit b = fit_group(grouped, config);
    CHECK(a.iterations == b.iterations);
    CHECK((a.u.entries() - b.u.entries()).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((a.v.entries() - b.v.entries()).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((a.w.entries() - b.w.entries()).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("fit_group with one all-covering group and lambda 0 is unpenalized") {
  SwccaProblem problem = lasso_problem(50, 0, 0, 0);
  SwccaProblem grouped = problem;
  grouped.penalty_u = GroupLasso{0.0, {{0, 1, 2, 3, 4, 5}}};
  grouped.penalty_v = GroupLasso{0.0, {{0, 1, 2, 3, 4}}};
  grouped.penalty_w = GroupLasso{0.0, {{0, 1, 2, 3, 4, 5, 6, 7}}};
  SolverConfig config;
  config.seed = 50;
  config.max_iters = 5;
  const SwccaFit a = fit_l1(problem, config);
  const SwccaFit b = fit_group(grouped, config);
  CHECK((a.u.entries() - b.u.entries()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("two-group toy: survivor set matches the hand-computed condition") {
  // z_u at the first update is fixed by supplying v, w and running one sweep
  // on a problem whose u-groups straddle lambda.
  RandomStream xs(60, 10), ys(60, 11);
  const Eigen::MatrixXd X = xs.normal_matrix(6, 4);
  const Eigen::MatrixXd Y = ys.normal_matrix(6, 3);
  SwccaProblem problem{DataMatrix(X), DataMatrix(Y),
                       GroupLasso{0.0, {{0, 1}, {2, 3}}},
                       GroupLasso{0.0, {{0, 1, 2}}},
                       GroupLasso{0.0, {{0, 1, 2, 3, 4, 5}}}};
  RandomStream init(60, 12);
  Eigen::VectorXd v0 = init.normal_vector(3);
  Eigen::VectorXd w0 = init.normal_vector(6);
  v0 /= v0.norm();
  w0 /= w0.norm();
  const Eigen::VectorXd z_u = X.transpose() * ((Y * v0).cwiseProduct(w0));
  const double g1 = std::sqrt(z_u[0] * z_u[0] + z_u[1] * z_u[1]);
  const double g2 = std::sqrt(z_u[2] * z_u[2] + z_u[3] * z_u[3]);
  const double lambda = 0.5 * (g1 + g2);  // strictly between the two norms
  problem.penalty_u = GroupLasso{lambda, {{0, 1}, {2, 3}}};

  SolverConfig config;
  config.init = InitPolicy::kSupplied;
  config.u0 = Eigen::VectorXd::Ones(4);
  config.v0 = v0;
  config.w0 = w0;
  config.max_iters = 1;
  const SwccaFit result = fit_group(problem, config);
  const bool first_survives = g1 > g2;
  CHECK((result.u[0] != 0.0) == first_survives);
  CHECK((result.u[1] != 0.0) == first_survives);
  CHECK((result.u[2] != 0.0) == !first_survives);
  CHECK((result.u[3] != 0.0) == !first_survives);
}

TEST_CASE("group supports are all-or-nothing at the final iterate") {
  for (int seed = 0; seed < 5; ++seed) {
    RandomStream xs(seed + 70, 10), ys(seed + 70, 11);
    SwccaProblem problem{DataMatrix(xs.normal_matrix(9, 8)),
                         DataMatrix(ys.normal_matrix(9, 6)),
                         GroupLasso{0.6, {{0, 1, 2, 3}, {4, 5}, {6, 7}}},
                         GroupLasso{0.5, {{0, 1, 2}, {3, 4, 5}}},
                         GroupLasso{0.4, {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}}}};
    SolverConfig config;
    config.seed = static_cast<std::uint64_t>(seed + 70);
    SwccaFit result = fit_group(problem, config);
    const auto check_groups = [](const CanonicalVector& x,
                                 const std::vector<std::vector<Eigen::Index>>& groups) {
      for (const auto& group : groups) {
        std::size_t nonzero = 0;
        for (Eigen::Index i : group)
          if (x[i] != 0.0) ++nonzero;
        CHECK((nonzero == 0 || nonzero == group.size()));
      }
    };
    check_groups(result.u, std::get<GroupLasso>(problem.penalty_u).groups);
    check_groups(result.v, std::get<GroupLasso>(problem.penalty_v).groups);
    check_groups(result.w, std::get<GroupLasso>(problem.penalty_w).groups);
  }
}

TEST_CASE("fit_l1 and fit_group reject wrong penalty kinds") {
  RandomStream xs(80, 10), ys(80, 11);
  SwccaProblem problem{DataMatrix(xs.normal_matrix(5, 4)),
                       DataMatrix(ys.normal_matrix(5, 3)), HardCardinality{2},
                       Lasso{0.1}, Lasso{0.1}};
  SolverConfig config;
  CHECK_THROWS_AS(fit_l1(problem, config), InvalidArgument);
  CHECK_THROWS_AS(fit_group(problem, config), InvalidArgument);
}

TEST_CASE("mixed penalties run through the generic loop") {
  RandomStream xs(81, 10), ys(81, 11);
  SwccaProblem problem{DataMatrix(xs.normal_matrix(7, 5)),
                       DataMatrix(ys.normal_matrix(7, 4)), HardCardinality{2},
                       Lasso{0.2}, GroupLasso{0.3, {{0, 1, 2}, {3, 4, 5, 6}}}};
  SolverConfig config;
  config.seed = 81;
  const SwccaFit result = fit(problem, config);
  CHECK(result.u.cardinality() <= 2);
  for (std::size_t i = 1; i < result.objective_trace.size(); ++i)
    CHECK(result.objective_trace[i] >= result.objective_trace[i - 1] - 1e-9);
}
