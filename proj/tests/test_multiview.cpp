#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "swcca/datagen.hpp"
#include "swcca/multiview.hpp"
#include "swcca/rng.hpp"
#include "swcca/solver.hpp"

using namespace swcca;

namespace {

MultiviewProblem random_views(int seed, Eigen::Index n, std::vector<Eigen::Index> widths,
                              Eigen::Index k, Eigen::Index kw) {
  std::vector<DataMatrix> views;
  std::vector<PenaltySpec> penalties;
  for (std::size_t i = 0; i < widths.size(); ++i) {
    RandomStream s(seed, 20 + i);
    views.emplace_back(s.normal_matrix(n, widths[i]));
    penalties.emplace_back(HardCardinality{k});
  }
  return MultiviewProblem{std::move(views), std::move(penalties), HardCardinality{kw}};
}

CanonicalVector as_unit(Eigen::VectorXd v) { return CanonicalVector(v / v.norm()); }

// Best objective over all support triples with optimal directions: coarse
// angular grid over the two restricted loadings (w is closed-form given a
// support), refined by alternating normalization on the winning supports.
double exhaustive_multiview_oracle(const MultiviewProblem& problem, Eigen::Index k,
                                   Eigen::Index kw) {
  const Eigen::Index n = problem.views.front().n();
  std::vector<std::vector<Eigen::Index>> supports;  // over view width 3: C(3,2)
  const Eigen::Index width = problem.views.front().p();
  for (Eigen::Index a = 0; a < width; ++a)
    for (Eigen::Index b = a + 1; b < width; ++b) supports.push_back({a, b});
  std::vector<std::vector<Eigen::Index>> wsupports;
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = a + 1; b < n; ++b) wsupports.push_back({a, b});
  REQUIRE(k == 2);
  REQUIRE(kw == 2);

  const int grid = 40;
  std::vector<Eigen::Vector2d> dirs(grid);
  for (int g = 0; g < grid; ++g) {
    const double theta = M_PI * g / grid;
    dirs[static_cast<std::size_t>(g)] = {std::cos(theta), std::sin(theta)};
  }

  double best = -1e300;
  for (const auto& s1 : supports)
    for (const auto& s2 : supports)
      for (const auto& s3 : supports) {
        const std::array<const std::vector<Eigen::Index>*, 3> sel{&s1, &s2, &s3};
        std::array<Eigen::MatrixXd, 3> A;
        for (int m = 0; m < 3; ++m) {
          A[m].resize(n, 2);
          for (int c = 0; c < 2; ++c)
            A[m].col(c) = problem.views[static_cast<std::size_t>(m)].values().col(
                (*sel[static_cast<std::size_t>(m)])[static_cast<std::size_t>(c)]);
        }
        // Grid over the three 2-d directions; for each, w is the normalized
        // restriction of the product to the best w-support.
        double local = -1e300;
        std::array<Eigen::Vector2d, 3> local_dirs{};
        for (const auto& d1 : dirs)
          for (const auto& d2 : dirs) {
            const Eigen::VectorXd p12 = (A[0] * d1).cwiseProduct(A[1] * d2);
            for (const auto& d3 : dirs) {
              const Eigen::VectorXd prod = p12.cwiseProduct(A[2] * d3);
              for (const auto& ws : wsupports) {
                const double value =
                    std::sqrt(prod[ws[0]] * prod[ws[0]] + prod[ws[1]] * prod[ws[1]]);
                if (value > local) {
                  local = value;
                  local_dirs = {d1, d2, d3};
                }
              }
            }
          }
        // Polish with alternating normalization restricted to the supports.
        std::array<Eigen::Vector2d, 3> u = local_dirs;
        for (int iter = 0; iter < 400; ++iter) {
          double delta = 0.0;
          // w given u's
          Eigen::VectorXd prod = (A[0] * u[0]).cwiseProduct(A[1] * u[1]).cwiseProduct(A[2] * u[2]);
          double best_w = -1;
          std::vector<Eigen::Index> best_ws;
          for (const auto& ws : wsupports) {
            const double value =
                std::sqrt(prod[ws[0]] * prod[ws[0]] + prod[ws[1]] * prod[ws[1]]);
            if (value > best_w) {
              best_w = value;
              best_ws = ws;
            }
          }
          if (best_w <= 0) break;
          Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
          w[best_ws[0]] = prod[best_ws[0]] / best_w;
          w[best_ws[1]] = prod[best_ws[1]] / best_w;
          for (int m = 0; m < 3; ++m) {
            Eigen::VectorXd others = w;
            for (int j = 0; j < 3; ++j)
              if (j != m) others = others.cwiseProduct(A[j] * u[j]);
            Eigen::Vector2d z = A[m].transpose() * others;
            const double norm = z.norm();
            if (norm == 0) break;
            z /= norm;
            delta += (z - u[m]).squaredNorm();
            u[m] = z;
          }
          if (delta < 1e-24) break;
        }
        const Eigen::VectorXd prod =
            (A[0] * u[0]).cwiseProduct(A[1] * u[1]).cwiseProduct(A[2] * u[2]);
        for (const auto& ws : wsupports) {
          const double value =
              std::sqrt(prod[ws[0]] * prod[ws[0]] + prod[ws[1]] * prod[ws[1]]);
          local = std::max(local, value);
        }
        best = std::max(best, local);
      }
  return best;
}

}  // namespace

TEST_CASE("multiview objective with M = 2 equals the two-view objective") {
  MultiviewProblem problem = random_views(1, 6, {5, 4}, 2, 3);
  RandomStream rng(1, 40);
  const CanonicalVector u1 = as_unit(rng.normal_vector(5));
  const CanonicalVector u2 = as_unit(rng.normal_vector(4));
  const CanonicalVector w = as_unit(rng.normal_vector(6));
  const double multi = multiview_objective(problem, {u1, u2}, w);
  const double two = weighted_objective(problem.views[0], problem.views[1], u1, u2, w);
  CHECK(multi == doctest::Approx(two).epsilon(1e-12));
}

TEST_CASE("a zero projection in any view annihilates the objective") {
  MultiviewProblem problem = random_views(2, 5, {4, 3, 3}, 2, 2);
  RandomStream rng(2, 41);
  // Second view's matrix replaced by zeros-on-span trick: u2 orthogonal to
  // every row. Use a rank-deficient view instead: column of zeros.
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(5, 3);
  Z.col(1).setOnes();
  problem.views[1] = DataMatrix(Z);
  Eigen::VectorXd u2 = Eigen::VectorXd::Zero(3);
  u2[0] = 1.0;  // picks the zero column
  const CanonicalVector cu1 = as_unit(rng.normal_vector(4));
  const CanonicalVector cu2(u2);
  const CanonicalVector cu3 = as_unit(rng.normal_vector(3));
  const CanonicalVector w = as_unit(rng.normal_vector(5));
  CHECK(multiview_objective(problem, {cu1, cu2, cu3}, w) == 0.0);
}

TEST_CASE("three-view objective matches hand arithmetic") {
  Eigen::MatrixXd X1(3, 1), X2(3, 1), X3(3, 1);
  X1 << 1, 2, -1;
  X2 << 0.5, 1, 2;
  X3 << 2, -1, 0.25;
  MultiviewProblem problem{{DataMatrix(X1), DataMatrix(X2), DataMatrix(X3)},
                           {HardCardinality{1}, HardCardinality{1}, HardCardinality{1}},
                           HardCardinality{3}};
  Eigen::VectorXd one(1);
  one << 1;
  const CanonicalVector u(one);
  Eigen::VectorXd wv(3);
  wv << 1, 1, 1;
  const CanonicalVector w(as_unit(wv));
  // Products per sample: (1*0.5*2, 2*1*(-1), (-1)*2*0.25) = (1, -2, -0.5).
  const double expected = (1.0 - 2.0 - 0.5) / std::sqrt(3.0);
  CHECK(multiview_objective(problem, {u, u, u}, w) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("fit_multiview with M = 2 matches the two-view solver per iterate") {
  MultiviewProblem mv = random_views(5, 7, {6, 5}, 2, 3);
  SwccaProblem two{mv.views[0], mv.views[1], HardCardinality{2}, HardCardinality{2},
                   HardCardinality{3}};
  for (int t : {1, 2, 3, 6, 12}) {
    SolverConfig config;
    config.seed = 5;
    config.max_iters = t;
    const MultiviewFit multi = fit_multiview(mv, config);
    const SwccaFit pair = fit(two, config);
    CHECK((multi.us[0].entries() - pair.u.entries()).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((multi.us[1].entries() - pair.v.entries()).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((multi.w.entries() - pair.w.entries()).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(multi.iterations == pair.iterations);
  }
}

TEST_CASE("noiseless three-view planted model is recovered exactly") {
  const Eigen::Index n = 12;
  Eigen::VectorXd w_true = Eigen::VectorXd::Zero(n);
  w_true.head(4).setOnes();
  std::vector<Eigen::VectorXd> u_true;
  std::vector<DataMatrix> views;
  std::vector<PenaltySpec> penalties;
  RandomStream rng(9, 0);
  const std::vector<Eigen::Index> widths{7, 6, 5};
  for (std::size_t i = 0; i < widths.size(); ++i) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(widths[i]);
    for (Eigen::Index j = 0; j < 3; ++j) u[static_cast<Eigen::Index>(i) + j] = 1.0 + rng.uniform();
    u_true.push_back(u);
    views.emplace_back((w_true * u.transpose()).eval());
    penalties.emplace_back(HardCardinality{3});
  }
  MultiviewProblem problem{std::move(views), std::move(penalties), HardCardinality{4}};
  SolverConfig config;
  config.seed = 9;
  const MultiviewFit result = fit_multiview(problem, config);
  for (std::size_t i = 0; i < 3; ++i) {
    std::vector<Eigen::Index> truth;
    for (Eigen::Index j = 0; j < u_true[i].size(); ++j)
      if (u_true[i][j] != 0.0) truth.push_back(j);
    CHECK(support_recovery(result.us[i], truth).f1 == doctest::Approx(1.0));
  }
  std::vector<Eigen::Index> w_support{0, 1, 2, 3};
  CHECK(support_recovery(result.w, w_support).f1 == doctest::Approx(1.0));
}

TEST_CASE("objective trace is monotone and iterates feasible") {
  for (int seed = 0; seed < 8; ++seed) {
    MultiviewProblem problem = random_views(seed + 20, 8, {5, 4, 6}, 2, 3);
    SolverConfig config;
    config.seed = static_cast<std::uint64_t>(seed);
    const MultiviewFit result = fit_multiview(problem, config);
    for (std::size_t i = 1; i < result.objective_trace.size(); ++i)
      CHECK(result.objective_trace[i] >= result.objective_trace[i - 1] - 1e-9);
    for (const auto& u : result.us) {
      CHECK(std::abs(u.entries().norm() - 1.0) < 1e-9);
      CHECK(u.cardinality() <= 2);
    }
    CHECK(result.w.cardinality() <= 3);
  }
}

TEST_CASE("permuting views permutes the outputs under matching supplied init") {
  // The sweep updates loadings in positional order, so only the converged
  // solution is order-free; use a planted problem with a dominant optimum
  // and start both orderings from identically permuted perturbed inits.
  const Eigen::Index n = 10;
  Eigen::VectorXd w_true = Eigen::VectorXd::Zero(n);
  w_true.head(3).setOnes();
  RandomStream rng(33, 50);
  const std::vector<Eigen::Index> widths{5, 4, 3};
  std::vector<DataMatrix> views;
  std::vector<PenaltySpec> penalties;
  MultiviewInit init;
  for (std::size_t i = 0; i < widths.size(); ++i) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(widths[i]);
    const Eigen::Index at = static_cast<Eigen::Index>(i) % (widths[i] - 1);
    u[at] = 2.0;
    u[at + 1] = -1.0;
    views.emplace_back(w_true * u.transpose() + 0.01 * rng.normal_matrix(n, widths[i]));
    penalties.emplace_back(HardCardinality{2});
    init.us.push_back(u + 0.1 * rng.normal_vector(widths[i]));
  }
  init.w = w_true + 0.1 * rng.normal_vector(n);
  MultiviewProblem problem{views, penalties, HardCardinality{3}};
  SolverConfig config;
  config.init = InitPolicy::kSupplied;
  config.delta_tol = 1e-18;
  config.max_iters = 5000;
  const MultiviewFit forward = fit_multiview(problem, config, init);

  MultiviewProblem permuted{{problem.views[2], problem.views[0], problem.views[1]},
                            {problem.penalties[2], problem.penalties[0], problem.penalties[1]},
                            problem.penalty_w};
  MultiviewInit permuted_init;
  permuted_init.us = {init.us[2], init.us[0], init.us[1]};
  permuted_init.w = init.w;
  const MultiviewFit back = fit_multiview(permuted, config, permuted_init);
  // Loadings follow their views, not their positions.
  CHECK((forward.us[2].entries() - back.us[0].entries()).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((forward.us[0].entries() - back.us[1].entries()).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((forward.us[1].entries() - back.us[2].entries()).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((forward.w.entries() - back.w.entries()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("small three-view instances reach the exhaustive oracle often") {
  int hits = 0;
  const int trials = 50;
  for (int seed = 0; seed < trials; ++seed) {
    MultiviewProblem problem = random_views(seed + 200, 4, {3, 3, 3}, 2, 2);
    const double oracle = exhaustive_multiview_oracle(problem, 2, 2);
    SolverConfig config;
    config.seed = static_cast<std::uint64_t>(seed);
    config.restarts = 5;
    config.delta_tol = 1e-12;
    config.max_iters = 5000;
    const MultiviewFit result = fit_multiview(problem, config);
    CHECK(result.objective_trace.back() <= oracle + 1e-9);
    if (result.objective_trace.back() >= oracle - 1e-9) ++hits;
  }
  CHECK(hits >= 30);  // 60% of 50
}

TEST_CASE("validation rejects malformed multiview problems") {
  MultiviewProblem problem = random_views(40, 5, {4, 3}, 2, 2);
  problem.views[1] = DataMatrix(Eigen::MatrixXd::Identity(6, 3));
  SolverConfig config;
  CHECK_THROWS_AS(fit_multiview(problem, config), DimensionMismatch);

  MultiviewProblem single = random_views(41, 5, {4}, 2, 2);
  CHECK_THROWS_AS(fit_multiview(single, config), InvalidArgument);
}
