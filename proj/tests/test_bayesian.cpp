#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "cliquenash/bayesian.hpp"
#include "test_util.hpp"

using namespace cliquenash;

namespace {

// Single-type Bayesian wrapper of a bimatrix game.
BayesianGame single_type(const BimatrixGame& g) {
  return lift_uniform_bayes(g, 1);
}

std::vector<double> flat_tensor(const BimatrixGame& g) {
  std::vector<double> u;
  for (int i = 0; i < g.rows(); ++i) {
    for (int j = 0; j < g.cols(); ++j) u.push_back(g.m_row()(i, j));
  }
  return u;
}

}  // namespace

TEST_CASE("bayesian game validation") {
  CHECK_THROWS_AS(BayesianGame(1, 1, 2, 2, Matrix(1, 1, 0.5), std::vector<double>(4, 0.0),
                               std::vector<double>(4, 0.0)),
                  std::invalid_argument);  // distribution sums to 0.5
  CHECK_THROWS_AS(BayesianGame(1, 1, 2, 2, Matrix(1, 1, 1.0), std::vector<double>(3, 0.0),
                               std::vector<double>(4, 0.0)),
                  std::invalid_argument);  // tensor size mismatch
  const BayesianGame g = BayesianGame::uniform_types(2, 2, 2, std::vector<double>(16, 0.5),
                                                     std::vector<double>(16, 0.5));
  CHECK(g.uniform());
}

TEST_CASE("bne_regret matches bimatrix regret for a single type") {
  const BimatrixGame mp = testutil::matching_pennies();
  const BayesianGame bg = single_type(mp);
  const PureBayesProfile p{{0}, {0}};  // both play the first strategy
  const BneCertificate cert = bne_regret(bg, p);
  const RegretCertificate flat = regret(mp, MixedProfile::pure(0, 2, 0, 2));
  CHECK(cert.regret_row[0] == doctest::Approx(flat.regret_row));
  CHECK(cert.regret_col[0] == doctest::Approx(flat.regret_col));
  CHECK(cert.max_regret == doctest::Approx(1.0));
}

TEST_CASE("constant payoffs have zero regret everywhere") {
  const std::size_t sz = 3 * 3 * 2 * 2;
  const BayesianGame g = BayesianGame::uniform_types(2, 3, 3,
                                                     std::vector<double>(sz, 0.3),
                                                     std::vector<double>(sz, 0.3));
  const PureBayesProfile p{{1, 2}, {0, 1}};
  const BneCertificate cert = bne_regret(g, p);
  CHECK(cert.max_regret == 0.0);
  CHECK(is_eps_bne(g, p, 0.0));
}

TEST_CASE("zero-marginal types carry zero regret") {
  // Second row type never occurs; whatever it plays must not matter.
  Matrix dist(2, 2, 0.0);
  dist(0, 0) = 0.5;
  dist(0, 1) = 0.5;
  const std::size_t sz = 2 * 2 * 2 * 2;
  std::vector<double> u(sz, 0.0);
  for (std::size_t i = 0; i < sz; ++i) u[i] = (i * 7 % 10) / 10.0;
  const BayesianGame g(2, 2, 2, 2, dist, u, u);
  const PureBayesProfile p{{0, 1}, {0, 0}};
  const BneCertificate cert = bne_regret(g, p);
  CHECK(cert.regret_row[1] == 0.0);
  CHECK(cert.p_row[1] == 0.0);
}

TEST_CASE("bayesian game JSON round-trip") {
  const BayesianGame g = build_coloring_hardness_game(octahedron());
  const BayesianGame back = BayesianGame::from_json(g.to_json());
  CHECK(back.k_row() == g.k_row());
  CHECK(back.n_row() == g.n_row());
  CHECK(back.uniform() == g.uniform());
  const PureBayesProfile p{{0, 0, 2, 2, 4, 4}, {0, 0, 2, 2, 4, 4}};
  CHECK(bne_regret(back, p).max_regret == bne_regret(g, p).max_regret);

  const PureBayesProfile q = PureBayesProfile::from_json(p.to_json());
  CHECK(q.s_row == p.s_row);
}

TEST_CASE("brute force: no pure equilibrium in matching pennies") {
  const BayesianGame bg = single_type(testutil::matching_pennies());
  const BruteForceResult r = brute_force_pure_bne(bg, 0.0);
  CHECK(r.status == BneSearchStatus::NoneExists);
}

TEST_CASE("brute force: constant game returns the lexicographically first profile") {
  const std::size_t sz = 3 * 3 * 2 * 2;
  const BayesianGame g = BayesianGame::uniform_types(2, 3, 3,
                                                     std::vector<double>(sz, 0.4),
                                                     std::vector<double>(sz, 0.4));
  const BruteForceResult r = brute_force_pure_bne(g, 0.0);
  REQUIRE(r.status == BneSearchStatus::Found);
  CHECK(r.profile->s_row == std::vector<int>{0, 0});
  CHECK(r.profile->s_col == std::vector<int>{0, 0});
}

TEST_CASE("brute force respects its budget precheck") {
  const BayesianGame g = build_coloring_hardness_game(octahedron());
  CHECK(brute_force_pure_bne(g, 0.0, 1000.0).status == BneSearchStatus::BudgetExceeded);
}

TEST_CASE("brute force finds the octahedron coloring equilibrium") {
  const BayesianGame g = build_coloring_hardness_game(octahedron());
  const BruteForceResult r = brute_force_pure_bne(g, 0.0, 1e10);
  REQUIRE(r.status == BneSearchStatus::Found);
  // First equilibrium in lexicographic order: the smallest proper
  // 3-coloring (parts get colors 1,2,3) with all coins 0, mirrored.
  CHECK(r.profile->s_row == std::vector<int>{0, 0, 2, 2, 4, 4});
  CHECK(r.profile->s_col == std::vector<int>{0, 0, 2, 2, 4, 4});

  const BneCertificate cert = bne_regret(g, *r.profile);
  CHECK(cert.max_regret <= 1e-12);
  for (double p : cert.p_row) CHECK(p == doctest::Approx(1.0));
  for (double p : cert.p_col) CHECK(p == doctest::Approx(1.0));

  // The returned coloring is proper and consistent.
  const PlantedGraph oct = octahedron();
  for (int u = 0; u < 6; ++u) {
    CHECK(gadget_color((*r.profile).s_row[u]) == gadget_color((*r.profile).s_col[u]));
    for (int v = u + 1; v < 6; ++v) {
      if (oct.adjacent(u, v)) {
        CHECK(gadget_color((*r.profile).s_row[u]) != gadget_color((*r.profile).s_row[v]));
      }
    }
  }
}

TEST_CASE("a proper-coloring attempt on K5 has regret at least 0.004") {
  const BayesianGame g = build_coloring_hardness_game(complete_graph(5));
  // Three colors cannot properly color K5; this attempt double-books
  // colors 1..3 and must leave some type with a profitable deviation.
  const PureBayesProfile attempt{{0, 0, 2, 2, 4}, {0, 0, 2, 2, 4}};
  const BneCertificate cert = bne_regret(g, attempt);
  CHECK(cert.max_regret >= kColoringGadgetEps - 1e-12);

  // Independent check: recompute the best deviation gain of either
  // player by hand. With all coins equal the stakes sit with the row
  // player, so the profitable flips belong to the column player.
  double best_gain = 0.0;
  for (int t = 0; t < 5; ++t) {
    double played_row = 0.0, played_col = 0.0;
    std::vector<double> dev_row(6, 0.0), dev_col(6, 0.0);
    for (int u = 0; u < 5; ++u) {
      const double w = g.type_dist()(t, u);
      if (w <= 0.0) continue;
      played_row += w * g.u_row(attempt.s_row[t], attempt.s_col[u], t, u);
      played_col += w * g.u_col(attempt.s_row[u], attempt.s_col[t], u, t);
      for (int a = 0; a < 6; ++a) {
        dev_row[a] += w * g.u_row(a, attempt.s_col[u], t, u);
        dev_col[a] += w * g.u_col(attempt.s_row[u], a, u, t);
      }
    }
    for (int a = 0; a < 6; ++a) {
      best_gain = std::max(best_gain, (dev_row[a] - played_row) / g.marginal_row(t));
      best_gain = std::max(best_gain, (dev_col[a] - played_col) / g.marginal_col(t));
    }
  }
  CHECK(best_gain >= kColoringGadgetEps - 1e-12);
  CHECK(cert.max_regret == doctest::Approx(best_gain).epsilon(1e-9));
}

TEST_CASE("edge coloring is proper and uses at most degree + 1 colors") {
  {
    const PlantedGraph single(2, {{0, 1}});
    const auto c = edge_coloring(single);
    CHECK(c.size() == 1);
  }
  {
    const PlantedGraph triangle = complete_graph(3);
    const auto c = edge_coloring(triangle);
    std::set<int> used;
    for (auto& [e, col] : c) used.insert(col);
    CHECK(used.size() == 3);  // odd cycle needs three edge colors
  }
  for (const PlantedGraph& g :
       {complete_graph(5), octahedron(), circulant_4regular(9), circulant_4regular(12),
        complete_graph(6), sample_planted_clique(14, 0, 3), sample_planted_clique(10, 4, 4)}) {
    int max_deg = 0;
    for (int v = 0; v < g.n(); ++v) max_deg = std::max(max_deg, g.degree(v));
    const auto coloring = edge_coloring(g);
    CHECK(coloring.size() == g.edge_list().size());
    for (auto& [e, col] : coloring) {
      CHECK(col >= 1);
      CHECK(col <= max_deg + 1);
    }
    for (int v = 0; v < g.n(); ++v) {
      std::set<int> at_vertex;
      for (int u = 0; u < g.n(); ++u) {
        if (u == v || !g.adjacent(u, v)) continue;
        const int col = coloring.at({std::min(u, v), std::max(u, v)});
        CHECK(at_vertex.insert(col).second);  // no repeats at a vertex
      }
    }
  }
}

TEST_CASE("coloring gadget structure") {
  CHECK_THROWS_AS(build_coloring_hardness_game(complete_graph(4)), NotFourRegularError);

  const BayesianGame g = build_coloring_hardness_game(complete_graph(5));
  CHECK(g.k_row() == 5);
  CHECK(g.n_row() == 6);
  // On K5 every ordered pair is an edge, so 4/5 over 20 ordered pairs
  // matches the 1/5 over 5 diagonal pairs exactly: the correlated
  // distribution happens to coincide with the uniform one. The
  // octahedron leaves its antipodal pairs empty instead.
  CHECK(g.uniform());
  CHECK_FALSE(build_coloring_hardness_game(octahedron()).uniform());

  // Marginals are uniform: 4/5 over ordered edges + 1/5 over the diagonal.
  for (int v = 0; v < 5; ++v) {
    CHECK(g.marginal_row(v) == doctest::Approx(0.2));
    CHECK(g.marginal_col(v) == doctest::Approx(0.2));
  }

  // Every payoff is one of the designed stakes.
  const std::set<double> stakes{0.0, 0.02, 0.04, 0.08, 0.16, 0.32, 0.64, 1.0};
  for (int ar = 0; ar < 6; ++ar) {
    for (int ac = 0; ac < 6; ++ac) {
      for (int tr = 0; tr < 5; ++tr) {
        for (int tc = 0; tc < 5; ++tc) {
          CHECK(stakes.count(g.u_row(ar, ac, tr, tc)) == 1);
          CHECK(stakes.count(g.u_col(ar, ac, tr, tc)) == 1);
        }
      }
    }
  }
  CHECK(kColoringGadgetEps == 0.004);
}

TEST_CASE("gadget coin-flip deltas cancel and quantize") {
  for (const PlantedGraph& graph : {octahedron(), complete_graph(5)}) {
    const BayesianGame g = build_coloring_hardness_game(graph);
    Rng rng(graph.n());
    for (int trial = 0; trial < 100; ++trial) {
      PureBayesProfile p;
      p.s_row.resize(g.k_row());
      p.s_col.resize(g.k_col());
      for (int& a : p.s_row) a = static_cast<int>(rng.next_below(6));
      for (int& a : p.s_col) a = static_cast<int>(rng.next_below(6));
      const auto [d_row, d_col] = coin_flip_deltas(g, p);
      double sum = 0.0;
      for (double d : d_row) {
        sum += d;
        CHECK(std::abs(d - 0.004 * std::round(d / 0.004)) <= 1e-9);
      }
      for (double d : d_col) {
        sum += d;
        CHECK(std::abs(d - 0.004 * std::round(d / 0.004)) <= 1e-9);
      }
      CHECK(std::abs(sum) <= 1e-9);
    }
  }
}

TEST_CASE("octahedron proper coloring with coins 0 is an exact BNE of value 1") {
  const BayesianGame g = build_coloring_hardness_game(octahedron());
  const PureBayesProfile p{{0, 0, 2, 2, 4, 4}, {0, 0, 2, 2, 4, 4}};
  const BneCertificate cert = bne_regret(g, p);
  CHECK(cert.max_regret == 0.0);
  for (double v : cert.p_row) CHECK(v == doctest::Approx(1.0));
  for (double v : cert.p_col) CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("uniform lift: payoffs are type-invariant and reduce to the bimatrix game") {
  Rng rng(57);
  const BimatrixGame base = testutil::random_game(rng, 3, 4);
  const BayesianGame lifted = lift_uniform_bayes(base, 3);
  CHECK(lifted.uniform());
  for (int probe = 0; probe < 50; ++probe) {
    const int ar = static_cast<int>(rng.next_below(3));
    const int ac = static_cast<int>(rng.next_below(4));
    const int t1 = static_cast<int>(rng.next_below(3));
    const int t2 = static_cast<int>(rng.next_below(3));
    CHECK(lifted.u_row(ar, ac, t1, t2) == base.m_row()(ar, ac));
    CHECK(lifted.u_col(ar, ac, t1, t2) == base.m_col()(ar, ac));
  }

  // num_types = 1: certificates coincide with bimatrix regrets.
  const BayesianGame one = lift_uniform_bayes(base, 1);
  const PureBayesProfile p{{2}, {1}};
  const BneCertificate cert = bne_regret(one, p);
  const RegretCertificate flat = regret(base, MixedProfile::pure(2, 3, 1, 4));
  CHECK(cert.regret_row[0] == doctest::Approx(flat.regret_row));
  CHECK(cert.regret_col[0] == doctest::Approx(flat.regret_col));
}

TEST_CASE("one-to-one clique assignment has zero regret within the A block") {
  // Lift a planted reduction game and map each type to a distinct
  // clique vertex: every type earns alpha, and no deviation inside the
  // adjacency block can beat it.
  const PlantedGraph g = sample_planted_clique(24, 6, 63);
  ReductionParams params = params_eps_hardness(0.07);
  params.n_big = 10;
  const ReductionArtifact art = build_hk_game(g, params, 63);
  const std::vector<int>& clique = *g.planted();
  const BayesianGame lifted = lift_uniform_bayes(art, static_cast<int>(clique.size()));

  PureBayesProfile p;
  p.s_row = clique;
  p.s_col = clique;
  const BneCertificate cert = bne_regret(lifted, p);
  for (int t = 0; t < lifted.k_row(); ++t) {
    CHECK(cert.p_row[t] == doctest::Approx(params.alpha));
    // Best deviation restricted to A-block strategies never beats alpha.
    double best_a = 0.0;
    for (int a = 0; a < art.layout.n; ++a) {
      double q = 0.0;
      for (int u = 0; u < lifted.k_col(); ++u) {
        q += lifted.u_row(a, p.s_col[u], t, u) / lifted.k_col();
      }
      best_a = std::max(best_a, q);
    }
    CHECK(best_a <= cert.p_row[t] + 1e-12);
  }
}

TEST_CASE("pure profiles map to empirical mixed strategies") {
  Rng rng(59);
  const BimatrixGame base = testutil::random_game(rng, 4, 4);
  const BayesianGame lifted = lift_uniform_bayes(base, 4);

  const PureBayesProfile all_zero{{0, 0, 0, 0}, {0, 0, 0, 0}};
  CHECK(pure_bayes_to_mixed(lifted, all_zero).x() ==
        std::vector<double>{1.0, 0.0, 0.0, 0.0});

  const PureBayesProfile injective{{0, 1, 2, 3}, {3, 2, 1, 0}};
  const MixedProfile mix = pure_bayes_to_mixed(lifted, injective);
  for (double v : mix.x()) CHECK(v == doctest::Approx(0.25));
  for (double v : mix.y()) CHECK(v == doctest::Approx(0.25));
}

TEST_CASE("uniform-lift regret equals the average per-type bayesian regret") {
  Rng rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    const BimatrixGame base = testutil::random_game(rng, 4, 3);
    const int types = 2 + static_cast<int>(rng.next_below(4));
    const BayesianGame lifted = lift_uniform_bayes(base, types);
    PureBayesProfile p;
    p.s_row.resize(types);
    p.s_col.resize(types);
    for (int& a : p.s_row) a = static_cast<int>(rng.next_below(4));
    for (int& a : p.s_col) a = static_cast<int>(rng.next_below(3));

    const BneCertificate cert = bne_regret(lifted, p);
    const RegretCertificate flat = regret(base, pure_bayes_to_mixed(lifted, p));
    double avg_row = 0.0, avg_col = 0.0;
    for (double r : cert.regret_row) avg_row += r / types;
    for (double r : cert.regret_col) avg_col += r / types;
    CHECK(flat.regret_row <= avg_row + 1e-9);
    CHECK(flat.regret_col <= avg_col + 1e-9);
  }
}

TEST_CASE("bne sample count formula") {
  CHECK(bne_sample_count(16, 16, 0.5) == 888);
  CHECK(bne_sample_count(2, 2, 1.0) == static_cast<int>(std::ceil(40.0 * std::log(4.0))));
  CHECK_THROWS_AS(bne_sample_count(2, 2, 0.0), std::invalid_argument);
}

TEST_CASE("sampled payoff estimates are accurate against the true strategy") {
  // With the opposing pure strategy fixed to the truth, the sampled
  // estimate of every payoff entry lands within eps/8 simultaneously
  // in the vast majority of seeded trials.
  const int k = 300, n = 4;
  const double eps = 1.0;
  const int m = bne_sample_count(n, k, eps);
  REQUIRE(m <= k);

  Rng maker(71);
  std::vector<double> u(static_cast<std::size_t>(n) * n * k * k);
  for (double& v : u) v = maker.next_double();
  const BayesianGame g = BayesianGame::uniform_types(k, n, n, u, u);

  std::vector<int> s_col(k);
  for (int& a : s_col) a = static_cast<int>(maker.next_below(n));

  // Exact payoffs p_ij for the row player against s_col.
  Matrix p_exact(k, n);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int y = 0; y < k; ++y) acc += g.u_row(j, s_col[y], i, y);
      p_exact(i, j) = acc / k;
    }
  }

  int good = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Rng rng(1000 + trial);
    const std::vector<int> sampled = rng.sample_subset(k, m);
    bool all_close = true;
    for (int i = 0; i < k && all_close; ++i) {
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int t : sampled) acc += g.u_row(j, s_col[t], i, t);
        if (std::abs(acc / m - p_exact(i, j)) >= eps / 8.0) {
          all_close = false;
          break;
        }
      }
    }
    if (all_close) ++good;
  }
  CHECK(good >= 70);
}

TEST_CASE("qp algorithm: brute-force path returns the planted equilibrium") {
  for (int seed = 0; seed < 3; ++seed) {
    PureBayesProfile planted;
    const BayesianGame g = build_planted_bne_game(6, 6, 0.2, 9000 + seed, &planted);
    const BneAlgoResult res = qp_pure_bne_uniform(g, 0.25, 9000 + seed, 10000);
    REQUIRE(res.status == BneAlgoStatus::Ok);
    CHECK_FALSE(res.trace.sampling_path);
    CHECK(res.profile->s_row == planted.s_row);
    CHECK(res.profile->s_col == planted.s_col);
    CHECK(is_eps_bne(g, *res.profile, 0.25));
  }
}

TEST_CASE("qp algorithm: sampling path succeeds on a constant game") {
  // Smallest size that routes past the brute-force cutoff: the type
  // count must exceed m = ceil(40 ln(nk) / eps^2).
  const int k = 253, n = 2;
  const double eps = 1.0;
  REQUIRE(bne_sample_count(n, k, eps) < k);

  const std::size_t sz = static_cast<std::size_t>(n) * n * k * k;
  const BayesianGame g = BayesianGame::uniform_types(k, n, n,
                                                     std::vector<double>(sz, 0.2),
                                                     std::vector<double>(sz, 0.2));
  const BneAlgoResult res = qp_pure_bne_uniform(g, eps, 4242, 50);
  REQUIRE(res.status == BneAlgoStatus::Ok);
  CHECK(res.trace.sampling_path);
  CHECK(res.trace.m == bne_sample_count(n, k, eps));
  CHECK(res.trace.attempts == 1);  // first rounding already verifies
  CHECK(is_eps_bne(g, *res.profile, eps));

  // Trace invariant: X rows live only on the allowed support.
  for (int t = 0; t < k; ++t) {
    double sum = 0.0;
    for (int a = 0; a < n; ++a) {
      const double x = res.trace.x_row(t, a);
      sum += x;
      if (x > 0.0) {
        CHECK(res.trace.q_row(t, a) >= res.trace.m_row[t] - eps / 8.0 + 1e-12);
      }
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("qp algorithm rejects non-uniform games") {
  const BayesianGame gadget = build_coloring_hardness_game(octahedron());
  CHECK_THROWS_AS(qp_pure_bne_uniform(gadget, 0.25, 1, 10), std::invalid_argument);
}

TEST_CASE("qp sampling path handles structured payoffs") {
  // Low-amplitude structure keeps every profile verifiable at eps = 1
  // while the estimates, support restriction and closeness LP all do
  // real work on non-constant data.
  const int k = 253, n = 2;
  const double eps = 1.0;
  const std::size_t sz = static_cast<std::size_t>(n) * n * k * k;
  std::vector<double> u_row(sz), u_col(sz);
  Rng maker(83);
  for (std::size_t i = 0; i < sz; ++i) {
    u_row[i] = 0.1 + 0.25 * maker.next_double();
    u_col[i] = 0.1 + 0.25 * maker.next_double();
  }
  const BayesianGame g = BayesianGame::uniform_types(k, n, n, u_row, u_col);
  const BneAlgoResult res = qp_pure_bne_uniform(g, eps, 777, 20);
  REQUIRE(res.status == BneAlgoStatus::Ok);
  CHECK(res.trace.sampling_path);
  CHECK(is_eps_bne(g, *res.profile, eps));
  for (int t = 0; t < k; ++t) {
    double sum = 0.0;
    for (int a = 0; a < n; ++a) {
      sum += res.trace.x_row(t, a);
      if (res.trace.x_row(t, a) > 0.0) {
        CHECK(res.trace.q_row(t, a) >= res.trace.m_row[t] - eps / 8.0 + 1e-12);
      }
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
  }
}
