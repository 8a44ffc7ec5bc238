#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cliquenash/approx_nash.hpp"
#include "test_util.hpp"

using namespace cliquenash;
using testutil::matching_pennies;

TEST_CASE("dmp half equilibrium on hand examples") {
  const BimatrixGame corner(Matrix::from_rows({{1, 0}, {0, 0}}),
                            Matrix::from_rows({{1, 0}, {0, 0}}));
  const MixedProfile p = dmp_half_equilibrium(corner, 0);
  CHECK(p.x() == std::vector<double>{1.0, 0.0});
  CHECK(p.y() == std::vector<double>{1.0, 0.0});
  const RegretCertificate cert = regret(corner, p);
  CHECK(cert.regret_row == 0.0);
  CHECK(cert.regret_col == 0.0);

  const BimatrixGame mp = matching_pennies();
  const MixedProfile q = dmp_half_equilibrium(mp, 0);
  CHECK(q.y() == std::vector<double>{0.0, 1.0});  // best response to row 1
  CHECK(q.x() == std::vector<double>{0.5, 0.5});
  CHECK(is_eps_equilibrium(mp, q, 0.5));

  CHECK_THROWS_AS(dmp_half_equilibrium(mp, 5), std::invalid_argument);
}

TEST_CASE("dmp guarantee holds for random games and all start rows") {
  Rng rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const int rows = 2 + static_cast<int>(rng.next_below(6));
    const int cols = 2 + static_cast<int>(rng.next_below(6));
    const BimatrixGame g = testutil::random_game(rng, rows, cols);
    for (int start = 0; start < rows; ++start) {
      const MixedProfile p = dmp_half_equilibrium(g, start);
      const RegretCertificate cert = regret(g, p);
      CHECK(std::max(cert.regret_row, cert.regret_col) <= 0.5 + 1e-9);
      CHECK(p.support_x().size() <= 2);
      CHECK(p.support_y().size() == 1);
    }
  }
}

TEST_CASE("optimal value half equilibrium on hand examples") {
  const BimatrixGame diag(Matrix::from_rows({{1, 0}, {0, 0.5}}),
                          Matrix::from_rows({{1, 0}, {0, 0.5}}));
  auto [p, v] = optimal_value_half_equilibrium(diag);
  CHECK(v == doctest::Approx(1.0));
  CHECK(p.x()[0] == doctest::Approx(1.0));
  CHECK(p.y()[0] == doctest::Approx(1.0));

  auto [mp_p, mp_v] = optimal_value_half_equilibrium(matching_pennies());
  CHECK(mp_v == doctest::Approx(0.5));
  CHECK(is_eps_equilibrium(matching_pennies(), mp_p, 0.5));
}

TEST_CASE("optimal value half equilibrium dominates exact Nash values") {
  Rng rng(37);
  for (int trial = 0; trial < 40; ++trial) {
    const int rows = 2 + static_cast<int>(rng.next_below(3));
    const int cols = 2 + static_cast<int>(rng.next_below(3));
    const BimatrixGame g = testutil::random_game(rng, rows, cols);
    auto [p, v] = optimal_value_half_equilibrium(g);
    const RegretCertificate cert = regret(g, p);
    CHECK(std::max(cert.regret_row, cert.regret_col) <= 0.5 + 1e-9);
    CHECK(v == doctest::Approx(value(g, p)).epsilon(1e-9));

    double best_nash = -1.0;
    for (const NashPoint& np : enumerate_nash_support(g, std::min(rows, cols))) {
      best_nash = std::max(best_nash, np.value);
    }
    if (best_nash >= 0.0) CHECK(v >= best_nash - 1e-7);
  }
}

TEST_CASE("small support search on hand examples") {
  const BimatrixGame mp = matching_pennies();
  {
    const SmallSupportResult r = small_support_search(mp, 0.0, 2);
    REQUIRE(r.status == SearchStatus::Found);
    CHECK(r.profile->x() == std::vector<double>{0.5, 0.5});
    CHECK(r.profile->y() == std::vector<double>{0.5, 0.5});
  }
  {
    const BimatrixGame one(Matrix::from_rows({{1.0}}), Matrix::from_rows({{1.0}}));
    const SmallSupportResult r = small_support_search(one, 0.0, 1);
    REQUIRE(r.status == SearchStatus::Found);
    CHECK(r.profile->x() == std::vector<double>{1.0});
  }
  {
    // every pure profile of matching pennies leaves one player with
    // regret 1, so support-1 search at eps = 0.4 must come up empty
    const SmallSupportResult r = small_support_search(mp, 0.4, 1);
    CHECK(r.status == SearchStatus::NotFound);
  }
  {
    const SmallSupportResult r = small_support_search(mp, 0.0, 2, std::nullopt, 2);
    CHECK(r.status == SearchStatus::BudgetExceeded);
  }
  CHECK_THROWS_AS(small_support_search(mp, 0.0, 0), std::invalid_argument);
}

TEST_CASE("small support search at eps=1/2, k=3 always succeeds") {
  // The DMP profile lies in the searched class (support 2 x 1 with
  // half-integer weights), so the search can never come up empty.
  Rng rng(41);
  for (int trial = 0; trial < 25; ++trial) {
    const int rows = 2 + static_cast<int>(rng.next_below(3));
    const int cols = 2 + static_cast<int>(rng.next_below(3));
    const BimatrixGame g = testutil::random_game(rng, rows, cols);
    CHECK(small_support_search(g, 0.5, 3).status == SearchStatus::Found);
  }
}

TEST_CASE("support enumeration oracle on hand examples") {
  const auto mp_eqs = enumerate_nash_support(matching_pennies(), 2);
  REQUIRE(mp_eqs.size() == 1);
  CHECK(mp_eqs[0].profile.x()[0] == doctest::Approx(0.5));
  CHECK(mp_eqs[0].value == doctest::Approx(0.5));

  const BimatrixGame diag(Matrix::from_rows({{1, 0}, {0, 0.5}}),
                          Matrix::from_rows({{1, 0}, {0, 0.5}}));
  const auto diag_eqs = enumerate_nash_support(diag, 2);
  bool has_top = false, has_bottom = false;
  for (const NashPoint& np : diag_eqs) {
    if (np.profile.x()[0] == doctest::Approx(1.0) && np.value == doctest::Approx(1.0)) {
      has_top = true;
    }
    if (np.profile.x()[1] == doctest::Approx(1.0) && np.value == doctest::Approx(0.5)) {
      has_bottom = true;
    }
  }
  CHECK(has_top);
  CHECK(has_bottom);

  const BimatrixGame zero(Matrix(2, 2, 0.0), Matrix(2, 2, 0.0));
  const auto zero_eqs = enumerate_nash_support(zero, 2);
  CHECK(zero_eqs.size() == 4);  // every pure pair, no deviation gains
}

TEST_CASE("support enumeration outputs have vanishing regret") {
  Rng rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    const BimatrixGame g = testutil::random_game(rng, 4, 4);
    for (const NashPoint& np : enumerate_nash_support(g, 4)) {
      const RegretCertificate cert = regret(g, np.profile);
      CHECK(std::max(cert.regret_row, cert.regret_col) <= 1e-8);
      CHECK(np.value == doctest::Approx(value(g, np.profile)));
    }
  }
}

TEST_CASE("support enumeration respects its budget") {
  Rng rng(47);
  const BimatrixGame g = testutil::random_game(rng, 4, 4);
  CHECK_THROWS_AS(enumerate_nash_support(g, 4, 3), std::runtime_error);
}
