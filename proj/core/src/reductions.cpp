#include "cliquenash/reductions.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "cliquenash/rng.hpp"

namespace cliquenash {

using nlohmann::json;

namespace {

void check_open_unit(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in (0,1)");
  }
}

json params_to_json_obj(const ReductionParams& p) {
  json j;
  j["alpha"] = p.alpha;
  j["beta"] = p.beta;
  j["gamma"] = p.gamma;
  j["lambda"] = p.lambda_;
  j["c2"] = p.c2;
  j["n_big"] = p.n_big;
  j["n1"] = p.n1;
  j["n2"] = p.n2;
  j["eps"] = p.eps;
  j["eta"] = p.eta;
  j["delta"] = p.delta;
  j["s"] = p.s;
  j["t"] = p.t;
  j["metadata"] = p.metadata;
  return j;
}

ReductionParams params_from_json_obj(const json& j) {
  ReductionParams p;
  p.alpha = j.at("alpha").get<double>();
  p.beta = j.at("beta").get<double>();
  p.gamma = j.at("gamma").get<double>();
  p.lambda_ = j.at("lambda").get<double>();
  p.c2 = j.at("c2").get<double>();
  p.n_big = j.at("n_big").get<int>();
  p.n1 = j.at("n1").get<int>();
  p.n2 = j.at("n2").get<int>();
  p.eps = j.at("eps").get<double>();
  p.eta = j.at("eta").get<double>();
  p.delta = j.at("delta").get<double>();
  p.s = j.at("s").get<double>();
  p.t = j.at("t").get<double>();
  if (j.contains("metadata")) {
    p.metadata = j["metadata"].get<std::map<std::string, std::string>>();
  }
  return p;
}

json layout_to_json_obj(const BlockLayout& l) {
  json j;
  j["kind"] = l.kind;
  j["n"] = l.n;
  j["n1"] = l.n1;
  j["n2"] = l.n2;
  j["total"] = l.total;
  j["has_extra"] = l.has_extra;
  return j;
}

BlockLayout layout_from_json_obj(const json& j) {
  BlockLayout l;
  l.kind = j.at("kind").get<std::string>();
  l.n = j.at("n").get<int>();
  l.n1 = j.at("n1").get<int>();
  l.n2 = j.at("n2").get<int>();
  l.total = j.at("total").get<int>();
  l.has_extra = j.at("has_extra").get<bool>();
  return l;
}

}  // namespace

std::string ReductionParams::to_json() const { return params_to_json_obj(*this).dump(); }

ReductionParams ReductionParams::from_json(const std::string& text) {
  return params_from_json_obj(json::parse(text));
}

ReductionParams params_eps_hardness(double eta) {
  if (!(eta >= 0.0 && eta < 0.875)) {
    throw std::invalid_argument("params_eps_hardness: eta out of range");
  }
  ReductionParams p;
  const double t = 4.0 * eta / 7.0;
  p.eta = eta;
  p.t = t;
  p.alpha = 0.5 + t;
  p.beta = 1.0 / 3.0;
  p.gamma = 1.0 / 3.0;
  p.delta = t * t;
  p.eps = 0.5 - eta;  // incentive bound targeted by the reduction
  p.s = p.alpha > 0.0 ? p.delta / p.alpha : 0.0;
  p.metadata["map"] = "eps-hardness: t=4*eta/7, alpha=1/2+t, beta=gamma=1/3, delta=t^2";
  return p;
}

ReductionParams params_value_hardness(double eta) {
  if (!(eta > 0.0 && eta < 1.0)) {
    throw std::invalid_argument("params_value_hardness: eta out of range");
  }
  ReductionParams p;
  const double eps = (eta / 5.0) * (eta / 5.0);
  p.eta = eta;
  p.eps = eps;
  p.alpha = 1.0 - eta;
  p.beta = p.alpha - eps;
  p.gamma = 4.0 * std::sqrt(eps);
  p.t = std::sqrt(eps);
  p.s = 3.0 * eps / p.alpha;
  p.delta = eps;
  p.metadata["map"] = "value-hardness: eps=(eta/5)^2, alpha=1-eta, beta=alpha-eps, gamma=4*sqrt(eps)";
  if (!(p.alpha > 0.75)) {
    p.metadata["warning"] = "eta >= 1/4 leaves alpha <= 3/4; the analysis assumes alpha > 3/4";
  }
  return p;
}

ReductionParams params_small_support_quarter(double eta) {
  if (!(eta > 0.0 && eta < 0.25)) {
    throw std::invalid_argument("params_small_support_quarter: need 0 < eta < 1/4");
  }
  ReductionParams p;
  p.eta = eta;
  p.eps = 0.25 - eta;  // incentive target of the variant
  p.alpha = 0.5 + eta / 8.0;
  // Same derivation as the 1/2 - eta construction with the incentive
  // target swapped in: beta = alpha + target - eta^2/8, keeping the
  // eta^2/8 concentration margin for the completeness direction.
  p.beta = p.alpha + p.eps - eta * eta / 8.0;
  p.t = eta / 8.0;
  p.s = eta * eta / 4.0;
  p.metadata["derivation"] =
      "defaults, not source values: beta - alpha = 1/4 - eta - eta^2/8; "
      "mass bound t = eta/8, conditional-value slack s = eta^2/4";
  p.metadata["support_bound"] = "floor(log2(total)/2) by default; exposed as a knob";
  return p;
}

double asymptotic_block_size(int n, double beta, double c2) {
  check_open_unit(beta, "beta");
  // The exponent uses the natural log, keeping the concentration
  // algebra self-consistent; clique sizing below uses log2 instead.
  return std::pow(static_cast<double>(n), (c2 + 1.0) * std::log(1.0 / beta));
}

double asymptotic_copy_count_log10(int n, double beta, double c2, double eta) {
  check_open_unit(beta, "beta");
  if (!(eta > 0.0 && eta < 0.5)) {
    throw std::invalid_argument("asymptotic_copy_count_log10: need eta in (0, 1/2)");
  }
  const double c = (c2 + 1.0) * std::log(1.0 / beta);
  const double margin = eta * eta / 8.0;
  return (4.0 * c / (margin * margin)) * std::log10(static_cast<double>(n));
}

int clique_size(int n, double c) {
  if (n < 2) throw std::invalid_argument("clique_size: n too small");
  return static_cast<int>(std::floor(c * std::log2(static_cast<double>(n))));
}

std::vector<int> BlockLayout::a_block_indices() const {
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  return idx;
}

std::vector<int> BlockLayout::tail_indices() const {
  std::vector<int> idx;
  for (int i = n; i < total; ++i) idx.push_back(i);
  return idx;
}

std::string BlockLayout::to_json() const { return layout_to_json_obj(*this).dump(); }

BlockLayout BlockLayout::from_json(const std::string& text) {
  return layout_from_json_obj(json::parse(text));
}

std::string ReductionArtifact::to_json() const {
  json j;
  j["kind"] = layout.kind;
  j["layout"] = layout_to_json_obj(layout);
  j["params"] = params_to_json_obj(params);
  j["seed"] = seed;
  j["graph"] = json::parse(source.to_json());
  return j.dump();
}

ReductionArtifact load_artifact(const std::string& text) {
  json j = json::parse(text);
  const std::string kind = j.at("kind").get<std::string>();
  const ReductionParams params = params_from_json_obj(j.at("params"));
  const std::uint64_t seed = j.at("seed").get<std::uint64_t>();
  const PlantedGraph graph = PlantedGraph::from_json(j.at("graph").dump());
  ReductionArtifact art = [&]() {
    if (kind == "hk") {
      return build_hk_game(graph, params.alpha, params.beta, params.gamma,
                           params.n_big, seed);
    }
    if (kind == "small-support") {
      return build_small_support_game(graph, params.eta, params.n1, params.n2, seed);
    }
    if (kind == "second-eq") {
      const ReductionArtifact inner = build_hk_game(
          graph, params.alpha, params.beta, params.gamma, params.n_big, seed);
      return build_second_equilibrium_game(inner, params.lambda_);
    }
    throw std::invalid_argument("load_artifact: unknown kind " + kind);
  }();
  art.params = params;  // keep the full parameter record, metadata included
  const BlockLayout expect = layout_from_json_obj(j.at("layout"));
  if (art.layout.total != expect.total || art.layout.kind != expect.kind) {
    throw std::runtime_error("load_artifact: layout mismatch on replay");
  }
  return art;
}

ReductionArtifact build_hk_game(const PlantedGraph& graph, double alpha, double beta,
                                double gamma, int n_big, std::uint64_t seed) {
  check_open_unit(alpha, "alpha");
  check_open_unit(beta, "beta");
  check_open_unit(gamma, "gamma");
  if (n_big < 1) throw std::invalid_argument("build_hk_game: n_big must be >= 1");

  const int n = graph.n();
  const int total = n + n_big;
  Matrix m_row(total, total, 0.0);
  Matrix m_col(total, total, 0.0);

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double v = graph.adjacent(i, j) ? alpha : 0.0;
      m_row(i, j) = v;
      m_col(i, j) = v;
    }
  }
  Rng b_rng = Rng(seed).derive(11);
  for (int i = 0; i < n_big; ++i) {
    double* row = m_row.row_ptr(n + i);
    for (int j = 0; j < n; ++j) {
      const double b = b_rng.bernoulli(beta) ? 1.0 : 0.0;
      row[j] = b;
      m_col(j, n + i) = b;  // transpose block for the column player
    }
    for (int j = n; j < total; ++j) row[j] = gamma;
  }
  for (int i = n; i < total; ++i) {
    double* row = m_col.row_ptr(i);
    for (int j = n; j < total; ++j) row[j] = gamma;
  }

  ReductionArtifact art{BimatrixGame(std::move(m_row), std::move(m_col)),
                        BlockLayout{"hk", n, 0, 0, total, false},
                        ReductionParams{},
                        graph,
                        seed};
  art.params.alpha = alpha;
  art.params.beta = beta;
  art.params.gamma = gamma;
  art.params.n_big = n_big;
  return art;
}

ReductionArtifact build_hk_game(const PlantedGraph& graph, const ReductionParams& params,
                                std::uint64_t seed) {
  ReductionArtifact art =
      build_hk_game(graph, params.alpha, params.beta, params.gamma, params.n_big, seed);
  const int n_big = art.params.n_big;
  art.params = params;
  art.params.n_big = n_big;
  return art;
}

ReductionArtifact build_second_equilibrium_game(const ReductionArtifact& base,
                                                double lambda_) {
  check_open_unit(lambda_, "lambda");
  const int t = base.layout.total;
  Matrix m_row(t + 1, t + 1, 0.0);
  Matrix m_col(t + 1, t + 1, 0.0);
  for (int i = 0; i < t; ++i) {
    for (int j = 0; j < t; ++j) {
      m_row(i, j) = base.game.m_row()(i, j);
      m_col(i, j) = base.game.m_col()(i, j);
    }
  }
  for (int j = 0; j < t; ++j) m_row(t, j) = lambda_;
  for (int i = 0; i < t; ++i) m_col(i, t) = lambda_;
  m_row(t, t) = 1.0;
  m_col(t, t) = 1.0;

  ReductionArtifact art{BimatrixGame(std::move(m_row), std::move(m_col)),
                        base.layout,
                        base.params,
                        base.source,
                        base.seed};
  art.layout.kind = "second-eq";
  art.layout.total = t + 1;
  art.layout.has_extra = true;
  art.params.lambda_ = lambda_;
  return art;
}

ReductionArtifact build_small_support_game(const PlantedGraph& graph, double eta,
                                           int n1, int n2, std::uint64_t seed) {
  if (!(eta > 0.0 && eta < 0.5)) {
    throw std::invalid_argument("build_small_support_game: need eta in (0, 1/2)");
  }
  if (n1 < 1 || n2 < 1) {
    throw std::invalid_argument("build_small_support_game: need n1, n2 >= 1");
  }
  const double alpha = 0.5 + eta / 8.0;
  const double beta = 1.0 - (7.0 / 8.0) * eta - eta * eta / 8.0;

  const int n = graph.n();
  const int tail = n1 * n2;
  const int total = n + tail;
  Matrix m_row(total, total, 0.0);
  Matrix m_col(total, total, 0.0);

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double v = graph.adjacent(i, j) ? alpha : 0.0;
      m_row(i, j) = v;
      m_col(i, j) = v;
    }
  }

  // One B block, replicated n2 times for both players.
  Rng b_rng = Rng(seed).derive(11);
  Matrix b(n1, n);
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n; ++j) b(i, j) = b_rng.bernoulli(beta) ? 1.0 : 0.0;
  }
  for (int copy = 0; copy < n2; ++copy) {
    const int base_row = n + copy * n1;
    for (int i = 0; i < n1; ++i) {
      for (int j = 0; j < n; ++j) {
        m_row(base_row + i, j) = b(i, j);
        m_col(j, base_row + i) = b(i, j);
      }
    }
  }

  // R uniform 0/1 for the row player, J - R for the column player.
  Rng r_rng = Rng(seed).derive(13);
  for (int i = 0; i < tail; ++i) {
    for (int j = 0; j < tail; ++j) {
      const double r = r_rng.bernoulli(0.5) ? 1.0 : 0.0;
      m_row(n + i, n + j) = r;
      m_col(n + i, n + j) = 1.0 - r;
    }
  }

  // Build-time identities: all B copies equal the first and the
  // bottom-right blocks complement to the all-ones matrix.
  for (int copy = 1; copy < n2; ++copy) {
    for (int i = 0; i < n1; ++i) {
      for (int j = 0; j < n; ++j) {
        if (m_row(n + copy * n1 + i, j) != m_row(n + i, j)) {
          throw std::logic_error("small-support game: B copies differ");
        }
      }
    }
  }
  for (int i = 0; i < tail; ++i) {
    for (int j = 0; j < tail; ++j) {
      if (m_row(n + i, n + j) + m_col(n + i, n + j) != 1.0) {
        throw std::logic_error("small-support game: R complement identity failed");
      }
    }
  }

  ReductionArtifact art{BimatrixGame(std::move(m_row), std::move(m_col)),
                        BlockLayout{"small-support", n, n1, n2, total, false},
                        ReductionParams{},
                        graph,
                        seed};
  art.params.alpha = alpha;
  art.params.beta = beta;
  art.params.eta = eta;
  art.params.eps = 0.5 - eta;
  art.params.t = eta / 8.0;
  art.params.s = eta * eta / 4.0;
  art.params.n1 = n1;
  art.params.n2 = n2;
  return art;
}

}  // namespace cliquenash
