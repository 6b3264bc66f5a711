#include "mrl/chain_io.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace mrl {

namespace {

using nlohmann::json;

json meta_to_json(const ChainMeta& m) {
  return json{{"model", m.model},
              {"seed", m.seed},
              {"L", m.L},
              {"iterations", m.iterations},
              {"burn_in", m.burn_in},
              {"thinning", m.thinning},
              {"n_groups", m.n_groups},
              {"has_covariate", m.has_covariate},
              {"data_hash", m.data_hash},
              {"accept_atoms", m.accept_atoms},
              {"accept_alpha_b", m.accept_alpha_b}};
}

ChainMeta meta_from_json(const json& j) {
  ChainMeta m;
  m.model = j.at("model").get<std::string>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.L = j.at("L").get<int>();
  m.iterations = j.at("iterations").get<int>();
  m.burn_in = j.at("burn_in").get<int>();
  m.thinning = j.at("thinning").get<int>();
  m.n_groups = j.at("n_groups").get<int>();
  m.has_covariate = j.at("has_covariate").get<bool>();
  m.data_hash = j.at("data_hash").get<std::uint64_t>();
  m.accept_atoms = j.at("accept_atoms").get<double>();
  m.accept_alpha_b = j.at("accept_alpha_b").get<double>();
  return m;
}

json draw_to_json(const MixtureState& s) {
  json atoms = json::array();
  for (const auto& a : s.atoms)
    atoms.push_back(json::array({a.theta, a.phi, a.beta, a.kappa2}));
  json j;
  j["atoms"] = std::move(atoms);
  j["zeta"] = s.sticks.zeta;
  j["weights"] = s.sticks.weights;
  if (!s.sticks.u.empty()) {
    j["u"] = s.sticks.u;
    j["v"] = s.sticks.v;
    j["w"] = s.sticks.w;
  }
  j["config"] = s.config;
  const auto& h = s.hyper;
  j["hyper"] = json{{"mu", {h.mu(0), h.mu(1)}},
                    {"sigma", {h.sigma(0, 0), h.sigma(0, 1), h.sigma(1, 1)}},
                    {"lambda", h.lambda},
                    {"tau2", h.tau2},
                    {"rho", h.rho},
                    {"alpha", h.alpha},
                    {"b", h.b},
                    {"a_kappa", h.a_kappa}};
  return j;
}

MixtureState draw_from_json(const json& j) {
  MixtureState s;
  for (const auto& a : j.at("atoms"))
    s.atoms.push_back({a.at(0).get<double>(), a.at(1).get<double>(),
                       a.at(2).get<double>(), a.at(3).get<double>()});
  s.sticks.zeta = j.at("zeta").get<std::vector<std::vector<double>>>();
  s.sticks.weights = j.at("weights").get<std::vector<std::vector<double>>>();
  if (j.contains("u")) {
    s.sticks.u = j.at("u").get<std::vector<double>>();
    s.sticks.v = j.at("v").get<std::vector<double>>();
    s.sticks.w = j.at("w").get<std::vector<double>>();
  }
  s.config = j.at("config").get<std::vector<std::vector<int>>>();
  const auto& h = j.at("hyper");
  s.hyper.mu << h.at("mu").at(0).get<double>(), h.at("mu").at(1).get<double>();
  const double s00 = h.at("sigma").at(0).get<double>();
  const double s01 = h.at("sigma").at(1).get<double>();
  const double s11 = h.at("sigma").at(2).get<double>();
  s.hyper.sigma << s00, s01, s01, s11;
  s.hyper.lambda = h.at("lambda").get<double>();
  s.hyper.tau2 = h.at("tau2").get<double>();
  s.hyper.rho = h.at("rho").get<double>();
  s.hyper.alpha = h.at("alpha").get<double>();
  s.hyper.b = h.at("b").get<double>();
  s.hyper.a_kappa = h.at("a_kappa").get<double>();
  return s;
}

}  // namespace

void write_chain(const std::string& path, const ChainOutput& chain) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << meta_to_json(chain.meta).dump() << '\n';
  for (const auto& draw : chain.draws) out << draw_to_json(draw).dump() << '\n';
}

ChainOutput read_chain(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty chain file " + path);
  ChainOutput chain;
  chain.meta = meta_from_json(json::parse(line));
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    chain.draws.push_back(draw_from_json(json::parse(line)));
  }
  return chain;
}

}  // namespace mrl
