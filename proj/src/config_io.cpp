#include "landau/config_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace landau {

namespace {

using nlohmann::json;

TimeDistribution parse_distribution(const json& node, double T) {
  std::vector<PolySegment> segments;
  if (node.contains("segments")) {
    for (const auto& seg : node.at("segments")) {
      PolySegment ps;
      ps.t_start = seg.at("t_start").get<double>();
      ps.t_end = seg.at("t_end").get<double>();
      ps.coeffs = seg.at("poly_coeffs").get<std::vector<double>>();
      segments.push_back(std::move(ps));
    }
  }
  std::vector<DiracDelta> deltas;
  if (node.contains("deltas")) {
    for (const auto& d : node.at("deltas")) {
      deltas.push_back(DiracDelta{d.at("t").get<double>(), d.at("weight").get<double>()});
    }
  }
  std::optional<double> lower_bound;
  if (node.contains("lower_bound")) lower_bound = node.at("lower_bound").get<double>();
  return TimeDistribution::piecewise(std::move(segments), std::move(deltas),
                                     lower_bound, T);
}

}  // namespace

CauchyProblem parse_problem_json(const std::string& text) {
  json doc = json::parse(text);
  CauchyProblem p;
  const std::string variant = doc.value("variant", std::string("CPa"));
  if (variant == "CPa") {
    p.variant = Variant::CPa;
  } else if (variant == "CPb") {
    p.variant = Variant::CPb;
  } else {
    throw std::invalid_argument("config: variant must be CPa or CPb");
  }
  p.params.B = doc.value("B", 1.0);
  p.T = doc.value("T", 2.0);
  p.s = doc.value("s", 0.0);
  p.trunc.j_max = doc.at("truncation").at("j_max").get<int>();
  p.trunc.n_max = doc.at("truncation").at("n_max").get<int>();
  p.trunc.use_c1 = true;
  p.trunc.use_c2 = true;

  p.a = parse_distribution(doc.at("a"), p.T);
  if (doc.contains("q")) {
    p.q = parse_distribution(doc.at("q"), p.T);
  } else {
    p.q = TimeDistribution::constant(0.0, p.T, 0.0);
  }

  p.u0 = SpectralField(p.params, p.trunc);
  p.u1 = SpectralField(p.params, p.trunc);
  if (doc.contains("data")) {
    for (const auto& row : doc.at("data")) {
      const SpectralIndex xi{row.at("j").get<int>(), row.at("n").get<int>()};
      const int comp = row.at("component").get<int>();
      const complex u0v(row.value("u0_re", 0.0), row.value("u0_im", 0.0));
      const complex u1v(row.value("u1_re", 0.0), row.value("u1_im", 0.0));
      if (u0v != complex{0.0, 0.0}) p.u0.set(xi, comp, u0v);
      if (u1v != complex{0.0, 0.0}) p.u1.set(xi, comp, u1v);
    }
  }
  if (doc.contains("forcing")) {
    for (const auto& row : doc.at("forcing")) {
      const SpectralIndex xi{row.at("j").get<int>(), row.at("n").get<int>()};
      const int comp = row.at("component").get<int>();
      ModeForcingSpec spec;
      spec.amplitude =
          complex(row.value("amplitude_re", 0.0), row.value("amplitude_im", 0.0));
      spec.frequency = row.value("frequency", 0.0);
      if (row.contains("envelope")) {
        spec.envelope = parse_distribution(row.at("envelope"), p.T);
      }
      p.forcing[{xi, comp}] = std::move(spec);
    }
  }
  p.validate();
  return p;
}

CauchyProblem load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_problem_json(ss.str());
}

}  // namespace landau
