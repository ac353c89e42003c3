#include "qwick/json_io.hpp"

#include <fstream>
#include <sstream>

namespace qwick {

namespace {

double number(const Json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string("expected a number for ") + what);
  return j.get<double>();
}

int integer(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw ParseError(std::string("expected an integer for ") + what);
  return j.get<int>();
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::vector<double> number_array(const Json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string("expected an array for ") + what);
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(number(x, what));
  return out;
}

Json vectors_to_json(const std::vector<OneParticleVector>& vs) {
  Json out = Json::array();
  for (const auto& v : vs) out.push_back(v.entries);
  return out;
}

std::vector<OneParticleVector> vectors_from_json(const Json& j, int& dim, const char* what) {
  if (!j.is_array()) throw ParseError(std::string("expected an array of vectors for ") + what);
  std::vector<OneParticleVector> out;
  for (const auto& v : j) {
    OneParticleVector phi(number_array(v, what));
    if (dim == 0) dim = phi.dim();
    if (phi.dim() != dim || dim == 0) {
      throw ParseError(std::string("vector of length ") + std::to_string(phi.dim()) + " in " + what +
                       ", expected " + std::to_string(dim));
    }
    out.push_back(std::move(phi));
  }
  return out;
}

}  // namespace

Json to_json(const GradedVector& f) {
  const QContext& ctx = f.context();
  Json components = Json::object();
  for (int n = 0; n <= ctx.max_degree(); ++n) components[std::to_string(n)] = f.component(n);
  return Json{{"q", ctx.q()}, {"dim", ctx.dim()}, {"max_degree", ctx.max_degree()},
              {"components", components}};
}

GradedVector graded_vector_from_json(const Json& j) {
  const QContext ctx(number(field(j, "q"), "q"), integer(field(j, "dim"), "dim"),
                     integer(field(j, "max_degree"), "max_degree"));
  GradedVector f(ctx);
  const Json& components = field(j, "components");
  if (!components.is_object()) throw ParseError("\"components\" must be an object keyed by degree");
  for (const auto& [key, value] : components.items()) {
    int n = -1;
    try {
      std::size_t used = 0;
      n = std::stoi(key, &used);
      if (used != key.size()) n = -1;
    } catch (const std::exception&) {
      n = -1;
    }
    if (n < 0 || n > ctx.max_degree()) throw ParseError("invalid degree key \"" + key + "\"");
    std::vector<double> t = number_array(value, "component");
    if (t.size() != ctx.degree_size(n)) {
      throw ParseError("component " + key + " has length " + std::to_string(t.size()) +
                       ", expected " + std::to_string(ctx.degree_size(n)));
    }
    f.component(n) = std::move(t);
  }
  return f;
}

Json to_json(const WickPolynomial& p) {
  Json terms = Json::array();
  for (const auto& [word, coeff] : p.terms()) {
    terms.push_back(Json{{"coeff", coeff},
                         {"creators", vectors_to_json(word.creators)},
                         {"annihilators", vectors_to_json(word.annihilators)}});
  }
  return Json{{"terms", terms}};
}

WickPolynomial wick_polynomial_from_json(const Json& j, int dim) {
  const Json& terms = field(j, "terms");
  if (!terms.is_array()) throw ParseError("\"terms\" must be an array");
  WickPolynomial p;
  for (const auto& t : terms) {
    NormalWord w;
    w.creators = t.contains("creators") ? vectors_from_json(t.at("creators"), dim, "creators")
                                        : std::vector<OneParticleVector>{};
    w.annihilators = t.contains("annihilators")
                         ? vectors_from_json(t.at("annihilators"), dim, "annihilators")
                         : std::vector<OneParticleVector>{};
    p.add(w, number(field(t, "coeff"), "coeff"));
  }
  return p;
}

Json to_json(const SeriesSpec& spec) {
  return Json{{"coefficients", spec.coefficients}, {"radius", spec.radius}};
}

SeriesSpec series_spec_from_json(const Json& j) {
  SeriesSpec spec;
  spec.coefficients = number_array(field(j, "coefficients"), "coefficients");
  spec.radius = number(field(j, "radius"), "radius");
  return spec;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace qwick
