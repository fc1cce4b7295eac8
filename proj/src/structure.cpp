#include "srheat/structure.hpp"
#include "srheat/error.hpp"
#include "srheat/perturbation.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace srheat {

namespace {

using json = nlohmann::json;

VectorField read_field(const json &j, const char *key) {
  if (!j.contains(key)) throw UsageError(std::string("frame is missing \"") + key + "\"");
  const json &f = j.at(key);
  if (!f.is_array() || f.size() != 3)
    throw UsageError(std::string("frame.") + key + " must be an array of three expression strings");
  std::array<Expr, 3> c;
  for (int i = 0; i < 3; ++i) {
    if (!f[i].is_string())
      throw UsageError(std::string("frame.") + key + " entries must be strings");
    c[i] = parse(f[i].get<std::string>());
  }
  return {c[0], c[1], c[2]};
}

double read_number(const json &j, const char *key) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw UsageError(std::string("model.") + key + " must be a number");
  return j.at(key).get<double>();
}

QuadraticModel parse_model_triple(std::string_view text) {
  QuadraticModel m;
  double *out[3] = {&m.a, &m.b, &m.c};
  const char *p = text.data(), *end = text.data() + text.size();
  for (int i = 0; i < 3; ++i) {
    while (p < end && *p == ' ') ++p;
    const auto r = std::from_chars(p, end, *out[i]);
    if (r.ec != std::errc()) throw UsageError("model:a,b,c expects three numbers, got \"" + std::string(text) + "\"");
    p = r.ptr;
    while (p < end && *p == ' ') ++p;
    if (i < 2) {
      if (p == end || *p != ',') throw UsageError("model:a,b,c expects three comma-separated numbers");
      ++p;
    }
  }
  if (p != end) throw UsageError("trailing characters after model:a,b,c");
  return m;
}

Structure checked(Structure s) {
  s.frame.check_contact(Point::Zero());
  return s;
}

} // namespace

Structure parse_structure(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error &e) {
    throw UsageError(std::string("structure file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw UsageError("structure file must contain a JSON object");
  for (const auto &[key, value] : j.items())
    if (key != "name" && key != "frame" && key != "model")
      throw UsageError("unknown key \"" + key + "\" in structure file");
  if (!j.contains("name") || !j.at("name").is_string())
    throw UsageError("structure file needs a string \"name\"");
  const bool has_frame = j.contains("frame"), has_model = j.contains("model");
  if (has_frame == has_model) throw UsageError("structure file needs exactly one of \"frame\" and \"model\"");

  Structure s{j.at("name").get<std::string>(), heisenberg_frame(), std::nullopt};
  if (has_frame) {
    const json &f = j.at("frame");
    if (!f.is_object()) throw UsageError("\"frame\" must be an object");
    s.frame = Frame(read_field(f, "f1"), read_field(f, "f2"));
  } else {
    const json &m = j.at("model");
    if (!m.is_object()) throw UsageError("\"model\" must be an object");
    s.model = QuadraticModel{read_number(m, "a"), read_number(m, "b"), read_number(m, "c")};
    s.frame = model_frame(*s.model);
  }
  return checked(std::move(s));
}

Structure load_structure(const std::string &spec) {
  if (spec == "heisenberg") return {"heisenberg", heisenberg_frame(), QuadraticModel{}};
  if (spec.rfind("model:", 0) == 0) {
    const QuadraticModel m = parse_model_triple(std::string_view(spec).substr(6));
    return checked({spec, model_frame(m), m});
  }
  if (spec.rfind("rotated-heisenberg:", 0) == 0) {
    const Expr theta = parse(std::string_view(spec).substr(19));
    return checked({spec, rotate_frame(heisenberg_frame(), theta), std::nullopt});
  }
  std::ifstream in(spec);
  if (!in) throw UsageError("cannot open structure file \"" + spec + "\" (built-ins: heisenberg, model:a,b,c, rotated-heisenberg:θ)");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_structure(text.str());
}

} // namespace srheat
