#include "saddleflow/config.hpp"

#include <fstream>

#include "saddleflow/problems.hpp"

namespace saddleflow {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError("config: " + where + ": " + what);
}

const json& field(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) fail(where, "missing required field '" + key + "'");
  return j.at(key);
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

Vec vector_field(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a nonempty array of numbers");
  Vec out(static_cast<Index>(j.size()));
  for (Index i = 0; i < out.size(); ++i) {
    if (!j[i].is_number()) fail(where, "expected a number at index " + std::to_string(i));
    out[i] = j[i].get<double>();
  }
  return out;
}

Mat matrix_field(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a nonempty array of rows");
  const Index rows = static_cast<Index>(j.size());
  const Index cols = static_cast<Index>(j[0].size());
  Mat out(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    if (static_cast<Index>(j[r].size()) != cols) fail(where, "ragged matrix rows");
    for (Index c = 0; c < cols; ++c) out(r, c) = j[r][c].get<double>();
  }
  return out;
}

StepSchedule schedule_field(const json& j, const std::string& where) {
  if (j.is_number()) return StepSchedule::constant(j.get<double>());
  if (!j.is_object()) fail(where, "expected a number or a schedule object");
  const std::string kind = field(j, "kind", where).get<std::string>();
  if (kind == "constant") return StepSchedule::constant(number(field(j, "a0", where), where));
  if (kind != "power") fail(where, "schedule kind must be 'constant' or 'power'");
  const double a0 = number(field(j, "a0", where), where + ".a0");
  const double exponent = number(field(j, "exponent", where), where + ".exponent");
  auto offset = StepSchedule::Offset::k_plus_1;
  if (j.contains("offset")) {
    const std::string o = j.at("offset").get<std::string>();
    if (o == "k")
      offset = StepSchedule::Offset::k;
    else if (o == "k+1")
      offset = StepSchedule::Offset::k_plus_1;
    else
      fail(where + ".offset", "must be 'k' or 'k+1'");
  }
  try {
    return StepSchedule::power(a0, exponent, offset);
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
}

json schedule_to_json(const StepSchedule& s) {
  if (s.kind == StepSchedule::Kind::constant) return {{"kind", "constant"}, {"a0", s.a0}};
  return {{"kind", "power"},
          {"a0", s.a0},
          {"exponent", s.exponent},
          {"offset", s.offset == StepSchedule::Offset::k ? "k" : "k+1"}};
}

SaddleProblem problem_from_spec(const json& spec, double sigma) {
  if (spec.is_string()) return problem_by_id(spec.get<std::string>(), sigma);
  if (spec.is_object() && spec.contains("quadratic")) {
    const json& q = spec.at("quadratic");
    return make_quadratic(matrix_field(field(q, "P", "problem.quadratic"), "problem.quadratic.P"),
                          matrix_field(field(q, "Q", "problem.quadratic"), "problem.quadratic.Q"),
                          matrix_field(field(q, "B", "problem.quadratic"), "problem.quadratic.B"),
                          vector_field(field(q, "c", "problem.quadratic"), "problem.quadratic.c"),
                          sigma);
  }
  fail("problem", "expected an id string or {\"quadratic\": {...}}");
}

} // namespace

std::string method_name(MethodId m) {
  switch (m) {
    case MethodId::sssgd: return "sssgd";
    case MethodId::simgd_o: return "simgd-o";
    case MethodId::simgd_os: return "simgd-os";
    case MethodId::simgd_a: return "simgd-a";
    case MethodId::sssgd_a: return "sssgd-a";
  }
  return "?";
}

MethodId method_from_name(const std::string& name) {
  if (name == "sssgd") return MethodId::sssgd;
  if (name == "simgd-o") return MethodId::simgd_o;
  if (name == "simgd-os") return MethodId::simgd_os;
  if (name == "simgd-a") return MethodId::simgd_a;
  if (name == "sssgd-a") return MethodId::sssgd_a;
  throw ConfigError("config: method: unknown method '" + name + "'");
}

SaddleProblem ExperimentConfig::make_problem() const {
  return problem_from_spec(problem_spec, noise_sigma);
}

ExperimentConfig ExperimentConfig::with_cell(const SweepCell& cell) const {
  ExperimentConfig out = *this;
  out.sweep.clear();
  if (method == MethodId::simgd_os) {
    if (cell.p) {
      detail::require(out.alpha.has_value(), "sweep: base alpha schedule missing");
      out.alpha = StepSchedule::power(out.alpha->a0, *cell.p, out.alpha->offset);
    }
    if (cell.q) {
      detail::require(out.beta.has_value(), "sweep: base beta schedule missing");
      out.beta = StepSchedule::power(out.beta->a0, *cell.q, out.beta->offset);
    }
  } else if (method == MethodId::simgd_a || method == MethodId::sssgd_a) {
    detail::require(out.anchor.has_value(), "sweep: base anchor parameters missing");
    if (cell.p) out.anchor->p = *cell.p;
    if (cell.gamma) out.anchor->gamma = *cell.gamma;
    if (cell.epsilon) out.anchor->epsilon = *cell.epsilon;
  } else if (cell.p || cell.q || cell.gamma || cell.epsilon) {
    throw ConfigError("config: sweep: overrides not applicable to method " +
                      method_name(method));
  }
  return out;
}

ExperimentConfig parse_run_config(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  if (j.contains("command") && j.at("command") != "run")
    throw ConfigError("config: command: expected 'run', got '" +
                      j.at("command").get<std::string>() + "'");

  ExperimentConfig cfg;
  cfg.problem_spec = field(j, "problem", "$");
  cfg.method = method_from_name(field(j, "method", "$").get<std::string>());
  cfg.z0 = vector_field(field(j, "z0", "$"), "z0");
  cfg.max_iter = field(j, "max_iter", "$").get<std::int64_t>();
  if (cfg.max_iter < 0) fail("max_iter", "must be nonnegative");
  cfg.noise_sigma = j.value("noise_sigma", 0.0);
  if (cfg.noise_sigma < 0.0) fail("noise_sigma", "must be nonnegative");

  if (j.contains("seeds")) {
    const json& s = j.at("seeds");
    cfg.seeds.base_seed = field(s, "base_seed", "seeds").get<std::uint64_t>();
    cfg.seeds.count = field(s, "count", "seeds").get<int>();
    if (cfg.seeds.count < 1) fail("seeds.count", "must be >= 1");
  }
  if (j.contains("log_policy")) {
    const json& lp = j.at("log_policy");
    const std::string kind = field(lp, "kind", "log_policy").get<std::string>();
    if (kind == "every")
      cfg.log_policy = LogPolicy::every();
    else if (kind == "geometric")
      cfg.log_policy = LogPolicy::geometric(lp.value("ratio", 1.05));
    else
      fail("log_policy.kind", "must be 'every' or 'geometric'");
    if (cfg.log_policy.kind == LogPolicy::Kind::geometric && cfg.log_policy.ratio <= 1.0)
      fail("log_policy.ratio", "must exceed 1");
  }
  if (j.contains("emit")) {
    const std::string e = j.at("emit").get<std::string>();
    if (e == "csv") cfg.emit = Emit::csv;
    else if (e == "svg") cfg.emit = Emit::svg;
    else if (e == "both") cfg.emit = Emit::both;
    else fail("emit", "must be 'csv', 'svg', or 'both'");
  }
  cfg.out_dir = j.value("out_dir", "");

  switch (cfg.method) {
    case MethodId::sssgd:
      cfg.alpha = schedule_field(field(j, "alpha", "$"), "alpha");
      break;
    case MethodId::simgd_o: {
      cfg.alpha = schedule_field(field(j, "alpha", "$"), "alpha");
      cfg.beta = schedule_field(field(j, "beta", "$"), "beta");
      if (cfg.alpha->kind != StepSchedule::Kind::constant ||
          cfg.beta->kind != StepSchedule::Kind::constant)
        fail("alpha/beta", "simgd-o takes constant step sizes");
      break;
    }
    case MethodId::simgd_os:
      cfg.alpha = schedule_field(field(j, "alpha", "$"), "alpha");
      cfg.beta = schedule_field(field(j, "beta", "$"), "beta");
      break;
    case MethodId::simgd_a:
    case MethodId::sssgd_a: {
      const json& a = field(j, "anchor", "$");
      AnchorParams ap;
      ap.p = number(field(a, "p", "anchor"), "anchor.p");
      ap.gamma = number(field(a, "gamma", "anchor"), "anchor.gamma");
      ap.epsilon = a.value("epsilon", 0.0);
      if (!(ap.p > 0.5 && ap.p < 1.0)) fail("anchor.p", "must lie in (1/2, 1)");
      if (!(ap.gamma > 0.0)) fail("anchor.gamma", "must be positive");
      if (!(ap.epsilon >= 0.0 && ap.epsilon < 0.5)) fail("anchor.epsilon", "must lie in [0, 1/2)");
      cfg.anchor = ap;
      break;
    }
  }

  if (j.contains("sweep")) {
    const json& sw = j.at("sweep");
    if (!sw.is_array() || sw.empty()) fail("sweep", "expected a nonempty array");
    for (const json& cell : sw) {
      SweepCell c;
      c.label = field(cell, "label", "sweep[]").get<std::string>();
      if (cell.contains("p")) c.p = cell.at("p").get<double>();
      if (cell.contains("q")) c.q = cell.at("q").get<double>();
      if (cell.contains("gamma")) c.gamma = cell.at("gamma").get<double>();
      if (cell.contains("epsilon")) c.epsilon = cell.at("epsilon").get<double>();
      cfg.sweep.push_back(std::move(c));
    }
    for (const auto& c : cfg.sweep) (void)cfg.with_cell(c);  // validate overrides up front
  }
  return cfg;
}

nlohmann::json ExperimentConfig::resolved() const {
  json j;
  j["command"] = "run";
  j["problem"] = problem_spec;
  j["method"] = method_name(method);
  j["z0"] = std::vector<double>(z0.data(), z0.data() + z0.size());
  j["max_iter"] = max_iter;
  j["noise_sigma"] = noise_sigma;
  j["seeds"] = {{"base_seed", seeds.base_seed}, {"count", seeds.count}};
  j["log_policy"] = log_policy.kind == LogPolicy::Kind::every
                        ? json{{"kind", "every"}}
                        : json{{"kind", "geometric"}, {"ratio", log_policy.ratio}};
  j["emit"] = emit == Emit::csv ? "csv" : (emit == Emit::svg ? "svg" : "both");
  if (alpha) j["alpha"] = schedule_to_json(*alpha);
  if (beta) j["beta"] = schedule_to_json(*beta);
  if (anchor)
    j["anchor"] = {{"p", anchor->p}, {"gamma", anchor->gamma}, {"epsilon", anchor->epsilon}};
  if (!sweep.empty()) {
    json sw = json::array();
    for (const auto& c : sweep) {
      json cell{{"label", c.label}};
      if (c.p) cell["p"] = *c.p;
      if (c.q) cell["q"] = *c.q;
      if (c.gamma) cell["gamma"] = *c.gamma;
      if (c.epsilon) cell["epsilon"] = *c.epsilon;
      sw.push_back(std::move(cell));
    }
    j["sweep"] = std::move(sw);
  }
  return j;
}

SaddleProblem PhaseConfig::make_problem() const { return problem_from_spec(problem_spec, 0.0); }

PhaseConfig parse_phase_config(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  if (j.contains("command") && j.at("command") != "phase")
    throw ConfigError("config: command: expected 'phase', got '" +
                      j.at("command").get<std::string>() + "'");

  PhaseConfig cfg;
  cfg.problem_spec = field(j, "problem", "$");
  const json& flows = field(j, "flows", "$");
  if (!flows.is_array() || flows.empty()) throw ConfigError("config: flows: expected a nonempty array");
  for (const json& f : flows) {
    FlowRequest r;
    r.label = field(f, "label", "flows[]").get<std::string>();
    r.kind = field(f, "kind", "flows[]").get<std::string>();
    if (r.kind != "plain" && r.kind != "optimistic" && r.kind != "anchored")
      throw ConfigError("config: flows[].kind: must be 'plain', 'optimistic', or 'anchored'");
    r.z0 = vector_field(field(f, "z0", "flows[]"), "flows[].z0");
    r.h = number(field(f, "h", "flows[]"), "flows[].h");
    r.horizon = number(field(f, "T", "flows[]"), "flows[].T");
    r.alpha = f.value("alpha", 1.0);
    r.beta = f.value("beta", 0.5);
    r.gamma = f.value("gamma", 2.0);
    r.t0 = f.value("t0", 1e-4);
    cfg.flows.push_back(std::move(r));
  }
  if (j.contains("emit")) {
    const std::string e = j.at("emit").get<std::string>();
    if (e == "csv") cfg.emit = Emit::csv;
    else if (e == "svg") cfg.emit = Emit::svg;
    else if (e == "both") cfg.emit = Emit::both;
    else throw ConfigError("config: emit: must be 'csv', 'svg', or 'both'");
  }
  cfg.out_dir = j.value("out_dir", "");
  return cfg;
}

nlohmann::json PhaseConfig::resolved() const {
  json j;
  j["command"] = "phase";
  j["problem"] = problem_spec;
  json flows = json::array();
  for (const auto& f : this->flows) {
    json jf{{"label", f.label}, {"kind", f.kind},
            {"z0", std::vector<double>(f.z0.data(), f.z0.data() + f.z0.size())},
            {"h", f.h},          {"T", f.horizon}};
    if (f.kind == "optimistic") {
      jf["alpha"] = f.alpha;
      jf["beta"] = f.beta;
    }
    if (f.kind == "anchored") {
      jf["gamma"] = f.gamma;
      jf["t0"] = f.t0;
    }
    flows.push_back(std::move(jf));
  }
  j["flows"] = std::move(flows);
  j["emit"] = emit == Emit::csv ? "csv" : (emit == Emit::svg ? "svg" : "both");
  return j;
}

nlohmann::json load_config_json(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw ConfigError("config: cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    // nlohmann reports byte offsets; recover the line for the message
    std::ifstream again(path);
    std::string text((std::istreambuf_iterator<char>(again)), std::istreambuf_iterator<char>());
    std::size_t line = 1;
    for (std::size_t i = 0; i < std::min<std::size_t>(e.byte, text.size()); ++i)
      if (text[i] == '\n') ++line;
    throw ConfigError("config: " + path + ":" + std::to_string(line) + ": " + e.what());
  }
}

} // namespace saddleflow
