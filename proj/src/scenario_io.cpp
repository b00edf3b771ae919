#include <json.hpp>

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <memory>
#include <sstream>
#include <utility>

#include "seactrl/io.hpp"

namespace seactrl {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ValidationError(msg); }

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& ctx) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : allowed) known = known || item.key() == k;
    if (!known) fail("unknown key \"" + item.key() + "\" in " + ctx);
  }
}

const json* find(const json& j, const char* key) {
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

double as_num(const json& j, const std::string& ctx) {
  if (!j.is_number()) fail(ctx + " must be a number");
  return j.get<double>();
}

void read_num(const json& j, const char* key, double& out, const std::string& ctx) {
  if (const json* v = find(j, key)) out = as_num(*v, ctx + "." + key);
}

std::string as_str(const json& j, const std::string& ctx) {
  if (!j.is_string()) fail(ctx + " must be a string");
  return j.get<std::string>();
}

std::vector<double> as_num_array(const json& j, const std::string& ctx) {
  if (!j.is_array()) fail(ctx + " must be an array of numbers");
  std::vector<double> r(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) r[i] = as_num(j[i], ctx);
  return r;
}

void read_vec(const json& j, const char* key, Eigen::VectorXd& out, const std::string& ctx) {
  if (const json* v = find(j, key)) {
    const std::vector<double> r = as_num_array(*v, ctx + "." + key);
    out = Eigen::Map<const Eigen::VectorXd>(r.data(), static_cast<Eigen::Index>(r.size()));
  }
}

JointParamValues read_params(const json& j, const std::string& ctx) {
  check_keys(j, {"J", "m", "b_J", "b_m", "k"}, ctx);
  JointParamValues p{};
  const std::pair<const char*, double*> fields[] = {
      {"J", &p.J}, {"m", &p.m}, {"b_J", &p.b_J}, {"b_m", &p.b_m}, {"k", &p.k}};
  for (const auto& [key, dst] : fields) {
    const json* v = find(j, key);
    if (!v) fail(ctx + " must give " + key);
    *dst = as_num(*v, ctx + "." + std::string(key));
  }
  return p;
}

void overlay_params(const json& j, JointParamValues& p, const std::string& ctx) {
  check_keys(j, {"J", "m", "b_J", "b_m", "k"}, ctx);
  read_num(j, "J", p.J, ctx);
  read_num(j, "m", p.m, ctx);
  read_num(j, "b_J", p.b_J, ctx);
  read_num(j, "b_m", p.b_m, ctx);
  read_num(j, "k", p.k, ctx);
}

std::shared_ptr<const Trajectory> read_trajectory(const json& j, const std::string& ctx) {
  if (!j.is_object()) fail(ctx + " must be an object");
  const json* tv = find(j, "type");
  if (!tv) fail(ctx + " must give a type");
  const std::string type = as_str(*tv, ctx + ".type");

  if (type == "constant") {
    check_keys(j, {"type", "value"}, ctx);
    double value = 0.0;
    read_num(j, "value", value, ctx);
    return std::make_shared<ConstantTrajectory>(value);
  }
  if (type == "step") {
    check_keys(j, {"type", "initial", "times", "values", "rise_time"}, ctx);
    const json* times = find(j, "times");
    const json* values = find(j, "values");
    if (!times || !values) fail(ctx + " must give times and values");
    double initial = 0.0, rise = 0.2;
    read_num(j, "initial", initial, ctx);
    read_num(j, "rise_time", rise, ctx);
    return std::make_shared<StepTrajectory>(initial, as_num_array(*times, ctx + ".times"),
                                            as_num_array(*values, ctx + ".values"), rise);
  }
  if (type == "sine") {
    check_keys(j, {"type", "amplitude", "frequency_hz", "phase", "offset"}, ctx);
    double amp = 0.0, f = 0.0, phase = 0.0, offset = 0.0;
    read_num(j, "amplitude", amp, ctx);
    read_num(j, "frequency_hz", f, ctx);
    read_num(j, "phase", phase, ctx);
    read_num(j, "offset", offset, ctx);
    return std::make_shared<SineTrajectory>(amp, f, phase, offset);
  }
  fail(ctx + ".type must be \"constant\", \"step\" or \"sine\"");
}

JointControlConfig read_control(const json& j, const std::string& ctx) {
  if (!j.is_object()) fail(ctx + " must be an object");
  check_keys(j, {"mode", "reference", "dob_bandwidth", "poles", "force_kp", "force_kd"}, ctx);
  JointControlConfig c;
  c.reference = std::make_shared<ConstantTrajectory>(0.0);
  if (const json* m = find(j, "mode")) {
    const std::string s = as_str(*m, ctx + ".mode");
    if (s == "position") {
      c.mode = ControlMode::Position;
    } else if (s == "force") {
      c.mode = ControlMode::Force;
    } else {
      fail(ctx + ".mode must be \"position\" or \"force\"");
    }
  }
  read_num(j, "dob_bandwidth", c.dob_bandwidth, ctx);
  if (const json* p = find(j, "poles")) {
    if (!p->is_array() || p->size() != 4) fail(ctx + ".poles must be an array of 4 numbers");
    for (std::size_t i = 0; i < 4; ++i) c.poles[i] = as_num((*p)[i], ctx + ".poles");
  }
  read_num(j, "force_kp", c.force_kp, ctx);
  read_num(j, "force_kd", c.force_kd, ctx);
  if (const json* r = find(j, "reference")) c.reference = read_trajectory(*r, ctx + ".reference");
  return c;
}

void read_world(const json& j, World& w) {
  if (!j.is_object()) fail("world must be an object");
  check_keys(j, {"geometry", "joints", "friction", "environment", "payloads"}, "world");

  if (const json* g = find(j, "geometry")) {
    check_keys(*g, {"lengths", "masses", "com_offsets", "link_inertias", "gravity"},
               "world.geometry");
    read_vec(*g, "lengths", w.geometry.lengths, "world.geometry");
    read_vec(*g, "masses", w.geometry.masses, "world.geometry");
    read_vec(*g, "com_offsets", w.geometry.com_offsets, "world.geometry");
    read_vec(*g, "link_inertias", w.geometry.link_inertias, "world.geometry");
    read_num(*g, "gravity", w.geometry.gravity, "world.geometry");
  }

  if (const json* js = find(j, "joints")) {
    if (!js->is_array()) fail("world.joints must be an array");
    std::vector<JointParams> joints;
    for (std::size_t i = 0; i < js->size(); ++i) {
      const std::string ctx = "world.joints[" + std::to_string(i) + "]";
      const json& item = (*js)[i];
      if (!item.is_object()) fail(ctx + " must be an object");
      check_keys(item, {"nominal", "true"}, ctx);
      const json* nom = find(item, "nominal");
      if (!nom) fail(ctx + " must give nominal parameters");
      JointParams p;
      p.nominal = read_params(*nom, ctx + ".nominal");
      p.true_phys = p.nominal;
      if (const json* t = find(item, "true")) overlay_params(*t, p.true_phys, ctx + ".true");
      joints.push_back(p);
    }
    w.joints = std::move(joints);
  }

  if (const json* f = find(j, "friction")) {
    check_keys(*f,
               {"coulomb_motor", "coulomb_link", "ripple_amplitude", "ripple_hz",
                "smoothing_band"},
               "world.friction");
    read_vec(*f, "coulomb_motor", w.friction.coulomb_motor, "world.friction");
    read_vec(*f, "coulomb_link", w.friction.coulomb_link, "world.friction");
    read_vec(*f, "ripple_amplitude", w.friction.ripple_amplitude, "world.friction");
    read_vec(*f, "ripple_hz", w.friction.ripple_hz, "world.friction");
    read_num(*f, "smoothing_band", w.friction.smoothing_band, "world.friction");
  }

  if (const json* e = find(j, "environment")) {
    check_keys(*e, {"active", "K_e", "D_e", "M_e", "q_e"}, "world.environment");
    if (const json* a = find(*e, "active")) {
      if (!a->is_array()) fail("world.environment.active must be an array of booleans");
      std::vector<bool> active(a->size());
      for (std::size_t i = 0; i < a->size(); ++i) {
        if (!(*a)[i].is_boolean()) fail("world.environment.active must be an array of booleans");
        active[i] = (*a)[i].get<bool>();
      }
      w.environment.active = std::move(active);
    }
    read_vec(*e, "K_e", w.environment.K_e, "world.environment");
    read_vec(*e, "D_e", w.environment.D_e, "world.environment");
    read_vec(*e, "M_e", w.environment.M_e, "world.environment");
    read_vec(*e, "q_e", w.environment.q_e, "world.environment");
  }

  if (const json* p = find(j, "payloads")) {
    if (!p->is_array()) fail("world.payloads must be an array");
    std::vector<PayloadEvent> events;
    for (std::size_t i = 0; i < p->size(); ++i) {
      const std::string ctx = "world.payloads[" + std::to_string(i) + "]";
      const json& item = (*p)[i];
      if (!item.is_object()) fail(ctx + " must be an object");
      check_keys(item, {"time", "location", "link", "mass"}, ctx);
      PayloadEvent ev;
      read_num(item, "time", ev.time, ctx);
      read_num(item, "mass", ev.mass, ctx);
      if (const json* loc = find(item, "location")) {
        const std::string s = as_str(*loc, ctx + ".location");
        if (s == "midspan") {
          ev.location = PayloadLocation::Midspan;
        } else if (s == "tip") {
          ev.location = PayloadLocation::Tip;
        } else {
          fail(ctx + ".location must be \"midspan\" or \"tip\"");
        }
      }
      if (const json* link = find(item, "link")) {
        if (!link->is_number_integer() && !link->is_number_unsigned())
          fail(ctx + ".link must be an integer");
        ev.link = link->get<int>();
      }
      events.push_back(ev);
    }
    w.payloads = std::move(events);
  }
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

json write_params(const JointParamValues& p) {
  return json{{"J", p.J}, {"m", p.m}, {"b_J", p.b_J}, {"b_m", p.b_m}, {"k", p.k}};
}

json write_trajectory(const Trajectory& t) {
  if (const auto* c = dynamic_cast<const ConstantTrajectory*>(&t)) {
    return json{{"type", "constant"}, {"value", c->value()}};
  }
  if (const auto* s = dynamic_cast<const StepTrajectory*>(&t)) {
    return json{{"type", "step"},
                {"initial", s->initial()},
                {"times", s->times()},
                {"values", s->values()},
                {"rise_time", s->rise_time()}};
  }
  if (const auto* s = dynamic_cast<const SineTrajectory*>(&t)) {
    return json{{"type", "sine"},
                {"amplitude", s->amplitude()},
                {"frequency_hz", s->frequency_hz()},
                {"phase", s->phase()},
                {"offset", s->offset()}};
  }
  fail("cannot serialize this reference trajectory type");
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(std::string("scenario parse error: ") + e.what());
  }
  if (!j.is_object()) fail("scenario must be a JSON object");
  check_keys(j,
             {"name", "dt", "duration", "seed", "noise_std", "torque_limit", "world", "control",
              "metrics"},
             "scenario");

  Scenario sc;
  sc.world = default_world(false, 0.0);

  if (const json* n = find(j, "name")) sc.name = as_str(*n, "scenario.name");
  read_num(j, "dt", sc.dt, "scenario");
  read_num(j, "duration", sc.duration, "scenario");
  read_num(j, "noise_std", sc.noise_std, "scenario");
  if (const json* s = find(j, "seed")) {
    if (!s->is_number_integer() && !s->is_number_unsigned())
      fail("scenario.seed must be a non-negative integer");
    const long long v = s->get<long long>();
    if (v < 0) fail("scenario.seed must be a non-negative integer");
    sc.seed = static_cast<unsigned long>(v);
  }
  if (const json* tl = find(j, "torque_limit")) {
    // null keeps the default unlimited actuator
    if (!tl->is_null()) sc.torque_limit = as_num(*tl, "scenario.torque_limit");
  }

  if (const json* w = find(j, "world")) read_world(*w, sc.world);

  if (const json* c = find(j, "control")) {
    if (!c->is_array()) fail("control must be an array");
    sc.control.clear();
    for (std::size_t i = 0; i < c->size(); ++i) {
      sc.control.push_back(read_control((*c)[i], "control[" + std::to_string(i) + "]"));
    }
  } else {
    sc.control.clear();
    for (std::size_t i = 0; i < sc.world.joints.size(); ++i) {
      JointControlConfig cfg;
      cfg.reference = std::make_shared<ConstantTrajectory>(0.0);
      sc.control.push_back(cfg);
    }
  }

  if (const json* m = find(j, "metrics")) {
    check_keys(*m, {"post_transient", "settling_band"}, "metrics");
    read_num(*m, "post_transient", sc.metrics.post_transient, "metrics");
    read_num(*m, "settling_band", sc.metrics.settling_band, "metrics");
  }

  validate_scenario(sc);
  return sc;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot read scenario file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_scenario(text.str());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

std::string scenario_to_json(const Scenario& sc) {
  json j;
  j["name"] = sc.name;
  j["dt"] = sc.dt;
  j["duration"] = sc.duration;
  j["seed"] = sc.seed;
  j["noise_std"] = sc.noise_std;
  j["torque_limit"] =
      std::isfinite(sc.torque_limit) ? json(sc.torque_limit) : json(nullptr);

  json geo;
  geo["lengths"] = to_std(sc.world.geometry.lengths);
  geo["masses"] = to_std(sc.world.geometry.masses);
  geo["com_offsets"] = to_std(sc.world.geometry.com_offsets);
  geo["link_inertias"] = to_std(sc.world.geometry.link_inertias);
  geo["gravity"] = sc.world.geometry.gravity;

  json joints = json::array();
  for (const JointParams& p : sc.world.joints) {
    joints.push_back(json{{"nominal", write_params(p.nominal)},
                          {"true", write_params(p.true_phys)}});
  }

  const FrictionConfig& f = sc.world.friction;
  json friction{{"coulomb_motor", to_std(f.coulomb_motor)},
                {"coulomb_link", to_std(f.coulomb_link)},
                {"ripple_amplitude", to_std(f.ripple_amplitude)},
                {"ripple_hz", to_std(f.ripple_hz)},
                {"smoothing_band", f.smoothing_band}};

  const Environment& e = sc.world.environment;
  json environment{{"active", e.active},
                   {"K_e", to_std(e.K_e)},
                   {"D_e", to_std(e.D_e)},
                   {"M_e", to_std(e.M_e)},
                   {"q_e", to_std(e.q_e)}};

  json payloads = json::array();
  for (const PayloadEvent& ev : sc.world.payloads) {
    payloads.push_back(
        json{{"time", ev.time},
             {"location", ev.location == PayloadLocation::Midspan ? "midspan" : "tip"},
             {"link", ev.link},
             {"mass", ev.mass}});
  }

  j["world"] = json{{"geometry", std::move(geo)},
                    {"joints", std::move(joints)},
                    {"friction", std::move(friction)},
                    {"environment", std::move(environment)},
                    {"payloads", std::move(payloads)}};

  json control = json::array();
  for (const JointControlConfig& c : sc.control) {
    if (!c.reference) fail("cannot serialize a control config without a reference");
    control.push_back(json{{"mode", c.mode == ControlMode::Position ? "position" : "force"},
                           {"reference", write_trajectory(*c.reference)},
                           {"dob_bandwidth", c.dob_bandwidth},
                           {"poles", c.poles},
                           {"force_kp", c.force_kp},
                           {"force_kd", c.force_kd}});
  }
  j["control"] = std::move(control);

  j["metrics"] = json{{"post_transient", sc.metrics.post_transient},
                      {"settling_band", sc.metrics.settling_band}};

  return j.dump(2) + "\n";
}

}  // namespace seactrl
