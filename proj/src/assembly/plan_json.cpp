#include <cmath>
#include <sstream>

#include <json.hpp>

#include "blowup/assembly/plan.hpp"
#include "blowup/format.hpp"

namespace blowup::assembly {
namespace {

using nlohmann::ordered_json;
constexpr int kPlanVersion = 1;

ordered_json real(double x) { return format_real(x); }

ordered_json point(const conformal::Point& p) {
  ordered_json a = ordered_json::array();
  for (double c : p.coords()) a.push_back(real(c));
  return a;
}

double read_real(const ordered_json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_string()) return parse_real(v.get<std::string>());
  if (v.is_number()) return v.get<double>();
  throw InvalidArgument(std::string("plan field '") + key + "' must be a decimal string");
}

conformal::Point read_point(const ordered_json& j, const char* key) {
  std::vector<double> c;
  for (const auto& v : j.at(key)) c.push_back(v.is_string() ? parse_real(v.get<std::string>()) : v.get<double>());
  return conformal::Point(std::move(c));
}

void expect_close(double stored, double rebuilt, const char* what, std::size_t stage) {
  if (!(std::abs(stored - rebuilt) <= 1e-9 * std::max(std::abs(stored), std::abs(rebuilt)))) {
    std::ostringstream msg;
    msg << "plan stage " << stage << ": stored " << what << " " << stored << " does not match rebuilt " << rebuilt;
    throw InvalidArgument(msg.str());
  }
}

}  // namespace

std::string plan_to_json(const PlanResult& plan) {
  const BlowupSolution& sol = plan.solution;
  const PlanOptions& o = plan.options;
  ordered_json doc;
  doc["format"] = "blowup-plan";
  doc["version"] = kPlanVersion;
  doc["n"] = sol.dim().n();
  doc["epsilon"] = real(sol.epsilon());
  doc["growth"] = real(plan.growth);
  doc["complete"] = plan.complete;
  doc["diagnostic"] = plan.diagnostic;
  ordered_json opt;
  opt["xi0"] = real(o.xi0);
  ordered_json dir = ordered_json::array();
  for (double c : o.direction) dir.push_back(real(c));
  opt["direction"] = dir;
  opt["m"] = o.m;
  opt["D_min"] = real(o.D_min);
  opt["margin"] = real(o.margin);
  opt["measure_budget"] = real(o.measure_budget);
  opt["T_step"] = real(o.T_step);
  opt["profile_tol"] = real(o.profile_tol);
  opt["samples_per_window"] = o.sampling.samples_per_window;
  doc["options"] = opt;
  ordered_json stages = ordered_json::array();
  for (const Stage& s : sol.stages()) {
    ordered_json js;
    js["xi"] = point(s.xi);
    js["a"] = real(s.a);
    js["D"] = real(s.D);
    js["T"] = real(s.T);
    js["T_actual"] = real(s.T_actual);
    js["m"] = s.m;
    js["eta"] = real(s.eta);
    js["x_c"] = point(s.x_c);
    js["U_center"] = point(s.U.center);
    js["U_radius"] = real(s.U.radius);
    js["peak"] = real(s.peak);
    js["sup_deviation"] = real(s.sup_deviation);
    stages.push_back(js);
  }
  doc["stages"] = stages;
  doc["total_measure"] = real(sol.total_measure());
  return doc.dump(2) + "\n";
}

PlanResult plan_from_json(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw InvalidArgument(std::string("plan is not valid JSON: ") + e.what());
  }
  if (doc.value("format", "") != "blowup-plan") throw InvalidArgument("not a plan document");
  if (doc.at("version").get<int>() != kPlanVersion) throw InvalidArgument("unsupported plan version");
  const Dimension dim(doc.at("n").get<int>());
  PlanOptions o;
  const auto& jo = doc.at("options");
  o.xi0 = read_real(jo, "xi0");
  for (const auto& c : jo.at("direction")) o.direction.push_back(parse_real(c.get<std::string>()));
  o.m = jo.at("m").get<int>();
  o.D_min = read_real(jo, "D_min");
  o.margin = read_real(jo, "margin");
  o.measure_budget = read_real(jo, "measure_budget");
  o.T_step = read_real(jo, "T_step");
  o.profile_tol = read_real(jo, "profile_tol");
  o.sampling.samples_per_window = jo.at("samples_per_window").get<int>();

  std::vector<Stage> stages;
  for (const auto& js : doc.at("stages")) {
    Stage s = make_stage(dim, read_point(js, "xi"), read_real(js, "D"), read_real(js, "T"), js.at("m").get<int>(), o);
    const std::size_t idx = stages.size();
    expect_close(read_real(js, "T_actual"), s.T_actual, "T_actual", idx);
    expect_close(read_real(js, "peak"), s.peak, "peak", idx);
    expect_close(read_real(js, "U_radius"), s.U.radius, "U_radius", idx);
    stages.push_back(std::move(s));
  }
  return PlanResult{BlowupSolution(dim, read_real(doc, "epsilon"), std::move(stages)), doc.at("complete").get<bool>(),
                    doc.at("diagnostic").get<std::string>(), read_real(doc, "growth"), o};
}

}  // namespace blowup::assembly
