#include "blowup/verify/report_json.hpp"

#include "blowup/format.hpp"

namespace blowup::verify {

Json real_json(double x) { return format_real(x); }

Json point_json(const conformal::Point& p) {
  Json a = Json::array();
  for (double c : p.coords()) a.push_back(real_json(c));
  return a;
}

namespace {

Json reals(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(real_json(x));
  return a;
}

Json witness(const PairWitness& w) {
  Json j;
  j["x"] = point_json(w.x);
  j["y"] = point_json(w.y);
  j["ratio"] = real_json(w.ratio);
  j["case"] = w.pair_case;
  return j;
}

}  // namespace

Json to_json(const ResidualReport& r) {
  Json j;
  j["label"] = r.label;
  j["points"] = r.points;
  j["h"] = reals(r.h);
  j["max_residual"] = reals(r.max_residual);
  j["max_relative"] = reals(r.max_relative);
  j["witness"] = reals(r.witness);
  j["orders"] = reals(r.orders);
  j["richardson"] = real_json(r.richardson);
  j["order_in_band"] = r.order_in_band();
  j["smoothness_flag"] = r.smoothness_flag();
  return j;
}

Json to_json(const LipschitzReport& r) {
  Json j;
  j["T"] = real_json(r.T);
  j["D"] = real_json(r.D);
  j["seed"] = r.seed;
  j["shards"] = r.shards;
  j["pairs"] = r.pairs;
  j["max_ratio"] = real_json(r.max_ratio);
  j["y0_max"] = real_json(r.y0_max);
  j["gradient_bound"] = real_json(r.gradient_bound);
  j["passed"] = r.passed;
  j["worst"] = witness(r.worst);
  Json cases = Json::array();
  for (const auto& c : r.cases) {
    Json jc;
    jc["case"] = c.name;
    jc["count"] = c.count;
    jc["max_ratio"] = real_json(c.max_ratio);
    cases.push_back(jc);
  }
  j["cases"] = cases;
  return j;
}

Json to_json(const HolderReport& r) {
  Json j;
  j["alpha"] = real_json(r.alpha);
  j["C"] = real_json(r.C);
  j["bound"] = real_json(r.bound);
  j["pairs"] = r.pairs;
  j["max_ratio"] = real_json(r.max_ratio);
  j["max_ratio_near"] = real_json(r.max_ratio_near);
  j["max_ratio_far"] = real_json(r.max_ratio_far);
  j["passed"] = r.passed;
  j["worst"] = witness(r.worst);
  return j;
}

Json to_json(const CriticalOrderReport& r) {
  Json j;
  j["beta"] = real_json(r.beta);
  j["exponent"] = real_json(r.exponent);
  j["max_ratio"] = real_json(r.max_ratio);
  j["witness_t"] = real_json(r.witness_t);
  j["samples"] = r.samples;
  j["passed"] = r.passed;
  return j;
}

Json to_json(const std::vector<ScanStep>& history) {
  Json a = Json::array();
  for (const auto& s : history) {
    Json j;
    j["T"] = real_json(s.T);
    j["value"] = real_json(s.value);
    j["passed"] = s.passed;
    a.push_back(j);
  }
  return a;
}

}  // namespace blowup::verify
