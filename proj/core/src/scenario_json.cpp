#include <fstream>
#include <initializer_list>
#include <sstream>

#include "carenet/errors.hpp"
#include "carenet/scenario.hpp"
#include "json.hpp"

namespace carenet {
namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                         std::string_view where) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw ConfigError("unknown key '" + key + "' in " + std::string(where));
  }
}

template <class T>
void read(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

DistributionSpec parse_distribution(const json& j, int default_max, std::string_view where) {
  reject_unknown_keys(j, {"power_law", "empirical", "deterministic"}, where);
  if (j.size() != 1) throw ConfigError(std::string(where) + " needs exactly one distribution");
  if (j.contains("deterministic")) return DeterministicSpec(j.at("deterministic").get<int>());
  if (j.contains("empirical")) return EmpiricalSpec(j.at("empirical").get<std::vector<double>>());
  const json& law = j.at("power_law");
  reject_unknown_keys(law, {"min", "max", "mean", "exponent"}, where);
  const int lo = law.value("min", 0);
  const int hi = law.value("max", default_max);
  if (law.contains("mean") == law.contains("exponent")) {
    throw ConfigError(std::string(where) + ": power_law needs exactly one of mean, exponent");
  }
  if (law.contains("mean")) return PowerLawSpec::with_mean(lo, hi, law.at("mean").get<double>());
  return PowerLawSpec::with_exponent(lo, hi, law.at("exponent").get<double>());
}

json distribution_to_json(const DistributionSpec& spec) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PowerLawSpec>) {
          json law{{"min", s.a_minus()}, {"max", s.a_plus()}};
          if (s.target_mean()) {
            law["mean"] = *s.target_mean();
          } else {
            law["exponent"] = s.exponent();
          }
          return json{{"power_law", law}};
        } else if constexpr (std::is_same_v<T, EmpiricalSpec>) {
          return json{{"empirical", s.masses()}};
        } else {
          return json{{"deterministic", s.k}};
        }
      },
      spec);
}

MaskPolicy parse_mask_policy(const json& j, std::string_view where) {
  if (j.is_string()) return {parse_mask_mode(j.get<std::string>()), std::nullopt};
  reject_unknown_keys(j, {"custom"}, where);
  const json& custom = j.at("custom");
  reject_unknown_keys(custom, {"weak", "strong", "caregiver_weak", "caregiver_strong"}, where);
  MaskWearTable table{};
  for (std::size_t k = 0; k < kEdgeKindCount; ++k) {
    const auto name = std::string(to_string(static_cast<EdgeKind>(k)));
    if (!custom.contains(name)) continue;
    for (const auto& role : custom.at(name)) {
      table[k][index(parse_role(role.get<std::string>()))] = true;
    }
  }
  return {MaskMode::none, table};
}

json mask_policy_to_json(const MaskPolicy& policy) {
  if (!policy.custom) return std::string(to_string(policy.mode));
  json custom = json::object();
  for (std::size_t k = 0; k < kEdgeKindCount; ++k) {
    json roles = json::array();
    for (Role r : kRoles) {
      if ((*policy.custom)[k][index(r)]) roles.push_back(std::string(to_string(r)));
    }
    custom[std::string(to_string(static_cast<EdgeKind>(k)))] = roles;
  }
  return json{{"custom", custom}};
}

void parse_population(const json& j, ScenarioConfig& c) {
  reject_unknown_keys(j, {"total", "fractions", "max_contacts", "weak", "strong", "pool"},
                      "population");
  read(j, "total", c.population.total);
  if (j.contains("fractions")) {
    const json& f = j.at("fractions");
    reject_unknown_keys(f, {"disabled", "caregiver", "essential", "general"}, "fractions");
    for (Role r : kRoles) read(f, std::string(to_string(r)).c_str(), c.population.fractions[index(r)]);
  }
  // C* first, so weak laws given without "max" pick it up.
  if (j.contains("max_contacts")) c.set_max_contacts(j.at("max_contacts").get<int>());
  if (j.contains("weak")) {
    const json& weak = j.at("weak");
    reject_unknown_keys(weak, {"disabled", "caregiver", "essential", "general"}, "weak");
    for (const auto& [group, periods] : weak.items()) {
      reject_unknown_keys(periods, {"pre", "lockdown"}, "weak." + group);
      const Role r = parse_role(group);
      if (periods.contains("pre")) {
        c.population.weak[index(r)][0] =
            parse_distribution(periods.at("pre"), c.max_contacts, "weak." + group + ".pre");
      }
      if (periods.contains("lockdown")) {
        c.population.weak[index(r)][1] = parse_distribution(periods.at("lockdown"), c.max_contacts,
                                                            "weak." + group + ".lockdown");
      }
    }
  }
  if (j.contains("strong")) c.population.strong = parse_distribution(j.at("strong"), 0, "strong");
  if (j.contains("pool")) c.population.pool = parse_distribution(j.at("pool"), 0, "pool");
}

std::optional<Role> parse_target(const json& j) {
  const auto name = j.get<std::string>();
  if (name == "all") return std::nullopt;
  return parse_role(name);
}

void parse_scenario(const json& j, ScenarioConfig& c) {
  reject_unknown_keys(j,
                      {"name", "population", "transmission", "rates", "timeline", "limit_mode",
                       "seeding", "vaccination", "literal_seed_formula", "sweep", "calibration"},
                      "scenario");
  read(j, "name", c.name);
  if (j.contains("population")) parse_population(j.at("population"), c);

  if (j.contains("transmission")) {
    const json& t = j.at("transmission");
    reject_unknown_keys(t, {"beta", "w_w", "w_s", "w_c", "m", "b", "tau"}, "transmission");
    auto& p = c.transmission;
    read(t, "beta", p.beta);
    read(t, "w_w", p.w_w);
    read(t, "w_s", p.w_s);
    read(t, "w_c", p.w_c);
    read(t, "m", p.m);
    read(t, "b", p.b);
    read(t, "tau", p.tau);
  }

  if (j.contains("rates")) {
    const json& r = j.at("rates");
    reject_unknown_keys(r, {"nu", "alpha", "eta", "mu", "rho", "zeta"}, "rates");
    const auto rate = [&r](const char* key, RateConstant& out) {
      if (r.contains(key)) out = RateConstant(r.at(key).get<double>());
    };
    rate("nu", c.rates.nu);
    rate("alpha", c.rates.alpha);
    rate("eta", c.rates.eta);
    rate("mu", c.rates.mu);
    rate("rho", c.rates.rho);
    rate("zeta", c.rates.zeta);
  }

  if (j.contains("timeline")) {
    const json& t = j.at("timeline");
    reject_unknown_keys(t, {"lockdown_day", "reopen_day", "end_day", "masks"}, "timeline");
    read(t, "lockdown_day", c.timeline.lockdown_day);
    read(t, "reopen_day", c.timeline.reopen_day);
    read(t, "end_day", c.timeline.end_day);
    if (t.contains("masks")) {
      const json& m = t.at("masks");
      reject_unknown_keys(m, {"before_lockdown", "during_lockdown", "after_reopening"}, "masks");
      if (m.contains("before_lockdown")) {
        c.timeline.before_lockdown = parse_mask_policy(m.at("before_lockdown"), "before_lockdown");
      }
      if (m.contains("during_lockdown")) {
        c.timeline.during_lockdown = parse_mask_policy(m.at("during_lockdown"), "during_lockdown");
      }
      if (m.contains("after_reopening")) {
        c.timeline.after_reopening = parse_mask_policy(m.at("after_reopening"), "after_reopening");
      }
    }
  }

  if (j.contains("limit_mode")) {
    c.limit_mode = parse_contact_limit_mode(j.at("limit_mode").get<std::string>());
  }

  if (j.contains("seeding")) {
    const json& s = j.at("seeding");
    reject_unknown_keys(s, {"count", "target", "compartment"}, "seeding");
    if (s.contains("count")) {
      const json& count = s.at("count");
      if (count.is_string() && count.get<std::string>() == "auto") {
        c.seeding.count.reset();
      } else {
        c.seeding.count = count.get<std::int64_t>();
      }
    }
    if (s.contains("target")) c.seeding.target = parse_target(s.at("target"));
    if (s.contains("compartment")) {
      const auto comp = s.at("compartment").get<std::string>();
      if (comp == "A") {
        c.seeding.compartment = SeedCompartment::A;
      } else if (comp == "I") {
        c.seeding.compartment = SeedCompartment::I;
      } else {
        throw ConfigError("seeding compartment must be A or I");
      }
    }
  }

  if (j.contains("vaccination")) {
    const json& v = j.at("vaccination");
    if (v.is_null()) {
      c.vaccination.reset();
    } else {
      reject_unknown_keys(v, {"doses", "target", "day"}, "vaccination");
      VaccinationSpec spec;
      read(v, "doses", spec.doses);
      if (v.contains("target")) spec.target = parse_role(v.at("target").get<std::string>());
      read(v, "day", spec.day);
      c.vaccination = spec;
    }
  }

  read(j, "literal_seed_formula", c.literal_seed_formula);

  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    reject_unknown_keys(s,
                        {"mask_mode", "limit_mode", "pool_size", "seeding_target",
                         "vaccination_target", "b", "m", "w_c"},
                        "sweep");
    read(s, "mask_mode", c.sweep.mask_mode);
    read(s, "limit_mode", c.sweep.limit_mode);
    read(s, "pool_size", c.sweep.pool_size);
    read(s, "seeding_target", c.sweep.seeding_target);
    read(s, "vaccination_target", c.sweep.vaccination_target);
    read(s, "b", c.sweep.b);
    read(s, "m", c.sweep.m);
    read(s, "w_c", c.sweep.w_c);
  }

  if (j.contains("calibration")) {
    const json& k = j.at("calibration");
    reject_unknown_keys(k,
                        {"sar_targets", "sar_trials", "taus", "cstars", "trials_per_cell",
                         "min_cases", "filter_day", "window"},
                        "calibration");
    CalibrationSettings& cal = c.calibration;
    if (k.contains("sar_targets")) {
      const json& t = k.at("sar_targets");
      reject_unknown_keys(t, {"household", "weak", "caregiving"}, "sar_targets");
      read(t, "household", cal.sar.household);
      read(t, "weak", cal.sar.weak);
      read(t, "caregiving", cal.sar.caregiving);
    }
    read(k, "sar_trials", cal.sar_trials);
    read(k, "taus", cal.taus);
    read(k, "cstars", cal.cstars);
    read(k, "trials_per_cell", cal.trials_per_cell);
    read(k, "min_cases", cal.min_cases);
    read(k, "filter_day", cal.filter_day);
    if (k.contains("window")) {
      const json& w = k.at("window");
      reject_unknown_keys(w, {"first_day", "last_day"}, "window");
      read(w, "first_day", cal.window.first_day);
      read(w, "last_day", cal.window.last_day);
    }
  }
}

}  // namespace

ScenarioConfig scenario_from_json_text(std::string_view text) {
  ScenarioConfig config;
  try {
    parse_scenario(json::parse(text), config);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario file: ") + e.what());
  }
  config.validate();
  return config;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return scenario_from_json_text(text.str());
}

std::string scenario_to_json_text(const ScenarioConfig& c) {
  json weak = json::object();
  for (Role r : kRoles) {
    weak[std::string(to_string(r))] = {
        {"pre", distribution_to_json(c.population.weak_spec(r, Period::pre_lockdown))},
        {"lockdown", distribution_to_json(c.population.weak_spec(r, Period::lockdown))}};
  }
  json fractions = json::object();
  for (Role r : kRoles) fractions[std::string(to_string(r))] = c.population.fractions[index(r)];

  const auto& t = c.transmission;
  const auto target_name = [](std::optional<Role> r) {
    return r ? std::string(to_string(*r)) : std::string("all");
  };
  json seeding{{"target", target_name(c.seeding.target)},
               {"compartment", c.seeding.compartment == SeedCompartment::A ? "A" : "I"}};
  if (c.seeding.count) {
    seeding["count"] = *c.seeding.count;
  } else {
    seeding["count"] = "auto";
  }
  json vaccination = nullptr;
  if (c.vaccination) {
    vaccination = {{"doses", c.vaccination->doses},
                   {"target", std::string(to_string(c.vaccination->target))},
                   {"day", c.vaccination->day}};
  }

  json j{
      {"name", c.name},
      {"population",
       {{"total", c.population.total},
        {"fractions", fractions},
        {"max_contacts", c.max_contacts},
        {"weak", weak},
        {"strong", distribution_to_json(c.population.strong)},
        {"pool", distribution_to_json(c.population.pool)}}},
      {"transmission",
       {{"beta", t.beta}, {"w_w", t.w_w}, {"w_s", t.w_s}, {"w_c", t.w_c},
        {"m", t.m}, {"b", t.b}, {"tau", t.tau}}},
      {"rates",
       {{"nu", c.rates.nu.per_day()},
        {"alpha", c.rates.alpha.per_day()},
        {"eta", c.rates.eta.per_day()},
        {"mu", c.rates.mu.per_day()},
        {"rho", c.rates.rho.per_day()},
        {"zeta", c.rates.zeta.per_day()}}},
      {"timeline",
       {{"lockdown_day", c.timeline.lockdown_day},
        {"reopen_day", c.timeline.reopen_day},
        {"end_day", c.timeline.end_day},
        {"masks",
         {{"before_lockdown", mask_policy_to_json(c.timeline.before_lockdown)},
          {"during_lockdown", mask_policy_to_json(c.timeline.during_lockdown)},
          {"after_reopening", mask_policy_to_json(c.timeline.after_reopening)}}}}},
      {"limit_mode", std::string(to_string(c.limit_mode))},
      {"seeding", seeding},
      {"vaccination", vaccination},
      {"literal_seed_formula", c.literal_seed_formula},
      {"sweep",
       {{"mask_mode", c.sweep.mask_mode},
        {"limit_mode", c.sweep.limit_mode},
        {"pool_size", c.sweep.pool_size},
        {"seeding_target", c.sweep.seeding_target},
        {"vaccination_target", c.sweep.vaccination_target},
        {"b", c.sweep.b},
        {"m", c.sweep.m},
        {"w_c", c.sweep.w_c}}},
      {"calibration",
       {{"sar_targets",
         {{"household", c.calibration.sar.household},
          {"weak", c.calibration.sar.weak},
          {"caregiving", c.calibration.sar.caregiving}}},
        {"sar_trials", c.calibration.sar_trials},
        {"taus", c.calibration.taus},
        {"cstars", c.calibration.cstars},
        {"trials_per_cell", c.calibration.trials_per_cell},
        {"min_cases", c.calibration.min_cases},
        {"filter_day", c.calibration.filter_day},
        {"window",
         {{"first_day", c.calibration.window.first_day},
          {"last_day", c.calibration.window.last_day}}}}}};
  return j.dump(2) + "\n";
}

}  // namespace carenet
