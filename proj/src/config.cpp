#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fpme/errors.hpp"
#include "fpme/harness.hpp"

namespace fpme {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& p : split(s, ',')) out.push_back(parse_number(p));
  return out;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t k = 0; k < xs.size(); ++k) out += (k ? ", " : "") + num(xs[k]);
  return out;
}

bool parse_bool(const std::string& v) {
  if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
  if (v == "off" || v == "false" || v == "0" || v == "no") return false;
  throw ParameterError("expected a boolean, got '" + v + "'");
}

ReferenceKind parse_reference(const std::string& v) {
  if (v == "analytic") return ReferenceKind::Analytic;
  if (v == "numerical") return ReferenceKind::Numerical;
  if (v == "none") return ReferenceKind::None;
  throw ParameterError("unknown reference kind '" + v + "'");
}

std::string reference_name(ReferenceKind k) {
  switch (k) {
    case ReferenceKind::Analytic: return "analytic";
    case ReferenceKind::Numerical: return "numerical";
    case ReferenceKind::None: return "none";
  }
  return "none";
}

}  // namespace

double parse_number(const std::string& raw) {
  const std::string text = trim(raw);
  try {
    if (const auto caret = text.find('^'); caret != std::string::npos) {
      return std::pow(std::stod(text.substr(0, caret)), std::stod(text.substr(caret + 1)));
    }
    if (const auto slash = text.find('/'); slash != std::string::npos) {
      return std::stod(text.substr(0, slash)) / std::stod(text.substr(slash + 1));
    }
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::logic_error&) {
    throw ParameterError("cannot parse number '" + text + "'");
  }
}

void RunConfig::validate() const {
  if (!(s > 0.0 && s < 1.0)) throw ParameterError("s must lie in (0,1)");
  if (!(m >= 2.0)) throw ParameterError("m must be at least 2");
  if (!(safety > 0.0)) throw ParameterError("safety must be positive");
  if (!(T >= 0.0)) throw ParameterError("T must be nonnegative");
  if (ladder.empty()) throw ParameterError("ladder must contain at least one h");
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    if (!(ladder[k] > 0.0 && ladder[k] < 1.0)) throw ParameterError("ladder values must lie in (0,1)");
    if (k > 0 && !(ladder[k] < ladder[k - 1])) throw ParameterError("ladder must be strictly decreasing");
  }
  for (double t : snapshots)
    if (t < 0.0 || t > T) throw ParameterError("snapshot times must lie in [0, T]");
  for (double t : probe_t)
    if (t < 0.0 || t > T) throw ParameterError("probe times must lie in [0, T]");
  if (pad && !(*pad >= 0.0)) throw ParameterError("pad must be nonnegative");
  if (reference == ReferenceKind::Analytic && m != 2.0)
    throw ParameterError("the analytic reference exists only for m = 2");
  if (reference == ReferenceKind::Numerical && !(reference_h > 0.0 && reference_h < ladder.back()))
    throw ParameterError("reference_h must be finer than every rung");
  if (!(eps_tail > 0.0 && eps_tail < 1.0)) throw ParameterError("eps_tail must lie in (0,1)");
  if (threads == 0) throw ParameterError("threads must be positive");
  fpme::validate(datum);
}

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::string datum_kind = "explicit";
  double t0 = c.reference_params.t0;
  double R = c.reference_params.R;
  std::optional<double> M;
  double a = 0.0;
  std::vector<ProfileComponent> components;
  std::vector<double> sx;
  std::vector<double> su;
  bool reference_given = false;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParameterError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));

    if (key == "name") c.name = val;
    else if (key == "s") c.s = parse_number(val);
    else if (key == "m") c.m = parse_number(val);
    else if (key == "cfl") c.cfl_mode = parse_cfl_mode(val);
    else if (key == "safety") c.safety = parse_number(val);
    else if (key == "datum") datum_kind = val;
    else if (key == "t0") t0 = parse_number(val);
    else if (key == "R") R = parse_number(val);
    else if (key == "M") M = parse_number(val);
    else if (key == "a") a = parse_number(val);
    else if (key == "components") {
      // "weight:shift; weight:shift"
      for (const auto& item : split(val, ';')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw ParameterError("components entries are weight:shift");
        components.push_back({parse_number(item.substr(0, colon)), parse_number(item.substr(colon + 1))});
      }
    } else if (key == "sampled_x") sx = parse_list(val);
    else if (key == "sampled_u") su = parse_list(val);
    else if (key == "pad") c.pad = parse_number(val);
    else if (key == "T") c.T = parse_number(val);
    else if (key == "ladder") c.ladder = parse_list(val);
    else if (key == "snapshots") c.snapshots = parse_list(val);
    else if (key == "reference") {
      c.reference = parse_reference(val);
      reference_given = true;
    } else if (key == "reference_h") c.reference_h = parse_number(val);
    else if (key == "probe_x") c.probe_x = parse_list(val);
    else if (key == "probe_t") c.probe_t = parse_list(val);
    else if (key == "out") c.out = val;
    else if (key == "eps_tail") c.eps_tail = parse_number(val);
    else if (key == "seed") c.seed = std::stoull(val);
    else if (key == "threads") c.threads = static_cast<unsigned>(std::stoul(val));
    else if (key == "timing") c.timing = parse_bool(val);
    else throw ParameterError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }

  c.reference_params = {c.s, t0, R};
  if (datum_kind == "explicit") {
    ExplicitProfileDatum d{{c.s, t0, R}, components.empty() ? std::vector<ProfileComponent>{{}} : components};
    c.datum = d;
  } else if (datum_kind == "dirac") {
    c.datum = DiracDatum{M.value_or(mass_explicit(R, c.s)), a};
  } else if (datum_kind == "step") {
    c.datum = StepDatum{M.value_or(1.0), a};
  } else if (datum_kind == "bump3") {
    c.datum = BumpSumDatum{};
    if (!reference_given) c.reference = ReferenceKind::Numerical;
  } else if (datum_kind == "sampled") {
    c.datum = SampledDatum{sx, su};
    if (!reference_given) c.reference = ReferenceKind::Numerical;
  } else {
    throw ParameterError("unknown datum '" + datum_kind + "'");
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot read config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string format_config(const RunConfig& c) {
  std::ostringstream os;
  os << "name = " << c.name << '\n'
     << "s = " << num(c.s) << '\n'
     << "m = " << num(c.m) << '\n'
     << "cfl = " << to_string(c.cfl_mode) << '\n'
     << "safety = " << num(c.safety) << '\n'
     << "datum = " << datum_name(c.datum) << '\n';
  if (const auto* e = std::get_if<ExplicitProfileDatum>(&c.datum)) {
    os << "components = ";
    for (std::size_t k = 0; k < e->components.size(); ++k)
      os << (k ? "; " : "") << num(e->components[k].weight) << ':' << num(e->components[k].shift);
    os << '\n';
  } else if (const auto* d = std::get_if<DiracDatum>(&c.datum)) {
    os << "M = " << num(d->M) << "\na = " << num(d->a) << '\n';
  } else if (const auto* st = std::get_if<StepDatum>(&c.datum)) {
    os << "M = " << num(st->M) << "\na = " << num(st->a) << '\n';
  } else if (const auto* sm = std::get_if<SampledDatum>(&c.datum)) {
    os << "sampled_x = " << join(sm->x) << "\nsampled_u = " << join(sm->u) << '\n';
  }
  os << "t0 = " << num(c.reference_params.t0) << '\n' << "R = " << num(c.reference_params.R) << '\n';
  if (c.pad) os << "pad = " << num(*c.pad) << '\n';
  os << "T = " << num(c.T) << '\n' << "ladder = " << join(c.ladder) << '\n';
  if (!c.snapshots.empty()) os << "snapshots = " << join(c.snapshots) << '\n';
  os << "reference = " << reference_name(c.reference) << '\n'
     << "reference_h = " << num(c.reference_h) << '\n';
  if (!c.probe_x.empty()) os << "probe_x = " << join(c.probe_x) << '\n';
  if (!c.probe_t.empty()) os << "probe_t = " << join(c.probe_t) << '\n';
  if (!c.out.empty()) os << "out = " << c.out.string() << '\n';
  os << "eps_tail = " << num(c.eps_tail) << '\n'
     << "seed = " << c.seed << '\n'
     << "threads = " << c.threads << '\n'
     << "timing = " << (c.timing ? "on" : "off") << '\n';
  return os.str();
}

}  // namespace fpme
