#include "kerrsteer/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "kerrsteer/errors.hpp"

namespace kerrsteer {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Entry {
  std::string value;
  int line = 0;
};

using Section = std::map<std::string, Entry, std::less<>>;

struct Document {
  std::string origin;
  std::map<std::string, Section, std::less<>> sections;
};

[[noreturn]] void fail(const Document& doc, int line, const std::string& msg) {
  throw ConfigError(line > 0 ? fmt::format("{}:{}: {}", doc.origin, line, msg) : fmt::format("{}: {}", doc.origin, msg));
}

Document tokenize(std::string_view text, std::string_view origin) {
  static const std::set<std::string, std::less<>> kSections = {"params", "grids", "ensemble", "sweep", "report"};
  Document doc{std::string(origin), {}};
  std::string current;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    // Strip a trailing comment unless the '#' sits inside a quoted string.
    bool quoted = false;
    std::size_t cut = raw.size();
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == '"') quoted = !quoted;
      if (raw[i] == '#' && !quoted) {
        cut = i;
        break;
      }
    }
    const std::string_view line = trim(std::string_view(raw).substr(0, cut));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(doc, line_no, "malformed section header");
      current = std::string(trim(line.substr(1, line.size() - 2)));
      if (!kSections.count(current)) fail(doc, line_no, fmt::format("unknown section [{}]", current));
      if (doc.sections.count(current)) fail(doc, line_no, fmt::format("duplicate section [{}]", current));
      doc.sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(doc, line_no, "expected 'key = value'");
    if (current.empty()) fail(doc, line_no, "key outside of any section");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty() || value.empty()) fail(doc, line_no, "empty key or value");
    auto& section = doc.sections[current];
    if (section.count(key)) fail(doc, line_no, fmt::format("duplicate key '{}'", key));
    section[key] = {value, line_no};
  }
  return doc;
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

bool is_identifier(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
  }) && !(s.front() >= '0' && s.front() <= '9');
}

// A value in [params]: literal, [re, im] pair, or factor * name in either order.
struct ParamExpr {
  cplx literal{};
  double factor = 1.0;
  std::string ref;  // empty for literals
};

ParamExpr parse_param_expr(const Document& doc, const Entry& e, std::string_view key) {
  const std::string_view v = e.value;
  if (v.front() == '[') {
    if (v.back() != ']') fail(doc, e.line, fmt::format("{}: malformed complex pair", key));
    const std::string_view body = v.substr(1, v.size() - 2);
    const auto comma = body.find(',');
    if (comma == std::string_view::npos) fail(doc, e.line, fmt::format("{}: complex pair needs [re, im]", key));
    const auto re = parse_number(body.substr(0, comma));
    const auto im = parse_number(body.substr(comma + 1));
    if (!re || !im) fail(doc, e.line, fmt::format("{}: complex pair entries must be numbers", key));
    return {cplx(*re, *im), 1.0, {}};
  }
  if (auto num = parse_number(v)) return {cplx(*num, 0.0), 1.0, {}};
  const auto star = v.find('*');
  if (star == std::string_view::npos) {
    if (is_identifier(trim(v))) return {{}, 1.0, std::string(trim(v))};
    fail(doc, e.line, fmt::format("{}: cannot parse '{}'", key, v));
  }
  const std::string_view lhs = trim(v.substr(0, star));
  const std::string_view rhs = trim(v.substr(star + 1));
  if (auto num = parse_number(lhs); num && is_identifier(rhs)) return {{}, *num, std::string(rhs)};
  if (auto num = parse_number(rhs); num && is_identifier(lhs)) return {{}, *num, std::string(lhs)};
  fail(doc, e.line, fmt::format("{}: expected '<number> * <parameter>', got '{}'", key, v));
}

CouplerParams resolve_params(const Document& doc) {
  const auto it = doc.sections.find("params");
  if (it == doc.sections.end()) fail(doc, 0, "missing [params] section");
  const Section& sec = it->second;

  std::map<std::string, ParamExpr, std::less<>> exprs;
  for (const auto& [key, entry] : sec) {
    if (!CouplerParams::is_field(key)) fail(doc, entry.line, fmt::format("unknown parameter '{}'", key));
    exprs[key] = parse_param_expr(doc, entry, key);
  }
  for (const char* required : {"gamma1", "gamma2"}) {
    if (!exprs.count(required)) fail(doc, 0, fmt::format("[params] is missing required field '{}'", required));
  }

  std::map<std::string, cplx, std::less<>> resolved;
  std::set<std::string, std::less<>> visiting;
  auto resolve = [&](auto& self, const std::string& name) -> cplx {
    if (auto r = resolved.find(name); r != resolved.end()) return r->second;
    const auto e = exprs.find(name);
    if (e == exprs.end()) {
      if (!CouplerParams::is_field(name)) fail(doc, 0, fmt::format("reference to unknown parameter '{}'", name));
      return resolved[name] = cplx(0.0, 0.0);  // unspecified fields default to zero
    }
    if (e->second.ref.empty()) return resolved[name] = e->second.literal;
    if (!visiting.insert(name).second) {
      fail(doc, sec.at(name).line, fmt::format("circular definition involving '{}'", name));
    }
    const cplx v = e->second.factor * self(self, e->second.ref);
    visiting.erase(name);
    return resolved[name] = v;
  };

  CouplerParams p;
  auto real_field = [&](const char* name) {
    const cplx v = resolve(resolve, name);
    if (v.imag() != 0.0) {
      const int line = sec.count(name) ? sec.at(name).line : 0;
      fail(doc, line, fmt::format("{} must be real", name));
    }
    return v.real();
  };
  p.gamma1 = real_field("gamma1");
  p.gamma2 = real_field("gamma2");
  p.delta1 = real_field("delta1");
  p.delta2 = real_field("delta2");
  p.eps1 = resolve(resolve, "eps1");
  p.eps2 = resolve(resolve, "eps2");
  p.chi1 = real_field("chi1");
  p.chi2 = real_field("chi2");
  p.coupling_j = real_field("coupling_j");
  try {
    p.validate();
  } catch (const ConfigError& e) {
    fail(doc, 0, e.what());
  }
  return p;
}

class SectionReader {
 public:
  SectionReader(const Document& doc, std::string_view name) : doc_(doc), name_(name) {
    if (auto it = doc.sections.find(name); it != doc.sections.end()) section_ = &it->second;
  }

  [[nodiscard]] bool present() const { return section_ != nullptr; }

  const Entry* find(std::string_view key) {
    if (!section_) return nullptr;
    used_.insert(std::string(key));
    const auto it = section_->find(key);
    return it == section_->end() ? nullptr : &it->second;
  }

  double number(std::string_view key, double fallback) {
    const Entry* e = find(key);
    if (!e) return fallback;
    const auto v = parse_number(e->value);
    if (!v) fail(doc_, e->line, fmt::format("[{}] {} must be a number", name_, key));
    return *v;
  }

  // Number or `factor * parameter` against already-resolved parameters.
  double scaled(std::string_view key, const CouplerParams& params) {
    const Entry* e = find(key);
    if (!e) fail(doc_, 0, fmt::format("[{}] is missing '{}'", name_, key));
    if (auto v = parse_number(e->value)) return *v;
    const ParamExpr x = parse_param_expr(doc_, *e, key);
    if (x.ref.empty() && x.literal.imag() == 0.0) return x.literal.real();
    if (!CouplerParams::is_field(x.ref)) fail(doc_, e->line, fmt::format("unknown parameter '{}'", x.ref));
    return x.factor * params.get(x.ref);
  }

  std::uint64_t unsigned_integer(std::string_view key, std::uint64_t fallback) {
    const Entry* e = find(key);
    if (!e) return fallback;
    std::uint64_t v = 0;
    const std::string_view s = e->value;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      fail(doc_, e->line, fmt::format("[{}] {} must be a nonnegative integer", name_, key));
    }
    return v;
  }

  std::string string(std::string_view key, std::string fallback) {
    const Entry* e = find(key);
    if (!e) return fallback;
    const std::string_view s = e->value;
    if (s.size() < 2 || s.front() != '"' || s.back() != '"') {
      fail(doc_, e->line, fmt::format("[{}] {} must be a quoted string", name_, key));
    }
    return std::string(s.substr(1, s.size() - 2));
  }

  bool boolean(std::string_view key, bool fallback) {
    const Entry* e = find(key);
    if (!e) return fallback;
    if (e->value == "true") return true;
    if (e->value == "false") return false;
    fail(doc_, e->line, fmt::format("[{}] {} must be true or false", name_, key));
  }

  void reject_unknown() const {
    if (!section_) return;
    for (const auto& [key, entry] : *section_) {
      if (!used_.count(key)) fail(doc_, entry.line, fmt::format("unknown key '{}' in [{}]", key, name_));
    }
  }

 private:
  const Document& doc_;
  std::string name_;
  const Section* section_ = nullptr;
  std::set<std::string, std::less<>> used_;
};

SweepAxis read_axis(SectionReader& r, const Document& doc, int n, const CouplerParams& params) {
  SweepAxis axis;
  const std::string prefix = fmt::format("axis{}", n);
  axis.name = r.string(prefix, "");
  if (axis.name.empty()) fail(doc, 0, fmt::format("[sweep] is missing '{}'", prefix));
  const std::string scale = r.string(prefix + "_scale", "linear");
  if (scale == "linear") axis.scale = AxisScale::Linear;
  else if (scale == "log") axis.scale = AxisScale::Log;
  else fail(doc, 0, fmt::format("[sweep] {}_scale must be \"linear\" or \"log\"", prefix));
  axis.lo = r.scaled(prefix + "_lo", params);
  axis.hi = r.scaled(prefix + "_hi", params);
  axis.n_points = r.unsigned_integer(prefix + "_points", 0);
  return axis;
}

}  // namespace

std::vector<double> SweepAxis::values() const {
  std::vector<double> out(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    const double u = n_points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n_points - 1);
    out[i] = scale == AxisScale::Log ? lo * std::pow(hi / lo, u) : lo + (hi - lo) * u;
  }
  if (n_points > 1) {
    out.front() = lo;
    out.back() = hi;
  }
  return out;
}

std::string_view to_string(Observable o) {
  switch (o) {
    case Observable::MinEpr12: return "min_epr_12";
    case Observable::MinEpr21: return "min_epr_21";
    case Observable::Classification: return "classification";
    case Observable::MinDuanSimon: return "min_duan_simon";
  }
  return "unknown";
}

Observable observable_from_string(std::string_view s) {
  for (auto o : {Observable::MinEpr12, Observable::MinEpr21, Observable::Classification, Observable::MinDuanSimon}) {
    if (to_string(o) == s) return o;
  }
  throw ConfigError(fmt::format("unknown sweep observable '{}'", s));
}

void SweepSpec::validate() const {
  for (const SweepAxis* a : {&axis1, &axis2}) {
    if (!CouplerParams::is_field(a->name)) throw ConfigError(fmt::format("sweep axis '{}' is not a parameter", a->name));
    if (a->n_points < 2) throw ConfigError(fmt::format("sweep axis '{}' needs at least 2 points", a->name));
    if (!(a->lo < a->hi)) throw ConfigError(fmt::format("sweep axis '{}' needs lo < hi", a->name));
    if (a->scale == AxisScale::Log && !(a->lo > 0.0)) {
      throw ConfigError(fmt::format("sweep axis '{}' is logarithmic and needs lo > 0", a->name));
    }
  }
  if (axis1.name == axis2.name) throw ConfigError("sweep axes must name different parameters");
  fixed.validate();
}

RunConfig parse_config(std::string_view text, std::string_view origin) {
  const Document doc = tokenize(text, origin);
  RunConfig cfg;
  cfg.params = resolve_params(doc);

  SectionReader grids(doc, "grids");
  cfg.grids.omega_max = grids.number("omega_max", 0.0);
  cfg.grids.omega_points = grids.unsigned_integer("omega_points", cfg.grids.omega_points);
  cfg.grids.theta_points = grids.unsigned_integer("theta_points", cfg.grids.theta_points);
  cfg.grids.mirror_negative = grids.boolean("mirror_negative", false);
  grids.reject_unknown();
  if (cfg.grids.omega_max < 0.0) fail(doc, 0, "[grids] omega_max must be >= 0 (0 selects the default)");
  if (cfg.grids.omega_points < 1 || cfg.grids.theta_points < 1) fail(doc, 0, "[grids] point counts must be >= 1");

  SectionReader ens(doc, "ensemble");
  if (ens.present()) {
    EnsembleConfig e;
    e.n_traj = ens.unsigned_integer("n_traj", e.n_traj);
    e.dt = ens.number("dt", e.dt);
    e.t_final = ens.number("t_final", e.t_final);
    e.seed = ens.unsigned_integer("seed", e.seed);
    e.record_stride = ens.unsigned_integer("record_stride", e.record_stride);
    e.divergence_factor = ens.number("divergence_factor", e.divergence_factor);
    const std::string stepper = ens.string("stepper", "semi_implicit");
    if (stepper == "semi_implicit") e.stepper = Stepper::SemiImplicit;
    else if (stepper == "euler") e.stepper = Stepper::EulerMaruyama;
    else fail(doc, 0, "[ensemble] stepper must be \"semi_implicit\" or \"euler\"");
    cfg.window_fraction = ens.number("window_fraction", cfg.window_fraction);
    ens.reject_unknown();
    try {
      e.validate();
    } catch (const ConfigError& err) {
      fail(doc, 0, err.what());
    }
    if (!(cfg.window_fraction > 0.0 && cfg.window_fraction < 1.0)) {
      fail(doc, 0, "[ensemble] window_fraction must lie in (0, 1)");
    }
    cfg.ensemble = e;
  }

  SectionReader sw(doc, "sweep");
  if (sw.present()) {
    SweepSpec s;
    try {
      s.observable = observable_from_string(sw.string("observable", "classification"));
    } catch (const ConfigError& err) {
      fail(doc, 0, err.what());
    }
    s.axis1 = read_axis(sw, doc, 1, cfg.params);
    s.axis2 = read_axis(sw, doc, 2, cfg.params);
    s.fixed = cfg.params;
    sw.reject_unknown();
    try {
      s.validate();
    } catch (const ConfigError& err) {
      fail(doc, 0, err.what());
    }
    cfg.sweep = s;
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

std::string format_exact(double x) { return fmt::format("{}", x); }

std::string format_config(const RunConfig& c) {
  std::string out;
  auto line = [&out](std::string_view key, const std::string& value) { out += fmt::format("{} = {}\n", key, value); };
  auto pump = [](cplx z) { return fmt::format("[{}, {}]", format_exact(z.real()), format_exact(z.imag())); };
  auto quoted = [](std::string_view s) { return fmt::format("\"{}\"", s); };

  const CouplerParams& p = c.params;
  out += "[params]\n";
  line("gamma1", format_exact(p.gamma1));
  line("gamma2", format_exact(p.gamma2));
  line("delta1", format_exact(p.delta1));
  line("delta2", format_exact(p.delta2));
  line("eps1", pump(p.eps1));
  line("eps2", pump(p.eps2));
  line("chi1", format_exact(p.chi1));
  line("chi2", format_exact(p.chi2));
  line("coupling_j", format_exact(p.coupling_j));

  out += "\n[grids]\n";
  line("omega_max", format_exact(c.grids.omega_max));
  line("omega_points", std::to_string(c.grids.omega_points));
  line("theta_points", std::to_string(c.grids.theta_points));
  line("mirror_negative", c.grids.mirror_negative ? "true" : "false");

  if (c.ensemble) {
    const EnsembleConfig& e = *c.ensemble;
    out += "\n[ensemble]\n";
    line("n_traj", std::to_string(e.n_traj));
    line("dt", format_exact(e.dt));
    line("t_final", format_exact(e.t_final));
    line("seed", std::to_string(e.seed));
    line("record_stride", std::to_string(e.record_stride));
    line("stepper", quoted(e.stepper == Stepper::SemiImplicit ? "semi_implicit" : "euler"));
    line("window_fraction", format_exact(c.window_fraction));
    line("divergence_factor", format_exact(e.divergence_factor));
  }

  if (c.sweep) {
    const SweepSpec& s = *c.sweep;
    out += "\n[sweep]\n";
    line("observable", quoted(to_string(s.observable)));
    int n = 1;
    for (const SweepAxis* a : {&s.axis1, &s.axis2}) {
      const std::string prefix = fmt::format("axis{}", n++);
      line(prefix, quoted(a->name));
      line(prefix + "_scale", quoted(a->scale == AxisScale::Log ? "log" : "linear"));
      line(prefix + "_lo", format_exact(a->lo));
      line(prefix + "_hi", format_exact(a->hi));
      line(prefix + "_points", std::to_string(a->n_points));
    }
  }
  return out;
}

}  // namespace kerrsteer
