// Copyright 2026 The rel-toa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "reltoa/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>

#include "reltoa/csv.hpp"

namespace reltoa::config {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string_view strip_comment(std::string_view s) {
  const auto pos = s.find_first_of("#;");
  return pos == std::string_view::npos ? s : s.substr(0, pos);
}

struct Context {
  const std::string& section;
  const std::string& key;
  int line;

  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError("[" + section + "] " + key + " (line " + std::to_string(line) + "): " + what, key);
  }
};

double to_double(std::string_view text, const Context& ctx) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    ctx.fail("expected a number, got '" + std::string(text) + "'");
  }
  if (!std::isfinite(v)) ctx.fail("value must be finite");
  return v;
}

int to_int(std::string_view text, const Context& ctx) {
  text = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    ctx.fail("expected an integer, got '" + std::string(text) + "'");
  }
  return v;
}

bool to_bool(std::string_view text, const Context& ctx) {
  text = trim(text);
  if (text == "true") return true;
  if (text == "false") return false;
  ctx.fail("expected true or false, got '" + std::string(text) + "'");
}

std::vector<std::string_view> split_list(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(trim(text.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<double> to_list(std::string_view text, const Context& ctx) {
  std::vector<double> out;
  for (auto item : split_list(text)) out.push_back(to_double(item, ctx));
  if (out.empty()) ctx.fail("list must not be empty");
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += csv::format(v[i]);
  }
  return s;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += v[i];
  }
  return s;
}

using Setter = std::function<void(RunConfig&, std::string_view, const Context&)>;
using Getter = std::function<std::string(const RunConfig&)>;

struct Field {
  const char* section;
  const char* key;
  Setter set;
  Getter get;
};

// Constraint helpers.
void positive(double v, const Context& c) {
  if (!(v > 0.0)) c.fail("must be > 0 (got " + csv::format(v) + ")");
}
void non_negative(double v, const Context& c) {
  if (!(v >= 0.0)) c.fail("must be >= 0 (got " + csv::format(v) + ")");
}
void any_value(double, const Context&) {}

template <class Member>
Field real(const char* section, const char* key, Member member,
           void (*check)(double, const Context&) = any_value) {
  return {section, key,
          [member, check](RunConfig& cfg, std::string_view text, const Context& ctx) {
            const double v = to_double(text, ctx);
            check(v, ctx);
            member(cfg) = v;
          },
          [member](const RunConfig& cfg) { return csv::format(member(const_cast<RunConfig&>(cfg))); }};
}

template <class Member>
Field optional_real(const char* section, const char* key, Member member,
                    void (*check)(double, const Context&) = any_value) {
  return {section, key,
          [member, check](RunConfig& cfg, std::string_view text, const Context& ctx) {
            const double v = to_double(text, ctx);
            check(v, ctx);
            member(cfg) = v;
          },
          [member](const RunConfig& cfg) {
            const auto& v = member(const_cast<RunConfig&>(cfg));
            return v ? csv::format(*v) : std::string();
          }};
}

template <class Member>
Field integer(const char* section, const char* key, Member member, int minimum) {
  return {section, key,
          [member, minimum](RunConfig& cfg, std::string_view text, const Context& ctx) {
            const int v = to_int(text, ctx);
            if (v < minimum) ctx.fail("must be >= " + std::to_string(minimum) + " (got " + std::to_string(v) + ")");
            member(cfg) = v;
          },
          [member](const RunConfig& cfg) { return std::to_string(member(const_cast<RunConfig&>(cfg))); }};
}

template <class Member>
Field boolean(const char* section, const char* key, Member member) {
  return {section, key,
          [member](RunConfig& cfg, std::string_view text, const Context& ctx) { member(cfg) = to_bool(text, ctx); },
          [member](const RunConfig& cfg) { return member(const_cast<RunConfig&>(cfg)) ? "true" : "false"; }};
}

template <class Member>
Field real_list(const char* section, const char* key, Member member,
                void (*check)(double, const Context&) = any_value) {
  return {section, key,
          [member, check](RunConfig& cfg, std::string_view text, const Context& ctx) {
            auto v = to_list(text, ctx);
            for (double x : v) check(x, ctx);
            member(cfg) = std::move(v);
          },
          [member](const RunConfig& cfg) { return join(member(const_cast<RunConfig&>(cfg))); }};
}

void set_params(RunConfig& cfg, double mass, double c, double hbar, const Context& ctx) {
  positive(mass, ctx);
  positive(c, ctx);
  positive(hbar, ctx);
  cfg.params = physcore::PhysicalParams(mass, c, hbar);
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back({"params", "mass",
                 [](RunConfig& c, std::string_view t, const Context& x) {
                   set_params(c, to_double(t, x), c.params.light_speed(), c.params.hbar(), x);
                 },
                 [](const RunConfig& c) { return csv::format(c.params.mass()); }});
    f.push_back({"params", "light_speed",
                 [](RunConfig& c, std::string_view t, const Context& x) {
                   set_params(c, c.params.mass(), to_double(t, x), c.params.hbar(), x);
                 },
                 [](const RunConfig& c) { return csv::format(c.params.light_speed()); }});
    f.push_back({"params", "hbar",
                 [](RunConfig& c, std::string_view t, const Context& x) {
                   set_params(c, c.params.mass(), c.params.light_speed(), to_double(t, x), x);
                 },
                 [](const RunConfig& c) { return csv::format(c.params.hbar()); }});

    f.push_back(real("wavepacket", "q0", [](RunConfig& c) -> double& { return c.wavepacket.q0; }));
    f.push_back(real("wavepacket", "p0", [](RunConfig& c) -> double& { return c.wavepacket.p0; }));
    f.push_back(real("wavepacket", "sigma", [](RunConfig& c) -> double& { return c.wavepacket.sigma; }, positive));
    f.push_back(optional_real("wavepacket", "support_half_width",
                              [](RunConfig& c) -> std::optional<double>& { return c.wavepacket.support_half_width; },
                              positive));

    f.push_back(real("grid", "half_length", [](RunConfig& c) -> double& { return c.grid.half_length; }, positive));
    f.push_back(integer("grid", "nodes", [](RunConfig& c) -> int& { return c.grid.nodes; }, 3));
    f.push_back({"grid", "solver",
                 [](RunConfig& c, std::string_view t, const Context& x) {
                   t = trim(t);
                   if (t != "blocks" && t != "full") x.fail("must be 'blocks' or 'full'");
                   c.grid.solver = std::string(t);
                 },
                 [](const RunConfig& c) { return c.grid.solver; }});
    f.push_back(real("grid", "classification_threshold",
                     [](RunConfig& c) -> double& { return c.grid.classification_threshold; },
                     [](double v, const Context& x) {
                       if (!(v > 0.0 && v < 0.5)) x.fail("must lie in (0, 0.5)");
                     }));
    f.push_back(boolean("grid", "vectors", [](RunConfig& c) -> bool& { return c.grid.vectors; }));
    f.push_back(optional_real("grid", "tau_window_min",
                              [](RunConfig& c) -> std::optional<double>& { return c.grid.tau_window_min; }));
    f.push_back(optional_real("grid", "tau_window_max",
                              [](RunConfig& c) -> std::optional<double>& { return c.grid.tau_window_max; }));

    f.push_back(real("kernel", "dq_min", [](RunConfig& c) -> double& { return c.kernel.dq_min; }, positive));
    f.push_back(real("kernel", "dq_max", [](RunConfig& c) -> double& { return c.kernel.dq_max; }, positive));
    f.push_back(integer("kernel", "dq_points", [](RunConfig& c) -> int& { return c.kernel.dq_points; }, 2));
    f.push_back(real("kernel", "rel_tol", [](RunConfig& c) -> double& { return c.kernel.rel_tol; },
                     [](double v, const Context& x) {
                       if (!(v > 0.0 && v <= 1e-3)) x.fail("must lie in (0, 1e-3]");
                     }));
    f.push_back(real_list("kernel", "pv_delta_q", [](RunConfig& c) -> std::vector<double>& { return c.kernel.pv_delta_q; },
                          [](double v, const Context& x) {
                            if (v == 0.0) x.fail("entries must be non-zero");
                          }));
    f.push_back(real("kernel", "pv_p_max", [](RunConfig& c) -> double& { return c.kernel.pv_p_max; }, positive));
    f.push_back(integer("kernel", "pv_points", [](RunConfig& c) -> int& { return c.kernel.pv_points; }, 2));
    f.push_back(real("kernel", "pv_tolerance", [](RunConfig& c) -> double& { return c.kernel.pv_tolerance; }, positive));

    f.push_back({"evolve", "source",
                 [](RunConfig& c, std::string_view t, const Context& x) {
                   t = trim(t);
                   if (t == "coarse") c.evolve.source = EvolveSource::Coarse;
                   else if (t == "analytic") c.evolve.source = EvolveSource::Analytic;
                   else if (t == "razavi-real") c.evolve.source = EvolveSource::RazaviReal;
                   else if (t == "razavi-complex") c.evolve.source = EvolveSource::RazaviComplex;
                   else x.fail("must be one of coarse, analytic, razavi-real, razavi-complex");
                 },
                 [](const RunConfig& c) { return std::string(to_string(c.evolve.source)); }});
    f.push_back(real("evolve", "tau", [](RunConfig& c) -> double& { return c.evolve.tau; }));
    f.push_back(real_list("evolve", "tau_imag", [](RunConfig& c) -> std::vector<double>& { return c.evolve.tau_imag; }));
    f.push_back(real_list("evolve", "epsilon", [](RunConfig& c) -> std::vector<double>& { return c.evolve.epsilon; }, positive));
    f.push_back(real("evolve", "delta", [](RunConfig& c) -> double& { return c.evolve.delta; }, non_negative));
    f.push_back(real("evolve", "t_min", [](RunConfig& c) -> double& { return c.evolve.t_min; }));
    f.push_back(real("evolve", "t_max", [](RunConfig& c) -> double& { return c.evolve.t_max; }));
    f.push_back(integer("evolve", "t_points", [](RunConfig& c) -> int& { return c.evolve.t_points; }, 3));
    f.push_back(real("evolve", "q_min", [](RunConfig& c) -> double& { return c.evolve.q_min; }));
    f.push_back(real("evolve", "q_max", [](RunConfig& c) -> double& { return c.evolve.q_max; }));
    f.push_back(integer("evolve", "q_points", [](RunConfig& c) -> int& { return c.evolve.q_points; }, 3));
    f.push_back(real("evolve", "p_max", [](RunConfig& c) -> double& { return c.evolve.p_max; }, positive));
    f.push_back(integer("evolve", "p_points", [](RunConfig& c) -> int& { return c.evolve.p_points; }, 3));
    f.push_back(real("evolve", "window", [](RunConfig& c) -> double& { return c.evolve.window; }, positive));
    f.push_back(integer("evolve", "interp_points", [](RunConfig& c) -> int& { return c.evolve.interp_points; }, 3));

    f.push_back(real_list("expectation", "p_values", [](RunConfig& c) -> std::vector<double>& { return c.expectation.p_values; },
                          [](double v, const Context& x) {
                            if (v == 0.0) x.fail("momenta must be non-zero");
                          }));
    f.push_back(real_list("expectation", "sigma_values",
                          [](RunConfig& c) -> std::vector<double>& { return c.expectation.sigma_values; }, positive));
    f.push_back(integer("expectation", "n_max", [](RunConfig& c) -> int& { return c.expectation.n_max; }, 0));
    f.push_back(real("expectation", "tolerance", [](RunConfig& c) -> double& { return c.expectation.tolerance; }, positive));
    f.push_back(boolean("expectation", "exact", [](RunConfig& c) -> bool& { return c.expectation.exact; }));

    f.push_back(real("dist", "tau_min", [](RunConfig& c) -> double& { return c.dist.tau_min; }));
    f.push_back(real("dist", "tau_max", [](RunConfig& c) -> double& { return c.dist.tau_max; }));
    f.push_back(integer("dist", "tau_points", [](RunConfig& c) -> int& { return c.dist.tau_points; }, 2));
    f.push_back(real("dist", "p_max", [](RunConfig& c) -> double& { return c.dist.p_max; }, positive));
    f.push_back(integer("dist", "p_points", [](RunConfig& c) -> int& { return c.dist.p_points; }, 3));
    f.push_back({"dist", "kinds",
                 [](RunConfig& c, std::string_view t, const Context& x) {
                   std::vector<std::string> kinds;
                   for (auto item : split_list(t)) {
                     if (item != "coarse" && item != "analytic" && item != "razavi")
                       x.fail("entries must be coarse, analytic or razavi");
                     kinds.emplace_back(item);
                   }
                   c.dist.kinds = std::move(kinds);
                 },
                 [](const RunConfig& c) { return join(c.dist.kinds); }});
    f.push_back(real_list("dist", "epsilon", [](RunConfig& c) -> std::vector<double>& { return c.dist.epsilon; }, positive));
    f.push_back(boolean("dist", "include_nodal", [](RunConfig& c) -> bool& { return c.dist.include_nodal; }));
    f.push_back(real_list("dist", "t_shift", [](RunConfig& c) -> std::vector<double>& { return c.dist.t_shift; }));
    return f;
  }();
  return table;
}

[[noreturn]] void cross_fail(const std::string& key, const std::string& what) {
  throw ValidationError(key + ": " + what, key);
}

void cross_validate(const RunConfig& c) {
  if (c.grid.nodes % 2 == 0) cross_fail("nodes", "must be odd so that q = 0 is a node");
  if (c.grid.tau_window_min.has_value() != c.grid.tau_window_max.has_value()) {
    cross_fail("tau_window_min", "tau_window_min and tau_window_max must be given together");
  }
  if (c.grid.tau_window_min && !(*c.grid.tau_window_min < *c.grid.tau_window_max)) {
    cross_fail("tau_window_max", "must exceed tau_window_min");
  }
  if (!(c.kernel.dq_min < c.kernel.dq_max)) cross_fail("dq_max", "must exceed dq_min");
  if (!(c.evolve.t_min < c.evolve.t_max)) cross_fail("t_max", "must exceed t_min");
  if (!(c.evolve.q_min < c.evolve.q_max)) cross_fail("q_max", "must exceed q_min");
  if (c.evolve.p_points % 2 == 0) cross_fail("p_points", "must be odd (symmetric momentum grid)");
  if (!(c.dist.tau_min < c.dist.tau_max)) cross_fail("tau_max", "must exceed tau_min");
  if (c.dist.p_points % 2 == 0) cross_fail("p_points", "must be odd (symmetric momentum grid)");
}

}  // namespace

const char* to_string(EvolveSource source) {
  switch (source) {
    case EvolveSource::Coarse:
      return "coarse";
    case EvolveSource::Analytic:
      return "analytic";
    case EvolveSource::RazaviReal:
      return "razavi-real";
    case EvolveSource::RazaviComplex:
      return "razavi-complex";
  }
  return "unknown";
}

Document parse_document(std::string_view text) {
  Document doc;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    std::string_view line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("unterminated section header", line_no);
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section.empty()) throw ParseError("empty section name", line_no);
      doc.sections[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no);
    if (section.empty()) throw ParseError("key outside of any [section]", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ParseError("missing key before '='", line_no);
    auto& entries = doc.sections[section];
    const auto it = entries.find(key);
    if (it != entries.end()) {
      throw ParseError("duplicate key '" + key + "' in [" + section + "] (first set on line " +
                           std::to_string(it->second.line) + ")",
                       line_no);
    }
    entries.emplace(key, Document::Entry{value, line_no});
  }
  return doc;
}

RunConfig build_config(const Document& doc) {
  RunConfig cfg;
  const auto& table = fields();
  for (const auto& [section, entries] : doc.sections) {
    bool known_section = false;
    for (const Field& f : table) known_section = known_section || section == f.section;
    if (!known_section) {
      const int line = entries.empty() ? 0 : entries.begin()->second.line;
      throw ValidationError("unknown section [" + section + "]" +
                                (line ? " (line " + std::to_string(line) + ")" : std::string()),
                            section);
    }
    for (const auto& [key, entry] : entries) {
      const Field* match = nullptr;
      for (const Field& f : table) {
        if (section == f.section && key == f.key) match = &f;
      }
      if (!match) {
        throw ValidationError("unknown key '" + key + "' in [" + section + "] (line " +
                                  std::to_string(entry.line) + ")",
                              key);
      }
      match->set(cfg, entry.value, Context{section, key, entry.line});
    }
  }
  cross_validate(cfg);
  return cfg;
}

RunConfig parse_config(std::string_view text) { return build_config(parse_document(text)); }

RunConfig parse_config(std::string_view base, std::string_view overlay) {
  Document doc = parse_document(base);
  const Document top = parse_document(overlay);
  for (const auto& [section, entries] : top.sections) {
    auto& target = doc.sections[section];
    for (const auto& [key, entry] : entries) target[key] = entry;
  }
  return build_config(doc);
}

std::string to_ini(const RunConfig& config) {
  std::ostringstream out;
  std::string current;
  for (const Field& f : fields()) {
    if (current != f.section) {
      if (!current.empty()) out << '\n';
      current = f.section;
      out << '[' << current << "]\n";
    }
    const std::string value = f.get(config);
    if (value.empty()) {
      out << "# " << f.key << " (unset)\n";
    } else {
      out << f.key << " = " << value << '\n';
    }
  }
  return out.str();
}

}  // namespace reltoa::config
