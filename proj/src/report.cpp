#include "sigmadae/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace sigmadae {

NLOHMANN_JSON_SERIALIZE_ENUM(QlCode, {{QlCode::I, "I"}, {QlCode::L, "L"}, {QlCode::N, "N"}})
NLOHMANN_JSON_SERIALIZE_ENUM(Determinacy, {{Determinacy::Square, "square"},
                                           {Determinacy::Underdetermined, "underdetermined"}})
NLOHMANN_JSON_SERIALIZE_ENUM(Linearity, {{Linearity::Linear, "linear"},
                                         {Linearity::Nonlinear, "nonlinear"}})
NLOHMANN_JSON_SERIALIZE_ENUM(SchemeMode, {{SchemeMode::Basic, "basic"},
                                          {SchemeMode::Block, "block"}})

using ojson = nlohmann::ordered_json;

namespace {

std::vector<NamedPair> named(const PairSet& s, const std::vector<std::string>& names) {
  std::vector<NamedPair> out;
  out.reserve(s.size());
  for (const DerivPair& p : s) out.push_back({names[p.index], p.order});
  return out;
}

std::vector<std::string> names_of(const std::vector<int>& idx,
                                  const std::vector<std::string>& names) {
  std::vector<std::string> out;
  for (int i : idx) out.push_back(names[i]);
  return out;
}

ojson pairs_json(const std::vector<NamedPair>& ps, const char* key) {
  ojson a = ojson::array();
  for (const NamedPair& p : ps) a.push_back({{key, p.name}, {"order", p.order}});
  return a;
}

std::vector<NamedPair> pairs_from(const ojson& a, const char* key) {
  std::vector<NamedPair> out;
  for (const auto& e : a) out.push_back({e.at(key).get<std::string>(), e.at("order").get<int>()});
  return out;
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

// Terminal columns taken by a UTF-8 string; combining marks take none.
int display_width(const std::string& s) {
  int w = 0;
  for (std::size_t i = 0; i < s.size();) {
    const auto c = static_cast<unsigned char>(s[i]);
    char32_t cp = c;
    int len = 1;
    if (c >= 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else if (c >= 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if (c >= 0xC0) {
      len = 2;
      cp = c & 0x1F;
    }
    for (int k = 1; k < len && i + k < s.size(); ++k)
      cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
    if (cp < 0x300 || cp > 0x36F) ++w;
    i += len;
  }
  return w;
}

std::string pad(const std::string& s, int width, bool right) {
  const std::string fill(std::max(0, width - display_width(s)), ' ');
  return right ? fill + s : s + fill;
}

// Plain text table with optional vertical bars before chosen columns and
// horizontal rules before chosen rows.
struct TextTable {
  std::vector<std::vector<std::string>> rows;
  std::vector<bool> bar_before;   // per column
  std::vector<bool> rule_before;  // per row
  std::vector<bool> right;        // per column

  std::string str() const {
    const std::size_t ncol = bar_before.size();
    std::vector<int> w(ncol, 0);
    for (const auto& r : rows)
      for (std::size_t c = 0; c < ncol && c < r.size(); ++c)
        w[c] = std::max(w[c], display_width(r[c]));
    std::string out;
    auto sep = [&](std::size_t c, bool rule) -> std::string {
      if (c == 0) return "  ";
      if (bar_before[c]) return rule ? "-+-" : " | ";
      return rule ? "--" : "  ";
    };
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rule_before[r]) {
        std::string line;
        for (std::size_t c = 0; c < ncol; ++c)
          line += (c == 0 ? std::string("  ") : sep(c, true)) + std::string(w[c], '-');
        out += line + "\n";
      }
      std::string line;
      for (std::size_t c = 0; c < ncol; ++c) {
        const std::string cell = c < rows[r].size() ? rows[r][c] : "";
        line += sep(c, false) + pad(cell, w[c], right[c]);
      }
      while (!line.empty() && line.back() == ' ') line.pop_back();
      out += line + "\n";
    }
    return out;
  }
};

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

std::string pair_list(const std::vector<NamedPair>& ps) {
  std::vector<std::string> s;
  for (const NamedPair& p : ps) s.push_back(derivative_name(p.name, p.order));
  return join(s, ", ");
}

std::string sigma_grid(const AnalysisReport& r) {
  const int n = static_cast<int>(r.variables.size());
  auto eq_index = [&](const std::string& s) {
    return static_cast<int>(std::find(r.equations.begin(), r.equations.end(), s) -
                            r.equations.begin());
  };
  auto var_index = [&](const std::string& s) {
    return static_cast<int>(std::find(r.variables.begin(), r.variables.end(), s) -
                            r.variables.begin());
  };
  std::vector<int> row_order, col_order, c_hat(n), d_hat(n);
  std::vector<bool> col_bar(n, false), row_rule(n, false);
  for (const BlockReport& b : r.blocks) {
    col_bar[col_order.size()] = !col_order.empty();
    row_rule[row_order.size()] = !row_order.empty();
    for (std::size_t a = 0; a < b.rows.size(); ++a) {
      c_hat[row_order.size()] = b.c_hat[a];
      row_order.push_back(eq_index(b.rows[a]));
      d_hat[col_order.size()] = b.d_hat[a];
      col_order.push_back(var_index(b.cols[a]));
    }
  }
  std::vector<int> hvt_col(n, -1);
  for (const HvtEntry& e : r.hvt) hvt_col[eq_index(e.equation)] = var_index(e.variable);

  TextTable t;
  t.bar_before.push_back(false);
  t.right.push_back(false);
  for (int c = 0; c < n; ++c) {
    t.bar_before.push_back(col_bar[c]);
    t.right.push_back(true);
  }
  for (int k = 0; k < 2; ++k) {
    t.bar_before.push_back(k == 0);
    t.right.push_back(true);
  }

  std::vector<std::string> head{""};
  for (int j : col_order) head.push_back(r.variables[j] + " ");
  head.push_back("c");
  head.push_back("ĉ");
  t.rows.push_back(head);
  t.rule_before.push_back(false);

  for (int a = 0; a < n; ++a) {
    const int i = row_order[a];
    std::vector<std::string> row{r.equations[i]};
    for (int j : col_order) {
      const auto& s = r.sigma[i][j];
      row.push_back(s ? std::to_string(*s) + (hvt_col[i] == j ? "•" : " ") : "");
    }
    row.push_back(std::to_string(r.c[i]));
    row.push_back(std::to_string(c_hat[a]));
    t.rows.push_back(row);
    t.rule_before.push_back(a == 0 || row_rule[a]);
  }
  std::vector<std::string> drow{"d"}, dhrow{"d̂"};
  for (int a = 0; a < n; ++a) {
    drow.push_back(std::to_string(r.d[col_order[a]]) + " ");
    dhrow.push_back(std::to_string(d_hat[a]) + " ");
  }
  t.rows.push_back(drow);
  t.rule_before.push_back(true);
  t.rows.push_back(dhrow);
  t.rule_before.push_back(false);
  return t.str();
}

}  // namespace

std::string derivative_name(const std::string& name, int order) {
  if (order <= 3) return name + std::string(order, '\'');
  return name + "^(" + std::to_string(order) + ")";
}

std::string shorthand(const std::vector<NamedPair>& pairs) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<int>> orders;
  for (const NamedPair& p : pairs) {
    if (!orders.contains(p.name)) order.push_back(p.name);
    orders[p.name].push_back(p.order);
  }
  std::vector<std::string> parts;
  for (const std::string& name : order) {
    std::vector<int> o = orders[name];
    std::sort(o.begin(), o.end());
    bool prefix = o.size() > 1;
    for (std::size_t k = 0; prefix && k < o.size(); ++k) prefix = o[k] == static_cast<int>(k);
    if (prefix) {
      parts.push_back(name + "^(≤" + std::to_string(o.back()) + ")");
    } else {
      for (int r : o) parts.push_back(derivative_name(name, r));
    }
  }
  return parts.empty() ? "(none)" : join(parts, ", ");
}

AnalysisReport make_report(const Analysis& a, const std::string& model_name, SchemeMode mode,
                           int k_min, int k_max) {
  const DaeModel& m = a.model;
  const int n = m.size();
  AnalysisReport r;
  r.model = model_name;
  r.variables = m.variable_names;
  r.equations = m.equation_names;
  r.constants = m.constants;

  r.sigma.assign(n, std::vector<std::optional<int>>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (a.sigma(i, j).is_finite()) r.sigma[i][j] = a.sigma(i, j).value();
  for (int i = 0; i < n; ++i) r.hvt.push_back({r.equations[i], r.variables[a.hvt.assignment[i]]});
  r.hvt_value = a.hvt.value;
  r.c = a.offsets.c;
  r.d = a.offsets.d;

  for (const Block& b : a.coarse.blocks)
    r.coarse_blocks.push_back({names_of(b.rows, r.equations), names_of(b.cols, r.variables)});
  for (int l = 0; l < a.fine.num_blocks(); ++l) {
    const Block& b = a.fine.blocks[l];
    BlockReport br;
    br.rows = names_of(b.rows, r.equations);
    br.cols = names_of(b.cols, r.variables);
    for (int i : b.rows) br.c_hat.push_back(a.local.c_hat[a.fine.row_pos[i]]);
    for (int j : b.cols) br.d_hat.push_back(a.local.d_hat[a.fine.col_pos[j]]);
    br.lead_time = a.local.lead_times[l];
    br.ql = a.ql.gamma_block[l];
    br.strong_hall = is_strong_hall(block_pattern(a.pattern, a.fine, l));
    r.blocks.push_back(std::move(br));
  }
  r.lead_times = a.local.lead_times;

  for (int i = 0; i < n; ++i) r.ql_per_equation.push_back({r.equations[i], a.ql.global[i], a.ql.blockwise[i]});
  r.ql_per_block = a.ql.gamma_block;
  r.ql_dae = a.ql.gamma_dae;
  r.all_equations_ql = a.ql.all_equations_ql;

  r.scheme = mode;
  const InitSets& init = mode == SchemeMode::Block ? a.block_init : a.basic_init;
  r.init_values = named(init.values, r.variables);
  r.init_guesses = named(init.guesses, r.variables);
  r.stage_from = k_min;
  r.stage_to = k_max;
  for (const StageTask& task : a.schedule(mode, k_min, k_max).tasks) {
    TaskEntry e;
    e.stage = task.stage;
    e.block = task.block + 1;
    e.local_stage = task.local_stage;
    e.equations = named(task.equations, r.equations);
    e.unknowns = named(task.unknowns, r.variables);
    e.inputs = named(task.cross_block_inputs, r.variables);
    e.given = task.given;
    e.determinacy = task.determinacy;
    e.linearity = task.linearity;
    r.schedule.push_back(std::move(e));
  }
  r.index = a.metrics.index;
  r.dof = a.metrics.dof;
  return r;
}

ojson to_json(const AnalysisReport& r) {
  ojson j;
  ojson consts = ojson::object();
  for (const auto& [k, v] : r.constants) consts[k] = v;
  j["model"] = {{"name", r.model},
                {"variables", r.variables},
                {"equations", r.equations},
                {"constants", consts}};
  ojson sigma = ojson::array();
  for (const auto& row : r.sigma) {
    ojson jr = ojson::array();
    for (const auto& s : row) jr.push_back(s ? ojson(*s) : ojson(nullptr));
    sigma.push_back(jr);
  }
  j["sigma"] = sigma;
  ojson pairs = ojson::array();
  for (const HvtEntry& e : r.hvt) pairs.push_back({{"equation", e.equation}, {"variable", e.variable}});
  j["hvt"] = {{"pairs", pairs}, {"value", r.hvt_value}};
  j["offsets"] = {{"c", r.c}, {"d", r.d}};
  j["metrics"] = {{"index", r.index}, {"dof", r.dof}};

  ojson coarse = ojson::array();
  for (const CoarseBlockReport& b : r.coarse_blocks) coarse.push_back({{"rows", b.rows}, {"cols", b.cols}});
  j["coarse_blocks"] = coarse;
  ojson blocks = ojson::array();
  for (const BlockReport& b : r.blocks)
    blocks.push_back({{"size", b.size()},
                      {"rows", b.rows},
                      {"cols", b.cols},
                      {"c_hat", b.c_hat},
                      {"d_hat", b.d_hat},
                      {"lead_time", b.lead_time},
                      {"ql", b.ql},
                      {"strong_hall", b.strong_hall}});
  j["blocks"] = blocks;
  j["lead_times"] = r.lead_times;

  ojson per_eq = ojson::array();
  for (const EquationQlEntry& e : r.ql_per_equation)
    per_eq.push_back({{"equation", e.equation}, {"global", e.global}, {"blockwise", e.blockwise}});
  j["ql"] = {{"per_equation", per_eq},
             {"per_block", r.ql_per_block},
             {"dae", r.ql_dae},
             {"all_equations_ql", r.all_equations_ql}};

  j["scheme"] = r.scheme;
  j["init"] = {{"values", pairs_json(r.init_values, "variable")},
               {"guesses", pairs_json(r.init_guesses, "variable")}};
  j["stages"] = {{"from", r.stage_from}, {"to", r.stage_to}};
  ojson sched = ojson::array();
  for (const TaskEntry& t : r.schedule)
    sched.push_back({{"stage", t.stage},
                     {"block", t.block},
                     {"local_stage", t.local_stage},
                     {"given", t.given},
                     {"determinacy", t.determinacy},
                     {"linearity", t.linearity},
                     {"equations", pairs_json(t.equations, "equation")},
                     {"unknowns", pairs_json(t.unknowns, "variable")},
                     {"inputs", pairs_json(t.inputs, "variable")}});
  j["schedule"] = sched;
  return j;
}

AnalysisReport report_from_json(const ojson& j) {
  AnalysisReport r;
  const ojson& m = j.at("model");
  r.model = m.at("name").get<std::string>();
  r.variables = m.at("variables").get<std::vector<std::string>>();
  r.equations = m.at("equations").get<std::vector<std::string>>();
  for (const auto& [k, v] : m.at("constants").items()) r.constants[k] = v.get<double>();

  for (const auto& row : j.at("sigma")) {
    std::vector<std::optional<int>> rr;
    for (const auto& s : row) rr.push_back(s.is_null() ? std::nullopt : std::optional<int>(s.get<int>()));
    r.sigma.push_back(std::move(rr));
  }
  for (const auto& e : j.at("hvt").at("pairs"))
    r.hvt.push_back({e.at("equation").get<std::string>(), e.at("variable").get<std::string>()});
  r.hvt_value = j.at("hvt").at("value").get<int>();
  r.c = j.at("offsets").at("c").get<std::vector<int>>();
  r.d = j.at("offsets").at("d").get<std::vector<int>>();
  r.index = j.at("metrics").at("index").get<int>();
  r.dof = j.at("metrics").at("dof").get<int>();

  for (const auto& b : j.at("coarse_blocks"))
    r.coarse_blocks.push_back({b.at("rows").get<std::vector<std::string>>(),
                               b.at("cols").get<std::vector<std::string>>()});
  for (const auto& b : j.at("blocks")) {
    BlockReport br;
    br.rows = b.at("rows").get<std::vector<std::string>>();
    br.cols = b.at("cols").get<std::vector<std::string>>();
    br.c_hat = b.at("c_hat").get<std::vector<int>>();
    br.d_hat = b.at("d_hat").get<std::vector<int>>();
    br.lead_time = b.at("lead_time").get<int>();
    br.ql = b.at("ql").get<bool>();
    br.strong_hall = b.at("strong_hall").get<bool>();
    r.blocks.push_back(std::move(br));
  }
  r.lead_times = j.at("lead_times").get<std::vector<int>>();

  const ojson& ql = j.at("ql");
  for (const auto& e : ql.at("per_equation"))
    r.ql_per_equation.push_back({e.at("equation").get<std::string>(), e.at("global").get<QlCode>(),
                                 e.at("blockwise").get<QlCode>()});
  r.ql_per_block = ql.at("per_block").get<std::vector<bool>>();
  r.ql_dae = ql.at("dae").get<bool>();
  r.all_equations_ql = ql.at("all_equations_ql").get<bool>();

  r.scheme = j.at("scheme").get<SchemeMode>();
  r.init_values = pairs_from(j.at("init").at("values"), "variable");
  r.init_guesses = pairs_from(j.at("init").at("guesses"), "variable");
  r.stage_from = j.at("stages").at("from").get<int>();
  r.stage_to = j.at("stages").at("to").get<int>();
  for (const auto& t : j.at("schedule")) {
    TaskEntry e;
    e.stage = t.at("stage").get<int>();
    e.block = t.at("block").get<int>();
    e.local_stage = t.at("local_stage").get<int>();
    e.given = t.at("given").get<bool>();
    e.determinacy = t.at("determinacy").get<Determinacy>();
    e.linearity = t.at("linearity").get<Linearity>();
    e.equations = pairs_from(t.at("equations"), "equation");
    e.unknowns = pairs_from(t.at("unknowns"), "variable");
    e.inputs = pairs_from(t.at("inputs"), "variable");
    r.schedule.push_back(std::move(e));
  }
  return r;
}

std::string render_text(const AnalysisReport& r) {
  std::ostringstream out;
  out << "Model " << r.model << ": " << r.equations.size() << " equations in "
      << r.variables.size() << " variables\n";
  out << "  variables: " << join(r.variables, ", ") << "\n";
  if (!r.constants.empty()) {
    std::vector<std::string> cs;
    for (const auto& [k, v] : r.constants) cs.push_back(k + " = " + fmt_double(v));
    out << "  constants: " << join(cs, ", ") << "\n";
  }

  out << "\nSignature matrix in fine BTF order (• marks the HVT, value " << r.hvt_value
      << ")\n\n"
      << sigma_grid(r);
  out << "\nStructural index " << r.index << ", degrees of freedom " << r.dof << "\n";

  out << "\nCoarse blocks\n";
  for (std::size_t l = 0; l < r.coarse_blocks.size(); ++l)
    out << "  " << l + 1 << "  {" << join(r.coarse_blocks[l].rows, ", ") << " | "
        << join(r.coarse_blocks[l].cols, ", ") << "}\n";
  out << "\nFine blocks (solved from last to first)\n";
  TextTable bt;
  bt.bar_before.assign(6, false);
  bt.right = {true, false, true, true, false, false};
  bt.rows.push_back({"#", "equations | variables", "size", "lead", "QL", "Strong Hall"});
  for (std::size_t l = 0; l < r.blocks.size(); ++l) {
    const BlockReport& b = r.blocks[l];
    bt.rows.push_back({std::to_string(l + 1), "{" + join(b.rows, ", ") + " | " + join(b.cols, ", ") + "}",
                       std::to_string(b.size()), std::to_string(b.lead_time), b.ql ? "QL" : "NQL",
                       b.strong_hall ? "yes" : "no"});
  }
  bt.rule_before.assign(bt.rows.size(), false);
  out << bt.str();

  out << "\nQuasilinearity\n";
  TextTable qt;
  qt.bar_before.assign(3, false);
  qt.right.assign(3, false);
  qt.rows.push_back({"equation", "global", "in block"});
  for (const EquationQlEntry& e : r.ql_per_equation)
    qt.rows.push_back({e.equation, to_string(e.global), to_string(e.blockwise)});
  qt.rule_before.assign(qt.rows.size(), false);
  out << qt.str();
  std::vector<std::string> pb;
  for (std::size_t l = 0; l < r.ql_per_block.size(); ++l)
    pb.push_back(std::to_string(l + 1) + ":" + (r.ql_per_block[l] ? "QL" : "NQL"));
  out << "  blocks: " << join(pb, "  ") << "\n";
  out << "  DAE: " << (r.ql_dae ? "QL" : "NQL")
      << (r.all_equations_ql ? ", every equation L" : "") << "\n";

  out << "\nInitialization (" << to_string(r.scheme) << " scheme, "
      << r.init_values.size() + r.init_guesses.size() << " pairs)\n";
  out << "  values:  " << shorthand(r.init_values) << "\n";
  out << "  guesses: " << shorthand(r.init_guesses) << "\n";

  out << "\nSchedule (" << to_string(r.scheme) << " scheme, stages " << r.stage_from << ".."
      << r.stage_to << ")\n";
  TextTable st;
  st.bar_before.assign(6, false);
  st.right = {true, true, true, false, false, false};
  st.rows.push_back({"k", "block", "k_l", "system", "equations -> unknowns", "inputs"});
  for (const TaskEntry& t : r.schedule) {
    const std::string kind =
        t.given ? "given"
                : std::string(to_string(t.determinacy)) + " " + to_string(t.linearity);
    const std::string eqs = t.given ? "" : pair_list(t.equations) + " -> ";
    st.rows.push_back({std::to_string(t.stage), std::to_string(t.block),
                       std::to_string(t.local_stage), kind, eqs + pair_list(t.unknowns),
                       pair_list(t.inputs)});
  }
  st.rule_before.assign(st.rows.size(), false);
  out << st.str();
  return out.str();
}

ojson solve_to_json(const Analysis& a, const std::string& model_name, SchemeMode mode,
                    const SolveResult& res) {
  ojson j;
  j["model"] = model_name;
  j["scheme"] = mode;
  j["order"] = res.order;
  j["t0"] = res.state.t0;
  ojson vars = ojson::array();
  for (int v = 0; v < a.model.size(); ++v) {
    std::vector<double> ds;
    for (int r = 0; r < res.state.known[v]; ++r) ds.push_back(res.state.derivative(v, r));
    vars.push_back({{"variable", a.model.variable_names[v]}, {"derivatives", ds}});
  }
  j["variables"] = vars;
  j["stages_solved"] = res.stages.size();
  j["max_residual"] = res.max_residual;
  j["max_scaled_residual"] = res.max_scaled_residual;
  return j;
}

std::string render_solve_text(const Analysis& a, const std::string& model_name, SchemeMode mode,
                              const SolveResult& res) {
  std::ostringstream out;
  out << "Model " << model_name << ", " << to_string(mode) << " scheme, stages "
      << a.first_stage() << ".." << res.order << " at t0 = " << fmt_double(res.state.t0)
      << "\n\n";
  int width = 0;
  for (int k : res.state.known) width = std::max(width, k);
  TextTable t;
  t.bar_before.assign(width + 1, false);
  t.right.assign(width + 1, true);
  t.right[0] = false;
  std::vector<std::string> head{"variable"};
  for (int r = 0; r < width; ++r) head.push_back("order " + std::to_string(r));
  t.rows.push_back(head);
  for (int v = 0; v < a.model.size(); ++v) {
    std::vector<std::string> row{a.model.variable_names[v]};
    for (int r = 0; r < res.state.known[v]; ++r) row.push_back(fmt_double(res.state.derivative(v, r)));
    t.rows.push_back(row);
  }
  t.rule_before.assign(t.rows.size(), false);
  out << t.str();
  out << "\nEntries are derivatives x^(r)(t0).\n";
  out << "max residual " << fmt_double(res.max_residual) << ", scaled "
      << fmt_double(res.max_scaled_residual) << "\n";
  return out.str();
}

}  // namespace sigmadae
