#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cmreg/connection.hpp"
#include "cmreg/fibration.hpp"
#include "cmreg/periods.hpp"
#include "cmreg/quad/monodromy.hpp"
#include "cmreg/regulator.hpp"
#include "cmreg/verify.hpp"

namespace cmreg::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kExitPass = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kSchemaVersion = 1;

enum class OutputFormat { table, json, csv };

struct RunConfig {
  std::optional<long long> p, l, a, b, n, m, h;
  std::optional<double> tol;
  Precision precision = Precision::extended;
  OutputFormat output = OutputFormat::table;
  bool parallel = false;
  bool sweep = false;
  std::string report_path = "cmreg_verify.json";
  std::optional<std::string> residue_perturbation;

  [[nodiscard]] FibrationParams params() const {
    require(p && l && a && b, ErrorKind::invalid_argument, "--p, --l, --a and --b are required");
    return {*p, *l, *a, *b};
  }
};

/// A command's result: a JSON document plus the exit code it implies.
struct Report {
  Json doc;
  int exit_code = kExitPass;
};

// ---- JSON encoders -------------------------------------------------------------------------

inline Json encode(const Rational& x) { return to_string(x); }
inline Json encode(const NumValue& v) { return Json{{"re", v.re()}, {"im", v.im()}, {"err", v.err}}; }
inline Json encode(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}, {"err", 0.0}}; }
inline Json encode(const RatMat2& r) {
  return Json::array({Json::array({encode(r[0][0]), encode(r[0][1])}), Json::array({encode(r[1][0]), encode(r[1][1])})});
}
inline Json encode(const FibrationParams& fp) {
  return Json{{"p", fp.p()}, {"l", fp.l()}, {"a", fp.a()}, {"b", fp.b()}};
}

inline Json make_doc(std::string_view command, const std::optional<FibrationParams>& fp) {
  Json doc{{"schema_version", kSchemaVersion}, {"command", command}};
  if (fp) doc["params"] = encode(*fp);
  doc["sections"] = Json::array();
  doc["notes"] = Json::array();
  return doc;
}

inline void add_section(Json& doc, std::string_view name, Json rows) {
  doc["sections"].push_back(Json{{"name", name}, {"rows", std::move(rows)}});
}

// ---- rendering -----------------------------------------------------------------------------

namespace detail {

inline bool is_complex(const Json& v) {
  return v.is_object() && v.size() == 3 && v.contains("re") && v.contains("im") && v.contains("err");
}

inline std::string format_number(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

inline std::string format_cell(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_number(v.get<double>());
  if (v.is_null()) return "-";
  if (is_complex(v)) {
    const double re = v["re"].get<double>();
    const double im = v["im"].get<double>();
    std::string s = format_number(re);
    if (im != 0.0) s += (im < 0 ? "-" : "+") + format_number(std::abs(im)) + "i";
    return s + " ±" + format_number(v["err"].get<double>());
  }
  if (v.is_array()) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_cell(v[i]);
    return s + "]";
  }
  return v.dump();
}

/// Column names in first-appearance order across all rows.
inline std::vector<std::string> columns(const Json& rows) {
  std::vector<std::string> cols;
  for (const auto& row : rows)
    for (const auto& [key, _] : row.items())
      if (std::find(cols.begin(), cols.end(), key) == cols.end()) cols.push_back(key);
  return cols;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

/// CSV cells: complex values split into .re/.im/.err columns, arrays joined with ';'.
inline void flatten_csv(const std::string& key, const Json& v, std::vector<std::pair<std::string, std::string>>& out) {
  if (is_complex(v)) {
    for (const char* part : {"re", "im", "err"}) out.emplace_back(key + "." + part, format_number(v[part].get<double>()));
    return;
  }
  if (v.is_array()) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + format_cell(v[i]);
    out.emplace_back(key, s);
    return;
  }
  out.emplace_back(key, format_cell(v));
}

}  // namespace detail

/// Aligned text table of one section.
inline std::string render_section_table(const Json& section) {
  const Json& rows = section["rows"];
  const auto cols = detail::columns(rows);
  std::vector<std::vector<std::string>> cells;
  std::vector<std::size_t> width(cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) width[c] = cols[c].size();
  for (const auto& row : rows) {
    auto& line = cells.emplace_back();
    for (std::size_t c = 0; c < cols.size(); ++c) {
      line.push_back(row.contains(cols[c]) ? detail::format_cell(row[cols[c]]) : "");
      width[c] = std::max(width[c], line.back().size());
    }
  }
  auto emit = [&](const std::vector<std::string>& line) {
    std::string s;
    for (std::size_t c = 0; c < line.size(); ++c) {
      s += c ? "  " : "";
      s += line[c];
      if (c + 1 < line.size()) s += std::string(width[c] - line[c].size(), ' ');
    }
    return s + "\n";
  };
  std::string out = "== " + section["name"].get<std::string>() + "\n";
  if (cols.empty()) return out + "(none)\n";
  out += emit(cols);
  for (const auto& line : cells) out += emit(line);
  return out;
}

inline std::string render_csv(const Json& doc) {
  std::string out;
  for (const auto& section : doc["sections"]) {
    std::vector<std::vector<std::pair<std::string, std::string>>> flat;
    std::vector<std::string> cols;
    for (const auto& row : section["rows"]) {
      auto& cells = flat.emplace_back();
      for (const auto& [key, value] : row.items()) detail::flatten_csv(key, value, cells);
      for (const auto& [key, _] : cells)
        if (std::find(cols.begin(), cols.end(), key) == cols.end()) cols.push_back(key);
    }
    out += "section";
    for (const auto& c : cols) out += "," + detail::csv_escape(c);
    out += "\n";
    for (const auto& cells : flat) {
      out += detail::csv_escape(section["name"].get<std::string>());
      for (const auto& c : cols) {
        const auto it = std::find_if(cells.begin(), cells.end(), [&](const auto& kv) { return kv.first == c; });
        out += "," + (it == cells.end() ? std::string() : detail::csv_escape(it->second));
      }
      out += "\n";
    }
  }
  return out;
}

inline std::string render(const Json& doc, OutputFormat format) {
  if (format == OutputFormat::json) return doc.dump(2) + "\n";
  if (format == OutputFormat::csv) return render_csv(doc);
  std::string out;
  if (doc.contains("params")) {
    const Json& p = doc["params"];
    out += "p=" + p["p"].dump() + " l=" + p["l"].dump() + " a=" + p["a"].dump() + " b=" + p["b"].dump() + "\n";
  }
  for (const auto& section : doc["sections"]) out += render_section_table(section);
  for (const auto& note : doc["notes"]) out += "note: " + note.get<std::string>() + "\n";
  return out;
}

// ---- commands ------------------------------------------------------------------------------

namespace detail {

inline std::vector<long long> selected_n(const RunConfig& cfg, const FibrationParams& fp) {
  if (cfg.n) {
    fp.require_n(*cfg.n);
    return {*cfg.n};
  }
  std::vector<long long> ns;
  for (long long n = 1; n < fp.p(); ++n) ns.push_back(n);
  return ns;
}

inline Json index_list(const std::vector<long long>& v) { return Json(v); }

}  // namespace detail

inline Report cmd_hodge(const RunConfig& cfg) {
  const FibrationParams fp = cfg.params();
  Report r{make_doc("hodge", fp)};
  Json dims = Json::array();
  long long total = 0;
  for (long long n : detail::selected_n(cfg, fp)) {
    const auto fr = frac_params(fp, n);
    const HodgeDims d = hodge_dims(fp, n);
    const IndexSets s = index_sets(fp, n);
    total += d.total();
    dims.push_back(Json{{"n", n},
                        {"alpha", encode(fr.alpha)},
                        {"beta", encode(fr.beta)},
                        {"f2", d.f2},
                        {"gr1", d.gr1},
                        {"gr0", d.gr0},
                        {"sum", d.total()},
                        {"I1", detail::index_list(s.i1)},
                        {"I2", detail::index_list(s.i2)}});
  }
  add_section(r.doc, "hodge numbers", std::move(dims));
  Json chars = Json::array();
  for (long long h : char_indices(fp)) {
    const CharData cd = char_data(fp, h);
    if (cfg.n && cd.n != *cfg.n) continue;
    chars.push_back(Json{{"h", h}, {"m", cd.m}, {"n", cd.n}, {"p(h)", hodge_position(fp, h)}, {"side", hodge_side(fp, h)}});
  }
  add_section(r.doc, "hodge positions", std::move(chars));
  if (!cfg.n) {
    const CmRankReport rank = cm_rank_check(fp);
    r.doc["notes"].push_back("total rank " + std::to_string(total) + " (expected " +
                             std::to_string((fp.l() - 1) * (fp.p() - 1)) + ")" + (rank.pass ? "" : ", MISMATCH"));
    if (!rank.pass) r.exit_code = kExitFailure;
  }
  return r;
}

inline Report cmd_period(const RunConfig& cfg) {
  const FibrationParams fp = cfg.params();
  const double tol = cfg.tol.value_or(1e-9);
  std::vector<long long> hs;
  if (cfg.h) {
    fp.require_h(*cfg.h);
    hs.push_back(mod_floor(*cfg.h, fp.lp()));
  } else if (cfg.m || cfg.n) {
    require(cfg.m && cfg.n, ErrorKind::invalid_argument, "--m and --n must be given together");
    fp.require_n(*cfg.n);
    require(mod_floor(*cfg.m, fp.l()) != 0, ErrorKind::invalid_argument, "m must be nonzero modulo l");
    hs.push_back(crt_index(fp, *cfg.m, *cfg.n));
  } else {
    hs = char_indices(fp);
  }
  Report r{make_doc("period", fp)};
  Json rows = Json::array();
  bool all_pass = true;
  for (const auto& row : gross_deligne_check(fp, tol)) {
    if (std::find(hs.begin(), hs.end(), row.h) == hs.end()) continue;
    const auto fr = char_data(fp, row.h).frac;
    const bool pass = row.period_ok && row.hodge_ok;
    all_pass = all_pass && pass;
    rows.push_back(Json{{"h", row.h},
                        {"m", row.m},
                        {"n", row.n},
                        {"alpha", encode(fr.alpha)},
                        {"beta", encode(fr.beta)},
                        {"mu", encode(fr.mu)},
                        {"per_gamma", encode(row.per_gamma)},
                        {"per_bb", encode(row.per_bb)},
                        {"ratio", encode(row.ratio)},
                        {"predicted", encode(row.predicted)},
                        {"sign", row.root_of_unity_sign},
                        {"deviation", row.deviation},
                        {"verdict", pass ? "pass" : "fail"}});
  }
  add_section(r.doc, "period formula", std::move(rows));
  r.exit_code = all_pass ? kExitPass : kExitFailure;
  return r;
}

inline Report cmd_regulator(const RunConfig& cfg) {
  const FibrationParams fp = cfg.params();
  Report r{make_doc("regulator", fp)};
  std::vector<std::pair<long long, long long>> cells;
  if (cfg.m || cfg.n) {
    require(cfg.m && cfg.n, ErrorKind::invalid_argument, "--m and --n must be given together");
    fp.require_n(*cfg.n);
    cmreg::detail::require_regulator_index(fp, *cfg.m, *cfg.n);
    cells.emplace_back(*cfg.m, *cfg.n);
  } else {
    for (long long n = 1; n < fp.p(); ++n)
      for (long long m : cmreg::detail::admissible_m(fp, n)) cells.emplace_back(m, n);
  }
  Json values = Json::array();
  for (const auto& [m, n] : cells) {
    const NumValue reg = regulator_value(fp, m, n, cfg.precision);
    const NumValue omega = omega_cap(fp, m, n);
    values.push_back(Json{{"m", m}, {"n", n}, {"h", crt_index(fp, m, n)}, {"R", encode(reg)}, {"Omega", encode(omega)},
                          {"R/Omega", encode(reg / omega)}});
  }
  add_section(r.doc, "regulator values", std::move(values));

  if (fp.p() >= fp.l()) {
    r.doc["notes"].push_back("non-vanishing check skipped: the theorem assumes p < l, here p=" + std::to_string(fp.p()) +
                             " >= l=" + std::to_string(fp.l()));
  } else if (fp.a() + fp.b() == fp.p()) {
    r.doc["notes"].push_back("non-vanishing check skipped: the theorem assumes a + b != p");
  } else {
    Json rows = Json::array();
    bool all = true;
    for (const auto& row : nonvanishing_check(fp, cfg.precision)) {
      all = all && row.pass();
      rows.push_back(Json{{"n", row.n},
                          {"m", row.m ? Json(*row.m) : Json()},
                          {"Omega", encode(row.omega)},
                          {"Omega'", encode(row.omega_dual)},
                          {"R", encode(row.reg)},
                          {"R'", encode(row.reg_dual)},
                          {"pairing", encode(row.pairing)},
                          {"verdict", row.pass() ? "pass" : "fail"}});
    }
    add_section(r.doc, "non-vanishing", std::move(rows));
    if (!all) r.exit_code = kExitFailure;
  }

  if (fp.a() + fp.b() == fp.p()) {
    const CriterionReport crit = criterion_ratios(fp, cfg.precision);
    Json rows = Json::array();
    for (const auto& e : crit.entries)
      rows.push_back(Json{{"m", e.m}, {"n", e.n}, {"r", encode(e.r)},
                          {"conjugation_defect", e.conjugation_defect ? Json(*e.conjugation_defect) : Json()}});
    add_section(r.doc, "criterion ratios", std::move(rows));
    add_section(r.doc, "criterion fit",
                Json::array({Json{{"unknowns", crit.unknowns},
                                  {"equations", crit.equations},
                                  {"surplus", crit.surplus()},
                                  {"residual", crit.residual},
                                  {"relative_residual", crit.relative_residual}}}));
  }

  if (fp.p() == 2 && fp.l() == 3) {
    const LegendreReport leg = legendre_probe();
    add_section(r.doc, "legendre probe",
                Json::array({Json{{"V", encode(leg.value)},
                                  {"via_regulator", encode(leg.via_regulator)},
                                  {"path_difference", leg.path_difference},
                                  {"precision_difference", leg.precision_difference},
                                  {"best_rational", std::to_string(leg.probe.num) + "/" + std::to_string(leg.probe.den)},
                                  {"quality", leg.probe.quality}}}));
  }
  return r;
}

inline Json encode(const CriterionResult& c) {
  return Json{{"id", c.id},
              {"criterion", c.title},
              {"applicable", c.applicable},
              {"worst", c.worst},
              {"gate", c.gate},
              {"within_budget", c.within_budget()},
              {"verdict", !c.applicable ? "skip" : (c.pass() ? "pass" : "fail")},
              {"detail", c.detail}};
}

/// The stdout document omits timings so that it is reproducible; the report file carries them.
inline Report cmd_verify(const RunConfig& cfg) {
  std::vector<FibrationParams> cells;
  std::optional<FibrationParams> single;
  if (cfg.sweep) {
    cells = default_sweep();
  } else {
    single = cfg.params();
    cells.push_back(*single);
  }
  VerifyConfig vcfg;
  vcfg.tol_floor = cfg.tol.value_or(0.0);
  vcfg.precision = cfg.precision;
  vcfg.parallel = cfg.parallel;
  if (cfg.residue_perturbation) vcfg.residue_perturbation = parse_rational(*cfg.residue_perturbation);

  const auto results = run_verification(cells, vcfg);
  Report r{make_doc("verify", single)};
  r.doc["cells"] = cells.size();
  Json rows = Json::array();
  Json timing = Json::array();
  bool all = true;
  for (const auto& c : results) {
    all = all && (!c.applicable || c.pass());
    rows.push_back(encode(c));
    timing.push_back(Json{{"id", c.id}, {"seconds", c.seconds}, {"budget", c.budget}});
  }
  add_section(r.doc, "acceptance", std::move(rows));
  r.doc["pass"] = all;
  r.exit_code = all ? kExitPass : kExitFailure;

  Json file_doc = r.doc;
  file_doc["timing"] = std::move(timing);
  std::ofstream out(cfg.report_path);
  require(static_cast<bool>(out), ErrorKind::invalid_argument, "cannot write report file " + cfg.report_path);
  out << file_doc.dump(2) << "\n";
  r.doc["notes"].push_back("report written to " + cfg.report_path);
  return r;
}

inline Report cmd_gm(const RunConfig& cfg) {
  const FibrationParams fp = cfg.params();
  Report r{make_doc("gm", fp)};
  const auto ns = detail::selected_n(cfg, fp);
  Json conn = Json::array();
  Json residues = Json::array();
  Json spectra = Json::array();
  Json mono = Json::array();
  bool ok = true;
  for (long long n : ns) {
    for (const Chart chart : {Chart::t, Chart::s}) {
      const ConnMat a = gm_matrix(fp, n, chart);
      conn.push_back(Json{{"n", n}, {"chart", std::string(a.variable())}, {"A", a.to_string()}});
    }
    for (const auto& row : residue_spectrum_check(fp, n)) {
      residues.push_back(Json{{"n", n}, {"point", to_string(row.point)}, {"residue", to_string(row.residue)}});
      Json spec = row.spectrum ? Json::array({encode((*row.spectrum)[0]), encode((*row.spectrum)[1])}) : Json();
      spectra.push_back(Json{{"n", n}, {"point", to_string(row.point)}, {"spectrum", spec},
                             {"in_[0,1)", row.in_unit_interval}});
      ok = ok && row.in_unit_interval;
    }
    const MonodromyReport rep = monodromy_check(fp, n);
    for (const auto& row : rep.rows) {
      const bool zeta = row.target.point == SingularPoint::zeta;
      mono.push_back(Json{{"n", n},
                          {"loop", row.target.label()},
                          {"eig1", encode(row.eigen[0])},
                          {"eig2", encode(row.eigen[1])},
                          {"|eig|-1", row.modulus_defect},
                          {"check", zeta ? "(M-I)^2" : "spectrum"},
                          {"defect", zeta ? row.unipotent_defect : row.spectrum_deviation}});
    }
    r.doc["notes"].push_back("n=" + std::to_string(n) + " composite loop relation defect " +
                             detail::format_number(rep.composite_defect));
  }
  add_section(r.doc, "connection matrices", std::move(conn));
  add_section(r.doc, "residue tables", std::move(residues));
  add_section(r.doc, "residue spectra", std::move(spectra));
  add_section(r.doc, "monodromy", std::move(mono));
  if (!ok) r.exit_code = kExitFailure;
  return r;
}

// ---- entry point ---------------------------------------------------------------------------

/// Parses argv-style arguments, runs one subcommand and writes its output; returns the exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"CM regulator toolkit: Hodge data, periods, regulators and verification"};
  // "--h" is the character index, so help is long-form only.
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);
  RunConfig cfg;
  std::string precision = "extended";
  std::string output = "table";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--p", cfg.p, "prime p");
    sub->add_option("--l", cfg.l, "prime l");
    sub->add_option("--a", cfg.a, "exponent a, 0 < a < p");
    sub->add_option("--b", cfg.b, "exponent b, 0 < b < p");
    sub->add_option("--n", cfg.n, "restrict to one n in 1..p-1");
    sub->add_option("--m", cfg.m, "index m (with --n)");
    sub->add_option("--h", cfg.h, "character index h, a unit mod lp");
    sub->add_option("--tol", cfg.tol, "numeric tolerance")->check(CLI::Range(1e-14, 1e-3));
    sub->add_option("--precision", precision, "series precision")->check(CLI::IsMember({"double", "extended"}));
    sub->add_option("--output", output, "output format")->check(CLI::IsMember({"table", "json", "csv"}));
    sub->add_flag("--parallel", cfg.parallel, "evaluate sweep cells concurrently");
  };
  CLI::App* hodge = app.add_subcommand("hodge", "Hodge numbers, index sets and positions p(h)");
  CLI::App* period = app.add_subcommand("period", "Gamma-product period formula check");
  CLI::App* regulator = app.add_subcommand("regulator", "regulator values, non-vanishing and criterion reports");
  CLI::App* verify = app.add_subcommand("verify", "run the acceptance suite");
  CLI::App* gm = app.add_subcommand("gm", "connection matrices, residues and monodromy");
  for (CLI::App* sub : {hodge, period, regulator, verify, gm}) add_common(sub);
  verify->add_flag("--sweep", cfg.sweep, "use the default parameter sweep");
  verify->add_option("--report", cfg.report_path, "JSON report path");
  verify->add_option("--perturb-residue", cfg.residue_perturbation, "test hook: shift an expected Res_0 entry")
      ->group("");

  std::vector<const char*> argv{"cmreg"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }
  cfg.precision = precision == "double" ? Precision::binary64 : Precision::extended;
  cfg.output = output == "json" ? OutputFormat::json : (output == "csv" ? OutputFormat::csv : OutputFormat::table);

  try {
    Report report;
    if (*hodge) report = cmd_hodge(cfg);
    else if (*period) report = cmd_period(cfg);
    else if (*regulator) report = cmd_regulator(cfg);
    else if (*verify) report = cmd_verify(cfg);
    else report = cmd_gm(cfg);
    out << render(report.doc, cfg.output);
    return report.exit_code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    const bool usage = e.kind() == ErrorKind::invalid_argument || e.kind() == ErrorKind::precondition;
    return usage ? kExitUsage : kExitFailure;
  }
}

}  // namespace cmreg::cli
