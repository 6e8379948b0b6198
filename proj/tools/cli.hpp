#pragma once

// Command-line front end. `run` is kept free of process state (argv in,
// streams out) so the test suite can drive it directly.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nilspec/nilspec.hpp"

namespace nilspec::cli {

using nlohmann::json;

/// Seed used when --seed is absent.
inline constexpr const char* kSeedEnv = "NILSPEC_SEED";

enum ExitCode : int { kOk = 0, kExpectationFailed = 1, kInputError = 2 };

inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// JSON text with every floating-point value written as %.17g.
inline void emit_json(std::ostream& os, const json& j, int indent = 0) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  const std::string inner(static_cast<std::size_t>(indent + 2), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        break;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << inner << json(it.key()).dump() << ": ";
        emit_json(os, it.value(), indent + 2);
      }
      os << "\n" << pad << "}";
      break;
    }
    case json::value_t::array: {
      bool scalars = true;
      for (const auto& e : j) scalars = scalars && !e.is_structured();
      os << "[";
      bool first = true;
      for (const auto& e : j) {
        if (!first) os << (scalars ? ", " : ",");
        first = false;
        if (!scalars) os << "\n" << inner;
        emit_json(os, e, indent + 2);
      }
      if (!scalars && !j.empty()) os << "\n" << pad;
      os << "]";
      break;
    }
    case json::value_t::number_float:
      if (std::isfinite(j.get<double>())) {
        os << fmt17(j.get<double>());
      } else {
        os << "null";
      }
      break;
    default:
      os << j.dump();
  }
}

inline std::string join17(const Vector& v, const char* sep = ",") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + fmt17(v[i]);
  return s;
}

/// Plain `key: value` lines for the text format; vectors comma-separated.
inline void emit_text(std::ostream& os, const json& j, const std::string& prefix = "") {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix + it.key();
    const json& v = it.value();
    if (v.is_object()) {
      emit_text(os, v, key + ".");
    } else if (v.is_array() && std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number(); })) {
      os << key << ": ";
      for (std::size_t i = 0; i < v.size(); ++i) {
        os << (i ? "," : "");
        emit_json(os, v[i]);
      }
      os << "\n";
    } else if (v.is_array()) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i].is_object()) {
          emit_text(os, v[i], key + "[" + std::to_string(i) + "].");
        } else {
          os << key << "[" << i << "]: ";
          emit_json(os, v[i]);
          os << "\n";
        }
      }
    } else {
      os << key << ": ";
      if (v.is_string()) {
        os << v.get<std::string>();
      } else {
        emit_json(os, v);
      }
      os << "\n";
    }
  }
}

inline json matrix_rows(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(m.row(i));
  return rows;
}

struct ScanRow {
  double u = 0.0;
  std::array<double, 3> b{};
  Vector ric_eigs;
  double scal_ambient = 0.0;
  double scal_min = 0.0;
  double scal_max = 0.0;
  double isospec_residual = 0.0;
};

inline const char* kScanHeader =
    "u,b12,b13,b23,e1,e2,e3,e4,e5,e6,scal_ambient,scal_min,scal_max,isospec_residual";

inline std::vector<ScanRow> family_scan(const FamilyParams& p, std::size_t samples, double tol) {
  const SkewPencil base = family_pencil(p);
  std::vector<ScanRow> rows;
  for (double u : u_grid(interval_I(p), samples)) {
    const FamilyParams d = deform(p, u);
    const SkewPencil pu = family_pencil(d);
    const ScalExtremes ex = scal_extremes(pu);
    rows.push_back({u, d.b, ric_spectrum_invariant(pu), scal_ambient(pu), ex.min, ex.max,
                    pencil_isospectral(base, pu, tol).max_residual});
  }
  return rows;
}

inline std::string csv_line(const ScanRow& r) {
  std::string s = fmt17(r.u);
  for (double b : r.b) s += "," + fmt17(b);
  s += "," + join17(r.ric_eigs);
  for (double v : {r.scal_ambient, r.scal_min, r.scal_max, r.isospec_residual}) s += "," + fmt17(v);
  return s;
}

/// Parses one data line of the scan CSV back into a row.
inline ScanRow parse_csv_line(const std::string& line) {
  std::vector<double> v;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) v.push_back(std::strtod(cell.c_str(), nullptr));
  if (v.size() != 14) throw InputError("scan CSV: expected 14 columns");
  ScanRow r;
  r.u = v[0];
  r.b = {v[1], v[2], v[3]};
  r.ric_eigs.assign(v.begin() + 4, v.begin() + 10);
  r.scal_ambient = v[10];
  r.scal_min = v[11];
  r.scal_max = v[12];
  r.isospec_residual = v[13];
  return r;
}

namespace detail {

struct PencilSource {
  std::string file;
  std::vector<double> a, b;
  std::optional<double> u;

  void attach(CLI::App* app) {
    app->add_option("pencil", file, "Pencil JSON file");
    app->add_option("--a", a, "family a1,a2,a3 (instead of a pencil file)")->delimiter(',')->expected(3);
    app->add_option("--b", b, "family b12,b13,b23")->delimiter(',')->expected(3);
    app->add_option("--u", u, "deformation parameter applied to the family");
  }

  SkewPencil load() const {
    if (!file.empty()) {
      if (!a.empty() || !b.empty() || u) throw InputError("give either a pencil file or --a/--b, not both");
      return json_io::pencil_from_json(json_io::read_file(file));
    }
    if (a.size() != 3 || b.size() != 3) throw InputError("need a pencil file or --a and --b");
    FamilyParams p{{a[0], a[1], a[2]}, {b[0], b[1], b[2]}};
    if (u) p = deform(p, *u);
    return family_pencil(p);
  }
};

inline FamilyParams family_params(const std::string& file, const std::vector<double>& a,
                                    const std::vector<double>& b) {
  if (!file.empty()) return json_io::family_from_json(json_io::read_file(file));
  FamilyParams p;
  if (!a.empty()) {
    if (a.size() != 3) throw InputError("--a needs three values");
    p.a = {a[0], a[1], a[2]};
  }
  if (!b.empty()) {
    if (b.size() != 3) throw InputError("--b needs three values");
    p.b = {b[0], b[1], b[2]};
  }
  return p;
}

inline void emit(std::ostream& out, const json& j, const std::string& format) {
  if (format == "json") {
    emit_json(out, j);
    out << "\n";
  } else {
    emit_text(out, j);
  }
}

}  // namespace detail

/// Runs one command line. Returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Isospectral deformations of two-step nilpotent boundary manifolds"};
  app.name("nilspec");
  app.require_subcommand(1);

  std::string format = "text";
  std::string expect;
  double tol = kDefaultTolerances.comparison;
  std::optional<std::uint64_t> seed_flag;
  std::size_t samples = 0;
  bool exact = false;

  // family scan
  auto* family = app.add_subcommand("family", "explicit six-dimensional deformation family");
  family->require_subcommand(1);
  auto* scan = family->add_subcommand("scan", "Ricci spectrum and scalar curvature along u in I");
  std::string family_file;
  std::vector<double> fam_a, fam_b;
  std::size_t scan_samples = 65;
  scan->add_option("--family", family_file, "Family JSON file");
  scan->add_option("--a", fam_a, "a1,a2,a3")->delimiter(',')->expected(3);
  scan->add_option("--b", fam_b, "b12,b13,b23")->delimiter(',')->expected(3);
  scan->add_option("--samples", scan_samples, "grid size including endpoints");
  scan->add_option("--tol", tol, "isospectrality tolerance");
  scan->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  scan->add_option("--expect", expect, "isospectral")->check(CLI::IsMember({"isospectral"}));

  // isospec check
  auto* isospec = app.add_subcommand("isospec", "isospectrality of pencils");
  isospec->require_subcommand(1);
  auto* iso_check = isospec->add_subcommand("check", "compare spectra of j(z) and j'(z) for all z");
  std::string iso_a, iso_b;
  iso_check->add_option("A", iso_a, "Pencil JSON")->required();
  iso_check->add_option("B", iso_b, "Pencil JSON")->required();
  iso_check->add_option("--tol", tol, "relative coefficient tolerance");
  iso_check->add_option("--samples", samples, "raise the circle sample count");
  iso_check->add_flag("--exact", exact, "exact rational arithmetic (integer or p/q entries)");
  iso_check->add_option("--expect", expect, "expected verdict")
      ->check(CLI::IsMember({"isospectral", "not-isospectral"}));

  // equiv check
  auto* equiv = app.add_subcommand("equiv", "L-equivalence of pencils");
  equiv->require_subcommand(1);
  auto* eq_check = equiv->add_subcommand("check", "search for (A, C) with A j(z) A^-1 = j'(Cz)");
  std::string eq_a, eq_b, eq_lattice;
  eq_check->add_option("A", eq_a, "Pencil JSON")->required();
  eq_check->add_option("B", eq_b, "Pencil JSON")->required();
  eq_check->add_option("--lattice", eq_lattice, "Lattice JSON (default: standard Z^k)");
  eq_check->add_option("--seed", seed_flag, std::string("search seed (default $") + kSeedEnv + " or 42)");
  eq_check->add_option("--tol", tol, "invariant comparison tolerance");
  eq_check->add_option("--expect", expect, "expected verdict")
      ->check(CLI::IsMember({"equivalent", "inequivalent", "undecided"}));

  // scal extremes / scal at
  auto* scal = app.add_subcommand("scal", "scalar curvature of the boundary manifold");
  scal->require_subcommand(1);
  auto* scal_ext = scal->add_subcommand("extremes", "max/min scalar curvature and where they occur");
  detail::PencilSource ext_src;
  ext_src.attach(scal_ext);
  auto* scal_pt = scal->add_subcommand("at", "scalar curvature at a point, by two routes");
  detail::PencilSource at_src;
  at_src.attach(scal_pt);
  std::vector<double> at_x;
  scal_pt->add_option("--x", at_x, "unit vector in v")->delimiter(',')->required();

  // holonomy
  auto* holo = app.add_subcommand("holonomy", "fiber displacement of a horizontal great-circle lift");
  detail::PencilSource holo_src;
  holo_src.attach(holo);
  std::vector<double> hx, hy, hz0;
  std::string holo_lattice;
  holo->add_option("--x", hx, "unit vector")->delimiter(',')->required();
  holo->add_option("--y", hy, "unit vector orthogonal to x")->delimiter(',')->required();
  holo->add_option("--z0", hz0, "initial fiber coordinate")->delimiter(',');
  holo->add_option("--lattice", holo_lattice, "Lattice JSON for the reduced endpoint");

  // genericity
  auto* gen = app.add_subcommand("genericity", "commutant dimension and center check");
  detail::PencilSource gen_src;
  gen_src.attach(gen);

  // dimension-bound
  auto* dim = app.add_subcommand("dimension-bound", "lower bound on isospectral family dimension");
  long long dim_m = 0;
  dim->add_option("--m", dim_m, "dim v")->required();

  // lattice autos
  auto* lattice = app.add_subcommand("lattice", "lattice utilities");
  lattice->require_subcommand(1);
  auto* autos = lattice->add_subcommand("autos", "orthogonal automorphisms of a lattice");
  std::string autos_file;
  autos->add_option("L", autos_file, "Lattice JSON")->required();

  for (auto* c : {iso_check, eq_check, scal_ext, scal_pt, holo, gen, dim, autos})
    c->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "nilspec: " << e.what() << "\n";
    return kInputError;
  }

  const auto seed = [&]() -> std::uint64_t {
    if (seed_flag) return *seed_flag;
    if (const char* env = std::getenv(kSeedEnv)) {
      char* end = nullptr;
      const unsigned long long v = std::strtoull(env, &end, 10);
      if (end == env || *end != '\0') throw InputError(std::string(kSeedEnv) + " is not an integer");
      return v;
    }
    return kDefaultSeed;
  };

  try {
    if (scan->parsed()) {
      if (format == "text") format = "csv";
      const FamilyParams p = detail::family_params(family_file, fam_a, fam_b);
      const auto rows = family_scan(p, scan_samples, tol);
      bool all_iso = true;
      for (const auto& r : rows) all_iso = all_iso && r.isospec_residual <= tol;
      if (format == "csv") {
        out << kScanHeader << "\n";
        for (const auto& r : rows) out << csv_line(r) << "\n";
      } else {
        json arr = json::array();
        for (const auto& r : rows)
          arr.push_back({{"u", r.u}, {"b12", r.b[0]}, {"b13", r.b[1]}, {"b23", r.b[2]},
                         {"ric_eigs", r.ric_eigs}, {"scal_ambient", r.scal_ambient},
                         {"scal_min", r.scal_min}, {"scal_max", r.scal_max},
                         {"isospec_residual", r.isospec_residual}});
        const auto I = interval_I(p);
        detail::emit(out, {{"family", json_io::to_json(p)}, {"interval", {I.lo, I.hi}}, {"rows", arr}}, "json");
      }
      if (expect == "isospectral" && !all_iso) return kExpectationFailed;
      return kOk;
    }

    if (iso_check->parsed()) {
      IsospecReport rep;
      if (exact) {
        rep = pencil_isospectral_exact(json_io::rational_pencil_from_json(json_io::read_file(iso_a)),
                                       json_io::rational_pencil_from_json(json_io::read_file(iso_b)));
      } else {
        const SkewPencil pa = json_io::pencil_from_json(json_io::read_file(iso_a));
        const SkewPencil pb = json_io::pencil_from_json(json_io::read_file(iso_b));
        require_same_shape(pa, pb, "isospec check");
        rep = pencil_isospectral(pa, pb, tol, samples);
      }
      json j{{"verdict", to_string(rep.verdict)},
             {"max_residual", rep.max_residual},
             {"mode", to_string(rep.mode)},
             {"samples", rep.samples}};
      if (rep.witness_z) j["witness_z"] = *rep.witness_z;
      detail::emit(out, j, format);
      const bool iso = rep.verdict == IsospecVerdict::Isospectral;
      if ((expect == "isospectral" && !iso) || (expect == "not-isospectral" && iso)) return kExpectationFailed;
      return kOk;
    }

    if (eq_check->parsed()) {
      const SkewPencil pa = json_io::pencil_from_json(json_io::read_file(eq_a));
      const SkewPencil pb = json_io::pencil_from_json(json_io::read_file(eq_b));
      require_same_shape(pa, pb, "equiv check");
      const LatticeBasis L = eq_lattice.empty() ? LatticeBasis::standard(pa.k())
                                                : json_io::lattice_from_json(json_io::read_file(eq_lattice));
      EquivalenceOptions opt;
      opt.tol = tol;
      const std::uint64_t s = seed();
      const EquivalenceVerdict v = l_equivalence(pa, pb, L, s, opt);
      json j{{"verdict", to_string(v.state)},
             {"seed", s},
             {"candidates", v.candidates},
             {"excluded", v.excluded},
             {"restarts_used", v.restarts_used}};
      if (std::isfinite(v.best_residual)) j["best_residual"] = v.best_residual;
      if (v.certificate)
        j["certificate"] = {{"A", matrix_rows(v.certificate->A)},
                            {"C", matrix_rows(v.certificate->C)},
                            {"defect", v.certificate->defect}};
      if (v.witness)
        j["witness"] = {{"invariant", v.witness->name},
                        {"value_a", v.witness->value_a},
                        {"value_b", v.witness->value_b},
                        {"gap", v.witness->gap}};
      detail::emit(out, j, format);
      static const std::map<std::string, EquivalenceState> want{
          {"equivalent", EquivalenceState::Equivalent},
          {"inequivalent", EquivalenceState::Inequivalent},
          {"undecided", EquivalenceState::Undecided}};
      if (!expect.empty() && want.at(expect) != v.state) return kExpectationFailed;
      return kOk;
    }

    if (scal_ext->parsed()) {
      const SkewPencil p = ext_src.load();
      const ScalExtremes ex = scal_extremes(p);
      detail::emit(out,
                   {{"scal_max", ex.max},
                    {"argmax_x", ex.argmax_x},
                    {"scal_min", ex.min},
                    {"argmin_x", ex.argmin_x},
                    {"scal_ambient", scal_ambient(p)},
                    {"ric_spectrum", ric_spectrum_invariant(p)}},
                   format);
      return kOk;
    }

    if (scal_pt->parsed()) {
      const SkewPencil p = at_src.load();
      require_length(at_x, p.m(), "scal at --x");
      const ScalReport r = scal_via_shape(p, at_x);
      detail::emit(out,
                   {{"scal_closed_form", scal_at(p, at_x)},
                    {"scal_shape", r.scal_shape},
                    {"ambient", r.ambient},
                    {"ric_xx", r.ric_xx},
                    {"trace_nabla_x", r.trace_nabla_x},
                    {"shape_trace", r.shape_trace}},
                   format);
      return kOk;
    }

    if (holo->parsed()) {
      const SkewPencil p = holo_src.load();
      require_length(hx, p.m(), "holonomy --x");
      require_length(hy, p.m(), "holonomy --y");
      if (hz0.empty()) hz0.assign(p.k(), 0.0);
      require_length(hz0, p.k(), "holonomy --z0");
      const Vector disp = holonomy_displacement(p, hx, hy);
      const GroupPoint end = horizontal_lift(p, hx, hy, hz0, 2.0 * std::numbers::pi);
      json j{{"displacement", disp},
             {"bracket", bracket(p, hx, hy)},
             {"closes", max_abs(disp) <= kDefaultTolerances.spectral},
             {"end_x", end.x},
             {"end_z", end.z}};
      if (!holo_lattice.empty()) {
        const LatticeBasis L = json_io::lattice_from_json(json_io::read_file(holo_lattice));
        if (L.k() != p.k()) throw InputError("holonomy: lattice rank differs from k");
        j["end_zbar"] = L.reduce(end.z);
      }
      detail::emit(out, j, format);
      return kOk;
    }

    if (gen->parsed()) {
      const SkewPencil p = gen_src.load();
      const std::size_t cd = commutant_dimension(p);
      detail::emit(out,
                   {{"commutant_dimension", cd},
                    {"generic", cd == 1},
                    {"center_reduced", center_reduced(p)}},
                   format);
      return kOk;
    }

    if (dim->parsed()) {
      const long long d = dimension_bound(dim_m);
      if (format == "json") {
        detail::emit(out, {{"m", dim_m}, {"d", d}}, "json");
      } else {
        out << d << "\n";
      }
      return kOk;
    }

    if (autos->parsed()) {
      const LatticeBasis L = json_io::lattice_from_json(json_io::read_file(autos_file));
      const auto group = lattice_automorphisms(L);
      json mats = json::array();
      for (const auto& C : group) mats.push_back(matrix_rows(C));
      detail::emit(out, {{"count", group.size()}, {"automorphisms", mats}}, format);
      return kOk;
    }
  } catch (const Error& e) {
    err << "nilspec: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"nilspec"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace nilspec::cli
