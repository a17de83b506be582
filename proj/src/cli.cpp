#include "hvconic/cli.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hvconic/formats.hpp"
#include "hvconic/grid_geometry.hpp"
#include "hvconic/reconstruct.hpp"
#include "hvconic/theorem_verify.hpp"
#include "hvconic/workloads.hpp"
#include "hvconic/xray_conic.hpp"

namespace hvconic::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::pair<int, int> parse_pair(const std::string& text, const char* what) {
  const auto x = text.find_first_of("xX");
  int a = 0, b = 0;
  if (x == std::string::npos) throw UsageError(std::string(what) + " must look like MxN");
  const auto r1 = std::from_chars(text.data(), text.data() + x, a);
  const auto r2 = std::from_chars(text.data() + x + 1, text.data() + text.size(), b);
  if (r1.ec != std::errc() || r1.ptr != text.data() + x || r2.ec != std::errc() ||
      r2.ptr != text.data() + text.size() || a < 1 || b < 1) {
    throw UsageError(std::string(what) + " must look like MxN with positive integers");
  }
  return {a, b};
}

Box parse_box(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double value = 0.0;
    const auto r = std::from_chars(item.data(), item.data() + item.size(), value);
    if (r.ec != std::errc() || r.ptr != item.data() + item.size()) {
      throw UsageError("--box must be a,b,c,d");
    }
    v.push_back(value);
  }
  if (v.size() != 4) throw UsageError("--box must be a,b,c,d");
  return Box(v[0], v[1], v[2], v[3]);
}

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  std::int64_t p = 0, q = 1;
  const char* end = text.data() + (slash == std::string::npos ? text.size() : slash);
  const auto r1 = std::from_chars(text.data(), end, p);
  bool ok = r1.ec == std::errc() && r1.ptr == end;
  if (slash != std::string::npos) {
    const auto r2 = std::from_chars(text.data() + slash + 1, text.data() + text.size(), q);
    ok = ok && r2.ec == std::errc() && r2.ptr == text.data() + text.size();
  }
  if (!ok) throw UsageError("--t must look like p/q");
  return Rational(p, q);
}

GridGeometry make_geometry(const std::string& dims, const std::string& box) {
  const auto [m, n] = parse_pair(dims, "--dims");
  return GridGeometry(box.empty() ? Box(0.0, m, 0.0, n) : parse_box(box), m, n);
}

void emit(std::ostream& out, const std::optional<std::string>& path, const std::string& text) {
  if (path && *path != "-") {
    write_file(*path, text);
  } else {
    out << text;
  }
}

std::string stem_of(const std::string& path) {
  std::filesystem::path p(path);
  return (p.parent_path() / p.stem()).string();
}

// ---------------------------------------------------------------------------

struct VerifyOptions {
  std::string kind;
  int seeds = 20;
  std::uint64_t seed = 1;
  std::string dims;
  std::string box;
  std::string t = "1/2";
  double eps = 0.0;  // 0: 0.1 for chains, 0.1 * min box side for sets
  int lattice = 33;
  int subsamples = kDefaultSubsamples;
  int refine = 0;
  bool sub_box = false;
};

int run_verify(const VerifyOptions& o, std::ostream& out) {
  bool all = true;
  auto report = [&](const CheckReport& r) {
    out << to_json_line(r) << "\n";
    all = all && r.holds;
  };
  const std::string default_dims = o.kind == "convergence" ? "16x16" : "8x8";
  const GridGeometry g = make_geometry(o.dims.empty() ? default_dims : o.dims, o.box);
  if (o.seeds < 1) throw UsageError("--seeds must be positive");

  if (o.kind == "remark2") {
    const CheckReport r = reproduce_remark2();
    out << to_json_line(r) << "\n";
    return r.holds ? kExitDomain : kExitOk;
  }
  for (int k = 0; k < o.seeds; ++k) {
    const std::uint64_t s1 = o.seed + 2 * static_cast<std::uint64_t>(k);
    const std::uint64_t s2 = s1 + 1;
    if (o.kind == "concavity" || o.kind == "superadd") {
      const GridSet l1 = sample_hv_convex(g, s1, true);
      const GridSet l2 = sample_hv_convex(g, s2, true);
      const Rational t = parse_rational(o.t);
      report(o.kind == "concavity" ? check_concavity(l1, l2, t, {o.lattice, o.lattice})
                                   : check_area_superadditivity(l1, l2, t));
    } else if (o.kind == "dilation") {
      const GridSet l = sample_hv_convex(g, s1, !o.sub_box);
      const double eps =
          o.eps > 0.0 ? o.eps : 0.1 * std::min(g.box().width(), g.box().height());
      report(check_dilation_bound(l, eps, o.refine > 0 ? o.refine : 8));
    } else if (o.kind == "stability") {
      report(check_stability_bound(sample_hv_convex(g, s1, !o.sub_box),
                                   sample_hv_convex(g, s2, !o.sub_box), o.subsamples));
    } else if (o.kind == "convergence") {
      report(check_convergence(sample_hv_convex(g, s1, !o.sub_box), halving_resolutions(g),
                               o.subsamples));
    } else if (o.kind == "polyline") {
      const bool closed = k % 2 == 1;
      const double eps = o.eps > 0.0 ? o.eps : 0.1;
      const Polyline chain = random_simple_polyline(s1, closed, 3 + k % 6, 2.0 * eps);
      report(check_polyline_bound(chain, eps, o.refine > 0 ? o.refine : kPolylineRefine));
    } else {
      throw UsageError("unknown verify kind '" + o.kind + "'");
    }
  }
  return all ? kExitOk : kExitDomain;
}

// ---------------------------------------------------------------------------

int run_reconstruct(const std::string& problem_path, bool oracle,
                    const std::optional<std::string>& output, std::ostream& out) {
  nlohmann::json spec;
  try {
    spec = nlohmann::json::parse(read_file(problem_path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, problem_path + ": " + e.what());
  }
  try {
    const auto& target = spec.at("target");
    std::optional<Box> box;
    if (spec.contains("box")) {
      const auto v = spec.at("box").get<std::vector<double>>();
      if (v.size() != 4) throw Error(ErrorCode::ParseError, "box needs 4 numbers");
      box = Box(v[0], v[1], v[2], v[3]);
    }
    std::optional<ConicEvaluator> f;
    if (target.contains("hvset")) {
      const GridSet generator = parse_hvset(read_file(target.at("hvset").get<std::string>()));
      f = conic_of(generator);
      if (!box) box = generator.geometry().box();
    } else {
      const auto y = parse_profile_csv(read_file(target.at("y_profile").get<std::string>()),
                                       SectionAxis::Vertical);
      const auto x = parse_profile_csv(read_file(target.at("x_profile").get<std::string>()),
                                       SectionAxis::Horizontal);
      f = ConicEvaluator(y, x);
    }
    if (!box) throw Error(ErrorCode::ParseError, "box is required with profile targets");
    const auto dims = spec.at("dims").get<std::vector<int>>();
    if (dims.size() != 2) throw Error(ErrorCode::ParseError, "dims needs 2 integers");
    const GridGeometry geometry(*box, dims[0], dims[1]);

    ObjectiveNorm norm;
    const std::string norm_name = spec.value("norm", std::string("sup"));
    if (norm_name == "l1") {
      norm.kind = NormKind::L1;
      norm.l1_refine = spec.value("l1_refine", 4);
    } else if (norm_name != "sup") {
      throw Error(ErrorCode::ParseError, "norm must be 'sup' or 'l1'");
    }
    const std::string feas = spec.value("feasibility", std::string("hv_connected"));
    Feasibility feasibility = Feasibility::HvConnected;
    if (feas == "hv_connected_full_box") {
      feasibility = Feasibility::HvConnectedFullBox;
    } else if (feas != "hv_connected") {
      throw Error(ErrorCode::ParseError, "feasibility must be 'hv_connected' or 'hv_connected_full_box'");
    }
    const ReconstructionProblem problem(*f, geometry, norm, feasibility);

    AnnealingParams params;
    if (spec.contains("budget")) {
      const auto& b = spec.at("budget");
      params.steps = b.value("steps", params.steps);
      params.restarts = b.value("restarts", params.restarts);
      params.initial_temperature = b.value("initial_temperature", params.initial_temperature);
      params.cooling = b.value("cooling", params.cooling);
    }
    params.seed = spec.value("seed", std::uint64_t{0});
    if (!oracle) oracle = spec.value("oracle", false);

    const ReconstructionResult result =
        oracle ? exhaustive(problem) : local_search(problem, params);

    nlohmann::json summary;
    summary["objective"] = result.objective;
    summary["steps"] = result.steps;
    summary["thin_contact"] = result.thin_contact;
    summary["mode"] = oracle ? "oracle" : "local_search";
    if (oracle) summary["optima"] = result.optima.size();
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& p : result.trace) trace.push_back({p.step, p.objective, p.best});
    summary["trace"] = std::move(trace);

    const std::string prefix =
        output ? *output : spec.value("output", stem_of(problem_path) + ".result");
    write_file(prefix + ".hvset", write_hvset(result.best));
    write_file(prefix + ".json", summary.dump(2) + "\n");
    if (oracle) {
      std::string dump;
      for (const auto& s : result.optima) dump += write_hvset(s);
      write_file(prefix + ".optima.hvset", dump);
    }
    out << "objective " << format_double(result.objective) << "\n";
    if (oracle) out << "optima " << result.optima.size() << "\n";
    out << "thin_contact " << (result.thin_contact ? 1 : 0) << "\n";
    return kExitOk;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, problem_path + ": " + e.what());
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized conic functions of hv-convex grid sets", "hvconic"};
  app.require_subcommand(1, 1);

  // gen
  auto* gen = app.add_subcommand("gen", "Sample a connected hv-convex set (HVSET)");
  std::string gen_dims, gen_box;
  std::uint64_t gen_seed = 0;
  bool gen_full = false;
  std::optional<std::string> gen_out;
  gen->add_option("--dims", gen_dims, "MxN")->required();
  gen->add_option("--box", gen_box, "a,b,c,d (default 0,M,0,N)");
  gen->add_option("--seed", gen_seed)->required();
  gen->add_flag("--full-box", gen_full, "Projections fill the box");
  gen->add_option("-o,--output", gen_out, "Output path (default stdout)");

  // xray
  auto* xray = app.add_subcommand("xray", "Write the two X-ray profiles as CSV");
  std::string xray_in;
  std::optional<std::string> xray_prefix;
  xray->add_option("file", xray_in, "HVSET file")->required();
  xray->add_option("-o,--prefix", xray_prefix, "Writes PREFIX.y.csv and PREFIX.x.csv");

  // conic
  auto* conic = app.add_subcommand("conic", "Sample the conic function on a lattice");
  std::string conic_in, conic_samples = "64x64";
  std::optional<std::string> conic_out, conic_pgm;
  conic->add_option("file", conic_in, "HVSET file")->required();
  conic->add_option("--samples", conic_samples, "PxQ lattice (corners included)");
  conic->add_option("-o,--output", conic_out, "CSV path (default stdout)");
  conic->add_option("--pgm", conic_pgm, "Also write a 16-bit PGM image");

  // dist
  auto* dist = app.add_subcommand("dist", "Hausdorff distance bracket");
  std::string dist_a, dist_b;
  int dist_sub = kDefaultSubsamples;
  dist->add_option("first", dist_a)->required();
  dist->add_option("second", dist_b)->required();
  dist->add_option("--subsamples", dist_sub);

  // verify
  auto* verify = app.add_subcommand("verify", "Run a checker batch (JSON lines)");
  VerifyOptions vo;
  verify->add_option("kind", vo.kind,
                     "concavity|superadd|dilation|stability|convergence|polyline|remark2")
      ->required();
  verify->add_option("--seeds", vo.seeds, "Number of random cases");
  verify->add_option("--seed", vo.seed, "Base seed");
  verify->add_option("--dims", vo.dims, "MxN (default 8x8, 16x16 for convergence)");
  verify->add_option("--box", vo.box, "a,b,c,d");
  verify->add_option("--t", vo.t, "Combination weight p/q");
  verify->add_option("--eps", vo.eps, "Dilation or tube radius (default scaled to the box)");
  verify->add_option("--lattice", vo.lattice, "Sample lattice size for concavity");
  verify->add_option("--subsamples", vo.subsamples, "Hausdorff sampling per cell edge");
  verify->add_option("--refine", vo.refine, "Rasterization refinement");
  verify->add_flag("--sub-box", vo.sub_box, "Sample sets inside the box instead of filling it");

  // reconstruct
  auto* rec = app.add_subcommand("reconstruct", "Reconstruct a set from a target conic function");
  std::string rec_problem;
  bool rec_oracle = false;
  std::optional<std::string> rec_out;
  rec->add_option("problem", rec_problem, "Problem JSON")->required();
  rec->add_flag("--oracle", rec_oracle, "Exhaustive search (at most 16 cells)");
  rec->add_option("-o,--output", rec_out, "Output prefix");

  // enum
  auto* en = app.add_subcommand("enum", "Count connected hv-convex sets");
  std::string en_dims, en_box;
  bool en_full = false;
  std::optional<std::string> en_dump;
  en->add_option("--dims", en_dims, "MxN")->required();
  en->add_option("--box", en_box, "a,b,c,d");
  en->add_flag("--full-box", en_full);
  en->add_option("--dump", en_dump, "Write all sets as concatenated HVSET");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    if (e.get_exit_code() == 0) return kExitOk;
    return kExitUsage;
  }

  try {
    if (gen->parsed()) {
      const GridGeometry g = make_geometry(gen_dims, gen_box);
      emit(out, gen_out, write_hvset(sample_hv_convex(g, gen_seed, gen_full)));
    } else if (xray->parsed()) {
      const GridSet set = parse_hvset(read_file(xray_in));
      const std::string prefix = xray_prefix ? *xray_prefix : stem_of(xray_in);
      write_file(prefix + ".y.csv", write_profile_csv(xray_v(set)));
      write_file(prefix + ".x.csv", write_profile_csv(xray_h(set)));
      out << prefix << ".y.csv\n" << prefix << ".x.csv\n";
    } else if (conic->parsed()) {
      const GridSet set = parse_hvset(read_file(conic_in));
      const auto [px, py] = parse_pair(conic_samples, "--samples");
      const ConicEvaluator f = conic_of(set);
      const Box& box = set.geometry().box();
      emit(out, conic_out, write_field_csv(f, box, px, py));
      if (conic_pgm) write_file(*conic_pgm, write_field_pgm(f, box, px, py));
    } else if (dist->parsed()) {
      if (dist_sub < 2) throw UsageError("--subsamples must be >= 2");
      const DistanceBracket h = hausdorff(parse_hvset(read_file(dist_a)),
                                          parse_hvset(read_file(dist_b)), dist_sub);
      out << format_double(h.lower) << " " << format_double(h.upper) << "\n";
    } else if (verify->parsed()) {
      return run_verify(vo, out);
    } else if (rec->parsed()) {
      return run_reconstruct(rec_problem, rec_oracle, rec_out, out);
    } else if (en->parsed()) {
      const GridGeometry g = make_geometry(en_dims, en_box);
      const auto sets = enumerate_hv_connected(g, en_full);
      out << sets.size() << "\n";
      if (en_dump) {
        std::string dump;
        for (const auto& s : sets) dump += write_hvset(s);
        write_file(*en_dump, dump);
      }
    }
    return kExitOk;
  } catch (const UsageError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "ERROR " << to_string(e.code()) << ": " << e.what() << "\n";
    return kExitDomain;
  }
}

}  // namespace hvconic::cli
