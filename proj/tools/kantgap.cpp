// kantgap: generators, solvers and reports for discrete transport instances.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "kantgap/io.hpp"
#include "kantgap/oracle.hpp"

namespace {

using namespace kantgap;
using io::Json;

constexpr int kExitValidation = 1;
constexpr int kExitInfeasible = 2;

struct Globals {
  bool exactFlag = false;
  bool floatFlag = false;
  std::uint64_t seed = 0;
  std::string format;
  std::string output;
  std::string epsGrid = "1/n";
  std::string mGrid = "1,2,4,8";
};

std::vector<std::string> splitList(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

template <class Scalar>
std::vector<Scalar> parseScalars(const std::string& text) {
  std::vector<Scalar> out;
  for (const auto& token : splitList(text)) out.push_back(ScalarTraits<Scalar>::parse(token));
  return out;
}

/// "2,3,5" or an inclusive range "2:50".
std::vector<int> parseSizes(const std::string& text) {
  std::vector<int> out;
  for (const auto& token : splitList(text)) {
    try {
      if (const auto colon = token.find(':'); colon != std::string::npos) {
        const int lo = std::stoi(token.substr(0, colon)), hi = std::stoi(token.substr(colon + 1));
        for (int n = lo; n <= hi; ++n) out.push_back(n);
      } else {
        out.push_back(std::stoi(token));
      }
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::ParseError, "bad size list entry '" + token + "'");
    }
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "size list is empty");
  return out;
}

class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

void writeJson(const Globals& g, const Json& doc) {
  Sink sink(g.output);
  sink.stream() << doc.dump(2) << '\n';
}

std::string formatOr(const Globals& g, const std::string& fallback) { return g.format.empty() ? fallback : g.format; }

void requireFormat(const std::string& format, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (format == a) return;
  throw Error(ErrorCode::InvalidArgument, "format '" + format + "' is not available for this command");
}

template <class Scalar>
Instance<Scalar> loadAs(const std::string& path) {
  return io::loadProblem(path).template cast<Scalar>();
}

// ---- gen -------------------------------------------------------------------

struct GenArgs {
  std::string scenario = "diagonal";
  int n = 3;
  int nx = 0, ny = 0;
  double infDensity = 0.0;
  std::string marginals = "random";
  int bandwidth = 1;
};

Instance<Rational> generate(const Globals& g, const GenArgs& a) {
  if (a.scenario == "diagonal") return example_diagonal(a.n);
  if (a.scenario == "random")
    return random_instance(a.nx > 0 ? a.nx : a.n, a.ny > 0 ? a.ny : a.n, a.infDensity, parseMarginalKind(a.marginals),
                           g.seed);
  if (a.scenario == "band") return closed_inf_band(a.n, a.bandwidth);
  throw Error(ErrorCode::InvalidArgument, "unknown scenario '" + a.scenario + "'");
}

int runGen(const Globals& g, const GenArgs& a) {
  const Instance<Rational> inst = generate(g, a);
  requireFormat(formatOr(g, "json"), {"json"});
  writeJson(g, io::problemToJson(inst));
  return 0;
}

// ---- solve -----------------------------------------------------------------

template <class Scalar>
int runSolve(const Globals& g, const std::string& problem, const std::string& witness) {
  const auto inst = loadAs<Scalar>(problem);
  const auto P = primal_value(inst.cost, inst.mu, inst.nu);
  const auto dual = dual_value(inst.cost, inst.mu, inst.nu);
  const bool finite = P.isFinite() && dual.value.isFinite();

  if (!witness.empty()) {
    Json doc;
    doc["dual"] = io::dualToJson(dual.pair);
    if (dual.coupling) doc["coupling"] = io::couplingToJson(*dual.coupling);
    if (dual.ray) {
      Json ray;
      Json dphi = Json::array(), dpsi = Json::array();
      for (Eigen::Index i = 0; i < dual.ray->dphi.size(); ++i) dphi.push_back(io::scalarToJson(dual.ray->dphi(i)));
      for (Eigen::Index j = 0; j < dual.ray->dpsi.size(); ++j) dpsi.push_back(io::scalarToJson(dual.ray->dpsi(j)));
      ray["dphi"] = std::move(dphi);
      ray["dpsi"] = std::move(dpsi);
      ray["gain"] = io::scalarToJson(dual.ray->gain);
      doc["ray"] = std::move(ray);
    }
    std::ofstream out(witness, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + witness + "'");
    out << doc.dump(2) << '\n';
  }

  const std::string format = formatOr(g, "text");
  requireFormat(format, {"text", "json"});
  if (format == "json") {
    Json doc;
    doc["P"] = io::extendedToJson(P);
    doc["D"] = io::extendedToJson(dual.value);
    if (finite) doc["gap"] = io::scalarToJson(Scalar(P.value() - dual.value.value()));
    if (!witness.empty()) doc["witness"] = witness;
    Sink sink(g.output);
    sink.stream() << doc.dump() << '\n';
    return 0;
  }
  Sink sink(g.output);
  sink.stream() << "P=" << P << " D=" << dual.value;
  if (finite) sink.stream() << " gap=" << formatScalar(Scalar(P.value() - dual.value.value()));
  sink.stream() << '\n';
  if (!witness.empty()) sink.stream() << "witness=" << witness << '\n';
  return 0;
}

// ---- profile ---------------------------------------------------------------

template <class Scalar>
int runProfile(const Globals& g, const std::string& problem, const std::string& at) {
  const auto inst = loadAs<Scalar>(problem);
  const auto profile = solve_profile(inst.cost, inst.mu, inst.nu);
  const std::string format = formatOr(g, "csv");
  requireFormat(format, {"csv", "json", "text"});

  if (!at.empty()) {
    const Scalar mass = ScalarTraits<Scalar>::parse(at);
    const auto cost = evaluate_profile(profile, mass);
    if (format == "json") {
      Json doc;
      doc["mass"] = io::scalarToJson(mass);
      doc["cost"] = io::extendedToJson(cost);
      doc["feasible"] = cost.isFinite();
      doc["maxMass"] = io::scalarToJson(profile.maxMass());
      writeJson(g, doc);
      return cost.isFinite() ? 0 : kExitInfeasible;
    }
    if (!cost.isFinite())
      throw Error(ErrorCode::InfeasibleMass, "mass " + formatScalar(mass) + " exceeds the maximal transportable mass " +
                                                 formatScalar(profile.maxMass()));
    Sink sink(g.output);
    sink.stream() << "mass,cost\n" << formatScalar(mass) << ',' << cost << '\n';
    return 0;
  }

  Sink sink(g.output);
  if (format == "json") {
    Json points = Json::array();
    for (const auto& bp : profile.breakpoints())
      points.push_back({{"mass", io::scalarToJson(bp.mass)}, {"cost", io::scalarToJson(bp.cost)}});
    Json doc;
    doc["breakpoints"] = std::move(points);
    doc["maxMass"] = io::scalarToJson(profile.maxMass());
    sink.stream() << doc.dump(2) << '\n';
  } else {
    io::writeProfileCsv(sink.stream(), profile);
  }
  return 0;
}

// ---- dual ------------------------------------------------------------------

template <class Scalar>
int runDual(const Globals& g, const std::string& problem, bool relaxed) {
  const auto inst = loadAs<Scalar>(problem);
  const auto dual = dual_value(inst.cost, inst.mu, inst.nu);
  const std::string format = formatOr(g, "json");
  requireFormat(format, {"json", "text"});
  Json doc = io::dualToJson(dual.pair);
  doc["D"] = io::extendedToJson(dual.value);
  if (relaxed) {
    const auto maxMass = solve_profile(inst.cost, inst.mu, inst.nu).maxMass();
    if (approxLess<Scalar>(maxMass, Scalar(1))) {
      doc["D_rel"] = nullptr;
    } else {
      const auto rel = relaxed_dual_value(inst.cost, inst.mu, inst.nu);
      doc["D_rel"] = io::extendedToJson(rel.value);
      doc["relaxed"] = io::dualToJson(rel.pair);
    }
  }
  if (format == "json") {
    writeJson(g, doc);
    return 0;
  }
  Sink sink(g.output);
  sink.stream() << "D=" << dual.value << " feasible=" << (dual.pair.feasible ? "yes" : "no") << '\n';
  sink.stream() << "phi:";
  for (const auto& p : dual.pair.phi) sink.stream() << ' ' << p;
  sink.stream() << "\npsi:";
  for (const auto& p : dual.pair.psi) sink.stream() << ' ' << p;
  sink.stream() << '\n';
  if (relaxed) {
    const Json& rel = doc["D_rel"];
    sink.stream() << "D_rel=" << (rel.is_null() ? std::string("n/a") : rel.is_string() ? rel.get<std::string>() : rel.dump())
                  << '\n';
  }
  return 0;
}

// ---- sweep -----------------------------------------------------------------

template <class Scalar>
int runSweep(const Globals& g, const std::string& problem) {
  const auto inst = loadAs<Scalar>(problem);
  const auto levels = parseScalars<Scalar>(g.mGrid);
  const auto report = attainment_check(inst.cost, inst.mu, inst.nu, levels);
  const std::string format = formatOr(g, "csv");
  requireFormat(format, {"csv", "json", "text"});
  Sink sink(g.output);
  if (format == "csv") {
    sink.stream() << "M,P_trunc\n";
    for (std::size_t k = 0; k < levels.size(); ++k)
      sink.stream() << formatScalar(levels[k]) << ',' << report.values[k].value << '\n';
    return 0;
  }
  if (format == "json") {
    Json rows = Json::array();
    for (std::size_t k = 0; k < levels.size(); ++k)
      rows.push_back({{"M", io::scalarToJson(levels[k])}, {"P_trunc", io::extendedToJson(report.values[k].value)}});
    Json doc;
    doc["rows"] = std::move(rows);
    doc["P_rel"] = io::extendedToJson(report.relaxed);
    doc["attained"] = report.attained;
    doc["level"] = report.level ? io::scalarToJson(*report.level) : Json(nullptr);
    doc["certifiedLevel"] = report.certifiedLevel ? io::scalarToJson(*report.certifiedLevel) : Json(nullptr);
    sink.stream() << doc.dump(2) << '\n';
    return 0;
  }
  for (std::size_t k = 0; k < levels.size(); ++k)
    sink.stream() << "M=" << formatScalar(levels[k]) << " P_trunc=" << report.values[k].value << '\n';
  sink.stream() << "P_rel=" << report.relaxed << " attained=" << (report.attained ? "yes" : "no");
  if (report.level) sink.stream() << " at M=" << formatScalar(*report.level);
  if (report.certifiedLevel) sink.stream() << " certified_level=" << formatScalar(*report.certifiedLevel);
  sink.stream() << '\n';
  return 0;
}

// ---- covers ----------------------------------------------------------------

std::string maskString(const VectorMask& m) {
  std::string out = "{";
  for (Eigen::Index i = 0; i < m.size(); ++i)
    if (m(i)) out += (out.size() > 1 ? "," : "") + std::to_string(i);
  return out + "}";
}

Json maskJson(const VectorMask& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.size(); ++i)
    if (m(i)) out.push_back(i);
  return out;
}

template <class Scalar>
int runCovers(const Globals& g, const std::string& problem, const std::string& cellsPath) {
  const auto inst = loadAs<Scalar>(problem);
  const CellSet L = io::loadCellSet(cellsPath, inst.mu.size(), inst.nu.size());
  const auto cover = cover_value(L, inst.mu, inst.nu);
  const auto maxMass = max_mass_on(L, inst.mu, inst.nu);
  const auto decomposition = kellerer_decompose(L, inst.mu, inst.nu);
  std::optional<Scalar> gamma;
  if (inst.mu.size() == inst.nu.size() && inst.mu == inst.nu) gamma = capacity_value(L, inst.mu).value;
  std::optional<bool> nullForAll;
  if (approxEq<Scalar>(inst.mu.mass(), inst.nu.mass())) nullForAll = null_for_all_couplings(L, inst.mu, inst.nu);

  const std::string format = formatOr(g, "text");
  requireFormat(format, {"text", "json"});
  Sink sink(g.output);
  if (format == "json") {
    Json doc;
    doc["m"] = io::scalarToJson(cover.value);
    doc["A"] = maskJson(cover.certificate.A);
    doc["B"] = maskJson(cover.certificate.B);
    doc["maxMass"] = io::scalarToJson(maxMass.mass);
    doc["gamma"] = gamma ? io::scalarToJson(*gamma) : Json(nullptr);
    doc["nullCover"] = decomposition.nullCover;
    doc["M"] = maskJson(decomposition.M);
    doc["N"] = maskJson(decomposition.N);
    doc["nullForAllCouplings"] = nullForAll ? Json(*nullForAll) : Json(nullptr);
    sink.stream() << doc.dump(2) << '\n';
    return 0;
  }
  sink.stream() << "m=" << formatScalar(cover.value) << " A=" << maskString(cover.certificate.A)
                << " B=" << maskString(cover.certificate.B) << '\n';
  sink.stream() << "max_mass=" << formatScalar(maxMass.mass) << '\n';
  sink.stream() << "gamma=" << (gamma ? formatScalar(*gamma) : std::string("n/a")) << '\n';
  sink.stream() << "decomposition: null_cover=" << (decomposition.nullCover ? "yes" : "no")
                << " M=" << maskString(decomposition.M) << " N=" << maskString(decomposition.N) << '\n';
  sink.stream() << "null_for_all_couplings="
                << (nullForAll ? std::string(*nullForAll ? "yes" : "no") : std::string("n/a")) << '\n';
  return 0;
}

// ---- study -----------------------------------------------------------------

template <class Scalar>
int runStudy(const Globals& g, const std::string& scenario, const std::string& nGrid) {
  if (scenario != "diagonal") throw Error(ErrorCode::InvalidArgument, "unknown study scenario '" + scenario + "'");
  std::vector<EpsilonSpec<Scalar>> eps;
  for (const auto& token : splitList(g.epsGrid)) eps.push_back(parseEpsilonSpec<Scalar>(token));
  const auto rows = refinement_study<Scalar>(diagonal_family<Scalar>(), parseSizes(nGrid), eps,
                                             parseScalars<Scalar>(g.mGrid));
  const std::string format = formatOr(g, "csv");
  requireFormat(format, {"csv", "json"});
  Sink sink(g.output);
  if (format == "csv") {
    io::writeStudyCsv(sink.stream(), rows);
    return 0;
  }
  Json out = Json::array();
  for (const auto& r : rows)
    out.push_back({{"n", r.n},
                   {"epsilon", io::scalarToJson(r.epsilon)},
                   {"M", io::scalarToJson(r.M)},
                   {"P", io::extendedToJson(r.P)},
                   {"P_eps", io::extendedToJson(r.Peps)},
                   {"P_trunc", io::extendedToJson(r.Ptrunc)},
                   {"D", io::extendedToJson(r.D)}});
  sink.stream() << out.dump(2) << '\n';
  return 0;
}

// ---- oracle ----------------------------------------------------------------

int runOracle(const Globals& g, const std::string& problem, const std::string& mass, const std::string& cellsPath) {
  if (g.floatFlag) throw Error(ErrorCode::InvalidArgument, "the oracle runs in exact mode only");
  const auto inst = io::loadProblem(problem);
  const std::string format = formatOr(g, "text");
  requireFormat(format, {"text", "json"});
  Json doc;
  const Rational m = parseRational(mass);
  const oracle::BrutePrimal brute(inst.cost, inst.mu, inst.nu);
  doc["mass"] = formatScalar(m);
  doc["cost"] = brute.at(m).toString();
  doc["bases"] = brute.basisCount();
  if (!cellsPath.empty()) {
    const CellSet L = io::loadCellSet(cellsPath, inst.mu.size(), inst.nu.size());
    doc["m"] = formatScalar(oracle::brute_cover(L, inst.mu, inst.nu));
    if (inst.mu.size() == inst.nu.size() && inst.mu == inst.nu)
      doc["gamma"] = formatScalar(oracle::brute_capacity(L, inst.mu));
  }
  Sink sink(g.output);
  if (format == "json") {
    sink.stream() << doc.dump(2) << '\n';
    return 0;
  }
  sink.stream() << "cost(" << doc["mass"].get<std::string>() << ")=" << doc["cost"].get<std::string>()
                << " bases=" << brute.basisCount() << '\n';
  if (doc.contains("m")) sink.stream() << "m=" << doc["m"].get<std::string>() << '\n';
  if (doc.contains("gamma")) sink.stream() << "gamma=" << doc["gamma"].get<std::string>() << '\n';
  return 0;
}

template <template <class> class Command, class... Args>
int dispatch(const Globals& g, Args&&... args) {
  if (g.floatFlag) return Command<double>::run(g, std::forward<Args>(args)...);
  return Command<Rational>::run(g, std::forward<Args>(args)...);
}

template <class S>
struct SolveCmd {
  static int run(const Globals& g, const std::string& p, const std::string& w) { return runSolve<S>(g, p, w); }
};
template <class S>
struct ProfileCmd {
  static int run(const Globals& g, const std::string& p, const std::string& at) { return runProfile<S>(g, p, at); }
};
template <class S>
struct DualCmd {
  static int run(const Globals& g, const std::string& p, bool relaxed) { return runDual<S>(g, p, relaxed); }
};
template <class S>
struct SweepCmd {
  static int run(const Globals& g, const std::string& p) { return runSweep<S>(g, p); }
};
template <class S>
struct CoversCmd {
  static int run(const Globals& g, const std::string& p, const std::string& c) { return runCovers<S>(g, p, c); }
};
template <class S>
struct StudyCmd {
  static int run(const Globals& g, const std::string& s, const std::string& n) { return runStudy<S>(g, s, n); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and floating-point transport duality experiments on finite instances"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  auto* exactOpt = app.add_flag("--exact", g.exactFlag, "Exact rational arithmetic (default)");
  app.add_flag("--float", g.floatFlag, "Double precision with tolerance 1e-9")->excludes(exactOpt);
  app.add_option("--seed", g.seed, "Seed for generated instances");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("-o,--output", g.output, "Write output to this file instead of stdout");
  app.add_option("--eps-grid", g.epsGrid, "Comma-separated epsilons; 'k/n' scales with the instance size");
  app.add_option("--m-grid", g.mGrid, "Comma-separated truncation levels");

  GenArgs gen;
  auto* genCmd = app.add_subcommand("gen", "Write a generated problem JSON");
  genCmd->add_option("--scenario", gen.scenario, "diagonal | random | band");
  genCmd->add_option("--n", gen.n, "Size of square scenarios");
  genCmd->add_option("--nx", gen.nx, "Rows of a random instance (defaults to n)");
  genCmd->add_option("--ny", gen.ny, "Columns of a random instance (defaults to n)");
  genCmd->add_option("--inf-density", gen.infDensity, "Probability of an infinite cell");
  genCmd->add_option("--marginals", gen.marginals, "uniform | random | random-zeros");
  genCmd->add_option("--bandwidth", gen.bandwidth, "Band width for the band scenario");

  std::string problem, witness, at, cells, scenario = "diagonal", nGrid = "2:10", mass = "1";
  bool relaxed = false;

  auto* solveCmd = app.add_subcommand("solve", "Primal and dual values with the gap");
  solveCmd->add_option("problem", problem)->required();
  solveCmd->add_option("--witness", witness, "Write the optimal coupling and dual certificate here");

  auto* profileCmd = app.add_subcommand("profile", "Breakpoints of mass -> minimal cost");
  profileCmd->add_option("problem", problem)->required();
  profileCmd->add_option("--at", at, "Evaluate at a single mass instead");

  auto* dualCmd = app.add_subcommand("dual", "Optimal dual certificate");
  dualCmd->add_option("problem", problem)->required();
  dualCmd->add_flag("--relaxed", relaxed, "Also report the relaxed dual value");

  auto* sweepCmd = app.add_subcommand("sweep", "Truncated primal values over --m-grid");
  sweepCmd->add_option("problem", problem)->required();

  auto* coversCmd = app.add_subcommand("covers", "Cover value, capacity, max mass and decomposition of a cell set");
  coversCmd->add_option("problem", problem)->required();
  coversCmd->add_option("cells", cells, "Cell set JSON")->required();

  auto* studyCmd = app.add_subcommand("study", "Refinement table over a scenario family");
  studyCmd->add_option("--scenario", scenario, "diagonal");
  studyCmd->add_option("--n-grid", nGrid, "Sizes, e.g. 2,3,5 or 2:50");

  auto* oracleCmd = app.add_subcommand("oracle", "Brute-force reference values (tiny instances)");
  oracleCmd->add_option("problem", problem)->required();
  oracleCmd->add_option("--mass", mass, "Shipped mass for the primal oracle");
  oracleCmd->add_option("--cells", cells, "Cell set JSON for the cover oracle");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (genCmd->parsed()) return runGen(g, gen);
    if (solveCmd->parsed()) return dispatch<SolveCmd>(g, problem, witness);
    if (profileCmd->parsed()) return dispatch<ProfileCmd>(g, problem, at);
    if (dualCmd->parsed()) return dispatch<DualCmd>(g, problem, relaxed);
    if (sweepCmd->parsed()) return dispatch<SweepCmd>(g, problem);
    if (coversCmd->parsed()) return dispatch<CoversCmd>(g, problem, cells);
    if (studyCmd->parsed()) return dispatch<StudyCmd>(g, scenario, nGrid);
    if (oracleCmd->parsed()) return runOracle(g, problem, mass, cells);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}
