// Command-line front for the Eulerian triangle boundary library: exact
// triangle/solution computations, limit witnesses, decomposition, and the
// Monte Carlo samplers, all with machine-readable reproducible output.

#include "CLI11.hpp"
#include "json.hpp"

#include "eulerian/chain.hpp"
#include "eulerian/io.hpp"
#include "eulerian/reconstruct.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>

using json = nlohmann::ordered_json;
using namespace euler;

namespace {

constexpr const char* kVersion = "1.0.0";

struct OutputOptions {
  std::string format = "json";
  std::string outPath;
};

struct SeedOptions {
  std::optional<std::uint64_t> seed;
  bool strict = false;

  // Strict runs must be replayable; otherwise draw a seed and report it.
  std::uint64_t resolve() const {
    if (seed) return *seed;
    if (strict) throw CLI::ValidationError("--strict requires --seed for randomized commands");
    std::random_device device;
    return (static_cast<std::uint64_t>(device()) << 32) ^ device();
  }
};

void addOutputOptions(CLI::App* cmd, OutputOptions& out) {
  cmd->add_option("--format", out.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd->add_option("--out", out.outPath, "Write the record to a file instead of stdout");
}

json makeMeta(const std::string& command, json parameters) {
  json meta;
  meta["command"] = command;
  meta["version"] = kVersion;
  meta["float_format"] = "ieee754-double/shortest-roundtrip";
  meta["parameters"] = std::move(parameters);
  return meta;
}

void flattenCsv(const json& value, const std::string& path, std::ostream& out) {
  if (value.is_object()) {
    for (const auto& [key, child] : value.items()) {
      flattenCsv(child, path.empty() ? key : path + "." + key, out);
    }
  } else if (value.is_array()) {
    std::size_t index = 0;
    for (const auto& child : value) {
      flattenCsv(child, path + "." + std::to_string(index++), out);
    }
  } else {
    std::string text = value.is_string() ? value.get<std::string>() : value.dump();
    if (text.find_first_of(",\"\n") != std::string::npos) {
      std::string quoted = "\"";
      for (char c : text) {
        if (c == '"') quoted += '"';
        quoted += c;
      }
      quoted += '"';
      text = std::move(quoted);
    }
    out << path << "," << text << "\n";
  }
}

// Relative --out paths land in $EULERIAN_OUT_DIR when that is set.
std::string resolveOutPath(const std::string& path) {
  const char* dir = std::getenv("EULERIAN_OUT_DIR");
  if (dir == nullptr || *dir == '\0' || path.empty() || path.front() == '/') return path;
  std::string resolved(dir);
  if (resolved.back() != '/') resolved += '/';
  return resolved + path;
}

void emitRecord(const json& record, const OutputOptions& options) {
  std::ostringstream body;
  if (options.format == "csv") {
    body << "key,value\n";
    flattenCsv(record, "", body);
  } else {
    body << record.dump(2) << "\n";
  }
  if (options.outPath.empty()) {
    std::cout << body.str();
  } else {
    const std::string path = resolveOutPath(options.outPath);
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
    file << body.str();
  }
}

json rationalJson(const Rational& x) { return formatRational(x); }

json rowsJson(const SolutionArray& v) {
  json rows = json::array();
  for (int n = 1; n <= v.maxRow(); ++n) {
    json row = json::array();
    for (int k = 0; k < n; ++k) row.push_back(formatRational(v.at(n, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

TriangleIndex parseIndexSpec(const std::string& spec) {
  const auto comma = spec.find(',');
  if (comma == std::string::npos) {
    throw CLI::ValidationError("--start expects 'n,k', got '" + spec + "'");
  }
  TriangleIndex index;
  const std::string ns = spec.substr(0, comma), ks = spec.substr(comma + 1);
  auto r1 = std::from_chars(ns.data(), ns.data() + ns.size(), index.n);
  auto r2 = std::from_chars(ks.data(), ks.data() + ks.size(), index.k);
  if (r1.ec != std::errc{} || r1.ptr != ns.data() + ns.size() || r2.ec != std::errc{} ||
      r2.ptr != ks.data() + ks.size() || !index.valid()) {
    throw CLI::ValidationError("'" + spec + "' is not a valid vertex");
  }
  return index;
}

std::vector<std::string> splitList(const std::string& list) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(list);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

// ---------------------------------------------------------------------------
// triangle

int runTriangle(int rows, const std::string& formula, bool verify, int kappa,
                const OutputOptions& output) {
  json payload;
  json rowArray = json::array();
  for (int n = 1; n <= rows; ++n) {
    json row = json::array();
    for (int k = 0; k < n; ++k) {
      row.push_back((formula == "explicit" ? eulerianExplicit(n, k) : eulerian(n, k)).str());
    }
    rowArray.push_back(std::move(row));
  }
  payload["rows"] = std::move(rowArray);

  bool ok = true;
  if (verify) {
    bool formulasAgree = true, rowSums = true, palindrome = true, worpitzky = true;
    for (int n = 1; n <= rows; ++n) {
      Int sum = 0;
      for (int k = 0; k < n; ++k) {
        const Int value = eulerian(n, k);
        if (eulerianExplicit(n, k) != value) formulasAgree = false;
        if (value != eulerian(n, n - 1 - k)) palindrome = false;
        sum += value;
      }
      if (sum != factorial(n)) rowSums = false;
      for (int kp = 0; kp <= kappa; ++kp) {
        if (!verifyWorpitzky(n, kp)) worpitzky = false;
      }
    }
    ok = formulasAgree && rowSums && palindrome && worpitzky;
    payload["verify"] = {{"recursion_vs_explicit", formulasAgree},
                         {"row_sums", rowSums},
                         {"palindrome", palindrome},
                         {"worpitzky", worpitzky},
                         {"ok", ok}};
  }

  json record;
  record["meta"] = makeMeta(
      "triangle",
      {{"rows", rows}, {"formula", formula}, {"verify", verify}, {"kappa", kappa}});
  record["payload"] = std::move(payload);
  emitRecord(record, output);
  return ok ? 0 : 2;
}

// ---------------------------------------------------------------------------
// boundary

int runBoundary(const std::string& thetaSpec, int rows, bool check, int kappaCap,
                const OutputOptions& output) {
  const BoundaryParam theta = BoundaryParam::parse(thetaSpec);
  const SolutionArray w = extremeSolution(theta, rows, kappaCap);

  json payload;
  payload["theta"] = theta.toString();
  payload["theta_value"] = rationalJson(theta.theta());
  payload["theta_prime"] = rationalJson(theta.thetaPrime());
  payload["rows"] = rowsJson(w);

  bool ok = true;
  if (check) {
    const SolutionCheck invariants = checkSolutionInvariants(w);
    bool symmetry = true, unified = true, support = true;
    const SolutionArray mirrored = extremeSolution(theta.reflect(), rows, kappaCap);
    for (int n = 1; n <= rows; ++n) {
      for (int k = 0; k < n; ++k) {
        if (w.at(n, k) != mirrored.at(n, n - 1 - k)) symmetry = false;
        if (w.at(n, k) != unifiedFormula(theta, n, k, kappaCap)) unified = false;
        if (theta.kind() == BoundaryParam::Kind::UpperKappa &&
            (w.at(n, k) == 0) != (k > theta.kappa())) {
          support = false;
        }
        if (theta.kind() == BoundaryParam::Kind::LowerKappa &&
            (w.at(n, k) == 0) != (k < n - 1 - theta.kappa())) {
          support = false;
        }
      }
    }
    const bool w20 = rows < 2 || w.at(2, 0) == theta.theta();
    ok = invariants.ok && symmetry && unified && support && w20;
    payload["checks"] = {{"invariants", invariants.ok},
                         {"invariant_violation", invariants.firstViolation},
                         {"symmetry", symmetry},
                         {"unified_formula", unified},
                         {"support_pattern", support},
                         {"w20_equals_theta", w20},
                         {"ok", ok}};
  }

  json record;
  record["meta"] = makeMeta("boundary", {{"theta", thetaSpec},
                                         {"rows", rows},
                                         {"check", check},
                                         {"kappa_cap", kappaCap}});
  record["payload"] = std::move(payload);
  emitRecord(record, output);
  return ok ? 0 : 2;
}

// ---------------------------------------------------------------------------
// limits / concentration

int runLimits(const std::string& scheduleSpec, int rowLimit, const std::string& tolerance,
              int nCap, const OutputOptions& output) {
  const KappaSchedule schedule = KappaSchedule::parse(scheduleSpec);
  const ConvergenceReport report =
      martinLimitWitness(schedule, rowLimit, parseRational(tolerance), nCap);

  json trajectory = json::array();
  for (const auto& point : report.trajectory) {
    trajectory.push_back({{"N", point.N},
                          {"deviation", rationalJson(point.deviation)},
                          {"decimal", toDouble(point.deviation)}});
  }
  json payload;
  payload["schedule"] = schedule.describe();
  payload["limit"] = schedule.limit().toString();
  payload["row_limit"] = rowLimit;
  payload["tolerance"] = rationalJson(report.tolerance);
  payload["trajectory"] = std::move(trajectory);
  payload["converged"] = report.converged;
  payload["first_n_below"] = report.firstNBelow;
  payload["monotone_nonincreasing"] = report.monotoneNonincreasing;

  json record;
  record["meta"] = makeMeta("limits", {{"schedule", scheduleSpec},
                                       {"row_limit", rowLimit},
                                       {"tolerance", tolerance},
                                       {"n_cap", nCap}});
  record["payload"] = std::move(payload);
  emitRecord(record, output);
  return report.converged ? 0 : 2;
}

int runConcentration(int kappa, int nMax, const std::string& epsilon, const OutputOptions& output) {
  const std::vector<Rational> values = maxDescentProbabilities(kappa, nMax);
  const Rational eps = parseRational(epsilon);

  bool nondecreasing = true;
  json list = json::array();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0 && values[i] < values[i - 1]) nondecreasing = false;
    list.push_back({{"N", kappa + 1 + static_cast<int>(i)},
                    {"value", rationalJson(values[i])},
                    {"decimal", toDouble(values[i])}});
  }
  const bool passes = !values.empty() && values.back() > 1 - eps && nondecreasing;

  json payload;
  payload["kappa"] = kappa;
  payload["values"] = std::move(list);
  payload["nondecreasing"] = nondecreasing;
  payload["final"] = values.empty() ? json() : rationalJson(values.back());
  payload["passes"] = passes;

  json record;
  record["meta"] = makeMeta("concentration", {{"kappa", kappa}, {"n_max", nMax}, {"epsilon", epsilon}});
  record["payload"] = std::move(payload);
  emitRecord(record, output);
  return passes ? 0 : 2;
}

// ---------------------------------------------------------------------------
// decompose

int runDecompose(const std::string& inputPath, const std::string& leftSpec,
                 const std::string& mode, const std::string& supportSpec, int cut,
                 int rowBudget, const std::string& threshold, bool strict, bool emitArray,
                 const OutputOptions& output) {
  ArrayInput input;
  if (!inputPath.empty()) {
    input = readArrayFile(inputPath);
  } else if (!leftSpec.empty()) {
    LeftColumn left;
    for (const auto& token : splitList(leftSpec)) left.push_back(parseRational(token));
    input.left = std::move(left);
  } else {
    throw CLI::ValidationError("decompose needs --input or --left");
  }

  json payload;
  std::optional<SolutionArray> array;
  if (input.left) {
    payload["input"] = "left-column:" + std::to_string(input.left->size());
    array = nabla(*input.left);
    if (emitArray) payload["nabla_rows"] = rowsJson(*array);
  } else {
    payload["input"] = "array:" + std::to_string(input.array->maxRow());
    array = std::move(*input.array);
    if (emitArray) payload["rows"] = rowsJson(*array);
  }

  const MembershipVerdict verdict = inVcheck(*array);
  payload["membership"] = {{"member", verdict.member}, {"reason", verdict.reason}};

  bool ok = verdict.member;
  const std::string effectiveMode = !supportSpec.empty() ? "exact" : mode;
  payload["mode"] = effectiveMode;
  if (verdict.member) {
    if (effectiveMode == "exact") {
      if (supportSpec.empty()) throw CLI::ValidationError("--mode exact requires --support");
      std::vector<BoundaryParam> support;
      for (const auto& token : splitList(supportSpec)) {
        support.push_back(BoundaryParam::parse(token));
      }
      const ExactDecomposition result = decomposeExact(*array, support);
      json weights;
      for (const auto& [param, weight] : result.weights) {
        weights[param.toString()] = rationalJson(weight);
      }
      const char* status = "ok";
      switch (result.status) {
        case ExactDecomposition::Status::Ok: status = "ok"; break;
        case ExactDecomposition::Status::RankDeficient: status = "rank-deficient"; break;
        case ExactDecomposition::Status::NegativeWeight: status = "negative-weight"; break;
        case ExactDecomposition::Status::Mismatch: status = "mismatch"; break;
      }
      payload["exact"] = {{"status", status}, {"weights", weights}, {"detail", result.detail}};
      ok = result.status == ExactDecomposition::Status::Ok;
    } else {
      const int budget = rowBudget > 0 ? rowBudget : array->maxRow();
      DecomposeOptions options;
      if (!threshold.empty()) options.stabilizationThreshold = parseRational(threshold);
      const MixtureWeights result = decompose(*array, cut, budget, options);
      json weights;
      for (const auto& [param, weight] : result.weights) {
        weights[param.toString()] = {{"value", rationalJson(weight)},
                                     {"decimal", toDouble(weight)}};
      }
      json oscillating = json::array();
      for (const auto& param : result.oscillating) oscillating.push_back(param.toString());
      payload["limit"] = {{"weights", weights},
                          {"residual", rationalJson(result.residual)},
                          {"residual_decimal", toDouble(result.residual)},
                          {"determinate", result.determinate},
                          {"oscillating", oscillating}};
      ok = result.determinate;
    }
  }

  json record;
  record["meta"] = makeMeta("decompose", {{"input", inputPath.empty() ? "--left" : inputPath},
                                          {"mode", effectiveMode},
                                          {"support", supportSpec},
                                          {"cut", cut},
                                          {"row_budget", rowBudget},
                                          {"strict", strict}});
  record["payload"] = std::move(payload);
  emitRecord(record, output);
  return (!ok && strict) ? 2 : 0;
}

// ---------------------------------------------------------------------------
// sample

json momentsJson(const MomentReport& report) {
  return {{"n", report.n},
          {"trials", report.trials},
          {"empirical_mean", report.empiricalMean},
          {"empirical_variance", report.empiricalVariance},
          {"exact_mean", rationalJson(report.exactMean)},
          {"exact_variance", rationalJson(report.exactVariance)},
          {"stated_mean", rationalJson(report.statedMean)},
          {"stated_variance", rationalJson(report.statedVariance)},
          {"z_mean_vs_stated", report.zMeanVsStated},
          {"z_variance_vs_stated", report.zVarianceVsStated},
          {"z_variance_vs_exact", report.zVarianceVsExact}};
}

json comparisonJson(const DistributionComparison& cmp) {
  return {{"theta", cmp.theta.toString()},
          {"n", cmp.n},
          {"trials", cmp.trials},
          {"max_abs_deviation", cmp.maxAbsDeviation},
          {"max_abs_z", cmp.maxAbsZ},
          {"chi_square", cmp.chiSquare},
          {"dof", cmp.dof},
          {"max_class_spread_z", cmp.maxClassSpreadZ},
          {"zero_outside_support", cmp.zeroOutsideSupport}};
}

int runSampleBucket(int kappa, int n, const std::string& order, long long trials,
                    const SeedOptions& seedOptions, double sigma, const OutputOptions& output) {
  const std::uint64_t seed = seedOptions.resolve();
  RngStream rng(seed);
  const BoundaryParam theta =
      order == "dec" ? BoundaryParam::lower(kappa) : BoundaryParam::upper(kappa);
  const DistributionComparison cmp = empiricalVsExact(theta, n, trials, rng);
  const bool ok = cmp.maxAbsZ <= sigma && cmp.maxClassSpreadZ <= sigma && cmp.zeroOutsideSupport;

  json record;
  record["meta"] = makeMeta("sample bucket", {{"kappa", kappa},
                                              {"n", n},
                                              {"order", order},
                                              {"trials", trials},
                                              {"sigma", sigma}});
  record["meta"]["seed"] = seed;
  record["meta"]["rng"] = kRngVersion;
  record["payload"] = comparisonJson(cmp);
  record["payload"]["ok"] = ok;
  emitRecord(record, output);
  return ok ? 0 : 2;
}

int runSampleDist(const std::string& thetaSpec, int n, long long trials,
                  const SeedOptions& seedOptions, double sigma, const OutputOptions& output) {
  const std::uint64_t seed = seedOptions.resolve();
  RngStream rng(seed);
  const DistributionComparison cmp =
      empiricalVsExact(BoundaryParam::parse(thetaSpec), n, trials, rng);
  const bool ok = cmp.maxAbsZ <= sigma && cmp.maxClassSpreadZ <= sigma && cmp.zeroOutsideSupport;

  json record;
  record["meta"] = makeMeta(
      "sample dist", {{"theta", thetaSpec}, {"n", n}, {"trials", trials}, {"sigma", sigma}});
  record["meta"]["seed"] = seed;
  record["meta"]["rng"] = kRngVersion;
  record["payload"] = comparisonJson(cmp);
  record["payload"]["ok"] = ok;
  emitRecord(record, output);
  return ok ? 0 : 2;
}

int runSampleExch(int n, long long trials, const SeedOptions& seedOptions, double sigma,
                  const OutputOptions& output) {
  const std::uint64_t seed = seedOptions.resolve();
  RngStream rng(seed);
  std::vector<long long> histogram(n, 0);
  for (long long t = 0; t < trials; ++t) {
    ++histogram[descents(exchangeableSample(n, rng).perm).count];
  }
  const Int total = factorial(n);
  double maxAbsZ = 0;
  json bins = json::array();
  for (int k = 0; k < n; ++k) {
    const Rational p(eulerian(n, k), total);
    const double pd = toDouble(p);
    const double freq = static_cast<double>(histogram[k]) / static_cast<double>(trials);
    const double sd = std::sqrt(pd * (1 - pd) / static_cast<double>(trials));
    const double z = sd > 0 ? (freq - pd) / sd : 0.0;
    maxAbsZ = std::max(maxAbsZ, std::abs(z));
    bins.push_back({{"k", k}, {"count", histogram[k]}, {"exact", rationalJson(p)}, {"z", z}});
  }
  const bool ok = maxAbsZ <= sigma;

  json record;
  record["meta"] = makeMeta("sample exch", {{"n", n}, {"trials", trials}, {"sigma", sigma}});
  record["meta"]["seed"] = seed;
  record["meta"]["rng"] = kRngVersion;
  record["payload"] = {{"descent_histogram", bins}, {"max_abs_z", maxAbsZ}, {"ok", ok}};
  emitRecord(record, output);
  return ok ? 0 : 2;
}

int runSampleMoments(int n, long long trials, const SeedOptions& seedOptions, double sigma,
                     const OutputOptions& output) {
  const std::uint64_t seed = seedOptions.resolve();
  RngStream rng(seed);
  const MomentReport report = descentMoments(n, trials, rng);
  const bool ok =
      std::abs(report.zMeanVsStated) <= sigma && std::abs(report.zVarianceVsExact) <= sigma;

  json record;
  record["meta"] = makeMeta("sample moments", {{"n", n}, {"trials", trials}, {"sigma", sigma}});
  record["meta"]["seed"] = seed;
  record["meta"]["rng"] = kRngVersion;
  record["payload"] = momentsJson(report);
  record["payload"]["ok"] = ok;
  emitRecord(record, output);
  return ok ? 0 : 2;
}

int runSampleLln(int kappa, int nMax, long long trials, const SeedOptions& seedOptions,
                 double minFraction, const OutputOptions& output) {
  const std::uint64_t seed = seedOptions.resolve();
  RngStream rng(seed);
  const LlnReport report = lawOfLargeNumbersWitness(kappa, nMax, trials, rng);
  const bool ok = report.finalFraction >= minFraction;

  json record;
  record["meta"] = makeMeta("sample lln", {{"kappa", kappa},
                                           {"n_max", nMax},
                                           {"trials", trials},
                                           {"min_fraction", minFraction}});
  record["meta"]["seed"] = seed;
  record["meta"]["rng"] = kRngVersion;
  record["payload"] = {{"fraction_at_kappa", report.fractionAtKappa},
                       {"final_fraction", report.finalFraction},
                       {"ok", ok}};
  emitRecord(record, output);
  return ok ? 0 : 2;
}

int runSampleUsum(int n, long long trials, const SeedOptions& seedOptions, double sigma,
                  const OutputOptions& output) {
  const std::uint64_t seed = seedOptions.resolve();
  RngStream rng(seed);
  const UniformSumReport report = uniformSumIdentityWitness(n, trials, rng);
  const bool ok = report.maxAbsZ <= sigma;

  json bins = json::array();
  for (int k = 0; k < n; ++k) {
    bins.push_back({{"k", k},
                    {"count", report.counts[k]},
                    {"exact", rationalJson(report.exactProb[k])},
                    {"z", report.zScores[k]}});
  }
  json record;
  record["meta"] = makeMeta("sample usum", {{"n", n}, {"trials", trials}, {"sigma", sigma}});
  record["meta"]["seed"] = seed;
  record["meta"]["rng"] = kRngVersion;
  record["payload"] = {{"bins", bins}, {"max_abs_z", report.maxAbsZ}, {"ok", ok}};
  emitRecord(record, output);
  return ok ? 0 : 2;
}

// ---------------------------------------------------------------------------
// chain

int runChainRun(const std::string& startSpec, const SeedOptions& seedOptions,
                const OutputOptions& output) {
  const std::uint64_t seed = seedOptions.resolve();
  RngStream rng(seed);
  const auto trajectory = runBackwardChain(parseIndexSpec(startSpec), rng);
  json path = json::array();
  for (const auto& vertex : trajectory) path.push_back({vertex.n, vertex.k});

  json record;
  record["meta"] = makeMeta("chain run", {{"start", startSpec}});
  record["meta"]["seed"] = seed;
  record["meta"]["rng"] = kRngVersion;
  record["payload"] = {{"path", path}};
  emitRecord(record, output);
  return 0;
}

int runChainPropagate(const std::string& startSpec, int downTo, bool check,
                      const OutputOptions& output) {
  const TriangleIndex start = parseIndexSpec(startSpec);
  const auto rows = propagateExact(start, downTo);
  json rowArray = json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    json row = json::array();
    for (const auto& value : rows[i]) row.push_back(formatRational(value));
    rowArray.push_back({{"row", downTo + static_cast<int>(i)}, {"distribution", row}});
  }

  bool ok = true;
  json payload{{"start", {start.n, start.k}}, {"rows", rowArray}};
  if (check) {
    const SolutionArray tilde = tildeTransform(truncatedSolution(start.n, start.k, start.n));
    for (std::size_t i = 0; i < rows.size() && ok; ++i) {
      const int n = downTo + static_cast<int>(i);
      for (int k = 0; k < n; ++k) {
        if (rows[i][k] != tilde.at(n, k)) ok = false;
      }
    }
    payload["matches_truncated_solution"] = ok;
  }

  json record;
  record["meta"] = makeMeta("chain propagate",
                            {{"start", startSpec}, {"down_to", downTo}, {"check", check}});
  record["payload"] = std::move(payload);
  emitRecord(record, output);
  return ok ? 0 : 2;
}

int runChainCouple(int N, int kappaA, int kappaB, long long runs,
                   const SeedOptions& seedOptions, const OutputOptions& output) {
  const std::uint64_t seed = seedOptions.resolve();
  RngStream rng(seed);
  long long violations = 0;
  std::map<int, long long> mergeHistogram;
  for (long long run = 0; run < runs; ++run) {
    const CouplingTrace trace = coupledRun(N, kappaA, kappaB, rng);
    if (!trace.orderingHolds) ++violations;
    if (trace.mergeLevel) ++mergeHistogram[*trace.mergeLevel];
  }
  json histogram;
  for (const auto& [level, count] : mergeHistogram) histogram[std::to_string(level)] = count;
  const bool ok = violations == 0;

  json record;
  record["meta"] = makeMeta(
      "chain couple",
      {{"n", N}, {"kappa_a", kappaA}, {"kappa_b", kappaB}, {"runs", runs}});
  record["meta"]["seed"] = seed;
  record["meta"]["rng"] = kRngVersion;
  record["payload"] = {{"runs", runs},
                       {"ordering_violations", violations},
                       {"merge_level_histogram", histogram},
                       {"ok", ok}};
  emitRecord(record, output);
  return ok ? 0 : 2;
}

int runChainPath(const std::string& permSpec, const OutputOptions& output) {
  Permutation perm;
  for (const auto& token : splitList(permSpec)) perm.push_back(std::stoi(token));
  const LabeledPath path = permToPath(perm);
  json vertices = json::array(), labels = json::array();
  for (const auto& vertex : path.vertices) vertices.push_back({vertex.n, vertex.k});
  for (int label : path.labels) labels.push_back(label);
  const bool roundtrip = pathToPerm(path) == perm;

  json record;
  record["meta"] = makeMeta("chain path", {{"perm", permSpec}});
  record["payload"] = {{"vertices", vertices}, {"labels", labels}, {"roundtrip_ok", roundtrip}};
  emitRecord(record, output);
  return roundtrip ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact boundary theory of the Eulerian number triangle"};
  app.require_subcommand(1);
  int exitCode = 0;

  // triangle
  {
    auto* cmd = app.add_subcommand("triangle", "Eulerian rows with exact identity checks");
    auto rows = std::make_shared<int>(6);
    auto formula = std::make_shared<std::string>("recursion");
    auto verify = std::make_shared<bool>(false);
    auto kappa = std::make_shared<int>(10);
    auto output = std::make_shared<OutputOptions>();
    cmd->add_option("--rows", *rows, "Number of rows")->required()->check(CLI::Range(1, 500));
    cmd->add_option("--formula", *formula, "Which route computes the entries")
        ->check(CLI::IsMember({"recursion", "explicit"}))
        ->capture_default_str();
    cmd->add_flag("--verify", *verify, "Cross-check recursion, explicit formula, sums, Worpitzky");
    cmd->add_option("--kappa", *kappa, "Worpitzky bound used with --verify")
        ->check(CLI::Range(0, 64))
        ->capture_default_str();
    addOutputOptions(cmd, *output);
    cmd->callback(
        [=, &exitCode] { exitCode = runTriangle(*rows, *formula, *verify, *kappa, *output); });
  }

  // boundary
  {
    auto* cmd = app.add_subcommand("boundary", "Extreme solutions W(theta)");
    auto theta = std::make_shared<std::string>();
    auto rows = std::make_shared<int>(6);
    auto check = std::make_shared<bool>(false);
    auto kappaCap = std::make_shared<int>(kDefaultKappaCap);
    auto output = std::make_shared<OutputOptions>();
    cmd->add_option("--theta", *theta, "upper:K, half, or lower:K")->required();
    cmd->add_option("--rows", *rows, "Rows to emit")
        ->check(CLI::Range(1, 200))
        ->capture_default_str();
    cmd->add_flag("--check", *check, "Run the exact invariant checks");
    cmd->add_option("--kappa-cap", *kappaCap, "Reject kappa beyond this bound")
        ->capture_default_str();
    addOutputOptions(cmd, *output);
    cmd->callback(
        [=, &exitCode] { exitCode = runBoundary(*theta, *rows, *check, *kappaCap, *output); });
  }

  // limits
  {
    auto* cmd = app.add_subcommand("limits", "Martin-boundary limit witness");
    auto schedule = std::make_shared<std::string>();
    auto rowLimit = std::make_shared<int>(4);
    auto tolerance = std::make_shared<std::string>("1e-6");
    auto nCap = std::make_shared<int>(60);
    auto output = std::make_shared<OutputOptions>();
    cmd->add_option("--schedule", *schedule, "const:K, mirror:K, or central")->required();
    cmd->add_option("--row-limit", *rowLimit, "Compare rows 1..R")->capture_default_str();
    cmd->add_option("--tolerance", *tolerance, "Exact rational tolerance")->capture_default_str();
    cmd->add_option("--n-cap", *nCap, "Largest truncation level")->capture_default_str();
    addOutputOptions(cmd, *output);
    cmd->callback(
        [=, &exitCode] { exitCode = runLimits(*schedule, *rowLimit, *tolerance, *nCap, *output); });
  }

  // concentration
  {
    auto* cmd = app.add_subcommand("concentration", "Concentration sequence <N,k>/(k+1)^N");
    auto kappa = std::make_shared<int>(0);
    auto nMax = std::make_shared<int>(60);
    auto epsilon = std::make_shared<std::string>("1e-3");
    auto output = std::make_shared<OutputOptions>();
    cmd->add_option("--kappa", *kappa, "Wing index")->required()->check(CLI::Range(0, 64));
    cmd->add_option("--n-max", *nMax, "Last level")->capture_default_str();
    cmd->add_option("--epsilon", *epsilon, "Require final value > 1 - epsilon")
        ->capture_default_str();
    addOutputOptions(cmd, *output);
    cmd->callback([=, &exitCode] { exitCode = runConcentration(*kappa, *nMax, *epsilon, *output); });
  }

  // decompose
  {
    auto* cmd = app.add_subcommand("decompose", "Reconstruction and mixture decomposition");
    auto input = std::make_shared<std::string>();
    auto left = std::make_shared<std::string>();
    auto mode = std::make_shared<std::string>("limit");
    auto support = std::make_shared<std::string>();
    auto cut = std::make_shared<int>(3);
    auto rowBudget = std::make_shared<int>(0);
    auto threshold = std::make_shared<std::string>();
    auto strict = std::make_shared<bool>(false);
    auto emitArray = std::make_shared<bool>(false);
    auto output = std::make_shared<OutputOptions>();
    cmd->add_option("--input", *input, "Array file (rows=N or left=N header)");
    cmd->add_option("--left", *left, "Inline left column, e.g. 1,1/2,1/6");
    cmd->add_option("--mode", *mode, "exact (needs --support) or limit")
        ->check(CLI::IsMember({"exact", "limit"}))
        ->capture_default_str();
    cmd->add_option("--support", *support, "Comma-separated parameters for exact mode");
    cmd->add_option("--cut", *cut, "Wing cutoff for limit mode")->capture_default_str();
    cmd->add_option("--row-budget", *rowBudget, "Rows used by limit mode (default: all)");
    cmd->add_option("--threshold", *threshold, "Stabilization threshold (rational)");
    cmd->add_flag("--strict", *strict, "Nonzero exit on any non-success verdict");
    cmd->add_flag("--emit-array", *emitArray, "Include the (reconstructed) array in the payload");
    addOutputOptions(cmd, *output);
    cmd->callback([=, &exitCode] {
      exitCode = runDecompose(*input, *left, *mode, *support, *cut, *rowBudget, *threshold,
                              *strict, *emitArray, *output);
    });
  }

  // sample
  {
    auto* sample = app.add_subcommand("sample", "Monte Carlo samplers and witnesses");
    sample->require_subcommand(1);

    auto addSeed = [](CLI::App* cmd, SeedOptions& seed) {
      cmd->add_option("--seed", seed.seed, "64-bit RNG seed (reported in metadata)");
      cmd->add_flag("--strict", seed.strict, "Require --seed; for reproducible CI runs");
    };

    {
      auto* cmd = sample->add_subcommand("bucket", "Bucket-sorting law vs the closed form");
      auto kappa = std::make_shared<int>(1);
      auto n = std::make_shared<int>(3);
      auto order = std::make_shared<std::string>("inc");
      auto trials = std::make_shared<long long>(100000);
      auto sigma = std::make_shared<double>(5.0);
      auto seed = std::make_shared<SeedOptions>();
      auto output = std::make_shared<OutputOptions>();
      cmd->add_option("--kappa", *kappa, "Buckets minus one")->required()->check(CLI::Range(0, 64));
      cmd->add_option("--n", *n, "Permutation size (<= 7)")->required()->check(CLI::Range(1, 7));
      cmd->add_option("--order", *order, "inc or dec within buckets")
          ->check(CLI::IsMember({"inc", "dec"}))
          ->capture_default_str();
      cmd->add_option("--trials", *trials, "Sample count")->capture_default_str();
      cmd->add_option("--sigma", *sigma, "z-score bound for the ok verdict")
          ->capture_default_str();
      addSeed(cmd, *seed);
      addOutputOptions(cmd, *output);
      cmd->callback([=, &exitCode] {
        exitCode = runSampleBucket(*kappa, *n, *order, *trials, *seed, *sigma, *output);
      });
    }
    {
      auto* cmd = sample->add_subcommand("dist", "Empirical law vs W(theta) over Perm(n)");
      auto theta = std::make_shared<std::string>();
      auto n = std::make_shared<int>(3);
      auto trials = std::make_shared<long long>(100000);
      auto sigma = std::make_shared<double>(5.0);
      auto seed = std::make_shared<SeedOptions>();
      auto output = std::make_shared<OutputOptions>();
      cmd->add_option("--theta", *theta, "upper:K, half, or lower:K")->required();
      cmd->add_option("--n", *n, "Permutation size (<= 7)")->required()->check(CLI::Range(1, 7));
      cmd->add_option("--trials", *trials, "Sample count")->capture_default_str();
      cmd->add_option("--sigma", *sigma, "z-score bound")->capture_default_str();
      addSeed(cmd, *seed);
      addOutputOptions(cmd, *output);
      cmd->callback([=, &exitCode] {
        exitCode = runSampleDist(*theta, *n, *trials, *seed, *sigma, *output);
      });
    }
    {
      auto* cmd = sample->add_subcommand("exch", "Exchangeable arrangement descent law");
      auto n = std::make_shared<int>(5);
      auto trials = std::make_shared<long long>(100000);
      auto sigma = std::make_shared<double>(5.0);
      auto seed = std::make_shared<SeedOptions>();
      auto output = std::make_shared<OutputOptions>();
      cmd->add_option("--n", *n, "Permutation size")->required()->check(CLI::Range(1, 64));
      cmd->add_option("--trials", *trials, "Sample count")->capture_default_str();
      cmd->add_option("--sigma", *sigma, "z-score bound")->capture_default_str();
      addSeed(cmd, *seed);
      addOutputOptions(cmd, *output);
      cmd->callback(
          [=, &exitCode] { exitCode = runSampleExch(*n, *trials, *seed, *sigma, *output); });
    }
    {
      auto* cmd = sample->add_subcommand("moments", "Monte Carlo descent moments");
      auto n = std::make_shared<int>(10);
      auto trials = std::make_shared<long long>(1000000);
      auto sigma = std::make_shared<double>(5.0);
      auto seed = std::make_shared<SeedOptions>();
      auto output = std::make_shared<OutputOptions>();
      cmd->add_option("--n", *n, "Permutation size")->required()->check(CLI::Range(2, 64));
      cmd->add_option("--trials", *trials, "Sample count (>= 1000)")->capture_default_str();
      cmd->add_option("--sigma", *sigma, "z-score bound")->capture_default_str();
      addSeed(cmd, *seed);
      addOutputOptions(cmd, *output);
      cmd->callback(
          [=, &exitCode] { exitCode = runSampleMoments(*n, *trials, *seed, *sigma, *output); });
    }
    {
      auto* cmd = sample->add_subcommand("lln", "Law of large numbers for D under bucket sorting");
      auto kappa = std::make_shared<int>(1);
      auto nMax = std::make_shared<int>(20);
      auto trials = std::make_shared<long long>(10000);
      auto minFraction = std::make_shared<double>(0.0);
      auto seed = std::make_shared<SeedOptions>();
      auto output = std::make_shared<OutputOptions>();
      cmd->add_option("--kappa", *kappa, "Buckets minus one")->required()->check(CLI::Range(0, 64));
      cmd->add_option("--n-max", *nMax, "Trajectory length")->capture_default_str();
      cmd->add_option("--trials", *trials, "Sample count")->capture_default_str();
      cmd->add_option("--min-fraction", *minFraction, "Require final fraction >= bound")
          ->capture_default_str();
      addSeed(cmd, *seed);
      addOutputOptions(cmd, *output);
      cmd->callback([=, &exitCode] {
        exitCode = runSampleLln(*kappa, *nMax, *trials, *seed, *minFraction, *output);
      });
    }
    {
      auto* cmd = sample->add_subcommand("usum", "Uniform-sum identity witness");
      auto n = std::make_shared<int>(3);
      auto trials = std::make_shared<long long>(1000000);
      auto sigma = std::make_shared<double>(5.0);
      auto seed = std::make_shared<SeedOptions>();
      auto output = std::make_shared<OutputOptions>();
      cmd->add_option("--n", *n, "Number of uniforms per sum")
          ->required()
          ->check(CLI::Range(1, 64));
      cmd->add_option("--trials", *trials, "Sample count")->capture_default_str();
      cmd->add_option("--sigma", *sigma, "z-score bound")->capture_default_str();
      addSeed(cmd, *seed);
      addOutputOptions(cmd, *output);
      cmd->callback(
          [=, &exitCode] { exitCode = runSampleUsum(*n, *trials, *seed, *sigma, *output); });
    }
  }

  // chain
  {
    auto* chain = app.add_subcommand("chain", "Backward chain on the triangle");
    chain->require_subcommand(1);

    {
      auto* cmd = chain->add_subcommand("run", "Simulate one trajectory down to the root");
      auto start = std::make_shared<std::string>();
      auto seed = std::make_shared<SeedOptions>();
      auto output = std::make_shared<OutputOptions>();
      cmd->add_option("--start", *start, "Start vertex n,k")->required();
      cmd->add_option("--seed", seed->seed, "64-bit RNG seed");
      cmd->add_flag("--strict", seed->strict, "Require --seed");
      addOutputOptions(cmd, *output);
      cmd->callback([=, &exitCode] { exitCode = runChainRun(*start, *seed, *output); });
    }
    {
      auto* cmd = chain->add_subcommand("propagate", "Exact marginal distributions per row");
      auto start = std::make_shared<std::string>();
      auto downTo = std::make_shared<int>(1);
      auto check = std::make_shared<bool>(false);
      auto output = std::make_shared<OutputOptions>();
      cmd->add_option("--start", *start, "Start vertex n,k")->required();
      cmd->add_option("--down-to", *downTo, "Lowest row to report")->capture_default_str();
      cmd->add_flag("--check", *check, "Compare against the truncated solution");
      addOutputOptions(cmd, *output);
      cmd->callback(
          [=, &exitCode] { exitCode = runChainPropagate(*start, *downTo, *check, *output); });
    }
    {
      auto* cmd = chain->add_subcommand("couple", "Monotone coupling of two chains");
      auto N = std::make_shared<int>(10);
      auto kappaA = std::make_shared<int>(2);
      auto kappaB = std::make_shared<int>(7);
      auto runs = std::make_shared<long long>(10000);
      auto seed = std::make_shared<SeedOptions>();
      auto output = std::make_shared<OutputOptions>();
      cmd->add_option("--n", *N, "Start level")->required();
      cmd->add_option("--kappa-a", *kappaA, "Smaller start kappa")->required();
      cmd->add_option("--kappa-b", *kappaB, "Larger start kappa")->required();
      cmd->add_option("--runs", *runs, "Number of coupled runs")->capture_default_str();
      cmd->add_option("--seed", seed->seed, "64-bit RNG seed");
      cmd->add_flag("--strict", seed->strict, "Require --seed");
      addOutputOptions(cmd, *output);
      cmd->callback([=, &exitCode] {
        exitCode = runChainCouple(*N, *kappaA, *kappaB, *runs, *seed, *output);
      });
    }
    {
      auto* cmd = chain->add_subcommand("path", "Canonical labeled path of a permutation");
      auto perm = std::make_shared<std::string>();
      auto output = std::make_shared<OutputOptions>();
      cmd->add_option("--perm", *perm, "One-row notation, e.g. 3,1,2")->required();
      addOutputOptions(cmd, *output);
      cmd->callback([=, &exitCode] { exitCode = runChainPath(*perm, *output); });
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exitCode;
}
