#include "cellsp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "cellsp/basis_pursuit.hpp"
#include "cellsp/cell_complex.hpp"
#include "cellsp/cycle_enum.hpp"
#include "cellsp/errors.hpp"
#include "cellsp/fir_filters.hpp"
#include "cellsp/generators.hpp"
#include "cellsp/incidence.hpp"
#include "cellsp/inference.hpp"
#include "cellsp/laplacians.hpp"
#include "cellsp/matrix_io.hpp"
#include "cellsp/sampling.hpp"
#include "cellsp/spectral_basis.hpp"
#include "cellsp/svg.hpp"

namespace cellsp {

namespace {

std::string trimmed(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

long parseLong(const std::string& text, const std::string& key) {
  try {
    std::size_t pos = 0;
    const long value = std::stol(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("");
    return value;
  } catch (const std::exception&) {
    throw ArgumentError("config key '" + key + "': '" + text + "' is not an integer");
  }
}

std::uint64_t parseUint(const std::string& text, const std::string& key) {
  try {
    std::size_t pos = 0;
    const std::uint64_t value = std::stoull(text, &pos);
    if (pos != text.size() || text.find('-') != std::string::npos)
      throw std::invalid_argument("");
    return value;
  } catch (const std::exception&) {
    throw ArgumentError("config key '" + key + "': '" + text +
                        "' is not a nonnegative integer");
  }
}

double parseReal(const std::string& text, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double value = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("");
    return value;
  } catch (const std::exception&) {
    throw ArgumentError("config key '" + key + "': '" + text + "' is not a number");
  }
}

// Reads config values with defaults while recording everything consulted, so
// config.resolved.json reproduces the run.
struct Resolver {
  const KeyValueConfig& config;
  std::map<std::string, std::string> resolved;

  explicit Resolver(const KeyValueConfig& c) : config(c) {}

  std::string raw(const std::string& key, const std::string& fallback) {
    const auto it = config.values.find(key);
    const std::string value = it == config.values.end() ? fallback : it->second;
    resolved[key] = value;
    return value;
  }

  std::string getString(const std::string& key, const std::string& fallback) {
    return raw(key, fallback);
  }

  long getInt(const std::string& key, long fallback) {
    return parseLong(raw(key, std::to_string(fallback)), key);
  }

  std::uint64_t getUint(const std::string& key, std::uint64_t fallback) {
    return parseUint(raw(key, std::to_string(fallback)), key);
  }

  double getReal(const std::string& key, double fallback) {
    return parseReal(raw(key, formatDouble(fallback)), key);
  }

  std::vector<double> getRealList(const std::string& key, const std::string& fallback) {
    const std::string text = raw(key, fallback);
    std::vector<double> out;
    if (trimmed(text).empty()) return out;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) out.push_back(parseReal(trimmed(item), key));
    return out;
  }

  std::vector<long> getIntList(const std::string& key, const std::string& fallback) {
    const std::string text = raw(key, fallback);
    std::vector<long> out;
    if (trimmed(text).empty()) return out;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) out.push_back(parseLong(trimmed(item), key));
    return out;
  }
};

void runTrials(long trials, long threads, const std::function<void(long)>& work) {
  if (threads <= 0) threads = static_cast<long>(std::thread::hardware_concurrency());
  threads = std::max(1L, std::min(threads, trials));
  if (threads == 1) {
    for (long t = 0; t < trials; ++t) work(t);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr failure;
  std::mutex failureLock;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (long w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const long t = next.fetch_add(1);
        if (t >= trials) return;
        try {
          work(t);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failureLock);
          if (!failure) failure = std::current_exception();
          next.store(trials);
          return;
        }
      }
    });
  }
  for (std::thread& worker : pool) worker.join();
  if (failure) std::rethrow_exception(failure);
}

struct ComplexParams {
  std::string file;
  CellComplex fixed;
  std::string kind;
  long vertices = 30;
  double deleteFraction = 0.15;
  long targetEdges = -1;
  double diagonalFraction = 1.0;
  double edgeProb = 0.3;
  long plant = 12;
  long maxSides = 6;

  CellComplex make(std::uint64_t trialSeed) const {
    if (!file.empty()) return fixed;
    GraphSpec spec;
    if (kind == "mesh") {
      MeshSpec mesh;
      mesh.vertexCount = static_cast<int>(vertices);
      mesh.deleteFraction = deleteFraction;
      mesh.targetEdgeCount = static_cast<int>(targetEdges);
      mesh.diagonalFraction = diagonalFraction;
      spec = mesh;
    } else if (kind == "erdos_renyi") {
      ErdosRenyiSpec er;
      er.vertexCount = static_cast<int>(vertices);
      er.edgeProbability = edgeProb;
      spec = er;
    } else if (kind == "ring") {
      spec = RingSpec{static_cast<int>(vertices)};
    } else if (kind == "complete") {
      spec = CompleteSpec{static_cast<int>(vertices)};
    } else {
      throw ArgumentError("unknown complex.kind '" + kind + "'");
    }
    const CellComplex bones = generateSkeleton(spec, deriveSeed(trialSeed, 1));
    return plantPolygons(bones, static_cast<int>(plant), static_cast<int>(maxSides),
                         deriveSeed(trialSeed, 2));
  }
};

ComplexParams resolveComplexParams(Resolver& r) {
  ComplexParams params;
  params.file = r.getString("complex.file", "");
  params.maxSides = r.getInt("complex.max_sides", 6);
  if (!params.file.empty()) {
    params.fixed = readComplexFile(params.file);
    return params;
  }
  params.kind = r.getString("complex.kind", "mesh");
  params.vertices = r.getInt("complex.vertices", 30);
  params.plant = r.getInt("complex.plant", 12);
  if (params.kind == "mesh") {
    params.deleteFraction = r.getReal("complex.delete_fraction", 0.15);
    params.targetEdges = r.getInt("complex.target_edges", -1);
    params.diagonalFraction = r.getReal("complex.diagonal_fraction", 1.0);
  } else if (params.kind == "erdos_renyi") {
    params.edgeProb = r.getReal("complex.edge_prob", 0.3);
  }
  return params;
}

struct SignalParams {
  long count = 100;
  long bandIrr = 5;
  long bandSol = 5;
  long bandHarm = 0;
  long sparsity = 0;
  double noiseVar = 0.0;

  // -1 bandwidths mean the full dimension of that component.
  SignalSpec toSpec(const SpectralBasisd& basis) const {
    SignalSpec spec;
    const auto resolve = [&](long want, ComponentLabel label) {
      return want < 0 ? basis.count(label) : static_cast<Index>(want);
    };
    spec.bandwidthIrr = resolve(bandIrr, ComponentLabel::Irrotational);
    spec.bandwidthSol = resolve(bandSol, ComponentLabel::Solenoidal);
    spec.bandwidthHarmonic = resolve(bandHarm, ComponentLabel::Harmonic);
    spec.sparsity = static_cast<Index>(sparsity);
    spec.noiseVariance = noiseVar;
    return spec;
  }
};

SignalParams resolveSignalParams(Resolver& r, long defaultIrr, long defaultSol,
                                 long defaultHarm) {
  SignalParams params;
  params.count = r.getInt("signal.count", 100);
  params.bandIrr = r.getInt("signal.bandwidth_irr", defaultIrr);
  params.bandSol = r.getInt("signal.bandwidth_sol", defaultSol);
  params.bandHarm = r.getInt("signal.bandwidth_harm", defaultHarm);
  params.sparsity = r.getInt("signal.sparsity", 0);
  params.noiseVar = r.getReal("signal.noise_var", 0.0);
  return params;
}

SpectralBasisd basisOf(const CellComplex& complex) {
  return partitionBasis(buildLaplacians<double>(buildB1(complex), buildB2(complex)));
}

VectorX<double> flattened(const MatrixX<double>& m) {
  return Eigen::Map<const VectorX<double>>(m.data(), m.size());
}

std::string csvJoin(const std::vector<std::string>& cells) {
  std::string row;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) row += ",";
    row += cells[i];
  }
  row += "\n";
  return row;
}

struct ExperimentOutput {
  std::string csv;
  std::optional<PolylineChart> chart;
  std::vector<std::pair<std::string, std::string>> extraFiles;
};

// ---- gen ----

ExperimentOutput runGen(Resolver& r, std::uint64_t seed) {
  const ComplexParams params = resolveComplexParams(r);
  const CellComplex complex = params.make(deriveSeed(seed, 0));
  const CandidateCellSet candidates =
      enumerateCandidates(skeleton(complex), static_cast<int>(params.maxSides));
  const SpectralBasisd basis = basisOf(complex);

  ExperimentOutput out;
  out.csv = "vertices,edges,polygons,candidates,harmonic_dim\n";
  out.csv += csvJoin({std::to_string(complex.vertexCount), std::to_string(complex.edges.size()),
                      std::to_string(complex.polygons.size()),
                      std::to_string(candidates.cycles.size()),
                      std::to_string(basis.count(ComponentLabel::Harmonic))});
  std::ostringstream cell;
  writeComplex(complex, cell);
  out.extraFiles.emplace_back("complex.cell", cell.str());
  return out;
}

// ---- infer ----

ExperimentOutput runInfer(Resolver& r, std::uint64_t seed, long trials, long threads) {
  const ComplexParams complexParams = resolveComplexParams(r);
  const SignalParams signalParams = resolveSignalParams(r, 5, 0, -1);
  const long qStarConfig = r.getInt("infer.q_star", -1);
  const bool crossValidate = r.getInt("infer.cross_validate", 0) != 0;
  const double holdoutFraction = r.getReal("infer.holdout_fraction", 0.25);
  const double energyThreshold = r.getReal("infer.energy_threshold", 0.02);
  const long qMax = r.getInt("infer.q_max", -1);

  struct TrialOut {
    std::string row;
    std::string inferredCell;
    std::vector<double> sortedScores;
  };
  std::vector<TrialOut> outs(static_cast<std::size_t>(trials));

  runTrials(trials, threads, [&](long t) {
    const std::uint64_t trialSeed = deriveSeed(seed, static_cast<std::uint64_t>(t));
    const CellComplex complex = complexParams.make(trialSeed);
    const CellComplex bones = skeleton(complex);
    const IncidenceMatrix b1 = buildB1(complex);
    const CandidateCellSet candidates =
        enumerateCandidates(bones, static_cast<int>(complexParams.maxSides));
    const Index numCandidates = candidates.columns.cols();
    const SpectralBasisd basis = basisOf(complex);
    const EdgeSignalBatch<double> batch = generateSignals(
        basis, signalParams.toSpec(basis), signalParams.count, deriveSeed(trialSeed, 3));

    Index qStar;
    if (crossValidate) {
      const Index top = qMax < 0 ? numCandidates : std::min<Index>(qMax, numCandidates);
      std::vector<Index> grid(static_cast<std::size_t>(top) + 1);
      std::iota(grid.begin(), grid.end(), Index(0));
      qStar = selectQStar(batch, b1, candidates, holdoutFraction, grid);
    } else if (qStarConfig >= 0) {
      qStar = static_cast<Index>(qStarConfig);
    } else {
      qStar = static_cast<Index>(complex.polygons.size());
    }
    const InferenceResultd result = inferB2(batch, b1, candidates, qStar, energyThreshold);

    std::set<Polygon> planted(complex.polygons.begin(), complex.polygons.end());
    long truePositives = 0;
    std::vector<Polygon> inferred;
    for (Index idx : result.selected) {
      inferred.push_back(candidates.cycles[static_cast<std::size_t>(idx)]);
      if (planted.count(inferred.back())) ++truePositives;
    }
    const double precision =
        result.selected.empty() ? 1.0 : double(truePositives) / double(result.selected.size());
    const double recall =
        planted.empty() ? 1.0 : double(truePositives) / double(planted.size());

    TrialOut& out = outs[static_cast<std::size_t>(t)];
    out.row = csvJoin({std::to_string(t), std::to_string(trialSeed),
                       std::to_string(complex.vertexCount), std::to_string(complex.edges.size()),
                       std::to_string(complex.polygons.size()), std::to_string(numCandidates),
                       std::to_string(qStar), std::to_string(truePositives),
                       formatDouble(precision), formatDouble(recall),
                       formatDouble(result.energyRatio), result.usedB2Zero ? "1" : "0"});
    if (t == 0) {
      const CellComplex guess = makeComplex(bones.vertexCount, bones.edges, inferred);
      std::ostringstream cell;
      writeComplex(guess, cell);
      out.inferredCell = cell.str();
      out.sortedScores.assign(result.scores.data(), result.scores.data() + result.scores.size());
      std::sort(out.sortedScores.begin(), out.sortedScores.end());
    }
  });

  ExperimentOutput out;
  out.csv = "trial,seed,vertices,edges,planted,candidates,q_star,true_positives,precision,"
            "recall,energy_ratio,b2_zero\n";
  for (const TrialOut& t : outs) out.csv += t.row;
  out.extraFiles.emplace_back("inferred.cell", outs.front().inferredCell);

  PolylineChart chart;
  chart.title = "circulation energy by rank (trial 0)";
  chart.xLabel = "candidate rank";
  chart.yLabel = "log10(energy)";
  ChartSeries series;
  series.name = "sorted scores";
  for (std::size_t i = 0; i < outs.front().sortedScores.size(); ++i) {
    series.x.push_back(double(i + 1));
    series.y.push_back(std::log10(outs.front().sortedScores[i] + 1e-18));
  }
  chart.series.push_back(std::move(series));
  out.chart = std::move(chart);
  return out;
}

// ---- sparsify ----

ExperimentOutput runSparsify(Resolver& r, std::uint64_t seed, long trials, long threads) {
  const ComplexParams complexParams = resolveComplexParams(r);
  const SignalParams signalParams = resolveSignalParams(r, 5, 5, 0);
  std::vector<double> epsilons = r.getRealList("sparsify.epsilons", "");
  if (epsilons.empty()) {
    // Scale from the expected column energy of the synthetic model.
    const double expectedEnergy =
        double(std::max(0L, signalParams.bandIrr) + std::max(0L, signalParams.bandSol) +
               std::max(0L, signalParams.bandHarm)) +
        (signalParams.sparsity > 0 ? double(signalParams.sparsity) : 0.0);
    const double top = 0.8 * std::sqrt(std::max(1.0, expectedEnergy));
    for (int k = 0; k < 10; ++k) epsilons.push_back(top * double(k) / 9.0);
  }
  std::sort(epsilons.begin(), epsilons.end());

  const char* basisNames[3] = {"cell", "simplicial", "graph"};
  struct TrialOut {
    std::vector<SparsityCurvePoint<double>> curves[3];
  };
  std::vector<TrialOut> outs(static_cast<std::size_t>(trials));

  runTrials(trials, threads, [&](long t) {
    const std::uint64_t trialSeed = deriveSeed(seed, static_cast<std::uint64_t>(t));
    const CellComplex complex = complexParams.make(trialSeed);
    const SpectralBasisd cellBasis = basisOf(complex);
    const SpectralBasisd simplicialBasis = basisOf(restrictToTriangles(complex));
    const SpectralBasisd graphBasis = graphOnlyBasis<double>(buildB1(complex));
    const EdgeSignalBatch<double> batch = generateSignals(
        cellBasis, signalParams.toSpec(cellBasis), signalParams.count, deriveSeed(trialSeed, 3));
    TrialOut& out = outs[static_cast<std::size_t>(t)];
    out.curves[0] = sparsityMseCurve<double>(batch, cellBasis.eigenvectors, epsilons);
    out.curves[1] = sparsityMseCurve<double>(batch, simplicialBasis.eigenvectors, epsilons);
    out.curves[2] = sparsityMseCurve<double>(batch, graphBasis.eigenvectors, epsilons);
  });

  ExperimentOutput out;
  out.csv = "basis,epsilon,mean_sparsity,mean_mse\n";
  PolylineChart chart;
  chart.title = "sparsity against reconstruction error";
  chart.xLabel = "mean support size";
  chart.yLabel = "log10(mse)";
  for (int b = 0; b < 3; ++b) {
    ChartSeries series;
    series.name = basisNames[b];
    for (std::size_t k = 0; k < epsilons.size(); ++k) {
      double sparsity = 0, mse = 0;
      for (const TrialOut& trial : outs) {
        sparsity += trial.curves[b][k].meanSparsity;
        mse += trial.curves[b][k].mse;
      }
      sparsity /= double(trials);
      mse /= double(trials);
      out.csv += csvJoin({basisNames[b], formatDouble(epsilons[k]), formatDouble(sparsity),
                          formatDouble(mse)});
      series.x.push_back(sparsity);
      series.y.push_back(std::log10(mse + 1e-18));
    }
    chart.series.push_back(std::move(series));
  }
  out.chart = std::move(chart);
  return out;
}

// ---- sample ----

ExperimentOutput runSample(Resolver& r, std::uint64_t seed, long trials, long threads) {
  const ComplexParams complexParams = resolveComplexParams(r);
  const SignalParams signalParams = resolveSignalParams(r, 5, 5, 0);
  const std::vector<long> sizesConfig = r.getIntList("sample.sizes", "");

  struct TrialOut {
    std::vector<std::string> rows;
    std::vector<std::pair<long, double>> points;
  };
  std::vector<TrialOut> outs(static_cast<std::size_t>(trials));

  runTrials(trials, threads, [&](long t) {
    const std::uint64_t trialSeed = deriveSeed(seed, static_cast<std::uint64_t>(t));
    const CellComplex complex = complexParams.make(trialSeed);
    const SpectralBasisd basis = basisOf(complex);
    const SignalSpec spec = signalParams.toSpec(basis);
    const Index bandwidth = spec.bandwidthIrr + spec.bandwidthSol + spec.bandwidthHarmonic;
    if (bandwidth < 1) throw ArgumentError("sample experiment needs a positive bandwidth");
    const Index e = basis.eigenvectors.rows();

    MatrixX<double> bandBasis(e, bandwidth);
    Index col = 0;
    for (Index k = 0; k < spec.bandwidthIrr; ++k)
      bandBasis.col(col++) = basis.columns(ComponentLabel::Irrotational).col(k);
    for (Index k = 0; k < spec.bandwidthSol; ++k)
      bandBasis.col(col++) = basis.columns(ComponentLabel::Solenoidal).col(k);
    for (Index k = 0; k < spec.bandwidthHarmonic; ++k)
      bandBasis.col(col++) = basis.columns(ComponentLabel::Harmonic).col(k);

    SignalSpec cleanSpec = spec;
    cleanSpec.noiseVariance = 0.0;
    const EdgeSignalBatch<double> clean =
        generateSignals(basis, cleanSpec, signalParams.count, deriveSeed(trialSeed, 3));
    EdgeSignalBatch<double> noisy = clean;
    if (signalParams.noiseVar > 0.0) {
      std::mt19937_64 rng(deriveSeed(trialSeed, 4));
      std::normal_distribution<double> gauss(0.0, std::sqrt(signalParams.noiseVar));
      for (Index j = 0; j < noisy.cols(); ++j)
        for (Index i = 0; i < noisy.rows(); ++i) noisy(i, j) += gauss(rng);
    }

    std::vector<long> sizes = sizesConfig;
    if (sizes.empty())
      for (long extra : {0L, 2L, 4L, 6L, 8L, 10L}) {
        const long m = static_cast<long>(bandwidth) + extra;
        if (m <= static_cast<long>(e)) sizes.push_back(m);
      }
    const long largest = *std::max_element(sizes.begin(), sizes.end());
    const SampleSet full = maxdetSelect(bandBasis, static_cast<Index>(largest));

    TrialOut& out = outs[static_cast<std::size_t>(t)];
    for (long m : sizes) {
      SampleSet samples;
      samples.indices.assign(full.indices.begin(), full.indices.begin() + m);
      samples.bandwidth = bandwidth;
      double mse = 0;
      for (Index j = 0; j < noisy.cols(); ++j) {
        VectorX<double> values(m);
        for (long k = 0; k < m; ++k)
          values[k] = noisy(samples.indices[static_cast<std::size_t>(k)], j);
        const VectorX<double> rec = reconstructFromSamples(samples, values, bandBasis);
        mse += (rec - clean.col(j)).squaredNorm() / double(e);
      }
      mse /= double(noisy.cols());
      out.rows.push_back(csvJoin({std::to_string(t), std::to_string(trialSeed),
                                  std::to_string(m), formatDouble(mse)}));
      out.points.emplace_back(m, mse);
    }
  });

  ExperimentOutput out;
  out.csv = "trial,seed,m,mse\n";
  std::map<long, std::vector<double>> byM;
  for (const TrialOut& t : outs) {
    for (const std::string& row : t.rows) out.csv += row;
    for (const auto& [m, mse] : t.points) byM[m].push_back(mse);
  }
  PolylineChart chart;
  chart.title = "reconstruction error against sample count";
  chart.xLabel = "samples";
  chart.yLabel = "log10(median mse)";
  ChartSeries series;
  series.name = "median mse";
  for (auto& [m, list] : byM) {
    std::sort(list.begin(), list.end());
    const double median = list.size() % 2 ? list[list.size() / 2]
                                          : 0.5 * (list[list.size() / 2 - 1] +
                                                   list[list.size() / 2]);
    series.x.push_back(double(m));
    series.y.push_back(std::log10(median + 1e-18));
  }
  chart.series.push_back(std::move(series));
  out.chart = std::move(chart);
  return out;
}

// ---- filter ----

ExperimentOutput runFilter(Resolver& r, std::uint64_t seed, long trials, long threads) {
  const ComplexParams complexParams = resolveComplexParams(r);
  const long count = r.getInt("signal.count", 100);
  const long bandIrrConfig = r.getInt("signal.bandwidth_irr", 5);
  const double noiseVar = r.getReal("signal.noise_var", 0.0);
  const std::vector<double> ratios = r.getRealList("filter.ratios", "0.25,0.5,1,2");
  const long orderLower = r.getInt("filter.order_lower", 5);
  const long orderUpper = r.getInt("filter.order_upper", 5);
  const long orderJointConfig = r.getInt("filter.order_joint", -1);
  const long orderJoint = orderJointConfig < 0 ? orderLower + orderUpper : orderJointConfig;
  if (ratios.empty()) throw ArgumentError("filter.ratios is empty");
  if (noiseVar < 0.0) throw ArgumentError("config key 'signal.noise_var': must be nonnegative");

  const char* designNames[3] = {"separate", "joint", "simplicial"};
  struct TrialOut {
    std::vector<std::string> rows;
    std::map<double, double> snr[3];
  };
  std::vector<TrialOut> outs(static_cast<std::size_t>(trials));

  runTrials(trials, threads, [&](long t) {
    const std::uint64_t trialSeed = deriveSeed(seed, static_cast<std::uint64_t>(t));
    const CellComplex complex = complexParams.make(trialSeed);
    const LaplacianSet<double> lap =
        buildLaplacians<double>(buildB1(complex), buildB2(complex));
    const SpectralBasisd basis = partitionBasis(lap);
    const Index irrDim = basis.count(ComponentLabel::Irrotational);
    const Index solDim = basis.count(ComponentLabel::Solenoidal);
    if (solDim < 1)
      throw ArgumentError("filter experiment needs planted polygons (no solenoidal space)");

    SpectralMaskd irrMask, solMask;
    irrMask.eigenvalues = dedupSpectrum<double>(basis.eigenvaluesOf(ComponentLabel::Irrotational));
    irrMask.response = VectorX<double>::Zero(irrMask.eigenvalues.size());
    solMask.eigenvalues = dedupSpectrum<double>(basis.eigenvaluesOf(ComponentLabel::Solenoidal));
    solMask.response = VectorX<double>::Ones(solMask.eigenvalues.size());
    const FilterDesignd separate =
        designSeparate<double>(irrMask, solMask, orderLower, orderUpper);
    const VectorX<double> jointCoeffs = designJoint<double>(irrMask, solMask, orderJoint);
    FilterDesignd joint;
    joint.coeffsIrr = jointCoeffs;
    joint.coeffsSol = jointCoeffs;

    const CellComplex simplicial = restrictToTriangles(complex);
    const LaplacianSet<double> simpLap =
        buildLaplacians<double>(buildB1(simplicial), buildB2(simplicial));
    const SpectralBasisd simpBasis = partitionBasis(simpLap);
    std::optional<FilterDesignd> simpDesign;
    if (simpBasis.count(ComponentLabel::Solenoidal) > 0) {
      SpectralMaskd simpIrr, simpSol;
      simpIrr.eigenvalues =
          dedupSpectrum<double>(simpBasis.eigenvaluesOf(ComponentLabel::Irrotational));
      simpIrr.response = VectorX<double>::Zero(simpIrr.eigenvalues.size());
      simpSol.eigenvalues =
          dedupSpectrum<double>(simpBasis.eigenvaluesOf(ComponentLabel::Solenoidal));
      simpSol.response = VectorX<double>::Ones(simpSol.eigenvalues.size());
      simpDesign = designSeparate<double>(simpIrr, simpSol, orderLower, orderUpper);
    }

    const MatrixX<double> irrCols = basis.columns(ComponentLabel::Irrotational);
    const MatrixX<double> solCols = basis.columns(ComponentLabel::Solenoidal);
    TrialOut& out = outs[static_cast<std::size_t>(t)];
    for (std::size_t ri = 0; ri < ratios.size(); ++ri) {
      const double ratio = ratios[ri];
      const Index bIrr = std::min<Index>(irrDim, std::max(1L, bandIrrConfig));
      const Index bSol =
          std::min<Index>(solDim, std::max(1L, std::lround(ratio * double(bIrr))));
      std::mt19937_64 rng(deriveSeed(trialSeed, 5 + static_cast<std::uint64_t>(ri)));
      std::normal_distribution<double> gauss(0.0, 1.0);
      MatrixX<double> gIrr(bIrr, count), gSol(bSol, count);
      for (Index j = 0; j < count; ++j) {
        for (Index k = 0; k < bIrr; ++k) gIrr(k, j) = gauss(rng);
        for (Index k = 0; k < bSol; ++k) gSol(k, j) = gauss(rng);
      }
      const MatrixX<double> cleanSol = solCols.leftCols(bSol) * gSol;
      MatrixX<double> signal = irrCols.leftCols(bIrr) * gIrr + cleanSol;
      if (noiseVar > 0.0) {
        const double sigma = std::sqrt(noiseVar);
        for (Index j = 0; j < signal.cols(); ++j)
          for (Index i = 0; i < signal.rows(); ++i) signal(i, j) += sigma * gauss(rng);
      }
      const VectorX<double> cleanFlat = flattened(cleanSol);
      for (int d = 0; d < 3; ++d) {
        MatrixX<double> filtered;
        if (d == 0) filtered = applyFilterBatch<double>(signal, lap, separate);
        else if (d == 1) filtered = applyFilterBatch<double>(signal, lap, joint);
        else if (simpDesign) filtered = applyFilterBatch<double>(signal, simpLap, *simpDesign);
        else filtered = MatrixX<double>::Zero(signal.rows(), signal.cols());
        const double snr = outputSnr<double>(cleanFlat, flattened(filtered));
        out.rows.push_back(csvJoin({std::to_string(t), std::to_string(trialSeed),
                                    formatDouble(ratio), designNames[d], formatDouble(snr)}));
        out.snr[d][ratio] = snr;
      }
    }
  });

  ExperimentOutput out;
  out.csv = "trial,seed,ratio,design,snr_db\n";
  for (const TrialOut& t : outs)
    for (const std::string& row : t.rows) out.csv += row;

  PolylineChart chart;
  chart.title = "solenoidal output snr";
  chart.xLabel = "solenoidal to irrotational bandwidth ratio";
  chart.yLabel = "mean snr (dB)";
  for (int d = 0; d < 3; ++d) {
    ChartSeries series;
    series.name = designNames[d];
    for (double ratio : ratios) {
      double total = 0;
      for (const TrialOut& t : outs) total += t.snr[d].at(ratio);
      series.x.push_back(ratio);
      series.y.push_back(total / double(trials));
    }
    chart.series.push_back(std::move(series));
  }
  out.chart = std::move(chart);
  return out;
}

} // namespace

KeyValueConfig parseConfig(std::istream& in) {
  KeyValueConfig config;
  std::string line;
  int lineNumber = 0;
  while (std::getline(in, line)) {
    ++lineNumber;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string text = trimmed(line);
    if (text.empty()) continue;
    const auto equals = text.find('=');
    if (equals == std::string::npos)
      throw IoError("config line " + std::to_string(lineNumber) + ": expected 'key = value'");
    const std::string key = trimmed(text.substr(0, equals));
    const std::string value = trimmed(text.substr(equals + 1));
    if (key.empty())
      throw IoError("config line " + std::to_string(lineNumber) + ": empty key");
    config.values[key] = value;
  }
  return config;
}

KeyValueConfig parseConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  return parseConfig(in);
}

const std::string& ExperimentResult::file(const std::string& name) const {
  for (const auto& [fileName, content] : files)
    if (fileName == name) return content;
  throw ArgumentError("no result file named '" + name + "'");
}

ExperimentResult runExperiment(const std::string& name, const KeyValueConfig& config) {
  Resolver resolver(config);
  const std::string declared = resolver.getString("experiment", name);
  if (declared != name)
    throw ArgumentError("config declares experiment '" + declared + "' but '" + name +
                        "' was requested");
  const std::uint64_t seed = resolver.getUint("seed", 1);
  const long trials = resolver.getInt("trials", 20);
  const long threads = resolver.getInt("threads", 0);
  if (trials < 1) throw ArgumentError("config key 'trials': must be at least 1");

  ExperimentOutput output;
  if (name == "gen") output = runGen(resolver, seed);
  else if (name == "infer") output = runInfer(resolver, seed, trials, threads);
  else if (name == "sparsify") output = runSparsify(resolver, seed, trials, threads);
  else if (name == "sample") output = runSample(resolver, seed, trials, threads);
  else if (name == "filter") output = runFilter(resolver, seed, trials, threads);
  else
    throw ArgumentError("unknown experiment '" + name +
                        "' (expected gen, infer, sparsify, sample, or filter)");

  nlohmann::json provenance;
  for (const auto& [key, value] : resolver.resolved) provenance[key] = value;
  ExperimentResult result;
  result.files.emplace_back("results.csv", output.csv);
  result.files.emplace_back("config.resolved.json", provenance.dump(2) + "\n");
  if (output.chart) result.files.emplace_back("plot.svg", renderChart(*output.chart));
  for (auto& extra : output.extraFiles) result.files.push_back(std::move(extra));
  return result;
}

ExperimentResult runExperimentToDir(const std::string& name, const KeyValueConfig& config,
                                    const std::string& outputDir) {
  ExperimentResult result = runExperiment(name, config);
  std::error_code ec;
  std::filesystem::create_directories(outputDir, ec);
  if (ec) throw IoError("cannot create output directory '" + outputDir + "'");
  for (const auto& [fileName, content] : result.files) {
    const std::string path = (std::filesystem::path(outputDir) / fileName).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
  }
  return result;
}

} // namespace cellsp
