// Copyright 2026 The ClusterForge Authors
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

#include "clusterforge/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>

#include "clusterforge/errors.hpp"

namespace clusterforge {
namespace {

constexpr int kMaxResamples = 3;
constexpr int kHistory = 8;
constexpr int kMaxBacktracks = 50;
constexpr int kStallLimit = 20;
constexpr double kArmijo = 1e-4;
constexpr double kDegenerateSuccess = 1e-9;
constexpr double kRenormalizeAbove = 1e-12;
constexpr double kFixedModeTolerance = 1e-9;
constexpr double kWarmUnitarityTolerance = 1e-8;

// Ascent gradient in the coordinates of ParamVector.
Eigen::VectorXd hermitian_coordinates(const ComplexMatrix& a) {
  // dJ = Re tr(A dH) for Hermitian dH = H(dp).
  const auto dim = a.rows();
  Eigen::VectorXd g(dim * dim);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < dim; ++i) g(k++) = a(i, i).real();
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      g(k++) = (a(j, i) + a(i, j)).real();
      g(k++) = a(i, j).imag() - a(j, i).imag();
    }
  }
  return g;
}

ComplexMatrix polar_unitary(const ComplexMatrix& u) {
  Eigen::JacobiSVD<ComplexMatrix> svd(u, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

/// Moves on U(N) along U exp(iX); steps and gradients are expressed in the
/// Hermitian coordinates of X (left trivialization, identity transport).
class Geometry {
 public:
  Geometry(const Objective& objective, std::vector<int> fixed)
      : dim_(objective.dimension()), fixed_(std::move(fixed)), objective_(objective) {}

  ComplexMatrix retract(const ComplexMatrix& point, const Eigen::VectorXd& step) const {
    ComplexMatrix next = point * exp_map(step, dim_).matrix();
    if (unitarity_defect(next) > kRenormalizeAbove) next = polar_unitary(next);
    return next;
  }

  ObjectiveReport value(const ComplexMatrix& point, double penalty) const {
    return objective_.report(point, penalty);
  }

  ObjectiveReport value_and_gradient(const ComplexMatrix& point, double penalty,
                                     Eigen::VectorXd& grad) const {
    ComplexMatrix g;
    const ObjectiveReport r = objective_.report_with_gradient(point, penalty, g);
    // dU = U i dH  =>  dJ = Re tr(i G^dag U dH).
    ComplexMatrix a = Complex(0, 1) * g.adjoint() * point;
    for (int m : fixed_) {
      a.row(m).setZero();
      a.col(m).setZero();
    }
    grad = hermitian_coordinates(a);
    return r;
  }

 private:
  int dim_;
  std::vector<int> fixed_;
  const Objective& objective_;
};

std::vector<int> free_modes(const ExperimentSpec& spec) {
  std::vector<int> free;
  for (int m = 0; m < spec.device_dimension(); ++m) {
    if (std::find(spec.fixed_modes.begin(), spec.fixed_modes.end(), m) == spec.fixed_modes.end()) {
      free.push_back(m);
    }
  }
  return free;
}

double fixed_mode_defect(const ComplexMatrix& u, const std::vector<int>& fixed) {
  double defect = 0.0;
  for (int m : fixed) {
    for (Eigen::Index k = 0; k < u.rows(); ++k) {
      const Complex want = k == m ? Complex(1.0) : Complex(0.0);
      defect = std::max({defect, std::abs(u(m, k) - want), std::abs(u(k, m) - want)});
    }
  }
  return defect;
}

/// Maps search parameters to a point on the unitary group the geometry works
/// on. A contraction M on N modes is searched as its 2N-mode unitary dilation
/// whose extra modes are vacuum ports; M is the top-left block.
class SearchSpace {
 public:
  explicit SearchSpace(const ExperimentSpec& spec)
      : contraction_(spec.mode == SearchMode::contraction),
        dim_(spec.device_dimension()),
        search_spec_(spec) {
    if (contraction_) {
      search_spec_.mode = SearchMode::unitary;
      search_spec_.vacuum_modes += dim_;
    }
  }

  const ExperimentSpec& search_spec() const { return search_spec_; }

  ComplexMatrix point(const ParamVector& p) const {
    if (!contraction_) return exp_map(p, dim_).matrix();
    return dilate(clamp_to_contraction(matrix_from_params(p, dim_)).first).matrix();
  }
  ComplexMatrix device(const ComplexMatrix& point) const {
    return contraction_ ? ComplexMatrix(point.topLeftCorner(dim_, dim_)) : point;
  }
  ParamVector params(const ComplexMatrix& point) const {
    return contraction_ ? params_from_matrix(device(point)) : log_map(point);
  }

 private:
  bool contraction_;
  int dim_;
  ExperimentSpec search_spec_;
};

class Lbfgs {
 public:
  void reset() { history_.clear(); }

  /// Ascent direction from gradient g of the maximized function.
  Eigen::VectorXd direction(const Eigen::VectorXd& g) const {
    Eigen::VectorXd q = g;
    std::vector<double> alpha(history_.size());
    for (std::size_t i = history_.size(); i-- > 0;) {
      const auto& h = history_[i];
      alpha[i] = h.rho * h.s.dot(q);
      q -= alpha[i] * h.y;
    }
    if (!history_.empty()) {
      const auto& last = history_.back();
      q *= last.s.dot(last.y) / last.y.squaredNorm();
    }
    for (std::size_t i = 0; i < history_.size(); ++i) {
      const auto& h = history_[i];
      const double beta = h.rho * h.y.dot(q);
      q += (alpha[i] - beta) * h.s;
    }
    return q;
  }

  /// s: accepted step; y: decrease of the ascent gradient across it.
  void update(Eigen::VectorXd s, Eigen::VectorXd y) {
    const double sy = s.dot(y);
    if (!(sy > 1e-12 * s.norm() * y.norm())) return;
    history_.push_back({std::move(s), std::move(y), 1.0 / sy});
    if (history_.size() > kHistory) history_.pop_front();
  }

  bool empty() const { return history_.empty(); }

 private:
  struct Pair {
    Eigen::VectorXd s;
    Eigen::VectorXd y;
    double rho;
  };
  std::deque<Pair> history_;
};

struct StageResult {
  ObjectiveReport report;
  int iterations = 0;
};

StageResult run_stage(const Geometry& geometry, ComplexMatrix& point, double penalty,
                      const ExperimentSpec& spec) {
  Eigen::VectorXd grad;
  ObjectiveReport current = geometry.value_and_gradient(point, penalty, grad);
  Lbfgs lbfgs;
  int stalled = 0;
  int it = 0;
  for (; it < spec.max_iterations; ++it) {
    if (grad.norm() < spec.gradient_tolerance) break;
    Eigen::VectorXd dir = lbfgs.direction(grad);
    double slope = dir.dot(grad);
    if (lbfgs.empty() || !(slope > 0.0)) {
      lbfgs.reset();
      dir = grad * std::min(1.0, 0.1 / grad.norm());
      slope = dir.dot(grad);
    }

    double step = 1.0;
    std::optional<ComplexMatrix> accepted;
    ObjectiveReport trial;
    for (int b = 0; b < kMaxBacktracks; ++b, step *= 0.5) {
      ComplexMatrix candidate = geometry.retract(point, step * dir);
      try {
        trial = geometry.value(candidate, penalty);
      } catch (const DegenerateOutputError&) {
        continue;
      }
      if (trial.merit >= current.merit + kArmijo * step * slope) {
        accepted = std::move(candidate);
        break;
      }
    }
    if (!accepted) {
      if (lbfgs.empty()) break;
      lbfgs.reset();
      continue;
    }

    Eigen::VectorXd next_grad;
    const ObjectiveReport next = geometry.value_and_gradient(*accepted, penalty, next_grad);
    const double gain = next.merit - current.merit;
    stalled = gain <= 1e-15 * std::max(1.0, std::abs(current.merit)) ? stalled + 1 : 0;
    lbfgs.update(step * dir, grad - next_grad);
    point = std::move(*accepted);
    current = next;
    grad = std::move(next_grad);
    if (stalled >= kStallLimit) {
      ++it;
      break;
    }
  }
  return {current, it};
}

bool is_degenerate(const Geometry& geometry, const ComplexMatrix& point) {
  try {
    return geometry.value(point, 0.0).success < kDegenerateSuccess;
  } catch (const DegenerateOutputError&) {
    return true;
  }
}

}  // namespace

Eigen::VectorXd finite_diff_gradient(const Objective1D& objective, const ParamVector& p, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite_diff_gradient: step must be positive");
  Eigen::VectorXd g(p.size());
  ParamVector probe = p;
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    probe(k) = p(k) + h;
    const double up = objective(probe);
    probe(k) = p(k) - h;
    const double down = objective(probe);
    probe(k) = p(k);
    g(k) = (up - down) / (2.0 * h);
  }
  return g;
}

std::uint64_t cycle_seed(std::uint64_t master, int cycle) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(cycle)};
  std::array<std::uint32_t, 2> words{};
  seq.generate(words.begin(), words.end());
  return (std::uint64_t{words[0]} << 32) | words[1];
}

ParamVector random_start(const ExperimentSpec& spec, std::mt19937_64& rng) {
  const int dim = spec.device_dimension();
  if (spec.mode == SearchMode::contraction) {
    return params_from_matrix(random_contraction(dim, rng).matrix());
  }
  if (spec.fixed_modes.empty()) return log_map(random_haar(dim, rng).matrix());
  const std::vector<int> free = free_modes(spec);
  const ComplexMatrix v = random_haar(static_cast<int>(free.size()), rng).matrix();
  ComplexMatrix u = ComplexMatrix::Identity(dim, dim);
  for (std::size_t i = 0; i < free.size(); ++i) {
    for (std::size_t j = 0; j < free.size(); ++j) u(free[i], free[j]) = v(i, j);
  }
  return log_map(u);
}

ParamVector warm_start_params(const ExperimentSpec& spec, const WarmStart& warm,
                              std::mt19937_64& rng) {
  const int dim = spec.device_dimension();
  if (warm.device.rows() != dim || warm.device.cols() != dim) {
    throw DimensionError("warm start is " + std::to_string(warm.device.rows()) + "x" +
                         std::to_string(warm.device.cols()) + ", experiment needs " +
                         std::to_string(dim) + "x" + std::to_string(dim));
  }
  if (fixed_mode_defect(warm.device, spec.fixed_modes) > kFixedModeTolerance) {
    throw DimensionError("warm start moves a fixed mode");
  }
  if (spec.mode == SearchMode::contraction) {
    ParamVector p = params_from_matrix(warm.device);
    if (warm.spread > 0.0) p += warm.spread * random_start(spec, rng);
    return p;
  }
  if (unitarity_defect(warm.device) > kWarmUnitarityTolerance) {
    throw DimensionError("warm start is not unitary");
  }
  if (!(warm.spread > 0.0)) return log_map(warm.device);
  const ParamVector kick = warm.spread * random_start(spec, rng);
  return log_map(warm.device * exp_map(kick, dim).matrix());
}

RunRecord local_optimize(const ExperimentSpec& spec, const ParamVector& start, std::uint64_t seed) {
  if (start.size() != spec.param_count()) {
    throw DimensionError("local_optimize: start has " + std::to_string(start.size()) +
                         " parameters, expected " + std::to_string(spec.param_count()));
  }
  const auto started = std::chrono::steady_clock::now();
  const SearchSpace space(spec);
  const Objective objective(space.search_spec());
  const Geometry geometry(objective, spec.fixed_modes);

  RunRecord rec;
  rec.experiment = spec.name;
  rec.input_recipe = spec.input_recipe;
  rec.target_recipe = spec.target_recipe;
  rec.vacuum_modes = spec.vacuum_modes;
  rec.seed = seed;
  rec.mode = spec.mode;

  ComplexMatrix point = space.point(start);
  if (fixed_mode_defect(point, spec.fixed_modes) > kFixedModeTolerance) {
    throw DimensionError("local_optimize: start moves a fixed mode");
  }
  for (int attempt = 0;; ++attempt) {
    const bool last_attempt = attempt == kMaxResamples;
    if (is_degenerate(geometry, point) && !last_attempt) {
      std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                        static_cast<std::uint32_t>(attempt + 1)};
      std::mt19937_64 rng(seq);
      point = space.point(random_start(spec, rng));
      ++rec.restarts;
      continue;
    }

    double penalty = spec.penalty.initial;
    rec.iterations = 0;
    rec.stages = 0;
    ObjectiveReport report;
    bool failed = false;
    for (int stage = 0; stage < spec.penalty.stages; ++stage) {
      try {
        const StageResult r = run_stage(geometry, point, penalty, spec);
        report = r.report;
        rec.iterations += r.iterations;
      } catch (const DegenerateOutputError&) {
        failed = true;
        break;
      }
      rec.stages = stage + 1;
      if (1.0 - report.fidelity <= spec.fidelity_tolerance) break;
      if (stage + 1 < spec.penalty.stages) penalty *= spec.penalty.growth;
    }
    rec.penalty = penalty;
    rec.success = failed ? 0.0 : report.success;
    rec.fidelity = failed ? 0.0 : report.fidelity;
    rec.distance = failed ? std::acos(0.0) : report.distance;
    if ((failed || rec.success < kDegenerateSuccess) && !last_attempt) {
      std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                        static_cast<std::uint32_t>(attempt + 1)};
      std::mt19937_64 rng(seq);
      point = space.point(random_start(spec, rng));
      ++rec.restarts;
      continue;
    }
    rec.converged = !failed && rec.success >= kDegenerateSuccess &&
                    1.0 - rec.fidelity <= spec.fidelity_tolerance;
    break;
  }

  const ComplexMatrix device = space.device(point);
  rec.params = space.params(point);
  rec.scale = spec.mode == SearchMode::unitary ? 1.0 : clamp_to_contraction(device).second;
  rec.sv_ratio = singular_value_ratio(device);
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return rec;
}

void sort_records(std::vector<RunRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
    if (a.converged != b.converged) return a.converged;
    if (a.success != b.success) return a.success < b.success;
    return a.cycle < b.cycle;
  });
}

std::vector<RunRecord> multi_start(const ExperimentSpec& spec, const MultiStartOptions& options) {
  spec.validate();
  const int cycles = spec.cycles;
  std::vector<std::optional<RunRecord>> results(static_cast<std::size_t>(cycles));
  std::vector<char> done(static_cast<std::size_t>(cycles), 0);
  std::atomic<int> next{0};
  std::mutex mutex;
  int emitted = 0;
  std::exception_ptr failure;

  auto worker = [&] {
    for (int cycle = next++; cycle < cycles; cycle = next++) {
      std::optional<RunRecord> rec;
      if (!options.skip.contains(cycle)) {
        try {
          const std::uint64_t seed = cycle_seed(spec.seed, cycle);
          std::mt19937_64 rng(seed);
          const ParamVector start = options.warm_start
                                        ? warm_start_params(spec, *options.warm_start, rng)
                                        : random_start(spec, rng);
          rec = local_optimize(spec, start, seed);
          rec->cycle = cycle;
        } catch (...) {
          std::lock_guard lock(mutex);
          if (!failure) failure = std::current_exception();
          next = cycles;
          return;
        }
      }
      std::lock_guard lock(mutex);
      results[cycle] = std::move(rec);
      done[cycle] = 1;
      while (emitted < cycles && done[emitted]) {
        if (results[emitted] && options.on_record && !failure) {
          try {
            options.on_record(*results[emitted]);
          } catch (...) {
            failure = std::current_exception();
            next = cycles;
          }
        }
        ++emitted;
      }
    }
  };

  const int threads = std::clamp(options.threads, 1, std::max(1, cycles));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<RunRecord> records;
  for (auto& r : results) {
    if (r) records.push_back(std::move(*r));
  }
  sort_records(records);
  return records;
}

AuditSummary unitarity_audit(const std::vector<RunRecord>& records, double threshold) {
  AuditSummary summary;
  for (const auto& r : records) {
    if (!(r.success > threshold)) continue;
    ++summary.examined;
    summary.min_ratio = std::min(summary.min_ratio, r.sv_ratio);
    if (r.sv_ratio < kUnitaryRatioFloor) summary.flagged_cycles.push_back(r.cycle);
  }
  return summary;
}

ComplexMatrix record_matrix(const RunRecord& record, const ExperimentSpec& spec) {
  if (record.mode != spec.mode) throw DimensionError("record_matrix: search mode mismatch");
  return device_matrix(record.params, spec);
}

int default_thread_count() {
  if (const char* env = std::getenv("CLUSTERFORGE_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (const std::exception&) {
    }
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

nlohmann::json record_to_json(const RunRecord& r, bool include_timing) {
  nlohmann::json j = {
      {"experiment", r.experiment},
      {"input", r.input_recipe},
      {"target", r.target_recipe},
      {"vacuum_modes", r.vacuum_modes},
      {"cycle", r.cycle},
      {"seed", r.seed},
      {"mode", to_string(r.mode)},
      {"s", r.success},
      {"f", r.fidelity},
      {"gamma", r.distance},
      {"sv_ratio", r.sv_ratio},
      {"penalty", r.penalty},
      {"iterations", r.iterations},
      {"stages", r.stages},
      {"restarts", r.restarts},
      {"converged", r.converged},
      {"scale", r.scale},
      {"params", std::vector<double>(r.params.data(), r.params.data() + r.params.size())},
  };
  if (include_timing) j["wall_seconds"] = r.wall_seconds;
  return j;
}

RunRecord record_from_json(const nlohmann::json& j) {
  RunRecord r;
  r.experiment = j.at("experiment").get<std::string>();
  r.input_recipe = j.value("input", std::string{});
  r.target_recipe = j.value("target", std::string{});
  r.vacuum_modes = j.value("vacuum_modes", 0);
  r.cycle = j.at("cycle").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  const auto mode = j.at("mode").get<std::string>();
  if (mode != "unitary" && mode != "contraction") throw ConfigError("record: unknown mode " + mode);
  r.mode = mode == "unitary" ? SearchMode::unitary : SearchMode::contraction;
  r.success = j.at("s").get<double>();
  r.fidelity = j.at("f").get<double>();
  r.distance = j.at("gamma").get<double>();
  r.sv_ratio = j.at("sv_ratio").get<double>();
  r.penalty = j.value("penalty", 0.0);
  r.iterations = j.value("iterations", 0);
  r.stages = j.value("stages", 0);
  r.restarts = j.value("restarts", 0);
  r.converged = j.at("converged").get<bool>();
  r.scale = j.value("scale", 1.0);
  r.wall_seconds = j.value("wall_seconds", 0.0);
  const auto params = j.at("params").get<std::vector<double>>();
  r.params = Eigen::Map<const Eigen::VectorXd>(params.data(), static_cast<Eigen::Index>(params.size()));
  return r;
}

}  // namespace clusterforge
