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

#include "clusterforge/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "clusterforge/errors.hpp"
#include "clusterforge/permanent.hpp"
#include "clusterforge/photonic.hpp"
#include "clusterforge/states.hpp"

namespace clusterforge {

double fidelity(const StateVector& out, const StateVector& target) {
  const double target_norm = target.norm_squared();
  if (!(target_norm > 0.0)) throw std::invalid_argument("fidelity: zero target state");
  const double out_norm = out.norm_squared();
  if (out_norm < kDegenerateNorm) {
    throw DegenerateOutputError("fidelity: output state has zero norm");
  }
  const double f = std::norm(inner_product(out, target)) / (out_norm * target_norm);
  return std::clamp(f, 0.0, 1.0);
}

double success(const StateVector& out) { return out.norm_squared(); }

double fubini_study(const StateVector& out, const StateVector& target) {
  return std::acos(std::sqrt(fidelity(out, target)));
}

ComplexMatrix device_matrix(const ParamVector& p, const ExperimentSpec& spec) {
  const int dim = spec.device_dimension();
  if (p.size() != spec.param_count()) {
    throw DimensionError("device_matrix: " + std::string(to_string(spec.mode)) + " mode needs " +
                         std::to_string(spec.param_count()) + " parameters, got " +
                         std::to_string(p.size()));
  }
  if (spec.mode == SearchMode::unitary) return exp_map(p, dim).matrix();
  return clamp_to_contraction(matrix_from_params(p, dim)).first;
}

Objective::Objective(const ExperimentSpec& spec)
    : dim_(spec.device_dimension()),
      qubits_(spec.qubit_count()),
      layout_(spec.layout()) {
  spec.validate();
  const QubitState input = spec.input_state();
  for (auto& pt : product_expansion(spec.input_recipe, input)) {
    Term t{pt.weight, Eigen::MatrixX2cd(qubits_, 2)};
    for (int k = 0; k < qubits_; ++k) t.photons.row(k) = pt.photons[k].transpose();
    terms_.push_back(std::move(t));
  }
  const std::uint64_t outcomes = std::uint64_t{1} << qubits_;
  for (std::uint64_t bits = 0; bits < outcomes; ++bits) {
    outcome_modes_.push_back(layout_.occupied_modes(bits));
  }
  target_ = spec.target_state().amplitudes();
  target_norm_ = target_.squaredNorm();
}

ComplexMatrix Objective::input_rows(const Term& t, const ComplexMatrix& u) const {
  if (u.rows() != dim_ || u.cols() != dim_) {
    throw DimensionError("Objective: device matrix is " + std::to_string(u.rows()) + "x" +
                         std::to_string(u.cols()) + ", expected " + std::to_string(dim_));
  }
  ComplexMatrix rows(qubits_, dim_);
  for (int k = 0; k < qubits_; ++k) {
    const auto [h, v] = layout_.qubit_pairs[k];
    rows.row(k) = t.photons(k, 0) * u.row(h) + t.photons(k, 1) * u.row(v);
  }
  return rows;
}

Eigen::VectorXcd Objective::coincidence_amplitudes(const ComplexMatrix& u) const {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(outcome_modes_.size()));
  ComplexMatrix sub(qubits_, qubits_);
  for (const Term& t : terms_) {
    const ComplexMatrix rows = input_rows(t, u);
    for (std::size_t c = 0; c < outcome_modes_.size(); ++c) {
      const auto& cols = outcome_modes_[c];
      for (int l = 0; l < qubits_; ++l) sub.col(l) = rows.col(cols[l]);
      out(static_cast<Eigen::Index>(c)) += t.weight * permanent_fast(sub);
    }
  }
  return out;
}

ObjectiveReport Objective::summarize(const Eigen::VectorXcd& out, double penalty,
                                     Complex& overlap) const {
  ObjectiveReport r;
  r.success = out.squaredNorm();
  if (r.success < kDegenerateNorm) {
    throw DegenerateOutputError("projected output has zero norm");
  }
  overlap = target_.dot(out);  // conjugates target
  r.fidelity = std::clamp(std::norm(overlap) / (r.success * target_norm_), 0.0, 1.0);
  r.distance = std::acos(std::sqrt(r.fidelity));
  r.merit = r.success - penalty * (1.0 - r.fidelity);
  return r;
}

ObjectiveReport Objective::report(const ComplexMatrix& u, double penalty) const {
  Complex overlap;
  return summarize(coincidence_amplitudes(u), penalty, overlap);
}

ObjectiveReport Objective::report_with_gradient(const ComplexMatrix& u, double penalty,
                                                ComplexMatrix& grad) const {
  const auto outcomes = static_cast<Eigen::Index>(outcome_modes_.size());
  ComplexMatrix sub(qubits_, qubits_);
  ComplexMatrix minors(qubits_, qubits_);

  // Each term's rows and the permanent minors for every outcome are kept so the
  // chain rule can run once the output vector is known.
  std::vector<ComplexMatrix> rows(terms_.size());
  std::vector<std::vector<ComplexMatrix>> term_minors(terms_.size());
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(outcomes);
  for (std::size_t ti = 0; ti < terms_.size(); ++ti) {
    rows[ti] = input_rows(terms_[ti], u);
    term_minors[ti].resize(outcome_modes_.size());
    for (Eigen::Index c = 0; c < outcomes; ++c) {
      const auto& cols = outcome_modes_[c];
      for (int l = 0; l < qubits_; ++l) sub.col(l) = rows[ti].col(cols[l]);
      out(c) += terms_[ti].weight * permanent_with_gradient(sub, minors);
      term_minors[ti][c] = minors;
    }
  }

  Complex overlap;
  const ObjectiveReport r = summarize(out, penalty, overlap);

  // Wirtinger derivative dJ/d out_c.
  const double s = r.success;
  const double norm_t = std::norm(overlap);
  Eigen::VectorXcd d_out(outcomes);
  for (Eigen::Index c = 0; c < outcomes; ++c) {
    const Complex d_fid =
        (std::conj(overlap) * std::conj(target_(c)) * s - norm_t * std::conj(out(c))) /
        (s * s * target_norm_);
    d_out(c) = std::conj(out(c)) + penalty * d_fid;
  }

  grad.setZero(dim_, dim_);
  ComplexMatrix row_grad(qubits_, dim_);
  for (std::size_t ti = 0; ti < terms_.size(); ++ti) {
    const Term& t = terms_[ti];
    row_grad.setZero();
    for (Eigen::Index c = 0; c < outcomes; ++c) {
      const auto& cols = outcome_modes_[c];
      const Complex w = d_out(c) * t.weight;
      for (int l = 0; l < qubits_; ++l) row_grad.col(cols[l]) += w * term_minors[ti][c].col(l);
    }
    // rows = P U with P(k, h_k) = photons(k, 0), P(k, v_k) = photons(k, 1).
    for (int k = 0; k < qubits_; ++k) {
      const auto [h, v] = layout_.qubit_pairs[k];
      grad.row(h) += 2.0 * std::conj(t.photons(k, 0)) * row_grad.row(k).conjugate();
      grad.row(v) += 2.0 * std::conj(t.photons(k, 1)) * row_grad.row(k).conjugate();
    }
  }
  return r;
}

ObjectiveReport evaluate(const ParamVector& p, const ExperimentSpec& spec, double penalty) {
  const Objective objective(spec);
  return objective.report(device_matrix(p, spec), penalty);
}

}  // namespace clusterforge
