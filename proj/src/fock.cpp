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

#include "clusterforge/fock.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "clusterforge/errors.hpp"

namespace clusterforge {

FockState::FockState(std::vector<int> occupations) : occ_(std::move(occupations)) {
  for (int n : occ_) {
    if (n < 0) throw std::invalid_argument("FockState: negative occupation");
  }
}

int FockState::photon_count() const { return std::accumulate(occ_.begin(), occ_.end(), 0); }

bool BasisOrder::operator()(const FockState& a, const FockState& b) const {
  return std::lexicographical_compare(a.occupations().begin(), a.occupations().end(),
                                      b.occupations().begin(), b.occupations().end(),
                                      std::greater<int>{});
}

namespace {

void enumerate_into(std::vector<int>& occ, std::size_t mode, int remaining,
                    std::vector<FockState>& out) {
  if (mode + 1 == occ.size()) {
    occ[mode] = remaining;
    out.emplace_back(occ);
    return;
  }
  for (int k = remaining; k >= 0; --k) {
    occ[mode] = k;
    enumerate_into(occ, mode + 1, remaining - k, out);
  }
}

}  // namespace

std::vector<FockState> enumerate_basis(int mode_count, int photon_count) {
  if (mode_count < 1 || photon_count < 0) {
    throw std::invalid_argument("enumerate_basis: need mode_count >= 1 and photon_count >= 0");
  }
  std::vector<FockState> out;
  std::vector<int> occ(static_cast<std::size_t>(mode_count), 0);
  enumerate_into(occ, 0, photon_count, out);
  return out;
}

StateVector::StateVector(std::size_t mode_count, TermMap terms) : modes_(mode_count) {
  for (auto& [basis, amp] : terms) {
    if (basis.mode_count() != modes_) {
      throw DimensionError("StateVector: term has " + std::to_string(basis.mode_count()) +
                           " modes, expected " + std::to_string(modes_));
    }
    if (std::abs(amp) > kPruneThreshold) terms_.emplace(basis, amp);
  }
}

Complex StateVector::amplitude(const FockState& basis) const {
  auto it = terms_.find(basis);
  return it == terms_.end() ? Complex{} : it->second;
}

double StateVector::norm_squared() const {
  double acc = 0.0;
  for (const auto& [basis, amp] : terms_) acc += std::norm(amp);
  return acc;
}

Complex inner_product(const StateVector& a, const StateVector& b) {
  if (a.mode_count() != b.mode_count()) {
    throw DimensionError("inner_product: mode counts differ");
  }
  Complex acc{};
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  for (const auto& [basis, amp] : small.terms()) {
    auto it = large.terms().find(basis);
    if (it == large.terms().end()) continue;
    acc += (&small == &a) ? std::conj(amp) * it->second : std::conj(it->second) * amp;
  }
  return acc;
}

StateVector scale_add(const StateVector& target, const StateVector& source, Complex factor) {
  if (target.mode_count() != source.mode_count()) {
    throw DimensionError("scale_add: mode counts differ");
  }
  StateVector::TermMap sum = target.terms();
  for (const auto& [basis, amp] : source.terms()) sum[basis] += factor * amp;
  return StateVector(target.mode_count(), std::move(sum));
}

nlohmann::json to_json(const StateVector& state) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [basis, amp] : state.terms()) {
    terms.push_back({{"occ", basis.occupations()}, {"re", amp.real()}, {"im", amp.imag()}});
  }
  return {{"modes", state.mode_count()}, {"terms", std::move(terms)}};
}

StateVector state_from_json(const nlohmann::json& j) {
  const auto modes = j.at("modes").get<std::size_t>();
  StateVector::TermMap terms;
  for (const auto& t : j.at("terms")) {
    FockState basis(t.at("occ").get<std::vector<int>>());
    terms[basis] += Complex(t.at("re").get<double>(), t.at("im").get<double>());
  }
  return StateVector(modes, std::move(terms));
}

}  // namespace clusterforge
