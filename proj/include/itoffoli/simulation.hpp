// Copyright 2026 The itoffoli Authors
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
#pragma once

#include <optional>
#include <vector>

#include "itoffoli/circuit_model.hpp"
#include "itoffoli/dynamics.hpp"
#include "itoffoli/effective_model.hpp"
#include "itoffoli/fidelity.hpp"
#include "itoffoli/pulses.hpp"
#include "itoffoli/spectrum.hpp"

namespace itoffoli {

enum class ModelKind { effective_3mode, full_5mode, two_level };

struct ModelSpec {
  ModelKind kind = ModelKind::effective_3mode;
  EffectiveParams effective;  // effective_3mode; qubit 2 frequency and anharmonicity for two_level
  BareParams bare;            // full_5mode
  double chi12 = 0.0, chi23 = 0.0;  // two_level
  int levels = 3;
  Frame frame = Frame::rotating;
  CouplingForm coupling = CouplingForm::rotating_wave;
  FullModelOptions full;
};

struct GateOptions {
  Basis basis = Basis::dressed;
  CorrectionSource source = CorrectionSource::idle_reference;
  CorrectionScope scope = CorrectionScope::full_idle;
  PropagationConfig propagation;
  double idle_offdiag_tol = 1e-3;
};

struct GateRun {
  GateResult gate;
  FidelityReport report;
};

// Ties a model, a gate window and the correction strategy together. The
// computational basis and the idle correction do not depend on the pulse and
// are computed once.
class GateSimulator {
 public:
  GateSimulator(ModelSpec model, GateOptions options, double gate_time)
      : model_(std::move(model)), options_(std::move(options)), gate_time_(gate_time) {
    if (!(gate_time_ > 0.0)) throw ConfigError("gate time must be > 0");
    const TimeDependentHamiltonian h0 = hamiltonian(std::nullopt);
    spectrum_ = labeled_spectrum(h0.static_part, h0.layout);
    basis_ = options_.basis == Basis::dressed ? spectrum_.dressed : bare_computational_basis(h0.layout);
    if (options_.source == CorrectionSource::idle_reference) {
      correction_ = idle_phase_reference(h0, gate_time_, options_.propagation, basis_, options_.idle_offdiag_tol);
    } else if (model_.kind == ModelKind::two_level) {
      correction_ = analytic_phase_correction(model_.chi12, model_.chi23, gate_time_);
    } else {
      // Idle phases read off the labeled eigenvalues in the qubit frame.
      const auto rates = h0.qubit_frame_rates();
      std::array<double, 8> wrapped{};
      for (std::size_t k = 0; k < 8; ++k)
        wrapped[k] = wrap_phase(-(spectrum_.levels[k].energy - rates[k]) * gate_time_);
      correction_ = decompose_idle_phases(wrapped);
      correction_.source = CorrectionSource::analytic;
    }
  }

  const ModelSpec& model() const { return model_; }
  const GateOptions& options() const { return options_; }
  double gate_time() const { return gate_time_; }
  const Matrix& basis() const { return basis_; }
  const LabeledSpectrum& spectrum() const { return spectrum_; }
  const PhaseCorrection& correction() const { return correction_; }

  TimeDependentHamiltonian hamiltonian(const std::optional<DriveSignal>& drive) const {
    switch (model_.kind) {
      case ModelKind::effective_3mode:
        return build_effective_hamiltonian(model_.effective, ModeLayout::uniform(3, model_.levels), drive,
                                           {model_.frame, model_.coupling});
      case ModelKind::full_5mode: {
        FullModelOptions o = model_.full;
        o.frame = model_.frame;
        return build_full_hamiltonian(model_.bare, ModeLayout::uniform(5, model_.levels), drive, o);
      }
      case ModelKind::two_level:
        return build_two_level_hamiltonian(model_.chi12, model_.chi23, drive, model_.effective.frequency[1]);
    }
    throw ConfigError("unknown model kind");
  }

  double qubit2_anharmonicity() const {
    return model_.kind == ModelKind::full_5mode ? model_.bare.qubit_anharmonicity[1] : model_.effective.anharmonicity[1];
  }

  // |101> -> |111> transition from the labeled spectrum (lab frame).
  double transition_frequency() const {
    const double offset = model_.kind == ModelKind::two_level ? model_.effective.frequency[1] : 0.0;
    return drive_frequency_from(spectrum_) + offset;
  }

  DriveSignal default_drive(double peak_amplitude) const {
    DriveSignal s;
    s.peak_amplitude = peak_amplitude;
    s.gate_time = gate_time_;
    s.sigma = gate_time_ / 6.0;
    const double alpha = qubit2_anharmonicity();
    s.drag_beta = alpha != 0.0 ? default_drag_beta(alpha) : 0.0;
    s.frequency = transition_frequency();
    return s;
  }

  GateRun run(const DriveSignal& drive) const {
    GateRun r;
    r.gate = simulate_gate(hamiltonian(drive), gate_time_, options_.propagation, basis_);
    r.report = fidelity_report(r.gate, correction_, options_.scope);
    return r;
  }

  PopulationTrace populations(const DriveSignal& drive, int initial_label, const std::vector<double>& samples) const {
    return population_trace(hamiltonian(drive), initial_label, samples, options_.propagation, basis_);
  }

 private:
  static double drive_frequency_from(const LabeledSpectrum& s) {
    const auto lab = computational_labels(s.layout);
    return s.energy(lab[7]) - s.energy(lab[5]);
  }

  ModelSpec model_;
  GateOptions options_;
  double gate_time_;
  LabeledSpectrum spectrum_;
  Matrix basis_;
  PhaseCorrection correction_;
};

}  // namespace itoffoli
