// SPDX-License-Identifier: Apache-2.0
//
// isac-sim: compressed-sampling ISAC link-level simulator
// Copyright (C) 2026 The isac-sim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "isac/array_channel.hpp"

namespace isac {

/// ||estimate - truth||_F^2 / ||truth||_F^2 over all taps.
double nmse(const CirTensor& truth, const CirTensor& estimate);

/// Mean over n_sub subcarriers of log2(1 + snr_scale |w^H H_n f|^2), H_n the n-th DFT bin of the taps.
double ase_beams(const CirTensor& h_sd, const VectorXcd& w_ut, const VectorXcd& f_cu, double snr_scale, Index n_sub);

/// Beam-steered ASE with snr_scale = P_DL / (sigma_n^2 N_RF).
double ase(const CirTensor& h_sd, double mu_ut, double nu_ut, double mu_cu, double nu_cu, const ArrayGeometry& ut,
           const ArrayGeometry& cu, double power_dl, double noise_power, Index n_rf, Index n_sub);

}  // namespace isac
