#pragma once

// Rank-one lowest-weight models shared by the two registered algebras:
// the oscillator (raising a^dagger, vacuum) and su(2) (raising J+, |j,-j>).
// A coherent state is N(tau) exp(tau E) |lowest>.

#include <coherence/qcore.hpp>

#include <functional>
#include <string>

namespace coherence {

struct LowestWeightModel {
    std::string name;
    SpaceDescriptor space;
    StateVector lowest;
    LinearOperator raising;  // E_alpha, alpha > 0
    LinearOperator cartan;   // diagonal in the chosen basis
    double weight;           // Lambda: j for su(2), 0 for the oscillator vacuum
    std::function<double(Complex)> normalization;  // N(tau)
};

LowestWeightModel oscillator_model(int cutoff);
LowestWeightModel su2_model(Spin j);

/// N(tau) exp(tau E) |lowest>, renormalized on the truncated space.
StateVector generalized_cs(const LowestWeightModel& model, Complex tau);

/// max || E^dagger |lowest> ||, zero for a valid model.
double lowering_residual(const LowestWeightModel& model);

}  // namespace coherence
