#include <coherence/fock.hpp>
#include <coherence/lowest_weight.hpp>
#include <coherence/spin.hpp>

#include <cmath>

namespace coherence {

LowestWeightModel oscillator_model(int cutoff) {
    auto [a, adag] = fock::ladder_ops(cutoff);
    return {"oscillator",
            a.space(),
            fock::number_state(0, cutoff),
            std::move(adag),
            fock::number_op(cutoff),
            0.0,
            [](Complex tau) { return std::exp(-0.5 * std::norm(tau)); }};
}

LowestWeightModel su2_model(Spin j) {
    auto ops = spin::spin_ops(j);
    const double jj = j.value();
    return {"su2",
            ops.j0.space(),
            spin::lowest_state(j),
            std::move(ops.jplus),
            std::move(ops.j0),
            jj,
            [jj](Complex tau) { return std::pow(1.0 + std::norm(tau), -jj); }};
}

StateVector generalized_cs(const LowestWeightModel& model, Complex tau) {
    const CMatrix generator = tau * model.raising.matrix();
    CVector amps = model.normalization(tau) * (expm(generator) * model.lowest.amps());
    return StateVector(model.space, std::move(amps));
}

double lowering_residual(const LowestWeightModel& model) {
    return (model.raising.matrix().adjoint() * model.lowest.amps()).norm();
}

}  // namespace coherence
