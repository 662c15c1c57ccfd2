#include "sel/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sel {

RunResult run_with_continuation(const SimState& init, const NoiseModel& model,
                                const SchemeConfig& cfg, const MonitorConfig& monitor_cfg,
                                const SpectralGrid& grid, NoiseStreams& rng,
                                const SampleSink& sink)
{
    cfg.validate();
    if (monitor_cfg.sample_stride < 1) {
        throw std::invalid_argument("run_with_continuation: sample_stride must be >= 1");
    }
    const ConcentrationMonitor monitor(monitor_cfg.rho, monitor_cfg.epsilon1, grid);

    RunResult result;
    TrajectorySummary& traj = result.trajectory;
    ContinuationRecord& cont = result.continuation;
    SimState state = init;
    EnergyLedger ledger = EnergyLedger::start(state.v, state.u, grid);
    bool armed = true;

    IntervalSummary current;
    current.t_start = state.t;
    current.energy_start = ledger.e0;

    const auto take_sample = [&]() {
        const LocalEnergySup sup = local_energy_sup(state.v, state.u, monitor, grid);
        SampleRecord rec;
        rec.t = state.t;
        rec.energy = ledger.e_t;
        rec.dissipation = ledger.dissipation;
        rec.martingale_x = ledger.martingale_x;
        rec.trace_drift = ledger.trace_drift;
        rec.residual = ledger.residual;
        rec.local_sup = sup.value;
        rec.local_argmax = sup.argmax;
        rec.constraint_err = constraint_error(state.u.data);
        rec.divergence_err = max_divergence(state.v.data, grid);
        rec.e0 = ledger.e0;
        rec.lap_u_integral = ledger.lap_u_integral;
        rec.grad_v_integral = ledger.grad_v_integral;
        rec.grad_u_integral = ledger.grad_u_integral;

        current.max_local_sup = std::max(current.max_local_sup, sup.value);
        if (sup.value >= monitor.epsilon1()) {
            if (armed) {
                cont.bubbling_times.push_back(state.t);
                ++cont.restart_count;
                current.t_end = state.t;
                current.energy_end = ledger.e_t;
                cont.intervals.push_back(current);
                // surrogate restart from the renormalized current state
                state.u = normalize_to_sphere(std::move(state.u.data));
                state.v = VelocityField{leray_project(state.v.data, grid)};
                current = IntervalSummary{};
                current.t_start = state.t;
                current.energy_start = energy(state.v, state.u, grid);
                current.max_local_sup = sup.value;
                armed = false;
            }
        } else {
            armed = true;
        }
        if (!cont.bubbling_times.empty()) {
            rec.zeta = cont.bubbling_times.front();
        }
        rec.bubbling_count = static_cast<int>(cont.bubbling_times.size());

        traj.max_abs_residual = std::max(traj.max_abs_residual, std::abs(rec.residual));
        traj.max_constraint_err = std::max(traj.max_constraint_err, rec.constraint_err);
        traj.max_divergence_err = std::max(traj.max_divergence_err, rec.divergence_err);
        traj.samples.push_back(rec);
        if (sink) {
            sink(rec, state);
        }
    };

    take_sample();
    for (std::int64_t k = 1; k <= cfg.n_steps; ++k) {
        NoiseIncrement inc;
        if (model.truncation_n > 0) {
            inc = sample_increment(model, cfg.dt, rng);
        }
        SimState next;
        try {
            next = advance(state, inc, model, cfg, grid);
        } catch (const SingularityError& e) {
            cont.unresolved = true;
            cont.unresolved_time = state.t + cfg.dt;
            cont.unresolved_message = e.what();
            break;
        } catch (const BlowUpError& e) {
            cont.unresolved = true;
            cont.unresolved_time = state.t + cfg.dt;
            cont.unresolved_message = e.what();
            break;
        }
        ledger = ledger_update(ledger, state.v, state.u, next.v, next.u, inc, cfg.dt,
                               model.c_psi, grid);
        state = std::move(next);
        if (k % monitor_cfg.sample_stride == 0 || k == cfg.n_steps) {
            take_sample();
        }
    }
    current.t_end = state.t;
    current.energy_end = ledger.e_t;
    cont.intervals.push_back(current);
    traj.final_state = state;
    traj.ledger = ledger;
    return result;
}

}  // namespace sel
