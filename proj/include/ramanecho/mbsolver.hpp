#ifndef RAMANECHO_MBSOLVER_HPP
#define RAMANECHO_MBSOLVER_HPP

#include "ramanecho/amr.hpp"
#include "ramanecho/ensemble.hpp"
#include "ramanecho/grids.hpp"
#include "ramanecho/pulses.hpp"
#include "ramanecho/spectral.hpp"

#include <optional>

namespace ramanecho {

// Depth discretization: fields and coherences live on the m_slices+1 edges
// of [0, L].
struct DepthGrid {
    std::size_t m_slices = 64;

    DepthGrid() = default;
    explicit DepthGrid(std::size_t m);

    double dz(double length) const { return length / static_cast<double>(m_slices); }
    std::size_t edges() const { return m_slices + 1; }
};

// Time-domain medium state: per-node, per-depth-edge coherences plus the
// level-2 spurious-population tracker of the four-level sequence. Carries the
// master time grid of the run so later stages march on the same clock.
struct MediumState {
    Stage stage = Stage::PostWrite;
    double t_ref = 0.0;
    TimeGrid grid;
    std::size_t n_nodes = 0;
    std::vector<double> depths; // edge positions
    std::vector<cplx> r12;      // [k * depths.size() + j]
    std::vector<cplx> r14;      // four-level mode only
    std::vector<double> rho2;   // four-level mode only, per edge
    bool four_level = false;
    bool pattern_on_r14 = false; // which coherence currently holds the pattern

    cplx& r12_at(std::size_t k, std::size_t j) { return r12[k * depths.size() + j]; }
    const cplx& r12_at(std::size_t k, std::size_t j) const
    {
        return r12[k * depths.size() + j];
    }
};

struct WriteResult {
    FieldEnvelope transmitted; // A_1(t, z = L)
    MediumState state;
};

// Write stage: the co-propagating weak field marched slice by slice with
// trapezoidal coupling to the node coherences; the stiff phase rotation is
// applied exactly per step from closed-form control areas (second order in
// dt and dz overall).
WriteResult integrate_write(const FieldEnvelope& a1_in, const ControlSchedule& schedule,
                            const EnsembleGrid& e, const ProtocolParams& p,
                            const DepthGrid& grids);

// Control-free storage: one global phase.
MediumState integrate_dark(const MediumState& state, double from, double to,
                           const ProtocolParams& p);

// Rephasing stage: per-node phase ODE with the time-dependent |Omega_R|^2
// envelope, stepped with exact per-step intensity areas.
MediumState integrate_rephase(const MediumState& state, const RephasePlan& plan,
                              const EnsembleGrid& e, const ProtocolParams& p);

// Backward retrieval: installs the phase-matching profile on the stored
// coherence and marches the echo field from z = L (zero boundary) to z = 0.
FieldEnvelope integrate_read(const MediumState& state, const ControlSchedule& schedule,
                             const EnsembleGrid& e, const ProtocolParams& p,
                             const DepthGrid& grids);

struct FourLevelResult {
    FieldEnvelope echo;
    double rho2_at_read = 0.0; // spurious level-2 population seen by the read stage
    bool pi_pulses_applied = false;
};

// Four-level buffer sequence: pi-pulses shuttle the pattern R12 <-> R14 around
// the rephasing stage; optional noise_injection emulates spontaneous transfer
// into level 2 during rephasing. The pulse pair is phase-inverted (-i then +i)
// so that two swaps compose to the identity on the stored coherence.
FourLevelResult run_four_level(const FieldEnvelope& a1_in,
                               const ControlSchedule& schedule, const EnsembleGrid& e,
                               const ProtocolParams& p, const DepthGrid& grids,
                               std::optional<double> noise_injection = std::nullopt);

} // namespace ramanecho

#endif
