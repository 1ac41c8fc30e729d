//! Stimulated parametric down-conversion as a physical cloner of the pair
//! |ψ, ψ⊥⟩, plus an independent four-mode Fock-space simulation of it.
//!
//! Injecting |ψ⟩ into spatial mode 1 and |ψ⊥⟩ into mode 2 of a two-crystal
//! amplifier and post-selecting M photons in mode 1 produces each M-clone
//! branch with an amplitude linear in the number of flipped clones
//! ([`pdc_raw_amplitudes`]). The branch profile depends on one number, the
//! squeezing [`GainParameter`]; at [`optimal_gain`] it is proportional to
//! the ideal profile, so the post-selected amplifier attains the optimum
//! exactly ([`pdc_fidelity`]).
//!
//! [`fock_oracle`] checks all of this against plain quantum mechanics: it
//! exponentiates the four-mode quadratic generator on a truncated Fock
//! lattice — no symmetric-subspace shortcuts shared with the rest of the
//! crate — and [`FockState4::block`] exposes the same branch amplitudes for
//! comparison.

use crate::matcore::{matrix_exp, ComplexMatrix, C64};
use crate::{Error, Result};

/// Squeezing strength of the amplifier, kept in three equivalent forms:
/// the gain γ itself, Γ = tanh γ, and the mean pair number y = sinh²γ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainParameter {
    gamma: f64,
    tanh_gamma: f64,
    y: f64,
}

impl GainParameter {
    /// From the gain γ ≥ 0.
    pub fn from_gamma(gamma: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma < 0.0 {
            return Err(Error::Domain(format!(
                "gain must be finite and non-negative, got {gamma}"
            )));
        }
        Ok(Self {
            gamma,
            tanh_gamma: gamma.tanh(),
            y: gamma.sinh().powi(2),
        })
    }

    /// From the mean pair number y = sinh²γ ≥ 0.
    pub fn from_y(y: f64) -> Result<Self> {
        if !y.is_finite() || y < 0.0 {
            return Err(Error::Domain(format!(
                "mean pair number must be finite and non-negative, got {y}"
            )));
        }
        let gamma = y.sqrt().asinh();
        Ok(Self {
            gamma,
            tanh_gamma: gamma.tanh(),
            y,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Γ = tanh γ, the pair-creation amplitude.
    pub fn tanh_gamma(&self) -> f64 {
        self.tanh_gamma
    }

    /// y = sinh²γ = Γ²/(1−Γ²), the mean pair number per crystal.
    pub fn y(&self) -> f64 {
        self.y
    }
}

/// Unnormalized amplitudes of the M-photon branch of the amplified state,
/// index j = number of flipped clones:
///
///   amp_j = Γ^{M−1} (−1)^j ((M−j) − y) / (1+y)².
///
/// Their squared sum is the probability of post-selecting M photons in the
/// clone mode; summed over all M ≥ 1 those probabilities reach 1, because
/// the amplifier output is normalized (exercised in tests).
pub fn pdc_raw_amplitudes(m: usize, gain: &GainParameter) -> Result<Vec<f64>> {
    if m < 1 {
        return Err(Error::Domain("clone count must be at least 1".into()));
    }
    let y = gain.y();
    let scale = gain.tanh_gamma().powi(m as i32 - 1) / ((1.0 + y) * (1.0 + y));
    Ok((0..=m)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * scale * ((m - j) as f64 - y)
        })
        .collect())
}

/// The post-selected M-photon branch: its success probability and its
/// normalized clone amplitudes.
#[derive(Debug, Clone)]
pub struct PdcBlock {
    m: usize,
    success_probability: f64,
    amplitudes: Vec<f64>,
}

impl PdcBlock {
    pub fn m(&self) -> usize {
        self.m
    }

    /// Probability of finding exactly M photons in the clone mode.
    pub fn success_probability(&self) -> f64 {
        self.success_probability
    }

    /// Normalized branch amplitudes, first nonzero entry positive.
    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }
}

/// Normalize the M-photon branch of the amplifier output.
///
/// The normalized profile is built from the bracket (−1)^j((M−j) − y) alone,
/// so it stays well-defined in the γ → 0 limit where the raw amplitudes of
/// every branch with M ≥ 2 vanish. The overall sign is fixed by making the
/// first nonzero amplitude positive.
pub fn pdc_amplitudes(m: usize, gain: &GainParameter) -> Result<PdcBlock> {
    let raw = pdc_raw_amplitudes(m, gain)?;
    let success_probability = raw.iter().map(|a| a * a).sum();
    let y = gain.y();
    let mut amplitudes: Vec<f64> = (0..=m)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * ((m - j) as f64 - y)
        })
        .collect();
    let norm = amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt();
    for a in &mut amplitudes {
        *a /= norm;
    }
    if let Some(first) = amplitudes.iter().find(|a| **a != 0.0) {
        if *first < 0.0 {
            for a in &mut amplitudes {
                *a = -*a;
            }
        }
    }
    Ok(PdcBlock {
        m,
        success_probability,
        amplitudes,
    })
}

/// Mean single-clone fidelity of the post-selected M-photon branch at mean
/// pair number y:
///
///   F(M, y) = (3y² − 2y(2M+1) + 3M(M+1)/2) / (6y² − 6My + M(2M+1)).
///
/// Algebraically identical to pushing [`pdc_amplitudes`] through the clone
/// fidelity series; the denominator has no real roots, so the expression is
/// defined for every y ≥ 0.
pub fn pdc_fidelity(m: usize, y: f64) -> Result<f64> {
    if m < 1 {
        return Err(Error::Domain("clone count must be at least 1".into()));
    }
    if !y.is_finite() || y < 0.0 {
        return Err(Error::Domain(format!(
            "mean pair number must be finite and non-negative, got {y}"
        )));
    }
    let mf = m as f64;
    let numer = 3.0 * y * y - 2.0 * y * (2.0 * mf + 1.0) + 1.5 * mf * (mf + 1.0);
    let denom = 6.0 * y * y - 6.0 * mf * y + mf * (2.0 * mf + 1.0);
    Ok(numer / denom)
}

/// The gain at which the M-photon branch reproduces the ideal clone
/// amplitudes exactly: y_opt = (M − √(M(M+2)/3)) / 2.
pub fn optimal_gain(m: usize) -> Result<GainParameter> {
    if m < 1 {
        return Err(Error::Domain("clone count must be at least 1".into()));
    }
    let mf = m as f64;
    let y_opt = 0.5 * (mf - (mf * (mf + 2.0) / 3.0).sqrt());
    GainParameter::from_y(y_opt.max(0.0))
}

/// One row of a gain scan: the branch fidelity and success probability at a
/// given mean pair number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainScanRow {
    pub y: f64,
    pub gamma: f64,
    pub fidelity: f64,
    pub success_probability: f64,
}

/// Evaluate the M-photon branch across a grid of mean pair numbers.
pub fn gain_scan(m: usize, ys: &[f64]) -> Result<Vec<GainScanRow>> {
    if ys.is_empty() {
        return Err(Error::EmptyGrid(
            "gain scan needs at least one y value".into(),
        ));
    }
    ys.iter()
        .map(|&y| {
            let gain = GainParameter::from_y(y)?;
            let block = pdc_amplitudes(m, &gain)?;
            Ok(GainScanRow {
                y,
                gamma: gain.gamma(),
                fidelity: pdc_fidelity(m, y)?,
                success_probability: block.success_probability(),
            })
        })
        .collect()
}

/// Smallest admissible Fock cutoff per polarization mode.
pub const MIN_FOCK_CUTOFF: usize = 2;

/// Largest admissible Fock cutoff; the evolution matrix is dense of
/// dimension (cutoff+1)², eigendecomposed once.
pub const MAX_FOCK_CUTOFF: usize = 48;

/// A-priori bound required of the truncation tail, Γ^{2(cutoff+1)}.
const FOCK_TAIL_LIMIT: f64 = 1e-8;

/// Round-trip accuracy demanded of the truncated evolution.
const FOCK_UNITARITY_LIMIT: f64 = 1e-8;

/// Amplified four-mode Fock state from the direct simulation.
///
/// The interaction conserves n_V1 − n_H2 and n_H1 − n_V2, both zero for the
/// injected pair, so the state lives on the sublattice
/// |n_V1, n_H1, n_V2, n_H2⟩ = |a, b, b, a⟩ and is stored over (a, b) alone —
/// that is a bookkeeping restriction, not a physics assumption.
#[derive(Debug, Clone)]
pub struct FockState4 {
    gamma: f64,
    cutoff: usize,
    amps: Vec<C64>,
}

impl FockState4 {
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Per-mode occupation cutoff of the truncated lattice.
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Squared norm of the truncated state (1 up to numerics, since the
    /// truncated generator still exponentiates to a unitary).
    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Amplitude of |n_V1, n_H1, n_V2, n_H2⟩. Zero off the conserved
    /// sublattice and beyond the cutoff, where the truncated state has no
    /// support.
    pub fn amplitude(&self, n_v1: usize, n_h1: usize, n_v2: usize, n_h2: usize) -> C64 {
        if n_v1 != n_h2 || n_h1 != n_v2 || n_v1 > self.cutoff || n_h1 > self.cutoff {
            return C64::ZERO;
        }
        self.amps[n_v1 * (self.cutoff + 1) + n_h1]
    }

    /// Amplitudes of the M-photon branch of the clone mode, index
    /// j = flipped clones ↔ lattice point (a, b) = (M−j, j). Directly
    /// comparable with [`pdc_raw_amplitudes`].
    pub fn block(&self, m: usize) -> Result<Vec<f64>> {
        if m < 1 || m > self.cutoff {
            return Err(Error::SizeOutOfRange {
                name: "m",
                value: m,
                min: 1,
                max: self.cutoff,
            });
        }
        Ok((0..=m)
            .map(|j| self.amps[(m - j) * (self.cutoff + 1) + j].re)
            .collect())
    }
}

/// Simulate the amplifier by brute force: build the quadratic pair-creation
/// generator on the truncated (a, b) lattice, exponentiate it, and apply it
/// to the injected pair |a=1, b=0⟩.
///
/// Truncation is guarded twice. Before running, the geometric tail estimate
/// Γ^{2(cutoff+1)} must be below 1e-8, else [`Error::InsufficientCutoff`] —
/// amplitudes decay like Γ^{a+b}, so this bounds the weight the box cannot
/// hold. After running, the state norm must return to 1 within 1e-8; that
/// cannot detect truncation (the truncated generator is still
/// anti-Hermitian) but catches exponentiation error.
pub fn fock_oracle(gamma: f64, cutoff: usize) -> Result<FockState4> {
    if !gamma.is_finite() || gamma < 0.0 {
        return Err(Error::Domain(format!(
            "gain must be finite and non-negative, got {gamma}"
        )));
    }
    if !(MIN_FOCK_CUTOFF..=MAX_FOCK_CUTOFF).contains(&cutoff) {
        return Err(Error::SizeOutOfRange {
            name: "cutoff",
            value: cutoff,
            min: MIN_FOCK_CUTOFF,
            max: MAX_FOCK_CUTOFF,
        });
    }
    let tail = gamma.tanh().powi(2 * (cutoff as i32 + 1));
    if tail >= FOCK_TAIL_LIMIT {
        return Err(Error::InsufficientCutoff {
            gamma,
            cutoff,
            tail,
            limit: FOCK_TAIL_LIMIT,
        });
    }
    let n = cutoff + 1;
    let dim = n * n;
    let idx = |a: usize, b: usize| a * n + b;
    // G = γ(K₊ − K₊†) − γ(L₊ − L₊†), where K₊ creates a (V1, H2) pair
    // (raises a) and L₊ creates an (H1, V2) pair (raises b). Real
    // antisymmetric, hence anti-Hermitian.
    let mut g = ComplexMatrix::zeros(dim, dim);
    for a in 0..n {
        for b in 0..n {
            if a + 1 < n {
                g[(idx(a + 1, b), idx(a, b))] = C64::from(gamma * (a + 1) as f64);
                g[(idx(a, b), idx(a + 1, b))] = C64::from(-gamma * (a + 1) as f64);
            }
            if b + 1 < n {
                g[(idx(a, b + 1), idx(a, b))] = C64::from(-gamma * (b + 1) as f64);
                g[(idx(a, b), idx(a, b + 1))] = C64::from(gamma * (b + 1) as f64);
            }
        }
    }
    let u = matrix_exp(&g)?;
    let start = idx(1, 0);
    let amps: Vec<C64> = (0..dim).map(|r| u[(r, start)]).collect();
    let state = FockState4 {
        gamma,
        cutoff,
        amps,
    };
    let defect = (state.norm_sq() - 1.0).abs();
    if defect > FOCK_UNITARITY_LIMIT {
        return Err(Error::NumericalCheck(format!(
            "truncated evolution lost unitarity (|norm² − 1| = {defect:.3e})"
        )));
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cloneropt::{analytic_coefficients, fidelity_perp};
    use crate::symspace::clone_fidelity_series;

    #[test]
    fn gain_parameter_roundtrip() {
        let g = GainParameter::from_gamma(0.3).unwrap();
        assert!((g.tanh_gamma() - 0.3f64.tanh()).abs() < 1e-16);
        assert!((g.y() - 0.3f64.sinh().powi(2)).abs() < 1e-16);
        let h = GainParameter::from_y(g.y()).unwrap();
        assert!((h.gamma() - 0.3).abs() < 1e-14);
        // Γ² = y/(1+y).
        let gt = g.tanh_gamma();
        assert!((gt * gt - g.y() / (1.0 + g.y())).abs() < 1e-15);
    }

    #[test]
    fn gain_parameter_rejects_bad_values() {
        assert!(matches!(
            GainParameter::from_gamma(-0.1),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            GainParameter::from_gamma(f64::NAN),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            GainParameter::from_y(-1e-9),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            GainParameter::from_y(f64::INFINITY),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn optimal_gain_anchors() {
        assert_eq!(optimal_gain(1).unwrap().y(), 0.0);
        assert!((optimal_gain(2).unwrap().y() - 0.1835034190722741).abs() < 1e-15);
        // M = 6: y_opt = (6 − √16)/2 = 1 exactly.
        assert!((optimal_gain(6).unwrap().y() - 1.0).abs() < 1e-15);
        for m in 2..=20 {
            let y = optimal_gain(m).unwrap().y();
            assert!(y > 0.0 && y < m as f64 / 2.0, "m={m}: y_opt={y}");
        }
    }

    #[test]
    fn raw_amplitudes_match_the_closed_form() {
        let gain = GainParameter::from_gamma(0.25).unwrap();
        let t = gain.tanh_gamma();
        let one_minus = 1.0 - t * t;
        for m in 1..=4 {
            let raw = pdc_raw_amplitudes(m, &gain).unwrap();
            for (j, &amp) in raw.iter().enumerate() {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                let expected =
                    t.powi(m as i32 - 1) * one_minus * sign * ((m - j) as f64 * one_minus - t * t);
                assert!((amp - expected).abs() < 1e-15, "m={m}, j={j}");
            }
        }
    }

    #[test]
    fn branch_probabilities_exhaust_the_state() {
        // The amplifier output is normalized. Besides the M ≥ 1 branches it
        // has one more component: the injected photon can be annihilated,
        // leaving vacuum in the clone mode with amplitude −Γ(1−Γ²). The
        // branch probabilities plus that weight must sum to 1.
        for gamma in [0.05, 0.2, 0.5] {
            let gain = GainParameter::from_gamma(gamma).unwrap();
            let t2 = gain.tanh_gamma() * gain.tanh_gamma();
            let vacuum_weight = t2 * (1.0 - t2) * (1.0 - t2);
            let total: f64 = (1..=60)
                .map(|m| pdc_amplitudes(m, &gain).unwrap().success_probability())
                .sum();
            assert!(
                (total + vacuum_weight - 1.0).abs() < 1e-10,
                "gamma={gamma}: total={total}"
            );
        }
    }

    #[test]
    fn normalized_amplitudes_are_unit_and_sign_fixed() {
        for (m, y) in [(1, 0.0), (2, 0.5), (3, 3.0), (5, 5.0), (4, 4.0)] {
            let gain = GainParameter::from_y(y).unwrap();
            let block = pdc_amplitudes(m, &gain).unwrap();
            let norm: f64 = block.amplitudes().iter().map(|a| a * a).sum();
            assert!((norm - 1.0).abs() < 1e-13, "m={m}, y={y}");
            let first = block
                .amplitudes()
                .iter()
                .find(|a| **a != 0.0)
                .copied()
                .unwrap();
            assert!(first > 0.0, "m={m}, y={y}: first nonzero {first}");
        }
    }

    #[test]
    fn zero_gain_keeps_a_well_defined_profile() {
        let gain = GainParameter::from_gamma(0.0).unwrap();
        for m in 2..=6 {
            let block = pdc_amplitudes(m, &gain).unwrap();
            assert!(block.success_probability().abs() < 1e-300, "m={m}");
            // Profile ∝ (M−j): decreasing magnitudes, alternating signs.
            let amps = block.amplitudes();
            assert!(amps[0] > 0.0);
            assert!(amps[m].abs() < 1e-15);
        }
    }

    #[test]
    fn fidelity_formula_equals_the_series() {
        for m in 1..=8 {
            for &y in &[0.0, 0.1, 0.5, 1.0, 2.5, 7.0] {
                let gain = GainParameter::from_y(y).unwrap();
                let block = pdc_amplitudes(m, &gain).unwrap();
                let series = clone_fidelity_series(block.amplitudes()).unwrap();
                let formula = pdc_fidelity(m, y).unwrap();
                assert!(
                    (series - formula).abs() < 1e-12,
                    "m={m}, y={y}: {series} vs {formula}"
                );
            }
        }
    }

    #[test]
    fn fidelity_peaks_at_the_optimal_gain() {
        for m in 1..=15 {
            let y_opt = optimal_gain(m).unwrap().y();
            let at_opt = pdc_fidelity(m, y_opt).unwrap();
            assert!((at_opt - fidelity_perp(m).unwrap()).abs() < 1e-13, "m={m}");
            for &dy in &[-0.05, 0.05, 0.5] {
                let y = y_opt + dy;
                if y >= 0.0 {
                    assert!(pdc_fidelity(m, y).unwrap() < at_opt, "m={m}, y={y}");
                }
            }
        }
    }

    #[test]
    fn amplitudes_at_optimal_gain_are_the_ideal_ones() {
        for m in 1..=10 {
            let gain = optimal_gain(m).unwrap();
            let block = pdc_amplitudes(m, &gain).unwrap();
            let ideal = analytic_coefficients(m).unwrap();
            for (a, b) in block.amplitudes().iter().zip(ideal.amplitudes()) {
                assert!((a - b).abs() < 1e-12, "m={m}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn fidelity_rejects_bad_arguments() {
        assert!(matches!(pdc_fidelity(0, 0.1), Err(Error::Domain(_))));
        assert!(matches!(pdc_fidelity(2, -0.1), Err(Error::Domain(_))));
        assert!(matches!(pdc_fidelity(2, f64::NAN), Err(Error::Domain(_))));
    }

    #[test]
    fn gain_scan_matches_pointwise_evaluation() {
        let ys = [0.0, 0.1, 0.1835034190722741, 0.4, 1.0];
        let rows = gain_scan(2, &ys).unwrap();
        assert_eq!(rows.len(), ys.len());
        for (row, &y) in rows.iter().zip(&ys) {
            assert_eq!(row.y, y);
            assert!((row.fidelity - pdc_fidelity(2, y).unwrap()).abs() < 1e-15);
            let gain = GainParameter::from_y(y).unwrap();
            let expected: f64 = pdc_raw_amplitudes(2, &gain)
                .unwrap()
                .iter()
                .map(|a| a * a)
                .sum();
            assert!((row.success_probability - expected).abs() < 1e-15);
            assert!((row.gamma - gain.gamma()).abs() < 1e-15);
        }
    }

    #[test]
    fn gain_scan_rejects_empty_and_negative_grids() {
        assert!(matches!(gain_scan(2, &[]), Err(Error::EmptyGrid(_))));
        assert!(matches!(gain_scan(2, &[0.1, -0.2]), Err(Error::Domain(_))));
    }

    #[test]
    fn fock_oracle_at_zero_gain_is_the_input() {
        let state = fock_oracle(0.0, 3).unwrap();
        assert!((state.amplitude(1, 0, 0, 1) - C64::ONE).norm() < 1e-14);
        assert!(state.amplitude(0, 0, 0, 0).norm() < 1e-14);
        assert!(state.amplitude(2, 1, 1, 2).norm() < 1e-14);
        assert!((state.norm_sq() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fock_blocks_match_the_amplifier_amplitudes() {
        let gamma = 0.2;
        let state = fock_oracle(gamma, 6).unwrap();
        let gain = GainParameter::from_gamma(gamma).unwrap();
        for m in 1..=3 {
            let block = state.block(m).unwrap();
            let raw = pdc_raw_amplitudes(m, &gain).unwrap();
            for j in 0..=m {
                assert!(
                    (block[j] - raw[j]).abs() < 1e-6,
                    "m={m}, j={j}: {} vs {}",
                    block[j],
                    raw[j]
                );
            }
        }
    }

    #[test]
    fn fock_amplitude_is_zero_off_the_conserved_sublattice() {
        let state = fock_oracle(0.2, 5).unwrap();
        assert_eq!(state.amplitude(1, 1, 0, 1), C64::ZERO);
        assert_eq!(state.amplitude(2, 0, 0, 1), C64::ZERO);
        assert_eq!(state.amplitude(9, 0, 0, 9), C64::ZERO);
    }

    #[test]
    fn fock_oracle_rejects_bad_arguments() {
        assert!(matches!(fock_oracle(-0.2, 5), Err(Error::Domain(_))));
        assert!(matches!(
            fock_oracle(0.2, 1),
            Err(Error::SizeOutOfRange { .. })
        ));
        assert!(matches!(
            fock_oracle(0.2, 49),
            Err(Error::SizeOutOfRange { .. })
        ));
        match fock_oracle(1.0, 3) {
            Err(Error::InsufficientCutoff { tail, limit, .. }) => {
                assert!(tail > limit);
            }
            other => panic!("expected insufficient cutoff, got {other:?}"),
        }
    }

    #[test]
    fn fock_block_requires_room_in_the_box() {
        let state = fock_oracle(0.1, 3).unwrap();
        assert!(state.block(3).is_ok());
        assert!(matches!(state.block(4), Err(Error::SizeOutOfRange { .. })));
        assert!(matches!(state.block(0), Err(Error::SizeOutOfRange { .. })));
    }
}
