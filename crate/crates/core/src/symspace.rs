//! Dicke states and symmetric-subspace bookkeeping for M qubits.
//!
//! The clones produced in this crate never leave the symmetric subspace, so
//! M-qubit states are stored as M+1 coefficients over the Dicke basis
//! |M, k⟩ (the normalized sum of all strings with k qubits in |0⟩). The two
//! operations everything else leans on: expanding a symmetrized product of
//! |ψ⟩s and |ψ⊥⟩s over that basis ([`sym_product_state`]), and tracing a
//! Dicke dyad down to a single qubit ([`reduced_qubit`]), which has a
//! three-band closed form.

use crate::matcore::{ComplexMatrix, C64};
use crate::su2kit::{binomial, wigner_d, BlochAngles, MAX_QUBITS};
use crate::{Error, Result};

/// A Dicke basis label: `k` of `m` qubits in |0⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DickeLabel {
    m: usize,
    k: usize,
}

impl DickeLabel {
    pub fn new(m: usize, k: usize) -> Result<Self> {
        if !(1..=MAX_QUBITS).contains(&m) {
            return Err(Error::SizeOutOfRange {
                name: "m",
                value: m,
                min: 1,
                max: MAX_QUBITS,
            });
        }
        if k > m {
            return Err(Error::IndexOutOfRange(format!("k = {k} exceeds m = {m}")));
        }
        Ok(Self { m, k })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

/// Dicke state |M, k⟩ over the full 2^M computational basis.
///
/// Basis index t encodes qubit i (i = 0 leftmost) in bit M−1−i, so |t⟩ reads
/// as the binary string of t and "k qubits in |0⟩" means M − popcount(t) = k.
/// Amplitude 1/√C(M,k) on each matching string. The 2^M layout is internal
/// plumbing for oracles and tests; the public API elsewhere stays in the
/// (M+1)-dimensional Dicke basis.
pub fn dicke_vector(label: DickeLabel) -> Vec<f64> {
    let (m, k) = (label.m, label.k);
    let amp = 1.0 / binomial(m, k).sqrt();
    let mut v = vec![0.0; 1 << m];
    for (t, slot) in v.iter_mut().enumerate() {
        if m - t.count_ones() as usize == k {
            *slot = amp;
        }
    }
    v
}

/// An M-qubit symmetric state as M+1 Dicke coefficients.
#[derive(Debug, Clone)]
pub struct SymVector {
    m: usize,
    coeffs: Vec<C64>,
}

impl SymVector {
    pub fn m(&self) -> usize {
        self.m
    }

    /// Coefficient of |M, k⟩ at index k.
    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Normalized symmetrization of j copies of |ψ⟩ and M−j copies of |ψ⊥⟩ for
/// the direction Ω, expanded over the Dicke basis:
/// coefficient of |M, k⟩ is e^{i(j−k)φ} D(k, j) with D from [`wigner_d`].
pub fn sym_product_state(m: usize, j: usize, angles: &BlochAngles) -> Result<SymVector> {
    if j > m {
        return Err(Error::IndexOutOfRange(format!("j = {j} exceeds m = {m}")));
    }
    let d = wigner_d(m, angles.theta())?;
    let coeffs = (0..=m)
        .map(|k| {
            let winding = (j as f64 - k as f64) * angles.phi();
            C64::new(0.0, winding).exp() * d.get(k, j)
        })
        .collect();
    Ok(SymVector { m, coeffs })
}

/// Single-qubit operator left after tracing a Dicke dyad |M,k⟩⟨M,k'| over
/// all qubits but one.
///
/// Nonzero only on the three bands |k−k'| ≤ 1:
/// * k' = k:   diag(k/M, (M−k)/M)
/// * k' = k−1: √(k(M−k+1))/M in the (0,1) slot
/// * k' = k+1: √((M−k)(k+1))/M in the (1,0) slot
pub fn reduced_qubit(m: usize, k: usize, k_bra: usize) -> Result<ComplexMatrix> {
    if m < 1 {
        return Err(Error::SizeOutOfRange {
            name: "m",
            value: m,
            min: 1,
            max: usize::MAX,
        });
    }
    if k > m || k_bra > m {
        return Err(Error::IndexOutOfRange(format!(
            "(k, k') = ({k}, {k_bra}) exceeds m = {m}"
        )));
    }
    let mf = m as f64;
    let mut t = ComplexMatrix::zeros(2, 2);
    if k_bra == k {
        t[(0, 0)] = C64::from(k as f64 / mf);
        t[(1, 1)] = C64::from((m - k) as f64 / mf);
    } else if k_bra + 1 == k {
        t[(0, 1)] = C64::from((k as f64 * (mf - k as f64 + 1.0)).sqrt() / mf);
    } else if k_bra == k + 1 {
        t[(1, 0)] = C64::from(((mf - k as f64) * (k as f64 + 1.0)).sqrt() / mf);
    }
    Ok(t)
}

/// Mean single-clone fidelity of a symmetric-output cloner whose amplitude
/// on the j-th output branch (j clones flipped to |ψ⊥⟩) is `amplitudes[j]`:
/// Σ_j ((M−j)/M) · amplitudes[j]².
///
/// The amplitude vector must be normalized; its length fixes M + 1.
pub fn clone_fidelity_series(amplitudes: &[f64]) -> Result<f64> {
    if amplitudes.len() < 2 {
        return Err(Error::Domain(
            "amplitude vector must cover at least one clone (length ≥ 2)".into(),
        ));
    }
    let m = amplitudes.len() - 1;
    let norm_sq: f64 = amplitudes.iter().map(|a| a * a).sum();
    let deviation = (norm_sq - 1.0).abs();
    if deviation > 1e-10 {
        return Err(Error::NotNormalized { deviation });
    }
    let mf = m as f64;
    Ok(amplitudes
        .iter()
        .enumerate()
        .map(|(j, a)| (mf - j as f64) / mf * a * a)
        .sum())
}

/// Representation of the collective spin flip (one [`crate::su2kit::spin_flip`]
/// per qubit) on the Dicke basis: |M, k⟩ → (−1)^{M−k} |M, M−k⟩.
pub fn spin_flip_dicke(m: usize) -> Result<ComplexMatrix> {
    if !(1..=MAX_QUBITS).contains(&m) {
        return Err(Error::SizeOutOfRange {
            name: "m",
            value: m,
            min: 1,
            max: MAX_QUBITS,
        });
    }
    let mut s = ComplexMatrix::zeros(m + 1, m + 1);
    for k in 0..=m {
        s[(m - k, k)] = C64::from(if (m - k).is_multiple_of(2) { 1.0 } else { -1.0 });
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::c64;

    #[test]
    fn dicke_single_qubit() {
        assert_eq!(dicke_vector(DickeLabel::new(1, 1).unwrap()), vec![1.0, 0.0]);
        assert_eq!(dicke_vector(DickeLabel::new(1, 0).unwrap()), vec![0.0, 1.0]);
    }

    #[test]
    fn dicke_two_qubit_symmetric() {
        let v = dicke_vector(DickeLabel::new(2, 1).unwrap());
        let r = 1.0 / 2f64.sqrt();
        assert_eq!(v.len(), 4);
        assert!((v[1] - r).abs() < 1e-15 && (v[2] - r).abs() < 1e-15);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[3], 0.0);
    }

    #[test]
    fn dicke_three_qubit_weights() {
        // |3,2⟩: strings 001, 010, 100, amplitude 1/√3 each.
        let v = dicke_vector(DickeLabel::new(3, 2).unwrap());
        let r = 1.0 / 3f64.sqrt();
        for (t, &amp) in v.iter().enumerate() {
            let expected = if t.count_ones() == 1 { r } else { 0.0 };
            assert!((amp - expected).abs() < 1e-15, "string {t}");
        }
    }

    #[test]
    fn dicke_states_are_orthonormal() {
        for m in 1..=8 {
            let states: Vec<Vec<f64>> = (0..=m)
                .map(|k| dicke_vector(DickeLabel::new(m, k).unwrap()))
                .collect();
            for (k1, a) in states.iter().enumerate() {
                for (k2, b) in states.iter().enumerate() {
                    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                    let expected = if k1 == k2 { 1.0 } else { 0.0 };
                    assert!((dot - expected).abs() < 1e-14, "m={m} k={k1},{k2}");
                }
            }
        }
    }

    #[test]
    fn dicke_label_bounds() {
        assert!(matches!(
            DickeLabel::new(21, 0),
            Err(Error::SizeOutOfRange { .. })
        ));
        assert!(matches!(
            DickeLabel::new(0, 0),
            Err(Error::SizeOutOfRange { .. })
        ));
        assert!(matches!(
            DickeLabel::new(3, 4),
            Err(Error::IndexOutOfRange(_))
        ));
    }

    #[test]
    fn product_state_all_copies_at_pole() {
        // θ = 0: |ψ⟩ = |0⟩, so j = M copies concentrate on k = M.
        for m in 1..=5 {
            let v = sym_product_state(m, m, &BlochAngles::new(0.0, 0.0)).unwrap();
            for (k, &z) in v.coeffs().iter().enumerate() {
                let expected = if k == m { 1.0 } else { 0.0 };
                assert!((z - C64::from(expected)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn product_state_single_qubit() {
        let (theta, phi) = (1.1, 2.3);
        let v = sym_product_state(1, 1, &BlochAngles::new(theta, phi)).unwrap();
        // Coefficients over k = 0, 1 are (sin(θ/2) e^{iφ}, cos(θ/2)).
        let s = (theta / 2.0).sin();
        let c = (theta / 2.0).cos();
        assert!((v.coeffs()[0] - c64(0.0, phi).exp() * s).norm() < 1e-14);
        assert!((v.coeffs()[1] - C64::from(c)).norm() < 1e-14);
    }

    #[test]
    fn product_states_are_orthonormal_across_j() {
        use rand::SeedableRng;
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for m in 1..=8 {
            let angles = BlochAngles::haar(&mut rng);
            let states: Vec<SymVector> = (0..=m)
                .map(|j| sym_product_state(m, j, &angles).unwrap())
                .collect();
            for (j1, a) in states.iter().enumerate() {
                for (j2, b) in states.iter().enumerate() {
                    let dot: C64 = a
                        .coeffs()
                        .iter()
                        .zip(b.coeffs())
                        .map(|(x, y)| x.conj() * y)
                        .sum();
                    let expected = if j1 == j2 { C64::ONE } else { C64::ZERO };
                    assert!((dot - expected).norm() < 1e-12, "m={m} j={j1},{j2}");
                }
            }
        }
    }

    #[test]
    fn product_state_at_zero_phase_matches_wigner_columns_exactly() {
        let theta = 1.7;
        for m in 1..=6 {
            let d = wigner_d(m, theta).unwrap();
            for j in 0..=m {
                let v = sym_product_state(m, j, &BlochAngles::new(theta, 0.0)).unwrap();
                for k in 0..=m {
                    assert_eq!(v.coeffs()[k], C64::from(d.get(k, j)));
                }
            }
        }
    }

    #[test]
    fn product_state_rejects_bad_j() {
        let angles = BlochAngles::new(1.0, 0.0);
        assert!(matches!(
            sym_product_state(3, 4, &angles),
            Err(Error::IndexOutOfRange(_))
        ));
    }

    #[test]
    fn reduced_qubit_diagonal_cases() {
        let t = reduced_qubit(1, 1, 1).unwrap();
        assert!((t[(0, 0)] - C64::ONE).norm() < 1e-15);
        assert!(t[(1, 1)].norm() < 1e-15);

        let t = reduced_qubit(2, 1, 1).unwrap();
        assert!((t[(0, 0)] - C64::from(0.5)).norm() < 1e-15);
        assert!((t[(1, 1)] - C64::from(0.5)).norm() < 1e-15);
    }

    #[test]
    fn reduced_qubit_off_diagonal_cases() {
        // k = 2, k' = 1 at M = 2: single entry √2/2 in the (0,1) slot.
        let t = reduced_qubit(2, 2, 1).unwrap();
        assert!((t[(0, 1)] - C64::from(1.0 / 2f64.sqrt())).norm() < 1e-15);
        assert!(t[(0, 0)].norm() + t[(1, 0)].norm() + t[(1, 1)].norm() < 1e-15);
        // Mirror label order lands in the (1,0) slot with the same weight.
        let t = reduced_qubit(2, 1, 2).unwrap();
        assert!((t[(1, 0)] - C64::from(1.0 / 2f64.sqrt())).norm() < 1e-15);
    }

    #[test]
    fn reduced_qubit_distant_labels_vanish() {
        let t = reduced_qubit(5, 4, 1).unwrap();
        assert_eq!(t.max_abs(), 0.0);
    }

    #[test]
    fn reduced_qubit_trace_is_label_overlap() {
        for m in 1..=6 {
            for k in 0..=m {
                for kb in 0..=m {
                    let tr = reduced_qubit(m, k, kb).unwrap().trace();
                    let expected = if k == kb { 1.0 } else { 0.0 };
                    assert!((tr - C64::from(expected)).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn reduced_qubit_rejects_bad_labels() {
        assert!(matches!(
            reduced_qubit(2, 3, 0),
            Err(Error::IndexOutOfRange(_))
        ));
    }

    #[test]
    fn fidelity_series_identity_map() {
        assert_eq!(clone_fidelity_series(&[1.0, 0.0]).unwrap(), 1.0);
    }

    #[test]
    fn fidelity_series_uniform_amplitudes() {
        let amp = 1.0 / 5f64.sqrt();
        let f = clone_fidelity_series(&[amp; 5]).unwrap();
        assert!((f - 0.5).abs() < 1e-14);
    }

    #[test]
    fn fidelity_series_rejects_unnormalized() {
        assert!(matches!(
            clone_fidelity_series(&[1.0, 0.5]),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            clone_fidelity_series(&[1.0]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn collective_flip_matches_per_qubit_action() {
        // Apply |0⟩→|1⟩, |1⟩→−|0⟩ on every qubit of |M,k⟩ in the full basis:
        // each string flips all bits and picks up (−1)^{number of ones}.
        for m in 1..=6 {
            let s = spin_flip_dicke(m).unwrap();
            for k in 0..=m {
                let v = dicke_vector(DickeLabel::new(m, k).unwrap());
                let mut flipped = vec![0.0; v.len()];
                let mask = (1usize << m) - 1;
                for (t, &amp) in v.iter().enumerate() {
                    let sign = if t.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                    flipped[!t & mask] += sign * amp;
                }
                let target = dicke_vector(DickeLabel::new(m, m - k).unwrap());
                let expected_sign = if (m - k) % 2 == 0 { 1.0 } else { -1.0 };
                for (a, b) in flipped.iter().zip(&target) {
                    assert!((a - expected_sign * b).abs() < 1e-14, "m={m} k={k}");
                }
                // And the Dicke-basis matrix encodes exactly that action.
                assert!((s[(m - k, k)] - C64::from(expected_sign)).norm() < 1e-15);
            }
        }
    }
}
