//! Bloch-sphere parameterization, exact Haar moments, and the rotation
//! matrices of the symmetric subspace.
//!
//! A direction Ω = (ϑ, φ) fixes an orthogonal qubit pair: |ψ⟩ with
//! amplitudes (cos(ϑ/2), e^{iφ} sin(ϑ/2)) and its antipode |ψ⊥⟩. Averages
//! over all directions reduce to moments of the uniform sphere measure,
//! which are small exact rationals — [`haar_monomial`] supplies them so the
//! figure-of-merit operators elsewhere in the crate are built without any
//! numeric quadrature. [`wigner_d`] expands symmetrized products of the pair
//! into the Dicke basis; the matrix is obtained by expanding the
//! symmetrization over the computational tensor basis, grouped by weight,
//! rather than from closed-form polynomial identities, so it doubles as an
//! unambiguous reference for everything built on top of it.

use crate::matcore::{c64, ComplexMatrix, C64};
use crate::{Error, Result};

/// Largest number of qubits for which symmetric-subspace objects are built
/// (2^M-sized enumerations stay cheap below this).
pub const MAX_QUBITS: usize = 20;

/// A point on the Bloch sphere, kept in the canonical range
/// ϑ ∈ [0, π], φ ∈ [0, 2π).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochAngles {
    theta: f64,
    phi: f64,
}

impl BlochAngles {
    /// Canonicalize arbitrary finite angles onto ϑ ∈ [0, π], φ ∈ [0, 2π).
    /// Folding ϑ across a pole adds π to φ so the direction is unchanged.
    pub fn new(theta: f64, phi: f64) -> Self {
        use std::f64::consts::{PI, TAU};
        debug_assert!(theta.is_finite() && phi.is_finite());
        let mut theta = theta.rem_euclid(TAU);
        let mut phi = phi;
        if theta > PI {
            theta = TAU - theta;
            phi += PI;
        }
        Self {
            theta,
            phi: phi.rem_euclid(TAU),
        }
    }

    /// Uniform (Haar) random direction: cos ϑ uniform on [-1, 1], φ uniform.
    pub fn haar<R: rand::Rng + ?Sized>(rng: &mut R) -> Self {
        let u: f64 = rng.random_range(-1.0..=1.0);
        let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        Self::new(u.acos(), phi)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// The 2×2 unitary whose columns are |ψ⟩ and |ψ⊥⟩ for the direction Ω:
///
/// ```text
/// [ cos(ϑ/2)            e^{-iφ} sin(ϑ/2) ]
/// [ e^{iφ} sin(ϑ/2)    -cos(ϑ/2)         ]
/// ```
pub fn bloch_matrix(angles: &BlochAngles) -> ComplexMatrix {
    let c = (angles.theta / 2.0).cos();
    let s = (angles.theta / 2.0).sin();
    let phase = c64(0.0, angles.phi).exp();
    let mut m = ComplexMatrix::zeros(2, 2);
    m[(0, 0)] = C64::from(c);
    m[(0, 1)] = phase.conj() * s;
    m[(1, 0)] = phase * s;
    m[(1, 1)] = C64::from(-c);
    m
}

/// Binomial coefficient as f64, exact through u128 arithmetic for n ≤ 62
/// and by the multiplicative formula beyond.
pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    if n <= 62 {
        let mut acc: u128 = 1;
        for i in 0..k {
            acc = acc * (n - i) as u128 / (i + 1) as u128;
        }
        acc as f64
    } else {
        let mut acc = 1.0f64;
        for i in 0..k {
            acc *= (n - i) as f64 / (i + 1) as f64;
        }
        acc
    }
}

/// Moment of the uniform sphere measure:
///
/// (1/4π) ∫ cos^{2p}(ϑ/2) sin^{2q}(ϑ/2) e^{imφ} sinϑ dϑ dφ
///   = δ_{m,0} · p! q! / (p+q+1)!
///
/// The azimuthal integral kills every nonzero winding m; the polar integral
/// is a Beta function, returned here as the exact rational
/// 1 / ((p+q+1)·C(p+q, p)).
pub fn haar_monomial(p: u32, q: u32, m: i32) -> f64 {
    if m != 0 {
        return 0.0;
    }
    let (p, q) = (p as usize, q as usize);
    1.0 / ((p + q + 1) as f64 * binomial(p + q, p))
}

/// Overlap matrix of symmetrized orthogonal-pair products with Dicke states.
///
/// Entry (k, j) is the amplitude of the Dicke state |M, k⟩ (k qubits in |0⟩)
/// in the normalized symmetrization of j copies of |ψ⟩ and M−j copies of
/// |ψ⊥⟩, at φ = 0. All entries are real.
#[derive(Debug, Clone)]
pub struct WignerD {
    m: usize,
    theta: f64,
    entries: Vec<f64>,
}

impl WignerD {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Entry D(k, j). Panics on out-of-range indices.
    pub fn get(&self, k: usize, j: usize) -> f64 {
        assert!(k <= self.m && j <= self.m, "WignerD index out of range");
        self.entries[k * (self.m + 1) + j]
    }
}

/// Build the full (M+1)×(M+1) overlap matrix at angle ϑ.
///
/// The symmetrized product over the 2^M computational basis has one common
/// amplitude per weight class: on strings with k zeros it is the x^j
/// coefficient of (x·cos(ϑ/2) + sin(ϑ/2))^k (x·sin(ϑ/2) − cos(ϑ/2))^{M−k}
/// divided by √C(M,j). Projecting the C(M,k) identical amplitudes onto
/// |M, k⟩ gives D(k, j) = √(C(M,k)/C(M,j)) · [x^j] of that product.
pub fn wigner_d(m: usize, theta: f64) -> Result<WignerD> {
    if !(1..=MAX_QUBITS).contains(&m) {
        return Err(Error::SizeOutOfRange {
            name: "m",
            value: m,
            min: 1,
            max: MAX_QUBITS,
        });
    }
    let c = (theta / 2.0).cos();
    let s = (theta / 2.0).sin();
    let mut entries = vec![0.0; (m + 1) * (m + 1)];
    for k in 0..=m {
        // (x·c + s)^k
        let p1: Vec<f64> = (0..=k)
            .map(|i| binomial(k, i) * c.powi(i as i32) * s.powi((k - i) as i32))
            .collect();
        // (x·s − c)^{m−k}
        let p2: Vec<f64> = (0..=m - k)
            .map(|l| binomial(m - k, l) * s.powi(l as i32) * (-c).powi((m - k - l) as i32))
            .collect();
        let mut conv = vec![0.0; m + 1];
        for (i, a) in p1.iter().enumerate() {
            for (l, b) in p2.iter().enumerate() {
                conv[i + l] += a * b;
            }
        }
        for j in 0..=m {
            entries[k * (m + 1) + j] = (binomial(m, k) / binomial(m, j)).sqrt() * conv[j];
        }
    }
    Ok(WignerD { m, theta, entries })
}

/// Residual of the three-term ladder recurrence at entry (k, j):
///
/// (2j−M) D(k,j) = (2k−M) cosϑ · D(k,j)
///              + sinϑ √((k+1)(M−k)) · D(k+1,j)
///              + sinϑ √(k(M−k+1)) · D(k−1,j)
///
/// Entries outside 0..=M count as zero. Returns |lhs − rhs|.
pub fn recurrence_residual(d: &WignerD, k: usize, j: usize) -> Result<f64> {
    let m = d.m;
    if k > m || j > m {
        return Err(Error::IndexOutOfRange(format!(
            "(k, j) = ({k}, {j}) for an order-{m} matrix"
        )));
    }
    let mf = m as f64;
    let (kf, jf) = (k as f64, j as f64);
    let lhs = (2.0 * jf - mf) * d.get(k, j);
    let mut rhs = (2.0 * kf - mf) * d.theta.cos() * d.get(k, j);
    let sin = d.theta.sin();
    if k < m {
        rhs += sin * ((kf + 1.0) * (mf - kf)).sqrt() * d.get(k + 1, j);
    }
    if k >= 1 {
        rhs += sin * (kf * (mf - kf + 1.0)).sqrt() * d.get(k - 1, j);
    }
    Ok((lhs - rhs).abs())
}

/// The antiunitary-free spin flip: |0⟩ → |1⟩, |1⟩ → −|0⟩.
pub fn spin_flip() -> ComplexMatrix {
    let mut u = ComplexMatrix::zeros(2, 2);
    u[(1, 0)] = C64::ONE;
    u[(0, 1)] = C64::from(-1.0);
    u
}
