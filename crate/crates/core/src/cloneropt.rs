//! Optimal cloning of a qubit supplied together with its orthogonal partner:
//! fixed-point optimization, closed-form optimum, and duality certificate.
//!
//! The cloner is a channel from the two input qubits (Hilbert space H, basis
//! ordered |00⟩, |11⟩, |01⟩, |10⟩) to the symmetric subspace K of M output
//! qubits. Any such channel is a Choi operator χ on H⊗K — Hermitian, PSD,
//! with Tr_K[χ] = 1_H — and its Bloch-sphere-averaged single-clone fidelity
//! is the linear functional Tr[χA] of a fixed figure-of-merit operator A
//! built here by exact Haar-moment integration ([`fidelity_operator`]).
//!
//! Three routes to the maximum of Tr[χA], cross-checked in the test suite:
//!
//! 1. [`optimize_choi`] iterates χ ← Λ⁻¹AχAΛ⁻¹ with Λ = (Tr_K[AχA])^{1/2}⊗1,
//!    which preserves the constraints and climbs the fidelity.
//! 2. [`build_isometry`] writes down the known optimal transformation, whose
//!    clone amplitudes [`analytic_coefficients`] are linear in the number of
//!    flipped clones; [`choi_from_isometry`] turns it into a feasible χ.
//! 3. [`dual_certificate`] exhibits λ with λ⊗1 − A ⪰ 0 and
//!    Tr[λ] = [`fidelity_perp`](M), proving nothing can do better.
//!
//! The scalar fidelity laws live here too, including the comparison against
//! cloning two identical copies ([`fidelity_parallel`]) and the clone count
//! at which the orthogonal pair becomes the better resource ([`crossover`]).

use crate::matcore::{hermitian_eig, kron, partial_trace, ComplexMatrix, Factor, C64};
use crate::su2kit::{bloch_matrix, haar_monomial, BlochAngles, MAX_QUBITS};
use crate::symspace::{reduced_qubit, spin_flip_dicke};
use crate::{Error, Result};

/// Upper bound on the clone count for Choi-space operations; the operators
/// have dimension 4(M+1) and are eigendecomposed repeatedly.
pub const MAX_CHOI_CLONES: usize = 30;

/// Input-basis order on H: |00⟩, |11⟩, |01⟩, |10⟩.
const H_BASIS: [(usize, usize); 4] = [(0, 0), (1, 1), (0, 1), (1, 0)];

/// Flat index of the pair (h, k) on H⊗K with K-dimension m+1.
#[inline]
fn hk(h: usize, k: usize, m: usize) -> usize {
    h * (m + 1) + k
}

/// The two-qubit state |ψ, ψ⊥⟩ for a direction Ω, as components over the
/// fixed basis order |00⟩, |11⟩, |01⟩, |10⟩.
pub fn orthogonal_pair(angles: &BlochAngles) -> [C64; 4] {
    let d = bloch_matrix(angles);
    [
        d[(0, 0)] * d[(0, 1)],
        d[(1, 0)] * d[(1, 1)],
        d[(0, 0)] * d[(1, 1)],
        d[(1, 0)] * d[(0, 1)],
    ]
}

/// The figure-of-merit operator A on H⊗K: Tr[χA] is the mean single-clone
/// fidelity of the channel χ, averaged uniformly over input directions.
#[derive(Debug, Clone)]
pub struct FidelityOperator {
    m: usize,
    matrix: ComplexMatrix,
}

impl FidelityOperator {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        4 * (self.m + 1)
    }
}

/// Build the fidelity operator for M clones by exact angular integration.
///
/// Each entry is a Haar average of a product of six Bloch-matrix elements
/// against a single-qubit trace factor. Every element is one monomial
/// cos^a(ϑ/2) sin^b(ϑ/2) e^{iwφ}, so the product integrates through
/// [`haar_monomial`] with no quadrature: the winding w must vanish, and the
/// surviving sine/cosine powers are then even by parity.
pub fn fidelity_operator(m: usize) -> Result<FidelityOperator> {
    if !(1..=MAX_CHOI_CLONES).contains(&m) {
        return Err(Error::SizeOutOfRange {
            name: "m",
            value: m,
            min: 1,
            max: MAX_CHOI_CLONES,
        });
    }
    let dim = 4 * (m + 1);
    let mut a = ComplexMatrix::zeros(dim, dim);
    for (h_row, &(ip, jp)) in H_BASIS.iter().enumerate() {
        for (h_col, &(i, j)) in H_BASIS.iter().enumerate() {
            for k_row in 0..=m {
                for k_col in 0..=m {
                    // Trace factor of the Dicke dyad: ket label from the
                    // column indices, bra label from the row indices.
                    let t = reduced_qubit(m, k_col, k_row)?;
                    let mut entry = 0.0;
                    for n in 0..2usize {
                        for np in 0..2usize {
                            let weight = t[(np, n)].re;
                            if weight == 0.0 {
                                continue;
                            }
                            // Phase winding of the six-element product; only
                            // w = 0 survives the azimuthal average.
                            let winding = (n == 1) as i32 + (i == 1) as i32 + (jp == 0) as i32
                                - (np == 1) as i32
                                - (ip == 1) as i32
                                - (j == 0) as i32;
                            if winding != 0 {
                                continue;
                            }
                            // Count sine half-angle factors; at zero winding
                            // the count is even and its half is the moment q.
                            let sines = (n == 1) as u32
                                + (np == 1) as u32
                                + (i == 1) as u32
                                + (ip == 1) as u32
                                + (j == 0) as u32
                                + (jp == 0) as u32;
                            debug_assert_eq!(sines % 2, 0);
                            let q = sines / 2;
                            let sign = if ((j == 1) as u32 + (jp == 1) as u32).is_multiple_of(2) {
                                1.0
                            } else {
                                -1.0
                            };
                            entry += weight * sign * haar_monomial(3 - q, q, 0);
                        }
                    }
                    a[(hk(h_row, k_row, m), hk(h_col, k_col, m))] = C64::from(entry);
                }
            }
        }
    }
    Ok(FidelityOperator { m, matrix: a })
}

/// Choi operator of a cloning channel on H⊗K.
#[derive(Debug, Clone)]
pub struct ChoiOperator {
    m: usize,
    matrix: ComplexMatrix,
}

impl ChoiOperator {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Check the channel axioms: Hermitian, PSD within 1e-9, and
    /// trace-preserving (Tr_K[χ] = 1_H) within 1e-8.
    pub fn validate(&self) -> Result<()> {
        let dev = self.matrix.hermitian_deviation();
        if dev > 1e-9 {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let (evals, _) = hermitian_eig(&self.matrix.hermitize())?;
        if evals.first().copied().unwrap_or(0.0) < -1e-9 {
            return Err(Error::NotPositive {
                min_eigenvalue: evals[0],
            });
        }
        let reduced = partial_trace(&self.matrix, (4, self.m + 1), Factor::First)?;
        let dev = reduced.max_abs_diff(&ComplexMatrix::identity(4));
        if dev > 1e-8 {
            return Err(Error::NumericalCheck(format!(
                "Choi operator is not trace-preserving (max |Tr_K[χ] - 1| = {dev:.3e})"
            )));
        }
        Ok(())
    }

    /// Mean single-clone fidelity Tr[χA] of this channel.
    pub fn fidelity(&self, a: &FidelityOperator) -> Result<f64> {
        if a.m != self.m {
            return Err(Error::DimensionMismatch(format!(
                "Choi operator for M = {} against fidelity operator for M = {}",
                self.m, a.m
            )));
        }
        Ok((&self.matrix * &a.matrix).trace().re)
    }
}

/// Dual optimality data: the 4×4 operator λ on H and the distinct
/// eigenvalues of λ⊗1_K − A (ascending; all must be ≥ 0 up to roundoff).
#[derive(Debug, Clone)]
pub struct DualCertificate {
    m: usize,
    lambda: ComplexMatrix,
    mu: Vec<f64>,
}

impl DualCertificate {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn lambda(&self) -> &ComplexMatrix {
        &self.lambda
    }

    /// Distinct eigenvalues of λ⊗1_K − A, ascending.
    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    /// Tr[λ], the dual bound on the fidelity.
    pub fn trace_lambda(&self) -> f64 {
        self.lambda.trace().re
    }
}

/// Result of the fixed-point optimization.
#[derive(Debug, Clone)]
pub struct Optimum {
    pub chi: ChoiOperator,
    pub certificate: DualCertificate,
    pub fidelity: f64,
    pub iterations: usize,
}

/// Eigenvalues of Tr_K[AχA] below this floor are lifted before inversion;
/// the operator can be singular in early iterations, never at the optimum.
const LAMBDA_FLOOR: f64 = 1e-14;

/// Distinct-eigenvalue clustering gap. Well below the smallest analytic
/// spectral gap (≈ 0.048 as M grows), far above eigensolver noise.
const CLUSTER_GAP: f64 = 1e-6;

/// Collapse a sorted eigenvalue list into cluster means.
fn cluster_eigenvalues(sorted: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=sorted.len() {
        if i == sorted.len() || sorted[i] - sorted[i - 1] > CLUSTER_GAP {
            let cluster = &sorted[start..i];
            out.push(cluster.iter().sum::<f64>() / cluster.len() as f64);
            start = i;
        }
    }
    out
}

/// λ and λ⁻¹ from a Hermitian PSD 4×4, with eigenvalues floored.
fn lambda_and_inverse(tk: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let (evals, evecs) = hermitian_eig(&tk.hermitize())?;
    let n = evals.len();
    let mut sqrt = evecs.clone();
    let mut inv = evecs.clone();
    for jcol in 0..n {
        let e = evals[jcol].max(LAMBDA_FLOOR);
        let (r, ri) = (C64::from(e.sqrt()), C64::from(1.0 / e.sqrt()));
        for irow in 0..n {
            sqrt[(irow, jcol)] *= r;
            inv[(irow, jcol)] *= ri;
        }
    }
    let vt = evecs.adjoint();
    Ok(((&sqrt * &vt).hermitize(), (&inv * &vt).hermitize()))
}

/// Certificate assembled from a dual candidate λ: eigenvalues of λ⊗1_K − A.
fn certificate_from_lambda(
    m: usize,
    lambda: ComplexMatrix,
    a: &FidelityOperator,
) -> Result<DualCertificate> {
    let gap_op = &kron(&lambda, &ComplexMatrix::identity(m + 1)) - &a.matrix;
    let (evals, _) = hermitian_eig(&gap_op.hermitize())?;
    Ok(DualCertificate {
        m,
        lambda,
        mu: cluster_eigenvalues(&evals),
    })
}

/// Maximize the mean single-clone fidelity over cloning channels by the
/// fixed-point iteration χ ← Λ⁻¹AχAΛ⁻¹, Λ = (Tr_K[AχA])^{1/2} ⊗ 1_K.
///
/// Starts from the maximally mixed feasible χ = 1/(M+1). Each step restores
/// trace preservation exactly, so convergence is declared when the fidelity
/// stalls (|ΔF| < tol) and the constraint holds to 10·tol. On success the
/// final Λ doubles as the dual certificate; its smallest eigenvalue and
/// the gap Tr[λ] − Tr[χA] measure how sharp the optimum is.
///
/// Runs out of iterations → [`Error::NonConvergence`] carrying the last
/// iterate, so callers can still inspect or report it.
pub fn optimize_choi(m: usize, tol: f64, max_iter: usize) -> Result<Optimum> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if max_iter == 0 {
        return Err(Error::Domain("max_iter must be at least 1".into()));
    }
    let a = fidelity_operator(m)?;
    let dim = a.dim();
    let id_k = ComplexMatrix::identity(m + 1);
    let mut chi = ComplexMatrix::identity(dim).scale(C64::from(1.0 / (m + 1) as f64));
    let mut prev_fidelity = (&chi * &a.matrix).trace().re;
    let mut last_lambda = ComplexMatrix::identity(4);
    let mut fidelity = prev_fidelity;
    let mut converged_at = None;
    let mut iterations = 0;
    for iter in 1..=max_iter {
        iterations = iter;
        let x = &(&a.matrix * &chi) * &a.matrix;
        let tk = partial_trace(&x, (4, m + 1), Factor::First)?;
        let (lambda, lambda_inv) = lambda_and_inverse(&tk)?;
        let lambda_inv_full = kron(&lambda_inv, &id_k);
        chi = (&(&lambda_inv_full * &x) * &lambda_inv_full).hermitize();
        last_lambda = lambda;
        fidelity = (&chi * &a.matrix).trace().re;
        let trace_dev = partial_trace(&chi, (4, m + 1), Factor::First)?
            .max_abs_diff(&ComplexMatrix::identity(4));
        if (fidelity - prev_fidelity).abs() < tol && trace_dev < 10.0 * tol {
            converged_at = Some(iter);
            break;
        }
        prev_fidelity = fidelity;
    }
    let certificate = certificate_from_lambda(m, last_lambda, &a)?;
    let optimum = Optimum {
        chi: ChoiOperator { m, matrix: chi },
        certificate,
        fidelity,
        iterations,
    };
    match converged_at {
        Some(_) => Ok(optimum),
        None => Err(Error::NonConvergence {
            iterations: max_iter,
            fidelity,
            last: Box::new(optimum),
        }),
    }
}

/// Max-norm of (A − λ⊗1_K)χ. Zero exactly at an optimal pair (χ, λ); the
/// residual measures how far a candidate is from satisfying the extremal
/// equation.
pub fn extremal_residual(
    chi: &ChoiOperator,
    cert: &DualCertificate,
    a: &FidelityOperator,
) -> Result<f64> {
    if chi.m != cert.m || chi.m != a.m {
        return Err(Error::DimensionMismatch(format!(
            "extremal residual across M = {}, {}, {}",
            chi.m, cert.m, a.m
        )));
    }
    let lambda_full = kron(&cert.lambda, &ComplexMatrix::identity(chi.m + 1));
    Ok((&(&a.matrix - &lambda_full) * &chi.matrix).max_abs())
}

/// The closed-form dual certificate: λ = (F⊥(M)/6) · diag-block
/// [[1,0,0,0],[0,1,0,0],[0,0,2,−1],[0,0,−1,2]] on |00⟩,|11⟩,|01⟩,|10⟩.
///
/// λ⊗1_K − A must be PSD (checked; worst negative eigenvalue beyond −1e−9 is
/// an error), and its distinct eigenvalues are returned ascending. For M ≥ 2
/// they are 0, √((M+2)/(3M))/12, and √((M+2)/(3M))/3.
pub fn dual_certificate(m: usize) -> Result<DualCertificate> {
    let a = fidelity_operator(m)?;
    let scale = fidelity_perp(m)? / 6.0;
    let mut lambda = ComplexMatrix::zeros(4, 4);
    lambda[(0, 0)] = C64::from(scale);
    lambda[(1, 1)] = C64::from(scale);
    lambda[(2, 2)] = C64::from(2.0 * scale);
    lambda[(3, 3)] = C64::from(2.0 * scale);
    lambda[(2, 3)] = C64::from(-scale);
    lambda[(3, 2)] = C64::from(-scale);
    let cert = certificate_from_lambda(m, lambda, &a)?;
    let min = cert.mu.first().copied().unwrap_or(0.0);
    if min < -1e-9 {
        return Err(Error::NotPositive {
            min_eigenvalue: min,
        });
    }
    Ok(cert)
}

/// Clone amplitudes of the optimal transformation: amplitude
/// (−1)^j (base + slope·(M−2j)) on the branch with j clones flipped.
#[derive(Debug, Clone)]
pub struct CloneCoefficients {
    m: usize,
    amplitudes: Vec<f64>,
    base: f64,
    slope: f64,
}

impl CloneCoefficients {
    pub fn m(&self) -> usize {
        self.m
    }

    /// Branch amplitudes, index j = number of flipped clones.
    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    /// The j-independent part, 1/√(2(M+1)).
    pub fn base(&self) -> f64 {
        self.base
    }

    /// Weight of the linear term, √3/√(2M(M+1)(M+2)).
    pub fn slope(&self) -> f64 {
        self.slope
    }
}

/// Closed-form optimal clone amplitudes for M clones.
pub fn analytic_coefficients(m: usize) -> Result<CloneCoefficients> {
    if m < 1 {
        return Err(Error::Domain("clone count must be at least 1".into()));
    }
    let mf = m as f64;
    let base = 1.0 / (2.0 * (mf + 1.0)).sqrt();
    let slope = (3.0f64).sqrt() / (2.0 * mf * (mf + 1.0) * (mf + 2.0)).sqrt();
    let amplitudes = (0..=m)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * (base + slope * (mf - 2.0 * j as f64))
        })
        .collect();
    Ok(CloneCoefficients {
        m,
        amplitudes,
        base,
        slope,
    })
}

/// The optimal cloning isometry V: H → K⊗K', where K carries the M clones
/// and K' the M auxiliary (anti-clone) qubits, both in the Dicke basis.
/// Row index k·(M+1) + k' for the pair (k, k'); columns follow the H order
/// |00⟩, |11⟩, |01⟩, |10⟩.
#[derive(Debug, Clone)]
pub struct CloningIsometry {
    m: usize,
    matrix: ComplexMatrix,
}

impl CloningIsometry {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Max-norm of V†V − 1₄.
    pub fn isometry_deviation(&self) -> f64 {
        let vtv = &self.matrix.adjoint() * &self.matrix;
        vtv.max_abs_diff(&ComplexMatrix::identity(4))
    }

    /// Apply V to a two-qubit input in the fixed basis order.
    pub fn apply(&self, input: &[C64; 4]) -> Vec<C64> {
        self.matrix.mul_vec(input)
    }

    /// Reduced state of the clone register after cloning |ψ, ψ⊥⟩, as an
    /// (M+1)×(M+1) Dicke-basis density matrix.
    fn clone_register_state(&self, angles: &BlochAngles) -> ComplexMatrix {
        let w = self.apply(&orthogonal_pair(angles));
        let n = self.m + 1;
        ComplexMatrix::from_fn(n, n, |k, l| {
            (0..n).map(|k2| w[k * n + k2] * w[l * n + k2].conj()).sum()
        })
    }

    /// Reduced state of the auxiliary register, with the collective spin
    /// flip undone so its qubits approximate |ψ⊥⟩.
    fn anticlone_register_state(&self, angles: &BlochAngles) -> Result<ComplexMatrix> {
        let w = self.apply(&orthogonal_pair(angles));
        let n = self.m + 1;
        let rho = ComplexMatrix::from_fn(n, n, |a, b| {
            (0..n).map(|k| w[k * n + a] * w[k * n + b].conj()).sum()
        });
        let s = spin_flip_dicke(self.m)?;
        Ok(&(&s.adjoint() * &rho) * &s)
    }

    /// Fidelity of one clone against |ψ⟩ for the input pair at Ω.
    /// Independent of Ω for this transformation — that is the point.
    pub fn single_clone_fidelity(&self, angles: &BlochAngles) -> Result<f64> {
        let rho = self.clone_register_state(angles);
        let single = collapse_to_single_qubit(self.m, &rho)?;
        let d = bloch_matrix(angles);
        let psi = [d[(0, 0)], d[(1, 0)]];
        Ok(quadratic_form(&single, &psi))
    }

    /// Fidelity of one auxiliary qubit against |ψ⊥⟩; matches the clone
    /// fidelity by the symmetry of the transformation.
    pub fn anticlone_fidelity(&self, angles: &BlochAngles) -> Result<f64> {
        let rho = self.anticlone_register_state(angles)?;
        let single = collapse_to_single_qubit(self.m, &rho)?;
        let d = bloch_matrix(angles);
        let psi_perp = [d[(0, 1)], d[(1, 1)]];
        Ok(quadratic_form(&single, &psi_perp))
    }
}

/// Trace an (M+1)×(M+1) Dicke-basis density matrix down to one qubit.
fn collapse_to_single_qubit(m: usize, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    let mut single = ComplexMatrix::zeros(2, 2);
    for k in 0..=m {
        for l in k.saturating_sub(1)..=(k + 1).min(m) {
            let t = reduced_qubit(m, k, l)?;
            let w = rho[(k, l)];
            for r in 0..2 {
                for c in 0..2 {
                    single[(r, c)] += w * t[(r, c)];
                }
            }
        }
    }
    Ok(single)
}

/// ⟨v|X|v⟩ for a 2×2 operator, returned as its (real) value.
fn quadratic_form(x: &ComplexMatrix, v: &[C64; 2]) -> f64 {
    let mut acc = C64::ZERO;
    for r in 0..2 {
        for c in 0..2 {
            acc += v[r].conj() * x[(r, c)] * v[c];
        }
    }
    acc.re
}

/// Build the optimal cloning isometry for M clones.
///
/// The diagonal columns (inputs |01⟩ and |10⟩) carry base ± slope ladders
/// over |M,k⟩⊗|M,k⟩; the off-diagonal columns (|00⟩ and |11⟩) carry the
/// lowering/raising ladders with weight 2·slope. Column phases are fixed so
/// that applying V to |ψ, ψ⊥⟩ and undoing the collective spin flip on the
/// auxiliary register reproduces the [`analytic_coefficients`] expansion.
pub fn build_isometry(m: usize) -> Result<CloningIsometry> {
    if !(1..=MAX_QUBITS).contains(&m) {
        return Err(Error::SizeOutOfRange {
            name: "m",
            value: m,
            min: 1,
            max: MAX_QUBITS,
        });
    }
    let coeffs = analytic_coefficients(m)?;
    let (base, slope) = (coeffs.base(), coeffs.slope());
    let n = m + 1;
    let mf = m as f64;
    let mut v = ComplexMatrix::zeros(n * n, 4);
    for k in 0..=m {
        let kf = k as f64;
        // |00⟩ → 2·slope Σ √(k(M−k+1)) |M,k⟩|M,k−1⟩
        if k >= 1 {
            v[(k * n + (k - 1), 0)] = C64::from(2.0 * slope * (kf * (mf - kf + 1.0)).sqrt());
        }
        // |11⟩ → −2·slope Σ √((M−k)(k+1)) |M,k⟩|M,k+1⟩
        if k < m {
            v[(k * n + (k + 1), 1)] = C64::from(-2.0 * slope * ((mf - kf) * (kf + 1.0)).sqrt());
        }
        // |01⟩ → −Σ (base + slope(2k−M)) |M,k⟩|M,k⟩
        v[(k * n + k, 2)] = C64::from(-(base + slope * (2.0 * kf - mf)));
        // |10⟩ → Σ (base − slope(2k−M)) |M,k⟩|M,k⟩
        v[(k * n + k, 3)] = C64::from(base - slope * (2.0 * kf - mf));
    }
    Ok(CloningIsometry { m, matrix: v })
}

/// Choi operator of the channel that applies the isometry and discards the
/// auxiliary register: χ entries are overlaps of the auxiliary states left
/// behind for each input/clone-label combination.
pub fn choi_from_isometry(isometry: &CloningIsometry) -> Result<ChoiOperator> {
    let dev = isometry.isometry_deviation();
    if dev > 1e-12 {
        return Err(Error::NotIsometry { deviation: dev });
    }
    let m = isometry.m;
    let n = m + 1;
    let v = &isometry.matrix;
    let dim = 4 * n;
    let mut chi = ComplexMatrix::zeros(dim, dim);
    for h_row in 0..4 {
        for k_row in 0..n {
            for h_col in 0..4 {
                for k_col in 0..n {
                    let mut sum = C64::ZERO;
                    for k2 in 0..n {
                        sum += v[(k_col * n + k2, h_col)].conj() * v[(k_row * n + k2, h_row)];
                    }
                    chi[(hk(h_row, k_row, m), hk(h_col, k_col, m))] = sum;
                }
            }
        }
    }
    Ok(ChoiOperator { m, matrix: chi })
}

/// Optimal mean clone fidelity from one orthogonal pair |ψ, ψ⊥⟩ into M
/// clones: (1 + √((M+2)/(3M)))/2.
pub fn fidelity_perp(m: usize) -> Result<f64> {
    if m < 1 {
        return Err(Error::Domain("clone count must be at least 1".into()));
    }
    let mf = m as f64;
    Ok(0.5 * (1.0 + ((mf + 2.0) / (3.0 * mf)).sqrt()))
}

/// Optimal mean clone fidelity from N identical copies of |ψ⟩ into M ≥ N
/// clones: (MN + M + N)/(M(N+2)).
pub fn fidelity_parallel(n: usize, m: usize) -> Result<f64> {
    if n < 1 {
        return Err(Error::Domain("copy count must be at least 1".into()));
    }
    if m < n {
        return Err(Error::Domain(format!(
            "clone count M = {m} must be at least the copy count N = {n}"
        )));
    }
    let (nf, mf) = (n as f64, m as f64);
    Ok((mf * nf + mf + nf) / (mf * (nf + 2.0)))
}

/// Optimal mean clone fidelity from N identical copies of |ψ⟩ plus a single
/// |ψ⊥⟩ into M ≥ N clones. Reduces to [`fidelity_perp`] at N = 1 and to a
/// perfect fidelity of 1 at N = M = 2.
pub fn fidelity_perp_general(n: usize, m: usize) -> Result<f64> {
    if n < 1 {
        return Err(Error::Domain("copy count must be at least 1".into()));
    }
    if m < n {
        return Err(Error::Domain(format!(
            "clone count M = {m} must be at least the copy count N = {n}"
        )));
    }
    let (ni, mi) = (n as i128, m as i128);
    let p = (ni - 1) * (ni * ni - 15 * ni - 18) + 8 * mi * (ni + 1) * (mi + 3 - ni);
    if p < 0 {
        return Err(Error::Domain(format!(
            "fidelity radicand is negative for N = {n}, M = {m}"
        )));
    }
    let (nf, mf) = (n as f64, m as f64);
    let root = (p as f64 / (nf + 2.0)).sqrt();
    Ok((nf + 1.0) / (nf + 3.0) + (3.0 * (nf - 1.0) + root) / (2.0 * mf * (nf + 3.0)))
}

/// Differences smaller than this count as a tie between the two fidelity
/// laws; a strict win must clear it.
const CROSSOVER_EPS: f64 = 1e-12;

/// Where trading one input copy for an orthogonal qubit overtakes identical
/// copies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossoverReport {
    pub n: usize,
    pub m_max: usize,
    /// Smallest M with a strict fidelity advantage, if any ≤ m_max.
    pub strict_at: Option<usize>,
    /// M at which the two laws agree to 1e-12, if any was seen.
    pub equality_at: Option<usize>,
}

/// Scan M = N+1 ..= m_max comparing N copies of |ψ⟩ plus one |ψ⊥⟩ against
/// N + 1 identical copies, recording the first tie and the first strict
/// advantage.
pub fn crossover(n: usize, m_max: usize) -> Result<CrossoverReport> {
    if n < 1 {
        return Err(Error::Domain("copy count must be at least 1".into()));
    }
    if m_max < n + 1 {
        return Err(Error::Domain(format!(
            "m_max = {m_max} leaves nothing to scan for N = {n}"
        )));
    }
    let mut report = CrossoverReport {
        n,
        m_max,
        strict_at: None,
        equality_at: None,
    };
    for m in (n + 1)..=m_max {
        let diff = fidelity_perp_general(n, m)? - fidelity_parallel(n + 1, m)?;
        if diff.abs() <= CROSSOVER_EPS {
            report.equality_at.get_or_insert(m);
        } else if diff > 0.0 {
            report.strict_at = Some(m);
            break;
        }
    }
    Ok(report)
}
