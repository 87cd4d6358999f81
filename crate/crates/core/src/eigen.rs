//! Lowest eigenpairs of the symmetric-definite banded pencil H·c = ε·S·c.
//!
//! S is Cholesky-factored, the standard problem L⁻¹HL⁻ᵀ is reduced to
//! tridiagonal form, and bisection brackets each requested eigenvalue.
//! Each bracket then seeds inverse iteration on the original banded pencil;
//! the final eigenvalue is the Rayleigh quotient of the converged vector.
//! Tridiagonal bisection alone is only accurate to ε_mach·‖L⁻¹HL⁻ᵀ‖, which
//! the steep grids near the nucleus make large.

use crate::banded::{dot, BandCholesky, BandLu, SymBandMatrix};
use crate::error::{Error, Result};
use crate::operators::OperatorPair;
use crate::tridiag::{bisect_eigenvalue, gershgorin_bounds, householder_tridiagonal};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub bisection_rel_tol: f64,
    pub max_inverse_iterations: usize,
    /// Refined eigenvalues closer than this (relative to max(1, |ε|)) are rejected.
    pub degeneracy_tol: f64,
    pub residual_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            bisection_rel_tol: 1e-14,
            max_inverse_iterations: 50,
            degeneracy_tol: 1e-12,
            residual_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenSolution {
    /// Ascending, hartree.
    pub eigenvalues: Vec<f64>,
    /// S-normalized coefficient vectors in the trimmed basis.
    pub vectors: Vec<Vec<f64>>,
    /// ‖Hc − εSc‖₂ / (‖H‖∞ ‖c‖₂).
    pub residual_norms: Vec<f64>,
}

impl EigenSolution {
    pub fn count(&self) -> usize {
        self.eigenvalues.len()
    }
}

pub fn solve_lowest(pair: &OperatorPair, k_states: usize) -> Result<EigenSolution> {
    solve_pencil(&pair.h, &pair.s, k_states, &SolverOptions::default())
}

/// L⁻¹ H L⁻ᵀ as a dense matrix.
pub fn standard_form(h: &SymBandMatrix, chol: &BandCholesky) -> Vec<Vec<f64>> {
    let n = h.dim();
    let dense_h = h.to_dense();
    // W = L⁻¹ H, built column by column; rows of Wᵀ are columns of W.
    let mut wt: Vec<Vec<f64>> = dense_h;
    for col in wt.iter_mut() {
        chol.solve_lower(col);
    }
    // C = L⁻¹ Wᵀ, again column by column, using the columns of Wᵀ (rows of W).
    let mut c = vec![vec![0.0; n]; n];
    let mut col = vec![0.0; n];
    for j in 0..n {
        for i in 0..n {
            col[i] = wt[i][j];
        }
        chol.solve_lower(&mut col);
        for i in 0..n {
            c[j][i] = col[i];
        }
    }
    // Symmetrize round-off.
    for i in 0..n {
        for j in 0..i {
            let m = 0.5 * (c[i][j] + c[j][i]);
            c[i][j] = m;
            c[j][i] = m;
        }
    }
    c
}

pub fn solve_pencil(h: &SymBandMatrix, s: &SymBandMatrix, k_states: usize, opts: &SolverOptions) -> Result<EigenSolution> {
    let n = h.dim();
    if s.dim() != n {
        return Err(Error::DimensionMismatch(format!("H is {n}x{n}, S is {}x{}", s.dim(), s.dim())));
    }
    if k_states == 0 || k_states > n {
        return Err(Error::InvalidInput(format!("requested {k_states} states from a dimension-{n} problem")));
    }
    let chol = BandCholesky::factor(s)?;
    let (d, e) = householder_tridiagonal(standard_form(h, &chol));
    let bounds = gershgorin_bounds(&d, &e);
    let estimates: Vec<f64> = (0..k_states)
        .map(|j| bisect_eigenvalue(&d, &e, j, opts.bisection_rel_tol, bounds))
        .collect();

    check_separation(&estimates, opts)?;

    let h_norm = h.norm_inf().max(f64::MIN_POSITIVE);
    let spectral_scale = bounds.0.abs().max(bounds.1.abs()).max(1.0);
    let mut eigenvalues = Vec::with_capacity(k_states);
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(k_states);
    let mut residual_norms = Vec::with_capacity(k_states);
    for (j, &estimate) in estimates.iter().enumerate() {
        let (value, vec) = refine(h, s, estimate, j, &vectors, spectral_scale, opts)?;
        let hv = h.matvec(&vec);
        let sv = s.matvec(&vec);
        let r: f64 = hv.iter().zip(&sv).map(|(a, b)| (a - value * b).powi(2)).sum::<f64>().sqrt();
        let c_norm = dot(&vec, &vec).sqrt();
        residual_norms.push(r / (h_norm * c_norm));
        eigenvalues.push(value);
        vectors.push(vec);
    }
    check_separation(&eigenvalues, opts)?;
    if let Some((i, r)) = residual_norms.iter().enumerate().find(|(_, &r)| !(r <= opts.residual_tol)) {
        return Err(Error::NoConvergence(format!("state {i} residual {r:e} exceeds {:e}", opts.residual_tol)));
    }
    Ok(EigenSolution { eigenvalues, vectors, residual_norms })
}

fn check_separation(values: &[f64], opts: &SolverOptions) -> Result<()> {
    for w in values.windows(2) {
        if w[1] - w[0] <= opts.degeneracy_tol * w[0].abs().max(w[1].abs()).max(1.0) {
            return Err(Error::Degenerate(w[0], w[1]));
        }
    }
    Ok(())
}

/// Inverse iteration on (H − σS) from a bisection estimate, projecting out
/// already-converged vectors in the S inner product.
fn refine(
    h: &SymBandMatrix,
    s: &SymBandMatrix,
    estimate: f64,
    index: usize,
    previous: &[Vec<f64>],
    scale: f64,
    opts: &SolverOptions,
) -> Result<(f64, Vec<f64>)> {
    let n = h.dim();
    let mut shift = estimate;
    let mut lu = None;
    for attempt in 0..8 {
        match BandLu::factor(&h.add_scaled(-shift, s)?) {
            Ok(f) => {
                lu = Some(f);
                break;
            }
            Err(_) => shift += f64::EPSILON * scale * 4f64.powi(attempt),
        }
    }
    let lu = lu.ok_or_else(|| Error::NoConvergence(format!("shifted pencil singular near {estimate}")))?;

    let mut x = start_vector(n, index);
    normalize_s(s, &mut x);
    let mut value = s_rayleigh(h, s, &x);
    let mut converged = false;
    let mut last_change = f64::INFINITY;
    for _ in 0..opts.max_inverse_iterations {
        let mut y = s.matvec(&x);
        lu.solve(&mut y);
        for p in previous {
            let sp = s.matvec(p);
            let c = dot(&y, &sp);
            for (yi, pi) in y.iter_mut().zip(p) {
                *yi -= c * pi;
            }
        }
        normalize_s(s, &mut y);
        // Keep the orientation of the previous iterate so the change measures the
        // direction only.
        if s.bilinear(&x, &y) < 0.0 {
            y.iter_mut().for_each(|v| *v = -*v);
        }
        let size = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let change = y.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let next = s_rayleigh(h, s, &y);
        let value_change = (next - value).abs();
        x = y;
        value = next;
        let settled = value_change <= 4.0 * f64::EPSILON * value.abs().max(1e-3);
        // Stagnation: the vector stopped improving at round-off level for this gap.
        let stalled = change >= 0.5 * last_change && change <= 1e-8 * size;
        if (change <= 1e-12 * size.max(1.0) && settled) || stalled {
            converged = true;
            break;
        }
        last_change = change;
    }
    fix_sign(&mut x);
    if !converged {
        return Err(Error::NoConvergence(format!(
            "inverse iteration for state {index} did not settle in {} sweeps",
            opts.max_inverse_iterations
        )));
    }
    Ok((value, x))
}

fn start_vector(n: usize, seed: usize) -> Vec<f64> {
    // Fixed LCG so solves are reproducible.
    let mut state: u64 = 0x9E37_79B9_7F4A_7C15 ^ (seed as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    (0..n)
        .map(|_| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            0.5 + ((state >> 11) as f64) / ((1u64 << 53) as f64)
        })
        .collect()
}

fn normalize_s(s: &SymBandMatrix, x: &mut [f64]) {
    let norm = s.bilinear(x, x).sqrt();
    for v in x.iter_mut() {
        *v /= norm;
    }
}

/// Largest-magnitude component made positive.
fn fix_sign(x: &mut [f64]) {
    let (mut best, mut sign) = (0.0, 1.0);
    for &v in x.iter() {
        if v.abs() > best {
            best = v.abs();
            sign = v.signum();
        }
    }
    if sign < 0.0 {
        for v in x.iter_mut() {
            *v = -*v;
        }
    }
}

fn s_rayleigh(h: &SymBandMatrix, s: &SymBandMatrix, x: &[f64]) -> f64 {
    h.bilinear(x, x) / s.bilinear(x, x)
}

/// ⟨φ|h|φ⟩ = cᵀHc / cᵀSc for a converged state.
pub fn radial_expectation(solution: &EigenSolution, pair: &OperatorPair, state: usize) -> Result<f64> {
    let c = solution.vectors.get(state).ok_or_else(|| {
        Error::InvalidInput(format!("state {state} out of range ({} converged)", solution.count()))
    })?;
    if c.len() != pair.dimension() {
        return Err(Error::DimensionMismatch(format!("vector {} vs basis {}", c.len(), pair.dimension())));
    }
    Ok(s_rayleigh(&pair.h, &pair.s, c))
}
