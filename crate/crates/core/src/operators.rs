//! Galerkin assembly of the radial Hamiltonian and overlap for one l channel.
//!
//! H[i][j] = ½∫B′ᵢB′ⱼ dr + ∫BᵢBⱼ [l(l+1)/(2r²) + V(r)] dr and S[i][j] = ∫BᵢBⱼ dr
//! over the trimmed basis. The kinetic term is in integrated-by-parts form;
//! its boundary terms vanish because every retained spline is zero at 0 and r_max.

use std::io::{self, Write};

use crate::banded::SymBandMatrix;
use crate::bspline::{KnotBasis, QuadratureRule};
use crate::error::{Error, Result};
use crate::model::{AtomSpec, PseudopotentialModel, RadialPotential};

/// Banded Hamiltonian/overlap pair for a single (atom, l, model) channel.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorPair {
    pub h: SymBandMatrix,
    pub s: SymBandMatrix,
    pub channel_l: u32,
    pub model: PseudopotentialModel,
    pub atom: AtomSpec,
}

/// The individual Galerkin terms, kept separate for diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorTerms {
    pub kinetic: SymBandMatrix,
    pub centrifugal: SymBandMatrix,
    pub potential: SymBandMatrix,
    pub overlap: SymBandMatrix,
}

impl OperatorPair {
    pub fn dimension(&self) -> usize {
        self.h.dim()
    }

    pub fn bandwidth(&self) -> usize {
        self.h.bandwidth()
    }

    /// Writes H then S in the plain-text banded layout of [`SymBandMatrix::write_text`].
    pub fn write_text<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(
            w,
            "# atom={} Z={} n={} l={} model={}",
            self.atom.name, self.atom.z, self.atom.n_electrons, self.channel_l, self.model
        )?;
        self.h.write_text("H", &mut w)?;
        self.s.write_text("S", &mut w)
    }
}

/// (dimension, bandwidth) of an assembled pair.
pub fn band_profile(pair: &OperatorPair) -> (usize, usize) {
    (pair.dimension(), pair.bandwidth())
}

fn check_rule(basis: &KnotBasis, quad: &QuadratureRule) -> Result<()> {
    if quad.breakpoints() != basis.breakpoints() {
        return Err(Error::DimensionMismatch(format!(
            "quadrature built on {} intervals, basis has {}",
            quad.n_intervals(),
            basis.n_intervals()
        )));
    }
    Ok(())
}

/// Assembles every term with weight functions evaluated at the rule's nodes.
pub fn assemble_terms(
    basis: &KnotBasis,
    quad: &QuadratureRule,
    l: u32,
    potential: &RadialPotential,
) -> Result<OperatorTerms> {
    check_rule(basis, quad)?;
    let dim = basis.active_len();
    let bw = basis.order() - 1;
    let mut kinetic = SymBandMatrix::zeros(dim, bw);
    let mut centrifugal = SymBandMatrix::zeros(dim, bw);
    let mut pot = SymBandMatrix::zeros(dim, bw);
    let mut overlap = SymBandMatrix::zeros(dim, bw);
    let barrier = 0.5 * f64::from(l) * f64::from(l + 1);
    let last_active = basis.n_splines() - 2;
    for interval in 0..basis.n_intervals() {
        for node in quad.interval_nodes(interval) {
            let r = node.r;
            let w = node.weight;
            let local = basis.local_basis_in(interval, r);
            let cent = barrier / (r * r);
            let v = potential.eval(r);
            for a in 0..local.len {
                let i = local.first + a;
                if i == 0 || i > last_active {
                    continue;
                }
                let (bi, dbi) = (local.values[a], local.derivs[a]);
                for b in 0..=a {
                    let j = local.first + b;
                    if j == 0 {
                        continue;
                    }
                    let (bj, dbj) = (local.values[b], local.derivs[b]);
                    let prod = w * bi * bj;
                    kinetic.add_lower(i - 1, j - 1, 0.5 * w * dbi * dbj);
                    centrifugal.add_lower(i - 1, j - 1, cent * prod);
                    pot.add_lower(i - 1, j - 1, v * prod);
                    overlap.add_lower(i - 1, j - 1, prod);
                }
            }
        }
    }
    Ok(OperatorTerms { kinetic, centrifugal, potential: pot, overlap })
}

pub fn assemble(
    basis: &KnotBasis,
    quad: &QuadratureRule,
    atom: &AtomSpec,
    l: u32,
    model: PseudopotentialModel,
) -> Result<OperatorPair> {
    atom.validate()?;
    let potential = RadialPotential::new(model, atom, l)?;
    let terms = assemble_terms(basis, quad, l, &potential)?;
    let h = terms
        .kinetic
        .add_scaled(1.0, &terms.centrifugal)?
        .add_scaled(1.0, &terms.potential)?;
    Ok(OperatorPair { h, s: terms.overlap, channel_l: l, model, atom: atom.clone() })
}
