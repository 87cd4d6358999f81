//! Labelled spectra, m/n scaling, ionization potentials and the three
//! reproduction tables.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bspline::{make_knots, make_quadrature, KnotBasis, KnotKind, QuadratureRule};
use crate::eigen::{solve_lowest, EigenSolution};
use crate::error::{Error, Result};
use crate::model::{catalog_atom, state_label, AtomSpec, PseudopotentialModel};
use crate::operators::{assemble, OperatorPair};
use crate::units::UnitSystem;

/// Radial box and discretization parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasisConfig {
    pub n_splines: usize,
    pub order: usize,
    pub r_max: f64,
    pub knots: KnotKind,
    /// Gauss–Legendre nodes per breakpoint interval; `None` means 2·order.
    pub nodes_per_interval: Option<usize>,
}

impl Default for BasisConfig {
    fn default() -> Self {
        BasisConfig { n_splines: 600, order: 10, r_max: 200.0, knots: KnotKind::default(), nodes_per_interval: None }
    }
}

impl BasisConfig {
    pub fn quad_nodes(&self) -> usize {
        self.nodes_per_interval.unwrap_or(2 * self.order)
    }
}

/// A basis with its quadrature rule; shared by every channel solve.
#[derive(Debug, Clone)]
pub struct RadialSolver {
    basis: KnotBasis,
    quad: QuadratureRule,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LabeledState {
    pub nu: u32,
    pub l: u32,
    /// ⟨φ|h|φ⟩ in hartree.
    pub raw_energy: f64,
    /// (m/n)·raw_energy in hartree.
    pub scaled_energy: f64,
    pub model: PseudopotentialModel,
}

impl LabeledState {
    pub fn label(&self) -> String {
        state_label(self.nu, self.l)
    }
}

/// One computed table row in eV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub label: String,
    pub value_ev: f64,
}

/// Excited helium states listed after the ground row.
pub const HELIUM_EXCITED: [(u32, u32); 5] = [(2, 0), (2, 1), (3, 0), (3, 1), (3, 2)];
pub const LITHIUM_STATES: [(u32, u32); 9] = [(2, 0), (2, 1), (3, 0), (3, 1), (3, 2), (4, 0), (4, 1), (4, 2), (4, 3)];

impl RadialSolver {
    pub fn new(config: &BasisConfig) -> Result<Self> {
        let basis = make_knots(config.r_max, config.n_splines, config.order, config.knots)?;
        let quad = make_quadrature(&basis, config.quad_nodes())?;
        Ok(RadialSolver { basis, quad })
    }

    pub fn paper() -> Self {
        Self::new(&BasisConfig::default()).expect("default basis is valid")
    }

    pub fn basis(&self) -> &KnotBasis {
        &self.basis
    }

    pub fn quadrature(&self) -> &QuadratureRule {
        &self.quad
    }

    pub fn assemble(&self, atom: &AtomSpec, l: u32, model: PseudopotentialModel) -> Result<OperatorPair> {
        assemble(&self.basis, &self.quad, atom, l, model)
    }

    pub fn solve_raw(&self, atom: &AtomSpec, l: u32, model: PseudopotentialModel, count: usize) -> Result<(OperatorPair, EigenSolution)> {
        let pair = self.assemble(atom, l, model)?;
        let sol = solve_lowest(&pair, count)?;
        Ok((pair, sol))
    }

    /// Lowest `count` states of one l channel, labelled ν = l+1, l+2, … and m/n-scaled.
    pub fn solve_channel(&self, atom: &AtomSpec, model: PseudopotentialModel, l: u32, count: usize) -> Result<Vec<LabeledState>> {
        if count == 0 {
            return Err(Error::InvalidInput("at least one state must be requested".into()));
        }
        let (_, sol) = self.solve_raw(atom, l, model, count)?;
        let mn = atom.mn_ratio();
        Ok(sol
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(i, &e)| LabeledState { nu: l + 1 + i as u32, l, raw_energy: e, scaled_energy: mn * e, model })
            .collect())
    }

    /// A single labelled state (nu, l).
    pub fn state(&self, atom: &AtomSpec, model: PseudopotentialModel, nu: u32, l: u32) -> Result<LabeledState> {
        if nu < l + 1 {
            return Err(Error::InvalidInput(format!("nu = {nu} must be at least l + 1 = {}", l + 1)));
        }
        let states = self.solve_channel(atom, model, l, (nu - l) as usize)?;
        Ok(*states.last().expect("count >= 1"))
    }

    /// 4·|ε₁ₛ| for a two-electron atom, in hartree.
    pub fn helium_ground_binding(&self, atom: &AtomSpec, model: PseudopotentialModel) -> Result<f64> {
        let s = self.state(atom, model, 1, 0)?;
        Ok(4.0 * s.raw_energy.abs())
    }

    /// Ionization potential in eV: −(m/n)·ε of the valence state, or for two
    /// electrons 4·|ε₁ₛ| − Z²/2.
    pub fn ionization_potential(&self, atom: &AtomSpec, model: PseudopotentialModel, units: UnitSystem) -> Result<f64> {
        atom.validate()?;
        if atom.n_electrons == 2 {
            let z = f64::from(atom.z);
            let binding = self.helium_ground_binding(atom, model)?;
            return Ok(units.to_ev(binding - 0.5 * z * z));
        }
        let s = self.state(atom, model, atom.valence_nu, atom.valence_l)?;
        Ok(units.to_ev(-s.scaled_energy))
    }

    /// Ionization potentials for a list of atoms, in input order.
    pub fn ionization_table(&self, atoms: &[AtomSpec], model: PseudopotentialModel, units: UnitSystem) -> Result<Vec<TableRow>> {
        atoms
            .par_iter()
            .map(|a| Ok(TableRow { label: a.name.clone(), value_ev: self.ionization_potential(a, model, units)? }))
            .collect()
    }

    /// Ground binding 4·|ε₁ₛ| followed by frozen-core excited rows
    /// Z²/2 + |ε_{νl}|, in eV.
    pub fn helium_binding_table(&self, model: PseudopotentialModel, units: UnitSystem) -> Result<Vec<TableRow>> {
        require_screened(model)?;
        let he = catalog_atom("He")?;
        let core = 0.5 * f64::from(he.z * he.z);
        let channels: Vec<Vec<LabeledState>> =
            (0..3u32).into_par_iter().map(|l| self.solve_channel(&he, model, l, (3 - l) as usize)).collect::<Result<_>>()?;
        let level = |nu: u32, l: u32| channels[l as usize][(nu - l - 1) as usize].raw_energy;
        let mut rows = vec![TableRow { label: "1s".into(), value_ev: units.to_ev(4.0 * level(1, 0).abs()) }];
        for (nu, l) in HELIUM_EXCITED {
            rows.push(TableRow { label: state_label(nu, l), value_ev: units.to_ev(core + level(nu, l).abs()) });
        }
        Ok(rows)
    }

    /// m/n-scaled lithium levels 2s … 4f in eV (negative).
    pub fn lithium_spectrum(&self, model: PseudopotentialModel, units: UnitSystem) -> Result<Vec<TableRow>> {
        require_screened(model)?;
        let li = catalog_atom("Li")?;
        let channels: Vec<Vec<LabeledState>> =
            (0..4u32).into_par_iter().map(|l| self.solve_channel(&li, model, l, (4 - l) as usize)).collect::<Result<_>>()?;
        Ok(LITHIUM_STATES
            .iter()
            .map(|&(nu, l)| {
                let s = channels[l as usize][(nu - l - 1) as usize];
                TableRow { label: s.label(), value_ev: units.to_ev(s.scaled_energy) }
            })
            .collect())
    }
}

fn require_screened(model: PseudopotentialModel) -> Result<()> {
    if model == PseudopotentialModel::BareCoulomb {
        return Err(Error::InvalidInput("table builders need a screened model (symmetry or central)".into()));
    }
    Ok(())
}
