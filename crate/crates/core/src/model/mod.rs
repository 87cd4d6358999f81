//! Closed-form model mathematics: partition functions, effective charges,
//! the two screened potentials and the hydrogenic oracle.

mod catalog;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use catalog::{atom_catalog, catalog_atom, MG_PRINTED_M};

/// One occupied subshell of a ground configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subshell {
    pub nu: u32,
    pub l: u32,
    pub occupancy: u32,
}

const SPECTROSCOPIC: [char; 8] = ['s', 'p', 'd', 'f', 'g', 'h', 'i', 'k'];

/// Spectroscopic letter for an angular momentum, `l` for anything past `k`.
pub fn l_letter(l: u32) -> char {
    SPECTROSCOPIC.get(l as usize).copied().unwrap_or('l')
}

/// State label such as `2p`.
pub fn state_label(nu: u32, l: u32) -> String {
    format!("{nu}{}", l_letter(l))
}

/// Parses a state label such as `3d` into `(nu, l)`.
pub fn parse_state_label(label: &str) -> Result<(u32, u32)> {
    let label = label.trim();
    let split = label
        .find(|c: char| !c.is_ascii_digit())
        .ok_or_else(|| Error::InvalidInput(format!("state label `{label}` has no orbital letter")))?;
    let (digits, letter) = label.split_at(split);
    let nu: u32 = digits
        .parse()
        .map_err(|_| Error::InvalidInput(format!("state label `{label}` has no principal number")))?;
    let mut chars = letter.chars();
    let c = chars.next().map(|c| c.to_ascii_lowercase());
    if chars.next().is_some() {
        return Err(Error::InvalidInput(format!("malformed state label `{label}`")));
    }
    let l = SPECTROSCOPIC
        .iter()
        .position(|&s| Some(s) == c)
        .ok_or_else(|| Error::InvalidInput(format!("unknown orbital letter in `{label}`")))? as u32;
    if nu < l + 1 {
        return Err(Error::InvalidInput(format!("state `{label}` violates nu >= l + 1")));
    }
    Ok((nu, l))
}

/// An n-electron atom or ion together with its permutation count `m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomSpec {
    pub name: String,
    pub z: u32,
    pub n_electrons: u32,
    pub valence_nu: u32,
    pub valence_l: u32,
    /// Number of non-vanishing integrals among the n! permutations.
    pub m_permutations: u32,
    pub ground_config: Vec<Subshell>,
}

impl AtomSpec {
    pub fn new(
        name: impl Into<String>,
        z: u32,
        m_permutations: u32,
        ground_config: Vec<Subshell>,
        valence: (u32, u32),
    ) -> Result<Self> {
        let n_electrons: u32 = ground_config.iter().map(|s| s.occupancy).sum();
        let atom = AtomSpec {
            name: name.into(),
            z,
            n_electrons,
            valence_nu: valence.0,
            valence_l: valence.1,
            m_permutations,
            ground_config,
        };
        atom.validate()?;
        Ok(atom)
    }

    /// Builds the ground configuration by Madelung filling; the valence
    /// subshell is the last one filled.
    pub fn aufbau(name: impl Into<String>, z: u32, n_electrons: u32, m_permutations: u32) -> Result<Self> {
        if n_electrons == 0 {
            return Err(Error::InvalidInput("an atom needs at least one electron".into()));
        }
        let mut config = Vec::new();
        let mut left = n_electrons;
        for (nu, l) in madelung_order() {
            if left == 0 {
                break;
            }
            let occ = left.min(2 * (2 * l + 1));
            config.push(Subshell { nu, l, occupancy: occ });
            left -= occ;
        }
        let last = *config.last().expect("at least one subshell");
        Self::new(name, z, m_permutations, config, (last.nu, last.l))
    }

    pub fn validate(&self) -> Result<()> {
        if self.z == 0 {
            return Err(Error::InvalidInput("nuclear charge must be positive".into()));
        }
        if self.n_electrons == 0 {
            return Err(Error::InvalidInput("electron count must be positive".into()));
        }
        if self.m_permutations == 0 || self.m_permutations > self.n_electrons {
            return Err(Error::InvalidInput(format!(
                "m = {} must lie in 1..={}",
                self.m_permutations, self.n_electrons
            )));
        }
        if self.valence_nu < self.valence_l + 1 {
            return Err(Error::InvalidInput(format!(
                "valence state nu = {} l = {} violates nu >= l + 1",
                self.valence_nu, self.valence_l
            )));
        }
        let occ: u32 = self.ground_config.iter().map(|s| s.occupancy).sum();
        if occ != self.n_electrons {
            return Err(Error::InvalidInput(format!(
                "ground configuration holds {occ} electrons, expected {}",
                self.n_electrons
            )));
        }
        Ok(())
    }

    /// The m/n factor applied to single-particle expectation values.
    pub fn mn_ratio(&self) -> f64 {
        f64::from(self.m_permutations) / f64::from(self.n_electrons)
    }

    pub fn with_m(mut self, m: u32) -> Result<Self> {
        self.m_permutations = m;
        self.validate()?;
        Ok(self)
    }

    pub fn valence_label(&self) -> String {
        state_label(self.valence_nu, self.valence_l)
    }

    pub fn config_string(&self) -> String {
        self.ground_config
            .iter()
            .map(|s| format!("{}{}", state_label(s.nu, s.l), s.occupancy))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn madelung_order() -> Vec<(u32, u32)> {
    let mut shells: Vec<(u32, u32)> = (1..=7u32).flat_map(|nu| (0..nu.min(4)).map(move |l| (nu, l))).collect();
    shells.sort_by_key(|&(nu, l)| (nu + l, nu));
    shells
}

/// Angular-momentum channel of the screened electron in an n-electron system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymmetryChannel {
    pub l: u32,
    pub n_electrons: u32,
}

impl SymmetryChannel {
    pub fn new(l: u32, n_electrons: u32) -> Result<Self> {
        if n_electrons == 0 {
            return Err(Error::InvalidInput("electron count must be positive".into()));
        }
        Ok(SymmetryChannel { l, n_electrons })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PseudopotentialModel {
    /// Symmetry-dependent screening: a pure Coulomb tail with an l-dependent charge.
    SymmetryDependent,
    /// The earlier central screening potential with a repulsive core.
    CentralScreening,
    BareCoulomb,
}

impl PseudopotentialModel {
    pub fn short_name(self) -> &'static str {
        match self {
            PseudopotentialModel::SymmetryDependent => "symmetry",
            PseudopotentialModel::CentralScreening => "central",
            PseudopotentialModel::BareCoulomb => "bare",
        }
    }
}

impl fmt::Display for PseudopotentialModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for PseudopotentialModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "symmetry" | "a" | "symmetry-dependent" => Ok(PseudopotentialModel::SymmetryDependent),
            "central" | "b" | "central-screening" => Ok(PseudopotentialModel::CentralScreening),
            "bare" | "coulomb" | "bare-coulomb" => Ok(PseudopotentialModel::BareCoulomb),
            other => Err(Error::Config(format!("unknown model `{other}` (symmetry|central|bare)"))),
        }
    }
}

/// Symmetry-dependent share of the pair correlation energy held by the
/// screened electron.
pub fn partition_alpha(channel: SymmetryChannel) -> Result<f64> {
    let n = channel.n_electrons;
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "partition function needs at least two electrons, got {n}"
        )));
    }
    let l = f64::from(channel.l);
    let n = f64::from(n);
    let li = l / (n - 1.0);
    let lj = if channel.l == 0 { 0.0 } else { (l - 1.0) / (n + 2.0) };
    Ok((2.0 * li + 1.0) / (2.0 * li + 2.0 * lj + 2.0))
}

/// Radial partition r_i² / (r_i² + r_j²). Reference operation; not used by the solvers.
pub fn classical_alpha(r_i: f64, r_j: f64) -> Result<f64> {
    if !(r_i >= 0.0 && r_j >= 0.0) {
        return Err(Error::InvalidInput("radii must be non-negative".into()));
    }
    if r_i == 0.0 && r_j == 0.0 {
        return Err(Error::InvalidInput("classical partition undefined at r_i = r_j = 0".into()));
    }
    let (a, b) = (r_i * r_i, r_j * r_j);
    Ok(a / (a + b))
}

/// Single pair term −Z/r_i + α/√(r_i² + r_j²).
pub fn pair_potential(r_i: f64, r_j: f64, z: f64, alpha: f64) -> Result<f64> {
    if !(r_i > 0.0) {
        return Err(Error::InvalidInput(format!("r_i must be positive, got {r_i}")));
    }
    Ok(-z / r_i + alpha / (r_i * r_i + r_j * r_j).sqrt())
}

/// Z_eff = Z − (n−1)^{2/3} α^{2/3} Z^{1/3}; Z itself for a single electron.
pub fn effective_charge(z: f64, n_electrons: u32, l: u32) -> Result<f64> {
    if !(z >= 1.0) {
        return Err(Error::InvalidInput(format!("nuclear charge must be >= 1, got {z}")));
    }
    if n_electrons == 0 {
        return Err(Error::InvalidInput("electron count must be positive".into()));
    }
    if n_electrons == 1 {
        return Ok(z);
    }
    let alpha = partition_alpha(SymmetryChannel::new(l, n_electrons)?)?;
    let others = f64::from(n_electrons - 1);
    let z_eff = z - (others * alpha).powf(2.0 / 3.0) * z.cbrt();
    if z_eff <= 0.0 {
        return Err(Error::ModelDomain(format!(
            "effective charge {z_eff:.6} for Z = {z}, n = {n_electrons}, l = {l} is not binding"
        )));
    }
    Ok(z_eff)
}

/// Exact Coulomb level −Z²/(2ν²) in hartree.
pub fn hydrogenic_energy(z_eff: f64, nu: u32) -> Result<f64> {
    if !(z_eff > 0.0) {
        return Err(Error::InvalidInput(format!("effective charge must be positive, got {z_eff}")));
    }
    if nu == 0 {
        return Err(Error::InvalidInput("principal quantum number starts at 1".into()));
    }
    let nu = f64::from(nu);
    Ok(-z_eff * z_eff / (2.0 * nu * nu))
}

/// Averaged screening factor 1 − [27/25 + (3/5)Zr − 6/(125Zr)]·e^{−2Zr}.
///
/// Diverges like 6/(125Zr) at the origin, which gives the central
/// screening potential its 1/r² repulsive core.
pub fn fhat(r: f64, z: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::InvalidInput(format!("fhat is evaluated at r > 0 only, got {r}")));
    }
    if !(z >= 1.0) {
        return Err(Error::InvalidInput(format!("nuclear charge must be >= 1, got {z}")));
    }
    Ok(fhat_unchecked(z * r))
}

#[inline]
fn fhat_unchecked(zr: f64) -> f64 {
    1.0 - (27.0 / 25.0 + 0.6 * zr - 6.0 / (125.0 * zr)) * (-2.0 * zr).exp()
}

/// A potential bound to one (model, atom, l) channel, ready for repeated evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialPotential {
    /// −charge/r.
    Coulomb { charge: f64 },
    /// −Z/r + strength·fhat(r, Z)/r.
    Central { z: f64, strength: f64 },
}

impl RadialPotential {
    pub fn new(model: PseudopotentialModel, atom: &AtomSpec, l: u32) -> Result<Self> {
        let z = f64::from(atom.z);
        match model {
            PseudopotentialModel::SymmetryDependent => Ok(RadialPotential::Coulomb {
                charge: effective_charge(z, atom.n_electrons, l)?,
            }),
            PseudopotentialModel::CentralScreening => Ok(RadialPotential::Central {
                z,
                strength: central_strength(z, atom.n_electrons),
            }),
            PseudopotentialModel::BareCoulomb => Ok(RadialPotential::Coulomb { charge: z }),
        }
    }

    #[inline]
    pub fn eval(&self, r: f64) -> f64 {
        match *self {
            RadialPotential::Coulomb { charge } => -charge / r,
            RadialPotential::Central { z, strength } => (-z + strength * fhat_unchecked(z * r)) / r,
        }
    }
}

/// Prefactor (n−1)^{2/5} (Z/2)^{3/5} of the central screening term.
pub fn central_strength(z: f64, n_electrons: u32) -> f64 {
    if n_electrons <= 1 {
        return 0.0;
    }
    f64::from(n_electrons - 1).powf(0.4) * (z / 2.0).powf(0.6)
}

/// V(r) in hartree for the given model, atom and angular momentum.
pub fn potential_value(model: PseudopotentialModel, r: f64, atom: &AtomSpec, l: u32) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::InvalidInput(format!("potential is evaluated at r > 0 only, got {r}")));
    }
    Ok(RadialPotential::new(model, atom, l)?.eval(r))
}
