use super::AtomSpec;
use crate::error::{Error, Result};

/// The m printed for magnesium. It is inconsistent with the printed
/// ionization potential; the catalog carries m = 3 instead.
pub const MG_PRINTED_M: u32 = 2;

const ENTRIES: [(&str, u32, u32); 11] = [
    ("He", 2, 2),
    ("Li", 3, 2),
    ("Be", 4, 3),
    ("B", 5, 3),
    ("C", 6, 4),
    ("N", 7, 4),
    ("O", 8, 4),
    ("F", 9, 5),
    ("Ne", 10, 5),
    ("Na", 11, 2),
    ("Mg", 12, 3),
];

/// Neutral atoms He through Mg with their m/n factors.
pub fn atom_catalog() -> Vec<AtomSpec> {
    ENTRIES
        .iter()
        .map(|&(name, z, m)| AtomSpec::aufbau(name, z, z, m).expect("catalog entries are valid"))
        .collect()
}

pub fn catalog_atom(name: &str) -> Result<AtomSpec> {
    atom_catalog()
        .into_iter()
        .find(|a| a.name.eq_ignore_ascii_case(name.trim()))
        .ok_or_else(|| Error::UnknownAtom(name.to_string()))
}
