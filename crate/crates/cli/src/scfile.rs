//! Structure-constants input files.
//!
//! ```json
//! {
//!   "n": 3,
//!   "complete_antisymmetric": false,
//!   "entries": [
//!     { "k": 3, "i": 1, "j": 2, "num": 1, "den": 1 },
//!     { "k": 3, "i": 2, "j": 1, "num": -1 }
//!   ]
//! }
//! ```
//!
//! Each entry sets `C^k_{ij} = num/den` with one-based indices; `den`
//! defaults to 1 and unlisted entries are zero. With
//! `complete_antisymmetric: true` every entry whose mirror `(k, j, i)` is
//! absent gets the mirror `-num/den`; a mirror that is present must agree.
//! Otherwise the table is taken literally. The result must pass
//! antisymmetry and Jacobi validation.

use std::collections::BTreeMap;
use std::path::Path;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use symord_core::{Rational, StructureConstants};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    pub n: usize,
    #[serde(default)]
    pub complete_antisymmetric: bool,
    #[serde(default)]
    pub entries: Vec<Entry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub k: usize,
    pub i: usize,
    pub j: usize,
    pub num: i64,
    #[serde(default = "one")]
    pub den: i64,
}

fn one() -> i64 {
    1
}

pub fn load_structure_constants(path: &Path) -> Result<StructureConstants, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    let file: StructureFile =
        serde_json::from_str(&text).map_err(|source| CliError::Parse { path: path.into(), source })?;
    file.to_constants().map_err(|message| CliError::BadTable { path: path.into(), message })
}

impl StructureFile {
    pub fn to_constants(&self) -> Result<StructureConstants, String> {
        let n = self.n;
        if n == 0 {
            return Err("n must be positive".into());
        }
        let mut given: BTreeMap<(usize, usize, usize), Rational> = BTreeMap::new();
        for e in &self.entries {
            for (name, v) in [("k", e.k), ("i", e.i), ("j", e.j)] {
                if v == 0 || v > n {
                    return Err(format!("entry ({},{},{}): {name} outside 1..={n}", e.k, e.i, e.j));
                }
            }
            if e.den == 0 {
                return Err(format!("entry ({},{},{}): zero denominator", e.k, e.i, e.j));
            }
            let key = (e.k - 1, e.i - 1, e.j - 1);
            let value = symord_core::rational::frac(e.num, e.den);
            if given.insert(key, value).is_some() {
                return Err(format!("entry ({},{},{}) given twice", e.k, e.i, e.j));
            }
        }
        let mut table = given.clone();
        if self.complete_antisymmetric {
            for (&(k, i, j), v) in &given {
                match given.get(&(k, j, i)) {
                    Some(m) if *m != -v.clone() => {
                        return Err(format!(
                            "entries ({},{},{}) and ({},{},{}) are not antisymmetric",
                            k + 1,
                            i + 1,
                            j + 1,
                            k + 1,
                            j + 1,
                            i + 1
                        ))
                    }
                    Some(_) => {}
                    None => {
                        table.insert((k, j, i), -v.clone());
                    }
                }
            }
        }
        let mut sc = StructureConstants::zero(n).map_err(|e| e.to_string())?;
        for ((k, i, j), v) in table {
            if !v.is_zero() {
                sc.set(k, i, j, v).map_err(|e| e.to_string())?;
            }
        }
        sc.ensure_valid().map_err(|e| e.to_string())?;
        Ok(sc)
    }
}
