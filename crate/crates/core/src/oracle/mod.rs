//! Reference decision procedure for small difference-logic instances.
//!
//! Every assignment of the formula's letters (propositions and constraint
//! atoms) to instants `0..=k` is tried together with every loop choice. A
//! candidate passes if the temporal skeleton holds with atoms read as
//! letters and the constraints it commits to are jointly feasible. Prefixes
//! are pruned when the skeleton is already false or the constraints so far
//! are infeasible.

pub mod dl;

use std::collections::BTreeMap;

use crate::eval::{Engine, Letters, Shape};
use crate::formula::{is_pnf, ConstraintAtom, Formula};
pub use dl::{dl_feasible, Cell, GroundAtom, NotDifference};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleCaps {
    pub max_letters: usize,
    pub max_bound: u32,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps {
            max_letters: 6,
            max_bound: 6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("formula is not in positive normal form")]
    NotPnf,
    #[error(transparent)]
    NotDifference(#[from] NotDifference),
    #[error("{found} letters exceed the oracle limit of {cap}")]
    TooManyLetters { found: usize, cap: usize },
    #[error("bound {k} exceeds the oracle limit of {cap}")]
    BoundTooLarge { k: u32, cap: u32 },
    #[error("bound must be at least 1")]
    InvalidBound,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub sat: bool,
    /// Loop of the first passing candidate (`None` for a finite path).
    pub loop_pos: Option<u32>,
    /// Complete letter assignments examined.
    pub leaves: u64,
}

struct Alphabet {
    props: BTreeMap<String, usize>,
    atoms: BTreeMap<ConstraintAtom, usize>,
    atom_list: Vec<ConstraintAtom>,
}

impl Alphabet {
    fn new(phi: &Formula) -> Self {
        let props: BTreeMap<String, usize> =
            phi.props().into_iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut atom_list: Vec<ConstraintAtom> = Vec::new();
        for a in phi.atoms() {
            if !atom_list.contains(&a.complement()) {
                atom_list.push(a);
            }
        }
        let atoms = atom_list
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), props.len() + i))
            .collect();
        Alphabet {
            props,
            atoms,
            atom_list,
        }
    }

    fn len(&self) -> usize {
        self.props.len() + self.atom_list.len()
    }

    fn prop_mask(&self) -> u64 {
        (1u64 << self.props.len()) - 1
    }
}

struct Partial<'a> {
    alphabet: &'a Alphabet,
    masks: &'a [u64],
}

impl Partial<'_> {
    fn bit(&self, idx: usize, i: u32) -> Option<bool> {
        self.masks.get(i as usize).map(|m| m >> idx & 1 == 1)
    }
}

impl Letters for Partial<'_> {
    fn prop(&self, name: &str, i: u32) -> Option<bool> {
        self.bit(self.alphabet.props[name], i)
    }

    fn atom(&self, a: &ConstraintAtom, i: u32) -> Option<bool> {
        match self.alphabet.atoms.get(a) {
            Some(&idx) => self.bit(idx, i),
            None => self.bit(self.alphabet.atoms[&a.complement()], i).map(|b| !b),
        }
    }
}

struct Search<'a> {
    phi: &'a Formula,
    k: u32,
    alphabet: Alphabet,
    /// `ground[t][j]`: atom `j` instantiated at instant `t`, for `t` in `0..=k+1`.
    ground: Vec<Vec<GroundAtom>>,
    leaves: u64,
}

impl Search<'_> {
    /// Atoms at instant `t` with the truth values given by `mask`.
    fn committed(&self, t: usize, mask: u64) -> impl Iterator<Item = GroundAtom> + '_ {
        let np = self.alphabet.props.len();
        self.ground[t].iter().enumerate().map(move |(j, g)| {
            if mask >> (np + j) & 1 == 1 {
                g.clone()
            } else {
                g.complement()
            }
        })
    }

    fn skeleton(&self, masks: &[u64], shape: Shape) -> Option<bool> {
        let letters = Partial {
            alphabet: &self.alphabet,
            masks,
        };
        Engine {
            k: self.k,
            shape,
            letters: &letters,
        }
        .holds(self.phi, 0)
    }

    fn dfs(&mut self, masks: &mut Vec<u64>, atoms: &mut Vec<GroundAtom>) -> Option<Option<u32>> {
        let depth = masks.len();
        if depth == self.k as usize + 1 {
            self.leaves += 1;
            return self.leaf(masks, atoms);
        }
        for mask in 0..1u64 << self.alphabet.len() {
            masks.push(mask);
            let base = atoms.len();
            let fresh: Vec<GroundAtom> = self.committed(depth, mask).collect();
            atoms.extend(fresh);
            let alive = self.skeleton(masks, Shape::Undecided) != Some(false)
                && dl_feasible(atoms).is_some();
            if alive {
                if let Some(found) = self.dfs(masks, atoms) {
                    return Some(found);
                }
            }
            atoms.truncate(base);
            masks.pop();
        }
        None
    }

    fn leaf(&self, masks: &[u64], atoms: &[GroundAtom]) -> Option<Option<u32>> {
        let k = self.k as usize;
        if self.skeleton(masks, Shape::Finite) == Some(true) {
            return Some(None);
        }
        let pm = self.alphabet.prop_mask();
        for l in 1..=k {
            if masks[l - 1] & pm != masks[k] & pm {
                continue;
            }
            if self.skeleton(masks, Shape::Lasso(l as u32)) != Some(true) {
                continue;
            }
            // after k the path re-enters l: atoms at k+1 take l's truth
            let mut all = atoms.to_vec();
            all.extend(self.committed(k + 1, masks[l]));
            if dl_feasible(&all).is_some() {
                return Some(Some(l as u32));
            }
        }
        None
    }
}

/// Decides bounded satisfiability of `phi` (in PNF, difference constraints
/// only) at bound `k` by exhaustive search.
pub fn oracle_check(phi: &Formula, k: u32, caps: OracleCaps) -> Result<OracleReport, OracleError> {
    if k < 1 {
        return Err(OracleError::InvalidBound);
    }
    if !is_pnf(phi) {
        return Err(OracleError::NotPnf);
    }
    let alphabet = Alphabet::new(phi);
    if alphabet.len() > caps.max_letters {
        return Err(OracleError::TooManyLetters {
            found: alphabet.len(),
            cap: caps.max_letters,
        });
    }
    if k > caps.max_bound {
        return Err(OracleError::BoundTooLarge {
            k,
            cap: caps.max_bound,
        });
    }
    let ground = (0..=k as i64 + 1)
        .map(|t| {
            alphabet
                .atom_list
                .iter()
                .map(|a| GroundAtom::ground(a, t))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut search = Search {
        phi,
        k,
        alphabet,
        ground,
        leaves: 0,
    };
    let found = search.dfs(&mut Vec::new(), &mut Vec::new());
    Ok(OracleReport {
        sat: found.is_some(),
        loop_pos: found.flatten(),
        leaves: search.leaves,
    })
}
