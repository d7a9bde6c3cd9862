//! Totally nonnegative cells: the tnn test, admissible families `M(C)`, the
//! cell classifier and the matching of `M(C)` against `M(w)`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{LaurentPoly, Matrix, Rational, VarRegistry};
use crate::combinat::{
    enumerate_diagrams, enumerate_restricted_perms, CauchonDiagram, CombinatError, RestrictedPermutation,
};
use crate::families::compute_mw;
use crate::minors::{all_minors, vanishing_family, MinorFamily, MinorId};
use crate::restoration::{cauchon_diagram_of, delete_derivations, restore, RestorationError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CellsError {
    #[error("matrix is not totally nonnegative: minor {witness} is negative")]
    NotTnn { witness: MinorId },
    #[error("zero pattern after deletion is not a Cauchon diagram")]
    NotCauchon,
    #[error("vanishing family {found} differs from M(C) = {expected}")]
    FamilyMismatch {
        found: MinorFamily,
        expected: MinorFamily,
    },
    #[error("family matching failed: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Combinat(#[from] CombinatError),
    #[error(transparent)]
    Restoration(#[from] RestorationError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TnnVerdict {
    pub is_tnn: bool,
    pub witness: Option<MinorId>,
}

/// Checks every minor; reports the first negative one in canonical order.
pub fn is_tnn(x: &Matrix<Rational>) -> TnnVerdict {
    let witness = all_minors(x)
        .into_iter()
        .find(|(_, v)| v.is_negative())
        .map(|(id, _)| id);
    TnnVerdict {
        is_tnn: witness.is_none(),
        witness,
    }
}

/// `M_C`: `t[i,a]` at white cells, `0` at black ones. The registry holds only
/// the white cells.
pub fn symbolic_mc(c: &CauchonDiagram) -> Matrix<LaurentPoly> {
    let reg = VarRegistry::from_cells(c.white_cells());
    Matrix::from_fn(c.m(), c.p(), |r, col| {
        LaurentPoly::cell_var(&reg, (r + 1, col + 1)).unwrap_or_else(|| LaurentPoly::zero(&reg))
    })
}

/// `M(C)`: the minors vanishing on the restored symbolic matrix.
pub fn compute_mc(c: &CauchonDiagram) -> MinorFamily {
    let trace = restore(&symbolic_mc(c)).expect("restoring M_C divides only by variables");
    vanishing_family(trace.last())
}

/// The cell of a tnn matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellDescriptor {
    pub diagram: CauchonDiagram,
    pub family: MinorFamily,
    pub matched_perm: Option<RestrictedPermutation>,
}

/// Runs deletion on a tnn matrix, reads the diagram off the zero pattern and
/// checks that the matrix's vanishing minors are exactly `M(C)`.
/// `matched_perm` is left empty; see [`find_matching_perm`].
pub fn classify(x_bar: &Matrix<Rational>) -> Result<CellDescriptor, CellsError> {
    let verdict = is_tnn(x_bar);
    if let Some(witness) = verdict.witness {
        return Err(CellsError::NotTnn { witness });
    }
    let trace = delete_derivations(x_bar)?;
    let diagram = cauchon_diagram_of(trace.first()).ok_or(CellsError::NotCauchon)?;
    let expected = compute_mc(&diagram);
    let found = vanishing_family(x_bar);
    if found != expected {
        return Err(CellsError::FamilyMismatch { found, expected });
    }
    Ok(CellDescriptor {
        diagram,
        family: expected,
        matched_perm: None,
    })
}

/// The restricted permutation with `M(w) = family`, if any.
pub fn find_matching_perm(family: &MinorFamily) -> Result<Option<RestrictedPermutation>, CellsError> {
    let perms = enumerate_restricted_perms(family.m(), family.p())?;
    Ok(perms.into_par_iter().find_first(|w| compute_mw(w) == *family))
}

const SURROGATE_BOUND: u64 = 1 << 32;

/// `N_C` with independent random positive rationals standing in for
/// algebraically independent reals. Numerators and denominators are uniform
/// in `1..=2^32`.
pub fn build_nc(c: &CauchonDiagram, seed: u64) -> Matrix<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Matrix::from_fn(c.m(), c.p(), |r, col| {
        if c.is_black(r + 1, col + 1) {
            Rational::from_integer(BigInt::from(0))
        } else {
            let n = rng.gen_range(1..=SURROGATE_BOUND);
            let d = rng.gen_range(1..=SURROGATE_BOUND);
            Rational::new(n.into(), d.into())
        }
    })
}

/// One `(w, C)` pair with `M(w) = M(C)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchedPair {
    pub perm: RestrictedPermutation,
    pub diagram: CauchonDiagram,
    pub family: MinorFamily,
    pub family_size: usize,
}

/// Computes `{M(w)}` and `{M(C)}`, checks that they are the same collection of
/// pairwise distinct families, and returns the bijection in diagram order.
pub fn match_families(m: usize, p: usize) -> Result<Vec<MatchedPair>, CellsError> {
    let perms = enumerate_restricted_perms(m, p)?;
    let diagrams = enumerate_diagrams(m, p)?;
    let (by_perm, by_diagram) = rayon::join(
        || {
            perms
                .par_iter()
                .map(|w| (compute_mw(w), w.clone()))
                .collect::<Vec<_>>()
        },
        || {
            diagrams
                .par_iter()
                .map(|c| (compute_mc(c), *c))
                .collect::<Vec<_>>()
        },
    );
    if perms.len() != diagrams.len() {
        return Err(CellsError::Mismatch(format!(
            "{} permutations but {} diagrams",
            perms.len(),
            diagrams.len()
        )));
    }
    let mut perm_of: HashMap<String, RestrictedPermutation> = HashMap::with_capacity(perms.len());
    for (family, w) in by_perm {
        if let Some(prev) = perm_of.insert(family.to_json(), w.clone()) {
            return Err(CellsError::Mismatch(format!("M({prev}) = M({w}) = {family}")));
        }
    }
    let mut seen: HashMap<String, CauchonDiagram> = HashMap::with_capacity(diagrams.len());
    let mut pairs = Vec::with_capacity(diagrams.len());
    for (family, c) in by_diagram {
        let key = family.to_json();
        if let Some(prev) = seen.insert(key.clone(), c) {
            return Err(CellsError::Mismatch(format!(
                "diagrams {:?} and {:?} share M(C) = {family}",
                prev.black_cells(),
                c.black_cells()
            )));
        }
        let Some(w) = perm_of.get(&key) else {
            return Err(CellsError::Mismatch(format!(
                "M(C) = {family} for C = {:?} is no M(w)",
                c.black_cells()
            )));
        };
        pairs.push(MatchedPair {
            perm: w.clone(),
            diagram: c,
            family_size: family.len(),
            family,
        });
    }
    Ok(pairs)
}
