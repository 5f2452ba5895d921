use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::f2::{kernel, BitVec, Echelon};
use super::homology::{graded_homology, homology, homology_total, GradedDims, Region, Translate};
use super::{CFKComplex, CfkError};
use crate::arith::Rational;

/// Grading of the unique class of `H(C{i=0})`.
fn sphere_grading(c: &CFKComplex) -> Result<i64, CfkError> {
    let h = homology_total(c, Region::Column(0), None)?;
    if h.total() != 1 {
        return Err(CfkError::NotSphereLike(format!(
            "H(C{{i=0}}) has total dimension {}",
            h.total()
        )));
    }
    Ok(*h.0.keys().next().unwrap())
}

/// Least `j` such that `H(F(K, j)) -> H(C{i=0})` is nonzero.
pub fn tau(c: &CFKComplex) -> Result<i64, CfkError> {
    c.ensure_valid()?;
    let l0 = sphere_grading(c)?;
    let column = graded_homology(c, Region::Column(0), l0);
    let pos: BTreeMap<Translate, usize> = column
        .basis
        .iter()
        .enumerate()
        .map(|(k, &t)| (t, k))
        .collect();
    let lo = c.generators().iter().map(|g| g.alex).min().unwrap();
    let hi = c.generators().iter().map(|g| g.alex).max().unwrap();
    for j in lo..=hi {
        let sub = graded_homology(c, Region::Sublevel(j), l0);
        for z in &sub.cycles {
            let mut v = BitVec::zeros(column.basis.len());
            for k in z.ones() {
                v.set(pos[&sub.basis[k]]);
            }
            if !column.boundaries.contains(&v) {
                return Ok(j);
            }
        }
    }
    Err(CfkError::NotSphereLike(
        "no filtration level reaches H(C{i=0})".into(),
    ))
}

/// Where the `U`-tower of `H(C)` first survives in `H(C{max(i,j) >= 0})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerBottom {
    pub grading: i64,
    /// Support of a cycle representing the class.
    pub class: Vec<Translate>,
}

/// Searches upward from the lowest grading meeting the quotient. Once every
/// translate in gradings `l` and `l + 1` lies in the quotient, the tower class
/// of `H_l(C)` survives there, so the search ends.
pub fn tower_bottom(c: &CFKComplex) -> Result<TowerBottom, CfkError> {
    c.ensure_valid()?;
    if c.is_empty() {
        return Err(CfkError::NotSphereLike("empty complex".into()));
    }
    let entry = |g: &super::Generator| g.gr + 2 * 0.min(-g.alex);
    let start = c.generators().iter().map(entry).min().unwrap();
    let end = c.generators().iter().map(entry).max().unwrap() + 2;
    for l in start..=end {
        let full = graded_homology(c, Region::Full, l);
        match full.dim() {
            0 => continue,
            1 => {}
            d => {
                return Err(CfkError::NotSphereLike(format!(
                    "H_{l} of the full complex has dimension {d}"
                )))
            }
        }
        let z = full.nonzero_class().expect("dimension one").clone();
        let plus = c.piece(Region::MaxAtLeastZero, l);
        let above = c.piece(Region::MaxAtLeastZero, l + 1);
        let pos: BTreeMap<Translate, usize> = plus
            .basis
            .iter()
            .enumerate()
            .map(|(k, &t)| (t, k))
            .collect();
        let mut proj = BitVec::zeros(plus.basis.len());
        for k in z.ones() {
            if let Some(&p) = pos.get(&full.basis[k]) {
                proj.set(p);
            }
        }
        let mut boundaries = Echelon::new();
        for v in c.boundary_images(&above, &plus) {
            boundaries.insert(&v);
        }
        if !boundaries.contains(&proj) {
            return Ok(TowerBottom {
                grading: l,
                class: z.ones().map(|k| full.basis[k]).collect(),
            });
        }
    }
    Err(CfkError::NotSphereLike(
        "the tower never survives in the quotient".into(),
    ))
}

pub fn min_large_surgery(c: &CFKComplex) -> i64 {
    (2 * c.genus_bound() - 1).max(1)
}

/// Correction term of `S^3_r` in the spin^c structure `s_0`, `r >= max(2g-1, 1)`.
pub fn d_large_surgery(c: &CFKComplex, r: i64) -> Result<Rational, CfkError> {
    let min = min_large_surgery(c);
    if r < min {
        return Err(CfkError::SurgeryTooSmall { r, min });
    }
    let mu = tower_bottom(c)?.grading;
    Ok(Rational::from(mu) + Rational::new((r - 1) as i128, 4))
}

/// Correction term of `S^3_1`, from the smallest admissible large surgery.
pub fn d_one(c: &CFKComplex) -> Result<Rational, CfkError> {
    let r = min_large_surgery(c);
    Ok(d_large_surgery(c, r)? - Rational::new((r - 1) as i128, 4))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HInfinityReport {
    pub passed: bool,
    pub window: (i64, i64),
    /// Parity of the gradings carrying the tower, when there is one.
    pub parity: Option<i64>,
    pub dims: GradedDims,
}

/// `H(C)` should be one copy of `F[U, U^-1]`: dimension one in every grading
/// of one parity and zero in the other.
pub fn h_infinity_check(c: &CFKComplex, window: (i64, i64)) -> Result<HInfinityReport, CfkError> {
    let dims = homology(c, Region::Full, window)?;
    let parity = [0, 1]
        .into_iter()
        .find(|&p| (window.0..=window.1).all(|l| dims.get(l) == (l.rem_euclid(2) == p) as usize));
    Ok(HInfinityReport {
        passed: parity.is_some(),
        window,
        parity,
        dims,
    })
}

/// `H(F(K, m))` for `m = -g, ..., g`.
pub fn filtered_homology(c: &CFKComplex, g: i64) -> Result<BTreeMap<i64, GradedDims>, CfkError> {
    (-g..=g)
        .map(|m| Ok((m, homology_total(c, Region::Sublevel(m), None)?)))
        .collect()
}

/// Kernel of `∂` on a region in one grading, as supports of basis cycles.
pub fn cycle_supports(c: &CFKComplex, region: Region, l: i64) -> Vec<Vec<Translate>> {
    let here = c.piece(region, l);
    let below = c.piece(region, l - 1);
    kernel(&c.boundary_images(&here, &below))
        .iter()
        .map(|z| z.ones().map(|k| here.basis[k]).collect())
        .collect()
}
