use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::f2::{kernel, BitVec, Echelon};
use super::{CFKComplex, CfkError};

/// Subquotient complexes of `CFK^∞`, described by the `(i, j)` positions they keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    /// `{i = c}`
    Column(i64),
    /// `{i = 0, j <= m}`
    Sublevel(i64),
    /// `{max(i, j) >= 0}`
    MaxAtLeastZero,
    /// `{max(i, j) < 0}`
    MaxBelowZero,
    /// everything
    Full,
}

impl Region {
    pub fn contains(&self, i: i64, j: i64) -> bool {
        match *self {
            Region::Column(c) => i == c,
            Region::Sublevel(m) => i == 0 && j <= m,
            Region::MaxAtLeastZero => i.max(j) >= 0,
            Region::MaxBelowZero => i.max(j) < 0,
            Region::Full => true,
        }
    }

    /// Whether only finitely many translates lie in the region.
    pub fn is_bounded(&self) -> bool {
        matches!(self, Region::Column(_) | Region::Sublevel(_))
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::Column(c) => write!(f, "{{i={c}}}"),
            Region::Sublevel(m) => write!(f, "{{i=0, j<={m}}}"),
            Region::MaxAtLeastZero => write!(f, "{{max(i,j)>=0}}"),
            Region::MaxBelowZero => write!(f, "{{max(i,j)<0}}"),
            Region::Full => write!(f, "{{all}}"),
        }
    }
}

/// Dimension over `F_2` in each Maslov grading; zero entries are omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GradedDims(pub BTreeMap<i64, usize>);

impl GradedDims {
    pub fn get(&self, l: i64) -> usize {
        self.0.get(&l).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn euler(&self) -> i64 {
        self.0
            .iter()
            .map(|(&l, &d)| {
                if l.rem_euclid(2) == 0 {
                    d as i64
                } else {
                    -(d as i64)
                }
            })
            .sum()
    }

    pub fn insert(&mut self, l: i64, d: usize) {
        if d == 0 {
            self.0.remove(&l);
        } else {
            self.0.insert(l, d);
        }
    }

    pub fn from_pairs(pairs: &[(i64, usize)]) -> Self {
        let mut g = Self::default();
        for &(l, d) in pairs {
            g.insert(l, g.get(l) + d);
        }
        g
    }
}

/// A translate `[x, i, A_x + i]`, identified by generator and `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Translate {
    pub gen: usize,
    pub i: i64,
}

/// The translates of one region in one grading, with the differential into
/// the grading below.
pub(crate) struct GradedPiece {
    pub basis: Vec<Translate>,
}

impl CFKComplex {
    /// `i` such that the translate of `x` has grading `l`, if the parity allows.
    pub fn translate_at(&self, x: usize, l: i64) -> Option<i64> {
        let d = l - self.generators()[x].gr;
        (d.rem_euclid(2) == 0).then_some(d / 2)
    }

    pub fn filtration(&self, t: Translate) -> (i64, i64) {
        (t.i, self.generators()[t.gen].alex + t.i)
    }

    pub fn grading_of(&self, t: Translate) -> i64 {
        self.generators()[t.gen].gr + 2 * t.i
    }

    pub(crate) fn piece(&self, region: Region, l: i64) -> GradedPiece {
        let basis = (0..self.len())
            .filter_map(|x| {
                let i = self.translate_at(x, l)?;
                let t = Translate { gen: x, i };
                let (i, j) = self.filtration(t);
                region.contains(i, j).then_some(t)
            })
            .collect();
        GradedPiece { basis }
    }

    /// `∂` of every basis element of `src`, projected onto `dst`.
    pub(crate) fn boundary_images(&self, src: &GradedPiece, dst: &GradedPiece) -> Vec<BitVec> {
        let pos: BTreeMap<Translate, usize> =
            dst.basis.iter().enumerate().map(|(k, &t)| (t, k)).collect();
        src.basis
            .iter()
            .map(|t| {
                let mut v = BitVec::zeros(dst.basis.len());
                for a in self.arrows_from(t.gen) {
                    let target = Translate {
                        gen: a.to,
                        i: t.i - a.u,
                    };
                    if let Some(&k) = pos.get(&target) {
                        v.toggle(k);
                    }
                }
                v
            })
            .collect()
    }

    /// Gradings in which the region has chain groups, for bounded regions.
    pub fn chain_support(&self, region: Region) -> Option<(i64, i64)> {
        let c = match region {
            Region::Column(c) => c,
            Region::Sublevel(_) => 0,
            _ => return None,
        };
        let grs = self.generators().iter().map(|g| g.gr + 2 * c);
        Some((grs.clone().min()?, grs.max()?))
    }
}

pub(crate) struct GradedHomology {
    pub cycles: Vec<BitVec>,
    pub boundaries: Echelon,
    pub basis: Vec<Translate>,
}

pub(crate) fn graded_homology(c: &CFKComplex, region: Region, l: i64) -> GradedHomology {
    let here = c.piece(region, l);
    let below = c.piece(region, l - 1);
    let above = c.piece(region, l + 1);
    let cycles = kernel(&c.boundary_images(&here, &below));
    let mut boundaries = Echelon::new();
    for v in c.boundary_images(&above, &here) {
        boundaries.insert(&v);
    }
    GradedHomology {
        cycles,
        boundaries,
        basis: here.basis,
    }
}

impl GradedHomology {
    pub fn dim(&self) -> usize {
        self.cycles.len() - self.boundaries.rank()
    }

    /// A cycle that is not a boundary, if there is one.
    pub fn nonzero_class(&self) -> Option<&BitVec> {
        self.cycles.iter().find(|z| !self.boundaries.contains(z))
    }
}

/// Homology of a region in every grading of `window` (inclusive).
pub fn homology(
    c: &CFKComplex,
    region: Region,
    window: (i64, i64),
) -> Result<GradedDims, CfkError> {
    c.ensure_valid()?;
    let mut out = GradedDims::default();
    for l in window.0..=window.1 {
        out.insert(l, graded_homology(c, region, l).dim());
    }
    Ok(out)
}

/// Total homology of a bounded region. With `window`, fails if the chain
/// groups reach outside it.
pub fn homology_total(
    c: &CFKComplex,
    region: Region,
    window: Option<(i64, i64)>,
) -> Result<GradedDims, CfkError> {
    let Some(support) = c.chain_support(region) else {
        if c.is_empty() {
            return Ok(GradedDims::default());
        }
        return Err(CfkError::WindowTooSmall {
            region: region.to_string(),
            needed: None,
            window,
        });
    };
    if let Some(w) = window {
        if support.0 < w.0 || support.1 > w.1 {
            return Err(CfkError::WindowTooSmall {
                region: region.to_string(),
                needed: Some(support),
                window,
            });
        }
    }
    homology(c, region, support)
}

/// The window `[-4g - 8, 4]` widened to cover every generator's grading.
pub fn default_window(c: &CFKComplex) -> (i64, i64) {
    let g = c.genus_bound();
    let lo = c.generators().iter().map(|x| x.gr - 2).min().unwrap_or(0);
    let hi = c.generators().iter().map(|x| x.gr + 2).max().unwrap_or(0);
    ((-4 * g - 8).min(lo), 4.max(hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfk::staircase;
    use crate::knots::{gaps_from_alexander, AlexanderPoly};

    fn trefoil() -> CFKComplex {
        staircase(&gaps_from_alexander(&AlexanderPoly::parse("T - 1 + T^-1").unwrap()).unwrap())
            .unwrap()
    }

    #[test]
    fn trefoil_regions() {
        let c = trefoil();
        let col = homology_total(&c, Region::Column(0), None).unwrap();
        assert_eq!(col, GradedDims::from_pairs(&[(0, 1)]));
        assert_eq!(
            homology_total(&c, Region::Sublevel(0), None)
                .unwrap()
                .total(),
            0
        );
        assert_eq!(
            homology_total(&c, Region::Sublevel(-1), None).unwrap(),
            GradedDims::from_pairs(&[(-2, 1)])
        );
        assert_eq!(
            homology_total(&c, Region::Sublevel(1), None).unwrap(),
            GradedDims::from_pairs(&[(0, 1)])
        );
        // one tower in even degrees
        let full = homology(&c, Region::Full, (-10, 10)).unwrap();
        for l in -10..=10 {
            assert_eq!(full.get(l), (l % 2 == 0) as usize, "grading {l}");
        }
        let plus = homology(&c, Region::MaxAtLeastZero, (-6, 6)).unwrap();
        assert_eq!(plus.get(-2), 1);
        assert_eq!(plus.get(-4), 0);
    }

    #[test]
    fn window_errors() {
        let c = trefoil();
        assert!(matches!(
            homology_total(&c, Region::Column(0), Some((-1, 5))),
            Err(CfkError::WindowTooSmall { .. })
        ));
        assert!(matches!(
            homology_total(&c, Region::Full, Some((-100, 100))),
            Err(CfkError::WindowTooSmall { .. })
        ));
    }

    #[test]
    fn euler_characteristic() {
        let g = GradedDims::from_pairs(&[(0, 2), (-1, 3), (-2, 1)]);
        assert_eq!(g.euler(), 0);
        assert_eq!(g.total(), 6);
    }
}
