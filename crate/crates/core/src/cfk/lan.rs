use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::f2::BitVec;
use super::homology::{graded_homology, GradedDims, Region, Translate};
use super::invariants::{cycle_supports, d_one, tau};
use super::{CFKComplex, CfkError};
use crate::arith::Rational;

/// A translate `[x, i, j]` spelled out for reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chain {
    pub name: String,
    pub i: i64,
    pub j: i64,
    pub gr: i64,
}

impl Chain {
    fn of(c: &CFKComplex, t: Translate) -> Self {
        let (i, j) = c.filtration(t);
        Self {
            name: c.generators()[t.gen].name.clone(),
            i,
            j,
            gr: c.grading_of(t),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LanReport {
    pub passed: bool,
    /// Every chain in grading -2 has `i + j >= -1` or sits at `(-1, -1)`.
    pub chains_ok: bool,
    /// The same condition on cycles only.
    pub cycles_ok: bool,
    pub chain_violations: Vec<Chain>,
    pub cycle_violations: Vec<Chain>,
    /// A cycle at `(0, 1)` in grading 0 generating the tower.
    pub rho: Option<String>,
}

fn lan_position_ok(i: i64, j: i64) -> bool {
    i + j >= -1 || (i, j) == (-1, -1)
}

/// Whether the chain with support `support` is a nonzero class of `H_l` of the region.
pub(crate) fn is_nonzero_class(
    c: &CFKComplex,
    region: Region,
    l: i64,
    support: &[Translate],
) -> bool {
    let h = graded_homology(c, region, l);
    let pos: BTreeMap<Translate, usize> =
        h.basis.iter().enumerate().map(|(k, &t)| (t, k)).collect();
    let mut v = BitVec::zeros(h.basis.len());
    for t in support {
        if let Some(&k) = pos.get(t) {
            v.toggle(k);
        }
    }
    !h.boundaries.contains(&v)
}

pub fn check_lan(c: &CFKComplex) -> LanReport {
    let mut chain_violations = Vec::new();
    for x in 0..c.len() {
        if let Some(i) = c.translate_at(x, -2) {
            let t = Translate { gen: x, i };
            let (i, j) = c.filtration(t);
            if !lan_position_ok(i, j) {
                chain_violations.push(t);
            }
        }
    }
    let in_cycles: BTreeSet<Translate> = cycle_supports(c, Region::Full, -2)
        .into_iter()
        .flatten()
        .collect();
    let cycle_violations: Vec<Translate> = chain_violations
        .iter()
        .copied()
        .filter(|t| in_cycles.contains(t))
        .collect();

    let rho = (0..c.len()).find(|&x| {
        let g = &c.generators()[x];
        g.gr == 0
            && g.alex == 1
            && c.arrows_from(x).next().is_none()
            && is_nonzero_class(c, Region::Full, 0, &[Translate { gen: x, i: 0 }])
    });

    let chains_ok = chain_violations.is_empty();
    LanReport {
        passed: chains_ok && rho.is_some(),
        chains_ok,
        cycles_ok: cycle_violations.is_empty(),
        chain_violations: chain_violations
            .into_iter()
            .map(|t| Chain::of(c, t))
            .collect(),
        cycle_violations: cycle_violations
            .into_iter()
            .map(|t| Chain::of(c, t))
            .collect(),
        rho: rho.map(|x| c.generators()[x].name.clone()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropReport {
    pub passed: bool,
    pub d_one: Rational,
    pub tau: i64,
    pub lan: LanReport,
    /// `U·ρ`, the class realizing the bottom of the tower.
    pub witness: Chain,
    pub witness_nonzero: bool,
}

/// Checks that a complex meeting the Lan hypotheses with `τ = 1` has `d(S^3_1, s_0) = -2`.
pub fn verify_prop_c(c: &CFKComplex) -> Result<PropReport, CfkError> {
    c.ensure_valid()?;
    let lan = check_lan(c);
    if !lan.passed {
        let mut why = Vec::new();
        if !lan.chains_ok {
            why.push(format!(
                "{} chain(s) of grading -2 below i+j = -1",
                lan.chain_violations.len()
            ));
        }
        if lan.rho.is_none() {
            why.push("no cycle at (0,1) in grading 0 generates the tower".to_string());
        }
        return Err(CfkError::HypothesisFailed(why.join("; ")));
    }
    let t = tau(c).map_err(|e| CfkError::HypothesisFailed(e.to_string()))?;
    if t != 1 {
        return Err(CfkError::HypothesisFailed(format!("tau = {t}, expected 1")));
    }
    let d = d_one(c)?;
    let expected = Rational::from(-2i64);
    if d != expected {
        return Err(CfkError::ValueMismatch { expected, got: d });
    }
    let rho = c.index_of(lan.rho.as_deref().unwrap()).unwrap();
    let w = Translate { gen: rho, i: -1 };
    let witness_nonzero = is_nonzero_class(c, Region::MaxAtLeastZero, -2, &[w]);
    Ok(PropReport {
        passed: witness_nonzero,
        d_one: d,
        tau: t,
        witness: Chain::of(c, w),
        witness_nonzero,
        lan,
    })
}

/// Graded ranks of the knot Floer homology of the Whitehead double in
/// Alexander degrees `1, 0, -1`, from `H(F(K, m))` for `m = -g..=g`.
pub fn whitehead_double_hfk(
    g: i64,
    filtered: &BTreeMap<i64, GradedDims>,
) -> Result<BTreeMap<i64, GradedDims>, CfkError> {
    if g < 1 {
        return Err(CfkError::TrivialCompanion);
    }
    let mut sum: BTreeMap<i64, i64> = BTreeMap::new();
    for m in -g..=g {
        let h = filtered.get(&m).ok_or(CfkError::MissingFiltration(m))?;
        for (&l, &d) in &h.0 {
            *sum.entry(l).or_default() += d as i64;
        }
    }
    // (degree, shift of H, multiplicity, [(grading, extra rank)])
    let rows: [(i64, i64, i64, [(i64, i64); 2]); 3] = [
        (1, -1, 2, [(0, 2 * g), (1, -2)]),
        (0, 0, 4, [(-1, 4 * g - 1), (0, -4)]),
        (-1, 1, 2, [(-2, 2 * g), (-1, -2)]),
    ];
    let mut out = BTreeMap::new();
    for (j, shift, mult, extra) in rows {
        let mut ranks: BTreeMap<i64, i64> = BTreeMap::new();
        for (&l, &d) in &sum {
            *ranks.entry(l - shift).or_default() += mult * d;
        }
        for (l, k) in extra {
            *ranks.entry(l).or_default() += k;
        }
        let mut dims = GradedDims::default();
        for (l, r) in ranks {
            if r < 0 {
                return Err(CfkError::InconsistentRanks {
                    j,
                    grading: l,
                    value: r,
                });
            }
            dims.insert(l, r as usize);
        }
        out.insert(j, dims);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfk::invariants::filtered_homology;
    use crate::cfk::staircase;
    use crate::knots::{gaps_from_alexander, AlexanderPoly, LSpaceKnotData};

    fn stair(s: &str) -> CFKComplex {
        staircase(&gaps_from_alexander(&AlexanderPoly::parse(s).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn lan_examples() {
        let r = check_lan(&stair("T - 1 + T^-1"));
        assert!(r.passed && r.cycles_ok);
        assert_eq!(r.rho.as_deref(), Some("x"));

        let u = check_lan(&staircase(&LSpaceKnotData::unknot()).unwrap());
        assert!(u.chains_ok);
        assert!(!u.passed);

        let shifted = check_lan(&stair("T - 1 + T^-1").shift_gradings(-2));
        assert!(shifted.rho.is_none());
    }

    #[test]
    fn prop_on_trefoil() {
        let r = verify_prop_c(&stair("T - 1 + T^-1")).unwrap();
        assert!(r.passed);
        assert_eq!(r.d_one, Rational::from(-2i64));
        assert_eq!(r.witness.name, "x");
        assert_eq!((r.witness.i, r.witness.j, r.witness.gr), (-1, 0, -2));
        assert!(matches!(
            verify_prop_c(&staircase(&LSpaceKnotData::unknot()).unwrap()),
            Err(CfkError::HypothesisFailed(_))
        ));
    }

    #[test]
    fn whitehead_trefoil() {
        let f = filtered_homology(&stair("T - 1 + T^-1"), 1).unwrap();
        let w = whitehead_double_hfk(1, &f).unwrap();
        assert_eq!(w[&1], GradedDims::from_pairs(&[(0, 2), (-1, 2)]));
        assert_eq!(w[&0], GradedDims::from_pairs(&[(-1, 3), (-2, 4)]));
        assert_eq!(w[&-1], GradedDims::from_pairs(&[(-2, 2), (-3, 2)]));
        assert_eq!([w[&1].euler(), w[&0].euler(), w[&-1].euler()], [0, 1, 0]);
        assert!(matches!(
            whitehead_double_hfk(0, &f),
            Err(CfkError::TrivialCompanion)
        ));
        assert!(matches!(
            whitehead_double_hfk(2, &f),
            Err(CfkError::MissingFiltration(-2))
        ));
    }
}
