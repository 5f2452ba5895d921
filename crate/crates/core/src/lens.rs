//! Lens spaces, with `L(p,q)` the result of `p/q` surgery on the unknot.

use num_integer::Integer;
use thiserror::Error;

use crate::arith::{omega_check, Rational, DEFAULT_ENTRY_BOUND, DEFAULT_MAX_LEN};
use crate::plumbing::{d_table_plumbing_with, MaximizeOptions, PlumbedTree, PlumbingError};
use crate::table::{affine_match, AffineMap, DTable, TableError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LensError {
    #[error("L({p},{q}) is not a lens space: need gcd(|p|,q) = 1 and 0 < q < |p|, or (+-1, 1)")]
    InvalidLens { p: i64, q: i64 },
    #[error("no admissible continued fraction found for slope {slope}")]
    NoWitness { slope: Rational },
    #[error("lattice and closed-form tables of L({p},1) do not match under any affine map")]
    NoRelabeling { p: i64 },
    #[error(transparent)]
    Plumbing(#[from] PlumbingError),
    #[error(transparent)]
    Table(#[from] TableError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LensSpace {
    p: i64,
    q: i64,
}

impl LensSpace {
    pub fn new(p: i64, q: i64) -> Result<Self, LensError> {
        let a = p.unsigned_abs() as i64;
        let ok = match a {
            0 => false,
            1 => q == 1,
            _ => q > 0 && q < a && a.gcd(&q) == 1,
        };
        if ok {
            Ok(Self { p, q })
        } else {
            Err(LensError::InvalidLens { p, q })
        }
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    /// The surgery slope `p/q`.
    pub fn slope(&self) -> Rational {
        Rational::new(self.p as i128, self.q as i128)
    }

    pub fn reversed(&self) -> Self {
        Self {
            p: -self.p,
            q: self.q,
        }
    }

    /// The linear plumbing bounding `L(-|p|, q)`, from the expansion of `-|p|/q`.
    pub fn negative_plumbing(&self) -> Result<PlumbedTree, LensError> {
        let slope = Rational::new(-(self.p.abs() as i128), self.q as i128);
        let witness = omega_check(slope, DEFAULT_MAX_LEN, DEFAULT_ENTRY_BOUND)
            .ok_or(LensError::NoWitness { slope })?;
        Ok(PlumbedTree::linear(&witness.cf))
    }
}

impl std::fmt::Display for LensSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "L({},{})", self.p, self.q)
    }
}

pub fn lens_d_table(lens: &LensSpace) -> Result<DTable, LensError> {
    lens_d_table_with(lens, &MaximizeOptions::default())
}

/// Lattice table: the plumbing of `-|p|/q` bounds `L(-|p|, q)`; for `p > 0`
/// the values are negated.
pub fn lens_d_table_with(lens: &LensSpace, opts: &MaximizeOptions) -> Result<DTable, LensError> {
    if lens.p.abs() == 1 {
        return Ok(DTable::single(Rational::ZERO));
    }
    let table = d_table_plumbing_with(&lens.negative_plumbing()?, opts)?;
    Ok(if lens.p > 0 {
        table.reverse_orientation()
    } else {
        table
    })
}

/// `d(L(p,q), i) = ((2i+1-p-q)^2 - pq)/(4pq) - d(L(q, p mod q), i mod q)`
/// for `p > 0`, with `d(L(1,*), 0) = 0`. `q` is read modulo `p`.
pub fn lens_d_recursive(p: i64, q: i64, i: i64) -> Rational {
    assert!(p > 0, "p must be positive");
    let q = q.rem_euclid(p);
    if p == 1 {
        return Rational::ZERO;
    }
    assert!(p.gcd(&q) == 1, "p and q must be coprime");
    let i = i.rem_euclid(p);
    let (p128, q128) = (p as i128, q as i128);
    let s = 2 * i as i128 + 1 - p128 - q128;
    Rational::new(s * s - p128 * q128, 4 * p128 * q128) - lens_d_recursive(q, p % q, i % q)
}

pub fn lens_recursive_table(p: i64, q: i64) -> DTable {
    DTable::cyclic((0..p).map(|i| lens_d_recursive(p, q, i)).collect())
}

/// `((2i - p)^2 - p) / (4p)`.
pub fn lens_p1_closed_form(p: i64, i: i64) -> Rational {
    let (p, i) = (p as i128, i as i128);
    let s = 2 * i - p;
    Rational::new(s * s - p, 4 * p)
}

/// The canonical labeled table of `L(p,1)`, `p >= 1`.
pub fn lens_p1_table(p: i64) -> DTable {
    DTable::cyclic((0..p).map(|i| lens_p1_closed_form(p, i)).collect())
}

/// Affine map `f` with `lattice(f(i)) = canonical(i)` for `L(p,1)`.
pub fn p1_relabeling(p: i64) -> Result<AffineMap, LensError> {
    let lattice = lens_d_table(&LensSpace::new(p, 1)?)?;
    affine_match(&lattice, &lens_p1_table(p))?.ok_or(LensError::NoRelabeling { p })
}

pub fn reverse_orientation(t: &DTable) -> DTable {
    t.reverse_orientation()
}

pub fn connected_sum_d(a: &DTable, b: &DTable) -> DTable {
    a.connected_sum(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    fn sorted(mut v: Vec<Rational>) -> Vec<Rational> {
        v.sort();
        v
    }

    #[test]
    fn small_tables() {
        assert_eq!(
            lens_d_table(&LensSpace::new(1, 1).unwrap())
                .unwrap()
                .values(),
            &[Rational::ZERO]
        );
        let t = lens_d_table(&LensSpace::new(2, 1).unwrap()).unwrap();
        assert_eq!(t.sorted_values(), vec![r(-1, 4), r(1, 4)]);
        let t = lens_d_table(&LensSpace::new(3, 1).unwrap()).unwrap();
        assert_eq!(t.sorted_values(), vec![r(-1, 6), r(-1, 6), r(1, 2)]);
        let t = lens_d_table(&LensSpace::new(-3, 1).unwrap()).unwrap();
        assert_eq!(t.sorted_values(), vec![r(-1, 2), r(1, 6), r(1, 6)]);
    }

    #[test]
    fn validation() {
        assert!(LensSpace::new(0, 1).is_err());
        assert!(LensSpace::new(4, 2).is_err());
        assert!(LensSpace::new(5, 5).is_err());
        assert!(LensSpace::new(-1, 1).is_ok());
        assert!(LensSpace::new(7, 3).is_ok());
    }

    #[test]
    fn recursion_examples() {
        assert_eq!(lens_d_recursive(1, 1, 0), Rational::ZERO);
        let two: Vec<Rational> = (0..2).map(|i| lens_d_recursive(2, 1, i)).collect();
        assert_eq!(sorted(two), vec![r(-1, 4), r(1, 4)]);
        let three: Vec<Rational> = (0..3).map(|i| lens_d_recursive(3, 1, i)).collect();
        assert_eq!(sorted(three), vec![r(-1, 6), r(-1, 6), r(1, 2)]);
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(lens_p1_closed_form(1, 0), Rational::ZERO);
        assert_eq!(lens_p1_closed_form(2, 0), r(1, 4));
        assert_eq!(lens_p1_closed_form(2, 1), r(-1, 4));
        let four: Vec<Rational> = (0..4).map(|i| lens_p1_closed_form(4, i)).collect();
        assert_eq!(four, vec![r(3, 4), r(0, 1), r(-1, 4), r(0, 1)]);
        for p in 1..20 {
            for i in 0..p {
                assert_eq!(
                    lens_p1_closed_form(p, i),
                    lens_p1_closed_form(p, (p - i) % p)
                );
            }
        }
    }

    #[test]
    fn lattice_matches_recursion_for_small_p() {
        for p in 2..=12i64 {
            for q in 1..p {
                if p.gcd(&q) != 1 {
                    continue;
                }
                let lattice = lens_d_table(&LensSpace::new(p, q).unwrap()).unwrap();
                let rec = lens_recursive_table(p, q);
                assert!(
                    affine_match(&lattice, &rec).unwrap().is_some(),
                    "L({p},{q}): {lattice:?} vs {rec:?}"
                );
            }
        }
    }

    #[test]
    fn sums_and_reversal() {
        let l2 = lens_p1_table(2);
        let s = connected_sum_d(&l2, &l2);
        assert_eq!(s.sorted_values(), vec![r(-1, 2), r(0, 1), r(0, 1), r(1, 2)]);
        let l3 = lens_p1_table(3);
        let shifted = connected_sum_d(&l3, &DTable::single(r(-2, 1)));
        for i in 0..3 {
            assert_eq!(shifted.get(i), l3.get(i) - r(2, 1));
        }
        assert_eq!(reverse_orientation(&reverse_orientation(&l3)), l3);
        assert_eq!(
            reverse_orientation(&l3).sorted_values(),
            vec![r(-1, 2), r(1, 6), r(1, 6)]
        );
        assert_eq!(p1_relabeling(5).unwrap().modulus, 5);
    }
}
