//! Labeled tables of correction terms, one value per spin^c structure, and
//! affine relabelings between them.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },
    #[error("affine maps are only defined for cyclic label groups")]
    NotCyclic,
    #[error("table has {got} entries but its label group has order {expected}")]
    WrongSize { expected: u64, got: usize },
    #[error("label {label} appears twice or is out of range")]
    BadLabel { label: u64 },
}

/// Correction terms indexed by labels of a finite abelian group.
///
/// The group is `Z/f0 + Z/f1 + ...` with every `fi > 1`; a label is the
/// mixed-radix integer whose least significant digit is the `Z/f0`
/// coordinate. Cyclic tables (at most one factor) are by far the common case.
#[derive(Clone, PartialEq, Eq)]
pub struct DTable {
    factors: Vec<u64>,
    values: Vec<Rational>,
}

impl DTable {
    pub fn cyclic(values: Vec<Rational>) -> Self {
        assert!(!values.is_empty(), "a d-table has at least one entry");
        let factors = if values.len() > 1 {
            vec![values.len() as u64]
        } else {
            vec![]
        };
        Self { factors, values }
    }

    pub fn with_group(factors: Vec<u64>, values: Vec<Rational>) -> Result<Self, TableError> {
        let factors: Vec<u64> = factors.into_iter().filter(|&f| f > 1).collect();
        let expected: u64 = factors.iter().product();
        if expected as usize != values.len() {
            return Err(TableError::WrongSize {
                expected,
                got: values.len(),
            });
        }
        Ok(Self { factors, values })
    }

    /// The one-entry table of a manifold with a single spin^c structure.
    pub fn single(value: Rational) -> Self {
        Self::cyclic(vec![value])
    }

    pub fn modulus(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() <= 1
    }

    pub fn get(&self, label: u64) -> Rational {
        self.values[label as usize]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn entries(&self) -> impl Iterator<Item = (u64, Rational)> + '_ {
        self.values.iter().enumerate().map(|(i, &d)| (i as u64, d))
    }

    pub fn sum(&self) -> Rational {
        self.values.iter().sum()
    }

    pub fn sorted_values(&self) -> Vec<Rational> {
        let mut v = self.values.clone();
        v.sort();
        v
    }

    /// Orientation reversal: every value negated, labels kept.
    pub fn reverse_orientation(&self) -> Self {
        Self {
            factors: self.factors.clone(),
            values: self.values.iter().map(|&d| -d).collect(),
        }
    }

    /// Table of the connected sum. Label `a + |self| * b` holds `self[a] + other[b]`.
    pub fn connected_sum(&self, other: &DTable) -> Self {
        let n = self.values.len();
        let mut values = Vec::with_capacity(n * other.values.len());
        for b in &other.values {
            for a in &self.values {
                values.push(*a + *b);
            }
        }
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        Self { factors, values }
    }

    /// Returns the table `i -> self[map(i)]`.
    pub fn relabel(&self, map: &AffineMap) -> Result<Self, TableError> {
        self.require_cyclic()?;
        if map.modulus != self.modulus() {
            return Err(TableError::ModulusMismatch {
                left: self.modulus(),
                right: map.modulus,
            });
        }
        let values = (0..self.modulus())
            .map(|i| self.get(map.apply(i)))
            .collect();
        Ok(Self {
            factors: self.factors.clone(),
            values,
        })
    }

    fn digits(&self, mut label: u64) -> Vec<u64> {
        self.factors
            .iter()
            .map(|&f| {
                let d = label % f;
                label /= f;
                d
            })
            .collect()
    }

    fn from_digits(&self, digits: &[u64]) -> u64 {
        self.factors
            .iter()
            .zip(digits)
            .rev()
            .fold(0, |acc, (&f, &d)| acc * f + d)
    }

    /// The label `shift - label` computed digit by digit.
    pub fn reflect(&self, shift: u64, label: u64) -> u64 {
        let s = self.digits(shift);
        let l = self.digits(label);
        let out: Vec<u64> = self
            .factors
            .iter()
            .zip(s.iter().zip(&l))
            .map(|(&f, (&s, &l))| (s + f - l) % f)
            .collect();
        self.from_digits(&out)
    }

    /// Finds the smallest shift `c` for which `label -> c - label` preserves the
    /// table, i.e. a conjugation symmetry.
    pub fn conjugation_shift(&self) -> Option<u64> {
        (0..self.modulus())
            .find(|&c| (0..self.modulus()).all(|l| self.get(self.reflect(c, l)) == self.get(l)))
    }

    fn require_cyclic(&self) -> Result<(), TableError> {
        if self.is_cyclic() {
            Ok(())
        } else {
            Err(TableError::NotCyclic)
        }
    }

    pub fn to_json(&self) -> DTableJson {
        DTableJson {
            det: self.modulus(),
            group: if self.is_cyclic() {
                None
            } else {
                Some(self.factors.clone())
            },
            entries: self
                .entries()
                .map(|(label, d)| DEntry { label, d })
                .collect(),
        }
    }

    pub fn from_json(json: &DTableJson) -> Result<Self, TableError> {
        let n = json.det as usize;
        if n == 0 || json.entries.len() != n {
            return Err(TableError::WrongSize {
                expected: json.det,
                got: json.entries.len(),
            });
        }
        let mut slots: Vec<Option<Rational>> = vec![None; n];
        for e in &json.entries {
            let slot = slots
                .get_mut(e.label as usize)
                .filter(|s| s.is_none())
                .ok_or(TableError::BadLabel { label: e.label })?;
            *slot = Some(e.d);
        }
        let values: Vec<Rational> = slots.into_iter().map(|s| s.unwrap()).collect();
        match &json.group {
            Some(g) => Self::with_group(g.clone(), values),
            None => Ok(Self::cyclic(values)),
        }
    }
}

impl fmt::Debug for DTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DTable{:?}{:?}", self.factors, self.values)
    }
}

impl fmt::Display for DTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .values
            .iter()
            .map(|d| d.to_string().len())
            .max()
            .unwrap_or(1);
        let lw = (self.modulus().saturating_sub(1)).to_string().len().max(5);
        writeln!(f, "{:>lw$}  {:>width$}", "label", "d")?;
        for (label, d) in self.entries() {
            writeln!(f, "{label:>lw$}  {:>width$}", d.to_string())?;
        }
        Ok(())
    }
}

/// Wire form: `{"det":n,"entries":[{"label":0,"d":"1/2"},...]}`, labels ascending.
/// `group` is present only for non-cyclic label groups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DTableJson {
    pub det: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<Vec<u64>>,
    pub entries: Vec<DEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DEntry {
    pub label: u64,
    pub d: Rational,
}

/// `i -> unit * i + shift (mod modulus)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineMap {
    pub unit: u64,
    pub shift: u64,
    pub modulus: u64,
}

impl AffineMap {
    pub fn identity(modulus: u64) -> Self {
        Self {
            unit: 1 % modulus.max(1),
            shift: 0,
            modulus,
        }
    }

    pub fn apply(&self, i: u64) -> u64 {
        ((self.unit as u128 * i as u128 + self.shift as u128) % self.modulus as u128) as u64
    }

    pub fn inverse(&self) -> Self {
        let p = self.modulus;
        let inv = mod_inverse(self.unit, p);
        // x = inv * (y - shift)
        let shift = ((p - self.shift % p) as u128 * inv as u128 % p as u128) as u64;
        Self {
            unit: inv,
            shift,
            modulus: p,
        }
    }

    pub fn compose(&self, inner: &AffineMap) -> Self {
        let p = self.modulus as u128;
        Self {
            unit: (self.unit as u128 * inner.unit as u128 % p) as u64,
            shift: ((self.unit as u128 * inner.shift as u128 + self.shift as u128) % p) as u64,
            modulus: self.modulus,
        }
    }

    /// All affine automorphisms of `Z/p`, units ascending, then shifts ascending.
    pub fn all(modulus: u64) -> impl Iterator<Item = AffineMap> {
        let units: Vec<u64> = if modulus <= 1 {
            vec![0]
        } else {
            (1..modulus).filter(|u| u.gcd(&modulus) == 1).collect()
        };
        units.into_iter().flat_map(move |unit| {
            (0..modulus.max(1)).map(move |shift| AffineMap {
                unit,
                shift,
                modulus,
            })
        })
    }

    pub fn count(modulus: u64) -> u64 {
        if modulus <= 1 {
            1
        } else {
            (1..modulus).filter(|u| u.gcd(&modulus) == 1).count() as u64 * modulus
        }
    }
}

impl fmt::Display for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "i -> {}i + {} (mod {})",
            self.unit, self.shift, self.modulus
        )
    }
}

fn mod_inverse(u: u64, p: u64) -> u64 {
    if p <= 1 {
        return 0;
    }
    let e = (u as i128).extended_gcd(&(p as i128));
    e.x.rem_euclid(p as i128) as u64
}

fn check_pair(a: &DTable, b: &DTable) -> Result<u64, TableError> {
    a.require_cyclic()?;
    b.require_cyclic()?;
    if a.modulus() != b.modulus() {
        return Err(TableError::ModulusMismatch {
            left: a.modulus(),
            right: b.modulus(),
        });
    }
    Ok(a.modulus())
}

/// Smallest `(unit, shift)` with `a(unit*i + shift) = b(i)` for every label.
pub fn affine_match(a: &DTable, b: &DTable) -> Result<Option<AffineMap>, TableError> {
    let p = check_pair(a, b)?;
    if a.sorted_values() != b.sorted_values() {
        return Ok(None);
    }
    Ok(AffineMap::all(p).find(|m| (0..p).all(|i| a.get(m.apply(i)) == b.get(i))))
}

/// Same search restricted to `unit = 1`.
pub fn shift_match(a: &DTable, b: &DTable) -> Result<Option<AffineMap>, TableError> {
    let p = check_pair(a, b)?;
    Ok(AffineMap::all(p)
        .filter(|m| m.unit == 1 % p.max(1))
        .find(|m| (0..p).all(|i| a.get(m.apply(i)) == b.get(i))))
}

/// Smallest `(unit, shift)` with `a(unit*i + shift) >= b(i)` for every label.
pub fn affine_dominates(a: &DTable, b: &DTable) -> Result<Option<AffineMap>, TableError> {
    let p = check_pair(a, b)?;
    Ok(AffineMap::all(p).find(|m| (0..p).all(|i| a.get(m.apply(i)) >= b.get(i))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(v: &[(i128, i128)]) -> DTable {
        DTable::cyclic(v.iter().map(|&(n, d)| Rational::new(n, d)).collect())
    }

    #[test]
    fn reverse_and_sum() {
        let a = t(&[(1, 4), (-1, 4)]);
        assert_eq!(a.reverse_orientation(), t(&[(-1, 4), (1, 4)]));
        assert_eq!(a.reverse_orientation().reverse_orientation(), a);
        let s = a.connected_sum(&a);
        assert_eq!(s.factors(), &[2, 2]);
        assert_eq!(
            s.sorted_values(),
            vec![
                Rational::new(-1, 2),
                Rational::ZERO,
                Rational::ZERO,
                Rational::new(1, 2)
            ]
        );
        let zero = DTable::single(Rational::ZERO);
        assert_eq!(a.connected_sum(&zero), a);
        let shifted = t(&[(1, 2), (-1, 6), (-1, 6)]).connected_sum(&DTable::single((-2i64).into()));
        assert_eq!(shifted, t(&[(-3, 2), (-13, 6), (-13, 6)]));
    }

    #[test]
    fn matching() {
        let a = t(&[(1, 2), (-1, 6), (-1, 6)]);
        assert_eq!(affine_match(&a, &a).unwrap(), Some(AffineMap::identity(3)));
        let b = t(&[(-1, 6), (-1, 6), (1, 2)]);
        // b(i) = a(i + 1)
        let m = affine_match(&a, &b).unwrap().unwrap();
        assert_eq!((m.unit, m.shift), (1, 1));
        let c = t(&[(-3, 2), (-1, 6), (-1, 6)]);
        assert_eq!(affine_match(&a, &c).unwrap(), None);
        assert!(matches!(
            affine_match(&a, &t(&[(0, 1)])),
            Err(TableError::ModulusMismatch { .. })
        ));
    }

    #[test]
    fn domination() {
        let zero = t(&[(0, 1)]);
        let minus_two = t(&[(-2, 1)]);
        assert_eq!(
            affine_dominates(&zero, &minus_two).unwrap(),
            Some(AffineMap::identity(1))
        );
        assert_eq!(affine_dominates(&minus_two, &zero).unwrap(), None);
        let lo = t(&[(-1, 4), (-1, 4)]);
        let hi = t(&[(1, 4), (1, 4)]);
        assert_eq!(affine_dominates(&lo, &hi).unwrap(), None);
    }

    #[test]
    fn affine_algebra() {
        for m in AffineMap::all(12) {
            let inv = m.inverse();
            for i in 0..12 {
                assert_eq!(inv.apply(m.apply(i)), i);
                assert_eq!(m.compose(&inv).apply(i), i);
            }
        }
        assert_eq!(AffineMap::all(12).count() as u64, AffineMap::count(12));
        assert_eq!(AffineMap::count(1), 1);
    }

    #[test]
    fn conjugation() {
        let a = t(&[(3, 4), (0, 1), (-1, 4), (0, 1)]);
        assert_eq!(a.conjugation_shift(), Some(0));
        let b = a
            .relabel(&AffineMap {
                unit: 1,
                shift: 1,
                modulus: 4,
            })
            .unwrap();
        assert!(b.conjugation_shift().is_some());
        let lopsided = t(&[(1, 1), (2, 1), (1, 1)]);
        assert_eq!(lopsided.conjugation_shift(), Some(2));
        let none = t(&[(1, 1), (2, 1), (2, 1), (3, 1), (5, 1)]);
        assert_eq!(none.conjugation_shift(), None);
    }

    #[test]
    fn json_round_trip() {
        let a = t(&[(1, 2), (-1, 6), (-1, 6)]);
        let s = serde_json::to_string(&a.to_json()).unwrap();
        assert_eq!(
            s,
            r#"{"det":3,"entries":[{"label":0,"d":"1/2"},{"label":1,"d":"-1/6"},{"label":2,"d":"-1/6"}]}"#
        );
        let back: DTableJson = serde_json::from_str(&s).unwrap();
        assert_eq!(DTable::from_json(&back).unwrap(), a);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }
}
