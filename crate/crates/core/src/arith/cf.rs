use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{ArithError, Rational};

pub const DEFAULT_MAX_LEN: usize = 4;
pub const DEFAULT_ENTRY_BOUND: i64 = 4;

/// `[a1, ..., an]` read as `a1 - 1/(a2 - 1/(... - 1/an))`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ContinuedFraction {
    entries: Vec<i64>,
}

impl ContinuedFraction {
    pub fn new(entries: Vec<i64>) -> Result<Self, ArithError> {
        if entries.is_empty() {
            return Err(ArithError::Empty);
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Evaluates from the last entry inwards; fails when a tail value is zero.
    pub fn eval(&self) -> Result<Rational, ArithError> {
        let n = self.entries.len();
        let mut tail = Rational::from(self.entries[n - 1]);
        for index in (0..n - 1).rev() {
            if tail.is_zero() {
                return Err(ArithError::ZeroTail { index: index + 1 });
            }
            tail = Rational::from(self.entries[index]) - tail.recip()?;
        }
        Ok(tail)
    }
}

/// Free-function form of [`ContinuedFraction::eval`].
pub fn cf_eval(cf: &ContinuedFraction) -> Result<Rational, ArithError> {
    cf.eval()
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, a) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ContinuedFraction {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| ArithError::Parse(format!("expected [a1,...,an], got {s:?}")))?;
        let entries = inner
            .split(',')
            .map(|t| {
                let t = t.trim().replace('\u{2212}', "-");
                t.parse::<i64>()
                    .map_err(|_| ArithError::Parse(format!("bad entry {t:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        ContinuedFraction::new(entries)
    }
}

impl Serialize for ContinuedFraction {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ContinuedFraction {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Expands `r = -p/q <= -1` as `[-b1, ..., -bn]` with every `bi >= 2`
/// (or `[-1]` for `r = -1`), peeling off `b = ceil(p/q)` at each step.
pub fn negative_expansion(r: Rational) -> Result<ContinuedFraction, ArithError> {
    if r > Rational::from(-1i64) {
        return Err(ArithError::OutOfRange { value: r });
    }
    let (mut p, mut q) = (-r.numer(), r.denom());
    let mut out = Vec::new();
    loop {
        if q == 1 {
            out.push(-(p as i64));
            break;
        }
        // mq < p < (m+1)q, and p/q = (m+1) - 1/(q/((m+1)q - p))
        let b = (p + q - 1) / q;
        out.push(-(b as i64));
        let next = b * q - p;
        p = q;
        q = next;
    }
    ContinuedFraction::new(out)
}

/// Positions `i` where the entry violates its bound: interior entries must be
/// `<= -2`, the two endpoints `<= -1`.
pub fn exception_indices(cf: &ContinuedFraction) -> Vec<usize> {
    let n = cf.len();
    cf.entries()
        .iter()
        .enumerate()
        .filter(|&(i, &a)| {
            let bound = if i == 0 || i == n - 1 { -1 } else { -2 };
            a > bound
        })
        .map(|(i, _)| i)
        .collect()
}

pub fn exception_count(cf: &ContinuedFraction) -> usize {
    exception_indices(cf).len()
}

/// Negative definiteness of the linear chain with these weights, from the
/// signs of the continuant minors `D_k = a_k D_{k-1} - D_{k-2}`.
pub fn chain_is_negative_definite(entries: &[i64]) -> bool {
    let (mut prev, mut cur) = (0i128, 1i128);
    for (k, &a) in entries.iter().enumerate() {
        let next = a as i128 * cur - prev;
        let sign_ok = if k % 2 == 0 { next < 0 } else { next > 0 };
        if !sign_ok {
            return false;
        }
        prev = cur;
        cur = next;
    }
    true
}

/// A continued fraction certifying membership of a slope in the admissible set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaWitness {
    pub slope: Rational,
    pub cf: ContinuedFraction,
    pub exception_indices: Vec<usize>,
}

impl OmegaWitness {
    /// Checks every witness invariant from scratch.
    pub fn validate(slope: Rational, cf: ContinuedFraction) -> Option<Self> {
        if cf.eval().ok()? != slope {
            return None;
        }
        let exception_indices = exception_indices(&cf);
        if exception_indices.len() > 2 || !chain_is_negative_definite(cf.entries()) {
            return None;
        }
        Some(Self {
            slope,
            cf,
            exception_indices,
        })
    }
}

/// Looks for a witness of `r`. Slopes `<= -1` always have one; anything else is
/// searched over continued fractions of length `<= max_len` with entries in
/// `[-entry_bound, entry_bound]`, shortest first, then lexicographically.
/// `None` means nothing was found within the bounds, not non-membership.
pub fn omega_check(r: Rational, max_len: usize, entry_bound: i64) -> Option<OmegaWitness> {
    if r.is_zero() {
        return None;
    }
    if r <= Rational::from(-1i64) {
        let cf = negative_expansion(r).ok()?;
        return OmegaWitness::validate(r, cf);
    }
    // Negative definite chains only ever bound negative slopes, so r > 0 is
    // never found; the search still runs so the answer is uniform.
    let span = (2 * entry_bound + 1) as usize;
    for len in 1..=max_len {
        let mut entries = vec![-entry_bound; len];
        let total = span.checked_pow(len as u32)?;
        for _ in 0..total {
            if exception_indices_slice(&entries) <= 2 && chain_is_negative_definite(&entries) {
                let cf = ContinuedFraction::new(entries.clone()).ok()?;
                if let Some(w) = OmegaWitness::validate(r, cf) {
                    return Some(w);
                }
            }
            // odometer, last entry fastest
            for slot in (0..len).rev() {
                if entries[slot] < entry_bound {
                    entries[slot] += 1;
                    break;
                }
                entries[slot] = -entry_bound;
            }
        }
    }
    None
}

fn exception_indices_slice(entries: &[i64]) -> usize {
    let n = entries.len();
    entries
        .iter()
        .enumerate()
        .filter(|&(i, &a)| a > if i == 0 || i == n - 1 { -1 } else { -2 })
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cf(v: &[i64]) -> ContinuedFraction {
        ContinuedFraction::new(v.to_vec()).unwrap()
    }

    fn q(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn eval_examples() {
        assert_eq!(cf(&[-5]).eval().unwrap(), q(-5, 1));
        assert_eq!(cf(&[-3, -2, -2]).eval().unwrap(), q(-7, 3));
        assert_eq!(cf(&[-2, -2, -2]).eval().unwrap(), q(-4, 3));
    }

    #[test]
    fn eval_zero_tail() {
        // [1, 1, 1]: tail 1 - 1/1 = 0 at index 1
        assert_eq!(
            cf(&[1, 1, 1]).eval(),
            Err(ArithError::ZeroTail { index: 1 })
        );
        assert!(ContinuedFraction::new(vec![]).is_err());
    }

    #[test]
    fn expansion_examples() {
        assert_eq!(negative_expansion(q(-5, 1)).unwrap(), cf(&[-5]));
        assert_eq!(negative_expansion(q(-7, 3)).unwrap(), cf(&[-3, -2, -2]));
        assert_eq!(negative_expansion(q(-1, 1)).unwrap(), cf(&[-1]));
        assert!(matches!(
            negative_expansion(q(-1, 2)),
            Err(ArithError::OutOfRange { .. })
        ));
    }

    #[test]
    fn exceptions() {
        assert_eq!(exception_count(&cf(&[-3, -2, -2])), 0);
        assert_eq!(exception_count(&cf(&[-1, -2, -1])), 0);
        assert_eq!(exception_count(&cf(&[0, 2])), 2);
        assert_eq!(exception_count(&cf(&[-1])), 0);
        assert_eq!(exception_count(&cf(&[0])), 1);
        assert_eq!(exception_indices(&cf(&[-2, -1, -3])), vec![1]);
    }

    #[test]
    fn omega_examples() {
        let w = omega_check(q(-7, 1), 4, 4).unwrap();
        assert_eq!(w.cf, cf(&[-7]));
        assert!(w.exception_indices.is_empty());
        assert_eq!(omega_check(q(-7, 3), 4, 4).unwrap().cf, cf(&[-3, -2, -2]));
        assert_eq!(omega_check(q(-3, 2), 4, 4).unwrap().cf, cf(&[-2, -2]));
    }

    #[test]
    fn omega_search_between_minus_one_and_zero() {
        let w = omega_check(q(-1, 2), 4, 4).unwrap();
        assert_eq!(w.cf.eval().unwrap(), q(-1, 2));
        assert!(chain_is_negative_definite(w.cf.entries()));
        // positive slopes are never certified
        assert!(omega_check(q(3, 2), 3, 3).is_none());
        assert!(omega_check(Rational::ZERO, 3, 3).is_none());
    }

    #[test]
    fn definiteness_of_chains() {
        assert!(chain_is_negative_definite(&[-3, -2, -2]));
        assert!(!chain_is_negative_definite(&[0, 2]));
        assert!(chain_is_negative_definite(&[-1, -2]));
        assert!(!chain_is_negative_definite(&[-1, -1]));
    }

    #[test]
    fn cf_text() {
        let c: ContinuedFraction = "[-3, -2,\u{2212}2]".parse().unwrap();
        assert_eq!(c.to_string(), "[-3,-2,-2]");
        assert!("-3,-2".parse::<ContinuedFraction>().is_err());
    }
}
