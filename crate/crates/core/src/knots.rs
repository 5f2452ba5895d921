//! Alexander polynomials, torsion coefficients, and the surgery formula for
//! knots with a positive L-space surgery.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::Rational;
use crate::lens::lens_p1_closed_form;
use crate::table::DTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KnotError {
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
    #[error("polynomial is not symmetric under T -> T^-1")]
    NotSymmetric,
    #[error("polynomial evaluates to {value} at T = 1, expected 1")]
    NotNormalized { value: i64 },
    #[error("not of L-space form: {0}")]
    NotLSpaceForm(String),
    #[error("invalid gap sequence: {0}")]
    InvalidGaps(String),
    #[error("surgery coefficient must be positive, got {0}")]
    BadSurgery(i64),
}

/// Integer Laurent polynomial in `T`, stored densely from `min_deg`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    min_deg: i64,
    coeffs: Vec<i64>,
}

/// `{"min_deg":-2,"coeffs":[1,-1,1,-1,1]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub min_deg: i64,
    pub coeffs: Vec<i64>,
}

impl LaurentPoly {
    pub fn new(min_deg: i64, coeffs: Vec<i64>) -> Self {
        let mut p = Self { min_deg, coeffs };
        p.trim();
        p
    }

    pub fn one() -> Self {
        Self::new(0, vec![1])
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|&&c| c == 0).count();
        self.coeffs.drain(..lead);
        self.min_deg = if self.coeffs.is_empty() {
            0
        } else {
            self.min_deg + lead as i64
        };
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_deg(&self) -> i64 {
        self.min_deg
    }

    pub fn max_deg(&self) -> i64 {
        self.min_deg + self.coeffs.len() as i64 - 1
    }

    pub fn coeff(&self, d: i64) -> i64 {
        let k = d - self.min_deg;
        if k < 0 {
            return 0;
        }
        self.coeffs.get(k as usize).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn eval_at_one(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_zero()
            || (self.min_deg == -self.max_deg() && self.coeffs.iter().eq(self.coeffs.iter().rev()))
    }

    /// `T^k * self`.
    pub fn shifted(&self, k: i64) -> Self {
        Self::new(self.min_deg + k, self.coeffs.clone())
    }

    pub fn negated(&self) -> Self {
        Self::new(self.min_deg, self.coeffs.iter().map(|c| -c).collect())
    }

    /// Degrees with nonzero coefficient, ascending.
    pub fn support(&self) -> Vec<i64> {
        self.terms().map(|(d, _)| d).collect()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| (self.min_deg + k as i64, c))
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            min_deg: self.min_deg,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn from_json(json: &PolyJson) -> Self {
        Self::new(json.min_deg, json.coeffs.clone())
    }

    /// Accepts the text form or the JSON coefficient list.
    pub fn parse(s: &str) -> Result<Self, KnotError> {
        let s = s.trim();
        if s.starts_with('{') {
            let json: PolyJson =
                serde_json::from_str(s).map_err(|e| KnotError::Parse(e.to_string()))?;
            return Ok(Self::from_json(&json));
        }
        parse_text(s)
    }
}

fn parse_text(s: &str) -> Result<LaurentPoly, KnotError> {
    let text: String = s
        .replace('\u{2212}', "-")
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect();
    if text.is_empty() {
        return Err(KnotError::Parse("empty polynomial".into()));
    }
    let bad = |msg: &str| KnotError::Parse(format!("{msg} in {s:?}"));
    let chars: Vec<char> = text.chars().collect();
    let mut terms: Vec<(i64, i64)> = Vec::new();
    let mut pos = 0;
    let read_int = |pos: &mut usize| -> Option<i64> {
        let start = *pos;
        while *pos < chars.len() && chars[*pos].is_ascii_digit() {
            *pos += 1;
        }
        (start < *pos).then(|| chars[start..*pos].iter().collect::<String>().parse().ok())?
    };
    while pos < chars.len() {
        let mut sign = 1;
        match chars[pos] {
            '+' => pos += 1,
            '-' => {
                sign = -1;
                pos += 1
            }
            _ if !terms.is_empty() => return Err(bad("expected + or -")),
            _ => {}
        }
        let coeff = read_int(&mut pos);
        if pos < chars.len() && chars[pos] == '*' {
            pos += 1;
        }
        let mut degree = 0;
        let has_var = pos < chars.len() && matches!(chars[pos], 'T' | 't');
        if has_var {
            pos += 1;
            degree = 1;
            if pos < chars.len() && chars[pos] == '^' {
                pos += 1;
                let close = match chars.get(pos) {
                    Some('{') => Some('}'),
                    Some('(') => Some(')'),
                    _ => None,
                };
                if close.is_some() {
                    pos += 1;
                }
                let mut esign = 1;
                if chars.get(pos) == Some(&'-') {
                    esign = -1;
                    pos += 1;
                }
                degree = esign * read_int(&mut pos).ok_or_else(|| bad("missing exponent"))?;
                if let Some(c) = close {
                    if chars.get(pos) != Some(&c) {
                        return Err(bad("unbalanced exponent"));
                    }
                    pos += 1;
                }
            }
        } else if coeff.is_none() {
            return Err(bad("expected a term"));
        }
        terms.push((degree, sign * coeff.unwrap_or(1)));
    }
    let lo = terms.iter().map(|t| t.0).min().unwrap();
    let hi = terms.iter().map(|t| t.0).max().unwrap();
    let mut coeffs = vec![0i64; (hi - lo + 1) as usize];
    for (d, c) in terms {
        coeffs[(d - lo) as usize] += c;
    }
    Ok(LaurentPoly::new(lo, coeffs))
}

impl FromStr for LaurentPoly {
    type Err = KnotError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let mag = c.abs();
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c < 0 { '-' } else { '+' })?;
            }
            first = false;
            match (mag, d) {
                (_, 0) => write!(f, "{mag}")?,
                (1, 1) => write!(f, "T")?,
                (1, _) => write!(f, "T^{d}")?,
                (_, 1) => write!(f, "{mag}T")?,
                _ => write!(f, "{mag}T^{d}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// An Alexander polynomial as given. Operations that need it normalized
/// check symmetry and `Δ(1) = 1` themselves.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlexanderPoly(LaurentPoly);

impl AlexanderPoly {
    pub fn new(poly: LaurentPoly) -> Self {
        Self(poly)
    }

    pub fn unknot() -> Self {
        Self(LaurentPoly::one())
    }

    pub fn parse(s: &str) -> Result<Self, KnotError> {
        Ok(Self(LaurentPoly::parse(s)?))
    }

    pub fn poly(&self) -> &LaurentPoly {
        &self.0
    }

    pub fn coeff(&self, d: i64) -> i64 {
        self.0.coeff(d)
    }

    pub fn degree(&self) -> i64 {
        self.0.max_deg().max(0)
    }

    pub fn check(&self) -> Result<(), KnotError> {
        if !self.0.is_symmetric() {
            return Err(KnotError::NotSymmetric);
        }
        match self.0.eval_at_one() {
            1 => Ok(()),
            value => Err(KnotError::NotNormalized { value }),
        }
    }

    /// Multiplies by `+-T^k` to reach the symmetric representative with `Δ(1) = 1`.
    pub fn normalize(&self) -> Result<Self, KnotError> {
        let p = &self.0;
        if p.is_zero() {
            return Err(KnotError::NotNormalized { value: 0 });
        }
        let span = p.min_deg() + p.max_deg();
        if span % 2 != 0 {
            return Err(KnotError::NotSymmetric);
        }
        let mut q = p.shifted(-span / 2);
        match q.eval_at_one() {
            1 => {}
            -1 => q = q.negated(),
            value => return Err(KnotError::NotNormalized { value }),
        }
        let out = Self(q);
        out.check()?;
        Ok(out)
    }
}

impl fmt::Display for AlexanderPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for AlexanderPoly {
    type Err = KnotError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

/// `t_i` for `i = 0, 1, ..., deg Δ`; zero beyond, and `t_{-i} = t_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionCoeffs {
    pub values: Vec<i64>,
}

impl TorsionCoeffs {
    pub fn get(&self, i: i64) -> i64 {
        self.values
            .get(i.unsigned_abs() as usize)
            .copied()
            .unwrap_or(0)
    }

    pub fn all_zero(&self) -> bool {
        self.values.iter().all(|&t| t == 0)
    }
}

/// `t_i = sum_{j >= 0} j a_{i+j}`.
pub fn torsion_coeffs(delta: &AlexanderPoly) -> Result<TorsionCoeffs, KnotError> {
    delta.check()?;
    let g = delta.degree();
    let values = (0..=g)
        .map(|i| (1..=g - i).map(|j| j * delta.coeff(i + j)).sum())
        .collect();
    Ok(TorsionCoeffs { values })
}

/// Gap sequence `n_{-k} < ... < n_k` and gradings `δ_{-k}, ..., δ_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LSpaceKnotData {
    pub gaps: Vec<i64>,
    pub deltas: Vec<i64>,
}

impl LSpaceKnotData {
    /// Builds the data from gaps alone, computing the gradings.
    pub fn from_gaps(gaps: Vec<i64>) -> Result<Self, KnotError> {
        if gaps.len() % 2 != 1 {
            return Err(KnotError::InvalidGaps("need an odd number of gaps".into()));
        }
        if gaps.windows(2).any(|w| w[0] >= w[1]) {
            return Err(KnotError::InvalidGaps("gaps must increase".into()));
        }
        if gaps.iter().zip(gaps.iter().rev()).any(|(a, b)| *a != -b) {
            return Err(KnotError::InvalidGaps(
                "gaps must satisfy n_i = -n_-i".into(),
            ));
        }
        let len = gaps.len();
        let k = (len / 2) as i64;
        let mut deltas = vec![0i64; len];
        // index j holds i = j - k
        for j in (0..len - 1).rev() {
            let i = j as i64 - k;
            deltas[j] = if (k - i) % 2 == 1 {
                deltas[j + 1] - 2 * (gaps[j + 1] - gaps[j]) + 1
            } else {
                deltas[j + 1] - 1
            };
        }
        Ok(Self { gaps, deltas })
    }

    pub fn k(&self) -> usize {
        self.gaps.len() / 2
    }

    pub fn genus(&self) -> i64 {
        *self.gaps.last().unwrap()
    }

    pub fn unknot() -> Self {
        Self {
            gaps: vec![0],
            deltas: vec![0],
        }
    }
}

/// Checks that the nonzero coefficients are `+1, -1, +1, ..., +1` from the top
/// on an odd number of symmetric degrees.
fn lspace_form(delta: &AlexanderPoly) -> Result<Vec<i64>, KnotError> {
    let terms: Vec<(i64, i64)> = delta.poly().terms().collect();
    if terms.len() % 2 != 1 {
        return Err(KnotError::NotLSpaceForm(format!(
            "{} nonzero coefficients, expected an odd number",
            terms.len()
        )));
    }
    for (k, &(d, c)) in terms.iter().rev().enumerate() {
        let want = if k % 2 == 0 { 1 } else { -1 };
        if c != want {
            return Err(KnotError::NotLSpaceForm(format!(
                "coefficient of T^{d} is {c}, expected {want}"
            )));
        }
    }
    let gaps: Vec<i64> = terms.iter().map(|t| t.0).collect();
    if gaps.iter().zip(gaps.iter().rev()).any(|(a, b)| *a != -b) {
        return Err(KnotError::NotLSpaceForm("support is not symmetric".into()));
    }
    Ok(gaps)
}

pub fn gaps_from_alexander(delta: &AlexanderPoly) -> Result<LSpaceKnotData, KnotError> {
    let gaps = lspace_form(delta)?;
    LSpaceKnotData::from_gaps(gaps).map_err(|e| KnotError::NotLSpaceForm(e.to_string()))
}

pub fn genus_lspace(delta: &AlexanderPoly) -> Result<i64, KnotError> {
    Ok(gaps_from_alexander(delta)?.genus())
}

/// Table of `S^3_p(K)` over `Z/p`: label `i mod p` for `i` in `(-p/2, p/2]`
/// holds `d(L(p,1), i) - 2 t_|i|`.
pub fn surgery_d_table_lspace(delta: &AlexanderPoly, p: i64) -> Result<DTable, KnotError> {
    if p < 1 {
        return Err(KnotError::BadSurgery(p));
    }
    lspace_form(delta)?;
    let t = torsion_coeffs(delta)?;
    Ok(surgery_table_from_torsion(&t, p))
}

pub fn surgery_table_from_torsion(t: &TorsionCoeffs, p: i64) -> DTable {
    let values = (0..p)
        .map(|label| {
            let i = if 2 * label <= p { label } else { label - p };
            lens_p1_closed_form(p, label) - Rational::from(2 * t.get(i))
        })
        .collect();
    DTable::cyclic(values)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LSpaceCheck {
    Symmetric,
    Normalized,
    AlternatingForm,
    NonnegativeTorsion,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LSpaceReport {
    pub passed: bool,
    pub failed_check: Option<LSpaceCheck>,
    pub message: Option<String>,
    pub torsion: Option<Vec<i64>>,
}

/// Runs the checks in order on the polynomial exactly as given and reports
/// the first failure.
pub fn validate_lspace_alexander(delta: &AlexanderPoly) -> LSpaceReport {
    let fail = |check, msg: String| LSpaceReport {
        passed: false,
        failed_check: Some(check),
        message: Some(msg),
        torsion: None,
    };
    if !delta.poly().is_symmetric() {
        return fail(LSpaceCheck::Symmetric, KnotError::NotSymmetric.to_string());
    }
    let value = delta.poly().eval_at_one();
    if value != 1 {
        return fail(
            LSpaceCheck::Normalized,
            KnotError::NotNormalized { value }.to_string(),
        );
    }
    if let Err(e) = lspace_form(delta) {
        return fail(LSpaceCheck::AlternatingForm, e.to_string());
    }
    let t = torsion_coeffs(delta).expect("checked above");
    if let Some(i) = t.values.iter().position(|&x| x < 0) {
        return fail(
            LSpaceCheck::NonnegativeTorsion,
            format!("t_{i} = {} < 0", t.values[i]),
        );
    }
    LSpaceReport {
        passed: true,
        failed_check: None,
        message: None,
        torsion: Some(t.values),
    }
}

/// `Δ` of the `(2, 2n+1)` torus knot.
pub fn torus_2(n: i64) -> AlexanderPoly {
    let g = n;
    let coeffs = (0..=2 * g)
        .map(|k| if k % 2 == 0 { 1 } else { -1 })
        .collect();
    AlexanderPoly::new(LaurentPoly::new(-g, coeffs))
}

/// `Δ` of the `(p, q)` torus knot, `(t^{pq}-1)(t-1)/((t^p-1)(t^q-1))`, centered.
pub fn torus_knot(p: i64, q: i64) -> AlexanderPoly {
    let mul = |a: &[i64], b: &[i64]| {
        let mut out = vec![0i64; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    };
    // exact division by a monic polynomial
    let div = |a: &[i64], b: &[i64]| {
        let mut rem = a.to_vec();
        let n = a.len() - b.len() + 1;
        let mut out = vec![0i64; n];
        for k in (0..n).rev() {
            let c = rem[k + b.len() - 1] / b[b.len() - 1];
            out[k] = c;
            for (j, y) in b.iter().enumerate() {
                rem[k + j] -= c * y;
            }
        }
        debug_assert!(rem.iter().all(|&r| r == 0));
        out
    };
    let xm1 = |k: i64| {
        let mut v = vec![0i64; k as usize + 1];
        v[0] = -1;
        v[k as usize] = 1;
        v
    };
    let num = mul(&xm1(p * q), &xm1(1));
    let quot = div(&div(&num, &xm1(p)), &xm1(q));
    let deg = quot.len() as i64 - 1;
    AlexanderPoly::new(LaurentPoly::new(-deg / 2, quot))
}
