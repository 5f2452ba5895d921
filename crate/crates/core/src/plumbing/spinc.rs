use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::snf::{decode, encode, SmithForm};
use super::{IntersectionForm, PlumbingError};

/// A characteristic covector, `K_v = m(v) (mod 2)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CharVector(pub Vec<i64>);

impl CharVector {
    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn conjugate(&self) -> Self {
        Self(self.0.iter().map(|&x| -x).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinCClass {
    pub label: u64,
    pub representative: CharVector,
}

/// Characteristic covectors modulo `2Q Z^n`, labeled through the Smith form
/// of `Q`: `K` goes to the image of `(K - m)/2` in `Z^n / Q Z^n`.
#[derive(Clone, Debug)]
pub struct SpinCStructures {
    weights: Vec<i64>,
    snf: SmithForm,
    factors: Vec<u64>,
}

impl SpinCStructures {
    pub fn new(form: &IntersectionForm) -> Result<Self, PlumbingError> {
        let snf = SmithForm::new(form.matrix())?;
        let factors = snf.factors();
        Ok(Self {
            weights: form.weights(),
            snf,
            factors,
        })
    }

    pub fn count(&self) -> u64 {
        self.snf.order()
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() <= 1
    }

    pub fn label_of(&self, k: &CharVector) -> Result<u64, PlumbingError> {
        Ok(encode(&self.digits_of(k)?, &self.factors))
    }

    pub fn digits_of(&self, k: &CharVector) -> Result<Vec<u64>, PlumbingError> {
        let k = k.as_slice();
        if k.len() != self.weights.len()
            || k.iter()
                .zip(&self.weights)
                .any(|(a, m)| (a - m).rem_euclid(2) != 0)
        {
            return Err(PlumbingError::NotCharacteristic);
        }
        let v: Vec<i64> = k
            .iter()
            .zip(&self.weights)
            .map(|(a, m)| (a - m) / 2)
            .collect();
        Ok(self.snf.digits(&v))
    }

    /// Digit increments caused by `K_v += 2`.
    pub fn step(&self, v: usize) -> Vec<u64> {
        self.snf.column(v)
    }

    pub fn encode(&self, digits: &[u64]) -> u64 {
        encode(digits, &self.factors)
    }

    pub fn decode(&self, label: u64) -> Vec<u64> {
        decode(label, &self.factors)
    }

    /// Label of the class of `-K` for any `K` in the class `label`.
    pub fn conjugate(&self, label: u64) -> u64 {
        let m_digits = self.snf.digits(&self.weights);
        let a = self.decode(label);
        let digits: Vec<u64> = a
            .iter()
            .zip(&m_digits)
            .zip(&self.factors)
            .map(|((&x, &y), &f)| (2 * f - x - y) % f)
            .collect();
        self.encode(&digits)
    }

    /// One class per label, in label order. Representatives are the first
    /// covectors reached by a breadth-first walk from `K = m` in steps of
    /// `+-2 e_v`, so they are short and deterministic.
    pub fn classes(&self) -> Vec<SpinCClass> {
        let n = self.weights.len();
        let total = self.count() as usize;
        let mut reps: Vec<Option<CharVector>> = vec![None; total];
        let start = CharVector(self.weights.clone());
        let start_digits = vec![0u64; self.factors.len()];
        reps[0] = Some(start.clone());
        let mut found = 1;
        let steps: Vec<Vec<u64>> = (0..n).map(|v| self.step(v)).collect();
        let mut queue = VecDeque::from([(start, start_digits)]);
        while let Some((k, digits)) = queue.pop_front() {
            if found == total {
                break;
            }
            for v in 0..n {
                for sign in [1i64, -1] {
                    let nd: Vec<u64> = digits
                        .iter()
                        .zip(&steps[v])
                        .zip(&self.factors)
                        .map(|((&a, &s), &f)| {
                            if sign > 0 {
                                (a + s) % f
                            } else {
                                (a + f - s) % f
                            }
                        })
                        .collect();
                    let label = self.encode(&nd) as usize;
                    if reps[label].is_none() {
                        let mut nk = k.clone();
                        nk.0[v] += 2 * sign;
                        reps[label] = Some(nk.clone());
                        found += 1;
                        queue.push_back((nk, nd));
                    }
                }
            }
        }
        reps.into_iter()
            .enumerate()
            .map(|(label, rep)| SpinCClass {
                label: label as u64,
                representative: rep.expect("unit steps generate the cokernel"),
            })
            .collect()
    }
}
