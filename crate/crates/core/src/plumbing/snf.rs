use super::PlumbingError;

/// Diagonalization `U Q V = diag(d_1, ..., d_n)` with `d_1 | d_2 | ... | d_n`,
/// keeping only the row transform `U`. Rows of `U` are reduced modulo their
/// invariant factor, which is all the coset labeling needs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    diag: Vec<i128>,
    u: Vec<Vec<i128>>,
}

impl SmithForm {
    pub fn new(matrix: &[Vec<i64>]) -> Result<Self, PlumbingError> {
        let n = matrix.len();
        let mut a: Vec<Vec<i128>> = matrix
            .iter()
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect();
        let mut u: Vec<Vec<i128>> = (0..n)
            .map(|i| (0..n).map(|j| (i == j) as i128).collect())
            .collect();

        for t in 0..n {
            loop {
                let Some((pr, pc)) = min_entry(&a, t) else {
                    return Err(PlumbingError::SingularForm);
                };
                a.swap(t, pr);
                u.swap(t, pr);
                for row in a.iter_mut() {
                    row.swap(t, pc);
                }

                let mut dirty = false;
                for i in t + 1..n {
                    let q = a[i][t].div_euclid(a[t][t]);
                    if q != 0 {
                        row_axpy(&mut a, i, t, -q)?;
                        row_axpy(&mut u, i, t, -q)?;
                    }
                    dirty |= a[i][t] != 0;
                }
                for j in t + 1..n {
                    let q = a[t][j].div_euclid(a[t][t]);
                    if q != 0 {
                        for row in a.iter_mut() {
                            row[j] = checked(row[j], row[t], -q)?;
                        }
                    }
                    dirty |= a[t][j] != 0;
                }
                if dirty {
                    continue;
                }
                // divisibility: fold an offending row into row t and retry
                let p = a[t][t];
                let offender = (t + 1..n).find(|&i| (t + 1..n).any(|j| a[i][j] % p != 0));
                match offender {
                    Some(i) => {
                        row_axpy(&mut a, t, i, 1)?;
                        row_axpy(&mut u, t, i, 1)?;
                    }
                    None => break,
                }
            }
            if a[t][t] < 0 {
                a[t][t] = -a[t][t];
                for x in u[t].iter_mut() {
                    *x = -*x;
                }
            }
        }

        let diag: Vec<i128> = (0..n).map(|i| a[i][i]).collect();
        for (row, &d) in u.iter_mut().zip(&diag) {
            for x in row.iter_mut() {
                *x = x.rem_euclid(d);
            }
        }
        Ok(Self { diag, u })
    }

    pub fn invariant_factors(&self) -> &[i128] {
        &self.diag
    }

    /// Factors `> 1`, ascending; the label group is their direct sum.
    pub fn factors(&self) -> Vec<u64> {
        self.diag
            .iter()
            .filter(|&&d| d > 1)
            .map(|&d| d as u64)
            .collect()
    }

    pub fn order(&self) -> u64 {
        self.diag.iter().product::<i128>() as u64
    }

    /// Coordinates of `v` in `Z/d_i` for the nontrivial factors.
    pub fn digits(&self, v: &[i64]) -> Vec<u64> {
        self.nontrivial()
            .map(|i| {
                let d = self.diag[i];
                let s: i128 = self.u[i]
                    .iter()
                    .zip(v)
                    .map(|(&c, &x)| c * (x as i128).rem_euclid(d) % d)
                    .sum();
                s.rem_euclid(d) as u64
            })
            .collect()
    }

    /// Column `j` of `U` restricted to the nontrivial rows.
    pub fn column(&self, j: usize) -> Vec<u64> {
        self.nontrivial().map(|i| self.u[i][j] as u64).collect()
    }

    fn nontrivial(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.diag.len()).filter(move |&i| self.diag[i] > 1)
    }
}

/// Mixed-radix encoding; the first factor is the least significant digit.
pub fn encode(digits: &[u64], factors: &[u64]) -> u64 {
    digits
        .iter()
        .zip(factors)
        .rev()
        .fold(0, |acc, (&d, &f)| acc * f + d)
}

pub fn decode(mut label: u64, factors: &[u64]) -> Vec<u64> {
    factors
        .iter()
        .map(|&f| {
            let d = label % f;
            label /= f;
            d
        })
        .collect()
}

fn min_entry(a: &[Vec<i128>], t: usize) -> Option<(usize, usize)> {
    let n = a.len();
    let mut best: Option<(usize, usize)> = None;
    for i in t..n {
        for j in t..n {
            if a[i][j] != 0 && best.map_or(true, |(r, c)| a[i][j].abs() < a[r][c].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn checked(x: i128, y: i128, k: i128) -> Result<i128, PlumbingError> {
    y.checked_mul(k)
        .and_then(|z| x.checked_add(z))
        .ok_or(PlumbingError::Overflow)
}

/// `row[dst] += k * row[src]`
fn row_axpy(m: &mut [Vec<i128>], dst: usize, src: usize, k: i128) -> Result<(), PlumbingError> {
    for j in 0..m[dst].len() {
        m[dst][j] = checked(m[dst][j], m[src][j], k)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_chain() {
        // [-3,-2,-2] has det -7 and cyclic cokernel
        let q = vec![vec![-3, 1, 0], vec![1, -2, 1], vec![0, 1, -2]];
        let s = SmithForm::new(&q).unwrap();
        assert_eq!(s.invariant_factors(), &[1, 1, 7]);
        assert_eq!(s.factors(), vec![7]);
    }

    #[test]
    fn star_is_not_cyclic() {
        // D4 lattice: cokernel Z/2 + Z/2
        let q = vec![
            vec![-2, 1, 1, 1],
            vec![1, -2, 0, 0],
            vec![1, 0, -2, 0],
            vec![1, 0, 0, -2],
        ];
        let s = SmithForm::new(&q).unwrap();
        assert_eq!(s.factors(), vec![2, 2]);
        assert_eq!(s.order(), 4);
    }

    #[test]
    fn image_of_q_has_label_zero() {
        let q = vec![
            vec![-2, 1, 1, 1],
            vec![1, -2, 0, 0],
            vec![1, 0, -2, 0],
            vec![1, 0, 0, -3],
        ];
        let s = SmithForm::new(&q).unwrap();
        for col in 0..4 {
            let v: Vec<i64> = (0..4).map(|r| q[r][col]).collect();
            assert!(s.digits(&v).iter().all(|&d| d == 0));
        }
        // and the digits of the unit vectors generate everything
        let f = s.factors();
        let mut seen = std::collections::BTreeSet::new();
        let mut frontier = vec![vec![0u64; f.len()]];
        while let Some(x) = frontier.pop() {
            if seen.insert(encode(&x, &f)) {
                for j in 0..4 {
                    let c = s.column(j);
                    let y: Vec<u64> = x
                        .iter()
                        .zip(&c)
                        .zip(&f)
                        .map(|((a, b), m)| (a + b) % m)
                        .collect();
                    frontier.push(y);
                }
            }
        }
        assert_eq!(seen.len() as u64, s.order());
    }

    #[test]
    fn mixed_radix() {
        let f = [2, 6];
        for label in 0..12 {
            assert_eq!(encode(&decode(label, &f), &f), label);
        }
        assert_eq!(encode(&[1, 2], &f), 5);
    }
}
