#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use hfd_core::arith::negative_expansion;
use hfd_core::cfk::{staircase, Arrow, CFKComplex, Generator};
use hfd_core::knots::{torus_knot, AlexanderPoly, LSpaceKnotData};
use hfd_core::plumbing::PlumbedTree;
use hfd_core::Rational;
use rand::Rng;

/// Torus knots whose Alexander polynomials make up the regression set.
pub const REGRESSION_TORUS: [(i64, i64); 8] = [
    (2, 3),
    (2, 5),
    (2, 7),
    (3, 4),
    (3, 5),
    (2, 9),
    (3, 7),
    (4, 5),
];

pub fn regression_knots() -> Vec<(String, AlexanderPoly)> {
    REGRESSION_TORUS
        .iter()
        .map(|&(p, q)| (format!("T({p},{q})"), torus_knot(p, q)))
        .collect()
}

/// `t_i = sum_{j >= 1} j a_{i+j}`, read straight off the coefficients.
pub fn oracle_torsion(delta: &AlexanderPoly, i: i64) -> i64 {
    let i = i.abs();
    let top = delta.degree();
    (1..=top.max(0) + 1).map(|j| j * delta.coeff(i + j)).sum()
}

/// Lens space correction terms by the two-term recursion, in reduced `(num, den)` pairs.
pub fn oracle_lens(p: i64, q: i64, i: i64) -> Rational {
    fn go(p: i128, q: i128, i: i128) -> (i128, i128) {
        if p == 1 {
            return (0, 1);
        }
        let q = q.rem_euclid(p);
        let i = i.rem_euclid(p);
        let s = 2 * i + 1 - p - q;
        let (a, b) = (s * s - p * q, 4 * p * q);
        let (c, d) = go(q, p % q, i % q);
        (a * d - c * b, b * d)
    }
    let (n, d) = go(p as i128, q as i128, i as i128);
    Rational::new(n, d)
}

pub fn oracle_lens_p1(p: i64, i: i64) -> Rational {
    let (p, i) = (p as i128, i as i128);
    Rational::new((2 * i - p) * (2 * i - p) - p, 4 * p)
}

pub fn random_gaps(rng: &mut impl Rng, max_k: usize, max_step: i64) -> LSpaceKnotData {
    let k = rng.gen_range(1..=max_k);
    let mut top = vec![0i64];
    for _ in 0..k {
        let last = *top.last().unwrap();
        top.push(last + rng.gen_range(1..=max_step));
    }
    let mut gaps: Vec<i64> = top.iter().rev().map(|n| -n).collect();
    gaps.extend_from_slice(&top[1..]);
    LSpaceKnotData::from_gaps(gaps).unwrap()
}

fn toggle(set: &mut BTreeSet<Arrow>, a: Arrow) {
    if !set.remove(&a) {
        set.insert(a);
    }
}

/// A staircase plus acyclic pieces, scrambled by filtered changes of basis
/// `x_i <- x_i + U^s x_j`. Every piece is acyclic in each column, so the
/// result stays `S^3`-like and keeps the staircase's invariants.
pub fn random_complex(rng: &mut impl Rng) -> CFKComplex {
    let data = if rng.gen_bool(0.2) {
        LSpaceKnotData::unknot()
    } else {
        random_gaps(rng, 3, 3)
    };
    let base = staircase(&data).unwrap();
    let mut gens: Vec<Generator> = base.generators().to_vec();
    let mut arrows: BTreeSet<Arrow> = base.arrows().copied().collect();
    let add = |gens: &mut Vec<Generator>, gr: i64, alex: i64| {
        let k = gens.len();
        gens.push(Generator {
            name: format!("g{k}"),
            gr,
            alex,
        });
        k
    };
    for _ in 0..rng.gen_range(0..=3) {
        let g = rng.gen_range(-6..=2);
        let a = rng.gen_range(-3..=3);
        if rng.gen_bool(0.5) {
            // vertical pair, level-preserving when h = 0
            let h = rng.gen_range(0..=2);
            let x = add(&mut gens, g, a);
            let y = add(&mut gens, g - 1, a - h);
            arrows.insert(Arrow {
                from: x,
                to: y,
                u: 0,
            });
        } else {
            let h = rng.gen_range(1..=2);
            let w = rng.gen_range(1..=2);
            let x = add(&mut gens, g, a);
            let b = add(&mut gens, g - 1, a - h);
            let c = add(&mut gens, g - 1 + 2 * w, a + w);
            let d = add(&mut gens, g - 2 + 2 * w, a - h + w);
            for (from, to, u) in [(x, b, 0), (x, c, w), (b, d, w), (c, d, 0)] {
                arrows.insert(Arrow { from, to, u });
            }
        }
    }
    let n = gens.len();
    for _ in 0..rng.gen_range(0..=10) {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        let diff = gens[j].gr - gens[i].gr;
        if i == j || diff < 0 || diff % 2 != 0 {
            continue;
        }
        let s = diff / 2;
        if gens[j].alex - s > gens[i].alex {
            continue;
        }
        let from_j: Vec<Arrow> = arrows.iter().filter(|a| a.from == j).copied().collect();
        let into_i: Vec<Arrow> = arrows.iter().filter(|a| a.to == i).copied().collect();
        for a in from_j {
            toggle(
                &mut arrows,
                Arrow {
                    from: i,
                    to: a.to,
                    u: a.u + s,
                },
            );
        }
        for a in into_i {
            toggle(
                &mut arrows,
                Arrow {
                    from: a.from,
                    to: j,
                    u: a.u + s,
                },
            );
        }
    }
    CFKComplex::new(gens, arrows.into_iter().collect()).unwrap()
}

fn rank_f2(mut rows: Vec<Vec<u8>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][col] == 1) else {
            continue;
        };
        rows.swap(rank, p);
        for r in 0..rows.len() {
            if r != rank && rows[r][col] == 1 {
                let pivot = rows[rank].clone();
                for (x, y) in rows[r].iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Homology of the translates `[x, i, A_x + i]` with `keep(i, j)`, in every
/// grading of `window`, by dense elimination.
pub fn oracle_homology(
    c: &CFKComplex,
    keep: impl Fn(i64, i64) -> bool,
    window: (i64, i64),
) -> BTreeMap<i64, usize> {
    let gens = c.generators();
    let chains = |l: i64| -> Vec<(usize, i64)> {
        gens.iter()
            .enumerate()
            .filter(|(_, g)| (l - g.gr).rem_euclid(2) == 0)
            .map(|(x, g)| (x, (l - g.gr) / 2))
            .filter(|&(x, i)| keep(i, gens[x].alex + i))
            .collect()
    };
    let matrix = |l: i64| -> (usize, Vec<Vec<u8>>) {
        let src = chains(l);
        let dst = chains(l - 1);
        let rows = src
            .iter()
            .map(|&(x, i)| {
                let mut row = vec![0u8; dst.len()];
                for a in c.arrows().filter(|a| a.from == x) {
                    if let Some(k) = dst.iter().position(|&t| t == (a.to, i - a.u)) {
                        row[k] ^= 1;
                    }
                }
                row
            })
            .collect();
        (src.len(), rows)
    };
    let mut out = BTreeMap::new();
    for l in window.0..=window.1 {
        let (n, here) = matrix(l);
        let (_, above) = matrix(l + 1);
        let d = n - rank_f2(here) - rank_f2(above);
        if d > 0 {
            out.insert(l, d);
        }
    }
    out
}

pub fn lens_chain(p: i64, q: i64) -> PlumbedTree {
    let cf = negative_expansion(Rational::new(-(p as i128), q as i128)).unwrap();
    PlumbedTree::linear(&cf)
}

fn tree(weights: &[(i64, i64)], edges: &[(i64, i64)]) -> PlumbedTree {
    PlumbedTree::new(weights, edges).unwrap()
}

/// Plumbing trees used by the regression and stability checks.
pub fn plumbing_regression() -> Vec<(String, PlumbedTree)> {
    let mut out: Vec<(String, PlumbedTree)> = [(7, 3), (13, 5), (30, 7), (29, 12), (17, 1)]
        .iter()
        .map(|&(p, q)| (format!("chain -{p}/{q}"), lens_chain(p, q)))
        .collect();
    out.push((
        "E8".into(),
        tree(
            &[
                (1, -2),
                (2, -2),
                (3, -2),
                (4, -2),
                (5, -2),
                (6, -2),
                (7, -2),
                (8, -2),
            ],
            &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (3, 8)],
        ),
    ));
    out.push((
        "Sigma(2,3,7)".into(),
        tree(
            &[(0, -1), (1, -2), (2, -3), (3, -7)],
            &[(0, 1), (0, 2), (0, 3)],
        ),
    ));
    out.push((
        "D4".into(),
        tree(
            &[(0, -2), (1, -2), (2, -2), (3, -2)],
            &[(0, 1), (0, 2), (0, 3)],
        ),
    ));
    out.push((
        "two bad vertices".into(),
        tree(
            &[(0, -2), (1, -2), (2, -3), (3, -3), (4, -3), (5, -3)],
            &[(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)],
        ),
    ));
    out.push((
        "star -3; -2,-2,-3,-5".into(),
        tree(
            &[(0, -3), (1, -2), (2, -2), (3, -3), (4, -5)],
            &[(0, 1), (0, 2), (0, 3), (0, 4)],
        ),
    ));
    out
}

fn solve(q: &[Vec<i64>], k: &[i64]) -> Vec<Rational> {
    let n = q.len();
    let mut a: Vec<Vec<Rational>> = q
        .iter()
        .zip(k)
        .map(|(row, &b)| {
            let mut r: Vec<Rational> = row.iter().map(|&x| Rational::from(x)).collect();
            r.push(Rational::from(b));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero()).unwrap();
        a.swap(col, p);
        let pivot = a[col][col];
        for c in col..=n {
            a[col][c] = a[col][c] / pivot;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for c in col..=n {
                    let v = a[col][c];
                    a[r][c] = a[r][c] - f * v;
                }
            }
        }
    }
    a.into_iter().map(|r| r[n]).collect()
}

/// Correction terms of the boundary of a negative definite plumbing, sorted,
/// by brute force over characteristic vectors in `[m - 2, -m + 2]`. Classes
/// are told apart by `Q^{-1} K / 2 mod Z^n`. `None` when the box is too big.
pub fn oracle_plumbing_values(tree: &PlumbedTree, cap: u64) -> Option<Vec<Rational>> {
    let n = tree.len();
    let w = tree.weights();
    let mut q = vec![vec![0i64; n]; n];
    for v in 0..n {
        q[v][v] = w[v];
    }
    for &(a, b) in tree.edges() {
        q[a][b] = 1;
        q[b][a] = 1;
    }
    let ranges: Vec<Vec<i64>> = w
        .iter()
        .map(|&m| (m - 2..=-m + 2).step_by(2).collect())
        .collect();
    let size: u64 = ranges.iter().map(|r| r.len() as u64).product();
    if size > cap {
        return None;
    }
    let mut best: BTreeMap<Vec<Rational>, Rational> = BTreeMap::new();
    let mut idx = vec![0usize; n];
    loop {
        let k: Vec<i64> = idx.iter().zip(&ranges).map(|(&i, r)| r[i]).collect();
        let x = solve(&q, &k);
        let square: Rational = x.iter().zip(&k).map(|(a, &b)| *a * Rational::from(b)).sum();
        let value = (square + Rational::from(n as i64)) / Rational::from(4i64);
        let key: Vec<Rational> = x
            .iter()
            .map(|y| {
                let h = *y / Rational::from(2i64);
                h - Rational::from(h.floor() as i64)
            })
            .collect();
        let e = best.entry(key).or_insert(value);
        if value > *e {
            *e = value;
        }
        let mut v = 0;
        loop {
            if v == n {
                let mut out: Vec<Rational> = best.into_values().collect();
                out.sort();
                return Some(out);
            }
            idx[v] += 1;
            if idx[v] < ranges[v].len() {
                break;
            }
            idx[v] = 0;
            v += 1;
        }
    }
}
