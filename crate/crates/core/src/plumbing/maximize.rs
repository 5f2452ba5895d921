//! Maximization of `K^T Q^{-1} K` over the characteristic covectors of one
//! spin^c class, for negative definite `Q`.
//!
//! If `K' = K + 2 Q e_v` then `K'^2 = K^2 + 4 (K_v + m_v)`, and symmetrically
//! for `K - 2 Q e_v`. So every maximizer satisfies `m_v <= K_v <= -m_v`, which
//! is why the box `[m_v - 2s, -m_v + 2s]` gives the same answer for every
//! slack `s >= 0`. Small boxes are enumerated outright; large ones are solved
//! by dynamic programming over the tree in the coordinates `K = K0 + 2 Q x`.

use std::thread;

use super::spinc::{CharVector, SpinCClass, SpinCStructures};
use super::{IntersectionForm, PlumbingError};
use crate::arith::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Enumerate when the box has at most `enumeration_cap` points.
    #[default]
    Auto,
    Enumerate,
    TreeDp,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaximizeOptions {
    pub slack: u32,
    pub strategy: Strategy,
    pub jobs: usize,
    pub enumeration_cap: u128,
    /// Largest slack tried when a class has no point in the box.
    pub slack_cap: u32,
}

impl Default for MaximizeOptions {
    fn default() -> Self {
        Self {
            slack: 1,
            strategy: Strategy::Auto,
            jobs: 1,
            enumeration_cap: 250_000,
            slack_cap: 6,
        }
    }
}

impl MaximizeOptions {
    pub fn with_slack(slack: u32) -> Self {
        Self {
            slack,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassMax {
    pub label: u64,
    /// `max K^T Q^{-1} K` over the class.
    pub square: Rational,
    /// `(square + n) / 4`.
    pub value: Rational,
    pub maximizer: CharVector,
    /// Slack of the box that was searched.
    pub slack: u32,
}

pub fn box_bounds(form: &IntersectionForm, slack: u32) -> (Vec<i64>, Vec<i64>) {
    let s = 2 * slack as i64;
    let m = form.weights();
    (
        m.iter().map(|&w| w - s).collect(),
        m.iter().map(|&w| -w + s).collect(),
    )
}

pub fn box_size(form: &IntersectionForm, slack: u32) -> u128 {
    let (lo, hi) = box_bounds(form, slack);
    lo.iter()
        .zip(&hi)
        .map(|(&l, &h)| if h < l { 0 } else { ((h - l) / 2 + 1) as u128 })
        .fold(1u128, |acc, c| acc.saturating_mul(c))
}

fn value_of(square: Rational, n: usize) -> Rational {
    (square + Rational::from(n as i64)) * Rational::new(1, 4)
}

/// Maxima for every class, in label order.
pub fn maximize_all(
    form: &IntersectionForm,
    spinc: &SpinCStructures,
    opts: &MaximizeOptions,
) -> Result<Vec<ClassMax>, PlumbingError> {
    let mut slack = opts.slack;
    loop {
        let enumerate = match opts.strategy {
            Strategy::Enumerate => true,
            Strategy::TreeDp => false,
            Strategy::Auto => box_size(form, slack) <= opts.enumeration_cap,
        };
        if enumerate {
            if opts.strategy == Strategy::Enumerate && box_size(form, slack) > opts.enumeration_cap
            {
                return Err(PlumbingError::BoxTooLarge {
                    points: box_size(form, slack),
                    cap: opts.enumeration_cap,
                });
            }
            let found = enumerate_box(form, spinc, slack, opts.jobs)?;
            if found.iter().all(Option::is_some) {
                return Ok(found.into_iter().flatten().collect());
            }
        } else {
            let classes = spinc.classes();
            let solver = TreeSolver::new(form, slack)?;
            let results = parallel_map(&classes, opts.jobs, |c| solver.solve(spinc, c))?;
            if results.iter().all(Option::is_some) {
                return Ok(results.into_iter().flatten().collect());
            }
        }
        if slack >= opts.slack_cap.max(opts.slack) {
            return Err(PlumbingError::EmptyBox { slack });
        }
        slack += 1;
    }
}

/// Maximum for a single class.
pub fn maximize_class(
    form: &IntersectionForm,
    spinc: &SpinCStructures,
    class: &SpinCClass,
    opts: &MaximizeOptions,
) -> Result<ClassMax, PlumbingError> {
    let label = spinc.label_of(&class.representative)?;
    let mut slack = opts.slack;
    loop {
        let enumerate = match opts.strategy {
            Strategy::Enumerate => true,
            Strategy::TreeDp => false,
            Strategy::Auto => box_size(form, slack) <= opts.enumeration_cap,
        };
        let found = if enumerate {
            enumerate_box(form, spinc, slack, opts.jobs)?.swap_remove(label as usize)
        } else {
            TreeSolver::new(form, slack)?.solve(spinc, class)?
        };
        if let Some(found) = found {
            return Ok(found);
        }
        if slack >= opts.slack_cap.max(opts.slack) {
            return Err(PlumbingError::EmptyBox { slack });
        }
        slack += 1;
    }
}

fn parallel_map<T: Sync, R: Send>(
    items: &[T],
    jobs: usize,
    f: impl Fn(&T) -> Result<R, PlumbingError> + Sync,
) -> Result<Vec<R>, PlumbingError> {
    let jobs = jobs.max(1).min(items.len().max(1));
    if jobs == 1 {
        return items.iter().map(&f).collect();
    }
    let chunk = items.len().div_ceil(jobs);
    thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| scope.spawn(|| part.iter().map(&f).collect::<Result<Vec<R>, _>>()))
            .collect();
        let mut out = Vec::with_capacity(items.len());
        for h in handles {
            out.extend(h.join().expect("worker panicked")?);
        }
        Ok(out)
    })
}

// ---------------------------------------------------------------------------
// box enumeration

struct Best {
    key: i128,
    k: Vec<i64>,
}

/// Walks the box with an odometer, keeping `w = adj(Q) K` and
/// `sq = K^T adj(Q) K` up to date with one column update per step.
fn enumerate_box(
    form: &IntersectionForm,
    spinc: &SpinCStructures,
    slack: u32,
    jobs: usize,
) -> Result<Vec<Option<ClassMax>>, PlumbingError> {
    let n = form.dim();
    let det = form.det();
    let sign = det.signum();
    let adj = form.adjugate()?;
    let (lo, hi) = box_bounds(form, slack);
    let total = spinc.count() as usize;
    let factors = spinc.factors().to_vec();
    let steps: Vec<Vec<u64>> = (0..n).map(|v| spinc.step(v)).collect();

    let first_values: Vec<i64> = (lo[0]..=hi[0]).step_by(2).collect();
    let run = |firsts: &[i64]| -> Result<Vec<Option<Best>>, PlumbingError> {
        let mut best: Vec<Option<Best>> = (0..total).map(|_| None).collect();
        for &k0 in firsts {
            let mut k = lo.clone();
            k[0] = k0;
            let mut w: Vec<i128> = (0..n)
                .map(|i| (0..n).map(|j| adj[i][j] * k[j] as i128).sum())
                .collect();
            let mut sq: i128 = (0..n).map(|i| k[i] as i128 * w[i]).sum();
            let mut digits = spinc.digits_of(&CharVector(k.clone()))?;
            loop {
                let label = spinc.encode(&digits) as usize;
                let key = sq * sign;
                if best[label].as_ref().map_or(true, |b| key > b.key) {
                    best[label] = Some(Best { key, k: k.clone() });
                }
                // advance coordinates 1..n, last fastest
                let mut done = true;
                for v in (1..n).rev() {
                    let delta = if k[v] < hi[v] { 2 } else { lo[v] - hi[v] };
                    let d = delta as i128;
                    sq += 2 * d * w[v] + d * d * adj[v][v];
                    for (wi, row) in w.iter_mut().zip(&adj) {
                        *wi += d * row[v];
                    }
                    k[v] += delta;
                    let half = (delta / 2) as i128;
                    for ((a, &s), &f) in digits.iter_mut().zip(&steps[v]).zip(&factors) {
                        let inc = (half * s as i128).rem_euclid(f as i128) as u64;
                        *a = (*a + inc) % f;
                    }
                    if delta > 0 {
                        done = false;
                        break;
                    }
                }
                if done {
                    break;
                }
            }
        }
        Ok(best)
    };

    let jobs = jobs.max(1).min(first_values.len());
    let parts: Vec<Vec<Option<Best>>> = if jobs == 1 {
        vec![run(&first_values)?]
    } else {
        let chunk = first_values.len().div_ceil(jobs);
        thread::scope(|scope| {
            let handles: Vec<_> = first_values
                .chunks(chunk)
                .map(|part| scope.spawn(|| run(part)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("worker panicked"))
                .collect::<Result<Vec<_>, _>>()
        })?
    };

    let mut merged: Vec<Option<Best>> = (0..total).map(|_| None).collect();
    for part in parts {
        for (slot, cand) in merged.iter_mut().zip(part) {
            if let Some(c) = cand {
                if slot.as_ref().map_or(true, |b| c.key > b.key) {
                    *slot = Some(c);
                }
            }
        }
    }
    let detr = Rational::from(det);
    Ok(merged
        .into_iter()
        .enumerate()
        .map(|(label, b)| {
            b.map(|b| {
                let square = Rational::from(b.key * sign) / detr;
                ClassMax {
                    label: label as u64,
                    square,
                    value: value_of(square, n),
                    maximizer: CharVector(b.k),
                    slack,
                }
            })
        })
        .collect())
}

// ---------------------------------------------------------------------------
// tree dynamic programming

/// With `K = K0 + 2 Q x`, `K^2 = K0^2 + 4 g(x)` where
/// `g(x) = sum_v (K0_v x_v + m_v x_v^2) + sum_{vw} 2 Q_vw x_v x_w`
/// is a sum of vertex and edge terms, so it is maximized leaf to root.
struct TreeSolver<'a> {
    form: &'a IntersectionForm,
    inverse: Vec<Vec<Rational>>,
    lo: Vec<i64>,
    hi: Vec<i64>,
    slack: u32,
    /// Vertices in an order where each child precedes its parent.
    order: Vec<usize>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
}

impl<'a> TreeSolver<'a> {
    fn new(form: &'a IntersectionForm, slack: u32) -> Result<Self, PlumbingError> {
        let n = form.dim();
        let mut adjacency = vec![Vec::new(); n];
        for (a, b) in form.edges() {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        let mut seen = vec![false; n];
        let mut preorder = Vec::with_capacity(n);
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut stack = vec![root];
            while let Some(v) = stack.pop() {
                preorder.push(v);
                for &w in &adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        parent[w] = Some(v);
                        children[v].push(w);
                        stack.push(w);
                    }
                }
            }
        }
        preorder.reverse();
        let (lo, hi) = box_bounds(form, slack);
        Ok(Self {
            form,
            inverse: form.inverse()?,
            lo,
            hi,
            slack,
            order: preorder,
            parent,
            children,
        })
    }

    /// Integer range of `x_v` over the preimage of the box.
    fn x_range(&self, k0: &[i64], v: usize) -> (i64, i64) {
        let two = Rational::from(2i64);
        let (mut a, mut b) = (Rational::ZERO, Rational::ZERO);
        for w in 0..k0.len() {
            let c = self.inverse[v][w];
            let p = c * Rational::from(self.lo[w] - k0[w]);
            let q = c * Rational::from(self.hi[w] - k0[w]);
            a += p.min(q);
            b += p.max(q);
        }
        ((a / two).ceil() as i64, (b / two).floor() as i64)
    }

    fn solve(
        &self,
        spinc: &SpinCStructures,
        class: &SpinCClass,
    ) -> Result<Option<ClassMax>, PlumbingError> {
        let n = self.form.dim();
        let k0 = class.representative.as_slice();
        let ranges: Vec<(i64, i64)> = (0..n).map(|v| self.x_range(k0, v)).collect();
        if ranges.iter().any(|&(a, b)| a > b) {
            return Ok(None);
        }

        // table[v][x - lo_v] = best value of the subtree of v given x_v
        let mut table: Vec<Vec<i128>> = vec![Vec::new(); n];
        // choice[c][x_parent - lo_parent] = best x_c
        let mut choice: Vec<Vec<i64>> = vec![Vec::new(); n];
        for &v in &self.order {
            let (a, b) = ranges[v];
            let m = self.form.entry(v, v) as i128;
            let mut vals: Vec<i128> = (a..=b)
                .map(|x| {
                    let x = x as i128;
                    k0[v] as i128 * x + m * x * x
                })
                .collect();
            for &c in &self.children[v] {
                let (ca, _) = ranges[c];
                let hull = upper_hull(ca, &table[c]);
                let q2 = 2 * self.form.entry(v, c) as i128;
                let mut picks = Vec::with_capacity(vals.len());
                for (slot, x) in vals.iter_mut().zip(a..=b) {
                    let (xc, best) = query(&hull, q2 * x as i128);
                    *slot += best;
                    picks.push(xc);
                }
                choice[c] = picks;
            }
            table[v] = vals;
        }

        let mut x = vec![0i64; n];
        for &v in self.order.iter().rev() {
            let (a, _) = ranges[v];
            x[v] = match self.parent[v] {
                None => {
                    let t = &table[v];
                    let (i, _) =
                        t.iter().enumerate().fold(
                            (0, t[0]),
                            |acc, (i, &y)| if y > acc.1 { (i, y) } else { acc },
                        );
                    a + i as i64
                }
                Some(p) => choice[v][(x[p] - ranges[p].0) as usize],
            };
        }

        let k: Vec<i64> = (0..n)
            .map(|v| k0[v] + 2 * (0..n).map(|w| self.form.entry(v, w) * x[w]).sum::<i64>())
            .collect();
        if k.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .any(|(&kv, (&l, &h))| kv < l || kv > h)
        {
            return Ok(None);
        }
        let maximizer = CharVector(k);
        debug_assert_eq!(spinc.label_of(&maximizer)?, class.label);
        let square = self.form.char_square(maximizer.as_slice())?;
        Ok(Some(ClassMax {
            label: class.label,
            square,
            value: value_of(square, n),
            maximizer,
            slack: self.slack,
        }))
    }
}

/// Upper convex hull of the points `(start + i, ys[i])`, left to right.
fn upper_hull(start: i64, ys: &[i128]) -> Vec<(i64, i128)> {
    let mut hull: Vec<(i64, i128)> = Vec::new();
    for (i, &y) in ys.iter().enumerate() {
        let p = (start + i as i64, y);
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            let cross = (x2 - x1) as i128 * (p.1 - y1) - (y2 - y1) * (p.0 - x1) as i128;
            if cross >= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

/// Leftmost hull point maximizing `y + slope * x`.
fn query(hull: &[(i64, i128)], slope: i128) -> (i64, i128) {
    let f = |i: usize| hull[i].1 + slope * hull[i].0 as i128;
    let (mut lo, mut hi) = (0, hull.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if f(mid) < f(mid + 1) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    (hull[lo].0, f(lo))
}
