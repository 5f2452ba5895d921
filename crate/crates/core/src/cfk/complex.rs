use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::CfkError;
use crate::knots::LSpaceKnotData;

/// One generator per `U`-orbit; it stands for the translate `[x, 0, A]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub gr: i64,
    #[serde(rename = "A")]
    pub alex: i64,
}

/// `∂[from, 0, A_from]` contains `U^u [to, 0, A_to] = [to, -u, A_to - u]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arrow {
    pub from: usize,
    pub to: usize,
    pub u: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowJson {
    pub from: String,
    pub to: String,
    pub u: i64,
}

/// `{"generators":[{"name":"x","gr":0,"A":1},...],"arrows":[{"from":"y","to":"x","u":1},...]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub generators: Vec<Generator>,
    pub arrows: Vec<ArrowJson>,
}

/// A finitely generated filtered complex over `F[U, U^-1]` with `F_2` coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CFKComplex {
    generators: Vec<Generator>,
    arrows: BTreeSet<Arrow>,
}

impl CFKComplex {
    /// Repeated arrows add over `F_2`, so a pair of equal arrows cancels.
    pub fn new(generators: Vec<Generator>, arrows: Vec<Arrow>) -> Result<Self, CfkError> {
        let mut names = BTreeSet::new();
        for g in &generators {
            if !names.insert(g.name.as_str()) {
                return Err(CfkError::DuplicateName(g.name.clone()));
            }
        }
        let mut set = BTreeSet::new();
        for a in arrows {
            if a.from >= generators.len() || a.to >= generators.len() {
                return Err(CfkError::Parse(format!("arrow index out of range: {a:?}")));
            }
            if a.u < 0 {
                return Err(CfkError::NegativePower {
                    from: generators[a.from].name.clone(),
                    to: generators[a.to].name.clone(),
                    u: a.u,
                });
            }
            if !set.insert(a) {
                set.remove(&a);
            }
        }
        Ok(Self {
            generators,
            arrows: set,
        })
    }

    pub fn empty() -> Self {
        Self {
            generators: Vec::new(),
            arrows: BTreeSet::new(),
        }
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn arrows(&self) -> impl Iterator<Item = &Arrow> + '_ {
        self.arrows.iter()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrows_from(&self, x: usize) -> impl Iterator<Item = &Arrow> + '_ {
        self.arrows
            .range(
                Arrow {
                    from: x,
                    to: 0,
                    u: 0,
                }..,
            )
            .take_while(move |a| a.from == x)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// Largest `|A|` over the generators; the genus for knot complexes.
    pub fn genus_bound(&self) -> i64 {
        self.generators
            .iter()
            .map(|g| g.alex.abs())
            .max()
            .unwrap_or(0)
    }

    pub fn from_json(json: &ComplexJson) -> Result<Self, CfkError> {
        let index: BTreeMap<&str, usize> = json
            .generators
            .iter()
            .enumerate()
            .map(|(k, g)| (g.name.as_str(), k))
            .collect();
        let look = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| CfkError::UnknownGenerator(name.to_string()))
        };
        let arrows = json
            .arrows
            .iter()
            .map(|a| {
                Ok(Arrow {
                    from: look(&a.from)?,
                    to: look(&a.to)?,
                    u: a.u,
                })
            })
            .collect::<Result<Vec<_>, CfkError>>()?;
        Self::new(json.generators.clone(), arrows)
    }

    pub fn to_json(&self) -> ComplexJson {
        ComplexJson {
            generators: self.generators.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| ArrowJson {
                    from: self.generators[a.from].name.clone(),
                    to: self.generators[a.to].name.clone(),
                    u: a.u,
                })
                .collect(),
        }
    }

    pub fn parse_json(s: &str) -> Result<Self, CfkError> {
        let json: ComplexJson =
            serde_json::from_str(s).map_err(|e| CfkError::Parse(e.to_string()))?;
        Self::from_json(&json)
    }

    /// Disjoint union; names of `other` get `suffix` appended when they clash.
    pub fn direct_sum(&self, other: &CFKComplex, suffix: &str) -> Self {
        let names: BTreeSet<&str> = self.generators.iter().map(|g| g.name.as_str()).collect();
        let offset = self.generators.len();
        let mut generators = self.generators.clone();
        for g in &other.generators {
            let mut g = g.clone();
            while names.contains(g.name.as_str()) {
                g.name.push_str(suffix);
            }
            generators.push(g);
        }
        let mut arrows = self.arrows.clone();
        arrows.extend(other.arrows.iter().map(|a| Arrow {
            from: a.from + offset,
            to: a.to + offset,
            u: a.u,
        }));
        Self { generators, arrows }
    }

    /// Every grading moved by `shift`.
    pub fn shift_gradings(&self, shift: i64) -> Self {
        let mut out = self.clone();
        for g in &mut out.generators {
            g.gr += shift;
        }
        out
    }

    /// `∂^2` as a set of `(from, to, u)` terms with odd coefficient.
    pub fn d_squared(&self) -> BTreeSet<Arrow> {
        let mut out = BTreeSet::new();
        for a in &self.arrows {
            for b in self.arrows_from(a.to) {
                let t = Arrow {
                    from: a.from,
                    to: b.to,
                    u: a.u + b.u,
                };
                if !out.insert(t) {
                    out.remove(&t);
                }
            }
        }
        out
    }

    pub fn validate(&self) -> ValidationReport {
        let name = |k: usize| self.generators[k].name.clone();
        let describe = |a: &Arrow| ArrowJson {
            from: name(a.from),
            to: name(a.to),
            u: a.u,
        };
        let mut grading = Vec::new();
        let mut filtration = Vec::new();
        for a in &self.arrows {
            let (x, y) = (&self.generators[a.from], &self.generators[a.to]);
            if y.gr - 2 * a.u != x.gr - 1 {
                grading.push(describe(a));
            }
            if a.u < 0 || y.alex - a.u > x.alex {
                filtration.push(describe(a));
            }
        }
        let d_squared: Vec<ArrowJson> = self.d_squared().iter().map(describe).collect();
        ValidationReport {
            passed: grading.is_empty() && filtration.is_empty() && d_squared.is_empty(),
            grading,
            filtration,
            d_squared,
        }
    }

    pub fn ensure_valid(&self) -> Result<(), CfkError> {
        let report = self.validate();
        if report.passed {
            Ok(())
        } else {
            Err(CfkError::InvalidComplex(report.summary()))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub passed: bool,
    /// Arrows with `gr(to) - 2u != gr(from) - 1`.
    pub grading: Vec<ArrowJson>,
    /// Arrows with `A_to - u > A_from`.
    pub filtration: Vec<ArrowJson>,
    /// Terms of `∂^2` that do not cancel.
    pub d_squared: Vec<ArrowJson>,
}

impl ValidationReport {
    pub fn summary(&self) -> String {
        let mut parts = Vec::new();
        let show = |v: &[ArrowJson]| {
            v.iter()
                .map(|a| format!("{}->{} (u={})", a.from, a.to, a.u))
                .collect::<Vec<_>>()
                .join(", ")
        };
        if !self.grading.is_empty() {
            parts.push(format!("grading violated by {}", show(&self.grading)));
        }
        if !self.filtration.is_empty() {
            parts.push(format!("filtration violated by {}", show(&self.filtration)));
        }
        if !self.d_squared.is_empty() {
            parts.push(format!("d^2 != 0: {}", show(&self.d_squared)));
        }
        if parts.is_empty() {
            "valid".into()
        } else {
            parts.join("; ")
        }
    }
}

/// The staircase of an L-space knot. Generator `x{i}` sits at Alexander grading
/// `n_i` and Maslov grading `δ_i`; when `k - i` is odd it has an arrow to
/// `x{i+1}` with `u = n_{i+1} - n_i` and an arrow to `x{i-1}` with `u = 0`.
pub fn staircase(data: &LSpaceKnotData) -> Result<CFKComplex, CfkError> {
    let checked = LSpaceKnotData::from_gaps(data.gaps.clone())
        .map_err(|e| CfkError::InvalidGaps(e.to_string()))?;
    if checked.deltas != data.deltas {
        return Err(CfkError::InvalidGaps(
            "gradings do not follow the gap sequence".into(),
        ));
    }
    let len = data.gaps.len();
    let k = (len / 2) as i64;
    // generator order: top of the staircase first
    let pos = |i: i64| (k - i) as usize;
    let generators = (0..len)
        .rev()
        .map(|j| {
            let i = j as i64 - k;
            Generator {
                name: staircase_name(len, i),
                gr: data.deltas[j],
                alex: data.gaps[j],
            }
        })
        .collect();
    let mut arrows = Vec::new();
    for j in 0..len {
        let i = j as i64 - k;
        if (k - i) % 2 == 1 {
            arrows.push(Arrow {
                from: pos(i),
                to: pos(i + 1),
                u: data.gaps[j + 1] - data.gaps[j],
            });
            arrows.push(Arrow {
                from: pos(i),
                to: pos(i - 1),
                u: 0,
            });
        }
    }
    CFKComplex::new(generators, arrows)
}

fn staircase_name(len: usize, i: i64) -> String {
    if len == 3 {
        ["z", "y", "x"][(i + 1) as usize].to_string()
    } else {
        format!("x{i}")
    }
}

/// Cancels a unit arrow between generators of equal filtration level, one at a
/// time, until none is left.
pub fn reduce(c: &CFKComplex) -> Result<CFKComplex, CfkError> {
    c.ensure_valid()?;
    let mut gens: Vec<Option<Generator>> = c.generators.iter().cloned().map(Some).collect();
    let mut arrows = c.arrows.clone();
    loop {
        let pick = arrows
            .iter()
            .find(|a| {
                a.u == 0
                    && a.from != a.to
                    && gens[a.from].as_ref().unwrap().alex == gens[a.to].as_ref().unwrap().alex
            })
            .copied();
        let Some(Arrow { from: k, to: l, .. }) = pick else {
            break;
        };
        let into_l: Vec<Arrow> = arrows
            .iter()
            .filter(|a| a.to == l && a.from != k)
            .copied()
            .collect();
        let out_of_k: Vec<Arrow> = arrows
            .iter()
            .filter(|a| a.from == k && a.to != l)
            .copied()
            .collect();
        for a in &into_l {
            for b in &out_of_k {
                let t = Arrow {
                    from: a.from,
                    to: b.to,
                    u: a.u + b.u,
                };
                if !arrows.insert(t) {
                    arrows.remove(&t);
                }
            }
        }
        arrows.retain(|a| a.from != k && a.to != k && a.from != l && a.to != l);
        gens[k] = None;
        gens[l] = None;
    }
    let mut new_index = vec![usize::MAX; gens.len()];
    let mut generators = Vec::new();
    for (old, g) in gens.into_iter().enumerate() {
        if let Some(g) = g {
            new_index[old] = generators.len();
            generators.push(g);
        }
    }
    let arrows = arrows
        .into_iter()
        .map(|a| Arrow {
            from: new_index[a.from],
            to: new_index[a.to],
            u: a.u,
        })
        .collect();
    CFKComplex::new(generators, arrows)
}
