//! Verdicts on `u_-(K) = 0` from comparing surgery d-tables with lens tables.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{omega_check, OmegaWitness, Rational, DEFAULT_ENTRY_BOUND, DEFAULT_MAX_LEN};
use crate::knots::{
    genus_lspace, surgery_d_table_lspace, torsion_coeffs, validate_lspace_alexander, AlexanderPoly,
    KnotError,
};
use crate::lens::{lens_d_table, lens_p1_table, LensError, LensSpace};
use crate::table::{
    affine_dominates, affine_match, shift_match, AffineMap, DTable, DTableJson, TableError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObstructError {
    #[error("no admissible continued fraction found for slope {slope}")]
    NoWitness { slope: Rational },
    #[error("not an L-space knot polynomial: {0}")]
    NotLSpaceForm(String),
    #[error("surgery coefficient {h} is below {min}, where large surgeries are L-spaces")]
    SurgeryTooSmall { h: i64, min: i64 },
    #[error("cable parameter must be positive, got {0}")]
    InvalidCable(i64),
    #[error(transparent)]
    Lens(#[from] LensError),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Knot(#[from] KnotError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Obstructed,
    Inconclusive,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Obstructed => "OBSTRUCTED",
            Status::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// How the lens table is compared with the other table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `table(f(i)) = lens(i)`
    Equal,
    /// `lens(f(i)) >= table(i)`, with `table` a lower bound
    Dominates,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Detail {
    Lspace {
        h: i64,
        torsion: Vec<i64>,
        positive_torsion: bool,
        /// A map with `mirror(f(i)) >= lens(i)`.
        mirror_dominates: Option<AffineMap>,
    },
    Cable {
        p: i64,
        d_one: Rational,
        /// Upper bound on the d-table of `p`-surgery on the cable.
        bound: DTableJson,
        /// The lower bound exceeds the lens value at every label, labels matched.
        strict_pointwise: bool,
        /// The lower bound exceeds the lens value at every label under every map.
        strict_all_maps: bool,
        /// Sum of the lower bound minus the sum of the lens table.
        sum_gap: Rational,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub witness: Vec<i64>,
    pub exceptions: Vec<usize>,
    pub lens: String,
    pub lens_table: DTableJson,
    pub table: DTableJson,
    pub relation: Relation,
    pub maps_checked: u64,
    pub map: Option<AffineMap>,
    /// The same search restricted to maps `i -> i + c`.
    pub unit_one_status: Status,
    pub unit_one_map: Option<AffineMap>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<Detail>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub slope: Rational,
    pub certificate: Certificate,
}

impl Verdict {
    pub fn is_obstructed(&self) -> bool {
        self.status == Status::Obstructed
    }
}

fn witness(slope: Rational) -> Result<OmegaWitness, ObstructError> {
    omega_check(slope, DEFAULT_MAX_LEN, DEFAULT_ENTRY_BOUND)
        .ok_or(ObstructError::NoWitness { slope })
}

/// `L(p, q)` for the slope `p/q`, with `q` reduced mod `|p|`.
fn lens_for(slope: Rational) -> Result<LensSpace, ObstructError> {
    let p = slope.numer() as i64;
    let q = slope.denom() as i64;
    let q = if p.abs() == 1 {
        1
    } else {
        q.rem_euclid(p.abs())
    };
    Ok(LensSpace::new(p, q)?)
}

fn status(found: bool) -> Status {
    if found {
        Status::Inconclusive
    } else {
        Status::Obstructed
    }
}

fn shift_dominates(a: &DTable, b: &DTable) -> Result<Option<AffineMap>, ObstructError> {
    let p = a.modulus();
    affine_dominates(a, b)?;
    Ok(AffineMap::all(p)
        .filter(|m| m.unit == 1 % p.max(1))
        .find(|m| (0..p).all(|i| a.get(m.apply(i)) >= b.get(i))))
}

fn compare(
    slope: Rational,
    table: &DTable,
    relation: Relation,
    detail: Option<Detail>,
) -> Result<Verdict, ObstructError> {
    let w = witness(slope)?;
    let lens = lens_for(slope)?;
    let lens_table = lens_d_table(&lens)?;
    let (map, unit_one_map) = match relation {
        Relation::Equal => (
            affine_match(table, &lens_table)?,
            shift_match(table, &lens_table)?,
        ),
        Relation::Dominates => (
            affine_dominates(&lens_table, table)?,
            shift_dominates(&lens_table, table)?,
        ),
    };
    Ok(Verdict {
        status: status(map.is_some()),
        slope,
        certificate: Certificate {
            witness: w.cf.entries().to_vec(),
            exceptions: w.exception_indices,
            lens: lens.to_string(),
            lens_table: lens_table.to_json(),
            table: table.to_json(),
            relation,
            maps_checked: AffineMap::count(lens_table.modulus()),
            map,
            unit_one_status: status(unit_one_map.is_some()),
            unit_one_map,
            detail,
        },
    })
}

/// OBSTRUCTED when no affine relabeling carries the lens table at `slope`
/// onto `d_surgery`, the table of `S^3_slope(K)`.
pub fn obstruction_u_minus_zero(
    d_surgery: &DTable,
    slope: Rational,
) -> Result<Verdict, ObstructError> {
    compare(slope, d_surgery, Relation::Equal, None)
}

/// `u_+(K) = 0` test for a knot with a positive L-space surgery: the mirror's
/// table at `-h` is compared with `L(-h, 1)`. `h` defaults to `max(2g - 1, 1)`.
pub fn lspace_u_plus_obstruction(
    delta: &AlexanderPoly,
    h: Option<i64>,
) -> Result<Verdict, ObstructError> {
    let report = validate_lspace_alexander(delta);
    if !report.passed {
        return Err(ObstructError::NotLSpaceForm(
            report.message.unwrap_or_default(),
        ));
    }
    let g = genus_lspace(delta)?;
    let min = (2 * g - 1).max(1);
    let h = h.unwrap_or(min);
    if h < min {
        return Err(ObstructError::SurgeryTooSmall { h, min });
    }
    let torsion = torsion_coeffs(delta)?;
    let mirror = surgery_d_table_lspace(delta, h)?.reverse_orientation();
    let lens = lens_d_table(&LensSpace::new(-h, 1)?)?;
    let detail = Detail::Lspace {
        h,
        positive_torsion: torsion.values.iter().any(|&t| t > 0),
        torsion: torsion.values,
        mirror_dominates: affine_dominates(&mirror, &lens)?,
    };
    compare(Rational::from(-h), &mirror, Relation::Equal, Some(detail))
}

/// Cable obstruction with `d(S^3_1(K_D), s_0) = d_one`:
/// `d(S^3_p(C_{p,1}(K_D))) <= d(L(p,1)) + d_one`, so the mirror's table at
/// `-p` is bounded below by the negated bound.
pub fn cable_obstruction(p: i64, d_one: Rational) -> Result<Verdict, ObstructError> {
    if p < 1 {
        return Err(ObstructError::InvalidCable(p));
    }
    let bound = lens_p1_table(p).connected_sum(&DTable::single(d_one));
    let lower = bound.reverse_orientation();
    let lens = lens_d_table(&LensSpace::new(-p, 1)?)?;
    let canonical = lens_p1_table(p).reverse_orientation();
    let max_lens = *lens.values().iter().max().unwrap();
    let min_lower = *lower.values().iter().min().unwrap();
    let detail = Detail::Cable {
        p,
        d_one,
        bound: bound.to_json(),
        strict_pointwise: lower.entries().all(|(i, v)| v > canonical.get(i)),
        strict_all_maps: min_lower > max_lens,
        sum_gap: lower.sum() - lens.sum(),
    };
    compare(
        Rational::from(-p),
        &lower,
        Relation::Dominates,
        Some(detail),
    )
}

/// The cable obstruction with the universal value `d_one = -2`.
pub fn whitehead_cable_obstruction(p: i64) -> Result<Verdict, ObstructError> {
    cable_obstruction(p, Rational::from(-2i64))
}
