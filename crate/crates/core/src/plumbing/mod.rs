//! Plumbing trees, their intersection lattices, and correction terms of the
//! boundary by lattice maximization.

mod form;
mod maximize;
mod snf;
mod spinc;
mod tree;

pub use form::{determinant, IntersectionForm};
pub use maximize::{box_bounds, box_size, ClassMax, MaximizeOptions, Strategy};
pub use snf::SmithForm;
pub use spinc::{CharVector, SpinCClass, SpinCStructures};
pub use tree::{PlumbedTree, TreeJson, VertexJson};

use thiserror::Error;

use crate::arith::Rational;
use crate::table::DTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlumbingError {
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("matrix is not square")]
    DimensionMismatch,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("off-diagonal support of the form contains a cycle")]
    NotATree,
    #[error("intersection form is singular")]
    SingularForm,
    #[error("intersection form is not negative definite")]
    NotNegativeDefinite,
    #[error("tree has {count} bad vertices ({ids:?}); at most two are allowed")]
    TooManyBadVertices { count: usize, ids: Vec<i64> },
    #[error("some class has no characteristic vector in the box at slack {slack}")]
    EmptyBox { slack: u32 },
    #[error("vector is not characteristic for the form")]
    NotCharacteristic,
    #[error("box has {points} points, above the enumeration cap {cap}")]
    BoxTooLarge { points: u128, cap: u128 },
    #[error("integer overflow in exact arithmetic")]
    Overflow,
}

pub fn intersection_form(tree: &PlumbedTree) -> Result<IntersectionForm, PlumbingError> {
    IntersectionForm::from_tree(tree)
}

pub fn is_negative_definite(form: &IntersectionForm) -> bool {
    form.is_negative_definite()
}

pub fn bad_vertices(tree: &PlumbedTree) -> Vec<i64> {
    tree.bad_vertices()
}

pub fn char_square(k: &CharVector, form: &IntersectionForm) -> Result<Rational, PlumbingError> {
    if !form.is_characteristic(k.as_slice()) {
        return Err(PlumbingError::NotCharacteristic);
    }
    form.char_square(k.as_slice())
}

pub fn spinc_classes(form: &IntersectionForm) -> Result<Vec<SpinCClass>, PlumbingError> {
    Ok(SpinCStructures::new(form)?.classes())
}

fn check_theorem_hypotheses(tree: &PlumbedTree) -> Result<IntersectionForm, PlumbingError> {
    let form = IntersectionForm::from_tree(tree)?;
    if !form.is_negative_definite() {
        return Err(PlumbingError::NotNegativeDefinite);
    }
    let bad = tree.bad_vertices();
    if bad.len() > 2 {
        return Err(PlumbingError::TooManyBadVertices {
            count: bad.len(),
            ids: bad,
        });
    }
    Ok(form)
}

/// Correction term of the boundary in the given class, for a negative
/// definite tree with at most two bad vertices.
pub fn d_invariant_plumbing(
    tree: &PlumbedTree,
    class: &SpinCClass,
    slack: u32,
) -> Result<Rational, PlumbingError> {
    let form = check_theorem_hypotheses(tree)?;
    let spinc = SpinCStructures::new(&form)?;
    let opts = MaximizeOptions::with_slack(slack);
    Ok(maximize::maximize_class(&form, &spinc, class, &opts)?.value)
}

pub fn d_table_plumbing(tree: &PlumbedTree) -> Result<DTable, PlumbingError> {
    d_table_plumbing_with(tree, &MaximizeOptions::default())
}

pub fn d_table_plumbing_with(
    tree: &PlumbedTree,
    opts: &MaximizeOptions,
) -> Result<DTable, PlumbingError> {
    let form = check_theorem_hypotheses(tree)?;
    table_of_form(&form, opts)
}

/// Every class maximum, with maximizers, for trees satisfying the hypotheses.
pub fn class_maxima(
    tree: &PlumbedTree,
    opts: &MaximizeOptions,
) -> Result<Vec<ClassMax>, PlumbingError> {
    let form = check_theorem_hypotheses(tree)?;
    let spinc = SpinCStructures::new(&form)?;
    maximize::maximize_all(&form, &spinc, opts)
}

/// The same maximization for any negative definite form. Without the
/// bad-vertex hypothesis the result only bounds the correction term from below.
pub fn d_lower_bound_form(
    form: &IntersectionForm,
    class: &SpinCClass,
    slack: u32,
) -> Result<Rational, PlumbingError> {
    if !form.is_negative_definite() {
        return Err(PlumbingError::NotNegativeDefinite);
    }
    let spinc = SpinCStructures::new(form)?;
    let opts = MaximizeOptions::with_slack(slack);
    Ok(maximize::maximize_class(form, &spinc, class, &opts)?.value)
}

pub fn lower_bound_table(
    form: &IntersectionForm,
    opts: &MaximizeOptions,
) -> Result<DTable, PlumbingError> {
    if !form.is_negative_definite() {
        return Err(PlumbingError::NotNegativeDefinite);
    }
    table_of_form(form, opts)
}

fn table_of_form(form: &IntersectionForm, opts: &MaximizeOptions) -> Result<DTable, PlumbingError> {
    let spinc = SpinCStructures::new(form)?;
    let values = maximize::maximize_all(form, &spinc, opts)?
        .into_iter()
        .map(|c| c.value)
        .collect();
    Ok(DTable::with_group(spinc.factors().to_vec(), values).expect("one value per class"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ContinuedFraction;

    fn chain(w: &[i64]) -> PlumbedTree {
        PlumbedTree::linear(&ContinuedFraction::new(w.to_vec()).unwrap())
    }

    #[test]
    fn single_vertex_examples() {
        let t = d_table_plumbing(&chain(&[-1])).unwrap();
        assert_eq!(t.values(), &[Rational::ZERO]);
        let t = d_table_plumbing(&chain(&[-2])).unwrap();
        assert_eq!(
            t.sorted_values(),
            vec![Rational::new(-1, 4), Rational::new(1, 4)]
        );
    }

    #[test]
    fn per_class_matches_table() {
        let tree = chain(&[-3, -2, -2]);
        let table = d_table_plumbing(&tree).unwrap();
        assert_eq!(table.modulus(), 7);
        let form = intersection_form(&tree).unwrap();
        for class in spinc_classes(&form).unwrap() {
            let d = d_invariant_plumbing(&tree, &class, 1).unwrap();
            assert_eq!(d, table.get(class.label));
            assert_eq!(d, d_lower_bound_form(&form, &class, 0).unwrap());
        }
    }

    #[test]
    fn hypotheses_enforced() {
        // three bad vertices: centers of degree 3 with weight -1 or -2
        let tree = PlumbedTree::new(
            &[
                (0, -2),
                (1, -2),
                (2, -2),
                (3, -7),
                (4, -7),
                (5, -7),
                (6, -7),
                (7, -7),
                (8, -7),
                (9, -7),
            ],
            &[
                (0, 1),
                (1, 2),
                (0, 3),
                (0, 4),
                (1, 5),
                (2, 6),
                (2, 7),
                (1, 8),
                (2, 9),
            ],
        )
        .unwrap();
        assert_eq!(tree.bad_vertices(), vec![0, 1, 2]);
        assert!(matches!(
            d_table_plumbing(&tree),
            Err(PlumbingError::TooManyBadVertices { count: 3, .. })
        ));
        let form = intersection_form(&tree).unwrap();
        assert!(form.is_negative_definite());
        let class = &spinc_classes(&form).unwrap()[0];
        assert!(d_lower_bound_form(&form, class, 1).is_ok());

        assert_eq!(
            d_table_plumbing(&chain(&[1])),
            Err(PlumbingError::NotNegativeDefinite)
        );
    }

    #[test]
    fn char_square_requires_characteristic() {
        let form = intersection_form(&chain(&[-2])).unwrap();
        assert_eq!(
            char_square(&CharVector(vec![1]), &form),
            Err(PlumbingError::NotCharacteristic)
        );
        assert_eq!(
            char_square(&CharVector(vec![2]), &form).unwrap(),
            Rational::from(-2i64)
        );
    }
}
