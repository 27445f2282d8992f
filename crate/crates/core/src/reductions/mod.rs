//! Reductions between isomorphism problems. Each one is a construction plus
//! a forward witness map (source witness to target witness) and a recovery
//! map (target witness back to a source witness).
//!
//! A recovered witness is always checked against the source instances before
//! it is returned; a failed check is reported as [`Error::WitnessInvalid`].

mod algebra;
mod code;
mod conjugacy;
mod cubic;
mod graph;
mod isometry;
mod pad;
mod path;

pub use algebra::{
    adjoin_unit, isometry_to_algebra, isometry_to_trilinear, specialize_pseudo, AdjoinUnit,
    IsometryToAlgebra, IsometryToTrilinear, PseudoVariant,
};
pub use code::{moncode_to_3ti, MonCodeTo3ti};
pub use conjugacy::{ti3_to_conjugacy, Ti3ToConjugacy};
pub use cubic::{cubic_to_degree_d, CubicToDegreeD};
pub use graph::{graph_to_altspace, monomial_gadget, GraphToAltspace, MonomialGadget};
pub use isometry::{ti3_to_alt_isometry, ti3_to_sym_isometry, Ti3ToIsometry};
pub use pad::PadD;
pub use path::{
    dti_algebra_dim, dti_dimension_formula, dti_to_algebra, grigoriev_graph_algebra,
    grigoriev_reconstruct, DtiToAlgebra, Grigoriev, PathAlgebra,
};

use crate::error::{Error, Result};
use crate::gf::GF;
use crate::matspace::{column_transport, Mat, MatrixTuple};
use crate::tensor::Tensor3;
use crate::witness::{verify_witness, Instance, Tag, Witness};

/// Name, problems and size bookkeeping of a reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionDescriptor {
    pub name: &'static str,
    pub source: Tag,
    pub target: Tag,
    /// Human-readable size map, e.g. `ℓ×n×m ↦ (ℓ+n)×(ℓ+n)×m`.
    pub dims: &'static str,
}

pub trait Reduction: Send + Sync {
    fn descriptor(&self) -> ReductionDescriptor;

    /// Sizes of `construct(a)` predicted from the sizes of `a`.
    fn target_dims(&self, a: &Instance) -> Result<Vec<usize>>;

    fn construct(&self, a: &Instance) -> Result<Instance>;

    /// Maps a witness `w` for `a → b` to one for `construct(a) → construct(b)`.
    fn witness_forward(&self, a: &Instance, w: &Witness) -> Result<Witness>;

    /// Maps a witness for `construct(a) → construct(b)` to one for `a → b`.
    fn witness_recover(&self, a: &Instance, b: &Instance, w: &Witness) -> Result<Witness>;
}

/// Registry names, in a fixed order.
pub const NAMES: [&str; 14] = [
    "moncode-to-3ti",
    "3ti-to-alt-isometry",
    "3ti-to-sym-isometry",
    "3ti-to-conjugacy",
    "3ti-to-conjugacy-unital",
    "isometry-to-algebra",
    "isometry-to-trilinear",
    "adjoin-unit",
    "dti-to-algebra",
    "graph-to-altspace",
    "monomial-gadget",
    "grigoriev",
    "cubic-to-degree-d",
    "pad-d",
];

/// Looks a reduction up by name. `param` is the target degree for
/// `cubic-to-degree-d` and the target order for `pad-d` (default 4), and the
/// field size for `graph-to-altspace` (default 3) and `grigoriev` (default 2).
pub fn by_name(name: &str, param: Option<usize>) -> Result<Box<dyn Reduction>> {
    let d = param.unwrap_or(4);
    Ok(match name {
        "moncode-to-3ti" => Box::new(MonCodeTo3ti),
        "3ti-to-alt-isometry" => Box::new(Ti3ToIsometry { symmetric: false }),
        "3ti-to-sym-isometry" => Box::new(Ti3ToIsometry { symmetric: true }),
        "3ti-to-conjugacy" => Box::new(Ti3ToConjugacy { unital: false }),
        "3ti-to-conjugacy-unital" => Box::new(Ti3ToConjugacy { unital: true }),
        "isometry-to-algebra" => Box::new(IsometryToAlgebra),
        "isometry-to-trilinear" => Box::new(IsometryToTrilinear),
        "adjoin-unit" => Box::new(AdjoinUnit),
        "dti-to-algebra" => Box::new(DtiToAlgebra),
        "graph-to-altspace" => Box::new(GraphToAltspace {
            field: GF::new(param.unwrap_or(3) as u32)?,
        }),
        "monomial-gadget" => Box::new(MonomialGadget),
        "grigoriev" => Box::new(Grigoriev {
            field: GF::new(param.unwrap_or(2) as u32)?,
        }),
        "cubic-to-degree-d" => Box::new(CubicToDegreeD { d: d as u32 }),
        "pad-d" => Box::new(PadD { d_prime: d }),
        _ => {
            return Err(Error::InvalidInput(format!(
                "unknown reduction `{name}`; known: {}",
                NAMES.join(", ")
            )))
        }
    })
}

/// Every registered reduction with its default parameter.
pub fn registry() -> Vec<Box<dyn Reduction>> {
    NAMES
        .iter()
        .map(|n| by_name(n, None).expect("registered name"))
        .collect()
}

/// Sizes of an instance: array dims, algebra dimension, `(d, n)` of a code,
/// `(vars, degree)` of a form, vertex and edge counts of a graph.
pub fn instance_dims(a: &Instance) -> Vec<usize> {
    match a {
        Instance::Tensor3(t) => t.dims().to_vec(),
        Instance::TensorD(t) => t.dims().to_vec(),
        Instance::Algebra(alg) => vec![alg.dim()],
        Instance::Form(f) => vec![f.nvars(), f.degree() as usize],
        Instance::Code(c) => vec![c.rows(), c.cols()],
        Instance::Graph(g) => vec![g.n(), g.edge_count()],
        Instance::Digraph(g) => vec![g.n(), g.arc_count()],
    }
}

pub(crate) fn expect_tensor3<'a>(a: &'a Instance, what: &str) -> Result<&'a Tensor3> {
    match a {
        Instance::Tensor3(t) => Ok(t),
        other => Err(Error::InvalidInput(format!(
            "{what} expects a 3-way array, got a {}",
            other.kind()
        ))),
    }
}

pub(crate) fn expect_tag(w: &Witness, tag: Tag) -> Result<()> {
    if w.tag != tag {
        return Err(Error::InvalidInput(format!(
            "expected a {tag} witness, got {}",
            w.tag
        )));
    }
    Ok(())
}

/// Returns `w` if it carries `a` to `b`, otherwise a witness-invalid error.
pub(crate) fn checked(tag: Tag, a: &Instance, b: &Instance, w: Witness) -> Result<Witness> {
    if verify_witness(tag, a, b, &w)? {
        Ok(w)
    } else {
        Err(Error::WitnessInvalid(format!(
            "recovered {tag} witness does not carry the first instance to the second"
        )))
    }
}

/// `E_{ij} + sign·E_{ji}` of size `n`.
pub(crate) fn elementary_pair(f: GF, n: usize, i: usize, j: usize, symmetric: bool) -> Mat {
    let mut m = Mat::zeros(f, n, n);
    m.set(i, j, f.neg(1));
    m.set(j, i, if symmetric { f.neg(1) } else { 1 });
    m
}

/// Invertible `R` with `mix(s, R) = b`; one exists exactly when the two
/// tuples have the same length and span.
pub fn solve_mixing(s: &MatrixTuple, b: &MatrixTuple) -> Option<Mat> {
    if s.len() != b.len() || s.rows() != b.rows() || s.cols() != b.cols() {
        return None;
    }
    column_transport(&slice_columns(s), &slice_columns(b))
}

/// The flattened slices as the columns of one matrix.
pub(crate) fn slice_columns(s: &MatrixTuple) -> Mat {
    let len = s.rows() * s.cols();
    let mut out = Mat::zeros(s.field(), len, s.len());
    for (k, a) in s.slices().iter().enumerate() {
        for (r, v) in a.flatten().into_iter().enumerate() {
            out.set(r, k, v);
        }
    }
    out
}

/// Lateral slice ranks of a 3-way array.
pub fn lateral_ranks(t: &Tensor3) -> Vec<usize> {
    t.slices(crate::tensor::Direction::Lateral)
        .slices()
        .iter()
        .map(Mat::rank)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_complete() {
        let reg = registry();
        assert_eq!(reg.len(), 14);
        for (r, n) in reg.iter().zip(NAMES) {
            assert_eq!(r.descriptor().name, n);
        }
        assert!(by_name("nope", None).is_err());
    }

    #[test]
    fn mixing_solve_recovers_r() {
        let f = GF::new(3).unwrap();
        let a = MatrixTuple::new(
            f,
            2,
            2,
            vec![Mat::identity(f, 2), Mat::from_rows(f, &[&[0, 1], &[0, 0]])],
        )
        .unwrap();
        let r = Mat::from_rows(f, &[&[1, 2], &[1, 0]]);
        let b = a.mix(&r).unwrap();
        assert_eq!(solve_mixing(&a, &b), Some(r));
    }

    #[test]
    fn mixing_solve_with_dependent_slices() {
        let f = GF::new(5).unwrap();
        let x = Mat::from_rows(f, &[&[1, 2], &[0, 3]]);
        let a = MatrixTuple::new(f, 2, 2, vec![x.clone(), x.scale(2), Mat::zeros(f, 2, 2)]).unwrap();
        let r = Mat::from_rows(f, &[&[1, 0, 4], &[2, 1, 1], &[0, 3, 1]]);
        let b = a.mix(&r).unwrap();
        let got = solve_mixing(&a, &b).unwrap();
        assert!(got.is_invertible());
        assert_eq!(a.mix(&got).unwrap(), b);
        let other = MatrixTuple::new(f, 2, 2, vec![Mat::identity(f, 2); 3]).unwrap();
        assert!(solve_mixing(&a, &other).is_none());
    }
}
