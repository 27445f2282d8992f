//! Graph isomorphism to alternating matrix space isometry in two steps:
//! graphs to monomial isometry of elementary alternating matrices, then the
//! gadget that forces any isometry to be monomial on the original block.

use super::{checked, elementary_pair, expect_tag, expect_tensor3, Reduction, ReductionDescriptor};
use crate::error::{Error, Result};
use crate::gf::GF;
use crate::graph::Graph;
use crate::matspace::{Mat, MatrixTuple, MonomialMatrix};
use crate::tensor::Tensor3;
use crate::witness::{Instance, Tag, Witness};

/// One slice `E_ij − E_ji` per edge `{i, j}` (`i < j`), in edge order.
pub fn graph_to_altspace(f: GF, g: &Graph) -> MatrixTuple {
    let n = g.n();
    let slices = g
        .edges()
        .map(|(i, j)| {
            let mut m = Mat::zeros(f, n, n);
            m.set(i, j, 1);
            m.set(j, i, f.neg(1));
            m
        })
        .collect();
    MatrixTuple::new(f, n, n, slices).expect("square slices")
}

fn gadget_col(n: usize, i: usize, j: usize) -> usize {
    n + i * n + j
}

/// Pads the slices to size `n+n²` and appends `E_{i, n+in+j} − transpose`
/// for every `(i, j) ∈ [n]×[n]`.
pub fn monomial_gadget(t: &MatrixTuple) -> Result<MatrixTuple> {
    let n = t.rows();
    if n < 2 {
        return Err(Error::InvalidInput("the gadget needs n > 1".into()));
    }
    if !t.is_alternating() {
        return Err(Error::InvalidInput("slices must be alternating".into()));
    }
    let f = t.field();
    let side = n + n * n;
    let mut slices: Vec<Mat> = t
        .slices()
        .iter()
        .map(|a| {
            let mut s = Mat::zeros(f, side, side);
            s.set_block(0, 0, a);
            s
        })
        .collect();
    for i in 0..n {
        for j in 0..n {
            slices.push(elementary_pair(f, side, i, gadget_col(n, i, j), false));
        }
    }
    MatrixTuple::new(f, side, side, slices)
}

fn expect_graph(a: &Instance) -> Result<&Graph> {
    match a {
        Instance::Graph(g) => Ok(g),
        other => Err(Error::InvalidInput(format!(
            "graph-to-altspace expects a graph, got a {}",
            other.kind()
        ))),
    }
}

/// Graphs carry no field, so the reduction is parameterised by one.
pub struct GraphToAltspace {
    pub field: GF,
}

impl Reduction for GraphToAltspace {
    fn descriptor(&self) -> ReductionDescriptor {
        ReductionDescriptor {
            name: "graph-to-altspace",
            source: Tag::GraphIso,
            target: Tag::Isometry,
            dims: "graph (n, e) ↦ n×n×e, isometries monomial",
        }
    }

    fn target_dims(&self, a: &Instance) -> Result<Vec<usize>> {
        let g = expect_graph(a)?;
        Ok(vec![g.n(), g.n(), g.edge_count()])
    }

    fn construct(&self, a: &Instance) -> Result<Instance> {
        let g = expect_graph(a)?;
        Ok(Instance::Tensor3(Tensor3::from_frontal(&graph_to_altspace(
            self.field,
            g,
        ))))
    }

    /// `σ ↦ (Π, R)` with `R` the signed permutation of the edges.
    fn witness_forward(&self, a: &Instance, w: &Witness) -> Result<Witness> {
        expect_tag(w, Tag::GraphIso)?;
        let g = expect_graph(a)?;
        let f = self.field;
        let sigma = w.graph_perm();
        let h = g.relabel(&sigma);
        let h_edges: Vec<(usize, usize)> = h.edges().collect();
        let mut r = Mat::zeros(f, g.edge_count(), g.edge_count());
        for (k, (i, j)) in g.edges().enumerate() {
            let (a, b) = (sigma[i], sigma[j]);
            let c = h_edges
                .iter()
                .position(|&e| e == (a.min(b), a.max(b)))
                .expect("relabelled edge");
            r.set(k, c, if a < b { 1 } else { f.neg(1) });
        }
        Witness::new(Tag::Isometry, vec![Mat::permutation(f, &sigma), r])
    }

    /// The isometry must be monomial; its pattern is the vertex map.
    fn witness_recover(&self, a: &Instance, b: &Instance, w: &Witness) -> Result<Witness> {
        expect_tag(w, Tag::Isometry)?;
        let mono = MonomialMatrix::from_mat(&w.mats[0])
            .ok_or_else(|| Error::WitnessInvalid("isometry is not monomial".into()))?;
        let rec = Witness::graph(self.field, mono.perm())?;
        checked(Tag::GraphIso, a, b, rec)
    }
}

pub struct MonomialGadget;

impl Reduction for MonomialGadget {
    fn descriptor(&self) -> ReductionDescriptor {
        ReductionDescriptor {
            name: "monomial-gadget",
            source: Tag::Isometry,
            target: Tag::Isometry,
            dims: "n×n×m ↦ (n+n²)×(n+n²)×(m+n²)",
        }
    }

    fn target_dims(&self, a: &Instance) -> Result<Vec<usize>> {
        let [n, _, m] = expect_tensor3(a, "monomial-gadget")?.dims();
        Ok(vec![n + n * n, n + n * n, m + n * n])
    }

    fn construct(&self, a: &Instance) -> Result<Instance> {
        let t = expect_tensor3(a, "monomial-gadget")?;
        Ok(Instance::Tensor3(Tensor3::from_frontal(&monomial_gadget(
            &t.frontal(),
        )?)))
    }

    /// Monomial `(M, R)` with `M[i][σ(i)] = μ_i` becomes
    /// `(diag(M, σ⊗I_n), diag(R, Q'))` with `Q'[(i,j)][(σi,j)] = 1/μ_i`.
    fn witness_forward(&self, a: &Instance, w: &Witness) -> Result<Witness> {
        expect_tag(w, Tag::Isometry)?;
        let t = expect_tensor3(a, "monomial-gadget")?;
        let f = t.field();
        let n = t.dims()[0];
        let mono = MonomialMatrix::from_mat(&w.mats[0])
            .ok_or_else(|| Error::InvalidInput("isometry is not monomial".into()))?;
        let sigma = mono.perm();
        let sigma_i = Mat::permutation(f, sigma).kron(&Mat::identity(f, n));
        let mut q = Mat::zeros(f, n * n, n * n);
        for i in 0..n {
            let inv = f.inv(mono.scalars()[i])?;
            for j in 0..n {
                q.set(i * n + j, sigma[i] * n + j, inv);
            }
        }
        Witness::new(
            Tag::Isometry,
            vec![
                Mat::block_diag(f, &[&w.mats[0], &sigma_i]),
                Mat::block_diag(f, &[&w.mats[1], &q]),
            ],
        )
    }

    /// Gadget coordinates have lateral rank 1, original ones rank at least
    /// `n`, so `P̃[orig, gadget] = 0`; the top-left block must then be
    /// monomial and `R` is read from the inverse mixing matrix.
    fn witness_recover(&self, a: &Instance, b: &Instance, w: &Witness) -> Result<Witness> {
        expect_tag(w, Tag::Isometry)?;
        let t = expect_tensor3(a, "monomial-gadget")?;
        let [n, _, m] = t.dims();
        let side = n + n * n;
        let p = &w.mats[0];
        if !p.submatrix(0, n, n, side).is_zero() {
            return Err(Error::WitnessInvalid(
                "isometry moves gadget vectors into the original block".into(),
            ));
        }
        let p11 = p.submatrix(0, n, 0, n);
        if MonomialMatrix::from_mat(&p11).is_none() {
            return Err(Error::WitnessInvalid("top-left block is not monomial".into()));
        }
        let r = w.mats[1]
            .inverse()?
            .submatrix(0, m, 0, m)
            .inverse()
            .map_err(|_| Error::WitnessInvalid("main mixing block is singular".into()))?;
        let rec = Witness::new(Tag::Isometry, vec![p11, r])?;
        checked(Tag::Isometry, a, b, rec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle() {
        let f = GF::new(3).unwrap();
        let k3 = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let t = graph_to_altspace(f, &k3);
        assert_eq!(t.len(), 3);
        assert!(t.is_alternating());
        assert!(t.slices().iter().all(|s| s.rank() == 2));
    }

    #[test]
    fn gadget_dimensions() {
        let f = GF::new(2).unwrap();
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        let t = monomial_gadget(&graph_to_altspace(f, &g)).unwrap();
        assert_eq!((t.rows(), t.len()), (6, 5));
        assert!(t.is_alternating());
    }
}
