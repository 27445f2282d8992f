//! Path-algebra constructions: d-way array isomorphism to algebra
//! isomorphism, and weighted digraphs to radical-square-zero algebras.
//!
//! For a d-way array of size `n₀×…×n_{d−1}` the quiver has vertices
//! `0..d`, arrows `x_{i,a}: i → i+1` (`a < n_i`, `i ≤ d−2`) and arrows
//! `x_{d,j}: 0 → d−1` (`j < n_{d−1}`). The relation rewrites a full chain
//! `x_{0,a₀}⋯x_{d−2,a_{d−2}}` as `Σ_j A(a₀,…,a_{d−2},j) x_{d,j}`, so full
//! chains are not basis elements of the quotient.

use std::collections::HashMap;
use std::ops::Range;

use super::{checked, expect_tag, Reduction, ReductionDescriptor};
use crate::algebra::AlgebraSC;
use crate::error::{Error, Result};
use crate::gf::GF;
use crate::graph::Digraph;
use crate::matspace::Mat;
use crate::tensor::{Tensor3, TensorD};
use crate::witness::{Instance, Tag, Witness};

/// A chain path: start vertex and the labels of its arrows.
type Path = (usize, Vec<usize>);

/// Basis bookkeeping for the quotient algebra of a d-way array.
#[derive(Clone, Debug)]
pub struct PathAlgebra {
    dims: Vec<usize>,
    /// Non-full chain paths, grouped by (start, length), labels in lex order.
    paths: Vec<Path>,
    index: HashMap<Path, usize>,
    /// Basis ranges of each (start, length) group, in basis order.
    groups: Vec<(usize, usize, Range<usize>)>,
    algebra: AlgebraSC,
}

fn label_tuples(dims: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &n in dims {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..n).map(move |a| {
                    let mut q = p.clone();
                    q.push(a);
                    q
                })
            })
            .collect();
    }
    out
}

impl PathAlgebra {
    pub fn new(t: &TensorD) -> Result<PathAlgebra> {
        let dims = t.dims().to_vec();
        let d = dims.len();
        if d < 3 {
            return Err(Error::InvalidInput(format!(
                "path algebra needs at least 3 directions, got {d}"
            )));
        }
        let f = t.field();
        let mut paths = Vec::new();
        let mut groups = Vec::new();
        for s in 0..d - 1 {
            for len in 1..d - s {
                if s == 0 && len == d - 1 {
                    continue;
                }
                let start = d + paths.len();
                for labels in label_tuples(&dims[s..s + len]) {
                    paths.push((s, labels));
                }
                groups.push((s, len, start..d + paths.len()));
            }
        }
        let index: HashMap<Path, usize> =
            paths.iter().enumerate().map(|(i, p)| (p.clone(), d + i)).collect();
        let xd0 = d + paths.len();
        let nd = dims[d - 1];
        let dim = xd0 + nd;

        let mut sc = Tensor3::zeros(f, dim, dim, dim);
        // (start, end) of every radical basis element
        let ends = |b: usize| -> (usize, usize) {
            if b >= xd0 {
                (0, d - 1)
            } else {
                let (s, l) = &paths[b - d];
                (*s, s + l.len())
            }
        };
        for i in 0..d {
            sc.set(i, i, i, 1);
        }
        for b in d..dim {
            let (s, e) = ends(b);
            sc.set(s, b, b, 1);
            sc.set(b, e, b, 1);
        }
        for (i, (s1, l1)) in paths.iter().enumerate() {
            for (j, (s2, l2)) in paths.iter().enumerate() {
                if s1 + l1.len() != *s2 {
                    continue;
                }
                let mut labels = l1.clone();
                labels.extend_from_slice(l2);
                if *s1 == 0 && labels.len() == d - 1 {
                    let mut idx = labels.clone();
                    idx.push(0);
                    for jj in 0..nd {
                        idx[d - 1] = jj;
                        sc.set(d + i, d + j, xd0 + jj, t.get(&idx));
                    }
                } else {
                    let k = index[&(*s1, labels)];
                    sc.set(d + i, d + j, k, 1);
                }
            }
        }
        Ok(PathAlgebra {
            dims,
            paths,
            index,
            groups,
            algebra: AlgebraSC::new(sc)?,
        })
    }

    pub fn algebra(&self) -> &AlgebraSC {
        &self.algebra
    }
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }
    pub fn order(&self) -> usize {
        self.dims.len()
    }

    /// Basis positions of the arrows `x_{i,*}`, `i ≤ d−2`.
    pub fn arrows(&self, i: usize) -> Range<usize> {
        let at = self.index[&(i, vec![0])];
        at..at + self.dims[i]
    }

    /// Basis positions of `x_{d,*}`.
    pub fn xd(&self) -> Range<usize> {
        let d = self.order();
        d + self.paths.len()..self.dim()
    }

    /// Block diagonal basis change induced by `(P₀, …, P_{d−1})`.
    pub fn forward_matrix(&self, mats: &[Mat]) -> Result<Mat> {
        let d = self.order();
        let f = self.algebra.field();
        let mut blocks = vec![Mat::identity(f, d)];
        for (s, len, _) in &self.groups {
            let mut k = mats[*s].clone();
            for m in &mats[s + 1..s + len] {
                k = k.kron(m);
            }
            blocks.push(k);
        }
        blocks.push(mats[d - 1].inverse()?.transpose());
        let refs: Vec<&Mat> = blocks.iter().collect();
        Ok(Mat::block_diag(f, &refs))
    }
}

pub fn dti_to_algebra(t: &TensorD) -> Result<AlgebraSC> {
    Ok(PathAlgebra::new(t)?.algebra)
}

/// Dimension of the quotient algebra: idempotents, non-full chains and the
/// `x_{d,*}` arrows.
pub fn dti_algebra_dim(dims: &[usize]) -> usize {
    let d = dims.len();
    chain_count(dims) - dims[..d - 1].iter().product::<usize>() + d + dims[d - 1]
}

/// `d + n_d + Σ` over all chains of lengths `1..d−1`, the full chain included.
pub fn dti_dimension_formula(dims: &[usize]) -> usize {
    let d = dims.len();
    d + dims[d - 1] + chain_count(dims)
}

fn chain_count(dims: &[usize]) -> usize {
    let d = dims.len();
    (0..d - 1)
        .flat_map(|s| (s + 1..d).map(move |e| dims[s..e].iter().product::<usize>()))
        .sum()
}

fn expect_tensord<'a>(a: &'a Instance, what: &str) -> Result<&'a TensorD> {
    match a {
        Instance::TensorD(t) => Ok(t),
        other => Err(Error::InvalidInput(format!(
            "{what} expects a d-way array, got a {}",
            other.kind()
        ))),
    }
}

pub struct DtiToAlgebra;

impl Reduction for DtiToAlgebra {
    fn descriptor(&self) -> ReductionDescriptor {
        ReductionDescriptor {
            name: "dti-to-algebra",
            source: Tag::TiD,
            target: Tag::AlgebraIso,
            dims: "n₀×…×n_{d−1} ↦ algebra of dimension d + n_{d−1} + Σ non-full chains",
        }
    }

    fn target_dims(&self, a: &Instance) -> Result<Vec<usize>> {
        let t = expect_tensord(a, "dti-to-algebra")?;
        if t.order() < 3 {
            return Err(Error::InvalidInput("needs at least 3 directions".into()));
        }
        Ok(vec![dti_algebra_dim(t.dims())])
    }

    fn construct(&self, a: &Instance) -> Result<Instance> {
        Ok(Instance::Algebra(dti_to_algebra(expect_tensord(a, "dti-to-algebra")?)?))
    }

    fn witness_forward(&self, a: &Instance, w: &Witness) -> Result<Witness> {
        expect_tag(w, Tag::TiD)?;
        let pa = PathAlgebra::new(expect_tensord(a, "dti-to-algebra")?)?;
        if w.mats.len() != pa.order() {
            return Err(Error::InvalidInput("witness has the wrong number of factors".into()));
        }
        Witness::new(Tag::AlgebraIso, vec![pa.forward_matrix(&w.mats)?])
    }

    /// Conjugates the isomorphism by `u = Σ e_i f(e_i)` so it fixes every
    /// idempotent, then reads the factors from the arrow blocks.
    fn witness_recover(&self, a: &Instance, b: &Instance, w: &Witness) -> Result<Witness> {
        expect_tag(w, Tag::AlgebraIso)?;
        let t = expect_tensord(a, "dti-to-algebra")?;
        let pa = PathAlgebra::new(t)?;
        let alg = pa.algebra();
        let f = alg.field();
        let (d, dim) = (pa.order(), pa.dim());
        let p = &w.mats[0];
        if p.rows() != dim {
            return Err(Error::WitnessInvalid(format!("expected a {dim}×{dim} matrix")));
        }
        for i in 0..d {
            if (0..d).any(|k| p.get(k, i) != u32::from(k == i)) {
                return Err(Error::WitnessInvalid(
                    "isomorphism permutes the vertex idempotents".into(),
                ));
            }
        }
        let unit = |i: usize| {
            let mut v = vec![0; dim];
            v[i] = 1;
            v
        };
        let add = |x: &[u32], y: &[u32]| -> Vec<u32> {
            x.iter().zip(y).map(|(&s, &t)| f.add(s, t)).collect()
        };
        // u = 1 + r with r = Σ e_i (f(e_i) − e_i) in the radical
        let mut r = vec![0; dim];
        for i in 0..d {
            let mut n_i = p.col(i);
            n_i[i] = f.sub(n_i[i], 1);
            r = add(&r, &alg.mul(&unit(i), &n_i));
        }
        let one: Vec<u32> = (0..dim).map(|k| u32::from(k < d)).collect();
        let u = add(&one, &r);
        let neg_r: Vec<u32> = r.iter().map(|&x| f.neg(x)).collect();
        let mut u_inv = one.clone();
        let mut term = one;
        for _ in 0..d {
            term = alg.mul(&term, &neg_r);
            u_inv = add(&u_inv, &term);
        }
        let mut g = Mat::zeros(f, dim, dim);
        for c in 0..dim {
            let col = alg.mul(&alg.mul(&u, &p.col(c)), &u_inv);
            for (k, v) in col.into_iter().enumerate() {
                g.set(k, c, v);
            }
        }
        let block = |rg: Range<usize>| g.submatrix(rg.start, rg.end, rg.start, rg.end);
        let mut mats: Vec<Mat> = (0..d - 1).map(|i| block(pa.arrows(i))).collect();
        let q = block(pa.xd());
        mats.push(
            q.inverse()
                .map_err(|_| Error::WitnessInvalid("x_d block is singular".into()))?
                .transpose(),
        );
        let rec = Witness::new(Tag::TiD, mats)
            .map_err(|e| Error::WitnessInvalid(format!("recovered blocks: {e}")))?;
        checked(Tag::TiD, a, b, rec)
    }
}

/// Radical-square-zero algebra of a digraph: idempotents `e_v`, then one
/// basis element per arc in [`Digraph::arcs`] order.
pub fn grigoriev_graph_algebra(f: GF, g: &Digraph) -> AlgebraSC {
    let n = g.n();
    let arcs = g.arcs();
    let dim = n + arcs.len();
    let mut sc = Tensor3::zeros(f, dim, dim, dim);
    for i in 0..n {
        sc.set(i, i, i, 1);
    }
    for (k, &(s, t)) in arcs.iter().enumerate() {
        sc.set(s, n + k, n + k, 1);
        sc.set(n + k, t, n + k, 1);
    }
    AlgebraSC::new(sc).expect("cubical structure constants")
}

/// Weighted digraph with `weight(i, j) = dim e_i·R·e_j`, given the
/// idempotents and a basis of the radical as coordinate vectors.
pub fn grigoriev_reconstruct(alg: &AlgebraSC, idempotents: &[Vec<u32>], radical: &[Vec<u32>]) -> Digraph {
    let f = alg.field();
    let n = idempotents.len();
    let dim = alg.dim();
    let mut w = vec![vec![0; n]; n];
    for (i, ei) in idempotents.iter().enumerate() {
        for (j, ej) in idempotents.iter().enumerate() {
            let rows: Vec<u32> = radical
                .iter()
                .flat_map(|r| alg.mul(&alg.mul(ei, r), ej))
                .collect();
            if !rows.is_empty() {
                w[i][j] = Mat::from_vec(f, radical.len(), dim, rows)
                    .expect("row-major block")
                    .rank();
            }
        }
    }
    Digraph::from_weights(w).expect("square weights")
}

fn expect_digraph(a: &Instance) -> Result<&Digraph> {
    match a {
        Instance::Digraph(g) => Ok(g),
        other => Err(Error::InvalidInput(format!(
            "grigoriev expects a digraph, got a {}",
            other.kind()
        ))),
    }
}

/// Digraphs carry no field, so the reduction is parameterised by one.
pub struct Grigoriev {
    pub field: GF,
}

impl Reduction for Grigoriev {
    fn descriptor(&self) -> ReductionDescriptor {
        ReductionDescriptor {
            name: "grigoriev",
            source: Tag::GraphIso,
            target: Tag::AlgebraIso,
            dims: "digraph (n, e) ↦ algebra of dimension n + e",
        }
    }

    fn target_dims(&self, a: &Instance) -> Result<Vec<usize>> {
        let g = expect_digraph(a)?;
        Ok(vec![g.n() + g.arc_count()])
    }

    fn construct(&self, a: &Instance) -> Result<Instance> {
        Ok(Instance::Algebra(grigoriev_graph_algebra(
            self.field,
            expect_digraph(a)?,
        )))
    }

    /// Vertex `i ↦ σ(i)`; the `t`-th parallel arc `i → j` goes to the
    /// `t`-th parallel arc `σ(i) → σ(j)`.
    fn witness_forward(&self, a: &Instance, w: &Witness) -> Result<Witness> {
        expect_tag(w, Tag::GraphIso)?;
        let g = expect_digraph(a)?;
        let n = g.n();
        let sigma = w.graph_perm();
        let h_arcs = g.relabel(&sigma).arcs();
        let mut first: HashMap<(usize, usize), usize> = HashMap::new();
        for (k, &arc) in h_arcs.iter().enumerate().rev() {
            first.insert(arc, k);
        }
        let mut pi = sigma.clone();
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        for &(i, j) in &g.arcs() {
            let key = (sigma[i], sigma[j]);
            let t = seen.entry(key).or_insert(0);
            pi.push(n + first[&key] + *t);
            *t += 1;
        }
        Witness::new(Tag::AlgebraIso, vec![Mat::permutation(self.field, &pi)])
    }

    /// Column `v < n` must be the idempotent `e_u` modulo the radical, which
    /// gives `σ(u) = v`.
    fn witness_recover(&self, a: &Instance, b: &Instance, w: &Witness) -> Result<Witness> {
        expect_tag(w, Tag::AlgebraIso)?;
        let g = expect_digraph(a)?;
        let n = g.n();
        let p = &w.mats[0];
        let mut sigma = vec![usize::MAX; n];
        for v in 0..n {
            let support: Vec<usize> = (0..n).filter(|&k| p.get(k, v) != 0).collect();
            match support[..] {
                [u] if p.get(u, v) == 1 && sigma[u] == usize::MAX => sigma[u] = v,
                _ => {
                    return Err(Error::WitnessInvalid(
                        "idempotent images are not a vertex permutation".into(),
                    ))
                }
            }
        }
        checked(Tag::GraphIso, a, b, Witness::graph(self.field, &sigma)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::act;

    fn unit(dim: usize, i: usize) -> Vec<u32> {
        let mut v = vec![0; dim];
        v[i] = 1;
        v
    }

    #[test]
    fn dims_222_and_2222() {
        let f = GF::new(2).unwrap();
        let t = TensorD::zeros(f, &[2, 2, 2]).unwrap();
        assert_eq!(dti_to_algebra(&t).unwrap().dim(), 9);
        assert_eq!(dti_algebra_dim(&[2, 2, 2]), 9);
        assert_eq!(dti_dimension_formula(&[2, 2, 2]), 13);
        assert_eq!(dti_algebra_dim(&[2, 2, 2, 2]), 20);
        assert_eq!(dti_dimension_formula(&[2, 2, 2, 2]), 28);
        assert!(dti_to_algebra(&TensorD::zeros(f, &[2, 2]).unwrap()).is_err());
    }

    #[test]
    fn relation_rewrites_full_chain() {
        let f = GF::new(3).unwrap();
        let data: Vec<u32> = (0..8).map(|i| i % 3).collect();
        let t = TensorD::from_vec(f, &[2, 2, 2], data).unwrap();
        let pa = PathAlgebra::new(&t).unwrap();
        let alg = pa.algebra();
        assert!(alg.is_associative());
        let (x0, x1, xd) = (pa.arrows(0), pa.arrows(1), pa.xd());
        for a in 0..2 {
            for b in 0..2 {
                let prod = alg.basis_product(x0.start + a, x1.start + b);
                for j in 0..2 {
                    assert_eq!(prod[xd.start + j], t.get(&[a, b, j]));
                }
            }
        }
    }

    #[test]
    fn path_graph_has_dim_5() {
        let f = GF::new(2).unwrap();
        let g = Digraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let alg = grigoriev_graph_algebra(f, &g);
        assert_eq!(alg.dim(), 5);
        assert!(alg.is_associative());
        for i in 3..5 {
            for j in 3..5 {
                assert!(alg.basis_product(i, j).iter().all(|&x| x == 0));
            }
        }
    }

    #[test]
    fn reconstruct_recovers_weights() {
        let f = GF::new(3).unwrap();
        let g = Digraph::new(2, &[(0, 1), (0, 1), (1, 1)]).unwrap();
        let alg = grigoriev_graph_algebra(f, &g);
        let idem: Vec<_> = (0..2).map(|i| unit(5, i)).collect();
        let rad: Vec<_> = (2..5).map(|i| unit(5, i)).collect();
        assert_eq!(grigoriev_reconstruct(&alg, &idem, &rad), g);
    }

    #[test]
    fn grigoriev_witnesses_round_trip() {
        let f = GF::new(2).unwrap();
        let red = Grigoriev { field: f };
        let g = Instance::Digraph(Digraph::new(3, &[(0, 1), (0, 1), (2, 0), (1, 1)]).unwrap());
        let w = Witness::graph(f, &[2, 0, 1]).unwrap();
        let h = act(&g, &w).unwrap();
        let fw = red.witness_forward(&g, &w).unwrap();
        let (ta, tb) = (red.construct(&g).unwrap(), red.construct(&h).unwrap());
        assert!(crate::witness::verify_witness(Tag::AlgebraIso, &ta, &tb, &fw).unwrap());
        assert_eq!(red.witness_recover(&g, &h, &fw).unwrap(), w);
    }
}
