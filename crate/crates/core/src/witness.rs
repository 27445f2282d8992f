//! Problem tags, witnesses, and the action of a witness on an instance.
//!
//! Conventions (all built on [`Tensor3::act3`]):
//!
//! | tag | matrices | action |
//! |---|---|---|
//! | `Ti3`, `Equivalence` | `X, Y, Z` | `act3(X, Y, Z)` |
//! | `Isometry`, `PseudoIsometry` | `P, R` | `act3(P, P, R)`: slices `PᵗA_kP`, mixed by `R` |
//! | `Conjugacy` | `P, R` | `act3(P⁻ᵗ, P, R)`: slices `P⁻¹A_kP`, mixed by `R` |
//! | `TrilinearEq` | `P` | `act3(P, P, P)` |
//! | `AlgebraIso` | `P` | `act3(P, P, P⁻ᵗ)`, the new basis is `x'_a = Σ_i P[i][a] x_i` |
//! | `TiD` | `P_1 .. P_d` | one matrix per direction |
//! | `FormEq` | `A` | `f ↦ f(Ax)` |
//! | `MonCodeEq` | `Q, D, P` | `C ↦ Q·C·D·P`, `D` diagonal, `P` a permutation |
//! | `GraphIso` | `Π` | `Π[i][σ(i)] = 1`, edges `{i,j} ↦ {σi, σj}` |
//!
//! Composition is arranged so that `act(act(a, w1), w2) = act(a, compose(w1, w2))`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraSC;
use crate::error::{dim_err, Error, Result};
use crate::form::FormD;
use crate::gf::GF;
use crate::graph::{Digraph, Graph};
use crate::matspace::{Mat, MonomialMatrix};
use crate::tensor::{Tensor3, TensorD};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tag {
    Ti3,
    Equivalence,
    Isometry,
    PseudoIsometry,
    Conjugacy,
    AlgebraIso,
    TrilinearEq,
    FormEq,
    MonCodeEq,
    GraphIso,
    TiD,
}

impl Tag {
    pub const ALL: [Tag; 11] = [
        Tag::Ti3,
        Tag::Equivalence,
        Tag::Isometry,
        Tag::PseudoIsometry,
        Tag::Conjugacy,
        Tag::AlgebraIso,
        Tag::TrilinearEq,
        Tag::FormEq,
        Tag::MonCodeEq,
        Tag::GraphIso,
        Tag::TiD,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Tag::Ti3 => "ti3",
            Tag::Equivalence => "equivalence",
            Tag::Isometry => "isometry",
            Tag::PseudoIsometry => "pseudo-isometry",
            Tag::Conjugacy => "conjugacy",
            Tag::AlgebraIso => "algebra-iso",
            Tag::TrilinearEq => "trilinear-eq",
            Tag::FormEq => "form-eq",
            Tag::MonCodeEq => "moncode-eq",
            Tag::GraphIso => "graph-iso",
            Tag::TiD => "tid",
        }
    }

    /// Number of matrices a witness of this tag carries (`None`: one per direction).
    pub fn arity(self) -> Option<usize> {
        match self {
            Tag::Ti3 | Tag::Equivalence | Tag::MonCodeEq => Some(3),
            Tag::Isometry | Tag::PseudoIsometry | Tag::Conjugacy => Some(2),
            Tag::AlgebraIso | Tag::TrilinearEq | Tag::FormEq | Tag::GraphIso => Some(1),
            Tag::TiD => None,
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Tag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Tag> {
        Tag::ALL
            .iter()
            .copied()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown problem tag `{s}`")))
    }
}

/// A tagged tuple of invertible matrices certifying an equivalence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Witness {
    pub tag: Tag,
    pub mats: Vec<Mat>,
}

impl Witness {
    pub fn new(tag: Tag, mats: Vec<Mat>) -> Result<Witness> {
        if let Some(k) = tag.arity() {
            if mats.len() != k {
                return dim_err(format!("{tag} witness needs {k} matrices, got {}", mats.len()));
            }
        } else if mats.is_empty() {
            return dim_err("tid witness needs at least one matrix");
        }
        for m in &mats {
            if !m.is_square() || !m.is_invertible() {
                return Err(Error::WitnessInvalid(format!("{tag} witness has a singular matrix")));
            }
        }
        if tag == Tag::MonCodeEq {
            if !is_diagonal(&mats[1]) {
                return Err(Error::WitnessInvalid("D is not diagonal".into()));
            }
            if !is_permutation(&mats[2]) {
                return Err(Error::WitnessInvalid("P is not a permutation matrix".into()));
            }
        }
        if tag == Tag::GraphIso && !is_permutation(&mats[0]) {
            return Err(Error::WitnessInvalid("graph witness is not a permutation matrix".into()));
        }
        Ok(Witness { tag, mats })
    }

    pub fn identity(tag: Tag, f: GF, sizes: &[usize]) -> Result<Witness> {
        Witness::new(tag, sizes.iter().map(|&n| Mat::identity(f, n)).collect())
    }

    /// Monomial code witness from the monomial part `M = D·P`.
    pub fn moncode(q: Mat, m: &MonomialMatrix) -> Result<Witness> {
        let (d, p) = m.diag_perm();
        Witness::new(Tag::MonCodeEq, vec![q, d, p])
    }

    /// Graph witness for the relabelling `v ↦ sigma[v]`.
    pub fn graph(f: GF, sigma: &[usize]) -> Result<Witness> {
        Witness::new(Tag::GraphIso, vec![Mat::permutation(f, sigma)])
    }

    /// The relabelling encoded by a graph witness.
    pub fn graph_perm(&self) -> Vec<usize> {
        perm_of(&self.mats[0])
    }

    /// `w` such that `act(act(a, self), other) = act(a, w)`.
    pub fn compose(&self, other: &Witness) -> Result<Witness> {
        if self.tag != other.tag || self.mats.len() != other.mats.len() {
            return Err(Error::InvalidInput("composing witnesses of different shapes".into()));
        }
        let mats = match self.tag {
            Tag::MonCodeEq => {
                let q = other.mats[0].mul(&self.mats[0]);
                let m = self.mats[1]
                    .mul(&self.mats[2])
                    .mul(&other.mats[1])
                    .mul(&other.mats[2]);
                let mono = MonomialMatrix::from_mat(&m).expect("product of monomials");
                return Witness::moncode(q, &mono);
            }
            _ => self
                .mats
                .iter()
                .zip(&other.mats)
                .map(|(a, b)| a.try_mul(b))
                .collect::<Result<Vec<_>>>()?,
        };
        Witness::new(self.tag, mats)
    }

    /// `w` with `act(act(a, self), w) = a`.
    pub fn inverse(&self) -> Result<Witness> {
        match self.tag {
            Tag::MonCodeEq => {
                let q = self.mats[0].inverse()?;
                let m = self.mats[1].mul(&self.mats[2]).inverse()?;
                Witness::moncode(q, &MonomialMatrix::from_mat(&m).expect("monomial"))
            }
            _ => Witness::new(
                self.tag,
                self.mats.iter().map(Mat::inverse).collect::<Result<Vec<_>>>()?,
            ),
        }
    }
}

pub(crate) fn is_diagonal(m: &Mat) -> bool {
    (0..m.rows()).all(|i| (0..m.cols()).all(|j| i == j || m.get(i, j) == 0))
}

pub(crate) fn is_permutation(m: &Mat) -> bool {
    m.is_square()
        && (0..m.rows()).all(|i| {
            m.row(i).iter().filter(|&&v| v != 0).count() == 1
                && m.row(i).iter().all(|&v| v <= 1)
        })
        && (0..m.cols()).all(|j| m.col(j).iter().filter(|&&v| v != 0).count() == 1)
}

pub(crate) fn perm_of(m: &Mat) -> Vec<usize> {
    (0..m.rows())
        .map(|i| m.row(i).iter().position(|&v| v != 0).expect("permutation row"))
        .collect()
}

/// An instance of one of the problems, as the objects the witnesses act on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Instance {
    /// 3-way arrays; matrix tuples are their frontal slices.
    Tensor3(Tensor3),
    TensorD(TensorD),
    Algebra(AlgebraSC),
    Form(FormD),
    Code(Mat),
    Graph(Graph),
    Digraph(Digraph),
}

impl Instance {
    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Tensor3(_) => "tensor3",
            Instance::TensorD(_) => "tensord",
            Instance::Algebra(_) => "algebra",
            Instance::Form(_) => "formd",
            Instance::Code(_) => "code",
            Instance::Graph(_) => "graph",
            Instance::Digraph(_) => "digraph",
        }
    }

    fn mismatch(&self, tag: Tag) -> Error {
        Error::InvalidInput(format!("a {tag} witness cannot act on a {}", self.kind()))
    }
}

/// Action of a witness on a 3-way array, for the tags that act on one.
pub fn act_tensor3(t: &Tensor3, w: &Witness) -> Result<Tensor3> {
    let m = &w.mats;
    match w.tag {
        Tag::Ti3 | Tag::Equivalence => t.act3(&m[0], &m[1], &m[2]),
        Tag::Isometry | Tag::PseudoIsometry => t.act3(&m[0], &m[0], &m[1]),
        Tag::Conjugacy => t.act3(&m[0].inverse()?.transpose(), &m[0], &m[1]),
        Tag::TrilinearEq => t.act3(&m[0], &m[0], &m[0]),
        Tag::AlgebraIso => t.act3(&m[0], &m[0], &m[0].inverse()?.transpose()),
        Tag::TiD => {
            if m.len() != 3 {
                return dim_err("tid witness on a 3-way array needs 3 matrices");
            }
            t.act3(&m[0], &m[1], &m[2])
        }
        tag => Err(Error::InvalidInput(format!("a {tag} witness cannot act on a tensor3"))),
    }
}

pub fn act(a: &Instance, w: &Witness) -> Result<Instance> {
    let m = &w.mats;
    Ok(match (a, w.tag) {
        (Instance::Tensor3(t), _) => Instance::Tensor3(act_tensor3(t, w)?),
        (Instance::TensorD(t), Tag::TiD) => Instance::TensorD(t.act(m)?),
        (Instance::TensorD(t), Tag::TrilinearEq) => {
            Instance::TensorD(t.act(&vec![m[0].clone(); t.order()])?)
        }
        (Instance::Algebra(alg), Tag::AlgebraIso) => Instance::Algebra(alg.change_basis(&m[0])?),
        (Instance::Form(f), Tag::FormEq) => Instance::Form(f.substitute(&m[0])?),
        (Instance::Code(c), Tag::MonCodeEq) => {
            Instance::Code(m[0].try_mul(c)?.try_mul(&m[1])?.try_mul(&m[2])?)
        }
        (Instance::Graph(g), Tag::GraphIso) => {
            if m[0].rows() != g.n() {
                return dim_err("permutation size differs from the vertex count");
            }
            Instance::Graph(g.relabel(&perm_of(&m[0])))
        }
        (Instance::Digraph(g), Tag::GraphIso) => {
            if m[0].rows() != g.n() {
                return dim_err("permutation size differs from the vertex count");
            }
            Instance::Digraph(g.relabel(&perm_of(&m[0])))
        }
        (a, tag) => return Err(a.mismatch(tag)),
    })
}

/// `act(a, w) == b`, exactly.
pub fn verify_witness(tag: Tag, a: &Instance, b: &Instance, w: &Witness) -> Result<bool> {
    if w.tag != tag {
        return Err(Error::InvalidInput(format!(
            "witness tagged {} offered for {tag}",
            w.tag
        )));
    }
    match act(a, w) {
        Ok(img) => Ok(&img == b),
        Err(Error::Dimension(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matspace::{random_gl, random_mat, random_monomial};
    use rand::{seq::SliceRandom, Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_t3(rng: &mut ChaCha8Rng, f: GF, d: [usize; 3]) -> Tensor3 {
        let data = (0..d[0] * d[1] * d[2]).map(|_| rng.gen_range(0..f.p())).collect();
        Tensor3::from_vec(f, d[0], d[1], d[2], data).unwrap()
    }

    fn random_witness(rng: &mut ChaCha8Rng, tag: Tag, f: GF, n: usize) -> Witness {
        match tag {
            Tag::MonCodeEq => Witness::moncode(random_gl(rng, f, 2), &random_monomial(rng, f, n)).unwrap(),
            Tag::GraphIso => {
                let mut s: Vec<usize> = (0..n).collect();
                s.shuffle(rng);
                Witness::graph(f, &s).unwrap()
            }
            Tag::Isometry | Tag::PseudoIsometry | Tag::Conjugacy => {
                Witness::new(tag, vec![random_gl(rng, f, n), random_gl(rng, f, 2)]).unwrap()
            }
            _ => {
                let k = tag.arity().unwrap_or(3);
                Witness::new(tag, (0..k).map(|_| random_gl(rng, f, n)).collect()).unwrap()
            }
        }
    }

    fn instance_for(rng: &mut ChaCha8Rng, tag: Tag, f: GF, n: usize) -> Instance {
        match tag {
            Tag::Isometry | Tag::PseudoIsometry | Tag::Conjugacy => {
                Instance::Tensor3(random_t3(rng, f, [n, n, 2]))
            }
            Tag::AlgebraIso => {
                Instance::Algebra(AlgebraSC::new(random_t3(rng, f, [n, n, n])).unwrap())
            }
            Tag::FormEq => Instance::Form(FormD::random(rng, f, n, 3)),
            Tag::MonCodeEq => Instance::Code(random_mat(rng, f, 2, n)),
            Tag::GraphIso => {
                let g = Graph::all(n);
                Instance::Graph(g[rng.gen_range(0..g.len())].clone())
            }
            Tag::TiD => {
                let data = (0..n * n * n).map(|_| rng.gen_range(0..f.p())).collect();
                Instance::TensorD(TensorD::from_vec(f, &[n, n, n], data).unwrap())
            }
            _ => Instance::Tensor3(random_t3(rng, f, [n, n, n])),
        }
    }

    #[test]
    fn identity_fixes_every_tag() {
        let f = GF::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for tag in Tag::ALL {
            let a = instance_for(&mut rng, tag, f, 3);
            let id = random_witness(&mut rng, tag, f, 3);
            let id = Witness::new(
                tag,
                id.mats.iter().map(|m| Mat::identity(f, m.rows())).collect(),
            )
            .unwrap();
            assert!(verify_witness(tag, &a, &a, &id).unwrap(), "{tag}");
        }
    }

    #[test]
    fn composition_law_every_tag() {
        let f = GF::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for tag in Tag::ALL {
            for _ in 0..100 {
                let a = instance_for(&mut rng, tag, f, 3);
                let w1 = random_witness(&mut rng, tag, f, 3);
                let w2 = random_witness(&mut rng, tag, f, 3);
                let lhs = act(&act(&a, &w1).unwrap(), &w2).unwrap();
                let rhs = act(&a, &w1.compose(&w2).unwrap()).unwrap();
                assert_eq!(lhs, rhs, "{tag}");
                let back = act(&lhs, &w1.compose(&w2).unwrap().inverse().unwrap()).unwrap();
                assert_eq!(back, a, "{tag}");
            }
        }
    }

    #[test]
    fn r_mixing_uses_columns() {
        // slice c of the result is Σ_k R[k][c] A_k
        let f = GF::new(5).unwrap();
        let a1 = Mat::from_rows(f, &[&[1, 0], &[0, 0]]);
        let a2 = Mat::from_rows(f, &[&[0, 1], &[0, 0]]);
        let t = Tensor3::from_frontal(
            &crate::matspace::MatrixTuple::new(f, 2, 2, vec![a1.clone(), a2.clone()]).unwrap(),
        );
        let r = Mat::from_rows(f, &[&[1, 2], &[3, 4]]);
        let w = Witness::new(Tag::Isometry, vec![Mat::identity(f, 2), r]).unwrap();
        let out = act_tensor3(&t, &w).unwrap().frontal();
        assert_eq!(out.slice(0), &a1.add(&a2.scale(3)));
        assert_eq!(out.slice(1), &a1.scale(2).add(&a2.scale(4)));
    }

    #[test]
    fn tags_parse() {
        for tag in Tag::ALL {
            assert_eq!(tag.name().parse::<Tag>().unwrap(), tag);
        }
        assert!("nope".parse::<Tag>().is_err());
    }

    #[test]
    fn malformed_witnesses_rejected() {
        let f = GF::new(2).unwrap();
        assert!(Witness::new(Tag::Ti3, vec![Mat::identity(f, 2)]).is_err());
        assert!(Witness::new(Tag::FormEq, vec![Mat::zeros(f, 2, 2)]).is_err());
        let not_perm = Mat::from_rows(f, &[&[1, 1], &[0, 1]]);
        assert!(Witness::new(Tag::GraphIso, vec![not_perm]).is_err());
    }
}
