//! Baer and Lazard correspondences between alternating bilinear maps or
//! nilpotent Lie algebras and p-groups given by unitriangular generators.

use std::collections::{HashSet, VecDeque};

use crate::algebra::AlgebraSC;
use crate::error::{dim_err, Error, Result};
use crate::gf::GF;
use crate::matspace::{check_budget, Mat, MatrixTuple, VecSpace};
use crate::tensor::Tensor3;

/// A matrix group given by invertible generators of a common size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixGroupGens {
    f: GF,
    size: usize,
    gens: Vec<Mat>,
}

impl MatrixGroupGens {
    pub fn new(f: GF, size: usize, gens: Vec<Mat>) -> Result<MatrixGroupGens> {
        for (i, g) in gens.iter().enumerate() {
            if g.rows() != size || g.cols() != size || g.field() != f {
                return dim_err(format!("generator {i} is not a {size}×{size} matrix over GF({})", f.p()));
            }
            if !g.is_invertible() {
                return Err(Error::InvalidInput(format!("generator {i} is singular")));
            }
        }
        Ok(MatrixGroupGens { f, size, gens })
    }

    pub fn field(&self) -> GF {
        self.f
    }
    pub fn size(&self) -> usize {
        self.size
    }
    pub fn gens(&self) -> &[Mat] {
        &self.gens
    }

    pub fn is_unitriangular(&self) -> bool {
        self.gens.iter().all(is_unitriangular)
    }

    /// Conjugates every generator by `c`: `g ↦ c⁻¹gc`.
    pub fn conjugate(&self, c: &Mat) -> Result<MatrixGroupGens> {
        let ci = c.inverse()?;
        let gens = self.gens.iter().map(|g| ci.mul(g).mul(c)).collect();
        MatrixGroupGens::new(self.f, self.size, gens)
    }

    /// All elements, by breadth-first closure under right multiplication by
    /// the generators. Refuses past `budget` elements.
    pub fn elements(&self, budget: u128) -> Result<Vec<Mat>> {
        let id = Mat::identity(self.f, self.size);
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        let mut out = vec![id.clone()];
        seen.insert(id.data().to_vec());
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &self.gens {
                let y = x.mul(g);
                if seen.insert(y.data().to_vec()) {
                    check_budget("group closure", out.len() as u128 + 1, budget)?;
                    out.push(y.clone());
                    queue.push_back(y);
                }
            }
        }
        Ok(out)
    }
}

pub fn is_unitriangular(g: &Mat) -> bool {
    g.is_square()
        && (0..g.rows()).all(|i| {
            g.get(i, i) == 1 && (0..i).all(|j| g.get(i, j) == 0)
        })
}

/// `g⁻¹h⁻¹gh`.
pub fn commutator(g: &Mat, h: &Mat) -> Mat {
    let gi = g.inverse().expect("invertible");
    let hi = h.inverse().expect("invertible");
    gi.mul(&hi).mul(g).mul(h)
}

/// `[A, B] = AB − BA`.
pub fn bracket(a: &Mat, b: &Mat) -> Mat {
    a.mul(b).sub(&b.mul(a))
}

/// Smallest `k` with `n^k = 0`, if any.
fn nilpotency_index(n: &Mat) -> Option<usize> {
    let size = n.rows();
    let mut pw = Mat::identity(n.field(), size);
    for k in 1..=size + 1 {
        pw = pw.mul(n);
        if pw.is_zero() {
            return Some(k);
        }
    }
    None
}

fn check_series_domain(n: &Mat, what: &str) -> Result<usize> {
    let p = n.field().p() as usize;
    let idx = nilpotency_index(n)
        .ok_or_else(|| Error::InvalidInput(format!("{what}: matrix is not nilpotent")))?;
    if idx > p {
        return Err(Error::InvalidInput(format!(
            "{what}: nilpotency index {idx} exceeds p = {p}, the series has a zero denominator"
        )));
    }
    Ok(idx)
}

/// `log(1 + N) = N − N²/2 + N³/3 − ⋯`, truncated where `N^k` vanishes.
/// Defined when `N^p = 0`.
pub fn matrix_log(g: &Mat) -> Result<Mat> {
    let f = g.field();
    let n = g.sub(&Mat::identity(f, g.rows()));
    let idx = check_series_domain(&n, "log")?;
    let mut out = Mat::zeros(f, g.rows(), g.rows());
    let mut pw = Mat::identity(f, g.rows());
    for k in 1..idx {
        pw = pw.mul(&n);
        let c = f.div(1, k as u32)?;
        let c = if k % 2 == 0 { f.neg(c) } else { c };
        out = out.add(&pw.scale(c));
    }
    Ok(out)
}

/// `exp(X) = Σ X^k / k!`, truncated where `X^k` vanishes. Defined when
/// `X^p = 0`.
pub fn matrix_exp(x: &Mat) -> Result<Mat> {
    let f = x.field();
    let idx = check_series_domain(x, "exp")?;
    let mut out = Mat::identity(f, x.rows());
    let mut pw = Mat::identity(f, x.rows());
    let mut fact = 1u32;
    for k in 1..idx {
        pw = pw.mul(x);
        fact = f.mul(fact, k as u32);
        out = out.add(&pw.scale(f.inv(fact)?));
    }
    Ok(out)
}

/// A matrix Lie algebra: a basis of matrices closed under the commutator
/// bracket, with structure constants in that basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieSC {
    pub basis: Vec<Mat>,
    pub algebra: AlgebraSC,
}

impl LieSC {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `m` in the basis, if it lies in the span.
    pub fn coords(&self, m: &Mat) -> Option<Vec<u32>> {
        span_coords(&self.basis, m)
    }

    pub fn is_lie(&self) -> bool {
        self.algebra.is_alternating() && self.algebra.satisfies_jacobi()
    }
}

fn span_coords(basis: &[Mat], m: &Mat) -> Option<Vec<u32>> {
    let flat: Vec<Vec<u32>> = basis.iter().map(Mat::flatten).collect();
    VecSpace::new(m.field(), m.rows() * m.cols(), &flat).coords(&m.flatten())
}

/// Closes the span of `gens` under the bracket by breadth-first search.
pub fn lie_closure(f: GF, size: usize, gens: &[Mat]) -> Result<LieSC> {
    let mut space = VecSpace::new(f, size * size, &[]);
    let mut basis: Vec<Mat> = Vec::new();
    let mut queue: VecDeque<Mat> = gens.iter().cloned().collect();
    while let Some(x) = queue.pop_front() {
        if x.rows() != size || x.cols() != size {
            return dim_err(format!("Lie generator is not {size}×{size}"));
        }
        if space.contains(&x.flatten()) {
            continue;
        }
        for b in &basis {
            queue.push_back(bracket(b, &x));
        }
        basis.push(x);
        let flat: Vec<Vec<u32>> = basis.iter().map(Mat::flatten).collect();
        space = VecSpace::new(f, size * size, &flat);
    }
    let n = basis.len();
    let mut sc = Tensor3::zeros(f, n, n, n);
    for i in 0..n {
        for j in 0..n {
            let c = span_coords(&basis, &bracket(&basis[i], &basis[j]))
                .expect("closed under the bracket");
            for (k, v) in c.into_iter().enumerate() {
                sc.set(i, j, k, v);
            }
        }
    }
    Ok(LieSC {
        basis,
        algebra: AlgebraSC::new(sc)?,
    })
}

/// Generators of the Baer group of an alternating `n×n×m` map over GF(p),
/// `p` odd, inside GL(1+n+m): `n` matrices `[[1, e_iᵗ, 0], [0, I, B_i],
/// [0, 0, I]]` with `B_i[r][k] = A_k[r][i]/2`, then `m` central matrices
/// `I + E_{0, 1+n+j}`. The commutator of generators `i` and `j` is
/// `I + Σ_k A_k[i][j] E_{0, 1+n+k}`.
pub fn baer_group(a: &MatrixTuple) -> Result<MatrixGroupGens> {
    let f = a.field();
    if f.p() == 2 {
        return Err(Error::UnsupportedCharacteristic(2));
    }
    if !a.is_alternating() {
        return Err(Error::InvalidInput("slices must be alternating".into()));
    }
    let (n, m) = (a.rows(), a.len());
    let size = 1 + n + m;
    let half = f.inv(2)?;
    let mut gens = Vec::with_capacity(n + m);
    for i in 0..n {
        let mut g = Mat::identity(f, size);
        g.set(0, 1 + i, 1);
        for r in 0..n {
            for k in 0..m {
                g.set(1 + r, 1 + n + k, f.mul(half, a.slice(k).get(r, i)));
            }
        }
        gens.push(g);
    }
    for j in 0..m {
        let mut g = Mat::identity(f, size);
        g.set(0, 1 + n + j, 1);
        gens.push(g);
    }
    MatrixGroupGens::new(f, size, gens)
}

/// The commutator map of a class-2 exponent-p group, with the Lie elements
/// that carry it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaerAlt {
    /// `[X_i, X_j] = Σ_k map_k[i][j] Z_k`.
    pub map: MatrixTuple,
    /// Lifts of a basis of `L/[L,L]`, taken from generator logarithms.
    pub quotient: Vec<Mat>,
    /// A basis of `[L, L]`.
    pub derived: Vec<Mat>,
    /// The Lie algebra of logarithms of the group.
    pub lie: LieSC,
}

/// Checks unipotence, class 2 and exponent `p` on generators, which
/// suffices for odd `p`: commutators are then central and
/// `(xy)^p = x^p y^p`. Unitriangular generators and their conjugates pass.
pub fn check_class2_exponent_p(g: &MatrixGroupGens) -> Result<()> {
    let f = g.field();
    let p = f.p();
    if p == 2 {
        return Err(Error::UnsupportedCharacteristic(2));
    }
    for (i, x) in g.gens().iter().enumerate() {
        if nilpotency_index(&x.sub(&Mat::identity(f, g.size()))).is_none() {
            return Err(Error::Relation(format!("generator {i} is not unipotent")));
        }
    }
    for (i, x) in g.gens().iter().enumerate() {
        if !x.pow(p as u64).is_identity() {
            return Err(Error::Relation(format!("exponent: generator {i} has g^{p} ≠ 1")));
        }
    }
    for (i, x) in g.gens().iter().enumerate() {
        for (j, y) in g.gens().iter().enumerate() {
            let c = commutator(x, y);
            for (k, z) in g.gens().iter().enumerate() {
                if !commutator(&c, z).is_identity() {
                    return Err(Error::Relation(format!(
                        "class 2: [[g{i}, g{j}], g{k}] ≠ 1"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Commutator map of `G` on `G/[G,G]`, computed in the Lie algebra of
/// logarithms, where the group commutator becomes the matrix bracket.
pub fn baer_alt(g: &MatrixGroupGens) -> Result<BaerAlt> {
    check_class2_exponent_p(g)?;
    let f = g.field();
    let logs = g.gens().iter().map(matrix_log).collect::<Result<Vec<_>>>()?;
    let lie = lie_closure(f, g.size(), &logs)?;
    let derived_gens: Vec<Mat> = lie
        .basis
        .iter()
        .flat_map(|x| lie.basis.iter().map(move |y| bracket(x, y)))
        .collect();
    let derived = independent(f, g.size(), &derived_gens);
    let mut quotient: Vec<Mat> = Vec::new();
    for x in &logs {
        let mut trial = derived.clone();
        trial.extend(quotient.iter().cloned());
        trial.push(x.clone());
        if independent(f, g.size(), &trial).len() == trial.len() {
            quotient.push(x.clone());
        }
    }
    let (n, m) = (quotient.len(), derived.len());
    let mut slices = vec![Mat::zeros(f, n, n); m];
    for i in 0..n {
        for j in 0..n {
            let c = span_coords(&derived, &bracket(&quotient[i], &quotient[j])).ok_or_else(|| {
                Error::Relation("a bracket falls outside the derived subalgebra".into())
            })?;
            for (k, v) in c.into_iter().enumerate() {
                slices[k].set(i, j, v);
            }
        }
    }
    Ok(BaerAlt {
        map: MatrixTuple::new(f, n, n, slices)?,
        quotient,
        derived,
        lie,
    })
}

/// Maximal independent prefix-greedy subset.
fn independent(f: GF, size: usize, mats: &[Mat]) -> Vec<Mat> {
    let mut out: Vec<Mat> = Vec::new();
    let mut space = VecSpace::new(f, size * size, &[]);
    for m in mats {
        if !space.contains(&m.flatten()) {
            out.push(m.clone());
            let flat: Vec<Vec<u32>> = out.iter().map(Mat::flatten).collect();
            space = VecSpace::new(f, size * size, &flat);
        }
    }
    out
}

/// Nilpotency class from the lower central series of the enumerated group.
pub fn nilpotency_class(elems: &[Mat], gens: &[Mat]) -> usize {
    let mut current: Vec<Mat> = elems.to_vec();
    let mut class = 0;
    loop {
        if current.iter().all(Mat::is_identity) {
            return class;
        }
        class += 1;
        // [current, G] generated by commutators with the generators
        let mut next: HashSet<Vec<u32>> = HashSet::new();
        let mut list = Vec::new();
        for x in &current {
            for g in gens {
                let c = commutator(x, g);
                if next.insert(c.data().to_vec()) {
                    list.push(c);
                }
            }
        }
        let f = elems[0].field();
        let size = elems[0].rows();
        current = MatrixGroupGens::new(f, size, list)
            .and_then(|h| h.elements(u128::MAX))
            .expect("subgroup of a finite group");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn heisenberg(p: u32) -> MatrixTuple {
        let f = GF::new(p).unwrap();
        let a = Mat::from_rows(f, &[&[0, 1], &[-1, 0]]);
        MatrixTuple::new(f, 2, 2, vec![a]).unwrap()
    }

    fn random_unitriangular(rng: &mut ChaCha8Rng, f: GF, n: usize) -> Mat {
        let mut g = Mat::identity(f, n);
        for i in 0..n {
            for j in i + 1..n {
                g.set(i, j, rng.gen_range(0..f.p()));
            }
        }
        g
    }

    #[test]
    fn heisenberg_group_of_order_27() {
        let g = baer_group(&heisenberg(3)).unwrap();
        assert_eq!((g.size(), g.gens().len()), (4, 3));
        let elems = g.elements(1 << 20).unwrap();
        assert_eq!(elems.len(), 27);
        assert!(elems.iter().all(|x| x.pow(3).is_identity()));
        assert_eq!(nilpotency_class(&elems, g.gens()), 2);
        let c = commutator(&g.gens()[0], &g.gens()[1]);
        let mut expected = Mat::identity(g.field(), 4);
        expected.set(0, 3, 1);
        assert_eq!(c, expected);
    }

    #[test]
    fn baer_alt_inverts_baer_group() {
        let a = heisenberg(5);
        let alt = baer_alt(&baer_group(&a).unwrap()).unwrap();
        assert_eq!(alt.map, a);
        assert_eq!(alt.lie.dim(), 3);
        assert!(alt.lie.is_lie());
    }

    #[test]
    fn even_characteristic_rejected() {
        assert!(matches!(
            baer_group(&heisenberg(2)),
            Err(Error::UnsupportedCharacteristic(2))
        ));
    }

    #[test]
    fn abelian_group_has_empty_map() {
        let f = GF::new(3).unwrap();
        let mut g = Mat::identity(f, 3);
        g.set(0, 2, 1);
        let alt = baer_alt(&MatrixGroupGens::new(f, 3, vec![g]).unwrap()).unwrap();
        assert_eq!(alt.map.len(), 0);
    }

    #[test]
    fn log_of_elementary() {
        let f = GF::new(5).unwrap();
        let mut g = Mat::identity(f, 3);
        g.set(0, 1, 1);
        assert_eq!(matrix_log(&g).unwrap(), Mat::unit(f, 3, 3, 0, 1));
    }

    #[test]
    fn exp_log_round_trip() {
        let f = GF::new(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let g = random_unitriangular(&mut rng, f, 4);
            let x = matrix_log(&g).unwrap();
            assert_eq!(matrix_exp(&x).unwrap(), g);
            assert_eq!(matrix_log(&matrix_exp(&x).unwrap()).unwrap(), x);
        }
    }

    #[test]
    fn log_rejects_long_chains() {
        let f = GF::new(3).unwrap();
        let mut g = Mat::identity(f, 4);
        for i in 0..3 {
            g.set(i, i + 1, 1);
        }
        assert!(matrix_log(&g).is_err());
    }

    #[test]
    fn closure_of_commuting_matrices_is_abelian() {
        let f = GF::new(3).unwrap();
        let x = Mat::unit(f, 3, 3, 0, 2);
        let y = Mat::unit(f, 3, 3, 0, 1).add(&Mat::unit(f, 3, 3, 1, 2)).pow(2);
        let lie = lie_closure(f, 3, &[x, y]).unwrap();
        assert!(lie.algebra.structure_constants().is_zero());
    }
}
