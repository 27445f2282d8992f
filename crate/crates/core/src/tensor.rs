//! 3-way and d-way arrays over GF(p), slicing, the basis-change action, the
//! non-degenerate core and padding to more directions.
//!
//! Every action in the crate is expressed through one primitive: the mode
//! product. `act3(T, X, Y, Z)` is the array
//! `T'(i',j',k') = Σ T(i,j,k) X[i][i'] Y[j][j'] Z[k][k']`,
//! i.e. frontal slices become `Xᵗ A_k Y` and are then mixed by `Z` with the
//! column convention (slice `c` of the result uses column `c` of `Z`).

use serde::{Deserialize, Serialize};

use crate::error::{dim_err, Error, Result};
use crate::form::FormD;
use crate::gf::GF;
use crate::matspace::{Mat, MatrixTuple};

/// Which family of matrices to cut a 3-way array into.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Fix the third index: `A_k(i, j)`.
    Frontal,
    /// Fix the second index: `L_j(i, k)`.
    Lateral,
    /// Fix the first index: `H_i(j, k)`.
    Horizontal,
}

/// Dense `l × n × m` array, stored with `i` slowest and `k` fastest.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Tensor3 {
    f: GF,
    dims: [usize; 3],
    data: Vec<u32>,
}

impl Tensor3 {
    pub fn zeros(f: GF, l: usize, n: usize, m: usize) -> Tensor3 {
        Tensor3 {
            f,
            dims: [l, n, m],
            data: vec![0; l * n * m],
        }
    }

    pub fn from_vec(f: GF, l: usize, n: usize, m: usize, data: Vec<u32>) -> Result<Tensor3> {
        if data.len() != l * n * m {
            return dim_err(format!("{} entries for a {l}x{n}x{m} array", data.len()));
        }
        let data = data.into_iter().map(|v| v % f.p()).collect();
        Ok(Tensor3 {
            f,
            dims: [l, n, m],
            data,
        })
    }

    pub fn field(&self) -> GF {
        self.f
    }
    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }
    pub fn data(&self) -> &[u32] {
        &self.data
    }
    #[inline]
    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dims[1] + j) * self.dims[2] + k
    }
    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> u32 {
        self.data[self.idx(i, j, k)]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: u32) {
        let x = self.idx(i, j, k);
        self.data[x] = v % self.f.p();
    }
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn slices(&self, dir: Direction) -> MatrixTuple {
        let [l, n, m] = self.dims;
        let f = self.f;
        let (count, r, c) = match dir {
            Direction::Frontal => (m, l, n),
            Direction::Lateral => (n, l, m),
            Direction::Horizontal => (l, n, m),
        };
        let slices = (0..count)
            .map(|s| {
                let mut a = Mat::zeros(f, r, c);
                for x in 0..r {
                    for y in 0..c {
                        let v = match dir {
                            Direction::Frontal => self.get(x, y, s),
                            Direction::Lateral => self.get(x, s, y),
                            Direction::Horizontal => self.get(s, x, y),
                        };
                        a.set(x, y, v);
                    }
                }
                a
            })
            .collect();
        MatrixTuple::new(f, r, c, slices).expect("consistent shapes")
    }

    pub fn frontal(&self) -> MatrixTuple {
        self.slices(Direction::Frontal)
    }

    /// Reassembles an array from its slices in the given direction.
    pub fn from_slices(t: &MatrixTuple, dir: Direction) -> Tensor3 {
        let (r, c, s) = (t.rows(), t.cols(), t.len());
        let (l, n, m) = match dir {
            Direction::Frontal => (r, c, s),
            Direction::Lateral => (r, s, c),
            Direction::Horizontal => (s, r, c),
        };
        let mut out = Tensor3::zeros(t.field(), l, n, m);
        for (si, a) in t.slices().iter().enumerate() {
            for x in 0..r {
                for y in 0..c {
                    let v = a.get(x, y);
                    match dir {
                        Direction::Frontal => out.set(x, y, si, v),
                        Direction::Lateral => out.set(x, si, y, v),
                        Direction::Horizontal => out.set(si, x, y, v),
                    }
                }
            }
        }
        out
    }

    pub fn from_frontal(t: &MatrixTuple) -> Tensor3 {
        Tensor3::from_slices(t, Direction::Frontal)
    }

    /// Mode product: index `mode` is replaced through `mat` (old × new),
    /// `T'(.., i', ..) = Σ_i mat[i][i'] T(.., i, ..)`.
    pub fn mode_product(&self, mode: usize, mat: &Mat) -> Result<Tensor3> {
        if mat.rows() != self.dims[mode] || mat.field() != self.f {
            return dim_err(format!(
                "mode-{mode} matrix has {} rows, direction has length {}",
                mat.rows(),
                self.dims[mode]
            ));
        }
        let mut dims = self.dims;
        dims[mode] = mat.cols();
        let p = self.f.p() as u64;
        let [l, n, m] = self.dims;
        let mut acc = vec![0u64; dims[0] * dims[1] * dims[2]];
        let out_idx = |i: usize, j: usize, k: usize| (i * dims[1] + j) * dims[2] + k;
        for i in 0..l {
            for j in 0..n {
                for k in 0..m {
                    let v = self.get(i, j, k) as u64;
                    if v == 0 {
                        continue;
                    }
                    let old = [i, j, k][mode];
                    for new in 0..mat.cols() {
                        let w = mat.get(old, new) as u64;
                        if w == 0 {
                            continue;
                        }
                        let (a, b, c) = match mode {
                            0 => (new, j, k),
                            1 => (i, new, k),
                            _ => (i, j, new),
                        };
                        acc[out_idx(a, b, c)] += v * w;
                    }
                }
            }
        }
        Ok(Tensor3 {
            f: self.f,
            dims,
            data: acc.into_iter().map(|x| (x % p) as u32).collect(),
        })
    }

    /// `T'(i',j',k') = Σ T(i,j,k) X[i][i'] Y[j][j'] Z[k][k']`.
    pub fn act3(&self, x: &Mat, y: &Mat, z: &Mat) -> Result<Tensor3> {
        self.mode_product(0, x)?
            .mode_product(1, y)?
            .mode_product(2, z)
    }

    /// Permutes the three directions: direction `d` of the result is
    /// direction `perm[d]` of `self`.
    pub fn permute_dirs(&self, perm: [usize; 3]) -> Tensor3 {
        let dims = [self.dims[perm[0]], self.dims[perm[1]], self.dims[perm[2]]];
        let mut out = Tensor3::zeros(self.f, dims[0], dims[1], dims[2]);
        for a in 0..dims[0] {
            for b in 0..dims[1] {
                for c in 0..dims[2] {
                    let mut src = [0usize; 3];
                    src[perm[0]] = a;
                    src[perm[1]] = b;
                    src[perm[2]] = c;
                    out.set(a, b, c, self.get(src[0], src[1], src[2]));
                }
            }
        }
        out
    }

    /// Slices of direction `mode` flattened to vectors.
    fn mode_vectors(&self, mode: usize) -> Vec<Vec<u32>> {
        let dir = [Direction::Horizontal, Direction::Lateral, Direction::Frontal][mode];
        self.slices(dir).slices().iter().map(Mat::flatten).collect()
    }

    /// Rank of the mode-`mode` unfolding.
    pub fn mode_rank(&self, mode: usize) -> usize {
        select_independent(self.f, &self.mode_vectors(mode)).0.len()
    }

    /// Slices are linearly independent in all three directions.
    pub fn is_nondegenerate(&self) -> bool {
        (0..3).all(|md| self.mode_rank(md) == self.dims[md])
    }

    pub fn to_tensord(&self) -> TensorD {
        TensorD {
            f: self.f,
            dims: self.dims.to_vec(),
            data: self.data.clone(),
        }
    }
}

/// First maximal independent subset of `vecs` (in order) and, for every
/// vector, its coefficients on that subset.
fn select_independent(f: GF, vecs: &[Vec<u32>]) -> (Vec<usize>, Mat) {
    let count = vecs.len();
    let len = vecs.first().map_or(0, Vec::len);
    // vectors as columns
    let mut m = Mat::zeros(f, len, count);
    for (c, v) in vecs.iter().enumerate() {
        for (r, &x) in v.iter().enumerate() {
            m.set(r, c, x);
        }
    }
    let r = m.rref();
    let sel = r.pivots.clone();
    let mut coeffs = Mat::zeros(f, count, sel.len());
    for c in 0..count {
        for t in 0..sel.len() {
            coeffs.set(c, t, r.mat.get(t, c));
        }
    }
    (sel, coeffs)
}

/// The non-degenerate core of a 3-way array together with the maps relating
/// it to the original.
///
/// In each direction the core keeps the first linearly independent slices.
/// `expansion[d]` is the `dims[d] × core_dims[d]` matrix `C` with
/// `slice_i = Σ_a C[i][a] · kept_slice_a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Core {
    pub tensor: Tensor3,
    pub original_dims: [usize; 3],
    pub selected: [Vec<usize>; 3],
    pub expansion: [Mat; 3],
}

/// Restricts to independent slices in every direction. The zero array gives
/// the empty `0×0×0` core.
pub fn nondegenerate_core(t: &Tensor3) -> Core {
    let f = t.f;
    let mut selected: [Vec<usize>; 3] = Default::default();
    let mut expansion: [Mat; 3] = [Mat::zeros(f, 0, 0), Mat::zeros(f, 0, 0), Mat::zeros(f, 0, 0)];
    for md in 0..3 {
        let (sel, coeffs) = select_independent(f, &t.mode_vectors(md));
        selected[md] = sel;
        expansion[md] = coeffs;
    }
    let [a, b, c] = [&selected[0], &selected[1], &selected[2]];
    let mut core = Tensor3::zeros(f, a.len(), b.len(), c.len());
    for (x, &i) in a.iter().enumerate() {
        for (y, &j) in b.iter().enumerate() {
            for (z, &k) in c.iter().enumerate() {
                core.set(x, y, z, t.get(i, j, k));
            }
        }
    }
    Core {
        tensor: core,
        original_dims: t.dims,
        selected,
        expansion,
    }
}

impl Core {
    /// Rebuilds the original array from the core.
    pub fn expand(&self) -> Tensor3 {
        let mut t = self.tensor.clone();
        for md in 0..3 {
            t = t
                .mode_product(md, &self.expansion[md].transpose())
                .expect("core shapes");
        }
        t
    }

    /// Carries a witness `(X, Y, Z)` with `act3(A, X, Y, Z) = B` on the
    /// original arrays to a witness between the cores (`self` is A's core).
    pub fn transport_witness(&self, other: &Core, w: [&Mat; 3]) -> Result<[Mat; 3]> {
        if self.tensor.dims != other.tensor.dims {
            return Err(Error::InvalidInput(
                "cores have different shapes, so the arrays are not isomorphic".into(),
            ));
        }
        let mut out: Vec<Mat> = Vec::new();
        for md in 0..3 {
            let x = w[md];
            let f = x.field();
            let sel_b = &other.selected[md];
            let mut cols = Mat::zeros(f, x.rows(), sel_b.len());
            for (c, &s) in sel_b.iter().enumerate() {
                for r in 0..x.rows() {
                    cols.set(r, c, x.get(r, s));
                }
            }
            out.push(self.expansion[md].transpose().mul(&cols));
        }
        Ok([out[0].clone(), out[1].clone(), out[2].clone()])
    }

    /// Lifts a witness between the cores back to the original arrays
    /// (`self` is A's core). The kernel directions of A are sent onto the
    /// unselected coordinates of B, which keeps the lift invertible.
    pub fn lift_witness(&self, other: &Core, w: [&Mat; 3]) -> Result<[Mat; 3]> {
        if self.original_dims != other.original_dims || self.tensor.dims != other.tensor.dims {
            return Err(Error::InvalidInput("incompatible cores".into()));
        }
        let mut out: Vec<Mat> = Vec::new();
        for md in 0..3 {
            let f = w[md].field();
            let len = self.original_dims[md];
            let sel_a = &self.selected[md];
            let sel_b = &other.selected[md];
            // particular part: rows sel_a carry X' C_Bᵗ
            let part = w[md].mul(&other.expansion[md].transpose());
            let mut x = Mat::zeros(f, len, len);
            for (a, &i) in sel_a.iter().enumerate() {
                for c in 0..len {
                    x.set(i, c, part.get(a, c));
                }
            }
            let un_a: Vec<usize> = (0..len).filter(|i| !sel_a.contains(i)).collect();
            let un_b: Vec<usize> = (0..len).filter(|i| !sel_b.contains(i)).collect();
            for (&i, &j) in un_a.iter().zip(&un_b) {
                // kernel vector u = e_i − Σ_a C_A[i][a] e_{sel_a[a]}, placed in column j
                x.set(i, j, f.add(x.get(i, j), 1));
                for (a, &s) in sel_a.iter().enumerate() {
                    let c = self.expansion[md].get(i, a);
                    x.set(s, j, f.sub(x.get(s, j), c));
                }
            }
            out.push(x);
        }
        Ok([out[0].clone(), out[1].clone(), out[2].clone()])
    }
}

/// Dense d-way array, first index slowest.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TensorD {
    f: GF,
    dims: Vec<usize>,
    data: Vec<u32>,
}

impl TensorD {
    pub fn zeros(f: GF, dims: &[usize]) -> Result<TensorD> {
        if dims.is_empty() {
            return Err(Error::InvalidInput("a d-way array needs d >= 1".into()));
        }
        Ok(TensorD {
            f,
            dims: dims.to_vec(),
            data: vec![0; dims.iter().product()],
        })
    }

    pub fn from_vec(f: GF, dims: &[usize], data: Vec<u32>) -> Result<TensorD> {
        let mut t = TensorD::zeros(f, dims)?;
        if data.len() != t.data.len() {
            return dim_err(format!("{} entries for dims {:?}", data.len(), dims));
        }
        t.data = data.into_iter().map(|v| v % f.p()).collect();
        Ok(t)
    }

    pub fn field(&self) -> GF {
        self.f
    }
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
    pub fn order(&self) -> usize {
        self.dims.len()
    }
    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn offset(&self, idx: &[usize]) -> usize {
        idx.iter()
            .zip(&self.dims)
            .fold(0, |acc, (&i, &n)| acc * n + i)
    }
    pub fn get(&self, idx: &[usize]) -> u32 {
        self.data[self.offset(idx)]
    }
    pub fn set(&mut self, idx: &[usize], v: u32) {
        let o = self.offset(idx);
        self.data[o] = v % self.f.p();
    }

    /// All multi-indices in storage order.
    pub fn indices(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::with_capacity(self.data.len());
        let mut cur = vec![0usize; self.dims.len()];
        if self.data.is_empty() {
            return out;
        }
        loop {
            out.push(cur.clone());
            let mut d = self.dims.len();
            loop {
                if d == 0 {
                    return out;
                }
                d -= 1;
                cur[d] += 1;
                if cur[d] < self.dims[d] {
                    break;
                }
                cur[d] = 0;
            }
        }
    }

    pub fn mode_product(&self, mode: usize, mat: &Mat) -> Result<TensorD> {
        if mode >= self.dims.len() || mat.rows() != self.dims[mode] {
            return dim_err(format!("mode-{mode} matrix does not fit dims {:?}", self.dims));
        }
        let mut dims = self.dims.clone();
        dims[mode] = mat.cols();
        let mut out = TensorD::zeros(self.f, &dims)?;
        let p = self.f.p() as u64;
        let mut acc = vec![0u64; out.data.len()];
        for idx in self.indices() {
            let v = self.get(&idx) as u64;
            if v == 0 {
                continue;
            }
            let mut j = idx.clone();
            for new in 0..mat.cols() {
                let w = mat.get(idx[mode], new) as u64;
                if w == 0 {
                    continue;
                }
                j[mode] = new;
                acc[out.offset(&j)] += v * w;
            }
        }
        out.data = acc.into_iter().map(|x| (x % p) as u32).collect();
        Ok(out)
    }

    /// Applies one matrix per direction, each as in [`Tensor3::act3`].
    pub fn act(&self, mats: &[Mat]) -> Result<TensorD> {
        if mats.len() != self.dims.len() {
            return dim_err(format!(
                "{} matrices for a {}-way array",
                mats.len(),
                self.dims.len()
            ));
        }
        let mut t = self.clone();
        for (md, m) in mats.iter().enumerate() {
            t = t.mode_product(md, m)?;
        }
        Ok(t)
    }

    pub fn to_tensor3(&self) -> Result<Tensor3> {
        if self.dims.len() != 3 {
            return dim_err("not a 3-way array");
        }
        Tensor3::from_vec(self.f, self.dims[0], self.dims[1], self.dims[2], self.data.clone())
    }
}

/// Views a d-way array as a d'-way array by appending directions of length 1.
pub fn pad_to_d(t: &TensorD, d_prime: usize) -> Result<TensorD> {
    if d_prime < t.order() {
        return Err(Error::InvalidInput(format!(
            "cannot pad a {}-way array down to {d_prime} directions",
            t.order()
        )));
    }
    let mut dims = t.dims.clone();
    dims.resize(d_prime, 1);
    TensorD::from_vec(t.f, &dims, t.data.clone())
}

/// The fully symmetric `n×n×n` array `T` with `T(x,x,x) = f(x)`.
///
/// The coefficient of a monomial is spread evenly over the orderings of its
/// index multiset, so division by 3 and by 6 is needed.
pub fn symmetrize_cubic(form: &FormD) -> Result<TensorD> {
    let f = form.field();
    if f.p() < 5 {
        return Err(Error::UnsupportedCharacteristic(f.p()));
    }
    if form.degree() != 3 {
        return Err(Error::InvalidInput("symmetrization needs a cubic form".into()));
    }
    let n = form.nvars();
    let mut t = TensorD::zeros(f, &[n, n, n])?;
    for (exps, &c) in form.terms() {
        let mut idx = Vec::new();
        for (v, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                idx.push(v);
            }
        }
        let mut orderings: Vec<[usize; 3]> = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ]
        .iter()
        .map(|p| [idx[p[0]], idx[p[1]], idx[p[2]]])
        .collect();
        orderings.sort_unstable();
        orderings.dedup();
        let share = f.div(c, orderings.len() as u32)?;
        for o in orderings {
            t.set(&o, share);
        }
    }
    Ok(t)
}

/// `f(x) = Σ T(i,j,k) x_i x_j x_k`.
pub fn evaluate_diag(t: &TensorD) -> Result<FormD> {
    if t.order() != 3 || t.dims[0] != t.dims[1] || t.dims[1] != t.dims[2] {
        return dim_err("evaluate_diag needs an n×n×n array");
    }
    let f = t.f;
    let n = t.dims[0];
    let mut form = FormD::zero(f, n, 3);
    for idx in t.indices() {
        let v = t.get(&idx);
        if v == 0 {
            continue;
        }
        let mut e = vec![0u32; n];
        for &i in &idx {
            e[i] += 1;
        }
        form.add_term(&e, v)?;
    }
    Ok(form)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matspace::{random_gl, random_mat};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gf(p: u32) -> GF {
        GF::new(p).unwrap()
    }

    fn random_t3(rng: &mut ChaCha8Rng, f: GF, l: usize, n: usize, m: usize) -> Tensor3 {
        let data = (0..l * n * m).map(|_| rng.gen_range(0..f.p())).collect();
        Tensor3::from_vec(f, l, n, m, data).unwrap()
    }

    #[test]
    fn slice_shapes() {
        let f = gf(3);
        let t = Tensor3::from_vec(f, 1, 1, 1, vec![2]).unwrap();
        for d in [Direction::Frontal, Direction::Lateral, Direction::Horizontal] {
            let s = t.slices(d);
            assert_eq!(s.len(), 1);
            assert_eq!(s.slice(0).get(0, 0), 2);
        }
        let t = Tensor3::zeros(f, 2, 3, 4);
        let fr = t.frontal();
        assert_eq!((fr.len(), fr.rows(), fr.cols()), (4, 2, 3));
    }

    #[test]
    fn slices_round_trip() {
        let f = gf(5);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let t = random_t3(&mut rng, f, 2, 3, 4);
            for d in [Direction::Frontal, Direction::Lateral, Direction::Horizontal] {
                assert_eq!(Tensor3::from_slices(&t.slices(d), d), t);
            }
        }
    }

    #[test]
    fn act3_matches_slice_formula() {
        // frontal slices of act3 are Σ_k Z[k][c] Xᵗ A_k Y
        let f = gf(7);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let t = random_t3(&mut rng, f, 2, 3, 2);
            let (x, y, z) = (
                random_gl(&mut rng, f, 2),
                random_gl(&mut rng, f, 3),
                random_gl(&mut rng, f, 2),
            );
            let lhs = t.act3(&x, &y, &z).unwrap().frontal();
            let rhs = t.frontal().transform(&x, &y).unwrap().mix(&z).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn core_of_nondegenerate_is_itself() {
        let f = gf(3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut seen = 0;
        while seen < 20 {
            let t = random_t3(&mut rng, f, 2, 2, 3);
            if !t.is_nondegenerate() {
                continue;
            }
            seen += 1;
            let c = nondegenerate_core(&t);
            assert_eq!(c.tensor, t);
        }
    }

    #[test]
    fn duplicated_frontal_slice_drops_one() {
        let f = gf(5);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        loop {
            let t = random_t3(&mut rng, f, 3, 3, 2);
            if !t.is_nondegenerate() {
                continue;
            }
            let mut sl = t.frontal().into_slices();
            sl.push(sl[0].clone());
            let t2 = Tensor3::from_frontal(&MatrixTuple::new(f, 3, 3, sl).unwrap());
            let c = nondegenerate_core(&t2);
            assert_eq!(c.tensor.dims(), [3, 3, 2]);
            assert_eq!(c.expand(), t2);
            break;
        }
    }

    #[test]
    fn zero_array_has_empty_core() {
        let c = nondegenerate_core(&Tensor3::zeros(gf(2), 2, 2, 2));
        assert_eq!(c.tensor.dims(), [0, 0, 0]);
        assert_eq!(c.expand(), Tensor3::zeros(gf(2), 2, 2, 2));
    }

    #[test]
    fn core_is_idempotent_and_expands_back() {
        let f = gf(2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let t = random_t3(&mut rng, f, 3, 2, 3);
            let c = nondegenerate_core(&t);
            assert!(c.tensor.is_nondegenerate());
            assert_eq!(nondegenerate_core(&c.tensor).tensor, c.tensor);
            assert_eq!(c.expand(), t);
        }
    }

    #[test]
    fn witnesses_transport_and_lift_through_cores() {
        let f = gf(3);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let t = random_t3(&mut rng, f, 3, 3, 2);
            let w = [
                random_gl(&mut rng, f, 3),
                random_gl(&mut rng, f, 3),
                random_gl(&mut rng, f, 2),
            ];
            let u = t.act3(&w[0], &w[1], &w[2]).unwrap();
            let (ca, cb) = (nondegenerate_core(&t), nondegenerate_core(&u));
            let wc = ca.transport_witness(&cb, [&w[0], &w[1], &w[2]]).unwrap();
            assert!(wc.iter().all(Mat::is_invertible));
            assert_eq!(ca.tensor.act3(&wc[0], &wc[1], &wc[2]).unwrap(), cb.tensor);
            let wl = ca.lift_witness(&cb, [&wc[0], &wc[1], &wc[2]]).unwrap();
            assert!(wl.iter().all(Mat::is_invertible));
            assert_eq!(t.act3(&wl[0], &wl[1], &wl[2]).unwrap(), u);
        }
    }

    #[test]
    fn permute_dirs_round_trip() {
        let f = gf(5);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let t = random_t3(&mut rng, f, 2, 3, 4);
        let s = t.permute_dirs([1, 0, 2]);
        assert_eq!(s.dims(), [3, 2, 4]);
        assert_eq!(s.get(2, 1, 3), t.get(1, 2, 3));
        assert_eq!(s.permute_dirs([1, 0, 2]), t);
    }

    #[test]
    fn padding() {
        let f = gf(3);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let m = random_mat(&mut rng, f, 2, 2);
        let t = TensorD::from_vec(f, &[2, 2], m.data().to_vec()).unwrap();
        assert_eq!(pad_to_d(&t, 2).unwrap(), t);
        let p = pad_to_d(&t, 3).unwrap();
        assert_eq!(p.dims(), &[2, 2, 1]);
        assert_eq!(p.get(&[1, 0, 0]), m.get(1, 0));
        assert!(pad_to_d(&p, 2).is_err());
    }

    #[test]
    fn symmetrization_examples() {
        let f5 = gf(5);
        let x3 = FormD::from_terms(f5, 1, 3, &[(vec![3], 1)]).unwrap();
        let t = symmetrize_cubic(&x3).unwrap();
        assert_eq!(t.get(&[0, 0, 0]), 1);
        assert_eq!(t.data().iter().filter(|&&v| v != 0).count(), 1);

        let f7 = gf(7);
        let x2y = FormD::from_terms(f7, 2, 3, &[(vec![2, 1], 1)]).unwrap();
        let t = symmetrize_cubic(&x2y).unwrap();
        for idx in [[0, 0, 1], [0, 1, 0], [1, 0, 0]] {
            assert_eq!(t.get(&idx), 5);
        }
        assert_eq!(t.data().iter().filter(|&&v| v != 0).count(), 3);
        assert_eq!(
            symmetrize_cubic(&FormD::from_terms(gf(3), 1, 3, &[(vec![3], 1)]).unwrap()),
            Err(Error::UnsupportedCharacteristic(3))
        );
    }
}
