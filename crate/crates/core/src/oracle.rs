//! Brute-force deciders for every problem tag and seeded instance generators.
//!
//! Every decider takes an explicit enumeration budget and refuses with
//! [`Error::Budget`] instead of running past it. A returned witness has
//! always been checked with [`verify_witness`]. When several witnesses exist
//! the first one in the fixed enumeration order is returned, independent of
//! the number of worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::AlgebraSC;
use crate::error::{Error, Result};
use crate::form::FormD;
use crate::gf::GF;
use crate::graph::{Digraph, Graph};
use crate::matspace::{
    check_budget, column_transport, enumerate_gl, enumerate_monomial, enumerate_permutations,
    gl_order, random_gl, random_mat, random_monomial, Mat, MatrixTuple,
};
use crate::reductions::solve_mixing;
use crate::tensor::{Tensor3, TensorD};
use crate::witness::{act, Instance, Tag, Witness};

pub use crate::witness::verify_witness;

fn gl_list(n: usize, f: GF, budget: u128) -> Result<Vec<Mat>> {
    Ok(enumerate_gl(n, f, budget)?.collect())
}

/// First hit over the product of the given lists, indexed with the first
/// list most significant.
fn search_product<T, F>(lists: &[Vec<Mat>], test: F) -> Option<T>
where
    T: Send,
    F: Fn(&[&Mat]) -> Option<T> + Sync,
{
    let total: u64 = lists.iter().map(|l| l.len() as u64).product();
    let decode = |mut code: u64| -> Vec<&Mat> {
        let mut out = vec![None; lists.len()];
        for (slot, l) in out.iter_mut().zip(lists).rev() {
            *slot = Some(&l[(code % l.len() as u64) as usize]);
            code /= l.len() as u64;
        }
        out.into_iter().map(Option::unwrap).collect()
    };
    (0..total)
        .into_par_iter()
        .find_map_first(|c| test(&decode(c)))
}

/// Mode-`mode` unfolding: column `j` lists the entries with index `j` in
/// that direction, in storage order.
fn unfold(t: &TensorD, mode: usize) -> Mat {
    let n = t.dims()[mode];
    let rows = t.data().len() / n.max(1);
    let mut out = Mat::zeros(t.field(), rows, n);
    let mut fill = vec![0usize; n];
    for idx in t.indices() {
        let j = idx[mode];
        out.set(fill[j], j, t.get(&idx));
        fill[j] += 1;
    }
    out
}

/// d-way array isomorphism: enumerates GL on every direction except the
/// longest and solves for the last factor by linear algebra.
pub fn decide_tid(a: &TensorD, b: &TensorD, budget: u128) -> Result<Option<Witness>> {
    if a.dims() != b.dims() || a.field() != b.field() {
        return Ok(None);
    }
    let f = a.field();
    let d = a.order();
    if d == 0 {
        return Ok((a == b).then(|| Witness::new(Tag::TiD, vec![]).expect("empty witness")));
    }
    let free = (0..d).rev().max_by_key(|&i| a.dims()[i]).expect("d > 0");
    let fixed: Vec<usize> = (0..d).filter(|&i| i != free).collect();
    let required = fixed
        .iter()
        .try_fold(1u128, |acc, &i| acc.checked_mul(gl_order(a.dims()[i], f.p())))
        .unwrap_or(u128::MAX);
    check_budget("product of GL groups", required, budget)?;
    let lists = fixed
        .iter()
        .map(|&i| gl_list(a.dims()[i], f, budget))
        .collect::<Result<Vec<_>>>()?;
    let target = unfold(b, free);
    let found = search_product(&lists, |mats| {
        let mut t = a.clone();
        for (&i, m) in fixed.iter().zip(mats) {
            t = t.mode_product(i, m).ok()?;
        }
        let r = column_transport(&unfold(&t, free), &target)?;
        let mut all: Vec<Mat> = mats.iter().map(|m| (*m).clone()).collect();
        all.insert(free, r);
        Some(all)
    });
    finish(Tag::TiD, &Instance::TensorD(a.clone()), &Instance::TensorD(b.clone()), found)
}

/// Above this many enumerated pairs, [`decide_3ti_smart`] switches from
/// enumerating two directions to enumerating one.
pub const TWO_SIDE_LIMIT: u128 = 1 << 20;

/// 3-tensor isomorphism. When the two directions with the smallest general
/// linear groups can be enumerated within [`TWO_SIDE_LIMIT`], the third
/// factor is solved for linearly; otherwise see [`decide_3ti_one_side`].
pub fn decide_3ti_smart(a: &Tensor3, b: &Tensor3, budget: u128) -> Result<Option<Witness>> {
    if a.dims() != b.dims() || a.field() != b.field() {
        return Ok(None);
    }
    let p = a.field().p();
    let mut orders: Vec<u128> = a.dims().iter().map(|&n| gl_order(n, p)).collect();
    orders.sort_unstable();
    if orders[0].saturating_mul(orders[1]) <= TWO_SIDE_LIMIT.min(budget) {
        let w = decide_tid(&a.to_tensord(), &b.to_tensord(), budget)?;
        return w.map(|w| Witness::new(Tag::Ti3, w.mats)).transpose();
    }
    decide_3ti_one_side(a, b, budget)
}

/// 3-tensor isomorphism enumerating only the direction with the smallest
/// general linear group. With `Y` fixed, `XᵗL_jZ = M_j` on lateral slices
/// becomes the linear system `U·L_j = M_j·W` in `(U, W) = (Xᵗ, Z⁻¹)`,
/// whose solution space is enumerated for a pair of invertible blocks.
pub fn decide_3ti_one_side(a: &Tensor3, b: &Tensor3, budget: u128) -> Result<Option<Witness>> {
    if a.dims() != b.dims() || a.field() != b.field() {
        return Ok(None);
    }
    let f = a.field();
    let p = f.p();
    let dir = (0..3).min_by_key(|&d| gl_order(a.dims()[d], p)).expect("three directions");
    let perm = match dir {
        0 => [1, 0, 2],
        1 => [0, 1, 2],
        _ => [0, 2, 1],
    };
    let (pa, pb) = (a.permute_dirs(perm), b.permute_dirs(perm));
    let [l, n, m] = pa.dims();
    let ys = gl_list(n, f, budget)?;
    let unknowns = l * l + m * m;
    let found = ys.par_iter().find_map_first(|y| -> Option<Result<Vec<Mat>>> {
        let t = pa.mode_product(1, y).ok()?;
        let mut sys = Mat::zeros(f, n * l * m, unknowns);
        for j in 0..n {
            for r in 0..l {
                for c in 0..m {
                    let row = (j * l + r) * m + c;
                    for s in 0..l {
                        sys.set(row, r * l + s, t.get(s, j, c));
                    }
                    for s in 0..m {
                        sys.set(row, l * l + s * m + c, f.neg(pb.get(r, j, s)));
                    }
                }
            }
        }
        let ker = sys.right_kernel();
        let k = ker.rows();
        let total = (p as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
        if let Err(e) = check_budget("solution space of the two-sided system", total, budget) {
            return Some(Err(e));
        }
        let mut coef = vec![0u32; k];
        for mut code in 1..total {
            for slot in coef.iter_mut() {
                *slot = (code % p as u128) as u32;
                code /= p as u128;
            }
            let v = ker.vec_mul(&coef);
            let u = Mat::from_vec(f, l, l, v[..l * l].to_vec()).ok()?;
            let w = Mat::from_vec(f, m, m, v[l * l..].to_vec()).ok()?;
            if let (true, Ok(z)) = (u.is_invertible(), w.inverse()) {
                let local = [u.transpose(), y.clone(), z];
                let mut mats = vec![Mat::zeros(f, 0, 0); 3];
                for d in 0..3 {
                    mats[perm[d]] = local[d].clone();
                }
                return Some(Ok(mats));
            }
        }
        None
    });
    let found = found.transpose()?;
    finish(Tag::Ti3, &Instance::Tensor3(a.clone()), &Instance::Tensor3(b.clone()), found)
}

fn finish(tag: Tag, a: &Instance, b: &Instance, found: Option<Vec<Mat>>) -> Result<Option<Witness>> {
    let Some(mats) = found else { return Ok(None) };
    let w = Witness::new(tag, mats)?;
    if !verify_witness(tag, a, b, &w)? {
        return Err(Error::OracleInconsistent {
            step: 0,
            detail: format!("{tag} decider produced a witness that does not verify"),
        });
    }
    Ok(Some(w))
}

/// Rank counts over all nonzero elements of the span, when there are at
/// most `2^14` of them. Invariant under isometry and conjugacy.
pub fn span_rank_histogram(t: &MatrixTuple) -> Option<Vec<usize>> {
    let f = t.field();
    let m = t.len() as u32;
    let total = (f.p() as u64).checked_pow(m)?;
    if total > 1 << 14 {
        return None;
    }
    let mut hist = vec![0; t.rows().min(t.cols()) + 1];
    let mut c = vec![0u32; t.len()];
    for mut code in 1..total {
        for slot in c.iter_mut() {
            *slot = (code % f.p() as u64) as u32;
            code /= f.p() as u64;
        }
        hist[t.combination(&c).rank()] += 1;
    }
    Some(hist)
}

fn histograms_differ(a: &MatrixTuple, b: &MatrixTuple) -> bool {
    match (span_rank_histogram(a), span_rank_histogram(b)) {
        (Some(x), Some(y)) => x != y,
        _ => false,
    }
}

fn square_tuple(t: &Tensor3) -> Result<MatrixTuple> {
    let [l, n, _] = t.dims();
    if l != n {
        return Err(Error::InvalidInput(format!("slices are {l}×{n}, not square")));
    }
    Ok(t.frontal())
}

fn decide_space(
    tag: Tag,
    a: &Tensor3,
    b: &Tensor3,
    budget: u128,
    transform: impl Fn(&MatrixTuple, &Mat) -> Option<MatrixTuple> + Sync,
) -> Result<Option<Witness>> {
    let (sa, sb) = (square_tuple(a)?, square_tuple(b)?);
    if a.dims() != b.dims() || histograms_differ(&sa, &sb) {
        return Ok(None);
    }
    let n = sa.rows();
    let f = a.field();
    let lists = vec![gl_list(n, f, budget)?];
    let found = search_product(&lists, |p| {
        let r = solve_mixing(&transform(&sa, p[0])?, &sb)?;
        Some(vec![p[0].clone(), r])
    });
    finish(tag, &Instance::Tensor3(a.clone()), &Instance::Tensor3(b.clone()), found)
}

/// `P` with `span(PᵗA_kP) = span(B_k)`, returned with the mixing `R`.
pub fn decide_isometry(a: &Tensor3, b: &Tensor3, budget: u128) -> Result<Option<Witness>> {
    decide_space(Tag::Isometry, a, b, budget, |s, p| s.transform(p, p).ok())
}

pub fn decide_pseudo_isometry(a: &Tensor3, b: &Tensor3, budget: u128) -> Result<Option<Witness>> {
    decide_space(Tag::PseudoIsometry, a, b, budget, |s, p| s.transform(p, p).ok())
}

/// `P` with `span(P⁻¹A_kP) = span(B_k)`.
pub fn decide_conjugacy(a: &Tensor3, b: &Tensor3, budget: u128) -> Result<Option<Witness>> {
    decide_space(Tag::Conjugacy, a, b, budget, |s, p| {
        s.transform(&p.inverse().ok()?.transpose(), p).ok()
    })
}

fn decide_single_gl(
    tag: Tag,
    a: &Instance,
    b: &Instance,
    n: usize,
    f: GF,
    budget: u128,
) -> Result<Option<Witness>> {
    let lists = vec![gl_list(n, f, budget)?];
    let found = search_product(&lists, |p| {
        let w = Witness::new(tag, vec![p[0].clone()]).ok()?;
        (act(a, &w).ok()? == *b).then(|| vec![p[0].clone()])
    });
    finish(tag, a, b, found)
}

pub fn decide_algebra_iso(a: &AlgebraSC, b: &AlgebraSC, budget: u128) -> Result<Option<Witness>> {
    if a.dim() != b.dim() || a.field() != b.field() {
        return Ok(None);
    }
    decide_single_gl(
        Tag::AlgebraIso,
        &Instance::Algebra(a.clone()),
        &Instance::Algebra(b.clone()),
        a.dim(),
        a.field(),
        budget,
    )
}

/// `P` with `act3(A, P, P, P) = B` on cubical arrays.
pub fn decide_trilinear(a: &Tensor3, b: &Tensor3, budget: u128) -> Result<Option<Witness>> {
    let [n, n2, n3] = a.dims();
    if a.dims() != b.dims() || n != n2 || n != n3 {
        return Ok(None);
    }
    decide_single_gl(
        Tag::TrilinearEq,
        &Instance::Tensor3(a.clone()),
        &Instance::Tensor3(b.clone()),
        n,
        a.field(),
        budget,
    )
}

pub fn decide_form_eq(f: &FormD, g: &FormD, budget: u128) -> Result<Option<Witness>> {
    if f.nvars() != g.nvars() || f.degree() != g.degree() || f.field() != g.field() {
        return Ok(None);
    }
    if f.is_zero() != g.is_zero() {
        return Ok(None);
    }
    decide_single_gl(
        Tag::FormEq,
        &Instance::Form(f.clone()),
        &Instance::Form(g.clone()),
        f.nvars(),
        f.field(),
        budget,
    )
}

/// Monomial code equivalence: `Q·A·M = B` for some invertible `Q` and
/// monomial `M`, found by enumerating `M` and solving for `Q`.
pub fn decide_code_monomial(a: &Mat, b: &Mat, budget: u128) -> Result<Option<Witness>> {
    if a.rows() != b.rows() || a.cols() != b.cols() || a.field() != b.field() {
        return Ok(None);
    }
    let mons = enumerate_monomial(a.cols(), a.field(), budget)?;
    let bt = b.transpose();
    let found = mons.par_iter().find_map_first(|m| {
        let r = column_transport(&a.mul(&m.to_mat()).transpose(), &bt)?;
        Witness::moncode(r.transpose(), m).ok()
    });
    match found {
        None => Ok(None),
        Some(w) => finish(
            Tag::MonCodeEq,
            &Instance::Code(a.clone()),
            &Instance::Code(b.clone()),
            Some(w.mats),
        ),
    }
}

/// Vertex relabelling `σ` with `G.relabel(σ) = H`.
pub fn decide_graph_iso(g: &Graph, h: &Graph, budget: u128) -> Result<Option<Vec<usize>>> {
    if g.n() != h.n() || g.edge_count() != h.edge_count() {
        return Ok(None);
    }
    let (mut dg, mut dh) = (g.degrees(), h.degrees());
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return Ok(None);
    }
    let perms = enumerate_permutations(g.n(), budget)?;
    Ok(perms.into_par_iter().find_first(|s| g.relabel(s) == *h))
}

pub fn decide_digraph_iso(g: &Digraph, h: &Digraph, budget: u128) -> Result<Option<Vec<usize>>> {
    if g.n() != h.n() || g.arc_count() != h.arc_count() {
        return Ok(None);
    }
    let perms = enumerate_permutations(g.n(), budget)?;
    Ok(perms.into_par_iter().find_first(|s| g.relabel(s) == *h))
}

/// Dispatches to the decider for `tag`; graph deciders use GF(2) for the
/// permutation matrix of the witness. Equal inputs get the identity.
pub fn decide(tag: Tag, a: &Instance, b: &Instance, budget: u128) -> Result<Option<Witness>> {
    if a == b {
        let id = identity_witness(tag, a)?;
        if verify_witness(tag, a, b, &id)? {
            return Ok(Some(id));
        }
    }
    let graph_witness = |s: Option<Vec<usize>>| -> Result<Option<Witness>> {
        s.map(|s| Witness::graph(GF::new(2)?, &s)).transpose()
    };
    match (tag, a, b) {
        (Tag::Ti3 | Tag::Equivalence, Instance::Tensor3(x), Instance::Tensor3(y)) => {
            let w = decide_3ti_smart(x, y, budget)?;
            w.map(|w| Witness::new(tag, w.mats)).transpose()
        }
        (Tag::Isometry, Instance::Tensor3(x), Instance::Tensor3(y)) => decide_isometry(x, y, budget),
        (Tag::PseudoIsometry, Instance::Tensor3(x), Instance::Tensor3(y)) => {
            decide_pseudo_isometry(x, y, budget)
        }
        (Tag::Conjugacy, Instance::Tensor3(x), Instance::Tensor3(y)) => {
            decide_conjugacy(x, y, budget)
        }
        (Tag::TrilinearEq, Instance::Tensor3(x), Instance::Tensor3(y)) => {
            decide_trilinear(x, y, budget)
        }
        (Tag::AlgebraIso, Instance::Algebra(x), Instance::Algebra(y)) => {
            decide_algebra_iso(x, y, budget)
        }
        (Tag::FormEq, Instance::Form(x), Instance::Form(y)) => decide_form_eq(x, y, budget),
        (Tag::MonCodeEq, Instance::Code(x), Instance::Code(y)) => {
            decide_code_monomial(x, y, budget)
        }
        (Tag::GraphIso, Instance::Graph(x), Instance::Graph(y)) => {
            graph_witness(decide_graph_iso(x, y, budget)?)
        }
        (Tag::GraphIso, Instance::Digraph(x), Instance::Digraph(y)) => {
            graph_witness(decide_digraph_iso(x, y, budget)?)
        }
        (Tag::TiD, Instance::TensorD(x), Instance::TensorD(y)) => decide_tid(x, y, budget),
        (Tag::TiD, Instance::Tensor3(x), Instance::Tensor3(y)) => {
            decide_tid(&x.to_tensord(), &y.to_tensord(), budget)
        }
        _ => Err(Error::InvalidInput(format!(
            "no {tag} decider for a {} and a {}",
            a.kind(),
            b.kind()
        ))),
    }
}

fn random_tensor3<R: Rng>(rng: &mut R, f: GF, [l, n, m]: [usize; 3]) -> Tensor3 {
    let data = (0..l * n * m).map(|_| rng.gen_range(0..f.p())).collect();
    Tensor3::from_vec(f, l, n, m, data).expect("sized data")
}

/// `m` random alternating `n×n` slices as an `n×n×m` array.
pub fn random_alternating<R: Rng>(rng: &mut R, f: GF, n: usize, m: usize) -> Tensor3 {
    let mut t = Tensor3::zeros(f, n, n, m);
    for k in 0..m {
        for i in 0..n {
            for j in i + 1..n {
                let v = rng.gen_range(0..f.p());
                t.set(i, j, k, v);
                t.set(j, i, k, f.neg(v));
            }
        }
    }
    t
}

fn need(dims: &[usize], k: usize, tag: Tag) -> Result<()> {
    if dims.len() != k {
        return Err(Error::InvalidInput(format!(
            "{tag} instances take {k} sizes, got {}",
            dims.len()
        )));
    }
    Ok(())
}

/// Random instance of the problem `tag`. Sizes: `[ℓ, n, m]` for 3-tensor
/// problems, `[n, m]` for matrix spaces (alternating for the isometry
/// tags), `[n]` for algebras, trilinear forms and graphs, `[n, d]` for
/// forms, `[d, n]` for codes and one size per direction for `tid`.
pub fn gen_instance_with<R: Rng>(rng: &mut R, tag: Tag, dims: &[usize], f: GF) -> Result<Instance> {
    Ok(match tag {
        Tag::Ti3 | Tag::Equivalence => {
            need(dims, 3, tag)?;
            Instance::Tensor3(random_tensor3(rng, f, [dims[0], dims[1], dims[2]]))
        }
        Tag::Isometry | Tag::PseudoIsometry => {
            need(dims, 2, tag)?;
            Instance::Tensor3(random_alternating(rng, f, dims[0], dims[1]))
        }
        Tag::Conjugacy => {
            need(dims, 2, tag)?;
            Instance::Tensor3(random_tensor3(rng, f, [dims[0], dims[0], dims[1]]))
        }
        Tag::AlgebraIso => {
            need(dims, 1, tag)?;
            let n = dims[0];
            Instance::Algebra(AlgebraSC::new(random_tensor3(rng, f, [n, n, n]))?)
        }
        Tag::TrilinearEq => {
            need(dims, 1, tag)?;
            let n = dims[0];
            Instance::Tensor3(random_tensor3(rng, f, [n, n, n]))
        }
        Tag::FormEq => {
            need(dims, 2, tag)?;
            Instance::Form(FormD::random(rng, f, dims[0], dims[1] as u32))
        }
        Tag::MonCodeEq => {
            need(dims, 2, tag)?;
            Instance::Code(random_mat(rng, f, dims[0], dims[1]))
        }
        Tag::GraphIso => {
            need(dims, 1, tag)?;
            let n = dims[0];
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|_| rng.gen_bool(0.5))
                .collect();
            Instance::Graph(Graph::new(n, &edges)?)
        }
        Tag::TiD => {
            let len: usize = dims.iter().product();
            let data = (0..len).map(|_| rng.gen_range(0..f.p())).collect();
            Instance::TensorD(TensorD::from_vec(f, dims, data)?)
        }
    })
}

pub fn gen_instance(tag: Tag, dims: &[usize], p: u32, seed: u64) -> Result<Instance> {
    let f = GF::new(p)?;
    gen_instance_with(&mut ChaCha8Rng::seed_from_u64(seed), tag, dims, f)
}

/// The identity witness of `tag` on the instance `a`.
pub fn identity_witness(tag: Tag, a: &Instance) -> Result<Witness> {
    match (tag, a) {
        (Tag::GraphIso, Instance::Graph(g)) => Witness::graph(GF::new(2)?, &(0..g.n()).collect::<Vec<_>>()),
        (Tag::GraphIso, Instance::Digraph(g)) => Witness::graph(GF::new(2)?, &(0..g.n()).collect::<Vec<_>>()),
        (Tag::MonCodeEq, Instance::Code(c)) => {
            Witness::identity(tag, c.field(), &[c.rows(), c.cols(), c.cols()])
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            let f = instance_field(a);
            let shape = random_witness(&mut rng, tag, a, f)?;
            let sizes: Vec<usize> = shape.mats.iter().map(|m| m.rows()).collect();
            Witness::identity(tag, f, &sizes)
        }
    }
}

fn instance_field(a: &Instance) -> GF {
    match a {
        Instance::Tensor3(t) => t.field(),
        Instance::TensorD(t) => t.field(),
        Instance::Algebra(x) => x.field(),
        Instance::Form(x) => x.field(),
        Instance::Code(x) => x.field(),
        Instance::Graph(_) | Instance::Digraph(_) => GF::new(2).expect("prime"),
    }
}

/// Uniformly random witness of `tag` fitting the instance `a`.
pub fn random_witness<R: Rng>(rng: &mut R, tag: Tag, a: &Instance, f: GF) -> Result<Witness> {
    let gl = |rng: &mut R, n: usize| random_gl(rng, f, n);
    match (tag, a) {
        (Tag::Ti3 | Tag::Equivalence, Instance::Tensor3(t)) => {
            let [l, n, m] = t.dims();
            Witness::new(tag, vec![gl(rng, l), gl(rng, n), gl(rng, m)])
        }
        (Tag::Isometry | Tag::PseudoIsometry | Tag::Conjugacy, Instance::Tensor3(t)) => {
            let [n, _, m] = t.dims();
            Witness::new(tag, vec![gl(rng, n), gl(rng, m)])
        }
        (Tag::TrilinearEq, Instance::Tensor3(t)) => Witness::new(tag, vec![gl(rng, t.dims()[0])]),
        (Tag::AlgebraIso, Instance::Algebra(alg)) => Witness::new(tag, vec![gl(rng, alg.dim())]),
        (Tag::FormEq, Instance::Form(form)) => Witness::new(tag, vec![gl(rng, form.nvars())]),
        (Tag::MonCodeEq, Instance::Code(c)) => {
            let q = gl(rng, c.rows());
            Witness::moncode(q, &random_monomial(rng, f, c.cols()))
        }
        (Tag::GraphIso, Instance::Graph(g)) => {
            Witness::graph(f, random_monomial(rng, f, g.n()).perm())
        }
        (Tag::GraphIso, Instance::Digraph(g)) => {
            Witness::graph(f, random_monomial(rng, f, g.n()).perm())
        }
        (Tag::TiD, Instance::TensorD(t)) => {
            Witness::new(tag, t.dims().iter().map(|&n| gl(rng, n)).collect())
        }
        (tag, a) => Err(Error::InvalidInput(format!(
            "no random {tag} witness for a {}",
            a.kind()
        ))),
    }
}

/// Pairs of instances. Isomorphic pairs are `(A, act(A, w))` with `w`
/// returned; non-isomorphic pairs are certified by the brute-force decider
/// (so only at sizes within `budget`).
pub fn gen_pair(
    tag: Tag,
    dims: &[usize],
    p: u32,
    seed: u64,
    isomorphic: bool,
    budget: u128,
) -> Result<(Instance, Instance, Option<Witness>)> {
    let f = GF::new(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = gen_instance_with(&mut rng, tag, dims, f)?;
    if isomorphic {
        let w = random_witness(&mut rng, tag, &a, f)?;
        let b = act(&a, &w)?;
        return Ok((a, b, Some(w)));
    }
    const TRIES: usize = 200;
    for _ in 0..TRIES {
        let b = gen_instance_with(&mut rng, tag, dims, f)?;
        if decide(tag, &a, &b, budget)?.is_none() {
            return Ok((a, b, None));
        }
    }
    Err(Error::InvalidInput(format!(
        "no non-isomorphic {tag} pair found in {TRIES} samples"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matspace::DEFAULT_BUDGET;

    #[test]
    fn identity_pairs_decide_true() {
        for (i, tag) in Tag::ALL.into_iter().enumerate() {
            let dims: Vec<usize> = match tag {
                Tag::Ti3 | Tag::Equivalence => vec![2, 2, 2],
                Tag::FormEq | Tag::MonCodeEq => vec![2, 3],
                Tag::TiD => vec![2, 2, 2],
                Tag::AlgebraIso | Tag::TrilinearEq | Tag::GraphIso => vec![3],
                _ => vec![3, 2],
            };
            let a = gen_instance(tag, &dims, 2, i as u64).unwrap();
            let w = decide(tag, &a, &a, DEFAULT_BUDGET).unwrap();
            assert!(w.is_some(), "{tag}");
        }
    }

    #[test]
    fn random_isomorphic_pairs_are_found() {
        for seed in 0..20 {
            let (a, b, _) = gen_pair(Tag::Ti3, &[3, 2, 2], 2, seed, true, DEFAULT_BUDGET).unwrap();
            assert!(decide(Tag::Ti3, &a, &b, DEFAULT_BUDGET).unwrap().is_some());
            assert!(decide(Tag::Ti3, &b, &a, DEFAULT_BUDGET).unwrap().is_some());
            let (a, b, _) = gen_pair(Tag::Isometry, &[3, 2], 2, seed, true, DEFAULT_BUDGET).unwrap();
            assert!(decide(Tag::Isometry, &a, &b, DEFAULT_BUDGET).unwrap().is_some());
        }
    }

    #[test]
    fn both_strategies_agree() {
        for seed in 0..30 {
            let iso = seed % 2 == 0;
            let (a, b, _) = gen_pair(Tag::Ti3, &[2, 3, 2], 2, seed, iso, DEFAULT_BUDGET).unwrap();
            let (Instance::Tensor3(x), Instance::Tensor3(y)) = (&a, &b) else { unreachable!() };
            let two = decide_tid(&x.to_tensord(), &y.to_tensord(), DEFAULT_BUDGET).unwrap();
            let one = decide_3ti_one_side(x, y, DEFAULT_BUDGET).unwrap();
            assert_eq!(two.is_some(), one.is_some());
            assert_eq!(one.is_some(), iso);
        }
    }

    #[test]
    fn k3_vs_path() {
        let k3 = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let p3 = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(decide_graph_iso(&k3, &p3, DEFAULT_BUDGET).unwrap(), None);
    }

    #[test]
    fn codes_over_gf2() {
        let f = GF::new(2).unwrap();
        let i2 = Mat::identity(f, 2);
        let other = Mat::from_rows(f, &[&[1, 0], &[1, 1]]);
        // both generate all of GF(2)^2
        assert!(decide_code_monomial(&i2, &other, DEFAULT_BUDGET).unwrap().is_some());
        let rep = Mat::from_rows(f, &[&[1, 1], &[1, 1]]);
        assert!(decide_code_monomial(&i2, &rep, DEFAULT_BUDGET).unwrap().is_none());
    }

    #[test]
    fn budget_is_enforced() {
        let a = gen_instance(Tag::AlgebraIso, &[3], 3, 0).unwrap();
        let b = gen_instance(Tag::AlgebraIso, &[3], 3, 1).unwrap();
        let err = decide(Tag::AlgebraIso, &a, &b, 1000).unwrap_err();
        assert!(matches!(err, Error::Budget { .. }));
        // Equal inputs short-circuit to the verified identity.
        let id = decide(Tag::AlgebraIso, &a, &a, 1000).unwrap().unwrap();
        assert!(id.mats[0].is_identity());
    }

    #[test]
    fn non_isomorphic_pairs_are_certified() {
        let (a, b, w) = gen_pair(Tag::Ti3, &[2, 2, 2], 2, 5, false, DEFAULT_BUDGET).unwrap();
        assert!(w.is_none());
        assert!(decide_3ti_smart(
            match &a {
                Instance::Tensor3(t) => t,
                _ => unreachable!(),
            },
            match &b {
                Instance::Tensor3(t) => t,
                _ => unreachable!(),
            },
            DEFAULT_BUDGET
        )
        .unwrap()
        .is_none());
    }

    #[test]
    fn generation_is_deterministic() {
        let x = gen_pair(Tag::Conjugacy, &[2, 2], 3, 9, true, DEFAULT_BUDGET).unwrap();
        let y = gen_pair(Tag::Conjugacy, &[2, 2], 3, 9, true, DEFAULT_BUDGET).unwrap();
        assert_eq!(x, y);
    }
}
