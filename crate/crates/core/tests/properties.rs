use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tik_core::form::FormD;
use tik_core::groupcorr::{baer_group, bracket, lie_closure, matrix_exp, matrix_log};
use tik_core::matspace::{random_gl, random_mat, Mat, DEFAULT_BUDGET};
use tik_core::oracle::{decide, gen_instance, random_alternating, random_witness};
use tik_core::reductions::NAMES;
use tik_core::s2d::{find_isometry, StructuralOracle};
use tik_core::selftest::{roundtrip_case, roundtrip_once};
use tik_core::tensor::{nondegenerate_core, symmetrize_cubic, Direction, Tensor3};
use tik_core::witness::{act, act_tensor3, verify_witness, Instance, Tag, Witness};
use tik_core::GF;

const FIELDS: [u32; 5] = [2, 3, 5, 7, 13];

fn field() -> impl Strategy<Value = GF> {
    prop::sample::select(&FIELDS[..]).prop_map(|p| GF::new(p).unwrap())
}

fn small_field() -> impl Strategy<Value = GF> {
    prop::sample::select(&[2u32, 3, 5][..]).prop_map(|p| GF::new(p).unwrap())
}

fn random_tensor(rng: &mut ChaCha8Rng, f: GF, max: usize) -> Tensor3 {
    let d: Vec<usize> = (0..3).map(|_| rng.gen_range(1..=max)).collect();
    let data = (0..d[0] * d[1] * d[2]).map(|_| rng.gen_range(0..f.p())).collect();
    Tensor3::from_vec(f, d[0], d[1], d[2], data).unwrap()
}

/// Problem tags with sizes small enough for the brute-force deciders.
fn tag_dims(tag: Tag) -> Vec<usize> {
    match tag {
        Tag::Ti3 | Tag::Equivalence => vec![2, 2, 2],
        Tag::FormEq => vec![2, 3],
        Tag::MonCodeEq => vec![2, 3],
        Tag::TiD => vec![2, 2, 2],
        Tag::AlgebraIso | Tag::TrilinearEq => vec![2],
        Tag::GraphIso => vec![4],
        _ => vec![3, 2],
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(f in field(), a in 0u32..13, b in 0u32..13, c in 0u32..13) {
        let (a, b, c) = (a % f.p(), b % f.p(), c % f.p());
        prop_assert_eq!(f.add(a, f.add(b, c)), f.add(f.add(a, b), c));
        prop_assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if a != 0 {
            let ai = f.inv(a).unwrap();
            prop_assert_eq!(f.mul(a, ai), 1);
            prop_assert_eq!(f.inv(ai).unwrap(), a);
        }
    }

    #[test]
    fn rank_is_reproducible_and_transpose_invariant(f in field(), seed: u64, r in 1usize..6, c in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_mat(&mut rng, f, r, c);
        let (r1, r2) = (a.rref(), a.rref());
        prop_assert_eq!(&r1.mat, &r2.mat);
        prop_assert_eq!(&r1.pivots, &r2.pivots);
        prop_assert_eq!(a.rank(), a.transpose().rank());
        let k = a.right_kernel();
        prop_assert_eq!(k.rows() + a.rank(), c);
        prop_assert_eq!(k.rank(), k.rows());
        prop_assert!(a.mul(&k.transpose()).is_zero());
    }

    #[test]
    fn alternating_flag_matches_definition(f in small_field(), seed: u64, n in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = if rng.gen_bool(0.5) {
            random_alternating(&mut rng, f, n, 1).frontal().slice(0).clone()
        } else {
            random_mat(&mut rng, f, n, n)
        };
        let definition = a.add(&a.transpose()).is_zero() && (0..n).all(|i| a.get(i, i) == 0);
        prop_assert_eq!(a.is_alternating(), definition);
        let quadratic_zero = (0..f.p().pow(n as u32)).all(|code| {
            let u: Vec<u32> = (0..n).map(|i| code / f.p().pow(i as u32) % f.p()).collect();
            let au = a.mul_vec(&u);
            u.iter().zip(&au).fold(0, |s, (&x, &y)| f.add(s, f.mul(x, y))) == 0
        });
        prop_assert_eq!(a.is_alternating(), quadratic_zero);
    }

    #[test]
    fn inverse_of_random_gl(f in field(), seed: u64, n in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_gl(&mut rng, f, n);
        let h = g.inverse().unwrap();
        prop_assert!(g.mul(&h).is_identity());
        prop_assert!(h.mul(&g).is_identity());
    }

    #[test]
    fn slices_reassemble_in_every_direction(f in small_field(), seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_tensor(&mut rng, f, 4);
        for dir in [Direction::Frontal, Direction::Lateral, Direction::Horizontal] {
            prop_assert_eq!(Tensor3::from_slices(&t.slices(dir), dir), t.clone());
        }
    }

    #[test]
    fn core_is_idempotent_and_expands_back(f in small_field(), seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = random_tensor(&mut rng, f, 3);
        // Duplicate a slice so the core is proper more often.
        let [l, n, m] = t.dims();
        if l > 1 {
            for j in 0..n {
                for k in 0..m {
                    let v = t.get(0, j, k);
                    t.set(l - 1, j, k, v);
                }
            }
        }
        let core = nondegenerate_core(&t);
        prop_assert_eq!(core.expand(), t);
        let again = nondegenerate_core(&core.tensor);
        prop_assert_eq!(again.tensor, core.tensor.clone());
        prop_assert!(core.tensor.dims().iter().product::<usize>() == 0 || core.tensor.is_nondegenerate());
    }

    #[test]
    fn symmetrized_cubic_is_symmetric(seed: u64, n in 1usize..4) {
        let f = GF::new(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let form = FormD::random(&mut rng, f, n, 3);
        let t = symmetrize_cubic(&form).unwrap();
        for idx in t.indices() {
            let (i, j, k) = (idx[0], idx[1], idx[2]);
            for p in [[i, j, k], [i, k, j], [j, i, k], [j, k, i], [k, i, j], [k, j, i]] {
                prop_assert_eq!(t.get(&p), t.get(&idx));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn action_is_a_left_action(seed: u64, ti in 0usize..11, p in prop::sample::select(&[2u32, 3, 5][..])) {
        let tag = Tag::ALL[ti];
        let f = GF::new(p).unwrap();
        let a = gen_instance(tag, &tag_dims(tag), p, seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let w1 = random_witness(&mut rng, tag, &a, f).unwrap();
        let w2 = random_witness(&mut rng, tag, &a, f).unwrap();
        let sizes: Vec<usize> = w1.mats.iter().map(|m| m.rows()).collect();
        if tag != Tag::GraphIso {
            prop_assert_eq!(act(&a, &Witness::identity(tag, f, &sizes).unwrap()).unwrap(), a.clone());
        }
        let two_steps = act(&act(&a, &w1).unwrap(), &w2).unwrap();
        prop_assert_eq!(&two_steps, &act(&a, &w1.compose(&w2).unwrap()).unwrap());
        prop_assert_eq!(act(&act(&a, &w1).unwrap(), &w1.inverse().unwrap()).unwrap(), a);
    }

    #[test]
    fn reductions_carry_witnesses_both_ways(seed: u64, ri in 0usize..14, p in prop::sample::select(&[2u32, 3, 5][..])) {
        let f = GF::new(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (red, a, w) = roundtrip_case(NAMES[ri], &mut rng, f).unwrap();
        prop_assert_eq!(roundtrip_once(red.as_ref(), &a, &w), Ok(()), "{}", NAMES[ri]);
    }

    #[test]
    fn deciders_are_symmetric_and_verified(seed: u64, ti in 0usize..11, p in prop::sample::select(&[2u32, 3][..])) {
        let tag = Tag::ALL[ti];
        let dims = tag_dims(tag);
        let a = gen_instance(tag, &dims, p, seed).unwrap();
        let b = if seed % 2 == 0 {
            let f = GF::new(p).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            act(&a, &random_witness(&mut rng, tag, &a, f).unwrap()).unwrap()
        } else {
            gen_instance(tag, &dims, p, seed ^ 0xff).unwrap()
        };
        let ab = decide(tag, &a, &b, DEFAULT_BUDGET).unwrap();
        let ba = decide(tag, &b, &a, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(ab.is_some(), ba.is_some());
        if seed % 2 == 0 {
            prop_assert!(ab.is_some());
        }
        if let Some(w) = ab {
            prop_assert!(verify_witness(tag, &a, &b, &w).unwrap());
        }
        if let Some(w) = ba {
            prop_assert!(verify_witness(tag, &b, &a, &w).unwrap());
        }
    }

    #[test]
    fn baer_generators_have_exponent_p_and_class_two(seed: u64, p in prop::sample::select(&[3u32, 5][..]), n in 2usize..5, m in 1usize..3) {
        let f = GF::new(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_alternating(&mut rng, f, n, m);
        let g = baer_group(&a.frontal()).unwrap();
        for x in g.gens() {
            prop_assert!(x.pow(p as u64).is_identity());
            for y in g.gens() {
                let c = tik_core::groupcorr::commutator(x, y);
                for z in g.gens() {
                    prop_assert!(tik_core::groupcorr::commutator(&c, z).is_identity());
                }
            }
        }
    }

    #[test]
    fn log_is_additive_on_commuting_pairs(seed: u64, p in prop::sample::select(&[5u32, 7][..]), size in 1usize..5, k in 0u64..7) {
        let f = GF::new(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = Mat::identity(f, size);
        for i in 0..size {
            for j in i + 1..size {
                g.set(i, j, rng.gen_range(0..p));
            }
        }
        let h = g.pow(k);
        let lg = matrix_log(&g).unwrap();
        prop_assert_eq!(matrix_exp(&lg).unwrap(), g.clone());
        prop_assert_eq!(matrix_log(&g.mul(&h)).unwrap(), lg.add(&matrix_log(&h).unwrap()));
    }

    #[test]
    fn lie_closure_is_alternating_and_jacobi(seed: u64, p in prop::sample::select(&[3u32, 5][..]), size in 2usize..5) {
        let f = GF::new(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens: Vec<Mat> = (0..2)
            .map(|_| {
                let mut x = Mat::zeros(f, size, size);
                for i in 0..size {
                    for j in i + 1..size {
                        x.set(i, j, rng.gen_range(0..p));
                    }
                }
                x
            })
            .collect();
        let lie = lie_closure(f, size, &gens).unwrap();
        prop_assert!(lie.algebra.is_alternating());
        prop_assert!(lie.algebra.satisfies_jacobi());
        let again = lie_closure(f, size, &lie.basis).unwrap();
        prop_assert_eq!(again.dim(), lie.dim());
        for x in &lie.basis {
            for y in &lie.basis {
                prop_assert!(lie.coords(&bracket(x, y)).is_some());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn search_returns_verified_isometries(seed: u64, p in prop::sample::select(&[2u32, 3][..]), n in 2usize..4, m in 1usize..3) {
        let f = GF::new(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_alternating(&mut rng, f, n, m);
        let w = Witness::new(Tag::Isometry, vec![random_gl(&mut rng, f, n), random_gl(&mut rng, f, m)]).unwrap();
        let b = act_tensor3(&a, &w).unwrap();
        let oracle = StructuralOracle { budget: DEFAULT_BUDGET };
        let found = find_isometry(&a, &b, &oracle, DEFAULT_BUDGET).unwrap().expect("isometric pair");
        let (ia, ib) = (Instance::Tensor3(a), Instance::Tensor3(b));
        prop_assert!(verify_witness(Tag::Isometry, &ia, &ib, &found).unwrap());
    }
}
