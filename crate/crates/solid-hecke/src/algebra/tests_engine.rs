use super::engine::Gen;
use super::*;
use crate::braid::{parse, MixedBraidWord};
use crate::coefficients::Scalar;

fn q() -> Scalar {
    Scalar::q()
}

fn qi() -> Scalar {
    Scalar::q_pow(-1)
}

fn one() -> Scalar {
    Scalar::one()
}

fn w(n: usize, tvec: &[(usize, i32)], aword: &[(usize, usize)]) -> BasisWord {
    BasisWord::from_parts(n, tvec, aword).unwrap()
}

fn elem(alg: &Algebra, n: usize, flavor: Flavor, terms: Vec<(BasisWord, Scalar)>) -> Element {
    Element::from_terms(n, alg.mode(), flavor, terms)
}

fn braid(alg: &Algebra, s: &str, n: usize, flavor: Flavor) -> Element {
    alg.from_braid_in(&parse(s, Some(n)).unwrap(), flavor).unwrap()
}

#[test]
fn push_through_g1() {
    let alg = Algebra::new(Mode::Infinity);
    let g1 = alg.generator(2, 1, Flavor::Commuting).unwrap();
    let got = alg.push_t_left(&g1, 1).unwrap();
    let want = elem(
        &alg,
        2,
        Flavor::Commuting,
        vec![(w(2, &[(1, 1)], &[(1, 0)]), qi()), (w(2, &[(1, 1)], &[]), qi().sub(&one()))],
    );
    assert_eq!(got, want);
}

#[test]
fn push_commutes_past_far_generator() {
    let alg = Algebra::new(Mode::Infinity);
    let g2 = alg.generator(3, 2, Flavor::Commuting).unwrap();
    let got = alg.push_t_left(&g2, 1).unwrap();
    assert_eq!(got, Element::word(w(3, &[(0, 1)], &[(2, 0)]), Mode::Infinity, Flavor::Commuting));
}

#[test]
fn t_g1_t_g1_is_t0_t1() {
    let alg = Algebra::new(Mode::Infinity);
    let e = braid(&alg, "t s1 t s1", 2, Flavor::Commuting);
    assert_eq!(e, Element::word(w(2, &[(0, 1), (1, 1)], &[]), Mode::Infinity, Flavor::Commuting));
}

#[test]
fn quadratic_and_braid_relation() {
    let alg = Algebra::new(Mode::Infinity);
    let g = braid(&alg, "s1 s1", 2, Flavor::Commuting);
    let want = elem(
        &alg,
        2,
        Flavor::Commuting,
        vec![(w(2, &[], &[(1, 0)]), q().sub(&one())), (BasisWord::identity(2), q())],
    );
    assert_eq!(g, want);
    let b = braid(&alg, "s2 s1 s2", 3, Flavor::Commuting);
    assert_eq!(b, Element::word(w(3, &[], &[(1, 0), (2, 1)]), Mode::Infinity, Flavor::Commuting));
    let inv = braid(&alg, "s1^-1", 2, Flavor::Commuting);
    let want = elem(
        &alg,
        2,
        Flavor::Commuting,
        vec![(w(2, &[], &[(1, 0)]), qi()), (BasisWord::identity(2), qi().sub(&one()))],
    );
    assert_eq!(inv, want);
}

fn relation_words() -> Vec<(&'static str, &'static str, usize)> {
    vec![
        ("s1 s2 s1", "s2 s1 s2", 3),
        ("s2 s3 s2", "s3 s2 s3", 4),
        ("s1 s3", "s3 s1", 4),
        ("t s1 t s1", "s1 t s1 t", 2),
        ("t^-1 s1 t s1", "s1 t s1 t^-1", 2),
        ("t s2", "s2 t", 3),
        ("s1 s1^-1", "", 2),
        ("t t^-1 s2 s2^-1", "", 3),
        ("s2 s1 t^2 s1^-1 s2^-1 t", "s2 s1 t^2 s1^-1 s2^-1 t", 3),
    ]
}

#[test]
fn defining_relations_in_all_engines() {
    for mode in [Mode::Infinity, Mode::Cyclotomic(2), Mode::Cyclotomic(3)] {
        let alg = Algebra::new(mode);
        let flavors: &[Flavor] = if mode == Mode::Infinity {
            &[Flavor::Commuting, Flavor::Looping]
        } else {
            &[Flavor::Looping]
        };
        for &fl in flavors {
            for (a, b, n) in relation_words() {
                assert_eq!(braid(&alg, a, n, fl), braid(&alg, b, n, fl), "{mode} {fl:?}: {a} = {b}");
            }
        }
    }
}

#[test]
fn bases_agree_on_random_words() {
    let alg = Algebra::new(Mode::Infinity);
    for seed in 0..60u64 {
        let n = 1 + (seed % 4) as usize;
        let word = MixedBraidWord::random(n, 8, 3, seed);
        let c = alg.from_braid_in(&word, Flavor::Commuting).unwrap();
        let l = alg.from_braid_in(&word, Flavor::Looping).unwrap();
        assert_eq!(alg.to_looping(&c).unwrap(), l, "word {word}");
        assert_eq!(alg.to_commuting(&l).unwrap(), c, "word {word}");
    }
}

#[test]
fn cyclotomic_relation_holds() {
    for d in 1..=3u32 {
        let alg = Algebra::new(Mode::Cyclotomic(d));
        for n in 1..=3usize {
            let td = alg.word_element(n, &vec![Gen::T(1); d as usize], Flavor::Looping).unwrap();
            let mut rhs = Element::zero(n, alg.mode(), Flavor::Looping);
            for j in 0..d {
                let tj = alg.word_element(n, &vec![Gen::T(1); j as usize], Flavor::Looping).unwrap();
                rhs = rhs.add(&tj.scale(&Scalar::a(j))).unwrap();
            }
            assert_eq!(td, rhs, "d={d} n={n}");
            let e = braid(&alg, "t t^-1", n, Flavor::Looping);
            assert_eq!(e, alg.one(n, Flavor::Looping));
        }
    }
}

#[test]
fn looping_loops_are_reduced_in_cyclotomic_mode() {
    let alg = Algebra::new(Mode::Cyclotomic(2));
    let e = braid(&alg, "s2 s1 t^3 s1^-1 s2^-1 t^-2 s2 s1 t^-1", 3, Flavor::Looping);
    for (w, _) in e.iter() {
        assert!(w.cells().iter().all(|c| (0..2).contains(&c.exp)), "{w}");
    }
}

#[test]
fn associativity_on_random_triples() {
    for mode in [Mode::Infinity, Mode::Cyclotomic(2)] {
        let alg = Algebra::new(mode);
        let fl = alg.working_flavor();
        for seed in 0..20u64 {
            let n = 1 + (seed % 3) as usize;
            let e = |s: u64| alg.from_braid(&MixedBraidWord::random(n, 6, 3, s));
            let (a, b, c) = (e(3 * seed), e(3 * seed + 1), e(3 * seed + 2));
            let left = alg.mul(&alg.mul(&a, &b).unwrap(), &c).unwrap();
            let right = alg.mul(&a, &alg.mul(&b, &c).unwrap()).unwrap();
            assert_eq!(left, right, "{mode} {fl:?} seed {seed}");
        }
    }
}

#[test]
fn mul_matches_concatenation() {
    let alg = Algebra::new(Mode::Infinity);
    for fl in [Flavor::Commuting, Flavor::Looping] {
        for seed in 0..20u64 {
            let n = 1 + (seed % 3) as usize;
            let u = MixedBraidWord::random(n, 5, 3, seed);
            let v = MixedBraidWord::random(n, 5, 3, seed + 100);
            let uv = u.concat(&v).unwrap();
            let prod =
                alg.mul(&alg.from_braid_in(&u, fl).unwrap(), &alg.from_braid_in(&v, fl).unwrap()).unwrap();
            assert_eq!(prod, alg.from_braid_in(&uv, fl).unwrap());
        }
    }
}

fn commuting_eval(alg: &Algebra, e: &Expr) -> Element {
    e.evaluate(alg, Flavor::Commuting).unwrap()
}

#[test]
fn slide_round_trips() {
    let alg = Algebra::new(Mode::Infinity);
    for n in 1..=3usize {
        for k in (-4..=4).filter(|&k| k != 0) {
            let lhs = Expr::product(n + 1, vec![Factor::Commuting(n, k), Factor::G(n, 1)]);
            let rhs = lemma2_slide(n, k);
            assert_eq!(commuting_eval(&alg, &lhs), commuting_eval(&alg, &rhs), "n={n} k={k}");
        }
    }
}

#[test]
fn loop_reorder_round_trips() {
    let alg = Algebra::new(Mode::Infinity);
    for i in 1..=4 {
        for k in 1..=4 {
            for eps in [1, -1] {
                for sign in [1, -1] {
                    let lhs = fl_reorder_lhs(i, k, eps, sign);
                    let rhs = fl_reorder(i, k, eps, sign);
                    assert_eq!(
                        commuting_eval(&alg, &lhs),
                        commuting_eval(&alg, &rhs),
                        "i={i} k={k} eps={eps} sign={sign}"
                    );
                }
            }
        }
    }
}

#[test]
fn symmetric_expansion_round_trips() {
    let alg = Algebra::new(Mode::Infinity);
    for n in 0..=3usize {
        for k in 1..=3u32 {
            for eps in [1, -1] {
                let lhs = Expr::product(n + 1, vec![Factor::Commuting(n, eps * (k as i32 + 1))]);
                let rhs = lemma3_expand(n, k, eps);
                assert_eq!(commuting_eval(&alg, &lhs), commuting_eval(&alg, &rhs), "n={n} k={k} eps={eps}");
            }
        }
    }
}

#[test]
fn inductive_forms_round_trip() {
    for mode in [Mode::Infinity, Mode::Cyclotomic(2), Mode::Cyclotomic(3)] {
        let alg = Algebra::new(mode);
        for n in 1..=3usize {
            for k in (-4i32..=4).filter(|&k| k != 0) {
                let sym = if k.abs() == 1 {
                    Expr::product(n + 1, vec![Factor::Commuting(n, k.signum())])
                } else {
                    lemma3_expand(n, k.unsigned_abs() - 1, k.signum())
                };
                let direct = sym.evaluate(&alg, Flavor::Looping).unwrap();
                let form = alg.prop3_reduce(&sym).unwrap();
                assert_eq!(form.evaluate(&alg).unwrap(), direct, "{mode} prop3 n={n} k={k}");
                let conv = alg.thm4_convert(&form).unwrap();
                assert_eq!(conv, direct, "{mode} thm4 n={n} k={k}");
                let tp = alg.tpower_coset_expand(n, k).unwrap();
                let want = Expr::product(n + 1, vec![Factor::Commuting(n, k)]).evaluate(&alg, Flavor::Looping).unwrap();
                assert_eq!(tp, want, "{mode} tpower n={n} k={k}");
            }
        }
    }
}

#[test]
fn t1_in_looping_basis() {
    let alg = Algebra::new(Mode::Infinity);
    let got = alg.tpower_coset_expand(1, 1).unwrap();
    let want = elem(
        &alg,
        2,
        Flavor::Looping,
        vec![(w(2, &[(1, 1)], &[]), q()), (w(2, &[(1, 1)], &[(1, 0)]), q().sub(&one()))],
    );
    assert_eq!(got, want);
}

