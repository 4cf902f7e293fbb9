mod common;

use common::*;
use qcoiso::classical::LieAlgebra;
use qcoiso::qfield::RatFunc;
use qcoiso::recipes::{br, g, BracketExpr, GeneratorRecipe, NamedExpr};
use qcoiso::rootsys::CartanType;
use qcoiso::shuffle::phi;
use qcoiso::uqalg::{Mono, NCPoly, TensorElem, TensorMono, Uq};
use std::collections::BTreeMap;
use qcoiso::verify::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn replace(e: &BracketExpr, from: &BracketExpr, to: &BracketExpr) -> BracketExpr {
    if e == from {
        return to.clone();
    }
    match e {
        BracketExpr::Gen(_) => e.clone(),
        BracketExpr::Qbr(a, b, k) => br(&replace(a, from, to), &replace(b, from, to), *k),
    }
}

/// The sl(4) recipe with `[E1,E2]_q` replaced by the plain commutator.
fn mutated_a3() -> GeneratorRecipe {
    let mut r = recipe("A3", "L1-L4");
    let (from, to) = (br(&g(1), &g(2), 1), br(&g(1), &g(2), 0));
    for ge in &mut r.generators {
        ge.expr = replace(&ge.expr, &from, &to);
    }
    r
}

fn coideal(r: &GeneratorRecipe, basis: RightBasis) -> CoidealSection {
    check_left_coideal(&Checker::new(r).unwrap(), basis)
}

const BASES: [RightBasis; 4] =
    [RightBasis::Shuffle, RightBasis::Quotient { reversed: false }, RightBasis::Quotient { reversed: true }, RightBasis::Spanning];

#[test]
fn sl4_is_a_left_coideal() {
    let sec = coideal(&recipe("A3", "L1-L4"), RightBasis::Shuffle);
    assert!(sec.pass);
    assert_eq!(sec.per_generator.len(), 6);
    for gc in &sec.per_generator {
        assert!(gc.certificates.iter().all(|c| c.residual_check), "{}", gc.name);
    }
}

#[test]
fn plain_commutator_breaks_the_coideal() {
    let r = mutated_a3();
    let sec = coideal(&r, RightBasis::Shuffle);
    assert!(!sec.pass);
    let bad = sec.per_generator.iter().find(|g| !g.pass).unwrap();
    assert_eq!(bad.name, "X2");
    let u = uq("A3");
    // right leg partner of E2 is proportional to [E1, K2]
    let expected = u.q_bracket(&u.e(0), &u.k(&[0, 1, 0]), 0);
    let term = bad.witness.iter().find(|w| w.left_word == vec![1u8]).expect("witness has E2 on the left");
    let (m0, c0) = expected.terms.iter().next().unwrap();
    let ratio = term.right_poly.terms.get(m0).unwrap().checked_div(c0).unwrap();
    assert_eq!(term.right_poly, expected.scale(&ratio));
}

#[test]
fn single_simple_generator() {
    let r = GeneratorRecipe {
        ty: "A".into(),
        rank: 1,
        beta: "a1".into(),
        k_monomial: vec![1],
        generators: vec![NamedExpr { name: "E1".into(), expr: g(1), group: None }],
        auxiliary: vec![],
        power_assignment: None,
        notes: vec![],
    };
    for b in BASES {
        assert!(coideal(&r, b).pass);
    }
}

#[test]
fn right_basis_does_not_change_verdicts() {
    let cases: Vec<GeneratorRecipe> =
        vec![recipe("A3", "L1-L4"), recipe("B2", "L1+L2"), recipe("C3", "2L1"), recipe("G2", "3a1+a2"), mutated_a3()];
    for r in &cases {
        let verdicts: Vec<Vec<bool>> =
            BASES.iter().map(|&b| coideal(r, b).per_generator.iter().map(|g| g.pass).collect()).collect();
        assert!(verdicts.windows(2).all(|w| w[0] == w[1]), "{}{} {}: {verdicts:?}", r.ty, r.rank, r.beta);
    }
}

fn tensor(a: &NCPoly, b: &NCPoly) -> TensorElem {
    let mut t = TensorElem::default();
    for (ma, ca) in &a.terms {
        for (mb, cb) in &b.terms {
            t.add_term(TensorMono { left: ma.clone(), right: mb.clone() }, ca * cb);
        }
    }
    t
}

/// Whether `t` lies in `I (x) U + U (x) I`, by applying the shuffle map to each leg in turn.
fn zero_mod_ideal(u: &Uq, t: &TensorElem) -> bool {
    let strip = |m: &Mono| Mono { kexp: vec![0; u.rank], word: m.word.clone() };
    let mut right: BTreeMap<(Mono, Vec<i64>), NCPoly> = BTreeMap::new();
    for (tm, c) in &t.terms {
        right.entry((tm.left.clone(), tm.right.kexp.clone())).or_insert_with(NCPoly::zero).add_term(strip(&tm.right), c.clone());
    }
    let mut left: BTreeMap<(Vec<i64>, Vec<i64>, Vec<u8>), NCPoly> = BTreeMap::new();
    for ((lm, rk), p) in right {
        for (w, c) in phi(u, &p) {
            left.entry((lm.kexp.clone(), rk.clone(), w)).or_insert_with(NCPoly::zero).add_term(strip(&lm), c.to_ratfunc());
        }
    }
    left.values().all(|p| phi(u, p).values().all(|c| c.is_zero()))
}

#[test]
fn coproduct_of_the_sl_chain() {
    let u = uq("A4");
    let xs: Vec<NCPoly> = {
        let mut v = vec![u.e(0)];
        for i in 1..4 {
            let next = u.q_bracket(v.last().unwrap(), &u.e(i), 1);
            v.push(next);
        }
        v
    };
    for i in 1..=4 {
        let x = &xs[i - 1];
        let mut want = tensor(&u.one(), x);
        for m in 1..=i {
            let mut kexp = vec![0; 4];
            kexp[..m].iter_mut().for_each(|k| *k = 1);
            let mut right = u.k(&kexp);
            for t in m..i {
                right = u.q_bracket(&right, &u.e(t), 1);
            }
            let t = tensor(&xs[m - 1], &right);
            for (mono, c) in t.terms {
                want.add_term(mono, c);
            }
        }
        assert!(zero_mod_ideal(&u, &u.coproduct(x).sub(&want)), "X{i}");
    }
    assert!(!zero_mod_ideal(&u, &tensor(&u.e(0), &u.e(1))));
}

#[test]
fn nested_serre_brackets_are_relations() {
    let u = uq("G2");
    let x = u.q_bracket(&u.e(1), &u.q_bracket(&u.e(1), &u.e(0), 3), -3);
    assert!(in_ideal(&u, &x));
    assert!(u.serre_relations().membership(&u, &x).is_some());

    let u = uq("B3");
    let inner = u.q_bracket(&u.e(2), &u.q_bracket(&u.e(2), &u.e(1), 2), 0);
    let x = u.q_bracket(&u.e(2), &inner, -2);
    assert!(in_ideal(&u, &x));
    let ideal = u.serre_relations();
    let cert = ideal.membership(&u, &x).unwrap();
    assert_eq!(ideal.expand(&u, &cert), x);

    // a non-member for contrast
    let u = uq("A2");
    assert!(!in_ideal(&u, &u.q_bracket(&u.e(0), &u.e(1), 1)));
}

fn limits(r: &GeneratorRecipe) -> (LieAlgebra, Vec<qcoiso::classical::LieElement>) {
    let alg = LieAlgebra::build(&r.root_system().unwrap()).unwrap();
    let lims = r.generators.iter().map(|x| qcoiso::recipes::classical_limit_expr(&x.expr, &alg)).collect();
    (alg, lims)
}

#[test]
fn sl_chain_pairs_are_flat() {
    let r = recipe("A3", "L1-L4");
    let ch = Checker::new(&r).unwrap();
    let (alg, lims) = limits(&r);
    let idx = |n: &str| r.generators.iter().position(|x| x.name == n).unwrap();
    for (a, b) in [("E1", "X2"), ("E1", "X3"), ("X2", "X3")] {
        let p = ch.flatness_pair(idx(a), idx(b), 6, Some((&alg, &lims)));
        assert_eq!(p.verdict, Verdict::Pass, "{a} {b}: {:?}", p.reason);
        assert_eq!(p.semiclassical, Some(true));
        assert!(p.certificate.as_ref().unwrap().residual_check);
    }
    // [X2, E3] produces X3 at q = 1
    let p = ch.flatness_pair(idx("X2"), idx("E3"), 6, Some((&alg, &lims)));
    assert_eq!(p.verdict, Verdict::Pass);
    assert!(p.xprime.as_deref().unwrap().contains("X3"), "{:?}", p.xprime);
}

#[test]
fn k_pairs_use_the_crossing_exponent() {
    let r = recipe("A3", "L1-L4");
    let ch = Checker::new(&r).unwrap();
    let u = uq("A3");
    for t in 0..r.generators.len() {
        let p = ch.flatness_k_pair(t, None);
        assert_eq!(p.verdict, Verdict::Pass);
        let content = r.generators[t].expr.content(3);
        assert_eq!(p.l, Some(-u.pair(&r.k_monomial, &content)));
    }
}

#[test]
fn astuce_examples() {
    let u = uq("A3");
    let e = |i| u.e(i);
    let b = u.q_bracket(&e(0), &e(1), 1);
    assert_eq!(check_lemma_astuce(&u, &e(0), &b, &e(2), -1, 0, 1, false), AstuceOutcome::Holds);
    assert_eq!(check_lemma_astuce(&u, &e(0), &e(0), &e(0), 0, 0, 0, false), AstuceOutcome::Holds);
    assert_eq!(check_lemma_astuce(&u, &e(0), &e(1), &e(2), 0, 0, 0, false), AstuceOutcome::HypothesisFailed);
}

#[test]
fn astuce_random_instances() {
    let mut rng = StdRng::seed_from_u64(5);
    let found = astuce_instances(&mut rng, 50);
    assert_eq!(found.len(), 50);
    for inst in &found {
        assert_eq!(inst.outcome, AstuceOutcome::Holds, "{}", inst.label);
        let ideal = inst.uq.serre_relations();
        let cert = ideal.membership(&inst.uq, &inst.conclusion).expect(&inst.label);
        assert_eq!(ideal.expand(&inst.uq, &cert), inst.conclusion, "{}", inst.label);
    }
    let distinct: std::collections::BTreeSet<&str> = found.iter().map(|i| i.label.as_str()).collect();
    assert!(distinct.len() >= 25);
}

#[test]
fn pipeline_cases() {
    let opts = VerifyOptions { timings: false, ..Default::default() };
    let rep = run_full_verification(CartanType::parse("A", 3).unwrap(), "L1-L4", None, &opts).unwrap();
    assert_eq!(rep.verdict, Verdict::Pass);
    assert!(rep.classical.as_ref().unwrap().coisotropic);
    assert!(rep.recipe.as_ref().unwrap().classical_limit.pass);
    for p in &rep.flatness.as_ref().unwrap().per_pair {
        if let Some(c) = &p.certificate {
            assert!(c.residual_check);
        }
    }

    let rep = run_full_verification(CartanType::parse("C", 2).unwrap(), "L1-L2", None, &opts).unwrap();
    assert_eq!(rep.verdict, Verdict::Fail);
    assert_eq!(rep.stage.as_deref(), Some("admissibility"));

    let err = run_full_verification(CartanType::parse("F", 4).unwrap(), "a1", None, &opts).unwrap_err();
    assert!(!err.msg.is_empty());
}

#[test]
fn ratfunc_helper_is_sane() {
    let mut rng = StdRng::seed_from_u64(1);
    for _ in 0..20 {
        let x = random_ratfunc(&mut rng);
        assert_eq!(&(&x + &RatFunc::one()) - &RatFunc::one(), x);
    }
}
