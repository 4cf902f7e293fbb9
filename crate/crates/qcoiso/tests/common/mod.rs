#![allow(dead_code)]

use qcoiso::qfield::RatFunc;
use qcoiso::recipes::{builtin_recipe, GeneratorRecipe};
use qcoiso::rootsys::{CartanType, RootSystem};
use qcoiso::uqalg::{Mono, NCPoly, Uq};
use qcoiso::verify::{check_lemma_astuce, AstuceOutcome};
use rand::rngs::StdRng;
use rand::Rng;

pub fn rs(s: &str) -> RootSystem {
    RootSystem::build(s.parse::<CartanType>().unwrap()).unwrap()
}

pub fn uq(s: &str) -> Uq {
    Uq::new(&rs(s))
}

pub fn recipe(s: &str, beta: &str) -> GeneratorRecipe {
    let r = rs(s);
    builtin_recipe(r.ty, &r.parse_root(beta).unwrap()).unwrap()
}

pub fn random_ratfunc(rng: &mut StdRng) -> RatFunc {
    let poly = |rng: &mut StdRng| {
        let mut p = RatFunc::zero();
        for k in 0..rng.gen_range(1..4) {
            p = &p + &RatFunc::monomial(rng.gen_range(-4..=4), k);
        }
        p
    };
    let num = poly(rng);
    let mut den = poly(rng);
    while den.is_zero() {
        den = poly(rng);
    }
    let shift = RatFunc::q_pow(rng.gen_range(-2..=2));
    &num.checked_div(&den).unwrap() * &shift
}

pub fn random_poly(u: &Uq, rng: &mut StdRng, maxdeg: usize) -> NCPoly {
    let mut p = NCPoly::zero();
    for _ in 0..rng.gen_range(1..4) {
        let d = rng.gen_range(0..=maxdeg);
        let word: Vec<u8> = (0..d).map(|_| rng.gen_range(0..u.rank) as u8).collect();
        let kexp: Vec<i64> = (0..u.rank).map(|_| rng.gen_range(-1..=1)).collect();
        let c = RatFunc::monomial(rng.gen_range(-3..=3), rng.gen_range(-2..=2));
        p.add_term(Mono { kexp, word }, c);
    }
    p
}

pub struct AstuceInstance {
    pub label: String,
    pub outcome: AstuceOutcome,
    pub uq: Uq,
    /// The bracket the lemma claims is a relation.
    pub conclusion: NCPoly,
}

/// Random Astuce instances whose hypotheses hold, drawn from simple letters and
/// recipe generators of several types, plain or mirrored.
pub fn astuce_instances(rng: &mut StdRng, want: usize) -> Vec<AstuceInstance> {
    let cases = [("A3", "L1-L4"), ("B2", "L1+L2"), ("C3", "2L1"), ("G2", "3a1+a2"), ("D4", "L1+L4")];
    let pools: Vec<(Uq, Vec<(String, NCPoly)>)> = cases
        .iter()
        .map(|(s, b)| {
            let u = uq(s);
            let r = recipe(s, b);
            let mut pool: Vec<(String, NCPoly)> = (0..u.rank).map(|i| (format!("E{}", i + 1), u.e(i))).collect();
            for (g, x) in r.generators.iter().zip(r.evaluate(&u).unwrap()) {
                if x.degree() <= 3 {
                    pool.push((g.expr.to_string(), x));
                }
            }
            (u, pool)
        })
        .collect();
    let mut out = Vec::new();
    let mut tries = 0;
    while out.len() < want && tries < 200_000 {
        tries += 1;
        let (u, pool) = &pools[rng.gen_range(0..pools.len())];
        let pick = |rng: &mut StdRng| &pool[rng.gen_range(0..pool.len())];
        let (a, b, c) = (pick(rng), pick(rng), pick(rng));
        let (pa, pb, pc) = (rng.gen_range(-3..=3), rng.gen_range(-3..=3), rng.gen_range(-3..=3));
        let mirrored = rng.gen_bool(0.5);
        if a.1.degree() + b.1.degree() + c.1.degree() > 6 {
            continue;
        }
        let o = check_lemma_astuce(u, &a.1, &b.1, &c.1, pa, pb, pc, mirrored);
        if o == AstuceOutcome::HypothesisFailed {
            continue;
        }
        let label = format!("{} a={} b={} c={} ({pa},{pb},{pc}) mirrored={mirrored}", u.rs.ty, a.0, b.0, c.0);
        let bc = u.q_bracket(&b.1, &c.1, pc);
        let conclusion = if mirrored { u.q_bracket(&bc, &a.1, pa + pb) } else { u.q_bracket(&a.1, &bc, pa + pb) };
        out.push(AstuceInstance { label, outcome: o, uq: u.clone(), conclusion });
    }
    out
}

/// Number of multisets of positive roots with the given sum.
pub fn kostant(rs: &RootSystem, c: &[i64]) -> usize {
    fn go(roots: &[Vec<i64>], k: usize, rest: &mut Vec<i64>) -> usize {
        if rest.iter().all(|&x| x == 0) {
            return 1;
        }
        if k == roots.len() {
            return 0;
        }
        let mut total = go(roots, k + 1, rest);
        let r = &roots[k];
        let mut used = 0;
        while rest.iter().zip(r).all(|(a, b)| a >= b) {
            for (a, b) in rest.iter_mut().zip(r) {
                *a -= b;
            }
            used += 1;
            total += go(roots, k + 1, rest);
        }
        for (a, b) in rest.iter_mut().zip(r) {
            *a += used * b;
        }
        total
    }
    let roots: Vec<Vec<i64>> = rs.positive_roots.iter().map(|r| r.simple_decomp.clone()).collect();
    go(&roots, 0, &mut c.to_vec())
}

pub fn contents(rank: usize, deg: i64) -> Vec<Vec<i64>> {
    if rank == 1 {
        return vec![vec![deg]];
    }
    let mut out = Vec::new();
    for k in 0..=deg {
        for mut rest in contents(rank - 1, deg - k) {
            rest.insert(0, k);
            out.push(rest);
        }
    }
    out
}
