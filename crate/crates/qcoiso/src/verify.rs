//! Left-coideal and flatness checks for a recipe, identity solving, and the
//! end-to-end pipeline.
//!
//! Both checks work modulo the Serre ideal through the shuffle map `phi`, whose
//! kernel is exactly the ideal, so "x in span(B) + ideal" becomes a span
//! question about shuffle vectors decided by `span_solve`.

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::classical::{classical_report, LieAlgebra, LieElement, Span};
use crate::linalg;
use crate::qfield::RatFunc;
use crate::recipes::{builtin_recipe, classical_limit_expr, eval_bracket_expr, g, br, GeneratorRecipe, RecipeError};
use crate::rootsys::{CartanType, Root, RootSystem};
use crate::shuffle::{combination_equals, integralize, phi, phi_word, shuffle, span_solve, Laurent, ShVec, SpanOutcome};
use crate::uqalg::{content, words_of_content, Mono, NCPoly, SerreIdeal, Uq, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    /// Fail dominates, then inconclusive.
    pub fn combine(self, o: Verdict) -> Verdict {
        use Verdict::*;
        match (self, o) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Pass,
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertKind {
    Ideal,
    Subspace,
    CoidealTerm,
    FlatnessPair,
    IdentitySolution,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub kind: CertKind,
    pub target: String,
    pub coefficients: BTreeMap<String, RatFunc>,
    pub residual_check: bool,
}

#[derive(Debug, Error)]
#[error("{stage}: {msg}")]
pub struct VerifyError {
    pub stage: String,
    pub msg: String,
}

fn stage_err(stage: &str, msg: impl ToString) -> VerifyError {
    VerifyError { stage: stage.into(), msg: msg.to_string() }
}

impl From<RecipeError> for VerifyError {
    fn from(e: RecipeError) -> Self {
        stage_err("recipe", e)
    }
}

/// How the right tensor leg is coordinatized in the coideal check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RightBasis {
    /// Coordinates of the shuffle image.
    Shuffle,
    /// A quotient basis picked greedily from the words of each content,
    /// scanning forward (`false`) or reversed (`true`) lexicographic order.
    Quotient { reversed: bool },
    /// The spanning-route basis of `SerreIdeal::quotient_basis` (cached on disk
    /// when the cache variable is set).
    Spanning,
}

/// Left leg `w` together with its right-leg partner, for failing coideal terms.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessTerm {
    pub left: String,
    pub right: String,
    #[serde(skip)]
    pub left_word: Word,
    #[serde(skip)]
    pub right_poly: NCPoly,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorCoideal {
    pub name: String,
    pub pass: bool,
    pub certificates: Vec<Certificate>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witness: Vec<WitnessTerm>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairOutcome {
    pub i: usize,
    pub j: usize,
    pub names: [String; 2],
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xprime: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub semiclassical: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tier: Option<usize>,
    /// Exponent `l` in `[K, g] = (1 - q^l) K g`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<i64>,
}

const COLUMN_CAP: usize = 600;

/// A recipe evaluated in `U_q`, with the shuffle images of its generators.
pub struct Checker<'a> {
    pub uq: Uq,
    pub recipe: &'a GeneratorRecipe,
    pub gens: Vec<NCPoly>,
    names: Vec<String>,
    phis: Vec<ShVec>,
    contents: Vec<Vec<i64>>,
    ideal: OnceLock<SerreIdeal>,
}

impl<'a> Checker<'a> {
    pub fn new(recipe: &'a GeneratorRecipe) -> Result<Checker<'a>, VerifyError> {
        let rs = recipe.root_system()?;
        let uq = Uq::new(&rs);
        let gens = recipe.evaluate(&uq)?;
        let phis = gens.iter().map(|x| phi(&uq, x)).collect();
        let contents = recipe.generators.iter().map(|g| g.expr.content(uq.rank)).collect();
        let names = recipe.generators.iter().map(|g| g.name.clone()).collect();
        Ok(Checker { uq, recipe, gens, names, phis, contents, ideal: OnceLock::new() })
    }

    /// Index used for the `K`-monomial in pair reports.
    pub fn k_index(&self) -> usize {
        self.gens.len()
    }

    fn label(&self, seq: &[usize]) -> String {
        seq.iter().map(|&k| self.names[k].as_str()).collect::<Vec<_>>().join("*")
    }

    /// Ordered generator sequences of total content `c` with their shuffle
    /// images; `None` once more than `cap` exist.
    fn sequences(&self, c: &[i64], max_len: usize, cap: usize) -> Option<Vec<(Vec<usize>, ShVec)>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        let mut rest = c.to_vec();
        let start: ShVec = phi_word(&self.uq, &[]);
        if self.seq_rec(&mut rest, max_len, cap, &mut cur, &start, &mut out) {
            Some(out)
        } else {
            None
        }
    }

    fn seq_rec(
        &self,
        rest: &mut Vec<i64>,
        max_len: usize,
        cap: usize,
        cur: &mut Vec<usize>,
        acc: &ShVec,
        out: &mut Vec<(Vec<usize>, ShVec)>,
    ) -> bool {
        if rest.iter().all(|&x| x == 0) {
            if !cur.is_empty() {
                out.push((cur.clone(), acc.clone()));
            }
            return out.len() <= cap;
        }
        if cur.len() == max_len {
            return true;
        }
        for k in 0..self.gens.len() {
            let ck = &self.contents[k];
            if ck.iter().zip(rest.iter()).any(|(a, b)| a > b) {
                continue;
            }
            for (r, a) in rest.iter_mut().zip(ck) {
                *r -= a;
            }
            cur.push(k);
            let next = shuffle(&self.uq, acc, &self.phis[k]);
            let ok = self.seq_rec(rest, max_len, cap, cur, &next, out);
            cur.pop();
            for (r, a) in rest.iter_mut().zip(ck) {
                *r += a;
            }
            if !ok {
                return false;
            }
        }
        true
    }

    /// Left-coideal test for one generator.
    pub fn coideal_generator(&self, k: usize, basis: RightBasis) -> GeneratorCoideal {
        let uq = &self.uq;
        let delta = uq.coproduct(&self.gens[k]);
        let total = &self.contents[k];
        // left content -> (left word, right mono) -> coefficient
        let mut groups: BTreeMap<Vec<i64>, BTreeMap<(Word, Mono), RatFunc>> = BTreeMap::new();
        for (tm, c) in &delta.terms {
            debug_assert!(tm.left.kexp.iter().all(|&e| e == 0));
            if tm.left.word.is_empty() {
                continue;
            }
            let u = content(&tm.left.word, uq.rank);
            groups.entry(u).or_default().insert((tm.left.word.clone(), tm.right.clone()), c.clone());
        }
        let mut certificates = Vec::new();
        let mut witness = Vec::new();
        for (u, terms) in &groups {
            let rows = self.left_rows(u, total, terms, basis);
            if rows.is_empty() {
                continue;
            }
            let cols: Vec<(Vec<usize>, ShVec)> = self.sequences(u, usize::MAX, usize::MAX).unwrap_or_default();
            let colv: Vec<ShVec> = cols.iter().map(|(_, v)| v.clone()).collect();
            let targets: Vec<(NCPoly, RatFunc, ShVec)> = rows
                .iter()
                .map(|b| {
                    let (y, f) = integralize(b);
                    let v = phi(uq, &y);
                    (b.clone(), f, v)
                })
                .collect();
            let tv: Vec<ShVec> = targets.iter().map(|t| t.2.clone()).collect();
            let out = span_solve(&colv, &tv);
            let mut failed = false;
            for ((b, f, v), sol) in targets.iter().zip(&out.solutions) {
                match sol {
                    Some(s) => {
                        let residual = combination_equals(&colv, &out.pivots, s, v);
                        let finv = f.inv().expect("nonzero scale");
                        let coefficients = out
                            .pivots
                            .iter()
                            .zip(s)
                            .filter(|(_, c)| !c.is_zero())
                            .map(|(&p, c)| (self.label(&cols[p].0), c * &finv))
                            .collect();
                        certificates.push(Certificate {
                            kind: CertKind::CoidealTerm,
                            target: b.render(),
                            coefficients,
                            residual_check: residual,
                        });
                    }
                    None => failed = true,
                }
            }
            if failed {
                let mut by_left: BTreeMap<Word, NCPoly> = BTreeMap::new();
                for ((w, m), c) in terms {
                    by_left.entry(w.clone()).or_default().add_term(m.clone(), c.clone());
                }
                for (w, right) in by_left {
                    if right.is_zero() {
                        continue;
                    }
                    witness.push(WitnessTerm {
                        left: uq.word(&w).render(),
                        right: right.render(),
                        left_word: w,
                        right_poly: right,
                    });
                }
            }
        }
        let pass = witness.is_empty() && certificates.iter().all(|c| c.residual_check);
        GeneratorCoideal { name: self.names[k].clone(), pass, certificates, witness }
    }

    /// Left coefficients `b_alpha` of one left-content block, one per right
    /// coordinate, deduplicated and with zeros dropped.
    fn left_rows(&self, u: &[i64], total: &[i64], terms: &BTreeMap<(Word, Mono), RatFunc>, basis: RightBasis) -> Vec<NCPoly> {
        let uq = &self.uq;
        let mut rights: Vec<Word> = terms.keys().map(|(_, m)| m.word.clone()).collect();
        rights.sort();
        rights.dedup();
        // right word -> coordinates (label -> coefficient)
        let coords: HashMap<Word, Vec<(Word, RatFunc)>> = match basis {
            RightBasis::Shuffle => rights
                .iter()
                .map(|v| {
                    let p = phi_word(uq, v);
                    let mut c: Vec<(Word, RatFunc)> = p.into_iter().map(|(s, l)| (s, l.to_ratfunc())).collect();
                    c.sort_by(|a, b| a.0.cmp(&b.0));
                    (v.clone(), c)
                })
                .collect(),
            RightBasis::Quotient { .. } | RightBasis::Spanning => {
                let rc: Vec<i64> = total.iter().zip(u).map(|(a, b)| a - b).collect();
                let words = match basis {
                    RightBasis::Spanning => self.ideal.get_or_init(|| uq.serre_relations()).quotient_basis(uq, &rc),
                    RightBasis::Quotient { reversed: true } => words_of_content(&rc).into_iter().rev().collect(),
                    _ => words_of_content(&rc),
                };
                let wcols: Vec<ShVec> = words.iter().map(|w| phi_word(uq, w)).collect();
                let tv: Vec<ShVec> = rights.iter().map(|v| phi_word(uq, v)).collect();
                let out = span_solve(&wcols, &tv);
                rights
                    .iter()
                    .zip(&out.solutions)
                    .map(|(v, s)| {
                        let s = s.as_ref().expect("quotient basis spans");
                        let c = out.pivots.iter().zip(s).map(|(&p, x)| (words[p].clone(), x.clone())).collect();
                        (v.clone(), c)
                    })
                    .collect()
            }
        };
        let mut rows: BTreeMap<Word, NCPoly> = BTreeMap::new();
        for ((w, m), c) in terms {
            for (s, a) in &coords[&m.word] {
                if a.is_zero() {
                    continue;
                }
                rows.entry(s.clone()).or_default().add_term(Mono { kexp: vec![0; uq.rank], word: w.clone() }, c * a);
            }
        }
        let mut out: Vec<NCPoly> = Vec::new();
        for (_, b) in rows {
            if !b.is_zero() && !out.contains(&b) {
                out.push(b);
            }
        }
        out
    }

    /// Trivial coideal entry for the `K`-monomial: `Delta(K) = K (x) K`.
    pub fn coideal_k(&self) -> GeneratorCoideal {
        GeneratorCoideal { name: k_name(&self.recipe.k_monomial), pass: true, certificates: Vec::new(), witness: Vec::new() }
    }

    /// Flatness test for the generator pair `(i, j)`, `i < j`.
    pub fn flatness_pair(&self, i: usize, j: usize, maxdeg: usize, limits: Option<(&LieAlgebra, &[LieElement])>) -> PairOutcome {
        let uq = &self.uq;
        let mut outcome = PairOutcome {
            i,
            j,
            names: [self.names[i].clone(), self.names[j].clone()],
            verdict: Verdict::Inconclusive,
            reason: None,
            xprime: None,
            certificate: None,
            semiclassical: None,
            tier: None,
            l: None,
        };
        let c: Vec<i64> = self.contents[i].iter().zip(&self.contents[j]).map(|(a, b)| a + b).collect();
        let deg: i64 = c.iter().sum();
        let target = {
            let a = shuffle(uq, &self.phis[i], &self.phis[j]);
            let b = shuffle(uq, &self.phis[j], &self.phis[i]);
            sub_sh(&a, &b)
        };
        let cpoly = uq.q_bracket(&self.gens[i], &self.gens[j], 0).render();
        if target.is_empty() {
            outcome.verdict = Verdict::Pass;
            outcome.xprime = Some("0".into());
            outcome.certificate = Some(Certificate {
                kind: CertKind::FlatnessPair,
                target: cpoly,
                coefficients: BTreeMap::new(),
                residual_check: true,
            });
            outcome.semiclassical = limits.map(|(alg, lim)| alg.bracket(&lim[i], &lim[j]).is_zero());
            outcome.tier = Some(0);
            return outcome;
        }
        if deg as usize > maxdeg {
            outcome.reason = Some(format!("commutator degree {deg} exceeds max degree {maxdeg}"));
            return outcome;
        }
        let singles: Vec<usize> = (0..self.gens.len()).filter(|&t| self.contents[t] == c).collect();
        let mut solved_somewhere = false;
        let mut exhaustive = false;
        for tier in 1..=3 {
            let cols: Vec<(Vec<usize>, ShVec)> = match tier {
                1 => {
                    let mut v: Vec<(Vec<usize>, ShVec)> = singles.iter().map(|&t| (vec![t], self.phis[t].clone())).collect();
                    v.push((vec![i, j], shuffle(uq, &self.phis[i], &self.phis[j])));
                    v.push((vec![j, i], shuffle(uq, &self.phis[j], &self.phis[i])));
                    v
                }
                2 => match self.sequences(&c, 2, COLUMN_CAP) {
                    Some(v) => v,
                    None => continue,
                },
                _ => match self.sequences(&c, usize::MAX, COLUMN_CAP) {
                    Some(v) => {
                        exhaustive = true;
                        v
                    }
                    None => break,
                },
            };
            let colv: Vec<ShVec> = cols.iter().map(|x| x.1.clone()).collect();
            let out = span_solve(&colv, std::slice::from_ref(&target));
            let Some(sol) = &out.solutions[0] else { continue };
            solved_somewhere = true;
            let product: Vec<bool> = cols.iter().map(|x| x.0.len() >= 2).collect();
            let cond: Vec<AtOne> = product.iter().map(|&p| if p { AtOne::Vanish } else { AtOne::Regular }).collect();
            let (particular, nullspace) = affine_from_span(&out, sol, cols.len());
            let Some(x) = constrain_at_one(&particular, &nullspace, &cond) else { continue };
            let idx: Vec<usize> = (0..cols.len()).filter(|&k| !x[k].is_zero()).collect();
            let cs: Vec<RatFunc> = idx.iter().map(|&k| x[k].clone()).collect();
            let residual = combination_equals(&colv, &idx, &cs, &target);
            let flat_ok = idx.iter().all(|&k| x[k].is_regular_at_one() && (!product[k] || x[k].vanishes_at_one()));
            let coefficients = idx.iter().map(|&k| (self.label(&cols[k].0), x[k].clone())).collect();
            let mut xp = NCPoly::zero();
            let mut xp_terms = Vec::new();
            let mut classical_rhs = limits.map(|(alg, _)| LieElement::zero(alg.dim));
            for &k in &idx {
                if product[k] {
                    continue;
                }
                let t = cols[k].0[0];
                xp = xp.add(&self.gens[t].scale(&x[k]));
                xp_terms.push(format!("({}) * {}", x[k], self.names[t]));
                if let (Some((_, lim)), Some(acc)) = (limits, classical_rhs.as_mut()) {
                    let v = x[k].eval_at_one().expect("regular");
                    *acc = acc.add(&lim[t].scale(&v));
                }
            }
            outcome.semiclassical = limits.map(|(alg, lim)| alg.bracket(&lim[i], &lim[j]) == classical_rhs.clone().unwrap());
            outcome.xprime = Some(if xp_terms.is_empty() { "0".into() } else { xp_terms.join(" + ") });
            outcome.certificate = Some(Certificate {
                kind: CertKind::FlatnessPair,
                target: cpoly.clone(),
                coefficients,
                residual_check: residual,
            });
            outcome.tier = Some(tier);
            outcome.verdict = if residual && flat_ok { Verdict::Pass } else { Verdict::Fail };
            if outcome.verdict == Verdict::Fail {
                outcome.reason = Some("certificate failed its exact recheck".into());
            }
            return outcome;
        }
        if solved_somewhere {
            outcome.reason = Some(
                "inconclusive (solution space nonempty but q=1 constraints unsatisfied)".into(),
            );
        } else if exhaustive {
            outcome.verdict = Verdict::Fail;
            outcome.reason = Some("fail (no solution): commutator not in the span of generator products plus the ideal".into());
        } else {
            outcome.reason = Some(format!("more than {COLUMN_CAP} generator products of this content"));
        }
        outcome
    }

    /// `[K, g_t] = (1 - q^l) K g_t`, checked by direct multiplication.
    pub fn flatness_k_pair(&self, t: usize, limits: Option<(&LieAlgebra, &[LieElement])>) -> PairOutcome {
        let uq = &self.uq;
        let kexp = &self.recipe.k_monomial;
        let l = -uq.pair(kexp, &self.contents[t]);
        let kg = uq.mul(&uq.k(kexp), &self.gens[t]);
        let lhs = uq.q_bracket(&uq.k(kexp), &self.gens[t], 0);
        let factor = &RatFunc::one() - &RatFunc::q_pow(l);
        let ok = lhs == kg.scale(&factor);
        let mut coefficients = BTreeMap::new();
        if !factor.is_zero() {
            coefficients.insert(format!("{}*{}", k_name(kexp), self.names[t]), factor);
        }
        let semiclassical = limits.map(|(alg, lim)| {
            let b = alg.bracket(&alg.cartan(kexp), &lim[t]);
            Span::new(&[lim[t].clone()], alg.dim).contains(&b)
        });
        PairOutcome {
            i: t,
            j: self.k_index(),
            names: [self.names[t].clone(), k_name(kexp)],
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
            reason: None,
            xprime: Some("0".into()),
            certificate: Some(Certificate {
                kind: CertKind::FlatnessPair,
                target: lhs.render(),
                coefficients,
                residual_check: ok,
            }),
            semiclassical,
            tier: None,
            l: Some(l),
        }
    }
}

fn k_name(kexp: &[i64]) -> String {
    let m = Mono { kexp: kexp.to_vec(), word: Vec::new() };
    m.render()
}

fn sub_sh(a: &ShVec, b: &ShVec) -> ShVec {
    let mut out = a.clone();
    for (w, c) in b {
        let e = out.entry(w.clone()).or_insert_with(Laurent::zero);
        e.add_scaled(c, -1);
        if e.is_zero() {
            out.remove(w);
        }
    }
    out
}

/// Full coefficient vectors for the affine solution set of a span solve.
fn affine_from_span(out: &SpanOutcome, sol: &[RatFunc], n: usize) -> (Vec<RatFunc>, Vec<Vec<RatFunc>>) {
    let mut particular = vec![RatFunc::zero(); n];
    for (&p, s) in out.pivots.iter().zip(sol) {
        particular[p] = s.clone();
    }
    let nullspace = out
        .relations
        .iter()
        .map(|(f, rel)| {
            let mut v = vec![RatFunc::zero(); n];
            v[*f] = RatFunc::one();
            for (&p, r) in out.pivots.iter().zip(rel) {
                v[p] = -r.clone();
            }
            v
        })
        .collect();
    (particular, nullspace)
}

/// What a coordinate must do at `q = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AtOne {
    Free,
    Regular,
    Vanish,
}

/// Pick `lambda_f`, Laurent polynomials in `t = q - 1`, so that
/// `particular + sum lambda_f nullspace_f` meets the `AtOne` condition of every
/// coordinate. Only finitely many Taylor coefficients at `q = 1` matter, so the
/// search is a linear system over `Q` in the coefficients of the `lambda_f`.
pub fn constrain_at_one(particular: &[RatFunc], nullspace: &[Vec<RatFunc>], cond: &[AtOne]) -> Option<Vec<RatFunc>> {
    let (particular, nullspace) = reduce_affine(particular, nullspace, cond);
    let (particular, nullspace) = (&particular[..], &nullspace[..]);
    let top = |k: usize| match cond[k] {
        AtOne::Free => None,
        AtOne::Regular => Some(-1i64),
        AtOne::Vanish => Some(0),
    };
    // expansions of every nullspace entry far enough to see all shifts
    let reach = LAMBDA_POLE + 1;
    let mut ns: Vec<Vec<(i64, Vec<BigRational>)>> = Vec::new();
    let mut degree = 0i64;
    for v in nullspace {
        let mut col = Vec::new();
        for (k, x) in v.iter().enumerate() {
            let e = match top(k) {
                Some(t) if !x.is_zero() => x.expand_at_one(t + reach),
                _ => (0, Vec::new()),
            };
            if let (Some(t), false) = (top(k), x.is_zero()) {
                degree = degree.max(t - e.0);
            }
            col.push(e);
        }
        ns.push(col);
    }
    let shifts: Vec<i64> = (-LAMBDA_POLE..=degree.max(0)).collect();
    let unknowns: Vec<(usize, i64)> = (0..nullspace.len()).flat_map(|f| shifts.iter().map(move |&d| (f, d))).collect();
    let at = |x: &(i64, Vec<BigRational>), e: i64| -> BigRational {
        if e < x.0 {
            BigRational::zero()
        } else {
            x.1.get((e - x.0) as usize).cloned().unwrap_or_else(BigRational::zero)
        }
    };
    let mut eq_cols: Vec<Vec<BigRational>> = vec![Vec::new(); unknowns.len()];
    let mut rhs: Vec<BigRational> = Vec::new();
    for k in 0..particular.len() {
        let Some(t) = top(k) else { continue };
        let p = particular[k].expand_at_one(t);
        let low = unknowns
            .iter()
            .filter(|(f, _)| !nullspace[*f][k].is_zero())
            .map(|(f, d)| ns[*f][k].0 + d)
            .chain([p.0])
            .min()
            .unwrap();
        for e in low..=t {
            rhs.push(-at(&p, e));
            for (u, (f, d)) in unknowns.iter().enumerate() {
                let c = if nullspace[*f][k].is_zero() { BigRational::zero() } else { at(&ns[*f][k], e - d) };
                eq_cols[u].push(c);
            }
        }
    }
    let lambda: Vec<BigRational> = if unknowns.is_empty() {
        if rhs.iter().any(|x| !x.is_zero()) {
            return None;
        }
        Vec::new()
    } else {
        linalg::solve(&eq_cols, &rhs)?.particular
    };
    let t_pow = |d: i64| {
        let t = &RatFunc::q_pow(1) - &RatFunc::one();
        t.pow(d).expect("q - 1 is invertible")
    };
    let mut x = particular.to_vec();
    for (l, &(f, d)) in lambda.iter().zip(&unknowns) {
        if l.is_zero() {
            continue;
        }
        let lr = &RatFunc::from_rational(l) * &t_pow(d);
        for (xk, nk) in x.iter_mut().zip(&nullspace[f]) {
            *xk = &*xk + &(&lr * nk);
        }
    }
    Some(x)
}

/// Largest pole order at `q = 1` allowed in a multiplier `lambda_f`.
const LAMBDA_POLE: i64 = 2;

/// Canonical form of the affine set: the nullspace in reduced echelon form with
/// constrained coordinates first, and the particular solution reduced to zero
/// on its pivots. Directions that only move free coordinates are dropped.
fn reduce_affine(particular: &[RatFunc], nullspace: &[Vec<RatFunc>], cond: &[AtOne]) -> (Vec<RatFunc>, Vec<Vec<RatFunc>>) {
    if nullspace.is_empty() {
        return (particular.to_vec(), Vec::new());
    }
    let order: Vec<usize> = (0..cond.len()).filter(|&k| cond[k] != AtOne::Free).chain((0..cond.len()).filter(|&k| cond[k] == AtOne::Free)).collect();
    let constrained = order.iter().filter(|&&k| cond[k] != AtOne::Free).count();
    let mut rows: Vec<Vec<RatFunc>> = nullspace.iter().map(|v| order.iter().map(|&k| v[k].clone()).collect()).collect();
    let pivots = linalg::rref(&mut rows);
    let mut p: Vec<RatFunc> = order.iter().map(|&k| particular[k].clone()).collect();
    let mut kept = Vec::new();
    for (r, &c) in pivots.iter().enumerate() {
        if c >= constrained {
            continue;
        }
        let f = p[c].clone();
        if !f.is_zero() {
            for (x, y) in p.iter_mut().zip(&rows[r]) {
                *x = &*x - &(&f * y);
            }
        }
        kept.push(r);
    }
    let unpermute = |v: &[RatFunc]| {
        let mut out = vec![RatFunc::zero(); v.len()];
        for (pos, &k) in order.iter().enumerate() {
            out[k] = v[pos].clone();
        }
        out
    };
    (unpermute(&p), kept.iter().map(|&r| unpermute(&rows[r])).collect())
}

// ---------------------------------------------------------------- classical limit

#[derive(Clone, Debug, Serialize)]
pub struct LiftReport {
    pub pass: bool,
    /// Generators whose limit is zero or leaves `h`.
    pub outside: Vec<String>,
    /// Whether the limits and the Cartan part span `h`.
    pub spans: bool,
}

/// Classical limits of the recipe against the coisotropic subalgebra of `beta`.
pub fn check_classical_limit(alg: &LieAlgebra, r: &GeneratorRecipe) -> Result<LiftReport, VerifyError> {
    let beta = r.beta_root(&alg.rs)?;
    let pi = alg.r_matrix();
    let h = alg.coisotropic_generators(&alg.ad_bivector(&alg.e_root(&beta), &pi));
    let span = Span::new(&h, alg.dim);
    let mut limits = Vec::new();
    let mut outside = Vec::new();
    for g in &r.generators {
        let x = classical_limit_expr(&g.expr, alg);
        if x.is_zero() || !span.contains(&x) {
            outside.push(g.name.clone());
        }
        limits.push(x);
    }
    let cartan = alg.cartan(&r.k_monomial);
    if !span.contains(&cartan) {
        outside.push(k_name(&r.k_monomial));
    }
    limits.push(cartan);
    let spans = Span::new(&limits, alg.dim).dim() == span.dim() && h.len() == r.generators.len() + 1;
    Ok(LiftReport { pass: outside.is_empty() && spans, outside, spans })
}

// ---------------------------------------------------------------- identities

/// A target identity and its templates.
pub struct Golden {
    pub name: &'static str,
    pub case: &'static str,
    pub target: NCPoly,
    pub target_label: String,
    pub templates: Vec<(String, NCPoly)>,
    /// `u [E_a,E_b] v` for non-adjacent `a, b`: the identities hold only once
    /// such letters commute. Their coefficients are not reported.
    pub commutators: Vec<(String, NCPoly)>,
    pub paper: Option<Vec<RatFunc>>,
    /// Conditions at `q = 1` on the coefficients, when the identity carries any.
    pub at_one: Option<Vec<AtOne>>,
}

pub const GOLDEN_NAMES: [&str; 4] = ["ijkj", "eiej-ekej", "so-odd-5term", "g2-e2t"];

fn rf(s: &str) -> RatFunc {
    RatFunc::parse(s).expect("well-formed constant")
}

fn uq_of(s: &str) -> Uq {
    Uq::new(&RootSystem::build(s.parse::<CartanType>().unwrap()).unwrap())
}

pub fn golden(name: &str) -> Option<Golden> {
    match name {
        "ijkj" | "eiej-ekej" => {
            let uq = uq_of("A3");
            let (e1, e2, e3) = (uq.e(0), uq.e(1), uq.e(2));
            let ri = uq.serre_relation(1, 0);
            let rk = uq.serre_relation(1, 2);
            let templates = vec![
                ("R_i E_k".to_string(), uq.mul(&ri, &e3)),
                ("E_k R_i".to_string(), uq.mul(&e3, &ri)),
                ("E_i R_k".to_string(), uq.mul(&e1, &rk)),
                ("R_k E_i".to_string(), uq.mul(&rk, &e1)),
            ];
            let e12 = uq.q_bracket(&e1, &e2, 1);
            let (target, label, paper) = if name == "ijkj" {
                (
                    uq.q_bracket(&uq.q_bracket(&e12, &e3, 1), &e2, 0),
                    "[[[E_i,E_j]_q,E_k]_q,E_j]",
                    ["-1/(q+q^-1)", "q^2/(q+q^-1)", "1/(q+q^-1)", "-q^2/(q+q^-1)"],
                )
            } else {
                (
                    uq.q_bracket(&e12, &uq.q_bracket(&e3, &e2, 1), 0),
                    "[[E_i,E_j]_q,[E_k,E_j]_q]",
                    ["-q^2/(q+q^-1)", "1/(q+q^-1)", "-1/(q+q^-1)", "q^2/(q+q^-1)"],
                )
            };
            Some(Golden {
                name: if name == "ijkj" { "ijkj" } else { "eiej-ekej" },
                case: "A3, (i,j,k) = (1,2,3)",
                target,
                target_label: label.into(),
                commutators: commutator_templates(&uq, &[1, 2, 1]),
                templates,
                paper: Some(paper.iter().map(|s| rf(s)).collect()),
                at_one: None,
            })
        }
        "so-odd-5term" => {
            let uq = uq_of("B3");
            let a = uq.e(2);
            let b = uq.e(1);
            let c = uq.q_bracket(&uq.e(1), &uq.e(0), SO_ODD_C_POWER);
            let aab = uq.q_bracket(&a, &uq.q_bracket(&a, &b, 2), 0);
            let aac = uq.q_bracket(&a, &uq.q_bracket(&a, &c, 2), 0);
            let target = uq.q_bracket(&aab, &aac, -2);
            let rb = uq.q_bracket(&a, &aab, -2);
            let rc = uq.q_bracket(&a, &aac, -2);
            let rbac = uq.q_bracket(&b, &uq.q_bracket(&a, &c, 2), 0);
            let m = |xs: &[&NCPoly]| uq.mul_all(xs);
            let templates = vec![
                ("R_B A C", m(&[&rb, &a, &c])),
                ("R_B C A", m(&[&rb, &c, &a])),
                ("A R_B C", m(&[&a, &rb, &c])),
                ("B R_C A", m(&[&b, &rc, &a])),
                ("B A R_C", m(&[&b, &a, &rc])),
                ("A B R_C", m(&[&a, &b, &rc])),
                ("R_C A B", m(&[&rc, &a, &b])),
                ("R_C B A", m(&[&rc, &b, &a])),
                ("A R_C B", m(&[&a, &rc, &b])),
                ("C R_B A", m(&[&c, &rb, &a])),
                ("C A R_B", m(&[&c, &a, &rb])),
                ("A C R_B", m(&[&a, &c, &rb])),
                ("R_BAC A A A", m(&[&rbac, &a, &a, &a])),
                ("A R_BAC A A", m(&[&a, &rbac, &a, &a])),
                ("A A R_BAC A", m(&[&a, &a, &rbac, &a])),
                ("A A A R_BAC", m(&[&a, &a, &a, &rbac])),
            ];
            let paper = [
                "0",
                "-1/(q^2+q^4+1)",
                "q^2/(q^2+q^4+1)",
                "(q^4+q^2)/(q^2+q^4+1)",
                "q^2",
                "-(q^6+2*q^4+q^2+1)/(q^2+q^4+1)",
                "1",
                "-(q^6+q^4+2*q^2+1)/(q^2+q^4+1)",
                "(q^4+q^2)/(q^2+q^4+1)",
                "q^4/(q^2+q^4+1)",
                "0",
                "-q^6/(q^2+q^4+1)",
                "-1",
                "(1+q^2+q^4)/q^2",
                "-(1+q^2+q^4)/q^2",
                "1",
            ];
            Some(Golden {
                name: "so-odd-5term",
                case: "B3, A = E3, B = E2, C = [E2,E1]_q^2",
                target,
                target_label: "[[A,[A,B]_q^2],[A,[A,C]_q^2]]_q^-2".into(),
                templates: templates.into_iter().map(|(s, p)| (s.to_string(), p)).collect(),
                commutators: commutator_templates(&uq, &[1, 3, 4]),
                paper: Some(paper.iter().map(|s| rf(s)).collect()),
                at_one: None,
            })
        }
        "g2-e2t" => {
            let uq = uq_of("G2");
            let e1 = uq.e(0);
            let e2 = uq.e(1);
            let x = eval_bracket_expr(&br(&g(2), &g(1), 3), &uq).unwrap();
            let y = uq.q_bracket(&x, &e1, 1);
            let z = uq.q_bracket(&y, &e1, -1);
            let t = uq.q_bracket(&z, &e2, 0);
            let r2 = uq.q_bracket(&e2, &x, -3);
            let target = uq.q_bracket(&e2, &t, 0);
            let mut templates: Vec<(String, NCPoly, bool)> = Vec::new();
            for w in words_of_content(&[2, 1]) {
                for cut in 0..=3 {
                    let (l, r) = w.split_at(cut);
                    let name = format!("{} R_2 {}", word_name(l), word_name(r)).trim().to_string();
                    templates.push((name, uq.mul_all(&[&uq.word(l), &r2, &uq.word(r)]), false));
                }
            }
            let named = [("E2", &e2), ("X", &x), ("Y", &y), ("Z", &z), ("T", &t)];
            let prod = |idx: &[usize]| -> (String, NCPoly, bool) {
                let label = idx.iter().map(|&k| named[k].0).collect::<Vec<_>>().join(" ");
                let xs: Vec<&NCPoly> = idx.iter().map(|&k| named[k].1).collect();
                (label, uq.mul_all(&xs), true)
            };
            for idx in [[0usize, 4].as_slice(), &[4, 0], &[0, 0, 3], &[0, 3, 0], &[3, 0, 0]] {
                templates.push(prod(idx));
            }
            for idx in [[0usize, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
                templates.push(prod(&idx));
            }
            templates.push(prod(&[1, 1, 1]));
            Some(Golden {
                name: "g2-e2t",
                case: "G2, T = [[[[E2,E1]_q^3,E1]_q,E1]_q^-1,E2]",
                target,
                target_label: "[E2,T]".into(),
                at_one: Some(templates.iter().map(|t| if t.2 { AtOne::Vanish } else { AtOne::Free }).collect()),
                templates: templates.into_iter().map(|(a, b, _)| (a, b)).collect(),
                commutators: Vec::new(),
                paper: None,
            })
        }
        _ => None,
    }
}

/// Power on `C = [E2,E1]_{q^k}` in the odd orthogonal identity; the printed
/// form has a plain bracket.
pub const SO_ODD_C_POWER: i64 = 2;

fn word_name(w: &[u8]) -> String {
    w.iter().map(|l| format!("E{}", l + 1)).collect::<Vec<_>>().join(" ")
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub name: String,
    pub case: String,
    pub target: String,
    pub solvable: bool,
    pub equations: usize,
    pub unknowns: usize,
    pub nullspace_dim: usize,
    /// Template label -> coefficient of one solution.
    pub solution: Vec<(String, RatFunc)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub paper_in_solution_set: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constrained: Option<bool>,
    pub certificate: Option<Certificate>,
}

/// Every `u [E_a,E_b] v` of total content `c` with `a_ab = 0`.
pub fn commutator_templates(uq: &Uq, c: &[i64]) -> Vec<(String, NCPoly)> {
    let mut out = Vec::new();
    for a in 0..uq.rank {
        for b in a + 1..uq.rank {
            if uq.rs.cartan_matrix[a][b] != 0 || c[a] < 1 || c[b] < 1 {
                continue;
            }
            let mut rest = c.to_vec();
            rest[a] -= 1;
            rest[b] -= 1;
            let com = uq.q_bracket(&uq.e(a), &uq.e(b), 0);
            for w in words_of_content(&rest) {
                for cut in 0..=w.len() {
                    let (l, r) = w.split_at(cut);
                    let label = format!("{} [E{},E{}] {}", word_name(l), a + 1, b + 1, word_name(r)).trim().to_string();
                    out.push((label, uq.mul_all(&[&uq.word(l), &com, &uq.word(r)])));
                }
            }
        }
    }
    out
}

/// Solve `target = sum c_t template_t` in the free algebra, modulo the
/// golden's commutator templates.
pub fn solve_golden(gd: &Golden) -> IdentityReport {
    let n = gd.templates.len();
    let polys: Vec<NCPoly> = gd.templates.iter().chain(&gd.commutators).map(|t| t.1.clone()).collect();
    let sol = crate::uqalg::solve_identity(&gd.target, &polys);
    let mut monos: Vec<&Mono> = gd.target.terms.keys().chain(polys.iter().flat_map(|p| p.terms.keys())).collect();
    monos.sort();
    monos.dedup();
    let mut report = IdentityReport {
        name: gd.name.into(),
        case: gd.case.into(),
        target: gd.target_label.clone(),
        solvable: sol.is_some(),
        equations: monos.len(),
        unknowns: n,
        nullspace_dim: 0,
        solution: Vec::new(),
        paper_in_solution_set: None,
        constrained: None,
        certificate: None,
    };
    let Some(s) = sol else { return report };
    // dimension of the solution set projected to the reported templates
    let proj: Vec<Vec<RatFunc>> = s.nullspace.iter().map(|v| v[..n].to_vec()).filter(|v| v.iter().any(|x| !x.is_zero())).collect();
    report.nullspace_dim = if proj.is_empty() { 0 } else { linalg::rank(&proj) };
    let commutators: Vec<NCPoly> = gd.commutators.iter().map(|t| t.1.clone()).collect();
    // completes main coefficients to a full solution, if one exists
    let complete = |main: &[RatFunc]| -> Option<Vec<RatFunc>> {
        let mut rest = gd.target.clone();
        for (c, p) in main.iter().zip(&polys) {
            rest = rest.sub(&p.scale(c));
        }
        let tail = if commutators.is_empty() {
            if rest.is_zero() { Vec::new() } else { return None }
        } else {
            crate::uqalg::solve_identity(&rest, &commutators)?.particular
        };
        Some(main.iter().cloned().chain(tail).collect())
    };
    report.paper_in_solution_set = gd.paper.as_ref().map(|p| complete(p).is_some());
    let chosen = match (&gd.at_one, &gd.paper) {
        (Some(cond), _) => {
            let mut cond = cond.clone();
            cond.resize(polys.len(), AtOne::Free);
            let c = constrain_at_one(&s.particular, &s.nullspace, &cond);
            report.constrained = Some(c.is_some());
            c.unwrap_or_else(|| s.particular.clone())
        }
        (None, Some(p)) if report.paper_in_solution_set == Some(true) => complete(p).unwrap(),
        _ => s.particular.clone(),
    };
    let mut recon = NCPoly::zero();
    for (c, p) in chosen.iter().zip(&polys) {
        recon = recon.add(&p.scale(c));
    }
    report.solution = gd.templates.iter().zip(&chosen).map(|(t, c)| (t.0.clone(), c.clone())).collect();
    report.certificate = Some(Certificate {
        kind: CertKind::IdentitySolution,
        target: gd.target_label.clone(),
        coefficients: report.solution.iter().filter(|(_, c)| !c.is_zero()).cloned().collect(),
        residual_check: recon == gd.target,
    });
    report
}

// ---------------------------------------------------------------- Astuce

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AstuceOutcome {
    Holds,
    HypothesisFailed,
    Violated,
}

pub fn in_ideal(uq: &Uq, x: &NCPoly) -> bool {
    phi(uq, &integralize(x).0).is_empty()
}

/// If `[a,b]_{q^pa}` and `[a,c]_{q^pb}` lie in the ideal then so does
/// `[a,[b,c]_{q^pc}]_{q^(pa+pb)}`; with `mirrored` the brackets are taken
/// with `a` on the right.
pub fn check_lemma_astuce(uq: &Uq, a: &NCPoly, b: &NCPoly, c: &NCPoly, pa: i64, pb: i64, pc: i64, mirrored: bool) -> AstuceOutcome {
    let bc = uq.q_bracket(b, c, pc);
    let (h1, h2, concl) = if mirrored {
        (uq.q_bracket(b, a, pa), uq.q_bracket(c, a, pb), uq.q_bracket(&bc, a, pa + pb))
    } else {
        (uq.q_bracket(a, b, pa), uq.q_bracket(a, c, pb), uq.q_bracket(a, &bc, pa + pb))
    };
    if !in_ideal(uq, &h1) || !in_ideal(uq, &h2) {
        return AstuceOutcome::HypothesisFailed;
    }
    if in_ideal(uq, &concl) {
        AstuceOutcome::Holds
    } else {
        AstuceOutcome::Violated
    }
}

// ---------------------------------------------------------------- pipeline

#[derive(Clone, Debug, Serialize)]
pub struct CaseId {
    #[serde(rename = "type")]
    pub ty: String,
    pub rank: usize,
    pub beta: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassicalSummary {
    pub coisotropic: bool,
    pub dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorOut {
    pub name: String,
    pub expr: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RecipeSummary {
    pub generators: Vec<GeneratorOut>,
    pub k_monomial: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub power_assignment: Option<String>,
    pub degree: usize,
    pub classical_limit: LiftReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoidealSection {
    pub pass: bool,
    pub per_generator: Vec<GeneratorCoideal>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlatnessSection {
    pub verdict: Verdict,
    pub max_degree: usize,
    pub per_pair: Vec<PairOutcome>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub case: CaseId,
    pub admissible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classical: Option<ClassicalSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recipe: Option<RecipeSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coideal: Option<CoidealSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flatness: Option<FlatnessSection>,
    pub verdict: Verdict,
    /// Stage that decided a non-pass verdict.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stage: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Bound on generator-product degree; defaults to twice the recipe degree.
    pub max_degree: Option<usize>,
    pub timings: bool,
    pub right_basis: RightBasis,
    pub skip_flatness: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { max_degree: None, timings: true, right_basis: RightBasis::Shuffle, skip_flatness: false }
    }
}

pub fn check_left_coideal(ch: &Checker, basis: RightBasis) -> CoidealSection {
    let mut per_generator: Vec<GeneratorCoideal> =
        (0..ch.gens.len()).into_par_iter().map(|k| ch.coideal_generator(k, basis)).collect();
    per_generator.push(ch.coideal_k());
    CoidealSection { pass: per_generator.iter().all(|g| g.pass), per_generator }
}

pub fn check_flatness(ch: &Checker, maxdeg: usize, limits: Option<(&LieAlgebra, &[LieElement])>) -> FlatnessSection {
    let n = ch.gens.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut per_pair: Vec<PairOutcome> = pairs.par_iter().map(|&(i, j)| ch.flatness_pair(i, j, maxdeg, limits)).collect();
    per_pair.extend((0..n).map(|t| ch.flatness_k_pair(t, limits)));
    let verdict = per_pair.iter().fold(Verdict::Pass, |v, p| v.combine(p.verdict));
    FlatnessSection { verdict, max_degree: maxdeg, per_pair }
}

/// Admissibility, classical coisotropy, recipe, classical limit, coideal, flatness.
pub fn run_full_verification(ty: CartanType, beta: &str, recipe: Option<&GeneratorRecipe>, opts: &VerifyOptions) -> Result<VerificationReport, VerifyError> {
    let mut timings = BTreeMap::new();
    // no clock at all without timings: wasm32 has no Instant
    let mut clock = opts.timings.then(Instant::now);
    let mut lap = |k: &str, timings: &mut BTreeMap<String, f64>| {
        if let Some(c) = clock.as_mut() {
            timings.insert(k.to_string(), c.elapsed().as_secs_f64());
            *c = Instant::now();
        }
    };
    let rs = RootSystem::build(ty).map_err(|e| stage_err("rootsys", e))?;
    let root: Root = rs.parse_root(beta).map_err(|e| stage_err("rootsys", e))?;
    let case = CaseId { ty: ty.series.letter().to_string(), rank: rs.rank(), beta: rs.format_root(&root) };
    let mut report = VerificationReport {
        case,
        admissible: false,
        classical: None,
        recipe: None,
        coideal: None,
        flatness: None,
        verdict: Verdict::Fail,
        stage: None,
        message: None,
        timings: None,
    };
    let finish = |mut r: VerificationReport, timings: BTreeMap<String, f64>| {
        if opts.timings {
            r.timings = Some(timings);
        }
        r
    };
    lap("admissibility", &mut timings);
    if rs.admissible_positive_roots().is_empty() {
        report.stage = Some("admissibility".into());
        report.message = Some(format!("{ty} has no admissible roots"));
        return Ok(finish(report, timings));
    }
    report.admissible = rs.is_admissible(&root);
    if !report.admissible {
        report.stage = Some("admissibility".into());
        report.message = Some(format!("{} is not admissible: some root string has three consecutive values", report.case.beta));
        return Ok(finish(report, timings));
    }
    let alg = LieAlgebra::build(&rs).map_err(|e| stage_err("classical", e))?;
    let cr = classical_report(&alg, &root);
    report.classical = Some(ClassicalSummary { coisotropic: cr.checks.closure && cr.checks.coideal, dim: cr.generators.len() });
    lap("classical", &mut timings);
    if !(cr.checks.closure && cr.checks.coideal) {
        report.stage = Some("classical".into());
        report.message = cr.witness.clone();
        return Ok(finish(report, timings));
    }
    let owned;
    let recipe = match recipe {
        Some(r) => r,
        None => {
            owned = builtin_recipe(ty, &root)?;
            &owned
        }
    };
    if recipe.cartan_type()? != ty || recipe.beta_root(&rs)?.simple_decomp != root.simple_decomp {
        return Err(stage_err("recipe", "recipe case does not match the requested type and root"));
    }
    let degree = recipe.max_degree();
    let maxdeg = opts.max_degree.unwrap_or(2 * degree);
    if maxdeg < degree {
        return Err(stage_err("verify", format!("max degree {maxdeg} is below the recipe degree {degree}")));
    }
    let lift = check_classical_limit(&alg, recipe)?;
    report.recipe = Some(RecipeSummary {
        generators: recipe.generators.iter().map(|g| GeneratorOut { name: g.name.clone(), expr: g.expr.to_string() }).collect(),
        k_monomial: recipe.k_monomial.clone(),
        power_assignment: recipe.power_assignment.clone(),
        degree,
        classical_limit: lift.clone(),
    });
    lap("classical_limit", &mut timings);
    if !lift.pass {
        report.stage = Some("classical-limit".into());
        report.message = Some("recipe does not lift the classical generators".into());
        return Ok(finish(report, timings));
    }
    let ch = Checker::new(recipe)?;
    let coideal = check_left_coideal(&ch, opts.right_basis);
    lap("coideal", &mut timings);
    let mut verdict = if coideal.pass { Verdict::Pass } else { Verdict::Fail };
    if !coideal.pass {
        report.stage = Some("coideal".into());
    }
    report.coideal = Some(coideal);
    if !opts.skip_flatness {
        let limits: Vec<LieElement> = recipe.generators.iter().map(|g| classical_limit_expr(&g.expr, &alg)).collect();
        let flat = check_flatness(&ch, maxdeg, Some((&alg, &limits)));
        lap("flatness", &mut timings);
        if flat.per_pair.iter().any(|p| p.semiclassical == Some(false)) {
            verdict = Verdict::Fail;
            report.message = Some("a flatness certificate disagrees with the classical bracket at q = 1".into());
        }
        if flat.verdict != Verdict::Pass && report.stage.is_none() {
            report.stage = Some("flatness".into());
        }
        verdict = verdict.combine(flat.verdict);
        report.flatness = Some(flat);
    }
    report.verdict = verdict;
    Ok(finish(report, timings))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn constrain_simple() {
        // x = 1/(q-1) + lambda * 1/(q-1) must be regular: lambda = -1
        let p = vec![rf("1/(q-1)")];
        let n = vec![vec![rf("1/(q-1)")]];
        let x = constrain_at_one(&p, &n, &[AtOne::Regular]).unwrap();
        assert!(x[0].is_zero());
        // x = q must vanish at 1 with no freedom
        assert!(constrain_at_one(&[rf("q")], &[], &[AtOne::Vanish]).is_none());
        assert!(constrain_at_one(&[rf("q-1")], &[], &[AtOne::Vanish]).is_some());
        assert!(constrain_at_one(&[rf("1/(q-1)")], &[], &[AtOne::Free]).is_some());
    }

    #[test]
    fn expansion_at_one() {
        let (low, c) = rf("1/(q-1)").expand_at_one(1);
        assert_eq!(low, -1);
        assert_eq!(c.len(), 3);
        assert!(c[0].is_one() && c[1].is_zero());
        let (low, c) = rf("q^-1").expand_at_one(2);
        assert_eq!(low, 0);
        let v: Vec<i64> = c.iter().map(|x| x.to_integer().try_into().unwrap()).collect();
        assert_eq!(v, [1, -1, 1]);
    }
}
