//! Matrix-tensor recomputation of the classical constructions, independent of the
//! structure-constant tables.

use num_bigint::BigInt;
use num_rational::BigRational as Q;
use num_traits::{One, Zero};
use qcoiso::classical::{transpose, Bivector, LieAlgebra, LieElement, Mat};
use qcoiso::linalg;
use qcoiso::rootsys::{CartanType, RootSystem, Series};

fn qi(a: i64) -> Q {
    Q::from_integer(BigInt::from(a))
}

/// Killing form of a classical matrix algebra as a multiple of the trace form.
fn trace_factor(ty: CartanType, size: usize) -> i64 {
    match ty.series {
        Series::A => 2 * size as i64,
        Series::C => size as i64 + 2,
        _ => size as i64 - 2,
    }
}

fn tr_mul(a: &Mat, b: &Mat) -> Q {
    let n = a.len();
    let mut t = Q::zero();
    for i in 0..n {
        for k in 0..n {
            t += &a[i][k] * &b[k][i];
        }
    }
    t
}

type Tensor = Vec<Q>; // index ((a*n+b)*n+c)*n+d

fn tensor_of(n: usize, pairs: &[(Q, Mat, Mat)]) -> Tensor {
    let mut t = vec![Q::zero(); n * n * n * n];
    for (c, x, y) in pairs {
        for a in 0..n {
            for b in 0..n {
                for cc in 0..n {
                    for d in 0..n {
                        let v = &x[a][b] * &y[cc][d] - &y[a][b] * &x[cc][d];
                        if !v.is_zero() {
                            t[((a * n + b) * n + cc) * n + d] += c * v;
                        }
                    }
                }
            }
        }
    }
    t
}

fn ad_tensor(n: usize, x: &Mat, t: &Tensor) -> Tensor {
    let idx = |a: usize, b: usize, c: usize, d: usize| ((a * n + b) * n + c) * n + d;
    let mut out = vec![Q::zero(); t.len()];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let mut v = Q::zero();
                    for k in 0..n {
                        v += &x[a][k] * &t[idx(k, b, c, d)] - &t[idx(a, k, c, d)] * &x[k][b];
                        v += &x[c][k] * &t[idx(a, b, k, d)] - &t[idx(a, b, c, k)] * &x[k][d];
                    }
                    out[idx(a, b, c, d)] = v;
                }
            }
        }
    }
    out
}

fn bivector_tensor(alg: &LieAlgebra, b: &Bivector) -> Tensor {
    let n = alg.matrix_size.unwrap();
    let pairs: Vec<(Q, Mat, Mat)> = b
        .terms
        .iter()
        .map(|(&(i, j), c)| (c.clone(), alg.to_matrix(&alg.basis(i)).unwrap(), alg.to_matrix(&alg.basis(j)).unwrap()))
        .collect();
    tensor_of(n, &pairs)
}

fn algebra(s: &str) -> LieAlgebra {
    let rs = RootSystem::build(s.parse::<CartanType>().unwrap()).unwrap();
    LieAlgebra::build(&rs).unwrap()
}

#[test]
fn r_matrix_and_brackets_match_tensor_route() {
    for s in ["A3", "B2", "B3", "C2", "C3", "D4"] {
        let alg = algebra(s);
        let n = alg.matrix_size.unwrap();
        let k = trace_factor(alg.rs.ty, n);
        let mut pairs = Vec::new();
        for r in &alg.rs.positive_roots {
            let e = alg.to_matrix(&alg.e_root(r)).unwrap();
            let f = alg.to_matrix(&alg.f_root(r)).unwrap();
            let lam = Q::one() / (tr_mul(&e, &f) * qi(k));
            assert_eq!(lam, alg.killing_lambda(r).unwrap(), "{s}");
            pairs.push((lam, e, f));
        }
        let pi_t = tensor_of(n, &pairs);
        let pi = alg.r_matrix();
        assert_eq!(bivector_tensor(&alg, &pi), pi_t, "{s}");
        for r in &alg.rs.positive_roots {
            let x = alg.to_matrix(&alg.e_root(r)).unwrap();
            let once = ad_tensor(n, &x, &pi_t);
            let lib = alg.ad_bivector(&alg.e_root(r), &pi);
            assert_eq!(bivector_tensor(&alg, &lib), once, "{s} {}", alg.rs.format_root(r));
            let twice = ad_tensor(n, &x, &once);
            let me = twice.iter().all(|v| v.is_zero());
            assert_eq!(me, alg.check_master_equation(&alg.e_root(r), &pi), "{s} {}", alg.rs.format_root(r));
        }
    }
}

/// Brute-force `h ^ g` membership: span all `g_k ^ b_j` and compare ranks.
fn brute_coideal(alg: &LieAlgebra, pi: &Bivector, gens: &[LieElement]) -> bool {
    let d = alg.dim;
    let key = |i: usize, j: usize| i * d + j;
    let flat = |b: &Bivector| -> Vec<Q> {
        let mut v = vec![Q::zero(); d * d];
        for (&(i, j), c) in &b.terms {
            v[key(i, j)] = c.clone();
        }
        v
    };
    let mut rows = Vec::new();
    for g in gens {
        for j in 0..d {
            rows.push(flat(&Bivector::wedge(g, &alg.basis(j))));
        }
    }
    let r0 = linalg::rank(&rows);
    gens.iter().all(|g| {
        let mut m = rows.clone();
        m.push(flat(&alg.ad_bivector(g, pi)));
        linalg::rank(&m) == r0
    })
}

#[test]
fn coideal_matches_brute_force() {
    for (s, beta) in [("A3", "L1-L4"), ("C2", "2L1"), ("A2", "L1-L2")] {
        let alg = algebra(s);
        let pi = alg.r_matrix();
        let b = alg.ad_bivector(&alg.e_root(&alg.rs.parse_root(beta).unwrap()), &pi);
        let gens = alg.coisotropic_generators(&b);
        assert!(brute_coideal(&alg, &pi, &gens), "{s}");
        assert!(alg.check_coisotropic(&pi, &gens).coideal, "{s}");
        let mut bad = gens.clone();
        bad.push(alg.f_root(&alg.rs.parse_root(beta).unwrap()));
        assert_eq!(brute_coideal(&alg, &pi, &bad), alg.check_coisotropic(&pi, &bad).coideal, "{s}");
    }
}

#[test]
fn antisymmetry_and_killing_invariance() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    for s in ["A2", "C2", "G2"] {
        let alg = algebra(s);
        let d = alg.dim;
        for _ in 0..10 {
            let (i, j, k) = (rng.gen_range(0..d), rng.gen_range(0..d), rng.gen_range(0..d));
            let (x, y, z) = (alg.basis(i), alg.basis(j), alg.basis(k));
            let ab = alg.ad_bivector(&x, &Bivector::wedge(&y, &z));
            let ba = alg.ad_bivector(&x, &Bivector::wedge(&z, &y));
            assert_eq!(ab, ba.neg());
            let lhs = alg.killing(&alg.bracket(&x, &y), &z) + alg.killing(&y, &alg.bracket(&x, &z));
            assert!(lhs.is_zero(), "{s}");
        }
    }
}

#[test]
fn so5_lowering_is_transpose() {
    let alg = algebra("B2");
    let r = alg.rs.parse_root("L1").unwrap();
    let e = alg.to_matrix(&alg.e_root(&r)).unwrap();
    let f = alg.to_matrix(&alg.f_root(&r)).unwrap();
    assert_eq!(f, transpose(&e));
}
