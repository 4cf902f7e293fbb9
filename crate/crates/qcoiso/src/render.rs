//! Plain-text renderings of reports, shared by the command line and the web demo.

use std::fmt::Write as _;

use crate::verify::{IdentityReport, Verdict, VerificationReport};

pub fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "FAIL",
        Verdict::Inconclusive => "inconclusive",
    }
}

pub fn report_text(r: &VerificationReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "case {}{} beta = {}", r.case.ty, r.case.rank, r.case.beta);
    let _ = writeln!(s, "admissible: {}", r.admissible);
    if let Some(c) = &r.classical {
        let _ = writeln!(s, "classical: coisotropic {} (dim h = {})", c.coisotropic, c.dim);
    }
    if let Some(rc) = &r.recipe {
        let k: Vec<String> = rc.k_monomial.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(s, "recipe (degree {}, K exponents [{}]{}):", rc.degree, k.join(","), rc.power_assignment.as_deref().map(|p| format!(", powers {p}")).unwrap_or_default());
        for g in &rc.generators {
            if g.name == g.expr {
                let _ = writeln!(s, "  {}", g.expr);
            } else {
                let _ = writeln!(s, "  {} = {}", g.name, g.expr);
            }
        }
        let _ = writeln!(s, "classical limit: {}", if rc.classical_limit.pass { "ok".to_string() } else { format!("outside h: {:?}, spans h: {}", rc.classical_limit.outside, rc.classical_limit.spans) });
    }
    if let Some(c) = &r.coideal {
        let _ = writeln!(s, "left coideal:");
        for g in &c.per_generator {
            let _ = writeln!(s, "  {:<8} {} ({} certificates)", g.name, if g.pass { "pass" } else { "FAIL" }, g.certificates.len());
            for w in &g.witness {
                let _ = writeln!(s, "    witness {} (x) ({})", w.left, w.right);
            }
        }
    }
    if let Some(f) = &r.flatness {
        let _ = writeln!(s, "flatness (products up to degree {}):", f.max_degree);
        for p in &f.per_pair {
            let mut line = format!("  [{}, {}] {}", p.names[0], p.names[1], verdict_word(p.verdict));
            if let Some(x) = &p.xprime {
                let _ = write!(line, "  X' = {x}");
            }
            if let Some(l) = p.l {
                let _ = write!(line, "  l = {l}");
            }
            if let Some(reason) = &p.reason {
                let _ = write!(line, "  ({reason})");
            }
            let _ = writeln!(s, "{line}");
        }
    }
    if let Some(m) = &r.message {
        let _ = writeln!(s, "{}: {m}", r.stage.as_deref().unwrap_or("note"));
    }
    if let Some(t) = &r.timings {
        let parts: Vec<String> = t.iter().map(|(k, v)| format!("{k} {v:.3}s")).collect();
        let _ = writeln!(s, "timings: {}", parts.join(", "));
    }
    let _ = writeln!(s, "verdict: {}", verdict_word(r.verdict));
    s
}

pub fn identity_text(r: &IdentityReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} ({})", r.name, r.case);
    let _ = writeln!(s, "target {} over {} templates, {} equations", r.target, r.unknowns, r.equations);
    if !r.solvable {
        let _ = writeln!(s, "no solution");
        return s;
    }
    let width = r.solution.iter().map(|(l, _)| l.len()).max().unwrap_or(0);
    for (l, c) in &r.solution {
        let _ = writeln!(s, "  {l:<width$}  {c}");
    }
    let _ = writeln!(s, "solution space dimension: {}", r.nullspace_dim);
    if let Some(p) = r.paper_in_solution_set {
        let _ = writeln!(s, "printed coefficients in the solution set: {p}");
    }
    if let Some(c) = r.constrained {
        let _ = writeln!(s, "product coefficients vanishing at q = 1: {}", if c { "found" } else { "not found" });
    }
    if let Some(c) = &r.certificate {
        let _ = writeln!(s, "exact re-expansion: {}", c.residual_check);
    }
    s
}
