//! The acceptance criteria as library checks, shared by the `verify` command and the test suite.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::algebra::interp::{eval_coeffs, interpolate_coeffs};
use crate::algebra::matrix::QMatrix;
use crate::algebra::rational::{factorial, int, pow, rat, to_f64, Rational};
use crate::algebra::series::Series;
use crate::error::Result;
use crate::frobenius::{tqft_trig, FrobeniusAlgebra, Shift};
use crate::genus0::{admissible_insertions, correlator_sl2, sl2_invariant_dim, WdvvSolver};
use crate::relations::{betti_bound, relation_boundary, verify_ma_triangular};
use crate::rmatrix::{b_series, p_polynomial, q_polynomials, r_inverse, r_matrix, symplectic_residual, verify_r_recursion_for};
use crate::strata::decorated::{BoundaryDivisor, DecoratedGraph, Divisor};
use crate::strata::givental::givental_degree_part;
use crate::strata::graph::StableGraph;
use crate::witten::{
    certify_polynomiality, conjugate_pair_target, eliminate_kappa1_g2, genus2_table, r0_limit_bernoulli,
    weierstrass_target,
};

pub const CRITERIA: u32 = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    pub fn to_json(&self) -> Value {
        json!({ "id": self.id, "name": self.name, "passed": self.passed, "detail": self.detail })
    }

    pub fn line(&self) -> String {
        format!("[{}] criterion {:>2} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.id, self.name, self.detail)
    }
}

pub fn criterion_name(id: u32) -> &'static str {
    match id {
        1 => "dual-oracle correlators",
        2 => "B-series identities",
        3 => "R-matrix recursions",
        4 => "P and Q polynomials",
        5 => "genus-one relation",
        6 => "genus-two tables",
        7 => "holomorphic-differentials limit",
        8 => "TQFT cross-check",
        9 => "Betti machinery",
        10 => "polynomiality",
        _ => "unknown",
    }
}

pub fn run_criterion(id: u32) -> CheckResult {
    let outcome = match id {
        1 => correlators(),
        2 => b_identities(),
        3 => r_recursions(),
        4 => p_and_q(),
        5 => genus_one(),
        6 => genus_two_tables(),
        7 => holomorphic_limit(),
        8 => tqft_cross_check(),
        9 => betti(),
        10 => polynomiality(),
        _ => Ok((false, format!("no criterion {id}"))),
    };
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    CheckResult { id, name: criterion_name(id), passed, detail }
}

pub fn run_all() -> Vec<CheckResult> {
    (1..=CRITERIA).map(run_criterion).collect()
}

pub fn suite_json(results: &[CheckResult]) -> Value {
    json!({
        "schema": "rspin.verify/1",
        "passed": results.iter().all(|c| c.passed),
        "criteria": results.iter().map(CheckResult::to_json).collect::<Vec<_>>(),
    })
}

type Outcome = Result<(bool, String)>;

const CORRELATOR_BUDGET: Duration = Duration::from_secs(60);

fn correlators() -> Outcome {
    let start = Instant::now();
    let mut cases = 0usize;
    let mut bad = Vec::new();
    for r in 2..=8u32 {
        let mut solver = WdvvSolver::new(r);
        for n in 3..=6usize {
            for a in admissible_insertions(r, n) {
                let value = correlator_sl2(r, &a)?;
                // every ordering of the insertions, starting from the sorted one
                let mut key = a.clone();
                key.sort_unstable();
                loop {
                    cases += 1;
                    if value != solver.correlator(&key) {
                        bad.push(format!("r={r} {key:?}"));
                    }
                    if !next_permutation(&mut key) {
                        break;
                    }
                }
            }
        }
    }
    let mut special = 0;
    for r in 3..=10u32 {
        let mut solver = WdvvSolver::new(r);
        let inv = rat(1, r as i64);
        let key = [1, 1, r - 2, r - 2];
        special += 1;
        if solver.correlator(&key) != inv || correlator_sl2(r, &key)? != inv {
            bad.push(format!("r={r} {key:?} != 1/r"));
        }
        for a in 1..=r - 2 {
            for b in 1..=r - 2 {
                let c = 2 * r as i64 - 3 - a as i64 - b as i64;
                if (1..=r as i64 - 2).contains(&c) {
                    special += 1;
                    if solver.correlator(&[a, b, c as u32, 1]) != inv {
                        bad.push(format!("r={r} ({a},{b},{c},1) != 1/r"));
                    }
                }
            }
        }
    }
    let in_budget = start.elapsed() < CORRELATOR_BUDGET;
    let ok = bad.is_empty() && cases >= 100 && in_budget;
    let mut detail = format!("{cases} ordered keys agree across oracles, {special} four-point values equal 1/r");
    if !bad.is_empty() {
        detail = format!("mismatches: {}", bad.join("; "));
    } else if !in_budget {
        detail.push_str(", but over the time budget");
    }
    Ok((ok, detail))
}

fn next_permutation(v: &mut [u32]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn fac(n: u64) -> Rational {
    Rational::from_integer(factorial(n))
}

fn b_identities() -> Outcome {
    let mut pairs = 0;
    for r in 2..=8u32 {
        for a in 0..=r - 2 {
            if !symplectic_residual(r, a, 20)?.is_zero() {
                return Ok((false, format!("symplectic identity fails at r={r} a={a}")));
            }
            pairs += 1;
        }
    }
    if b_series(4, 1, 20)? != Series::one(20) {
        return Ok((false, "B_{4,1} is not 1".into()));
    }
    let order = 10;
    let (b30, b40) = (b_series(3, 0, order)?, b_series(4, 0, order)?);
    for m in 0..=order as u64 {
        let c3 = fac(6 * m) / (fac(3 * m) * fac(2 * m)) * pow(&rat(-1, 1728), m as u32);
        let c4 = fac(4 * m) / (fac(m) * fac(2 * m)) * pow(&rat(-1, 256), m as u32);
        if b30.coeff(m as usize) != c3 || b40.coeff(m as usize) != c4 {
            return Ok((false, format!("factorial form differs at T^{m}")));
        }
    }
    Ok((true, format!("symplectic identity to order 20 for {pairs} (r, a); B_4,1 = 1; B_3,0 and B_4,0 match to order 10")))
}

fn r_recursions() -> Outcome {
    for r in 2..=8u32 {
        for shift in [Shift::TauLast, Shift::TauSecond] {
            if !verify_r_recursion_for(r, shift, 12)? {
                return Ok((false, format!("recursion fails at r={r} shift {shift}")));
            }
            if !r_matrix(r, shift, 12)?.mul(&r_inverse(r, shift, 12)?)?.is_identity() {
                return Ok((false, format!("R R^-1 != 1 at r={r} shift {shift}")));
            }
        }
    }
    Ok((true, "recursion exact to order 12 and R R^-1 = 1 for r <= 8 at both shifts".into()))
}

fn p1_closed(r: &Rational, a: &Rational) -> Rational {
    a * (r - int(1) - a) / int(2) - (int(2) * r - int(1)) * (r - int(2)) / int(24)
}

fn p2_closed(r: &Rational, a: &Rational) -> Rational {
    pow(a, 4) / int(8) - pow(a, 3) * (int(5) * r - int(1)) / int(12)
        + pow(a, 2) * (int(20) * pow(r, 2) - int(5) * r - int(4)) / int(48)
        - a * (r - int(1)) * (int(6) * pow(r, 2) + int(7) * r - int(2)) / int(48)
        + (int(2) * r - int(1)) * (r - int(2)) * (int(2) * pow(r, 2) + int(19) * r + int(2)) / int(1152)
}

fn p_and_q() -> Outcome {
    let (p1, p2) = (p_polynomial(1)?, p_polynomial(2)?);
    // both sides have degree at most 4 in each variable, so a 6 x 6 grid decides equality
    for ri in -2..4i64 {
        for ai in -2..4i64 {
            let (r, a) = (int(ri), int(ai));
            if p1.eval(&[r.clone(), a.clone()]) != p1_closed(&r, &a) || p2.eval(&[r.clone(), a.clone()]) != p2_closed(&r, &a) {
                return Ok((false, format!("closed form differs at r={ri} a={ai}")));
            }
        }
    }
    let qs = q_polynomials(6);
    for m in 1..=6usize {
        let p = p_polynomial(m)?;
        let prev = p_polynomial(m - 1)?;
        let grid = 2 * m as i64 + 2;
        for ri in 0..grid {
            for ai in 0..grid {
                let (r, a) = (int(ri), int(ai));
                let lhs = p.eval(&[r.clone(), a.clone()]) - p.eval(&[r.clone(), &a - int(1)]);
                let rhs = (int(2 * m as i64 - 1) * &r - int(2) * &a) / int(2) * prev.eval(&[r.clone(), &a - int(1)]);
                if lhs != rhs {
                    return Ok((false, format!("difference identity fails for m={m} at r={ri} a={ai}")));
                }
            }
            if p.eval(&[int(ri), int(0)]) != p.eval(&[int(ri), int(ri - 1)]) {
                return Ok((false, format!("reflection identity fails for m={m} at r={ri}")));
            }
        }
        for ai in 0..grid {
            if p.eval(&[int(0), int(ai)]) != qs[m].eval(&[int(ai)]) {
                return Ok((false, format!("Q_{m} != P_{m}(0, .) at a={ai}")));
            }
        }
    }
    Ok((true, "P_1, P_2 equal the closed forms; both identities and Q_m = P_m(0, a) hold for m <= 6".into()))
}

fn divisor_vector(r: u32, a: u32) -> Result<Vec<Rational>> {
    let rel = relation_boundary(r, 1, &[a], 1)?;
    let d = rel.divisor_coefficients()?;
    let get = |k: &Divisor| d.get(k).cloned().unwrap_or_else(Rational::zero);
    Ok(vec![get(&Divisor::Psi(1)), get(&Divisor::Kappa1), get(&Divisor::Boundary(BoundaryDivisor::Irreducible))])
}

fn genus_one() -> Outcome {
    let mut rows = Vec::new();
    for r in 2..=9u32 {
        for a in (0..=r - 2).filter(|a| (r - a) % 2 == 0) {
            let v = divisor_vector(r, a)?;
            let (ri, ai) = (r as i64, a as i64);
            let want = [int((ri - 2 * ai - 2) * (ri + 2 * ai + 2)), int(-(ri - 2) * (ri + 2)), rat(ai * (ai + 2), 3)];
            // proportional with a nonzero factor
            let Some(pivot) = want.iter().position(|w| !w.is_zero()) else {
                // r = 2: the closed form and the class both vanish
                if v.iter().any(|x| !x.is_zero()) {
                    return Ok((false, format!("r={r} a={a}: expected the zero class")));
                }
                continue;
            };
            let scale = &v[pivot] / &want[pivot];
            if scale.is_zero() || v.iter().zip(&want).any(|(x, w)| x != &(w * &scale)) {
                return Ok((false, format!("r={r} a={a}: {v:?} not proportional to closed form")));
            }
            rows.push(v);
        }
    }
    let ker = QMatrix::from_rows(rows.clone()).kernel();
    let ok = ker.len() == 1 && {
        let v = &ker[0];
        !v[0].is_zero() && v[1] == v[0] && v[2] == &v[0] * int(12)
    };
    Ok((ok, format!("{} relations proportional to the closed form; joint kernel spanned by (psi, kappa, delta) = (1, 1, 12): {ok}", rows.len())))
}

fn genus_two_tables() -> Outcome {
    for a in [vec![2u32], vec![1, 1]] {
        let rs: Vec<u32> = (5..=12).collect();
        let mut series: BTreeMap<Divisor, Vec<Rational>> = BTreeMap::new();
        for &r in &rs {
            let got = givental_degree_part(r, Shift::TauSecond, 2, &a, 1)?.divisor_coefficients()?;
            let want = genus2_table(&a, &int(r as i64))?;
            if got != want {
                return Ok((false, format!("a={a:?} r={r}: {got:?} != table")));
            }
            for (k, v) in got {
                series.entry(k).or_default().push(v * int(24 * r as i64));
            }
        }
        // 24 r times each entry is a cubic in r: fit on five points and predict the rest
        let xs: Vec<Rational> = rs.iter().map(|&r| int(r as i64)).collect();
        for (k, ys) in &series {
            let coeffs = interpolate_coeffs(&xs[..5], &ys[..5])?;
            if coeffs.len() > 4 && !coeffs[4..].iter().all(Zero::is_zero) {
                return Ok((false, format!("a={a:?} {k}: degree above 3")));
            }
            if xs.iter().zip(ys).any(|(x, y)| &eval_coeffs(&coeffs, x) != y) {
                return Ok((false, format!("a={a:?} {k}: interpolant misses a sample")));
            }
            for x in [2i64, 3, 20, 100] {
                let want = &genus2_table(&a, &int(x))?[k] * int(24 * x);
                if eval_coeffs(&coeffs, &int(x)) != want {
                    return Ok((false, format!("a={a:?} {k}: interpolant disagrees with the table polynomial at r={x}")));
                }
            }
        }
    }
    Ok((true, "both second-shift genus-2 tables reproduced exactly for r = 5..12 and as cubic interpolants".into()))
}

fn holomorphic_limit() -> Outcome {
    let principal = DecoratedGraph::from_stable(&StableGraph::trivial(1, 1));
    let g1 = r0_limit_bernoulli(1, &[0])?;
    if g1.len() != 1 || g1.coeff(&principal) != Rational::one() {
        return Ok((false, format!("genus one limit is {g1}")));
    }
    for (a, target) in [(vec![2u32], weierstrass_target()), (vec![1, 1], conjugate_pair_target())] {
        let lim = r0_limit_bernoulli(2, &a)?;
        let reduced = eliminate_kappa1_g2(&lim.divisor_coefficients()?, a.len())?;
        if reduced != target {
            return Ok((false, format!("a={a:?}: {reduced:?} != target")));
        }
    }
    Ok((true, "genus 1 gives 1; genus 2 gives the Weierstrass and conjugate-pair classes exactly".into()))
}

fn multisets(max: u32, len: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(lo: u32, max: u32, len: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for x in lo..=max {
            cur.push(x);
            rec(x, max, len, cur, out);
            cur.pop();
        }
    }
    rec(0, max, len, &mut cur, &mut out);
    out
}

pub const TQFT_TOLERANCE: f64 = 1e-9;

fn tqft_cross_check() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for r in 2..=7u32 {
        let alg = FrobeniusAlgebra::new(r, Shift::TauLast)?;
        for g in 0..=4u32 {
            for n in 0..=6usize {
                let chi = 2 * g as i64 - 2 + n as i64;
                if !(1..=6).contains(&chi) {
                    continue;
                }
                for a in multisets(r - 2, n) {
                    let exact = to_f64(&alg.tqft_exact(g, &a)?);
                    let trig = tqft_trig(r, g, &a)?;
                    worst = worst.max((exact - trig).abs());
                    cases += 1;
                }
            }
        }
    }
    for r in 2..=10u32 {
        let alg = FrobeniusAlgebra::new(r, Shift::TauLast)?;
        for a in 0..=r - 2 {
            for b in 0..=r - 2 {
                let prod = alg.quantum_product(a, b)?;
                for c in 0..=r - 2 {
                    let fusion = sl2_invariant_dim(&[a, b, c]) == 1.into() && a + b + c <= 2 * r - 4;
                    let want = if fusion { Rational::one() } else { Rational::zero() };
                    if prod[c as usize] != want {
                        return Ok((false, format!("r={r}: coefficient of e_{c} in e_{a} e_{b} is {}", prod[c as usize])));
                    }
                }
            }
        }
    }
    Ok((worst <= TQFT_TOLERANCE, format!("{cases} TQFT values, max |trig - exact| = {worst:.3e}; fusion constants match for r <= 10")))
}

fn betti() -> Outcome {
    for g in 2..=12u32 {
        if betti_bound(g, g - 2)? != 1 || (g - 1..=g + 4).any(|d| betti_bound(g, d).map_or(true, |b| b != 0)) {
            return Ok((false, format!("bound fails at g={g}")));
        }
    }
    for d in 1..=6 {
        let rep = verify_ma_triangular(d)?;
        if !rep.passed() {
            return Ok((false, format!("MA check fails at d={d}")));
        }
    }
    Ok((true, "bound(g, g-2) = 1 and bound(g, d > g-2) = 0 for g <= 12; MA triangular with nonzero diagonal for d <= 6; both residue facts hold".into()))
}

fn polynomiality() -> Outcome {
    let mut parts = Vec::new();
    for a in [vec![2u32], vec![1, 1]] {
        let cert = certify_polynomiality(2, &a, None, 16)?;
        if !cert.divisible_by_r_minus_1 {
            return Ok((false, format!("a={a:?}: a coefficient is not divisible by r - 1")));
        }
        if cert.r0_limit() != r0_limit_bernoulli(2, &a)? {
            return Ok((false, format!("a={a:?}: constant terms differ from the Bernoulli limit")));
        }
        parts.push(format!("a={a:?} window {}..{} degree {} held out {:?}", cert.window.0, cert.window.1, cert.degree, cert.held_out));
    }
    Ok((true, parts.join("; ")))
}
