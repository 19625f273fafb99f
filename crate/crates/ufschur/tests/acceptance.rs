//! Acceptance run: one PASS/FAIL line per criterion with its time budget.

use std::time::{Duration, Instant};
use ufschur::combinat::{
    lambda_to_w_a, lambda_to_w_c, reduced_word_a, reduced_word_bc, Partition, RootType, StrictPartition,
};
use ufschur::duals::{phat_list, qhat_list};
use ufschur::fgl::{FglContext, GenPoly};
use ufschur::lazard::{a_gen, Beta, CoeffPoly, Specialization};
use ufschur::localization::{
    basis_function, expand_greedy, gkm_check, joint_vars, localize, recombine, LocalizedFamily, Window,
};
use ufschur::series::{Family, TruncSeries, Var, VarSet};
use ufschur::sympoly::{classical_pq, classical_s, expand_in_h};
use ufschur::uschur::{onto, p_l, q_l, s_l, BMode};
use ufschur::verify::{self, VerifyOptions};
use ufschur::Result;

fn a(i: u32, j: u32) -> CoeffPoly {
    a_gen(i, j).unwrap()
}

fn k(c: i64) -> CoeffPoly {
    CoeffPoly::constant(c)
}

fn inverse() -> Result<(bool, String)> {
    let ctx = FglContext::universal(5);
    let inv = ctx.inverse_coeffs();
    let a11 = a(1, 1);
    let want = [
        k(-1),
        a11.clone(),
        a11.pow(2).neg(),
        a11.pow(3).add(&a11.mul(&a(1, 2))).add(&a(1, 3).int_scale(2)).sub(&a(2, 2)),
        a11.pow(4)
            .neg()
            .sub(&a11.pow(2).mul(&a(1, 2)).int_scale(3))
            .sub(&a11.mul(&a(1, 3)).int_scale(6))
            .add(&a11.mul(&a(2, 2)).int_scale(3)),
    ];
    for (d, w) in want.iter().enumerate() {
        if inv[d + 1] != *w {
            return Ok((false, format!("coefficient of X^{}", d + 1)));
        }
    }
    Ok((true, String::new()))
}

fn two_series() -> Result<(bool, String)> {
    let ctx = FglContext::universal(5);
    let alpha = ctx.n_series_coeffs(2);
    let want = [
        k(2),
        a(1, 1),
        a(1, 2).int_scale(2),
        a(1, 3).int_scale(2).add(&a(2, 2)),
        a(1, 4).int_scale(2).add(&a(2, 3).int_scale(2)),
    ];
    for (d, w) in want.iter().enumerate() {
        if alpha[d + 1] != *w {
            return Ok((false, format!("alpha_{}", d + 1)));
        }
    }
    let ctx8 = FglContext::universal(8);
    let vars = VarSet::standard(1, 0, 0, false)?;
    let t = TruncSeries::var(&vars, 8, Var::x(1))?;
    let z = ctx8.formal_sum(&t, &ctx8.formal_inverse(&t)?)?;
    Ok((z.is_zero(), if z.is_zero() { String::new() } else { "F(t, i(t)) is not zero".into() }))
}

fn h(i: usize) -> GenPoly {
    GenPoly::gen(i)
}

fn c(p: CoeffPoly) -> GenPoly {
    GenPoly::constant(p)
}

fn golden_duals() -> Result<(bool, String)> {
    let ctx = FglContext::universal(4);
    let q = qhat_list(4, &ctx)?;
    let p = phat_list(4, &ctx)?;
    let a11 = a(1, 1);
    let cube = h(3).sub(&h(2).mul(&h(1))).add(&h(1).mul(&h(1)).mul(&h(1)));
    let qw = [
        c(k(2)).mul(&h(1)),
        c(k(2)).mul(&h(1)).mul(&h(1)).sub(&c(a11.clone()).mul(&h(1))),
        c(k(2)).mul(&cube)
            .add(&c(a11.int_scale(2)).mul(&h(2)))
            .sub(&c(a11.int_scale(3)).mul(&h(1)).mul(&h(1)))
            .add(&c(a11.pow(2)).mul(&h(1))),
    ];
    let pw = [
        h(1),
        h(1).mul(&h(1)).sub(&c(a11.clone()).mul(&h(1))),
        cube.add(&c(a11.clone()).mul(&h(2)))
            .sub(&c(a11.int_scale(2)).mul(&h(1)).mul(&h(1)))
            .add(&c(a11.pow(2).sub(&a(1, 2))).mul(&h(1))),
    ];
    for i in 0..3 {
        if expand_in_h(&q[i + 1], Family::Y, 4)? != qw[i] {
            return Ok((false, format!("qhat_{}", i + 1)));
        }
        if expand_in_h(&p[i + 1], Family::Y, 4)? != pw[i] {
            return Ok((false, format!("phat_{}", i + 1)));
        }
    }
    Ok((true, String::new()))
}

fn suite(name: &str, trunc: u32, max_size: u32) -> Result<(bool, String)> {
    let opts = VerifyOptions { trunc, max_size, spec: Specialization::Universal };
    let reports = verify::run(name, &opts)?;
    let n: usize = reports.iter().map(|r| r.checks.len()).sum();
    match reports.iter().find_map(|r| r.first_failure()) {
        Some(f) => Ok((false, format!("{} {}", f.name, f.detail))),
        None => Ok((true, format!("{n} checks"))),
    }
}

fn classical() -> Result<(bool, String)> {
    let ctx = FglContext::new(5, Specialization::Additive)?;
    let mut count = 0;
    for n in 1..=4usize {
        let vars = VarSet::standard(n, 0, 0, false)?;
        for lam in StrictPartition::up_to(5) {
            if lam.len() > n {
                continue;
            }
            for p in [true, false] {
                let ours = if p { p_l(&lam, n, BMode::Zero, &ctx)? } else { q_l(&lam, n, BMode::Zero, &ctx)? };
                if onto(&ours, &vars)? != classical_pq(&lam, n, Family::X, p, &vars, 5)? {
                    return Ok((false, format!("{}{lam} n={n}", if p { "P" } else { "Q" })));
                }
                count += 1;
            }
        }
        for lam in (0..=5).flat_map(Partition::all) {
            if lam.len() > n {
                continue;
            }
            if onto(&s_l(&lam, n, BMode::Zero, &ctx)?, &vars)? != classical_s(&lam, n, Family::X, &vars, 5)? {
                return Ok((false, format!("s{lam} n={n}")));
            }
            count += 1;
        }
    }
    // the K-theory law u + v - beta uv, with beta kept symbolic and at integers
    for beta in [Beta::Symbolic, Beta::Int(1), Beta::Int(-2), Beta::Int(3)] {
        let ctx = FglContext::new(6, Specialization::KTheory(beta))?;
        let b = match beta {
            Beta::Symbolic => a(1, 1),
            Beta::Int(v) => k(v),
        };
        let inv = ctx.inverse_coeffs();
        for d in 1..=6u32 {
            if inv[d as usize] != b.pow(d - 1).neg() {
                return Ok((false, format!("K-theory inverse, beta {beta:?}, X^{d}")));
            }
        }
    }
    Ok((true, format!("{count} functions")))
}

fn product(lam: &[u32], mu: &[u32], w: &Window, ctx: &FglContext) -> Result<TruncSeries> {
    let f = basis_function(lam, w, ctx)?;
    let g = basis_function(mu, w, ctx)?;
    let vars = joint_vars(&f, &g)?;
    f.relabel(&vars, Some)?.mul(&g.relabel(&vars, Some)?)
}

fn perturbed(fam: &LocalizedFamily) -> Result<LocalizedFamily> {
    let mut bad = fam.clone();
    let v = bad.points.values_mut().last().expect("nonempty window");
    let b1 = TruncSeries::var(&fam.vars, fam.trunc, Var::b(1))?;
    *v = v.add(&b1)?;
    Ok(bad)
}

fn localization() -> Result<(bool, String)> {
    let ctx = FglContext::universal(4);
    let small: [&[u32]; 3] = [&[], &[1], &[2]];
    let mut gkm_pairs = 0;
    for (kind, extra) in [(RootType::A, vec![vec![1, 1]]), (RootType::C, vec![])] {
        let labels: Vec<Vec<u32>> = small.iter().map(|l| l.to_vec()).chain(extra).collect();
        let gw = Window::new(kind, 2, 3)?;
        let ew = Window::new(kind, 2, ctx.trunc)?;
        for (i, lam) in labels.iter().enumerate() {
            for mu in &labels[i..] {
                let fam = localize(&product(lam, mu, &gw, &ctx)?, &gw, &ctx)?;
                let r = gkm_check(&fam, &ctx)?;
                if !r.passed {
                    return Ok((false, format!("{kind:?} GKM {lam:?}*{mu:?}: {:?}", r.first_failure)));
                }
                if gkm_check(&perturbed(&fam)?, &ctx)?.passed {
                    return Ok((false, format!("{kind:?} GKM accepts a perturbed family")));
                }
                gkm_pairs += r.pairs_checked;
                let f = product(lam, mu, &ew, &ctx)?;
                let e = expand_greedy(&f, &ew, &ctx)?;
                if !e.residual_zero || recombine(&e, &ew, &ctx)? != f {
                    return Ok((false, format!("{kind:?} greedy {lam:?}*{mu:?}")));
                }
            }
        }
    }
    Ok((true, format!("{gkm_pairs} GKM pairs")))
}

fn combinatorics() -> Result<(bool, String)> {
    let lam = Partition::new(vec![4, 2, 1, 0])?;
    let w = lambda_to_w_a(&lam, 4, 10)?;
    let ok_a = w.one_line == [1, 3, 5, 8, 2, 4, 6, 7, 9, 10] && reduced_word_a(&lam, 4) == [2, 4, 3, 7, 6, 5, 4];
    let sp = StrictPartition::new(vec![4, 2, 1])?;
    let wc = lambda_to_w_c(&sp, 4)?;
    let ok_c = wc.one_line == [-4, -2, -1, 3] && reduced_word_bc(&sp) == [0, 1, 0, 3, 2, 1, 0];
    let big = lambda_to_w_c(&StrictPartition::new(vec![6, 4, 3, 1])?, 7)?;
    let ok_signed = big.one_line == [-6, -4, -3, -1, 2, 5, 7];
    Ok((ok_a && ok_c && ok_signed, format!("type A {ok_a}, type C {ok_c}, signed {ok_signed}")))
}

type Criterion = (u32, &'static str, u64, Box<dyn Fn() -> Result<(bool, String)>>);

fn main() {
    let criteria: Vec<Criterion> = vec![
        (1, "formal inverse to X^5", 1, Box::new(inverse)),
        (2, "2-series alpha_1..alpha_5, F(t, i(t)) = 0 to trunc 8", 1, Box::new(two_series)),
        (3, "qhat and phat golden values in the h basis", 10, Box::new(golden_duals)),
        (4, "relation suite", 30, Box::new(|| suite("relations", 5, 4))),
        (5, "supersymmetry, n = 3, trunc 6, M = 5", 120, Box::new(|| suite("supersym", 6, 4))),
        (6, "stability", 120, Box::new(|| suite("stability", 6, 4))),
        (7, "factorization, trunc 6", 60, Box::new(|| suite("factorization", 6, 3))),
        (8, "vanishing and diagonal values, trunc 6", 120, Box::new(|| suite("vanishing", 6, 4))),
        (9, "Cauchy recombination, degree 4", 120, Box::new(|| suite("cauchy", 4, 4))),
        (10, "Hopf duality, degree 4", 180, Box::new(|| suite("duality", 4, 4))),
        (11, "classical oracles and the K-theory inverse", 60, Box::new(classical)),
        (12, "GKM and greedy expansion, types A and C", 120, Box::new(localization)),
        (13, "Grassmannian permutations and reduced words", 1, Box::new(combinatorics)),
    ];
    let mut failed = 0;
    let total = Instant::now();
    for (id, name, budget, run) in &criteria {
        let start = Instant::now();
        let result = run();
        let took = start.elapsed();
        let (ok, detail) = match result {
            Ok((ok, d)) => (ok && took <= Duration::from_secs(*budget), if took > Duration::from_secs(*budget) { format!("{d}; over budget") } else { d }),
            Err(e) => (false, e.to_string()),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} [{id:>2}] {name} ({:.2}s of {budget}s){}",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            if detail.is_empty() { String::new() } else { format!(": {detail}") }
        );
    }
    println!("{} of {} criteria passed in {:.1}s", criteria.len() - failed, criteria.len(), total.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
