//! Universal factorial Schur functions `P^L`, `Q^L` and `s^L`.
//!
//! Each function is a sum over `S_n` of rational expressions whose
//! denominators are products of `x_i - x_j` taken in the group law. Writing
//! `(x_i - x_j)_F = (x_i - x_j) u_ij` with `u_ij` a unit, every summand is
//! brought over the Vandermonde `V = prod_{i<j} (x_i - x_j)`. The numerator
//! is antisymmetrized, then divided by `V` one linear factor at a time; each
//! division is checked to be exact. The numerator is computed
//! `n(n-1)/2` degrees beyond the requested truncation, since each linear
//! division costs one degree.
//!
//! Two further routes serve as cross-checks: one clears each summand
//! separately and divides the sum by `V` in a single step, the other applies
//! divided difference operators along a reduced word of `w_0`.

use crate::combinat::{rho, Partition, StrictPartition};
use crate::error::{Error, Result};
use crate::fgl::FglContext;
use crate::int::Int;
use crate::lazard::Specialization;
use crate::series::{Family, TruncSeries, Var, VarSet, MAX_TRUNC};
use std::sync::Arc;

/// How the equivariant parameters `b` enter.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BMode {
    /// All `b_i = 0`.
    Zero,
    /// `b_1..b_M` kept as variables.
    Symbolic(usize),
}

/// Which symmetrization algorithm to run.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Route {
    /// Antisymmetrize over `S_n`, then divide by the Vandermonde.
    CommonDenominator,
    /// Each summand separately over its own linear factors, then one
    /// division of the sum by the Vandermonde.
    PerTerm,
    /// Divided differences along a reduced word of `w_0`.
    DividedDifference,
}

/// Variables `x_1..x_n` and, for symbolic `b`, `b_1..b_M`.
pub fn standard_vars(n: usize, b: BMode) -> Result<Arc<VarSet>> {
    let nb = match b {
        BMode::Zero => 0,
        BMode::Symbolic(m) => m,
    };
    VarSet::standard(n, nb, 0, false)
}

fn check_b(b: BMode, need: u32, what: &str) -> Result<()> {
    if let BMode::Symbolic(m) = b {
        if (m as u32) < need {
            return Err(Error::Argument(format!("{what} needs b-prefix length at least {need}, got {m}")));
        }
    }
    Ok(())
}

fn xs(vars: &Arc<VarSet>, trunc: u32, i: usize) -> Result<TruncSeries> {
    TruncSeries::var(vars, trunc, Var::x(i as i32))
}

/// `[x_i | b]^k` with the parameters listed in `bs`, or `x_i^k` for `b = 0`.
fn fact_power(
    ctx: &FglContext,
    vars: &Arc<VarSet>,
    trunc: u32,
    i: usize,
    k: u32,
    doubled: bool,
    bs: Option<&[Var]>,
) -> Result<TruncSeries> {
    if k == 0 {
        return Ok(TruncSeries::one(vars, trunc));
    }
    match bs {
        Some(bs) if doubled => {
            let x = xs(vars, trunc, i)?;
            let rest = ctx.fact_power_var(vars, trunc, Var::x(i as i32), &bs[..k as usize - 1], false)?;
            Ok(ctx.n_series(2, &x)?.mul(&rest)?)
        }
        Some(bs) => ctx.fact_power_var(vars, trunc, Var::x(i as i32), &bs[..k as usize], false),
        None => {
            let x = xs(vars, trunc, i)?;
            if doubled {
                Ok(ctx.n_series(2, &x)?.mul(&x.pow(k - 1))?)
            } else {
                Ok(x.pow(k))
            }
        }
    }
}

fn b_list(b: BMode) -> Option<Vec<Var>> {
    match b {
        BMode::Zero => None,
        BMode::Symbolic(m) => Some((1..=m as i32).map(Var::b).collect()),
    }
}

fn extended_trunc(trunc: u32, n: usize) -> Result<u32> {
    let t = trunc + (n * n.saturating_sub(1) / 2) as u32;
    if t > MAX_TRUNC {
        return Err(Error::Argument(format!(
            "truncation {trunc} with {n} variables needs working degree {t}, above {MAX_TRUNC}"
        )));
    }
    Ok(t)
}

/// A summand before symmetrization: `body / prod_{(i,j) in den} (x_i - x_j)`,
/// with every unit of the group-law denominators already inverted into `body`.
struct Summand {
    body: TruncSeries,
    den: Vec<(usize, usize)>,
}

fn linear(vars: &Arc<VarSet>, t: u32, i: usize, j: usize) -> Result<TruncSeries> {
    xs(vars, t, i)?.sub(&xs(vars, t, j)?)
}

fn den_product(vars: &Arc<VarSet>, t: u32, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<TruncSeries> {
    let mut acc = TruncSeries::one(vars, t);
    for (i, j) in pairs {
        acc = acc.mul(&linear(vars, t, i, j)?)?;
    }
    Ok(acc)
}

/// `sum_w w[body / den]` over `S_n`.
fn symmetrize_summand(sm: &Summand, n: usize, route: Route) -> Result<TruncSeries> {
    let vars = sm.body.vars().clone();
    let t = sm.body.trunc();
    let all: Vec<(usize, usize)> = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect();
    if route == Route::PerTerm {
        let v = den_product(&vars, t, all.iter().copied())?;
        let d = den_product(&vars, t, sm.den.iter().copied())?;
        let mut perm: Vec<u32> = (1..=n as u32).collect();
        let mut total = TruncSeries::zero(&vars, t);
        loop {
            let w = |x: Var| {
                Some(if x.fam == Family::X && x.idx as usize <= n { Var::x(perm[x.idx as usize - 1] as i32) } else { x })
            };
            // A polynomial, so exact at any truncation.
            let cofactor = v.exact_div(&d.relabel(&vars, w)?)?;
            let cofactor = TruncSeries::from_terms(&vars, t, cofactor.terms().to_vec());
            total = total.add(&sm.body.relabel(&vars, w)?.mul(&cofactor)?)?;
            if !crate::series::next_permutation(&mut perm) {
                break;
            }
        }
        return total.exact_div(&v).map_err(|e| Error::Internal(format!("Vandermonde division failed: {e}")));
    }
    let rest = all.iter().copied().filter(|p| !sm.den.contains(p));
    let num = sm.body.mul(&den_product(&vars, t, rest)?)?;
    match route {
        Route::CommonDenominator => {
            let mut q = num.symmetrize(n, true)?;
            for &(i, j) in &all {
                q = q
                    .exact_div_linear(Var::x(i as i32), Var::x(j as i32))
                    .map_err(|e| Error::Internal(format!("Vandermonde division failed: {e}")))?;
            }
            Ok(q)
        }
        _ => {
            // w_0 = (s_1)(s_2 s_1)(s_3 s_2 s_1)...
            let mut q = num;
            for top in 1..n {
                for i in (1..=top).rev() {
                    let (a, b) = (Var::x(i as i32), Var::x(i as i32 + 1));
                    let diff = q.sub(&q.swap(a, b)?)?;
                    q = diff
                        .exact_div_linear(a, b)
                        .map_err(|e| Error::Internal(format!("divided difference failed: {e}")))?;
                }
            }
            Ok(q)
        }
    }
}

fn pq_summand(
    lambda: &StrictPartition,
    n: usize,
    doubled: bool,
    b: BMode,
    ctx: &FglContext,
    vars: &Arc<VarSet>,
    t: u32,
) -> Result<Summand> {
    let r = lambda.len();
    let bs = b_list(b);
    let mut body = TruncSeries::one(vars, t);
    for i in 1..=r {
        body = body.mul(&fact_power(ctx, vars, t, i, lambda.part(i), doubled, bs.as_deref())?)?;
    }
    let mut den = Vec::new();
    for i in 1..=r {
        for j in i + 1..=n {
            body = body.mul(&ctx.sum_over_unit_vars(vars, t, Var::x(i as i32), Var::x(j as i32))?)?;
            den.push((i, j));
        }
    }
    Ok(Summand { body, den })
}

fn pq_general(
    lambda: &StrictPartition,
    n: usize,
    b: BMode,
    ctx: &FglContext,
    doubled: bool,
    route: Route,
) -> Result<TruncSeries> {
    let vars = standard_vars(n, b)?;
    let trunc = ctx.trunc;
    if lambda.len() > n {
        return Ok(TruncSeries::zero(&vars, trunc));
    }
    let need = if doubled { lambda.part(1).saturating_sub(1) } else { lambda.part(1) };
    check_b(b, need, if doubled { "Q^L" } else { "P^L" })?;
    let t = extended_trunc(trunc, n)?;
    let sm = pq_summand(lambda, n, doubled, b, ctx, &vars, t)?;
    let q = symmetrize_summand(&sm, n, route)?;
    q.exact_div_int(&Int::factorial((n - lambda.len()) as u32))
        .map_err(|e| Error::Internal(format!("division by (n-r)! failed: {e}")))
}

/// `P^L_lambda(x_1..x_n | b)`.
pub fn p_l(lambda: &StrictPartition, n: usize, b: BMode, ctx: &FglContext) -> Result<TruncSeries> {
    pq_general(lambda, n, b, ctx, false, Route::CommonDenominator)
}

/// `Q^L_lambda(x_1..x_n | b)`.
pub fn q_l(lambda: &StrictPartition, n: usize, b: BMode, ctx: &FglContext) -> Result<TruncSeries> {
    pq_general(lambda, n, b, ctx, true, Route::CommonDenominator)
}

/// `P^L` or `Q^L` by an explicitly chosen route.
pub fn pq_l_route(lambda: &StrictPartition, n: usize, b: BMode, ctx: &FglContext, q: bool, route: Route) -> Result<TruncSeries> {
    pq_general(lambda, n, b, ctx, q, route)
}

/// `P^L_lambda(x_1..x_n | b)^+`: for odd `n` one extra variable is set to zero.
pub fn p_l_plus(lambda: &StrictPartition, n: usize, b: BMode, ctx: &FglContext) -> Result<TruncSeries> {
    if n.is_multiple_of(2) {
        return p_l(lambda, n, b, ctx);
    }
    let big = p_l(lambda, n + 1, b, ctx)?;
    let small = standard_vars(n, b)?;
    onto(&big.set_zero(Var::x(n as i32 + 1))?, &small)
}

fn s_general(lambda: &Partition, n: usize, bs: Option<Vec<Var>>, vars: Arc<VarSet>, ctx: &FglContext, route: Route) -> Result<TruncSeries> {
    let trunc = ctx.trunc;
    if lambda.len() > n {
        return Err(Error::Argument(format!("{lambda} has more than {n} parts")));
    }
    let t = extended_trunc(trunc, n)?;
    let mut body = TruncSeries::one(&vars, t);
    for i in 1..=n {
        let k = lambda.part(i) + (n - i) as u32;
        body = body.mul(&fact_power(ctx, &vars, t, i, k, false, bs.as_deref())?)?;
    }
    let mut den = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            body = body.mul(&ctx.unit_inv_vars(&vars, t, Var::x(i as i32), Var::x(j as i32))?)?;
            den.push((i, j));
        }
    }
    symmetrize_summand(&Summand { body, den }, n, route)
}

/// `s^L_lambda(x_1..x_n | b)`.
pub fn s_l(lambda: &Partition, n: usize, b: BMode, ctx: &FglContext) -> Result<TruncSeries> {
    s_l_route(lambda, n, b, ctx, Route::CommonDenominator)
}

pub fn s_l_route(lambda: &Partition, n: usize, b: BMode, ctx: &FglContext, route: Route) -> Result<TruncSeries> {
    check_b(b, lambda.part(1) + n as u32 - 1, "s^L")?;
    s_general(lambda, n, b_list(b), standard_vars(n, b)?, ctx, route)
}

/// Variables for `s^L_lambda(x_n || b_Z)`: `x_1..x_n` and `b_{2-lambda_1}..b_n`.
pub fn double_vars(lambda: &Partition, n: usize) -> Result<Arc<VarSet>> {
    let lo = 2 - lambda.part(1) as i32;
    let mut v: Vec<Var> = (1..=n as i32).map(Var::x).collect();
    v.extend((lo.min(n as i32)..=n as i32).map(Var::b));
    VarSet::new(v)
}

/// `s^L_lambda(x_n || b_Z)`, with factorial powers `prod_{i<=k} (t + b_{n+1-i})`.
pub fn s_l_double(lambda: &Partition, n: usize, ctx: &FglContext) -> Result<TruncSeries> {
    let vars = double_vars(lambda, n)?;
    let top = lambda.part(1) as usize + n;
    let bs: Vec<Var> = (1..top).map(|i| Var::b(n as i32 + 1 - i as i32)).collect();
    s_general(lambda, n, Some(bs), vars, ctx, Route::CommonDenominator)
}

/// Rewrites `s` over `target`, setting variables missing there to zero.
pub fn onto(s: &TruncSeries, target: &Arc<VarSet>) -> Result<TruncSeries> {
    s.relabel(target, |v| target.pos(v).map(|_| v))
}

/// Which family a [`USchurRequest`] asks for.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SchurKind {
    P,
    Q,
    S,
    /// `s^L_lambda(x_n || b_Z)`; the `b` mode is ignored.
    SDouble,
}

/// One universal factorial Schur function to compute.
#[derive(Clone, Debug)]
pub struct USchurRequest {
    pub kind: SchurKind,
    pub lambda: Vec<u32>,
    pub n: usize,
    pub b: BMode,
    pub ctx: FglContext,
    /// Use `P^L(...)^+`; only meaningful for `P`.
    pub plus: bool,
}

impl USchurRequest {
    /// Smallest `b`-prefix that the function involves.
    pub fn minimal_b(kind: SchurKind, lambda: &[u32], n: usize) -> usize {
        let l1 = lambda.first().copied().unwrap_or(0) as usize;
        match kind {
            SchurKind::P => l1,
            SchurKind::Q => l1.saturating_sub(1),
            SchurKind::S | SchurKind::SDouble => (l1 + n).saturating_sub(1),
        }
    }

    pub fn compute(&self) -> Result<TruncSeries> {
        match self.kind {
            SchurKind::P | SchurKind::Q => {
                let lam = StrictPartition::new(self.lambda.clone())?;
                match (self.kind, self.plus) {
                    (SchurKind::P, true) => p_l_plus(&lam, self.n, self.b, &self.ctx),
                    (SchurKind::P, false) => p_l(&lam, self.n, self.b, &self.ctx),
                    _ => q_l(&lam, self.n, self.b, &self.ctx),
                }
            }
            SchurKind::S => s_l(&Partition::new(self.lambda.clone())?, self.n, self.b, &self.ctx),
            SchurKind::SDouble => s_l_double(&Partition::new(self.lambda.clone())?, self.n, &self.ctx),
        }
    }
}

/// Result of the supersymmetry test.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperReport {
    pub supersymmetric: bool,
    /// Divisibility of `f(t, x_2, ...) - f(0, x_2, ...)` by `t + t`, if requested.
    pub gamma_plus: Option<bool>,
    pub detail: String,
}

/// Substitutes `x_1 = t`, `x_2 = i(t)` and tests independence of `t`.
pub fn check_supersymmetric(s: &TruncSeries, ctx: &FglContext, gamma_plus: bool) -> Result<SuperReport> {
    if s.vars().count(Family::X) < 2 {
        return Err(Error::Argument("supersymmetry needs at least two x-variables".into()));
    }
    let ctx = ctx.with_trunc(s.trunc());
    let mut names = s.vars().vars().to_vec();
    names.push(Var::t());
    let vt = VarSet::new(names)?;
    let f = s.relabel(&vt, Some)?;
    let t = TruncSeries::var(&vt, s.trunc(), Var::t())?;
    let tbar = ctx.formal_inverse(&t)?;
    let sub = f.substitute(Var::x(1), &t)?.substitute(Var::x(2), &tbar)?;
    let tpos = vt.require(Var::t())?;
    let bad = sub.terms().iter().find(|term| term.0.exp(tpos) > 0);
    let (ok, mut detail) = match bad {
        None => (true, String::new()),
        Some(term) => (false, format!("t-dependent term at {}", sub.fmt_mono(term.0))),
    };
    let gp = if gamma_plus {
        let ft = f.substitute(Var::x(1), &t)?;
        let f0 = f.set_zero(Var::x(1))?;
        let two_t = ctx.n_series(2, &t)?;
        match ft.sub(&f0)?.exact_div(&two_t) {
            Ok(_) => Some(true),
            Err(e) => {
                detail.push_str(&format!("; not divisible by t+t: {e}"));
                Some(false)
            }
        }
    } else {
        None
    };
    Ok(SuperReport { supersymmetric: ok, gamma_plus: gp, detail })
}

/// `deg - weight` of every term, which must equal `d` for a homogeneous
/// series in the universal setting. Returns the first offending monomial.
pub fn homogeneity_defect(s: &TruncSeries, d: i64) -> Option<String> {
    s.terms()
        .iter()
        .find(|t| t.0.degree() as i64 - t.1.weight() as i64 != d)
        .map(|t| s.fmt_mono(t.0))
}

/// Evaluation `x_i -> i(b_{k_i})` (or `0` for `None`), returning a series in
/// the `b`-variables only. The listed `b_k` need not occur in `s`.
pub fn eval_at(s: &TruncSeries, assignment: &[Option<i32>], ctx: &FglContext) -> Result<TruncSeries> {
    let nx = s.vars().count(Family::X);
    if assignment.len() != nx {
        return Err(Error::Argument(format!("{} values for {nx} x-variables", assignment.len())));
    }
    let mut idx: Vec<i32> = s.vars().vars().iter().filter(|v| v.fam == Family::B).map(|v| v.idx).collect();
    idx.extend(assignment.iter().flatten());
    idx.sort_unstable();
    idx.dedup();
    let bvars: Vec<Var> = idx.into_iter().map(Var::b).collect();
    let mut all = bvars.clone();
    all.extend((1..=nx as i32).map(Var::x));
    let big = VarSet::new(all)?;
    let trunc = s.trunc();
    let ctx = ctx.with_trunc(trunc);
    let mut f = s.relabel(&big, Some)?;
    for (i, a) in assignment.iter().enumerate() {
        let x = Var::x(i as i32 + 1);
        f = match a {
            None => f.set_zero(x)?,
            Some(k) => f.substitute(x, &ctx.inverse_var(&big, trunc, Var::b(*k))?)?,
        };
    }
    onto(&f, &VarSet::new(bvars)?)
}

/// Type A point `x_i = i(b_{mu_i + n - i + 1})`.
pub fn point_a(mu: &Partition, n: usize) -> Vec<Option<i32>> {
    (1..=n).map(|i| Some((mu.part(i) as usize + n - i + 1) as i32)).collect()
}

/// Type C point `x_i = i(b_{mu_i})`, padded by zeros to `n` entries.
pub fn point_c(mu: &StrictPartition, n: usize) -> Vec<Option<i32>> {
    (1..=n).map(|i| (i <= mu.len()).then(|| mu.part(i) as i32)).collect()
}

/// Type D point `x_i = i(b_{sh(mu)_i})`, padded by zeros to `n` entries.
pub fn point_sh(mu: &StrictPartition, n: usize) -> Vec<Option<i32>> {
    let sh = mu.sh();
    (0..n).map(|i| sh.get(i).map(|&v| v as i32)).collect()
}

fn bbar_plus_b(ctx: &FglContext, vars: &Arc<VarSet>, trunc: u32, k: u32, l: i32) -> Result<TruncSeries> {
    ctx.diff_vars(vars, trunc, Var::b(l), Var::b(k as i32))
}

fn bbar_plus_bbar(ctx: &FglContext, vars: &Arc<VarSet>, trunc: u32, k: u32, l: u32) -> Result<TruncSeries> {
    let ctx = ctx.with_trunc(trunc);
    let s = if k == l {
        ctx.n_series(2, &TruncSeries::var(vars, trunc, Var::b(k as i32))?)?
    } else {
        ctx.sum_vars(vars, trunc, Var::b(k as i32), Var::b(l as i32))?
    };
    ctx.formal_inverse(&s)
}

/// `prod_{(i,j) in lambda} (i(b_{lambda_i+n-i+1}) + b_{n+j-lambda'_j})`, the
/// diagonal value of `s^L_lambda` at its own type A point.
pub fn diagonal_s(lambda: &Partition, n: usize, ctx: &FglContext, vars: &Arc<VarSet>, trunc: u32) -> Result<TruncSeries> {
    let conj = lambda.conjugate();
    let mut acc = TruncSeries::one(vars, trunc);
    for (i, j) in lambda.boxes() {
        let k = lambda.part(i as usize) + n as u32 - i + 1;
        let l = n as i32 + j as i32 - conj.part(j as usize) as i32;
        acc = acc.mul(&bbar_plus_b(ctx, vars, trunc, k, l)?)?;
    }
    Ok(acc)
}

/// Diagonal value `Q^L_lambda(i(b_lambda) | b)` as a closed product.
pub fn diagonal_q(lambda: &StrictPartition, ctx: &FglContext, vars: &Arc<VarSet>, trunc: u32) -> Result<TruncSeries> {
    let r = lambda.len();
    let mut acc = TruncSeries::one(vars, trunc);
    for i in 1..=r {
        let li = lambda.part(i);
        let skip: Vec<u32> = (i + 1..=r).map(|p| lambda.part(p)).collect();
        for j in (1..li).filter(|j| !skip.contains(j)) {
            acc = acc.mul(&bbar_plus_b(ctx, vars, trunc, li, j as i32)?)?;
        }
        for j in i..=r {
            acc = acc.mul(&bbar_plus_bbar(ctx, vars, trunc, li, lambda.part(j))?)?;
        }
    }
    Ok(acc)
}

/// Diagonal value `P^L_lambda(i(b_{sh(lambda)}) | b)^+` as a closed product.
/// For odd length the product runs over `lambda` padded by a zero part,
/// matching the extra entry of `sh(lambda)`.
pub fn diagonal_p_plus(lambda: &StrictPartition, ctx: &FglContext, vars: &Arc<VarSet>, trunc: u32) -> Result<TruncSeries> {
    let mut parts = lambda.parts().to_vec();
    if parts.len() % 2 == 1 {
        parts.push(0);
    }
    let r = parts.len();
    let mut acc = TruncSeries::one(vars, trunc);
    for i in 0..r {
        let li = parts[i];
        let skip: Vec<u32> = parts[i + 1..].iter().map(|p| p + 1).collect();
        for j in (1..=li).filter(|j| !skip.contains(j)) {
            acc = acc.mul(&bbar_plus_b(ctx, vars, trunc, li + 1, j as i32)?)?;
        }
        for &lj in &parts[i + 1..] {
            acc = acc.mul(&bbar_plus_bbar(ctx, vars, trunc, li + 1, lj + 1)?)?;
        }
    }
    Ok(acc)
}

/// Checks both factorization identities:
/// `P^L_{rho_{n-1}+lambda} = prod_{i<j} (x_i + x_j) s^L_lambda` and
/// `Q^L_{rho_n+lambda} = prod_{i<=j} (x_i + x_j) s^L_lambda`.
pub fn check_factorization(lambda: &Partition, n: usize, b: BMode, ctx: &FglContext) -> Result<(bool, bool)> {
    if lambda.len() > n {
        return Err(Error::Argument(format!("{lambda} has more than {n} parts")));
    }
    let s = s_l(lambda, n, b, ctx)?;
    let vars = s.vars().clone();
    let trunc = ctx.trunc;
    let mut prod_lt = TruncSeries::one(&vars, trunc);
    let mut prod_le = TruncSeries::one(&vars, trunc);
    for i in 1..=n {
        for j in i..=n {
            let f = ctx.sum_vars(&vars, trunc, Var::x(i as i32), Var::x(j as i32))?;
            let f = if i == j { ctx.n_series(2, &xs(&vars, trunc, i)?)? } else { f };
            prod_le = prod_le.mul(&f)?;
            if i < j {
                prod_lt = prod_lt.mul(&f)?;
            }
        }
    }
    let lam: Vec<u32> = (1..=n).map(|i| lambda.part(i)).collect();
    let shift = |r: Vec<u32>| -> Result<StrictPartition> {
        let v: Vec<u32> = r.iter().zip(&lam).map(|(a, b)| a + b).filter(|&x| x > 0).collect();
        StrictPartition::new(v)
    };
    let mut rho_lo = rho(n - 1);
    rho_lo.push(0);
    let p = p_l(&shift(rho_lo)?, n, b, ctx)?;
    let q = q_l(&shift(rho(n))?, n, b, ctx)?;
    Ok((p == prod_lt.mul(&s)?, q == prod_le.mul(&s)?))
}

/// Relabels a series in `x_1..x_m` (plus `b`) with `m` larger than `n` after
/// the extra variables were set to zero.
pub fn drop_x(s: &TruncSeries, keep: usize) -> Result<TruncSeries> {
    let nx = s.vars().count(Family::X);
    let mut f = s.clone();
    for i in keep + 1..=nx {
        f = f.set_zero(Var::x(i as i32))?;
    }
    let vars: Vec<Var> = s.vars().vars().iter().copied().filter(|v| v.fam != Family::X || v.idx <= keep as i32).collect();
    onto(&f, &VarSet::new(vars)?)
}

/// Whether the specialization keeps every series homogeneous.
pub fn keeps_grading(spec: &Specialization) -> bool {
    use crate::lazard::Beta;
    matches!(
        spec,
        Specialization::Universal
            | Specialization::Additive
            | Specialization::Multiplicative(Beta::Symbolic)
            | Specialization::KTheory(Beta::Symbolic)
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lazard::{a_gen, CoeffPoly};
    use crate::series::SMono;

    fn sp(v: &[u32]) -> StrictPartition {
        StrictPartition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn one_variable_cases() {
        let ctx = FglContext::universal(3);
        let p = p_l(&sp(&[1]), 1, BMode::Symbolic(1), &ctx).unwrap();
        let vars = p.vars().clone();
        assert_eq!(p, ctx.sum_vars(&vars, 3, Var::x(1), Var::b(1)).unwrap());
        let q = q_l(&sp(&[1]), 1, BMode::Symbolic(0), &ctx).unwrap();
        let x = TruncSeries::var(q.vars(), 3, Var::x(1)).unwrap();
        assert_eq!(q, ctx.n_series(2, &x).unwrap());
        assert_eq!(q.coefficient(SMono::var_pow(0, 2)), a_gen(1, 1).unwrap());
    }

    #[test]
    fn routes_agree() {
        let ctx = FglContext::universal(4);
        for lam in [sp(&[1]), sp(&[2]), sp(&[2, 1])] {
            let a = pq_l_route(&lam, 3, BMode::Symbolic(2), &ctx, false, Route::CommonDenominator).unwrap();
            for route in [Route::PerTerm, Route::DividedDifference] {
                let b = pq_l_route(&lam, 3, BMode::Symbolic(2), &ctx, false, route).unwrap();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn s_empty_two_variables() {
        let ctx = FglContext::universal(3);
        let s = s_l(&Partition::empty(), 2, BMode::Symbolic(1), &ctx).unwrap();
        assert_eq!(s.constant_term(), CoeffPoly::one());
        let x1x2 = s.coefficient_of(&[(Var::x(1), 1), (Var::x(2), 1)]).unwrap();
        assert_eq!(x1x2, a_gen(1, 2).unwrap());
        // Checked by hand and against a concrete logarithm; not a11*a12.
        let c = s.coefficient_of(&[(Var::x(1), 1), (Var::x(2), 1), (Var::b(1), 1)]).unwrap();
        assert_eq!(c, a_gen(2, 2).unwrap().int_scale(2).sub(&a_gen(1, 3).unwrap()));
    }

    #[test]
    fn supersymmetry_of_formal_sum() {
        let ctx = FglContext::universal(4);
        let vars = VarSet::standard(3, 0, 0, false).unwrap();
        let x: Vec<TruncSeries> = (1..=3).map(|i| TruncSeries::var(&vars, 4, Var::x(i)).unwrap()).collect();
        let s = ctx.formal_sum(&ctx.formal_sum(&x[0], &x[1]).unwrap(), &x[2]).unwrap();
        assert!(check_supersymmetric(&s, &ctx, false).unwrap().supersymmetric);
        let plain = x[0].add(&x[1]).unwrap();
        assert!(!check_supersymmetric(&plain, &ctx, false).unwrap().supersymmetric);
    }

    #[test]
    fn plus_variant_one_variable() {
        let ctx = FglContext::universal(4);
        let p = p_l_plus(&sp(&[1]), 1, BMode::Symbolic(1), &ctx).unwrap();
        let vars = p.vars().clone();
        let x = TruncSeries::var(&vars, 5, Var::x(1)).unwrap();
        let b = TruncSeries::var(&vars, 4, Var::b(1)).unwrap();
        // x / i(x) computed one degree higher, where the division is exact.
        let xbar = ctx.with_trunc(5).formal_inverse(&x).unwrap();
        let ratio = x.exact_div(&xbar).unwrap();
        let expect = ctx.sum_vars(&vars, 4, Var::x(1), Var::b(1)).unwrap().add(&b.mul(&ratio).unwrap()).unwrap();
        assert_eq!(p, expect);
        assert_ne!(p, p_l(&sp(&[1]), 1, BMode::Symbolic(1), &ctx).unwrap());
    }

    #[test]
    fn double_version_reverses_parameters() {
        let ctx = FglContext::universal(4);
        let lam = Partition::new(vec![1]).unwrap();
        let d = s_l_double(&lam, 2, &ctx).unwrap();
        let s = s_l(&lam, 2, BMode::Symbolic(2), &ctx).unwrap();
        let rev = s.swap(Var::b(1), Var::b(2)).unwrap();
        assert_eq!(d.relabel(rev.vars(), Some).unwrap(), rev);
        // x_2 = i(b_2) recovers the one-variable function.
        let e = d.substitute(Var::x(2), &ctx.inverse_var(d.vars(), 4, Var::b(2)).unwrap()).unwrap();
        let one = s_l_double(&lam, 1, &ctx).unwrap();
        assert_eq!(onto(&e, one.vars()).unwrap(), one);
        assert!(e.filter(|m| m.exp(d.vars().require(Var::b(2)).unwrap()) > 0).is_zero());
    }

    #[test]
    fn factorization_small() {
        let ctx = FglContext::universal(5);
        for lam in [Partition::empty(), Partition::new(vec![1]).unwrap()] {
            let (p, q) = check_factorization(&lam, 2, BMode::Symbolic(lam.part(1) as usize + 1), &ctx).unwrap();
            assert!(p && q, "{lam}");
        }
    }
}
