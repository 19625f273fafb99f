//! Homology-side generators and dual functions.
//!
//! `qhat_k` and `phat_k` come from the one-variable Cauchy kernel
//! `Delta(t; y) = prod_j (1 - i(t) y_j) / (1 - t y_j)`, the dual bases
//! `phat_lambda`, `qhat_lambda` from the full kernel by a triangular solve
//! against `Q^L` (pivot `2^l(lambda)`) and `P^L` (pivot 1). All `y`-side
//! objects are polynomials of degree at most the truncation, stored over
//! `y_1..y_m`.

use crate::combinat::StrictPartition;
use crate::error::{Error, Result};
use crate::fgl::FglContext;
use crate::int::Int;
use crate::lazard::CoeffPoly;
use crate::series::{Family, SMono, TruncSeries, Var, VarSet, MAX_TRUNC};
use crate::sympoly::{split_by_family, Basis, ExpCoeff, Expansion};
use crate::uschur::{onto, p_l, q_l, BMode};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

fn joint_trunc(trunc: u32) -> Result<u32> {
    if 2 * trunc > MAX_TRUNC {
        return Err(Error::Argument(format!("truncation {trunc} too large for the Cauchy kernel")));
    }
    Ok(2 * trunc)
}

/// `y_1..y_m`.
pub fn y_vars(m: usize) -> Result<Arc<VarSet>> {
    VarSet::standard(0, 0, m, false)
}

fn fam_degree(vars: &VarSet, fam: Family) -> impl Fn(SMono) -> u32 {
    let pos = vars.family(fam);
    move |m: SMono| pos.iter().map(|&k| m.exp(k)).sum()
}

/// `(1 - i(u) w) / (1 - u w) = 1 + (u - i(u)) w / (1 - u w)` for variables `u`, `w`.
fn kernel_factor(ctx: &FglContext, vars: &Arc<VarSet>, trunc: u32, u: Var, w: Var) -> Result<TruncSeries> {
    let uu = TruncSeries::var(vars, trunc, u)?;
    let ww = TruncSeries::var(vars, trunc, w)?;
    let diff = uu.sub(&ctx.with_trunc(trunc).formal_inverse(&uu)?)?;
    let uw = uu.mul(&ww)?;
    let mut geo = TruncSeries::one(vars, trunc);
    let mut p = TruncSeries::one(vars, trunc);
    for _ in 0..trunc / 2 {
        p = p.mul(&uw)?;
        geo = geo.add(&p)?;
    }
    TruncSeries::one(vars, trunc).add(&diff.mul(&ww)?.mul(&geo)?)
}

/// `Delta(t; y_1..y_m)` over `{y, t}`, exact for `t`-degree up to `trunc`.
pub fn delta_t(m: usize, ctx: &FglContext) -> Result<TruncSeries> {
    let jt = joint_trunc(ctx.trunc)?;
    let vars = VarSet::standard(0, 0, m, true)?;
    let mut acc = TruncSeries::one(&vars, jt);
    for j in 1..=m as i32 {
        acc = acc.mul(&kernel_factor(ctx, &vars, jt, Var::t(), Var::y(j))?)?;
    }
    Ok(acc)
}

/// Coefficients of `t^0..t^trunc` of a series in `{y, t}`, as `y`-series at `trunc`.
fn t_coefficients(s: &TruncSeries, m: usize, trunc: u32) -> Result<Vec<TruncSeries>> {
    let y = y_vars(m)?;
    (0..=trunc).map(|k| Ok(onto(&s.coeff_of_power(Var::t(), k)?, &y)?.truncate(trunc))).collect()
}

/// `qhat_0..qhat_trunc` in `y_1..y_m`.
pub fn qhat_list(m: usize, ctx: &FglContext) -> Result<Vec<TruncSeries>> {
    let d = delta_t(m, ctx)?;
    t_coefficients(&d, m, ctx.trunc)
}

/// `qhat_k(y_1..y_m)`, the `t^k` coefficient of `Delta(t; y)`.
pub fn qhat_k(k: u32, m: usize, ctx: &FglContext) -> Result<TruncSeries> {
    check_k(k, ctx)?;
    Ok(qhat_list(m, ctx)?.swap_remove(k as usize))
}

fn check_k(k: u32, ctx: &FglContext) -> Result<()> {
    if k > ctx.trunc {
        return Err(Error::Argument(format!("index {k} above truncation {}", ctx.trunc)));
    }
    Ok(())
}

/// `phat_0 = 0, phat_1..phat_trunc` from `Delta(t; y) = 1 + [2](t) sum_k phat_k t^{k-1}`.
pub fn phat_list(m: usize, ctx: &FglContext) -> Result<Vec<TruncSeries>> {
    let d = delta_t(m, ctx)?;
    let vars = d.vars().clone();
    let jt = d.trunc();
    let t = TruncSeries::var(&vars, jt, Var::t())?;
    let two = ctx.with_trunc(jt).n_series(2, &t)?;
    let q = d
        .sub(&TruncSeries::one(&vars, jt))?
        .exact_div(&two)
        .map_err(|e| Error::Internal(format!("Delta - 1 not divisible by [2](t): {e}")))?;
    let mut out = vec![TruncSeries::zero(&y_vars(m)?, ctx.trunc)];
    let mut lower = t_coefficients(&q, m, ctx.trunc)?;
    lower.pop();
    out.extend(lower);
    Ok(out)
}

/// `phat_k(y_1..y_m)`.
pub fn phat_k(k: u32, m: usize, ctx: &FglContext) -> Result<TruncSeries> {
    check_k(k, ctx)?;
    Ok(phat_list(m, ctx)?.swap_remove(k as usize))
}

/// `qtilde_0..qtilde_trunc` in `x_1..x_n`: coefficients of
/// `prod_i (1 + x_i T) / (1 + i(x_i) T)`.
pub fn qtilde_list(n: usize, ctx: &FglContext) -> Result<Vec<TruncSeries>> {
    let jt = joint_trunc(ctx.trunc)?;
    let vars = VarSet::standard(n, 0, 0, true)?;
    let big = ctx.with_trunc(jt);
    let tt = TruncSeries::var(&vars, jt, Var::t())?;
    let one = TruncSeries::one(&vars, jt);
    let mut acc = one.clone();
    for i in 1..=n as i32 {
        let x = TruncSeries::var(&vars, jt, Var::x(i))?;
        let num = one.add(&x.mul(&tt)?)?;
        let den = one.add(&big.formal_inverse(&x)?.mul(&tt)?)?;
        acc = acc.mul(&num.mul(&den.invert_unit()?)?)?;
    }
    let xv = VarSet::standard(n, 0, 0, false)?;
    (0..=ctx.trunc)
        .map(|k| Ok(onto(&acc.coeff_of_power(Var::t(), k)?, &xv)?.truncate(ctx.trunc)))
        .collect()
}

pub fn qtilde_k(k: u32, n: usize, ctx: &FglContext) -> Result<TruncSeries> {
    check_k(k, ctx)?;
    Ok(qtilde_list(n, ctx)?.swap_remove(k as usize))
}

/// Coefficient of `T^i` in `qhat(T) qhat(i(T)) - 1`, from concrete values.
pub fn qhat_relation_defect(i: u32, q: &[TruncSeries], ctx: &FglContext) -> Result<TruncSeries> {
    if i as usize >= q.len() {
        return Err(Error::Argument(format!("relation in degree {i} needs qhat up to {i}")));
    }
    let inv = ctx.with_trunc(i.max(1)).inverse_coeffs();
    // pw[k][l] = [T^l] i(T)^k
    let i = i as usize;
    let mut pw: Vec<Vec<CoeffPoly>> = vec![{
        let mut v = vec![CoeffPoly::zero(); i + 1];
        v[0] = CoeffPoly::one();
        v
    }];
    for k in 1..=i {
        let prev = &pw[k - 1];
        let mut v = vec![CoeffPoly::zero(); i + 1];
        for (a, pa) in prev.iter().enumerate() {
            for (b, ib) in inv.iter().enumerate().take(i + 1 - a) {
                if !pa.is_zero() && !ib.is_zero() {
                    v[a + b] = v[a + b].add(&pa.mul(ib));
                }
            }
        }
        pw.push(v);
    }
    let mut acc = TruncSeries::zero(q[0].vars(), q[0].trunc());
    for j in 0..=i {
        let l = i - j;
        let mut bar = TruncSeries::zero(q[0].vars(), q[0].trunc());
        for (k, qk) in q.iter().enumerate().take(l + 1) {
            let c = &pw[k][l];
            if !c.is_zero() {
                bar = bar.add(&qk.scale(c))?;
            }
        }
        acc = acc.add(&q[j].mul(&bar)?)?;
    }
    if i == 0 {
        acc = acc.sub(&TruncSeries::one(q[0].vars(), q[0].trunc()))?;
    }
    Ok(acc)
}

/// The Cauchy kernel `Delta(x_n; y_m)`.
#[derive(Clone, Debug)]
pub struct CauchyKernel {
    pub n: usize,
    pub m: usize,
    /// Exact for `x`-degree up to `trunc`.
    pub trunc: u32,
    pub series: TruncSeries,
}

/// Builds `prod_{i,j} (1 - i(x_i) y_j) / (1 - x_i y_j)` over `{x, y}`, with
/// every term of `x`-degree above `trunc` dropped.
pub fn cauchy_kernel(n: usize, m: usize, ctx: &FglContext) -> Result<CauchyKernel> {
    let jt = joint_trunc(ctx.trunc)?;
    let vars = VarSet::standard(n, 0, m, false)?;
    let xdeg = fam_degree(&vars, Family::X);
    let mut acc = TruncSeries::one(&vars, jt);
    for i in 1..=n as i32 {
        for j in 1..=m as i32 {
            let f = kernel_factor(ctx, &vars, jt, Var::x(i), Var::y(j))?;
            acc = acc.mul(&f)?.filter(|mo| xdeg(mo) <= ctx.trunc);
        }
    }
    Ok(CauchyKernel { n, m, trunc: ctx.trunc, series: acc })
}

/// Strict partitions of size at most `d`, ordered by size then reverse lex.
pub fn strict_order(d: u32) -> Vec<StrictPartition> {
    let mut v = Vec::new();
    for k in 0..=d {
        let mut s = StrictPartition::all(k);
        s.sort_by(|a, b| b.parts().cmp(a.parts()));
        v.extend(s);
    }
    v
}

/// Largest length of a strict partition of size at most `d`.
pub fn max_strict_len(d: u32) -> usize {
    let mut l = 0;
    while (l + 1) * (l + 2) / 2 <= d as usize {
        l += 1;
    }
    l.max(1)
}

fn exps(lambda: &StrictPartition, n: usize) -> Option<Vec<u32>> {
    if lambda.len() > n {
        return None;
    }
    Some((1..=n).map(|i| lambda.part(i)).collect())
}

/// Writes `f = sum_lambda B_lambda c_lambda` where `B_lambda` is a series in
/// the first `n` variables of `fam` whose coefficient at `fam^lambda` is
/// `pivot(lambda)` and vanishes at `fam^mu` for every `mu` later in `order`.
/// Coefficients are series in the other variables. Fails with a membership
/// error if a residual remains.
pub fn triangular_solve(
    f: &TruncSeries,
    fam: Family,
    n: usize,
    order: &[StrictPartition],
    basis: &mut dyn FnMut(&StrictPartition) -> Result<TruncSeries>,
    pivot: &dyn Fn(&StrictPartition) -> Int,
) -> Result<Vec<(StrictPartition, TruncSeries)>> {
    let mut rem = f.clone();
    let mut out = Vec::new();
    for lam in order {
        let Some(e) = exps(lam, n) else { continue };
        let groups = split_by_family(&rem, fam, n)?;
        let Some(c) = groups.get(&e) else { continue };
        let c = c.exact_div_int(&pivot(lam)).map_err(|err| {
            Error::Internal(format!("pivot division failed at {:?}: {err}", lam.parts()))
        })?;
        let b = basis(lam)?;
        rem = rem.sub(&b.mul(&c)?)?;
        out.push((lam.clone(), c));
    }
    if let Some(t) = rem.terms().first() {
        return Err(Error::Membership(format!(
            "nonzero residual with {} terms, first at {}",
            rem.terms().len(),
            rem.fmt_mono(t.0)
        )));
    }
    Ok(out)
}

/// Which dual basis.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum DualKind {
    /// `phat_lambda`, dual to `Q^L_lambda`.
    PHat,
    /// `qhat_lambda`, dual to `P^L_lambda`.
    QHat,
}

type DualMap = BTreeMap<Vec<u32>, TruncSeries>;

fn dual_cache() -> &'static Mutex<HashMap<(String, u32, DualKind), Arc<DualMap>>> {
    static C: OnceLock<Mutex<HashMap<(String, u32, DualKind), Arc<DualMap>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// All dual functions of size at most `ctx.trunc`, keyed by parts, as
/// polynomials in `y_1..y_trunc`. Uses `trunc` variables on both sides.
pub fn dual_basis(kind: DualKind, ctx: &FglContext) -> Result<Arc<DualMap>> {
    let key = (ctx.spec.key(), ctx.trunc, kind);
    if let Some(m) = dual_cache().lock().unwrap().get(&key) {
        return Ok(m.clone());
    }
    let d = ctx.trunc;
    let n = d.max(1) as usize;
    let k = cauchy_kernel(n, n, ctx)?;
    let vars = k.series.vars().clone();
    let jt = k.series.trunc();
    let mut basis = |lam: &StrictPartition| -> Result<TruncSeries> {
        let s = match kind {
            DualKind::PHat => q_l(lam, n, BMode::Zero, ctx)?,
            DualKind::QHat => p_l(lam, n, BMode::Zero, ctx)?,
        };
        Ok(s.relabel(&vars, Some)?.retrunc(jt))
    };
    let pivot = |lam: &StrictPartition| match kind {
        DualKind::PHat => Int::from(1i64 << lam.len()),
        DualKind::QHat => Int::ONE,
    };
    let sol = triangular_solve(&k.series, Family::X, n, &strict_order(d), &mut basis, &pivot)?;
    let y = y_vars(n)?;
    let mut map = DualMap::new();
    for (lam, c) in sol {
        map.insert(lam.parts().to_vec(), onto(&c, &y)?.truncate(d));
    }
    let map = Arc::new(map);
    dual_cache().lock().unwrap().insert(key, map.clone());
    Ok(map)
}

fn dual_of(kind: DualKind, lambda: &StrictPartition, ctx: &FglContext) -> Result<TruncSeries> {
    if lambda.size() > ctx.trunc {
        return Err(Error::Argument(format!("|{:?}| exceeds truncation {}", lambda.parts(), ctx.trunc)));
    }
    let map = dual_basis(kind, ctx)?;
    Ok(match map.get(lambda.parts()) {
        Some(s) => s.clone(),
        None => TruncSeries::zero(&y_vars(ctx.trunc.max(1) as usize)?, ctx.trunc),
    })
}

/// `phat^L_lambda(y)`, with `Delta = sum Q^L_lambda(x) phat^L_lambda(y)`.
pub fn dual_phat(lambda: &StrictPartition, ctx: &FglContext) -> Result<TruncSeries> {
    dual_of(DualKind::PHat, lambda, ctx)
}

/// `qhat^L_lambda(y)`, with `Delta = sum P^L_lambda(x) qhat^L_lambda(y)`.
pub fn dual_qhat(lambda: &StrictPartition, ctx: &FglContext) -> Result<TruncSeries> {
    dual_of(DualKind::QHat, lambda, ctx)
}

/// Coproduct of `qhat_k`: `sum_{i+j=k} qhat_i (x) qhat_j`, as
/// `(left index, right index, coefficient)`.
pub fn coproduct_qhat(k: u32) -> Vec<(u32, u32, CoeffPoly)> {
    (0..=k).map(|i| (i, k - i, CoeffPoly::one())).collect()
}

/// Coproduct of `phat_l`: `phat_l (x) 1 + 1 (x) phat_l + sum alpha_{k+1} phat_i (x) phat_j`
/// over `i + j + k = l`, `i, j >= 1`, with `[2](t) = sum alpha_m t^m`.
pub fn coproduct_phat(l: u32, ctx: &FglContext) -> Vec<(u32, u32, CoeffPoly)> {
    let alpha = ctx.with_trunc(l.max(1)).n_series_coeffs(2);
    let mut acc: BTreeMap<(u32, u32), CoeffPoly> = BTreeMap::new();
    acc.insert((l, 0), CoeffPoly::one());
    acc.insert((0, l), CoeffPoly::one());
    for i in 1..l {
        for j in 1..=l - i {
            let k = l - i - j;
            if let Some(a) = alpha.get(k as usize + 1) {
                if !a.is_zero() {
                    let e = acc.entry((i, j)).or_default();
                    *e = e.add(a);
                }
            }
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|((i, j), c)| (i, j, c)).collect()
}

/// Pair label `mu ++ [0] ++ nu` used by tensor expansions.
pub fn pair_label(mu: &[u32], nu: &[u32]) -> Vec<u32> {
    let mut v = mu.to_vec();
    v.push(0);
    v.extend_from_slice(nu);
    v
}

/// Structure constants of `Q^L_lambda(x, x')` (or `P^L_lambda` when `p`)
/// in the basis `Q^L_mu(x) Q^L_nu(x')`, with `n1`, `n2` variables per side.
pub fn coproduct_schur(lambda: &StrictPartition, n1: usize, n2: usize, p: bool, ctx: &FglContext) -> Result<Expansion> {
    let d = ctx.trunc;
    let f = if p { p_l(lambda, n1 + n2, BMode::Zero, ctx)? } else { q_l(lambda, n1 + n2, BMode::Zero, ctx)? };
    let vars = VarSet::standard(n1, 0, n2, false)?;
    let f = f.relabel(&vars, |v| {
        Some(if v.idx as usize > n1 { Var::y(v.idx - n1 as i32) } else { v })
    })?;
    let pivot = |lam: &StrictPartition| if p { Int::ONE } else { Int::from(1i64 << lam.len()) };
    let order = strict_order(d);
    let schur = |lam: &StrictPartition, n: usize| if p { p_l(lam, n, BMode::Zero, ctx) } else { q_l(lam, n, BMode::Zero, ctx) };
    let mut right = |lam: &StrictPartition| -> Result<TruncSeries> {
        schur(lam, n2)?.relabel(&vars, |v| Some(Var::y(v.idx)))
    };
    let outer = triangular_solve(&f, Family::Y, n2, &order, &mut right, &pivot)?;
    let mut out = Expansion::new(if p { Basis::PL } else { Basis::QL });
    for (nu, c) in outer {
        // c is only known up to x-degree d - |nu|
        let c = c.truncate(d - nu.size());
        let t = c.trunc();
        let mut left = |lam: &StrictPartition| -> Result<TruncSeries> { Ok(schur(lam, n1)?.relabel(&vars, Some)?.truncate(t)) };
        let inner = triangular_solve(&c, Family::X, n1, &order, &mut left, &pivot)?;
        for (mu, cc) in inner {
            out.push(pair_label(mu.parts(), nu.parts()), ExpCoeff::Ring(cc.constant_term()));
        }
    }
    out.entries.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// `Q^L` coproduct constants `c^lambda_{mu nu}`.
pub fn coproduct_ql(lambda: &StrictPartition, n1: usize, n2: usize, ctx: &FglContext) -> Result<Expansion> {
    coproduct_schur(lambda, n1, n2, false, ctx)
}

/// Expansion of `f` in one of the bases `QL`, `PL` (`f` over `x_1..x_n`, at
/// `b = 0`) or `PHat`, `QHat` (`f` over `y_1..y_trunc`). Coefficients are
/// Lazard-ring elements; a nonzero residual is a membership error.
pub fn product_in_basis(f: &TruncSeries, basis: Basis, ctx: &FglContext) -> Result<Expansion> {
    let d = ctx.trunc;
    let vars = f.vars().clone();
    let sol = match basis {
        Basis::QL | Basis::PL => {
            let n = vars.count(Family::X);
            let q = basis == Basis::QL;
            let ctx_f = ctx.with_trunc(f.trunc());
            let mut b = |lam: &StrictPartition| -> Result<TruncSeries> {
                let s = if q { q_l(lam, n, BMode::Zero, &ctx_f)? } else { p_l(lam, n, BMode::Zero, &ctx_f)? };
                s.relabel(&vars, Some)
            };
            let pivot = |lam: &StrictPartition| if q { Int::from(1i64 << lam.len()) } else { Int::ONE };
            triangular_solve(f, Family::X, n, &strict_order(f.trunc()), &mut b, &pivot)?
        }
        Basis::PHat | Basis::QHat => {
            let m = vars.count(Family::Y);
            let kind = if basis == Basis::PHat { DualKind::PHat } else { DualKind::QHat };
            let map = dual_basis(kind, ctx)?;
            if m != d.max(1) as usize || f.vars().len() != m {
                return Err(Error::Shape(format!("expected a series in y_1..y_{d}")));
            }
            let mut order = strict_order(d);
            order.sort_by(|a, b| b.size().cmp(&a.size()).then_with(|| b.parts().cmp(a.parts())));
            let mut b = |lam: &StrictPartition| -> Result<TruncSeries> {
                Ok(map.get(lam.parts()).cloned().unwrap_or_else(|| TruncSeries::zero(&vars, d)).retrunc(f.trunc()))
            };
            // Top parts are classical P (phat) or Q (qhat).
            let pivot = |lam: &StrictPartition| if kind == DualKind::QHat { Int::from(1i64 << lam.len()) } else { Int::ONE };
            triangular_solve_top(f, m, &order, &mut b, &pivot)?
        }
        _ => return Err(Error::Argument(format!("unsupported basis {}", basis.name()))),
    };
    let mut out = Expansion::new(basis);
    for (lam, c) in sol {
        out.push(lam.parts().to_vec(), ExpCoeff::Ring(c.constant_term()));
    }
    Ok(out)
}

/// As [`triangular_solve`] for `y`-polynomials whose basis elements have
/// their pivot in the top degree; the coefficient at `y^lambda` is read
/// from the whole remainder, which has no higher-degree part left.
fn triangular_solve_top(
    f: &TruncSeries,
    m: usize,
    order: &[StrictPartition],
    basis: &mut dyn FnMut(&StrictPartition) -> Result<TruncSeries>,
    pivot: &dyn Fn(&StrictPartition) -> Int,
) -> Result<Vec<(StrictPartition, TruncSeries)>> {
    let mut rem = f.clone();
    let mut out = Vec::new();
    for lam in order {
        let Some(e) = exps(lam, m) else { continue };
        let mono: Vec<(Var, u32)> = e.iter().enumerate().map(|(i, &k)| (Var::y(i as i32 + 1), k)).collect();
        let c = rem.coefficient_of(&mono)?;
        if c.is_zero() {
            continue;
        }
        let c = c.exact_div_int(&pivot(lam)).map_err(|err| {
            Error::Internal(format!("pivot division failed at {:?}: {err}", lam.parts()))
        })?;
        rem = rem.sub(&basis(lam)?.scale(&c))?;
        out.push((lam.clone(), TruncSeries::constant(f.vars(), f.trunc(), &c)));
    }
    if let Some(t) = rem.terms().first() {
        return Err(Error::Membership(format!(
            "nonzero residual with {} terms, first at {}",
            rem.terms().len(),
            rem.fmt_mono(t.0)
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lazard::a_gen;
    use crate::sympoly::expand_in_h;
    use crate::fgl::GenPoly;

    fn a(i: u32, j: u32) -> GenPoly {
        GenPoly::constant(a_gen(i, j).unwrap())
    }

    #[test]
    fn low_qhat_and_phat() {
        let ctx = FglContext::universal(3);
        let q = qhat_list(3, &ctx).unwrap();
        let h1 = GenPoly::gen(1);
        assert_eq!(expand_in_h(&q[1], Family::Y, 3).unwrap(), h1.scale(&CoeffPoly::constant(2)));
        let want = h1.mul(&h1).scale(&CoeffPoly::constant(2)).sub(&a(1, 1).mul(&h1));
        assert_eq!(expand_in_h(&q[2], Family::Y, 3).unwrap(), want);
        let p = phat_list(3, &ctx).unwrap();
        assert_eq!(expand_in_h(&p[1], Family::Y, 3).unwrap(), h1);
        assert_eq!(expand_in_h(&p[2], Family::Y, 3).unwrap(), h1.mul(&h1).sub(&a(1, 1).mul(&h1)));
    }

    #[test]
    fn qhat_relation_low_degrees() {
        let ctx = FglContext::universal(4);
        let q = qhat_list(4, &ctx).unwrap();
        for i in 0..=4 {
            assert!(qhat_relation_defect(i, &q, &ctx).unwrap().is_zero(), "degree {i}");
        }
    }

    #[test]
    fn phat_coproduct_low() {
        let ctx = FglContext::universal(3);
        let c = coproduct_phat(2, &ctx);
        assert!(c.contains(&(1, 1, CoeffPoly::constant(2))));
        assert_eq!(c.len(), 3);
    }

    #[test]
    fn strict_lengths() {
        assert_eq!(max_strict_len(2), 1);
        assert_eq!(max_strict_len(3), 2);
        assert_eq!(max_strict_len(6), 3);
    }
}
